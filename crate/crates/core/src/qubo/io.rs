//! Coordinate text format for QUBO instances.
//!
//! ```text
//! p qubo <numVars> <numLinear> <numQuad> <offset>
//! <i> <i> <value>        one line per linear term
//! <i> <j> <value>        one line per quadratic term, i < j
//! ```
//!
//! Lines starting with `c` are comments. Values are written in shortest
//! round-trip decimal form, so re-reading is bit-exact. The variable layout
//! lives in a sidecar CSV (`variable,node,producer`) next to the main file.

use std::path::{Path, PathBuf};

use super::{QuboInstance, VarIndex};
use crate::error::{Error, Result};
use crate::util::write_atomic;

pub fn qubo_to_string(q: &QuboInstance) -> String {
    let mut out = format!(
        "p qubo {} {} {} {}\n",
        q.num_vars(),
        q.linear().len(),
        q.quadratic().len(),
        q.offset()
    );
    for (v, c) in q.linear() {
        out.push_str(&format!("{v} {v} {c}\n"));
    }
    for ((a, b), c) in q.quadratic() {
        out.push_str(&format!("{a} {b} {c}\n"));
    }
    out
}

pub fn var_map_to_string(index: VarIndex) -> String {
    let mut out = String::from("variable,node,producer\n");
    for v in 0..index.len() {
        let (node, producer) = index.pair(v);
        out.push_str(&format!("{v},{node},{producer}\n"));
    }
    out
}

/// Sidecar path: `<path>.vars.csv`.
pub fn var_map_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".vars.csv");
    PathBuf::from(s)
}

fn field<T: std::str::FromStr>(path: &Path, line: usize, token: Option<&str>, what: &str) -> Result<T> {
    let token = token.ok_or_else(|| Error::parse(path, line, format!("missing {what}")))?;
    token
        .parse()
        .map_err(|_| Error::parse(path, line, format!("invalid {what} `{token}`")))
}

/// Parse the variable map and check it describes the stacked layout.
pub fn parse_var_map(text: &str, path: &Path) -> Result<VarIndex> {
    let mut pairs = Vec::new();
    for (ln, line) in text.lines().enumerate().skip(1) {
        let line_no = ln + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut it = line.split(',').map(str::trim);
        let v: usize = field(path, line_no, it.next(), "variable")?;
        let node: usize = field(path, line_no, it.next(), "node")?;
        let producer: usize = field(path, line_no, it.next(), "producer")?;
        if it.next().is_some() {
            return Err(Error::parse(path, line_no, "expected `variable,node,producer`"));
        }
        pairs.push((line_no, v, node, producer));
    }
    let n = pairs.iter().map(|p| p.2 + 1).max().unwrap_or(0);
    let k = pairs.iter().map(|p| p.3 + 1).max().unwrap_or(0);
    let index = VarIndex::new(n, k);
    if pairs.len() != index.len() || index.is_empty() {
        return Err(Error::parse(
            path,
            0,
            format!("{} rows do not cover a {n} x {k} variable grid", pairs.len()),
        ));
    }
    let mut seen = vec![false; index.len()];
    for (line_no, v, node, producer) in pairs {
        if v >= index.len() || index.var(node, producer) != v || seen[v] {
            return Err(Error::parse(
                path,
                line_no,
                format!("variable {v} for (node {node}, producer {producer}) breaks the stacked layout"),
            ));
        }
        seen[v] = true;
    }
    Ok(index)
}

pub fn parse_qubo(text: &str, index: VarIndex, path: &Path) -> Result<QuboInstance> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('c'));

    let (hl, header) = lines.next().ok_or_else(|| Error::parse(path, 1, "missing `p qubo` header"))?;
    let mut h = header.split_whitespace();
    if h.next() != Some("p") || h.next() != Some("qubo") {
        return Err(Error::parse(path, hl, "header must start with `p qubo`"));
    }
    let num_vars: usize = field(path, hl, h.next(), "variable count")?;
    let num_linear: usize = field(path, hl, h.next(), "linear count")?;
    let num_quad: usize = field(path, hl, h.next(), "quadratic count")?;
    let offset: f64 = field(path, hl, h.next(), "offset")?;
    if h.next().is_some() {
        return Err(Error::parse(path, hl, "trailing fields in header"));
    }
    if num_vars != index.len() {
        return Err(Error::parse(
            path,
            hl,
            format!("header declares {num_vars} variables, map has {}", index.len()),
        ));
    }

    let mut linear = Vec::new();
    let mut quadratic = Vec::new();
    for (ln, line) in lines {
        let mut it = line.split_whitespace();
        let a: usize = field(path, ln, it.next(), "row index")?;
        let b: usize = field(path, ln, it.next(), "column index")?;
        let c: f64 = field(path, ln, it.next(), "coefficient")?;
        if it.next().is_some() {
            return Err(Error::parse(path, ln, "expected `<i> <j> <value>`"));
        }
        if a >= num_vars || b >= num_vars {
            return Err(Error::parse(path, ln, format!("index outside 0..{num_vars}")));
        }
        if a == b {
            linear.push((a, c));
        } else if a < b {
            quadratic.push(((a, b), c));
        } else {
            return Err(Error::parse(path, ln, format!("quadratic term ({a}, {b}) must have i < j")));
        }
    }
    if linear.len() != num_linear || quadratic.len() != num_quad {
        return Err(Error::parse(
            path,
            hl,
            format!(
                "header declares {num_linear} linear and {num_quad} quadratic terms, found {} and {}",
                linear.len(),
                quadratic.len()
            ),
        ));
    }
    QuboInstance::from_terms(index, linear, quadratic, offset)
}

/// Write the instance and its variable map sidecar.
pub fn export_qubo(q: &QuboInstance, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    write_atomic(path, qubo_to_string(q).as_bytes())?;
    write_atomic(&var_map_path(path), var_map_to_string(q.index()).as_bytes())
}

pub fn import_qubo(path: impl AsRef<Path>) -> Result<QuboInstance> {
    let path = path.as_ref();
    let map_path = var_map_path(path);
    let map_text = std::fs::read_to_string(&map_path).map_err(|e| Error::io(&map_path, e))?;
    let index = parse_var_map(&map_text, &map_path)?;
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_qubo(&text, index, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> &'static Path {
        Path::new("q.qubo")
    }

    #[test]
    fn linear_only_instance() {
        let q = QuboInstance::from_terms(VarIndex::new(2, 1), [(0, 1.5), (1, -2.0)], [], 0.0).unwrap();
        assert_eq!(qubo_to_string(&q), "p qubo 2 2 0 0\n0 0 1.5\n1 1 -2\n");
    }

    #[test]
    fn offset_survives() {
        let q = QuboInstance::from_terms(VarIndex::new(1, 1), [(0, 1.0)], [], 3.25).unwrap();
        let back = parse_qubo(&qubo_to_string(&q), q.index(), p()).unwrap();
        assert_eq!(back.offset(), 3.25);
        assert_eq!(back, q);
    }

    #[test]
    fn comments_and_errors() {
        let idx = VarIndex::new(2, 1);
        let ok = "c generated\np qubo 2 1 1 0.5\n0 0 1\nc mid\n0 1 2\n";
        let q = parse_qubo(ok, idx, p()).unwrap();
        assert_eq!(q.energy(&[true, true]).unwrap(), 3.5);

        let err = parse_qubo("p qubo 2 1 0 0\n0 0 x\n", idx, p()).unwrap_err();
        assert_eq!(err.to_string(), "q.qubo:2: invalid coefficient `x`");
        let err = parse_qubo("p qubo 2 0 1 0\n1 0 1\n", idx, p()).unwrap_err();
        assert!(err.to_string().contains("q.qubo:2:"), "{err}");
        assert!(parse_qubo("p qubo 2 1 0 0\n", idx, p()).is_err());
        assert!(parse_qubo("p qubo 3 0 0 0\n", idx, p()).is_err());
        assert!(parse_qubo("q qubo 2 0 0 0\n", idx, p()).is_err());
        assert!(parse_qubo("p qubo 2 0 1 0\n0 5 1\n", idx, p()).is_err());
    }

    #[test]
    fn var_map_round_trip() {
        let idx = VarIndex::new(3, 2);
        assert_eq!(parse_var_map(&var_map_to_string(idx), p()).unwrap(), idx);
        let broken = "variable,node,producer\n0,0,0\n1,0,1\n2,1,0\n3,1,1\n";
        assert!(parse_var_map(broken, p()).is_err());
    }

    #[test]
    fn sidecar_path() {
        assert_eq!(var_map_path(Path::new("a/b.qubo")), PathBuf::from("a/b.qubo.vars.csv"));
    }
}
