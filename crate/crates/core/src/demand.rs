//! Consumer demand profiles and the static node weights derived from them.
//!
//! Each consumer is represented by its peak demand over the profile, scaled
//! so that all weights sum to one. Profiles are read from CSV: a header row
//! of node labels followed by one row per timestep.

use std::f64::consts::TAU;
use std::path::Path;

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Topology;
use crate::util::write_atomic;

/// Per-node demand time series, `timesteps x nodes`.
#[derive(Debug, Clone, PartialEq)]
pub struct DemandMatrix {
    labels: Vec<String>,
    values: Array2<f64>,
}

impl DemandMatrix {
    pub fn new(labels: Vec<String>, values: Array2<f64>) -> Result<Self> {
        let (nt, n) = values.dim();
        if labels.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for {n} demand columns",
                labels.len()
            )));
        }
        if nt == 0 || n == 0 {
            return Err(Error::InvalidDemand(format!("empty demand matrix ({nt}x{n})")));
        }
        if let Some(((t, i), v)) = values.indexed_iter().find(|(_, v)| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidDemand(format!(
                "node {} timestep {t}: demand {v} is not a finite nonnegative number",
                labels[i]
            )));
        }
        Ok(DemandMatrix { labels, values })
    }

    /// Columns labeled `0..n`.
    pub fn from_values(values: Array2<f64>) -> Result<Self> {
        let labels = (0..values.ncols()).map(|i| i.to_string()).collect();
        DemandMatrix::new(labels, values)
    }

    pub fn timesteps(&self) -> usize {
        self.values.nrows()
    }

    pub fn node_count(&self) -> usize {
        self.values.ncols()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    /// Reorder columns to follow the topology's node order, matching each
    /// node's label (or index, for unlabeled nodes) against the header.
    pub fn align_to(&self, topo: &Topology) -> Result<DemandMatrix> {
        if topo.node_count() != self.node_count() {
            return Err(Error::DimensionMismatch(format!(
                "topology has {} nodes but demand data has {} columns",
                topo.node_count(),
                self.node_count()
            )));
        }
        let mut order = Vec::with_capacity(self.node_count());
        for i in 0..topo.node_count() {
            let label = topo.label(i);
            let col = self
                .labels
                .iter()
                .position(|l| *l == label)
                .ok_or_else(|| Error::DimensionMismatch(format!("no demand column for node {i} ({label})")))?;
            order.push(col);
        }
        let values = self.values.select(ndarray::Axis(1), &order);
        let labels = order.iter().map(|&c| self.labels[c].clone()).collect();
        Ok(DemandMatrix { labels, values })
    }

    pub fn scaled(&self, factor: f64) -> Result<DemandMatrix> {
        DemandMatrix::new(self.labels.clone(), &self.values * factor)
    }
}

/// Static consumer weights: positive, summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub const SUM_TOLERANCE: f64 = 1e-12;

    pub fn new(w: Vec<f64>) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::InvalidDemand("empty weight vector".into()));
        }
        if let Some((i, v)) = w.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::InvalidDemand(format!("weight of node {i} is {v}, must be > 0")));
        }
        let sum: f64 = w.iter().sum();
        if (sum - 1.0).abs() > Self::SUM_TOLERANCE {
            return Err(Error::InvalidDemand(format!("weights sum to {sum}, expected 1")));
        }
        Ok(WeightVector(w))
    }

    pub fn uniform(n: usize) -> Self {
        WeightVector(vec![1.0 / n as f64; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Peak demand of every node divided by the sum of peaks.
pub fn compute_weights(d: &DemandMatrix) -> Result<WeightVector> {
    let peaks: Vec<f64> = d
        .values
        .columns()
        .into_iter()
        .map(|col| col.iter().copied().fold(0.0, f64::max))
        .collect();
    if let Some(i) = peaks.iter().position(|p| *p <= 0.0) {
        return Err(Error::InvalidDemand(format!(
            "node {} has zero demand at every timestep",
            d.labels[i]
        )));
    }
    let total: f64 = peaks.iter().sum();
    let mut w: Vec<f64> = peaks.iter().map(|p| p / total).collect();
    // Rounding can leave the sum a few ulps off one; fold the residue into
    // the largest entry, where it is relatively smallest.
    let residue = 1.0 - w.iter().sum::<f64>();
    if residue != 0.0 {
        let largest = (0..w.len())
            .max_by(|&a, &b| w[a].total_cmp(&w[b]))
            .expect("non-empty");
        w[largest] += residue;
    }
    WeightVector::new(w)
}

fn parse_error(path: &Path, line: usize, message: String) -> Error {
    Error::parse(path, line, message)
}

/// Read a demand CSV. Line numbers in errors are 1-based file lines.
pub fn load_demands(path: impl AsRef<Path>) -> Result<DemandMatrix> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_demands(file, path)
}

pub fn read_demands<R: std::io::Read>(reader: R, path: &Path) -> Result<DemandMatrix> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let labels: Vec<String> = rdr
        .headers()
        .map_err(|e| parse_error(path, 1, e.to_string()))?
        .iter()
        .map(str::to_owned)
        .collect();
    if labels.is_empty() || labels.iter().all(String::is_empty) {
        return Err(parse_error(path, 1, "missing header row of node labels".into()));
    }
    let n = labels.len();
    let mut flat = Vec::new();
    let mut rows = 0;
    for (r, record) in rdr.records().enumerate() {
        let line = r + 2;
        let record = record.map_err(|e| parse_error(path, line, e.to_string()))?;
        if record.len() != n {
            return Err(parse_error(
                path,
                line,
                format!("expected {n} fields, found {}", record.len()),
            ));
        }
        for (c, cell) in record.iter().enumerate() {
            let v: f64 = cell.parse().map_err(|_| {
                parse_error(path, line, format!("column {} ({}): `{cell}` is not a number", c + 1, labels[c]))
            })?;
            if !(v.is_finite() && v >= 0.0) {
                return Err(parse_error(
                    path,
                    line,
                    format!("column {} ({}): demand {v} must be finite and nonnegative", c + 1, labels[c]),
                ));
            }
            flat.push(v);
        }
        rows += 1;
    }
    if rows == 0 {
        return Err(parse_error(path, 2, "no timestep rows".into()));
    }
    let values = Array2::from_shape_vec((rows, n), flat).expect("row lengths checked");
    DemandMatrix::new(labels, values)
}

pub fn demands_to_csv(d: &DemandMatrix) -> String {
    let mut out = d.labels.join(",");
    out.push('\n');
    for row in d.values.rows() {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn save_demands(d: &DemandMatrix, path: impl AsRef<Path>) -> Result<()> {
    write_atomic(path.as_ref(), demands_to_csv(d).as_bytes())
}

/// `node,weight` CSV, one row per node.
pub fn weights_to_csv(labels: &[String], w: &WeightVector) -> String {
    let mut out = String::from("node,weight\n");
    for (label, v) in labels.iter().zip(w.as_slice()) {
        out.push_str(&format!("{label},{v}\n"));
    }
    out
}

pub fn load_weights(path: impl AsRef<Path>) -> Result<(Vec<String>, WeightVector)> {
    let path = path.as_ref();
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| parse_error(path, 1, e.to_string()))?;
    let mut labels = Vec::new();
    let mut w = Vec::new();
    for (r, record) in rdr.records().enumerate() {
        let line = r + 2;
        let record = record.map_err(|e| parse_error(path, line, e.to_string()))?;
        if record.len() != 2 {
            return Err(parse_error(path, line, "expected `node,weight`".into()));
        }
        let v: f64 = record[1]
            .parse()
            .map_err(|_| parse_error(path, line, format!("`{}` is not a number", &record[1])))?;
        labels.push(record[0].to_owned());
        w.push(v);
    }
    let w = WeightVector::new(w).map_err(|e| parse_error(path, 0, e.to_string()))?;
    Ok((labels, w))
}

/// Reorder weights read from file to the topology's node order.
pub fn align_weights(labels: &[String], w: &WeightVector, topo: &Topology) -> Result<WeightVector> {
    if labels.len() != topo.node_count() {
        return Err(Error::DimensionMismatch(format!(
            "topology has {} nodes but {} weights were given",
            topo.node_count(),
            labels.len()
        )));
    }
    let mut out = Vec::with_capacity(labels.len());
    for i in 0..topo.node_count() {
        let label = topo.label(i);
        let pos = labels
            .iter()
            .position(|l| *l == label)
            .ok_or_else(|| Error::DimensionMismatch(format!("no weight for node {i} ({label})")))?;
        out.push(w.as_slice()[pos]);
    }
    Ok(WeightVector(out))
}

/// Distribution of consumer peak sizes for [`synthetic_profiles`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConsumerSizes {
    /// `spread^U` with `U` uniform on `[0, 1)`: sizes within a factor
    /// `spread` of each other.
    LogUniform { spread: f64 },
    /// Pareto with unit scale and the given tail index; small indices give a
    /// few consumers that dominate the network.
    Pareto { shape: f64 },
}

impl ConsumerSizes {
    fn validate(&self) -> Result<()> {
        match *self {
            ConsumerSizes::LogUniform { spread } if !(spread >= 1.0 && spread.is_finite()) => {
                Err(Error::InvalidParameter(format!("spread {spread} must be finite and >= 1")))
            }
            ConsumerSizes::Pareto { shape } if !(shape > 0.0 && shape.is_finite()) => {
                Err(Error::InvalidParameter(format!("pareto shape {shape} must be finite and positive")))
            }
            _ => Ok(()),
        }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        let u: f64 = rng.random();
        match *self {
            ConsumerSizes::LogUniform { spread } => spread.powf(u),
            ConsumerSizes::Pareto { shape } => (1.0 - u).powf(-1.0 / shape),
        }
    }
}

/// Seeded hourly-style profiles: a yearly heating season cosine, a daily
/// cycle and multiplicative noise, scaled per consumer by a size drawn from
/// `sizes`.
pub fn synthetic_profiles(labels: Vec<String>, timesteps: usize, sizes: ConsumerSizes, seed: u64) -> Result<DemandMatrix> {
    sizes.validate()?;
    let n = labels.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale: Vec<f64> = (0..n).map(|_| sizes.sample(&mut rng)).collect();
    let phase: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * TAU).collect();
    let mut values = Array2::zeros((timesteps, n));
    for t in 0..timesteps {
        let season = 0.6 + 0.4 * (TAU * t as f64 / timesteps.max(1) as f64).cos();
        for i in 0..n {
            let daily = 1.0 + 0.2 * (TAU * t as f64 / 24.0 + phase[i]).sin();
            let noise = 0.9 + 0.2 * rng.random::<f64>();
            values[[t, i]] = scale[i] * season * daily * noise;
        }
    }
    DemandMatrix::new(labels, values)
}

#[cfg(test)]
mod tests {
    use ndarray::array;

    use super::*;

    fn matrix(values: Array2<f64>) -> DemandMatrix {
        DemandMatrix::from_values(values).unwrap()
    }

    #[test]
    fn peaks_three_and_one() {
        let d = matrix(array![[1.0, 1.0], [3.0, 0.5]]);
        assert_eq!(compute_weights(&d).unwrap().as_slice(), &[0.75, 0.25]);
    }

    #[test]
    fn identical_profiles_are_uniform() {
        let col = [2.0, 5.0, 1.0];
        let d = matrix(Array2::from_shape_fn((3, 4), |(t, _)| col[t]));
        assert_eq!(compute_weights(&d).unwrap().as_slice(), &[0.25; 4]);
    }

    #[test]
    fn zero_column_is_named() {
        let d = DemandMatrix::new(vec!["a".into(), "b".into()], array![[1.0, 0.0], [2.0, 0.0]]).unwrap();
        let err = compute_weights(&d).unwrap_err();
        assert!(err.to_string().contains("node b"), "{err}");
    }

    #[test]
    fn negative_value_rejected() {
        assert!(DemandMatrix::from_values(array![[1.0, -1.0]]).is_err());
    }

    #[test]
    fn parse_small_csv() {
        let d = read_demands("a,b\n1,2\n3,4.5\n".as_bytes(), Path::new("d.csv")).unwrap();
        assert_eq!((d.timesteps(), d.node_count()), (2, 2));
        assert_eq!(d.values()[[1, 1]], 4.5);
        assert_eq!(d.labels(), &["a", "b"]);
    }

    #[test]
    fn negative_cell_location() {
        let err = read_demands("a,b\n1,2\n3,-4\n".as_bytes(), Path::new("d.csv")).unwrap_err();
        let msg = err.to_string();
        assert!(msg.starts_with("d.csv:3:") && msg.contains("column 2 (b)"), "{msg}");
    }

    #[test]
    fn ragged_and_non_numeric_rows() {
        let err = read_demands("a,b\n1,2\n3\n".as_bytes(), Path::new("d.csv")).unwrap_err();
        assert!(err.to_string().contains("d.csv:3: expected 2 fields"), "{err}");
        let err = read_demands("a,b\n1,x\n".as_bytes(), Path::new("d.csv")).unwrap_err();
        assert!(err.to_string().contains("d.csv:2: column 2 (b): `x`"), "{err}");
    }

    #[test]
    fn align_reorders_by_label() {
        let topo = crate::graph::Topology::new(
            vec![
                crate::graph::Node { label: Some("x".into()), position: None },
                crate::graph::Node { label: Some("y".into()), position: None },
            ],
            vec![],
        )
        .unwrap();
        let d = DemandMatrix::new(vec!["y".into(), "x".into()], array![[1.0, 2.0]]).unwrap();
        let a = d.align_to(&topo).unwrap();
        assert_eq!(a.labels(), &["x", "y"]);
        assert_eq!(a.values(), &array![[2.0, 1.0]]);

        let bad = DemandMatrix::new(vec!["y".into(), "z".into()], array![[1.0, 2.0]]).unwrap();
        assert!(bad.align_to(&topo).is_err());
    }

    #[test]
    fn weight_vector_invariants() {
        assert!(WeightVector::new(vec![0.5, 0.5]).is_ok());
        assert!(WeightVector::new(vec![0.5, 0.6]).is_err());
        assert!(WeightVector::new(vec![1.0, 0.0]).is_err());
        assert!(WeightVector::new(vec![]).is_err());
    }

    #[test]
    fn synthetic_profiles_are_seeded() {
        let labels: Vec<String> = (0..5).map(|i| format!("c{i}")).collect();
        for sizes in [ConsumerSizes::LogUniform { spread: 4.0 }, ConsumerSizes::Pareto { shape: 1.2 }] {
            let a = synthetic_profiles(labels.clone(), 48, sizes, 3).unwrap();
            let b = synthetic_profiles(labels.clone(), 48, sizes, 3).unwrap();
            assert_eq!(a, b);
            assert!(compute_weights(&a).is_ok());
        }
        assert!(synthetic_profiles(labels.clone(), 4, ConsumerSizes::LogUniform { spread: 0.5 }, 0).is_err());
        assert!(synthetic_profiles(labels, 4, ConsumerSizes::Pareto { shape: 0.0 }, 0).is_err());
    }
}
