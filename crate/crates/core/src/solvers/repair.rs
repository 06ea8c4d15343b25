use super::{Assignment, Couplings};
use crate::error::{Error, Result};
use crate::qubo::QuboInstance;

/// Turn a raw bit vector into a feasible assignment.
///
/// Nodes are visited in index order. A node with exactly one producer bit
/// keeps it. Otherwise its bits are cleared and the single producer with the
/// lowest conditional energy, given every other node's current bits, is
/// switched on (ties go to the lowest producer id). Later nodes see the
/// repaired bits of earlier ones.
pub fn decode_and_repair(q: &QuboInstance, bits: &[bool]) -> Result<Assignment> {
    if bits.len() != q.num_vars() {
        return Err(Error::DimensionMismatch(format!(
            "bit vector has length {}, instance has {} variables",
            bits.len(),
            q.num_vars()
        )));
    }
    let couplings = Couplings::new(q);
    Ok(repair_with(q, &couplings, bits.to_vec()))
}

pub(crate) fn repair_with(q: &QuboInstance, couplings: &Couplings, mut bits: Vec<bool>) -> Assignment {
    let index = q.index();
    let (n, k) = (index.nodes(), index.producers());
    let mut producer_of = vec![0; n];
    for (i, slot) in producer_of.iter_mut().enumerate() {
        let set: Vec<usize> = (0..k).filter(|&j| bits[index.var(i, j)]).collect();
        if let [only] = set[..] {
            *slot = only;
            continue;
        }
        for j in 0..k {
            bits[index.var(i, j)] = false;
        }
        let mut best = 0;
        let mut best_energy = f64::INFINITY;
        for j in 0..k {
            let e = couplings.field(&bits, index.var(i, j));
            if e < best_energy {
                best_energy = e;
                best = j;
            }
        }
        bits[index.var(i, best)] = true;
        *slot = best;
    }
    Assignment::new(producer_of, k).expect("producers drawn from 0..k")
}
