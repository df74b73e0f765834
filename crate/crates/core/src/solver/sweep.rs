use alloc::vec::Vec;

use super::{solve, SolveReport, SolverOptions};
use crate::lattice::intervals;
use crate::linalg::DensityMatrix;
use crate::marginals::constraints_from_state;
use crate::Result;

#[derive(Debug, Clone)]
pub struct SweepEntry {
    pub window: usize,
    pub report: Result<SolveReport>,
}

/// One reconstruction per interval length. Failures are kept per entry.
pub fn reconstruction_entropy_sweep(rho: &DensityMatrix, windows: &[usize], options: &SolverOptions) -> Vec<SweepEntry> {
    let mut sorted = windows.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    sorted
        .into_iter()
        .map(|window| {
            let report = intervals(rho.layout(), window)
                .and_then(|regions| constraints_from_state(rho, &regions))
                .and_then(|cs| solve(&cs, options));
            SweepEntry { window, report }
        })
        .collect()
}

/// `S_rec(R) + slack ≥ S_rec(R')` for every solved pair `R < R'`.
pub fn is_monotone(values: &[(usize, f64)], slack: f64) -> bool {
    values
        .iter()
        .enumerate()
        .all(|(i, &(r, s))| values[i + 1..].iter().all(|&(r2, s2)| r2 <= r || s + slack >= s2))
}
