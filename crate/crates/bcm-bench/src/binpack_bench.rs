//! Balls-into-bins microbenchmarks: both placement algorithms on identical
//! weight samples, mean and standard deviation of the discrepancy per cell.

use std::fmt::Write as _;

use bcm_core::binpack::{self, Algorithm, Ball, BinState};

use crate::seeds::{self, stream};
use crate::RunError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinpackCell {
    pub balls: usize,
    pub bins: usize,
    pub greedy_mean: f64,
    pub greedy_std: f64,
    pub sorted_mean: f64,
    pub sorted_std: f64,
    pub reps: usize,
}

pub const BINPACK_CSV_HEADER: &str = "m,n_bins,algorithm,mean_disc,std_disc,reps,master_seed";

/// For each `(m, bins)` cell, draws `reps` weight samples from uniform
/// `[0, 1]` and places each sample with both algorithms.
pub fn run_binpack_bench(
    m_list: &[usize],
    bins_list: &[usize],
    reps: usize,
    master_seed: u64,
) -> Result<Vec<BinpackCell>, RunError> {
    use rand::{Rng, SeedableRng};
    if m_list.is_empty() || bins_list.is_empty() || reps == 0 {
        return Err(RunError::Core(bcm_core::Error::InvalidParameter(
            "binpack benchmark needs non-empty size lists and reps >= 1",
        )));
    }
    let mut cells = Vec::new();
    for &m in m_list {
        for &bins in bins_list {
            if bins == 0 {
                return Err(RunError::Core(bcm_core::Error::InvalidParameter(
                    "bin count must be at least 1",
                )));
            }
            let empty: Vec<BinState> = vec![BinState::new(); bins];
            let mut greedy = Vec::with_capacity(reps);
            let mut sorted = Vec::with_capacity(reps);
            for rep in 0..reps {
                let seed = seeds::child_seed(
                    master_seed,
                    &[stream::BINPACK, m as u64, bins as u64, rep as u64],
                );
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                let balls: Vec<Ball> = (0..m)
                    .map(|id| Ball {
                        id,
                        weight: rng.gen_range(0.0..1.0),
                    })
                    .collect();
                let (_, trace) = binpack::greedy_place(&balls, &empty)?;
                greedy.push(trace.final_discrepancy());
                let (_, trace) = binpack::sorted_greedy_place(&balls, &empty)?;
                sorted.push(trace.final_discrepancy());
            }
            let (greedy_mean, greedy_std) = mean_std(&greedy);
            let (sorted_mean, sorted_std) = mean_std(&sorted);
            cells.push(BinpackCell {
                balls: m,
                bins,
                greedy_mean,
                greedy_std,
                sorted_mean,
                sorted_std,
                reps,
            });
        }
    }
    Ok(cells)
}

pub fn render_binpack_csv(cells: &[BinpackCell], master_seed: u64) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", BINPACK_CSV_HEADER);
    for cell in cells {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            cell.balls,
            cell.bins,
            Algorithm::Greedy.name(),
            cell.greedy_mean,
            cell.greedy_std,
            cell.reps,
            master_seed
        );
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            cell.balls,
            cell.bins,
            Algorithm::SortedGreedy.name(),
            cell.sorted_mean,
            cell.sorted_std,
            cell.reps,
            master_seed
        );
    }
    out
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_ball_gives_identical_algorithms() {
        let cells = run_binpack_bench(&[1], &[2, 4], 50, 3).unwrap();
        for cell in cells {
            assert_eq!(cell.greedy_mean, cell.sorted_mean);
            assert_eq!(cell.greedy_std, cell.sorted_std);
        }
    }

    #[test]
    fn benchmark_is_reproducible() {
        let a = run_binpack_bench(&[16, 32], &[2], 20, 11).unwrap();
        let b = run_binpack_bench(&[16, 32], &[2], 20, 11).unwrap();
        assert_eq!(a, b);
        let csv = render_binpack_csv(&a, 11);
        assert!(csv.starts_with(BINPACK_CSV_HEADER));
        assert_eq!(csv.lines().count(), 1 + 2 * a.len());
    }

    #[test]
    fn empty_lists_are_rejected() {
        assert!(run_binpack_bench(&[], &[2], 5, 0).is_err());
        assert!(run_binpack_bench(&[4], &[], 5, 0).is_err());
        assert!(run_binpack_bench(&[4], &[2], 0, 0).is_err());
    }
}
