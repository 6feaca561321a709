//! Wall-clock timing of the two placement algorithms on the two-bin
//! problem.

use std::fmt;
use std::time::{Duration, Instant};

use bcm_core::binpack::{self, Ball, BinState};

use crate::seeds::{self, stream};
use crate::RunError;

/// Warm-up repetitions excluded from the averages.
pub const WARMUP_REPS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimingReport {
    pub balls: usize,
    /// Measured repetitions (after warm-up).
    pub reps: usize,
    pub greedy_mean: Duration,
    pub sorted_mean: Duration,
    /// `sorted_mean - greedy_mean` in seconds; may be slightly negative on
    /// noisy hardware.
    pub sort_overhead_seconds: f64,
    /// Overhead relative to the total `SortedGreedy` runtime.
    pub sort_overhead_fraction: f64,
}

impl fmt::Display for TimingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "two-bin timing, m = {} balls, {} measured reps",
            self.balls, self.reps
        )?;
        writeln!(f, "  greedy        mean {:>12.3?}", self.greedy_mean)?;
        writeln!(f, "  sorted_greedy mean {:>12.3?}", self.sorted_mean)?;
        writeln!(
            f,
            "  sorting overhead   {:>12.6} s ({:.3}% of sorted_greedy runtime)",
            self.sort_overhead_seconds,
            self.sort_overhead_fraction * 100.0
        )
    }
}

/// Measures both algorithms on `reps` fresh uniform `[0, 1]` samples with a
/// monotonic clock; the first [`WARMUP_REPS`] repetitions are discarded.
pub fn run_timing(m: usize, reps: usize, master_seed: u64) -> Result<TimingReport, RunError> {
    use rand::{Rng, SeedableRng};
    if m == 0 || reps == 0 {
        return Err(RunError::Core(bcm_core::Error::InvalidParameter(
            "timing needs m >= 1 and reps >= 1",
        )));
    }
    let warmup = if reps > WARMUP_REPS { WARMUP_REPS } else { 0 };
    let bins = [BinState::new(), BinState::new()];
    let mut greedy_total = Duration::ZERO;
    let mut sorted_total = Duration::ZERO;
    let mut measured = 0usize;
    for rep in 0..reps {
        let seed = seeds::child_seed(master_seed, &[stream::BINPACK, m as u64, rep as u64]);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let balls: Vec<Ball> = (0..m)
            .map(|id| Ball {
                id,
                weight: rng.gen_range(0.0..1.0),
            })
            .collect();

        let start = Instant::now();
        let greedy_result = binpack::greedy_place(&balls, &bins)?;
        let greedy_elapsed = start.elapsed();

        let start = Instant::now();
        let sorted_result = binpack::sorted_greedy_place(&balls, &bins)?;
        let sorted_elapsed = start.elapsed();

        // Keep the results alive so the placements cannot be optimized out.
        std::hint::black_box((&greedy_result, &sorted_result));

        if rep >= warmup {
            greedy_total += greedy_elapsed;
            sorted_total += sorted_elapsed;
            measured += 1;
        }
    }
    let greedy_mean = greedy_total / measured as u32;
    let sorted_mean = sorted_total / measured as u32;
    let overhead = sorted_mean.as_secs_f64() - greedy_mean.as_secs_f64();
    let fraction = if sorted_mean.is_zero() {
        0.0
    } else {
        overhead / sorted_mean.as_secs_f64()
    };
    Ok(TimingReport {
        balls: m,
        reps: measured,
        greedy_mean,
        sorted_mean,
        sort_overhead_seconds: overhead,
        sort_overhead_fraction: fraction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_ball_has_negligible_sorting_overhead() {
        let report = run_timing(1, 20, 1).unwrap();
        assert_eq!(report.reps, 15);
        assert!(report.sort_overhead_seconds.abs() < 1e-3);
    }

    #[test]
    fn large_instance_sorting_overhead_stays_under_two_milliseconds() {
        // Sorting 2^13 floats has to stay far below the couple of
        // milliseconds that would make it matter next to a balancing round.
        let report = run_timing(1 << 13, 40, 1).unwrap();
        assert!(
            report.sort_overhead_seconds < 2e-3,
            "sorting overhead {} s reached the 2 ms budget",
            report.sort_overhead_seconds
        );
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(run_timing(0, 10, 1).is_err());
        assert!(run_timing(8, 0, 1).is_err());
    }

    #[test]
    fn runtime_grows_no_worse_than_m_log_m() {
        // Quadrupling m predicts a ~4.7x runtime under m log m and 16x under
        // m^2; the threshold of 8 separates the two with headroom for timer
        // noise.
        let small = run_timing(4096, 30, 2).unwrap();
        let large = run_timing(4 * 4096, 30, 2).unwrap();
        let ratio = large.sorted_mean.as_secs_f64() / small.sorted_mean.as_secs_f64();
        assert!(
            ratio < 8.0,
            "sorted_greedy runtime grew {ratio:.1}x on a 4x input"
        );
    }
}
