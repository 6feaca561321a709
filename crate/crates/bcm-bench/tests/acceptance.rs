//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Criteria that evaluate DLB behaviour share one seeded desk-grid sweep
//! (n in {16, 64}, 10/50/100 loads per node, both algorithms, both mobility
//! models, 50 repetitions), computed once.

use std::sync::OnceLock;

use bcm_bench::binpack_bench::run_binpack_bench;
use bcm_bench::config::{ExperimentConfig, IterationPolicy};
use bcm_bench::sweep::{self, run_sweep_collect, SweepData};
use bcm_core::binpack::{self, Ball, BinState};
use bcm_core::bounds::{continuous_round_bound, min_weight_prob};
use bcm_core::metrics::relative_merit;
use bcm_core::network::round_matrix;
use bcm_core::protocol::{continuous_rounds_to_epsilon, NetworkState, RunOptions};
use bcm_core::{Algorithm, Mobility};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MASTER_SEED: u64 = 42;

fn desk_grid() -> &'static SweepData {
    static GRID: OnceLock<SweepData> = OnceLock::new();
    GRID.get_or_init(|| {
        let mut config = ExperimentConfig::default();
        config.n_list = vec![16, 64];
        config.loads_per_node = vec![10, 50, 100];
        config.reps = 50;
        config.master_seed = MASTER_SEED;
        config.iterations = IterationPolicy::Auto;
        config.track_continuous = true;
        run_sweep_collect(&config).expect("desk grid sweep")
    })
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Weight samples cycling through several distribution families.
fn sample_weights(rng: &mut ChaCha8Rng, m: usize, family: usize) -> Vec<f64> {
    (0..m)
        .map(|_| match family % 5 {
            0 => rng.gen_range(0.0..1.0),
            1 => rng.gen_range(0.0..100.0),
            // Exponential via inverse transform.
            2 => -(1.0 - rng.gen_range(0.0..1.0f64)).ln(),
            // Bimodal with occasional zero-weight balls.
            3 => {
                if rng.gen_bool(0.1) {
                    0.0
                } else if rng.gen_bool(0.5) {
                    rng.gen_range(0.0..1.0)
                } else {
                    rng.gen_range(50.0..100.0)
                }
            }
            _ => 2.5,
        })
        .collect()
}

fn balls(weights: &[f64]) -> Vec<Ball> {
    weights
        .iter()
        .enumerate()
        .map(|(id, &weight)| Ball { id, weight })
        .collect()
}

#[test]
fn criterion_01_binpack_discrepancy_ratio() {
    let cells = run_binpack_bench(&[512], &[2], 1000, 1).expect("binpack bench");
    let cell = &cells[0];
    let ratio = cell.greedy_mean / cell.sorted_mean;
    assert!(
        ratio >= 10.0,
        "criterion 1: mean(Greedy)/mean(SortedGreedy) = {ratio:.2} < 10 at m=512, bins=2"
    );
    println!(
        "[acceptance] criterion 1 (balls-into-bins ratio): PASS — greedy {:.4} / sorted {:.6} = {:.1}x >= 10",
        cell.greedy_mean, cell.sorted_mean, ratio
    );
}

#[test]
fn criterion_02_sorted_greedy_decay() {
    let sizes = [32usize, 64, 128, 256, 512, 1024];
    let cells = run_binpack_bench(&sizes, &[2], 1000, 1).expect("binpack bench");
    let means: Vec<f64> = cells.iter().map(|c| c.sorted_mean).collect();
    for pair in means.windows(2) {
        assert!(
            pair[1] < pair[0],
            "criterion 2: mean discrepancy failed to decrease strictly: {means:?}"
        );
    }
    println!(
        "[acceptance] criterion 2 (SortedGreedy decay over m): PASS — means {:?}",
        means.iter().map(|m| format!("{m:.6}")).collect::<Vec<_>>()
    );
}

#[test]
fn criterion_03_delta_g_property() {
    let mut rng = ChaCha8Rng::seed_from_u64(3_000);
    let instances = 100_000;
    let mut steps = 0u64;
    for i in 0..instances {
        let m = rng.gen_range(1..=64);
        let bins = rng.gen_range(2..=8);
        let weights = sample_weights(&mut rng, m, i % 5);
        let empty: Vec<BinState> = vec![BinState::new(); bins];
        let items = balls(&weights);
        for algorithm in [Algorithm::Greedy, Algorithm::SortedGreedy] {
            let (_, trace) = binpack::place(algorithm, &items, &empty).expect("placement");
            let violations = binpack::verify_delta_g(&trace);
            assert!(
                violations.is_empty(),
                "criterion 3: |dG| <= W violated on instance {i} ({algorithm:?}): {violations:?}"
            );
            steps += trace.len() as u64;
        }
    }
    println!(
        "[acceptance] criterion 3 (per-step |dG| <= W): PASS — {instances} instances, {steps} steps, 0 violations"
    );
}

#[test]
fn criterion_04_gm_lower_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(4_000);
    let instances = 100_000;
    for i in 0..instances {
        let m = rng.gen_range(1..=64);
        let mut weights = sample_weights(&mut rng, m, i % 5);
        let (_, trace) =
            binpack::sorted_greedy_place(&balls(&weights), &[BinState::new(), BinState::new()])
                .expect("placement");
        weights.sort_by(|a, b| b.total_cmp(a));
        let bound = binpack::gm_lower_bound(&weights);
        let realized = trace.final_discrepancy();
        assert!(
            realized >= bound - 1e-9,
            "criterion 4: realized {realized} < bound {bound} on instance {i}"
        );
    }
    println!(
        "[acceptance] criterion 4 (G_m lower bound): PASS — {instances} two-bin SortedGreedy instances, 0 violations"
    );
}

#[test]
fn criterion_05_oracle_dominance() {
    let mut rng = ChaCha8Rng::seed_from_u64(5_000);
    let instances = 1000;
    let mut greedy_final = Vec::with_capacity(instances);
    let mut sorted_final = Vec::with_capacity(instances);
    for i in 0..instances {
        let m = rng.gen_range(1..=12);
        let weights = sample_weights(&mut rng, m, i % 5);
        let optimal = binpack::brute_force_optimal(&weights, 2).expect("oracle");
        let empty = [BinState::new(), BinState::new()];
        let items = balls(&weights);
        let (_, trace) = binpack::greedy_place(&items, &empty).expect("placement");
        assert!(
            trace.final_discrepancy() >= optimal - 1e-9,
            "criterion 5: Greedy beat the exhaustive optimum on instance {i}"
        );
        greedy_final.push(trace.final_discrepancy());
        let (_, trace) = binpack::sorted_greedy_place(&items, &empty).expect("placement");
        assert!(
            trace.final_discrepancy() >= optimal - 1e-9,
            "criterion 5: SortedGreedy beat the exhaustive optimum on instance {i}"
        );
        sorted_final.push(trace.final_discrepancy());
    }
    let greedy_mean = mean(&greedy_final);
    let sorted_mean = mean(&sorted_final);
    assert!(
        sorted_mean <= greedy_mean,
        "criterion 5: SortedGreedy mean {sorted_mean} > Greedy mean {greedy_mean}"
    );
    println!(
        "[acceptance] criterion 5 (oracle dominance): PASS — realized >= optimum on {instances} instances; means sorted {sorted_mean:.4} <= greedy {greedy_mean:.4}"
    );
}

#[test]
fn criterion_06_matching_error_bound() {
    let grid = desk_grid();
    let mut checked_rounds = 0usize;
    for run in &grid.runs {
        if run.context.algorithm != Algorithm::SortedGreedy
            || run.context.mobility != Mobility::Full
        {
            continue;
        }
        let bound = run.trace.max_load_weight / 2.0;
        for record in &run.trace.rounds {
            assert!(
                record.max_abs_error <= bound + 1e-9,
                "criterion 6: |e| = {} > l_max/2 = {} (n={}, L/n={}, rep={}, round {})",
                record.max_abs_error,
                bound,
                run.context.n,
                run.context.loads_per_node,
                run.context.rep,
                record.round
            );
            checked_rounds += 1;
        }
    }
    println!(
        "[acceptance] criterion 6 (per-matching |e| <= l_max/2): PASS — {checked_rounds} rounds of full-mobility SortedGreedy runs, 0 violations"
    );
}

#[test]
fn criterion_07_monotonicity_per_round() {
    // Checked as specified: within every full-mobility run the global max
    // node total must never increase and the global min never decrease from
    // one round to the next.
    let grid = desk_grid();
    let tolerance = 1e-9;
    let mut violations = 0usize;
    let mut rounds = 0usize;
    let mut worst_overshoot = 0.0f64;
    let mut example = String::new();
    let mut initial_bound_violations = 0usize;
    for run in &grid.runs {
        if run.context.mobility != Mobility::Full {
            continue;
        }
        let mut prev_max = run.trace.initial_max;
        let mut prev_min = run.trace.initial_min;
        for record in &run.trace.rounds {
            rounds += 1;
            let overshoot = (record.max_total - prev_max).max(prev_min - record.min_total);
            if overshoot > tolerance {
                violations += 1;
                if overshoot > worst_overshoot {
                    worst_overshoot = overshoot;
                    example = format!(
                        "{} n={} L/n={} rep={} round {}: max {:.4} -> {:.4}, min {:.4} -> {:.4}",
                        run.context.algorithm.name(),
                        run.context.n,
                        run.context.loads_per_node,
                        run.context.rep,
                        record.round,
                        prev_max,
                        record.max_total,
                        prev_min,
                        record.min_total
                    );
                }
            }
            if record.max_total > run.trace.initial_max + tolerance
                || record.min_total < run.trace.initial_min - tolerance
            {
                initial_bound_violations += 1;
            }
            prev_max = record.max_total;
            prev_min = record.min_total;
        }
    }
    println!(
        "[acceptance] criterion 7 (per-round max/min monotonicity): {} — {violations}/{rounds} \
         violating rounds, worst overshoot {worst_overshoot:.4}, rounds exceeding the initial \
         envelope: {initial_bound_violations}",
        if violations == 0 { "PASS" } else { "FAIL" }
    );
    assert_eq!(
        violations, 0,
        "criterion 7: {violations} of {rounds} full-mobility rounds moved the global max up or \
         the global min down (worst overshoot {worst_overshoot:.4}; e.g. {example}). \
         Re-splitting a pooled load multiset can raise the pair maximum (pool {{3,3}} vs \
         {{2,2,2}} re-places to (7,5)), so per-round node-total monotonicity is not a property \
         of either placement algorithm; see the weight-multiset invariance tests for the form \
         of the condition that does hold."
    );
}

#[test]
fn criterion_08_zero_mean_error() {
    // Errors are sampled over fresh random matchings with the first-ball
    // tie broken by a seeded uniform draw, which restores the bin symmetry
    // the expectation argument relies on.
    let mut rng = ChaCha8Rng::seed_from_u64(8_000);
    let matchings = 20_000;
    for algorithm in [Algorithm::SortedGreedy, Algorithm::Greedy] {
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for _ in 0..matchings {
            let loads_total = rng.gen_range(2..=40);
            let loads: Vec<(f64, usize)> = (0..loads_total)
                .map(|_| (rng.gen_range(0.0..100.0), rng.gen_range(0..2)))
                .collect();
            let mut state = NetworkState::new(2, &loads).expect("state");
            let mut first_ball = ChaCha8Rng::seed_from_u64(rng.gen());
            let outcome = state
                .balance_matching_with_rng(0, 1, algorithm, &mut first_ball)
                .expect("balance");
            sum += outcome.error;
            sumsq += outcome.error * outcome.error;
        }
        let n = matchings as f64;
        let mean_error = sum / n;
        let std = ((sumsq / n - mean_error * mean_error) * n / (n - 1.0)).sqrt();
        let limit = 3.0 * std / n.sqrt();
        assert!(
            mean_error.abs() <= limit,
            "criterion 8 ({}): |mean e| = {:.5} exceeds 3*SE = {:.5}",
            algorithm.name(),
            mean_error.abs(),
            limit
        );
        println!(
            "[acceptance] criterion 8 (zero-mean error, {}): PASS — mean {:+.5} within 3*SE {:.5} over {} matchings",
            algorithm.name(),
            mean_error,
            limit,
            matchings
        );
    }
}

#[test]
fn criterion_09_deviation_bound() {
    let grid = desk_grid();
    let mut within = 0usize;
    let mut total = 0usize;
    let mut worst = 0.0f64;
    for run in &grid.runs {
        if run.context.mobility != Mobility::Full || !matches!(run.context.loads_per_node, 10 | 100)
        {
            continue;
        }
        let threshold = run.trace.max_load_weight * (12.0 * (run.context.n as f64).ln()).sqrt();
        let deviation = run.trace.final_deviation().expect("tracked deviation");
        total += 1;
        if deviation <= threshold {
            within += 1;
        }
        worst = worst.max(deviation / threshold);
    }
    let fraction = within as f64 / total as f64;
    assert!(
        fraction >= 0.96,
        "criterion 9: only {within}/{total} runs within l_max*sqrt(12 ln n)"
    );
    println!(
        "[acceptance] criterion 9 (discrete-vs-continuous deviation bound): PASS — {within}/{total} runs within bound ({:.1}%), worst deviation/bound = {worst:.3}",
        fraction * 100.0
    );
}

#[test]
fn criterion_10_discrepancy_advantage() {
    let grid = desk_grid();
    let mut results = Vec::new();
    for (mobility, threshold) in [(Mobility::Full, 20.0), (Mobility::Partial, 5.0)] {
        let ratios = |algorithm: Algorithm| -> Vec<f64> {
            grid.runs
                .iter()
                .filter(|r| r.context.algorithm == algorithm && r.context.mobility == mobility)
                .map(|r| r.record.disc_ratio)
                .collect()
        };
        let sorted_mean = mean(&ratios(Algorithm::SortedGreedy));
        let greedy_mean = mean(&ratios(Algorithm::Greedy));
        let advantage = sorted_mean / greedy_mean;
        assert!(
            advantage >= threshold,
            "criterion 10 ({}): advantage {advantage:.2} below {threshold}",
            mobility.name()
        );
        results.push(format!(
            "{} {:.1}x (sorted {:.1} / greedy {:.2}, threshold {})",
            mobility.name(),
            advantage,
            sorted_mean,
            greedy_mean,
            threshold
        ));
    }
    println!(
        "[acceptance] criterion 10 (discrepancy advantage): PASS — {}",
        results.join("; ")
    );
}

#[test]
fn criterion_11_relative_merit() {
    let grid = desk_grid();
    let mut overall_max = 0.0f64;
    let mut results = Vec::new();
    for mobility in [Mobility::Full, Mobility::Partial] {
        let mut merits = Vec::new();
        for run in grid.runs.iter().filter(|r| {
            r.context.algorithm == Algorithm::SortedGreedy && r.context.mobility == mobility
        }) {
            let partner = grid
                .runs
                .iter()
                .find(|r| {
                    r.context.algorithm == Algorithm::Greedy
                        && r.context.mobility == mobility
                        && r.context.n == run.context.n
                        && r.context.loads_per_node == run.context.loads_per_node
                        && r.context.rep == run.context.rep
                })
                .expect("paired greedy run");
            merits.push(relative_merit(&run.record, &partner.record).expect("S_rel"));
        }
        let mean_merit = mean(&merits);
        let max_merit = merits.iter().cloned().fold(0.0f64, f64::max);
        overall_max = overall_max.max(max_merit);
        assert!(
            (5.0..=100.0).contains(&mean_merit),
            "criterion 11 ({}): mean S_rel {mean_merit:.2} outside [5, 100]",
            mobility.name()
        );
        results.push(format!(
            "{} mean {:.1} max {:.1}",
            mobility.name(),
            mean_merit,
            max_merit
        ));
    }
    assert!(
        overall_max <= 200.0,
        "criterion 11: max S_rel {overall_max:.1} > 200"
    );
    println!(
        "[acceptance] criterion 11 (S_rel reproduction): PASS — {}",
        results.join("; ")
    );
}

#[test]
fn criterion_12_continuous_round_bound() {
    let mut checked = 0usize;
    let mut worst = 0.0f64;
    for &n in &[16usize, 64] {
        for &loads_per_node in &[10usize, 100] {
            for rep in 0..50 {
                let seeds = sweep::seeds_for(MASTER_SEED, n, loads_per_node, rep);
                let instance =
                    sweep::build_instance(n, loads_per_node, 0.0, 100.0, 0, Mobility::Full, seeds)
                        .expect("instance");
                let lambda = round_matrix(&instance.schedule)
                    .expect("round matrix")
                    .lambda();
                let initial = instance.initial.node_totals().to_vec();
                let k = instance.initial.discrepancy();
                let epsilon = k / 1000.0;
                let bound = continuous_round_bound(
                    k,
                    n,
                    epsilon,
                    instance.schedule.num_matchings(),
                    lambda,
                )
                .expect("bound");
                let cap = (bound.ceil() as usize).max(1) * 10;
                let rounds =
                    continuous_rounds_to_epsilon(&initial, &instance.schedule, epsilon, cap)
                        .expect("continuous run did not converge");
                assert!(
                    rounds as f64 <= bound.ceil(),
                    "criterion 12: {rounds} rounds > ceil({bound:.2}) at n={n}, L/n={loads_per_node}, rep={rep}"
                );
                worst = worst.max(rounds as f64 / bound);
                checked += 1;
            }
        }
    }
    println!(
        "[acceptance] criterion 12 (continuous round bound): PASS — {checked} runs, worst rounds/bound = {worst:.4}"
    );
}

#[test]
fn criterion_13_min_weight_statistic() {
    // Paired samplings: B extends A by one draw. The event with probability
    // m/(m+1) is that the extra draw does not undercut min(A), i.e.
    // min(A) >= min(B) still holds with equality.
    let mut rng = ChaCha8Rng::seed_from_u64(13_000);
    let draws = 100_000;
    let mut results = Vec::new();
    for m in [1usize, 3, 10] {
        let expected = min_weight_prob(m).expect("probability");
        let mut hits = 0usize;
        for _ in 0..draws {
            let min_a = (0..m)
                .map(|_| rng.gen_range(0.0..1.0))
                .fold(f64::INFINITY, f64::min);
            let extra: f64 = rng.gen_range(0.0..1.0);
            let min_b = min_a.min(extra);
            if min_a <= min_b + f64::EPSILON {
                hits += 1;
            }
        }
        let observed = hits as f64 / draws as f64;
        let se = (expected * (1.0 - expected) / draws as f64).sqrt();
        assert!(
            (observed - expected).abs() <= 3.0 * se,
            "criterion 13: observed {observed:.4} vs m/(m+1) = {expected:.4} (3*SE = {:.4}) at m={m}",
            3.0 * se
        );
        results.push(format!("m={m}: {observed:.4} vs {expected:.4}"));
    }
    println!(
        "[acceptance] criterion 13 (min-weight statistic): PASS — {} ({} draws each)",
        results.join(", "),
        draws
    );
}

#[test]
fn criterion_14_determinism() {
    let mut config = ExperimentConfig::default();
    config.n_list = vec![16];
    config.loads_per_node = vec![10];
    config.reps = 3;
    config.master_seed = 7;
    config.track_continuous = true;
    let first = run_sweep_collect(&config).expect("sweep");
    let second = run_sweep_collect(&config).expect("sweep");
    assert_eq!(
        first.runs_csv.as_bytes(),
        second.runs_csv.as_bytes(),
        "criterion 14: run CSVs differ"
    );
    assert_eq!(
        first.agg_csv.as_bytes(),
        second.agg_csv.as_bytes(),
        "criterion 14: aggregate CSVs differ"
    );
    // A different master seed must change the results.
    config.master_seed = 8;
    let third = run_sweep_collect(&config).expect("sweep");
    assert_ne!(first.runs_csv, third.runs_csv);
    println!(
        "[acceptance] criterion 14 (determinism): PASS — {} byte-identical CSV bytes across reruns",
        first.runs_csv.len() + first.agg_csv.len()
    );
}
