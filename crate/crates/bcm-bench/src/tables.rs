//! Rendering of the bound table printed by the `bounds` subcommand.

use std::fmt::Write as _;

use bcm_core::bounds::{
    continuous_round_bound, deviation_tail_bound, discrete_discrepancy_bound, dmax_bound,
    min_weight_prob, BoundInputs,
};

use crate::RunError;

/// Renders every bound calculator for one instance. `heaviest_load` scales
/// the error bound (and the deviation threshold, stated in units of it).
pub fn bounds_table(inputs: &BoundInputs, heaviest_load: f64) -> Result<String, RunError> {
    inputs.validate()?;
    let round_bound = continuous_round_bound(
        inputs.initial_discrepancy,
        inputs.nodes,
        inputs.epsilon,
        inputs.matchings_per_round,
        inputs.lambda,
    )?;
    let disc_bound = discrete_discrepancy_bound(inputs.nodes)?;
    let (threshold, probability) = deviation_tail_bound(inputs.nodes, inputs.delta)?;
    let min_prob = min_weight_prob(inputs.balls)?;
    let error_bound = dmax_bound(heaviest_load)?;

    let mut out = String::new();
    let _ = writeln!(
        out,
        "inputs: K = {}, n = {}, eps = {}, d = {}, lambda = {}, delta = {}, m = {}, l_max = {}",
        inputs.initial_discrepancy,
        inputs.nodes,
        inputs.epsilon,
        inputs.matchings_per_round,
        inputs.lambda,
        inputs.delta,
        inputs.balls,
        heaviest_load
    );
    let _ = writeln!(out, "{:<44} {:>16}", "bound", "value");
    let _ = writeln!(
        out,
        "{:<44} {:>16.6}",
        "continuous rounds to eps", round_bound
    );
    let _ = writeln!(
        out,
        "{:<44} {:>16.6}",
        "discrete discrepancy (unit loads)", disc_bound
    );
    let _ = writeln!(
        out,
        "{:<44} {:>16.6}",
        "deviation threshold (units of l_max)", threshold
    );
    let _ = writeln!(
        out,
        "{:<44} {:>16.6}",
        "deviation tail probability", probability
    );
    let _ = writeln!(
        out,
        "{:<44} {:>16.6}",
        "min-weight unchanged probability", min_prob
    );
    let _ = writeln!(
        out,
        "{:<44} {:>16.6}",
        "per-matching error bound (l_max/2)", error_bound
    );
    Ok(out)
}
