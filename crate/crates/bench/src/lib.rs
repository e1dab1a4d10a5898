//! Shared fixtures for the benchmarks.

use hv_core::{GridFunction, Parameters};

/// α = −0.1, β = −0.3: inside the regime where every operator is defined.
pub fn params(lambda: f64) -> Parameters {
    Parameters::new(-0.1, -0.3, lambda)
}

/// `f` sampled on 201 uniform nodes of [0, 1].
pub fn sampled(f: impl Fn(f64) -> f64) -> GridFunction {
    let nodes: Vec<f64> = (0..=200).map(|i| f64::from(i) / 200.0).collect();
    let values = nodes.iter().map(|&t| f(t)).collect();
    GridFunction::from_samples(nodes, values).expect("valid fixture grid")
}
