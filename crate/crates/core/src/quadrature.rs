//! Gauss–Jacobi quadrature for integrands with power-law endpoint behaviour.
//!
//! Nodes come from the Golub–Welsch eigenproblem and are polished by
//! Newton steps on P_n^{(a,b)}; weights use the closed form in terms of
//! P_n', which keeps the tiny weights next to singular endpoints accurate.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::gamma::ln_gamma;

/// Node count and endpoint exponents for ∫_a^b (t−a)^left (b−t)^right f(t) dt.
///
/// An exponent left as `None` is filled in by the operator that consumes
/// the spec, which knows the power-law behaviour of its own kernel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub n_nodes: usize,
    pub left_exponent: Option<f64>,
    pub right_exponent: Option<f64>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            n_nodes: 64,
            left_exponent: None,
            right_exponent: None,
        }
    }
}

impl QuadratureSpec {
    pub fn with_nodes(n_nodes: usize) -> Self {
        Self {
            n_nodes,
            ..Self::default()
        }
    }

    pub fn with_exponents(mut self, left: f64, right: f64) -> Self {
        self.left_exponent = Some(left);
        self.right_exponent = Some(right);
        self
    }

    pub fn with_left(mut self, left: f64) -> Self {
        self.left_exponent = Some(left);
        self
    }

    /// Resolve the exponents against operator defaults and fetch the rule.
    pub fn rule(&self, default_left: f64, default_right: f64) -> Result<Arc<GaussJacobi>> {
        let left = self.left_exponent.unwrap_or(default_left);
        let right = self.right_exponent.unwrap_or(default_right);
        GaussJacobi::cached(self.n_nodes, left, right)
    }
}

/// A Gauss–Jacobi rule on [-1, 1] for the weight (1 − s)^right (1 + s)^left.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussJacobi {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    left: f64,
    right: f64,
}

type CacheKey = (usize, u64, u64);

fn cache() -> &'static Mutex<HashMap<CacheKey, Arc<GaussJacobi>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<GaussJacobi>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl GaussJacobi {
    /// `left` is the exponent at s = −1 (the lower end of an integration
    /// interval) and `right` the exponent at s = +1.
    pub fn new(n: usize, left: f64, right: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("quadrature needs at least one node".into()));
        }
        if !(left > -1.0 && right > -1.0) {
            return Err(Error::InvalidInput(format!(
                "endpoint exponents must exceed -1 for integrability, got left = {left}, right = {right}"
            )));
        }
        // Jacobi convention: weight (1 − s)^a (1 + s)^b
        let (a, b) = (right, left);
        let mut nodes = golub_welsch_nodes(n, a, b);
        for x in nodes.iter_mut() {
            for _ in 0..3 {
                let (p, dp) = jacobi_with_derivative(n, a, b, *x);
                let step = p / dp;
                if !step.is_finite() {
                    break;
                }
                *x -= step;
            }
        }
        nodes.sort_by(f64::total_cmp);
        let nf = n as f64;
        let log_c = ln_gamma(nf + a + 1.0) + ln_gamma(nf + b + 1.0) - ln_gamma(nf + a + b + 1.0) - ln_gamma(nf + 1.0)
            + (a + b + 1.0) * 2f64.ln();
        let mut weights: Vec<f64> = nodes
            .iter()
            .map(|&x| {
                let (_, dp) = jacobi_with_derivative(n, a, b, x);
                (log_c - ((1.0 - x * x) * dp * dp).ln()).exp()
            })
            .collect();
        // pin the zeroth moment, which removes the common rounding in log_c
        let moment = ((a + b + 1.0) * 2f64.ln() + ln_gamma(a + 1.0) + ln_gamma(b + 1.0) - ln_gamma(a + b + 2.0)).exp();
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w *= moment / total);
        Ok(Self {
            nodes,
            weights,
            left,
            right,
        })
    }

    /// Shared, immutable rule for (n, left, right).
    pub fn cached(n: usize, left: f64, right: f64) -> Result<Arc<Self>> {
        let key = (n, left.to_bits(), right.to_bits());
        if let Some(rule) = cache().lock().expect("quadrature cache poisoned").get(&key) {
            return Ok(Arc::clone(rule));
        }
        let rule = Arc::new(Self::new(n, left, right)?);
        cache()
            .lock()
            .expect("quadrature cache poisoned")
            .insert(key, Arc::clone(&rule));
        Ok(rule)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn left(&self) -> f64 {
        self.left
    }

    pub fn right(&self) -> f64 {
        self.right
    }

    /// Physical nodes and scaled weights on [lo, hi] for the weight
    /// (t − lo)^left (hi − t)^right.
    pub fn mapped(&self, lo: f64, hi: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (hi - lo);
        let scale = half.powf(1.0 + self.left + self.right);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&s, &w)| (lo + half * (1.0 + s), w * scale))
    }

    /// ∫_lo^hi (t − lo)^left (hi − t)^right f(t) dt.
    pub fn integrate(&self, lo: f64, hi: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.mapped(lo, hi).map(|(t, w)| w * f(t)).sum()
    }

    /// Like [`integrate`](Self::integrate) for a fallible integrand.
    pub fn try_integrate(&self, lo: f64, hi: f64, mut f: impl FnMut(f64) -> Result<f64>) -> Result<f64> {
        let mut acc = 0.0;
        for (t, w) in self.mapped(lo, hi) {
            acc += w * f(t)?;
        }
        Ok(acc)
    }
}

fn golub_welsch_nodes(n: usize, a: f64, b: f64) -> Vec<f64> {
    let mut jac = DMatrix::<f64>::zeros(n, n);
    let ab = a + b;
    for i in 0..n {
        let k = i as f64;
        let diag = if i == 0 {
            (b - a) / (ab + 2.0)
        } else {
            (b * b - a * a) / ((2.0 * k + ab) * (2.0 * k + ab + 2.0))
        };
        jac[(i, i)] = diag;
        if i + 1 < n {
            let k1 = k + 1.0;
            let off = if i == 0 {
                (4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))).sqrt()
            } else {
                let s = 2.0 * k1 + ab;
                (4.0 * k1 * (k1 + a) * (k1 + b) * (k1 + ab) / (s * s * (s + 1.0) * (s - 1.0))).sqrt()
            };
            jac[(i, i + 1)] = off;
            jac[(i + 1, i)] = off;
        }
    }
    SymmetricEigen::new(jac).eigenvalues.iter().copied().collect()
}

/// P_n^{(a,b)}(x) and its derivative.
fn jacobi_with_derivative(n: usize, a: f64, b: f64, x: f64) -> (f64, f64) {
    let ab = a + b;
    let mut p_prev = 1.0;
    let mut p = 0.5 * (a - b + (ab + 2.0) * x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let s = 2.0 * kf + ab;
        let c1 = 2.0 * kf * (kf + ab) * (s - 2.0);
        let c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
        let c3 = 2.0 * (kf + a - 1.0) * (kf + b - 1.0) * s;
        let next = (c2 * p - c3 * p_prev) / c1;
        p_prev = p;
        p = next;
    }
    let nf = n as f64;
    let s = 2.0 * nf + ab;
    let dp = (nf * (a - b - s * x) * p + 2.0 * (nf + a) * (nf + b) * p_prev) / (s * (1.0 - x * x));
    (p, dp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gamma::gamma;
    use approx::assert_relative_eq;

    fn beta_fn(p: f64, q: f64) -> f64 {
        gamma(p) * gamma(q) / gamma(p + q)
    }

    #[test]
    fn weights_sum_to_the_weight_integral() {
        for &(l, r) in &[(0.0, 0.0), (-0.2, 0.6), (-0.6, -0.6), (0.4, -0.9)] {
            let rule = GaussJacobi::new(64, l, r).unwrap();
            let total: f64 = rule.weights().iter().sum();
            let expect = 2f64.powf(l + r + 1.0) * beta_fn(l + 1.0, r + 1.0);
            assert_relative_eq!(total, expect, max_relative = 1e-13);
        }
    }

    #[test]
    fn exact_for_polynomials_under_the_weight() {
        // ∫_0^x t^l (x−t)^r t^3 dt = x^{l+r+4} B(l+4, r+1)
        let (l, r, x) = (-0.3, 0.45, 0.7);
        let rule = GaussJacobi::new(5, l, r).unwrap();
        let got = rule.integrate(0.0, x, |t| t.powi(3));
        let expect = x.powf(l + r + 4.0) * beta_fn(l + 4.0, r + 1.0);
        assert_relative_eq!(got, expect, max_relative = 1e-14);
    }

    #[test]
    fn abel_integral_is_exact() {
        // ∫_0^x (x−t)^{0.6} dt = x^{1.6}/1.6
        let rule = GaussJacobi::new(64, 0.0, 0.6).unwrap();
        for &x in &[0.05, 0.3, 1.0] {
            assert_relative_eq!(rule.integrate(0.0, x, |_| 1.0), x.powf(1.6) / 1.6, max_relative = 1e-14);
        }
    }

    #[test]
    fn nodes_are_sorted_and_interior() {
        let rule = GaussJacobi::new(40, -0.5, 0.7).unwrap();
        assert!(rule.nodes().windows(2).all(|w| w[0] < w[1]));
        assert!(rule.nodes().iter().all(|&x| x > -1.0 && x < 1.0));
    }

    #[test]
    fn rejects_nonintegrable_exponents() {
        assert!(GaussJacobi::new(8, -1.0, 0.0).is_err());
        assert!(GaussJacobi::new(0, 0.0, 0.0).is_err());
    }

    #[test]
    fn spec_defaults_are_filled_in() {
        let spec = QuadratureSpec::with_nodes(12).with_left(0.25);
        let rule = spec.rule(-0.5, 0.3).unwrap();
        assert_eq!((rule.left(), rule.right(), rule.nodes().len()), (0.25, 0.3, 12));
    }
}
