//! The forward Volterra operator N, its inverse T and the round-trip harness.
//!
//! Both operators take λ as given: the second kernel argument is
//! λ(x−t)². Callers working in the opposite convention flip λ first
//! (see [`SignConvention`](crate::params::SignConvention)).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::params::Parameters;
use crate::quadrature::QuadratureSpec;
use crate::series::SeriesControl;
use crate::special::humbert::{f0211, humbert_xi2};

/// Default relative step of the outer derivative in T.
pub const DEFAULT_DSTEP: f64 = 1e-3;

/// u = −(x−t)²/(4xt), the first argument shared by both kernels.
pub(crate) fn kernel_u(x: f64, t: f64) -> f64 {
    let d = x - t;
    -(d * d) / (4.0 * x * t)
}

fn check_point(x: f64) -> Result<()> {
    if x > 0.0 && x <= 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("x = {x} is outside (0, 1]")))
    }
}

/// τ(x) = ∫₀ˣ (t/x)^α (x−t)^{−2β} Ξ₂(α, 1−α; 1−β; u, λ(x−t)²) v(t) dt.
///
/// Default weights are t^{2α} at the origin, where t^α Ξ₂ behaves like
/// t^{2α}, and (x−t)^{−2β} at x.
pub fn forward_n(v: &GridFunction, x: f64, params: &Parameters, quad: &QuadratureSpec, ctrl: &SeriesControl) -> Result<f64> {
    forward_n_with(&|t| v.eval(t), x, params, quad, ctrl)
}

pub(crate) fn forward_n_with(
    v: &(dyn Fn(f64) -> f64 + Sync),
    x: f64,
    params: &Parameters,
    quad: &QuadratureSpec,
    ctrl: &SeriesControl,
) -> Result<f64> {
    check_point(x)?;
    let Parameters { alpha, beta, lambda, .. } = *params;
    let rule = quad.rule(2.0 * alpha, -2.0 * beta)?;
    let (left, right) = (rule.left(), rule.right());
    let x_pow = x.powf(-alpha);
    rule.try_integrate(0.0, x, |t| {
        let d = x - t;
        let xi = humbert_xi2(alpha, 1.0 - alpha, 1.0 - beta, kernel_u(x, t), lambda * d * d, ctrl)?.checked()?;
        Ok(x_pow * t.powf(alpha - left) * d.powf(-2.0 * beta - right) * xi * v(t))
    })
}

/// Which way round the two β-parameters of the y-direction enter the
/// kernel of T.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum YParameters {
    /// (β−½)_n upstairs and (β+½)_n downstairs. This is the order for
    /// which T inverts N when λ ≠ 0: at α = 0 the Laplace symbol of N is
    /// proportional to s^{2β−1}(1 − 4λ/s²)^{β−½}, whose reciprocal
    /// gives the series Σ (β−½)_n (λx²)^n / ((β+½)_n (1+β)_n n!).
    Inverting,
    /// (β+½)_n upstairs and (β−½)_n downstairs.
    #[cfg_attr(not(test), allow(dead_code))]
    Transposed,
}

/// G(x) = x^α ∫₀ˣ t^α (x−t)^{2β} F(−α, 1+α; β−½; 1+β; β+½; u, λ(x−t)²) τ′(t) dt.
fn inverse_bracket(
    tau_prime: &(dyn Fn(f64) -> f64 + Sync),
    x: f64,
    params: &Parameters,
    quad: &QuadratureSpec,
    ctrl: &SeriesControl,
    order: YParameters,
) -> Result<f64> {
    let Parameters { alpha, beta, lambda, .. } = *params;
    let (upper, lower) = match order {
        YParameters::Inverting => (beta - 0.5, beta + 0.5),
        YParameters::Transposed => (beta + 0.5, beta - 0.5),
    };
    let rule = quad.rule(0.0, 2.0 * beta)?;
    let (left, right) = (rule.left(), rule.right());
    let inner = rule.try_integrate(0.0, x, |t| {
        let d = x - t;
        let f = f0211(
            -alpha,
            1.0 + alpha,
            upper,
            1.0 + beta,
            lower,
            kernel_u(x, t),
            lambda * d * d,
            ctrl,
        )?
        .checked()?;
        Ok(t.powf(alpha - left) * d.powf(2.0 * beta - right) * f * tau_prime(t))
    })?;
    Ok(x.powf(alpha) * inner)
}

/// v(x) = [sin 2βπ / 2βπ] x^{−2α} G′(x), where
/// G(x) = x^α ∫₀ˣ t^α (x−t)^{2β} F(−α, 1+α; β−½; 1+β; β+½; u, λ(x−t)²) τ′(t) dt.
///
/// G′ is a central difference with step `dstep·x` refined by one
/// Richardson level. Default weights are t^0 at the origin and
/// (x−t)^{2β} at x.
pub fn inverse_t(
    tau: &GridFunction,
    x: f64,
    params: &Parameters,
    quad: &QuadratureSpec,
    ctrl: &SeriesControl,
    dstep: f64,
) -> Result<f64> {
    inverse_t_with(&|t| tau.derivative(t), x, params, quad, ctrl, dstep)
}

pub(crate) fn inverse_t_with(
    tau_prime: &(dyn Fn(f64) -> f64 + Sync),
    x: f64,
    params: &Parameters,
    quad: &QuadratureSpec,
    ctrl: &SeriesControl,
    dstep: f64,
) -> Result<f64> {
    inverse_t_ordered(tau_prime, x, params, quad, ctrl, dstep, YParameters::Inverting)
}

pub(crate) fn inverse_t_ordered(
    tau_prime: &(dyn Fn(f64) -> f64 + Sync),
    x: f64,
    params: &Parameters,
    quad: &QuadratureSpec,
    ctrl: &SeriesControl,
    dstep: f64,
    order: YParameters,
) -> Result<f64> {
    params.require_theorem()?;
    if !(dstep > 0.0 && dstep.is_finite()) {
        return Err(Error::InvalidInput(format!("dstep must be positive, got {dstep}")));
    }
    let h = dstep * x;
    if !(x - h > 0.0 && x + h < 1.0) {
        return Err(Error::Domain(format!(
            "derivative stencil [{}, {}] leaves (0, 1)",
            x - h,
            x + h
        )));
    }
    let g = |y: f64| inverse_bracket(tau_prime, y, params, quad, ctrl, order);
    let coarse = (g(x + h)? - g(x - h)?) / (2.0 * h);
    let fine = (g(x + 0.5 * h)? - g(x - 0.5 * h)?) / h;
    let deriv = (4.0 * fine - coarse) / 3.0;
    Ok(params.inversion_prefactor() * x.powf(-2.0 * params.alpha) * deriv)
}

/// Evaluates `op` over a grid in parallel, keeping grid order.
pub fn sweep(grid: &[f64], op: impl Fn(f64) -> Result<f64> + Sync) -> Result<Vec<f64>> {
    grid.par_iter().map(|&x| op(x)).collect()
}

/// Power κ in τ(t) ~ c t^κ as t → 0, from samples at 10⁻⁴ and 2·10⁻⁴.
///
/// Falls back to 1 when the samples vanish or disagree in sign; values
/// within 10⁻³ of an integer are snapped to it.
pub fn leading_power(tau: &GridFunction) -> f64 {
    let (a, b) = (tau.eval(1e-4), tau.eval(2e-4));
    if a == 0.0 || b == 0.0 || a.signum() != b.signum() || !(a.is_finite() && b.is_finite()) {
        return 1.0;
    }
    let k = (b / a).ln() / std::f64::consts::LN_2;
    let snapped = k.round();
    let k = if (k - snapped).abs() < 1e-3 { snapped } else { k };
    k.clamp(0.0, 8.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    /// T[N[v]] against v.
    TN,
    /// N[T[τ]] against τ.
    NT,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundtripPoint {
    pub x: f64,
    pub expected: f64,
    pub computed: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundtripReport {
    pub direction: Direction,
    pub points: Vec<RoundtripPoint>,
    pub sup_residual: f64,
}

/// Applies both operators in the given order and compares with the seed.
///
/// TN feeds T the derivative of N[v] from the closed-form expansion,
/// which behaves like t^{−2β} at the origin, so T's inner rule uses that
/// left weight unless `quad` overrides it. NT evaluates T[τ] at the
/// nodes of N's rule; for τ ~ t^κ, T[τ] ~ t^{κ−1+2β}, so N's left weight
/// becomes 2α + κ − 1 + 2β with κ read off the seed near the origin.
pub fn roundtrip_check(
    seed: &GridFunction,
    direction: Direction,
    grid: &[f64],
    params: &Parameters,
    quad: &QuadratureSpec,
    ctrl: &SeriesControl,
    dstep: f64,
) -> Result<RoundtripReport> {
    params.require_theorem()?;
    let computed = match direction {
        Direction::TN => {
            let inner_quad = QuadratureSpec {
                left_exponent: quad.left_exponent.or(Some(-2.0 * params.beta)),
                ..*quad
            };
            let tau_prime = |t: f64| {
                crate::kernel::tau_prime_expansion_with(&|s| seed.eval(s), t, params, quad, ctrl).unwrap_or(f64::NAN)
            };
            sweep(grid, |x| inverse_t_with(&tau_prime, x, params, &inner_quad, ctrl, dstep))?
        }
        Direction::NT => {
            let kappa = leading_power(seed);
            let outer_quad = QuadratureSpec {
                left_exponent: quad
                    .left_exponent
                    .or(Some(2.0 * params.alpha + kappa - 1.0 + 2.0 * params.beta)),
                ..*quad
            };
            let v = |t: f64| {
                inverse_t_with(&|s| seed.derivative(s), t, params, quad, ctrl, dstep).unwrap_or(f64::NAN)
            };
            sweep(grid, |x| forward_n_with(&v, x, params, &outer_quad, ctrl))?
        }
    };
    let points: Vec<RoundtripPoint> = grid
        .iter()
        .zip(computed)
        .map(|(&x, computed)| {
            let expected = seed.eval(x);
            RoundtripPoint {
                x,
                expected,
                computed,
                residual: (computed - expected).abs(),
            }
        })
        .collect();
    if let Some(p) = points.iter().find(|p| !p.computed.is_finite()) {
        return Err(Error::NotConverged {
            value: p.computed,
            terms: 0,
            est_error: f64::INFINITY,
        });
    }
    let sup_residual = points.iter().map(|p| p.residual).fold(0.0, f64::max);
    Ok(RoundtripReport {
        direction,
        points,
        sup_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::uniform_grid;
    use crate::special::gauss::gauss_2f1;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn ctrl() -> SeriesControl {
        SeriesControl::default()
    }

    fn func(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> GridFunction {
        GridFunction::from_fn(uniform_grid(4), f).unwrap()
    }

    #[test]
    fn abel_forward_closed_form() {
        let p = Parameters::new(0.0, -0.3, 0.0);
        let one = func(|_| 1.0);
        for &x in &[0.05, 0.37, 1.0] {
            let got = forward_n(&one, x, &p, &QuadratureSpec::default(), &ctrl()).unwrap();
            assert_relative_eq!(got, x.powf(1.6) / 1.6, max_relative = 1e-13);
        }
    }

    #[test]
    fn abel_inverse_recovers_one() {
        let p = Parameters::new(0.0, -0.3, 0.0);
        let tau = GridFunction::from_fn_with_derivative(uniform_grid(4), |x| x.powf(1.6) / 1.6, |x| x.powf(0.6)).unwrap();
        for &x in &[0.1, 0.5, 0.9] {
            let v = inverse_t(&tau, x, &p, &QuadratureSpec::default(), &ctrl(), DEFAULT_DSTEP).unwrap();
            assert!((v - 1.0).abs() < 1e-6, "{v}");
        }
    }

    #[test]
    fn zero_in_zero_out() {
        let p = Parameters::new(-0.1, -0.3, 0.5);
        let zero = func(|_| 0.0);
        let q = QuadratureSpec::with_nodes(16);
        assert_eq!(forward_n(&zero, 0.5, &p, &q, &ctrl()).unwrap(), 0.0);
        assert_eq!(inverse_t(&zero, 0.5, &p, &q, &ctrl(), DEFAULT_DSTEP).unwrap(), 0.0);
    }

    #[test]
    fn bessel_kernel_case() {
        // α = 0 leaves (x−t)^{−2β} ₀F₁(; 1−β; λ(x−t)²); reference by adaptive quadrature
        let p = Parameters::new(0.0, -0.3, 2.0);
        let v = func(|t| 1.0 + t * t);
        let got = forward_n(&v, 0.7, &p, &QuadratureSpec::default(), &ctrl()).unwrap();
        assert_relative_eq!(got, 0.530_814_453_122_157_4, max_relative = 1e-12);
    }

    #[test]
    fn gauss_kernel_inverse_at_zero_lambda() {
        // at λ = 0 the kernel of T is ₂F₁(−α, 1+α; 1+β; u)
        let p = Parameters::new(-0.1, -0.3, 0.0);
        let tau = GridFunction::from_fn_with_derivative(uniform_grid(4), |t| t * t, |t| 2.0 * t).unwrap();
        let q = QuadratureSpec::default();
        let x = 0.6;
        let h = DEFAULT_DSTEP * x;
        let rule = q.rule(0.0, 2.0 * p.beta).unwrap();
        let g = |y: f64| {
            y.powf(p.alpha)
                * rule.integrate(0.0, y, |t| {
                    let f = gauss_2f1(-p.alpha, 1.0 + p.alpha, 1.0 + p.beta, kernel_u(y, t), &ctrl()).unwrap().value;
                    t.powf(p.alpha) * f * 2.0 * t
                })
        };
        let d1 = (g(x + h) - g(x - h)) / (2.0 * h);
        let d2 = (g(x + 0.5 * h) - g(x - 0.5 * h)) / h;
        let expect = p.inversion_prefactor() * x.powf(-2.0 * p.alpha) * (4.0 * d2 - d1) / 3.0;
        let got = inverse_t(&tau, x, &p, &q, &ctrl(), DEFAULT_DSTEP).unwrap();
        assert_relative_eq!(got, expect, max_relative = 1e-12);
    }

    #[test]
    fn transposed_parameters_do_not_invert() {
        let p = Parameters::new(-0.1, -0.3, 3.0);
        let q = QuadratureSpec::default().with_left(-2.0 * p.beta);
        let v = |s: f64| 1.0 + s * s;
        let tau_prime = |t: f64| crate::kernel::tau_prime_expansion_with(&v, t, &p, &QuadratureSpec::default(), &ctrl()).unwrap();
        let x = 0.5;
        let good = inverse_t_ordered(&tau_prime, x, &p, &q, &ctrl(), DEFAULT_DSTEP, YParameters::Inverting).unwrap();
        let bad = inverse_t_ordered(&tau_prime, x, &p, &q, &ctrl(), DEFAULT_DSTEP, YParameters::Transposed).unwrap();
        assert!((good - v(x)).abs() < 1e-6, "{good}");
        assert!((bad - v(x)).abs() > 0.1, "{bad}");

        // both orders agree when λ = 0
        let p0 = p.with_lambda(0.0);
        let tp0 = |t: f64| crate::kernel::tau_prime_expansion_with(&v, t, &p0, &QuadratureSpec::default(), &ctrl()).unwrap();
        let a = inverse_t_ordered(&tp0, x, &p0, &q, &ctrl(), DEFAULT_DSTEP, YParameters::Inverting).unwrap();
        let b = inverse_t_ordered(&tp0, x, &p0, &q, &ctrl(), DEFAULT_DSTEP, YParameters::Transposed).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn errors() {
        let v = func(|t| t);
        let q = QuadratureSpec::with_nodes(8);
        let general = Parameters::new(0.1, -0.3, 0.0);
        assert!(matches!(inverse_t(&v, 0.5, &general, &q, &ctrl(), 1e-3), Err(Error::Regime(_))));
        let p = Parameters::new(-0.1, -0.3, 0.0);
        assert!(matches!(forward_n(&v, 0.0, &p, &q, &ctrl()), Err(Error::Domain(_))));
        assert!(matches!(forward_n(&v, 1.5, &p, &q, &ctrl()), Err(Error::Domain(_))));
        assert!(matches!(inverse_t(&v, 1.0, &p, &q, &ctrl(), 1e-3), Err(Error::Domain(_))));
    }

    #[test]
    fn leading_power_estimates() {
        assert_eq!(leading_power(&func(|t| t * t)), 2.0);
        assert_eq!(leading_power(&func(|t| 3.0 * t + t * t * t)), 1.0);
        assert_relative_eq!(leading_power(&func(|t| t.powf(1.4))), 1.4, max_relative = 1e-12);
        assert_eq!(leading_power(&func(|_| 0.0)), 1.0);
    }

    #[test]
    fn roundtrip_of_zero_is_zero() {
        let p = Parameters::new(-0.1, -0.3, 0.5);
        let q = QuadratureSpec::with_nodes(16);
        let r = roundtrip_check(&func(|_| 0.0), Direction::TN, &[0.3, 0.6], &p, &q, &ctrl(), 1e-3).unwrap();
        assert_eq!(r.sup_residual, 0.0);
    }

    #[test]
    fn more_nodes_do_not_hurt() {
        // α ≠ 0: besides t^{2α} the kernel carries a t^{1−α} branch at the
        // origin, so convergence is algebraic but steady
        let p = Parameters::new(-0.1, -0.3, 1.0);
        let v = func(|t| 1.0 + t * t);
        let at = |n| forward_n(&v, 0.8, &p, &QuadratureSpec::with_nodes(n), &ctrl()).unwrap();
        let reference = at(256);
        let errs: Vec<f64> = [16, 32, 64].iter().map(|&n| (at(n) - reference).abs()).collect();
        assert!(errs[1] < errs[0] && errs[2] < errs[1], "{errs:?}");
        assert!(errs[2] < 1e-8, "{errs:?}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]
        #[test]
        fn forward_is_linear(a in -3.0f64..3.0, b in -3.0f64..3.0, x in 0.1f64..1.0) {
            let p = Parameters::new(-0.1, -0.3, 0.7);
            let q = QuadratureSpec::with_nodes(24);
            let v1 = func(|t| 1.0 + t);
            let v2 = func(|t| t * t * t);
            let combo = func(move |t| a * (1.0 + t) + b * t * t * t);
            let lhs = forward_n(&combo, x, &p, &q, &ctrl()).unwrap();
            let rhs = a * forward_n(&v1, x, &p, &q, &ctrl()).unwrap() + b * forward_n(&v2, x, &p, &q, &ctrl()).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
        }

        #[test]
        fn inverse_is_linear(a in -3.0f64..3.0, b in -3.0f64..3.0, x in 0.1f64..0.9) {
            let p = Parameters::new(-0.1, -0.3, -1.5);
            let q = QuadratureSpec::with_nodes(24);
            let t1 = GridFunction::from_fn_with_derivative(uniform_grid(4), |t| t * t, |t| 2.0 * t).unwrap();
            let t2 = GridFunction::from_fn_with_derivative(uniform_grid(4), |t| t.powi(3), |t| 3.0 * t * t).unwrap();
            let combo = GridFunction::from_fn_with_derivative(
                uniform_grid(4),
                move |t| a * t * t + b * t.powi(3),
                move |t| 2.0 * a * t + 3.0 * b * t * t,
            ).unwrap();
            let lhs = inverse_t(&combo, x, &p, &q, &ctrl(), 1e-3).unwrap();
            let rhs = a * inverse_t(&t1, x, &p, &q, &ctrl(), 1e-3).unwrap() + b * inverse_t(&t2, x, &p, &q, &ctrl(), 1e-3).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + lhs.abs()));
        }
    }
}
