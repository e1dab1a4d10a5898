//! Cauchy and Cauchy–Goursat problems for the degenerate hyperbolic
//! equation in characteristic coordinates,
//!
//! u_ξη + α/(η+ξ) (u_η + u_ξ) − β/(η−ξ) (u_η − u_ξ) + λu = 0,
//!
//! on the triangle 0 ≤ ξ ≤ η ≤ 1.
//!
//! Inside the solutions the spectral argument is ρ = λ(η−t)(t−ξ). On the
//! line η = ξ this becomes −λ(x−t)², so the density equations there are
//! the operators of [`crate::operators`] with λ replaced by −λ.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::operators::{forward_n, inverse_t};
use crate::params::{Parameters, SignConvention};
use crate::quadrature::{GaussJacobi, QuadratureSpec};
use crate::series::SeriesControl;
use crate::special::gamma::{cos_pi, gamma};
use crate::special::humbert::humbert_xi2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharPoint {
    pub xi: f64,
    pub eta: f64,
}

impl CharPoint {
    /// A point of the closed triangle 0 ≤ ξ ≤ η ≤ 1.
    pub fn new(xi: f64, eta: f64) -> Result<Self> {
        let p = Self { xi, eta };
        if p.in_triangle() {
            Ok(p)
        } else {
            Err(Error::Domain(format!("(xi, eta) = ({xi}, {eta}) is outside 0 <= xi <= eta <= 1")))
        }
    }

    pub fn in_triangle(&self) -> bool {
        0.0 <= self.xi && self.xi <= self.eta && self.eta <= 1.0
    }
}

/// ξ = (2/(n+2)) x^{(n+2)/2} − (2/(m+2)) (−y)^{(m+2)/2},
/// η = (2/(n+2)) x^{(n+2)/2} + (2/(m+2)) (−y)^{(m+2)/2}.
///
/// The result is not checked against the triangle; on x = 0 it gives
/// ξ = −η, which [`CharPoint::in_triangle`] reports as outside.
pub fn char_coords(x: f64, y: f64, m: f64, n: f64) -> Result<CharPoint> {
    if !(x >= 0.0 && y <= 0.0) {
        return Err(Error::Domain(format!("(x, y) = ({x}, {y}) is outside x >= 0, y <= 0")));
    }
    let a = 2.0 / (n + 2.0) * x.powf(0.5 * (n + 2.0));
    let b = 2.0 / (m + 2.0) * (-y).powf(0.5 * (m + 2.0));
    Ok(CharPoint { xi: a - b, eta: a + b })
}

/// Inverse of [`char_coords`] on η ≥ |ξ|.
pub fn char_to_xy(p: CharPoint, m: f64, n: f64) -> Result<(f64, f64)> {
    let a = 0.5 * (p.eta + p.xi);
    let b = 0.5 * (p.eta - p.xi);
    if a < 0.0 || b < 0.0 {
        return Err(Error::Domain(format!("({}, {}) has no preimage with x >= 0, y <= 0", p.xi, p.eta)));
    }
    let x = (0.5 * (n + 2.0) * a).powf(2.0 / (n + 2.0));
    let y = -(0.5 * (m + 2.0) * b).powf(2.0 / (m + 2.0));
    Ok((x, y))
}

/// γ₂ = [2(1−2β)]^{2β−1} Γ(2−2β) / Γ(1−β).
pub fn gamma2(beta: f64) -> f64 {
    (2.0 * (1.0 - 2.0 * beta)).powf(2.0 * beta - 1.0) * gamma(2.0 - 2.0 * beta) / gamma(1.0 - beta)
}

/// u(ξ, ξ) = τ(ξ) and the weighted normal derivative ν, with the density
/// T once known.
#[derive(Debug, Clone)]
pub struct CauchyData {
    pub tau: GridFunction,
    pub nu: GridFunction,
    pub density: Option<GridFunction>,
}

/// u(0, η) = φ(η), ν, and the known function Φ of the Goursat problem.
#[derive(Debug, Clone)]
pub struct GoursatData {
    pub phi: GridFunction,
    pub nu: GridFunction,
    pub big_phi: GridFunction,
}

impl GoursatData {
    /// Ψ = 2 γ₂ cos(βπ) ν + Φ.
    pub fn psi(&self, params: &Parameters) -> impl Fn(f64) -> f64 + Sync + '_ {
        let scale = 2.0 * gamma2(params.beta) * cos_pi(params.beta);
        move |t| scale * self.nu.eval(t) + self.big_phi.eval(t)
    }
}

/// ((η+ξ)/2)^{−α} [ ∫₀^ξ K(t) below(t) dt + ∫_ξ^η K(t) above(t) dt ] with
/// K(t) = (η−t)^{−β} |ξ−t|^{−β} t^α Ξ₂(α, 1−α; 1−β; σ, ρ).
///
/// The lower piece splits at ξ/2. Near the origin a t^{2α} rule; on
/// (ξ/2, ξ) the map t = ξ + δ − δ e^{sL}, δ = η − ξ, L = ln(1 + ξ/(2δ)),
/// pulls nodes towards t = ξ as δ shrinks, with s^{−β} at t = ξ. The
/// upper piece uses (t−ξ)^{−β}(η−t)^{−β}.
fn two_piece(
    p: CharPoint,
    below: &(dyn Fn(f64) -> f64 + Sync),
    above: &(dyn Fn(f64) -> f64 + Sync),
    params: &Parameters,
    quad: &QuadratureSpec,
    ctrl: &SeriesControl,
) -> Result<f64> {
    if !p.in_triangle() {
        return Err(Error::Domain(format!("({}, {}) is outside the triangle", p.xi, p.eta)));
    }
    let Parameters { alpha, beta, lambda, .. } = *params;
    let CharPoint { xi, eta } = p;
    let sum = xi + eta;
    if sum == 0.0 {
        return Err(Error::Domain("the vertex xi = eta = 0 is singular".into()));
    }
    let kernel = |t: f64, eta_t: f64, xi_t: f64| -> Result<f64> {
        // eta_t = η − t, xi_t = t − ξ
        let sigma = eta_t * xi_t / (2.0 * t * sum);
        let rho = lambda * eta_t * xi_t;
        humbert_xi2(alpha, 1.0 - alpha, 1.0 - beta, sigma, rho, ctrl)?.checked()
    };
    let n = quad.n_nodes;

    let mut lower = 0.0;
    let delta = eta - xi;
    if xi > 0.0 {
        let mid = 0.5 * xi;
        // origin panel: nodes fixed in η, so its error is smooth in η
        let origin = GaussJacobi::cached(n, 2.0 * alpha, 0.0)?;
        lower += origin.try_integrate(0.0, mid, |t| {
            let k = kernel(t, eta - t, t - xi)?;
            Ok(t.powf(-alpha) * (eta - t).powf(-beta) * (xi - t).powf(-beta) * k * below(t))
        })?;
        if delta > 0.0 {
            let big_l = (mid / delta).ln_1p();
            let rule = GaussJacobi::cached(n, -beta, 0.0)?;
            lower += rule.try_integrate(0.0, 1.0, |s| {
                let e = (s * big_l).exp();
                let gap = delta * (s * big_l).exp_m1(); // ξ − t
                let t = xi - gap;
                let eta_t = delta * e;
                let k = kernel(t, eta_t, -gap)?;
                let ratio = if s == 0.0 { delta * big_l } else { gap / s };
                Ok(eta_t.powf(-beta) * ratio.powf(-beta) * t.powf(alpha) * k * below(t) * delta * big_l * e)
            })?;
        } else {
            let rule = GaussJacobi::cached(n, 0.0, -2.0 * beta)?;
            lower += rule.try_integrate(mid, xi, |t| {
                let d = xi - t;
                Ok(t.powf(alpha) * kernel(t, d, -d)? * below(t))
            })?;
        }
    }

    let mut upper = 0.0;
    if delta > 0.0 {
        let left = if xi == 0.0 { alpha - beta } else { -beta };
        let rule = GaussJacobi::cached(n, left, -beta)?;
        upper = rule.try_integrate(xi, eta, |t| {
            let t_pow = if xi == 0.0 { 1.0 } else { t.powf(alpha) };
            Ok(t_pow * kernel(t, eta - t, t - xi)? * above(t))
        })?;
    }
    Ok((0.5 * sum).powf(-alpha) * (lower + upper))
}

/// Solution of the Cauchy problem from its density T and ν, with
/// N(t) = T(t) / (2 cos βπ) − γ₂ ν(t) on (ξ, η).
pub fn cauchy_solution(
    p: CharPoint,
    data: &CauchyData,
    params: &Parameters,
    quad: &QuadratureSpec,
    ctrl: &SeriesControl,
) -> Result<f64> {
    params.require_theorem()?;
    let density = data
        .density
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("Cauchy data has no density T; recover it from tau first".into()))?;
    let inv_cos = 1.0 / (2.0 * cos_pi(params.beta));
    let g2 = gamma2(params.beta);
    let below = |t: f64| density.eval(t);
    let above = |t: f64| inv_cos * density.eval(t) - g2 * data.nu.eval(t);
    two_piece(p, &below, &above, params, quad, ctrl)
}

/// Solution of the Cauchy–Goursat problem: Ψ on (0, ξ) and Φ on (ξ, η).
pub fn goursat_solution(
    p: CharPoint,
    data: &GoursatData,
    params: &Parameters,
    quad: &QuadratureSpec,
    ctrl: &SeriesControl,
) -> Result<f64> {
    params.require_theorem()?;
    let psi = data.psi(params);
    let above = |t: f64| data.big_phi.eval(t);
    two_piece(p, &psi, &above, params, quad, ctrl)
}

/// Same kernel as [`cauchy_solution`] with both densities supplied
/// directly.
pub fn solution_from_densities(
    p: CharPoint,
    below: &GridFunction,
    above: &GridFunction,
    params: &Parameters,
    quad: &QuadratureSpec,
    ctrl: &SeriesControl,
) -> Result<f64> {
    two_piece(p, &|t| below.eval(t), &|t| above.eval(t), params, quad, ctrl)
}

/// τ(x) = u(x, x) for density T:
/// x^{−α} ∫₀ˣ (x−t)^{−2β} t^α Ξ₂(α, 1−α; 1−β; −(x−t)²/(4xt), −λ(x−t)²) T(t) dt.
pub fn tau_from_density(
    density: &GridFunction,
    x: f64,
    params: &Parameters,
    quad: &QuadratureSpec,
    ctrl: &SeriesControl,
) -> Result<f64> {
    let applied = params.with_lambda(SignConvention::Applications.effective_lambda(params.lambda));
    forward_n(density, x, &applied, quad, ctrl)
}

/// Inverts [`tau_from_density`] on `grid` with the inversion formula.
pub fn recover_density(
    tau: &GridFunction,
    params: &Parameters,
    quad: &QuadratureSpec,
    ctrl: &SeriesControl,
    dstep: f64,
    grid: &[f64],
) -> Result<GridFunction> {
    params.require_theorem()?;
    let applied = params.with_lambda(SignConvention::Applications.effective_lambda(params.lambda));
    let values: Vec<f64> = grid
        .par_iter()
        .map(|&x| inverse_t(tau, x, &applied, quad, ctrl, dstep))
        .collect::<Result<_>>()?;
    GridFunction::from_samples(grid.to_vec(), values)
}

/// ν on `grid` from τ when φ = 0: on η = ξ the Goursat solution gives
/// τ = [η = ξ transform of Ψ], so Ψ follows from the inversion formula
/// and ν = (Ψ − Φ) / (2 γ₂ cos βπ). A missing Φ is taken as zero.
#[allow(clippy::too_many_arguments)]
pub fn fundamental_relation(
    tau: &GridFunction,
    params: &Parameters,
    quad: &QuadratureSpec,
    ctrl: &SeriesControl,
    dstep: f64,
    grid: &[f64],
    big_phi: Option<&GridFunction>,
) -> Result<GridFunction> {
    let psi = recover_density(tau, params, quad, ctrl, dstep, grid)?;
    let scale = 2.0 * gamma2(params.beta) * cos_pi(params.beta);
    psi.resampled(|t, v| (v - big_phi.map_or(0.0, |f| f.eval(t))) / scale)
}

/// Central-difference residual of the equation at `p` with step h.
pub fn pde9_residual(
    u_eval: impl Fn(CharPoint) -> Result<f64>,
    p: CharPoint,
    params: &Parameters,
    h: f64,
) -> Result<f64> {
    let CharPoint { xi, eta } = p;
    if !(h > 0.0 && xi - h >= 0.0 && eta + h <= 1.0 && xi + h < eta - h) {
        return Err(Error::StencilOutOfDomain(format!(
            "stencil of half-width {h} around ({xi}, {eta}) leaves the triangle interior"
        )));
    }
    let u = |dx: f64, de: f64| u_eval(CharPoint { xi: xi + dx, eta: eta + de });
    let c = u(0.0, 0.0)?;
    let u_xi = (u(h, 0.0)? - u(-h, 0.0)?) / (2.0 * h);
    let u_eta = (u(0.0, h)? - u(0.0, -h)?) / (2.0 * h);
    let u_xe = (u(h, h)? - u(h, -h)? - u(-h, h)? + u(-h, -h)?) / (4.0 * h * h);
    let Parameters { alpha, beta, lambda, .. } = *params;
    Ok(u_xe + alpha / (eta + xi) * (u_eta + u_xi) - beta / (eta - xi) * (u_eta - u_xi) + lambda * c)
}

/// Fits f(ε) = L + Σ_j c_j ε^{p_j} through the samples and returns L.
///
/// With as many samples as unknowns the fit interpolates; with more it
/// is a least-squares fit.
pub fn extrapolate_to_zero(eps: &[f64], values: &[f64], powers: &[f64]) -> Result<f64> {
    let cols = powers.len() + 1;
    if eps.len() != values.len() || eps.len() < cols {
        return Err(Error::InvalidInput(format!(
            "need at least {cols} samples for {} powers, got {}",
            powers.len(),
            eps.len()
        )));
    }
    let a = DMatrix::from_fn(eps.len(), cols, |i, j| if j == 0 { 1.0 } else { eps[i].powf(powers[j - 1]) });
    let b = DVector::from_column_slice(values);
    let sol = a
        .svd(true, true)
        .solve(&b, 1e-14)
        .map_err(|e| Error::InvalidInput(format!("extrapolation fit failed: {e}")))?;
    Ok(sol[0])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CauchyCheckPoint {
    pub xi: f64,
    pub tau: f64,
    pub tau_limit: f64,
    pub tau_deviation: f64,
    pub nu: f64,
    pub nu_limit: f64,
    pub nu_deviation: f64,
    /// nu_limit / nu where ν ≠ 0.
    pub nu_factor: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CauchyCheckReport {
    pub eps: Vec<f64>,
    pub points: Vec<CauchyCheckPoint>,
    pub max_tau_deviation: f64,
    pub max_nu_deviation: f64,
    /// Median of the per-point factors, when any exist.
    pub measured_nu_factor: Option<f64>,
}

/// p, q, p+1, q+1, ... sorted ascending, first `count`.
fn correction_powers(p: f64, q: f64, count: usize) -> Vec<f64> {
    let mut out: Vec<f64> = (0..count).flat_map(|k| [p + k as f64, q + k as f64]).collect();
    out.sort_by(f64::total_cmp);
    out.dedup();
    out.truncate(count);
    out
}

pub const DEFAULT_LIMIT_EPS: [f64; 3] = [1e-2, 3.162_277_660_168_379_5e-3, 1e-3];

/// Compares the solution near the line η = ξ with its Cauchy data.
///
/// The trace u(ξ, ξ+ε) is extrapolated to ε = 0 with correction powers
/// ε, ε^{1−2β}, ε², ... The weighted derivative
/// [2(1−2β)]^{−2β} ε^{2β} (u_η − u_ξ)(ξ, ξ+ε) is extrapolated with powers
/// ε^{1+2β}, ε, ε^{2+2β}, ...; one power fewer than there are samples.
/// The derivative runs along (−1, 1), which keeps η + ξ fixed, with a
/// five-point stencil of step ε/32.
pub fn verify_cauchy_data(
    data: &CauchyData,
    params: &Parameters,
    quad: &QuadratureSpec,
    ctrl: &SeriesControl,
    eps_list: &[f64],
    xis: &[f64],
) -> Result<CauchyCheckReport> {
    if eps_list.windows(2).any(|w| w[0] <= w[1]) || eps_list.iter().any(|&e| e <= 0.0) {
        return Err(Error::InvalidInput("eps_list must be positive and decreasing".into()));
    }
    if eps_list.len() < 2 {
        return Err(Error::InvalidInput("eps_list needs at least two values".into()));
    }
    let beta = params.beta;
    let scale = (2.0 * (1.0 - 2.0 * beta)).powf(-2.0 * beta);
    let n_powers = eps_list.len() - 1;
    let trace_powers = correction_powers(1.0 - 2.0 * beta, 1.0, n_powers);
    let weighted_powers = correction_powers(1.0, 1.0 + 2.0 * beta, n_powers);
    let points: Vec<CauchyCheckPoint> = xis
        .par_iter()
        .map(|&xi| -> Result<CauchyCheckPoint> {
            let u = |x: f64, e: f64| cauchy_solution(CharPoint { xi: x, eta: e }, data, params, quad, ctrl);
            let mut trace = Vec::with_capacity(eps_list.len());
            let mut weighted = Vec::with_capacity(eps_list.len());
            for &eps in eps_list {
                if xi - eps / 4.0 < 0.0 || xi + eps + eps / 4.0 > 1.0 {
                    return Err(Error::StencilOutOfDomain(format!("xi = {xi} too close to the edge for eps = {eps}")));
                }
                trace.push(u(xi, xi + eps)?);
                let h = eps / 32.0;
                let g = |s: f64| u(xi - s, xi + eps + s);
                let d = (-g(2.0 * h)? + 8.0 * g(h)? - 8.0 * g(-h)? + g(-2.0 * h)?) / (12.0 * h);
                weighted.push(scale * eps.powf(2.0 * beta) * d);
            }
            let tau_limit = extrapolate_to_zero(eps_list, &trace, &trace_powers)?;
            let nu_limit = extrapolate_to_zero(eps_list, &weighted, &weighted_powers)?;
            let tau = data.tau.eval(xi);
            let nu = data.nu.eval(xi);
            Ok(CauchyCheckPoint {
                xi,
                tau,
                tau_limit,
                tau_deviation: (tau_limit - tau).abs(),
                nu,
                nu_limit,
                nu_deviation: (nu_limit - nu).abs(),
                nu_factor: (nu.abs() > 1e-12).then(|| nu_limit / nu),
            })
        })
        .collect::<Result<_>>()?;
    let max_tau_deviation = points.iter().map(|p| p.tau_deviation).fold(0.0, f64::max);
    let max_nu_deviation = points.iter().map(|p| p.nu_deviation).fold(0.0, f64::max);
    let mut factors: Vec<f64> = points.iter().filter_map(|p| p.nu_factor).collect();
    factors.sort_by(f64::total_cmp);
    let measured_nu_factor = (!factors.is_empty()).then(|| factors[factors.len() / 2]);
    Ok(CauchyCheckReport {
        eps: eps_list.to_vec(),
        points,
        max_tau_deviation,
        max_nu_deviation,
        measured_nu_factor,
    })
}
