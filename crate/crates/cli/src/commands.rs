//! Resolution of the command line into a run configuration and dispatch.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use hv_core::kernel::lemma_tolerance;
use hv_core::*;
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{CauchyInputs, Cli, Command, Common, DirectionArg, Format, SignArg};
use crate::error::{CliError, CliResult};
use crate::input::read_grid_function;
use crate::report::Row;

/// Sup-norm budget of the round-trip identities.
const ROUNDTRIP_BUDGET: f64 = 1e-4;
/// Agreement required between the closed-form τ′ and a difference quotient.
const TAU_PRIME_BUDGET: f64 = 1e-5;
const TRACE_BUDGET: f64 = 1e-4;
const NORMAL_DERIVATIVE_BUDGET: f64 = 1e-3;
/// Interior nodes of the grid a density is recovered on before solving.
const RECOVERY_NODES: usize = 32;

/// Everything a run depends on, embedded in each report.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub params: Option<Parameters>,
    pub degeneracy: Option<DegeneracyInput>,
    pub sign_convention: &'static str,
    /// λ as fed to the operators after the sign convention.
    pub operator_lambda: Option<f64>,
    pub series: SeriesControl,
    pub quadrature: QuadratureSpec,
    pub dstep: f64,
    pub grid: Option<usize>,
    pub inputs: BTreeMap<&'static str, String>,
    pub options: Row,
    pub format: &'static str,
}

pub struct Outcome {
    pub config: RunConfig,
    pub rows: Vec<Row>,
    pub summary: Row,
    /// Verification commands report whether their check held.
    pub passed: Option<bool>,
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn resolve_params(c: &Common) -> CliResult<(Option<Parameters>, Option<DegeneracyInput>)> {
    let direct = c.alpha.is_some() || c.beta.is_some() || c.lambda.is_some();
    let degenerate = c.m.is_some() || c.n.is_some() || c.mu.is_some();
    match (direct, degenerate) {
        (true, true) => Err(config_err("give either --alpha/--beta/--lambda or --m/--n/--mu, not both")),
        (false, false) => Ok((None, None)),
        (true, false) => {
            let (Some(alpha), Some(beta)) = (c.alpha, c.beta) else {
                return Err(config_err("--alpha and --beta are both required"));
            };
            let lambda = c.lambda.unwrap_or(0.0);
            if ![alpha, beta, lambda].iter().all(|v| v.is_finite()) {
                return Err(config_err("parameters must be finite"));
            }
            Ok((Some(Parameters::new(alpha, beta, lambda)), None))
        }
        (false, true) => {
            let (Some(m), Some(n)) = (c.m, c.n) else {
                return Err(config_err("--m and --n are both required"));
            };
            let d = DegeneracyInput { m, n, mu: c.mu.unwrap_or(0.0) };
            Ok((Some(params_from_degeneracy(d)?), Some(d)))
        }
    }
}

fn needs_params(cmd: &Command) -> bool {
    !matches!(cmd, Command::EvalXi2 { .. } | Command::EvalF0211 { .. } | Command::Eval2f1 { .. } | Command::Convergence { .. })
}

/// Commands that apply N or T directly and so honour --sign-convention.
fn uses_operator_sign(cmd: &Command) -> bool {
    matches!(cmd, Command::ApplyForward | Command::ApplyInverse | Command::Roundtrip { .. } | Command::TauPrimeCheck)
}

fn path_text(p: &Path) -> String {
    p.display().to_string()
}

fn collect_inputs(cli: &Cli) -> BTreeMap<&'static str, String> {
    let mut m = BTreeMap::new();
    if let Some(p) = &cli.common.input {
        m.insert("in", path_text(p));
    }
    let mut cauchy = |d: &CauchyInputs| {
        if let Some(p) = &d.density {
            m.insert("density", path_text(p));
        }
        if let Some(p) = &d.tau {
            m.insert("tau", path_text(p));
        }
        m.insert("nu", path_text(&d.nu));
    };
    match &cli.command {
        Command::SolveCauchy { data } | Command::CheckPde { data, .. } | Command::VerifyCauchyData { data, .. } => cauchy(data),
        Command::SolveGoursat { nu, big_phi, phi } => {
            m.insert("nu", path_text(nu));
            m.insert("big_phi", path_text(big_phi));
            if let Some(p) = phi {
                m.insert("phi", path_text(p));
            }
        }
        Command::FundamentalRelation { big_phi: Some(p) } => {
            m.insert("big_phi", path_text(p));
        }
        _ => {}
    }
    m
}

fn options(cmd: &Command) -> Row {
    match cmd {
        Command::EvalXi2 { a, b, d, u, w } => Row::new().num("a", *a).num("b", *b).num("d", *d).num("u", *u).num("w", *w),
        Command::EvalF0211 { b, c, d, e, g, x, y } => Row::new()
            .num("b", *b)
            .num("c", *c)
            .num("d", *d)
            .num("e", *e)
            .num("g", *g)
            .num("x", *x)
            .num("y", *y),
        Command::Eval2f1 { a, b, c, z } => Row::new().num("a", *a).num("b", *b).num("c", *c).num("z", *z),
        Command::Convergence { signature, x, y } => Row::new()
            .text("signature", signature.iter().map(u32::to_string).collect::<Vec<_>>().join(","))
            .num("x", *x)
            .num("y", *y),
        Command::Roundtrip { direction } => Row::new().text("direction", direction_name(*direction)),
        Command::VerifyKernelLemma { lambdas: Some(l) } => {
            Row::new().text("lambdas", l.iter().map(|v| crate::report::fixed(*v)).collect::<Vec<_>>().join(","))
        }
        Command::CheckPde { h, .. } => Row::new().num("h", *h),
        Command::VerifyCauchyData { eps: Some(e), .. } => {
            Row::new().text("eps", e.iter().map(|v| crate::report::fixed(*v)).collect::<Vec<_>>().join(","))
        }
        _ => Row::new(),
    }
}

fn direction_name(d: DirectionArg) -> &'static str {
    match d {
        DirectionArg::Tn => "TN",
        DirectionArg::Nt => "NT",
    }
}

pub fn resolve(cli: &Cli) -> CliResult<RunConfig> {
    let c = &cli.common;
    let (params, degeneracy) = resolve_params(c)?;
    if needs_params(&cli.command) && params.is_none() {
        return Err(config_err(format!("{} needs --alpha/--beta[/--lambda] or --m/--n[/--mu]", cli.command.name())));
    }
    let series = SeriesControl::default().with_rel_tol(c.rel_tol);
    series.validate()?;
    if c.nodes == 0 {
        return Err(config_err("--nodes must be at least 1"));
    }
    if !(c.dstep > 0.0 && c.dstep < 0.5) {
        return Err(config_err(format!("--dstep must lie in (0, 0.5), got {}", c.dstep)));
    }
    if c.grid == Some(0) {
        return Err(config_err("--grid must be at least 1"));
    }
    let sign = match c.sign_convention {
        SignArg::Paper2 => SignConvention::Operator,
        SignArg::Applications => SignConvention::Applications,
    };
    let operator_lambda = params
        .filter(|_| uses_operator_sign(&cli.command))
        .map(|p| sign.effective_lambda(p.lambda));
    Ok(RunConfig {
        command: cli.command.name(),
        params,
        degeneracy,
        sign_convention: match c.sign_convention {
            SignArg::Paper2 => "paper2",
            SignArg::Applications => "applications",
        },
        operator_lambda,
        series,
        quadrature: QuadratureSpec::with_nodes(c.nodes),
        dstep: c.dstep,
        grid: c.grid,
        inputs: collect_inputs(cli),
        options: options(&cli.command),
        format: match c.format {
            Format::Csv => "csv",
            Format::Json => "json",
        },
    })
}

/// i/(n+1), i = 1..n.
fn interior(n: usize) -> Vec<f64> {
    (1..=n).map(|i| i as f64 / (n + 1) as f64).collect()
}

/// (i/(n+1), j/(n+1)) with 1 ≤ i ≤ j ≤ n.
fn triangle(n: usize) -> Vec<CharPoint> {
    let h = 1.0 / (n + 1) as f64;
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i..=n {
            out.push(CharPoint { xi: i as f64 * h, eta: j as f64 * h });
        }
    }
    out
}

fn value_row(hv: HypergeomValue) -> Row {
    Row::new()
        .num("output", hv.value)
        .num("est_error", hv.est_error)
        .flag("converged", hv.converged)
        .int("terms", hv.terms_used as i64)
}

fn require_input(cli: &Cli) -> CliResult<PathBuf> {
    cli.common
        .input
        .clone()
        .ok_or_else(|| config_err(format!("{} needs --in PATH (CSV `t,value`)", cli.command.name())))
}

fn fixture(f: fn(f64) -> f64, df: fn(f64) -> f64) -> GridFunction {
    GridFunction::from_fn_with_derivative(uniform_grid(16), f, df).expect("fixed grid is valid")
}

fn half_rule(q: &QuadratureSpec) -> QuadratureSpec {
    QuadratureSpec::with_nodes((q.n_nodes / 2).max(1))
}

struct Ctx<'a> {
    cfg: &'a RunConfig,
    params: Parameters,
}

impl Ctx<'_> {
    fn op_params(&self) -> Parameters {
        self.params.with_lambda(self.cfg.operator_lambda.unwrap_or(self.params.lambda))
    }

    fn quad(&self) -> &QuadratureSpec {
        &self.cfg.quadrature
    }

    fn ctrl(&self) -> &SeriesControl {
        &self.cfg.series
    }

    fn grid(&self, default: usize) -> usize {
        self.cfg.grid.unwrap_or(default)
    }

    /// Density from --density, or recovered from --tau.
    fn density(&self, d: &CauchyInputs) -> CliResult<GridFunction> {
        match (&d.density, &d.tau) {
            (Some(p), _) => read_grid_function(p),
            (None, Some(p)) => {
                let tau = read_grid_function(p)?;
                let grid = interior(RECOVERY_NODES);
                Ok(recover_density(&tau, &self.params, self.quad(), self.ctrl(), self.cfg.dstep, &grid)?)
            }
            (None, None) => Err(config_err("give --density or --tau")),
        }
    }

    fn cauchy_data(&self, d: &CauchyInputs) -> CliResult<CauchyData> {
        let density = self.density(d)?;
        let nu = read_grid_function(&d.nu)?;
        let tau = match &d.tau {
            Some(p) => read_grid_function(p)?,
            None => {
                let nodes = interior(RECOVERY_NODES);
                let values = nodes
                    .par_iter()
                    .map(|&x| tau_from_density(&density, x, &self.params, self.quad(), self.ctrl()))
                    .collect::<Result<Vec<_>, _>>()?;
                GridFunction::from_samples(nodes, values)?
            }
        };
        Ok(CauchyData { tau, nu, density: Some(density) })
    }
}

pub fn run(cli: &Cli) -> CliResult<Outcome> {
    let cfg = resolve(cli)?;
    let (rows, summary, passed) = dispatch(cli, &cfg)?;
    Ok(Outcome { config: cfg, rows, summary, passed })
}

type Produced = (Vec<Row>, Row, Option<bool>);

fn dispatch(cli: &Cli, cfg: &RunConfig) -> CliResult<Produced> {
    let ctrl = &cfg.series;
    match &cli.command {
        Command::EvalXi2 { a, b, d, u, w } => {
            let v = humbert_xi2(*a, *b, *d, *u, *w, ctrl)?;
            Ok((vec![options(&cli.command).append(value_row(v))], Row::new().flag("converged", v.converged), None))
        }
        Command::EvalF0211 { b, c, d, e, g, x, y } => {
            let v = f0211(*b, *c, *d, *e, *g, *x, *y, ctrl)?;
            Ok((vec![options(&cli.command).append(value_row(v))], Row::new().flag("converged", v.converged), None))
        }
        Command::Eval2f1 { a, b, c, z } => {
            let v = gauss_2f1(*a, *b, *c, *z, ctrl)?;
            Ok((vec![options(&cli.command).append(value_row(v))], Row::new().flag("converged", v.converged), None))
        }
        Command::Convergence { signature, x, y } => {
            let s = Signature::new(signature[0], signature[1], signature[2], signature[3], signature[4], signature[5]);
            let class = convergence_classification(s, *x, *y);
            let row = options(&cli.command).text("classification", format!("{class:?}"));
            Ok((vec![row], Row::new().text("classification", format!("{class:?}")), None))
        }
        _ => {
            let ctx = Ctx { cfg, params: cfg.params.expect("checked in resolve") };
            dispatch_with_params(cli, &ctx)
        }
    }
}

fn dispatch_with_params(cli: &Cli, ctx: &Ctx<'_>) -> CliResult<Produced> {
    let (quad, ctrl, dstep) = (ctx.quad(), ctx.ctrl(), ctx.cfg.dstep);
    match &cli.command {
        Command::ApplyForward => {
            let v = read_grid_function(&require_input(cli)?)?;
            let p = ctx.op_params();
            let half = half_rule(quad);
            let rows = interior(ctx.grid(17))
                .par_iter()
                .map(|&x| -> CliResult<Row> {
                    let out = forward_n(&v, x, &p, quad, ctrl)?;
                    let coarse = forward_n(&v, x, &p, &half, ctrl)?;
                    Ok(Row::new().num("x", x).num("output", out).num("est_error", (out - coarse).abs()).flag("converged", true))
                })
                .collect::<CliResult<Vec<_>>>()?;
            Ok((rows, Row::new(), None))
        }
        Command::ApplyInverse => {
            let tau = read_grid_function(&require_input(cli)?)?;
            let p = ctx.op_params();
            let half = half_rule(quad);
            let rows = interior(ctx.grid(17))
                .par_iter()
                .map(|&x| -> CliResult<Row> {
                    let out = inverse_t(&tau, x, &p, quad, ctrl, dstep)?;
                    let coarse = inverse_t(&tau, x, &p, &half, ctrl, dstep)?;
                    Ok(Row::new().num("x", x).num("output", out).num("est_error", (out - coarse).abs()).flag("converged", true))
                })
                .collect::<CliResult<Vec<_>>>()?;
            Ok((rows, Row::new(), None))
        }
        Command::Roundtrip { direction } => {
            let (dir, default_seed) = match direction {
                DirectionArg::Tn => (Direction::TN, fixture(|t| 1.0 + t * t, |t| 2.0 * t)),
                DirectionArg::Nt => (Direction::NT, fixture(|t| t * t, |t| 2.0 * t)),
            };
            let seed = match &cli.common.input {
                Some(p) => read_grid_function(p)?,
                None => default_seed,
            };
            if dir == Direction::NT {
                let scale = seed.values().iter().fold(1.0f64, |m, v| m.max(v.abs()));
                if seed.eval(0.0).abs() > 1e-10 * scale {
                    return Err(config_err("the NT direction needs a seed with tau(0) = 0"));
                }
            }
            let report = roundtrip_check(&seed, dir, &interior(ctx.grid(17)), &ctx.op_params(), quad, ctrl, dstep)?;
            let rows = report
                .points
                .iter()
                .map(|p| Row::new().num("x", p.x).num("expected", p.expected).num("output", p.computed).num("residual", p.residual))
                .collect();
            let passed = report.sup_residual < ROUNDTRIP_BUDGET;
            let summary = Row::new()
                .text("direction", direction_name(*direction))
                .num("sup_residual", report.sup_residual)
                .num("budget", ROUNDTRIP_BUDGET)
                .flag("passed", passed);
            Ok((rows, summary, Some(passed)))
        }
        Command::VerifyKernelLemma { lambdas } => {
            let lambdas = lambdas.clone().unwrap_or_else(|| vec![ctx.params.lambda]);
            let samples = lemma_samples(ctx.grid(25), &lambdas);
            let report = verify_lemma(&ctx.params, &samples, ctrl)?;
            let rows = report
                .samples
                .iter()
                .map(|s| {
                    Row::new()
                        .num("x", s.x)
                        .num("s", s.s)
                        .num("z", s.z)
                        .num("lambda", s.lambda)
                        .num("output", s.w_value)
                        .num("target", s.target)
                        .num("abs_err", s.abs_err)
                        .num("condition", s.condition)
                        .num("tolerance", s.tolerance)
                        .flag("passed", s.passed)
                        .text("error", s.error.clone().unwrap_or_default())
                })
                .collect();
            let unwidened = report
                .samples
                .iter()
                .filter(|s| s.abs_err.is_nan() || s.abs_err >= lemma_tolerance(s.lambda))
                .count();
            let passed = report.failures == 0;
            let summary = Row::new()
                .int("samples", report.samples.len() as i64)
                .num("max_abs_err", report.max_abs_err)
                .int("failures", report.failures as i64)
                .int("unwidened_failures", unwidened as i64)
                .flag("passed", passed);
            Ok((rows, summary, Some(passed)))
        }
        Command::TauPrimeCheck => {
            let v = match &cli.common.input {
                Some(p) => read_grid_function(p)?,
                None => fixture(|t| 1.0 + t * t, |t| 2.0 * t),
            };
            let p = ctx.op_params();
            let rows = interior(ctx.grid(10))
                .par_iter()
                .map(|&t| -> CliResult<Row> {
                    let closed = tau_prime_expansion(&v, t, &p, quad, ctrl)?;
                    let numeric = difference_quotient(|x| forward_n(&v, x, &p, quad, ctrl), t)?;
                    Ok(Row::new()
                        .num("t", t)
                        .num("output", closed)
                        .num("difference_quotient", numeric)
                        .num("abs_err", (closed - numeric).abs()))
                })
                .collect::<CliResult<Vec<_>>>()?;
            let max = max_of(&rows, "abs_err");
            let passed = max < TAU_PRIME_BUDGET;
            Ok((rows, Row::new().num("max_abs_err", max).num("budget", TAU_PRIME_BUDGET).flag("passed", passed), Some(passed)))
        }
        Command::SolveCauchy { data } => {
            let data = ctx.cauchy_data(data)?;
            let rows = solve_on_triangle(ctx.grid(8), |p| cauchy_solution(p, &data, &ctx.params, quad, ctrl))?;
            Ok((rows, Row::new(), None))
        }
        Command::SolveGoursat { nu, big_phi, phi } => {
            let phi = match phi {
                Some(p) => read_grid_function(p)?,
                None => GridFunction::from_samples(vec![0.0, 1.0], vec![0.0, 0.0])?,
            };
            let data = GoursatData { phi, nu: read_grid_function(nu)?, big_phi: read_grid_function(big_phi)? };
            let rows = solve_on_triangle(ctx.grid(8), |p| goursat_solution(p, &data, &ctx.params, quad, ctrl))?;
            Ok((rows, Row::new(), None))
        }
        Command::RecoverDensity => {
            let tau = read_grid_function(&require_input(cli)?)?;
            let grid = interior(ctx.grid(17));
            let out = recover_density(&tau, &ctx.params, quad, ctrl, dstep, &grid)?;
            Ok((xy_rows(&out), Row::new(), None))
        }
        Command::FundamentalRelation { big_phi } => {
            let tau = read_grid_function(&require_input(cli)?)?;
            let big_phi = big_phi.as_deref().map(read_grid_function).transpose()?;
            let grid = interior(ctx.grid(17));
            let out = fundamental_relation(&tau, &ctx.params, quad, ctrl, dstep, &grid, big_phi.as_ref())?;
            Ok((xy_rows(&out), Row::new(), None))
        }
        Command::CheckPde { data, h } => {
            if h.is_nan() || *h <= 0.0 {
                return Err(config_err("--h must be positive"));
            }
            let data = ctx.cauchy_data(data)?;
            let u = |p: CharPoint| cauchy_solution(p, &data, &ctx.params, quad, ctrl);
            let points: Vec<CharPoint> = triangle(ctx.grid(4)).into_iter().filter(|p| p.xi < p.eta).collect();
            let rows = points
                .par_iter()
                .map(|&p| -> CliResult<Row> {
                    let coarse = pde9_residual(u, p, &ctx.params, *h)?;
                    let fine = pde9_residual(u, p, &ctx.params, 0.5 * h)?;
                    Ok(Row::new()
                        .num("xi", p.xi)
                        .num("eta", p.eta)
                        .num("residual_h", coarse)
                        .num("residual_half_h", fine)
                        .num("ratio", coarse / fine))
                })
                .collect::<CliResult<Vec<_>>>()?;
            let ratios: Vec<f64> = rows.iter().filter_map(|r| as_num(r, "ratio")).collect();
            let passed = ratios.iter().all(|r| (3.5..=4.5).contains(r));
            let summary = Row::new()
                .num("min_ratio", ratios.iter().copied().fold(f64::INFINITY, f64::min))
                .num("max_ratio", ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max))
                .num("sup_residual", max_of(&rows, "residual_half_h"))
                .flag("passed", passed);
            Ok((rows, summary, Some(passed)))
        }
        Command::VerifyCauchyData { data, eps } => {
            let data = ctx.cauchy_data(data)?;
            let eps = eps.clone().unwrap_or_else(|| DEFAULT_LIMIT_EPS.to_vec());
            let xis = interior(ctx.grid(5));
            let report = verify_cauchy_data(&data, &ctx.params, quad, ctrl, &eps, &xis)?;
            let rows = report
                .points
                .iter()
                .map(|p| {
                    Row::new()
                        .num("xi", p.xi)
                        .num("tau", p.tau)
                        .num("tau_limit", p.tau_limit)
                        .num("tau_deviation", p.tau_deviation)
                        .num("nu", p.nu)
                        .num("nu_limit", p.nu_limit)
                        .num("nu_deviation", p.nu_deviation)
                        .opt_num("nu_factor", p.nu_factor)
                })
                .collect();
            let tau_ok = report.max_tau_deviation < TRACE_BUDGET;
            let nu_ok = report.max_nu_deviation < NORMAL_DERIVATIVE_BUDGET;
            let summary = Row::new()
                .num("max_tau_deviation", report.max_tau_deviation)
                .num("max_nu_deviation", report.max_nu_deviation)
                .opt_num("measured_nu_factor", report.measured_nu_factor)
                .flag("tau_passed", tau_ok)
                .flag("nu_passed", nu_ok)
                .flag("passed", tau_ok && nu_ok);
            Ok((rows, summary, Some(tau_ok && nu_ok)))
        }
        Command::EvalXi2 { .. } | Command::EvalF0211 { .. } | Command::Eval2f1 { .. } | Command::Convergence { .. } => {
            unreachable!("handled without parameters")
        }
    }
}

/// The standard 25 pairs when `count` ≤ 25, else a k×k grid in the same ranges.
fn lemma_samples(count: usize, lambdas: &[f64]) -> Vec<(f64, f64, f64)> {
    let pairs: Vec<(f64, f64)> = if count <= 25 {
        lemma_grid(&[0.0]).into_iter().take(count).map(|(x, s, _)| (x, s)).collect()
    } else {
        let k = (count as f64).sqrt().ceil() as usize;
        let lin = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * i as f64 / (k - 1) as f64;
        (0..k)
            .flat_map(|i| (0..k).map(move |j| (i, j)))
            .take(count)
            .map(|(i, j)| {
                let x = lin(0.2, 0.95, i);
                (x, lin(0.25, 0.85, j) * x)
            })
            .collect()
    };
    lambdas.iter().flat_map(|&l| pairs.iter().map(move |&(x, s)| (x, s, l))).collect()
}

/// Fourth-order central difference with step 1e-3·t.
fn difference_quotient(f: impl Fn(f64) -> hv_core::Result<f64>, t: f64) -> hv_core::Result<f64> {
    let h = 1e-3 * t;
    if t + 2.0 * h > 1.0 {
        return Err(hv_core::Error::StencilOutOfDomain(format!("t = {t} is too close to 1 for the difference quotient")));
    }
    Ok((f(t - 2.0 * h)? - 8.0 * f(t - h)? + 8.0 * f(t + h)? - f(t + 2.0 * h)?) / (12.0 * h))
}

fn solve_on_triangle(n: usize, u: impl Fn(CharPoint) -> hv_core::Result<f64> + Sync) -> CliResult<Vec<Row>> {
    triangle(n)
        .par_iter()
        .map(|&p| Ok(Row::new().num("xi", p.xi).num("eta", p.eta).num("output", u(p)?)))
        .collect()
}

fn xy_rows(f: &GridFunction) -> Vec<Row> {
    f.nodes().iter().zip(f.values()).map(|(&x, &v)| Row::new().num("x", x).num("output", v)).collect()
}

fn as_num(row: &Row, key: &str) -> Option<f64> {
    match row.get(key) {
        Some(crate::report::Cell::Num(v)) => Some(*v),
        _ => None,
    }
}

fn max_of(rows: &[Row], key: &str) -> f64 {
    rows.iter().filter_map(|r| as_num(r, key)).fold(0.0, f64::max)
}
