//! Two-variable confluent series built from Gauss rows.
//!
//! Both functions are summed as a series over the confluent index n whose
//! rows are Gauss functions with shifted lower parameter, using
//! (e)_{m+n} = (e)_n (e+n)_m. Each row is finite for every u < 1, so the
//! sums are valid on the whole half-line u <= 0 where the kernels live.

use crate::error::{Error, Result};
use crate::series::{HypergeomValue, SeriesControl, TailCounter};
use crate::special::gamma::is_nonpositive_integer;
use crate::special::gauss::GaussRow;

/// Humbert function
/// Ξ₂(a, b; d; u, w) = Σ_{m,n} (a)_m (b)_m u^m w^n / (m! n! (d)_{m+n}).
pub fn humbert_xi2(a: f64, b: f64, d: f64, u: f64, w: f64, ctrl: &SeriesControl) -> Result<HypergeomValue> {
    if is_nonpositive_integer(d) {
        return Err(Error::PoleParameter { name: "d", value: d });
    }
    check_finite(&[a, b, d, u, w])?;
    let row = GaussRow::new(a, b, u)?;
    sum_rows(
        ctrl,
        |n| w / ((n + 1.0) * (d + n)),
        |n| row.eval(d + n, ctrl),
    )
}

/// The generalized function
/// F(b, c; d; e; g; x, y) = Σ_{m,n} (b)_m (c)_m (d)_n x^m y^n / ((e)_{m+n} (g)_n m! n!),
/// which reduces to Ξ₂(b, c; e; x, y) when g = d.
#[allow(clippy::too_many_arguments)]
pub fn f0211(b: f64, c: f64, d: f64, e: f64, g: f64, x: f64, y: f64, ctrl: &SeriesControl) -> Result<HypergeomValue> {
    if is_nonpositive_integer(e) {
        return Err(Error::PoleParameter { name: "e", value: e });
    }
    if is_nonpositive_integer(g) {
        return Err(Error::PoleParameter { name: "g", value: g });
    }
    check_finite(&[b, c, d, e, g, x, y])?;
    let row = GaussRow::new(b, c, x)?;
    sum_rows(
        ctrl,
        |n| (d + n) * y / ((n + 1.0) * (g + n) * (e + n)),
        |n| row.eval(e + n, ctrl),
    )
}

fn check_finite(values: &[f64]) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("non-finite argument in {values:?}")))
    }
}

/// Σ_n coef_n · row_n with coef_0 = 1 and coef_{n+1} = coef_n · ratio(n).
fn sum_rows(
    ctrl: &SeriesControl,
    ratio: impl Fn(f64) -> f64,
    mut row: impl FnMut(f64) -> Result<HypergeomValue>,
) -> Result<HypergeomValue> {
    let mut coef = 1.0;
    let mut sum = 0.0;
    let mut abs_sum = 0.0;
    let mut err = 0.0;
    let mut inner_ok = true;
    let mut terms = 0usize;
    let mut tail = TailCounter::default();
    let mut n = 0usize;
    loop {
        let nf = n as f64;
        let r = row(nf)?;
        let term = coef * r.value;
        sum += term;
        abs_sum += term.abs();
        err += coef.abs() * r.est_error;
        inner_ok &= r.converged;
        terms += r.terms_used;
        let next = ratio(nf);
        if next == 0.0 {
            // w = 0 or a terminating numerator parameter
            return Ok(HypergeomValue {
                value: sum,
                terms_used: terms,
                converged: inner_ok,
                est_error: err + f64::EPSILON * abs_sum,
            });
        }
        // rows tend to 1, so the coefficient ratio governs decay
        if tail.push(term, sum, next.abs() < 1.0, ctrl) {
            return Ok(HypergeomValue {
                value: sum,
                terms_used: terms,
                converged: inner_ok,
                est_error: err + term.abs() * 2.0 * next.abs() / (1.0 - next.abs()) + f64::EPSILON * abs_sum,
            });
        }
        n += 1;
        if n >= ctrl.max_outer_terms || !sum.is_finite() {
            return Ok(HypergeomValue {
                value: sum,
                terms_used: terms,
                converged: false,
                est_error: err + term.abs(),
            });
        }
        coef *= next;
    }
}
