//! Gauss hypergeometric function 2F1(a, b; c; z) for real z < 1.
//!
//! Negative arguments are mapped into (0, 1) by the Pfaff transformation.
//! On (0, 1) the defining series is summed up to `DIRECT_MAX`; above that
//! the function is continued from z = 1 with the connection formulas,
//! including the logarithmic ones when c - a - b is an integer.

use crate::error::{Error, Result};
use crate::series::{HypergeomValue, SeriesControl, TailCounter};
use crate::special::gamma::{digamma, gamma_ratio, is_nonpositive_integer};

/// Largest argument summed directly by the defining series.
const POSITIVE_DIRECT_MAX: f64 = 0.95;
const DIRECT_MAX: f64 = 0.75;

/// c - a - b closer than this to an integer is treated as that integer.
const INTEGER_SNAP: f64 = 1e-9;

/// 2F1(a, b; c; z).
///
/// `z` must be below 1; `c` must not be a nonpositive integer.
pub fn gauss_2f1(a: f64, b: f64, c: f64, z: f64, ctrl: &SeriesControl) -> Result<HypergeomValue> {
    GaussRow::new(a, b, z)?.eval(c, ctrl)
}

/// 2F1 with fixed (a, b, z) and varying c.
///
/// The Humbert-type row reductions evaluate many 2F1 that differ only in
/// c; this keeps the argument transformation out of the inner loop.
#[derive(Debug, Clone, Copy)]
pub(crate) struct GaussRow {
    a: f64,
    b: f64,
    z: f64,
    /// Pfaff-mapped argument and its complement, both computed without cancellation.
    zeta: f64,
    one_minus_zeta: f64,
    /// (1 - z)^(-a), the Pfaff prefactor (1 when z >= 0).
    prefactor: f64,
}

impl GaussRow {
    pub(crate) fn new(a: f64, b: f64, z: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite parameters a = {a}, b = {b}")));
        }
        if z >= 1.0 || !z.is_finite() {
            return Err(Error::Domain(format!("2F1 argument must satisfy z < 1, got {z}")));
        }
        if z >= 0.0 {
            return Ok(Self {
                a,
                b,
                z,
                zeta: z,
                one_minus_zeta: 1.0 - z,
                prefactor: 1.0,
            });
        }
        let one_minus_z = 1.0 - z;
        Ok(Self {
            a,
            b,
            z,
            zeta: -z / one_minus_z,
            one_minus_zeta: 1.0 / one_minus_z,
            prefactor: one_minus_z.powf(-a),
        })
    }

    pub(crate) fn eval(&self, c: f64, ctrl: &SeriesControl) -> Result<HypergeomValue> {
        let (a, b) = (self.a, self.b);
        if !c.is_finite() {
            return Err(Error::InvalidInput(format!("non-finite parameter c = {c}")));
        }
        if is_nonpositive_integer(c) {
            return Err(Error::PoleParameter { name: "c", value: c });
        }
        if self.z == 0.0 || a == 0.0 || b == 0.0 {
            return Ok(HypergeomValue::exact(1.0));
        }
        if is_nonpositive_integer(a) || is_nonpositive_integer(b) {
            // terminating series, exact for every z
            return Ok(direct_series(a, b, c, self.z, ctrl));
        }
        if self.z > 0.0 {
            return Ok(unit_interval(a, b, c, self.zeta, self.one_minus_zeta, ctrl));
        }
        // Pfaff: F(a,b;c;z) = (1-z)^(-a) F(a, c-b; c; z/(z-1))
        let inner = unit_interval(a, c - b, c, self.zeta, self.one_minus_zeta, ctrl);
        Ok(inner.scaled(self.prefactor))
    }
}

/// 2F1 on 0 <= z < 1, with `w = 1 - z` supplied separately for accuracy near 1.
fn unit_interval(a: f64, b: f64, c: f64, z: f64, w: f64, ctrl: &SeriesControl) -> HypergeomValue {
    if z <= DIRECT_MAX || is_nonpositive_integer(a) || is_nonpositive_integer(b) {
        return direct_series(a, b, c, z, ctrl);
    }
    // all-positive terms: no cancellation, only slower convergence, while the
    // connection formulas lose everything to cancellation for large parameters
    if z <= POSITIVE_DIRECT_MAX && a > 0.0 && b > 0.0 && c > 0.0 {
        let direct = direct_series(a, b, c, z, &ctrl.with_rel_tol(ctrl.rel_tol * 1e-2));
        if direct.converged && direct.value.is_finite() {
            return direct;
        }
    }
    // F(a,b;c;z) = (1-z)^(c-a-b) F(c-a, c-b; c; z): a terminating right side wins.
    if is_nonpositive_integer(c - a) || is_nonpositive_integer(c - b) {
        return direct_series(c - a, c - b, c, z, ctrl).scaled(w.powf(c - a - b));
    }
    let m = c - a - b;
    let m_round = m.round();
    if (m - m_round).abs() <= INTEGER_SNAP * m.abs().max(1.0) {
        let mi = m_round as i64;
        if mi >= 0 {
            log_connection(a, b, mi as u64, w, ctrl)
        } else {
            log_connection(c - a, c - b, (-mi) as u64, w, ctrl).scaled(w.powi(mi as i32))
        }
    } else {
        connection(a, b, c, w, ctrl)
    }
}

/// Defining power series. Exact (terminating) when a or b is a nonpositive integer.
pub(crate) fn direct_series(a: f64, b: f64, c: f64, z: f64, ctrl: &SeriesControl) -> HypergeomValue {
    let mut sum = 1.0;
    let mut abs_sum = 1.0;
    let mut term = 1.0;
    let mut tail = TailCounter::default();
    let mut k = 0usize;
    loop {
        let kf = k as f64;
        let ratio = (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        term *= ratio;
        k += 1;
        if term == 0.0 {
            return HypergeomValue {
                value: sum,
                terms_used: k,
                converged: true,
                est_error: f64::EPSILON * abs_sum,
            };
        }
        sum += term;
        abs_sum += term.abs();
        let next = ((a + kf + 1.0) * (b + kf + 1.0) / ((c + kf + 1.0) * (kf + 2.0)) * z).abs();
        // geometric bound on the remaining tail, not just the last term
        let tail_size = if next < 1.0 { term.abs() / (1.0 - next) } else { term.abs() };
        if tail.push(tail_size, sum, next < 1.0, ctrl) {
            return HypergeomValue {
                value: sum,
                terms_used: k + 1,
                converged: true,
                est_error: term.abs() * next / (1.0 - next) + f64::EPSILON * abs_sum,
            };
        }
        if k >= ctrl.max_inner_terms || !sum.is_finite() {
            return HypergeomValue {
                value: sum,
                terms_used: k + 1,
                converged: false,
                est_error: term.abs().max(f64::EPSILON * abs_sum),
            };
        }
    }
}

/// Continuation from z = 1 when c - a - b is not an integer.
fn connection(a: f64, b: f64, c: f64, w: f64, ctrl: &SeriesControl) -> HypergeomValue {
    let m = c - a - b;
    let c1 = gamma_ratio(&[c, m], &[c - a, c - b]);
    let c2 = gamma_ratio(&[c, -m], &[a, b]);
    let f1 = direct_series(a, b, 1.0 - m, w, ctrl);
    let f2 = direct_series(c - a, c - b, 1.0 + m, w, ctrl);
    let wm = w.powf(m);
    let t1 = c1 * f1.value;
    let t2 = c2 * wm * f2.value;
    HypergeomValue {
        value: t1 + t2,
        terms_used: f1.terms_used + f2.terms_used,
        converged: f1.converged && f2.converged,
        est_error: c1.abs() * f1.est_error
            + (c2 * wm).abs() * f2.est_error
            + 8.0 * f64::EPSILON * (t1.abs() + t2.abs()),
    }
}

/// Continuation from z = 1 for c = a + b + m with integer m >= 0.
fn log_connection(a: f64, b: f64, m: u64, w: f64, ctrl: &SeriesControl) -> HypergeomValue {
    let c = a + b + m as f64;
    let mf = m as f64;

    // finite part, present for m >= 1
    let mut finite = 0.0;
    if m > 0 {
        let lead = gamma_ratio(&[mf, c], &[c - a, c - b]);
        let mut t = 1.0;
        let mut s = 1.0;
        for n in 0..m - 1 {
            let nf = n as f64;
            t *= (a + nf) * (b + nf) / ((nf + 1.0) * (1.0 - mf + nf)) * w;
            s += t;
        }
        finite = lead * s;
    }

    // logarithmic part
    let sign_m = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    let lead = -sign_m * w.powi(m as i32) * gamma_ratio(&[c], &[a, b, mf + 1.0]);
    let ln_w = w.ln();
    let mut psi_n1 = digamma(1.0);
    let mut psi_nm1 = digamma(mf + 1.0);
    let mut psi_a = digamma(a + mf);
    let mut psi_b = digamma(b + mf);
    // coefficient (a+m)_n (b+m)_n m! / (n! (n+m)!) w^n, starting at 1
    let mut coef = 1.0;
    let mut sum = 0.0;
    let mut abs_sum = 0.0;
    let mut tail = TailCounter::default();
    let mut n = 0usize;
    let (converged, last) = loop {
        let term = coef * (ln_w - psi_n1 - psi_nm1 + psi_a + psi_b);
        sum += term;
        abs_sum += term.abs();
        let nf = n as f64;
        let ratio = (a + mf + nf) * (b + mf + nf) / ((nf + 1.0) * (nf + mf + 1.0)) * w;
        if tail.push(term, sum, ratio.abs() < 1.0, ctrl) {
            break (true, term.abs() * ratio.abs() / (1.0 - ratio.abs()));
        }
        if n + 1 >= ctrl.max_inner_terms || !sum.is_finite() {
            break (false, term.abs());
        }
        coef *= ratio;
        psi_n1 += 1.0 / (nf + 1.0);
        psi_nm1 += 1.0 / (nf + mf + 1.0);
        psi_a += 1.0 / (a + mf + nf);
        psi_b += 1.0 / (b + mf + nf);
        n += 1;
    };
    let log_part = lead * sum;
    HypergeomValue {
        value: finite + log_part,
        terms_used: n + 1 + m as usize,
        converged,
        est_error: lead.abs() * last + 16.0 * f64::EPSILON * (finite.abs() + lead.abs() * abs_sum),
    }
}
