//! Convergence regions of the general double series F^{p,q;k}_{l,m;n}.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Convergence {
    /// Converges for all finite x, y.
    ConvergesAll,
    /// Converges at this point under the max{|x|, |y|} < 1 rule.
    ConvergesUnit,
    /// Converges at this point under the |x|^{1/(p-l)} + |y|^{1/(p-l)} < 1 rule.
    ConvergesMixed,
    /// Boundary signatures, mixed inequalities, or a point outside the
    /// stated region: no claim is made.
    Unknown,
}

/// Numbers of parameters of each kind in F^{p,q;k}_{l,m;n}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub p: u32,
    pub q: u32,
    pub k: u32,
    pub l: u32,
    pub m: u32,
    pub n: u32,
}

impl Signature {
    pub const fn new(p: u32, q: u32, k: u32, l: u32, m: u32, n: u32) -> Self {
        Self { p, q, k, l, m, n }
    }

    /// Signature of the generalized Humbert-type function used by the inversion kernel.
    pub const F0211: Signature = Signature::new(0, 2, 1, 1, 0, 1);
}

/// Applies the strict-inequality region rules.
///
/// Only the two fully strict cases are classified; any equality
/// p + q = l + m + 1 or p + k = l + n + 1, or a mix of < and >, is Unknown.
pub fn convergence_classification(sig: Signature, x: f64, y: f64) -> Convergence {
    let Signature { p, q, k, l, m, n } = sig;
    let (first, second) = (p + q, p + k);
    let (first_bound, second_bound) = (l + m + 1, l + n + 1);
    if first < first_bound && second < second_bound {
        return Convergence::ConvergesAll;
    }
    if first > first_bound && second > second_bound {
        let (ax, ay) = (x.abs(), y.abs());
        if !(ax < 1.0 && ay < 1.0) {
            return Convergence::Unknown;
        }
        if p > l {
            let e = 1.0 / f64::from(p - l);
            return if ax.powf(e) + ay.powf(e) < 1.0 {
                Convergence::ConvergesMixed
            } else {
                Convergence::Unknown
            };
        }
        return Convergence::ConvergesUnit;
    }
    Convergence::Unknown
}
