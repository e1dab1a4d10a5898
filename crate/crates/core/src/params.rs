//! Parameter triples (α, β, λ) and their origin in the degeneracy exponents.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// −1 < 2β < 2α ≤ 0, where the inversion formula applies for any λ.
    TheoremRegime,
    General,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Parameters {
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
    pub regime: Regime,
}

impl Parameters {
    /// Builds the triple and classifies its regime.
    pub fn new(alpha: f64, beta: f64, lambda: f64) -> Self {
        let regime = if -1.0 < 2.0 * beta && beta < alpha && alpha <= 0.0 {
            Regime::TheoremRegime
        } else {
            Regime::General
        };
        Self {
            alpha,
            beta,
            lambda,
            regime,
        }
    }

    /// Like [`new`](Self::new) but fails outside the inversion regime.
    pub fn theorem(alpha: f64, beta: f64, lambda: f64) -> Result<Self> {
        let p = Self::new(alpha, beta, lambda);
        p.require_theorem()?;
        Ok(p)
    }

    pub fn require_theorem(&self) -> Result<()> {
        match self.regime {
            Regime::TheoremRegime => Ok(()),
            Regime::General => Err(Error::Regime(format!(
                "need -1 < 2beta < 2alpha <= 0, got alpha = {}, beta = {}",
                self.alpha, self.beta
            ))),
        }
    }

    pub fn with_lambda(self, lambda: f64) -> Self {
        Self { lambda, ..self }
    }

    /// sin(2βπ)/(2βπ), the prefactor of the inversion formula.
    pub fn inversion_prefactor(&self) -> f64 {
        let x = 2.0 * self.beta * std::f64::consts::PI;
        if x == 0.0 {
            1.0
        } else {
            x.sin() / x
        }
    }
}

/// Which sign the spectral term carries in the second kernel argument.
///
/// `Operator` feeds λ(x−t)², the form in which N and T are mutually
/// inverse. `Applications` feeds −λ(x−t)², the form produced by setting
/// η = ξ in the Cauchy and Cauchy–Goursat solutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SignConvention {
    #[default]
    Operator,
    Applications,
}

impl SignConvention {
    pub fn effective_lambda(self, lambda: f64) -> f64 {
        match self {
            SignConvention::Operator => lambda,
            SignConvention::Applications => -lambda,
        }
    }
}

/// Degeneracy exponents m, n and spectral constant μ of the hyperbolic equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegeneracyInput {
    pub m: f64,
    pub n: f64,
    pub mu: f64,
}

/// α = n/(2(n+2)), β = m/(2(m+2)), λ = μ/4.
pub fn params_from_degeneracy(d: DegeneracyInput) -> Result<Parameters> {
    let DegeneracyInput { m, n, mu } = d;
    if !(m.is_finite() && n.is_finite() && mu.is_finite()) {
        return Err(Error::InvalidInput(format!("non-finite degeneracy input {d:?}")));
    }
    if m == -2.0 || n == -2.0 {
        return Err(Error::InvalidInput("m = -2 or n = -2 is a pole of the parameter map".into()));
    }
    let alpha = n / (2.0 * (n + 2.0));
    let beta = m / (2.0 * (m + 2.0));
    if 2.0 * beta <= -1.0 || 2.0 * alpha <= -1.0 {
        return Err(Error::Regime(format!(
            "m = {m}, n = {n} give 2alpha = {}, 2beta = {}; both must exceed -1",
            2.0 * alpha,
            2.0 * beta
        )));
    }
    Ok(Parameters::new(alpha, beta, mu / 4.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn map_examples() {
        let p = params_from_degeneracy(DegeneracyInput { m: -0.5, n: 0.0, mu: 4.0 }).unwrap();
        assert_eq!(p.alpha, 0.0);
        assert_relative_eq!(p.beta, -1.0 / 6.0, max_relative = 1e-15);
        assert_eq!(p.lambda, 1.0);
        assert_eq!(p.regime, Regime::TheoremRegime);

        let p = params_from_degeneracy(DegeneracyInput { m: -0.8, n: -0.4, mu: -2.0 }).unwrap();
        assert_relative_eq!(p.alpha, -0.125, max_relative = 1e-15);
        assert_relative_eq!(p.beta, -1.0 / 3.0, max_relative = 1e-15);
        assert_eq!(p.lambda, -0.5);
        assert_eq!(p.regime, Regime::TheoremRegime);
    }

    #[test]
    fn map_is_continuous_at_the_origin() {
        let p = params_from_degeneracy(DegeneracyInput { m: -1e-9, n: -1e-9, mu: 0.0 }).unwrap();
        assert!(p.alpha < 0.0 && p.alpha > -1e-9);
        assert!(p.beta < 0.0 && p.beta > -1e-9);
    }

    #[test]
    fn nonintegrable_exponents_are_a_regime_error() {
        let r = params_from_degeneracy(DegeneracyInput { m: -1.0, n: 0.0, mu: 0.0 });
        assert!(matches!(r, Err(Error::Regime(_))));
        let r = params_from_degeneracy(DegeneracyInput { m: -1.5, n: 0.0, mu: 0.0 });
        assert!(matches!(r, Err(Error::Regime(_))));
    }

    #[test]
    fn regime_classification() {
        assert_eq!(Parameters::new(-0.1, -0.3, 2.0).regime, Regime::TheoremRegime);
        assert_eq!(Parameters::new(0.0, -0.2, 0.0).regime, Regime::TheoremRegime);
        // 2beta = 2alpha is excluded
        assert_eq!(Parameters::new(-0.2, -0.2, 0.0).regime, Regime::General);
        assert_eq!(Parameters::new(0.1, -0.2, 0.0).regime, Regime::General);
        assert_eq!(Parameters::new(-0.1, -0.5, 0.0).regime, Regime::General);
        assert!(Parameters::theorem(0.1, 0.2, 0.0).is_err());
    }

    #[test]
    fn prefactor_is_positive_and_below_one() {
        for &b in &[-0.49, -0.3, -0.01] {
            let c = Parameters::new(0.0, b, 0.0).inversion_prefactor();
            assert!(c > 0.0 && c < 1.0, "{c}");
        }
    }

    #[test]
    fn applications_convention_flips_lambda() {
        assert_eq!(SignConvention::Applications.effective_lambda(3.0), -3.0);
        assert_eq!(SignConvention::Operator.effective_lambda(3.0), 3.0);
    }
}
