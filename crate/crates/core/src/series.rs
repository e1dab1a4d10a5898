//! Truncation control shared by every series engine.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Truncation tolerances and term caps.
///
/// A series stops once three consecutive terms (or rows, for the outer sum
/// of a double series) fall below `rel_tol * |partial sum| + abs_tol` while
/// the terms are already decreasing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesControl {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_outer_terms: usize,
    pub max_inner_terms: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            abs_tol: 1e-300,
            max_outer_terms: 10_000,
            max_inner_terms: 10_000,
        }
    }
}

impl SeriesControl {
    pub fn new(rel_tol: f64, abs_tol: f64, max_outer_terms: usize, max_inner_terms: usize) -> Result<Self> {
        let ctrl = Self {
            rel_tol,
            abs_tol,
            max_outer_terms,
            max_inner_terms,
        };
        ctrl.validate()?;
        Ok(ctrl)
    }

    /// Summation to full double precision, used where values get differenced.
    pub fn exhaustive() -> Self {
        Self {
            rel_tol: 1e-17,
            ..Self::default()
        }
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::InvalidInput(format!("rel_tol must be positive, got {}", self.rel_tol)));
        }
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::InvalidInput(format!("abs_tol must be positive, got {}", self.abs_tol)));
        }
        if self.max_outer_terms == 0 || self.max_inner_terms == 0 {
            return Err(Error::InvalidInput("term caps must be at least 1".into()));
        }
        Ok(())
    }

    pub(crate) fn threshold(&self, partial: f64) -> f64 {
        self.rel_tol * partial.abs() + self.abs_tol
    }
}

/// Result of a series evaluation.
///
/// `converged == false` means the caps were hit first; the value is still
/// the best partial sum and callers must propagate the flag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HypergeomValue {
    pub value: f64,
    pub terms_used: usize,
    pub converged: bool,
    pub est_error: f64,
}

impl HypergeomValue {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            terms_used: 1,
            converged: true,
            est_error: 0.0,
        }
    }

    /// The value, or [`Error::NotConverged`] if the caps were hit.
    pub fn checked(self) -> Result<f64> {
        if self.converged && self.value.is_finite() {
            Ok(self.value)
        } else {
            Err(Error::NotConverged {
                value: self.value,
                terms: self.terms_used,
                est_error: self.est_error,
            })
        }
    }

    pub(crate) fn scaled(self, factor: f64) -> Self {
        Self {
            value: self.value * factor,
            est_error: self.est_error * factor.abs(),
            ..self
        }
    }
}

/// Three-in-a-row tail detector.
#[derive(Debug, Default)]
pub(crate) struct TailCounter {
    small_in_a_row: usize,
}

impl TailCounter {
    /// Feed one term; returns true once the stopping rule is met.
    pub(crate) fn push(&mut self, term: f64, partial: f64, decreasing: bool, ctrl: &SeriesControl) -> bool {
        if term.abs() <= ctrl.threshold(partial) {
            self.small_in_a_row += 1;
        } else {
            self.small_in_a_row = 0;
        }
        self.small_in_a_row >= 3 && decreasing
    }
}
