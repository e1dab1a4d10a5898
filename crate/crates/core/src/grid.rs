//! Functions on (0, 1] given either as samples or as closures.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Interpolation {
    PiecewiseCubic,
    Callback,
}

#[derive(Clone)]
enum Repr {
    Sampled { slopes: Vec<f64> },
    Callback { f: RealFn, df: Option<RealFn> },
}

/// A real function with the nodes it was sampled on.
///
/// Sampled data is interpolated by a not-a-knot cubic spline, which is
/// also used to extrapolate past the first and last node.
#[derive(Clone)]
pub struct GridFunction {
    nodes: Vec<f64>,
    values: Vec<f64>,
    repr: Repr,
}

impl fmt::Debug for GridFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GridFunction")
            .field("nodes", &self.nodes)
            .field("values", &self.values)
            .field("interpolation", &self.interpolation())
            .finish()
    }
}

fn check_nodes(nodes: &[f64]) -> Result<()> {
    if nodes.is_empty() {
        return Err(Error::InvalidInput("grid has no nodes".into()));
    }
    if nodes.iter().any(|&t| !(0.0..=1.0).contains(&t)) {
        return Err(Error::InvalidInput("grid nodes must lie in [0, 1]".into()));
    }
    if nodes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("grid nodes must be strictly increasing".into()));
    }
    Ok(())
}

impl GridFunction {
    pub fn from_samples(nodes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        check_nodes(&nodes)?;
        if nodes.len() != values.len() {
            return Err(Error::InvalidInput(format!(
                "{} nodes but {} values",
                nodes.len(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("sampled values must be finite".into()));
        }
        let slopes = spline_slopes(&nodes, &values);
        Ok(Self {
            nodes,
            values,
            repr: Repr::Sampled { slopes },
        })
    }

    pub fn from_fn(nodes: Vec<f64>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Result<Self> {
        Self::callback(nodes, Arc::new(f), None)
    }

    pub fn from_fn_with_derivative(
        nodes: Vec<f64>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        df: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        Self::callback(nodes, Arc::new(f), Some(Arc::new(df)))
    }

    pub fn callback(nodes: Vec<f64>, f: RealFn, df: Option<RealFn>) -> Result<Self> {
        check_nodes(&nodes)?;
        let values = nodes.iter().map(|&t| f(t)).collect();
        Ok(Self {
            nodes,
            values,
            repr: Repr::Callback { f, df },
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn interpolation(&self) -> Interpolation {
        match self.repr {
            Repr::Sampled { .. } => Interpolation::PiecewiseCubic,
            Repr::Callback { .. } => Interpolation::Callback,
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match &self.repr {
            Repr::Callback { f, .. } => f(t),
            Repr::Sampled { slopes } => self.hermite(slopes, t).0,
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        match &self.repr {
            Repr::Callback { df: Some(df), .. } => df(t),
            Repr::Callback { f, df: None } => {
                // fourth-order central difference; the step shrinks with t so
                // that the stencil never reaches the origin
                let h = 1e-4 * t.abs().clamp(1e-3, 1.0);
                (f(t - 2.0 * h) - 8.0 * f(t - h) + 8.0 * f(t + h) - f(t + 2.0 * h)) / (12.0 * h)
            }
            Repr::Sampled { slopes } => self.hermite(slopes, t).1,
        }
    }

    /// New sampled function on the same nodes.
    pub fn resampled(&self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let values = self.nodes.iter().zip(&self.values).map(|(&t, &v)| f(t, v)).collect();
        Self::from_samples(self.nodes.clone(), values)
    }

    fn hermite(&self, slopes: &[f64], t: f64) -> (f64, f64) {
        let n = self.nodes.len();
        if n == 1 {
            return (self.values[0], 0.0);
        }
        let i = match self.nodes.partition_point(|&x| x <= t) {
            0 => 0,
            k if k >= n => n - 2,
            k => k - 1,
        };
        let (x0, x1) = (self.nodes[i], self.nodes[i + 1]);
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (slopes[i], slopes[i + 1]);
        let h = x1 - x0;
        let s = (t - x0) / h;
        let (s2, s3) = (s * s, s * s * s);
        let value = (2.0 * s3 - 3.0 * s2 + 1.0) * y0
            + (s3 - 2.0 * s2 + s) * h * m0
            + (-2.0 * s3 + 3.0 * s2) * y1
            + (s3 - s2) * h * m1;
        let deriv = ((6.0 * s2 - 6.0 * s) * y0 + (-6.0 * s2 + 6.0 * s) * y1) / h
            + (3.0 * s2 - 4.0 * s + 1.0) * m0
            + (3.0 * s2 - 2.0 * s) * m1;
        (value, deriv)
    }
}

/// Node slopes of the not-a-knot cubic spline.
fn spline_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n == 1 {
        return vec![0.0];
    }
    let dx: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let dd: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / dx[i]).collect();
    if n == 2 {
        return vec![dd[0]; 2];
    }
    if n == 3 {
        // the not-a-knot spline through three points is their parabola
        let c = (dd[1] - dd[0]) / (x[2] - x[0]);
        return vec![
            dd[0] - c * dx[0],
            dd[0] + c * dx[0],
            dd[1] + c * dx[1],
        ];
    }
    let mut sub = vec![0.0; n];
    let mut diag = vec![0.0; n];
    let mut sup = vec![0.0; n];
    let mut rhs = vec![0.0; n];

    let x31 = dx[0] + dx[1];
    diag[0] = dx[1];
    sup[0] = x31;
    rhs[0] = ((dx[0] + 2.0 * x31) * dx[1] * dd[0] + dx[0] * dx[0] * dd[1]) / x31;
    for i in 1..n - 1 {
        sub[i] = dx[i];
        diag[i] = 2.0 * (dx[i - 1] + dx[i]);
        sup[i] = dx[i - 1];
        rhs[i] = 3.0 * (dx[i] * dd[i - 1] + dx[i - 1] * dd[i]);
    }
    let xn = dx[n - 2] + dx[n - 3];
    sub[n - 1] = xn;
    diag[n - 1] = dx[n - 3];
    rhs[n - 1] = (dx[n - 2] * dx[n - 2] * dd[n - 3] + (2.0 * xn + dx[n - 2]) * dx[n - 3] * dd[n - 2]) / xn;

    for i in 1..n {
        let m = sub[i] / diag[i - 1];
        diag[i] -= m * sup[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    let mut s = vec![0.0; n];
    s[n - 1] = rhs[n - 1] / diag[n - 1];
    for i in (0..n - 1).rev() {
        s[i] = (rhs[i] - sup[i] * s[i + 1]) / diag[i];
    }
    s
}

/// n equally spaced points k/n, k = 1..=n.
pub fn uniform_grid(n: usize) -> Vec<f64> {
    (1..=n).map(|k| k as f64 / n as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn spline_reproduces_cubics() {
        let nodes: Vec<f64> = vec![0.05, 0.1, 0.22, 0.4, 0.55, 0.7, 0.9, 1.0];
        let p = |t: f64| 1.0 - 2.0 * t + 0.5 * t * t + 3.0 * t * t * t;
        let dp = |t: f64| -2.0 + t + 9.0 * t * t;
        let values = nodes.iter().map(|&t| p(t)).collect();
        let g = GridFunction::from_samples(nodes, values).unwrap();
        for &t in &[0.01, 0.07, 0.3, 0.61, 0.95] {
            assert_relative_eq!(g.eval(t), p(t), max_relative = 1e-12);
            assert_relative_eq!(g.derivative(t), dp(t), max_relative = 1e-11);
        }
    }

    #[test]
    fn three_points_give_the_parabola() {
        let nodes = vec![0.2, 0.5, 0.9];
        let values = nodes.iter().map(|t| t * t).collect();
        let g = GridFunction::from_samples(nodes, values).unwrap();
        assert_relative_eq!(g.eval(0.7), 0.49, max_relative = 1e-14);
        assert_relative_eq!(g.derivative(0.3), 0.6, max_relative = 1e-13);
    }

    #[test]
    fn callback_derivative_by_differences() {
        let g = GridFunction::from_fn(uniform_grid(4), |t| t.powf(1.5)).unwrap();
        assert_eq!(g.interpolation(), Interpolation::Callback);
        assert_relative_eq!(g.derivative(0.3), 1.5 * 0.3f64.sqrt(), max_relative = 1e-10);
        assert_eq!(g.values()[3], 1.0);
    }

    #[test]
    fn rejects_bad_nodes() {
        assert!(GridFunction::from_samples(vec![0.5, 0.4], vec![1.0, 1.0]).is_err());
        assert!(GridFunction::from_samples(vec![0.5, 1.2], vec![1.0, 1.0]).is_err());
        assert!(GridFunction::from_samples(vec![0.5], vec![1.0, 1.0]).is_err());
        assert!(GridFunction::from_samples(vec![], vec![]).is_err());
    }
}
