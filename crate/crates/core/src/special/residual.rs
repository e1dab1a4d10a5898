//! Finite-difference residuals of the partial differential systems
//! satisfied by Ξ₂ and by the generalized function F.

use crate::error::{Error, Result};
use crate::series::SeriesControl;
use crate::special::humbert::{f0211, humbert_xi2};

/// Default step: 1e-3 scaled by max(1, |x|, |y|).
pub fn default_step(x: f64, y: f64) -> f64 {
    1e-3 * 1f64.max(x.abs()).max(y.abs())
}

fn check_step(x: f64, h: f64, reach: f64) -> Result<()> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidInput(format!("step must be positive, got {h}")));
    }
    if x + reach * h >= 1.0 {
        return Err(Error::StencilOutOfDomain(format!(
            "x + {reach}h = {} reaches the branch point x = 1",
            x + reach * h
        )));
    }
    Ok(())
}

/// Central-difference derivatives of z on a 5×5 stencil around (x, y).
struct Stencil<F: Fn(f64, f64) -> Result<f64>> {
    f: F,
    x: f64,
    y: f64,
    h: f64,
}

impl<F: Fn(f64, f64) -> Result<f64>> Stencil<F> {
    fn at(&self, i: i32, j: i32) -> Result<f64> {
        (self.f)(self.x + f64::from(i) * self.h, self.y + f64::from(j) * self.h)
    }

    fn z(&self) -> Result<f64> {
        self.at(0, 0)
    }

    fn z_x(&self) -> Result<f64> {
        Ok((self.at(1, 0)? - self.at(-1, 0)?) / (2.0 * self.h))
    }

    fn z_y(&self) -> Result<f64> {
        Ok((self.at(0, 1)? - self.at(0, -1)?) / (2.0 * self.h))
    }

    fn z_xx(&self) -> Result<f64> {
        Ok((self.at(1, 0)? - 2.0 * self.at(0, 0)? + self.at(-1, 0)?) / (self.h * self.h))
    }

    fn z_yy_at(&self, i: i32) -> Result<f64> {
        Ok((self.at(i, 1)? - 2.0 * self.at(i, 0)? + self.at(i, -1)?) / (self.h * self.h))
    }

    fn z_xy(&self) -> Result<f64> {
        Ok((self.at(1, 1)? - self.at(1, -1)? - self.at(-1, 1)? + self.at(-1, -1)?) / (4.0 * self.h * self.h))
    }

    fn z_yyy(&self) -> Result<f64> {
        let h3 = self.h * self.h * self.h;
        Ok((self.at(0, 2)? - 2.0 * self.at(0, 1)? + 2.0 * self.at(0, -1)? - self.at(0, -2)?) / (2.0 * h3))
    }

    fn z_xyy(&self) -> Result<f64> {
        Ok((self.z_yy_at(1)? - self.z_yy_at(-1)?) / (2.0 * self.h))
    }
}

/// Residuals of
/// x(1−x) z_xx + y z_xy + [d − (a+b+1)x] z_x − ab z = 0,
/// y z_yy + x z_xy + d z_y − z = 0
/// for z = Ξ₂(a, b; d; x, y).
pub fn xi2_system_residual(a: f64, b: f64, d: f64, u: f64, w: f64, h: f64, ctrl: &SeriesControl) -> Result<(f64, f64)> {
    check_step(u, h, 1.0)?;
    let s = Stencil {
        f: |x: f64, y: f64| humbert_xi2(a, b, d, x, y, ctrl)?.checked(),
        x: u,
        y: w,
        h,
    };
    let (z, zx, zy, zxx, zyy, zxy) = (s.z()?, s.z_x()?, s.z_y()?, s.z_xx()?, s.z_yy_at(0)?, s.z_xy()?);
    let first = u * (1.0 - u) * zxx + w * zxy + (d - (a + b + 1.0) * u) * zx - a * b * z;
    let second = w * zyy + u * zxy + d * zy - z;
    Ok((first, second))
}

/// Residuals of
/// x(1−x) z_xx + y z_xy + [e − (b+c+1)x] z_x − bc z = 0,
/// y² z_yyy + x y z_xyy + g x z_xy + (e+g+1) y z_yy + (eg − y) z_y − d z = 0
/// for z = F(b, c; d; e; g; x, y).
#[allow(clippy::too_many_arguments)]
pub fn f0211_system_residual(
    b: f64,
    c: f64,
    d: f64,
    e: f64,
    g: f64,
    x: f64,
    y: f64,
    h: f64,
    ctrl: &SeriesControl,
) -> Result<(f64, f64)> {
    check_step(x, h, 1.0)?;
    let s = Stencil {
        f: |xx: f64, yy: f64| f0211(b, c, d, e, g, xx, yy, ctrl)?.checked(),
        x,
        y,
        h,
    };
    let (z, zx, zy, zxx, zyy, zxy) = (s.z()?, s.z_x()?, s.z_y()?, s.z_xx()?, s.z_yy_at(0)?, s.z_xy()?);
    let first = x * (1.0 - x) * zxx + y * zxy + (e - (b + c + 1.0) * x) * zx - b * c * z;
    let second = if y == 0.0 {
        // every term carrying a factor y drops out
        g * x * zxy + e * g * zy - d * z
    } else {
        y * y * s.z_yyy()? + x * y * s.z_xyy()? + g * x * zxy + (e + g + 1.0) * y * zyy + (e * g - y) * zy - d * z
    };
    Ok((first, second))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tight() -> SeriesControl {
        SeriesControl::exhaustive()
    }

    #[test]
    fn xi2_residual_small_and_second_order() {
        let r = |h| {
            let (p, q) = xi2_system_residual(0.25, 0.75, 1.3, -0.2, 0.1, h, &tight()).unwrap();
            p.hypot(q)
        };
        let (r1, r2) = (r(1e-2), r(5e-3));
        assert!(r1 < 1e-3, "residual {r1}");
        let ratio = r1 / r2;
        assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn xi2_residual_at_origin() {
        let (p, q) = xi2_system_residual(0.25, 0.75, 1.3, 0.0, 0.0, 1e-3, &tight()).unwrap();
        assert!(p.abs() < 1e-5 && q.abs() < 1e-5, "{p} {q}");
    }

    #[test]
    fn f0211_residual_on_the_zero_row() {
        let (p, q) = f0211_system_residual(-0.1, 1.1, 0.45, 0.95, -0.55, -0.3, 0.0, 1e-3, &tight()).unwrap();
        assert!(p.abs() < 1e-5 && q.abs() < 1e-5, "{p} {q}");
    }

    #[test]
    fn stencil_past_branch_point_is_rejected() {
        let r = xi2_system_residual(0.25, 0.75, 1.3, 0.9995, 0.1, 1e-3, &tight());
        assert!(matches!(r, Err(Error::StencilOutOfDomain(_))));
    }

    #[test]
    fn default_step_scales_with_arguments() {
        assert_eq!(default_step(0.2, -0.5), 1e-3);
        assert_eq!(default_step(-4.0, 2.0), 4e-3);
    }
}
