//! Independent oracles and invariants for the special functions and the
//! solution maps.

use hv_core::*;
use proptest::prelude::*;

fn ctrl() -> SeriesControl {
    SeriesControl::exhaustive()
}

/// Plain double sum of Ξ₂, with the sum of |terms| for a cancellation-aware bound.
fn xi2_raw(a: f64, b: f64, d: f64, u: f64, w: f64) -> (f64, f64) {
    let (mut sum, mut abs) = (0.0, 0.0);
    let mut row: f64 = 1.0; // (a)_m (b)_m u^m / (m! (d)_m)
    for m in 0..5000u32 {
        let mf = f64::from(m);
        let mut t = row;
        for n in 0..500u32 {
            sum += t;
            abs += t.abs();
            if t == 0.0 || (n > 5 && t.abs() < 1e-20 * abs) {
                break;
            }
            t *= w / (f64::from(n + 1) * (d + mf + f64::from(n)));
        }
        if row == 0.0 || (m > 5 && row.abs() < 1e-20 * abs) {
            break;
        }
        row *= (a + mf) * (b + mf) * u / ((mf + 1.0) * (d + mf));
    }
    (sum, abs)
}

/// Defining series of 2F1, summed term by term.
fn gauss_raw(a: f64, b: f64, c: f64, z: f64) -> (f64, f64) {
    let (mut sum, mut abs, mut t) = (0.0, 0.0, 1.0);
    for k in 0..20_000u32 {
        sum += t;
        abs += f64::abs(t);
        if k > 3 && t.abs() < 1e-19 * abs {
            break;
        }
        let k = f64::from(k);
        t *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
    }
    (sum, abs)
}

#[test]
fn frozen_reference_values() {
    // mpmath, 30 digits
    let v = humbert_xi2(-0.1, 1.1, 0.7, -40.0, 2.5, &ctrl()).unwrap().value;
    assert!((v - XI2_FAR).abs() < 1e-11 * XI2_FAR.abs(), "{v}");
    let g = gauss_2f1(0.3, 1.7, 2.2, -7.5, &ctrl()).unwrap().value;
    assert!((g - GAUSS_FAR).abs() < 1e-13 * GAUSS_FAR.abs(), "{g}");
}

const XI2_FAR: f64 = 11.077_328_547_831_318;
const GAUSS_FAR: f64 = 0.574_120_404_937_965_9;

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn xi2_matches_the_double_series(
        a in -1.5f64..2.0, b in -1.5f64..2.0, d in 0.2f64..2.5, u in -0.9f64..0.9, w in -3.0f64..3.0,
    ) {
        let (raw, abs) = xi2_raw(a, b, d, u, w);
        let got = humbert_xi2(a, b, d, u, w, &ctrl()).unwrap().value;
        prop_assert!((got - raw).abs() <= 1e-11 * abs, "{got} vs {raw}");
    }

    #[test]
    fn xi2_is_symmetric_in_its_numerator_parameters(
        a in -1.5f64..2.0, b in -1.5f64..2.0, d in 0.2f64..2.5, u in -20.0f64..0.9, w in -3.0f64..3.0,
    ) {
        let x = humbert_xi2(a, b, d, u, w, &ctrl()).unwrap().value;
        let y = humbert_xi2(b, a, d, u, w, &ctrl()).unwrap().value;
        prop_assert!((x - y).abs() <= 1e-11 * x.abs().max(1.0), "{x} vs {y}");
    }

    #[test]
    fn reduction_chain(
        a in -1.0f64..1.5, b in -1.0f64..1.5, d in -0.9f64..2.0, e in 0.3f64..2.0, u in -10.0f64..0.8, w in -2.0f64..2.0,
    ) {
        // F with g = d is Ξ₂, and Ξ₂ at w = 0 is 2F1
        let f = f0211(a, b, d, e, d, u, w, &ctrl()).unwrap().value;
        let x = humbert_xi2(a, b, e, u, w, &ctrl()).unwrap().value;
        prop_assert!((f - x).abs() <= 1e-12 * x.abs().max(1e-3), "{f} vs {x}");
        let x0 = humbert_xi2(a, b, e, u, 0.0, &ctrl()).unwrap().value;
        let g = gauss_2f1(a, b, e, u, &ctrl()).unwrap().value;
        prop_assert!((x0 - g).abs() <= 1e-12 * g.abs().max(1e-3), "{x0} vs {g}");
    }

    #[test]
    fn gauss_matches_its_series_inside_the_disc(
        a in -2.0f64..3.0, b in -2.0f64..3.0, c in 0.3f64..4.0, z in -0.9f64..0.9,
    ) {
        let (raw, abs) = gauss_raw(a, b, c, z);
        let got = gauss_2f1(a, b, c, z, &ctrl()).unwrap().value;
        prop_assert!((got - raw).abs() <= 1e-12 * abs, "{got} vs {raw}");
    }

    #[test]
    fn system_residuals_shrink_quadratically(
        a in -0.5f64..1.0, b in 0.2f64..1.2, d in 0.6f64..2.0, u in -0.6f64..0.4, w in -1.0f64..1.0,
    ) {
        let r1 = xi2_system_residual(a, b, d, u, w, 1e-2, &ctrl()).unwrap();
        let r2 = xi2_system_residual(a, b, d, u, w, 5e-3, &ctrl()).unwrap();
        // a residual already at the rounding floor has nothing left to shrink
        for (x, y) in [(r1.0, r2.0), (r1.1, r2.1)] {
            prop_assert!(x.abs() < 1e-9 || (3.0..5.0).contains(&(x / y)), "{x} {y}");
        }
    }

    #[test]
    fn gamma2_is_positive_and_below_one_half(beta in -0.499f64..-1e-6) {
        let g = gamma2(beta);
        prop_assert!(g > 0.0 && g < 0.5);
    }

    #[test]
    fn char_coords_invert(x in 0.01f64..1.0, y in -1.0f64..-0.01, m in -0.5f64..3.0, n in -1.5f64..3.0) {
        let p = char_coords(x, y, m, n).unwrap();
        let (x2, y2) = char_to_xy(p, m, n).unwrap();
        prop_assert!((x - x2).abs() < 1e-12 && (y - y2).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn cauchy_solution_is_linear(
        c1 in -2.0f64..2.0, c2 in -2.0f64..2.0, xi in 0.05f64..0.5, gap in 0.0f64..0.45, lambda in -3.0f64..3.0,
    ) {
        let params = Parameters::new(-0.1, -0.3, lambda);
        let (q, s) = (QuadratureSpec::default(), SeriesControl::default());
        let f = |g: fn(f64) -> f64| GridFunction::from_fn(uniform_grid(4), g).unwrap();
        let one = CauchyData { tau: f(|_| 0.0), nu: f(|t| t * t), density: Some(f(|t| 1.0 + t)) };
        let two = CauchyData { tau: f(|_| 0.0), nu: f(|t| t.cos()), density: Some(f(|t| t.exp())) };
        let mix = CauchyData {
            tau: f(|_| 0.0),
            nu: GridFunction::from_fn(uniform_grid(4), move |t| c1 * t * t + c2 * t.cos()).unwrap(),
            density: Some(GridFunction::from_fn(uniform_grid(4), move |t| c1 * (1.0 + t) + c2 * t.exp()).unwrap()),
        };
        let p = CharPoint::new(xi, xi + gap).unwrap();
        let u1 = cauchy_solution(p, &one, &params, &q, &s).unwrap();
        let u2 = cauchy_solution(p, &two, &params, &q, &s).unwrap();
        let um = cauchy_solution(p, &mix, &params, &q, &s).unwrap();
        let scale = (c1 * u1).abs() + (c2 * u2).abs();
        prop_assert!((um - c1 * u1 - c2 * u2).abs() <= 1e-12 * scale.max(1e-12));
    }

    #[test]
    fn extrapolation_is_exact_on_its_model(
        limit in -5.0f64..5.0, c1 in -5.0f64..5.0, c2 in -5.0f64..5.0, p1 in 0.2f64..0.9,
    ) {
        let eps = DEFAULT_LIMIT_EPS;
        let vals: Vec<f64> = eps.iter().map(|e| limit + c1 * e.powf(p1) + c2 * e).collect();
        let got = extrapolate_to_zero(&eps, &vals, &[p1, 1.0]).unwrap();
        prop_assert!((got - limit).abs() < 1e-8 * (1.0 + c1.abs() + c2.abs()));
    }
}
