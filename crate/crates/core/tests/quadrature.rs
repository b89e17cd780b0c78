mod common;

use approx::assert_relative_eq;
use shen_elliptic::quadrature::{integrate, GaussLegendre, QuadratureConfig};
use shen_elliptic::Error;

#[test]
fn twenty_point_rule_is_exact_to_degree_39() {
    let rule = GaussLegendre::standard();
    assert_eq!(rule.len(), 20);
    for deg in [0, 1, 7, 20, 39] {
        let got = rule.apply(&|x: f64| x.powi(deg), 0.0, 1.0);
        assert_relative_eq!(got, 1.0 / (deg as f64 + 1.0), max_relative = 1e-14);
    }
}

#[test]
fn smooth_integrals() {
    let cfg = QuadratureConfig::default();
    assert_relative_eq!(
        integrate(f64::sin, 0.0, std::f64::consts::PI, &cfg).unwrap(),
        2.0,
        max_relative = 1e-14
    );
    assert_relative_eq!(
        integrate(f64::exp, -1.0, 2.0, &cfg).unwrap(),
        2f64.exp() - (-1f64).exp(),
        max_relative = 1e-14
    );
    assert_eq!(integrate(f64::exp, 1.0, 1.0, &cfg).unwrap(), 0.0);
}

#[test]
fn complete_elliptic_integral_against_agm() {
    let cfg = QuadratureConfig::default();
    for m in [0.1, 0.5, 0.9, 0.999] {
        let got = integrate(
            |t: f64| 1.0 / (1.0 - m * t.sin().powi(2)).sqrt(),
            0.0,
            std::f64::consts::FRAC_PI_2,
            &cfg,
        )
        .unwrap();
        let agm = std::f64::consts::FRAC_PI_2 / common::agm(1.0, (1.0 - m).sqrt());
        assert_relative_eq!(got, agm, max_relative = 1e-13);
    }
}

#[test]
fn rejects_bad_configuration_and_singular_integrands() {
    let bad = QuadratureConfig {
        abs_tol: -1.0,
        ..QuadratureConfig::default()
    };
    assert!(matches!(
        integrate(f64::sin, 0.0, 1.0, &bad),
        Err(Error::Config(_))
    ));
    let shallow = QuadratureConfig {
        max_refinements: 3,
        ..QuadratureConfig::default()
    };
    let r = integrate(|x: f64| 1.0 / x.abs().sqrt(), -1.0, 1.0, &shallow);
    assert!(matches!(r, Err(Error::Quadrature { .. })));
}
