use shen_elliptic::verify::{
    check, parse_suite, run, Identity, VerificationReport, DEFAULT_TOLERANCE,
};
use shen_elliptic::{Error, Execution, ShenContext};

#[test]
fn every_identity_passes_on_the_grid() {
    let ks: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
    let reports = run(&ks, &Identity::ALL, DEFAULT_TOLERANCE, Execution::Parallel).unwrap();
    assert_eq!(reports.len(), 81);
    for r in &reports {
        assert!(r.passed, "{r:?}");
        assert!(r.samples > 0);
    }
}

#[test]
fn reports_sorted_by_identity_then_k() {
    let reports = run(&[0.9, 0.2, 0.5], &Identity::ALL, 1e-9, Execution::Parallel).unwrap();
    let keys: Vec<(String, f64)> = reports
        .iter()
        .map(|r| (r.identity_name.clone(), r.k))
        .collect();
    let mut sorted = keys.clone();
    sorted.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    assert_eq!(keys, sorted);
    assert_eq!(keys[0], ("cubic-relation".to_string(), 0.2));
}

#[test]
fn sequential_and_parallel_agree_exactly() {
    let ks = [0.3, 0.7];
    let a = run(&ks, &Identity::ALL, 1e-9, Execution::Sequential).unwrap();
    let b = run(&ks, &Identity::ALL, 1e-9, Execution::Parallel).unwrap();
    assert_eq!(a, b);
}

#[test]
fn passed_iff_residual_below_tolerance() {
    let ctx = ShenContext::from_k(0.5).unwrap();
    let loose = check(Identity::CubicRelation, &ctx, 1e-9);
    assert!(loose.passed);
    let strict = check(Identity::CubicRelation, &ctx, loose.max_residual);
    assert!(!strict.passed);
    assert_eq!(strict.max_residual, loose.max_residual);
}

#[test]
fn suite_parsing() {
    assert_eq!(parse_suite("all").unwrap().len(), 9);
    assert_eq!(
        parse_suite("pole,d-ode,pole").unwrap(),
        vec![Identity::DOde, Identity::Pole]
    );
    assert!(matches!(parse_suite("no-such"), Err(Error::UnknownName(_))));
    assert!(parse_suite("").is_err());
    for id in Identity::ALL {
        assert_eq!(id.name().parse::<Identity>().unwrap(), id);
    }
}

#[test]
fn invalid_arguments() {
    assert!(matches!(
        run(&[1.5], &[Identity::Pole], 1e-9, Execution::Sequential),
        Err(Error::ModulusOutOfRange(_))
    ));
    assert!(run(&[0.5], &[Identity::Pole], 0.0, Execution::Sequential).is_err());
}

#[test]
fn json_round_trip_including_failed_evaluations() {
    let mut reports = run(
        &[0.5],
        &[Identity::Pole, Identity::Pythagorean],
        1e-9,
        Execution::Sequential,
    )
    .unwrap();
    reports.push(VerificationReport::new(
        Identity::Duplication,
        0.25,
        0,
        f64::INFINITY,
        1e-9,
    ));
    let text = serde_json::to_string_pretty(&reports).unwrap();
    assert!(text.contains("\"max_residual\": null"));
    let back: Vec<VerificationReport> = serde_json::from_str(&text).unwrap();
    assert_eq!(back, reports);
    assert_eq!(serde_json::to_string_pretty(&back).unwrap(), text);
}
