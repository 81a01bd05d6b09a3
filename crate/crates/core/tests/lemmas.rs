use std::f64::consts::PI;

use qpfu_core::pennyflip::{
    cq_payoff, qc_payoff, qq_vs_w2_direct, qq_vs_w2_payoff, v1, v2, v2_errors, verify_cq_outcome,
    verify_euler, verify_v1v3, verify_v2, verify_w2, verify_w2_surface, w2, ParamV1, ParamV2,
    ParamW2,
};
use qpfu_core::qlinalg::{named_gate, NamedGate};

#[test]
fn hadamard_pair_holds_the_line() {
    let h = named_gate(NamedGate::H);
    for k in 0..=10 {
        let p = k as f64 / 10.0;
        assert!((qc_payoff(&h, &h, p).unwrap() - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn v1v3_suite() {
    let r = verify_v1v3(1000, 7, 1e-9);
    assert_eq!(r.checks, 3000);
    assert!(r.passed(), "{:?}", r.failures.first());
}

#[test]
fn v2_suite() {
    let r = verify_v2(1000, 7, 1e-9);
    assert!(r.passed(), "{:?}", r.failures.first());
}

#[test]
fn v2_against_sampled_family() {
    let p1 = ParamV1::new(-PI, 0.4).unwrap();
    let u1 = v1(&p1);
    let u3 = qpfu_core::pennyflip::v3(&qpfu_core::pennyflip::ParamV3 {
        alpha: -1.3,
        source: p1,
    });
    let [e1, e2] = v2_errors(
        &u1,
        &v2(&ParamV2 {
            alpha: 1.0,
            gamma: 2.0,
        }),
        &u3,
    );
    assert!(e1 < 1e-9 && e2 < 1e-9);
}

#[test]
fn w2_suites() {
    assert!(verify_w2(200, 3, 1e-9).passed());
    let r = verify_cq_outcome(5, 3, 1e-10);
    assert_eq!(r.checks, 5 * 11 * 6);
    assert!(r.passed(), "{:?}", r.failures.first());
}

#[test]
fn w2_examples_concede_nothing() {
    let w = w2(&ParamW2 {
        alpha: 1.3,
        beta: 0.4,
        delta: 2.7,
    });
    assert!(cq_payoff(&[0.0, 0.0, 1.0, 0.0], &w).unwrap().abs() < 1e-9);
    let w0 = w2(&ParamW2 {
        alpha: 0.0,
        beta: 0.0,
        delta: 0.0,
    });
    assert!(cq_payoff(&[1.0, 0.0, 0.0, 0.0], &w0).unwrap().abs() < 1e-9);
}

#[test]
fn hadamard_pair_against_w2() {
    let r = verify_w2_surface(20, 100_000, 11);
    assert!(r.grid_max_error < 1e-10);
    assert!(r.mean.abs() < 0.02);
    assert!(r.family_deviation < 1e-10);
    assert!(r.grid_mean.abs() < 1e-12);
    for (b, d) in [(0.3, 2.0), (4.0, 5.5)] {
        assert!((qq_vs_w2_direct(0.9, b, d) - qq_vs_w2_payoff(b, d)).abs() < 1e-10);
    }
}

#[test]
fn euler_suite() {
    let r = verify_euler(1000, 5, 1e-9);
    assert!(r.passed(), "{:?}", r.failures.first());
}
