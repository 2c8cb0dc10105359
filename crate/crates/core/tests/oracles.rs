//! Closed forms checked against direct numerical integration of the ordered
//! joint density `f(x1, x2) = (2/beta^2) e^{-(x1+x2)/beta}` on `x1 <= x2`.

use canoma_core::model::{threshold_b1, threshold_b2};
use canoma_core::sampler::joint_survival;
use canoma_core::{
    union_outage_ca_noma, union_outage_noma, union_outage_oma, PowerSplit, SystemParams,
};

/// Composite Simpson rule on `[lo, hi]` with `n` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> f64 {
    let h = (hi - lo) / n as f64;
    let mut sum = f(lo) + f(hi);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(lo + h * i as f64);
    }
    sum * h / 3.0
}

fn density(beta: f64, x1: f64, x2: f64) -> f64 {
    2.0 / (beta * beta) * (-(x1 + x2) / beta).exp()
}

/// `int_lo^inf f(x) dx` through `x = lo - beta ln(1 - u)`, which turns the
/// exponential tail into a smooth integrand on `[0, 1)`.
fn tail(f: impl Fn(f64) -> f64, lo: f64, beta: f64, n: usize) -> f64 {
    simpson(
        |u| {
            // the integrand has a finite limit at u = 1; evaluate just inside
            let u = u.min(1.0 - 1e-15);
            let x = lo - beta * (-u).ln_1p();
            f(x) * beta / (1.0 - u)
        },
        0.0,
        1.0,
        n,
    )
}

/// `Pr{g1 >= t1, g2 >= t2}` by nested quadrature, split where the inner
/// lower limit switches from `t2` to `x1`.
fn survival_by_quadrature(beta: f64, t1: f64, t2: f64) -> f64 {
    let n = 400;
    let upper = tail(
        |x1| tail(|x2| density(beta, x1, x2), x1, beta, n),
        t1.max(t2),
        beta,
        n,
    );
    let lower = if t1 < t2 {
        simpson(
            |x1| tail(|x2| density(beta, x1, x2), t2, beta, n),
            t1,
            t2,
            n,
        )
    } else {
        0.0
    };
    upper + lower
}

#[test]
fn survival_matches_quadrature() {
    for &(beta, t1, t2) in &[
        (2.0, 0.0375, 0.15),
        (2.0, 0.15, 0.15),
        (1.0, 0.3, 0.1),
        (0.5, 0.0, 0.2),
        (3.0, 1.0, 2.5),
    ] {
        let p = SystemParams::new(100.0, beta, 2.0).unwrap();
        let exact = joint_survival(&p, t1, t2).unwrap();
        let numeric = survival_by_quadrature(beta, t1, t2);
        assert!(
            (exact - numeric).abs() < 1e-9,
            "beta={beta} t=({t1},{t2}): {exact} vs {numeric}"
        );
    }
}

/// The two integrals whose difference gives the closed-form union outage.
#[test]
fn union_outage_matches_integrated_events() {
    for &(db, a) in &[(20.0, 0.2), (20.0, 0.1), (30.0, 0.1062), (12.0, 0.05)] {
        let beta = 2.0;
        let p = SystemParams::from_db(db, beta, 2.0).unwrap();
        let a = PowerSplit::new(a).unwrap();
        let (b1, b2) = (threshold_b1(&p, a), threshold_b2(&p, a));
        // Pr{g1 >= b1}
        let user1_ok = tail(
            |x1| tail(|x2| density(beta, x1, x2), x1, beta, 400),
            b1,
            beta,
            400,
        );
        // Pr{g1 >= b1, g2 < b2}
        let user2_fails = simpson(
            |x2| simpson(|x1| density(beta, x1, x2), b1, x2, 400),
            b1,
            b2,
            400,
        );
        let integrated = 1.0 + user2_fails - user1_ok;
        let closed = union_outage_ca_noma(&p, a);
        assert!(
            (closed - integrated).abs() < 1e-8,
            "{db} dB a={a:?}: {closed} vs {integrated}"
        );
    }
}

#[test]
fn reference_point_values_from_first_principles() {
    let p = SystemParams::from_db(20.0, 2.0, 2.0).unwrap();
    let a = PowerSplit::new(0.2).unwrap();
    // thresholds 0.0375 and 0.15, beta = 2
    let direct = 1.0 + (-0.15f64).exp() - 2.0 * (-0.09375f64).exp();
    assert!((union_outage_ca_noma(&p, a) - direct).abs() < 1e-15);
    assert!((union_outage_ca_noma(&p, a) - 0.039_688).abs() < 1e-5);
    assert!((union_outage_oma(&p) - 0.139_292).abs() < 1e-5);
    assert!((union_outage_noma(&p, a) - 0.139_292).abs() < 1e-5);
    assert!((joint_survival(&p, 0.0375, 0.15).unwrap() - 0.960_312).abs() < 1e-6);
}

#[test]
fn noma_matches_quadrature() {
    let beta = 2.0;
    let p = SystemParams::from_db(20.0, beta, 2.0).unwrap();
    for a in [0.05, 0.12, 0.2, 0.23] {
        let a = PowerSplit::new(a).unwrap();
        let b2 = threshold_b2(&p, a);
        let b21 = canoma_core::model::threshold_b21(&p, a).gain().unwrap();
        let numeric = 1.0 - survival_by_quadrature(beta, b21, b2.max(b21));
        let exact = union_outage_noma(&p, a);
        assert!((exact - numeric).abs() < 1e-9, "{a:?}");
    }
}
