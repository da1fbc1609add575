use std::f64::consts::PI;

use povmkit::fidelity::estimation_fidelity;
use povmkit::linalg::random::seeded;
use povmkit::qubit::{
    fid1, fid2_iid, fid2_pair, fidelity_vs_entropy_curve, h_mes, qubit_compatible, rank1_pair_fidelity,
    QubitBinaryPovm,
};
use rand::Rng;

fn random_direction(rng: &mut impl Rng) -> [f64; 3] {
    let z: f64 = rng.random_range(-1.0..1.0);
    let t: f64 = rng.random_range(0.0..2.0 * PI);
    let r = (1.0 - z * z).sqrt();
    [r * t.cos(), r * t.sin(), z]
}

fn random_qubit_povm(rng: &mut impl Rng, unbiased: bool) -> QubitBinaryPovm {
    let alpha = if unbiased { 0.0 } else { rng.random_range(0.0..0.95) };
    let len = rng.random::<f64>() * (1.0 - alpha);
    let n = random_direction(rng);
    QubitBinaryPovm::new(alpha, [len * n[0], len * n[1], len * n[2]]).unwrap()
}

#[test]
fn closed_forms_match_engine() {
    let mut rng = seeded(200);
    for i in 0..200 {
        let p = random_qubit_povm(&mut rng, i % 4 == 0);
        let q = random_qubit_povm(&mut rng, i % 5 == 0);
        let (pp, qq) = (p.to_povm(), q.to_povm());
        let e1 = estimation_fidelity(&[&pp]).unwrap().value;
        let e2 = estimation_fidelity(&[&pp, &pp]).unwrap().value;
        let epq = estimation_fidelity(&[&pp, &qq]).unwrap().value;
        assert!((fid1(&p) - e1).abs() < 1e-9, "{p:?}");
        assert!((fid2_iid(&p) - e2).abs() < 1e-9, "{p:?}");
        assert!((fid2_pair(&p, &q) - epq).abs() < 1e-9, "{p:?} {q:?}");
    }
}

#[test]
fn compatible_unbiased_pairs_stay_below_one_copy_bound() {
    let mut rng = seeded(7);
    let mut compatible = 0;
    for _ in 0..2000 {
        let p = random_qubit_povm(&mut rng, true);
        let q = random_qubit_povm(&mut rng, true);
        if qubit_compatible(&p, &q).unwrap() {
            compatible += 1;
            assert!(fid2_pair(&p, &q) <= 2.0 / 3.0 + 1e-10);
        }
    }
    assert!(compatible > 100);
}

#[test]
fn entropy_symmetries() {
    for i in 0..=60 {
        let phi = i as f64 * PI / 60.0;
        let v = h_mes(phi).h_mes;
        assert!(v >= 0.0);
        assert!((h_mes(-phi).h_mes - v).abs() < 1e-8, "phi={phi}");
        assert!((h_mes(PI + phi).h_mes - v).abs() < 1e-8, "phi={phi}");
    }
}

#[test]
fn curve_endpoints_and_monotonicity() {
    let c = fidelity_vs_entropy_curve(50).unwrap();
    assert!(c.monotone);
    let (first, last) = (c.points[0], c.points[49]);
    assert!((first.fidelity - 2.0 / 3.0).abs() < 1e-12 && first.h_mes.abs() < 1e-12);
    assert!((last.fidelity - (3.0 + 2f64.sqrt()) / 6.0).abs() < 1e-12 && (last.h_mes - 1.0).abs() < 1e-6);
    assert!((rank1_pair_fidelity(PI / 2.0) - last.fidelity).abs() < 1e-15);
}

#[test]
fn argmin_leaves_the_bisector_past_the_switch() {
    // below the switch angle the minimum sits at phi/2; above it the minimum moves off the bisector
    for &phi in &[0.3, 0.8, 1.1] {
        assert!((h_mes(phi).theta_argmin - phi / 2.0).abs() < 1e-5);
    }
    let p = h_mes(1.4);
    assert!((p.theta_argmin - 0.7).abs() > 1e-2);
}

#[test]
fn switch_angle_located_by_bisection() {
    let off_bisector = |phi: f64| {
        let t = h_mes(phi).theta_argmin;
        let t = if t > PI / 2.0 { t - PI } else { t };
        (t - phi / 2.0).abs() > 1e-4
    };
    let (mut lo, mut hi) = (1.0, 1.3);
    assert!(!off_bisector(lo) && off_bisector(hi));
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if off_bisector(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    assert!((lo - 1.17056).abs() < 1e-3, "switch at {lo}");
}
