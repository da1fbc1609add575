//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use povmkit::builders::{complete_mub, computational_basis, fourier_basis, random_rank1_povm, sic_d2_tetrahedron, sic_d3};
use povmkit::designs::{
    design_lower_bound, frame_potential, half_moment_bounds, haar_frame_potential, povm_frame_potential,
    povm_to_design, zeta, MomentEnsemble, WeightedStateSet,
};
use povmkit::fidelity::{
    collective_fidelity, estimation_fidelity, q_map_1, q_map_2, q_map_3, q_map_general, FidelityConstants,
};
use povmkit::linalg::random::{random_psd, seeded};
use povmkit::povm::Povm;
use povmkit::qubit::{
    fid1, fid2_iid, fid2_pair, fidelity_vs_entropy_curve, h_mes, qubit_compatible, rank1_pair_fidelity,
    QubitBinaryPovm,
};
use povmkit::scan::{mub_fidelity, scan_mub4, scan_sic3};
use povmkit::verify::{run_suite, Suite};
use rand::Rng;

const SEED: u64 = 20240611;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

/// Largest deviation seen, plus the first offending case.
#[derive(Default)]
struct Dev {
    max: f64,
    worst: String,
}

impl Dev {
    fn see(&mut self, got: f64, want: f64, what: impl FnOnce() -> String) {
        let e = (got - want).abs();
        if e > self.max || e.is_nan() {
            self.max = if e.is_nan() { f64::INFINITY } else { e };
            self.worst = what();
        }
    }
}

fn fid(povms: &[&Povm]) -> f64 {
    estimation_fidelity(povms).unwrap().value
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn single_threaded<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(f)
}

fn ac1() -> Outcome {
    let mut dev = Dev::default();
    let mut slowest = Duration::ZERO;
    let mut check = |label: String, want: f64, f: &dyn Fn() -> f64| {
        let (got, t) = timed(f);
        slowest = slowest.max(t);
        dev.see(got, want, || format!("{label}: {got} vs {want}"));
    };
    for d in 2..=6 {
        let k = FidelityConstants::new(d);
        let r = random_rank1_povm(d, d + 3, SEED + d as u64).unwrap();
        check(format!("rank-1 d={d}"), k.f1, &|| fid(&[&r]));
        let b = computational_basis(d);
        check(format!("basis d={d}"), k.f1, &|| fid(&[&b]));
    }
    for d in 2..=4 {
        let k = FidelityConstants::new(d);
        let b = computational_basis(d);
        check(format!("projective^2 d={d}"), k.f1, &|| fid(&[&b, &b]));
        check(format!("projective^3 d={d}"), k.f3_proj, &|| fid(&[&b, &b, &b]));
        let f = fourier_basis(d);
        check(format!("MU pair d={d}"), k.f2_sep, &|| fid(&[&b, &f]));
    }
    let t = sic_d2_tetrahedron();
    check("SIC^2 d=2".into(), FidelityConstants::new(2).f2_iid, &|| fid(&[&t, &t]));
    let s = sic_d3(0.0);
    check("SIC^2 d=3".into(), FidelityConstants::new(3).f2_iid, &|| fid(&[&s, &s]));
    let pass = dev.max <= 1e-9 && slowest < Duration::from_secs(1);
    outcome(pass, format!("max dev {:.1e}, slowest {:.3} s{}", dev.max, slowest.as_secs_f64(), worst(&dev, pass)))
}

fn worst(dev: &Dev, pass: bool) -> String {
    if pass || dev.worst.is_empty() {
        String::new()
    } else {
        format!(" [{}]", dev.worst)
    }
}

fn ac2() -> Outcome {
    let mut dev = Dev::default();
    for d in 2..=6 {
        let v = povm_frame_potential(&computational_basis(d), 0.5);
        dev.see(v, d as f64, || format!("basis d={d}"));
    }
    let v = povm_frame_potential(&sic_d3(0.3), 0.5);
    dev.see(v, 5.0, || "SIC d=3".into());
    let states = complete_mub(2).unwrap().iter().flat_map(|p| povm_to_design(p).unwrap().states().to_vec()).collect();
    let cmub = WeightedStateSet::uniform(2, states).unwrap();
    let v = frame_potential(&cmub, 0.5);
    dev.see(v, (2.0 + 2f64.powf(2.5)) / 3.0, || "CMUB d=2".into());
    for d in 2..=5 {
        for t in 1..=4 {
            dev.see(haar_frame_potential(d, t as f64), design_lower_bound(d, t), || format!("Haar d={d} t={t}"));
        }
    }
    let pass = dev.max <= 1e-9;
    outcome(pass, format!("max dev {:.1e}{}", dev.max, worst(&dev, pass)))
}

fn ac3() -> Outcome {
    let top = (46.0 + 5.0 * 3f64.sqrt()) / 105.0;
    let ((a, b), t_anchor) = timed(|| (mub_fidelity(PI / 2.0, 0.0, 0.0).unwrap(), mub_fidelity(PI / 2.0, PI / 2.0, PI / 2.0).unwrap()));
    let anchors_ok = (a - 0.5).abs() <= 1e-9 && (b - top).abs() <= 1e-9 && t_anchor < Duration::from_secs(30);
    let (table, t_grid) = timed(|| single_threaded(|| scan_mub4(24).unwrap()));
    let col = table.column("fidelity").unwrap();
    let min = col.iter().copied().fold(f64::INFINITY, f64::min);
    let max = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let grid_ok = table.rows.len() == 24 * 24 * 24 && min >= 0.5 - 1e-9 && max <= top + 1e-9;
    let pass = anchors_ok && grid_ok && t_grid < Duration::from_secs(600);
    outcome(
        pass,
        format!(
            "anchors {:.1e}/{:.1e} in {:.2} s; 24^3 grid min {min:.12} max {max:.12} in {:.1} s single-threaded",
            (a - 0.5).abs(),
            (b - top).abs(),
            t_anchor.as_secs_f64(),
            t_grid.as_secs_f64()
        ),
    )
}

fn ac4() -> Outcome {
    let ((_, diag), t) = timed(|| scan_sic3(90).unwrap());
    let pass = diag.period_max_deviation <= 1e-9
        && diag.min_step_rising > 1e-10
        && diag.min_step_falling > 1e-10
        && diag.argmin_phi == 0.0
        && (diag.argmax_phi - PI / 9.0).abs() < 1e-15
        && t < Duration::from_secs(60);
    outcome(
        pass,
        format!(
            "period dev {:.1e}, min rise {:.1e}, min fall {:.1e}, argmin {}, argmax {:.6}, {:.2} s",
            diag.period_max_deviation,
            diag.min_step_rising,
            diag.min_step_falling,
            diag.argmin_phi,
            diag.argmax_phi,
            t.as_secs_f64()
        ),
    )
}

fn ac5() -> Outcome {
    let mut rng = seeded(SEED);
    let mut worst_q = 0.0f64;
    for d in [2, 3] {
        for n in 1..=3 {
            for _ in 0..20 {
                let ops: Vec<_> = (0..n)
                    .map(|_| {
                        let r = rng.random_range(1..=d);
                        random_psd(&mut rng, d, r)
                    })
                    .collect();
                let closed = match n {
                    1 => q_map_1(&ops[0]),
                    2 => q_map_2(&ops[0], &ops[1]),
                    _ => q_map_3(&ops[0], &ops[1], &ops[2]),
                };
                let oracle = q_map_general(&ops).unwrap();
                worst_q = worst_q.max(closed.max_abs_diff(&oracle) / oracle.max_abs().max(1.0));
            }
        }
    }
    let mut sandwich_violation = 0.0f64;
    for n in 1..=3usize {
        let big = 2usize.pow(n as u32);
        let ub = FidelityConstants::new(2).n_copy_ub(n);
        for _ in 0..50 {
            let m = rng.random_range(2..=big + 2);
            let p = povmkit::builders::random_povm(big, m, rng.random()).unwrap();
            let f = collective_fidelity(&p, 2, n).unwrap().value;
            sandwich_violation = sandwich_violation.max(0.5 - f).max(f - ub);
        }
    }
    let pass = worst_q <= 1e-8 && sandwich_violation <= 1e-8;
    outcome(pass, format!("Q-map max rel dev {worst_q:.1e}; collective sandwich violation {:.1e}", sandwich_violation.max(0.0)))
}

fn suite_outcome(suite: Suite, trials: usize, limit: Duration) -> Outcome {
    let (report, t) = timed(|| run_suite(suite, SEED, trials).unwrap());
    let failed: Vec<String> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
    let total: usize = report.checks.iter().map(|c| c.trials).sum();
    let pass = report.passed && t < limit;
    let mut detail = format!("{} checks, {total} trials, {:.1} s", report.checks.len(), t.as_secs_f64());
    if !failed.is_empty() {
        detail += &format!("; failing: {}", failed.join("; "));
    }
    outcome(pass, detail)
}

fn ac6() -> Outcome {
    suite_outcome(Suite::Bounds, 100, Duration::from_secs(120))
}

fn random_qubit(rng: &mut impl Rng, unbiased: bool) -> QubitBinaryPovm {
    let alpha = if unbiased { 0.0 } else { rng.random_range(0.0..0.95) };
    let len = rng.random::<f64>() * (1.0 - alpha);
    let z: f64 = rng.random_range(-1.0..1.0);
    let t: f64 = rng.random_range(0.0..2.0 * PI);
    let r = (1.0 - z * z).sqrt();
    QubitBinaryPovm::new(alpha, [len * r * t.cos(), len * r * t.sin(), len * z]).unwrap()
}

fn ac7() -> Outcome {
    let mut rng = seeded(SEED + 7);
    let mut dev = Dev::default();
    let mut bad_compatible = 0;
    for i in 0..200 {
        let p = random_qubit(&mut rng, i % 3 == 0);
        let q = random_qubit(&mut rng, i % 3 == 0);
        let (pp, qq) = (p.to_povm(), q.to_povm());
        dev.see(fid1(&p), fid(&[&pp]), || format!("fid1 draw {i}"));
        dev.see(fid2_iid(&p), fid(&[&pp, &pp]), || format!("fid2_iid draw {i}"));
        dev.see(fid2_pair(&p, &q), fid(&[&pp, &qq]), || format!("fid2_pair draw {i}"));
        if i % 3 == 0 && qubit_compatible(&p, &q).unwrap() && fid2_pair(&p, &q) > 2.0 / 3.0 + 1e-10 {
            bad_compatible += 1;
        }
    }
    let pass = dev.max <= 1e-9 && bad_compatible == 0;
    outcome(pass, format!("max dev {:.1e}, compatible pairs above 2/3: {bad_compatible}{}", dev.max, worst(&dev, pass)))
}

fn ac8() -> Outcome {
    let h0 = h_mes(0.0).h_mes;
    let h1 = h_mes(PI / 2.0).h_mes;
    let argmin_dev = [0.2, 0.6, 1.0].iter().map(|&p| (h_mes(p).theta_argmin - p / 2.0).abs()).fold(0.0, f64::max);
    let curve = fidelity_vs_entropy_curve(50).unwrap();
    let follows = curve.points.iter().all(|p| (p.fidelity - rank1_pair_fidelity(p.phi)).abs() < 1e-15);
    let pass = h0.abs() <= 1e-6 && (h1 - 1.0).abs() <= 1e-6 && argmin_dev <= 1e-5 && curve.monotone && follows;
    outcome(
        pass,
        format!("h(0) = {h0:.2e}, h(pi/2) = {h1:.9}, argmin dev {argmin_dev:.1e}, monotone {}", curve.monotone),
    )
}

fn ac9() -> Outcome {
    let mut special = 0.0f64;
    for i in 1..=100 {
        let a = i as f64 / 101.0;
        special = special.max((zeta(a, a).unwrap() - a).abs()).max((zeta(a, a * a).unwrap() - a.sqrt()).abs());
    }
    let mut rng = seeded(SEED + 9);
    let mut sandwich_failures = 0;
    for _ in 0..10_000 {
        let k = rng.random_range(1..=6);
        let mut p: Vec<f64> = (0..k).map(|_| rng.random::<f64>() + 1e-3).collect();
        let s: f64 = p.iter().sum();
        p.iter_mut().for_each(|x| *x /= s);
        let x: Vec<f64> = (0..k).map(|_| rng.random::<f64>()).collect();
        match half_moment_bounds(&MomentEnsemble::new(p, x).unwrap()) {
            Ok(h) if h.holds(1e-12) => {}
            _ => sandwich_failures += 1,
        }
    }
    let mut extremal = 0.0f64;
    for _ in 0..200 {
        let a: f64 = rng.random_range(0.02..0.98);
        let b = a * a + rng.random_range(0.01..0.99) * (a - a * a);
        let lo = half_moment_bounds(&MomentEnsemble::lower_extremal(a, b).unwrap()).unwrap();
        let hi = half_moment_bounds(&MomentEnsemble::upper_extremal(a, b).unwrap()).unwrap();
        extremal = extremal.max((lo.value - lo.lower).abs()).max((hi.value - hi.upper).abs());
    }
    let pass = special <= 1e-12 && sandwich_failures == 0 && extremal <= 1e-10;
    outcome(pass, format!("special-case dev {special:.1e}, sandwich failures {sandwich_failures}/10000, extremal gap {extremal:.1e}"))
}

fn ac10() -> Outcome {
    suite_outcome(Suite::Table1, 50, Duration::from_secs(120))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("exact fidelity constants", ac1),
        ("frame-potential constants", ac2),
        ("MUB-triple anchors and grid", ac3),
        ("SIC-phase scan", ac4),
        ("oracle equivalence", ac5),
        ("bound suites", ac6),
        ("qubit closed forms", ac7),
        ("entropic curve", ac8),
        ("half-moment machinery", ac9),
        ("signature classifier", ac10),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.pass {
            failures += 1;
        }
        println!("[{}] AC{} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
