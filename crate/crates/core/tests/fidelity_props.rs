use povmkit::builders::{computational_basis, fourier_basis, random_povm, random_rank1_povm};
use povmkit::fidelity::{
    collective_fidelity, estimation_fidelity, separable_saturation_defect, FidelityConstants,
};
use povmkit::linalg::random::{random_unitary, seeded};
use povmkit::povm::{Povm, StochasticMatrix};
use proptest::prelude::*;
use rand::Rng;

fn f(povms: &[&Povm]) -> f64 {
    estimation_fidelity(povms).unwrap().value
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn unitary_invariance(seed in any::<u64>(), d in 2usize..=4) {
        let mut rng = seeded(seed);
        let p = random_povm(d, rng.random_range(2..=d + 2), rng.random()).unwrap();
        let q = random_povm(d, rng.random_range(2..=d + 2), rng.random()).unwrap();
        let u = random_unitary(&mut rng, d);
        let (pu, qu) = (p.conjugate(&u), q.conjugate(&u));
        prop_assert!((f(&[&p]) - f(&[&pu])).abs() < 1e-10);
        prop_assert!((f(&[&p, &q]) - f(&[&pu, &qu])).abs() < 1e-10);
    }

    #[test]
    fn coarse_graining_never_helps(seed in any::<u64>(), d in 2usize..=4, copies in 1usize..=3) {
        let mut rng = seeded(seed);
        let p = random_povm(d, rng.random_range(2..=d + 2), rng.random()).unwrap();
        let rows = rng.random_range(1..=p.len());
        let cg = p.coarse_grain(&StochasticMatrix::random(&mut rng, rows, p.len())).unwrap();
        let fine = f(&vec![&p; copies]);
        let coarse = f(&vec![&cg; copies]);
        prop_assert!(coarse <= fine + 1e-10, "{coarse} > {fine}");
    }

    #[test]
    fn product_beats_each_component(seed in any::<u64>(), d in 2usize..=4) {
        let mut rng = seeded(seed);
        let a = random_povm(d, rng.random_range(1..=d + 2), rng.random()).unwrap();
        let c = random_povm(d, rng.random_range(1..=d + 2), rng.random()).unwrap();
        prop_assert!(f(&[&c, &a]) >= f(&[&a]).max(f(&[&c])) - 1e-10);
    }

    #[test]
    fn one_copy_sandwich(seed in any::<u64>(), d in 2usize..=5) {
        let mut rng = seeded(seed);
        let p = random_povm(d, rng.random_range(1..=d + 3), rng.random()).unwrap();
        let v = f(&[&p]);
        prop_assert!(v >= 1.0 / d as f64 - 1e-12 && v <= 2.0 / (d as f64 + 1.0) + 1e-12);
    }

    #[test]
    fn collective_sandwich(seed in any::<u64>(), copies in 1usize..=3) {
        let d: usize = 2;
        let mut rng = seeded(seed);
        let big = d.pow(copies as u32);
        let p = random_povm(big, rng.random_range(1..=big + 2), rng.random()).unwrap();
        let v = collective_fidelity(&p, d, copies).unwrap().value;
        let ub = FidelityConstants::new(d).n_copy_ub(copies);
        prop_assert!(v >= 0.5 - 1e-10 && v <= ub + 1e-10, "{v}");
    }

    #[test]
    fn irreducible_rank1_refinement(seed in any::<u64>(), d in 2usize..=3) {
        let mut rng = seeded(seed);
        let a = random_rank1_povm(d, rng.random_range(d + 1..=d * d), rng.random()).unwrap();
        prop_assume!(!a.is_reducible());
        let c = random_rank1_povm(d, rng.random_range(d..=d * d), rng.random()).unwrap();
        let rows = rng.random_range(1..c.len().max(2));
        let cg = c.coarse_grain(&StochasticMatrix::random(&mut rng, rows, c.len())).unwrap();
        prop_assert!(f(&[&a, &cg]) <= f(&[&a, &c]) + 1e-10);
    }
}

#[test]
fn product_basis_as_collective_povm() {
    // the collective engine must agree with the product engine and stay strictly below (N+1)/(N+d)
    for d in 2..=3 {
        let b = computational_basis(d);
        let v = collective_fidelity(&b.tensor(&b), d, 2).unwrap().value;
        assert!((v - f(&[&b, &b])).abs() < 1e-12);
        assert!((v - 2.0 / (d as f64 + 1.0)).abs() < 1e-12);
        assert!(v < FidelityConstants::new(d).n_copy_ub(2));
    }
}

#[test]
fn mu_product_elements_saturate_separable_condition() {
    for d in 2..=5 {
        let prod = computational_basis(d).tensor(&fourier_basis(d));
        for a in prod.elements() {
            assert!(separable_saturation_defect(a, d).abs() < 1e-12);
        }
        let same = computational_basis(d).tensor(&computational_basis(d));
        assert!(same.elements().iter().any(|a| separable_saturation_defect(a, d).abs() > 1e-3));
    }
}
