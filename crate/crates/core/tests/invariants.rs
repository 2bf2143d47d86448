//! Randomized invariants. Each case seeds a ChaCha stream from the proptest
//! input, so failures shrink to a reproducible seed.

use std::sync::Arc;

use indrep::commutant::{fourier, inverse_fourier, CommutantOperator};
use indrep::corpus::{self, cyclic_characters};
use indrep::frobenius::{decompose_induced, verify_frobenius_identities, InducedRep};
use indrep::group::{FiniteGroup, PermutationGroup, Subgroup};
use indrep::hecke::{make_psi, HeckeElement};
use indrep::intertwiner::random_matrix;
use indrep::linalg::{canonical_phase, norm, CMatrix};
use indrep::rep::{character_from_diagonal, GroupAlgebraElement};
use indrep::TAU;
use num_complex::Complex;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_fn(g: &Arc<FiniteGroup>, rng: &mut ChaCha8Rng) -> GroupAlgebraElement<f64> {
    let values = (0..g.order()).map(|_| Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
    GroupAlgebraElement::new(g.clone(), values).unwrap()
}

fn unit_vector(d: usize, rng: &mut ChaCha8Rng) -> Vec<Complex<f64>> {
    let v = random_matrix::<f64, _>(d, 1, rng).col(0);
    let n = norm(&v);
    v.into_iter().map(|z| z / n).collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn cyclic_frobenius_identities(n in 2usize..=12, seed in any::<u64>(), pick in any::<usize>()) {
        let z = corpus::cyclic::<f64>(n).unwrap();
        let divisors: Vec<usize> = (1..=n).filter(|d| n % d == 0).collect();
        let step = divisors[pick % divisors.len()];
        let k = Subgroup::generated(&z.group, &[step % n]).unwrap();
        let gen = k.position(step % n).unwrap();
        let chars = if k.order() == 1 {
            vec![indrep::rep::UnitaryRep::trivial(k.group().clone())]
        } else {
            cyclic_characters(k.group(), gen).unwrap()
        };
        let theta = &chars[pick % chars.len()];
        let ind = InducedRep::new(theta, &k).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for sigma in &z.irreps {
            let r = verify_frobenius_identities(&ind, sigma, 3, &mut rng, TAU).unwrap();
            prop_assert!(r.passed(), "{}", r);
        }
        let dec = decompose_induced(&ind, &z.irreps).unwrap();
        let total: usize = dec.entries.iter().map(|e| e.multiplicity * e.d_sigma()).sum();
        prop_assert_eq!(total, ind.dim());
        prop_assert_eq!(ind.dim(), n / k.order());
    }

    #[test]
    fn convolution_is_associative(seed in any::<u64>(), which in 0usize..4) {
        let g = corpus::group_by_name::<f64>(["Z12", "S4", "D4", "Q8"][which]).unwrap().group;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, c) = (random_fn(&g, &mut rng), random_fn(&g, &mut rng), random_fn(&g, &mut rng));
        let left = a.convolve(&b).convolve(&c);
        let right = a.convolve(&b.convolve(&c));
        prop_assert!(left.max_abs_diff(&right) < 1e-10);
        // f * h = R_h f
        let m = b.right_convolution_matrix();
        let via = CMatrix::column(a.values());
        prop_assert!((&m * &via).max_abs_diff(&a.convolve(&b).as_column()) < 1e-10);
    }

    #[test]
    fn character_from_any_unit_vector(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for g in [corpus::symmetric::<f64>(4).unwrap(), corpus::quaternion8().unwrap(), corpus::dihedral4().unwrap()] {
            for sigma in &g.irreps {
                let w = unit_vector(sigma.degree(), &mut rng);
                let rebuilt = character_from_diagonal(sigma, &w).unwrap();
                prop_assert!(rebuilt.max_abs_diff(&sigma.character()) < TAU);
            }
        }
    }

    #[test]
    fn commutant_fourier_roundtrip(seed in any::<u64>(), which in 0usize..4) {
        let names = ["S3/1 trivial", "S4/V4 sign_b", "D4/<s> chi1", "S3/S3 standard"];
        let p = corpus::standard_pairs::<f64>().unwrap().into_iter().find(|p| p.name == names[which]).unwrap();
        let ind = InducedRep::new(&p.theta, &p.subgroup).unwrap();
        let dec = decompose_induced(&ind, &p.group.irreps).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = CommutantOperator::random(&dec, &mut rng);
        let b = CommutantOperator::random(&dec, &mut rng);
        let fa = fourier(&dec, &a).unwrap();
        let fb = fourier(&dec, &b).unwrap();
        let ab = CommutantOperator::new(&dec, &a.matrix * &b.matrix, 1e-8).unwrap();
        prop_assert!(fourier(&dec, &ab).unwrap().max_abs_diff(&fa.mul(&fb).unwrap()).unwrap() < TAU);
        prop_assert!(inverse_fourier(&dec, &fa).unwrap().matrix.max_abs_diff(&a.matrix) < TAU);
    }

    #[test]
    fn hecke_projection_is_idempotent(seed in any::<u64>(), which in 0usize..3) {
        let names = ["S3/S2 sign", "S4/S3 standard", "Q8/<i> chi1"];
        let p = corpus::standard_pairs::<f64>().unwrap().into_iter().find(|p| p.name == names[which]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = unit_vector(p.theta.degree(), &mut rng);
        let psi = make_psi(&p.theta, &p.subgroup, &v).unwrap();
        prop_assert!(psi.idempotence_residual() < TAU);
        let f = random_fn(&p.group.group, &mut rng);
        let h = HeckeElement::project(&psi, &f);
        prop_assert!(h.residual < TAU);
        prop_assert!(HeckeElement::new(&psi, h.f.clone(), TAU).is_ok());
    }

    #[test]
    fn cosets_partition(gens in proptest::collection::vec(Just(()).prop_perturb(|_, mut r| {
        let mut p: Vec<usize> = (0..4).collect();
        for i in (1..4).rev() { p.swap(i, r.random_range(0..=i)); }
        p
    }), 1..3), shift in any::<usize>()) {
        let s4 = PermutationGroup::symmetric(4).unwrap();
        let idx: Vec<usize> = gens.iter().map(|p| s4.index_of(p).unwrap()).collect();
        let k = Subgroup::generated(&s4.group, &idx).unwrap();
        prop_assert_eq!(24 % k.order(), 0);
        let shifts = vec![shift % k.order(); k.index()];
        prop_assert_eq!(k.transversal()[0], s4.group.identity());
        for sub in [k.clone(), k.with_shifted_transversal(&shifts).unwrap()] {
            let mut seen = [false; 24];
            for g in s4.group.elements() {
                let (t, kp) = sub.split(g);
                prop_assert_eq!(s4.group.mul(sub.transversal()[t], sub.element(kp)), g);
                prop_assert!(!std::mem::replace(&mut seen[g], true));
            }
        }
    }

    #[test]
    fn canonical_phase_is_phase_invariant(seed in any::<u64>(), angle in 0.0f64..std::f64::consts::TAU) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_matrix::<f64, _>(3, 2, &mut rng);
        let rotated = m.scale_c(Complex::from_polar(1.0, angle));
        let a = m.scale_c(canonical_phase(m.as_slice()));
        let b = rotated.scale_c(canonical_phase(rotated.as_slice()));
        prop_assert!(a.max_abs_diff(&b) < 1e-12);
    }
}
