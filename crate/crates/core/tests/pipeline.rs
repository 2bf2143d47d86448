//! End-to-end runs through the public API, in both scalar types.

use indrep::commutant::verify_commutant;
use indrep::corpus::{self, symmetric_chain};
use indrep::frobenius::{decompose_induced, verify_decomposition, verify_frobenius_identities, InducedRep};
use indrep::gt::{enumerate_paths, realize_path, validate_chain, verify_chain};
use indrep::hecke::HeckeAlgebra;
use indrep::{Error, Real, TAU};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pair<T: Real>(name: &str) -> corpus::CorpusPair<T> {
    corpus::standard_pairs::<T>().unwrap().into_iter().find(|p| p.name == name).unwrap()
}

fn full_run<T: Real>(name: &str, tol: T) {
    let p = pair::<T>(name);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let ind = InducedRep::new(&p.theta, &p.subgroup).unwrap();
    for sigma in &p.group.irreps {
        let r = verify_frobenius_identities(&ind, sigma, 4, &mut rng, tol).unwrap();
        assert!(r.passed(), "{name} {}: {r}", sigma.label());
    }
    let dec = decompose_induced(&ind, &p.group.irreps).unwrap();
    let r = verify_decomposition(&dec, tol).unwrap();
    assert!(r.passed(), "{name}: {r}");
    let r = verify_commutant(&dec, 4, &mut rng, tol).unwrap();
    assert!(r.passed(), "{name}: {r}");
    let h = HeckeAlgebra::new(dec, 0, &p.group.irreps, Some(&p.k_irreps)).unwrap();
    let r = h.verify(4, &mut rng, tol).unwrap();
    assert!(r.passed(), "{name}: {r}");
}

#[test]
fn f64_gelfand_pair() {
    full_run::<f64>("S4/S3 trivial", TAU);
}

#[test]
fn f64_klein_nontrivial_theta() {
    full_run::<f64>("S4/V4 sign_b", TAU);
}

#[test]
fn f32_same_pipeline() {
    full_run::<f32>("S3/S2 sign", f32::default_tolerance());
    full_run::<f32>("Q8/<i> chi1", f32::default_tolerance());
}

#[test]
fn f32_chain() {
    let chain = symmetric_chain::<f32>(3, "trivial").unwrap();
    assert!(verify_chain(&chain, f32::default_tolerance()).unwrap().passed());
}

#[test]
fn regular_representation_multiplicities() {
    for g in corpus::all_groups::<f64>().unwrap() {
        let k = indrep::Subgroup::trivial(&g.group);
        let ind = InducedRep::new(&indrep::rep::UnitaryRep::trivial(k.group().clone()), &k).unwrap();
        let dec = decompose_induced(&ind, &g.irreps).unwrap();
        for e in &dec.entries {
            assert_eq!(e.multiplicity, e.d_sigma(), "{} {}", g.name, e.label());
        }
    }
}

#[test]
fn missing_irrep_is_reported() {
    let p = pair::<f64>("S3/1 trivial");
    let ind = InducedRep::new(&p.theta, &p.subgroup).unwrap();
    let partial: Vec<_> = p.group.irreps.iter().filter(|r| r.label() != "standard").cloned().collect();
    assert!(matches!(decompose_induced(&ind, &partial), Err(Error::IncompleteIrrepSet { expected: 6, found: 2 })));
}

#[test]
fn s4_chain_paths_are_dimensions() {
    let chain = symmetric_chain::<f64>(4, "trivial").unwrap();
    let d = validate_chain(&chain).unwrap();
    for sigma in d.top() {
        let paths = enumerate_paths(&d, sigma.label());
        assert_eq!(paths.len(), sigma.degree());
        for p in &paths {
            let l = realize_path(&chain, &d, p).unwrap();
            assert_eq!(l.l.shape(), (sigma.degree(), 1));
        }
    }
}
