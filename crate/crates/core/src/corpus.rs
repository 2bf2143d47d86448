//! Bundled test groups with tabulated unitary irreps, and the standard
//! `(G, K, θ)` triples used by the verification suites.
//!
//! Symmetric-group irreps are formulas on permutations, so they can be
//! evaluated on any permutation group that fixes the tail points. That is how
//! `S_k ≤ S_n` gets its irreps along a chain.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{parity, FiniteGroup, PermutationGroup, Subgroup};
use crate::gt::{ChainLevel, SubgroupChain};
use crate::linalg::CMatrix;
use crate::rep::UnitaryRep;
use crate::scalar::{c, cone, cr, czero, root_of_unity, Real};

/// A group together with a complete list of pairwise inequivalent irreps.
#[derive(Debug, Clone)]
pub struct CorpusGroup<T: Real> {
    pub name: String,
    pub group: Arc<FiniteGroup>,
    pub irreps: Vec<UnitaryRep<T>>,
    /// Permutation realization, when the group comes from one.
    pub perms: Option<Vec<Vec<usize>>>,
}

impl<T: Real> CorpusGroup<T> {
    pub fn irrep(&self, label: &str) -> Option<&UnitaryRep<T>> {
        self.irreps.iter().find(|r| r.label() == label)
    }

    /// Element index from its label (cycle notation for permutation groups).
    pub fn element(&self, label: &str) -> Option<usize> {
        self.group.labels()?.iter().position(|l| l == label)
    }
}

/// `ℤ/n` with characters `chi{m}: i ↦ e^{2πi·mi/n}`.
pub fn cyclic<T: Real>(n: usize) -> Result<CorpusGroup<T>> {
    let group = Arc::new(FiniteGroup::cyclic(n)?);
    let irreps = cyclic_characters(&group, if n == 1 { 0 } else { 1 })?;
    Ok(CorpusGroup { name: format!("Z{n}"), group, irreps, perms: None })
}

/// Characters of a cyclic group generated by `generator`: `chi{m}` sends `generator^i` to `e^{2πi·mi/n}`.
pub fn cyclic_characters<T: Real>(group: &Arc<FiniteGroup>, generator: usize) -> Result<Vec<UnitaryRep<T>>> {
    let n = group.order();
    if group.element_order(generator) != n {
        return Err(Error::InvalidInput(format!("element {} does not generate the group", group.label(generator))));
    }
    (0..n)
        .map(|m| {
            UnitaryRep::from_generators(
                group.clone(),
                &[generator],
                &[CMatrix::scalar(root_of_unity(m, n))],
                format!("chi{m}"),
            )
        })
        .collect()
}

/// `S_n` for `1 ≤ n ≤ 4` with its full irrep list.
pub fn symmetric<T: Real>(n: usize) -> Result<CorpusGroup<T>> {
    if !(1..=4).contains(&n) {
        return Err(Error::SizeLimit { what: "bundled symmetric irreps (degree)", value: n, limit: 4 });
    }
    let p = PermutationGroup::symmetric(n)?;
    let irreps = symmetric_irreps_on(n, &p.group, &p.perms)?;
    Ok(CorpusGroup { name: format!("S{n}"), group: p.group, irreps, perms: Some(p.perms) })
}

/// Irreps of `S_k` evaluated on a group of permutations that all fix the
/// points `k, k+1, …` (so it lies inside `S_k`).
///
/// Labels: `trivial`, `sign`, and for `k ≥ 3` `standard` (Helmert basis,
/// compatible with `S_{k-1} ≤ S_k`), for `k = 4` also `standard_sign` and
/// `two` (the 2-dim irrep pulled back through `S_4 → S_3`).
pub fn symmetric_irreps_on<T: Real>(k: usize, group: &Arc<FiniteGroup>, perms: &[Vec<usize>]) -> Result<Vec<UnitaryRep<T>>> {
    if !(1..=4).contains(&k) {
        return Err(Error::SizeLimit { what: "bundled symmetric irreps (degree)", value: k, limit: 4 });
    }
    let local: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| {
            if p.iter().enumerate().skip(k).any(|(i, &x)| i != x) || p.len() < k {
                Err(Error::InvalidInput(format!("permutation {p:?} does not fix the points beyond {k}")))
            } else {
                Ok(p[..k].to_vec())
            }
        })
        .collect::<Result<_>>()?;
    let build = |f: &dyn Fn(&[usize]) -> CMatrix<T>, label: &str| {
        UnitaryRep::from_matrices(group.clone(), local.iter().map(|p| f(p)).collect(), label)
    };
    let mut out = vec![UnitaryRep::trivial(group.clone())];
    if k >= 2 {
        out.push(build(&|p| CMatrix::scalar(cr(T::lit(parity(p) as f64))), "sign")?);
    }
    if k >= 3 {
        out.push(build(&|p| helmert_standard(p), "standard")?);
    }
    if k == 4 {
        out.push(build(&|p| helmert_standard(p).scale(T::lit(parity(p) as f64)), "standard_sign")?);
        out.push(build(&|p| helmert_standard(&pair_partition_action(p)), "two")?);
    }
    Ok(out)
}

/// Standard representation on the sum-zero hyperplane in the Helmert basis
/// `h_a ∝ (1, …, 1, −(a+1), 0, …)`.
fn helmert_standard<T: Real>(p: &[usize]) -> CMatrix<T> {
    let k = p.len();
    let h = |a: usize, i: usize| -> T {
        let norm = T::of_usize((a + 1) * (a + 2)).sqrt();
        if i <= a {
            T::one() / norm
        } else if i == a + 1 {
            -T::of_usize(a + 1) / norm
        } else {
            T::zero()
        }
    };
    // ⟨h_a, P h_b⟩ with P e_i = e_{p(i)}
    CMatrix::from_fn(k - 1, k - 1, |a, b| cr((0..k).map(|i| h(a, p[i]) * h(b, i)).sum()))
}

/// Action of `p ∈ S_4` on the three pair partitions `{01|23}, {02|13}, {03|12}`.
fn pair_partition_action(p: &[usize]) -> Vec<usize> {
    let index = |a: usize, b: usize| {
        // the partner of 0 names the partition
        let partner = if a == 0 {
            b
        } else if b == 0 {
            a
        } else {
            // {a,b} does not contain 0: the partition is fixed by the complement pair
            (1..4).find(|&x| x != a && x != b).expect("three nonzero points")
        };
        partner - 1
    };
    (1..4).map(|partner| index(p[0], p[partner])).collect()
}

/// Dihedral group of the square acting on vertices `0..4`, generated by the
/// rotation `r = [1,2,3,0]` and the reflection `s = [0,3,2,1]`.
pub fn dihedral4<T: Real>() -> Result<CorpusGroup<T>> {
    let p = PermutationGroup::from_generators(4, &[vec![1, 2, 3, 0], vec![0, 3, 2, 1]])?;
    let r = p.index_of(&[1, 2, 3, 0]).expect("generator present");
    let s = p.index_of(&[0, 3, 2, 1]).expect("generator present");
    let g = p.group.clone();
    let lin = |a: f64, b: f64, label: &str| {
        UnitaryRep::from_generators(g.clone(), &[r, s], &[CMatrix::scalar(cr(T::lit(a))), CMatrix::scalar(cr(T::lit(b)))], label)
    };
    let irreps = vec![
        UnitaryRep::trivial(g.clone()),
        lin(1.0, -1.0, "det")?,
        lin(-1.0, 1.0, "rot_sign")?,
        lin(-1.0, -1.0, "rot_sign_det")?,
        UnitaryRep::from_generators(
            g.clone(),
            &[r, s],
            &[CMatrix::from_real_rows(&[&[0.0, -1.0], &[1.0, 0.0]]), CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]])],
            "geometric",
        )?,
    ];
    Ok(CorpusGroup { name: "D4".into(), group: g, irreps, perms: Some(p.perms) })
}

/// Quaternion group with elements ordered `1, -1, i, -i, j, -j, k, -k`.
pub fn quaternion8<T: Real>() -> Result<CorpusGroup<T>> {
    let one = CMatrix::<T>::identity(2);
    let i = CMatrix::from_rows(&[vec![c(T::zero(), T::one()), czero()], vec![czero(), c(T::zero(), -T::one())]]);
    let j = CMatrix::from_rows(&[vec![czero(), cone()], vec![-cone::<T>(), czero()]]);
    let k = &i * &j;
    let base = [one, i, j, k];
    let elems: Vec<CMatrix<T>> = base.iter().flat_map(|m| [m.clone(), -m]).collect();
    let find = |m: &CMatrix<T>| elems.iter().position(|e| e.max_abs_diff(m) < T::lit(1e-6)).expect("closed");
    let table = elems.iter().map(|a| elems.iter().map(|b| find(&(a * b))).collect()).collect();
    let labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"].iter().map(|s| s.to_string()).collect();
    let g = Arc::new(FiniteGroup::from_cayley(table)?.with_labels(labels)?);
    let (gi, gj) = (2, 4);
    let lin = |a: f64, b: f64, label: &str| {
        UnitaryRep::from_generators(g.clone(), &[gi, gj], &[CMatrix::scalar(cr(T::lit(a))), CMatrix::scalar(cr(T::lit(b)))], label)
    };
    let irreps = vec![
        UnitaryRep::trivial(g.clone()),
        lin(1.0, -1.0, "chi_i")?,
        lin(-1.0, 1.0, "chi_j")?,
        lin(-1.0, -1.0, "chi_k")?,
        UnitaryRep::from_matrices(g.clone(), elems, "two")?,
    ];
    Ok(CorpusGroup { name: "Q8".into(), group: g, irreps, perms: None })
}

/// Every bundled group: `ℤ/1 … ℤ/12`, `S_1 … S_4`, `D_4`, `Q_8`.
pub fn all_groups<T: Real>() -> Result<Vec<CorpusGroup<T>>> {
    let mut out = Vec::new();
    for n in 1..=12 {
        out.push(cyclic(n)?);
    }
    for n in 1..=4 {
        out.push(symmetric(n)?);
    }
    out.push(dihedral4()?);
    out.push(quaternion8()?);
    Ok(out)
}

/// Looks a bundled group up by name (`Z1`…`Z12`, `S1`…`S4`, `D4`, `Q8`).
pub fn group_by_name<T: Real>(name: &str) -> Result<CorpusGroup<T>> {
    if let Some(n) = name.strip_prefix('Z').and_then(|s| s.parse::<usize>().ok()) {
        if (1..=12).contains(&n) {
            return cyclic(n);
        }
    }
    if let Some(n) = name.strip_prefix('S').and_then(|s| s.parse::<usize>().ok()) {
        return symmetric(n);
    }
    match name {
        "D4" => dihedral4(),
        "Q8" => quaternion8(),
        _ => Err(Error::InvalidInput(format!("unknown corpus group '{name}'"))),
    }
}

/// A triple `(G, K, θ)` with the irreps of `K` (for adapted-basis completion).
#[derive(Debug, Clone)]
pub struct CorpusPair<T: Real> {
    pub name: String,
    pub group: CorpusGroup<T>,
    pub subgroup: Subgroup,
    pub theta: UnitaryRep<T>,
    pub k_irreps: Vec<UnitaryRep<T>>,
}

impl<T: Real> CorpusPair<T> {
    /// Generators of `K` as parent element indices (its sorted members).
    pub fn subgroup_elements(&self) -> &[usize] {
        self.subgroup.members()
    }
}

fn pair<T: Real>(
    name: &str,
    group: &CorpusGroup<T>,
    subgroup: Subgroup,
    k_irreps: Vec<UnitaryRep<T>>,
    theta_label: &str,
) -> Result<CorpusPair<T>> {
    let theta = k_irreps
        .iter()
        .find(|r| r.label() == theta_label)
        .cloned()
        .ok_or_else(|| Error::InvalidInput(format!("no irrep '{theta_label}' on the subgroup")))?;
    Ok(CorpusPair { name: name.into(), group: group.clone(), subgroup, theta, k_irreps })
}

fn sym_subgroup<T: Real>(
    g: &CorpusGroup<T>,
    k: usize,
    generators: &[&str],
) -> Result<(Subgroup, Vec<UnitaryRep<T>>)> {
    let gens = generators
        .iter()
        .map(|s| g.element(s).ok_or_else(|| Error::InvalidInput(format!("no element {s}"))))
        .collect::<Result<Vec<_>>>()?;
    let sub = Subgroup::generated(&g.group, &gens)?;
    let perms = g.perms.as_ref().expect("permutation group");
    let member_perms: Vec<Vec<usize>> = sub.members().iter().map(|&m| perms[m].clone()).collect();
    let irreps = symmetric_irreps_on(k, sub.group(), &member_perms)?;
    Ok((sub, irreps))
}

fn trivial_subgroup<T: Real>(g: &CorpusGroup<T>) -> (Subgroup, Vec<UnitaryRep<T>>) {
    let sub = Subgroup::trivial(&g.group);
    let irreps = vec![UnitaryRep::trivial(sub.group().clone())];
    (sub, irreps)
}

fn cyclic_subgroup<T: Real>(g: &CorpusGroup<T>, generator: &str) -> Result<(Subgroup, Vec<UnitaryRep<T>>)> {
    let x = g.element(generator).ok_or_else(|| Error::InvalidInput(format!("no element {generator}")))?;
    let sub = Subgroup::generated(&g.group, &[x])?;
    let pos = sub.position(x).expect("generator is a member");
    let irreps = cyclic_characters(sub.group(), pos)?;
    Ok((sub, irreps))
}

/// Klein four subgroup `⟨(12)(34), (13)(24)⟩ ≤ S_4` with its characters
/// `trivial`, `sign_b` (`(12)(34) ↦ 1`, `(13)(24) ↦ −1`), `sign_a`, `sign_ab`.
pub fn klein_in_s4<T: Real>(s4: &CorpusGroup<T>) -> Result<(Subgroup, Vec<UnitaryRep<T>>)> {
    let a = s4.element("(12)(34)").ok_or_else(|| Error::InvalidInput("no (12)(34)".into()))?;
    let b = s4.element("(13)(24)").ok_or_else(|| Error::InvalidInput("no (13)(24)".into()))?;
    let sub = Subgroup::generated(&s4.group, &[a, b])?;
    let (pa, pb) = (sub.position(a).expect("member"), sub.position(b).expect("member"));
    let kg = sub.group().clone();
    let lin = |x: f64, y: f64, label: &str| {
        UnitaryRep::from_generators(kg.clone(), &[pa, pb], &[CMatrix::scalar(cr(T::lit(x))), CMatrix::scalar(cr(T::lit(y)))], label)
    };
    let irreps = vec![UnitaryRep::trivial(kg.clone()), lin(1.0, -1.0, "sign_b")?, lin(-1.0, 1.0, "sign_a")?, lin(-1.0, -1.0, "sign_ab")?];
    Ok((sub, irreps))
}

/// The standard verification triples. They cover the Gelfand pairs
/// `(S₃,S₂)` and `(S₄,S₃)`, trivial `K`, `K = G`, non-trivial and complex
/// `θ`, a 2-dimensional `θ`, and `(S₄, V₄)` with a non-trivial character.
pub fn standard_pairs<T: Real>() -> Result<Vec<CorpusPair<T>>> {
    let s3 = symmetric::<T>(3)?;
    let s4 = symmetric::<T>(4)?;
    let d4 = dihedral4::<T>()?;
    let q8 = quaternion8::<T>()?;
    let z6 = cyclic::<T>(6)?;
    let z12 = cyclic::<T>(12)?;
    let mut out = Vec::new();

    let (k, irr) = sym_subgroup(&s3, 2, &["(12)"])?;
    out.push(pair("S3/S2 trivial", &s3, k.clone(), irr.clone(), "trivial")?);
    out.push(pair("S3/S2 sign", &s3, k, irr, "sign")?);
    let (k, irr) = cyclic_subgroup(&s3, "(123)")?;
    out.push(pair("S3/A3 chi1", &s3, k, irr, "chi1")?);
    let (k, irr) = trivial_subgroup(&s3);
    out.push(pair("S3/1 trivial", &s3, k, irr, "trivial")?);
    let (k, irr) = sym_subgroup(&s3, 3, &["(12)", "(123)"])?;
    out.push(pair("S3/S3 standard", &s3, k, irr, "standard")?);

    let (k, irr) = sym_subgroup(&s4, 3, &["(12)", "(123)"])?;
    out.push(pair("S4/S3 trivial", &s4, k.clone(), irr.clone(), "trivial")?);
    out.push(pair("S4/S3 standard", &s4, k, irr, "standard")?);
    let (k, irr) = klein_in_s4(&s4)?;
    out.push(pair("S4/V4 sign_b", &s4, k, irr, "sign_b")?);
    let (k, irr) = trivial_subgroup(&s4);
    out.push(pair("S4/1 trivial", &s4, k, irr, "trivial")?);

    let (k, irr) = cyclic_subgroup(&d4, "(24)")?;
    out.push(pair("D4/<s> chi1", &d4, k, irr, "chi1")?);
    let (k, irr) = cyclic_subgroup(&d4, "(1234)")?;
    out.push(pair("D4/<r> chi1", &d4, k, irr, "chi1")?);

    let (k, irr) = cyclic_subgroup(&q8, "i")?;
    out.push(pair("Q8/<i> chi1", &q8, k, irr, "chi1")?);
    let (k, irr) = cyclic_subgroup(&q8, "-1")?;
    out.push(pair("Q8/<-1> chi1", &q8, k, irr, "chi1")?);

    let (k, irr) = cyclic_subgroup(&z12, "4")?;
    out.push(pair("Z12/<4> chi1", &z12, k, irr, "chi1")?);
    let (k, irr) = trivial_subgroup(&z6);
    out.push(pair("Z6/1 trivial", &z6, k, irr, "trivial")?);
    Ok(out)
}

/// `S₁ ≤ S₂ ≤ … ≤ S_n` (`S_k` fixing the points `k, …, n−1`) with `θ` the
/// named irrep of the bottom level.
pub fn symmetric_chain<T: Real>(n: usize, theta_label: &str) -> Result<SubgroupChain<T>> {
    let g = symmetric::<T>(n)?;
    let perms = g.perms.as_ref().expect("permutation group");
    let mut levels = Vec::with_capacity(n);
    for k in 1..=n {
        let members: Vec<usize> = g.group.elements().filter(|&x| perms[x][k..].iter().enumerate().all(|(i, &p)| p == k + i)).collect();
        let sub = Subgroup::from_elements(&g.group, &members)?;
        let member_perms: Vec<Vec<usize>> = sub.members().iter().map(|&m| perms[m].clone()).collect();
        let irreps = symmetric_irreps_on(k, sub.group(), &member_perms)?;
        levels.push(ChainLevel { subgroup: sub, irreps });
    }
    let theta = levels[0]
        .irreps
        .iter()
        .find(|r| r.label() == theta_label)
        .cloned()
        .ok_or_else(|| Error::InvalidInput(format!("no irrep '{theta_label}' on S1")))?;
    SubgroupChain::new(levels, theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::{equivalent, multiplicity};

    fn check_complete(g: &CorpusGroup<f64>) {
        let sum: usize = g.irreps.iter().map(|r| r.degree() * r.degree()).sum();
        assert_eq!(sum, g.group.order(), "{}", g.name);
        let classes = g.group.conjugacy_classes().len();
        assert_eq!(g.irreps.len(), classes, "{}", g.name);
        for (a, ra) in g.irreps.iter().enumerate() {
            assert!(ra.is_irreducible(1e-12), "{} {}", g.name, ra.label());
            for rb in &g.irreps[a + 1..] {
                assert!(!equivalent(ra, rb, 1e-9), "{} {} {}", g.name, ra.label(), rb.label());
            }
        }
    }

    #[test]
    fn corpus_groups_complete() {
        for g in all_groups::<f64>().unwrap() {
            check_complete(&g);
        }
    }

    #[test]
    fn pair_subgroup_irreps_complete() {
        for p in standard_pairs::<f64>().unwrap() {
            let sum: usize = p.k_irreps.iter().map(|r| r.degree() * r.degree()).sum();
            assert_eq!(sum, p.subgroup.order(), "{}", p.name);
            assert!(p.theta.is_irreducible(1e-12));
        }
    }

    #[test]
    fn helmert_chain_is_adapted() {
        // standard of S4 restricted to S3 is standard ⊕ trivial, block diagonal
        let s4 = symmetric::<f64>(4).unwrap();
        let std = s4.irrep("standard").unwrap();
        let (k, irr) = sym_subgroup(&s4, 3, &["(12)", "(123)"]).unwrap();
        let res = std.restrict(&k).unwrap();
        for (m, x) in k.members().iter().enumerate() {
            let a = std.matrix(*x);
            assert!(a[(2, 0)].norm() < 1e-15 && a[(0, 2)].norm() < 1e-15);
            assert!((a[(2, 2)] - cr(1.0)).norm() < 1e-15);
            assert!((a[(0, 1)] - irr[2].matrix(m)[(0, 1)]).norm() < 1e-15);
        }
        assert_eq!(multiplicity(&irr[0], &res).unwrap(), 1);
        assert_eq!(multiplicity(&irr[2], &res).unwrap(), 1);
    }

    #[test]
    fn lookup_by_name() {
        assert_eq!(group_by_name::<f64>("Z12").unwrap().group.order(), 12);
        assert_eq!(group_by_name::<f64>("Q8").unwrap().irreps.len(), 5);
        assert!(group_by_name::<f64>("A5").is_err());
    }
}
