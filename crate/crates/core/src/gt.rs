//! Gelfand–Tsetlin bases along a chain `K = H₁ ≤ H₂ ≤ … ≤ H_m = G`.
//!
//! A multiplicity-free chain gives, for each `σ`, one path per copy of `θ` in
//! `Res_K W_σ`. Each path is realized by composing the unique step
//! intertwiners `ρ_ℓ → Res ρ_{ℓ+1}`, and the resulting subspaces of
//! `Ind_K^G V` are compared with iterated induction through the explicit
//! identification `Ind_H^G Ind_K^H V ≅ Ind_K^G V`, `f(g) = F(g, 1_G)`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::frobenius::{FrobeniusMaps, InducedRep};
use crate::group::{FiniteGroup, Subgroup};
use crate::intertwiner::{gram_residual, hom_basis, intertwining_residual};
use crate::linalg::{canonical_phase, range_projector, CMatrix};
use crate::rep::{equivalent, multiplicity, UnitaryRep};
use crate::report::{MaxResidual, Report};
use crate::scalar::Real;

use std::sync::Arc;

/// One level `H_ℓ` with a complete list of its irreps.
#[derive(Debug, Clone)]
pub struct ChainLevel<T: Real> {
    /// `H_ℓ` as a subgroup of the top group.
    pub subgroup: Subgroup,
    /// Irreps of `subgroup.group()`. May be empty on the bottom level.
    pub irreps: Vec<UnitaryRep<T>>,
}

#[derive(Debug, Clone)]
pub struct SubgroupChain<T: Real> {
    levels: Vec<ChainLevel<T>>,
    theta: UnitaryRep<T>,
}

impl<T: Real> SubgroupChain<T> {
    /// Levels bottom-up; the last must be the whole group.
    pub fn new(levels: Vec<ChainLevel<T>>, theta: UnitaryRep<T>) -> Result<Self> {
        if levels.len() < 2 {
            return Err(Error::InvalidInput("a chain needs at least two levels".into()));
        }
        let top = levels.last().expect("nonempty").subgroup.parent().clone();
        for (l, level) in levels.iter().enumerate() {
            if *level.subgroup.parent() != top {
                return Err(Error::NotASubgroup(format!("level {} lives in a different group", l + 1)));
            }
            if let Some(next) = levels.get(l + 1) {
                if let Some(&g) = level.subgroup.members().iter().find(|&&g| !next.subgroup.contains(g)) {
                    return Err(Error::NotASubgroup(format!("level {} element {} missing from level {}", l + 1, top.label(g), l + 2)));
                }
            }
            for r in &level.irreps {
                if r.group() != level.subgroup.group() {
                    return Err(Error::ShapeMismatch(format!("irrep '{}' is not a representation of level {}", r.label(), l + 1)));
                }
            }
        }
        if levels.last().expect("nonempty").subgroup.order() != top.order() {
            return Err(Error::InvalidInput("the top level must be the whole group".into()));
        }
        if theta.group() != levels[0].subgroup.group() {
            return Err(Error::ShapeMismatch("theta is not a representation of the bottom level".into()));
        }
        Ok(Self { levels, theta })
    }

    pub fn levels(&self) -> &[ChainLevel<T>] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn theta(&self) -> &UnitaryRep<T> {
        &self.theta
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.levels[0].subgroup.parent()
    }

    /// `K = H₁` as a subgroup of the top group.
    pub fn k(&self) -> &Subgroup {
        &self.levels[0].subgroup
    }

    /// Level `lower` re-expressed inside level `upper` (0-based).
    pub fn relative(&self, lower: usize, upper: usize) -> Result<Subgroup> {
        self.levels[lower].subgroup.relative_to(&self.levels[upper].subgroup)
    }

    /// `Ind_K^{H_ℓ} θ` (0-based level).
    pub fn induced_to(&self, level: usize) -> Result<InducedRep<T>> {
        InducedRep::new(&self.theta, &self.relative(0, level)?)
    }
}

/// Vertices `⨿ J_ℓ` and edges `η → ρ` of a multiplicity-free chain.
#[derive(Debug, Clone)]
pub struct BratteliDiagram<T: Real> {
    /// `J_ℓ` per level, bottom-up; `J_1 = {θ}`.
    pub levels: Vec<Vec<UnitaryRep<T>>>,
    /// `edges[ℓ]` holds `(upper, lower)` index pairs into `J_{ℓ+1}` and `J_ℓ`.
    pub edges: Vec<Vec<(usize, usize)>>,
}

impl<T: Real> BratteliDiagram<T> {
    pub fn labels(&self, level: usize) -> Vec<&str> {
        self.levels[level].iter().map(|r| r.label()).collect()
    }

    /// `(upper label, lower label)` per step, bottom-up.
    pub fn adjacency(&self) -> Vec<Vec<(String, String)>> {
        self.edges
            .iter()
            .enumerate()
            .map(|(l, es)| {
                es.iter()
                    .map(|&(u, d)| (self.levels[l + 1][u].label().to_string(), self.levels[l][d].label().to_string()))
                    .collect()
            })
            .collect()
    }

    pub fn top(&self) -> &[UnitaryRep<T>] {
        self.levels.last().expect("nonempty")
    }
}

fn check_irrep_set<T: Real>(irreps: &[UnitaryRep<T>], order: usize, tol: T) -> Result<()> {
    for (i, a) in irreps.iter().enumerate() {
        if !a.is_irreducible(tol) {
            return Err(Error::NotIrreducible { label: a.label().into(), norm: a.character_norm().as_f64() });
        }
        if let Some(b) = irreps[i + 1..].iter().find(|b| equivalent(a, b, tol)) {
            return Err(Error::InvalidInput(format!("irreps '{}' and '{}' are equivalent", a.label(), b.label())));
        }
    }
    let found: usize = irreps.iter().map(|r| r.degree() * r.degree()).sum();
    if found != order {
        return Err(Error::IncompleteIrrepSet { expected: order, found });
    }
    Ok(())
}

/// Computes `J_ℓ` and the branching, rejecting any multiplicity `≥ 2`.
pub fn validate_chain<T: Real>(chain: &SubgroupChain<T>) -> Result<BratteliDiagram<T>> {
    let tol = T::default_tolerance();
    if !chain.theta.is_irreducible(tol) {
        return Err(Error::NotIrreducible { label: chain.theta.label().into(), norm: chain.theta.character_norm().as_f64() });
    }
    for level in &chain.levels[1..] {
        check_irrep_set(&level.irreps, level.subgroup.order(), tol)?;
    }
    let mut levels = vec![vec![chain.theta.clone()]];
    let mut edges = Vec::new();
    for l in 0..chain.len() - 1 {
        let rel = chain.relative(l, l + 1)?;
        let mut next = Vec::new();
        let mut step = Vec::new();
        for eta in &chain.levels[l + 1].irreps {
            let res = eta.restrict(&rel)?;
            let mut lower = Vec::new();
            for (d, rho) in levels[l].iter().enumerate() {
                let m = multiplicity(rho, &res)?;
                if m >= 2 {
                    return Err(Error::GtViolation { level: l + 2, upper: eta.label().into(), lower: rho.label().into(), multiplicity: m });
                }
                if m == 1 {
                    lower.push(d);
                }
            }
            if !lower.is_empty() {
                step.extend(lower.into_iter().map(|d| (next.len(), d)));
                next.push(eta.clone());
            }
        }
        levels.push(next);
        edges.push(step);
    }
    Ok(BratteliDiagram { levels, edges })
}

/// A descending path `ρ_m → … → ρ_1 = θ`, stored top-down.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GtPathSkeleton {
    /// Indices into `J_m, J_{m-1}, …, J_1`.
    pub nodes: Vec<usize>,
    pub labels: Vec<String>,
}

/// All paths from `σ ∈ J_m` down to `θ`, lexicographic in labels top-down.
pub fn enumerate_paths<T: Real>(diagram: &BratteliDiagram<T>, sigma: &str) -> Vec<GtPathSkeleton> {
    let top = diagram.levels.len() - 1;
    let Some(start) = diagram.levels[top].iter().position(|r| r.label() == sigma) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    let mut stack = vec![(top, vec![start])];
    while let Some((level, nodes)) = stack.pop() {
        if level == 0 {
            let labels = nodes.iter().enumerate().map(|(i, &n)| diagram.levels[top - i][n].label().to_string()).collect();
            out.push(GtPathSkeleton { nodes, labels });
            continue;
        }
        let here = *nodes.last().expect("nonempty");
        for &(u, d) in &diagram.edges[level - 1] {
            if u == here {
                let mut next = nodes.clone();
                next.push(d);
                stack.push((level - 1, next));
            }
        }
    }
    out.sort_by(|a, b| a.labels.cmp(&b.labels));
    out
}

/// A realized path: the step isometries (top-down) and `L_{σ,C}: V → W_σ`.
#[derive(Debug, Clone)]
pub struct GtPath<T: Real> {
    pub skeleton: GtPathSkeleton,
    /// `steps[i]: ρ_{m-1-i} → Res ρ_{m-i}` (1-based levels).
    pub steps: Vec<CMatrix<T>>,
    pub l: CMatrix<T>,
}

impl<T: Real> GtPath<T> {
    /// `L₂: ρ_h → Res σ` and `L₁: θ → Res ρ_h` for the 0-based level `h`.
    pub fn split_at(&self, h: usize) -> (CMatrix<T>, CMatrix<T>) {
        let m = self.steps.len() + 1;
        let cut = m - 1 - h;
        let prod = |ms: &[CMatrix<T>], dim: usize| ms.iter().fold(CMatrix::identity(dim), |acc, s| &acc * s);
        let top_dim = self.l.rows();
        let mid_dim = if cut == 0 { top_dim } else { self.steps[cut - 1].cols() };
        (prod(&self.steps[..cut], top_dim), prod(&self.steps[cut..], mid_dim))
    }
}

/// Descends `W_m ⊇ W_{m-1} ⊇ …` along `path`, composing the unique step
/// intertwiners, then fixes the phase. Transversals play no role here.
pub fn realize_path<T: Real>(chain: &SubgroupChain<T>, diagram: &BratteliDiagram<T>, path: &GtPathSkeleton) -> Result<GtPath<T>> {
    let m = chain.len();
    if path.nodes.len() != m {
        return Err(Error::InvalidInput(format!("path of length {} on a chain of {m} levels", path.nodes.len())));
    }
    let mut steps = Vec::with_capacity(m - 1);
    for i in 0..m - 1 {
        let upper_level = m - 1 - i;
        let upper = &diagram.levels[upper_level][path.nodes[i]];
        let lower = &diagram.levels[upper_level - 1][path.nodes[i + 1]];
        let res = upper.restrict(&chain.relative(upper_level - 1, upper_level)?)?;
        let hb = hom_basis(lower, &res)?;
        if hb.len() != 1 {
            return Err(Error::MultiplicityNotOne { found: hb.len() });
        }
        steps.push(hb.elements.into_iter().next().expect("one element"));
    }
    let top_dim = diagram.levels[m - 1][path.nodes[0]].degree();
    let l = steps.iter().fold(CMatrix::identity(top_dim), |acc, s| &acc * s);
    let phase = canonical_phase(l.as_slice());
    Ok(GtPath { skeleton: path.clone(), steps, l: l.scale_c(phase) })
}

/// The unitary `Φ` from direct coordinates `(t, j)` on `Ind_K^{H'} V` to
/// outer coordinates `(s, (r, j))` on `Ind_H^{H'}(Ind_K^H V)`.
#[derive(Debug, Clone)]
pub struct StageIdentification<T: Real> {
    pub middle: usize,
    pub top: usize,
    pub matrix: CMatrix<T>,
    /// `|H'/H|`.
    pub outer_index: usize,
    /// `|H/K|·d_θ`.
    pub inner_dim: usize,
}

impl<T: Real> StageIdentification<T> {
    /// `Φ* · blockdiag(P, …, P) · Φ` for an operator `P` on `Ind_K^H V`.
    pub fn lift(&self, p: &CMatrix<T>) -> CMatrix<T> {
        let block = p.block_diag_repeat(self.outer_index);
        &(&self.matrix.adjoint() * &block) * &self.matrix
    }
}

/// `Φ` for `K ≤ H_middle ≤ H_top` (0-based levels): `F(s, r) = f(sr)`, and
/// `sr = tk` gives the block `θ(k⁻¹)`.
pub fn induction_in_stages<T: Real>(chain: &SubgroupChain<T>, middle: usize, top: usize) -> Result<StageIdentification<T>> {
    if middle > top || top >= chain.len() {
        return Err(Error::IndexOutOfRange(format!("levels {middle} ≤ {top} in a chain of {}", chain.len())));
    }
    let d = chain.theta.degree();
    let mid = &chain.levels[middle].subgroup;
    let upper = &chain.levels[top].subgroup;
    let outer = chain.relative(middle, top)?;
    let inner = chain.relative(0, middle)?;
    let direct = chain.relative(0, top)?;
    let kg = direct.group();
    let dim = direct.index() * d;
    let inner_dim = inner.index() * d;
    let tg = upper.group();
    let mut phi = CMatrix::zeros(dim, dim);
    for (si, &s) in outer.transversal().iter().enumerate() {
        for (ri, &r) in inner.transversal().iter().enumerate() {
            let r_top = upper.position(mid.element(r)).expect("nested levels");
            let (ti, kp) = direct.split(tg.mul(s, r_top));
            phi.set_block(si * inner_dim + ri * d, ti * d, chain.theta.matrix(kg.inv(kp)));
        }
    }
    Ok(StageIdentification { middle, top, matrix: phi, outer_index: outer.index(), inner_dim })
}

/// `Φ` unitary, and `Φ λ_direct(h) Φ* = λ_outer(h)` for every `h ∈ H_top`.
pub fn verify_induction_in_stages<T: Real>(chain: &SubgroupChain<T>, middle: usize, top: usize, tol: T) -> Result<Report> {
    let stage = induction_in_stages(chain, middle, top)?;
    let inner_rep = chain.induced_to(middle)?;
    let outer = InducedRep::new(inner_rep.rep(), &chain.relative(middle, top)?)?;
    let direct = chain.induced_to(top)?;
    let phi = &stage.matrix;
    let mut report = Report::new();
    let n = phi.rows();
    report.record("unitary", (&phi.adjoint() * phi).max_abs_diff(&CMatrix::identity(n)).as_f64(), tol.as_f64(), "Phi* Phi");
    let mut conj = MaxResidual::new();
    for h in direct.group().elements() {
        let r = (phi * direct.rep().matrix(h)).max_abs_diff(&(outer.rep().matrix(h) * phi));
        conj.observe(r.as_f64(), || direct.group().label(h).to_string());
    }
    report.push(conj.into_check("conjugates_lambda", tol.as_f64()));
    report.record(
        "dimension",
        (n as f64 - (stage.outer_index * stage.inner_dim) as f64).abs(),
        tol.as_f64(),
        format!("{} x {}", stage.outer_index, stage.inner_dim),
    );
    Ok(report)
}

/// `(d_ρ/|H|) Σ_h conj χ_ρ(h) λ(h)`.
fn isotypic_projector<T: Real>(rho: &UnitaryRep<T>, lambda: &UnitaryRep<T>) -> CMatrix<T> {
    let chi = rho.character_values();
    let n = lambda.degree();
    let mut p = CMatrix::zeros(n, n);
    for (h, c) in chi.iter().enumerate() {
        p = &p + &lambda.matrix(h).scale_c(c.conj());
    }
    p.scale(T::of_usize(rho.degree()) / T::of_usize(chi.len()))
}

/// `W_C` by iterated induction: `Z₁ = V`, `Z_{ℓ+1}` the `ρ_{ℓ+1}`-isotypic part
/// of `Ind Z_ℓ`, each stage carried into direct coordinates by `Φ`.
pub fn iterated_induction_projector<T: Real>(chain: &SubgroupChain<T>, diagram: &BratteliDiagram<T>, path: &GtPathSkeleton) -> Result<CMatrix<T>> {
    let m = chain.len();
    let mut p = CMatrix::identity(chain.induced_to(0)?.dim());
    for l in 0..m - 1 {
        let stage = induction_in_stages(chain, l, l + 1)?;
        let lifted = stage.lift(&p);
        let rho = &diagram.levels[l + 1][path.nodes[m - 2 - l]];
        let lambda = chain.induced_to(l + 1)?;
        p = &isotypic_projector(rho, lambda.rep()) * &lifted;
    }
    Ok(p)
}

/// The main checks for one `σ ∈ J_m`: path count against the multiplicity,
/// orthonormality and intertwining of `{L_{σ,C}}`, `Σ L_C L_C*` against the
/// `θ`-isotypic projector, the `W_C` from `√(d_σ/d_θ)·(L_C*)∨` (isometric,
/// pairwise orthogonal, summing to the `σ`-isotypic projector, equal to the
/// iterated-induction subspaces), and the containment
/// `[(L₂L₁)*]∨W ≤ Ind_H^G[(L₁*)∨U]` at every intermediate level.
pub fn verify_gt_main<T: Real>(chain: &SubgroupChain<T>, diagram: &BratteliDiagram<T>, sigma: &str, tol: T) -> Result<Report> {
    let tol64 = tol.as_f64();
    let m = chain.len();
    let sigma_rep = diagram
        .top()
        .iter()
        .find(|r| r.label() == sigma)
        .ok_or_else(|| Error::InvalidInput(format!("'{sigma}' is not in the top level set")))?;
    let skeletons = enumerate_paths(diagram, sigma);
    let paths: Vec<GtPath<T>> = skeletons.par_iter().map(|s| realize_path(chain, diagram, s)).collect::<Result<_>>()?;
    let theta = chain.theta();
    let ind = chain.induced_to(m - 1)?;
    let mult = multiplicity(sigma_rep, ind.rep())?;
    let mut report = Report::new();
    report.record("path_count", (paths.len() as f64 - mult as f64).abs(), tol64, format!("{} paths, m = {mult}", paths.len()));

    let ls: Vec<CMatrix<T>> = paths.iter().map(|p| p.l.clone()).collect();
    let res_k = sigma_rep.restrict(chain.k())?;
    report.record("orthonormal", gram_residual(&ls).as_f64(), tol64, sigma);
    let mut tw = MaxResidual::new();
    for p in &paths {
        tw.observe(intertwining_residual(&p.l, theta, &res_k).as_f64(), || p.skeleton.labels.join(" > "));
    }
    report.push(tw.into_check("intertwines", tol64));
    let dw = sigma_rep.degree();
    let v_span = ls.iter().fold(CMatrix::zeros(dw, dw), |acc, l| &acc + &(l * &l.adjoint()));
    report.record("theta_isotypic", v_span.max_abs_diff(&isotypic_projector(theta, &res_k)).as_f64(), tol64, sigma);

    let maps = FrobeniusMaps::new(&ind, sigma_rep, T::gate(tol))?;
    let scale = (T::of_usize(dw) / T::of_usize(theta.degree())).sqrt();
    let xs: Vec<CMatrix<T>> = ls.iter().map(|l| maps.vee(&l.adjoint()).map(|x| x.scale(scale))).collect::<Result<_>>()?;
    let projs: Vec<CMatrix<T>> = xs.iter().map(|x| x * &x.adjoint()).collect();
    let mut iso = MaxResidual::new();
    let mut ortho = MaxResidual::new();
    let mut matched = MaxResidual::new();
    let mut contain = MaxResidual::new();
    for (a, (x, pa)) in xs.iter().zip(&projs).enumerate() {
        let loc = || paths[a].skeleton.labels.join(" > ");
        iso.observe((&x.adjoint() * x).max_abs_diff(&CMatrix::identity(dw)).as_f64(), loc);
        for pb in &projs[a + 1..] {
            ortho.observe((pa * pb).max_abs().as_f64(), loc);
        }
        let right = iterated_induction_projector(chain, diagram, &paths[a].skeleton)?;
        matched.observe(pa.max_abs_diff(&right).as_f64(), loc);
        for h in 1..m - 1 {
            let (_, l1) = paths[a].split_at(h);
            let rho = &diagram.levels[h][paths[a].skeleton.nodes[m - 1 - h]];
            let ind_h = chain.induced_to(h)?;
            let vee_h = FrobeniusMaps::new(&ind_h, rho, T::gate(tol))?.vee(&l1.adjoint())?;
            let stage = induction_in_stages(chain, h, m - 1)?;
            let pr = stage.lift(&range_projector(&vee_h, T::rank_drop()));
            contain.observe((&pr * pa).max_abs_diff(pa).as_f64(), || format!("{} at level {}", loc(), h + 1));
        }
    }
    report.push(iso.into_check("w_isometry", tol64));
    report.push(ortho.into_check("w_orthogonal", tol64));
    let total = projs.iter().fold(CMatrix::zeros(ind.dim(), ind.dim()), |acc, p| &acc + p);
    report.record("sigma_isotypic", total.max_abs_diff(&isotypic_projector(sigma_rep, ind.rep())).as_f64(), tol64, sigma);
    report.push(matched.into_check("iterated_induction_match", tol64));
    report.push(contain.into_check("stage_containment", tol64));
    Ok(report)
}

/// [`verify_gt_main`] over all of `J_m`, plus the stage identifications.
pub fn verify_chain<T: Real>(chain: &SubgroupChain<T>, tol: T) -> Result<Report> {
    let diagram = validate_chain(chain)?;
    let mut report = Report::new();
    for top in 1..chain.len() {
        for middle in 0..top {
            report.absorb(&format!("stages {}<{}", middle + 1, top + 1), verify_induction_in_stages(chain, middle, top, tol)?);
        }
    }
    for sigma in diagram.top() {
        report.absorb(sigma.label(), verify_gt_main(chain, &diagram, sigma.label(), tol)?);
    }
    Ok(report)
}

/// Sum of `m_σ` over the top level, for convenience in reports.
pub fn path_multiplicities<T: Real>(diagram: &BratteliDiagram<T>) -> Vec<(String, usize)> {
    diagram.top().iter().map(|s| (s.label().to_string(), enumerate_paths(diagram, s.label()).len())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;
    use crate::corpus::{self, symmetric_chain};

    #[test]
    fn s3_chain_branching() {
        let chain = symmetric_chain::<f64>(3, "trivial").unwrap();
        let d = validate_chain(&chain).unwrap();
        assert_eq!(d.labels(1), vec!["trivial", "sign"]);
        assert_eq!(d.labels(2), vec!["trivial", "sign", "standard"]);
        let counts = path_multiplicities(&d);
        assert_eq!(counts, vec![("trivial".into(), 1), ("sign".into(), 1), ("standard".into(), 2)]);
        let p = enumerate_paths(&d, "standard");
        assert_eq!(p[0].labels, vec!["standard", "sign", "trivial"]);
        assert_eq!(p[1].labels, vec!["standard", "trivial", "trivial"]);
    }

    #[test]
    fn violation_detected() {
        let s3 = corpus::symmetric::<f64>(3).unwrap();
        let k = Subgroup::trivial(&s3.group);
        let whole = Subgroup::whole(&s3.group);
        let irreps = s3.irreps.iter().map(|r| r.restrict(&whole).unwrap()).collect();
        let chain = SubgroupChain::new(
            vec![ChainLevel { subgroup: k.clone(), irreps: vec![] }, ChainLevel { subgroup: whole, irreps }],
            UnitaryRep::trivial(k.group().clone()),
        )
        .unwrap();
        assert!(matches!(
            validate_chain(&chain),
            Err(Error::GtViolation { level: 2, ref upper, multiplicity: 2, .. }) if upper == "standard"
        ));
    }

    #[test]
    fn two_level_q8() {
        let q8 = corpus::quaternion8::<f64>().unwrap();
        let k = Subgroup::trivial(&q8.group);
        let whole = Subgroup::whole(&q8.group);
        let all = q8.irreps.iter().map(|r| r.restrict(&whole).unwrap()).collect();
        let chain = SubgroupChain::new(
            vec![ChainLevel { subgroup: k.clone(), irreps: vec![] }, ChainLevel { subgroup: whole, irreps: all }],
            UnitaryRep::trivial(k.group().clone()),
        )
        .unwrap();
        // the 2-dim irrep restricts to 2·trivial on {e}
        assert!(matches!(validate_chain(&chain), Err(Error::GtViolation { multiplicity: 2, .. })));
    }

    #[test]
    fn two_level_chain_is_hom_basis() {
        let pair = corpus::standard_pairs::<f64>().unwrap().into_iter().find(|p| p.name == "S3/S2 trivial").unwrap();
        let whole = Subgroup::whole(&pair.group.group);
        let irreps = pair.group.irreps.iter().map(|r| r.restrict(&whole).unwrap()).collect();
        let chain = SubgroupChain::new(
            vec![ChainLevel { subgroup: pair.subgroup.clone(), irreps: pair.k_irreps.clone() }, ChainLevel { subgroup: whole, irreps }],
            pair.theta.clone(),
        )
        .unwrap();
        let d = validate_chain(&chain).unwrap();
        let p = enumerate_paths(&d, "standard");
        assert_eq!(p.len(), 1);
        let l = realize_path(&chain, &d, &p[0]).unwrap().l;
        let res = pair.group.irrep("standard").unwrap().restrict(&pair.subgroup).unwrap();
        let hb = hom_basis(&pair.theta, &res).unwrap();
        assert!(l.max_abs_diff(&hb.elements[0]) < 1e-12);
        assert!(verify_chain(&chain, 1e-9).unwrap().passed());
    }

    #[test]
    fn s3_chain_main_theorem() {
        let chain = symmetric_chain::<f64>(3, "trivial").unwrap();
        let d = validate_chain(&chain).unwrap();
        let paths: Vec<_> = enumerate_paths(&d, "standard").iter().map(|p| realize_path(&chain, &d, p).unwrap()).collect();
        let ip = crate::intertwiner::nhs_inner(&paths[0].l, &paths[1].l).unwrap();
        assert!(ip.norm() < 1e-12);
        let r = verify_chain(&chain, 1e-9).unwrap();
        assert!(r.passed(), "{r}");
        // the trivial W_C is the constants
        let ind = chain.induced_to(2).unwrap();
        let triv = enumerate_paths(&d, "trivial");
        let p = iterated_induction_projector(&chain, &d, &triv[0]).unwrap();
        assert!(p.max_abs_diff(&CMatrix::from_fn(6, 6, |_, _| Complex::new(1.0 / 6.0, 0.0))) < 1e-12);
        assert_eq!(ind.dim(), 6);
    }

    #[test]
    fn stages_trivial_ends() {
        let chain = symmetric_chain::<f64>(3, "trivial").unwrap();
        for l in 0..3 {
            let s = induction_in_stages(&chain, l, l).unwrap();
            assert!(s.matrix.max_abs_diff(&CMatrix::identity(s.matrix.rows())) < 1e-15);
        }
        let s = induction_in_stages(&chain, 0, 2).unwrap();
        assert!(s.matrix.max_abs_diff(&CMatrix::identity(6)) < 1e-15);
        assert!(verify_induction_in_stages(&chain, 1, 2, 1e-9).unwrap().passed());
    }

    #[test]
    fn s4_chain() {
        let chain = symmetric_chain::<f64>(4, "trivial").unwrap();
        let d = validate_chain(&chain).unwrap();
        let counts: Vec<usize> = path_multiplicities(&d).into_iter().map(|(_, c)| c).collect();
        let dims: Vec<usize> = d.top().iter().map(|r| r.degree()).collect();
        assert_eq!(counts, dims);
        let r = verify_chain(&chain, 1e-9).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn realization_ignores_transversals() {
        let chain = symmetric_chain::<f64>(3, "trivial").unwrap();
        let d = validate_chain(&chain).unwrap();
        let mut levels = chain.levels().to_vec();
        let shifts = vec![1; levels[1].subgroup.index()];
        levels[1].subgroup = levels[1].subgroup.with_shifted_transversal(&shifts).unwrap();
        let shifted = SubgroupChain::new(levels, chain.theta().clone()).unwrap();
        for p in enumerate_paths(&d, "standard") {
            let a = realize_path(&chain, &d, &p).unwrap().l;
            let b = realize_path(&shifted, &d, &p).unwrap().l;
            assert!(a.max_abs_diff(&b) < 1e-12);
        }
    }
}
