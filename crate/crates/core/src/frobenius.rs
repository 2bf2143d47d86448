//! Induced representations and the four Frobenius maps `∧, ∨, □, ◇`.
//!
//! Coordinates on `Ind_K^G V` use the orthonormal basis `λ(t) f_{v_j}`
//! (`t ∈ 𝒯` major, `j` minor). The coordinate `(t, j)` of `f` is `f(t)_j`, and
//! values off the transversal follow from `f(tk) = θ(k⁻¹) f(t)`. The first
//! transversal element is `1_G`, so `f_v` is the vector with block 0 equal to
//! `v` and all other blocks zero.

use num_complex::Complex;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};
use crate::intertwiner::{gram_residual, hom_basis, intertwining_residual, nhs_inner, random_intertwiner, verify_isometric_decomposition, HomBasis};
use crate::linalg::CMatrix;
use crate::rep::{equivalent, UnitaryRep};
use crate::report::{MaxResidual, Report};
use crate::scalar::{czero, Real};

use std::sync::Arc;

/// `λ = Ind_K^G θ` with explicit matrices in the canonical basis.
#[derive(Debug, Clone)]
pub struct InducedRep<T: Real> {
    subgroup: Subgroup,
    theta: UnitaryRep<T>,
    rep: UnitaryRep<T>,
}

impl<T: Real> InducedRep<T> {
    /// Induces `theta` (a rep of `subgroup.group()`) up to the parent group.
    pub fn new(theta: &UnitaryRep<T>, subgroup: &Subgroup) -> Result<Self> {
        if theta.group() != subgroup.group() {
            return Err(Error::ShapeMismatch("theta is not a representation of the subgroup".into()));
        }
        let g = subgroup.parent();
        let kg = subgroup.group();
        let d = theta.degree();
        let n = subgroup.index();
        let matrices = g
            .elements()
            .map(|g0| {
                let mut m = CMatrix::zeros(n * d, n * d);
                let g0_inv = g.inv(g0);
                for (ti, &t) in subgroup.transversal().iter().enumerate() {
                    // [λ(g0) f](t) = f(g0⁻¹ t) = θ(k⁻¹) f(t') where g0⁻¹ t = t' k
                    let (tj, k) = subgroup.split(g.mul(g0_inv, t));
                    m.set_block(ti * d, tj * d, theta.matrix(kg.inv(k)));
                }
                m
            })
            .collect();
        let rep = UnitaryRep::from_matrices(g.clone(), matrices, format!("Ind({})", theta.label()))?;
        Ok(Self { subgroup: subgroup.clone(), theta: theta.clone(), rep })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.subgroup.parent()
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn theta(&self) -> &UnitaryRep<T> {
        &self.theta
    }

    /// `λ` as a representation of `G`.
    pub fn rep(&self) -> &UnitaryRep<T> {
        &self.rep
    }

    pub fn dim(&self) -> usize {
        self.rep.degree()
    }

    /// `|G/K|`.
    pub fn index(&self) -> usize {
        self.subgroup.index()
    }

    pub fn d_theta(&self) -> usize {
        self.theta.degree()
    }

    /// Flat coordinate of `(t, j)`.
    pub fn coord(&self, t: usize, j: usize) -> usize {
        t * self.d_theta() + j
    }

    /// `f(g)` for `f` given in coordinates.
    pub fn value_at(&self, f: &[Complex<T>], g: usize) -> Vec<Complex<T>> {
        let d = self.d_theta();
        let (t, k) = self.subgroup.split(g);
        let kinv = self.subgroup.group().inv(k);
        self.theta.matrix(kinv).mul_vec(&f[t * d..(t + 1) * d])
    }

    /// Coordinates of `f_v`.
    pub fn f_v(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        let mut f = vec![czero(); self.dim()];
        f[..v.len()].copy_from_slice(v);
        f
    }

    fn sqrt_index(&self) -> T {
        T::of_usize(self.index()).sqrt()
    }
}

/// The four Frobenius maps for a fixed `(Ind_K^G θ, σ)`.
///
/// Checked variants reject inputs whose intertwining residual is not below `tol`.
pub struct FrobeniusMaps<'a, T: Real> {
    ind: &'a InducedRep<T>,
    sigma: &'a UnitaryRep<T>,
    sigma_res: UnitaryRep<T>,
    tol: T,
}

impl<'a, T: Real> FrobeniusMaps<'a, T> {
    pub fn new(ind: &'a InducedRep<T>, sigma: &'a UnitaryRep<T>, tol: T) -> Result<Self> {
        if sigma.group() != ind.group() {
            return Err(Error::ShapeMismatch("sigma is not a representation of G".into()));
        }
        let sigma_res = sigma.restrict(ind.subgroup())?;
        Ok(Self { ind, sigma, sigma_res, tol })
    }

    pub fn sigma_res(&self) -> &UnitaryRep<T> {
        &self.sigma_res
    }

    fn require(&self, residual: T) -> Result<()> {
        if residual < self.tol {
            Ok(())
        } else {
            Err(Error::NotIntertwiner { residual: residual.as_f64() })
        }
    }

    fn check_shape(&self, m: &CMatrix<T>, rows: usize, cols: usize) -> Result<()> {
        if m.shape() == (rows, cols) {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(format!("expected {rows}x{cols}, got {:?}", m.shape())))
        }
    }

    /// `T ∈ Hom_G(W, Ind V) ↦ T̂ ∈ Hom_K(Res W, V)`, `T̂w = √|G/K| [Tw](1_G)`.
    pub fn hat(&self, t: &CMatrix<T>) -> Result<CMatrix<T>> {
        self.check_shape(t, self.ind.dim(), self.sigma.degree())?;
        self.require(intertwining_residual(t, self.sigma, self.ind.rep()))?;
        Ok(self.hat_unchecked(t))
    }

    pub fn hat_unchecked(&self, t: &CMatrix<T>) -> CMatrix<T> {
        t.block(0, 0, self.ind.d_theta(), t.cols()).scale(self.ind.sqrt_index())
    }

    /// `L ∈ Hom_K(Res W, V) ↦ L∨ ∈ Hom_G(W, Ind V)`, `[L∨w](g) = |G/K|^{-1/2} L σ(g⁻¹) w`.
    pub fn vee(&self, l: &CMatrix<T>) -> Result<CMatrix<T>> {
        self.check_shape(l, self.ind.d_theta(), self.sigma.degree())?;
        self.require(intertwining_residual(l, &self.sigma_res, self.ind.theta()))?;
        Ok(self.vee_unchecked(l))
    }

    pub fn vee_unchecked(&self, l: &CMatrix<T>) -> CMatrix<T> {
        let g = self.ind.group();
        let d = self.ind.d_theta();
        let s = T::one() / self.ind.sqrt_index();
        let mut out = CMatrix::zeros(self.ind.dim(), self.sigma.degree());
        for (ti, &t) in self.ind.subgroup().transversal().iter().enumerate() {
            out.set_block(ti * d, 0, &(l * self.sigma.matrix(g.inv(t))).scale(s));
        }
        out
    }

    /// `T ∈ Hom_G(Ind V, W) ↦ T□ ∈ Hom_K(V, Res W)`, `T□v = √|G/K| T f_v`.
    pub fn square(&self, t: &CMatrix<T>) -> Result<CMatrix<T>> {
        self.check_shape(t, self.sigma.degree(), self.ind.dim())?;
        self.require(intertwining_residual(t, self.ind.rep(), self.sigma))?;
        Ok(self.square_unchecked(t))
    }

    pub fn square_unchecked(&self, t: &CMatrix<T>) -> CMatrix<T> {
        t.block(0, 0, t.rows(), self.ind.d_theta()).scale(self.ind.sqrt_index())
    }

    /// `L ∈ Hom_K(V, Res W) ↦ L◇ ∈ Hom_G(Ind V, W)`, `L◇f = |G/K|^{-1/2} Σ_t σ(t) L f(t)`.
    pub fn diamond(&self, l: &CMatrix<T>) -> Result<CMatrix<T>> {
        self.check_shape(l, self.sigma.degree(), self.ind.d_theta())?;
        self.require(intertwining_residual(l, self.ind.theta(), &self.sigma_res))?;
        Ok(self.diamond_unchecked(l))
    }

    pub fn diamond_unchecked(&self, l: &CMatrix<T>) -> CMatrix<T> {
        let d = self.ind.d_theta();
        let s = T::one() / self.ind.sqrt_index();
        let mut out = CMatrix::zeros(self.sigma.degree(), self.ind.dim());
        for (ti, &t) in self.ind.subgroup().transversal().iter().enumerate() {
            out.set_block(0, ti * d, &(self.sigma.matrix(t) * l).scale(s));
        }
        out
    }

    /// `L◇` evaluated with another set of coset representatives, in the same
    /// coordinates: `f(t')` is recovered from `f(t)` for each `t'`.
    pub fn diamond_over(&self, l: &CMatrix<T>, representatives: &[usize]) -> Result<CMatrix<T>> {
        let sub = self.ind.subgroup();
        let mut seen = vec![false; sub.index()];
        for &r in representatives {
            let c = sub.coset_index(r);
            if std::mem::replace(&mut seen[c], true) {
                return Err(Error::InvalidInput("two representatives of one coset".into()));
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidInput("representatives miss a coset".into()));
        }
        let s = T::one() / self.ind.sqrt_index();
        Ok(self.sum_over(l, representatives).scale(s))
    }

    /// `L◇ = (|G||K|)^{-1/2} Σ_{g∈G} σ(g) L f(g)`.
    pub fn diamond_group_sum(&self, l: &CMatrix<T>) -> CMatrix<T> {
        let g = self.ind.group();
        let s = T::one() / (T::of_usize(g.order()) * T::of_usize(self.ind.subgroup().order())).sqrt();
        let all: Vec<usize> = g.elements().collect();
        self.sum_over(l, &all).scale(s)
    }

    fn sum_over(&self, l: &CMatrix<T>, elements: &[usize]) -> CMatrix<T> {
        let dim = self.ind.dim();
        let mut out = CMatrix::zeros(self.sigma.degree(), dim);
        for col in 0..dim {
            let mut f = vec![czero(); dim];
            f[col] = Complex::new(T::one(), T::zero());
            let mut acc = vec![czero(); self.sigma.degree()];
            for &x in elements {
                let fx = self.ind.value_at(&f, x);
                let y = self.sigma.matrix(x).mul_vec(&l.mul_vec(&fx));
                acc.iter_mut().zip(y).for_each(|(a, b)| *a = *a + b);
            }
            out.set_col(col, &acc);
        }
        out
    }
}

/// Residuals of the Frobenius identities on `samples` random intertwiners:
/// the four round trips, `(T*)□ = (T̂)*`, `(L*)∨ = (L◇)*`, the isometry of `∧`,
/// the `|G/K|` scaling of `□`, and the transversal independence of `◇`.
pub fn verify_frobenius_identities<T: Real, R: Rng + ?Sized>(
    ind: &InducedRep<T>,
    sigma: &UnitaryRep<T>,
    samples: usize,
    rng: &mut R,
    tol: T,
) -> Result<Report> {
    let maps = FrobeniusMaps::new(ind, sigma, T::gate(tol))?;
    let theta = ind.theta();
    let lambda = ind.rep();
    let n = T::of_usize(ind.index());
    let sub = ind.subgroup();
    let shifted: Vec<usize> = sub
        .transversal()
        .iter()
        .enumerate()
        .map(|(i, &t)| ind.group().mul(t, sub.element((i * 7 + 3) % sub.order())))
        .collect();

    let names = [
        "hat_vee",
        "vee_hat",
        "square_diamond",
        "diamond_square",
        "adjoint_square_hat",
        "adjoint_vee_diamond",
        "hat_isometry",
        "square_scaling",
        "diamond_transversal_independence",
    ];
    let mut worst: Vec<MaxResidual> = names.iter().map(|_| MaxResidual::new()).collect();
    let mut prev: Option<(CMatrix<T>, CMatrix<T>)> = None;
    for s in 0..samples {
        let loc = || format!("{} sample {s}", sigma.label());
        let l_up = random_intertwiner(maps.sigma_res(), theta, rng); // Res W → V
        let l_down = random_intertwiner(theta, maps.sigma_res(), rng); // V → Res W
        let t_in = random_intertwiner(sigma, lambda, rng); // W → Ind
        let t_out = random_intertwiner(lambda, sigma, rng); // Ind → W

        let r = maps.hat(&maps.vee(&l_up)?)?.max_abs_diff(&l_up);
        worst[0].observe(r.as_f64(), loc);
        let hat_t = maps.hat(&t_in)?;
        worst[1].observe(maps.vee(&hat_t)?.max_abs_diff(&t_in).as_f64(), loc);
        let sq = maps.square(&t_out)?;
        worst[2].observe(maps.diamond(&sq)?.max_abs_diff(&t_out).as_f64(), loc);
        let dia = maps.diamond(&l_down)?;
        worst[3].observe(maps.square(&dia)?.max_abs_diff(&l_down).as_f64(), loc);
        worst[4].observe(maps.square(&t_in.adjoint())?.max_abs_diff(&hat_t.adjoint()).as_f64(), loc);
        worst[5].observe(maps.vee(&l_down.adjoint())?.max_abs_diff(&dia.adjoint()).as_f64(), loc);

        if let Some((p_in, p_out)) = &prev {
            let lhs = nhs_inner(&t_in, p_in)?;
            let rhs = nhs_inner(&hat_t, &maps.hat(p_in)?)?;
            worst[6].observe((lhs - rhs).norm().as_f64(), loc);
            let lhs = nhs_inner(&sq, &maps.square(p_out)?)?;
            let rhs = nhs_inner(&t_out, p_out)? * n;
            worst[7].observe((lhs - rhs).norm().as_f64(), loc);
        }
        let lhs = nhs_inner(&t_in, &t_in)?;
        let rhs = nhs_inner(&hat_t, &hat_t)?;
        worst[6].observe((lhs - rhs).norm().as_f64(), loc);
        let lhs = nhs_inner(&sq, &sq)?;
        let rhs = nhs_inner(&t_out, &t_out)? * n;
        worst[7].observe((lhs - rhs).norm().as_f64(), loc);

        let alt = maps.diamond_over(&l_down, &shifted)?;
        let sum = maps.diamond_group_sum(&l_down);
        worst[8].observe(alt.max_abs_diff(&dia).max(sum.max_abs_diff(&dia)).as_f64(), loc);
        prev = Some((t_in, t_out));
    }
    let mut report = Report::new();
    for (name, w) in names.iter().zip(worst) {
        report.push(w.into_check(*name, tol.as_f64()));
    }
    Ok(report)
}

/// One `σ ∈ J`: its multiplicity, the basis `{L_{σ,i}}` of `Hom_K(V, Res W_σ)`,
/// and the isometries `T_{σ,i} = √(d_σ/d_θ)·(L_{σ,i}◇)*: W_σ → Ind V`.
#[derive(Debug, Clone)]
pub struct IsotypicEntry<T: Real> {
    pub sigma: UnitaryRep<T>,
    /// Position of `σ` in the caller's irrep list.
    pub input_index: usize,
    pub multiplicity: usize,
    pub basis: HomBasis<T>,
    pub isometries: Vec<CMatrix<T>>,
}

impl<T: Real> IsotypicEntry<T> {
    pub fn label(&self) -> &str {
        self.sigma.label()
    }

    pub fn d_sigma(&self) -> usize {
        self.sigma.degree()
    }
}

#[derive(Debug, Clone)]
pub struct IsotypicDecomposition<T: Real> {
    pub induced: InducedRep<T>,
    /// Constituents (`m_σ > 0`) in the caller's order.
    pub entries: Vec<IsotypicEntry<T>>,
}

impl<T: Real> IsotypicDecomposition<T> {
    pub fn entry(&self, label: &str) -> Option<&IsotypicEntry<T>> {
        self.entries.iter().find(|e| e.label() == label)
    }

    pub fn entry_index(&self, label: &str) -> Option<usize> {
        self.entries.iter().position(|e| e.label() == label)
    }

    /// `Σ m_σ²`, the dimension of the commutant.
    pub fn commutant_dim(&self) -> usize {
        self.entries.iter().map(|e| e.multiplicity * e.multiplicity).sum()
    }

    pub fn maps<'a>(&'a self, entry: &'a IsotypicEntry<T>, tol: T) -> Result<FrobeniusMaps<'a, T>> {
        FrobeniusMaps::new(&self.induced, &entry.sigma, tol)
    }
}

/// Decomposes `Ind_K^G θ` against the candidate irreps.
///
/// Per-`σ` work runs in parallel; results keep the input order.
pub fn decompose_induced<T: Real>(ind: &InducedRep<T>, irreps: &[UnitaryRep<T>]) -> Result<IsotypicDecomposition<T>> {
    let tol = T::default_tolerance();
    for (i, a) in irreps.iter().enumerate() {
        if a.group() != ind.group() {
            return Err(Error::ShapeMismatch(format!("irrep '{}' is not a representation of G", a.label())));
        }
        if !a.is_irreducible(tol) {
            return Err(Error::NotIrreducible { label: a.label().into(), norm: a.character_norm().as_f64() });
        }
        if let Some(b) = irreps[i + 1..].iter().find(|b| equivalent(a, b, tol)) {
            return Err(Error::InvalidInput(format!("irreps '{}' and '{}' are equivalent", a.label(), b.label())));
        }
    }
    let entries: Vec<Option<IsotypicEntry<T>>> = irreps
        .par_iter()
        .enumerate()
        .map(|(input_index, sigma)| -> Result<Option<IsotypicEntry<T>>> {
            let maps = FrobeniusMaps::new(ind, sigma, tol)?;
            let basis = hom_basis(ind.theta(), maps.sigma_res())?;
            if basis.is_empty() {
                return Ok(None);
            }
            let scale = (T::of_usize(sigma.degree()) / T::of_usize(ind.d_theta())).sqrt();
            let isometries = basis.elements.iter().map(|l| maps.diamond_unchecked(l).adjoint().scale(scale)).collect();
            Ok(Some(IsotypicEntry { sigma: sigma.clone(), input_index, multiplicity: basis.len(), basis, isometries }))
        })
        .collect::<Result<_>>()?;
    let entries: Vec<IsotypicEntry<T>> = entries.into_iter().flatten().collect();
    let found: usize = entries.iter().map(|e| e.multiplicity * e.d_sigma()).sum();
    if found != ind.dim() {
        return Err(Error::IncompleteIrrepSet { expected: ind.dim(), found });
    }
    Ok(IsotypicDecomposition { induced: ind.clone(), entries })
}

/// Checks the decomposition: dimension count, `T_{σ,i}* T_{ρ,j} = δδ I`,
/// intertwining of each `T_{σ,i}`, `Σ T T* = I`, and the orthonormality of the
/// three derived families `√|G/K|·L◇`, `√(d_σ/d_θ)·L*`, `√(d_σ/d_θ)·(L*)∨`.
pub fn verify_decomposition<T: Real>(dec: &IsotypicDecomposition<T>, tol: T) -> Result<Report> {
    let ind = &dec.induced;
    let tol64 = tol.as_f64();
    let mut report = Report::new();
    let found: usize = dec.entries.iter().map(|e| e.multiplicity * e.d_sigma()).sum();
    report.record("dimension_count", (found as f64 - ind.dim() as f64).abs(), tol64, format!("{found} vs {}", ind.dim()));

    let mut iso = MaxResidual::new();
    let mut cross = MaxResidual::new();
    let mut intertwine = MaxResidual::new();
    let mut families = MaxResidual::new();
    let mut proj = CMatrix::zeros(ind.dim(), ind.dim());
    for (a, ea) in dec.entries.iter().enumerate() {
        let r = verify_isometric_decomposition(&ea.isometries, tol);
        iso.observe(r.max_residual(), || ea.label().to_string());
        for t in &ea.isometries {
            intertwine.observe(intertwining_residual(t, &ea.sigma, ind.rep()).as_f64(), || ea.label().to_string());
            proj = &proj + &(t * &t.adjoint());
        }
        for eb in &dec.entries[a + 1..] {
            for (i, ti) in ea.isometries.iter().enumerate() {
                for (j, tj) in eb.isometries.iter().enumerate() {
                    cross.observe((&tj.adjoint() * ti).max_abs().as_f64(), || {
                        format!("{}[{i}] vs {}[{j}]", ea.label(), eb.label())
                    });
                }
            }
        }
        let maps = dec.maps(ea, T::gate(tol))?;
        let sqrt_n = T::of_usize(ind.index()).sqrt();
        let ratio = (T::of_usize(ea.d_sigma()) / T::of_usize(ind.d_theta())).sqrt();
        let dia: Vec<CMatrix<T>> = ea.basis.elements.iter().map(|l| maps.diamond_unchecked(l).scale(sqrt_n)).collect();
        let adj: Vec<CMatrix<T>> = ea.basis.elements.iter().map(|l| l.adjoint().scale(ratio)).collect();
        let vee: Vec<CMatrix<T>> = ea.basis.elements.iter().map(|l| maps.vee_unchecked(&l.adjoint()).scale(ratio)).collect();
        for (name, fam) in [("diamond", &dia), ("adjoint", &adj), ("vee_adjoint", &vee)] {
            families.observe(gram_residual(fam).as_f64(), || format!("{} {name}", ea.label()));
        }
    }
    report.push(iso.into_check("isometric_decomposition", tol64));
    report.push(cross.into_check("cross_orthogonality", tol64));
    report.push(intertwine.into_check("isometry_intertwines", tol64));
    report.record("projector_sum", proj.max_abs_diff(&CMatrix::identity(ind.dim())).as_f64(), tol64, "sum T T*");
    report.push(families.into_check("orthonormal_families", tol64));
    Ok(report)
}
