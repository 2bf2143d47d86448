//! The Hecke algebra `H(G,K,ψ) = {ψ∗f∗ψ}` inside `L(G)`.
//!
//! `ψ(k) = (d_θ/|K|)⟨v, θ(k)v⟩` on `K`, zero elsewhere. The isometry
//! `T_v: Ind V → L(G)` and the projection `f ↦ f∗ψ` connect it to the
//! commutant; the coefficients `φ^σ_{i,j}(g) = ⟨w_i, σ(g)w_j⟩` over an adapted
//! basis give its Fourier transform and characters.
//!
//! All inner products on `L(G)` are unnormalized: `⟨f, h⟩ = Σ_g f(g) conj h(g)`.

use num_complex::Complex;
use rand::Rng;
use rayon::prelude::*;

use crate::commutant::{fourier_with, u_basis, CommutantOperator, FourierBlocks};
use crate::error::{Error, Result};
use crate::frobenius::{FrobeniusMaps, InducedRep, IsotypicDecomposition};
use crate::intertwiner::{hom_basis, random_matrix};
use crate::linalg::{inner, norm, orthonormal_columns, range_projector, CMatrix};
use crate::group::{FiniteGroup, Subgroup};
use crate::rep::{equivalent, GroupAlgebraElement, UnitaryRep};
use crate::report::{MaxResidual, Report};
use crate::scalar::{cone, czero, Real};

use std::sync::Arc;

/// Above this order the functional identity is checked on sampled `(g, h)`.
pub const FUNCTIONAL_IDENTITY_EXHAUSTIVE_ORDER: usize = 24;

/// `ψ` with the vector `v` it was built from.
#[derive(Debug, Clone)]
pub struct PsiIdempotent<T: Real> {
    subgroup: Subgroup,
    theta: UnitaryRep<T>,
    v: Vec<Complex<T>>,
    psi: GroupAlgebraElement<T>,
    projection_residual: T,
}

impl<T: Real> PsiIdempotent<T> {
    pub fn values(&self) -> &GroupAlgebraElement<T> {
        &self.psi
    }

    pub fn v(&self) -> &[Complex<T>] {
        &self.v
    }

    pub fn theta(&self) -> &UnitaryRep<T> {
        &self.theta
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.subgroup.parent()
    }

    /// Residual of `Σ_k ⟨θ(k)u, v⟩θ(k⁻¹)v = (|K|/d_θ)u` over the standard basis.
    pub fn projection_residual(&self) -> T {
        self.projection_residual
    }

    /// `max |ψ∗ψ − ψ|`.
    pub fn idempotence_residual(&self) -> T {
        self.psi.convolve(&self.psi).max_abs_diff(&self.psi)
    }

    /// `max |conj ψ(g⁻¹) − ψ(g)|`.
    pub fn symmetry_residual(&self) -> T {
        self.psi.involution().max_abs_diff(&self.psi)
    }

    /// `ψ∗f∗ψ`.
    pub fn sandwich(&self, f: &GroupAlgebraElement<T>) -> GroupAlgebraElement<T> {
        self.psi.convolve(f).convolve(&self.psi)
    }

    /// `ψ∗δ_g∗ψ` as the double sum `x ↦ Σ_{k₁gk₂ = x} ψ(k₁)ψ(k₂)`.
    pub fn sandwich_delta(&self, g: usize) -> GroupAlgebraElement<T> {
        let grp = self.group();
        let mut out = vec![czero(); grp.order()];
        for &k1 in self.subgroup.members() {
            let a = self.psi.at(k1);
            let k1g = grp.mul(k1, g);
            for &k2 in self.subgroup.members() {
                let x = grp.mul(k1g, k2);
                out[x] = out[x] + a * self.psi.at(k2);
            }
        }
        GroupAlgebraElement::new(grp.clone(), out).expect("length matches")
    }
}

/// Builds `ψ` from a unit vector `v ∈ V`.
pub fn make_psi<T: Real>(theta: &UnitaryRep<T>, subgroup: &Subgroup, v: &[Complex<T>]) -> Result<PsiIdempotent<T>> {
    if theta.group() != subgroup.group() {
        return Err(Error::ShapeMismatch("theta is not a representation of the subgroup".into()));
    }
    let d = theta.degree();
    if v.len() != d {
        return Err(Error::ShapeMismatch(format!("v has length {}, theta has degree {d}", v.len())));
    }
    let nv = norm(v);
    if (nv - T::one()).abs() > T::default_tolerance() {
        return Err(Error::NotUnitVector { norm: nv.as_f64() });
    }
    let kg = subgroup.group();
    let scale = T::of_usize(d) / T::of_usize(kg.order());
    let mut values = vec![czero(); subgroup.parent().order()];
    for (kp, &k) in subgroup.members().iter().enumerate() {
        // ⟨v, θ(k)v⟩ = (θ(k)v)^H v
        values[k] = inner(v, &theta.matrix(kp).mul_vec(v)) * scale;
    }
    let psi = GroupAlgebraElement::new(subgroup.parent().clone(), values)?;

    let ratio = T::of_usize(kg.order()) / T::of_usize(d);
    let mut projection_residual = T::zero();
    for i in 0..d {
        let u: Vec<Complex<T>> = (0..d).map(|r| if r == i { cone() } else { czero() }).collect();
        let mut acc: Vec<Complex<T>> = vec![czero(); d];
        for kp in kg.elements() {
            let coeff = inner(&theta.matrix(kp).mul_vec(&u), v);
            let w = theta.matrix(kg.inv(kp)).mul_vec(v);
            acc.iter_mut().zip(w).for_each(|(a, b)| *a = *a + coeff * b);
        }
        for (a, b) in acc.iter().zip(&u) {
            projection_residual = projection_residual.max((*a - *b * ratio).norm());
        }
    }
    Ok(PsiIdempotent { subgroup: subgroup.clone(), theta: theta.clone(), v: v.to_vec(), psi, projection_residual })
}

/// Matrix of `T_v: Ind V → L(G)`, `(T_v f)(g) = √(d_θ/|K|)⟨f(g), v⟩`.
pub fn t_v<T: Real>(ind: &InducedRep<T>, psi: &PsiIdempotent<T>) -> Result<CMatrix<T>> {
    if ind.theta().max_matrix_diff(psi.theta()).is_none_or(|d| d > T::default_tolerance())
        || ind.subgroup().members() != psi.subgroup().members()
    {
        return Err(Error::InvalidInput("psi was built from a different (K, theta)".into()));
    }
    let g = ind.group();
    let d = ind.d_theta();
    let kg = ind.subgroup().group();
    let scale = (T::of_usize(d) / T::of_usize(kg.order())).sqrt();
    let vh = CMatrix::from_fn(1, d, |_, c| psi.v()[c].conj());
    let mut out = CMatrix::zeros(g.order(), ind.dim());
    for x in g.elements() {
        let (t, k) = ind.subgroup().split(x);
        // f(tk) = θ(k⁻¹) f(t)
        out.set_block(x, t * d, &(&vh * ind.theta().matrix(kg.inv(k))).scale(scale));
    }
    Ok(out)
}

/// `S_v: V → L(K) ⊆ L(G)`, `[S_v u](k) = √(d_θ/|K|)⟨u, θ(k)v⟩`, as a `|G| × d_θ` matrix.
pub fn s_v<T: Real>(psi: &PsiIdempotent<T>) -> CMatrix<T> {
    let sub = psi.subgroup();
    let d = psi.theta().degree();
    let scale = (T::of_usize(d) / T::of_usize(sub.order())).sqrt();
    let mut out = CMatrix::zeros(sub.parent().order(), d);
    for (kp, &k) in sub.members().iter().enumerate() {
        let w = psi.theta().matrix(kp).mul_vec(psi.v());
        for (c, z) in w.iter().enumerate() {
            out[(k, c)] = z.conj() * scale;
        }
    }
    out
}

/// `P f = f∗ψ`.
pub fn project_p<T: Real>(psi: &PsiIdempotent<T>, f: &GroupAlgebraElement<T>) -> GroupAlgebraElement<T> {
    f.convolve(psi.values())
}

/// Where an adapted basis vector comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AdaptedOrigin {
    /// `L_{σ,i} v_j` (0-based; `j = 0` is `v`).
    Isotypic { i: usize, j: usize },
    /// `M_{ρ,i} u^ρ_j` for a `K`-irrep `ρ` other than `θ`.
    Complement { rho: String, i: usize, j: usize },
    /// Gram–Schmidt completion (no `K`-irreps supplied).
    Completion { index: usize },
    /// `σ ∉ J`: the standard basis.
    Standard { index: usize },
}

/// Adapted orthonormal basis of one `W_σ`.
#[derive(Debug, Clone)]
pub struct AdaptedSigma<T: Real> {
    pub sigma: UnitaryRep<T>,
    /// Index into the decomposition's entries when `σ ∈ J`.
    pub entry: Option<usize>,
    pub multiplicity: usize,
    /// Columns `w_1, …, w_{d_σ}`.
    pub vectors: CMatrix<T>,
    pub origins: Vec<AdaptedOrigin>,
}

impl<T: Real> AdaptedSigma<T> {
    pub fn label(&self) -> &str {
        self.sigma.label()
    }

    pub fn w(&self, h: usize) -> Vec<Complex<T>> {
        self.vectors.col(h)
    }

    /// `u_{i,j}(g) = ⟨σ(g)w_j, w_i⟩` on all of `G`.
    pub fn u(&self, i: usize, j: usize) -> GroupAlgebraElement<T> {
        let wi = self.w(i);
        let wj = self.w(j);
        GroupAlgebraElement::from_fn(self.sigma.group().clone(), |g| inner(&self.sigma.matrix(g).mul_vec(&wj), &wi))
    }
}

#[derive(Debug, Clone)]
pub struct AdaptedBasis<T: Real> {
    /// Columns `v_1 = v, v_2, …, v_{d_θ}`.
    pub v_basis: CMatrix<T>,
    pub sigmas: Vec<AdaptedSigma<T>>,
}

impl<T: Real> AdaptedBasis<T> {
    pub fn sigma(&self, label: &str) -> Option<&AdaptedSigma<T>> {
        self.sigmas.iter().find(|s| s.label() == label)
    }

    /// The adapted basis of the `s`-th constituent in `J`.
    pub fn for_entry(&self, s: usize) -> &AdaptedSigma<T> {
        self.sigmas.iter().find(|a| a.entry == Some(s)).expect("every constituent has an adapted basis")
    }
}

/// Builds the adapted bases for every `σ` in `irreps`. With `k_irreps` the
/// complement of the `θ`-isotypic part is spanned by `M_{ρ,i}u^ρ_j`; without,
/// it is a Gram–Schmidt completion of the standard basis.
pub fn build_adapted_basis<T: Real>(
    dec: &IsotypicDecomposition<T>,
    psi: &PsiIdempotent<T>,
    irreps: &[UnitaryRep<T>],
    k_irreps: Option<&[UnitaryRep<T>]>,
) -> Result<AdaptedBasis<T>> {
    let tol = T::default_tolerance();
    let d_theta = psi.theta().degree();
    let mut seed = CMatrix::zeros(d_theta, d_theta + 1);
    seed.set_col(0, psi.v());
    for j in 0..d_theta {
        seed[(j, j + 1)] = cone();
    }
    let v_basis = orthonormal_columns(&seed, T::rank_keep());
    if v_basis.cols() != d_theta {
        return Err(Error::IllConditionedBasis { residual: 0.0 });
    }
    let others: Vec<&UnitaryRep<T>> = match k_irreps {
        Some(ks) => ks.iter().filter(|r| !equivalent(r, psi.theta(), tol)).collect(),
        None => Vec::new(),
    };
    let sigmas = irreps
        .iter()
        .map(|sigma| {
            let d = sigma.degree();
            let entry = dec.entry_index(sigma.label());
            let Some(s) = entry else {
                let origins = (0..d).map(|index| AdaptedOrigin::Standard { index }).collect();
                return Ok(AdaptedSigma { sigma: sigma.clone(), entry: None, multiplicity: 0, vectors: CMatrix::identity(d), origins });
            };
            let e = &dec.entries[s];
            if e.sigma.max_matrix_diff(sigma).is_none_or(|x| x > tol) {
                return Err(Error::InvalidInput(format!("irrep '{}' differs from the decomposed one", sigma.label())));
            }
            let m = e.multiplicity;
            let mut cols: Vec<Vec<Complex<T>>> = Vec::with_capacity(d);
            let mut origins = Vec::with_capacity(d);
            for i in 0..m {
                cols.push(e.basis.elements[i].mul_vec(&v_basis.col(0)));
                origins.push(AdaptedOrigin::Isotypic { i, j: 0 });
            }
            for i in 0..m {
                for j in 1..d_theta {
                    cols.push(e.basis.elements[i].mul_vec(&v_basis.col(j)));
                    origins.push(AdaptedOrigin::Isotypic { i, j });
                }
            }
            if k_irreps.is_some() {
                let res = sigma.restrict(psi.subgroup())?;
                for rho in &others {
                    let mb = hom_basis(rho, &res)?;
                    for (i, mi) in mb.elements.iter().enumerate() {
                        for j in 0..rho.degree() {
                            cols.push(mi.col(j));
                            origins.push(AdaptedOrigin::Complement { rho: rho.label().to_string(), i, j });
                        }
                    }
                }
                if cols.len() != d {
                    return Err(Error::IncompleteIrrepSet { expected: d, found: cols.len() });
                }
            } else {
                let mut iso = CMatrix::zeros(d, cols.len());
                for (c, col) in cols.iter().enumerate() {
                    iso.set_col(c, col);
                }
                let comp = &CMatrix::identity(d) - &(&iso * &iso.adjoint());
                let q = orthonormal_columns(&comp, T::rank_keep());
                for index in 0..q.cols() {
                    cols.push(q.col(index));
                    origins.push(AdaptedOrigin::Completion { index });
                }
                if cols.len() != d {
                    return Err(Error::IllConditionedBasis { residual: 0.0 });
                }
            }
            let mut vectors = CMatrix::zeros(d, d);
            for (c, col) in cols.iter().enumerate() {
                vectors.set_col(c, col);
            }
            Ok(AdaptedSigma { sigma: sigma.clone(), entry: Some(s), multiplicity: m, vectors, origins })
        })
        .collect::<Result<_>>()?;
    Ok(AdaptedBasis { v_basis, sigmas })
}

/// A function fixed by `f ↦ ψ∗f∗ψ`.
#[derive(Debug, Clone)]
pub struct HeckeElement<T: Real> {
    pub f: GroupAlgebraElement<T>,
    pub residual: T,
}

impl<T: Real> HeckeElement<T> {
    pub fn new(psi: &PsiIdempotent<T>, f: GroupAlgebraElement<T>, tol: T) -> Result<Self> {
        let residual = psi.sandwich(&f).max_abs_diff(&f);
        if !(residual < tol) {
            return Err(Error::NotInHeckeAlgebra { residual: residual.as_f64() });
        }
        Ok(Self { f, residual })
    }

    /// `ψ∗f∗ψ` for arbitrary `f`.
    pub fn project(psi: &PsiIdempotent<T>, f: &GroupAlgebraElement<T>) -> Self {
        let p = psi.sandwich(f);
        let residual = psi.sandwich(&p).max_abs_diff(&p);
        Self { f: p, residual }
    }
}

/// One matrix coefficient `φ^σ_{i,j}`.
#[derive(Debug, Clone)]
pub struct PhiCoefficient<T: Real> {
    pub sigma: String,
    pub i: usize,
    pub j: usize,
    pub values: GroupAlgebraElement<T>,
}

/// The three expressions of the Hecke character `φ^σ(f)`.
#[derive(Debug, Clone, Copy)]
pub struct CharacterRoutes<T: Real> {
    /// `tr 𝓕f(σ)`.
    pub via_fourier: Complex<T>,
    /// `Σ_g f(g) conj φ^σ(g)`.
    pub via_phi: Complex<T>,
    /// `χ^σ(f) = Σ_g χ^σ(g) f(g)`.
    pub via_chi: Complex<T>,
}

impl<T: Real> CharacterRoutes<T> {
    pub fn value(&self) -> Complex<T> {
        self.via_fourier
    }

    pub fn spread(&self) -> T {
        (self.via_fourier - self.via_phi).norm().max((self.via_fourier - self.via_chi).norm())
    }
}

/// Everything needed for harmonic analysis on `H(G,K,ψ)`.
#[derive(Debug, Clone)]
pub struct HeckeAlgebra<T: Real> {
    pub dec: IsotypicDecomposition<T>,
    pub psi: PsiIdempotent<T>,
    pub adapted: AdaptedBasis<T>,
    /// `φ^σ_{i,j}` per constituent, row-major in `(i, j)`.
    phis: Vec<Vec<GroupAlgebraElement<T>>>,
}

impl<T: Real> HeckeAlgebra<T> {
    /// `v_index` picks `v` among the standard basis vectors of `V`.
    pub fn new(
        dec: IsotypicDecomposition<T>,
        v_index: usize,
        irreps: &[UnitaryRep<T>],
        k_irreps: Option<&[UnitaryRep<T>]>,
    ) -> Result<Self> {
        let d = dec.induced.d_theta();
        if v_index >= d {
            return Err(Error::IndexOutOfRange(format!("v index {v_index} with d_theta = {d}")));
        }
        let v: Vec<Complex<T>> = (0..d).map(|r| if r == v_index { cone() } else { czero() }).collect();
        Self::with_vector(dec, &v, irreps, k_irreps)
    }

    pub fn with_vector(
        dec: IsotypicDecomposition<T>,
        v: &[Complex<T>],
        irreps: &[UnitaryRep<T>],
        k_irreps: Option<&[UnitaryRep<T>]>,
    ) -> Result<Self> {
        let psi = make_psi(dec.induced.theta(), dec.induced.subgroup(), v)?;
        let adapted = build_adapted_basis(&dec, &psi, irreps, k_irreps)?;
        let phis = (0..dec.entries.len())
            .map(|s| {
                let a = adapted.for_entry(s);
                let m = a.multiplicity;
                (0..m * m).map(|ij| a.u(ij / m, ij % m).conj()).collect()
            })
            .collect();
        Ok(Self { dec, psi, adapted, phis })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.dec.induced.group()
    }

    fn order(&self) -> T {
        T::of_usize(self.group().order())
    }

    fn check(&self, s: usize, i: usize, j: usize) -> Result<usize> {
        let e = self.dec.entries.get(s).ok_or_else(|| Error::IndexOutOfRange(format!("constituent {s}")))?;
        let m = e.multiplicity;
        if i >= m || j >= m {
            return Err(Error::IndexOutOfRange(format!("({i},{j}) with m_{} = {m}", e.label())));
        }
        Ok(m)
    }

    /// `φ^σ_{i,j}(g) = ⟨w_i, σ(g)w_j⟩`.
    pub fn phi(&self, s: usize, i: usize, j: usize) -> Result<PhiCoefficient<T>> {
        let m = self.check(s, i, j)?;
        Ok(PhiCoefficient { sigma: self.dec.entries[s].label().to_string(), i, j, values: self.phis[s][i * m + j].clone() })
    }

    fn phi_ref(&self, s: usize, i: usize, j: usize) -> &GroupAlgebraElement<T> {
        &self.phis[s][i * self.dec.entries[s].multiplicity + j]
    }

    /// `φ^σ = Σ_i φ^σ_{i,i}`.
    pub fn phi_trace(&self, s: usize) -> GroupAlgebraElement<T> {
        let m = self.dec.entries[s].multiplicity;
        (0..m).fold(GroupAlgebraElement::zero(self.group().clone()), |acc, i| acc.add(self.phi_ref(s, i, i)))
    }

    pub fn element(&self, f: GroupAlgebraElement<T>) -> Result<HeckeElement<T>> {
        HeckeElement::new(&self.psi, f, T::default_tolerance())
    }

    /// `[𝓕f(σ)]_{i,j} = ⟨f, φ^σ_{i,j}⟩`.
    pub fn fourier(&self, f: &HeckeElement<T>) -> Result<FourierBlocks<T>> {
        if !(f.residual < T::default_tolerance()) {
            return Err(Error::NotInHeckeAlgebra { residual: f.residual.as_f64() });
        }
        Ok(self.fourier_unchecked(&f.f))
    }

    fn fourier_unchecked(&self, f: &GroupAlgebraElement<T>) -> FourierBlocks<T> {
        FourierBlocks::from_fn(&self.dec, |s, m| {
            let coeffs: Vec<Complex<T>> = self.phis[s].par_iter().map(|p| f.inner(p)).collect();
            CMatrix::from_fn(m, m, |i, j| coeffs[i * m + j])
        })
    }

    /// `f = (1/|G|) Σ_σ d_σ Σ_{i,j} [𝓕f(σ)]_{i,j} φ^σ_{i,j}`.
    pub fn inverse(&self, blocks: &FourierBlocks<T>) -> Result<HeckeElement<T>> {
        blocks.check_shapes(&self.dec)?;
        let mut f = GroupAlgebraElement::zero(self.group().clone());
        for (s, ((_, a), e)) in blocks.blocks.iter().zip(&self.dec.entries).enumerate() {
            let scale = T::of_usize(e.d_sigma()) / self.order();
            for i in 0..e.multiplicity {
                for j in 0..e.multiplicity {
                    f = f.add(&self.phi_ref(s, i, j).scale(a[(i, j)] * scale));
                }
            }
        }
        let residual = self.psi.sandwich(&f).max_abs_diff(&f);
        Ok(HeckeElement { f, residual })
    }

    /// `φ^σ(f)` three ways.
    pub fn character(&self, s: usize, f: &HeckeElement<T>) -> Result<CharacterRoutes<T>> {
        if s >= self.dec.entries.len() {
            return Err(Error::IndexOutOfRange(format!("constituent {s}")));
        }
        let blocks = self.fourier(f)?;
        Ok(self.routes(s, &f.f, &blocks))
    }

    fn routes(&self, s: usize, f: &GroupAlgebraElement<T>, blocks: &FourierBlocks<T>) -> CharacterRoutes<T> {
        let via_fourier = blocks.blocks[s].1.trace();
        let via_phi = f.inner(&self.phi_trace(s));
        let chi = self.dec.entries[s].sigma.character_values();
        let via_chi = f.values().iter().zip(&chi).fold(czero::<T>(), |acc, (a, b)| acc + a * b);
        CharacterRoutes { via_fourier, via_phi, via_chi }
    }

    /// `φ^σ(h)` evaluated as a trace of the Fourier block.
    fn varphi(&self, s: usize, f: &GroupAlgebraElement<T>) -> Complex<T> {
        let m = self.dec.entries[s].multiplicity;
        (0..m).fold(czero::<T>(), |acc, i| acc + f.inner(self.phi_ref(s, i, i)))
    }

    /// Residuals of `χ^σ(g) = (d_σ/(|G|m_σ)) Σ_h conj φ^σ(h⁻¹gh)` and
    /// `φ^σ(g) = conj φ^σ(ψ∗δ_g∗ψ)` at `g`.
    pub fn phi_character_identities(&self, s: usize, g: usize, tol: T) -> Result<Report> {
        self.check(s, 0, 0)?;
        let e = &self.dec.entries[s];
        let grp = self.group();
        let phi = self.phi_trace(s);
        let chi = e.sigma.character_values()[g];
        let sum = grp.elements().fold(czero::<T>(), |acc, h| acc + phi.at(grp.conjugate(g, h)).conj());
        let rhs = sum * (T::of_usize(e.d_sigma()) / (self.order() * T::of_usize(e.multiplicity)));
        let mut report = Report::new();
        let loc = format!("{} at {}", e.label(), grp.label(g));
        report.record("character_from_phi", (chi - rhs).norm().as_f64(), tol.as_f64(), loc.clone());
        let rhs2 = self.varphi(s, &self.psi.sandwich_delta(g)).conj();
        report.record("phi_from_sandwich", (phi.at(g) - rhs2).norm().as_f64(), tol.as_f64(), loc);
        Ok(report)
    }

    /// `χ^σ(g)` from Hecke character values of `ψ∗1_{C(g)}∗ψ` and `ψ∗δ_h∗ψ` only.
    pub fn curtis_fossum_character(&self, s: usize, g: usize) -> Result<Complex<T>> {
        let values: Vec<Complex<T>> = self.group().elements().map(|h| self.varphi(s, &self.psi.sandwich_delta(h))).collect();
        self.curtis_fossum_with(s, g, &values)
    }

    /// [`Self::curtis_fossum_character`] for every element, sharing the `ψ∗δ_h∗ψ` evaluations.
    pub fn curtis_fossum_table(&self, s: usize) -> Result<Vec<Complex<T>>> {
        self.check(s, 0, 0)?;
        let values: Vec<Complex<T>> = self.group().elements().map(|h| self.varphi(s, &self.psi.sandwich_delta(h))).collect();
        let grp = self.group();
        let classes = grp.conjugacy_classes();
        let per_class: Vec<Complex<T>> =
            classes.representatives().iter().map(|&g| self.curtis_fossum_with(s, g, &values)).collect::<Result<_>>()?;
        Ok(grp.elements().map(|g| per_class[classes.class_of(g)]).collect())
    }

    fn curtis_fossum_with(&self, s: usize, g: usize, sandwich_values: &[Complex<T>]) -> Result<Complex<T>> {
        self.check(s, 0, 0)?;
        let grp = self.group();
        let class = grp.conjugacy_classes().class(grp.conjugacy_classes().class_of(g)).to_vec();
        let ind = GroupAlgebraElement::indicator(grp.clone(), &class);
        let numerator = self.varphi(s, &self.psi.sandwich(&ind)) * (self.order() / T::of_usize(class.len()));
        let denominator = grp.elements().fold(czero::<T>(), |acc, h| acc + sandwich_values[grp.inv(h)] * sandwich_values[h]);
        if denominator.norm() < T::default_tolerance() {
            return Err(Error::DivisionDegenerate { value: denominator.norm().as_f64() });
        }
        Ok(numerator / denominator)
    }

    /// Residual of `Σ_k φ_{i,j}(gkh) conj ψ(k) = Σ_ℓ φ_{i,ℓ}(g) φ_{ℓ,j}(h)`.
    pub fn functional_identity(&self, s: usize, i: usize, j: usize, g: usize, h: usize) -> Result<T> {
        let m = self.check(s, i, j)?;
        let grp = self.group();
        let lhs = self.psi.subgroup().members().iter().fold(czero::<T>(), |acc, &k| {
            acc + self.phi_ref(s, i, j).at(grp.mul(grp.mul(g, k), h)) * self.psi.values().at(k).conj()
        });
        let rhs = (0..m).fold(czero::<T>(), |acc, l| acc + self.phi_ref(s, i, l).at(g) * self.phi_ref(s, l, j).at(h));
        Ok((lhs - rhs).norm())
    }

    /// For one-dimensional `θ` with character `χ`: every `φ^σ_{i,j}` satisfies
    /// `f(k₁gk₂) = conj χ(k₁) conj χ(k₂) f(g)`, the admissible double cosets
    /// number `Σ m_σ²`, and both double-coset orthogonality relations hold.
    pub fn double_coset_orthogonality(&self, tol: T) -> Result<Report> {
        let theta = self.psi.theta();
        if theta.degree() != 1 {
            return Err(Error::ThetaNotOneDimensional { degree: theta.degree() });
        }
        let tol64 = tol.as_f64();
        let grp = self.group();
        let sub = self.psi.subgroup();
        let chi: Vec<Complex<T>> = (0..sub.order()).map(|kp| theta.matrix(kp)[(0, 0)]).collect();
        let dc = sub.double_cosets();
        let mut report = Report::new();

        let mut membership = MaxResidual::new();
        for (s, e) in self.dec.entries.iter().enumerate() {
            for (ij, f) in self.phis[s].iter().enumerate() {
                for g in grp.elements() {
                    for (p1, &k1) in sub.members().iter().enumerate() {
                        let k1g = grp.mul(k1, g);
                        for (p2, &k2) in sub.members().iter().enumerate() {
                            let lhs = f.at(grp.mul(k1g, k2));
                            let rhs = chi[p1].conj() * chi[p2].conj() * f.at(g);
                            membership.observe((lhs - rhs).norm().as_f64(), || format!("{} ({ij}) at {}", e.label(), grp.label(g)));
                        }
                    }
                }
            }
        }
        report.push(membership.into_check("membership_characterization", tol64));

        // A double coset KsK supports a nonzero function of this kind iff
        // χ(k₁)χ(k₂) = 1 whenever k₁sk₂ = s.
        let admissible = dc
            .representatives
            .iter()
            .filter(|&&s| {
                sub.members().iter().enumerate().all(|(p1, &k1)| {
                    sub.members().iter().enumerate().all(|(p2, &k2)| {
                        grp.mul(grp.mul(k1, s), k2) != s || (chi[p1] * chi[p2] - cone()).norm() < tol
                    })
                })
            })
            .count();
        let dim = self.dec.commutant_dim();
        report.record("admissible_double_cosets", (admissible as f64 - dim as f64).abs(), tol64, format!("{admissible} vs {dim}"));

        let sizes: Vec<T> = dc.blocks.iter().map(|b| T::of_usize(b.len())).collect();
        let weighted = |a: &GroupAlgebraElement<T>, b: &GroupAlgebraElement<T>| {
            dc.representatives.iter().zip(&sizes).fold(czero::<T>(), |acc, (&s, &w)| acc + a.at(s) * b.at(s).conj() * w)
        };
        let mut coeff = MaxResidual::new();
        let mut traces = MaxResidual::new();
        for (s, e) in self.dec.entries.iter().enumerate() {
            let m = e.multiplicity;
            let norm_sq = self.order() / T::of_usize(e.d_sigma());
            for (r, f) in self.dec.entries.iter().enumerate() {
                let mr = f.multiplicity;
                for a in 0..m * m {
                    for b in 0..mr * mr {
                        let val = weighted(&self.phis[s][a], &self.phis[r][b]);
                        let expect = if s == r && a == b { norm_sq } else { T::zero() };
                        coeff.observe((val - Complex::new(expect, T::zero())).norm().as_f64(), || {
                            format!("{}({},{}) vs {}({},{})", e.label(), a / m, a % m, f.label(), b / mr, b % mr)
                        });
                    }
                }
                let val = weighted(&self.phi_trace(s), &self.phi_trace(r));
                let expect = if s == r { norm_sq * T::of_usize(m) } else { T::zero() };
                traces.observe((val - Complex::new(expect, T::zero())).norm().as_f64(), || format!("{} vs {}", e.label(), f.label()));
            }
        }
        report.push(coeff.into_check("double_coset_coefficients", tol64));
        report.push(traces.into_check("double_coset_traces", tol64));
        Ok(report)
    }

    /// `Ψ(T) = Σ_σ (d_σ/|G|) Σ_{i,j} [𝓕T(σ)]_{i,j} φ^σ_{j,i}`, the antiisomorphism
    /// extending `U^σ_{i,j} ↦ (d_σ/|G|)φ^σ_{j,i}`.
    pub fn transport(&self, commutant_blocks: &FourierBlocks<T>) -> Result<GroupAlgebraElement<T>> {
        commutant_blocks.check_shapes(&self.dec)?;
        let mut f = GroupAlgebraElement::zero(self.group().clone());
        for (s, ((_, a), e)) in commutant_blocks.blocks.iter().zip(&self.dec.entries).enumerate() {
            let scale = T::of_usize(e.d_sigma()) / self.order();
            for i in 0..e.multiplicity {
                for j in 0..e.multiplicity {
                    f = f.add(&self.phi_ref(s, j, i).scale(a[(i, j)] * scale));
                }
            }
        }
        Ok(f)
    }

    /// Every identity tying `ψ`, `T_v`, the adapted bases and the `φ`'s together.
    /// `samples` random elements drive the algebra checks.
    pub fn verify<R: Rng + ?Sized>(&self, samples: usize, rng: &mut R, tol: T) -> Result<Report> {
        let tol64 = tol.as_f64();
        let grp = self.group().clone();
        let ind = &self.dec.induced;
        let n = grp.order();
        let mut report = Report::new();

        // ψ
        report.record("psi_idempotent", self.psi.idempotence_residual().as_f64(), tol64, "psi*psi");
        report.record("psi_symmetric", self.psi.symmetry_residual().as_f64(), tol64, "conj psi(g^-1)");
        report.record("psi_projection_formula", self.psi.projection_residual().as_f64(), tol64, "probe basis");

        // T_v and P
        let tv = t_v(ind, &self.psi)?;
        report.record("t_v_isometry", (&tv.adjoint() * &tv).max_abs_diff(&CMatrix::identity(ind.dim())).as_f64(), tol64, "T_v* T_v");
        let regular = UnitaryRep::regular(grp.clone());
        let mut tw = MaxResidual::new();
        for g in grp.elements() {
            let r = (&tv * ind.rep().matrix(g)).max_abs_diff(&(regular.matrix(g) * &tv));
            tw.observe(r.as_f64(), || grp.label(g).to_string());
        }
        report.push(tw.into_check("t_v_intertwines", tol64));
        let maps = FrobeniusMaps::new(ind, &regular, T::gate(tol))?;
        let via_diamond = maps.diamond(&s_v(&self.psi))?.scale((T::of_usize(n) / T::of_usize(self.psi.subgroup().order())).sqrt());
        report.record("t_v_from_diamond", via_diamond.max_abs_diff(&tv).as_f64(), tol64, "sqrt(|G|/|K|) S_v diamond");
        let p = self.psi.values().right_convolution_matrix();
        report.record("p_projector", p.max_abs_diff(&range_projector(&tv, T::rank_drop())).as_f64(), tol64, "f*psi vs range T_v");

        // adapted bases
        report.absorb("adapted", self.verify_adapted(tol));

        // φ
        report.absorb("phi", self.verify_phi(tol)?);

        // Fourier on H
        report.absorb("fourier", self.verify_fourier(samples, rng, tol)?);

        // identities over G
        let mut e1 = MaxResidual::new();
        let mut e2 = MaxResidual::new();
        let mut cf = MaxResidual::new();
        let mut closed = MaxResidual::new();
        for g in grp.elements() {
            let direct = self.psi.sandwich(&GroupAlgebraElement::delta(grp.clone(), g));
            closed.observe(direct.max_abs_diff(&self.psi.sandwich_delta(g)).as_f64(), || grp.label(g).to_string());
        }
        for (s, e) in self.dec.entries.iter().enumerate() {
            for g in grp.elements() {
                let r = self.phi_character_identities(s, g, tol)?;
                let loc = || format!("{} at {}", e.label(), grp.label(g));
                e1.observe(r.get("character_from_phi").map_or(f64::NAN, |c| c.residual), loc);
                e2.observe(r.get("phi_from_sandwich").map_or(f64::NAN, |c| c.residual), loc);
            }
            let chi = e.sigma.character_values();
            let table = self.curtis_fossum_table(s)?;
            for g in grp.elements() {
                cf.observe((table[g] - chi[g]).norm().as_f64(), || format!("{} at {}", e.label(), grp.label(g)));
            }
        }
        report.push(closed.into_check("sandwich_delta_direct", tol64));
        report.push(e1.into_check("character_from_phi", tol64));
        report.push(e2.into_check("phi_from_sandwich", tol64));
        report.push(cf.into_check("curtis_fossum", tol64));

        let mut fi = MaxResidual::new();
        let pairs: Vec<(usize, usize)> = if n <= FUNCTIONAL_IDENTITY_EXHAUSTIVE_ORDER {
            grp.elements().flat_map(|g| grp.elements().map(move |h| (g, h))).collect()
        } else {
            (0..4 * n).map(|_| (rng.random_range(0..n), rng.random_range(0..n))).collect()
        };
        for (s, e) in self.dec.entries.iter().enumerate() {
            let m = e.multiplicity;
            for i in 0..m {
                for j in 0..m {
                    for &(g, h) in &pairs {
                        let r = self.functional_identity(s, i, j, g, h)?;
                        fi.observe(r.as_f64(), || format!("{}({i},{j}) g={} h={}", e.label(), grp.label(g), grp.label(h)));
                    }
                }
            }
        }
        report.push(fi.into_check("functional_identity", tol64));

        if self.psi.theta().degree() == 1 {
            report.absorb("double_coset", self.double_coset_orthogonality(tol)?);
        }

        report.absorb("transport", self.verify_transport(&tv, samples, rng, tol)?);
        Ok(report)
    }

    /// Orthonormality and both adapted-basis identities:
    /// `L*_{σ,j} w_h ∈ {v_ℓ, 0}` as dictated by its origin, and
    /// `Σ_k ψ(k)σ(k) w_i = w_i` for `i ≤ m_σ`, `0` otherwise.
    pub fn verify_adapted(&self, tol: T) -> Report {
        let tol64 = tol.as_f64();
        let sub = self.psi.subgroup();
        let mut ortho = MaxResidual::new();
        let mut picks = MaxResidual::new();
        let mut eigen = MaxResidual::new();
        for a in &self.adapted.sigmas {
            let d = a.sigma.degree();
            ortho.observe((&a.vectors.adjoint() * &a.vectors).max_abs_diff(&CMatrix::identity(d)).as_f64(), || a.label().to_string());
            if let Some(s) = a.entry {
                let e = &self.dec.entries[s];
                for (j, l) in e.basis.elements.iter().enumerate() {
                    let lstar = l.adjoint();
                    for h in 0..d {
                        let got = lstar.mul_vec(&a.w(h));
                        let expect = match &a.origins[h] {
                            AdaptedOrigin::Isotypic { i, j: ell } if *i == j => self.adapted.v_basis.col(*ell),
                            _ => vec![czero(); got.len()],
                        };
                        let r = got.iter().zip(&expect).map(|(x, y)| (x - y).norm()).fold(T::zero(), T::max);
                        picks.observe(r.as_f64(), || format!("{} L{j}* w{h}", a.label()));
                    }
                }
            }
            let mut avg = CMatrix::zeros(d, d);
            for &k in sub.members() {
                avg = &avg + &a.sigma.matrix(k).scale_c(self.psi.values().at(k));
            }
            for h in 0..d {
                let w = a.w(h);
                let got = avg.mul_vec(&w);
                let r = if h < a.multiplicity {
                    got.iter().zip(&w).map(|(x, y)| (x - y).norm()).fold(T::zero(), T::max)
                } else {
                    got.iter().map(|x| x.norm()).fold(T::zero(), T::max)
                };
                eigen.observe(r.as_f64(), || format!("{} w{h}", a.label()));
            }
        }
        let mut report = Report::new();
        report.push(ortho.into_check("orthonormal", tol64));
        report.push(picks.into_check("adjoint_picks_basis", tol64));
        report.push(eigen.into_check("psi_average_eigen", tol64));
        report
    }

    /// Membership of `conj u^σ_{i,j}` exactly for `i, j ≤ m_σ`, the one-sided
    /// rule `conj u_{i,j} ∗ ψ`, norms and orthogonality, the convolution table,
    /// `⟨φ^σ, φ^ρ⟩`, and `dim H = Σ m_σ²` against the span of all `ψ∗δ_g∗ψ`.
    pub fn verify_phi(&self, tol: T) -> Result<Report> {
        let tol64 = tol.as_f64();
        let grp = self.group();
        let psi = self.psi.values();
        let mut member = MaxResidual::new();
        let mut right = MaxResidual::new();
        for a in &self.adapted.sigmas {
            let d = a.sigma.degree();
            for i in 0..d {
                for j in 0..d {
                    let cu = a.u(i, j).conj();
                    let zero = GroupAlgebraElement::zero(grp.clone());
                    let inside = i < a.multiplicity && j < a.multiplicity;
                    let target = if inside { &cu } else { &zero };
                    member.observe(self.psi.sandwich(&cu).max_abs_diff(target).as_f64(), || format!("{}({i},{j})", a.label()));
                    let target = if j < a.multiplicity { &cu } else { &zero };
                    right.observe(cu.convolve(psi).max_abs_diff(target).as_f64(), || format!("{}({i},{j})", a.label()));
                }
            }
        }
        let mut report = Report::new();
        report.push(member.into_check("membership", tol64));
        report.push(right.into_check("right_psi", tol64));

        let mut gram = MaxResidual::new();
        let mut table = MaxResidual::new();
        let mut traces = MaxResidual::new();
        for (s, e) in self.dec.entries.iter().enumerate() {
            let m = e.multiplicity;
            let c = self.order() / T::of_usize(e.d_sigma());
            for (r, f) in self.dec.entries.iter().enumerate() {
                let mr = f.multiplicity;
                for a in 0..m * m {
                    for b in 0..mr * mr {
                        let (pa, pb) = (&self.phis[s][a], &self.phis[r][b]);
                        let loc = || format!("{}({},{}) vs {}({},{})", e.label(), a / m, a % m, f.label(), b / mr, b % mr);
                        let expect = if s == r && a == b { c } else { T::zero() };
                        gram.observe((pa.inner(pb) - Complex::new(expect, T::zero())).norm().as_f64(), loc);
                        let conv = pa.convolve(pb);
                        let res = if s == r && a % m == b / mr {
                            conv.max_abs_diff(&self.phis[s][(a / m) * m + b % mr].scale(Complex::new(c, T::zero())))
                        } else {
                            conv.max_abs()
                        };
                        table.observe(res.as_f64(), loc);
                    }
                }
                let expect = if s == r { c * T::of_usize(m) } else { T::zero() };
                let val = self.phi_trace(s).inner(&self.phi_trace(r));
                traces.observe((val - Complex::new(expect, T::zero())).norm().as_f64(), || format!("{} vs {}", e.label(), f.label()));
            }
        }
        report.push(gram.into_check("orthogonality", tol64));
        report.push(table.into_check("convolution_table", tol64));
        report.push(traces.into_check("trace_orthogonality", tol64));

        let mut span = CMatrix::zeros(grp.order(), grp.order());
        for g in grp.elements() {
            span.set_col(g, self.psi.sandwich_delta(g).values());
        }
        let dim = orthonormal_columns(&span, T::rank_keep()).cols();
        let expect = self.dec.commutant_dim();
        report.record("dimension", (dim as f64 - expect as f64).abs(), tol64, format!("{dim} vs {expect}"));
        Ok(report)
    }

    /// Inversion, multiplicativity, and the character routes on `ψ`, every
    /// `φ^σ_{i,j}` and `samples` random elements `ψ∗f∗ψ`.
    pub fn verify_fourier<R: Rng + ?Sized>(&self, samples: usize, rng: &mut R, tol: T) -> Result<Report> {
        let tol64 = tol.as_f64();
        let grp = self.group().clone();
        let mut elements: Vec<(String, HeckeElement<T>)> = vec![("psi".into(), self.element(self.psi.values().clone())?)];
        for (s, e) in self.dec.entries.iter().enumerate() {
            let m = e.multiplicity;
            for ij in 0..m * m {
                elements.push((format!("phi {}({},{})", e.label(), ij / m, ij % m), self.element(self.phis[s][ij].clone())?));
            }
        }
        for k in 0..samples {
            let raw = random_matrix::<T, R>(grp.order(), 1, rng);
            let f = GroupAlgebraElement::new(grp.clone(), raw.col(0))?;
            elements.push((format!("sample {k}"), HeckeElement::project(&self.psi, &f)));
        }
        let mut inv = MaxResidual::new();
        let mut blocks_rt = MaxResidual::new();
        let mut mult = MaxResidual::new();
        let mut chars = MaxResidual::new();
        let mut trace_mult = MaxResidual::new();
        let transforms: Vec<FourierBlocks<T>> = elements.iter().map(|(_, f)| self.fourier(f)).collect::<Result<_>>()?;
        for (idx, ((name, f), ft)) in elements.iter().zip(&transforms).enumerate() {
            inv.observe(self.inverse(ft)?.f.max_abs_diff(&f.f).as_f64(), || name.clone());
            for s in 0..self.dec.entries.len() {
                chars.observe(self.routes(s, &f.f, ft).spread().as_f64(), || format!("{name} at {}", self.dec.entries[s].label()));
            }
            if idx > 0 {
                let (pname, p) = &elements[idx - 1];
                let prod = HeckeElement { residual: T::zero(), f: f.f.convolve(&p.f) };
                let fp = self.fourier_unchecked(&prod.f);
                let expect = ft.mul(&transforms[idx - 1])?;
                mult.observe(fp.max_abs_diff(&expect)?.as_f64(), || format!("{name} * {pname}"));
                for (s, ((_, x), (_, y))) in fp.blocks.iter().zip(&expect.blocks).enumerate() {
                    let via_phi = prod.f.inner(&self.phi_trace(s));
                    let r = (x.trace() - y.trace()).norm().max((via_phi - y.trace()).norm());
                    trace_mult.observe(r.as_f64(), || format!("{name} * {pname}"));
                }
            }
        }
        for k in 0..samples {
            let b = FourierBlocks::random(&self.dec, rng);
            let f = self.inverse(&b)?;
            blocks_rt.observe(self.fourier(&f)?.max_abs_diff(&b)?.as_f64(), || format!("blocks {k}"));
        }
        let mut report = Report::new();
        report.push(inv.into_check("inversion", tol64));
        report.push(blocks_rt.into_check("roundtrip", tol64));
        report.push(mult.into_check("multiplicativity", tol64));
        report.push(chars.into_check("character_routes", tol64));
        report.push(trace_mult.into_check("character_trace", tol64));
        Ok(report)
    }

    /// `T_v U^σ_{i,j} = Ũ^σ_{i,j} T_v`, `T_v T_{σ,i} = T̃_{σ,i}`, `Ũ_{i,i}` as the
    /// projector onto `T̃_{σ,i}W`, and the antiisomorphism `Ψ` on random pairs
    /// (products reversed, `T_v T = R_{Ψ(T)} T_v`, `𝓕Ψ(T) = (𝓕T)ᵀ`).
    pub fn verify_transport<R: Rng + ?Sized>(&self, tv: &CMatrix<T>, samples: usize, rng: &mut R, tol: T) -> Result<Report> {
        let tol64 = tol.as_f64();
        let grp = self.group();
        let us = u_basis(&self.dec)?;
        let mut diagram = MaxResidual::new();
        let mut ttilde = MaxResidual::new();
        let mut proj = MaxResidual::new();
        for (s, e) in self.dec.entries.iter().enumerate() {
            let m = e.multiplicity;
            let c = T::of_usize(e.d_sigma()) / self.order();
            for u in &us[s] {
                let tilde = self.phi_ref(s, u.j, u.i).scale(Complex::new(c, T::zero())).right_convolution_matrix();
                let r = (tv * &u.matrix).max_abs_diff(&(&tilde * tv));
                diagram.observe(r.as_f64(), || format!("{}({},{})", e.label(), u.i, u.j));
            }
            let a = self.adapted.for_entry(s);
            let scale = c.sqrt();
            for i in 0..m {
                let wi = a.w(i);
                let tt = CMatrix::from_fn(grp.order(), e.d_sigma(), |g, col| {
                    e.sigma.matrix(g).mul_vec(&wi)[col].conj() * scale
                });
                ttilde.observe((tv * &e.isometries[i]).max_abs_diff(&tt).as_f64(), || format!("{}[{i}]", e.label()));
                let uii = self.phi_ref(s, i, i).scale(Complex::new(c, T::zero())).right_convolution_matrix();
                proj.observe(uii.max_abs_diff(&range_projector(&tt, T::rank_drop())).as_f64(), || format!("{}[{i}]", e.label()));
            }
        }
        let mut report = Report::new();
        report.push(diagram.into_check("diagram", tol64));
        report.push(ttilde.into_check("isometry_transport", tol64));
        report.push(proj.into_check("tilde_projector", tol64));

        let mut anti = MaxResidual::new();
        let mut conj = MaxResidual::new();
        let mut iso = MaxResidual::new();
        let mut prev: Option<(CommutantOperator<T>, GroupAlgebraElement<T>)> = None;
        for k in 0..samples {
            let t = CommutantOperator::random(&self.dec, rng);
            let ft = fourier_with(&self.dec, &us, &t)?;
            let psi_t = self.transport(&ft)?;
            let r = (tv * &t.matrix).max_abs_diff(&(&psi_t.right_convolution_matrix() * tv));
            conj.observe(r.as_f64(), || format!("sample {k}"));
            let fh = self.fourier_unchecked(&psi_t);
            let transposed = FourierBlocks { blocks: ft.blocks.iter().map(|(l, b)| (l.clone(), b.transpose())).collect() };
            iso.observe(fh.max_abs_diff(&transposed)?.as_f64(), || format!("sample {k}"));
            if let Some((p, psi_p)) = &prev {
                let prod = CommutantOperator { residual: T::zero(), matrix: &t.matrix * &p.matrix };
                let lhs = self.transport(&fourier_with(&self.dec, &us, &prod)?)?;
                let rhs = psi_p.convolve(&psi_t);
                anti.observe(lhs.max_abs_diff(&rhs).as_f64(), || format!("sample {k}"));
            }
            prev = Some((t, psi_t));
        }
        report.push(anti.into_check("antiisomorphism", tol64));
        report.push(conj.into_check("t_v_conjugation", tol64));
        report.push(iso.into_check("fourier_transpose", tol64));
        Ok(report)
    }
}
