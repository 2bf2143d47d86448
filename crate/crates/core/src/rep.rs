//! Unitary representations as explicit matrix families, characters, the group
//! algebra `L(G)`, and the coefficient-level identities.
//!
//! Matrix coefficients follow one convention throughout: with the stored
//! orthonormal basis `w_1, …, w_d`, the coefficient `u_{i,j}(g) = ⟨σ(g)w_j, w_i⟩`
//! is entry `(i, j)` of `σ(g)`, so the row index is the bra.

use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};
use crate::linalg::{inner, norm, CMatrix};
use crate::report::{MaxResidual, Report};
use crate::scalar::{cone, cr, czero, Real};

#[derive(Debug, Clone)]
pub struct UnitaryRep<T: Real> {
    group: Arc<FiniteGroup>,
    degree: usize,
    matrices: Vec<CMatrix<T>>,
    label: String,
}

impl<T: Real> UnitaryRep<T> {
    /// Validates homomorphism and unitarity at the scalar's default tolerance.
    pub fn from_matrices(group: Arc<FiniteGroup>, matrices: Vec<CMatrix<T>>, label: impl Into<String>) -> Result<Self> {
        Self::from_matrices_tol(group, matrices, label, T::default_tolerance())
    }

    pub fn from_matrices_tol(
        group: Arc<FiniteGroup>,
        mut matrices: Vec<CMatrix<T>>,
        label: impl Into<String>,
        tol: T,
    ) -> Result<Self> {
        let degree = check_shapes(&group, &matrices)?;
        check_homomorphism(&group, &matrices, tol)?;
        let mut worst = (0, T::zero());
        for (g, m) in matrices.iter().enumerate() {
            let r = (m * &m.adjoint()).max_abs_diff(&CMatrix::identity(degree));
            if r > worst.1 || r.is_nan() {
                worst = (g, r);
            }
        }
        if !(worst.1 < tol) {
            return Err(Error::NotUnitary { element: worst.0, residual: worst.1.as_f64() });
        }
        matrices[group.identity()] = CMatrix::identity(degree);
        Ok(Self { group, degree, matrices, label: label.into() })
    }

    /// Weyl averaging: conjugates a homomorphism by the principal square root
    /// `S` of `(1/|G|) Σ_g ρ(g)*ρ(g)`, returning `S ρ(·) S⁻¹`.
    pub fn unitarize(group: Arc<FiniteGroup>, matrices: Vec<CMatrix<T>>, label: impl Into<String>) -> Result<Self> {
        let degree = check_shapes(&group, &matrices)?;
        let tol = T::default_tolerance();
        check_homomorphism(&group, &matrices, tol)?;
        let mut gram = CMatrix::zeros(degree, degree);
        for m in &matrices {
            gram = &gram + &(&m.adjoint() * m);
        }
        let gram = gram.scale(T::one() / T::of_usize(group.order()));
        let s = gram.sqrt_hpd().ok_or_else(|| Error::InvalidInput("averaged Gram matrix is singular".into()))?;
        let s_inv = s.inverse().ok_or_else(|| Error::InvalidInput("averaged Gram matrix is singular".into()))?;
        let conj = matrices.iter().map(|m| &(&s * m) * &s_inv).collect();
        Self::from_matrices_tol(group, conj, label, tol)
    }

    /// Builds a representation from images of generators by breadth-first
    /// expansion, then validates it.
    pub fn from_generators(
        group: Arc<FiniteGroup>,
        generators: &[usize],
        images: &[CMatrix<T>],
        label: impl Into<String>,
    ) -> Result<Self> {
        if generators.len() != images.len() {
            return Err(Error::ShapeMismatch("one image per generator required".into()));
        }
        let degree = images.first().map_or(1, CMatrix::rows);
        let mut mats: Vec<Option<CMatrix<T>>> = vec![None; group.order()];
        mats[group.identity()] = Some(CMatrix::identity(degree));
        let mut queue = std::collections::VecDeque::from([group.identity()]);
        while let Some(x) = queue.pop_front() {
            for (&s, img) in generators.iter().zip(images) {
                let y = group.mul(s, x);
                if mats[y].is_none() {
                    mats[y] = Some(img * mats[x].as_ref().expect("visited"));
                    queue.push_back(y);
                }
            }
        }
        let matrices = mats
            .into_iter()
            .enumerate()
            .map(|(g, m)| m.ok_or_else(|| Error::InvalidInput(format!("generators do not reach element {g}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::from_matrices(group, matrices, label)
    }

    pub fn trivial(group: Arc<FiniteGroup>) -> Self {
        let n = group.order();
        Self { group, degree: 1, matrices: vec![CMatrix::identity(1); n], label: "trivial".into() }
    }

    /// Left regular representation on `L(G)`: `λ_G(g)δ_{g₀} = δ_{g g₀}`.
    pub fn regular(group: Arc<FiniteGroup>) -> Self {
        let n = group.order();
        let matrices = (0..n)
            .map(|g| {
                let mut m = CMatrix::zeros(n, n);
                for g0 in 0..n {
                    m[(group.mul(g, g0), g0)] = cone();
                }
                m
            })
            .collect();
        Self { group, degree: n, matrices, label: "regular".into() }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    #[inline]
    pub fn matrix(&self, g: usize) -> &CMatrix<T> {
        &self.matrices[g]
    }

    pub fn matrices(&self) -> &[CMatrix<T>] {
        &self.matrices
    }

    /// `χ(g)` for every element.
    pub fn character_values(&self) -> Vec<Complex<T>> {
        self.matrices.iter().map(CMatrix::trace).collect()
    }

    pub fn character(&self) -> ClassFunction<T> {
        let classes = self.group.conjugacy_classes();
        let values = classes.representatives().into_iter().map(|g| self.matrices[g].trace()).collect();
        ClassFunction { group: self.group.clone(), values }
    }

    /// `(1/|G|) Σ_g |χ(g)|²`; equals 1 exactly for irreducibles.
    pub fn character_norm(&self) -> T {
        let s: T = self.matrices.iter().map(|m| m.trace().norm_sqr()).sum();
        s / T::of_usize(self.group.order())
    }

    pub fn is_irreducible(&self, tol: T) -> bool {
        (self.character_norm() - T::one()).abs() < tol
    }

    /// Matrix coefficient `u_{i,j}` as a function on the group.
    pub fn coefficient(&self, i: usize, j: usize) -> GroupAlgebraElement<T> {
        GroupAlgebraElement::from_fn(self.group.clone(), |g| self.matrices[g][(i, j)])
    }

    /// Same matrices, indexed by the members of `k` (which must be a subgroup of this group).
    pub fn restrict(&self, k: &Subgroup) -> Result<UnitaryRep<T>> {
        if **k.parent() != *self.group {
            return Err(Error::NotASubgroup("restriction to a subgroup of a different group".into()));
        }
        Ok(UnitaryRep {
            group: k.group().clone(),
            degree: self.degree,
            matrices: k.members().iter().map(|&g| self.matrices[g].clone()).collect(),
            label: self.label.clone(),
        })
    }

    /// Kronecker product `ρ ⊗ η`.
    pub fn tensor(&self, other: &UnitaryRep<T>) -> Result<UnitaryRep<T>> {
        if self.group != other.group {
            return Err(Error::ShapeMismatch("tensor of representations of different groups".into()));
        }
        let (a, b) = (self.degree, other.degree);
        let matrices = self
            .matrices
            .iter()
            .zip(&other.matrices)
            .map(|(x, y)| CMatrix::from_fn(a * b, a * b, |r, c| x[(r / b, c / b)] * y[(r % b, c % b)]))
            .collect();
        Ok(UnitaryRep {
            group: self.group.clone(),
            degree: a * b,
            matrices,
            label: format!("{}*{}", self.label, other.label),
        })
    }

    /// `S ρ(·) S⁻¹` without validation; `None` if `S` is singular.
    pub fn conjugated_raw(&self, s: &CMatrix<T>) -> Option<Vec<CMatrix<T>>> {
        let s_inv = s.inverse()?;
        Some(self.matrices.iter().map(|m| &(s * m) * &s_inv).collect())
    }

    /// Largest entrywise difference between the two realizations.
    pub fn max_matrix_diff(&self, other: &UnitaryRep<T>) -> Option<T> {
        (self.group == other.group && self.degree == other.degree).then(|| {
            self.matrices.iter().zip(&other.matrices).map(|(a, b)| a.max_abs_diff(b)).fold(T::zero(), T::max)
        })
    }

    /// Worst violation of `ρ(g₁)ρ(g₂) = ρ(g₁g₂)` over all pairs.
    pub fn homomorphism_residual(&self) -> T {
        homomorphism_worst(&self.group, &self.matrices).2
    }

    /// Worst violation of `ρ(g)ρ(g)* = I`.
    pub fn unitarity_residual(&self) -> T {
        let id = CMatrix::identity(self.degree);
        self.matrices.iter().map(|m| (m * &m.adjoint()).max_abs_diff(&id)).fold(T::zero(), T::max)
    }
}

fn check_shapes<T: Real>(group: &FiniteGroup, matrices: &[CMatrix<T>]) -> Result<usize> {
    if matrices.len() != group.order() {
        return Err(Error::ShapeMismatch(format!(
            "{} matrices for a group of order {}",
            matrices.len(),
            group.order()
        )));
    }
    let d = matrices[0].rows();
    if d == 0 {
        return Err(Error::ShapeMismatch("degree 0".into()));
    }
    if let Some(g) = matrices.iter().position(|m| m.shape() != (d, d)) {
        return Err(Error::ShapeMismatch(format!("matrix {g} is not {d}x{d}")));
    }
    Ok(d)
}

fn homomorphism_worst<T: Real>(group: &FiniteGroup, matrices: &[CMatrix<T>]) -> (usize, usize, T) {
    let mut worst = (0, 0, T::zero());
    for a in group.elements() {
        for b in group.elements() {
            let r = (&matrices[a] * &matrices[b]).max_abs_diff(&matrices[group.mul(a, b)]);
            if r > worst.2 || r.is_nan() {
                worst = (a, b, r);
            }
        }
    }
    worst
}

fn check_homomorphism<T: Real>(group: &FiniteGroup, matrices: &[CMatrix<T>], tol: T) -> Result<()> {
    let (g1, g2, r) = homomorphism_worst(group, matrices);
    if r < tol {
        Ok(())
    } else {
        Err(Error::NotHomomorphism { g1, g2, residual: r.as_f64() })
    }
}

/// Values on conjugacy classes, in the group's class order.
#[derive(Debug, Clone)]
pub struct ClassFunction<T: Real> {
    pub group: Arc<FiniteGroup>,
    pub values: Vec<Complex<T>>,
}

impl<T: Real> ClassFunction<T> {
    pub fn at(&self, g: usize) -> Complex<T> {
        self.values[self.group.conjugacy_classes().class_of(g)]
    }

    pub fn max_abs_diff(&self, other: &ClassFunction<T>) -> T {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(T::zero(), T::max)
    }
}

/// `(1/|G|) Σ_g χ_a(g) conj(χ_b(g))`.
pub fn character_inner<T: Real>(a: &UnitaryRep<T>, b: &UnitaryRep<T>) -> Complex<T> {
    let s = a.matrices.iter().zip(&b.matrices).fold(czero(), |acc, (x, y)| acc + x.trace() * y.trace().conj());
    s / T::of_usize(a.group.order())
}

/// Multiplicity of the irreducible `sigma` in `rho` by the character inner product.
pub fn multiplicity<T: Real>(sigma: &UnitaryRep<T>, rho: &UnitaryRep<T>) -> Result<usize> {
    if sigma.group != rho.group {
        return Err(Error::ShapeMismatch("representations of different groups".into()));
    }
    if !sigma.is_irreducible(T::default_tolerance()) {
        return Err(Error::NotIrreducible { label: sigma.label.clone(), norm: sigma.character_norm().as_f64() });
    }
    round_multiplicity(character_inner(rho, sigma))
}

pub(crate) fn round_multiplicity<T: Real>(z: Complex<T>) -> Result<usize> {
    let v = z.re.as_f64();
    let r = v.round();
    if (v - r).abs() > 0.01 || z.im.as_f64().abs() > 0.01 || r < 0.0 {
        return Err(Error::NonIntegralMultiplicity { value: v });
    }
    Ok(r as usize)
}

/// Equivalence of representations, decided by equality of characters.
pub fn equivalent<T: Real>(a: &UnitaryRep<T>, b: &UnitaryRep<T>, tol: T) -> bool {
    a.group == b.group
        && a.degree == b.degree
        && a.matrices.iter().zip(&b.matrices).all(|(x, y)| (x.trace() - y.trace()).norm() < tol)
}

/// Checks the orthogonality relations
/// `⟨u^σ_{i,j}, u^ρ_{h,k}⟩ = (|G|/d_σ) δ_{σ,ρ} δ_{i,h} δ_{j,k}` and the
/// convolution property `u^σ_{i,j} ∗ u^ρ_{h,k} = (|G|/d_σ) δ_{σ,ρ} δ_{j,h} u^σ_{i,k}`
/// by direct summation. `δ_{σ,ρ}` is 1 iff the two realizations coincide.
pub fn verify_schur_relations<T: Real>(sigma: &UnitaryRep<T>, rho: &UnitaryRep<T>, tol: T) -> Report {
    let g = &sigma.group;
    let n = g.order();
    let same = sigma.max_matrix_diff(rho).is_some_and(|d| d < tol);
    let scale = T::of_usize(n) / T::of_usize(sigma.degree);
    let (ds, dr) = (sigma.degree, rho.degree);
    let tag = format!("{} vs {}", sigma.label, rho.label);

    let mut ort = MaxResidual::new();
    let mut con = MaxResidual::new();
    for i in 0..ds {
        for j in 0..ds {
            for h in 0..dr {
                for k in 0..dr {
                    let ip = (0..n).fold(czero::<T>(), |acc, x| acc + sigma.matrices[x][(i, j)] * rho.matrices[x][(h, k)].conj());
                    let expect = if same && i == h && j == k { scale } else { T::zero() };
                    ort.observe((ip - cr(expect)).norm().as_f64(), || format!("{tag} <u{i}{j},u{h}{k}>"));
                    for x in 0..n {
                        let conv = (0..n).fold(czero::<T>(), |acc, x0| {
                            acc + sigma.matrices[g.mul(x, g.inv(x0))][(i, j)] * rho.matrices[x0][(h, k)]
                        });
                        let expect = if same && j == h { sigma.matrices[x][(i, k)] * scale } else { czero() };
                        con.observe((conv - expect).norm().as_f64(), || format!("{tag} u{i}{j}*u{h}{k} at {}", g.label(x)));
                    }
                }
            }
        }
    }
    let mut r = Report::new();
    r.push(ort.into_check("orthogonality", tol.as_f64()));
    r.push(con.into_check("convolution", tol.as_f64()));
    r
}

/// Character reconstructed from one diagonal coefficient:
/// `χ(g) = (d/|G|) Σ_h φ(h⁻¹gh)` with `φ(g) = ⟨σ(g)w, w⟩`.
pub fn character_from_diagonal<T: Real>(sigma: &UnitaryRep<T>, w: &[Complex<T>]) -> Result<ClassFunction<T>> {
    if w.len() != sigma.degree {
        return Err(Error::ShapeMismatch(format!("vector of length {} for degree {}", w.len(), sigma.degree)));
    }
    let nw = norm(w);
    if (nw - T::one()).abs() > T::default_tolerance() {
        return Err(Error::NotUnitVector { norm: nw.as_f64() });
    }
    let g = &sigma.group;
    let phi: Vec<Complex<T>> = sigma.matrices.iter().map(|m| inner(&m.mul_vec(w), w)).collect();
    let scale = T::of_usize(sigma.degree) / T::of_usize(g.order());
    let values = g
        .conjugacy_classes()
        .representatives()
        .into_iter()
        .map(|x| g.elements().fold(czero(), |acc, h| acc + phi[g.conjugate(x, h)]) * scale)
        .collect();
    Ok(ClassFunction { group: g.clone(), values })
}

/// A function `G → ℂ`, with the unnormalized product `⟨f₁,f₂⟩ = Σ_g f₁(g) conj(f₂(g))`
/// and convolution `(f₁∗f₂)(g) = Σ_{g₀} f₁(g g₀⁻¹) f₂(g₀)`.
#[derive(Debug, Clone)]
pub struct GroupAlgebraElement<T: Real> {
    group: Arc<FiniteGroup>,
    values: Vec<Complex<T>>,
}

impl<T: Real> GroupAlgebraElement<T> {
    pub fn new(group: Arc<FiniteGroup>, values: Vec<Complex<T>>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::ShapeMismatch(format!("{} values for a group of order {}", values.len(), group.order())));
        }
        Ok(Self { group, values })
    }

    pub fn from_fn(group: Arc<FiniteGroup>, f: impl Fn(usize) -> Complex<T>) -> Self {
        let values = group.elements().map(f).collect();
        Self { group, values }
    }

    pub fn zero(group: Arc<FiniteGroup>) -> Self {
        Self::from_fn(group, |_| czero())
    }

    /// Dirac function `δ_g`.
    pub fn delta(group: Arc<FiniteGroup>, g: usize) -> Self {
        Self::from_fn(group, |x| if x == g { cone() } else { czero() })
    }

    pub fn indicator(group: Arc<FiniteGroup>, set: &[usize]) -> Self {
        let mut f = Self::zero(group);
        for &g in set {
            f.values[g] = cone();
        }
        f
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    #[inline]
    pub fn at(&self, g: usize) -> Complex<T> {
        self.values[g]
    }

    pub fn set(&mut self, g: usize, z: Complex<T>) {
        self.values[g] = z;
    }

    pub fn convolve(&self, other: &Self) -> Self {
        let g = &self.group;
        let mut out = vec![czero(); g.order()];
        for (x0, &b) in other.values.iter().enumerate() {
            if b == czero() {
                continue;
            }
            for (y, &a) in self.values.iter().enumerate() {
                // y = x·x0⁻¹  ⇔  x = y·x0
                out[g.mul(y, x0)] = out[g.mul(y, x0)] + a * b;
            }
        }
        Self { group: g.clone(), values: out }
    }

    /// `⟨self, other⟩ = Σ self(g) conj(other(g))`.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        inner(&self.values, &other.values)
    }

    pub fn norm_sqr(&self) -> T {
        self.values.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn conj(&self) -> Self {
        Self { group: self.group.clone(), values: self.values.iter().map(|z| z.conj()).collect() }
    }

    /// `f*(g) = conj(f(g⁻¹))`.
    pub fn involution(&self) -> Self {
        Self::from_fn(self.group.clone(), |g| self.values[self.group.inv(g)].conj())
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self { group: self.group.clone(), values: self.values.iter().map(|z| z * s).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { group: self.group.clone(), values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { group: self.group.clone(), values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect() }
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(T::zero(), T::max)
    }

    /// Matrix of `f ↦ f ∗ self` on `L(G)` in the Dirac basis: entry `(g, x) = self(x⁻¹g)`.
    pub fn right_convolution_matrix(&self) -> CMatrix<T> {
        let g = &self.group;
        CMatrix::from_fn(g.order(), g.order(), |r, x| self.values[g.mul(g.inv(x), r)])
    }

    pub fn as_column(&self) -> CMatrix<T> {
        CMatrix::column(&self.values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::PermutationGroup;
    use crate::scalar::c;

    fn s3() -> PermutationGroup {
        PermutationGroup::symmetric(3).unwrap()
    }

    fn sign(p: &PermutationGroup) -> UnitaryRep<f64> {
        let m = p.perms.iter().map(|q| CMatrix::scalar(cr(crate::group::parity(q) as f64))).collect();
        UnitaryRep::from_matrices(p.group.clone(), m, "sign").unwrap()
    }

    /// Standard rep of S₃ from the permutation action on the sum-zero plane.
    fn standard(p: &PermutationGroup) -> UnitaryRep<f64> {
        let h = [[1.0 / 2f64.sqrt(), -1.0 / 2f64.sqrt(), 0.0], [1.0 / 6f64.sqrt(), 1.0 / 6f64.sqrt(), -2.0 / 6f64.sqrt()]];
        let m = p
            .perms
            .iter()
            .map(|q| {
                CMatrix::from_fn(2, 2, |a, b| {
                    // <h_a, P h_b>, (P e_i) = e_{q(i)}
                    cr((0..3).map(|i| h[a][q[i]] * h[b][i]).sum())
                })
            })
            .collect();
        UnitaryRep::from_matrices(p.group.clone(), m, "standard").unwrap()
    }

    #[test]
    fn trivial_and_sign_valid() {
        let p = s3();
        let t = UnitaryRep::<f64>::trivial(p.group.clone());
        assert_eq!(t.degree(), 1);
        assert!(t.character().values.iter().all(|z| (z - cr(1.0)).norm() < 1e-15));
        let s = sign(&p);
        assert!(s.is_irreducible(1e-12));
    }

    #[test]
    fn non_unitary_rejected() {
        let g = Arc::new(FiniteGroup::cyclic(1).unwrap());
        let err = UnitaryRep::<f64>::from_matrices(g, vec![CMatrix::scalar(cr(2.0))], "x").unwrap_err();
        // ρ(e) = 2 also breaks the homomorphism law; either report is a rejection
        assert!(matches!(err, Error::NotUnitary { .. } | Error::NotHomomorphism { .. }));
        let z2 = Arc::new(FiniteGroup::cyclic(2).unwrap());
        let m = vec![CMatrix::identity(2), CMatrix::from_real_rows(&[&[0.0, 2.0], &[0.5, 0.0]])];
        assert!(matches!(UnitaryRep::<f64>::from_matrices(z2, m, "x"), Err(Error::NotUnitary { element: 1, .. })));
    }

    #[test]
    fn characters() {
        let p = s3();
        let std = standard(&p);
        let ch = std.character();
        let expect = [2.0, 0.0, -1.0];
        for (z, e) in ch.values.iter().zip(expect) {
            assert!((z - cr(e)).norm() < 1e-12);
        }
        let reg = UnitaryRep::<f64>::regular(p.group.clone());
        let rc = reg.character();
        assert!((rc.values[0] - cr(6.0)).norm() < 1e-12 && rc.values[1].norm() < 1e-12 && rc.values[2].norm() < 1e-12);
    }

    #[test]
    fn multiplicities() {
        let p = s3();
        let std = standard(&p);
        assert_eq!(multiplicity(&std, &std).unwrap(), 1);
        let reg = UnitaryRep::regular(p.group.clone());
        assert_eq!(multiplicity(&std, &reg).unwrap(), 2);
        // permutation rep on 3 points
        let perm = p
            .perms
            .iter()
            .map(|q| CMatrix::from_fn(3, 3, |r, col| if q[col] == r { cone() } else { czero() }))
            .collect();
        let perm = UnitaryRep::from_matrices(p.group.clone(), perm, "perm").unwrap();
        assert_eq!(multiplicity(&UnitaryRep::trivial(p.group.clone()), &perm).unwrap(), 1);
        assert!(matches!(multiplicity(&reg, &perm), Err(Error::NotIrreducible { .. })));
    }

    #[test]
    fn restriction_of_standard_to_s2() {
        let p = s3();
        let k = Subgroup::generated(&p.group, &[2]).unwrap();
        let res = standard(&p).restrict(&k).unwrap();
        let triv = UnitaryRep::trivial(k.group().clone());
        let sgn = UnitaryRep::from_matrices(k.group().clone(), vec![CMatrix::scalar(cr(1.0)), CMatrix::scalar(cr(-1.0))], "sgn").unwrap();
        assert_eq!(multiplicity(&triv, &res).unwrap(), 1);
        assert_eq!(multiplicity(&sgn, &res).unwrap(), 1);
        let whole = standard(&p).restrict(&Subgroup::whole(&p.group)).unwrap();
        assert_eq!(whole.max_matrix_diff(&standard(&p)), Some(0.0));
        let t = standard(&p).restrict(&Subgroup::trivial(&p.group)).unwrap();
        assert_eq!(multiplicity(&UnitaryRep::trivial(t.group().clone()), &t).unwrap(), 2);
    }

    #[test]
    fn unitarize_conjugated_standard() {
        let p = s3();
        let std = standard(&p);
        let s = CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 2.0]]);
        let skew = std.conjugated_raw(&s).unwrap();
        assert!(UnitaryRep::from_matrices(p.group.clone(), skew.clone(), "skew").is_err());
        let u = UnitaryRep::unitarize(p.group.clone(), skew, "fixed").unwrap();
        assert!(u.unitarity_residual() < 1e-12);
        assert!(u.character().max_abs_diff(&std.character()) < 1e-12);
        let again = UnitaryRep::unitarize(p.group.clone(), u.matrices().to_vec(), "again").unwrap();
        assert!(again.max_matrix_diff(&u).unwrap() < 1e-12);
        let same = UnitaryRep::unitarize(p.group.clone(), std.matrices().to_vec(), "same").unwrap();
        assert!(same.max_matrix_diff(&std).unwrap() < 1e-12);
    }

    #[test]
    fn schur_relation_examples() {
        let p = s3();
        let triv = UnitaryRep::<f64>::trivial(p.group.clone());
        let r = verify_schur_relations(&triv, &triv, 1e-9);
        assert!(r.passed());
        assert_eq!(r.max_residual(), 0.0);
        assert!(verify_schur_relations(&standard(&p), &sign(&p), 1e-9).passed());
        let std = standard(&p);
        assert!(verify_schur_relations(&std, &std, 1e-9).passed());
        assert!((std.coefficient(0, 0).norm_sqr() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn diagonal_character() {
        let p = s3();
        let std = standard(&p);
        let w = [cr(1.0), cr(0.0)];
        let ch = character_from_diagonal(&std, &w).unwrap();
        assert!(ch.max_abs_diff(&std.character()) < 1e-12);
        let w2 = [c(0.6, 0.0), c(0.0, 0.8)];
        assert!(character_from_diagonal(&std, &w2).unwrap().max_abs_diff(&std.character()) < 1e-12);
        assert!(matches!(character_from_diagonal(&std, &[cr(1.0), cr(1.0)]), Err(Error::NotUnitVector { .. })));
    }

    #[test]
    fn convolution_matches_matrix() {
        let p = s3();
        let g = p.group.clone();
        let f = GroupAlgebraElement::from_fn(g.clone(), |x| c(x as f64, 1.0 - x as f64));
        let h = GroupAlgebraElement::from_fn(g.clone(), |x| c((x * x) as f64 * 0.1, 0.3));
        let direct = f.convolve(&h);
        let via = h.right_convolution_matrix().mul_vec(f.values());
        assert!(direct.values().iter().zip(&via).all(|(a, b)| (a - b).norm() < 1e-12));
        let e = GroupAlgebraElement::delta(g.clone(), g.identity());
        assert!(f.convolve(&e).max_abs_diff(&f) < 1e-15);
    }
}
