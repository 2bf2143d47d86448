//! Intertwiner spaces `Hom_H(V, W)`: normalized Hilbert–Schmidt geometry, the
//! averaging projector, and deterministic orthonormal bases.
//!
//! An intertwiner `V → W` is stored as its `d_W × d_V` matrix; the source rep
//! is the one acting on the right.

use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{canonical_phase, CMatrix};
use crate::rep::{round_multiplicity, UnitaryRep};
use crate::report::{MaxResidual, Report};
use crate::scalar::{c, czero, Real};

/// `⟨T₁, T₂⟩ = tr(T₂* T₁) / dim(source)`.
pub fn nhs_inner<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> Result<Complex<T>> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch(format!("{:?} vs {:?}", a.shape(), b.shape())));
    }
    Ok(a.hs_dot(b) / T::of_usize(a.cols()))
}

pub fn nhs_norm<T: Real>(a: &CMatrix<T>) -> T {
    (a.frobenius_norm().powi(2) / T::of_usize(a.cols())).sqrt()
}

/// `max_h ‖A θ(h) − σ(h) A‖_max` for `A: V → W`.
pub fn intertwining_residual<T: Real>(a: &CMatrix<T>, source: &UnitaryRep<T>, target: &UnitaryRep<T>) -> T {
    source
        .group()
        .elements()
        .map(|h| (a * source.matrix(h)).max_abs_diff(&(target.matrix(h) * a)))
        .fold(T::zero(), T::max)
}

/// Averaging projector `A ↦ (1/|H|) Σ_h σ(h) A θ(h)⁻¹` onto `Hom_H(V, W)`.
pub fn average<T: Real>(a: &CMatrix<T>, source: &UnitaryRep<T>, target: &UnitaryRep<T>) -> CMatrix<T> {
    let g = source.group();
    let mut acc = CMatrix::zeros(a.rows(), a.cols());
    for h in g.elements() {
        acc = &acc + &(&(target.matrix(h) * a) * source.matrix(g.inv(h)));
    }
    acc.scale(T::one() / T::of_usize(g.order()))
}

/// Average of the elementary matrix `E_{r,c}`, via the outer products
/// `σ(h)e_r ⊗ e_cᵀθ(h⁻¹)`.
fn average_unit<T: Real>(r: usize, c: usize, source: &UnitaryRep<T>, target: &UnitaryRep<T>) -> CMatrix<T> {
    let g = source.group();
    let (dw, dv) = (target.degree(), source.degree());
    let mut acc = CMatrix::zeros(dw, dv);
    for h in g.elements() {
        let s = target.matrix(h);
        let t = source.matrix(g.inv(h));
        for i in 0..dw {
            let si = s[(i, r)];
            if si == czero() {
                continue;
            }
            for j in 0..dv {
                acc[(i, j)] = acc[(i, j)] + si * t[(c, j)];
            }
        }
    }
    acc.scale(T::one() / T::of_usize(g.order()))
}

/// `dim Hom_H(V, W) = (1/|H|) Σ_h χ_V(h) conj(χ_W(h))`.
pub fn hom_dimension<T: Real>(source: &UnitaryRep<T>, target: &UnitaryRep<T>) -> Result<usize> {
    if source.group() != target.group() {
        return Err(Error::ShapeMismatch("representations of different groups".into()));
    }
    round_multiplicity(crate::rep::character_inner(source, target))
}

/// An nhs-orthonormal basis of `Hom_H(V, W)`.
#[derive(Debug, Clone)]
pub struct HomBasis<T: Real> {
    pub elements: Vec<CMatrix<T>>,
    /// `max |⟨L_i, L_j⟩ − δ_{i,j}|`.
    pub gram_residual: T,
}

impl<T: Real> HomBasis<T> {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Deterministic orthonormal basis of `Hom_H(θ, σ_res)`.
///
/// Seeds are the elementary matrices in lexicographic `(row, col)` order, each
/// averaged into the intertwiner space, then modified Gram–Schmidt under the
/// nhs product (two passes). Residuals above [`Real::rank_keep`] are kept,
/// below [`Real::rank_drop`] dropped, and anything in between is an error.
/// Each kept element gets the canonical phase.
pub fn hom_basis<T: Real>(theta: &UnitaryRep<T>, sigma_res: &UnitaryRep<T>) -> Result<HomBasis<T>> {
    let expected = hom_dimension(theta, sigma_res)?;
    let (dw, dv) = (sigma_res.degree(), theta.degree());
    let mut basis: Vec<CMatrix<T>> = Vec::new();
    'seeds: for r in 0..dw {
        for col in 0..dv {
            if basis.len() == dw * dv {
                break 'seeds;
            }
            let mut a = average_unit(r, col, theta, sigma_res);
            for _ in 0..2 {
                for b in &basis {
                    let p = a.hs_dot(b) / T::of_usize(dv);
                    a = &a - &b.scale_c(p);
                }
            }
            let res = nhs_norm(&a);
            if res > T::rank_keep() {
                basis.push(a.scale(T::one() / res));
            } else if res >= T::rank_drop() {
                return Err(Error::IllConditionedBasis { residual: res.as_f64() });
            }
        }
    }
    if basis.len() != expected {
        return Err(Error::DimensionMismatch { expected, found: basis.len() });
    }
    let elements: Vec<CMatrix<T>> = basis.into_iter().map(|m| m.scale_c(canonical_phase(m.as_slice()))).collect();
    let gram_residual = gram_residual(&elements);
    Ok(HomBasis { elements, gram_residual })
}

/// `max |⟨L_i, L_j⟩ − δ_{i,j}|` under the nhs product.
pub fn gram_residual<T: Real>(elements: &[CMatrix<T>]) -> T {
    let mut worst = T::zero();
    for (i, a) in elements.iter().enumerate() {
        for (j, b) in elements.iter().enumerate() {
            let ip = a.hs_dot(b) / T::of_usize(a.cols());
            let expect = if i == j { T::one() } else { T::zero() };
            worst = worst.max((ip - c(expect, T::zero())).norm());
        }
    }
    worst
}

/// Averaged standard-Gaussian matrix: a random element of `Hom_H(V, W)`.
pub fn random_intertwiner<T: Real, R: Rng + ?Sized>(
    source: &UnitaryRep<T>,
    target: &UnitaryRep<T>,
    rng: &mut R,
) -> CMatrix<T> {
    let a = random_matrix(target.degree(), source.degree(), rng);
    average(&a, source, target)
}

/// Matrix with independent standard complex Gaussian entries.
pub fn random_matrix<T: Real, R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix<T> {
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(T::lit(re), T::lit(im))
    })
}

/// Checks that intertwiners `T_i: W → U` out of an irreducible `W` satisfy
/// `T_j* T_i = δ_{i,j} I_W` and `⟨T_i w₁, T_j w₂⟩ = δ_{i,j} ⟨w₁, w₂⟩` on the
/// standard basis of `W`.
pub fn verify_isometric_decomposition<T: Real>(isometries: &[CMatrix<T>], tol: T) -> Report {
    let mut gram = MaxResidual::new();
    let mut probes = MaxResidual::new();
    for (i, ti) in isometries.iter().enumerate() {
        let d = ti.cols();
        for (j, tj) in isometries.iter().enumerate() {
            let p = &tj.adjoint() * ti;
            let expect = if i == j { CMatrix::identity(d) } else { CMatrix::zeros(d, d) };
            gram.observe(p.max_abs_diff(&expect).as_f64(), || format!("T{j}*T{i}"));
            for a in 0..d {
                for b in 0..d {
                    let x = crate::linalg::inner(&ti.col(a), &tj.col(b));
                    let e = if i == j && a == b { T::one() } else { T::zero() };
                    probes.observe((x - c(e, T::zero())).norm().as_f64(), || format!("<T{i}w{a}, T{j}w{b}>"));
                }
            }
        }
    }
    let mut r = Report::new();
    r.push(gram.into_check("isometry_gram", tol.as_f64()));
    r.push(probes.into_check("isometry_probes", tol.as_f64()));
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{PermutationGroup, Subgroup};
    use crate::scalar::cr;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn standard(p: &PermutationGroup) -> UnitaryRep<f64> {
        let h = [[1.0 / 2f64.sqrt(), -1.0 / 2f64.sqrt(), 0.0], [1.0 / 6f64.sqrt(), 1.0 / 6f64.sqrt(), -2.0 / 6f64.sqrt()]];
        let m = p
            .perms
            .iter()
            .map(|q| CMatrix::from_fn(2, 2, |a, b| cr((0..3).map(|i| h[a][q[i]] * h[b][i]).sum())))
            .collect();
        UnitaryRep::from_matrices(p.group.clone(), m, "standard").unwrap()
    }

    #[test]
    fn nhs_examples() {
        let i3 = CMatrix::<f64>::identity(3);
        assert!((nhs_inner(&i3, &i3).unwrap() - cr(1.0)).norm() < 1e-15);
        assert_eq!(nhs_inner(&i3, &CMatrix::zeros(3, 3)).unwrap(), czero());
        let v = CMatrix::<f64>::from_real_rows(&[&[1.0], &[0.0]]);
        assert!((nhs_inner(&v, &v).unwrap() - cr(1.0)).norm() < 1e-15);
        assert!(matches!(nhs_inner(&v, &i3), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn schur_cases() {
        let p = PermutationGroup::symmetric(3).unwrap();
        let std = standard(&p);
        let b = hom_basis(&std, &std).unwrap();
        assert_eq!(b.len(), 1);
        assert!(b.elements[0].max_abs_diff(&CMatrix::identity(2)) < 1e-12);
        let triv = UnitaryRep::trivial(p.group.clone());
        assert!(hom_basis(&triv, &std).unwrap().is_empty());
    }

    #[test]
    fn restricted_standard_has_one_invariant_line() {
        let p = PermutationGroup::symmetric(3).unwrap();
        let k = Subgroup::generated(&p.group, &[2]).unwrap();
        let res = standard(&p).restrict(&k).unwrap();
        let triv = UnitaryRep::trivial(k.group().clone());
        let b = hom_basis(&triv, &res).unwrap();
        assert_eq!(b.len(), 1);
        let l = &b.elements[0];
        assert!(intertwining_residual(l, &triv, &res) < 1e-12);
        // adjoint(L)·L = I_V
        assert!((&l.adjoint() * l).max_abs_diff(&CMatrix::identity(1)) < 1e-12);
        let adj = l.adjoint();
        assert!(adj.adjoint().max_abs_diff(l) == 0.0);
    }

    #[test]
    fn averaging_is_idempotent() {
        let p = PermutationGroup::symmetric(3).unwrap();
        let reg = UnitaryRep::regular(p.group.clone());
        let std = standard(&p);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = random_matrix::<f64, _>(6, 2, &mut rng);
        let once = average(&a, &std, &reg);
        let twice = average(&once, &std, &reg);
        assert!(once.max_abs_diff(&twice) < 1e-12);
        assert!(intertwining_residual(&once, &std, &reg) < 1e-12);
        assert_eq!(hom_basis(&std, &reg).unwrap().len(), 2);
    }

    #[test]
    fn isometric_decomposition_examples() {
        let t = CMatrix::<f64>::from_real_rows(&[&[1.0], &[0.0]]);
        assert!(verify_isometric_decomposition(std::slice::from_ref(&t), 1e-9).passed());
        let r = verify_isometric_decomposition(&[t.scale(2.0)], 1e-9);
        assert!(!r.passed());
        assert!((r.get("isometry_gram").unwrap().residual - 3.0).abs() < 1e-12);
        // two orthogonal trivial lines inside the doubled trivial rep of ℤ/2
        let s = 0.5f64.sqrt();
        let t1 = CMatrix::from_real_rows(&[&[s], &[s], &[0.0], &[0.0]]);
        let t2 = CMatrix::from_real_rows(&[&[0.0], &[0.0], &[s], &[s]]);
        let r = verify_isometric_decomposition(&[t1.clone(), t2.clone()], 1e-9);
        assert!(r.passed());
        assert!((&t2.adjoint() * &t1).max_abs() == 0.0);
    }
}
