//! The commutant `Hom_G(Ind V, Ind V)`: the basis `U^σ_{i,j}`, its Fourier
//! transform onto `⊕_σ M_{m_σ}(ℂ)`, inversion, and the characters `tr 𝓕T(σ)`.

use num_complex::Complex;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::frobenius::IsotypicDecomposition;
use crate::intertwiner::{intertwining_residual, nhs_inner, random_intertwiner, random_matrix};
use crate::linalg::{range_projector, CMatrix};
use crate::report::{MaxResidual, Report};
use crate::scalar::{czero, Real};

/// An operator on the induced space commuting with every `λ(g)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutantOperator<T: Real> {
    pub matrix: CMatrix<T>,
    pub residual: T,
}

impl<T: Real> CommutantOperator<T> {
    /// Wraps `matrix` after checking `max_g |Aλ(g) − λ(g)A| < tol`.
    pub fn new(dec: &IsotypicDecomposition<T>, matrix: CMatrix<T>, tol: T) -> Result<Self> {
        let lambda = dec.induced.rep();
        if matrix.shape() != (lambda.degree(), lambda.degree()) {
            return Err(Error::ShapeMismatch(format!("operator is {:?}, induced space has dim {}", matrix.shape(), lambda.degree())));
        }
        let residual = intertwining_residual(&matrix, lambda, lambda);
        if !(residual < tol) {
            return Err(Error::NotInCommutant { residual: residual.as_f64() });
        }
        Ok(Self { matrix, residual })
    }

    /// A random element: a Gaussian matrix averaged over `A ↦ λ(g)Aλ(g)⁻¹`.
    pub fn random<R: Rng + ?Sized>(dec: &IsotypicDecomposition<T>, rng: &mut R) -> Self {
        let lambda = dec.induced.rep();
        let matrix = random_intertwiner(lambda, lambda, rng);
        let residual = intertwining_residual(&matrix, lambda, lambda);
        Self { matrix, residual }
    }
}

/// `U^σ_{i,j} = (d_σ/d_θ)·(L_{σ,i}◇)*·(L_{σ,j}◇)`, equal to `T_{σ,i} T_{σ,j}*`.
#[derive(Debug, Clone)]
pub struct UBasisElement<T: Real> {
    pub sigma: String,
    pub i: usize,
    pub j: usize,
    pub matrix: CMatrix<T>,
}

/// Per-`σ` square blocks, ordered as the decomposition's entries.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierBlocks<T: Real> {
    pub blocks: Vec<(String, CMatrix<T>)>,
}

impl<T: Real> FourierBlocks<T> {
    pub fn from_fn(dec: &IsotypicDecomposition<T>, mut f: impl FnMut(usize, usize) -> CMatrix<T>) -> Self {
        let blocks = dec
            .entries
            .iter()
            .enumerate()
            .map(|(s, e)| (e.label().to_string(), f(s, e.multiplicity)))
            .collect();
        Self { blocks }
    }

    pub fn zeros(dec: &IsotypicDecomposition<T>) -> Self {
        Self::from_fn(dec, |_, m| CMatrix::zeros(m, m))
    }

    pub fn identity(dec: &IsotypicDecomposition<T>) -> Self {
        Self::from_fn(dec, |_, m| CMatrix::identity(m))
    }

    pub fn random<R: Rng + ?Sized>(dec: &IsotypicDecomposition<T>, rng: &mut R) -> Self {
        Self::from_fn(dec, |_, m| random_matrix(m, m, rng))
    }

    pub fn block(&self, label: &str) -> Option<&CMatrix<T>> {
        self.blocks.iter().find(|(l, _)| l == label).map(|(_, m)| m)
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Blockwise product; block lists must agree in labels and shapes.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        let d = self.zip_with(other, |a, b| a - b)?;
        Ok(d.blocks.iter().map(|(_, m)| m.max_abs()).fold(T::zero(), T::max))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&CMatrix<T>, &CMatrix<T>) -> CMatrix<T>) -> Result<Self> {
        if self.blocks.len() != other.blocks.len() {
            return Err(Error::ShapeMismatch("block counts differ".into()));
        }
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|((la, a), (lb, b))| {
                if la != lb || a.shape() != b.shape() {
                    Err(Error::ShapeMismatch(format!("block '{la}' {:?} vs '{lb}' {:?}", a.shape(), b.shape())))
                } else {
                    Ok((la.clone(), f(a, b)))
                }
            })
            .collect::<Result<_>>()?;
        Ok(Self { blocks })
    }

    /// Checks labels and shapes against the decomposition.
    pub fn check_shapes(&self, dec: &IsotypicDecomposition<T>) -> Result<()> {
        if self.blocks.len() != dec.entries.len() {
            return Err(Error::ShapeMismatch(format!("{} blocks for {} constituents", self.blocks.len(), dec.entries.len())));
        }
        for ((label, m), e) in self.blocks.iter().zip(&dec.entries) {
            if label != e.label() || m.shape() != (e.multiplicity, e.multiplicity) {
                return Err(Error::ShapeMismatch(format!(
                    "block '{label}' {:?}, expected '{}' {m_s}x{m_s}",
                    m.shape(),
                    e.label(),
                    m_s = e.multiplicity
                )));
            }
        }
        Ok(())
    }
}

fn entry_index<T: Real>(dec: &IsotypicDecomposition<T>, sigma: usize, i: usize, j: usize) -> Result<usize> {
    let e = dec
        .entries
        .get(sigma)
        .ok_or_else(|| Error::IndexOutOfRange(format!("constituent {sigma} of {}", dec.entries.len())))?;
    if i >= e.multiplicity || j >= e.multiplicity {
        return Err(Error::IndexOutOfRange(format!("({i},{j}) with m_{} = {}", e.label(), e.multiplicity)));
    }
    Ok(sigma)
}

/// `U^σ_{i,j}` for the `sigma`-th constituent (0-based indices).
pub fn u_operator<T: Real>(dec: &IsotypicDecomposition<T>, sigma: usize, i: usize, j: usize) -> Result<UBasisElement<T>> {
    entry_index(dec, sigma, i, j)?;
    let e = &dec.entries[sigma];
    let maps = dec.maps(e, T::default_tolerance())?;
    let di = maps.diamond_unchecked(&e.basis.elements[i]);
    let dj = maps.diamond_unchecked(&e.basis.elements[j]);
    let scale = T::of_usize(e.d_sigma()) / T::of_usize(dec.induced.d_theta());
    Ok(UBasisElement { sigma: e.label().to_string(), i, j, matrix: (&di.adjoint() * &dj).scale(scale) })
}

/// All `U^σ_{i,j}`, grouped by constituent, row-major in `(i, j)`.
pub fn u_basis<T: Real>(dec: &IsotypicDecomposition<T>) -> Result<Vec<Vec<UBasisElement<T>>>> {
    dec.entries
        .iter()
        .enumerate()
        .map(|(s, e)| {
            let m = e.multiplicity;
            (0..m * m).map(|ij| u_operator(dec, s, ij / m, ij % m)).collect()
        })
        .collect()
}

/// `[𝓕T(σ)]_{i,j} = (d_θ|G/K|/d_σ)·⟨T, U^σ_{i,j}⟩`.
pub fn fourier<T: Real>(dec: &IsotypicDecomposition<T>, op: &CommutantOperator<T>) -> Result<FourierBlocks<T>> {
    let basis = u_basis(dec)?;
    fourier_with(dec, &basis, op)
}

/// [`fourier`] against a precomputed basis.
pub fn fourier_with<T: Real>(
    dec: &IsotypicDecomposition<T>,
    basis: &[Vec<UBasisElement<T>>],
    op: &CommutantOperator<T>,
) -> Result<FourierBlocks<T>> {
    let lambda = dec.induced.rep();
    if op.matrix.shape() != (lambda.degree(), lambda.degree()) {
        return Err(Error::ShapeMismatch(format!("operator is {:?}", op.matrix.shape())));
    }
    let residual = intertwining_residual(&op.matrix, lambda, lambda);
    if !(residual < T::default_tolerance()) {
        return Err(Error::NotInCommutant { residual: residual.as_f64() });
    }
    let big = T::of_usize(dec.induced.dim());
    let blocks = dec
        .entries
        .iter()
        .zip(basis)
        .map(|(e, us)| {
            let scale = big / T::of_usize(e.d_sigma());
            let coeffs: Vec<Complex<T>> = us
                .par_iter()
                .map(|u| nhs_inner(&op.matrix, &u.matrix).map(|z| z * scale))
                .collect::<Result<_>>()?;
            let m = e.multiplicity;
            Ok((e.label().to_string(), CMatrix::from_fn(m, m, |i, j| coeffs[i * m + j])))
        })
        .collect::<Result<_>>()?;
    Ok(FourierBlocks { blocks })
}

/// `T = Σ_σ Σ_{i,j} [A_σ]_{i,j} U^σ_{i,j}`.
pub fn inverse_fourier<T: Real>(dec: &IsotypicDecomposition<T>, blocks: &FourierBlocks<T>) -> Result<CommutantOperator<T>> {
    let basis = u_basis(dec)?;
    inverse_fourier_with(dec, &basis, blocks)
}

pub fn inverse_fourier_with<T: Real>(
    dec: &IsotypicDecomposition<T>,
    basis: &[Vec<UBasisElement<T>>],
    blocks: &FourierBlocks<T>,
) -> Result<CommutantOperator<T>> {
    blocks.check_shapes(dec)?;
    let n = dec.induced.dim();
    let mut out = CMatrix::zeros(n, n);
    for ((_, a), us) in blocks.blocks.iter().zip(basis) {
        for u in us {
            let c = a[(u.i, u.j)];
            if c != czero() {
                out = &out + &u.matrix.scale_c(c);
            }
        }
    }
    let residual = intertwining_residual(&out, dec.induced.rep(), dec.induced.rep());
    Ok(CommutantOperator { matrix: out, residual })
}

/// `φ^σ(T) = tr 𝓕T(σ)`.
pub fn commutant_character<T: Real>(dec: &IsotypicDecomposition<T>, sigma: usize, op: &CommutantOperator<T>) -> Result<Complex<T>> {
    let label = dec
        .entries
        .get(sigma)
        .ok_or_else(|| Error::IndexOutOfRange(format!("constituent {sigma}")))?
        .label()
        .to_string();
    let f = fourier(dec, op)?;
    Ok(f.block(&label).expect("block present").trace())
}

/// Residuals of `U^σ_{i,j} T_{ρ,h} = δ_{σ,ρ}δ_{j,h} T_{σ,i}` over all `(ρ, h)`
/// and of `U^σ_{i,i}` against the projector onto `T_{σ,i} W_σ`.
pub fn verify_intertwine_blocks<T: Real>(dec: &IsotypicDecomposition<T>, sigma: usize, i: usize, j: usize, tol: T) -> Result<Report> {
    let u = u_operator(dec, sigma, i, j)?;
    let mut worst = MaxResidual::new();
    for (r, e) in dec.entries.iter().enumerate() {
        for (h, t) in e.isometries.iter().enumerate() {
            let lhs = &u.matrix * t;
            let res = if r == sigma && h == j {
                lhs.max_abs_diff(&dec.entries[sigma].isometries[i])
            } else {
                lhs.max_abs()
            };
            worst.observe(res.as_f64(), || format!("{}[{h}]", e.label()));
        }
    }
    let mut report = Report::new();
    report.push(worst.into_check("u_times_isometry", tol.as_f64()));
    let uii = u_operator(dec, sigma, i, i)?;
    let ti = &dec.entries[sigma].isometries[i];
    let proj = range_projector(ti, T::rank_drop());
    report.record("u_diagonal_projector", uii.matrix.max_abs_diff(&proj).as_f64(), tol.as_f64(), format!("{} i={i}", u.sigma));
    Ok(report)
}

/// The algebraic checks on the `U`-basis and the Fourier transform:
/// scaled orthonormality, the multiplication table, `Σ U^σ_{i,i} = I`,
/// inversion and multiplicativity on `samples` random commutant elements,
/// and `φ^σ(T₁T₂) = tr(𝓕T₁(σ)𝓕T₂(σ))`.
pub fn verify_commutant<T: Real, R: Rng + ?Sized>(dec: &IsotypicDecomposition<T>, samples: usize, rng: &mut R, tol: T) -> Result<Report> {
    let tol64 = tol.as_f64();
    let basis = u_basis(dec)?;
    let n = dec.induced.dim();
    let big = T::of_usize(n);
    let flat: Vec<(usize, &UBasisElement<T>)> = basis.iter().enumerate().flat_map(|(s, us)| us.iter().map(move |u| (s, u))).collect();
    let mut report = Report::new();

    let mut ortho = MaxResidual::new();
    let mut table = MaxResidual::new();
    let mut commutes = MaxResidual::new();
    for &(s, a) in &flat {
        let da = T::of_usize(dec.entries[s].d_sigma());
        commutes.observe(intertwining_residual(&a.matrix, dec.induced.rep(), dec.induced.rep()).as_f64(), || {
            format!("{}({},{})", a.sigma, a.i, a.j)
        });
        for &(r, b) in &flat {
            let db = T::of_usize(dec.entries[r].d_sigma());
            let ip = nhs_inner(&a.matrix, &b.matrix)? * (big / (da * db).sqrt());
            let expect = if s == r && a.i == b.i && a.j == b.j { T::one() } else { T::zero() };
            let loc = || format!("{}({},{}) vs {}({},{})", a.sigma, a.i, a.j, b.sigma, b.i, b.j);
            ortho.observe((ip - Complex::new(expect, T::zero())).norm().as_f64(), loc);
            let prod = &a.matrix * &b.matrix;
            let res = if s == r && a.j == b.i {
                let target = &basis[s][a.i * dec.entries[s].multiplicity + b.j].matrix;
                prod.max_abs_diff(target)
            } else {
                prod.max_abs()
            };
            table.observe(res.as_f64(), loc);
        }
    }
    report.record("u_basis_size", (flat.len() as f64 - dec.commutant_dim() as f64).abs(), tol64, format!("{}", flat.len()));
    report.push(ortho.into_check("u_orthonormality", tol64));
    report.push(table.into_check("u_multiplication", tol64));
    report.push(commutes.into_check("u_commutes", tol64));

    let mut resolution = CMatrix::zeros(n, n);
    for us in &basis {
        for u in us.iter().filter(|u| u.i == u.j) {
            resolution = &resolution + &u.matrix;
        }
    }
    report.record("identity_resolution", resolution.max_abs_diff(&CMatrix::identity(n)).as_f64(), tol64, "sum U_ii");

    let ident = CommutantOperator { matrix: CMatrix::identity(n), residual: T::zero() };
    let fi = fourier_with(dec, &basis, &ident)?;
    report.record("fourier_identity", fi.max_abs_diff(&FourierBlocks::identity(dec))?.as_f64(), tol64, "F(I)");

    let mut inv = MaxResidual::new();
    let mut roundtrip = MaxResidual::new();
    let mut mult = MaxResidual::new();
    let mut chars = MaxResidual::new();
    let mut prev: Option<(CommutantOperator<T>, FourierBlocks<T>)> = None;
    for k in 0..samples {
        let loc = || format!("sample {k}");
        let t = CommutantOperator::random(dec, rng);
        let ft = fourier_with(dec, &basis, &t)?;
        let back = inverse_fourier_with(dec, &basis, &ft)?;
        inv.observe(back.matrix.max_abs_diff(&t.matrix).as_f64(), loc);
        let blocks = FourierBlocks::random(dec, rng);
        let op = inverse_fourier_with(dec, &basis, &blocks)?;
        roundtrip.observe(fourier_with(dec, &basis, &op)?.max_abs_diff(&blocks)?.as_f64(), loc);
        if let Some((p, fp)) = &prev {
            let prod = CommutantOperator { residual: T::zero(), matrix: &t.matrix * &p.matrix };
            let fprod = fourier_with(dec, &basis, &prod)?;
            let expect = ft.mul(fp)?;
            mult.observe(fprod.max_abs_diff(&expect)?.as_f64(), loc);
            for ((_, a), (_, b)) in fprod.blocks.iter().zip(&expect.blocks) {
                chars.observe((a.trace() - b.trace()).norm().as_f64(), loc);
            }
        }
        prev = Some((t, ft));
    }
    report.push(inv.into_check("inversion", tol64));
    report.push(roundtrip.into_check("fourier_roundtrip", tol64));
    report.push(mult.into_check("fourier_multiplicativity", tol64));
    report.push(chars.into_check("character_trace", tol64));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::frobenius::{decompose_induced, InducedRep};
    use crate::group::Subgroup;
    use crate::rep::UnitaryRep;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn s3_regular() -> IsotypicDecomposition<f64> {
        let s3 = corpus::symmetric::<f64>(3).unwrap();
        let k = Subgroup::trivial(&s3.group);
        let ind = InducedRep::new(&UnitaryRep::<f64>::trivial(k.group().clone()), &k).unwrap();
        decompose_induced(&ind, &s3.irreps).unwrap()
    }

    fn s3_gelfand() -> IsotypicDecomposition<f64> {
        let pair = corpus::standard_pairs::<f64>().unwrap().into_iter().find(|p| p.name == "S3/S2 trivial").unwrap();
        let ind = InducedRep::new(&pair.theta, &pair.subgroup).unwrap();
        decompose_induced(&ind, &pair.group.irreps).unwrap()
    }

    // averaging oracle: span of (1/|G|)Σ λ(g) E_rc λ(g)⁻¹
    fn brute_commutant_dim(dec: &IsotypicDecomposition<f64>) -> usize {
        let lambda = dec.induced.rep();
        let n = lambda.degree();
        let mut cols = CMatrix::zeros(n * n, n * n);
        for rc in 0..n * n {
            let e = CMatrix::unit(n, n, rc / n, rc % n);
            let avg = crate::intertwiner::average(&e, lambda, lambda);
            cols.set_col(rc, avg.as_slice());
        }
        crate::linalg::orthonormal_columns(&cols, 1e-8).cols()
    }

    #[test]
    fn regular_standard_trace_two() {
        let dec = s3_regular();
        let s = dec.entry_index("standard").unwrap();
        let u = u_operator(&dec, s, 0, 0).unwrap();
        assert!((u.matrix.trace().re - 2.0).abs() < 1e-12);
        let u12 = u_operator(&dec, s, 0, 1).unwrap();
        assert!((&u12.matrix * &u12.matrix).max_abs() < 1e-12);
        assert!(matches!(u_operator(&dec, s, 0, 2), Err(Error::IndexOutOfRange(_))));
    }

    #[test]
    fn fourier_examples() {
        let dec = s3_regular();
        let lambda = dec.induced.rep();
        let n = lambda.degree();
        let id = CommutantOperator::new(&dec, CMatrix::identity(n), 1e-9).unwrap();
        assert!(fourier(&dec, &id).unwrap().max_abs_diff(&FourierBlocks::identity(&dec)).unwrap() < 1e-12);
        let s = dec.entry_index("standard").unwrap();
        let u = u_operator(&dec, s, 1, 0).unwrap();
        let f = fourier(&dec, &CommutantOperator::new(&dec, u.matrix, 1e-9).unwrap()).unwrap();
        let mut expect = FourierBlocks::zeros(&dec);
        expect.blocks[s].1[(1, 0)] = Complex::new(1.0, 0.0);
        assert!(f.max_abs_diff(&expect).unwrap() < 1e-12);
        // invariant averaging
        let mut avg = CMatrix::zeros(n, n);
        for g in lambda.group().elements() {
            avg = &avg + lambda.matrix(g);
        }
        let avg = CommutantOperator::new(&dec, avg.scale(1.0 / 6.0), 1e-9).unwrap();
        let f = fourier(&dec, &avg).unwrap();
        let mut expect = FourierBlocks::zeros(&dec);
        expect.blocks[dec.entry_index("trivial").unwrap()].1[(0, 0)] = Complex::new(1.0, 0.0);
        assert!(f.max_abs_diff(&expect).unwrap() < 1e-12);
    }

    #[test]
    fn inverse_examples() {
        let dec = s3_regular();
        let z = inverse_fourier(&dec, &FourierBlocks::zeros(&dec)).unwrap();
        assert!(z.matrix.max_abs() < 1e-15);
        let i = inverse_fourier(&dec, &FourierBlocks::identity(&dec)).unwrap();
        assert!(i.matrix.max_abs_diff(&CMatrix::identity(6)) < 1e-12);
        let mut bad = FourierBlocks::identity(&dec);
        bad.blocks.pop();
        assert!(matches!(inverse_fourier(&dec, &bad), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn non_commuting_rejected() {
        let dec = s3_gelfand();
        let m = CMatrix::unit(3, 3, 0, 1);
        assert!(matches!(CommutantOperator::new(&dec, m, 1e-9), Err(Error::NotInCommutant { .. })));
    }

    #[test]
    fn characters() {
        let dec = s3_regular();
        let s = dec.entry_index("standard").unwrap();
        let id = CommutantOperator::new(&dec, CMatrix::identity(6), 1e-9).unwrap();
        assert!((commutant_character(&dec, s, &id).unwrap().re - 2.0).abs() < 1e-12);
        let u11 = CommutantOperator::new(&dec, u_operator(&dec, s, 0, 0).unwrap().matrix, 1e-9).unwrap();
        assert!((commutant_character(&dec, s, &u11).unwrap().re - 1.0).abs() < 1e-12);
        assert!(commutant_character(&dec, 0, &u11).unwrap().norm() < 1e-12);
        let u12 = CommutantOperator::new(&dec, u_operator(&dec, s, 0, 1).unwrap().matrix, 1e-9).unwrap();
        assert!(commutant_character(&dec, s, &u12).unwrap().norm() < 1e-12);
    }

    #[test]
    fn gelfand_pair_blocks() {
        let dec = s3_gelfand();
        for s in 0..dec.entries.len() {
            let r = verify_intertwine_blocks(&dec, s, 0, 0, 1e-9).unwrap();
            assert!(r.passed(), "{r}");
        }
        assert_eq!(brute_commutant_dim(&dec), 2);
    }

    #[test]
    fn full_checks_and_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for dec in [s3_regular(), s3_gelfand()] {
            let r = verify_commutant(&dec, 4, &mut rng, 1e-9).unwrap();
            assert!(r.passed(), "{r}");
            assert_eq!(brute_commutant_dim(&dec), dec.commutant_dim());
        }
    }
}
