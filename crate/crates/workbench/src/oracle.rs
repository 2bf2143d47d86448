//! Independent cross-checks of the main pipeline.
//!
//! Each oracle recomputes a quantity by a route that shares no code with the
//! pipeline beyond the group and representation data: multiplicities from
//! the induced character formula, the commutant dimension from averaged
//! elementary matrices, and characters from Hecke-algebra evaluations of
//! explicitly convolved `ψ∗δ_g∗ψ`.

use indrep::hecke::{HeckeAlgebra, HeckeElement};
use indrep::linalg::{orthonormal_columns, CMatrix};
use indrep::rep::GroupAlgebraElement;
use indrep::report::MaxResidual;
use indrep::{Decomposition, Real, Rep, Report};
use num_complex::Complex;
use serde::Serialize;

use crate::error::{Context, WbResult};
use crate::job::Job;
use crate::output::sci3;

#[derive(Debug, Clone, Serialize)]
pub struct MultiplicityRow {
    pub label: String,
    pub pipeline: usize,
    pub character_oracle: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleBlock {
    pub multiplicities: Vec<MultiplicityRow>,
    pub sum_m_d: usize,
    pub dim_induced: usize,
    pub commutant_dim: usize,
    pub averaging_commutant_dim: usize,
    /// Present when `K` and `θ` are trivial.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regular_multiplicities_match: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curtis_fossum_max_diff: Option<String>,
}

/// `⟨χ_σ, χ_Ind⟩` with `χ_Ind(g) = |K|⁻¹ Σ_{x : x⁻¹gx ∈ K} χ_θ(x⁻¹gx)`.
pub fn character_multiplicity(job: &Job, sigma: &Rep) -> f64 {
    let g = &job.group;
    let chi_theta = job.theta.character_values();
    let chi_sigma = sigma.character_values();
    let k = &job.subgroup;
    let mut total = Complex::new(0.0, 0.0);
    for y in g.elements() {
        let mut ind = Complex::new(0.0, 0.0);
        for x in g.elements() {
            let c = g.mul(g.inv(x), g.mul(y, x));
            if let Some(p) = k.position(c) {
                ind += chi_theta[p];
            }
        }
        total += ind / k.order() as f64 * chi_sigma[y].conj();
    }
    total.re / g.order() as f64
}

/// Rank of `{ |G|⁻¹ Σ_g λ(g) E_{r,c} λ(g)* }` over all elementary `E_{r,c}`.
pub fn averaging_commutant_dim(lambda: &Rep) -> usize {
    let n = lambda.degree();
    let order = lambda.group().order() as f64;
    let mut cols = CMatrix::zeros(n * n, n * n);
    for r in 0..n {
        for c in 0..n {
            let mut col = vec![Complex::new(0.0, 0.0); n * n];
            for m in lambda.matrices() {
                for a in 0..n {
                    let mar = m[(a, r)];
                    if mar == Complex::new(0.0, 0.0) {
                        continue;
                    }
                    for b in 0..n {
                        col[a * n + b] += mar * m[(b, c)].conj();
                    }
                }
            }
            let col: Vec<Complex<f64>> = col.into_iter().map(|z| z / order).collect();
            cols.set_col(r * n + c, &col);
        }
    }
    orthonormal_columns(&cols, f64::rank_drop()).cols()
}

/// `χ_σ` by the formula built on Hecke characters, with `ψ∗δ_g∗ψ` convolved
/// directly and Hecke characters read off Fourier blocks. Returns the worst
/// deviation from the true character and where it occurs.
pub fn curtis_fossum_oracle(h: &HeckeAlgebra<f64>, tol: f64) -> WbResult<(f64, String)> {
    let g = h.group().clone();
    let psi = h.psi.values();
    let hecke_chars = |f: GroupAlgebraElement<f64>| -> WbResult<Vec<Complex<f64>>> {
        let e = HeckeElement::new(&h.psi, f, f64::gate(tol)).ctx("oracle/hecke_element")?;
        let blocks = h.fourier(&e).ctx("oracle/hecke_fourier")?;
        Ok(blocks.blocks.iter().map(|(_, b)| b.trace()).collect())
    };
    let sandwiches: Vec<Vec<Complex<f64>>> = g
        .elements()
        .map(|x| hecke_chars(psi.convolve(&GroupAlgebraElement::delta(g.clone(), x)).convolve(psi)))
        .collect::<WbResult<_>>()?;
    let classes = g.conjugacy_classes();
    let mut worst = MaxResidual::new();
    for (s, e) in h.dec.entries.iter().enumerate() {
        let chi = e.sigma.character_values();
        let denom: Complex<f64> = g.elements().map(|x| sandwiches[g.inv(x)][s] * sandwiches[x][s]).sum();
        for (c, class) in classes.classes().iter().enumerate() {
            let ind = GroupAlgebraElement::indicator(g.clone(), class);
            let num = hecke_chars(psi.convolve(&ind).convolve(psi))?[s] * (g.order() as f64 / class.len() as f64);
            let x = classes.representatives()[c];
            worst.observe((num / denom - chi[x]).norm(), || format!("{} at {}", e.label(), g.label(x)));
        }
    }
    let c = worst.into_check("", tol);
    Ok((c.residual, c.location))
}

pub fn oracle_suite(job: &Job, dec: &Decomposition, hecke: Option<&HeckeAlgebra<f64>>) -> WbResult<(OracleBlock, Report)> {
    let tol = job.tol;
    let mut report = Report::new();

    let mut rows = Vec::new();
    let mut mult = MaxResidual::new();
    for sigma in &job.irreps {
        let pipeline = dec.entry(sigma.label()).map_or(0, |e| e.multiplicity);
        let oracle = character_multiplicity(job, sigma);
        mult.observe((oracle - pipeline as f64).abs(), || sigma.label().to_string());
        rows.push(MultiplicityRow { label: sigma.label().into(), pipeline, character_oracle: oracle });
    }
    report.push(mult.into_check("character_multiplicity", tol));

    let sum_m_d: usize = dec.entries.iter().map(|e| e.multiplicity * e.d_sigma()).sum();
    let dim = job.subgroup.index() * job.theta.degree();
    report.record("dimension_count", sum_m_d.abs_diff(dim) as f64, tol, format!("{sum_m_d} vs {dim}"));

    let brute = averaging_commutant_dim(dec.induced.rep());
    report.record("commutant_dimension", dec.commutant_dim().abs_diff(brute) as f64, tol, format!("{} vs {brute}", dec.commutant_dim()));

    let regular = (job.subgroup.order() == 1).then(|| {
        let mut worst = 0usize;
        for sigma in &job.irreps {
            let m = dec.entry(sigma.label()).map_or(0, |e| e.multiplicity);
            worst = worst.max(m.abs_diff(sigma.degree()));
        }
        report.record("regular_multiplicities", worst as f64, tol, "m_sigma vs d_sigma");
        worst == 0
    });

    let cf = match hecke {
        Some(h) => {
            let (r, loc) = curtis_fossum_oracle(h, tol)?;
            report.record("curtis_fossum_vs_characters", r, tol, loc);
            Some(sci3(r))
        }
        None => None,
    };

    let block = OracleBlock {
        multiplicities: rows,
        sum_m_d,
        dim_induced: dim,
        commutant_dim: dec.commutant_dim(),
        averaging_commutant_dim: brute,
        regular_multiplicities_match: regular,
        curtis_fossum_max_diff: cf,
    };
    Ok((block, report))
}
