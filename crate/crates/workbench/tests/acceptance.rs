//! Acceptance suite: one pass/fail line per criterion, at τ = 1e-9 on the
//! bundled corpus. Run with `--nocapture` to see the lines.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;

use indrep::corpus::{self, symmetric_chain};
use rayon::prelude::*;
use workbench::export::export_corpus;
use workbench::output::ClassSummary;
use workbench::{run, Job, RunReport, Task};

const TAU: f64 = 1e-9;
const SAMPLES: usize = 20;
const UNIT_VECTORS: usize = 5;

struct Outcome {
    name: String,
    report: RunReport,
}

fn jobs() -> Vec<Job> {
    corpus::standard_pairs::<f64>()
        .unwrap()
        .into_iter()
        .map(|p| {
            let chain = match p.name.as_str() {
                "S3/1 trivial" => Some(symmetric_chain(3, "trivial").unwrap()),
                "S4/1 trivial" => Some(symmetric_chain(4, "trivial").unwrap()),
                _ => None,
            };
            let mut job = Job::from_parts(&p.name, p.subgroup, p.theta, p.group.irreps, Some(p.k_irreps), chain).unwrap();
            job.tol = TAU;
            job.samples = SAMPLES;
            job.unit_vector_samples = UNIT_VECTORS;
            job
        })
        .collect()
}

/// Collects every class summary whose name starts with one of `prefixes`.
fn classes<'a>(outcomes: &'a [Outcome], prefixes: &[&str]) -> Vec<(&'a str, &'a ClassSummary)> {
    outcomes
        .iter()
        .flat_map(|o| o.report.residuals.iter().map(move |c| (o.name.as_str(), c)))
        .filter(|(_, c)| prefixes.iter().any(|p| c.class.starts_with(p)))
        .collect()
}

struct Line {
    passed: bool,
    detail: String,
}

/// Passes iff there is at least one check, every one passes, and every
/// `required` class shows up.
fn judge(found: &[(&str, &ClassSummary)], required: &[&str], extra: Vec<String>) -> Line {
    let present: BTreeSet<&str> = found.iter().map(|(_, c)| c.class.as_str()).collect();
    let missing: Vec<&&str> = required.iter().filter(|r| !present.contains(**r)).collect();
    let failing: Vec<String> = found.iter().filter(|(_, c)| !c.pass).map(|(n, c)| format!("{n}: {} = {} at {}", c.class, c.max_residual, c.at)).collect();
    let worst = found
        .iter()
        .map(|(_, c)| c.max_residual.parse::<f64>().unwrap_or(f64::NAN))
        .fold(0.0, |a: f64, b| if b.is_nan() || b > a { b } else { a });
    let passed = !found.is_empty() && missing.is_empty() && failing.is_empty() && extra.is_empty();
    let mut detail = format!("{} class results, worst residual {worst:.2e}", found.len());
    if !missing.is_empty() {
        detail += &format!("; missing {missing:?}");
    }
    for f in failing.iter().chain(&extra).take(5) {
        detail += &format!("; {f}");
    }
    Line { passed, detail }
}

fn criterion_1(outcomes: &[Outcome]) -> Line {
    let mut extra = Vec::new();
    let groups = corpus::all_groups::<f64>().unwrap();
    let reports: Vec<_> = groups.par_iter().map(|g| (g.name.clone(), workbench::job::schur_checks(&g.irreps, UNIT_VECTORS, 0, TAU).unwrap())).collect();
    let mut sweeps = 0;
    for (name, r) in &reports {
        sweeps += r.checks.len();
        for c in r.failures() {
            extra.push(format!("{name}: {c}"));
        }
    }
    let found = classes(outcomes, &["schur."]);
    let mut line = judge(&found, &["schur.pair.orthogonality", "schur.pair.convolution", "schur.unit_vectors.character_from_diagonal"], extra);
    line.detail += &format!("; {} corpus groups, {sweeps} checks", groups.len());
    line
}

fn criterion_2(outcomes: &[Outcome]) -> Line {
    let required = [
        "decompose.frobenius.hat_vee",
        "decompose.frobenius.vee_hat",
        "decompose.frobenius.square_diamond",
        "decompose.frobenius.diamond_square",
        "decompose.frobenius.hat_isometry",
        "decompose.frobenius.square_scaling",
        "decompose.frobenius.adjoint_square_hat",
        "decompose.frobenius.adjoint_vee_diamond",
    ];
    let extra = outcomes.iter().filter(|o| o.report.inputs.samples != SAMPLES).map(|o| format!("{}: {} samples", o.name, o.report.inputs.samples)).collect();
    judge(&classes(outcomes, &["decompose.frobenius."]), &required, extra)
}

fn criterion_3(outcomes: &[Outcome]) -> Line {
    let mut extra = Vec::new();
    let mut regular = 0;
    for o in outcomes {
        let d = o.report.results.decompose.as_ref().unwrap();
        let or = o.report.results.oracles.as_ref().unwrap();
        let sum: usize = d.constituents.iter().map(|c| c.multiplicity * c.degree).sum();
        if sum != d.dim_induced {
            extra.push(format!("{}: sum m d = {sum}, dim = {}", o.name, d.dim_induced));
        }
        if or.commutant_dim != or.averaging_commutant_dim {
            extra.push(format!("{}: sum m^2 = {}, brute force = {}", o.name, or.commutant_dim, or.averaging_commutant_dim));
        }
        match or.regular_multiplicities_match {
            Some(true) => regular += 1,
            Some(false) => extra.push(format!("{}: m_sigma != d_sigma for trivial K", o.name)),
            None => {}
        }
    }
    if regular < 3 {
        extra.push(format!("only {regular} trivial-K cases"));
    }
    let required = [
        "decompose.decomposition.dimension_count",
        "decompose.decomposition.isometric_decomposition",
        "oracle.commutant_dimension",
        "oracle.dimension_count",
        "oracle.character_multiplicity",
        "oracle.regular_multiplicities",
    ];
    let mut line = judge(&classes(outcomes, &["decompose.decomposition.", "oracle.dimension_count", "oracle.commutant_dimension", "oracle.character_multiplicity", "oracle.regular"]), &required, extra);
    line.detail += &format!("; {regular} regular cases");
    line
}

fn criterion_4(outcomes: &[Outcome]) -> Line {
    let required = [
        "decompose.commutant.u_orthonormality",
        "decompose.commutant.inversion",
        "decompose.commutant.fourier_roundtrip",
        "decompose.commutant.fourier_multiplicativity",
        "decompose.commutant.identity_resolution",
    ];
    judge(&classes(outcomes, &["decompose.commutant."]), &required, Vec::new())
}

fn criterion_5(outcomes: &[Outcome]) -> Line {
    let required = [
        "hecke.psi_idempotent",
        "hecke.psi_symmetric",
        "hecke.t_v_isometry",
        "hecke.t_v_intertwines",
        "hecke.p_projector",
        "hecke.adapted.orthonormal",
        "hecke.adapted.adjoint_picks_basis",
        "hecke.adapted.psi_average_eigen",
        "hecke.transport.diagram",
        "hecke.fourier.inversion",
        "hecke.fourier.roundtrip",
        "hecke.fourier.multiplicativity",
        "hecke.phi.orthogonality",
        "hecke.character_from_phi",
        "hecke.phi_from_sandwich",
        "hecke.curtis_fossum",
        "hecke.functional_identity",
        "hecke.double_coset.double_coset_coefficients",
        "hecke.double_coset.double_coset_traces",
        "oracle.curtis_fossum_vs_characters",
    ];
    let mut extra = Vec::new();
    for o in outcomes {
        let one_dim = o.report.inputs.theta.degree == 1;
        let has = o.report.residuals.iter().any(|c| c.class.starts_with("hecke.double_coset."));
        if one_dim != has {
            extra.push(format!("{}: double-coset relations present = {has} for d_theta = {}", o.name, o.report.inputs.theta.degree));
        }
    }
    judge(&classes(outcomes, &["hecke.", "oracle.curtis_fossum"]), &required, extra)
}

fn criterion_6(outcomes: &[Outcome]) -> Line {
    let mut extra = Vec::new();
    let chains: Vec<&Outcome> = outcomes.iter().filter(|o| o.report.results.gt.is_some()).collect();
    let orders: BTreeSet<usize> = chains.iter().map(|o| o.report.inputs.group.order).collect();
    if orders != BTreeSet::from([6, 24]) {
        extra.push(format!("chains found on groups of order {orders:?}"));
    }
    for o in &chains {
        let gt = o.report.results.gt.as_ref().unwrap();
        let dec = o.report.results.decompose.as_ref().unwrap();
        for c in &dec.constituents {
            let n = gt.paths.iter().filter(|p| p.sigma == c.label).count();
            if n != c.multiplicity {
                extra.push(format!("{}: {} has {n} paths, multiplicity {}", o.name, c.label, c.multiplicity));
            }
        }
    }
    let required = ["gt.paths.path_count", "gt.paths.orthonormal", "gt.paths.iterated_induction_match", "gt.paths.stage_containment", "gt.stages.conjugates_lambda"];
    let mut line = judge(&classes(outcomes, &["gt."]), &required, extra);
    line.detail += &format!("; {} chains", chains.len());
    line
}

fn criterion_7(dir: &Path) -> Line {
    let jobs = export_corpus(dir).unwrap();
    let bin = env!("CARGO_BIN_EXE_indrep");
    let mut extra = Vec::new();
    let mut compared = 0;
    for j in jobs.iter().filter(|j| ["S3/S2 trivial", "S4/V4 sign_b", "S4/1 trivial"].contains(&j.name.as_str())) {
        let mut texts = Vec::new();
        for run in 0..2 {
            let out = dir.join(format!("{}-{run}.json", workbench::export::slug(&j.name)));
            let status = Command::new(bin).arg("verify-all").args(&j.args).arg("-o").arg(&out).output().unwrap();
            if !status.status.success() {
                extra.push(format!("{} run {run}: exit {:?}", j.name, status.status.code()));
            }
            texts.push(std::fs::read_to_string(&out).unwrap());
        }
        let a = RunReport::comparable_json(&texts[0]).unwrap();
        let b = RunReport::comparable_json(&texts[1]).unwrap();
        if a != b {
            extra.push(format!("{}: reports differ", j.name));
        }
        compared += 1;
    }
    Line { passed: extra.is_empty() && compared == 3, detail: format!("{compared} jobs run twice through the CLI{}", extra.iter().map(|e| format!("; {e}")).collect::<String>()) }
}

#[test]
fn acceptance() {
    let start = std::time::Instant::now();
    let outcomes: Vec<Outcome> = jobs()
        .par_iter()
        .map(|j| Outcome { name: j.name.clone(), report: run(j, Task::VerifyAll).unwrap_or_else(|e| panic!("{}: {e}", j.name)) })
        .collect();
    let dir = tempfile::tempdir().unwrap();
    let lines = [
        ("1 schur and coefficient layer", criterion_1(&outcomes)),
        ("2 frobenius layer", criterion_2(&outcomes)),
        ("3 decomposition layer", criterion_3(&outcomes)),
        ("4 commutant fourier layer", criterion_4(&outcomes)),
        ("5 hecke layer", criterion_5(&outcomes)),
        ("6 gelfand-tsetlin layer", criterion_6(&outcomes)),
        ("7 determinism", criterion_7(dir.path())),
    ];
    println!("acceptance on {} jobs, tau = {TAU:.0e}", outcomes.len());
    for (name, line) in &lines {
        println!("criterion {name}: {} ({})", if line.passed { "PASS" } else { "FAIL" }, line.detail);
    }
    println!("elapsed {:.1}s", start.elapsed().as_secs_f64());
    let failed: Vec<&str> = lines.iter().filter(|(_, l)| !l.passed).map(|(n, _)| *n).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
