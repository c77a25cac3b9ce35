//! Command implementations and exit-code mapping.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use jfod_core::descent::{descend, random_design, theta, DescentConfig};
use jfod_core::gframes::{gframe_feasible, gframe_optimize};
use jfod_core::linalg::{
    commutator_norm, eig_hermitian, frame_operator, ComplexMatrix, HermitianMatrix,
};
use jfod_core::spectrum::{
    compute_b, compute_optimal_spectra, verify_block_majorization, OptimalSpectra, ProblemData,
    WaterfillSolution,
};
use jfod_core::synthesis::{synthesize_optimal_design, Design};
use jfod_core::Error as CoreError;

use crate::io::*;

/// Exit codes: 0 success, 2 parse/validation, 3 domain invariant,
/// 4 internal or certificate failure.
pub enum Failure {
    Usage(String),
    Domain(String),
    Internal(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Domain(_) => 3,
            Failure::Internal(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Domain(m) | Failure::Internal(m) => m,
        }
    }
}

fn core_failure(err: CoreError) -> Failure {
    match err {
        CoreError::InternalContradiction(_) | CoreError::DegenerateVector(_) => {
            Failure::Internal(err.to_string())
        }
        _ => Failure::Domain(err.to_string()),
    }
}

/// Parsed problem: spectral data plus the target operators and eigenbases
/// (identity bases when spectra were given directly).
pub struct LoadedProblem {
    pub problem: ProblemData,
    pub targets: Vec<HermitianMatrix>,
    pub bases: Option<Vec<ComplexMatrix>>,
    pub seed: Option<u64>,
}

pub fn load_problem(path: &std::path::Path) -> Result<LoadedProblem, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {}", path.display(), e)))?;
    let file: ProblemFile = serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("malformed problem file: {}", e)))?;
    if file.schema_version != "1" {
        return Err(Failure::Usage(format!(
            "unsupported schemaVersion {:?} (expected \"1\")",
            file.schema_version
        )));
    }
    match (&file.initial_spectra, &file.initial_design) {
        (Some(_), Some(_)) | (None, None) => {
            return Err(Failure::Usage(
                "exactly one of initialSpectra / initialDesign must be present".into(),
            ))
        }
        _ => {}
    }

    if let Some(spectra) = &file.initial_spectra {
        let problem = ProblemData::new(file.weights.clone(), file.dims.clone(), spectra.clone())
            .map_err(core_failure)?;
        let targets = problem
            .spectra()
            .iter()
            .map(|s| HermitianMatrix::from_real_diag(s))
            .collect();
        Ok(LoadedProblem {
            problem,
            targets,
            bases: None,
            seed: file.seed,
        })
    } else {
        let design_rows = file.initial_design.as_ref().unwrap();
        if design_rows.len() != file.dims.len() {
            return Err(Failure::Usage(format!(
                "initialDesign has {} families but dims has {} entries",
                design_rows.len(),
                file.dims.len()
            )));
        }
        let mut targets = Vec::with_capacity(file.dims.len());
        let mut bases = Vec::with_capacity(file.dims.len());
        let mut spectra = Vec::with_capacity(file.dims.len());
        for (j, (rows, &dj)) in design_rows.iter().zip(&file.dims).enumerate() {
            let family = parse_family(dj, rows)
                .map_err(|e| Failure::Usage(format!("initialDesign family {}: {}", j, e)))?;
            let op = frame_operator(&family);
            let eigen = eig_hermitian(&op);
            // Frame operators are PSD; clamp eigensolver noise.
            let lambda: Vec<f64> = eigen.values.iter().map(|&v| v.max(0.0)).collect();
            spectra.push(lambda);
            bases.push(eigen.vectors);
            targets.push(op);
        }
        let problem = ProblemData::new(file.weights.clone(), file.dims.clone(), spectra)
            .map_err(core_failure)?;
        Ok(LoadedProblem {
            problem,
            targets,
            bases: Some(bases),
            seed: file.seed,
        })
    }
}

fn solve_pipeline(
    problem: &ProblemData,
) -> Result<(WaterfillSolution, OptimalSpectra), Failure> {
    let wf = compute_b(problem).map_err(core_failure)?;
    let opt = compute_optimal_spectra(problem, &wf);
    Ok((wf, opt))
}

fn base_report(
    command: &str,
    problem: &ProblemData,
    wf: &WaterfillSolution,
    opt: &OptimalSpectra,
) -> Report {
    let block_majorization = verify_block_majorization(problem, wf);
    let all_passed = block_majorization.iter().all(|&b| b);
    Report {
        schema_version: "1".into(),
        command: command.into(),
        b_vector: nums(wf.b_vector()),
        cuts: wf.cuts().to_vec(),
        block_constants: nums(wf.constants()),
        delta: nums2(opt.delta()),
        nu: nums2(opt.nu()),
        mu: nums2(opt.mu()),
        min_value: Num(opt.min_value()),
        synthesized_design: None,
        certificates: Certificates {
            block_majorization,
            theta_residual: None,
            commutator_norms: None,
            eig_alignment_errors: None,
            joint_norm_residual: None,
            all_passed,
        },
        descent_summary: None,
        tolerances: Tolerances::default(),
    }
}

fn write_output(value: &impl serde::Serialize, out: Option<&std::path::Path>) -> Result<(), Failure> {
    let mut bytes = serde_json::to_vec_pretty(value)
        .map_err(|e| Failure::Internal(format!("report serialization failed: {}", e)))?;
    bytes.push(b'\n');
    match out {
        Some(path) => std::fs::write(path, bytes)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {}", path.display(), e))),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(&bytes)
                .map_err(|e| Failure::Usage(format!("cannot write to stdout: {}", e)))
        }
    }
}

fn echo_tolerances() {
    let text = serde_json::to_string_pretty(&Tolerances::default()).expect("static table");
    println!("{}", text);
}

pub fn cmd_solve(
    path: &std::path::Path,
    out: Option<&std::path::Path>,
    tol_report: bool,
) -> Result<(), Failure> {
    let loaded = load_problem(path)?;
    let (wf, opt) = solve_pipeline(&loaded.problem)?;
    let report = base_report("solve", &loaded.problem, &wf, &opt);
    if tol_report {
        echo_tolerances();
    }
    write_output(&report, out)?;
    if !report.certificates.all_passed {
        return Err(Failure::Internal(
            "blockwise majorization certificates failed".into(),
        ));
    }
    Ok(())
}

/// Synthesis certificates: joint norms, distance value, commutation, and
/// alignment of the difference spectrum with the solved gaps.
fn synthesis_certificates(
    problem: &ProblemData,
    opt: &OptimalSpectra,
    targets: &[HermitianMatrix],
    design: &Design,
) -> Result<(Certificates, bool), Failure> {
    let tol = Tolerances::default();
    let joint_norm_residual = design.max_joint_norm_residual(problem.weights());
    let value = theta(targets, design).map_err(core_failure)?;
    let theta_residual = (value - opt.min_value()).abs();

    let ops = design.frame_operators();
    let mut commutators = Vec::with_capacity(ops.len());
    let mut alignments = Vec::with_capacity(ops.len());
    for (j, (target, op)) in targets.iter().zip(&ops).enumerate() {
        let comm = commutator_norm(target.matrix(), op.matrix()).map_err(core_failure)?;
        commutators.push(comm);
        let raw = target.matrix().sub(op.matrix()).map_err(core_failure)?;
        let sym = raw
            .add(&raw.adjoint())
            .map_err(core_failure)?
            .scale(0.5);
        let diff = HermitianMatrix::new(sym).map_err(core_failure)?;
        let eigen = eig_hermitian(&diff);
        let mut want = opt.delta()[j].clone();
        want.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let worst = eigen
            .values
            .iter()
            .zip(&want)
            .map(|(g, w)| (g - w).abs())
            .fold(0.0f64, f64::max);
        alignments.push(worst);
    }

    let block_majorization = verify_block_majorization(problem, &compute_b(problem).map_err(core_failure)?);
    let passed = block_majorization.iter().all(|&b| b)
        && joint_norm_residual <= tol.joint_norm_relative.0
        && theta_residual <= tol.theta_residual_relative.0 * (1.0 + opt.min_value())
        && commutators.iter().all(|&c| c <= tol.commutator_absolute.0)
        && alignments.iter().all(|&a| a <= tol.eig_alignment_absolute.0);

    Ok((
        Certificates {
            block_majorization,
            theta_residual: Some(Num(theta_residual)),
            commutator_norms: Some(nums(&commutators)),
            eig_alignment_errors: Some(nums(&alignments)),
            joint_norm_residual: Some(Num(joint_norm_residual)),
            all_passed: passed,
        },
        passed,
    ))
}

pub fn cmd_synthesize(
    path: &std::path::Path,
    out: Option<&std::path::Path>,
    tol_report: bool,
) -> Result<(), Failure> {
    let loaded = load_problem(path)?;
    let (wf, opt) = solve_pipeline(&loaded.problem)?;
    let design = synthesize_optimal_design(&loaded.problem, &opt, loaded.bases.as_deref())
        .map_err(core_failure)?;
    let (certificates, passed) =
        synthesis_certificates(&loaded.problem, &opt, &loaded.targets, &design)?;

    let mut report = base_report("synthesize", &loaded.problem, &wf, &opt);
    report.command = "synthesize".into();
    report.synthesized_design = Some(design_rows(&design));
    report.certificates = certificates;
    if tol_report {
        echo_tolerances();
    }
    write_output(&report, out)?;
    if !passed {
        return Err(Failure::Internal("synthesis certificates failed".into()));
    }
    Ok(())
}

pub fn cmd_descend(
    path: &std::path::Path,
    out: Option<&std::path::Path>,
    starts: usize,
    seed_flag: Option<u64>,
    tol_report: bool,
) -> Result<(), Failure> {
    if starts == 0 {
        return Err(Failure::Usage("--starts must be at least 1".into()));
    }
    let loaded = load_problem(path)?;
    let (wf, opt) = solve_pipeline(&loaded.problem)?;
    let base_seed = seed_flag.or(loaded.seed).unwrap_or(0);

    let config = DescentConfig {
        max_iters: 20_000,
        grad_tol: 1e-8,
        ..DescentConfig::default()
    };
    let mut runs = Vec::with_capacity(starts);
    let mut max_relative_gap = 0.0f64;
    for k in 0..starts {
        let seed = base_seed.wrapping_add(k as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let start = random_design(loaded.problem.weights(), loaded.problem.dims(), &mut rng)
            .map_err(core_failure)?;
        let trace = descend(&loaded.targets, &start, &config).map_err(core_failure)?;
        let final_value = *trace.objectives.last().unwrap();
        let gap = final_value - opt.min_value();
        let relative_gap = gap / (1.0 + opt.min_value());
        max_relative_gap = max_relative_gap.max(relative_gap);
        let monotone = trace
            .objectives
            .windows(2)
            .all(|w| w[1] <= w[0] + 1e-12 * (1.0 + w[0].abs()));
        runs.push(StartSummary {
            seed,
            final_value: Num(final_value),
            gap: Num(gap),
            relative_gap: Num(relative_gap),
            converged: trace.converged,
            iterations: trace.iterations,
            monotone,
        });
    }

    let mut report = base_report("descend", &loaded.problem, &wf, &opt);
    report.descent_summary = Some(DescentSummary {
        starts,
        base_seed,
        max_relative_gap: Num(max_relative_gap),
        runs,
    });
    if tol_report {
        echo_tolerances();
    }
    write_output(&report, out)?;
    Ok(())
}

pub fn cmd_gframe(
    path: &std::path::Path,
    out: Option<&std::path::Path>,
    tol_report: bool,
) -> Result<(), Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {}", path.display(), e)))?;
    let file: GFrameProblemFile = serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("malformed problem file: {}", e)))?;
    if file.schema_version != "1" {
        return Err(Failure::Usage(format!(
            "unsupported schemaVersion {:?} (expected \"1\")",
            file.schema_version
        )));
    }
    let a = parse_hermitian(&file.matrix_a).map_err(core_failure)?;
    let eigen = eig_hermitian(&a);
    let feasible_exact = gframe_feasible(&eigen.values, &file.weights, file.analysis_dim);

    let sol = gframe_optimize(&a, &file.weights, file.analysis_dim).map_err(core_failure)?;

    let tol = Tolerances::default();
    let norm_residuals: Vec<f64> = sol
        .family
        .operators()
        .iter()
        .zip(sol.family.weights())
        .map(|(op, &w)| (op.frobenius_norm().powi(2) - w).abs() / w.max(1e-300))
        .collect();
    let comm = commutator_norm(a.matrix(), sol.approximant.matrix()).map_err(core_failure)?;
    let passed = norm_residuals.iter().all(|&r| r <= tol.joint_norm_relative.0)
        && comm <= tol.commutator_absolute.0
        && sol.residual_gap <= tol.theta_residual_relative.0 * (1.0 + sol.min_value);

    let operators = sol
        .family
        .operators()
        .iter()
        .map(complex_matrix_rows)
        .collect();
    let report = GFrameReport {
        schema_version: "1".into(),
        command: "gframe".into(),
        feasible_exact,
        min_value: Num(sol.min_value),
        b_vector: nums(&sol.b_vector),
        delta: nums(&sol.delta),
        operators,
        schatten: SchattenReport {
            p1: Num(sol.schatten.p1),
            p2: Num(sol.schatten.p2),
            p4: Num(sol.schatten.p4),
            p_inf: Num(sol.schatten.p_inf),
        },
        certificates: GFrameCertificates {
            norm_residuals: nums(&norm_residuals),
            commutator_norm: Num(comm),
            min_value_residual: Num(sol.residual_gap),
            all_passed: passed,
        },
        tolerances: tol,
    };
    if tol_report {
        echo_tolerances();
    }
    write_output(&report, out)?;
    if !passed {
        return Err(Failure::Internal("operator-family certificates failed".into()));
    }
    Ok(())
}
