//! Operator-valued approximation with prescribed Hilbert-Schmidt norms.
//!
//! A family of operators T_i : C^d -> C^n with ||T_i||_F^2 = alpha_i has
//! frame operator sum T_i* T_i, and a PSD matrix S is such a frame operator
//! exactly when the expanded weight vector (each alpha_i / n repeated n
//! times) is majorized by the spectrum of S. Best approximation of a PSD
//! target therefore reduces to the single-space vector problem with the
//! expanded weights: solve it, synthesize an optimal vector family, and lift
//! the family back to operators by routing each consecutive group of n
//! vectors into the rows of one operator.

use crate::error::Error;
use crate::linalg::{eig_hermitian, ComplexMatrix, HermitianMatrix, VectorFamily};
use crate::majorization::{majorizes, RealProfile};
use crate::spectrum::{compute_b, compute_optimal_spectra, ProblemData};
use crate::synthesis::synthesize_optimal_design;

/// Family of operators C^d -> C^n with prescribed squared Frobenius norms.
#[derive(Debug, Clone, PartialEq)]
pub struct GOperatorFamily {
    domain_dim: usize,
    analysis_dim: usize,
    weights: Vec<f64>,
    operators: Vec<ComplexMatrix>,
}

impl GOperatorFamily {
    pub fn new(
        operators: Vec<ComplexMatrix>,
        weights: Vec<f64>,
        analysis_dim: usize,
    ) -> Result<Self, Error> {
        if operators.is_empty() {
            return Err(Error::DimensionMismatch(
                "operator family must be non-empty".into(),
            ));
        }
        if operators.len() != weights.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} operators vs {} weights",
                operators.len(),
                weights.len()
            )));
        }
        let domain_dim = operators[0].cols();
        for (i, op) in operators.iter().enumerate() {
            if op.rows() != analysis_dim || op.cols() != domain_dim {
                return Err(Error::DimensionMismatch(format!(
                    "operator {} is {}x{}, expected {}x{}",
                    i,
                    op.rows(),
                    op.cols(),
                    analysis_dim,
                    domain_dim
                )));
            }
        }
        for (i, (op, &w)) in operators.iter().zip(&weights).enumerate() {
            let norm_sq = op.frobenius_norm().powi(2);
            if (norm_sq - w).abs() > 1e-10 * w.abs().max(1e-300) {
                return Err(Error::InvalidWeights(format!(
                    "operator {} has squared norm {}, expected {}",
                    i, norm_sq, w
                )));
            }
        }
        Ok(Self {
            domain_dim,
            analysis_dim,
            weights,
            operators,
        })
    }

    pub fn domain_dim(&self) -> usize {
        self.domain_dim
    }

    pub fn analysis_dim(&self) -> usize {
        self.analysis_dim
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }
}

/// Frame operator `sum_i T_i* T_i` of an operator family.
pub fn gframe_operator(family: &GOperatorFamily) -> HermitianMatrix {
    let d = family.domain_dim();
    let mut acc = ComplexMatrix::zeros(d, d);
    for op in family.operators() {
        let prod = op
            .adjoint()
            .matmul(op)
            .expect("family dims validated at construction");
        acc = acc.add(&prod).expect("square accumulator");
    }
    // Symmetrize accumulated roundoff before the typed constructor.
    let sym = acc.add(&acc.adjoint()).expect("same shape").scale(0.5);
    HermitianMatrix::new(sym).expect("sum of T*T is Hermitian")
}

/// Whether a PSD spectrum is realizable as the frame operator of a family
/// with the given norms and analysis dimension: the expanded weight vector
/// (each alpha_i / n repeated n times) must be majorized by the spectrum.
pub fn gframe_feasible(spectrum: &[f64], alpha: &[f64], analysis_dim: usize) -> bool {
    if analysis_dim == 0 || alpha.is_empty() {
        return false;
    }
    let expanded = expand_weights(alpha, analysis_dim);
    majorizes(
        &RealProfile::unsorted(expanded),
        &RealProfile::unsorted(spectrum.to_vec()),
    )
}

fn expand_weights(alpha: &[f64], analysis_dim: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(alpha.len() * analysis_dim);
    for &a in alpha {
        out.extend(std::iter::repeat(a / analysis_dim as f64).take(analysis_dim));
    }
    out
}

/// Schatten-p norms of the residual `A - S` at the returned minimizer,
/// reported for p in {1, 2, 4, inf}. Diagnostic only: the minimizer does not
/// depend on the choice of strictly convex unitarily invariant norm, but only
/// the Frobenius minimal value is computed in closed form here.
#[derive(Debug, Clone, PartialEq)]
pub struct SchattenDiagnostics {
    pub p1: f64,
    pub p2: f64,
    pub p4: f64,
    pub p_inf: f64,
}

impl SchattenDiagnostics {
    fn from_hermitian(diff: &HermitianMatrix) -> Self {
        let eigen = eig_hermitian(diff);
        let p = |power: f64| -> f64 {
            eigen
                .values
                .iter()
                .map(|v| v.abs().powf(power))
                .sum::<f64>()
                .powf(1.0 / power)
        };
        Self {
            p1: eigen.values.iter().map(|v| v.abs()).sum(),
            p2: p(2.0),
            p4: p(4.0),
            p_inf: eigen.values.iter().fold(0.0f64, |m, v| m.max(v.abs())),
        }
    }
}

/// Result of [`gframe_optimize`].
#[derive(Debug, Clone)]
pub struct GFrameSolution {
    /// Minimal squared Frobenius distance, from the vector-problem solver.
    pub min_value: f64,
    /// Optimal operator family in the constraint set.
    pub family: GOperatorFamily,
    /// Frame operator of the returned family.
    pub approximant: HermitianMatrix,
    /// The underlying optimal vector family (n*m vectors in C^d).
    pub vector_family: VectorFamily,
    /// Sorted gap spectrum delta from the vector solver.
    pub delta: Vec<f64>,
    /// Levels vector b from the waterfilling construction.
    pub b_vector: Vec<f64>,
    /// Residual norms at the minimizer for several Schatten exponents.
    pub schatten: SchattenDiagnostics,
    /// |  ||A - S||_F^2 - min_value |, a consistency certificate.
    pub residual_gap: f64,
}

/// Best approximation of a PSD matrix by a frame operator of a family with
/// prescribed Hilbert-Schmidt norms.
///
/// Weights must be positive and non-increasing (unsorted input is rejected,
/// not silently sorted: the expanded-weight ordering is part of the solver
/// contract), and the domain dimension must not exceed m * n so the expanded
/// problem is well-posed.
pub fn gframe_optimize(
    a: &HermitianMatrix,
    alpha: &[f64],
    analysis_dim: usize,
) -> Result<GFrameSolution, Error> {
    if analysis_dim == 0 {
        return Err(Error::DimensionMismatch(
            "analysis dimension must be positive".into(),
        ));
    }
    if alpha.is_empty() {
        return Err(Error::InvalidWeights("weights must be non-empty".into()));
    }
    if alpha.iter().any(|&v| v <= 0.0 || !v.is_finite()) {
        return Err(Error::InvalidWeights(
            "weights must be positive and finite".into(),
        ));
    }
    if alpha.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidWeights(
            "weights must be non-increasing".into(),
        ));
    }
    let m = alpha.len();
    let n = analysis_dim;
    let d = a.dim();
    if d > m * n {
        return Err(Error::DimensionMismatch(format!(
            "domain dimension {} exceeds total operator capacity {} (m * n)",
            d,
            m * n
        )));
    }

    let eigen = eig_hermitian(a);
    let scale = 1.0 + eigen.values.iter().fold(0.0f64, |acc, &v| acc.max(v.abs()));
    let mut lambda = eigen.values.clone();
    for v in lambda.iter_mut() {
        if *v < 0.0 {
            if *v < -1e-9 * scale {
                return Err(Error::InvalidProblem(
                    "matrix must be positive semidefinite".into(),
                ));
            }
            *v = 0.0;
        }
    }

    // Single-space vector problem with the expanded weights.
    let expanded = expand_weights(alpha, n);
    let problem = ProblemData::new(expanded, vec![d], vec![lambda])?;
    let wf = compute_b(&problem)?;
    let opt = compute_optimal_spectra(&problem, &wf);
    let design = synthesize_optimal_design(&problem, &opt, Some(std::slice::from_ref(&eigen.vectors)))?;
    let vector_family = design.families()[0].clone();

    // Lift: operator i takes rows from the i-th group of n vectors; row j of
    // T_i is the conjugate of vector (i-1) n + j, so T_i x = (<x, f_k>)_j
    // and sum_i T_i* T_i recovers the vector family's frame operator.
    let mut operators = Vec::with_capacity(m);
    for i in 0..m {
        let mut t = ComplexMatrix::zeros(n, d);
        for j in 0..n {
            let f = &vector_family.vectors()[i * n + j];
            for c in 0..d {
                t.set(j, c, f[c].conj());
            }
        }
        operators.push(t);
    }
    let family = GOperatorFamily::new(operators, alpha.to_vec(), n)?;
    let approximant = gframe_operator(&family);

    let diff_raw = a.matrix().sub(approximant.matrix())?;
    let diff = HermitianMatrix::new(diff_raw.add(&diff_raw.adjoint())?.scale(0.5))?;
    let achieved = diff.matrix().frobenius_norm().powi(2);
    let min_value = opt.min_value();
    let residual_gap = (achieved - min_value).abs();

    let mut delta = opt.delta()[0].clone();
    delta.sort_by(|x, y| y.partial_cmp(x).unwrap());

    Ok(GFrameSolution {
        min_value,
        family,
        approximant,
        vector_family,
        delta,
        b_vector: wf.b_vector().to_vec(),
        schatten: SchattenDiagnostics::from_hermitian(&diff),
        residual_gap,
    })
}
