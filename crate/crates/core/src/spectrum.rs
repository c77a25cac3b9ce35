//! Blockwise waterfilling construction of the optimal spectra.
//!
//! Given weights `alpha` (non-increasing, positive) and per-space spectra
//! `lambda_j` (non-increasing, nonnegative), the solver builds the
//! non-decreasing level vector `b = (b_1 1_{s_1}, ..., b_p 1_{s_p})` by an
//! inductive search for the largest admissible cut index at each stage. Each
//! candidate cut requires one waterfill solve (rows of the block, weights
//! through the cut, or through n for the final block) plus a blockwise
//! majorization test on the resulting row sums. The optimal spectral gaps
//! are then `delta_j = min(b truncated to d_j, lambda_j)` entrywise, and the
//! minimal squared joint distance is `sum_j ||delta_j||^2`.

use crate::error::Error;
use crate::majorization::{majorizes, waterfill_solve, RealProfile};

/// Validated problem data: weights, dimension profile, initial spectra.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemData {
    weights: Vec<f64>,
    dims: Vec<usize>,
    spectra: Vec<Vec<f64>>,
}

impl ProblemData {
    pub fn new(weights: Vec<f64>, dims: Vec<usize>, spectra: Vec<Vec<f64>>) -> Result<Self, Error> {
        if weights.is_empty() {
            return Err(Error::InvalidProblem("weights must be non-empty".into()));
        }
        if !weights.iter().all(|w| w.is_finite()) {
            return Err(Error::InvalidProblem("weights must be finite".into()));
        }
        if weights.iter().any(|&w| w <= 0.0) {
            return Err(Error::InvalidProblem("weights must be positive".into()));
        }
        if weights.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidProblem(
                "weights must be non-increasing".into(),
            ));
        }
        if dims.is_empty() {
            return Err(Error::InvalidProblem("dims must be non-empty".into()));
        }
        if dims.iter().any(|&d| d == 0) {
            return Err(Error::InvalidProblem("dims must be positive".into()));
        }
        if dims.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidProblem("dims must be non-increasing".into()));
        }
        if dims[0] > weights.len() {
            return Err(Error::InvalidProblem(
                "largest dimension must not exceed the number of weights".into(),
            ));
        }
        if spectra.len() != dims.len() {
            return Err(Error::InvalidProblem(format!(
                "expected {} spectra, found {}",
                dims.len(),
                spectra.len()
            )));
        }
        for (j, (spec, &dj)) in spectra.iter().zip(&dims).enumerate() {
            if spec.len() != dj {
                return Err(Error::InvalidProblem(format!(
                    "spectrum for space {} must have length {}, found {}",
                    j,
                    dj,
                    spec.len()
                )));
            }
            if !spec.iter().all(|v| v.is_finite()) {
                return Err(Error::InvalidProblem(format!(
                    "spectrum for space {} must be finite",
                    j
                )));
            }
            if spec.iter().any(|&v| v < 0.0) {
                return Err(Error::InvalidProblem(format!(
                    "spectrum for space {} must be nonnegative",
                    j
                )));
            }
            if spec.windows(2).any(|w| w[0] < w[1]) {
                return Err(Error::InvalidProblem(format!(
                    "spectrum for space {} must be non-increasing",
                    j
                )));
            }
        }
        Ok(Self {
            weights,
            dims,
            spectra,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn spectra(&self) -> &[Vec<f64>] {
        &self.spectra
    }

    /// Number of spaces m.
    pub fn num_spaces(&self) -> usize {
        self.dims.len()
    }

    /// Number of joint weight indices n.
    pub fn num_vectors(&self) -> usize {
        self.weights.len()
    }

    /// Largest dimension d_1.
    pub fn largest_dim(&self) -> usize {
        self.dims[0]
    }

    /// Largest spectrum entry across all spaces (the translation bound M).
    pub fn spectral_max(&self) -> f64 {
        self.spectra
            .iter()
            .filter_map(|s| s.first())
            .fold(0.0f64, |acc, &v| acc.max(v))
    }

    /// Spectrum values still alive at 1-based row `i`: one per space with
    /// `d_j >= i`.
    fn row_values(&self, i: usize) -> Vec<f64> {
        self.spectra
            .iter()
            .zip(&self.dims)
            .filter(|(_, &dj)| i <= dj)
            .map(|(spec, _)| spec[i - 1])
            .collect()
    }
}

/// Output of the blockwise level construction.
#[derive(Debug, Clone, PartialEq)]
pub struct WaterfillSolution {
    constants: Vec<f64>,
    sizes: Vec<usize>,
    cuts: Vec<usize>,
    b_vector: Vec<f64>,
}

impl WaterfillSolution {
    /// Strictly increasing block levels `b_1 < ... < b_p`.
    pub fn constants(&self) -> &[f64] {
        &self.constants
    }

    /// Block sizes `s_k`, summing to d_1.
    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Cut indices `0 = i_0 < i_1 < ... < i_p = d_1`.
    pub fn cuts(&self) -> &[usize] {
        &self.cuts
    }

    /// The expanded non-decreasing level vector of length d_1.
    pub fn b_vector(&self) -> &[f64] {
        &self.b_vector
    }

    pub fn block_count(&self) -> usize {
        self.constants.len()
    }
}

/// Optimal spectral data: gaps, translated completion spectra, approximant
/// spectra, and the minimal squared joint distance.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimalSpectra {
    delta: Vec<Vec<f64>>,
    nu: Vec<Vec<f64>>,
    mu: Vec<Vec<f64>>,
    min_value: f64,
    cuts: Vec<usize>,
}

impl OptimalSpectra {
    /// Gap vectors `delta_j = min(b truncated, lambda_j)` entrywise.
    pub fn delta(&self) -> &[Vec<f64>] {
        &self.delta
    }

    /// Translated completion spectra `nu_j` at the default shift (the
    /// largest spectrum entry).
    pub fn nu(&self) -> &[Vec<f64>] {
        &self.nu
    }

    /// Approximant spectra `mu_j = lambda_j - delta_j` (entrywise >= 0).
    pub fn mu(&self) -> &[Vec<f64>] {
        &self.mu
    }

    /// Minimal value `sum_j ||delta_j||^2`.
    pub fn min_value(&self) -> f64 {
        self.min_value
    }

    /// Cut indices of the underlying level blocks (0 = i_0 < ... < i_p = d_1);
    /// consecutive blocks carry strictly increasing levels, and the entries
    /// of `mu` restricted to one block share that block's level.
    pub fn block_cuts(&self) -> &[usize] {
        &self.cuts
    }
}

/// Builds the block structure and the level vector `b`.
///
/// At each stage, candidate cut indices are scanned downward from `d_1`; the
/// first candidate whose blockwise majorization test passes is the largest
/// admissible one. A candidate equal to `d_1` closes the construction and
/// draws its weights through `n` instead of through the cut.
pub fn compute_b(problem: &ProblemData) -> Result<WaterfillSolution, Error> {
    let n = problem.num_vectors();
    let d1 = problem.largest_dim();
    let weights = problem.weights();

    let mut cuts: Vec<usize> = vec![0];
    let mut constants: Vec<f64> = Vec::new();

    while *cuts.last().unwrap() < d1 {
        let start = cuts.last().unwrap() + 1; // 1-based first row of the block
        let mut found: Option<(usize, f64)> = None;

        for i in (start..=d1).rev() {
            let weight_end = if i == d1 { n } else { i };
            let weight_sum: f64 = weights[start - 1..weight_end].iter().sum();
            let rows: Vec<Vec<f64>> = (start..=i).map(|t| problem.row_values(t)).collect();
            let level = waterfill_solve(weight_sum, &rows)?;
            let beta: Vec<f64> = rows
                .iter()
                .map(|row| row.iter().map(|&v| (v - level).max(0.0)).sum())
                .collect();
            let alpha_block = RealProfile::unsorted(weights[start - 1..weight_end].to_vec());
            if majorizes(&alpha_block, &RealProfile::unsorted(beta)) {
                found = Some((i, level));
                break;
            }
        }

        let (cut, level) = found.ok_or_else(|| {
            Error::InternalContradiction(format!(
                "no admissible cut index in [{}, {}]",
                start, d1
            ))
        })?;
        if let Some(&prev) = constants.last() {
            if level <= prev {
                return Err(Error::InternalContradiction(format!(
                    "block levels not strictly increasing: {} after {}",
                    level, prev
                )));
            }
        }
        constants.push(level);
        cuts.push(cut);
    }

    let sizes: Vec<usize> = cuts.windows(2).map(|w| w[1] - w[0]).collect();
    let mut b_vector = Vec::with_capacity(d1);
    for (&level, &size) in constants.iter().zip(&sizes) {
        b_vector.extend(std::iter::repeat(level).take(size));
    }
    Ok(WaterfillSolution {
        constants,
        sizes,
        cuts,
        b_vector,
    })
}

/// Expands the level vector into the optimal spectra.
///
/// The gaps come from the direct path `delta_j = min(b, lambda_j)`; the
/// translated completion spectra `nu_j` are computed independently through
/// the shifted route (`c = M - b`, `nu_j = max(c, M - lambda_j)` entrywise)
/// so that the two paths can be cross-checked.
pub fn compute_optimal_spectra(problem: &ProblemData, wf: &WaterfillSolution) -> OptimalSpectra {
    let b = wf.b_vector();
    let mut delta = Vec::with_capacity(problem.num_spaces());
    let mut mu = Vec::with_capacity(problem.num_spaces());
    for (spec, &dj) in problem.spectra().iter().zip(problem.dims()) {
        let dj_delta: Vec<f64> = (0..dj).map(|i| b[i].min(spec[i])).collect();
        let dj_mu: Vec<f64> = spec
            .iter()
            .zip(&dj_delta)
            .map(|(&lam, &del)| lam - del)
            .collect();
        delta.push(dj_delta);
        mu.push(dj_mu);
    }
    let nu = completion_spectra_at(problem, wf, problem.spectral_max());
    let min_value = delta
        .iter()
        .map(|dj| dj.iter().map(|v| v * v).sum::<f64>())
        .sum();
    OptimalSpectra {
        delta,
        nu,
        mu,
        min_value,
        cuts: wf.cuts().to_vec(),
    }
}

/// Translated completion spectra at shift `m_shift`: `c = m_shift - b`,
/// `lambda~_j = m_shift - lambda_j`, `nu_j = max(c truncated, lambda~_j)`.
///
/// Any shift at least as large as every spectrum entry is valid; the
/// resulting gaps `m_shift - nu_j` do not depend on the shift.
pub fn completion_spectra_at(
    problem: &ProblemData,
    wf: &WaterfillSolution,
    m_shift: f64,
) -> Vec<Vec<f64>> {
    let c: Vec<f64> = wf.b_vector().iter().map(|&bv| m_shift - bv).collect();
    problem
        .spectra()
        .iter()
        .zip(problem.dims())
        .map(|(spec, &dj)| {
            (0..dj)
                .map(|i| {
                    let lambda_tilde = m_shift - spec[i];
                    c[i].max(lambda_tilde)
                })
                .collect()
        })
        .collect()
}

/// Re-verifies the blockwise majorization certificates on a solution:
/// for every block, the weight slice (through `n` for the final block) must
/// be majorized by the row sums `sum_j (lambda_{i,j} - b_k)^+`.
pub fn verify_block_majorization(problem: &ProblemData, wf: &WaterfillSolution) -> Vec<bool> {
    let n = problem.num_vectors();
    let d1 = problem.largest_dim();
    let weights = problem.weights();
    wf.constants()
        .iter()
        .zip(wf.cuts().windows(2))
        .map(|(&level, window)| {
            let (lo, hi) = (window[0] + 1, window[1]);
            let weight_end = if hi == d1 { n } else { hi };
            let beta: Vec<f64> = (lo..=hi)
                .map(|t| {
                    problem
                        .row_values(t)
                        .iter()
                        .map(|&v| (v - level).max(0.0))
                        .sum()
                })
                .collect();
            let alpha_block = RealProfile::unsorted(weights[lo - 1..weight_end].to_vec());
            majorizes(&alpha_block, &RealProfile::unsorted(beta))
        })
        .collect()
}
