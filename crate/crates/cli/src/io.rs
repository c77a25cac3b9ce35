//! Problem and report file schemas.
//!
//! All floats in reports are emitted with 17 significant digits so values
//! round-trip exactly; complex numbers are `[re, im]` pairs and matrices are
//! row-major. Field order is fixed by the struct definitions, which keeps
//! reports byte-identical for identical inputs.

use num_complex::Complex64;
use serde::{Deserialize, Serialize, Serializer};

use jfod_core::linalg::{ComplexMatrix, HermitianMatrix, VectorFamily};
use jfod_core::synthesis::Design;

/// Wrapper emitting its value as a JSON number with 17 significant digits.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(transparent)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return Err(serde::ser::Error::custom("non-finite value in report"));
        }
        let literal = format!("{:.16e}", self.0);
        serde_json::Number::from_string_unchecked(literal).serialize(serializer)
    }
}

pub fn nums(values: &[f64]) -> Vec<Num> {
    values.iter().map(|&v| Num(v)).collect()
}

pub fn nums2(values: &[Vec<f64>]) -> Vec<Vec<Num>> {
    values.iter().map(|v| nums(v)).collect()
}

/// Complex entry as a `[re, im]` pair.
pub type ComplexPair = [Num; 2];

pub fn complex_matrix_rows(m: &ComplexMatrix) -> Vec<Vec<ComplexPair>> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| {
                    let z = m.get(i, j);
                    [Num(z.re), Num(z.im)]
                })
                .collect()
        })
        .collect()
}

pub fn family_rows(family: &VectorFamily) -> Vec<Vec<ComplexPair>> {
    family
        .vectors()
        .iter()
        .map(|v| v.iter().map(|z| [Num(z.re), Num(z.im)]).collect())
        .collect()
}

pub fn design_rows(design: &Design) -> Vec<Vec<Vec<ComplexPair>>> {
    design.families().iter().map(family_rows).collect()
}

/// Input problem: weights, dims, and either initial spectra or an initial
/// design (complex matrices, rows = vectors, entries = [re, im]).
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(rename = "schemaVersion")]
    pub schema_version: String,
    pub weights: Vec<f64>,
    pub dims: Vec<usize>,
    #[serde(rename = "initialSpectra")]
    pub initial_spectra: Option<Vec<Vec<f64>>>,
    #[serde(rename = "initialDesign")]
    pub initial_design: Option<Vec<Vec<Vec<[f64; 2]>>>>,
    pub seed: Option<u64>,
}

/// Input problem for the operator-approximation command.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GFrameProblemFile {
    #[serde(rename = "schemaVersion")]
    pub schema_version: String,
    #[serde(rename = "matrixA")]
    pub matrix_a: Vec<Vec<[f64; 2]>>,
    pub weights: Vec<f64>,
    #[serde(rename = "analysisDim")]
    pub analysis_dim: usize,
}

pub fn parse_complex_matrix(rows: &[Vec<[f64; 2]>]) -> Result<ComplexMatrix, String> {
    let converted: Vec<Vec<Complex64>> = rows
        .iter()
        .map(|row| row.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
        .collect();
    ComplexMatrix::from_rows(converted).map_err(|e| e.to_string())
}

pub fn parse_family(dim: usize, rows: &[Vec<[f64; 2]>]) -> Result<VectorFamily, String> {
    let vectors: Vec<Vec<Complex64>> = rows
        .iter()
        .map(|row| row.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
        .collect();
    VectorFamily::new(dim, vectors).map_err(|e| e.to_string())
}

pub fn parse_hermitian(rows: &[Vec<[f64; 2]>]) -> Result<HermitianMatrix, jfod_core::Error> {
    let m = parse_complex_matrix(rows)
        .map_err(jfod_core::Error::DimensionMismatch)?;
    HermitianMatrix::new(m)
}

/// Tolerances echoed into every report.
#[derive(Debug, Clone, Serialize)]
pub struct Tolerances {
    #[serde(rename = "hermitianEntry")]
    pub hermitian_entry: Num,
    #[serde(rename = "majorizationRelative")]
    pub majorization_relative: Num,
    #[serde(rename = "thetaResidualRelative")]
    pub theta_residual_relative: Num,
    #[serde(rename = "commutatorAbsolute")]
    pub commutator_absolute: Num,
    #[serde(rename = "eigAlignmentAbsolute")]
    pub eig_alignment_absolute: Num,
    #[serde(rename = "jointNormRelative")]
    pub joint_norm_relative: Num,
    #[serde(rename = "descentGapRelative")]
    pub descent_gap_relative: Num,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermitian_entry: Num(jfod_core::linalg::HERMITIAN_ENTRY_TOL),
            majorization_relative: Num(jfod_core::majorization::MAJORIZATION_TOL),
            theta_residual_relative: Num(1e-7),
            commutator_absolute: Num(1e-7),
            eig_alignment_absolute: Num(1e-7),
            joint_norm_relative: Num(1e-10),
            descent_gap_relative: Num(1e-3),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Certificates {
    #[serde(rename = "blockMajorization")]
    pub block_majorization: Vec<bool>,
    #[serde(rename = "thetaResidual", skip_serializing_if = "Option::is_none")]
    pub theta_residual: Option<Num>,
    #[serde(rename = "commutatorNorms", skip_serializing_if = "Option::is_none")]
    pub commutator_norms: Option<Vec<Num>>,
    #[serde(rename = "eigAlignmentErrors", skip_serializing_if = "Option::is_none")]
    pub eig_alignment_errors: Option<Vec<Num>>,
    #[serde(rename = "jointNormResidual", skip_serializing_if = "Option::is_none")]
    pub joint_norm_residual: Option<Num>,
    #[serde(rename = "allPassed")]
    pub all_passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct StartSummary {
    pub seed: u64,
    #[serde(rename = "finalValue")]
    pub final_value: Num,
    pub gap: Num,
    #[serde(rename = "relativeGap")]
    pub relative_gap: Num,
    pub converged: bool,
    pub iterations: usize,
    pub monotone: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DescentSummary {
    pub starts: usize,
    #[serde(rename = "baseSeed")]
    pub base_seed: u64,
    #[serde(rename = "maxRelativeGap")]
    pub max_relative_gap: Num,
    pub runs: Vec<StartSummary>,
}

/// Report for the solve / synthesize / descend commands.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    #[serde(rename = "schemaVersion")]
    pub schema_version: String,
    pub command: String,
    #[serde(rename = "bVector")]
    pub b_vector: Vec<Num>,
    pub cuts: Vec<usize>,
    #[serde(rename = "blockConstants")]
    pub block_constants: Vec<Num>,
    pub delta: Vec<Vec<Num>>,
    pub nu: Vec<Vec<Num>>,
    pub mu: Vec<Vec<Num>>,
    #[serde(rename = "minValue")]
    pub min_value: Num,
    #[serde(rename = "synthesizedDesign", skip_serializing_if = "Option::is_none")]
    pub synthesized_design: Option<Vec<Vec<Vec<ComplexPair>>>>,
    pub certificates: Certificates,
    #[serde(rename = "descentSummary", skip_serializing_if = "Option::is_none")]
    pub descent_summary: Option<DescentSummary>,
    pub tolerances: Tolerances,
}

#[derive(Debug, Clone, Serialize)]
pub struct SchattenReport {
    pub p1: Num,
    pub p2: Num,
    pub p4: Num,
    #[serde(rename = "pInf")]
    pub p_inf: Num,
}

#[derive(Debug, Clone, Serialize)]
pub struct GFrameCertificates {
    #[serde(rename = "normResiduals")]
    pub norm_residuals: Vec<Num>,
    #[serde(rename = "commutatorNorm")]
    pub commutator_norm: Num,
    #[serde(rename = "minValueResidual")]
    pub min_value_residual: Num,
    #[serde(rename = "allPassed")]
    pub all_passed: bool,
}

/// Report for the gframe command.
#[derive(Debug, Clone, Serialize)]
pub struct GFrameReport {
    #[serde(rename = "schemaVersion")]
    pub schema_version: String,
    pub command: String,
    #[serde(rename = "feasibleExact")]
    pub feasible_exact: bool,
    #[serde(rename = "minValue")]
    pub min_value: Num,
    #[serde(rename = "bVector")]
    pub b_vector: Vec<Num>,
    pub delta: Vec<Num>,
    pub operators: Vec<Vec<Vec<ComplexPair>>>,
    pub schatten: SchattenReport,
    pub certificates: GFrameCertificates,
    pub tolerances: Tolerances,
}
