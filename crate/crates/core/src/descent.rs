//! Projected gradient descent of the squared joint distance over designs.
//!
//! The feasible set is a product of spheres: for each joint index i the
//! concatenated vector (f_{i,1}, ..., f_{i,m}) lives on the sphere of radius
//! sqrt(alpha_i). Steps are projected onto the tangent spaces and retracted
//! by radial rescaling, which restores the constraint exactly. Backtracking
//! keeps the objective non-increasing, so descent doubles as an empirical
//! check that local minimizers are global: seeded random starts should all
//! land at the closed-form minimum.

use num_complex::Complex64;
use rand::Rng;

use crate::error::Error;
use crate::linalg::{HermitianMatrix, VectorFamily};
use crate::synthesis::Design;

/// Per-vector gradient data, mirroring `Design` (family -> vector -> coords).
pub type GradientCollection = Vec<Vec<Vec<Complex64>>>;

/// Tunables for the projected descent.
#[derive(Debug, Clone)]
pub struct DescentConfig {
    pub max_iters: usize,
    pub step_init: f64,
    pub armijo_shrink: f64,
    pub armijo_decrease: f64,
    pub grad_tol: f64,
    pub seed: u64,
}

impl Default for DescentConfig {
    fn default() -> Self {
        Self {
            max_iters: 100_000,
            step_init: 1e-2,
            armijo_shrink: 0.5,
            armijo_decrease: 1e-4,
            grad_tol: 1e-8,
            seed: 0,
        }
    }
}

impl DescentConfig {
    fn validate(&self) -> Result<(), Error> {
        if self.max_iters == 0
            || self.step_init <= 0.0
            || !self.step_init.is_finite()
            || self.armijo_shrink <= 0.0
            || self.armijo_shrink >= 1.0
            || self.armijo_decrease <= 0.0
            || self.grad_tol <= 0.0
        {
            return Err(Error::InvalidProblem(
                "descent config fields must be positive (and shrink < 1)".into(),
            ));
        }
        Ok(())
    }
}

/// Record of one descent run. The objective sequence is non-increasing by
/// construction (only improving steps are accepted).
#[derive(Debug, Clone)]
pub struct DescentTrace {
    pub objectives: Vec<f64>,
    pub final_design: Design,
    pub converged: bool,
    pub grad_norm: f64,
    pub iterations: usize,
}

fn check_shapes(targets: &[HermitianMatrix], design: &Design) -> Result<(), Error> {
    if targets.len() != design.num_spaces() {
        return Err(Error::DimensionMismatch(format!(
            "{} target operators vs {} families",
            targets.len(),
            design.num_spaces()
        )));
    }
    for (j, (t, fam)) in targets.iter().zip(design.families()).enumerate() {
        if t.dim() != fam.dim() {
            return Err(Error::DimensionMismatch(format!(
                "space {}: target dim {} vs family dim {}",
                j,
                t.dim(),
                fam.dim()
            )));
        }
    }
    Ok(())
}

/// Squared joint frame operator distance from the targets to the design.
pub fn theta(targets: &[HermitianMatrix], design: &Design) -> Result<f64, Error> {
    check_shapes(targets, design)?;
    let ops = design.frame_operators();
    crate::linalg::jfod_squared(targets, &ops)
}

/// Euclidean gradient of [`theta`] over the real coordinates of each vector:
/// per vector, `-4 (S0_j - S_j) f_{i,j}`.
pub fn grad_theta(
    targets: &[HermitianMatrix],
    design: &Design,
) -> Result<GradientCollection, Error> {
    check_shapes(targets, design)?;
    let ops = design.frame_operators();
    let mut grad = Vec::with_capacity(design.num_spaces());
    for ((target, op), fam) in targets.iter().zip(&ops).zip(design.families()) {
        let diff = target.matrix().sub(op.matrix())?;
        let mut per_family = Vec::with_capacity(fam.count());
        for f in fam.vectors() {
            let mut g = diff.mul_vec(f)?;
            for z in g.iter_mut() {
                *z *= -4.0;
            }
            per_family.push(g);
        }
        grad.push(per_family);
    }
    Ok(grad)
}

/// Projects `direction` onto the tangent space of the joint-norm constraint
/// and retracts `design + step * projected` back onto the product of spheres
/// by radial rescaling. The sphere radii are read off the design itself, so
/// feasibility is preserved exactly.
pub fn project_and_retract(
    design: &Design,
    direction: &GradientCollection,
    step: f64,
) -> Result<Design, Error> {
    retract_with(design, direction, step, &design.joint_norms())
}

/// As [`project_and_retract`] but with the sphere radii pinned externally,
/// so iterated retraction cannot drift off the original constraint set.
fn retract_with(
    design: &Design,
    direction: &GradientCollection,
    step: f64,
    radii_sq: &[f64],
) -> Result<Design, Error> {
    let m = design.num_spaces();
    let n = design.count();
    if direction.len() != m || direction.iter().any(|fam| fam.len() != n) {
        return Err(Error::DimensionMismatch(
            "direction shape does not match design".into(),
        ));
    }

    let mut new_vectors: Vec<Vec<Vec<Complex64>>> = design
        .families()
        .iter()
        .map(|fam| fam.vectors().to_vec())
        .collect();

    for i in 0..n {
        // Real inner product of the concatenated direction and point.
        let mut inner = 0.0f64;
        for j in 0..m {
            for (z, d) in design.families()[j].vectors()[i]
                .iter()
                .zip(&direction[j][i])
            {
                inner += z.re * d.re + z.im * d.im;
            }
        }
        let radial = inner / radii_sq[i];

        let mut norm_sq = 0.0f64;
        for (j, fam) in new_vectors.iter_mut().enumerate() {
            for (slot, z) in fam[i].iter_mut().enumerate() {
                let tangential =
                    direction[j][i][slot] - design.families()[j].vectors()[i][slot] * radial;
                *z += tangential * step;
                norm_sq += z.norm_sqr();
            }
        }
        if norm_sq <= 1e-24 * radii_sq[i] {
            return Err(Error::DegenerateVector(i));
        }
        let rescale = (radii_sq[i] / norm_sq).sqrt();
        for fam in new_vectors.iter_mut() {
            for z in fam[i].iter_mut() {
                *z *= rescale;
            }
        }
    }

    let families = new_vectors
        .into_iter()
        .zip(design.dims())
        .map(|(vectors, dim)| VectorFamily::new(dim, vectors))
        .collect::<Result<Vec<_>, _>>()?;
    Design::new(families)
}

fn tangential_norm_sq(design: &Design, grad: &GradientCollection) -> f64 {
    let m = design.num_spaces();
    let n = design.count();
    let radii_sq = design.joint_norms();
    let mut total = 0.0f64;
    for i in 0..n {
        let mut inner = 0.0f64;
        for j in 0..m {
            for (z, d) in design.families()[j].vectors()[i].iter().zip(&grad[j][i]) {
                inner += z.re * d.re + z.im * d.im;
            }
        }
        // Form the residual explicitly; the closed form
        // ||g||^2 - inner^2 / r^2 cancels catastrophically near critical
        // points and floors the norm at sqrt(||g||^2 eps).
        let radial = inner / radii_sq[i];
        for j in 0..m {
            for (z, d) in design.families()[j].vectors()[i].iter().zip(&grad[j][i]) {
                total += (d - z * radial).norm_sqr();
            }
        }
    }
    total
}

/// Armijo projected gradient descent from `start`.
///
/// Accepted steps must decrease the objective by the sufficient-decrease
/// margin; the trial step grows after successes and shrinks while
/// backtracking. Stops when the projected gradient norm falls below
/// `grad_tol * (1 + objective)` or the iteration budget runs out.
pub fn descend(
    targets: &[HermitianMatrix],
    start: &Design,
    config: &DescentConfig,
) -> Result<DescentTrace, Error> {
    config.validate()?;
    check_shapes(targets, start)?;

    let mut design = start.clone();
    let radii_sq = start.joint_norms();
    let mut value = theta(targets, &design)?;
    let mut objectives = vec![value];
    let mut step = config.step_init;
    let mut converged = false;
    let mut grad_norm = f64::INFINITY;
    let mut iterations = 0;

    for iter in 0..config.max_iters {
        iterations = iter;
        let grad = grad_theta(targets, &design)?;
        let tang_sq = tangential_norm_sq(&design, &grad);
        grad_norm = tang_sq.sqrt();
        if grad_norm <= config.grad_tol * (1.0 + value.abs()) {
            converged = true;
            break;
        }

        let direction: GradientCollection = grad
            .iter()
            .map(|fam| {
                fam.iter()
                    .map(|g| g.iter().map(|z| -z).collect())
                    .collect()
            })
            .collect();

        // Decreases below the float noise floor of the objective do not
        // count as progress; requiring them ends the run at stagnation.
        let floor = 4.0 * f64::EPSILON * (1.0 + value.abs());
        let mut trial = (step * 2.0).min(config.step_init * 1e4);
        let mut accepted = false;
        while trial >= 1e-18 * (1.0 + config.step_init) {
            let candidate = retract_with(&design, &direction, trial, &radii_sq)?;
            let candidate_value = theta(targets, &candidate)?;
            let required = (config.armijo_decrease * trial * tang_sq).max(floor);
            if candidate_value <= value - required {
                design = candidate;
                value = candidate_value;
                objectives.push(value);
                step = trial;
                accepted = true;
                break;
            }
            trial *= config.armijo_shrink;
        }
        if !accepted {
            // Numerically stalled: no meaningful decrease at any step size.
            break;
        }
    }

    Ok(DescentTrace {
        objectives,
        final_design: design,
        converged,
        grad_norm,
        iterations,
    })
}

/// Seeded random feasible design: each concatenated vector is a normalized
/// complex Gaussian on its sphere, so starts are uniform.
pub fn random_design<R: Rng + ?Sized>(
    weights: &[f64],
    dims: &[usize],
    rng: &mut R,
) -> Result<Design, Error> {
    let n = weights.len();
    let mut families: Vec<Vec<Vec<Complex64>>> = dims.iter().map(|_| vec![vec![]; n]).collect();
    for (i, &alpha) in weights.iter().enumerate() {
        loop {
            let blocks: Vec<Vec<Complex64>> = dims
                .iter()
                .map(|&d| {
                    (0..d)
                        .map(|_| Complex64::new(standard_normal(rng), standard_normal(rng)))
                        .collect()
                })
                .collect();
            let norm_sq: f64 = blocks.iter().flatten().map(|z| z.norm_sqr()).sum();
            if norm_sq > 1e-12 {
                let rescale = (alpha / norm_sq).sqrt();
                for (j, block) in blocks.into_iter().enumerate() {
                    families[j][i] = block.into_iter().map(|z| z * rescale).collect();
                }
                break;
            }
        }
    }
    let families = families
        .into_iter()
        .zip(dims)
        .map(|(vectors, &dim)| VectorFamily::new(dim, vectors))
        .collect::<Result<Vec<_>, _>>()?;
    Design::new(families)
}

fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.gen::<f64>();
        let v: f64 = rng.gen::<f64>();
        if u > f64::MIN_POSITIVE {
            return (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos();
        }
    }
}
