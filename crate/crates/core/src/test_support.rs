//! Shared fixtures for the unit tests.

use rand::Rng;

use crate::spectrum::ProblemData;

/// The worked instance used throughout: three spaces, eight weights.
pub fn example_problem() -> ProblemData {
    ProblemData::new(
        vec![40.0, 35.0, 9.0, 5.0, 4.5, 3.0, 2.4, 2.0],
        vec![7, 5, 3],
        vec![
            vec![9.0, 5.5, 3.0, 0.3, 0.0, 0.0, 0.0],
            vec![20.0, 1.1, 0.5, 0.0, 0.0],
            vec![2.0, 1.5, 0.7],
        ],
    )
    .unwrap()
}

/// Random valid problem: sorted positive weights, sorted nonnegative spectra,
/// non-increasing dims with d_1 <= n.
pub fn random_problem(
    rng: &mut impl Rng,
    max_spaces: usize,
    max_dim: usize,
    max_vectors: usize,
) -> ProblemData {
    let m = rng.gen_range(1..=max_spaces);
    let d1 = rng.gen_range(1..=max_dim);
    let mut dims: Vec<usize> = (0..m).map(|_| rng.gen_range(1..=d1)).collect();
    dims.sort_unstable_by(|a, b| b.cmp(a));
    dims[0] = d1;
    let n = rng.gen_range(d1..=max_vectors.max(d1));
    let mut weights: Vec<f64> = (0..n).map(|_| 0.1 + rng.gen::<f64>() * 5.0).collect();
    weights.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let spectra: Vec<Vec<f64>> = dims
        .iter()
        .map(|&dj| {
            let mut s: Vec<f64> = (0..dj).map(|_| rng.gen::<f64>() * 4.0).collect();
            s.sort_by(|a, b| b.partial_cmp(a).unwrap());
            s
        })
        .collect();
    ProblemData::new(weights, dims, spectra).unwrap()
}

/// Random feasible (diagonal, spectrum) pair: repeated Robin Hood moves on a
/// copy of the spectrum produce a majorized diagonal.
pub fn random_feasible_pair(rng: &mut impl Rng, n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut spectrum: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() * 3.0).collect();
    spectrum.sort_by(|a, b| b.partial_cmp(a).unwrap());
    // Keep the diagonal strictly positive: lift the spectrum a bit.
    for v in spectrum.iter_mut() {
        *v += 0.05;
    }
    let mut diag = spectrum.clone();
    for _ in 0..(3 * n) {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i == j {
            continue;
        }
        let (hi, lo) = if diag[i] >= diag[j] { (i, j) } else { (j, i) };
        let amount = rng.gen::<f64>() * 0.5 * (diag[hi] - diag[lo]);
        diag[hi] -= amount;
        diag[lo] += amount;
    }
    (diag, spectrum)
}
