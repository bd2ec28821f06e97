//! Distributional post-processing: growth-profile moments, the left-skewed
//! Gumbel fit, polynomial least squares, the closed-form coset God's number,
//! and the small-n adjacency spectrum.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{GraphKind, GraphSpec};
use crate::space::FullSpace;

/// Euler-Mascheroni constant, enough digits for f64.
const EULER_GAMMA: f64 = 0.5772156649015329;

#[derive(Debug, Clone, Serialize)]
pub struct GrowthStats {
    pub mean: f64,
    /// Distance with the largest layer; smallest such distance on ties.
    pub mode: usize,
    pub std: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
}

/// Moments of the distance-from-start distribution given layer sizes.
pub fn growth_stats(layer_sizes: &[u64]) -> Result<GrowthStats> {
    if layer_sizes.iter().filter(|&&c| c > 0).count() < 2 {
        return Err(Error::Degenerate(
            "growth statistics need at least two populated layers".into(),
        ));
    }
    let total = layer_sizes.iter().sum::<u64>() as f64;
    let mean = layer_sizes
        .iter()
        .enumerate()
        .map(|(d, &c)| d as f64 * c as f64)
        .sum::<f64>()
        / total;
    let central = |k: i32| {
        layer_sizes
            .iter()
            .enumerate()
            .map(|(d, &c)| (d as f64 - mean).powi(k) * c as f64)
            .sum::<f64>()
            / total
    };
    let var = central(2);
    let std = var.sqrt();
    let mode = layer_sizes
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .map(|(d, _)| d)
        .unwrap();
    Ok(GrowthStats {
        mean,
        mode,
        std,
        skewness: central(3) / std.powi(3),
        excess_kurtosis: central(4) / var.powi(2) - 3.0,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct GumbelParams {
    pub mu: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GumbelFit {
    pub params: GumbelParams,
    /// Moment-method starting point of the grid refinement.
    pub moment_params: GumbelParams,
    /// L2 distance between the empirical pmf and the fitted density at
    /// integer abscissae.
    pub objective: f64,
    pub moment_objective: f64,
}

/// Left-skewed Gumbel density `(1/beta) exp(t - exp(t))` with `t = (x-mu)/beta`.
pub fn gumbel_density(x: f64, params: &GumbelParams) -> f64 {
    let t = (x - params.mu) / params.beta;
    (t - t.exp()).exp() / params.beta
}

/// Method-of-moments parameters: the distribution has mean `mu - gamma*beta`
/// and variance `pi^2 beta^2 / 6`.
pub fn gumbel_moment_fit(layer_sizes: &[u64]) -> Result<GumbelParams> {
    let stats = growth_stats(layer_sizes)?;
    let beta = (6.0 * stats.std * stats.std).sqrt() / std::f64::consts::PI;
    Ok(GumbelParams {
        mu: stats.mean + EULER_GAMMA * beta,
        beta,
    })
}

fn gumbel_objective(layer_sizes: &[u64], params: &GumbelParams) -> f64 {
    let total = layer_sizes.iter().sum::<u64>() as f64;
    layer_sizes
        .iter()
        .enumerate()
        .map(|(d, &c)| {
            let diff = c as f64 / total - gumbel_density(d as f64, params);
            diff * diff
        })
        .sum()
}

/// Moment fit followed by a 41 x 41 grid search over +-5% of each parameter,
/// minimizing the L2 gap between the empirical pmf and the density.
pub fn gumbel_fit(layer_sizes: &[u64]) -> Result<GumbelFit> {
    let start = gumbel_moment_fit(layer_sizes)?;
    let moment_objective = gumbel_objective(layer_sizes, &start);
    let mut best = start;
    let mut best_objective = moment_objective;
    for i in 0..41 {
        for j in 0..41 {
            let cand = GumbelParams {
                mu: start.mu * (0.95 + 0.0025 * i as f64),
                beta: start.beta * (0.95 + 0.0025 * j as f64),
            };
            let obj = gumbel_objective(layer_sizes, &cand);
            if obj < best_objective {
                best_objective = obj;
                best = cand;
            }
        }
    }
    Ok(GumbelFit {
        params: best,
        moment_params: start,
        objective: best_objective,
        moment_objective,
    })
}

/// Least-squares polynomial fit; returns coefficients in descending powers.
///
/// Solved by modified Gram-Schmidt QR on the Vandermonde matrix, which keeps
/// exact-polynomial inputs exact to well under the 1e-9 the tests demand.
pub fn poly_fit(xs: &[f64], ys: &[f64], degree: usize) -> Result<Vec<f64>> {
    if xs.len() != ys.len() {
        return Err(Error::InvalidInput("xs and ys lengths differ".into()));
    }
    let cols = degree + 1;
    if xs.len() < cols {
        return Err(Error::InvalidInput(format!(
            "degree {degree} fit needs at least {cols} points, got {}",
            xs.len()
        )));
    }
    let rows = xs.len();
    let mut q: Vec<Vec<f64>> = (0..cols)
        .map(|j| {
            let power = (degree - j) as i32;
            xs.iter().map(|&x| x.powi(power)).collect()
        })
        .collect();
    let mut r = vec![vec![0.0; cols]; cols];
    for j in 0..cols {
        let scale = q[j].iter().map(|v| v * v).sum::<f64>().sqrt();
        for i in 0..j {
            let dot: f64 = (0..rows).map(|k| q[i][k] * q[j][k]).sum();
            r[i][j] = dot;
            for k in 0..rows {
                q[j][k] -= dot * q[i][k];
            }
        }
        let norm = q[j].iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm <= 1e-12 * scale.max(1.0) {
            return Err(Error::Degenerate(
                "rank-deficient design matrix in polynomial fit".into(),
            ));
        }
        r[j][j] = norm;
        for v in &mut q[j] {
            *v /= norm;
        }
    }
    let mut coeffs = vec![0.0; cols];
    for j in (0..cols).rev() {
        let mut rhs: f64 = (0..rows).map(|k| q[j][k] * ys[k]).sum();
        for i in j + 1..cols {
            rhs -= r[j][i] * coeffs[i];
        }
        coeffs[j] = rhs / r[j][j];
    }
    Ok(coeffs)
}

/// Closed-form God's number of the balanced coset graph,
/// `3n^2/16 - n/4 + 2 - (n mod 4)/8`, integral for even n >= 6.
pub fn coset_gods_number(n: usize) -> Result<u64> {
    if n < 6 || n % 2 != 0 {
        return Err(Error::InvalidInput(format!(
            "coset God's number formula needs even n >= 6, got {n}"
        )));
    }
    let n = n as u64;
    let sixteenths = 3 * n * n - 4 * n + 32 - 2 * (n % 4);
    debug_assert_eq!(sixteenths % 16, 0);
    Ok(sixteenths / 16)
}

/// All n! eigenvalues of the undirected adjacency operator, ascending.
///
/// The graph is 3-regular and loop-free (L with R, X with itself), so the
/// dense symmetric matrix is diagonalized by cyclic Jacobi rotations until
/// the off-diagonal Frobenius norm drops below 1e-10. Memory and time grow
/// with (n!)^2; n = 7 is the supported ceiling and already takes minutes.
pub fn spectrum(spec: &GraphSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    if spec.kind != GraphKind::FullCayley || spec.x_trick {
        return Err(Error::InvalidConfig(
            "spectrum is defined for the plain full graph".into(),
        ));
    }
    if spec.n < 4 {
        return Err(Error::InvalidInput("spectrum needs n >= 4".into()));
    }
    if spec.n > 7 {
        return Err(Error::Resource(format!(
            "dense spectrum at n = {} needs {} matrix entries",
            spec.n,
            (1..=spec.n as u64).product::<u64>().pow(2)
        )));
    }
    let space = FullSpace::new(spec.n)?;
    let size = space.size() as usize;
    let mut a = vec![0.0f64; size * size];
    for r in 0..size as u64 {
        for s in space.neighbor_ranks(r) {
            a[r as usize * size + s as usize] = 1.0;
        }
    }
    jacobi_eigenvalues(&mut a, size)
}

fn off_diagonal_norm(a: &[f64], size: usize) -> f64 {
    let mut sum = 0.0;
    for i in 0..size {
        for j in i + 1..size {
            sum += a[i * size + j] * a[i * size + j];
        }
    }
    (2.0 * sum).sqrt()
}

fn jacobi_eigenvalues(a: &mut [f64], size: usize) -> Result<Vec<f64>> {
    const TOL: f64 = 1e-10;
    const MAX_SWEEPS: usize = 60;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(a, size) < TOL {
            let mut eigs: Vec<f64> = (0..size).map(|i| a[i * size + i]).collect();
            eigs.sort_by(f64::total_cmp);
            return Ok(eigs);
        }
        for p in 0..size {
            for q in p + 1..size {
                let apq = a[p * size + q];
                if apq == 0.0 {
                    continue;
                }
                let tau = (a[q * size + q] - a[p * size + p]) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..size {
                    let akp = a[k * size + p];
                    let akq = a[k * size + q];
                    a[k * size + p] = c * akp - s * akq;
                    a[k * size + q] = s * akp + c * akq;
                }
                for k in 0..size {
                    let apk = a[p * size + k];
                    let aqk = a[q * size + k];
                    a[p * size + k] = c * apk - s * aqk;
                    a[q * size + k] = s * apk + c * aqk;
                }
            }
        }
    }
    Err(Error::Degenerate(
        "Jacobi iteration did not converge".into(),
    ))
}

/// Equal-width histogram over the value range; returns (bin center, count).
pub fn histogram(values: &[f64], bins: usize) -> Result<Vec<(f64, u64)>> {
    if values.is_empty() || bins == 0 {
        return Err(Error::InvalidInput(
            "histogram needs values and at least one bin".into(),
        ));
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = ((max - min) / bins as f64).max(f64::MIN_POSITIVE);
    let mut counts = vec![0u64; bins];
    for &v in values {
        let idx = (((v - min) / width) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(i, c)| (min + width * (i as f64 + 0.5), c))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::bfs;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn growth_stats_on_a_hand_profile() {
        let stats = growth_stats(&[1, 3, 2]).unwrap();
        assert!((stats.mean - 7.0 / 6.0).abs() < 1e-12);
        assert_eq!(stats.mode, 1);
        assert!((stats.std - (17.0f64 / 36.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn symmetric_profiles_have_zero_skew() {
        let stats = growth_stats(&[1, 2, 1]).unwrap();
        assert!(stats.skewness.abs() < 1e-12);
        assert!((stats.excess_kurtosis - (-1.0)).abs() < 1e-12);
    }

    #[test]
    fn mode_ties_pick_the_smaller_distance() {
        let stats = growth_stats(&[2, 5, 5, 1]).unwrap();
        assert_eq!(stats.mode, 1);
    }

    #[test]
    fn point_masses_are_degenerate() {
        assert!(growth_stats(&[5]).is_err());
        assert!(growth_stats(&[0, 7, 0]).is_err());
        assert!(growth_stats(&[]).is_err());
    }

    #[test]
    fn moment_fit_inverts_mean_and_variance() {
        let layers = [3u64, 9, 14, 11, 4, 1];
        let stats = growth_stats(&layers).unwrap();
        let params = gumbel_moment_fit(&layers).unwrap();
        assert!((params.mu - EULER_GAMMA * params.beta - stats.mean).abs() < 1e-12);
        let var = std::f64::consts::PI.powi(2) * params.beta * params.beta / 6.0;
        assert!((var - stats.std * stats.std).abs() < 1e-12);
    }

    #[test]
    fn refinement_never_worsens_the_objective() {
        let profile = bfs(&GraphSpec::full(7).unwrap(), None).unwrap().0;
        let fit = gumbel_fit(&profile.layer_sizes).unwrap();
        assert!(fit.objective <= fit.moment_objective);
        assert!(fit.params.beta > 0.0);
    }

    #[test]
    fn synthetic_gumbel_samples_are_recovered() {
        let truth = GumbelParams { mu: 30.0, beta: 5.0 };
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let mut layers = vec![0u64; 64];
        for _ in 0..1_000_000 {
            let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
            let x = truth.mu + truth.beta * (-(1.0 - u).ln()).ln();
            let bin = x.round().max(0.0) as usize;
            layers[bin.min(63)] += 1;
        }
        let fit = gumbel_fit(&layers).unwrap();
        assert!(
            (fit.params.mu - truth.mu).abs() < 0.01 * truth.mu,
            "mu {} vs {}",
            fit.params.mu,
            truth.mu
        );
        assert!(
            (fit.params.beta - truth.beta).abs() < 0.02 * truth.beta,
            "beta {} vs {}",
            fit.params.beta,
            truth.beta
        );
    }

    #[test]
    fn distance_profiles_skew_left() {
        let profile = bfs(&GraphSpec::full(9).unwrap(), None).unwrap().0;
        assert!(growth_stats(&profile.layer_sizes).unwrap().skewness < 0.0);
    }

    #[test]
    fn quadratic_diameter_data_fits_exactly() {
        let xs: Vec<f64> = (4..=15).map(|n| n as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|n| n * (n - 1.0) / 2.0).collect();
        let coeffs = poly_fit(&xs, &ys, 2).unwrap();
        assert!((coeffs[0] - 0.5).abs() < 1e-9);
        assert!((coeffs[1] + 0.5).abs() < 1e-9);
        assert!(coeffs[2].abs() < 1e-9);
    }

    #[test]
    fn coset_gods_numbers_fit_a_three_sixteenth_quadratic() {
        let xs: Vec<f64> = (3..=12).map(|m| 2.0 * m as f64).collect();
        let ys: Vec<f64> = (3..=12)
            .map(|m| coset_gods_number(2 * m).unwrap() as f64)
            .collect();
        let coeffs = poly_fit(&xs, &ys, 2).unwrap();
        assert!((coeffs[0] - 0.1875).abs() < 0.001);
    }

    #[test]
    fn line_through_two_points_is_exact() {
        let coeffs = poly_fit(&[1.0, 3.0], &[5.0, 9.0], 1).unwrap();
        assert!((coeffs[0] - 2.0).abs() < 1e-12);
        assert!((coeffs[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn duplicated_abscissae_are_rank_deficient() {
        assert!(poly_fit(&[2.0, 2.0, 2.0], &[1.0, 1.0, 1.0], 2).is_err());
        assert!(poly_fit(&[1.0, 2.0], &[1.0, 2.0], 2).is_err());
    }

    #[test]
    fn coset_gods_number_matches_the_table() {
        let expected = [7u64, 12, 18, 26, 35, 46, 58, 72, 87, 104];
        for (i, &d) in expected.iter().enumerate() {
            assert_eq!(coset_gods_number(6 + 2 * i).unwrap(), d);
        }
        assert!(coset_gods_number(7).is_err());
        assert!(coset_gods_number(4).is_err());
    }

    #[test]
    fn small_spectra_have_the_regular_graph_shape() {
        for n in [4usize, 5] {
            let eigs = spectrum(&GraphSpec::full(n).unwrap()).unwrap();
            let count: u64 = (1..=n as u64).product();
            assert_eq!(eigs.len() as u64, count);
            let max = eigs.last().unwrap();
            assert!((max - 3.0).abs() < 1e-9, "max eigenvalue {max}");
            let sum: f64 = eigs.iter().sum();
            assert!(sum.abs() < 1e-6, "eigenvalue sum {sum}");
        }
    }

    #[test]
    fn even_n_spectra_are_bipartite_symmetric() {
        let eigs = spectrum(&GraphSpec::full(4).unwrap()).unwrap();
        assert!((eigs.first().unwrap() + 3.0).abs() < 1e-9);
        for (lo, hi) in eigs.iter().zip(eigs.iter().rev()) {
            assert!((lo + hi).abs() < 1e-8);
        }
    }

    #[test]
    fn oversized_spectra_are_resource_errors() {
        assert!(spectrum(&GraphSpec::full(8).unwrap())
            .unwrap_err()
            .is_resource());
        assert!(spectrum(&GraphSpec::coset(6).unwrap()).is_err());
    }

    #[test]
    fn histogram_covers_the_range_and_total() {
        let values = [0.0, 0.1, 0.5, 0.9, 1.0, 1.0];
        let bins = histogram(&values, 4).unwrap();
        assert_eq!(bins.len(), 4);
        assert_eq!(bins.iter().map(|b| b.1).sum::<u64>(), values.len() as u64);
        assert!(histogram(&[], 3).is_err());
    }
}
