//! Empirical principal-component basis for discretized curves and the
//! score pseudo-distance built on it.

use nalgebra::DMatrix;

use super::curve::{trapezoid_weights, Curve};
use crate::{Error, Result};

/// Mean curve plus the leading eigenfunctions of the quadrature-weighted
/// empirical covariance, orthonormal under the weighted inner product.
/// Immutable after fitting.
#[derive(Debug, Clone)]
pub struct PcaBasis {
    mean: Curve,
    /// `k` flattened components, channel-major, orthonormal under `weights`.
    components: Vec<Vec<f64>>,
    /// Trapezoid weights tiled over channels.
    weights: Vec<f64>,
    eigenvalues: Vec<f64>,
}

impl PcaBasis {
    pub fn mean_curve(&self) -> &Curve {
        &self.mean
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Vec<f64>] {
        &self.components
    }

    pub fn quadrature_weights(&self) -> &[f64] {
        &self.weights
    }

    /// Covariance eigenvalues for the retained components, decreasing.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    fn check_compatible(&self, curve: &Curve) -> Result<()> {
        if curve.grid() != self.mean.grid() || curve.channel_count() != self.mean.channel_count() {
            return Err(Error::IncompatibleCurves {
                reason: "curve is not defined on the basis grid".into(),
            });
        }
        Ok(())
    }

    /// Weighted inner products of the centred curve with each component.
    pub fn scores(&self, curve: &Curve) -> Result<Vec<f64>> {
        self.check_compatible(curve)?;
        let flat = flatten(curve);
        let mean = flatten(&self.mean);
        Ok(self
            .components
            .iter()
            .map(|phi| {
                flat.iter()
                    .zip(&mean)
                    .zip(&self.weights)
                    .zip(phi)
                    .map(|(((v, m), w), p)| (v - m) * w * p)
                    .sum()
            })
            .collect())
    }
}

fn flatten(curve: &Curve) -> Vec<f64> {
    let mut flat = Vec::with_capacity(curve.channel_count() * curve.len());
    for channel in curve.channels() {
        flat.extend_from_slice(channel);
    }
    flat
}

/// Fit the mean and the first `k` principal components of `curves`.
///
/// The covariance uses 1/(n-1) normalization and the trapezoid quadrature of
/// the shared grid. Components are ordered by decreasing eigenvalue and
/// sign-fixed so that the largest-magnitude coordinate of each component is
/// positive. Requesting more components than the numerical rank of the
/// centred data fails.
pub fn fit_pca_basis(curves: &[Curve], k: usize) -> Result<PcaBasis> {
    let n = curves.len();
    if n < 2 {
        return Err(Error::InsufficientSample { n });
    }
    let first = &curves[0];
    for curve in &curves[1..] {
        if curve.grid() != first.grid() || curve.channel_count() != first.channel_count() {
            return Err(Error::IncompatibleCurves {
                reason: "all curves must share one grid and channel count".into(),
            });
        }
    }
    let dim = first.channel_count() * first.len();
    let max_components = (n - 1).min(dim);
    if k < 1 || k > max_components {
        return Err(Error::TooManyComponents {
            requested: k,
            max: max_components,
        });
    }

    let weights = {
        let per_grid = trapezoid_weights(first.grid());
        let mut tiled = Vec::with_capacity(dim);
        for _ in 0..first.channel_count() {
            tiled.extend_from_slice(&per_grid);
        }
        tiled
    };

    let flats: Vec<Vec<f64>> = curves.iter().map(flatten).collect();
    let mut mean_flat = vec![0.0; dim];
    for flat in &flats {
        for (m, v) in mean_flat.iter_mut().zip(flat) {
            *m += v;
        }
    }
    for m in &mut mean_flat {
        *m /= n as f64;
    }

    // Scaled data matrix B with B^T B equal to the weighted covariance.
    let sqrt_weights: Vec<f64> = weights.iter().map(|w| w.sqrt()).collect();
    let scale = 1.0 / ((n - 1) as f64).sqrt();
    let data = DMatrix::from_fn(n, dim, |i, j| {
        (flats[i][j] - mean_flat[j]) * sqrt_weights[j] * scale
    });

    let svd = data
        .try_svd(false, true, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Config {
            reason: "singular value decomposition did not converge".into(),
        })?;
    let v_t = svd.v_t.expect("requested right singular vectors");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[b]
            .partial_cmp(&svd.singular_values[a])
            .unwrap()
    });

    let sigma_max = svd.singular_values[order[0]];
    let tolerance = sigma_max * f64::EPSILON * n.max(dim) as f64;
    let rank = order
        .iter()
        .filter(|&&i| svd.singular_values[i] > tolerance)
        .count();
    if k > rank {
        return Err(Error::RankDeficient { requested: k, rank });
    }

    let mut components = Vec::with_capacity(k);
    let mut eigenvalues = Vec::with_capacity(k);
    for &index in order.iter().take(k) {
        let sigma = svd.singular_values[index];
        eigenvalues.push(sigma * sigma);
        let mut component: Vec<f64> = (0..dim)
            .map(|j| v_t[(index, j)] / sqrt_weights[j])
            .collect();
        let dominant = component
            .iter()
            .enumerate()
            .fold((0usize, 0.0f64), |(best, best_abs), (i, &v)| {
                if v.abs() > best_abs {
                    (i, v.abs())
                } else {
                    (best, best_abs)
                }
            })
            .0;
        if component[dominant] < 0.0 {
            for v in &mut component {
                *v = -*v;
            }
        }
        components.push(component);
    }

    let mean = Curve::new(
        first.grid().to_vec(),
        mean_flat.chunks(first.len()).map(|c| c.to_vec()).collect(),
    )?;
    Ok(PcaBasis {
        mean,
        components,
        weights,
        eigenvalues,
    })
}

/// Euclidean distance between the score vectors of two curves: a
/// pseudo-distance on curves, invariant to component sign choices.
pub fn pca_pseudo_distance(a: &Curve, b: &Curve, basis: &PcaBasis) -> Result<f64> {
    let sa = basis.scores(a)?;
    let sb = basis.scores(b)?;
    Ok(sa
        .iter()
        .zip(&sb)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::l2_curve_distance;
    use approx::assert_abs_diff_eq;

    fn uniform_grid(lo: f64, hi: f64, m: usize) -> Vec<f64> {
        (0..m)
            .map(|i| (lo * (m - 1 - i) as f64 + hi * i as f64) / (m - 1) as f64)
            .collect()
    }

    fn wavy(grid: &[f64], amp: f64, shift: f64, bend: f64) -> Curve {
        let values = grid
            .iter()
            .map(|t| amp * (2.0 * t).sin() + shift + bend * t * t)
            .collect();
        Curve::single_channel(grid.to_vec(), values).unwrap()
    }

    fn sample_curves() -> Vec<Curve> {
        let grid = uniform_grid(0.0, 3.0, 40);
        (0..8)
            .map(|i| {
                wavy(
                    &grid,
                    1.0 + 0.3 * i as f64,
                    -1.0 + 0.5 * i as f64,
                    0.1 * (i % 3) as f64,
                )
            })
            .collect()
    }

    #[test]
    fn identical_curves_are_rank_deficient() {
        let grid = uniform_grid(0.0, 1.0, 10);
        let curves = vec![wavy(&grid, 1.0, 0.0, 0.0); 4];
        assert!(matches!(
            fit_pca_basis(&curves, 1),
            Err(Error::RankDeficient { rank: 0, .. })
        ));
    }

    #[test]
    fn components_are_orthonormal_under_weighted_inner_product() {
        let curves = sample_curves();
        let basis = fit_pca_basis(&curves, 3).unwrap();
        for (a, pa) in basis.components().iter().enumerate() {
            for (b, pb) in basis.components().iter().enumerate() {
                let gram: f64 = pa
                    .iter()
                    .zip(pb)
                    .zip(basis.quadrature_weights())
                    .map(|((x, y), w)| x * y * w)
                    .sum();
                let expected = if a == b { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(gram, expected, epsilon = 1e-8);
            }
        }
        let eig = basis.eigenvalues();
        assert!(eig.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn first_score_separates_two_clusters() {
        let grid = uniform_grid(0.0, 3.0, 40);
        let mut curves: Vec<Curve> = (0..5)
            .map(|i| wavy(&grid, 1.0 + 0.05 * i as f64, 5.0, 0.0))
            .collect();
        curves.extend((0..5).map(|i| wavy(&grid, 1.0 + 0.05 * i as f64, -5.0, 0.0)));
        let basis = fit_pca_basis(&curves, 1).unwrap();
        let scores: Vec<f64> = curves
            .iter()
            .map(|c| basis.scores(c).unwrap()[0])
            .collect();
        let first_sign = scores[0] > 0.0;
        assert!(scores[..5].iter().all(|s| (*s > 0.0) == first_sign));
        assert!(scores[5..].iter().all(|s| (*s > 0.0) != first_sign));
    }

    #[test]
    fn sign_flip_of_a_component_leaves_distance_unchanged() {
        let curves = sample_curves();
        let basis = fit_pca_basis(&curves, 2).unwrap();
        let mut flipped = basis.clone();
        for v in &mut flipped.components[0] {
            *v = -*v;
        }
        let d = pca_pseudo_distance(&curves[0], &curves[3], &basis).unwrap();
        let d_flipped = pca_pseudo_distance(&curves[0], &curves[3], &flipped).unwrap();
        assert_abs_diff_eq!(d, d_flipped, epsilon = 1e-14);
    }

    #[test]
    fn full_rank_scores_recover_weighted_l2_distance() {
        // Differences of sample curves lie in the span of the centred data,
        // so with every component retained the score distance equals the
        // weighted L2 distance (Parseval).
        let curves = sample_curves();
        let n = curves.len();
        let basis = fit_pca_basis(&curves, n - 1).unwrap();
        for (i, j) in [(0usize, 1usize), (2, 5), (3, 7)] {
            let score_dist = pca_pseudo_distance(&curves[i], &curves[j], &basis).unwrap();
            let l2 = l2_curve_distance(&curves[i], &curves[j]).unwrap();
            assert!(
                (score_dist - l2).abs() <= 1e-6 * l2.max(1e-12),
                "scores {score_dist} vs l2 {l2}"
            );
        }
    }

    #[test]
    fn too_many_components_is_rejected() {
        let curves = sample_curves();
        let n = curves.len();
        assert!(matches!(
            fit_pca_basis(&curves, n),
            Err(Error::TooManyComponents { .. })
        ));
        assert!(matches!(
            fit_pca_basis(&curves, 0),
            Err(Error::TooManyComponents { .. })
        ));
    }

    #[test]
    fn scores_reject_foreign_grids() {
        let curves = sample_curves();
        let basis = fit_pca_basis(&curves, 2).unwrap();
        let other = wavy(&uniform_grid(0.0, 1.0, 40), 1.0, 0.0, 0.0);
        assert!(matches!(
            basis.scores(&other),
            Err(Error::IncompatibleCurves { .. })
        ));
    }
}
