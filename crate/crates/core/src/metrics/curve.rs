//! Discretized functional data and the distances over it.

use crate::{Error, Result};

/// A discretized function: a shared strictly increasing time grid and one
/// value array per channel. Multi-channel curves model vector-valued
/// functional data such as planar pen trajectories.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    grid: Vec<f64>,
    channels: Vec<Vec<f64>>,
}

impl Curve {
    pub fn new(grid: Vec<f64>, channels: Vec<Vec<f64>>) -> Result<Self> {
        if grid.len() < 3 {
            return Err(Error::InvalidCurve {
                reason: format!("grid must have at least 3 points, got {}", grid.len()),
            });
        }
        if grid.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidCurve {
                reason: "grid values must be finite".into(),
            });
        }
        if grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidCurve {
                reason: "grid values must be strictly increasing".into(),
            });
        }
        if channels.is_empty() {
            return Err(Error::InvalidCurve {
                reason: "curve must have at least one channel".into(),
            });
        }
        for (index, values) in channels.iter().enumerate() {
            if values.len() != grid.len() {
                return Err(Error::InvalidCurve {
                    reason: format!(
                        "channel {index} has {} values for a grid of {} points",
                        values.len(),
                        grid.len()
                    ),
                });
            }
            if values.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidCurve {
                    reason: format!("channel {index} contains non-finite values"),
                });
            }
        }
        Ok(Curve { grid, channels })
    }

    pub fn single_channel(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Curve::new(grid, vec![values])
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn channels(&self) -> &[Vec<f64>] {
        &self.channels
    }

    pub fn channel_count(&self) -> usize {
        self.channels.len()
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }
}

fn require_same_layout(a: &Curve, b: &Curve) -> Result<()> {
    if a.grid != b.grid {
        return Err(Error::IncompatibleCurves {
            reason: "curves are not defined on the same grid".into(),
        });
    }
    if a.channel_count() != b.channel_count() {
        return Err(Error::IncompatibleCurves {
            reason: format!(
                "channel counts differ: {} vs {}",
                a.channel_count(),
                b.channel_count()
            ),
        });
    }
    Ok(())
}

/// Trapezoid-rule quadrature weights for an increasing grid.
pub fn trapezoid_weights(grid: &[f64]) -> Vec<f64> {
    let m = grid.len();
    let mut weights = vec![0.0; m];
    weights[0] = (grid[1] - grid[0]) / 2.0;
    weights[m - 1] = (grid[m - 1] - grid[m - 2]) / 2.0;
    for k in 1..m - 1 {
        weights[k] = (grid[k + 1] - grid[k - 1]) / 2.0;
    }
    weights
}

/// L2 distance: square root of the trapezoid-rule approximation of the
/// integrated squared difference, summed over channels.
pub fn l2_curve_distance(a: &Curve, b: &Curve) -> Result<f64> {
    require_same_layout(a, b)?;
    let weights = trapezoid_weights(a.grid());
    let mut total = 0.0;
    for (ca, cb) in a.channels().iter().zip(b.channels()) {
        for ((va, vb), w) in ca.iter().zip(cb).zip(&weights) {
            let diff = va - vb;
            total += w * diff * diff;
        }
    }
    Ok(total.sqrt())
}

/// Supremum distance: maximum absolute difference over all grid points and
/// channels.
pub fn sup_curve_distance(a: &Curve, b: &Curve) -> Result<f64> {
    require_same_layout(a, b)?;
    let mut sup = 0.0f64;
    for (ca, cb) in a.channels().iter().zip(b.channels()) {
        for (va, vb) in ca.iter().zip(cb) {
            sup = sup.max((va - vb).abs());
        }
    }
    Ok(sup)
}

const UNIFORM_GRID_RELATIVE_TOLERANCE: f64 = 1e-9;

fn uniform_spacing(grid: &[f64]) -> Result<f64> {
    let m = grid.len();
    let h = (grid[m - 1] - grid[0]) / (m - 1) as f64;
    for (k, w) in grid.windows(2).enumerate() {
        let spacing = w[1] - w[0];
        if (spacing - h).abs() > UNIFORM_GRID_RELATIVE_TOLERANCE * h {
            return Err(Error::NonUniformGrid {
                index: k,
                spacing,
                expected: h,
            });
        }
    }
    Ok(h)
}

/// L2 pseudo-distance between central second differences.
///
/// Second differences `(y[i-1] - 2 y[i] + y[i+1]) / h^2` are formed on the
/// interior points of a uniform grid and integrated over the interior
/// interval with the trapezoid rule. Adding the same affine function to both
/// curves leaves the value unchanged, distinct curves may be at distance
/// zero.
pub fn second_derivative_pseudo_distance(a: &Curve, b: &Curve) -> Result<f64> {
    require_same_layout(a, b)?;
    if a.channel_count() != 1 {
        return Err(Error::IncompatibleCurves {
            reason: "second-derivative distance is defined for single-channel curves".into(),
        });
    }
    let m = a.len();
    if m < 5 {
        return Err(Error::IncompatibleCurves {
            reason: format!("second-derivative distance needs at least 5 grid points, got {m}"),
        });
    }
    let h = uniform_spacing(a.grid())?;
    let h_sq = h * h;
    let ya = &a.channels()[0];
    let yb = &b.channels()[0];
    let second = |y: &[f64], i: usize| (y[i - 1] - 2.0 * y[i] + y[i + 1]) / h_sq;

    // Trapezoid over the interior nodes 1..=m-2 with uniform spacing h.
    let mut total = 0.0;
    for i in 1..=m - 2 {
        let diff = second(ya, i) - second(yb, i);
        let weight = if i == 1 || i == m - 2 { 0.5 } else { 1.0 };
        total += weight * diff * diff;
    }
    Ok((h * total).sqrt())
}

/// Mean over consecutive index blocks of `width`, producing a coarser curve.
/// The last block may be shorter. Block grid positions are the means of the
/// original grid positions.
pub fn block_average_curve(curve: &Curve, width: usize) -> Result<Curve> {
    if width == 0 {
        return Err(Error::Config {
            reason: "block width must be at least 1".into(),
        });
    }
    let mean = |chunk: &[f64]| chunk.iter().sum::<f64>() / chunk.len() as f64;
    let grid: Vec<f64> = curve.grid().chunks(width).map(mean).collect();
    if grid.len() < 3 {
        return Err(Error::InvalidCurve {
            reason: format!(
                "block averaging with width {width} leaves only {} grid points",
                grid.len()
            ),
        });
    }
    let channels: Vec<Vec<f64>> = curve
        .channels()
        .iter()
        .map(|values| values.chunks(width).map(mean).collect())
        .collect();
    Curve::new(grid, channels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn uniform_grid(lo: f64, hi: f64, m: usize) -> Vec<f64> {
        (0..m)
            .map(|i| (lo * (m - 1 - i) as f64 + hi * i as f64) / (m - 1) as f64)
            .collect()
    }

    fn constant(grid: &[f64], value: f64) -> Curve {
        Curve::single_channel(grid.to_vec(), vec![value; grid.len()]).unwrap()
    }

    #[test]
    fn curve_validation() {
        assert!(Curve::single_channel(vec![0.0, 1.0], vec![0.0, 0.0]).is_err());
        assert!(Curve::single_channel(vec![0.0, 1.0, 1.0], vec![0.0; 3]).is_err());
        assert!(Curve::single_channel(vec![0.0, 1.0, 2.0], vec![0.0; 2]).is_err());
        assert!(Curve::single_channel(vec![0.0, 1.0, 2.0], vec![f64::NAN; 3]).is_err());
        assert!(Curve::new(vec![0.0, 1.0, 2.0], vec![]).is_err());
    }

    #[test]
    fn l2_of_identical_curves_is_zero() {
        let grid = uniform_grid(0.0, 1.0, 11);
        let a = constant(&grid, 3.0);
        assert_eq!(l2_curve_distance(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn l2_between_constants_is_exact() {
        // Trapezoid integration is exact for constants.
        let grid = uniform_grid(0.0, 1.0, 101);
        let zero = constant(&grid, 0.0);
        let one = constant(&grid, 1.0);
        assert_abs_diff_eq!(l2_curve_distance(&zero, &one).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn l2_of_linear_ramp_approximates_analytic_value() {
        // integral of t^2 over [0,1] is 1/3.
        let grid = uniform_grid(0.0, 1.0, 1001);
        let ramp = Curve::single_channel(grid.clone(), grid.clone()).unwrap();
        let zero = constant(&grid, 0.0);
        assert_abs_diff_eq!(
            l2_curve_distance(&ramp, &zero).unwrap(),
            (1.0f64 / 3.0).sqrt(),
            epsilon = 1e-3
        );
    }

    #[test]
    fn l2_sums_over_channels() {
        // Two constant channels at offsets 1 and 2: d^2 = 1 + 4.
        let grid = uniform_grid(0.0, 1.0, 21);
        let a = Curve::new(
            grid.clone(),
            vec![vec![0.0; grid.len()], vec![0.0; grid.len()]],
        )
        .unwrap();
        let b = Curve::new(
            grid.clone(),
            vec![vec![1.0; grid.len()], vec![2.0; grid.len()]],
        )
        .unwrap();
        assert_abs_diff_eq!(l2_curve_distance(&a, &b).unwrap(), 5.0f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn grid_mismatch_is_rejected() {
        let a = constant(&uniform_grid(0.0, 1.0, 11), 0.0);
        let b = constant(&uniform_grid(0.0, 2.0, 11), 0.0);
        assert!(matches!(
            l2_curve_distance(&a, &b),
            Err(Error::IncompatibleCurves { .. })
        ));
        assert!(matches!(
            sup_curve_distance(&a, &b),
            Err(Error::IncompatibleCurves { .. })
        ));
    }

    #[test]
    fn sup_distance_examples() {
        let grid = uniform_grid(0.0, 1.0, 51);
        let zero = constant(&grid, 0.0);
        let one = constant(&grid, 1.0);
        let ramp = Curve::single_channel(grid.clone(), grid.clone()).unwrap();
        assert_eq!(sup_curve_distance(&zero, &zero).unwrap(), 0.0);
        assert_eq!(sup_curve_distance(&zero, &one).unwrap(), 1.0);
        // Monotone ramp attains its supremum at t = 1.
        assert_eq!(sup_curve_distance(&ramp, &zero).unwrap(), 1.0);
    }

    #[test]
    fn second_derivative_annihilates_affine_shifts() {
        let grid = uniform_grid(0.0, 1.0, 101);
        let base: Vec<f64> = grid.iter().map(|t| (5.0 * t).sin()).collect();
        let shifted: Vec<f64> = grid
            .iter()
            .zip(&base)
            .map(|(t, v)| v + 2.5 - 4.0 * t)
            .collect();
        let a = Curve::single_channel(grid.clone(), base).unwrap();
        let b = Curve::single_channel(grid.clone(), shifted).unwrap();
        assert_abs_diff_eq!(
            second_derivative_pseudo_distance(&a, &b).unwrap(),
            0.0,
            epsilon = 1e-10
        );
        assert_eq!(second_derivative_pseudo_distance(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn second_derivative_of_quadratic_is_analytic() {
        // Central differences are exact on quadratics; the integral runs
        // over the interior interval [h, 1-h].
        let m = 1001;
        let grid = uniform_grid(0.0, 1.0, m);
        let h = 1.0 / (m - 1) as f64;
        let quad: Vec<f64> = grid.iter().map(|t| t * t).collect();
        let a = Curve::single_channel(grid.clone(), quad).unwrap();
        let b = constant(&grid, 0.0);
        assert_abs_diff_eq!(
            second_derivative_pseudo_distance(&a, &b).unwrap(),
            2.0 * (1.0 - 2.0 * h).sqrt(),
            epsilon = 1e-6
        );
    }

    #[test]
    fn second_derivative_rejects_non_uniform_grids() {
        let grid = vec![0.0, 0.1, 0.25, 0.4, 0.6];
        let a = constant(&grid, 0.0);
        assert!(matches!(
            second_derivative_pseudo_distance(&a, &a),
            Err(Error::NonUniformGrid { .. })
        ));
    }

    #[test]
    fn block_average_means_blocks() {
        let grid: Vec<f64> = (1..=12).map(|i| i as f64).collect();
        let values: Vec<f64> = (1..=12).map(|i| (i * i) as f64).collect();
        let curve = Curve::single_channel(grid, values).unwrap();
        let coarse = block_average_curve(&curve, 4).unwrap();
        assert_eq!(coarse.len(), 3);
        assert_eq!(coarse.grid(), &[2.5, 6.5, 10.5]);
        assert_eq!(coarse.channels()[0][0], (1.0 + 4.0 + 9.0 + 16.0) / 4.0);
        // Too wide a block leaves fewer than 3 points.
        assert!(block_average_curve(&curve, 6).is_err());
        assert!(block_average_curve(&curve, 0).is_err());
    }

    #[test]
    fn metric_operations_are_symmetric() {
        let grid = uniform_grid(0.0, 2.0, 41);
        let a = Curve::single_channel(grid.clone(), grid.iter().map(|t| t.cos()).collect()).unwrap();
        let b = Curve::single_channel(grid.clone(), grid.iter().map(|t| t / 2.0).collect()).unwrap();
        assert_eq!(
            l2_curve_distance(&a, &b).unwrap(),
            l2_curve_distance(&b, &a).unwrap()
        );
        assert_eq!(
            sup_curve_distance(&a, &b).unwrap(),
            sup_curve_distance(&b, &a).unwrap()
        );
        assert_eq!(
            second_derivative_pseudo_distance(&a, &b).unwrap(),
            second_derivative_pseudo_distance(&b, &a).unwrap()
        );
    }

    #[test]
    fn l2_and_sup_satisfy_triangle_inequality_on_random_triples() {
        let grid = uniform_grid(0.0, 1.0, 64);
        let mut state = 123456789u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for _ in 0..20 {
            let mk = |f: &mut dyn FnMut() -> f64| {
                Curve::single_channel(grid.clone(), (0..64).map(|_| f()).collect()).unwrap()
            };
            let (a, b, c) = (mk(&mut next), mk(&mut next), mk(&mut next));
            for dist in [l2_curve_distance, sup_curve_distance] {
                let ab = dist(&a, &b).unwrap();
                let bc = dist(&b, &c).unwrap();
                let ac = dist(&a, &c).unwrap();
                assert!(ac <= ab + bc + 1e-12);
            }
        }
    }
}
