//! Distances and pseudo-distances over vectors, curves, distribution
//! functions and precomputed matrices. Each produces values usable as a
//! [`crate::depth::Metric`].

mod curve;
mod distribution;
mod matrix;
mod pca;
mod vector;

pub use curve::{
    block_average_curve, l2_curve_distance, second_derivative_pseudo_distance, sup_curve_distance,
    trapezoid_weights, Curve,
};
pub use distribution::{histogram_to_cdf, wasserstein_distance, HistogramBin, Interpolation, StepCdf};
pub use matrix::DistanceMatrix;
pub use pca::{fit_pca_basis, pca_pseudo_distance, PcaBasis};
pub use vector::{minkowski_distance, Minkowski};

use crate::depth::Metric;
use crate::Result;

/// Runtime-selected curve metric, e.g. for CLI-driven workflows.
#[derive(Debug, Clone)]
pub enum CurveMetric {
    /// Trapezoid-rule L2 distance, summed over channels.
    L2,
    /// Supremum distance over all grid points and channels.
    Sup,
    /// L2 distance between central second differences (a pseudo-distance).
    SecondDerivative,
    /// Euclidean distance between leading principal-component scores
    /// (a pseudo-distance).
    Pca(PcaBasis),
}

impl Metric<Curve> for CurveMetric {
    fn distance(&self, a: &Curve, b: &Curve) -> Result<f64> {
        match self {
            CurveMetric::L2 => l2_curve_distance(a, b),
            CurveMetric::Sup => sup_curve_distance(a, b),
            CurveMetric::SecondDerivative => second_derivative_pseudo_distance(a, b),
            CurveMetric::Pca(basis) => pca_pseudo_distance(a, b, basis),
        }
    }
}

/// Wasserstein distance of a fixed order as a metric over [`StepCdf`] values.
#[derive(Debug, Clone, Copy)]
pub struct WassersteinMetric {
    order: f64,
}

impl WassersteinMetric {
    pub fn new(order: f64) -> Result<Self> {
        if !order.is_finite() || order < 1.0 {
            return Err(crate::Error::InvalidExponent { p: order });
        }
        Ok(WassersteinMetric { order })
    }

    pub fn order(&self) -> f64 {
        self.order
    }
}

impl Metric<StepCdf> for WassersteinMetric {
    fn distance(&self, a: &StepCdf, b: &StepCdf) -> Result<f64> {
        wasserstein_distance(a, b, self.order)
    }
}
