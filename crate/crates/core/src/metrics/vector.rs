//! Minkowski distances on real vectors.

use crate::depth::Metric;
use crate::{Error, Result};

/// Lp distance with exponent `p >= 1`; `p = f64::INFINITY` gives the
/// maximum absolute difference.
#[derive(Debug, Clone, Copy)]
pub struct Minkowski {
    p: f64,
}

impl Minkowski {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidExponent { p });
        }
        Ok(Minkowski { p })
    }

    pub fn euclidean() -> Self {
        Minkowski { p: 2.0 }
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn distance_slices(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch {
                left: x.len(),
                right: y.len(),
            });
        }
        let diffs = x.iter().zip(y).map(|(a, b)| (a - b).abs());
        let value = if self.p == f64::INFINITY {
            diffs.fold(0.0, f64::max)
        } else if self.p == 1.0 {
            diffs.sum()
        } else if self.p == 2.0 {
            diffs.map(|d| d * d).sum::<f64>().sqrt()
        } else {
            diffs.map(|d| d.powf(self.p)).sum::<f64>().powf(1.0 / self.p)
        };
        Ok(value)
    }
}

/// Standard Lp norm of `x - y`.
pub fn minkowski_distance(x: &[f64], y: &[f64], p: f64) -> Result<f64> {
    Minkowski::new(p)?.distance_slices(x, y)
}

impl Metric<Vec<f64>> for Minkowski {
    fn distance(&self, a: &Vec<f64>, b: &Vec<f64>) -> Result<f64> {
        self.distance_slices(a, b)
    }
}

impl Metric<[f64; 2]> for Minkowski {
    fn distance(&self, a: &[f64; 2], b: &[f64; 2]) -> Result<f64> {
        if self.p == 2.0 {
            let dx = a[0] - b[0];
            let dy = a[1] - b[1];
            Ok((dx * dx + dy * dy).sqrt())
        } else {
            self.distance_slices(a, b)
        }
    }
}

impl Metric<f64> for Minkowski {
    fn distance(&self, a: &f64, b: &f64) -> Result<f64> {
        Ok((a - b).abs())
    }
}
