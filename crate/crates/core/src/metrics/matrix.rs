//! Validated symmetric distance matrices usable directly as an oracle over
//! point indices.

use crate::depth::Metric;
use crate::{Error, Result};

const SYMMETRY_TOLERANCE: f64 = 1e-12;
const DIAGONAL_TOLERANCE: f64 = 1e-12;

/// A labelled symmetric nonnegative matrix with zero diagonal. The triangle
/// inequality is not required, so semi-distances are admissible.
///
/// On construction the strict upper triangle is taken as authoritative and
/// mirrored below the diagonal, and the diagonal is canonicalized to exact
/// zeros, so lookups are bitwise symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    labels: Vec<String>,
    entries: Vec<f64>,
    n: usize,
}

impl DistanceMatrix {
    pub fn new(labels: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = labels.len();
        if rows.len() != n {
            return Err(Error::MatrixNotSquare {
                rows: rows.len(),
                cols: n,
            });
        }
        for row in &rows {
            if row.len() != n {
                return Err(Error::MatrixNotSquare {
                    rows: n,
                    cols: row.len(),
                });
            }
        }
        {
            let mut seen = std::collections::HashSet::new();
            for label in &labels {
                if !seen.insert(label.as_str()) {
                    return Err(Error::DuplicateLabel {
                        label: label.clone(),
                    });
                }
            }
        }
        for (i, row) in rows.iter().enumerate() {
            for (j, &value) in row.iter().enumerate() {
                if !value.is_finite() || value < 0.0 {
                    return Err(Error::MatrixInvalidEntry { i, j, value });
                }
            }
        }
        for (i, row) in rows.iter().enumerate() {
            if row[i].abs() > DIAGONAL_TOLERANCE {
                return Err(Error::MatrixNonzeroDiagonal { i, value: row[i] });
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if (rows[i][j] - rows[j][i]).abs() > SYMMETRY_TOLERANCE {
                    return Err(Error::MatrixAsymmetric {
                        i,
                        j,
                        a: rows[i][j],
                        b: rows[j][i],
                    });
                }
            }
        }

        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                entries[i * n + j] = rows[i][j];
                entries[j * n + i] = rows[i][j];
            }
        }
        Ok(DistanceMatrix { labels, entries, n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn entry(&self, i: usize, j: usize) -> Result<f64> {
        for index in [i, j] {
            if index >= self.n {
                return Err(Error::IndexOutOfBounds {
                    index,
                    n: self.n,
                });
            }
        }
        Ok(self.entries[i * self.n + j])
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn require_index(&self, label: &str) -> Result<usize> {
        self.index_of(label).ok_or_else(|| Error::UnknownLabel {
            label: label.to_string(),
        })
    }
}

/// Queries are restricted to the labelled items: a sample over indices with
/// the matrix as its metric evaluates depth straight from the stored
/// distances.
impl Metric<usize> for DistanceMatrix {
    fn distance(&self, a: &usize, b: &usize) -> Result<f64> {
        self.entry(*a, *b)
    }
}
