//! Monte Carlo depth surfaces for three centrally symmetric planar
//! distributions, with grid evaluation, line sections and a
//! centre-maximality check.
//!
//! The three distributions — a two-component normal mixture and a standard
//! normal truncated to four squares or to a frame — are all centrally
//! symmetric about the origin, yet their depth surfaces are not maximal at
//! the centre and are not monotone away from the deepest points.

use rayon::prelude::*;

use crate::depth::{depth_profile, DepthEngine, Sample};
use crate::metrics::Minkowski;
use crate::rng::{normal_pair, rng_from_seed, uniform_f64};
use crate::{Error, Result};

/// Axis-aligned closed box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x1_lo: f64,
    pub x1_hi: f64,
    pub x2_lo: f64,
    pub x2_hi: f64,
}

impl Rect {
    pub fn new(x1_lo: f64, x1_hi: f64, x2_lo: f64, x2_hi: f64) -> Self {
        Rect {
            x1_lo,
            x1_hi,
            x2_lo,
            x2_hi,
        }
    }

    fn contains(&self, p: [f64; 2]) -> bool {
        p[0] >= self.x1_lo && p[0] <= self.x1_hi && p[1] >= self.x2_lo && p[1] <= self.x2_hi
    }
}

/// A finite union of axis-aligned boxes with positive area.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarRegion {
    rects: Vec<Rect>,
}

impl PlanarRegion {
    pub fn new(rects: Vec<Rect>) -> Result<Self> {
        if rects.is_empty() {
            return Err(Error::InvalidRegion {
                reason: "region must contain at least one box".into(),
            });
        }
        for (index, r) in rects.iter().enumerate() {
            let finite =
                [r.x1_lo, r.x1_hi, r.x2_lo, r.x2_hi].iter().all(|v| v.is_finite());
            if !finite || r.x1_lo >= r.x1_hi || r.x2_lo >= r.x2_hi {
                return Err(Error::InvalidRegion {
                    reason: format!("box {index} has no positive area"),
                });
            }
        }
        Ok(PlanarRegion { rects })
    }

    pub fn rects(&self) -> &[Rect] {
        &self.rects
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        self.rects.iter().any(|r| r.contains(p))
    }

    /// Four unit-ish squares placed antisymmetrically around the origin.
    pub fn four_squares() -> Self {
        PlanarRegion::new(vec![
            Rect::new(-2.0, -1.0, -2.0, -1.0),
            Rect::new(-3.0, -2.0, 2.0, 3.0),
            Rect::new(1.0, 2.0, 1.0, 2.0),
            Rect::new(2.0, 3.0, -3.0, -2.0),
        ])
        .expect("static region")
    }

    /// A rectangular frame around the origin with an open hole in the
    /// middle.
    pub fn frame() -> Self {
        PlanarRegion::new(vec![
            Rect::new(-4.0, -3.0, -1.0, 1.0),
            Rect::new(-4.0, 4.0, 1.0, 2.0),
            Rect::new(3.0, 4.0, -1.0, 1.0),
            Rect::new(-4.0, 4.0, -2.0, -1.0),
        ])
        .expect("static region")
    }
}

/// Draw `n` points from the equal-weight mixture of two unit-covariance
/// normals centred at (-3, 0) and (3, 0).
///
/// Each draw consumes one uniform (component coin: below one half picks the
/// negative centre) and one Box-Muller pair, so the output is fully
/// determined by `seed`.
pub fn sample_mixture_normal(n: usize, seed: u64) -> Vec<[f64; 2]> {
    let mut rng = rng_from_seed(seed);
    (0..n)
        .map(|_| {
            let coin = uniform_f64(&mut rng);
            let (z1, z2) = normal_pair(&mut rng);
            let shift = if coin < 0.5 { -3.0 } else { 3.0 };
            [z1 + shift, z2]
        })
        .collect()
}

const REJECTION_PROBE_BUDGET: u64 = 10_000_000;
const REJECTION_MIN_ACCEPT_RATE: f64 = 1e-6;

/// Draw `n` points from the standard bivariate normal truncated to
/// `region`, by rejection. Fails if the acceptance rate stays below 1e-6
/// over a 10-million-proposal probe budget.
pub fn sample_truncated_normal(
    region: &PlanarRegion,
    n: usize,
    seed: u64,
) -> Result<Vec<[f64; 2]>> {
    let mut rng = rng_from_seed(seed);
    let mut points = Vec::with_capacity(n);
    let mut attempts = 0u64;
    while points.len() < n {
        let (z1, z2) = normal_pair(&mut rng);
        attempts += 1;
        if region.contains([z1, z2]) {
            points.push([z1, z2]);
        }
        if attempts % REJECTION_PROBE_BUDGET == 0 {
            let accepted = points.len() as u64;
            if (accepted as f64) < REJECTION_MIN_ACCEPT_RATE * attempts as f64 {
                return Err(Error::InfeasibleRegion { attempts, accepted });
            }
        }
    }
    Ok(points)
}

/// The bundled distributions, numbered 1 to 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExampleDistribution {
    NormalMixture,
    FourSquares,
    Frame,
}

impl ExampleDistribution {
    pub fn from_id(id: u8) -> Result<Self> {
        match id {
            1 => Ok(ExampleDistribution::NormalMixture),
            2 => Ok(ExampleDistribution::FourSquares),
            3 => Ok(ExampleDistribution::Frame),
            other => Err(Error::Config {
                reason: format!("unknown example {other}, expected 1, 2 or 3"),
            }),
        }
    }

    pub fn id(&self) -> u8 {
        match self {
            ExampleDistribution::NormalMixture => 1,
            ExampleDistribution::FourSquares => 2,
            ExampleDistribution::Frame => 3,
        }
    }

    /// Symmetric axis extent covering the distribution's support comfortably.
    pub fn default_extent(&self) -> (f64, f64) {
        match self {
            ExampleDistribution::NormalMixture => (-6.0, 6.0),
            ExampleDistribution::FourSquares | ExampleDistribution::Frame => (-5.0, 5.0),
        }
    }

    pub fn sample(&self, n: usize, seed: u64) -> Result<Vec<[f64; 2]>> {
        match self {
            ExampleDistribution::NormalMixture => Ok(sample_mixture_normal(n, seed)),
            ExampleDistribution::FourSquares => {
                sample_truncated_normal(&PlanarRegion::four_squares(), n, seed)
            }
            ExampleDistribution::Frame => {
                sample_truncated_normal(&PlanarRegion::frame(), n, seed)
            }
        }
    }
}

/// Provenance of a depth map.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DepthMapMeta {
    pub n: usize,
    pub seed: Option<u64>,
    pub source: Option<String>,
}

/// Depth values over a cartesian grid; `value_at(i1, i2)` corresponds to
/// `(x1_axis[i1], x2_axis[i2])`.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthMap {
    x1_axis: Vec<f64>,
    x2_axis: Vec<f64>,
    values: Vec<f64>,
    pub meta: DepthMapMeta,
}

const NODE_MATCH_TOLERANCE: f64 = 1e-12;

impl DepthMap {
    pub fn x1_axis(&self) -> &[f64] {
        &self.x1_axis
    }

    pub fn x2_axis(&self) -> &[f64] {
        &self.x2_axis
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value_at(&self, i1: usize, i2: usize) -> f64 {
        self.values[i1 * self.x2_axis.len() + i2]
    }

    /// Grid indices of the node matching `(x1, x2)` within 1e-12 on both
    /// axes.
    pub fn node_index(&self, x1: f64, x2: f64) -> Option<(usize, usize)> {
        let find = |axis: &[f64], target: f64| {
            axis.iter()
                .position(|v| (v - target).abs() <= NODE_MATCH_TOLERANCE)
        };
        Some((find(&self.x1_axis, x1)?, find(&self.x2_axis, x2)?))
    }

    /// Depth at the node matching `(x1, x2)`, if on the grid.
    pub fn value_at_node(&self, x1: f64, x2: f64) -> Option<f64> {
        self.node_index(x1, x2).map(|(i1, i2)| self.value_at(i1, i2))
    }
}

/// `m` evenly spaced points from `lo` to `hi`, endpoint-exact and hitting
/// the exact midpoint of a symmetric range (so zero lies on symmetric grids
/// of odd size).
pub fn linspace(lo: f64, hi: f64, m: usize) -> Vec<f64> {
    if m == 1 {
        return vec![lo];
    }
    let last = (m - 1) as f64;
    (0..m)
        .map(|i| (lo * (last - i as f64) + hi * i as f64) / last)
        .collect()
}

fn check_axis(name: &str, axis: &[f64]) -> Result<()> {
    if axis.is_empty() {
        return Err(Error::InvalidGrid {
            reason: format!("{name} axis is empty"),
        });
    }
    if axis.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidGrid {
            reason: format!("{name} axis contains non-finite values"),
        });
    }
    if axis.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidGrid {
            reason: format!("{name} axis must be strictly increasing"),
        });
    }
    Ok(())
}

/// Euclidean empirical depth of every grid node with respect to `points`.
pub fn grid_depth_map(
    points: &[[f64; 2]],
    x1_axis: &[f64],
    x2_axis: &[f64],
    engine: DepthEngine,
) -> Result<DepthMap> {
    check_axis("x1", x1_axis)?;
    check_axis("x2", x2_axis)?;
    let sample = Sample::new(points.to_vec(), Minkowski::euclidean());
    let queries: Vec<[f64; 2]> = x1_axis
        .iter()
        .flat_map(|&x1| x2_axis.iter().map(move |&x2| [x1, x2]))
        .collect();
    let depths = depth_profile(&queries, &sample, engine)?;
    Ok(DepthMap {
        x1_axis: x1_axis.to_vec(),
        x2_axis: x2_axis.to_vec(),
        values: depths.into_iter().map(|d| d.value).collect(),
        meta: DepthMapMeta {
            n: points.len(),
            seed: None,
            source: None,
        },
    })
}

/// Sample one of the bundled distributions and evaluate its depth map on a
/// symmetric square grid of `grid_points` per axis.
pub fn example_depth_map(
    distribution: ExampleDistribution,
    n: usize,
    seed: u64,
    grid_points: usize,
    engine: DepthEngine,
) -> Result<DepthMap> {
    if grid_points < 2 {
        return Err(Error::InvalidGrid {
            reason: format!("grid needs at least 2 points per axis, got {grid_points}"),
        });
    }
    let points = distribution.sample(n, seed)?;
    let (lo, hi) = distribution.default_extent();
    let axis = linspace(lo, hi, grid_points);
    let mut map = grid_depth_map(&points, &axis, &axis, engine)?;
    map.meta.seed = Some(seed);
    map.meta.source = Some(format!("example{}", distribution.id()));
    Ok(map)
}

/// Lines along which a [`DepthMap`] can be sectioned.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SectionLine {
    /// Horizontal axis: nodes with `x2 = 0`, coordinate is `x1`.
    X2Zero,
    /// Vertical axis: nodes with `x1 = 0`, coordinate is `x2`.
    X1Zero,
    /// Diagonal: nodes with `x1 = x2`, coordinate is the common value.
    Diagonal,
}

/// Ordered `(coordinate, depth)` pairs along the requested line.
pub fn section(map: &DepthMap, line: SectionLine) -> Result<Vec<(f64, f64)>> {
    let find_zero = |axis: &[f64]| {
        axis.iter()
            .position(|v| v.abs() <= NODE_MATCH_TOLERANCE)
            .ok_or(Error::LineMissesGrid)
    };
    let values = match line {
        SectionLine::X2Zero => {
            let j = find_zero(map.x2_axis())?;
            map.x1_axis()
                .iter()
                .enumerate()
                .map(|(i, &x1)| (x1, map.value_at(i, j)))
                .collect()
        }
        SectionLine::X1Zero => {
            let i = find_zero(map.x1_axis())?;
            map.x2_axis()
                .iter()
                .enumerate()
                .map(|(j, &x2)| (x2, map.value_at(i, j)))
                .collect()
        }
        SectionLine::Diagonal => {
            let mut pairs = Vec::new();
            for (i, &x1) in map.x1_axis().iter().enumerate() {
                if let Some(j) = map
                    .x2_axis()
                    .iter()
                    .position(|v| (v - x1).abs() <= NODE_MATCH_TOLERANCE)
                {
                    pairs.push((x1, map.value_at(i, j)));
                }
            }
            if pairs.is_empty() {
                return Err(Error::LineMissesGrid);
            }
            pairs
        }
    };
    Ok(values)
}

/// Comparison of the centre's depth against the grid maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct CenterMaximality {
    pub center_depth: f64,
    pub global_max_depth: f64,
    /// Nodes attaining the maximum within 1e-12.
    pub argmax_nodes: Vec<(f64, f64)>,
    /// True when the centre ties the maximum within 1e-12.
    pub is_center_max: bool,
}

const MAX_TIE_TOLERANCE: f64 = 1e-12;

/// Check whether the depth surface attains its grid maximum at the origin.
/// Ties count as maximal. Fails if (0, 0) is not a grid node.
pub fn center_maximality_check(map: &DepthMap) -> Result<CenterMaximality> {
    let (i0, j0) = map.node_index(0.0, 0.0).ok_or(Error::CenterNotOnGrid)?;
    let center_depth = map.value_at(i0, j0);
    let global_max_depth = map
        .values()
        .par_iter()
        .cloned()
        .reduce(|| f64::NEG_INFINITY, f64::max);
    let mut argmax_nodes = Vec::new();
    for (i, &x1) in map.x1_axis().iter().enumerate() {
        for (j, &x2) in map.x2_axis().iter().enumerate() {
            if map.value_at(i, j) >= global_max_depth - MAX_TIE_TOLERANCE {
                argmax_nodes.push((x1, x2));
            }
        }
    }
    Ok(CenterMaximality {
        center_depth,
        global_max_depth,
        argmax_nodes,
        is_center_max: center_depth >= global_max_depth - MAX_TIE_TOLERANCE,
    })
}
