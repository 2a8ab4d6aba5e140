//! Empirical metric depth engines.
//!
//! The depth of a query point with respect to a sample of `n` points is the
//! fraction of the `n*(n-1)/2` sample pairs whose lens contains the query,
//! where the lens of a pair is the intersection of the two open balls centred
//! at the pair members with radius equal to their mutual distance. Membership
//! reduces to a comparison of three distances, see [`lens_contains`].
//!
//! Three engines are provided:
//!
//! - [`empirical_depth`]: exact count over all pairs;
//! - [`adjusted_depth`]: weighted count where the lens indicator is replaced
//!   by `w(excess)`, `excess` being how far the query sticks out of the
//!   closed lens (zero inside it);
//! - [`subsampled_depth`]: unbiased estimate over a seeded uniform draw of
//!   distinct pairs.
//!
//! Exact and subsampled engines count integers, so their results do not
//! depend on evaluation order; the adjusted engine accumulates floats and
//! always follows the fixed lexicographic pair order.

use rayon::prelude::*;
use std::collections::HashSet;

use crate::rng::{rng_from_seed, uniform_below};
use crate::{Error, Result};

/// A symmetric nonnegative (pseudo-)distance between points of type `P`.
///
/// Implementations must be pure: repeated calls with equal arguments must
/// return bit-identical values, and `distance(a, b) == distance(b, a)`.
/// The triangle inequality is not required; semi-distances are admissible.
pub trait Metric<P: ?Sized>: Sync {
    fn distance(&self, a: &P, b: &P) -> Result<f64>;
}

impl<P: ?Sized, M: Metric<P> + ?Sized> Metric<P> for &M {
    fn distance(&self, a: &P, b: &P) -> Result<f64> {
        (**self).distance(a, b)
    }
}

/// Adapter turning a plain closure into a [`Metric`].
pub struct FnMetric<F>(pub F);

impl<P, F> Metric<P> for FnMetric<F>
where
    F: Fn(&P, &P) -> f64 + Sync,
{
    fn distance(&self, a: &P, b: &P) -> Result<f64> {
        Ok((self.0)(a, b))
    }
}

#[inline]
fn check_distance(value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidDistance { value })
    }
}

/// Whether the query lies in the open lens of a pair at mutual distance
/// `d_pair`, given its distances `d_first`/`d_second` to the two members.
/// Boundary ties fall outside (strict comparison).
pub fn lens_contains(d_pair: f64, d_first: f64, d_second: f64) -> Result<bool> {
    check_distance(d_pair)?;
    check_distance(d_first)?;
    check_distance(d_second)?;
    Ok(d_pair > d_first.max(d_second))
}

/// A depth value together with the counts it was formed from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DepthValue {
    /// `hit_count / pair_count`, always in [0, 1].
    pub value: f64,
    /// Number of pairs entering the denominator.
    pub pair_count: u64,
    /// Number of lens memberships; fractional for the adjusted engine.
    pub hit_count: f64,
}

impl DepthValue {
    fn from_hits(hits: u64, pairs: u64) -> Self {
        DepthValue {
            value: hits as f64 / pairs as f64,
            pair_count: pairs,
            hit_count: hits as f64,
        }
    }

    fn from_weight(total: f64, pairs: u64) -> Self {
        DepthValue {
            value: total / pairs as f64,
            pair_count: pairs,
            hit_count: total,
        }
    }
}

/// An indexed collection of points bound to a metric. Indices are stable for
/// the lifetime of the sample; depth evaluation requires at least two points.
pub struct Sample<P, M> {
    points: Vec<P>,
    metric: M,
}

impl<P, M: Metric<P>> Sample<P, M> {
    pub fn new(points: Vec<P>, metric: M) -> Self {
        Sample { points, metric }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[P] {
        &self.points
    }

    pub fn metric(&self) -> &M {
        &self.metric
    }

    fn require_pairs(&self) -> Result<u64> {
        let n = self.points.len();
        if n < 2 {
            return Err(Error::InsufficientSample { n });
        }
        Ok(pair_count(n))
    }

    /// Distances from every sample point to the query, validated finite and
    /// nonnegative.
    pub fn query_distances(&self, query: &P) -> Result<Vec<f64>> {
        self.points
            .iter()
            .map(|p| check_distance(self.metric.distance(p, query)?))
            .collect()
    }

    /// All pairwise distances in lexicographic `(i, j)`, `i < j` order,
    /// validated finite and nonnegative.
    pub fn pair_distances(&self) -> Result<PairDistances> {
        let total = self.require_pairs()?;
        let n = self.points.len();
        let mut condensed = Vec::with_capacity(total as usize);
        for i in 0..n {
            for j in (i + 1)..n {
                condensed.push(check_distance(
                    self.metric.distance(&self.points[i], &self.points[j])?,
                )?);
            }
        }
        Ok(PairDistances { n, condensed })
    }
}

/// Condensed upper-triangle matrix of pairwise sample distances.
pub struct PairDistances {
    n: usize,
    condensed: Vec<f64>,
}

impl PairDistances {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pair_count(&self) -> u64 {
        pair_count(self.n)
    }

    #[inline]
    fn row_start(&self, i: usize) -> usize {
        i * self.n - i * (i + 1) / 2
    }

    /// Distances from point `i` to points `i+1..n`.
    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        let start = self.row_start(i);
        &self.condensed[start..start + (self.n - 1 - i)]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        self.condensed[self.row_start(lo) + (hi - lo - 1)]
    }
}

pub fn pair_count(n: usize) -> u64 {
    let n = n as u64;
    n * (n - 1) / 2
}

/// Exact empirical depth of `query` with respect to `sample`.
///
/// Counts the pairs `(i, j)`, `i < j`, with
/// `d(x_i, x_j) > max(d(x_i, q), d(x_j, q))` and divides by the total number
/// of pairs. When the query coincides with a sample point the pairs
/// containing it can never count (strict inequality) but stay in the
/// denominator.
pub fn empirical_depth<P, M: Metric<P>>(query: &P, sample: &Sample<P, M>) -> Result<DepthValue> {
    let total = sample.require_pairs()?;
    let query_dists = sample.query_distances(query)?;
    let points = sample.points();
    let n = points.len();
    let mut hits = 0u64;
    for i in 0..n {
        let d_i = query_dists[i];
        for j in (i + 1)..n {
            let d_pair = check_distance(sample.metric().distance(&points[i], &points[j])?)?;
            if d_pair > d_i.max(query_dists[j]) {
                hits += 1;
            }
        }
    }
    Ok(DepthValue::from_hits(hits, total))
}

/// Exact depth from precomputed pair distances; parallel over rows. Integer
/// counting makes the result independent of the parallel schedule.
pub fn empirical_depth_cached(pairs: &PairDistances, query_dists: &[f64]) -> Result<DepthValue> {
    let n = pairs.n();
    if query_dists.len() != n {
        return Err(Error::DimensionMismatch {
            left: query_dists.len(),
            right: n,
        });
    }
    let hits: u64 = (0..n)
        .into_par_iter()
        .map(|i| {
            let d_i = query_dists[i];
            let row = pairs.row(i);
            let mut row_hits = 0u64;
            for (offset, &d_pair) in row.iter().enumerate() {
                if d_pair > d_i.max(query_dists[i + 1 + offset]) {
                    row_hits += 1;
                }
            }
            row_hits
        })
        .sum();
    Ok(DepthValue::from_hits(hits, pairs.pair_count()))
}

/// Adjusted depth: averages `w(excess)` over all pairs, where
/// `excess = max(0, max(d(x_i, q), d(x_j, q)) - d(x_i, x_j))` vanishes
/// exactly on the closed lens. `w` must map into [0, 1]; with
/// `w = adjustment::indicator` this is the closed-lens count, which differs
/// from [`empirical_depth`] only on exact boundary ties.
///
/// Pairs are accumulated in lexicographic order, so the value is
/// reproducible bit-for-bit.
pub fn adjusted_depth<P, M, W>(query: &P, sample: &Sample<P, M>, weight: W) -> Result<DepthValue>
where
    M: Metric<P>,
    W: Fn(f64) -> f64,
{
    let total = sample.require_pairs()?;
    let query_dists = sample.query_distances(query)?;
    let points = sample.points();
    let n = points.len();
    let mut sum = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let d_pair = check_distance(sample.metric().distance(&points[i], &points[j])?)?;
            sum += checked_weight(&weight, excess(d_pair, query_dists[i], query_dists[j]))?;
        }
    }
    Ok(DepthValue::from_weight(sum, total))
}

/// Adjusted depth from precomputed pair distances (same fixed pair order).
pub fn adjusted_depth_cached<W>(
    pairs: &PairDistances,
    query_dists: &[f64],
    weight: W,
) -> Result<DepthValue>
where
    W: Fn(f64) -> f64,
{
    let n = pairs.n();
    if query_dists.len() != n {
        return Err(Error::DimensionMismatch {
            left: query_dists.len(),
            right: n,
        });
    }
    let mut sum = 0.0;
    for i in 0..n {
        let row = pairs.row(i);
        for (offset, &d_pair) in row.iter().enumerate() {
            sum += checked_weight(
                &weight,
                excess(d_pair, query_dists[i], query_dists[i + 1 + offset]),
            )?;
        }
    }
    Ok(DepthValue::from_weight(sum, pairs.pair_count()))
}

#[inline]
fn excess(d_pair: f64, d_first: f64, d_second: f64) -> f64 {
    (d_first.max(d_second) - d_pair).max(0.0)
}

#[inline]
fn checked_weight<W: Fn(f64) -> f64>(weight: &W, excess: f64) -> Result<f64> {
    let w = weight(excess);
    if !(0.0..=1.0).contains(&w) {
        return Err(Error::InvalidAdjustment { weight: w, excess });
    }
    Ok(w)
}

/// Common adjustment functions: non-increasing maps from the lens excess to
/// [0, 1] with value 1 at zero.
pub mod adjustment {
    /// Closed-lens indicator: 1 exactly at zero excess.
    pub fn indicator(excess: f64) -> f64 {
        if excess == 0.0 {
            1.0
        } else {
            0.0
        }
    }

    /// Linear taper `max(0, 1 - excess/scale)`; Lipschitz with constant
    /// `1/scale`.
    pub fn linear(scale: f64) -> impl Fn(f64) -> f64 + Copy {
        assert!(scale > 0.0, "scale must be positive");
        move |excess| (1.0 - excess / scale).max(0.0)
    }

    /// Exponential taper `exp(-excess/scale)`.
    pub fn exponential(scale: f64) -> impl Fn(f64) -> f64 + Copy {
        assert!(scale > 0.0, "scale must be positive");
        move |excess| (-excess / scale).exp()
    }
}

/// Unbiased subsampled estimate of [`empirical_depth`] over `budget` distinct
/// pairs drawn uniformly without replacement.
///
/// With `budget >= n*(n-1)/2` every pair is evaluated and the result equals
/// the exact depth. Pairs are drawn by Floyd's algorithm over the
/// lexicographic pair indices using the seeded generator from [`crate::rng`],
/// so the estimate is fully determined by `(seed, budget, sample order)`.
pub fn subsampled_depth<P, M: Metric<P>>(
    query: &P,
    sample: &Sample<P, M>,
    budget: u64,
    seed: u64,
) -> Result<DepthValue> {
    if budget == 0 {
        return Err(Error::InvalidBudget);
    }
    let total = sample.require_pairs()?;
    if budget >= total {
        return empirical_depth(query, sample);
    }
    let query_dists = sample.query_distances(query)?;
    let picks = sample_pair_indices(total, budget, seed);
    let points = sample.points();
    let mut hits = 0u64;
    for &t in &picks {
        let (i, j) = decode_pair(t, points.len());
        let d_pair = check_distance(sample.metric().distance(&points[i], &points[j])?)?;
        if d_pair > query_dists[i].max(query_dists[j]) {
            hits += 1;
        }
    }
    Ok(DepthValue::from_hits(hits, budget))
}

/// Draw `k` distinct values from `0..total` (Floyd's algorithm), returned
/// sorted.
fn sample_pair_indices(total: u64, k: u64, seed: u64) -> Vec<u64> {
    let mut rng = rng_from_seed(seed);
    let mut chosen = HashSet::with_capacity(k as usize);
    for j in (total - k)..total {
        let t = uniform_below(&mut rng, j + 1);
        if !chosen.insert(t) {
            chosen.insert(j);
        }
    }
    let mut picks: Vec<u64> = chosen.into_iter().collect();
    picks.sort_unstable();
    picks
}

/// Inverse of the lexicographic pair enumeration: linear index to `(i, j)`.
fn decode_pair(t: u64, n: usize) -> (usize, usize) {
    let n = n as u64;
    let row_offset = |i: u64| i * (2 * n - i - 1) / 2;
    let (mut lo, mut hi) = (0u64, n - 2);
    while lo < hi {
        let mid = (lo + hi + 1) / 2;
        if row_offset(mid) <= t {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    let i = lo;
    let j = i + 1 + (t - row_offset(i));
    (i as usize, j as usize)
}

/// Engine selection for batch evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DepthEngine {
    Exact,
    Subsampled { budget: u64, seed: u64 },
}

/// Depth of every query with respect to `sample`, in query order.
///
/// Element `k` equals the corresponding single-query operation applied to
/// `queries[k]`; in particular the subsampled engine reuses the same seed
/// (hence the same pair subset) for every query. Evaluation is parallel
/// across queries and bit-identical to sequential evaluation. Per-query
/// failures are reported with the offending index.
pub fn depth_profile<P, M>(
    queries: &[P],
    sample: &Sample<P, M>,
    engine: DepthEngine,
) -> Result<Vec<DepthValue>>
where
    P: Sync,
    M: Metric<P>,
{
    if queries.is_empty() {
        return Err(Error::EmptyQueries);
    }
    let total = sample.require_pairs()?;

    let evaluate: Box<dyn Fn(&P) -> Result<DepthValue> + Sync> = match engine {
        DepthEngine::Subsampled { budget, .. } if budget == 0 => {
            return Err(Error::InvalidBudget);
        }
        DepthEngine::Subsampled { budget, seed } if budget < total => {
            let picks = sample_pair_indices(total, budget, seed);
            let points = sample.points();
            let sampled: Vec<(usize, usize, f64)> = picks
                .iter()
                .map(|&t| {
                    let (i, j) = decode_pair(t, points.len());
                    let d_pair = check_distance(sample.metric().distance(&points[i], &points[j])?)?;
                    Ok((i, j, d_pair))
                })
                .collect::<Result<_>>()?;
            Box::new(move |query: &P| {
                let query_dists = sample.query_distances(query)?;
                let mut hits = 0u64;
                for &(i, j, d_pair) in &sampled {
                    if d_pair > query_dists[i].max(query_dists[j]) {
                        hits += 1;
                    }
                }
                Ok(DepthValue::from_hits(hits, budget))
            })
        }
        _ => {
            let pairs = sample.pair_distances()?;
            Box::new(move |query: &P| {
                let query_dists = sample.query_distances(query)?;
                empirical_depth_cached(&pairs, &query_dists)
            })
        }
    };

    let outcomes: Vec<Result<DepthValue>> = queries.par_iter().map(|q| evaluate(q)).collect();
    let mut values = Vec::with_capacity(outcomes.len());
    for (index, outcome) in outcomes.into_iter().enumerate() {
        values.push(outcome.map_err(|source| Error::Query {
            index,
            source: Box::new(source),
        })?);
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::Minkowski;

    fn line_sample(points: &[f64]) -> Sample<f64, Minkowski> {
        Sample::new(points.to_vec(), Minkowski::euclidean())
    }

    /// Independent triple-loop rendering of the depth formula, recomputing
    /// every distance from scratch.
    fn brute_force_depth(query: f64, points: &[f64]) -> f64 {
        let n = points.len();
        let mut hits = 0u64;
        for i in 0..n {
            for j in (i + 1)..n {
                let d_pair = (points[i] - points[j]).abs();
                let d_iq = (points[i] - query).abs();
                let d_jq = (points[j] - query).abs();
                if d_pair > d_iq.max(d_jq) {
                    hits += 1;
                }
            }
        }
        hits as f64 / pair_count(n) as f64
    }

    #[test]
    fn lens_contains_examples() {
        assert!(lens_contains(2.0, 1.0, 1.0).unwrap());
        assert!(!lens_contains(1.0, 1.0, 0.0).unwrap());
        // Table entries: pair (Phn, Val) against query WBW.
        assert!(lens_contains(0.330, 0.322, 0.320).unwrap());
        assert!(matches!(
            lens_contains(f64::NAN, 0.0, 0.0),
            Err(Error::InvalidDistance { .. })
        ));
        assert!(matches!(
            lens_contains(f64::INFINITY, 0.0, 0.0),
            Err(Error::InvalidDistance { .. })
        ));
    }

    #[test]
    fn depth_on_three_point_line() {
        let sample = line_sample(&[0.0, 1.0, 2.0]);
        let mid = empirical_depth(&1.0, &sample).unwrap();
        assert_eq!(mid.value, 1.0 / 3.0);
        assert_eq!(mid.pair_count, 3);
        assert_eq!(mid.hit_count, 1.0);
        let end = empirical_depth(&0.0, &sample).unwrap();
        assert_eq!(end.value, 0.0);
        for q in [-0.5, 0.0, 0.3, 1.0, 1.7, 2.0, 5.0] {
            let engine = empirical_depth(&q, &sample).unwrap().value;
            assert_eq!(engine, brute_force_depth(q, &[0.0, 1.0, 2.0]));
        }
    }

    #[test]
    fn insufficient_sample_is_rejected() {
        let sample = line_sample(&[0.0]);
        assert!(matches!(
            empirical_depth(&0.0, &sample),
            Err(Error::InsufficientSample { n: 1 })
        ));
    }

    #[test]
    fn two_point_degenerate_depths() {
        let sample = line_sample(&[0.0, 1.0]);
        assert_eq!(empirical_depth(&0.0, &sample).unwrap().value, 0.0);
        assert_eq!(empirical_depth(&1.0, &sample).unwrap().value, 0.0);
        assert_eq!(empirical_depth(&0.5, &sample).unwrap().value, 1.0);
    }

    #[test]
    fn sample_point_ceiling() {
        // Pairs containing the query never count, so depth of a sample point
        // is at most C(n-1, 2) / C(n, 2).
        let points = [0.0, 0.7, 1.0, 1.9, 2.4, 3.3];
        let sample = line_sample(&points);
        let ceiling = pair_count(points.len() - 1) as f64 / pair_count(points.len()) as f64;
        for q in &points {
            assert!(empirical_depth(q, &sample).unwrap().value <= ceiling);
        }
    }

    #[test]
    fn cached_engine_matches_direct() {
        let points = [0.4, 1.9, 2.2, 3.1, 4.4, 6.0, 7.3];
        let sample = line_sample(&points);
        let pairs = sample.pair_distances().unwrap();
        for q in [0.0, 1.0, 2.5, 9.0] {
            let direct = empirical_depth(&q, &sample).unwrap();
            let cached =
                empirical_depth_cached(&pairs, &sample.query_distances(&q).unwrap()).unwrap();
            assert_eq!(direct, cached);
        }
    }

    #[test]
    fn adjusted_indicator_matches_plain_without_ties() {
        let sample = line_sample(&[0.0, 1.0, 2.0]);
        let plain = empirical_depth(&0.5, &sample).unwrap();
        let adjusted = adjusted_depth(&0.5, &sample, adjustment::indicator).unwrap();
        assert_eq!(plain.value, adjusted.value);
    }

    #[test]
    fn adjusted_indicator_counts_closed_lens_on_ties() {
        // Query 0: pair (0, 1) has d_pair = 1 = max(0, 1), a boundary tie.
        let sample = line_sample(&[0.0, 1.0, 2.0]);
        let plain = empirical_depth(&0.0, &sample).unwrap();
        let adjusted = adjusted_depth(&0.0, &sample, adjustment::indicator).unwrap();
        assert_eq!(plain.value, 0.0);
        assert_eq!(adjusted.value, 2.0 / 3.0); // ties (0,1) and (0,2) count
    }

    #[test]
    fn adjusted_linear_taper_at_midpoint() {
        // Pairs (0,1) and (1,2) have zero excess at query 1; pair (0,2)
        // has negative slack clamped to zero. All weights are w(0) = 1.
        let sample = line_sample(&[0.0, 1.0, 2.0]);
        let value = adjusted_depth(&1.0, &sample, adjustment::linear(1.0)).unwrap();
        assert_eq!(value.value, 1.0);
        let again = adjusted_depth(&1.0, &sample, adjustment::linear(1.0)).unwrap();
        assert_eq!(value, again);
    }

    #[test]
    fn adjusted_rejects_out_of_range_weights() {
        let sample = line_sample(&[0.0, 1.0, 2.0]);
        assert!(matches!(
            adjusted_depth(&1.0, &sample, |_| 1.5),
            Err(Error::InvalidAdjustment { .. })
        ));
    }

    #[test]
    fn adjusted_dominates_closed_lens_count() {
        let points = [0.0, 0.4, 1.1, 2.0, 2.2, 3.7];
        let sample = line_sample(&points);
        for q in [0.0, 0.9, 1.5, 2.2] {
            let closed = adjusted_depth(&q, &sample, adjustment::indicator).unwrap();
            for scale in [0.1, 1.0, 10.0] {
                let smooth = adjusted_depth(&q, &sample, adjustment::linear(scale)).unwrap();
                assert!(smooth.value >= closed.value);
            }
        }
    }

    #[test]
    fn subsampled_full_budget_is_exact() {
        let sample = line_sample(&[0.0, 1.0, 2.0]);
        let value = subsampled_depth(&1.0, &sample, 3, 9).unwrap();
        assert_eq!(value.value, 1.0 / 3.0);
        assert_eq!(value.pair_count, 3);
        let larger = subsampled_depth(&1.0, &sample, 1000, 9).unwrap();
        assert_eq!(larger, value);
    }

    #[test]
    fn subsampled_is_deterministic_per_seed() {
        let points: Vec<f64> = (0..40).map(|i| (i as f64 * 0.77).sin() * 3.0).collect();
        let sample = line_sample(&points);
        let a = subsampled_depth(&0.2, &sample, 100, 5).unwrap();
        let b = subsampled_depth(&0.2, &sample, 100, 5).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.pair_count, 100);
    }

    #[test]
    fn subsampled_zero_budget_is_rejected() {
        let sample = line_sample(&[0.0, 1.0, 2.0]);
        assert!(matches!(
            subsampled_depth(&1.0, &sample, 0, 0),
            Err(Error::InvalidBudget)
        ));
    }

    #[test]
    fn decode_pair_round_trips() {
        for n in [2usize, 3, 5, 17, 64] {
            let mut t = 0u64;
            for i in 0..n {
                for j in (i + 1)..n {
                    assert_eq!(decode_pair(t, n), (i, j));
                    t += 1;
                }
            }
            assert_eq!(t, pair_count(n));
        }
    }

    #[test]
    fn pair_index_sampling_is_uniform_without_replacement() {
        let picks = sample_pair_indices(10, 7, 3);
        assert_eq!(picks.len(), 7);
        assert!(picks.windows(2).all(|w| w[0] < w[1]));
        assert!(picks.iter().all(|&t| t < 10));
    }

    #[test]
    fn profile_matches_single_queries() {
        let sample = line_sample(&[0.0, 1.0, 2.0]);
        let queries = [0.0, 1.0, 2.0];
        let profile = depth_profile(&queries, &sample, DepthEngine::Exact).unwrap();
        let values: Vec<f64> = profile.iter().map(|d| d.value).collect();
        assert_eq!(values, vec![0.0, 1.0 / 3.0, 0.0]);

        let engine = DepthEngine::Subsampled { budget: 2, seed: 4 };
        let sub = depth_profile(&queries, &sample, engine).unwrap();
        for (q, got) in queries.iter().zip(&sub) {
            assert_eq!(*got, subsampled_depth(q, &sample, 2, 4).unwrap());
        }
    }

    #[test]
    fn profile_on_empty_sample_reports_insufficient() {
        let sample = line_sample(&[]);
        assert!(matches!(
            depth_profile(&[1.0], &sample, DepthEngine::Exact),
            Err(Error::InsufficientSample { n: 0 })
        ));
        assert!(matches!(
            depth_profile::<f64, Minkowski>(&[], &line_sample(&[0.0, 1.0]), DepthEngine::Exact),
            Err(Error::EmptyQueries)
        ));
    }

    #[test]
    fn profile_reports_offending_query_index() {
        let metric = FnMetric(|a: &f64, b: &f64| {
            if *b < 0.0 {
                f64::NAN
            } else {
                (a - b).abs()
            }
        });
        let sample = Sample::new(vec![0.0, 1.0, 2.0], metric);
        let err = depth_profile(&[1.0, -1.0], &sample, DepthEngine::Exact).unwrap_err();
        match err {
            Error::Query { index, source } => {
                assert_eq!(index, 1);
                assert!(matches!(*source, Error::InvalidDistance { .. }));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn callback_and_matrix_paths_agree() {
        use crate::metrics::DistanceMatrix;

        let points = [0.3, 1.1, 2.9, 4.0, 5.6];
        let query = 2.0;
        let callback = line_sample(&points);
        let via_callback = empirical_depth(&query, &callback).unwrap();

        // Materialize the distances of sample plus query; the query is the
        // last index.
        let mut all: Vec<f64> = points.to_vec();
        all.push(query);
        let rows: Vec<Vec<f64>> = all
            .iter()
            .map(|a| all.iter().map(|b| (a - b).abs()).collect())
            .collect();
        let labels: Vec<String> = (0..all.len()).map(|i| i.to_string()).collect();
        let matrix = DistanceMatrix::new(labels, rows).unwrap();
        let indices: Vec<usize> = (0..points.len()).collect();
        let via_matrix =
            empirical_depth(&points.len(), &Sample::new(indices, &matrix)).unwrap();

        assert_eq!(via_callback, via_matrix);
    }

    #[test]
    fn vanishing_at_infinity_is_exact() {
        let sample = line_sample(&[0.0, 1.0, 2.0]);
        // min distance to the sample (98) exceeds the diameter (2).
        assert_eq!(empirical_depth(&100.0, &sample).unwrap().value, 0.0);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_points() -> impl Strategy<Value = Vec<f64>> {
            proptest::collection::vec(-50.0..50.0f64, 3..20)
        }

        proptest! {
            #[test]
            fn depth_stays_in_unit_interval(points in arb_points(), query in -60.0..60.0f64) {
                let sample = line_sample(&points);
                let depth = empirical_depth(&query, &sample).unwrap();
                prop_assert!((0.0..=1.0).contains(&depth.value));
                prop_assert_eq!(depth.value, depth.hit_count / depth.pair_count as f64);
            }

            #[test]
            fn monotone_transforms_preserve_depth(points in arb_points(), query in -60.0..60.0f64) {
                // Only distance comparisons enter the count, so any strictly
                // increasing zero-preserving transform leaves it unchanged.
                let plain = empirical_depth(&query, &line_sample(&points)).unwrap();
                for transform in [
                    |d: f64| d * d,
                    |d: f64| d.sqrt(),
                    |d: f64| (1.0 + d).ln(),
                ] {
                    let metric = FnMetric(move |a: &f64, b: &f64| transform((a - b).abs()));
                    let sample = Sample::new(points.clone(), metric);
                    let transformed = empirical_depth(&query, &sample).unwrap();
                    prop_assert_eq!(plain.value, transformed.value);
                    prop_assert_eq!(plain.hit_count, transformed.hit_count);
                }
            }
        }
    }
}
