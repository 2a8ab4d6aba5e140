//! Depth-based workflows: ranking, outlier flagging, DD-plot data and
//! depth-vs-depth classification.

use crate::depth::{depth_profile, DepthEngine, DepthValue, Metric, Sample};
use crate::{Error, Result};

/// Per-item depth values with a descending ordering and tie groups.
#[derive(Debug, Clone)]
pub struct DepthReport {
    items: Vec<(String, DepthValue)>,
    ordering: Vec<usize>,
    ties: Vec<Vec<usize>>,
}

impl DepthReport {
    /// Build a report from `(label, depth)` pairs in input order. Sorting is
    /// stable: within a tie group the input order is preserved.
    pub fn new(items: Vec<(String, DepthValue)>) -> Self {
        let mut ordering: Vec<usize> = (0..items.len()).collect();
        ordering.sort_by(|&a, &b| {
            items[b]
                .1
                .value
                .partial_cmp(&items[a].1.value)
                .expect("depth values are finite")
        });
        let mut ties = Vec::new();
        let mut start = 0;
        while start < ordering.len() {
            let mut end = start + 1;
            while end < ordering.len()
                && items[ordering[end]].1.value == items[ordering[start]].1.value
            {
                end += 1;
            }
            if end - start > 1 {
                ties.push(ordering[start..end].to_vec());
            }
            start = end;
        }
        DepthReport {
            items,
            ordering,
            ties,
        }
    }

    /// Items in input order.
    pub fn items(&self) -> &[(String, DepthValue)] {
        &self.items
    }

    /// Permutation of item indices sorted by decreasing depth.
    pub fn ordering(&self) -> &[usize] {
        &self.ordering
    }

    /// Groups of two or more items with exactly equal depth, in rank order.
    pub fn ties(&self) -> &[Vec<usize>] {
        &self.ties
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// `(rank, label, depth)` triples in decreasing depth order; ranks are
    /// 1-based ordinal positions.
    pub fn ranked(&self) -> impl Iterator<Item = (usize, &str, DepthValue)> {
        self.ordering
            .iter()
            .enumerate()
            .map(|(pos, &idx)| (pos + 1, self.items[idx].0.as_str(), self.items[idx].1))
    }
}

/// Depth of every sample point with respect to the full sample (pairs
/// containing the query stay in the denominator), sorted descending.
pub fn rank_by_depth<P, M>(labels: &[String], sample: &Sample<P, M>) -> Result<DepthReport>
where
    P: Sync,
    M: Metric<P>,
{
    rank_by_depth_with(labels, sample, DepthEngine::Exact)
}

/// As [`rank_by_depth`] with an explicit engine choice.
pub fn rank_by_depth_with<P, M>(
    labels: &[String],
    sample: &Sample<P, M>,
    engine: DepthEngine,
) -> Result<DepthReport>
where
    P: Sync,
    M: Metric<P>,
{
    if labels.len() != sample.len() {
        return Err(Error::Config {
            reason: format!(
                "{} labels supplied for a sample of {} points",
                labels.len(),
                sample.len()
            ),
        });
    }
    let depths = depth_profile(sample.points(), sample, engine)?;
    Ok(DepthReport::new(
        labels.iter().cloned().zip(depths).collect(),
    ))
}

/// The `k` least-deep labels plus any labels beyond `k` tied with the last
/// selected depth.
#[derive(Debug, Clone, PartialEq)]
pub struct OutlierFlags {
    pub labels: Vec<String>,
    /// Labels sharing the k-th smallest depth that did not fit in `labels`.
    pub tie_spill: Vec<String>,
}

/// Bottom-`k` selection by depth; ties are broken by input order and any
/// spill past `k` is reported rather than silently dropped.
pub fn flag_outliers(report: &DepthReport, k: usize) -> Result<OutlierFlags> {
    let n = report.len();
    if k < 1 || k > n {
        return Err(Error::KOutOfRange { k, n });
    }
    let items = report.items();
    let mut ascending: Vec<usize> = (0..n).collect();
    ascending.sort_by(|&a, &b| {
        items[a]
            .1
            .value
            .partial_cmp(&items[b].1.value)
            .expect("depth values are finite")
    });
    let threshold = items[ascending[k - 1]].1.value;
    let labels = ascending[..k]
        .iter()
        .map(|&i| items[i].0.clone())
        .collect();
    let tie_spill = ascending[k..]
        .iter()
        .take_while(|&&i| items[i].1.value == threshold)
        .map(|&i| items[i].0.clone())
        .collect();
    Ok(OutlierFlags { labels, tie_spill })
}

/// One query's depths with respect to two samples.
#[derive(Debug, Clone, PartialEq)]
pub struct DdPoint {
    pub label: String,
    pub depth_a: DepthValue,
    pub depth_b: DepthValue,
}

/// Depth of each query in both samples, for depth-vs-depth scatter plots.
pub fn dd_plot<P, MA, MB>(
    labels: &[String],
    queries: &[P],
    sample_a: &Sample<P, MA>,
    sample_b: &Sample<P, MB>,
) -> Result<Vec<DdPoint>>
where
    P: Sync,
    MA: Metric<P>,
    MB: Metric<P>,
{
    if labels.len() != queries.len() {
        return Err(Error::Config {
            reason: format!(
                "{} labels supplied for {} queries",
                labels.len(),
                queries.len()
            ),
        });
    }
    let depths_a = depth_profile(queries, sample_a, DepthEngine::Exact)?;
    let depths_b = depth_profile(queries, sample_b, DepthEngine::Exact)?;
    Ok(labels
        .iter()
        .zip(depths_a)
        .zip(depths_b)
        .map(|((label, depth_a), depth_b)| DdPoint {
            label: label.clone(),
            depth_a,
            depth_b,
        })
        .collect())
}

/// Outcome of a maximum-depth classification.
#[derive(Debug, Clone, PartialEq)]
pub enum Decision {
    /// A unique class attains the maximal depth.
    Assigned(String),
    /// Several classes tie at the maximal depth; all argmax labels, in class
    /// order. The caller decides how to break the tie.
    Tie(Vec<String>),
    /// Every class assigns depth zero: the query is outlying everywhere.
    AllOutlying,
}

/// A classification decision together with the per-class depths, in class
/// order.
#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub depths: Vec<DepthValue>,
    pub decision: Decision,
}

/// Assign `query` to the class of maximal depth. Ties and all-zero depths
/// are explicit outcomes, never a silent pick. Permuting the class list
/// permutes labels in the outcome but never changes which sample wins.
pub fn dd_classify<P, M>(query: &P, classes: &[(String, Sample<P, M>)]) -> Result<Classification>
where
    M: Metric<P>,
{
    if classes.len() < 2 {
        return Err(Error::Config {
            reason: format!("classification needs at least 2 classes, got {}", classes.len()),
        });
    }
    let depths: Vec<DepthValue> = classes
        .iter()
        .map(|(_, sample)| crate::depth::empirical_depth(query, sample))
        .collect::<Result<_>>()?;
    let max = depths
        .iter()
        .map(|d| d.value)
        .fold(f64::NEG_INFINITY, f64::max);
    let decision = if max == 0.0 {
        Decision::AllOutlying
    } else {
        let argmax: Vec<String> = classes
            .iter()
            .zip(&depths)
            .filter(|(_, d)| d.value == max)
            .map(|((label, _), _)| label.clone())
            .collect();
        if argmax.len() == 1 {
            Decision::Assigned(argmax.into_iter().next().unwrap())
        } else {
            Decision::Tie(argmax)
        }
    };
    Ok(Classification { depths, decision })
}
