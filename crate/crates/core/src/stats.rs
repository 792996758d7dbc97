//! Statistics shared by every representation: category counts, histogram
//! bins, boxplot summaries, least-squares fits and axis ticks.

use serde::Serialize;
use thiserror::Error;

use crate::data::{DataError, Dataset};
use crate::format;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error(transparent)]
    Data(#[from] DataError),
    #[error("column '{0}' is numeric; use a histogram for numeric data")]
    NumericBar(String),
    #[error("column '{0}' has no non-missing values")]
    AllMissing(String),
    #[error("bin count must be at least 1")]
    ZeroBins,
    #[error("linear fit needs at least 2 complete pairs, got {0}")]
    TooFewPairs(usize),
    #[error("linear fit is degenerate: x is constant")]
    ConstantX,
    #[error("x and y have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum SortOrder {
    #[default]
    Appearance,
    Alphabetical,
}

/// Distinct non-missing levels of a categorical column.
pub fn levels(values: &[Option<String>], order: SortOrder) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for v in values.iter().flatten() {
        if !out.contains(v) {
            out.push(v.clone());
        }
    }
    if order == SortOrder::Alphabetical {
        out.sort();
    }
    out
}

/// Counts of each category, excluding missing rows.
pub fn bar_counts(
    data: &Dataset,
    x: &str,
    order: SortOrder,
) -> Result<Vec<(String, usize)>, StatsError> {
    let col = data.column(x)?;
    let values = col
        .as_categorical()
        .ok_or_else(|| StatsError::NumericBar(x.to_string()))?;
    Ok(levels(values, order)
        .into_iter()
        .map(|level| {
            let n = values
                .iter()
                .filter(|v| v.as_deref() == Some(level.as_str()))
                .count();
            (level, n)
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

/// Sturges' rule: `ceil(log2 n) + 1`.
pub fn sturges_bins(n: usize) -> usize {
    if n <= 1 {
        return 1;
    }
    (n as f64).log2().ceil() as usize + 1
}

/// Equal-width histogram over `[min, max]` of the finite values.
///
/// Bins are right-closed, except the first which also includes its left
/// edge. A constant input yields the single bin `[v - 0.5, v + 0.5]`.
pub fn histogram_values(values: &[f64], bins: Option<usize>) -> Result<Vec<Bin>, StatsError> {
    if values.is_empty() {
        return Err(StatsError::AllMissing(String::new()));
    }
    let k = match bins {
        Some(0) => return Err(StatsError::ZeroBins),
        Some(k) => k,
        None => sturges_bins(values.len()),
    };
    let (min, max) = min_max(values);
    if min == max {
        return Ok(vec![Bin {
            lo: min - 0.5,
            hi: min + 0.5,
            count: values.len(),
        }]);
    }
    let width = max - min;
    let mut edges: Vec<f64> = (0..=k).map(|i| min + width * i as f64 / k as f64).collect();
    edges[k] = max;
    let interior = &edges[1..k];
    let mut counts = vec![0usize; k];
    for &v in values {
        counts[interior.partition_point(|&e| e < v)] += 1;
    }
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(i, count)| Bin {
            lo: edges[i],
            hi: edges[i + 1],
            count,
        })
        .collect())
}

pub fn histogram(data: &Dataset, x: &str, bins: Option<usize>) -> Result<Vec<Bin>, StatsError> {
    let values: Vec<f64> = data.numeric(x)?.iter().flatten().copied().collect();
    if values.is_empty() {
        return Err(StatsError::AllMissing(x.to_string()));
    }
    histogram_values(&values, bins)
}

fn min_max(values: &[f64]) -> (f64, f64) {
    values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        })
}

/// Sample quantile by linear interpolation between order statistics
/// (Hyndman-Fan type 7). `sorted` must be ascending and non-empty.
pub fn quantile_type7(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let frac = h - lo as f64;
    match sorted.get(lo + 1) {
        Some(&next) if frac > 0.0 => sorted[lo] + frac * (next - sorted[lo]),
        _ => sorted[lo],
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxStats {
    pub group_label: String,
    pub min_whisker: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max_whisker: f64,
    pub outliers: Vec<f64>,
    pub n: usize,
}

impl BoxStats {
    pub fn from_values(label: impl Into<String>, values: &[f64]) -> Option<BoxStats> {
        if values.is_empty() {
            return None;
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let q1 = quantile_type7(&sorted, 0.25);
        let median = quantile_type7(&sorted, 0.5);
        let q3 = quantile_type7(&sorted, 0.75);
        let iqr = q3 - q1;
        let (lo_fence, hi_fence) = (q1 - 1.5 * iqr, q3 + 1.5 * iqr);
        let inside = || {
            sorted
                .iter()
                .copied()
                .filter(|&v| v >= lo_fence && v <= hi_fence)
        };
        // The hinges lie inside the fences, so at least one point does too.
        let min_whisker = inside().next().unwrap_or(q1);
        let max_whisker = inside().next_back().unwrap_or(q3);
        let outliers = sorted
            .iter()
            .copied()
            .filter(|&v| v < lo_fence || v > hi_fence)
            .collect();
        Some(BoxStats {
            group_label: label.into(),
            min_whisker,
            q1,
            median,
            q3,
            max_whisker,
            outliers,
            n: sorted.len(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BoxStatsReport {
    pub boxes: Vec<BoxStats>,
    /// Group levels dropped because they had no non-missing values.
    pub omitted_levels: Vec<String>,
}

/// Five-number summaries of `y`, per level of `group` when given.
pub fn box_stats(
    data: &Dataset,
    y: &str,
    group: Option<&str>,
    order: SortOrder,
) -> Result<BoxStatsReport, StatsError> {
    let ys = data.numeric(y)?;
    let Some(group) = group else {
        let values: Vec<f64> = ys.iter().flatten().copied().collect();
        return match BoxStats::from_values(y, &values) {
            Some(b) => Ok(BoxStatsReport {
                boxes: vec![b],
                omitted_levels: vec![],
            }),
            None => Err(StatsError::AllMissing(y.to_string())),
        };
    };
    let gs = data.categorical(group)?;
    let mut report = BoxStatsReport::default();
    for level in levels(gs, order) {
        let values: Vec<f64> = gs
            .iter()
            .zip(ys)
            .filter(|(g, _)| g.as_deref() == Some(level.as_str()))
            .filter_map(|(_, v)| *v)
            .collect();
        match BoxStats::from_values(level.clone(), &values) {
            Some(b) => report.boxes.push(b),
            None => report.omitted_levels.push(level),
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub n: usize,
}

impl LinearFit {
    pub fn predict(&self, x: f64) -> f64 {
        self.intercept + self.slope * x
    }
}

/// Keeps only rows where both values are present.
pub fn complete_pairs(x: &[Option<f64>], y: &[Option<f64>]) -> (Vec<f64>, Vec<f64>) {
    x.iter()
        .zip(y)
        .filter_map(|(a, b)| Some(((*a)?, (*b)?)))
        .unzip()
}

/// Closed-form ordinary least squares.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LinearFit, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch(x.len(), y.len()));
    }
    let n = x.len();
    if n < 2 {
        return Err(StatsError::TooFewPairs(n));
    }
    let nf = n as f64;
    let mean_x = x.iter().sum::<f64>() / nf;
    let mean_y = y.iter().sum::<f64>() / nf;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        let dx = a - mean_x;
        sxx += dx * dx;
        sxy += dx * (b - mean_y);
    }
    if sxx == 0.0 {
        return Err(StatsError::ConstantX);
    }
    let slope = sxy / sxx;
    Ok(LinearFit {
        slope,
        intercept: mean_y - slope * mean_x,
        n,
    })
}

/// Tick positions with their display labels.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TickSet {
    pub positions: Vec<f64>,
    pub labels: Vec<String>,
    /// Spacing between ticks, `mantissa × 10^exponent`.
    pub mantissa: u32,
    pub exponent: i32,
}

impl TickSet {
    pub fn step(&self) -> f64 {
        scaled(self.mantissa as i64, self.exponent)
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Keeps every k-th tick so that at most `max` remain.
    pub fn thinned(&self, max: usize) -> TickSet {
        let max = max.max(1);
        if self.len() <= max {
            return self.clone();
        }
        let stride = self.len().div_ceil(max);
        let keep = |i: &usize| i.is_multiple_of(stride);
        TickSet {
            positions: (0..self.len())
                .filter(keep)
                .map(|i| self.positions[i])
                .collect(),
            labels: (0..self.len())
                .filter(keep)
                .map(|i| self.labels[i].clone())
                .collect(),
            mantissa: self.mantissa,
            exponent: self.exponent,
        }
    }
}

// `units × 10^exp`, computed so decimal steps like 0.2 · 3 come out as 0.6.
fn scaled(units: i64, exp: i32) -> f64 {
    if exp >= 0 {
        units as f64 * 10f64.powi(exp)
    } else {
        units as f64 / 10f64.powi(-exp)
    }
}

const TARGET_TICKS: i64 = 5;

/// Round tick positions covering `[lo, hi]`.
///
/// Candidate steps are `{1, 2, 5} × 10^k`; the step whose count of multiples
/// inside the range is closest to five wins, ties going to the larger step.
pub fn nice_ticks(lo: f64, hi: f64) -> TickSet {
    assert!(
        lo < hi && lo.is_finite() && hi.is_finite(),
        "nice_ticks needs lo < hi"
    );
    let span = hi - lo;
    let base = span.log10().floor() as i32;
    let eps = 1e-9;

    let mut best: Option<(i64, f64, u32, i32, i64, i64)> = None;
    for exp in (base - 2)..=(base + 1) {
        for mantissa in [1u32, 2, 5] {
            let step = scaled(mantissa as i64, exp);
            let first = (lo / step - eps).ceil() as i64;
            let last = (hi / step + eps).floor() as i64;
            let count = (last - first + 1).max(0);
            let dist = (count - TARGET_TICKS).abs();
            let better = match best {
                None => true,
                Some((bd, bs, ..)) => dist < bd || (dist == bd && step > bs),
            };
            if better {
                best = Some((dist, step, mantissa, exp, first, last));
            }
        }
    }
    let (_, _, mantissa, exponent, first, last) = best.expect("candidate steps");
    let positions: Vec<f64> = (first..=last)
        .map(|i| scaled(i * mantissa as i64, exponent))
        .collect();
    let labels = positions.iter().map(|&p| format::number(p)).collect();
    TickSet {
        positions,
        labels,
        mantissa,
        exponent,
    }
}
