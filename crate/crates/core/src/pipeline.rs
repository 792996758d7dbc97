//! Glue between a chart spec and the individual outputs.

use crate::chart::{ChartSpec, ChartType, ManualAlt};
use crate::data::Dataset;
use crate::render::Scene;
use crate::stats::{self, complete_pairs, LinearFit};
use crate::verbalize::{auto_alt, manual_alt, AltError, AltText};
use crate::Error;

/// The spec's hand-written alt text if it has one, otherwise text generated
/// from the laid-out scene.
pub fn alt_text(spec: &ChartSpec, scene: &Scene) -> Result<AltText, AltError> {
    match &spec.manual_alt {
        Some(ManualAlt::Text(t)) => Ok(AltText::from_prose(t)),
        Some(ManualAlt::Template(input)) => manual_alt(input),
        None => auto_alt(&scene.summary),
    }
}

/// The (x, y) series a chart sounds as.
///
/// Scatter and line charts use their complete rows and histograms their bin
/// midpoints and counts. Bar charts map bar position to x and count to y,
/// but only when `allow_bars` is set. Boxplots have no series.
pub fn sound_series(
    spec: &ChartSpec,
    data: &Dataset,
    allow_bars: bool,
) -> Result<(Vec<f64>, Vec<f64>), Error> {
    spec.bind(data)?;
    match spec.chart_type {
        ChartType::Scatter | ChartType::Line => {
            let y = spec.y.as_deref().expect("validated at parse");
            Ok(complete_pairs(data.numeric(&spec.x)?, data.numeric(y)?))
        }
        ChartType::Histogram => {
            let bins = stats::histogram(data, &spec.x, spec.bins)?;
            Ok(bins
                .iter()
                .map(|b| ((b.lo + b.hi) / 2.0, b.count as f64))
                .unzip())
        }
        ChartType::Bar if allow_bars => {
            let counts = stats::bar_counts(data, &spec.x, spec.sort_order)?;
            Ok(counts
                .iter()
                .enumerate()
                .map(|(i, (_, n))| ((i + 1) as f64, *n as f64))
                .unzip())
        }
        ChartType::Bar => Err(Error::Unsonifiable(
            "bar charts are not sonified by default; enable bar sonification to map bar order to pan and count to pitch"
                .into(),
        )),
        ChartType::Boxplot => Err(Error::Unsonifiable("boxplots have no x/y series to sonify".into())),
    }
}

/// Fitted values of an ordinary least-squares line at each distinct x, in
/// x order, together with the fit and the observed y range.
#[derive(Debug, Clone, PartialEq)]
pub struct FittedSeries {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub fit: LinearFit,
    pub observed: (f64, f64),
}

pub fn fitted_series(x: &[f64], y: &[f64]) -> Result<FittedSeries, Error> {
    let fit = stats::linear_fit(x, y)?;
    let mut xs = x.to_vec();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let ys = xs.iter().map(|&v| fit.predict(v)).collect();
    let observed = y
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    Ok(FittedSeries {
        x: xs,
        y: ys,
        fit,
        observed,
    })
}
