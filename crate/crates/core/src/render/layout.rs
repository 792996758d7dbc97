use crate::chart::{ChartSpec, ChartType};
use crate::color::Rgb;
use crate::data::Dataset;
use crate::stats::{self, levels, nice_ticks, TickSet};
use crate::verbalize::{AxisSummary, ChartSummary, GroupSummary, MarkSummary};

use super::{
    Axis, Dash, Legend, LegendEntry, Mark, Panel, Rect, RenderError, Scene, ShapeKind, Tick,
};

pub const CANVAS_WIDTH: f64 = 640.0;
pub const CANVAS_HEIGHT: f64 = 480.0;
pub const MARGIN: f64 = 48.0;
pub const LEGEND_WIDTH: f64 = 120.0;

const PAD: f64 = 0.05;
const PANEL_GAP: f64 = 16.0;
const POINT_RADIUS: f64 = 4.0;
const BAND_FILL: f64 = 0.7;
const INK: Rgb = Rgb::BLACK;

/// Linear map from a data domain onto a pixel range.
#[derive(Debug, Clone, Copy)]
struct Scale {
    d0: f64,
    d1: f64,
    r0: f64,
    r1: f64,
}

impl Scale {
    fn map(&self, v: f64) -> f64 {
        self.r0 + (v - self.d0) / (self.d1 - self.d0) * (self.r1 - self.r0)
    }
}

/// Domain and ticks for a continuous axis.
struct Continuous {
    lo: f64,
    hi: f64,
    ticks: TickSet,
}

impl Continuous {
    /// Data range padded 5% on both sides.
    fn padded(lo: f64, hi: f64) -> Continuous {
        let (lo, hi) = if lo == hi {
            (lo - 0.5, hi + 0.5)
        } else {
            (lo, hi)
        };
        let span = hi - lo;
        Continuous {
            lo: lo - PAD * span,
            hi: hi + PAD * span,
            ticks: nice_ticks(lo, hi),
        }
    }

    /// Count axis anchored at zero, padded only at the top.
    fn counts(max: f64) -> Continuous {
        let max = if max <= 0.0 { 1.0 } else { max };
        Continuous {
            lo: 0.0,
            hi: max * (1.0 + PAD),
            ticks: nice_ticks(0.0, max),
        }
    }

    fn scale(&self, r0: f64, r1: f64) -> Scale {
        Scale {
            d0: self.lo,
            d1: self.hi,
            r0,
            r1,
        }
    }

    fn axis(&self, title: &str, scale: Scale) -> Axis {
        Axis {
            title: title.to_string(),
            ticks: self
                .ticks
                .positions
                .iter()
                .zip(&self.ticks.labels)
                .map(|(&v, l)| Tick {
                    value: Some(v),
                    pos: scale.map(v),
                    label: l.clone(),
                })
                .collect(),
        }
    }
}

fn band_axis(title: &str, labels: &[String], r0: f64, r1: f64) -> (Axis, f64) {
    let band = (r1 - r0) / labels.len().max(1) as f64;
    let ticks = labels
        .iter()
        .enumerate()
        .map(|(i, l)| Tick {
            value: None,
            pos: r0 + band * (i as f64 + 0.5),
            label: l.clone(),
        })
        .collect();
    (
        Axis {
            title: title.to_string(),
            ticks,
        },
        band,
    )
}

fn min_max(values: impl IntoIterator<Item = f64>) -> (f64, f64) {
    values
        .into_iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        })
}

fn tick_labels(axis: &Axis) -> Vec<String> {
    axis.ticks.iter().map(|t| t.label.clone()).collect()
}

struct Frame {
    plot: Rect,
}

fn frame(legend: bool) -> Frame {
    let right = CANVAS_WIDTH - MARGIN - if legend { LEGEND_WIDTH } else { 0.0 };
    Frame {
        plot: Rect {
            x: MARGIN,
            y: MARGIN,
            w: right - MARGIN,
            h: CANVAS_HEIGHT - 2.0 * MARGIN,
        },
    }
}

/// Lays out a chart: scales, marks, axes and legend.
pub fn layout(spec: &ChartSpec, data: &Dataset) -> Result<Scene, RenderError> {
    // A column with no values at all has no kind, so report it as empty
    // rather than as a type mismatch.
    let roles = [Some(&spec.x), spec.y.as_ref(), spec.group.as_ref()];
    for name in roles.into_iter().flatten() {
        if let Ok(col) = data.column(name) {
            if (0..col.len()).all(|r| col.is_missing(r)) {
                return Err(RenderError::Empty);
            }
        }
    }
    spec.bind(data)?;
    let (x_name, y_name) = spec.axis_names();
    let mut scene = match spec.chart_type {
        ChartType::Bar => layout_bar(spec, data, &x_name, &y_name)?,
        ChartType::Histogram => layout_histogram(spec, data, &x_name, &y_name)?,
        ChartType::Boxplot => layout_boxplot(spec, data, &x_name, &y_name)?,
        ChartType::Scatter | ChartType::Line => layout_points(spec, data, &x_name, &y_name)?,
    };
    scene.title = spec.title.clone();
    scene.subtitle = spec.subtitle.clone();
    scene.caption = spec.caption.clone();
    scene.summary.title = spec.title.clone();
    scene.summary.subtitle = spec.subtitle.clone();
    scene.summary.caption = spec.caption.clone();
    Ok(scene)
}

fn empty_scene(
    chart_type: ChartType,
    panels: Vec<Panel>,
    legend: Option<Legend>,
    marks: MarkSummary,
    dropped: usize,
) -> Scene {
    let x_axis = &panels[0].x_axis;
    let y_axis = &panels[0].y_axis;
    let summary = ChartSummary {
        chart_type,
        title: None,
        subtitle: None,
        caption: None,
        x_axis: AxisSummary {
            name: x_axis.title.clone(),
            labels: tick_labels(x_axis),
        },
        y_axis: AxisSummary {
            name: y_axis.title.clone(),
            labels: tick_labels(y_axis),
        },
        marks,
        dropped_rows: dropped,
    };
    Scene {
        width: CANVAS_WIDTH,
        height: CANVAS_HEIGHT,
        background: Rgb::WHITE,
        ink: INK,
        title: None,
        subtitle: None,
        caption: None,
        panels,
        legend,
        summary,
    }
}

fn category_fill(spec: &ChartSpec, i: usize) -> Rgb {
    let p = &spec.palette;
    if spec.encodings.color {
        p.colors()[i % p.len()]
    } else {
        p.colors()[0]
    }
}

fn layout_bar(
    spec: &ChartSpec,
    data: &Dataset,
    x_name: &str,
    y_name: &str,
) -> Result<Scene, RenderError> {
    let counts = stats::bar_counts(data, &spec.x, spec.sort_order)?;
    if counts.is_empty() {
        return Err(RenderError::Empty);
    }
    let dropped = data.n_rows() - counts.iter().map(|(_, n)| n).sum::<usize>();
    let plot = frame(false).plot;
    let labels: Vec<String> = counts.iter().map(|(l, _)| l.clone()).collect();
    let (x_axis, band) = band_axis(x_name, &labels, plot.x, plot.right());
    let max = counts.iter().map(|&(_, n)| n).max().unwrap_or(0) as f64;
    let yc = Continuous::counts(max);
    let ys = yc.scale(plot.bottom(), plot.y);
    let y_axis = yc.axis(y_name, ys);

    let marks = counts
        .iter()
        .zip(&x_axis.ticks)
        .enumerate()
        .map(|(i, ((_, n), tick))| {
            let top = ys.map(*n as f64);
            Mark::Rect {
                id: format!("p0-m{i}"),
                x: tick.pos - band * BAND_FILL / 2.0,
                y: top,
                w: band * BAND_FILL,
                h: ys.map(0.0) - top,
                fill: category_fill(spec, i),
                stroke: INK,
                group: i,
            }
        })
        .collect();
    let panel = Panel {
        label: None,
        plot,
        x_axis,
        y_axis,
        marks,
    };
    Ok(empty_scene(
        ChartType::Bar,
        vec![panel],
        None,
        MarkSummary::Bars(counts),
        dropped,
    ))
}

fn layout_histogram(
    spec: &ChartSpec,
    data: &Dataset,
    x_name: &str,
    y_name: &str,
) -> Result<Scene, RenderError> {
    let bins = stats::histogram(data, &spec.x, spec.bins)?;
    let n_used: usize = bins.iter().map(|b| b.count).sum();
    let plot = frame(false).plot;
    let xc = Continuous::padded(bins[0].lo, bins[bins.len() - 1].hi);
    let xs = xc.scale(plot.x, plot.right());
    let max = bins.iter().map(|b| b.count).max().unwrap_or(0) as f64;
    let yc = Continuous::counts(max);
    let ys = yc.scale(plot.bottom(), plot.y);
    let marks = bins
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let top = ys.map(b.count as f64);
            Mark::Rect {
                id: format!("p0-m{i}"),
                x: xs.map(b.lo),
                y: top,
                w: xs.map(b.hi) - xs.map(b.lo),
                h: ys.map(0.0) - top,
                fill: spec.palette.colors()[0],
                stroke: INK,
                group: 0,
            }
        })
        .collect();
    let panel = Panel {
        label: None,
        plot,
        x_axis: xc.axis(x_name, xs),
        y_axis: yc.axis(y_name, ys),
        marks,
    };
    Ok(empty_scene(
        ChartType::Histogram,
        vec![panel],
        None,
        MarkSummary::Bins(bins),
        data.n_rows() - n_used,
    ))
}

fn layout_boxplot(
    spec: &ChartSpec,
    data: &Dataset,
    x_name: &str,
    y_name: &str,
) -> Result<Scene, RenderError> {
    let (report, dropped) = match &spec.y {
        Some(y) => {
            let r = stats::box_stats(data, y, Some(&spec.x), spec.sort_order)?;
            let xs = data.categorical(&spec.x)?;
            let ys = data.numeric(y)?;
            let dropped = xs
                .iter()
                .zip(ys)
                .filter(|(g, v)| g.is_none() || v.is_none())
                .count();
            (r, dropped)
        }
        None => {
            let r = stats::box_stats(data, &spec.x, None, spec.sort_order)?;
            let dropped = data
                .numeric(&spec.x)?
                .iter()
                .filter(|v| v.is_none())
                .count();
            (r, dropped)
        }
    };
    if report.boxes.is_empty() {
        return Err(RenderError::Empty);
    }
    let plot = frame(false).plot;
    let labels: Vec<String> = report.boxes.iter().map(|b| b.group_label.clone()).collect();
    let (x_axis, band) = band_axis(x_name, &labels, plot.x, plot.right());
    let (lo, hi) = min_max(report.boxes.iter().flat_map(|b| {
        [b.min_whisker, b.max_whisker]
            .into_iter()
            .chain(b.outliers.iter().copied())
    }));
    let yc = Continuous::padded(lo, hi);
    let ys = yc.scale(plot.bottom(), plot.y);

    let mut marks = Vec::new();
    let mut next = 0usize;
    let mut id = || {
        let s = format!("p0-m{next}");
        next += 1;
        s
    };
    for (i, (b, tick)) in report.boxes.iter().zip(&x_axis.ticks).enumerate() {
        let cx = tick.pos;
        let half = band * BAND_FILL / 2.0;
        let cap = half / 2.0;
        let seg = |id: String, x1: f64, y1: f64, x2: f64, y2: f64, width: f64| Mark::Segment {
            id,
            x1,
            y1,
            x2,
            y2,
            color: INK,
            width,
            dash: Dash::Solid,
            group: i,
        };
        marks.push(seg(id(), cx, ys.map(b.q3), cx, ys.map(b.max_whisker), 1.5));
        marks.push(seg(id(), cx, ys.map(b.q1), cx, ys.map(b.min_whisker), 1.5));
        marks.push(seg(
            id(),
            cx - cap,
            ys.map(b.max_whisker),
            cx + cap,
            ys.map(b.max_whisker),
            1.5,
        ));
        marks.push(seg(
            id(),
            cx - cap,
            ys.map(b.min_whisker),
            cx + cap,
            ys.map(b.min_whisker),
            1.5,
        ));
        marks.push(Mark::Rect {
            id: id(),
            x: cx - half,
            y: ys.map(b.q3),
            w: 2.0 * half,
            h: ys.map(b.q1) - ys.map(b.q3),
            fill: category_fill(spec, i),
            stroke: INK,
            group: i,
        });
        marks.push(seg(
            id(),
            cx - half,
            ys.map(b.median),
            cx + half,
            ys.map(b.median),
            3.0,
        ));
        for &o in &b.outliers {
            marks.push(Mark::Point {
                id: id(),
                x: cx,
                y: ys.map(o),
                size: POINT_RADIUS * 0.75,
                shape: ShapeKind::Circle,
                color: INK,
                group: i,
            });
        }
    }
    let panel = Panel {
        label: None,
        plot,
        x_axis,
        y_axis: yc.axis(y_name, ys),
        marks,
    };
    Ok(empty_scene(
        ChartType::Boxplot,
        vec![panel],
        None,
        MarkSummary::Boxes(report.boxes),
        dropped,
    ))
}

struct Row {
    x: f64,
    y: f64,
    group: usize,
}

fn layout_points(
    spec: &ChartSpec,
    data: &Dataset,
    x_name: &str,
    y_name: &str,
) -> Result<Scene, RenderError> {
    let y_col = spec.y.as_deref().expect("validated at parse");
    let xs = data.numeric(&spec.x)?;
    let ys = data.numeric(y_col)?;
    let groups = match &spec.group {
        Some(g) => Some(data.categorical(g)?),
        None => None,
    };
    let group_levels = groups
        .map(|g| levels(g, spec.sort_order))
        .unwrap_or_default();
    if spec.encodings.color && group_levels.len() > spec.palette.len() {
        return Err(RenderError::PaletteTooSmall {
            levels: group_levels.len(),
            palette: spec.palette.len(),
        });
    }

    let mut rows = Vec::new();
    for i in 0..data.n_rows() {
        let (Some(x), Some(y)) = (xs[i], ys[i]) else {
            continue;
        };
        let group = match groups {
            None => 0,
            Some(g) => match &g[i] {
                Some(level) => group_levels.iter().position(|l| l == level).expect("level"),
                None => continue,
            },
        };
        rows.push(Row { x, y, group });
    }
    if rows.is_empty() {
        return Err(RenderError::Empty);
    }
    let dropped = data.n_rows() - rows.len();

    let (x_lo, x_hi) = min_max(rows.iter().map(|r| r.x));
    let (y_lo, y_hi) = min_max(rows.iter().map(|r| r.y));
    let xc = Continuous::padded(x_lo, x_hi);
    let yc = Continuous::padded(y_lo, y_hi);

    let color_of = |g: usize| {
        if spec.encodings.color {
            spec.palette.colors()[g]
        } else {
            INK
        }
    };
    let shape_of = |g: usize| {
        if spec.encodings.shape {
            ShapeKind::for_level(g)
        } else {
            ShapeKind::Circle
        }
    };
    let dash_of = |g: usize| {
        if spec.encodings.linetype {
            Dash::for_level(g)
        } else {
            Dash::Solid
        }
    };

    let has_legend = !group_levels.is_empty()
        && (spec.encodings.color || spec.encodings.shape || spec.encodings.linetype);
    let area = frame(has_legend).plot;
    let facets: Vec<Option<usize>> = if spec.encodings.facet && !group_levels.is_empty() {
        (0..group_levels.len()).map(Some).collect()
    } else {
        vec![None]
    };
    let k = facets.len() as f64;
    let panel_w = (area.w - PANEL_GAP * (k - 1.0)) / k;

    let mut panels = Vec::new();
    for (p, facet) in facets.iter().enumerate() {
        let plot = Rect {
            x: area.x + p as f64 * (panel_w + PANEL_GAP),
            y: area.y,
            w: panel_w,
            h: area.h,
        };
        let sx = xc.scale(plot.x, plot.right());
        let sy = yc.scale(plot.bottom(), plot.y);
        let in_panel = |r: &&Row| facet.is_none_or(|f| r.group == f);
        let mut marks = Vec::new();
        match spec.chart_type {
            ChartType::Scatter => {
                for (i, r) in rows.iter().filter(in_panel).enumerate() {
                    marks.push(Mark::Point {
                        id: format!("p{p}-m{i}"),
                        x: sx.map(r.x),
                        y: sy.map(r.y),
                        size: POINT_RADIUS,
                        shape: shape_of(r.group),
                        color: color_of(r.group),
                        group: r.group,
                    });
                }
            }
            _ => {
                let n_groups = group_levels.len().max(1);
                let mut i = 0;
                for g in 0..n_groups {
                    let mut pts: Vec<&Row> = rows
                        .iter()
                        .filter(in_panel)
                        .filter(|r| r.group == g)
                        .collect();
                    pts.sort_by(|a, b| a.x.total_cmp(&b.x));
                    for w in pts.windows(2) {
                        marks.push(Mark::Segment {
                            id: format!("p{p}-m{i}"),
                            x1: sx.map(w[0].x),
                            y1: sy.map(w[0].y),
                            x2: sx.map(w[1].x),
                            y2: sy.map(w[1].y),
                            color: color_of(g),
                            width: 2.0,
                            dash: dash_of(g),
                            group: g,
                        });
                        i += 1;
                    }
                }
            }
        }
        panels.push(Panel {
            label: facet.map(|f| group_levels[f].clone()),
            plot,
            x_axis: xc.axis(x_name, sx),
            y_axis: yc.axis(y_name, sy),
            marks,
        });
    }

    let legend = has_legend.then(|| Legend {
        title: spec.group.clone().unwrap_or_default(),
        entries: group_levels
            .iter()
            .enumerate()
            .map(|(g, l)| LegendEntry {
                label: l.clone(),
                color: color_of(g),
                shape: (spec.chart_type == ChartType::Scatter).then(|| shape_of(g)),
                dash: (spec.chart_type == ChartType::Line).then(|| dash_of(g)),
            })
            .collect(),
    });

    let (px, py): (Vec<f64>, Vec<f64>) = rows.iter().map(|r| (r.x, r.y)).unzip();
    let slope = stats::linear_fit(&px, &py).ok().map(|f| f.slope);
    let summary = MarkSummary::Points {
        n: rows.len(),
        x_range: (x_lo, x_hi),
        y_range: (y_lo, y_hi),
        groups: spec.group.as_ref().map(|g| GroupSummary {
            name: g.clone(),
            levels: group_levels.clone(),
        }),
        slope,
    };
    Ok(empty_scene(
        spec.chart_type,
        panels,
        legend,
        summary,
        dropped,
    ))
}
