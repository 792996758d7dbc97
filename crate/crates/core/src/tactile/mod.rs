//! Emboss-ready tactile pages: thick strokes, hatched fills and braille
//! labels drawn as raised dots, in millimetres with the origin at the
//! top-left corner of the page.

mod braille;
mod pdf;
mod preview;

use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::render::{Dash, Mark, Rect, Scene, ShapeKind, Tick};
use crate::verbalize::AltText;

pub use braille::{decode, is_supported, to_braille, to_unicode_string, BrailleCell, BrailleError};
pub use pdf::{emit_pdf, MM_TO_PT};
pub use preview::emit_preview_svg;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TactileError {
    #[error("invalid tactile layout: {0}")]
    Layout(String),
    #[error("label {label:?}: {source}")]
    Braille {
        label: String,
        #[source]
        source: BrailleError,
    },
    #[error("label {label:?} needs {needed_mm:.1} mm but only {available_mm:.1} mm fit between the margins; abbreviate it")]
    LabelTooLong {
        label: String,
        needed_mm: f64,
        available_mm: f64,
    },
    #[error("scene has no panels")]
    NoPanels,
    #[error("labels leave no room for the chart on a {page_w:.1} x {page_h:.1} mm page")]
    NoRoom { page_w: f64, page_h: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Paper {
    Letter,
    A4,
    Braille11x11,
}

impl Paper {
    /// Width and height in mm.
    pub fn size(self) -> (f64, f64) {
        match self {
            Paper::Letter => (215.9, 279.4),
            Paper::A4 => (210.0, 297.0),
            Paper::Braille11x11 => (279.4, 279.4),
        }
    }
}

impl FromStr for Paper {
    type Err = TactileError;

    fn from_str(s: &str) -> Result<Paper, TactileError> {
        match s.to_ascii_lowercase().as_str() {
            "letter" => Ok(Paper::Letter),
            "a4" => Ok(Paper::A4),
            "braille11x11" => Ok(Paper::Braille11x11),
            other => Err(TactileError::Layout(format!(
                "unknown paper '{other}' (expected letter, a4 or braille11x11)"
            ))),
        }
    }
}

/// Page and braille metrics, all in mm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TactileLayout {
    pub page_w: f64,
    pub page_h: f64,
    pub margin: f64,
    pub dot_diameter: f64,
    pub intra_cell_dot_pitch: f64,
    pub cell_pitch: f64,
    pub line_pitch: f64,
    pub min_stroke: f64,
}

impl Default for TactileLayout {
    fn default() -> TactileLayout {
        TactileLayout::for_paper(Paper::Letter)
    }
}

impl TactileLayout {
    pub fn for_paper(paper: Paper) -> TactileLayout {
        let (page_w, page_h) = paper.size();
        TactileLayout {
            page_w,
            page_h,
            margin: 25.0,
            dot_diameter: 1.5,
            intra_cell_dot_pitch: 2.5,
            cell_pitch: 6.2,
            line_pitch: 10.0,
            min_stroke: 1.0,
        }
    }

    pub fn validate(&self) -> Result<(), TactileError> {
        let fields = [
            ("page_w", self.page_w),
            ("page_h", self.page_h),
            ("margin", self.margin),
            ("dot_diameter", self.dot_diameter),
            ("intra_cell_dot_pitch", self.intra_cell_dot_pitch),
            ("cell_pitch", self.cell_pitch),
            ("line_pitch", self.line_pitch),
            ("min_stroke", self.min_stroke),
        ];
        if let Some((name, v)) = fields.iter().find(|(_, v)| !(v.is_finite() && *v > 0.0)) {
            return Err(TactileError::Layout(format!(
                "{name} must be positive, got {v}"
            )));
        }
        if self.cell_pitch <= self.intra_cell_dot_pitch {
            return Err(TactileError::Layout(
                "cell_pitch must exceed intra_cell_dot_pitch".into(),
            ));
        }
        if self.dot_diameter >= self.intra_cell_dot_pitch {
            return Err(TactileError::Layout(
                "dots would touch: dot_diameter >= intra_cell_dot_pitch".into(),
            ));
        }
        if 2.0 * self.margin >= self.page_w.min(self.page_h) {
            return Err(TactileError::Layout(
                "margins leave no printable area".into(),
            ));
        }
        Ok(())
    }

    /// The printable area inside the margins.
    pub fn printable(&self) -> Rect {
        Rect {
            x: self.margin,
            y: self.margin,
            w: self.page_w - 2.0 * self.margin,
            h: self.page_h - 2.0 * self.margin,
        }
    }

    /// Width of a run of `cells` cells measured across the outer dot edges.
    pub fn label_width(&self, cells: usize) -> f64 {
        if cells == 0 {
            return 0.0;
        }
        (cells - 1) as f64 * self.cell_pitch + self.intra_cell_dot_pitch + self.dot_diameter
    }

    /// Height of one braille line across the outer dot edges.
    pub fn label_height(&self) -> f64 {
        2.0 * self.intra_cell_dot_pitch + self.dot_diameter
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stroke {
    pub points: Vec<(f64, f64)>,
    pub width: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Dot {
    pub x: f64,
    pub y: f64,
    pub diameter: f64,
    /// Index into the page's braille cells; `None` for hatch texture.
    pub cell: Option<usize>,
}

/// A placed braille label. `x`, `y` is the centre of dot 1 of the first
/// cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BrailleLabel {
    pub text: String,
    pub cells: Vec<BrailleCell>,
    pub x: f64,
    pub y: f64,
    /// Index of this label's first cell in the page-wide cell numbering.
    pub first_cell: usize,
}

impl BrailleLabel {
    pub fn unicode(&self) -> String {
        self.cells.iter().map(|c| c.to_unicode()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TactilePage {
    pub layout: TactileLayout,
    pub strokes: Vec<Stroke>,
    pub dots: Vec<Dot>,
    pub labels: Vec<BrailleLabel>,
    pub source_alt: AltText,
}

impl TactilePage {
    pub fn label(&self, text: &str) -> Option<&BrailleLabel> {
        self.labels.iter().find(|l| l.text == text)
    }

    /// Raised dots belonging to braille cells.
    pub fn braille_dots(&self) -> impl Iterator<Item = &Dot> {
        self.dots.iter().filter(|d| d.cell.is_some())
    }
}

/// Maximum ticks kept on any tactile axis.
pub const MAX_TICKS: usize = 5;
/// Length of tick marks outside the axis.
const TICK_LEN: f64 = 2.5;
/// Clear space kept between braille and any other ink.
const CLEARANCE: f64 = 2.5;
const HATCH_SPACING: f64 = 3.0;
const MIN_MARKER_RADIUS: f64 = 1.5;
const MIN_DASH: f64 = 2.0;
const SWATCH_W: f64 = 12.0;

/// Text for braille: underscores read as spaces and runs of blanks collapse.
fn braille_text(s: &str) -> String {
    s.replace('_', " ")
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
}

/// Keeps every k-th tick so at most `max` remain.
fn thin_ticks(ticks: &[Tick], max: usize) -> Vec<Tick> {
    if ticks.len() <= max {
        return ticks.to_vec();
    }
    let stride = ticks.len().div_ceil(max);
    ticks.iter().step_by(stride).cloned().collect()
}

/// Translated label not yet positioned.
#[derive(Debug, Clone)]
struct Prepared {
    text: String,
    cells: Vec<BrailleCell>,
    width: f64,
}

fn translate(raw: &str, layout: &TactileLayout) -> Result<Prepared, TactileError> {
    let text = braille_text(raw);
    let cells = to_braille(&text).map_err(|source| TactileError::Braille {
        label: raw.to_string(),
        source,
    })?;
    let width = layout.label_width(cells.len());
    Ok(Prepared { text, cells, width })
}

fn fit(p: Prepared, label: &str, max_w: f64) -> Result<Prepared, TactileError> {
    if p.width > max_w {
        return Err(TactileError::LabelTooLong {
            label: label.to_string(),
            needed_mm: p.width,
            available_mm: max_w,
        });
    }
    Ok(p)
}

/// A single-line label that must fit between the margins.
fn prepare(raw: &str, layout: &TactileLayout) -> Result<Prepared, TactileError> {
    fit(translate(raw, layout)?, raw, layout.printable().w)
}

/// Word-wraps `raw` into lines no wider than `max_w`. Only a single word
/// that does not fit is an error.
fn prepare_wrapped(
    raw: &str,
    max_w: f64,
    layout: &TactileLayout,
) -> Result<Vec<Prepared>, TactileError> {
    let mut lines = Vec::new();
    let mut current: Option<Prepared> = None;
    for word in braille_text(raw).split(' ').filter(|w| !w.is_empty()) {
        if let Some(cur) = &current {
            let joined = translate(&format!("{} {word}", cur.text), layout)?;
            if joined.width <= max_w {
                current = Some(joined);
                continue;
            }
            lines.extend(current.take());
        }
        current = Some(fit(translate(word, layout)?, word, max_w)?);
    }
    lines.extend(current);
    Ok(lines)
}

/// Horizontal extent `[lo, hi]` of a label whose outer edges span `width`
/// and which is centred on `cx`, shifted to stay inside `[min, max]`.
fn centred_span(cx: f64, width: f64, min: f64, max: f64) -> (f64, f64) {
    let lo = (cx - width / 2.0).max(min).min(max - width);
    (lo, lo + width)
}

/// Assigns each span the first row where it clears every span already in
/// that row by `gap`. Returns the row per span.
fn stack_rows(spans: &[(f64, f64)], gap: f64) -> Vec<usize> {
    let mut rows: Vec<Vec<(f64, f64)>> = Vec::new();
    let mut out = Vec::with_capacity(spans.len());
    for &(lo, hi) in spans {
        let r = rows
            .iter()
            .position(|row| row.iter().all(|&(a, b)| hi + gap <= a || lo >= b + gap))
            .unwrap_or(rows.len());
        if r == rows.len() {
            rows.push(Vec::new());
        }
        rows[r].push((lo, hi));
        out.push(r);
    }
    out
}

/// Maps scene pixels to page millimetres.
#[derive(Debug, Clone, Copy)]
struct PxToMm {
    scale: f64,
    px_x0: f64,
    px_y0: f64,
    mm_x0: f64,
    mm_y0: f64,
}

impl PxToMm {
    fn point(&self, x: f64, y: f64) -> (f64, f64) {
        (
            self.mm_x0 + (x - self.px_x0) * self.scale,
            self.mm_y0 + (y - self.px_y0) * self.scale,
        )
    }

    fn len(&self, v: f64) -> f64 {
        v * self.scale
    }
}

struct Builder<'a> {
    layout: &'a TactileLayout,
    strokes: Vec<Stroke>,
    dots: Vec<Dot>,
    labels: Vec<BrailleLabel>,
    cells: usize,
}

impl Builder<'_> {
    fn stroke(&mut self, points: Vec<(f64, f64)>, width: f64) {
        if points.len() >= 2 {
            self.strokes.push(Stroke {
                points,
                width: width.max(self.layout.min_stroke),
            });
        }
    }

    /// Places a label with dot 1 of its first cell at the top-left of the
    /// given outer-edge box origin.
    fn label(&mut self, p: &Prepared, left: f64, top: f64) {
        let l = self.layout;
        let r = l.dot_diameter / 2.0;
        let x = left + r;
        let y = top + r;
        for (i, cell) in p.cells.iter().enumerate() {
            for d in cell.dots() {
                let (col, row) = BrailleCell::dot_offset(d);
                self.dots.push(Dot {
                    x: x + i as f64 * l.cell_pitch + col as f64 * l.intra_cell_dot_pitch,
                    y: y + row as f64 * l.intra_cell_dot_pitch,
                    diameter: l.dot_diameter,
                    cell: Some(self.cells + i),
                });
            }
        }
        self.labels.push(BrailleLabel {
            text: p.text.clone(),
            cells: p.cells.clone(),
            x,
            y,
            first_cell: self.cells,
        });
        self.cells += p.cells.len();
    }

    fn dashed(&mut self, a: (f64, f64), b: (f64, f64), pattern_mm: &[f64], width: f64) {
        if pattern_mm.is_empty() {
            self.stroke(vec![a, b], width);
            return;
        }
        let len = ((b.0 - a.0).powi(2) + (b.1 - a.1).powi(2)).sqrt();
        if len == 0.0 {
            return;
        }
        let at = |t: f64| (a.0 + (b.0 - a.0) * t / len, a.1 + (b.1 - a.1) * t / len);
        let mut t = 0.0;
        let mut k = 0;
        while t < len {
            let seg = pattern_mm[k % pattern_mm.len()];
            let end = (t + seg).min(len);
            if k % 2 == 0 {
                self.stroke(vec![at(t), at(end)], width);
            }
            t = end;
            k += 1;
        }
    }

    fn outline_rect(&mut self, x0: f64, y0: f64, x1: f64, y1: f64, width: f64) {
        self.stroke(
            vec![(x0, y0), (x1, y0), (x1, y1), (x0, y1), (x0, y0)],
            width,
        );
    }

    /// Fills the rectangle's interior with the hatch for `group`.
    fn hatch(&mut self, x0: f64, y0: f64, x1: f64, y1: f64, group: usize) {
        let w = self.layout.min_stroke;
        let inset = w + 0.5;
        let (x0, y0, x1, y1) = (x0 + inset, y0 + inset, x1 - inset, y1 - inset);
        if x1 - x0 < w || y1 - y0 < w {
            return;
        }
        let sp = HATCH_SPACING * (1.0 + 0.5 * (group / 3) as f64);
        match group % 3 {
            0 => {
                let mut y = y0 + (y1 - y0) % sp / 2.0;
                while y <= y1 {
                    self.stroke(vec![(x0, y), (x1, y)], w);
                    y += sp;
                }
            }
            1 => {
                // Lines x + y = c, spaced `sp` apart perpendicular to them.
                let step = sp * std::f64::consts::SQRT_2;
                let mut c = x0 + y0 + step / 2.0;
                while c < x1 + y1 {
                    let lo = x0.max(c - y1);
                    let hi = x1.min(c - y0);
                    if hi - lo > w {
                        self.stroke(vec![(lo, c - lo), (hi, c - hi)], w);
                    }
                    c += step;
                }
            }
            _ => {
                let d = self.layout.dot_diameter;
                let r = d / 2.0;
                let mut y = y0 + r + ((y1 - y0 - d) % sp) / 2.0;
                while y + r <= y1 {
                    let mut x = x0 + r + ((x1 - x0 - d) % sp) / 2.0;
                    while x + r <= x1 {
                        self.dots.push(Dot {
                            x,
                            y,
                            diameter: d,
                            cell: None,
                        });
                        x += sp;
                    }
                    y += sp;
                }
            }
        }
    }

    fn marker(&mut self, shape: ShapeKind, cx: f64, cy: f64, r: f64) {
        let w = self.layout.min_stroke;
        for line in shape.outline(cx, cy, r) {
            self.stroke(line, w);
        }
    }
}

/// Label rows stacked below the x axis and label columns left of the y
/// axis.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Bands {
    x_rows: usize,
    y_cols: usize,
}

/// Converts a laid-out scene into a tactile page.
pub fn tactualize(
    scene: &Scene,
    alt: &AltText,
    layout: &TactileLayout,
) -> Result<TactilePage, TactileError> {
    layout.validate()?;
    if scene.panels.is_empty() {
        return Err(TactileError::NoPanels);
    }
    let area = layout.printable();
    let lh = layout.label_height();
    let gap = layout.cell_pitch - layout.intra_cell_dot_pitch - layout.dot_diameter;

    // Translate every label up front so errors surface before geometry.
    let x_ticks: Vec<Vec<(Tick, Prepared)>> = scene
        .panels
        .iter()
        .map(|p| {
            thin_ticks(&p.x_axis.ticks, MAX_TICKS)
                .into_iter()
                .map(|t| prepare(&t.label, layout).map(|pr| (t, pr)))
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let y_ticks: Vec<(Tick, Prepared)> = thin_ticks(&scene.panels[0].y_axis.ticks, MAX_TICKS)
        .into_iter()
        .map(|t| prepare(&t.label, layout).map(|pr| (t, pr)))
        .collect::<Result<_, _>>()?;
    let panel_labels: Vec<Option<Prepared>> = scene
        .panels
        .iter()
        .map(|p| p.label.as_deref().map(|l| prepare(l, layout)).transpose())
        .collect::<Result<_, _>>()?;

    let mut top_lines = Vec::new();
    for text in [&scene.title, &scene.subtitle].into_iter().flatten() {
        top_lines.extend(prepare_wrapped(text, area.w, layout)?);
    }
    top_lines.extend(prepare_wrapped(
        &scene.panels[0].y_axis.title,
        area.w,
        layout,
    )?);

    let mut bottom_lines = prepare_wrapped(&scene.panels[0].x_axis.title, area.w, layout)?;
    let mut legend_rows = Vec::new();
    if let Some(legend) = &scene.legend {
        bottom_lines.extend(prepare_wrapped(&legend.title, area.w, layout)?);
        for e in &legend.entries {
            let p = prepare(&e.label, layout)?;
            if p.width + SWATCH_W + layout.cell_pitch > area.w {
                return Err(TactileError::LabelTooLong {
                    label: e.label.clone(),
                    needed_mm: p.width + SWATCH_W + layout.cell_pitch,
                    available_mm: area.w,
                });
            }
            legend_rows.push((e, p));
        }
    }
    if let Some(c) = &scene.caption {
        bottom_lines.extend(prepare_wrapped(c, area.w, layout)?);
    }
    let has_panel_labels = panel_labels.iter().any(Option::is_some);

    // Pixel bounding box of the plot areas.
    let px_x0 = scene
        .panels
        .iter()
        .map(|p| p.plot.x)
        .fold(f64::INFINITY, f64::min);
    let px_y0 = scene
        .panels
        .iter()
        .map(|p| p.plot.y)
        .fold(f64::INFINITY, f64::min);
    let px_x1 = scene
        .panels
        .iter()
        .map(|p| p.plot.right())
        .fold(f64::NEG_INFINITY, f64::max);
    let px_y1 = scene
        .panels
        .iter()
        .map(|p| p.plot.bottom())
        .fold(f64::NEG_INFINITY, f64::max);
    let y_label_w = y_ticks.iter().map(|(_, p)| p.width).fold(0.0, f64::max);

    // Label stacking depends on the scale, which depends on the space the
    // labels reserve; iterate until the reservation is stable.
    let mut bands = Bands {
        x_rows: 1,
        y_cols: 1,
    };
    for _ in 0..8 {
        let plan = plan_geometry(
            layout,
            &bands,
            &top_lines,
            &bottom_lines,
            legend_rows.len(),
            has_panel_labels,
            y_label_w,
            (px_x0, px_y0, px_x1, px_y1),
        )?;
        let (x_rows, y_cols) = label_stacking(&plan, layout, &x_ticks, &y_ticks, gap);
        let next = Bands {
            x_rows: x_rows.max(bands.x_rows),
            y_cols: y_cols.max(bands.y_cols),
        };
        if next == bands {
            break;
        }
        bands = next;
    }
    let plan = plan_geometry(
        layout,
        &bands,
        &top_lines,
        &bottom_lines,
        legend_rows.len(),
        has_panel_labels,
        y_label_w,
        (px_x0, px_y0, px_x1, px_y1),
    )?;
    let map = plan.map;

    let mut b = Builder {
        layout,
        strokes: Vec::new(),
        dots: Vec::new(),
        labels: Vec::new(),
        cells: 0,
    };

    // Top text, last line nearest the chart.
    let mut y = area.y;
    for p in &top_lines {
        b.label(p, area.x, y);
        y += layout.line_pitch;
    }

    let w = layout.min_stroke;
    for (pi, panel) in scene.panels.iter().enumerate() {
        let (x0, y0) = map.point(panel.plot.x, panel.plot.y);
        let (x1, y1) = map.point(panel.plot.right(), panel.plot.bottom());
        b.stroke(vec![(x0, y1), (x1, y1)], w);
        b.stroke(vec![(x0, y0), (x0, y1)], w);

        for m in &panel.marks {
            emit_mark(&mut b, &map, m, layout);
        }

        if let Some(p) = &panel_labels[pi] {
            let (lo, _) = centred_span((x0 + x1) / 2.0, p.width, area.x, area.right());
            b.label(p, lo, plan.panel_label_top);
        }

        // X ticks and stacked labels.
        let ticks = &x_ticks[pi];
        let spans: Vec<(f64, f64)> = ticks
            .iter()
            .map(|(t, p)| centred_span(map.point(t.pos, 0.0).0, p.width, area.x, area.right()))
            .collect();
        let rows = stack_rows(&spans, gap);
        for (((t, p), span), row) in ticks.iter().zip(&spans).zip(&rows) {
            let tx = map.point(t.pos, 0.0).0;
            b.stroke(vec![(tx, y1), (tx, y1 + TICK_LEN)], w);
            let top = y1 + TICK_LEN + CLEARANCE + *row as f64 * layout.line_pitch;
            b.label(p, span.0, top);
        }
    }

    // Y ticks on the first panel, labels right-aligned against the axis.
    let first = &scene.panels[0];
    let ax = map.point(first.plot.x, 0.0).0;
    let y_spans: Vec<(f64, f64)> = y_ticks
        .iter()
        .map(|(t, _)| {
            let ty = map.point(0.0, t.pos).1;
            (ty - lh / 2.0, ty + lh / 2.0)
        })
        .collect();
    let cols = stack_rows(&y_spans, CLEARANCE);
    for (((t, p), span), col) in y_ticks.iter().zip(&y_spans).zip(&cols) {
        let ty = map.point(0.0, t.pos).1;
        b.stroke(vec![(ax - TICK_LEN, ty), (ax, ty)], w);
        let right = ax - TICK_LEN - CLEARANCE - *col as f64 * (y_label_w + layout.cell_pitch);
        b.label(p, right - p.width, span.0);
    }

    // Bottom text and legend.
    let mut y = plan.bottom_text_top;
    for p in &bottom_lines {
        b.label(p, area.x, y);
        y += layout.line_pitch;
    }
    for (e, p) in &legend_rows {
        let cy = y + lh / 2.0;
        let (sx0, sx1) = (area.x + w, area.x + SWATCH_W - w);
        match (e.shape, e.dash) {
            (_, Some(dash)) => {
                let pattern: Vec<f64> = dash
                    .pattern()
                    .iter()
                    .map(|v| (v / 4.0).max(MIN_DASH))
                    .collect();
                b.dashed((sx0, cy), (sx1, cy), &pattern, w);
            }
            (Some(shape), None) => b.marker(
                shape,
                (sx0 + sx1) / 2.0,
                cy,
                (lh / 2.0 - w).max(MIN_MARKER_RADIUS),
            ),
            (None, None) => {}
        }
        b.label(p, area.x + SWATCH_W + layout.cell_pitch, y);
        y += layout.line_pitch;
    }

    Ok(TactilePage {
        layout: *layout,
        strokes: b.strokes,
        dots: b.dots,
        labels: b.labels,
        source_alt: alt.clone(),
    })
}

/// Where the chart lands on the page.
struct Plan {
    map: PxToMm,
    panel_label_top: f64,
    bottom_text_top: f64,
}

#[allow(clippy::too_many_arguments)]
fn plan_geometry(
    layout: &TactileLayout,
    bands: &Bands,
    top_lines: &[Prepared],
    bottom_lines: &[Prepared],
    legend_rows: usize,
    has_panel_labels: bool,
    y_label_w: f64,
    px: (f64, f64, f64, f64),
) -> Result<Plan, TactileError> {
    let area = layout.printable();
    let lh = layout.label_height();
    let (px_x0, px_y0, px_x1, px_y1) = px;

    let top = area.y
        + top_lines.len() as f64 * layout.line_pitch
        + if has_panel_labels {
            layout.line_pitch
        } else {
            0.0
        }
        + CLEARANCE
        + lh / 2.0
        + layout.min_stroke;
    let left =
        area.x + bands.y_cols as f64 * (y_label_w + layout.cell_pitch) + TICK_LEN + CLEARANCE;
    let x_label_block = TICK_LEN + CLEARANCE + (bands.x_rows - 1) as f64 * layout.line_pitch + lh;
    let bottom_text = (bottom_lines.len() + legend_rows) as f64 * layout.line_pitch;
    let bottom = area.bottom() - bottom_text - x_label_block - CLEARANCE;
    let right = area.right() - layout.min_stroke;

    let (avail_w, avail_h) = (right - left, bottom - top);
    if avail_w <= 0.0 || avail_h <= 0.0 {
        return Err(TactileError::NoRoom {
            page_w: layout.page_w,
            page_h: layout.page_h,
        });
    }
    let scale = (avail_w / (px_x1 - px_x0)).min(avail_h / (px_y1 - px_y0));
    let map = PxToMm {
        scale,
        px_x0,
        px_y0,
        mm_x0: left,
        mm_y0: top,
    };
    let chart_bottom = top + (px_y1 - px_y0) * scale;
    Ok(Plan {
        map,
        panel_label_top: top - layout.min_stroke - CLEARANCE - lh,
        bottom_text_top: chart_bottom + x_label_block + CLEARANCE,
    })
}

/// Rows needed under the x axis and columns needed left of the y axis.
fn label_stacking(
    plan: &Plan,
    layout: &TactileLayout,
    x_ticks: &[Vec<(Tick, Prepared)>],
    y_ticks: &[(Tick, Prepared)],
    gap: f64,
) -> (usize, usize) {
    let area = layout.printable();
    let lh = layout.label_height();
    let x_rows = x_ticks
        .iter()
        .map(|ticks| {
            let spans: Vec<(f64, f64)> = ticks
                .iter()
                .map(|(t, p)| {
                    centred_span(plan.map.point(t.pos, 0.0).0, p.width, area.x, area.right())
                })
                .collect();
            stack_rows(&spans, gap)
                .into_iter()
                .max()
                .map_or(1, |r| r + 1)
        })
        .max()
        .unwrap_or(1);
    let y_spans: Vec<(f64, f64)> = y_ticks
        .iter()
        .map(|(t, _)| {
            let ty = plan.map.point(0.0, t.pos).1;
            (ty - lh / 2.0, ty + lh / 2.0)
        })
        .collect();
    let y_cols = stack_rows(&y_spans, CLEARANCE)
        .into_iter()
        .max()
        .map_or(1, |c| c + 1);
    (x_rows, y_cols)
}

fn emit_mark(b: &mut Builder, map: &PxToMm, m: &Mark, layout: &TactileLayout) {
    match m {
        Mark::Point {
            x, y, size, shape, ..
        } => {
            let (cx, cy) = map.point(*x, *y);
            b.marker(*shape, cx, cy, map.len(*size).max(MIN_MARKER_RADIUS));
        }
        Mark::Rect {
            x, y, w, h, group, ..
        } => {
            let (x0, y0) = map.point(*x, *y);
            let (x1, y1) = map.point(x + w, y + h);
            b.outline_rect(x0, y0, x1, y1, layout.min_stroke);
            b.hatch(x0, y0, x1, y1, *group);
        }
        Mark::Segment {
            x1,
            y1,
            x2,
            y2,
            width,
            dash,
            ..
        } => {
            let a = map.point(*x1, *y1);
            let c = map.point(*x2, *y2);
            let pattern: Vec<f64> = dash
                .pattern()
                .iter()
                .map(|v| map.len(*v).max(MIN_DASH))
                .collect();
            let width = map.len(*width).max(layout.min_stroke);
            if *dash == Dash::Solid {
                b.stroke(vec![a, c], width);
            } else {
                b.dashed(a, c, &pattern, width);
            }
        }
        // Layout never places free text inside a plot; anything that does
        // turn up is left to the alt text.
        Mark::Text { .. } => {}
    }
}

/// A geometric problem found by [`check_page`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Violation {
    StrokeOutsideMargin {
        stroke: usize,
    },
    DotOutsideMargin {
        dot: usize,
    },
    /// Dots of two different cells (or a cell and hatch texture) closer
    /// than the intra-cell pitch.
    DotsTooClose {
        a: usize,
        b: usize,
        distance: f64,
    },
    /// A braille dot touching a stroke.
    DotOnStroke {
        dot: usize,
        stroke: usize,
        distance: f64,
    },
}

fn segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    };
    ((p.0 - a.0 - t * dx).powi(2) + (p.1 - a.1 - t * dy).powi(2)).sqrt()
}

/// Brute-force check of the page geometry: ink inside the margins, braille
/// cells separated, and braille clear of strokes.
pub fn check_page(page: &TactilePage) -> Vec<Violation> {
    const EPS: f64 = 1e-9;
    let area = page.layout.printable();
    let inside = |x: f64, y: f64, r: f64| {
        x - r >= area.x - EPS
            && x + r <= area.right() + EPS
            && y - r >= area.y - EPS
            && y + r <= area.bottom() + EPS
    };
    let mut out = Vec::new();
    for (i, s) in page.strokes.iter().enumerate() {
        if !s.points.iter().all(|&(x, y)| inside(x, y, s.width / 2.0)) {
            out.push(Violation::StrokeOutsideMargin { stroke: i });
        }
    }
    for (i, d) in page.dots.iter().enumerate() {
        if !inside(d.x, d.y, d.diameter / 2.0) {
            out.push(Violation::DotOutsideMargin { dot: i });
        }
    }
    let pitch = page.layout.intra_cell_dot_pitch;
    for (i, a) in page.dots.iter().enumerate() {
        for (j, b) in page.dots.iter().enumerate().skip(i + 1) {
            if a.cell.is_some() && a.cell == b.cell {
                continue;
            }
            if a.cell.is_none() && b.cell.is_none() {
                continue;
            }
            let dist = ((a.x - b.x).powi(2) + (a.y - b.y).powi(2)).sqrt();
            if dist < pitch - EPS {
                out.push(Violation::DotsTooClose {
                    a: i,
                    b: j,
                    distance: dist,
                });
            }
        }
    }
    for (i, d) in page
        .dots
        .iter()
        .enumerate()
        .filter(|(_, d)| d.cell.is_some())
    {
        for (k, s) in page.strokes.iter().enumerate() {
            let min = d.diameter / 2.0 + s.width / 2.0;
            for seg in s.points.windows(2) {
                let dist = segment_distance((d.x, d.y), seg[0], seg[1]);
                if dist < min - EPS {
                    out.push(Violation::DotOnStroke {
                        dot: i,
                        stroke: k,
                        distance: dist,
                    });
                    break;
                }
            }
        }
    }
    out
}
