//! Chart layout into a device-independent [`Scene`], and SVG output.

mod layout;
mod svg;

pub use layout::{layout, CANVAS_HEIGHT, CANVAS_WIDTH, LEGEND_WIDTH, MARGIN};
pub use svg::{cvd_grid, cvd_grid_scene, emit_svg, GRID_HEADER};

use thiserror::Error;

use crate::chart::ChartError;
use crate::color::Rgb;
use crate::stats::StatsError;
use crate::verbalize::ChartSummary;

#[derive(Debug, Error)]
pub enum RenderError {
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error(transparent)]
    Data(#[from] crate::data::DataError),
    #[error("{levels} group levels exceed the palette size of {palette}")]
    PaletteTooSmall { levels: usize, palette: usize },
    #[error("no data left to plot after removing missing values")]
    Empty,
    #[error(transparent)]
    Alt(#[from] crate::verbalize::AltError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

impl Rect {
    pub fn right(&self) -> f64 {
        self.x + self.w
    }

    pub fn bottom(&self) -> f64 {
        self.y + self.h
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        let eps = 1e-9;
        x >= self.x - eps
            && x <= self.right() + eps
            && y >= self.y - eps
            && y <= self.bottom() + eps
    }
}

/// Marker glyphs, assigned to group levels in this order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShapeKind {
    Circle,
    Triangle,
    Square,
    Diamond,
    Plus,
    Cross,
}

impl ShapeKind {
    pub const CYCLE: [ShapeKind; 6] = [
        ShapeKind::Circle,
        ShapeKind::Triangle,
        ShapeKind::Square,
        ShapeKind::Diamond,
        ShapeKind::Plus,
        ShapeKind::Cross,
    ];

    pub fn for_level(i: usize) -> ShapeKind {
        Self::CYCLE[i % Self::CYCLE.len()]
    }

    pub fn name(self) -> &'static str {
        match self {
            ShapeKind::Circle => "circle",
            ShapeKind::Triangle => "triangle",
            ShapeKind::Square => "square",
            ShapeKind::Diamond => "diamond",
            ShapeKind::Plus => "plus",
            ShapeKind::Cross => "cross",
        }
    }

    /// Stroked rather than filled.
    pub fn is_open(self) -> bool {
        matches!(self, ShapeKind::Plus | ShapeKind::Cross)
    }

    /// Glyph outline as polylines around `(cx, cy)` with radius `r`.
    /// Closed shapes repeat their first vertex at the end.
    pub fn outline(self, cx: f64, cy: f64, r: f64) -> Vec<Vec<(f64, f64)>> {
        let poly = |pts: &[(f64, f64)]| -> Vec<(f64, f64)> {
            let mut v: Vec<(f64, f64)> = pts
                .iter()
                .map(|&(dx, dy)| (cx + dx * r, cy + dy * r))
                .collect();
            v.push(v[0]);
            v
        };
        match self {
            ShapeKind::Circle => {
                let n = 16;
                let mut v: Vec<(f64, f64)> = (0..n)
                    .map(|i| {
                        let a = std::f64::consts::TAU * i as f64 / n as f64;
                        (cx + r * a.cos(), cy + r * a.sin())
                    })
                    .collect();
                v.push(v[0]);
                vec![v]
            }
            ShapeKind::Triangle => vec![poly(&[(0.0, -1.1), (0.95, 0.65), (-0.95, 0.65)])],
            ShapeKind::Square => vec![poly(&[
                (-0.85, -0.85),
                (0.85, -0.85),
                (0.85, 0.85),
                (-0.85, 0.85),
            ])],
            ShapeKind::Diamond => vec![poly(&[
                (0.0, -1.15),
                (1.15, 0.0),
                (0.0, 1.15),
                (-1.15, 0.0),
            ])],
            ShapeKind::Plus => vec![
                vec![(cx - r, cy), (cx + r, cy)],
                vec![(cx, cy - r), (cx, cy + r)],
            ],
            ShapeKind::Cross => {
                let d = r * std::f64::consts::FRAC_1_SQRT_2;
                vec![
                    vec![(cx - d, cy - d), (cx + d, cy + d)],
                    vec![(cx - d, cy + d), (cx + d, cy - d)],
                ]
            }
        }
    }
}

/// Line styles, assigned to group levels in this order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dash {
    Solid,
    Dashed,
    Dotted,
    DashDot,
    LongDash,
    TwoDash,
}

impl Dash {
    pub const CYCLE: [Dash; 6] = [
        Dash::Solid,
        Dash::Dashed,
        Dash::Dotted,
        Dash::DashDot,
        Dash::LongDash,
        Dash::TwoDash,
    ];

    pub fn for_level(i: usize) -> Dash {
        Self::CYCLE[i % Self::CYCLE.len()]
    }

    /// On/off lengths in px; empty for solid.
    pub fn pattern(self) -> &'static [f64] {
        match self {
            Dash::Solid => &[],
            Dash::Dashed => &[8.0, 4.0],
            Dash::Dotted => &[2.0, 3.0],
            Dash::DashDot => &[8.0, 3.0, 2.0, 3.0],
            Dash::LongDash => &[14.0, 4.0],
            Dash::TwoDash => &[10.0, 3.0, 4.0, 3.0],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TextAnchor {
    Start,
    Middle,
    End,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Mark {
    Point {
        id: String,
        x: f64,
        y: f64,
        size: f64,
        shape: ShapeKind,
        color: Rgb,
        group: usize,
    },
    Rect {
        id: String,
        x: f64,
        y: f64,
        w: f64,
        h: f64,
        fill: Rgb,
        stroke: Rgb,
        group: usize,
    },
    Segment {
        id: String,
        x1: f64,
        y1: f64,
        x2: f64,
        y2: f64,
        color: Rgb,
        width: f64,
        dash: Dash,
        group: usize,
    },
    Text {
        id: String,
        x: f64,
        y: f64,
        text: String,
        anchor: TextAnchor,
        size: f64,
        color: Rgb,
    },
}

impl Mark {
    pub fn id(&self) -> &str {
        match self {
            Mark::Point { id, .. }
            | Mark::Rect { id, .. }
            | Mark::Segment { id, .. }
            | Mark::Text { id, .. } => id,
        }
    }

    /// Anchor points that must lie inside the plot rectangle.
    pub fn anchor_points(&self) -> Vec<(f64, f64)> {
        match *self {
            Mark::Point { x, y, .. } | Mark::Text { x, y, .. } => vec![(x, y)],
            Mark::Rect { x, y, w, h, .. } => vec![(x, y), (x + w, y + h)],
            Mark::Segment { x1, y1, x2, y2, .. } => vec![(x1, y1), (x2, y2)],
        }
    }

    fn map_colors(&mut self, f: &impl Fn(Rgb) -> Rgb) {
        match self {
            Mark::Point { color, .. } | Mark::Segment { color, .. } | Mark::Text { color, .. } => {
                *color = f(*color)
            }
            Mark::Rect { fill, stroke, .. } => {
                *fill = f(*fill);
                *stroke = f(*stroke);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tick {
    pub value: Option<f64>,
    /// Pixel position along the axis.
    pub pos: f64,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub title: String,
    pub ticks: Vec<Tick>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    pub label: Option<String>,
    pub plot: Rect,
    pub x_axis: Axis,
    pub y_axis: Axis,
    pub marks: Vec<Mark>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LegendEntry {
    pub label: String,
    pub color: Rgb,
    pub shape: Option<ShapeKind>,
    pub dash: Option<Dash>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Legend {
    pub title: String,
    pub entries: Vec<LegendEntry>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub width: f64,
    pub height: f64,
    pub background: Rgb,
    /// Color of axes and text.
    pub ink: Rgb,
    pub title: Option<String>,
    pub subtitle: Option<String>,
    pub caption: Option<String>,
    pub panels: Vec<Panel>,
    pub legend: Option<Legend>,
    pub summary: ChartSummary,
}

impl Scene {
    /// Applies `f` to every color in the scene, leaving geometry untouched.
    pub fn map_colors(&self, f: impl Fn(Rgb) -> Rgb) -> Scene {
        let mut out = self.clone();
        out.background = f(out.background);
        out.ink = f(out.ink);
        for panel in &mut out.panels {
            for mark in &mut panel.marks {
                mark.map_colors(&f);
            }
        }
        if let Some(legend) = &mut out.legend {
            for e in &mut legend.entries {
                e.color = f(e.color);
            }
        }
        out
    }

    pub fn marks(&self) -> impl Iterator<Item = &Mark> {
        self.panels.iter().flat_map(|p| p.marks.iter())
    }

    /// Short accessible name: the title, or a generated chart description.
    pub fn short_alt(&self) -> String {
        if let Some(t) = &self.title {
            return t.clone();
        }
        let s = &self.summary;
        let kind = match s.chart_type {
            crate::chart::ChartType::Scatter => "Scatterplot",
            crate::chart::ChartType::Bar => "Bar chart",
            crate::chart::ChartType::Histogram => "Histogram",
            crate::chart::ChartType::Boxplot => "Boxplot",
            crate::chart::ChartType::Line => "Line chart",
        };
        match s.chart_type {
            crate::chart::ChartType::Scatter | crate::chart::ChartType::Line => {
                format!("{kind} of {} against {}", s.y_axis.name, s.x_axis.name)
            }
            crate::chart::ChartType::Boxplot if s.x_axis.name != s.y_axis.name => {
                format!("{kind} of {} by {}", s.y_axis.name, s.x_axis.name)
            }
            _ => format!("{kind} of {}", s.x_axis.name),
        }
    }
}
