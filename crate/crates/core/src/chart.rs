//! Declarative chart descriptions and their JSON form.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;
use serde_json::Value;
use thiserror::Error;

use crate::color::{ColorError, Palette, Rgb};
use crate::data::{Column, ColumnKind, DataError, Dataset};
use crate::stats::SortOrder;
use crate::verbalize::ManualAltInput;

#[derive(Debug, Error)]
pub enum ChartError {
    #[error("invalid chart json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown chart type '{0}' (expected scatter, bar, histogram, boxplot or line)")]
    UnknownType(String),
    #[error("{chart} chart requires {role}")]
    MissingRole {
        chart: ChartType,
        role: &'static str,
    },
    #[error("{chart} chart does not use {role}")]
    UnusedRole {
        chart: ChartType,
        role: &'static str,
    },
    #[error("unknown sort order '{0}' (expected appearance or alphabetical)")]
    UnknownSort(String),
    #[error("inline column '{0}' must be an array of numbers, strings or nulls")]
    InlineColumn(String),
    #[error(transparent)]
    Color(#[from] ColorError),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error("chart has no data source")]
    NoData,
    #[error("cannot read data file {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChartType {
    Scatter,
    Bar,
    Histogram,
    Boxplot,
    Line,
}

impl ChartType {
    pub fn name(self) -> &'static str {
        match self {
            ChartType::Scatter => "scatter",
            ChartType::Bar => "bar",
            ChartType::Histogram => "histogram",
            ChartType::Boxplot => "boxplot",
            ChartType::Line => "line",
        }
    }

    /// Marks drawn as points take shape redundancy; line marks take dashes.
    pub fn is_point_mark(self) -> bool {
        self == ChartType::Scatter
    }

    pub fn is_line_mark(self) -> bool {
        self == ChartType::Line
    }
}

impl fmt::Display for ChartType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChartType {
    type Err = ChartError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "scatter" | "point" => Ok(ChartType::Scatter),
            "bar" => Ok(ChartType::Bar),
            "histogram" | "hist" => Ok(ChartType::Histogram),
            "boxplot" | "box" => Ok(ChartType::Boxplot),
            "line" => Ok(ChartType::Line),
            _ => Err(ChartError::UnknownType(s.to_string())),
        }
    }
}

/// Redundant encodings applied to group levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Encodings {
    pub color: bool,
    pub shape: bool,
    pub linetype: bool,
    pub facet: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DataSource {
    Csv(PathBuf),
    Inline(Dataset),
}

impl DataSource {
    /// Loads the data, resolving relative CSV paths against `base`.
    pub fn load(&self, base: Option<&Path>) -> Result<Dataset, ChartError> {
        match self {
            DataSource::Inline(d) => Ok(d.clone()),
            DataSource::Csv(p) => {
                let path = match base {
                    Some(b) if p.is_relative() => b.join(p),
                    _ => p.clone(),
                };
                let bytes = std::fs::read(&path).map_err(|source| ChartError::Io {
                    path: path.clone(),
                    source,
                })?;
                Ok(crate::data::parse_csv(&bytes)?)
            }
        }
    }
}

/// Author-supplied alt text: verbatim prose or the chart-type/data/reason template.
#[derive(Debug, Clone, PartialEq)]
pub enum ManualAlt {
    Text(String),
    Template(ManualAltInput),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChartSpec {
    pub title: Option<String>,
    pub subtitle: Option<String>,
    pub caption: Option<String>,
    pub chart_type: ChartType,
    pub x: String,
    pub y: Option<String>,
    pub group: Option<String>,
    pub encodings: Encodings,
    pub palette: Palette,
    pub bins: Option<usize>,
    pub manual_alt: Option<ManualAlt>,
    pub sort_order: SortOrder,
    pub data: Option<DataSource>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    title: Option<String>,
    subtitle: Option<String>,
    caption: Option<String>,
    data: Option<RawData>,
    chart: RawChart,
    encodings: Option<RawEncodings>,
    palette: Option<RawPalette>,
    alt: Option<RawAlt>,
}

#[derive(Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
enum RawData {
    Csv(PathBuf),
    Inline(serde_json::Map<String, Value>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawChart {
    #[serde(rename = "type")]
    kind: String,
    x: Option<String>,
    y: Option<String>,
    group: Option<String>,
    bins: Option<usize>,
    sort: Option<String>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawEncodings {
    color: Option<bool>,
    shape: Option<bool>,
    linetype: Option<bool>,
    facet: Option<bool>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawPalette {
    Named(String),
    Colors(Vec<String>),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawAlt {
    Text(String),
    Template {
        chart_type: String,
        data_desc: String,
        reason: String,
        data_link: Option<String>,
    },
}

impl ChartSpec {
    /// Parses the JSON chart document and applies defaults.
    pub fn parse(bytes: &[u8]) -> Result<ChartSpec, ChartError> {
        let raw: RawSpec = serde_json::from_slice(bytes)?;
        let chart_type: ChartType = raw.chart.kind.parse()?;
        let need = |role: &'static str| ChartError::MissingRole {
            chart: chart_type,
            role,
        };

        let x = match raw.chart.x {
            Some(x) if !x.is_empty() => x,
            _ if chart_type == ChartType::Scatter || chart_type == ChartType::Line => {
                return Err(need("x and y"))
            }
            _ => return Err(need("x")),
        };
        match chart_type {
            ChartType::Scatter | ChartType::Line if raw.chart.y.is_none() => {
                return Err(need("x and y"))
            }
            ChartType::Bar | ChartType::Histogram if raw.chart.y.is_some() => {
                return Err(ChartError::UnusedRole {
                    chart: chart_type,
                    role: "y",
                })
            }
            _ => {}
        }
        if raw.chart.bins.is_some() && chart_type != ChartType::Histogram {
            return Err(ChartError::UnusedRole {
                chart: chart_type,
                role: "bins",
            });
        }
        if raw.chart.group.is_some() && !matches!(chart_type, ChartType::Scatter | ChartType::Line)
        {
            return Err(ChartError::UnusedRole {
                chart: chart_type,
                role: "group",
            });
        }

        let e = raw.encodings.unwrap_or_default();
        let encodings = Encodings {
            color: e.color.unwrap_or(true),
            shape: chart_type.is_point_mark() && e.shape.unwrap_or(true),
            linetype: chart_type.is_line_mark() && e.linetype.unwrap_or(true),
            facet: e.facet.unwrap_or(false),
        };

        let palette = match raw.palette {
            None => crate::color::okabe_ito(),
            Some(RawPalette::Named(name)) => Palette::named(&name)?,
            Some(RawPalette::Colors(list)) => Palette::new(
                None,
                list.iter()
                    .map(|h| Rgb::from_hex(h))
                    .collect::<Result<_, _>>()?,
            )?,
        };

        let sort_order = match raw.chart.sort.as_deref() {
            None | Some("appearance") => SortOrder::Appearance,
            Some("alphabetical") => SortOrder::Alphabetical,
            Some(other) => return Err(ChartError::UnknownSort(other.to_string())),
        };

        let data = match raw.data {
            None => None,
            Some(RawData::Csv(p)) => Some(DataSource::Csv(p)),
            Some(RawData::Inline(map)) => Some(DataSource::Inline(inline_dataset(map)?)),
        };

        let manual_alt = raw.alt.map(|a| match a {
            RawAlt::Text(t) => ManualAlt::Text(t),
            RawAlt::Template {
                chart_type,
                data_desc,
                reason,
                data_link,
            } => ManualAlt::Template(ManualAltInput {
                chart_type,
                data_desc,
                reason,
                data_link,
            }),
        });

        Ok(ChartSpec {
            title: raw.title.filter(|s| !s.is_empty()),
            subtitle: raw.subtitle.filter(|s| !s.is_empty()),
            caption: raw.caption.filter(|s| !s.is_empty()),
            chart_type,
            x,
            y: raw.chart.y,
            group: raw.chart.group,
            encodings,
            palette,
            bins: raw.chart.bins,
            manual_alt,
            sort_order,
            data,
        })
    }

    /// Checks that every role names a column of the right kind.
    pub fn bind(&self, data: &Dataset) -> Result<(), ChartError> {
        let want = |name: &str, kind: ColumnKind| -> Result<(), ChartError> {
            let col = data.column(name)?;
            if col.kind() != kind {
                return Err(DataError::WrongKind {
                    name: name.to_string(),
                    expected: kind,
                }
                .into());
            }
            Ok(())
        };
        match self.chart_type {
            ChartType::Bar => want(&self.x, ColumnKind::Categorical)?,
            ChartType::Histogram => want(&self.x, ColumnKind::Numeric)?,
            ChartType::Scatter | ChartType::Line => {
                want(&self.x, ColumnKind::Numeric)?;
                want(
                    self.y.as_deref().expect("validated at parse"),
                    ColumnKind::Numeric,
                )?;
            }
            ChartType::Boxplot => match &self.y {
                Some(y) => {
                    want(&self.x, ColumnKind::Categorical)?;
                    want(y, ColumnKind::Numeric)?;
                }
                None => want(&self.x, ColumnKind::Numeric)?,
            },
        }
        if let Some(g) = &self.group {
            want(g, ColumnKind::Categorical)?;
        }
        Ok(())
    }

    /// Axis titles in the order (x, y).
    pub fn axis_names(&self) -> (String, String) {
        match (self.chart_type, &self.y) {
            (ChartType::Bar | ChartType::Histogram, _) => (self.x.clone(), "count".to_string()),
            (ChartType::Boxplot, None) => (self.x.clone(), self.x.clone()),
            (_, Some(y)) => (self.x.clone(), y.clone()),
            (_, None) => (self.x.clone(), String::new()),
        }
    }

    pub fn load_data(&self, base: Option<&Path>) -> Result<Dataset, ChartError> {
        self.data.as_ref().ok_or(ChartError::NoData)?.load(base)
    }
}

fn inline_dataset(map: serde_json::Map<String, Value>) -> Result<Dataset, ChartError> {
    let mut columns = Vec::with_capacity(map.len());
    for (name, value) in map {
        let Value::Array(items) = value else {
            return Err(ChartError::InlineColumn(name));
        };
        let all_numbers = items
            .iter()
            .all(|v| matches!(v, Value::Number(_) | Value::Null));
        let col = if all_numbers {
            Column::Numeric(items.iter().map(Value::as_f64).collect())
        } else {
            let cells = items
                .iter()
                .map(|v| match v {
                    Value::Null => Ok(None),
                    Value::String(s) if crate::data::is_missing_token(s) => Ok(None),
                    Value::String(s) => Ok(Some(s.clone())),
                    Value::Number(n) => Ok(Some(n.to_string())),
                    _ => Err(ChartError::InlineColumn(name.clone())),
                })
                .collect::<Result<Vec<_>, _>>()?;
            Column::Categorical(cells)
        };
        columns.push((name, col));
    }
    Ok(Dataset::new(columns)?)
}
