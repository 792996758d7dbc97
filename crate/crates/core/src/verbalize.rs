//! Alt text: template-generated descriptions of laid-out charts, the
//! chart-type/data/reason formula for hand-written text, and a content
//! checklist.

use serde::Serialize;
use thiserror::Error;

use crate::chart::{ChartSpec, ChartType};
use crate::format::{join_and, significant};
use crate::stats::{Bin, BoxStats};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AltError {
    #[error("alt text for {chart} charts cannot be built from {detail} data")]
    Unsupported {
        chart: ChartType,
        detail: &'static str,
    },
    #[error("manual alt text field '{0}' is empty")]
    EmptyField(&'static str),
}

/// Ordered sentences plus their newline-joined form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AltText {
    pub sentences: Vec<String>,
    pub flattened: String,
}

impl AltText {
    pub fn from_sentences(sentences: Vec<String>) -> AltText {
        let sentences: Vec<String> = sentences
            .into_iter()
            .map(|s| strip_markup(s.trim()))
            .filter(|s| !s.is_empty())
            .map(|s| if s.ends_with('.') { s } else { s + "." })
            .collect();
        let flattened = sentences.join("\n");
        AltText {
            sentences,
            flattened,
        }
    }

    /// Splits free prose into sentences at `. ` boundaries.
    pub fn from_prose(text: &str) -> AltText {
        let mut sentences = Vec::new();
        let mut rest = text.trim();
        while let Some(i) = rest.find(". ") {
            sentences.push(rest[..=i].to_string());
            rest = rest[i + 2..].trim_start();
        }
        if !rest.is_empty() {
            sentences.push(rest.to_string());
        }
        AltText::from_sentences(sentences)
    }
}

fn strip_markup(s: &str) -> String {
    s.chars()
        .filter(|c| !matches!(c, '<' | '>'))
        .map(|c| if c == '\n' || c == '\r' { ' ' } else { c })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxisSummary {
    pub name: String,
    pub labels: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupSummary {
    pub name: String,
    pub levels: Vec<String>,
}

/// Per-mark statistics a description is built from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum MarkSummary {
    Bars(Vec<(String, usize)>),
    Bins(Vec<Bin>),
    Boxes(Vec<BoxStats>),
    Points {
        n: usize,
        x_range: (f64, f64),
        y_range: (f64, f64),
        groups: Option<GroupSummary>,
        slope: Option<f64>,
    },
}

impl MarkSummary {
    fn kind_name(&self) -> &'static str {
        match self {
            MarkSummary::Bars(_) => "bar",
            MarkSummary::Bins(_) => "histogram bin",
            MarkSummary::Boxes(_) => "box",
            MarkSummary::Points { .. } => "point",
        }
    }
}

/// Everything needed to describe a laid-out chart in words.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChartSummary {
    #[serde(serialize_with = "ser_chart_type")]
    pub chart_type: ChartType,
    pub title: Option<String>,
    pub subtitle: Option<String>,
    pub caption: Option<String>,
    pub x_axis: AxisSummary,
    pub y_axis: AxisSummary,
    pub marks: MarkSummary,
    /// Rows left out because a needed value was missing.
    pub dropped_rows: usize,
}

fn ser_chart_type<S: serde::Serializer>(t: &ChartType, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(t.name())
}

fn plural(n: usize, one: &str, many: &str) -> String {
    format!("{n} {}", if n == 1 { one } else { many })
}

fn opening_sentence(s: &ChartSummary) -> String {
    let head = match &s.title {
        None => "This is an untitled chart".to_string(),
        Some(t) => format!("This is a chart titled '{t}'"),
    };
    let tail = match (&s.subtitle, &s.caption) {
        (None, None) => " with no subtitle or caption.".to_string(),
        (Some(sub), None) => format!(" with subtitle '{sub}' and no caption."),
        (None, Some(cap)) => format!(" with caption '{cap}' and no subtitle."),
        (Some(sub), Some(cap)) => format!(" with subtitle '{sub}' and caption '{cap}'."),
    };
    head + &tail
}

fn axis_sentence(which: &str, axis: &AxisSummary) -> String {
    if axis.labels.is_empty() {
        format!("It has {which}-axis '{}'.", axis.name)
    } else {
        format!(
            "It has {which}-axis '{}' with labels {}.",
            axis.name,
            join_and(&axis.labels)
        )
    }
}

fn about_range((lo, hi): (f64, f64)) -> String {
    format!(
        "from about {} to {}",
        significant(lo, 2),
        significant(hi, 2)
    )
}

/// Generates alt text from a chart summary.
///
/// The bar form reads, for an untitled three-bar chart:
///
/// ```text
/// This is an untitled chart with no subtitle or caption.
/// It has x-axis 'species' with labels Adelie, Chinstrap and Gentoo.
/// It has y-axis 'count' with labels 0, 50, 100 and 150.
/// The chart is a bar chart with 3 vertical bars.
/// Bar 1 is centered horizontally at Adelie, and spans vertically from 0 to 152.
/// ...
/// ```
///
/// Other chart types follow the same opening and axis sentences.
pub fn auto_alt(s: &ChartSummary) -> Result<AltText, AltError> {
    let mut out = vec![
        opening_sentence(s),
        axis_sentence("x", &s.x_axis),
        axis_sentence("y", &s.y_axis),
    ];
    let unsupported = || AltError::Unsupported {
        chart: s.chart_type,
        detail: s.marks.kind_name(),
    };

    match (s.chart_type, &s.marks) {
        (ChartType::Bar, MarkSummary::Bars(bars)) => {
            out.push(format!(
                "The chart is a bar chart with {}.",
                plural(bars.len(), "vertical bar", "vertical bars")
            ));
            for (i, (label, count)) in bars.iter().enumerate() {
                out.push(format!(
                    "Bar {} is centered horizontally at {label}, and spans vertically from 0 to {count}.",
                    i + 1
                ));
            }
        }
        (ChartType::Histogram, MarkSummary::Bins(bins)) => {
            out.push(format!(
                "The chart is a histogram with {}.",
                plural(bins.len(), "bin", "bins")
            ));
            for (i, b) in bins.iter().enumerate() {
                out.push(format!(
                    "Bin {} spans horizontally from {} to {}, and vertically from 0 to {}.",
                    i + 1,
                    significant(b.lo, 6),
                    significant(b.hi, 6),
                    b.count
                ));
            }
        }
        (ChartType::Boxplot, MarkSummary::Boxes(boxes)) => {
            out.push(format!(
                "The chart is a boxplot with {}.",
                plural(boxes.len(), "box", "boxes")
            ));
            for (i, b) in boxes.iter().enumerate() {
                out.push(format!(
                    "Box {} for {} has minimum whisker {}, lower quartile {}, median {}, upper quartile {} and maximum whisker {}.",
                    i + 1,
                    b.group_label,
                    significant(b.min_whisker, 6),
                    significant(b.q1, 6),
                    significant(b.median, 6),
                    significant(b.q3, 6),
                    significant(b.max_whisker, 6),
                ));
                if !b.outliers.is_empty() {
                    let values: Vec<String> =
                        b.outliers.iter().map(|&v| significant(v, 6)).collect();
                    out.push(format!(
                        "Box {} has {} at {}.",
                        i + 1,
                        plural(b.outliers.len(), "outlier", "outliers"),
                        join_and(&values)
                    ));
                }
            }
        }
        (
            ChartType::Scatter | ChartType::Line,
            MarkSummary::Points {
                n,
                x_range,
                y_range,
                groups,
                slope,
            },
        ) => {
            let kind = if s.chart_type == ChartType::Scatter {
                "scatterplot"
            } else {
                "line chart"
            };
            out.push(format!(
                "The chart is a {kind} with {}.",
                plural(*n, "point", "points")
            ));
            if let Some(g) = groups {
                out.push(format!(
                    "Points are grouped by '{}' into {}: {}.",
                    g.name,
                    plural(g.levels.len(), "level", "levels"),
                    join_and(&g.levels)
                ));
            }
            out.push(format!(
                "'{}' varies {}.",
                s.x_axis.name,
                about_range(*x_range)
            ));
            out.push(format!(
                "'{}' varies {}.",
                s.y_axis.name,
                about_range(*y_range)
            ));
            let sign = match slope {
                Some(b) if *b > 0.0 => "a positive",
                Some(b) if *b < 0.0 => "a negative",
                _ => "no clear",
            };
            out.push(format!("Overall there is {sign} relationship."));
        }
        _ => return Err(unsupported()),
    }

    if s.dropped_rows > 0 {
        out.push(if s.dropped_rows == 1 {
            "1 row with missing values was omitted.".to_string()
        } else {
            format!("{} rows with missing values were omitted.", s.dropped_rows)
        });
    }
    Ok(AltText::from_sentences(out))
}

/// Inputs to the chart-type / data / reason formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ManualAltInput {
    pub chart_type: String,
    pub data_desc: String,
    pub reason: String,
    pub data_link: Option<String>,
}

/// `<Chart type> of <type of data> where <reason>.`, plus a data-link
/// sentence when a link is given.
pub fn manual_alt(input: &ManualAltInput) -> Result<AltText, AltError> {
    let field = |v: &str, name: &'static str| {
        let t = v.trim().trim_end_matches('.').trim();
        if t.is_empty() {
            Err(AltError::EmptyField(name))
        } else {
            Ok(t.to_string())
        }
    };
    let chart_type = field(&input.chart_type, "chart_type")?;
    let data_desc = field(&input.data_desc, "data_desc")?;
    let reason = field(&input.reason, "reason")?;
    let mut sentences = vec![format!("{chart_type} of {data_desc} where {reason}.")];
    if let Some(link) = input
        .data_link
        .as_deref()
        .map(str::trim)
        .filter(|l| !l.is_empty())
    {
        sentences.push(format!("Data available at {link}."));
    }
    Ok(AltText::from_sentences(sentences))
}

/// Which recommended content elements an alt text covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ChecklistReport {
    pub has_type: bool,
    pub has_axes: bool,
    pub has_scale: bool,
    pub has_meaning: bool,
}

impl ChecklistReport {
    pub fn all(&self) -> bool {
        self.has_type && self.has_axes && self.has_scale && self.has_meaning
    }
}

const TYPE_WORDS: &[&[&str]] = &[
    &["bar"],
    &["bars"],
    &["histogram"],
    &["boxplot"],
    &["box", "plot"],
    &["scatterplot"],
    &["scatter", "plot"],
    &["scatter"],
    &["line", "chart"],
    &["line", "graph"],
    &["pie", "chart"],
];

const MEANING_WORDS: &[&str] = &[
    "relationship",
    "relationships",
    "increase",
    "increases",
    "increasing",
    "decrease",
    "decreases",
    "decreasing",
    "positive",
    "negative",
    "higher",
    "lower",
    "vary",
    "varies",
];

fn words(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(|w| w.to_lowercase())
        .collect()
}

fn contains_phrase(words: &[String], phrase: &[&str]) -> bool {
    words
        .windows(phrase.len())
        .any(|w| w.iter().zip(phrase).all(|(a, b)| a == b))
}

/// True when every word of a column name (split at `_` and punctuation)
/// appears in the text.
fn mentions(words: &[String], name: &str) -> bool {
    let parts = self::words(name);
    !parts.is_empty() && parts.iter().all(|p| words.contains(p))
}

/// Heuristic content check: chart type, both axis variables, at least two
/// numbers, and a relationship word.
pub fn checklist_score(alt: &AltText, spec: &ChartSpec) -> ChecklistReport {
    let text = &alt.flattened;
    let ws = words(text);
    let (x, y) = spec.axis_names();
    let numerals = text
        .split(|c: char| !(c.is_ascii_digit() || c == '.'))
        .filter(|t| t.chars().any(|c| c.is_ascii_digit()))
        .count();
    ChecklistReport {
        has_type: TYPE_WORDS.iter().any(|p| contains_phrase(&ws, p)),
        has_axes: mentions(&ws, &x) && mentions(&ws, &y),
        has_scale: numerals >= 2,
        has_meaning: MEANING_WORDS.iter().any(|m| ws.iter().any(|w| w == m)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bar_summary(
        bars: Vec<(&str, usize)>,
        x_labels: Vec<&str>,
        y_labels: Vec<&str>,
    ) -> ChartSummary {
        ChartSummary {
            chart_type: ChartType::Bar,
            title: None,
            subtitle: None,
            caption: None,
            x_axis: AxisSummary {
                name: "species".into(),
                labels: x_labels.into_iter().map(String::from).collect(),
            },
            y_axis: AxisSummary {
                name: "count".into(),
                labels: y_labels.into_iter().map(String::from).collect(),
            },
            marks: MarkSummary::Bars(bars.into_iter().map(|(l, n)| (l.to_string(), n)).collect()),
            dropped_rows: 0,
        }
    }

    #[test]
    fn single_bar_is_singular() {
        let s = bar_summary(
            vec![("A", 1)],
            vec!["A"],
            vec!["0", "0.2", "0.4", "0.6", "0.8", "1"],
        );
        let alt = auto_alt(&s).unwrap();
        assert_eq!(
            alt.sentences[3],
            "The chart is a bar chart with 1 vertical bar."
        );
        assert_eq!(
            alt.sentences[4],
            "Bar 1 is centered horizontally at A, and spans vertically from 0 to 1."
        );
    }

    #[test]
    fn two_labels_no_comma() {
        let s = bar_summary(
            vec![("A", 1), ("B", 2)],
            vec!["A", "B"],
            vec!["0", "1", "2"],
        );
        let alt = auto_alt(&s).unwrap();
        assert_eq!(
            alt.sentences[1],
            "It has x-axis 'species' with labels A and B."
        );
    }

    #[test]
    fn titled_variants() {
        let mut s = bar_summary(vec![("A", 1)], vec!["A"], vec!["0", "1"]);
        s.title = Some("Penguins".into());
        assert_eq!(
            auto_alt(&s).unwrap().sentences[0],
            "This is a chart titled 'Penguins' with no subtitle or caption."
        );
        s.subtitle = Some("Palmer".into());
        assert_eq!(
            auto_alt(&s).unwrap().sentences[0],
            "This is a chart titled 'Penguins' with subtitle 'Palmer' and no caption."
        );
        s.caption = Some("2007-2009".into());
        assert_eq!(
            auto_alt(&s).unwrap().sentences[0],
            "This is a chart titled 'Penguins' with subtitle 'Palmer' and caption '2007-2009'."
        );
        s.title = None;
        s.subtitle = None;
        assert_eq!(
            auto_alt(&s).unwrap().sentences[0],
            "This is an untitled chart with caption '2007-2009' and no subtitle."
        );
    }

    #[test]
    fn mismatched_summary_is_an_error() {
        let mut s = bar_summary(vec![("A", 1)], vec!["A"], vec!["0", "1"]);
        s.chart_type = ChartType::Histogram;
        assert_eq!(
            auto_alt(&s).unwrap_err(),
            AltError::Unsupported {
                chart: ChartType::Histogram,
                detail: "bar"
            }
        );
    }

    #[test]
    fn dropped_rows_sentence() {
        let mut s = bar_summary(vec![("A", 1)], vec!["A"], vec!["0", "1"]);
        s.dropped_rows = 2;
        let alt = auto_alt(&s).unwrap();
        assert_eq!(
            alt.sentences.last().unwrap(),
            "2 rows with missing values were omitted."
        );
        s.dropped_rows = 1;
        let alt = auto_alt(&s).unwrap();
        assert_eq!(
            alt.sentences.last().unwrap(),
            "1 row with missing values was omitted."
        );
    }

    #[test]
    fn manual_template() {
        let input = ManualAltInput {
            chart_type: "Scatterplot".into(),
            data_desc: "penguin flipper and bill lengths".into(),
            reason: "longer flippers accompany longer bills".into(),
            data_link: None,
        };
        let alt = manual_alt(&input).unwrap();
        assert_eq!(
            alt.flattened,
            "Scatterplot of penguin flipper and bill lengths where longer flippers accompany longer bills."
        );
        let with_link = ManualAltInput {
            data_link: Some("https://example.org/penguins.csv".into()),
            ..input.clone()
        };
        let alt = manual_alt(&with_link).unwrap();
        assert_eq!(alt.sentences.len(), 2);
        assert_eq!(
            alt.sentences[1],
            "Data available at https://example.org/penguins.csv."
        );
        let empty = ManualAltInput {
            reason: "  ".into(),
            ..input
        };
        assert_eq!(
            manual_alt(&empty).unwrap_err(),
            AltError::EmptyField("reason")
        );
    }

    fn scatter_spec() -> ChartSpec {
        ChartSpec::parse(
            br#"{"chart":{"type":"scatter","x":"flipper_length_mm","y":"bill_length_mm","group":"species"}}"#,
        )
        .unwrap()
    }

    #[test]
    fn checklist_on_hand_written_text() {
        let text = "Sample scatterplot showing the relationship between flipper length in mm on the x-axis and bill length in mm on the y-axis. Flipper lengths vary from about 170 to 230, and bill lengths vary from about 35 to 60. Overall there is a moderate positive relationship. Each data point is colored differently for three species as Adelie, Chinstrap, and Gentoo.";
        let r = checklist_score(&AltText::from_prose(text), &scatter_spec());
        assert!(r.all(), "{r:?}");
    }

    #[test]
    fn checklist_edge_cases() {
        let spec = ChartSpec::parse(br#"{"chart":{"type":"bar","x":"species"}}"#).unwrap();
        let r = checklist_score(&AltText::from_prose(""), &spec);
        assert_eq!(
            r,
            ChecklistReport {
                has_type: false,
                has_axes: false,
                has_scale: false,
                has_meaning: false
            }
        );
        let r = checklist_score(&AltText::from_prose("bar chart"), &spec);
        assert_eq!(
            r,
            ChecklistReport {
                has_type: true,
                has_axes: false,
                has_scale: false,
                has_meaning: false
            }
        );
    }

    #[test]
    fn prose_splitting() {
        let alt = AltText::from_prose("One thing. Two things. Three");
        assert_eq!(alt.sentences, ["One thing.", "Two things.", "Three."]);
        assert_eq!(alt.flattened, "One thing.\nTwo things.\nThree.");
        assert!(AltText::from_prose("").sentences.is_empty());
    }
}
