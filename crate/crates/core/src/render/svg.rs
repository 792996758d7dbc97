use std::fmt::Write;

use crate::chart::ChartSpec;
use crate::color::{simulate_cvd, CvdKind};
use crate::data::Dataset;
use crate::format::{fixed, join_and};
use crate::verbalize::AltText;

use super::{layout, Mark, RenderError, Scene, ShapeKind, TextAnchor, MARGIN};

/// Height of the title strip above each simulation-grid panel.
pub const GRID_HEADER: f64 = 32.0;

fn n(v: f64) -> String {
    fixed(v, 2)
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

fn anchor(a: TextAnchor) -> &'static str {
    match a {
        TextAnchor::Start => "start",
        TextAnchor::Middle => "middle",
        TextAnchor::End => "end",
    }
}

/// SVG path data for a marker glyph.
pub(crate) fn shape_path(shape: ShapeKind, cx: f64, cy: f64, r: f64) -> String {
    match shape {
        ShapeKind::Circle => format!(
            "M{} {}A{} {} 0 1 0 {} {}A{} {} 0 1 0 {} {}Z",
            n(cx - r),
            n(cy),
            n(r),
            n(r),
            n(cx + r),
            n(cy),
            n(r),
            n(r),
            n(cx - r),
            n(cy)
        ),
        _ => {
            let mut d = String::new();
            for line in shape.outline(cx, cy, r) {
                for (i, (x, y)) in line.iter().enumerate() {
                    let _ = write!(d, "{}{} {}", if i == 0 { 'M' } else { 'L' }, n(*x), n(*y));
                }
            }
            if !shape.is_open() {
                d.push('Z');
            }
            d
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn write_text(
    out: &mut String,
    id: Option<&str>,
    x: f64,
    y: f64,
    size: f64,
    a: TextAnchor,
    color: &str,
    text: &str,
    extra: &str,
) {
    let id = id.map(|i| format!(" id=\"{i}\"")).unwrap_or_default();
    let _ = writeln!(
        out,
        "<text{id} x=\"{}\" y=\"{}\" font-size=\"{}\" text-anchor=\"{}\" fill=\"{color}\"{extra}>{}</text>",
        n(x),
        n(y),
        n(size),
        anchor(a),
        escape(text)
    );
}

fn write_mark(out: &mut String, m: &Mark, prefix: &str) {
    match m {
        Mark::Point {
            id,
            x,
            y,
            size,
            shape,
            color,
            ..
        } => {
            let paint = if shape.is_open() {
                format!("fill=\"none\" stroke=\"{color}\" stroke-width=\"2\"")
            } else {
                format!("fill=\"{color}\" stroke=\"none\"")
            };
            let _ = writeln!(
                out,
                "<path id=\"{prefix}{id}\" class=\"mark point {}\" d=\"{}\" {paint}/>",
                shape.name(),
                shape_path(*shape, *x, *y, *size)
            );
        }
        Mark::Rect {
            id,
            x,
            y,
            w,
            h,
            fill,
            stroke,
            ..
        } => {
            let _ = writeln!(
                out,
                "<rect id=\"{prefix}{id}\" class=\"mark\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{fill}\" stroke=\"{stroke}\" stroke-width=\"1\"/>",
                n(*x),
                n(*y),
                n(*w),
                n(*h)
            );
        }
        Mark::Segment {
            id,
            x1,
            y1,
            x2,
            y2,
            color,
            width,
            dash,
            ..
        } => {
            let pattern = dash.pattern();
            let dash_attr = if pattern.is_empty() {
                String::new()
            } else {
                let parts: Vec<String> = pattern.iter().map(|&v| n(v)).collect();
                format!(" stroke-dasharray=\"{}\"", parts.join(" "))
            };
            let _ = writeln!(
                out,
                "<line id=\"{prefix}{id}\" class=\"mark\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\" stroke-width=\"{}\"{dash_attr}/>",
                n(*x1),
                n(*y1),
                n(*x2),
                n(*y2),
                n(*width)
            );
        }
        Mark::Text {
            id,
            x,
            y,
            text,
            anchor: a,
            size,
            color,
        } => {
            let full = format!("{prefix}{id}");
            write_text(
                out,
                Some(&full),
                *x,
                *y,
                *size,
                *a,
                &color.to_hex(),
                text,
                " class=\"mark\"",
            );
        }
    }
}

/// Chart body (everything inside the root element), ids prefixed.
fn write_body(out: &mut String, scene: &Scene, prefix: &str) {
    let ink = scene.ink.to_hex();
    let _ = writeln!(
        out,
        "<rect id=\"{prefix}background\" x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"{}\"/>",
        n(scene.width),
        n(scene.height),
        scene.background
    );
    if let Some(t) = &scene.title {
        write_text(
            out,
            None,
            MARGIN,
            22.0,
            15.0,
            TextAnchor::Start,
            &ink,
            t,
            " font-weight=\"bold\"",
        );
    }
    if let Some(s) = &scene.subtitle {
        write_text(
            out,
            None,
            MARGIN,
            38.0,
            11.0,
            TextAnchor::Start,
            &ink,
            s,
            "",
        );
    }
    if let Some(c) = &scene.caption {
        write_text(
            out,
            None,
            scene.width - 8.0,
            scene.height - 4.0,
            9.0,
            TextAnchor::End,
            &ink,
            c,
            "",
        );
    }

    for (i, panel) in scene.panels.iter().enumerate() {
        let p = &panel.plot;
        let _ = writeln!(out, "<g id=\"{prefix}panel{i}\">");
        if let Some(label) = &panel.label {
            write_text(
                out,
                None,
                p.x + p.w / 2.0,
                p.y - 6.0,
                11.0,
                TextAnchor::Middle,
                &ink,
                label,
                "",
            );
        }
        // Axes along the bottom and left edges of the plot.
        let _ = writeln!(
            out,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{ink}\" stroke-width=\"1\"/>",
            n(p.x),
            n(p.bottom()),
            n(p.right()),
            n(p.bottom())
        );
        let _ = writeln!(
            out,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{ink}\" stroke-width=\"1\"/>",
            n(p.x),
            n(p.y),
            n(p.x),
            n(p.bottom())
        );
        for t in &panel.x_axis.ticks {
            let _ = writeln!(
                out,
                "<line class=\"tick\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{ink}\" stroke-width=\"1\"/>",
                n(t.pos),
                n(p.bottom()),
                n(t.pos),
                n(p.bottom() + 4.0)
            );
            write_text(
                out,
                None,
                t.pos,
                p.bottom() + 16.0,
                10.0,
                TextAnchor::Middle,
                &ink,
                &t.label,
                "",
            );
        }
        if i == 0 {
            for t in &panel.y_axis.ticks {
                let _ = writeln!(
                    out,
                    "<line class=\"tick\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{ink}\" stroke-width=\"1\"/>",
                    n(p.x - 4.0),
                    n(t.pos),
                    n(p.x),
                    n(t.pos)
                );
                write_text(
                    out,
                    None,
                    p.x - 6.0,
                    t.pos + 3.5,
                    10.0,
                    TextAnchor::End,
                    &ink,
                    &t.label,
                    "",
                );
            }
        }
        for m in &panel.marks {
            write_mark(out, m, prefix);
        }
        let _ = writeln!(out, "</g>");
    }

    if let Some(first) = scene.panels.first() {
        let last = scene.panels.last().unwrap_or(first);
        let cx = (first.plot.x + last.plot.right()) / 2.0;
        write_text(
            out,
            None,
            cx,
            scene.height - 12.0,
            12.0,
            TextAnchor::Middle,
            &ink,
            &first.x_axis.title,
            "",
        );
        let cy = first.plot.y + first.plot.h / 2.0;
        write_text(
            out,
            None,
            14.0,
            cy,
            12.0,
            TextAnchor::Middle,
            &ink,
            &first.y_axis.title,
            &format!(" transform=\"rotate(-90 14 {})\"", n(cy)),
        );
    }

    if let Some(legend) = &scene.legend {
        let x0 = scene.width - MARGIN - super::LEGEND_WIDTH + 16.0;
        let mut y = MARGIN + 8.0;
        let _ = writeln!(out, "<g id=\"{prefix}legend\">");
        write_text(
            out,
            None,
            x0,
            y,
            11.0,
            TextAnchor::Start,
            &ink,
            &legend.title,
            " font-weight=\"bold\"",
        );
        for (i, e) in legend.entries.iter().enumerate() {
            y += 20.0;
            let color = e.color.to_hex();
            if let Some(dash) = e.dash {
                let pattern: Vec<String> = dash.pattern().iter().map(|&v| n(v)).collect();
                let dash_attr = if pattern.is_empty() {
                    String::new()
                } else {
                    format!(" stroke-dasharray=\"{}\"", pattern.join(" "))
                };
                let _ = writeln!(
                    out,
                    "<line id=\"{prefix}legend-key{i}\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\" stroke-width=\"2\"{dash_attr}/>",
                    n(x0),
                    n(y - 4.0),
                    n(x0 + 22.0),
                    n(y - 4.0)
                );
            } else {
                let shape = e.shape.unwrap_or(ShapeKind::Square);
                let paint = if shape.is_open() {
                    format!("fill=\"none\" stroke=\"{color}\" stroke-width=\"2\"")
                } else {
                    format!("fill=\"{color}\" stroke=\"none\"")
                };
                let _ = writeln!(
                    out,
                    "<path id=\"{prefix}legend-key{i}\" d=\"{}\" {paint}/>",
                    shape_path(shape, x0 + 8.0, y - 4.0, 5.0)
                );
            }
            write_text(
                out,
                None,
                x0 + 30.0,
                y,
                11.0,
                TextAnchor::Start,
                &ink,
                &e.label,
                "",
            );
        }
        let _ = writeln!(out, "</g>");
    }
}

fn open_root(out: &mut String, w: f64, h: f64, title: &str, desc: &str) {
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\" role=\"img\" aria-labelledby=\"chart-title chart-desc\" font-family=\"sans-serif\">",
        w = n(w),
        h = n(h)
    );
    let _ = writeln!(out, "<title id=\"chart-title\">{}</title>", escape(title));
    let _ = writeln!(out, "<desc id=\"chart-desc\">{}</desc>", escape(desc));
}

/// Writes a scene as a standalone SVG document with embedded alt text.
pub fn emit_svg(scene: &Scene, alt: &AltText) -> Vec<u8> {
    let mut out = String::new();
    open_root(
        &mut out,
        scene.width,
        scene.height,
        &scene.short_alt(),
        &alt.flattened,
    );
    write_body(&mut out, scene, "");
    out.push_str("</svg>\n");
    out.into_bytes()
}

/// Four simulated copies of `scene` in a 2×2 grid.
pub fn cvd_grid_scene(scene: &Scene, alt: &AltText) -> Vec<u8> {
    let (w, h) = (scene.width, scene.height + GRID_HEADER);
    let names: Vec<&str> = CvdKind::ALL.iter().map(|k| k.title()).collect();
    let title = format!("Color vision deficiency simulations: {}", scene.short_alt());
    let desc = format!(
        "Four copies of the chart as seen with {} vision.\n{}",
        join_and(&names).to_lowercase(),
        alt.flattened
    );
    let mut out = String::new();
    open_root(&mut out, 2.0 * w, 2.0 * h, &title, &desc);
    for (i, kind) in CvdKind::ALL.into_iter().enumerate() {
        let (tx, ty) = ((i % 2) as f64 * w, (i / 2) as f64 * h);
        let simulated = scene.map_colors(|c| simulate_cvd(c, kind));
        let _ = writeln!(
            out,
            "<g id=\"grid-{}\" transform=\"translate({} {})\">",
            kind.slug(),
            n(tx),
            n(ty)
        );
        write_text(
            &mut out,
            None,
            w / 2.0,
            22.0,
            15.0,
            TextAnchor::Middle,
            "#000000",
            kind.title(),
            " font-weight=\"bold\" class=\"panel-title\"",
        );
        let _ = writeln!(out, "<g transform=\"translate(0 {})\">", n(GRID_HEADER));
        write_body(&mut out, &simulated, &format!("{}-", kind.slug()));
        out.push_str("</g>\n</g>\n");
    }
    out.push_str("</svg>\n");
    out.into_bytes()
}

/// Lays out the chart and renders its simulation grid.
pub fn cvd_grid(spec: &ChartSpec, data: &Dataset) -> Result<Vec<u8>, RenderError> {
    let scene = layout(spec, data)?;
    let alt = crate::verbalize::auto_alt(&scene.summary)?;
    Ok(cvd_grid_scene(&scene, &alt))
}
