//! SVG twin of a tactile page for sighted checking: same millimetre
//! geometry, dots drawn as circles.

use std::fmt::Write;

use crate::format::fixed;

use super::TactilePage;

fn n(v: f64) -> String {
    fixed(v, 3)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

pub fn emit_preview_svg(page: &TactilePage) -> String {
    let l = &page.layout;
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}mm\" height=\"{h}mm\" viewBox=\"0 0 {w} {h}\" role=\"img\" aria-labelledby=\"tactile-title tactile-desc\">",
        w = n(l.page_w),
        h = n(l.page_h)
    );
    let _ = writeln!(
        s,
        "<title id=\"tactile-title\">Tactile page preview</title>"
    );
    let _ = writeln!(
        s,
        "<desc id=\"tactile-desc\">{}</desc>",
        escape(&page.source_alt.flattened)
    );
    let _ = writeln!(
        s,
        "<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"#FFFFFF\"/>",
        n(l.page_w),
        n(l.page_h)
    );
    let m = l.printable();
    let _ = writeln!(
        s,
        "<rect class=\"margin\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#CCCCCC\" stroke-width=\"0.2\" stroke-dasharray=\"2 2\"/>",
        n(m.x),
        n(m.y),
        n(m.w),
        n(m.h)
    );
    s.push_str(
        "<g fill=\"none\" stroke=\"#000000\" stroke-linecap=\"round\" stroke-linejoin=\"round\">\n",
    );
    for stroke in &page.strokes {
        let pts: Vec<String> = stroke
            .points
            .iter()
            .map(|&(x, y)| format!("{},{}", n(x), n(y)))
            .collect();
        let _ = writeln!(
            s,
            "<polyline points=\"{}\" stroke-width=\"{}\"/>",
            pts.join(" "),
            n(stroke.width)
        );
    }
    s.push_str("</g>\n<g fill=\"#000000\">\n");
    for d in page.dots.iter().filter(|d| d.cell.is_none()) {
        let _ = writeln!(
            s,
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
            n(d.x),
            n(d.y),
            n(d.diameter / 2.0)
        );
    }
    for label in &page.labels {
        let _ = writeln!(
            s,
            "<g class=\"braille\" aria-label=\"{}\" data-unicode=\"{}\">",
            escape(&label.text),
            label.unicode()
        );
        let cells = label.first_cell..label.first_cell + label.cells.len();
        for d in page
            .dots
            .iter()
            .filter(|d| d.cell.is_some_and(|c| cells.contains(&c)))
        {
            let _ = writeln!(
                s,
                "<circle cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
                n(d.x),
                n(d.y),
                n(d.diameter / 2.0)
            );
        }
        s.push_str("</g>\n");
    }
    s.push_str("</g>\n</svg>\n");
    s
}
