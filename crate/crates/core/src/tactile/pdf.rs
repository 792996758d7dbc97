//! Single-page PDF 1.4 writer for tactile pages. Output is black ink only
//! and carries no timestamps, so identical pages give identical bytes.

use std::fmt::Write;

use crate::format::fixed;

use super::TactilePage;

pub const MM_TO_PT: f64 = 72.0 / 25.4;
/// Control-point distance for a quarter circle drawn as a cubic Bézier.
const KAPPA: f64 = 0.552_284_749_8;

fn n(v: f64) -> String {
    fixed(v, 3)
}

fn content_stream(page: &TactilePage) -> String {
    let h = page.layout.page_h;
    let pt = |x: f64, y: f64| (x * MM_TO_PT, (h - y) * MM_TO_PT);
    let mut s = String::new();
    s.push_str("1 J\n1 j\n0 G\n0 g\n");
    for stroke in &page.strokes {
        let _ = writeln!(s, "{} w", n(stroke.width * MM_TO_PT));
        for (i, &(x, y)) in stroke.points.iter().enumerate() {
            let (px, py) = pt(x, y);
            let _ = writeln!(s, "{} {} {}", n(px), n(py), if i == 0 { "m" } else { "l" });
        }
        s.push_str("S\n");
    }
    for d in &page.dots {
        let (cx, cy) = pt(d.x, d.y);
        let r = d.diameter / 2.0 * MM_TO_PT;
        let k = r * KAPPA;
        let _ = writeln!(s, "{} {} m", n(cx + r), n(cy));
        let arcs = [
            [(cx + r, cy + k), (cx + k, cy + r), (cx, cy + r)],
            [(cx - k, cy + r), (cx - r, cy + k), (cx - r, cy)],
            [(cx - r, cy - k), (cx - k, cy - r), (cx, cy - r)],
            [(cx + k, cy - r), (cx + r, cy - k), (cx + r, cy)],
        ];
        for [a, b, c] in arcs {
            let _ = writeln!(
                s,
                "{} {} {} {} {} {} c",
                n(a.0),
                n(a.1),
                n(b.0),
                n(b.1),
                n(c.0),
                n(c.1)
            );
        }
        s.push_str("f\n");
    }
    s
}

/// Serializes the page as a minimal PDF: catalog, page tree, one page and
/// one uncompressed content stream, with a byte-accurate xref table.
pub fn emit_pdf(page: &TactilePage) -> Vec<u8> {
    let w = page.layout.page_w * MM_TO_PT;
    let h = page.layout.page_h * MM_TO_PT;
    let content = content_stream(page);
    let objects = [
        "<< /Type /Catalog /Pages 2 0 R >>".to_string(),
        "<< /Type /Pages /Kids [3 0 R] /Count 1 >>".to_string(),
        format!(
            "<< /Type /Page /Parent 2 0 R /MediaBox [0 0 {} {}] /Resources << >> /Contents 4 0 R >>",
            n(w),
            n(h)
        ),
        format!("<< /Length {} >>\nstream\n{content}endstream", content.len()),
    ];

    let mut out: Vec<u8> = Vec::new();
    out.extend_from_slice(b"%PDF-1.4\n%\xE2\xE3\xCF\xD3\n");
    let mut offsets = Vec::with_capacity(objects.len());
    for (i, body) in objects.iter().enumerate() {
        offsets.push(out.len());
        out.extend_from_slice(format!("{} 0 obj\n{body}\nendobj\n", i + 1).as_bytes());
    }
    let xref_at = out.len();
    let mut xref = format!("xref\n0 {}\n0000000000 65535 f \n", objects.len() + 1);
    for off in offsets {
        let _ = writeln!(xref, "{off:010} 00000 n ");
    }
    let _ = write!(
        xref,
        "trailer\n<< /Size {} /Root 1 0 R >>\nstartxref\n{xref_at}\n%%EOF\n",
        objects.len() + 1
    );
    out.extend_from_slice(xref.as_bytes());
    out
}
