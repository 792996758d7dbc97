//! sRGB colors, CIELAB distance, color-vision-deficiency simulation and
//! palette audits.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ColorError {
    #[error("invalid hex color '{0}' (expected #RRGGBB)")]
    InvalidHex(String),
    #[error("palette must contain at least one color")]
    EmptyPalette,
    #[error("palette colors {0} and {1} are identical at 8-bit precision")]
    DuplicateColor(String, String),
    #[error("unknown palette name '{0}'")]
    UnknownPalette(String),
    #[error("palette audit needs at least 2 colors, got {0}")]
    TooFewColors(usize),
}

/// Gamma-encoded sRGB with components in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rgb {
    pub r: f64,
    pub g: f64,
    pub b: f64,
}

impl Rgb {
    pub const BLACK: Rgb = Rgb::new(0.0, 0.0, 0.0);
    pub const WHITE: Rgb = Rgb::new(1.0, 1.0, 1.0);

    pub const fn new(r: f64, g: f64, b: f64) -> Rgb {
        Rgb { r, g, b }
    }

    pub fn from_u8(r: u8, g: u8, b: u8) -> Rgb {
        Rgb::new(r as f64 / 255.0, g as f64 / 255.0, b as f64 / 255.0)
    }

    pub fn gray(v: f64) -> Rgb {
        Rgb::new(v, v, v)
    }

    pub fn from_hex(s: &str) -> Result<Rgb, ColorError> {
        let err = || ColorError::InvalidHex(s.to_string());
        let hex = s.trim().strip_prefix('#').ok_or_else(err)?;
        if hex.len() != 6 || !hex.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err(err());
        }
        let channel = |i: usize| u8::from_str_radix(&hex[i..i + 2], 16).map_err(|_| err());
        Ok(Rgb::from_u8(channel(0)?, channel(2)?, channel(4)?))
    }

    /// 8-bit quantized channels, rounding to nearest.
    pub fn to_u8(self) -> [u8; 3] {
        let q = |c: f64| (c.clamp(0.0, 1.0) * 255.0).round() as u8;
        [q(self.r), q(self.g), q(self.b)]
    }

    /// Uppercase `#RRGGBB`.
    pub fn to_hex(self) -> String {
        let [r, g, b] = self.to_u8();
        format!("#{r:02X}{g:02X}{b:02X}")
    }

    pub fn to_linear(self) -> [f64; 3] {
        [
            srgb_to_linear(self.r),
            srgb_to_linear(self.g),
            srgb_to_linear(self.b),
        ]
    }

    pub fn from_linear(lin: [f64; 3]) -> Rgb {
        Rgb::new(
            linear_to_srgb(lin[0]),
            linear_to_srgb(lin[1]),
            linear_to_srgb(lin[2]),
        )
    }

    pub fn to_lab(self) -> Lab {
        Lab::from_rgb(self)
    }

    /// Relative luminance Y of the linearized color.
    pub fn luminance(self) -> f64 {
        let [r, g, b] = self.to_linear();
        0.2126 * r + 0.7152 * g + 0.0722 * b
    }
}

impl fmt::Display for Rgb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl FromStr for Rgb {
    type Err = ColorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Rgb::from_hex(s)
    }
}

impl Serialize for Rgb {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

/// IEC 61966-2-1 decoding of one channel.
pub fn srgb_to_linear(c: f64) -> f64 {
    if c <= 0.04045 {
        c / 12.92
    } else {
        ((c + 0.055) / 1.055).powf(2.4)
    }
}

/// IEC 61966-2-1 encoding of one channel.
pub fn linear_to_srgb(c: f64) -> f64 {
    if c <= 0.0031308 {
        c * 12.92
    } else {
        1.055 * c.powf(1.0 / 2.4) - 0.055
    }
}

// Linear sRGB -> XYZ (D65).
const SRGB_TO_XYZ: [[f64; 3]; 3] = [
    [0.4124564, 0.3575761, 0.1804375],
    [0.2126729, 0.7151522, 0.0721750],
    [0.0193339, 0.1191920, 0.9503041],
];

/// CIELAB under D65.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lab {
    pub l: f64,
    pub a: f64,
    pub b: f64,
}

impl Lab {
    pub fn from_rgb(c: Rgb) -> Lab {
        let lin = c.to_linear();
        let xyz = mat_vec(&SRGB_TO_XYZ, lin);
        // The reference white is the image of linear (1,1,1), so white maps to a = b = 0.
        let white = mat_vec(&SRGB_TO_XYZ, [1.0, 1.0, 1.0]);
        let f = |t: f64| {
            const DELTA: f64 = 6.0 / 29.0;
            if t > DELTA * DELTA * DELTA {
                t.cbrt()
            } else {
                t / (3.0 * DELTA * DELTA) + 4.0 / 29.0
            }
        };
        let fx = f(xyz[0] / white[0]);
        let fy = f(xyz[1] / white[1]);
        let fz = f(xyz[2] / white[2]);
        Lab {
            l: 116.0 * fy - 16.0,
            a: 500.0 * (fx - fy),
            b: 200.0 * (fy - fz),
        }
    }

    pub fn distance(self, other: Lab) -> f64 {
        let dl = self.l - other.l;
        let da = self.a - other.a;
        let db = self.b - other.b;
        (dl * dl + da * da + db * db).sqrt()
    }
}

/// CIE76 color difference.
pub fn delta_e(a: Rgb, b: Rgb) -> f64 {
    a.to_lab().distance(b.to_lab())
}

fn mat_vec(m: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    [
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    ]
}

/// Simulated deficiency, one per panel of the simulation grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CvdKind {
    Deutan,
    Protan,
    Tritan,
    Desaturate,
}

impl CvdKind {
    pub const ALL: [CvdKind; 4] = [
        CvdKind::Deutan,
        CvdKind::Protan,
        CvdKind::Tritan,
        CvdKind::Desaturate,
    ];

    pub const DICHROMACIES: [CvdKind; 3] = [CvdKind::Deutan, CvdKind::Protan, CvdKind::Tritan];

    /// Panel title used in the simulation grid.
    pub fn title(self) -> &'static str {
        match self {
            CvdKind::Deutan => "Deutan",
            CvdKind::Protan => "Protan",
            CvdKind::Tritan => "Tritan",
            CvdKind::Desaturate => "Desaturated",
        }
    }

    pub fn slug(self) -> &'static str {
        match self {
            CvdKind::Deutan => "deutan",
            CvdKind::Protan => "protan",
            CvdKind::Tritan => "tritan",
            CvdKind::Desaturate => "desaturated",
        }
    }

    /// Linear-RGB simulation matrix, `None` for desaturation.
    pub fn matrix(self) -> Option<&'static [[f64; 3]; 3]> {
        match self {
            CvdKind::Deutan => Some(&DEUTAN),
            CvdKind::Protan => Some(&PROTAN),
            CvdKind::Tritan => Some(&TRITAN),
            CvdKind::Desaturate => None,
        }
    }
}

impl fmt::Display for CvdKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.title())
    }
}

// Machado, Oliveira & Fernandes (2009) dichromacy matrices at severity 1.0,
// applied to linear RGB. Values match the colorspacious reference tables
// (`MACHADO_ET_AL_MATRICES[kind][100]`) to all six published decimals.
const PROTAN: [[f64; 3]; 3] = [
    [0.152286, 1.052583, -0.204868],
    [0.114503, 0.786281, 0.099216],
    [-0.003882, -0.048116, 1.051998],
];
const DEUTAN: [[f64; 3]; 3] = [
    [0.367322, 0.860646, -0.227968],
    [0.280085, 0.672501, 0.047413],
    [-0.011820, 0.042940, 0.968881],
];
const TRITAN: [[f64; 3]; 3] = [
    [1.255528, -0.076749, -0.178779],
    [-0.078411, 0.930809, 0.147602],
    [0.004733, 0.691367, 0.303900],
];

const fn rows_preserve_white(m: &[[f64; 3]; 3]) -> bool {
    let mut i = 0;
    while i < 3 {
        let s = m[i][0] + m[i][1] + m[i][2];
        if s < 1.0 - 1e-3 || s > 1.0 + 1e-3 {
            return false;
        }
        i += 1;
    }
    true
}

const _: () = assert!(rows_preserve_white(&PROTAN));
const _: () = assert!(rows_preserve_white(&DEUTAN));
const _: () = assert!(rows_preserve_white(&TRITAN));

/// Simulates how `c` appears under the given deficiency.
pub fn simulate_cvd(c: Rgb, kind: CvdKind) -> Rgb {
    let lin = c.to_linear();
    match kind.matrix() {
        Some(m) => {
            let out = mat_vec(m, lin);
            Rgb::from_linear(out.map(|v| v.clamp(0.0, 1.0)))
        }
        None => {
            let y = 0.2126 * lin[0] + 0.7152 * lin[1] + 0.0722 * lin[2];
            Rgb::from_linear([y; 3].map(|v| v.clamp(0.0, 1.0)))
        }
    }
}

/// Ordered group colors.
#[derive(Debug, Clone, PartialEq)]
pub struct Palette {
    name: Option<String>,
    colors: Vec<Rgb>,
}

impl Palette {
    pub fn new(name: Option<String>, colors: Vec<Rgb>) -> Result<Palette, ColorError> {
        if colors.is_empty() {
            return Err(ColorError::EmptyPalette);
        }
        for (i, a) in colors.iter().enumerate() {
            if let Some(b) = colors[..i].iter().find(|b| b.to_u8() == a.to_u8()) {
                return Err(ColorError::DuplicateColor(b.to_hex(), a.to_hex()));
            }
        }
        Ok(Palette { name, colors })
    }

    /// Parses a comma-separated hex list or a known palette name.
    pub fn parse(s: &str) -> Result<Palette, ColorError> {
        let t = s.trim();
        if !t.starts_with('#') {
            return Palette::named(t);
        }
        let colors = t
            .split(',')
            .map(Rgb::from_hex)
            .collect::<Result<Vec<_>, _>>()?;
        Palette::new(None, colors)
    }

    pub fn named(name: &str) -> Result<Palette, ColorError> {
        match name.to_ascii_lowercase().as_str() {
            "okabe-ito" | "okabeito" | "okabe_ito" => Ok(okabe_ito()),
            _ => Err(ColorError::UnknownPalette(name.to_string())),
        }
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn colors(&self) -> &[Rgb] {
        &self.colors
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<Rgb> {
        self.colors.get(i).copied()
    }
}

/// The eight Okabe-Ito colors: orange, sky blue, bluish green, yellow, blue,
/// vermillion, reddish purple, black.
pub fn okabe_ito() -> Palette {
    const HEX: [[u8; 3]; 8] = [
        [0xE6, 0x9F, 0x00],
        [0x56, 0xB4, 0xE9],
        [0x00, 0x9E, 0x73],
        [0xF0, 0xE4, 0x42],
        [0x00, 0x72, 0xB2],
        [0xD5, 0x5E, 0x00],
        [0xCC, 0x79, 0xA7],
        [0x00, 0x00, 0x00],
    ];
    Palette {
        name: Some("okabe-ito".to_string()),
        colors: HEX.iter().map(|&[r, g, b]| Rgb::from_u8(r, g, b)).collect(),
    }
}

pub const DEFAULT_AUDIT_THRESHOLD: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuditOptions {
    pub threshold: f64,
    /// Gate the pass flag on the desaturated panel too. Off by default:
    /// qualitative palettes such as Okabe-Ito are CVD-safe but not
    /// grayscale-safe.
    pub include_desaturate: bool,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions {
            threshold: DEFAULT_AUDIT_THRESHOLD,
            include_desaturate: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WorstPair {
    pub kind: CvdKind,
    pub a: Rgb,
    pub b: Rgb,
    pub delta_e: f64,
    /// Whether this kind counts toward the overall pass flag.
    pub gated: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub threshold: f64,
    pub pass: bool,
    pub worst: Vec<WorstPair>,
}

impl AuditReport {
    pub fn for_kind(&self, kind: CvdKind) -> Option<&WorstPair> {
        self.worst.iter().find(|w| w.kind == kind)
    }

    /// Line-oriented report. `color` wraps verdicts in ANSI escapes.
    pub fn to_text(&self, color: bool) -> String {
        let verdict = |ok: bool| -> String {
            match (ok, color) {
                (true, true) => "\x1b[32mPASS\x1b[0m".into(),
                (false, true) => "\x1b[31mFAIL\x1b[0m".into(),
                (true, false) => "PASS".into(),
                (false, false) => "FAIL".into(),
            }
        };
        let mut out = String::new();
        for w in &self.worst {
            out.push_str(&format!(
                "{:<12} {} min dE {:.2} ({} vs {}){}\n",
                w.kind.title(),
                verdict(w.pass),
                w.delta_e,
                w.a,
                w.b,
                if w.gated { "" } else { " [informational]" }
            ));
        }
        out.push_str(&format!(
            "overall      {} (threshold {})\n",
            verdict(self.pass),
            crate::format::number(self.threshold)
        ));
        out
    }
}

/// Minimum pairwise simulated CIE76 distance for each deficiency.
pub fn audit_palette(p: &Palette, opts: AuditOptions) -> Result<AuditReport, ColorError> {
    if p.len() < 2 {
        return Err(ColorError::TooFewColors(p.len()));
    }
    let mut worst = Vec::new();
    for kind in CvdKind::ALL {
        let sim: Vec<Rgb> = p.colors().iter().map(|&c| simulate_cvd(c, kind)).collect();
        let mut best: Option<(usize, usize, f64)> = None;
        for i in 0..sim.len() {
            for j in i + 1..sim.len() {
                let d = delta_e(sim[i], sim[j]);
                if best.is_none_or(|(_, _, b)| d < b) {
                    best = Some((i, j, d));
                }
            }
        }
        let (i, j, d) = best.expect("at least one pair");
        worst.push(WorstPair {
            kind,
            a: p.colors()[i],
            b: p.colors()[j],
            delta_e: d,
            gated: kind != CvdKind::Desaturate || opts.include_desaturate,
            pass: d >= opts.threshold,
        });
    }
    let pass = worst.iter().filter(|w| w.gated).all(|w| w.pass);
    Ok(AuditReport {
        threshold: opts.threshold,
        pass,
        worst,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn hex(s: &str) -> Rgb {
        Rgb::from_hex(s).unwrap()
    }

    #[test]
    fn transfer_fixed_points() {
        assert_eq!(srgb_to_linear(0.0), 0.0);
        assert_eq!(srgb_to_linear(1.0), 1.0);
        // ((0.5 + 0.055) / 1.055)^2.4 evaluated independently.
        assert_abs_diff_eq!(
            srgb_to_linear(0.5),
            0.214_041_140_482_232_55,
            epsilon = 1e-15
        );
    }

    #[test]
    fn hex_round_trip_and_case() {
        assert_eq!(hex("#e69f00").to_hex(), "#E69F00");
        assert!(Rgb::from_hex("E69F00").is_err());
        assert!(Rgb::from_hex("#E69F0").is_err());
        assert!(Rgb::from_hex("#GG9F00").is_err());
    }

    #[test]
    fn okabe_ito_canonical() {
        let p = okabe_ito();
        assert_eq!(p.len(), 8);
        let hexes: Vec<String> = p.colors().iter().map(|c| c.to_hex()).collect();
        // palette.colors("Okabe-Ito") values, reordered with black last.
        assert_eq!(
            hexes,
            [
                "#E69F00", "#56B4E9", "#009E73", "#F0E442", "#0072B2", "#D55E00", "#CC79A7",
                "#000000"
            ]
        );
        assert!(Palette::new(None, p.colors().to_vec()).is_ok());
    }

    #[test]
    fn palette_rejects_duplicates() {
        let err = Palette::parse("#FF0000,#ff0000").unwrap_err();
        assert!(matches!(err, ColorError::DuplicateColor(..)));
        assert_eq!(
            Palette::parse("").unwrap_err(),
            ColorError::UnknownPalette("".into())
        );
        assert!(matches!(
            Palette::new(None, vec![]),
            Err(ColorError::EmptyPalette)
        ));
    }

    #[test]
    fn delta_e_reference_values() {
        assert_eq!(delta_e(hex("#336699"), hex("#336699")), 0.0);
        assert_abs_diff_eq!(delta_e(Rgb::BLACK, Rgb::WHITE), 100.0, epsilon = 0.1);
        // colorspacious sRGB1 -> CIELab oracle: 113.1096.
        assert_abs_diff_eq!(
            delta_e(hex("#E69F00"), hex("#56B4E9")),
            113.1096,
            epsilon = 0.05
        );
    }

    #[test]
    fn white_preserved_by_every_kind() {
        for kind in CvdKind::ALL {
            let w = simulate_cvd(Rgb::WHITE, kind).to_u8();
            for c in w {
                assert!(c >= 254, "{kind:?} -> {w:?}");
            }
        }
    }

    #[test]
    fn simulated_primaries_match_reference() {
        // colorspacious machado(severity=100) + clip, gamma re-encoded.
        let cases = [
            (CvdKind::Deutan, "#FF0000", [0.64005956, 0.56580694, 0.0]),
            (
                CvdKind::Deutan,
                "#00FF00",
                [0.93605105, 0.83924774, 0.22919187],
            ),
            (CvdKind::Protan, "#FF0000", [0.42660847, 0.37265428, 0.0]),
            (CvdKind::Protan, "#00FF00", [1.0, 0.89942807, 0.0]),
            (CvdKind::Tritan, "#00FF00", [0.0, 0.96894752, 0.84961627]),
            (CvdKind::Desaturate, "#FF0000", [0.49843992; 3]),
        ];
        for (kind, c, want) in cases {
            let got = simulate_cvd(hex(c), kind);
            assert_abs_diff_eq!(got.r, want[0], epsilon = 1e-6);
            assert_abs_diff_eq!(got.g, want[1], epsilon = 1e-6);
            assert_abs_diff_eq!(got.b, want[2], epsilon = 1e-6);
        }
    }

    #[test]
    fn red_green_simulated_distances_frozen() {
        // Frozen from the colorspacious oracle run (CIE76 on simulated colors).
        let r = hex("#FF0000");
        let g = hex("#00FF00");
        let d = |k| delta_e(simulate_cvd(r, k), simulate_cvd(g, k));
        assert_abs_diff_eq!(d(CvdKind::Deutan), 27.7506, epsilon = 0.05);
        assert_abs_diff_eq!(d(CvdKind::Protan), 65.8755, epsilon = 0.05);
        assert_abs_diff_eq!(d(CvdKind::Tritan), 153.2664, epsilon = 0.05);
        assert_abs_diff_eq!(d(CvdKind::Desaturate), 34.5037, epsilon = 0.05);
    }

    #[test]
    fn okabe_ito_audit_values() {
        let report = audit_palette(&okabe_ito(), AuditOptions::default()).unwrap();
        assert!(report.pass);
        let deutan = report.for_kind(CvdKind::Deutan).unwrap();
        assert_abs_diff_eq!(deutan.delta_e, 17.0347, epsilon = 0.05);
        assert_eq!(
            (deutan.a.to_hex(), deutan.b.to_hex()),
            ("#E69F00".into(), "#F0E442".into())
        );
        assert_abs_diff_eq!(
            report.for_kind(CvdKind::Protan).unwrap().delta_e,
            20.6632,
            epsilon = 0.05
        );
        assert_abs_diff_eq!(
            report.for_kind(CvdKind::Tritan).unwrap().delta_e,
            16.0546,
            epsilon = 0.05
        );
        let desat = report.for_kind(CvdKind::Desaturate).unwrap();
        assert_abs_diff_eq!(desat.delta_e, 0.7805, epsilon = 0.05);
        assert!(!desat.gated && !desat.pass);

        let strict = AuditOptions {
            include_desaturate: true,
            ..AuditOptions::default()
        };
        assert!(!audit_palette(&okabe_ito(), strict).unwrap().pass);
    }

    #[test]
    fn okabe_ito_first_three_pass() {
        let p = Palette::new(None, okabe_ito().colors()[..3].to_vec()).unwrap();
        let report = audit_palette(&p, AuditOptions::default()).unwrap();
        assert!(report.pass);
        assert_abs_diff_eq!(
            report.for_kind(CvdKind::Deutan).unwrap().delta_e,
            48.8686,
            epsilon = 0.05
        );
    }

    #[test]
    fn audit_needs_two_colors() {
        let p = Palette::parse("#123456").unwrap();
        assert_eq!(
            audit_palette(&p, AuditOptions::default()).unwrap_err(),
            ColorError::TooFewColors(1)
        );
    }

    #[test]
    fn report_text_has_one_line_per_kind() {
        let report = audit_palette(&okabe_ito(), AuditOptions::default()).unwrap();
        let text = report.to_text(false);
        assert_eq!(text.lines().count(), 5);
        assert!(text.contains("Desaturated  FAIL"));
        assert!(text.ends_with("overall      PASS (threshold 10)\n"));
        assert!(!text.contains('\x1b'));
        assert!(report.to_text(true).contains("\x1b[32m"));
    }
}
