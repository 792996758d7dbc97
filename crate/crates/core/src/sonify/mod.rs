//! Stereo sonification: x position drives left/right pan, y value drives
//! pitch.

mod wav;

pub use wav::{read_wav, write_wav, WavError};

use std::f64::consts::{FRAC_PI_2, TAU};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SonifyError {
    #[error("cannot sonify an empty series")]
    Empty,
    #[error("a sweep needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("x and y have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("invalid sonification settings: {0}")]
    Config(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SonifyMode {
    /// One tone per point.
    Discrete,
    /// Continuous glide through the points.
    Sweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PitchScale {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SonifyConfig {
    pub duration_s: f64,
    pub sample_rate: u32,
    pub f_min: f64,
    pub f_max: f64,
    pub mode: SonifyMode,
    pub gap_fraction: f64,
    pub amplitude: f64,
    pub pitch_scale: PitchScale,
    /// y values mapped to `f_min` and `f_max`; the series range when unset.
    pub pitch_domain: Option<(f64, f64)>,
}

impl Default for SonifyConfig {
    fn default() -> Self {
        SonifyConfig {
            duration_s: 5.0,
            sample_rate: 44_100,
            f_min: 440.0,
            f_max: 880.0,
            mode: SonifyMode::Discrete,
            gap_fraction: 0.15,
            amplitude: 0.8,
            pitch_scale: PitchScale::Linear,
            pitch_domain: None,
        }
    }
}

/// Linear fade applied to each tone edge, in seconds.
pub const FADE_S: f64 = 0.005;

impl SonifyConfig {
    pub fn validate(&self) -> Result<(), SonifyError> {
        let bad = |m: String| Err(SonifyError::Config(m));
        if !(self.duration_s > 0.0 && self.duration_s.is_finite()) {
            return bad(format!(
                "duration must be positive, got {}",
                self.duration_s
            ));
        }
        if self.sample_rate == 0 {
            return bad("sample rate must be positive".into());
        }
        let nyquist = self.sample_rate as f64 / 2.0;
        if !(0.0 < self.f_min && self.f_min < self.f_max && self.f_max < nyquist) {
            return bad(format!(
                "need 0 < fmin < fmax < {nyquist} Hz, got fmin {} and fmax {}",
                self.f_min, self.f_max
            ));
        }
        if !(0.0..1.0).contains(&self.gap_fraction) {
            return bad(format!(
                "gap fraction must be in [0, 1), got {}",
                self.gap_fraction
            ));
        }
        if !(0.0..=1.0).contains(&self.amplitude) {
            return bad(format!(
                "amplitude must be in [0, 1], got {}",
                self.amplitude
            ));
        }
        if let Some((lo, hi)) = self.pitch_domain {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return bad(format!(
                    "pitch domain must be finite with lo <= hi, got [{lo}, {hi}]"
                ));
            }
        }
        Ok(())
    }

    /// `round(duration × rate)`.
    pub fn frame_count(&self) -> usize {
        (self.duration_s * self.sample_rate as f64).round() as usize
    }
}

/// Interleaved stereo samples in `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioBuffer {
    pub frames: Vec<[f64; 2]>,
    pub rate: u32,
}

impl AudioBuffer {
    pub fn silence(frames: usize, rate: u32) -> AudioBuffer {
        AudioBuffer {
            frames: vec![[0.0; 2]; frames],
            rate,
        }
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn peak(&self) -> f64 {
        self.frames
            .iter()
            .flat_map(|f| f.iter())
            .fold(0.0, |m, s| m.max(s.abs()))
    }
}

/// Maps `y` within `[y_lo, y_hi]` to a frequency between `f_min` and `f_max`.
pub fn map_pitch(y: f64, y_lo: f64, y_hi: f64, cfg: &SonifyConfig) -> f64 {
    let t = if y_hi == y_lo {
        0.5
    } else {
        ((y - y_lo) / (y_hi - y_lo)).clamp(0.0, 1.0)
    };
    match cfg.pitch_scale {
        PitchScale::Linear => cfg.f_min + t * (cfg.f_max - cfg.f_min),
        PitchScale::Log => cfg.f_min * (cfg.f_max / cfg.f_min).powf(t),
    }
}

/// Pan position in `[0, 1]`, 0 hard left.
pub fn map_pan(x: f64, x_lo: f64, x_hi: f64) -> f64 {
    if x_hi == x_lo {
        0.5
    } else {
        ((x - x_lo) / (x_hi - x_lo)).clamp(0.0, 1.0)
    }
}

/// Constant-power (left, right) gains for a pan position.
pub fn pan_gains(pan: f64) -> (f64, f64) {
    let a = pan * FRAC_PI_2;
    (a.cos(), a.sin())
}

fn check_series(x: &[f64], y: &[f64]) -> Result<Vec<(f64, f64)>, SonifyError> {
    if x.len() != y.len() {
        return Err(SonifyError::LengthMismatch(x.len(), y.len()));
    }
    if x.is_empty() {
        return Err(SonifyError::Empty);
    }
    let mut pts: Vec<(f64, f64)> = x.iter().copied().zip(y.iter().copied()).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(pts)
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    })
}

fn fade_gain(i: usize, len: usize, fade: usize) -> f64 {
    if fade == 0 {
        return 1.0;
    }
    let from_start = (i + 1) as f64 / fade as f64;
    let from_end = (len - i) as f64 / fade as f64;
    from_start.min(from_end).min(1.0)
}

/// Sample range `[start, end)` of slot `i` out of `n` equal slots.
pub fn slot_bounds(i: usize, n: usize, total: usize) -> (usize, usize) {
    let at = |k: usize| ((k as f64) * total as f64 / n as f64).round() as usize;
    (at(i), at(i + 1))
}

/// Audible length of a slot after the trailing gap.
pub fn tone_len(slot_len: usize, gap_fraction: f64) -> usize {
    slot_len - (gap_fraction * slot_len as f64).round() as usize
}

/// One sine tone per point, ordered by x.
pub fn sonify_points(x: &[f64], y: &[f64], cfg: &SonifyConfig) -> Result<AudioBuffer, SonifyError> {
    cfg.validate()?;
    let pts = check_series(x, y)?;
    let (x_lo, x_hi) = range(pts.iter().map(|p| p.0));
    let (y_lo, y_hi) = cfg
        .pitch_domain
        .unwrap_or_else(|| range(pts.iter().map(|p| p.1)));
    let total = cfg.frame_count();
    let rate = cfg.sample_rate as f64;
    let fade = (FADE_S * rate).round() as usize;
    let mut buf = AudioBuffer::silence(total, cfg.sample_rate);

    for (i, &(px, py)) in pts.iter().enumerate() {
        let (start, end) = slot_bounds(i, pts.len(), total);
        let len = tone_len(end - start, cfg.gap_fraction);
        let freq = map_pitch(py, y_lo, y_hi, cfg);
        let (gl, gr) = pan_gains(map_pan(px, x_lo, x_hi));
        let fade = fade.min(len / 2);
        for k in 0..len {
            let s = cfg.amplitude * fade_gain(k, len, fade) * (TAU * freq * k as f64 / rate).sin();
            buf.frames[start + k] = [gl * s, gr * s];
        }
    }
    Ok(buf)
}

/// A continuous glide whose pitch and pan follow the points in x order.
///
/// Time is proportional to x; when all x are equal the points are spaced
/// evenly instead. Phase is accumulated sample by sample so the waveform
/// never jumps.
pub fn sonify_sweep(x: &[f64], y: &[f64], cfg: &SonifyConfig) -> Result<AudioBuffer, SonifyError> {
    cfg.validate()?;
    if x.len() == y.len() && x.len() < 2 {
        return Err(SonifyError::TooFewPoints(x.len()));
    }
    let pts = check_series(x, y)?;
    let (x_lo, x_hi) = range(pts.iter().map(|p| p.0));
    let (y_lo, y_hi) = cfg
        .pitch_domain
        .unwrap_or_else(|| range(pts.iter().map(|p| p.1)));
    let total = cfg.frame_count();
    let rate = cfg.sample_rate as f64;
    let fade = ((FADE_S * rate).round() as usize).min(total / 2);

    // Position of each point along [0, 1] of the render.
    let stops: Vec<f64> = if x_hi > x_lo {
        pts.iter().map(|p| (p.0 - x_lo) / (x_hi - x_lo)).collect()
    } else {
        (0..pts.len())
            .map(|i| i as f64 / (pts.len() - 1) as f64)
            .collect()
    };
    let freqs: Vec<f64> = pts
        .iter()
        .map(|p| map_pitch(p.1, y_lo, y_hi, cfg))
        .collect();
    let pans: Vec<f64> = pts.iter().map(|p| map_pan(p.0, x_lo, x_hi)).collect();

    let mut buf = AudioBuffer::silence(total, cfg.sample_rate);
    let mut phase = 0.0f64;
    let mut seg = 0usize;
    for k in 0..total {
        let u = if total > 1 {
            k as f64 / (total - 1) as f64
        } else {
            0.0
        };
        while seg + 2 < stops.len() && u > stops[seg + 1] {
            seg += 1;
        }
        let (a, b) = (stops[seg], stops[seg + 1]);
        let t = if b > a {
            ((u - a) / (b - a)).clamp(0.0, 1.0)
        } else {
            1.0
        };
        let freq = freqs[seg] + t * (freqs[seg + 1] - freqs[seg]);
        let pan = pans[seg] + t * (pans[seg + 1] - pans[seg]);
        let (gl, gr) = pan_gains(pan);
        let s = cfg.amplitude * fade_gain(k, total, fade) * phase.sin();
        buf.frames[k] = [gl * s, gr * s];
        phase += TAU * freq / rate;
        if phase >= TAU {
            phase -= TAU;
        }
    }
    Ok(buf)
}

/// Renders according to `cfg.mode`.
pub fn sonify(x: &[f64], y: &[f64], cfg: &SonifyConfig) -> Result<AudioBuffer, SonifyError> {
    match cfg.mode {
        SonifyMode::Discrete => sonify_points(x, y, cfg),
        SonifyMode::Sweep => sonify_sweep(x, y, cfg),
    }
}
