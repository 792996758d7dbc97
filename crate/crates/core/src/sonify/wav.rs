//! 16-bit stereo PCM RIFF/WAVE.

use thiserror::Error;

use super::AudioBuffer;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WavError {
    #[error("not a RIFF/WAVE file")]
    NotWave,
    #[error("missing '{0}' chunk")]
    MissingChunk(&'static str),
    #[error("unsupported wav format: {0}")]
    Unsupported(String),
    #[error("truncated wav data")]
    Truncated,
}

const CHANNELS: u16 = 2;
const BITS: u16 = 16;
const BLOCK_ALIGN: u16 = CHANNELS * BITS / 8;

/// Converts a sample in `[-1, 1]` to i16, rounding half away from zero.
pub fn quantize(s: f64) -> i16 {
    (s.clamp(-1.0, 1.0) * i16::MAX as f64).round() as i16
}

pub fn dequantize(v: i16) -> f64 {
    v as f64 / i16::MAX as f64
}

pub fn write_wav(buf: &AudioBuffer) -> Vec<u8> {
    let data_len = buf.frames.len() as u32 * BLOCK_ALIGN as u32;
    let mut out = Vec::with_capacity(44 + data_len as usize);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(36 + data_len).to_le_bytes());
    out.extend_from_slice(b"WAVE");

    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes()); // PCM
    out.extend_from_slice(&CHANNELS.to_le_bytes());
    out.extend_from_slice(&buf.rate.to_le_bytes());
    out.extend_from_slice(&(buf.rate * BLOCK_ALIGN as u32).to_le_bytes());
    out.extend_from_slice(&BLOCK_ALIGN.to_le_bytes());
    out.extend_from_slice(&BITS.to_le_bytes());

    out.extend_from_slice(b"data");
    out.extend_from_slice(&data_len.to_le_bytes());
    for [l, r] in &buf.frames {
        out.extend_from_slice(&quantize(*l).to_le_bytes());
        out.extend_from_slice(&quantize(*r).to_le_bytes());
    }
    out
}

fn u16_at(b: &[u8], i: usize) -> Result<u16, WavError> {
    b.get(i..i + 2)
        .map(|s| u16::from_le_bytes([s[0], s[1]]))
        .ok_or(WavError::Truncated)
}

fn u32_at(b: &[u8], i: usize) -> Result<u32, WavError> {
    b.get(i..i + 4)
        .map(|s| u32::from_le_bytes([s[0], s[1], s[2], s[3]]))
        .ok_or(WavError::Truncated)
}

/// Reads the 16-bit stereo PCM files produced by [`write_wav`]. Unknown
/// chunks are skipped.
pub fn read_wav(bytes: &[u8]) -> Result<AudioBuffer, WavError> {
    if bytes.len() < 12 || &bytes[0..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
        return Err(WavError::NotWave);
    }
    let mut pos = 12;
    let mut rate = None;
    while pos + 8 <= bytes.len() {
        let id = &bytes[pos..pos + 4];
        let len = u32_at(bytes, pos + 4)? as usize;
        let body = pos + 8;
        let end = body.checked_add(len).ok_or(WavError::Truncated)?;
        if end > bytes.len() {
            return Err(WavError::Truncated);
        }
        match id {
            b"fmt " => {
                let format = u16_at(bytes, body)?;
                let channels = u16_at(bytes, body + 2)?;
                let bits = u16_at(bytes, body + 14)?;
                if format != 1 || channels != CHANNELS || bits != BITS {
                    return Err(WavError::Unsupported(format!(
                        "format {format}, {channels} channels, {bits} bits"
                    )));
                }
                rate = Some(u32_at(bytes, body + 4)?);
            }
            b"data" => {
                let rate = rate.ok_or(WavError::MissingChunk("fmt "))?;
                let frames = bytes[body..end]
                    .chunks_exact(BLOCK_ALIGN as usize)
                    .map(|c| {
                        [
                            dequantize(i16::from_le_bytes([c[0], c[1]])),
                            dequantize(i16::from_le_bytes([c[2], c[3]])),
                        ]
                    })
                    .collect();
                return Ok(AudioBuffer { frames, rate });
            }
            _ => {}
        }
        // Chunks are padded to even length.
        pos = end + (len & 1);
    }
    Err(WavError::MissingChunk("data"))
}
