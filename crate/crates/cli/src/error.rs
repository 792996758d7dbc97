use std::fmt;
use std::io;
use std::path::{Path, PathBuf};

use polyrep_core::{ChartError, Error, RenderError};

/// A failure with a stable code printed as `error[CODE]: message`.
#[derive(Debug)]
pub struct CliError {
    pub code: &'static str,
    pub message: String,
    io: bool,
}

impl CliError {
    pub fn new(code: &'static str, message: impl Into<String>) -> CliError {
        CliError {
            code,
            message: message.into(),
            io: false,
        }
    }

    pub fn io(path: &Path, err: io::Error) -> CliError {
        CliError {
            code: "E-IO",
            message: format!("{}: {err}", path.display()),
            io: true,
        }
    }

    /// 2 for I/O failures, 1 for everything else.
    pub fn exit_code(&self) -> u8 {
        if self.io {
            2
        } else {
            1
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error[{}]: {}", self.code, self.message)
    }
}

fn chart_error(e: ChartError) -> CliError {
    match e {
        ChartError::Io { path, source } => CliError::io(&path, source),
        ChartError::Data(d) => CliError::new("E-DATA", d.to_string()),
        ChartError::Color(c) => CliError::new("E-PALETTE", c.to_string()),
        other => CliError::new("E-SPEC", other.to_string()),
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        match e {
            Error::Chart(c) => chart_error(c),
            Error::Render(RenderError::Chart(c)) => chart_error(c),
            Error::Render(RenderError::Data(d)) => CliError::new("E-DATA", d.to_string()),
            Error::Render(RenderError::Stats(s)) => CliError::new("E-DATA", s.to_string()),
            Error::Render(RenderError::Alt(a)) => CliError::new("E-ALT", a.to_string()),
            Error::Data(d) => CliError::new("E-DATA", d.to_string()),
            Error::Color(c) => CliError::new("E-PALETTE", c.to_string()),
            Error::Stats(s) => CliError::new("E-DATA", s.to_string()),
            Error::Render(r) => CliError::new("E-RENDER", r.to_string()),
            Error::Alt(a) => CliError::new("E-ALT", a.to_string()),
            Error::Sonify(s) => CliError::new("E-SONIFY", s.to_string()),
            Error::Unsonifiable(m) => CliError::new("E-SONIFY", m),
            Error::Wav(w) => CliError::new("E-SONIFY", w.to_string()),
            Error::Tactile(t) => CliError::new("E-TACTILE", t.to_string()),
        }
    }
}

macro_rules! via_core {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> CliError {
                Error::from(e).into()
            }
        }
    )*};
}

via_core!(
    ChartError,
    RenderError,
    polyrep_core::AltError,
    polyrep_core::SonifyError,
    polyrep_core::TactileError,
    polyrep_core::ColorError,
    polyrep_core::StatsError
);

pub fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::io(path, e))
}

pub fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

/// `path` with `suffix` appended to its file name.
pub fn sidecar(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}
