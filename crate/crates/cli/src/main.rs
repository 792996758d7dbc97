mod error;

use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use polyrep_core::color::AuditOptions;
use polyrep_core::sonify::PitchScale;
use polyrep_core::{
    alt_text, audit_palette, auto_alt, checklist_score, cvd_grid_scene, emit_pdf, emit_preview_svg,
    emit_svg, fitted_series, layout, sound_series, tactualize, write_wav, ChartSpec, DataSource,
    Dataset, Palette, Paper, SonifyConfig, SonifyMode, TactileLayout,
};

use error::{read, sidecar, write, CliError};

/// Accessible chart representations from a CSV file and a JSON chart spec.
#[derive(Debug, Parser)]
#[command(name = "polyrep", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Render the chart as SVG with embedded alt text and a .alt.txt sidecar
    Render(OutputArgs),
    /// Render the chart under three color vision deficiencies and grayscale
    CvdGrid(OutputArgs),
    /// Print the chart's alt text
    Alt(AltArgs),
    /// Write a stereo WAV sonification of the chart
    Sonify(SonifyArgs),
    /// Write an emboss-ready tactile PDF with braille labels
    Tactile(TactileArgs),
    /// Check a palette for color vision deficiency confusions
    AuditPalette(AuditArgs),
}

#[derive(Debug, Args)]
struct SpecArgs {
    /// Chart spec (JSON)
    spec: PathBuf,
    /// CSV file to use instead of the spec's data source
    #[arg(long, value_name = "CSV")]
    data: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[command(flatten)]
    input: SpecArgs,
    /// Output path [default: spec path with the output extension]
    #[arg(short, long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct AltArgs {
    #[command(flatten)]
    input: SpecArgs,
    /// Print JSON with sentences, flattened text and checklist coverage
    #[arg(long)]
    json: bool,
    /// Ignore alt text written in the spec and generate it from the chart
    #[arg(long)]
    auto: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    /// One tone per data point
    Discrete,
    /// Continuous glide through the data points
    Sweep,
    /// Continuous glide along the least-squares line
    Regression,
}

#[derive(Debug, Args)]
struct SonifyArgs {
    #[command(flatten)]
    out: OutputArgs,
    /// Length of the audio in seconds
    #[arg(long, default_value_t = 5.0)]
    duration: f64,
    /// Pitch for the smallest y value, in Hz
    #[arg(long, default_value_t = 440.0)]
    fmin: f64,
    /// Pitch for the largest y value, in Hz
    #[arg(long, default_value_t = 880.0)]
    fmax: f64,
    /// How the data points become sound
    #[arg(long, value_enum, default_value_t = ModeArg::Discrete)]
    mode: ModeArg,
    /// Sample rate in Hz
    #[arg(long, default_value_t = 44_100)]
    rate: u32,
    /// Space pitches evenly in log frequency instead of linearly
    #[arg(long)]
    log_pitch: bool,
    /// Silent fraction at the end of each discrete tone
    #[arg(long, default_value_t = 0.15)]
    gap: f64,
    /// Peak amplitude in [0, 1]
    #[arg(long, default_value_t = 0.8)]
    amplitude: f64,
    /// Sonify bar charts: bar order drives pan and count drives pitch
    #[arg(long)]
    allow_bars: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PaperArg {
    Letter,
    A4,
    #[value(name = "braille11x11")]
    Braille11x11,
}

#[derive(Debug, Args)]
struct TactileArgs {
    #[command(flatten)]
    out: OutputArgs,
    /// Page size
    #[arg(long, value_enum, default_value_t = PaperArg::Letter)]
    paper: PaperArg,
    /// Also write an SVG preview to <PATH>.preview.svg
    #[arg(long)]
    preview: bool,
}

#[derive(Debug, Args)]
struct AuditArgs {
    /// Palette name or comma-separated hex colors
    #[arg(default_value = "okabe-ito")]
    palette: String,
    /// Minimum acceptable CIE76 distance between simulated colors
    #[arg(long, default_value_t = polyrep_core::color::DEFAULT_AUDIT_THRESHOLD)]
    threshold: f64,
    /// Print the report as JSON
    #[arg(long)]
    json: bool,
    /// Also fail the audit when the grayscale panel has confusable colors
    #[arg(long)]
    include_desaturate: bool,
}

struct Loaded {
    spec: ChartSpec,
    data: Dataset,
}

fn load(args: &SpecArgs) -> Result<Loaded, CliError> {
    let bytes = read(&args.spec)?;
    let mut spec = ChartSpec::parse(&bytes)?;
    if let Some(csv) = &args.data {
        spec.data = Some(DataSource::Csv(csv.clone()));
    }
    let base = match &args.data {
        Some(_) => None,
        None => args.spec.parent(),
    };
    let data = spec.load_data(base)?;
    Ok(Loaded { spec, data })
}

fn output_path(out: &OutputArgs, ext: &str) -> PathBuf {
    out.output
        .clone()
        .unwrap_or_else(|| out.input.spec.with_extension(ext))
}

fn use_color() -> bool {
    std::env::var_os("POLYREP_NO_COLOR").is_none() && std::io::stdout().is_terminal()
}

fn print(text: &str) -> Result<(), CliError> {
    let mut stdout = std::io::stdout().lock();
    stdout
        .write_all(text.as_bytes())
        .and_then(|_| stdout.flush())
        .map_err(|e| CliError::io(Path::new("<stdout>"), e))
}

fn render(args: &OutputArgs) -> Result<(), CliError> {
    let Loaded { spec, data } = load(&args.input)?;
    let scene = layout(&spec, &data)?;
    let alt = alt_text(&spec, &scene)?;
    let path = output_path(args, "svg");
    write(&path, &emit_svg(&scene, &alt))?;
    write(
        &sidecar(&path, ".alt.txt"),
        format!("{}\n", alt.flattened).as_bytes(),
    )
}

fn cvd(args: &OutputArgs) -> Result<(), CliError> {
    let Loaded { spec, data } = load(&args.input)?;
    let scene = layout(&spec, &data)?;
    let alt = alt_text(&spec, &scene)?;
    write(&output_path(args, "cvd.svg"), &cvd_grid_scene(&scene, &alt))
}

fn alt(args: &AltArgs) -> Result<(), CliError> {
    let Loaded { spec, data } = load(&args.input)?;
    let scene = layout(&spec, &data)?;
    let (alt, source) = if args.auto || spec.manual_alt.is_none() {
        (auto_alt(&scene.summary)?, "auto")
    } else {
        (alt_text(&spec, &scene)?, "manual")
    };
    if args.json {
        let doc = serde_json::json!({
            "source": source,
            "sentences": alt.sentences,
            "flattened": alt.flattened,
            "checklist": checklist_score(&alt, &spec),
        });
        let text = serde_json::to_string_pretty(&doc).expect("json values serialize");
        print(&format!("{text}\n"))
    } else {
        print(&format!("{}\n", alt.flattened))
    }
}

fn sonify(args: &SonifyArgs) -> Result<(), CliError> {
    let Loaded { spec, data } = load(&args.out.input)?;
    let (x, y) = sound_series(&spec, &data, args.allow_bars)?;
    let mut cfg = SonifyConfig {
        duration_s: args.duration,
        sample_rate: args.rate,
        f_min: args.fmin,
        f_max: args.fmax,
        mode: SonifyMode::Discrete,
        gap_fraction: args.gap,
        amplitude: args.amplitude,
        pitch_scale: if args.log_pitch {
            PitchScale::Log
        } else {
            PitchScale::Linear
        },
        pitch_domain: None,
    };
    let buf = match args.mode {
        ModeArg::Discrete => polyrep_core::sonify(&x, &y, &cfg)?,
        ModeArg::Sweep => {
            cfg.mode = SonifyMode::Sweep;
            polyrep_core::sonify(&x, &y, &cfg)?
        }
        ModeArg::Regression => {
            let fitted = fitted_series(&x, &y)?;
            cfg.mode = SonifyMode::Sweep;
            cfg.pitch_domain = Some(fitted.observed);
            polyrep_core::sonify(&fitted.x, &fitted.y, &cfg)?
        }
    };
    write(&output_path(&args.out, "wav"), &write_wav(&buf))
}

fn tactile(args: &TactileArgs) -> Result<(), CliError> {
    let Loaded { spec, data } = load(&args.out.input)?;
    let scene = layout(&spec, &data)?;
    let alt = alt_text(&spec, &scene)?;
    let paper = match args.paper {
        PaperArg::Letter => Paper::Letter,
        PaperArg::A4 => Paper::A4,
        PaperArg::Braille11x11 => Paper::Braille11x11,
    };
    let page = tactualize(&scene, &alt, &TactileLayout::for_paper(paper))?;
    let path = output_path(&args.out, "pdf");
    write(&path, &emit_pdf(&page))?;
    if args.preview {
        write(
            &sidecar(&path, ".preview.svg"),
            emit_preview_svg(&page).as_bytes(),
        )?;
    }
    Ok(())
}

/// Returns whether the palette passed.
fn audit(args: &AuditArgs) -> Result<bool, CliError> {
    let palette = Palette::parse(&args.palette)?;
    let opts = AuditOptions {
        threshold: args.threshold,
        include_desaturate: args.include_desaturate,
    };
    let report = audit_palette(&palette, opts)?;
    if args.json {
        let text = serde_json::to_string_pretty(&report).expect("report serializes");
        print(&format!("{text}\n"))?;
    } else {
        print(&report.to_text(use_color()))?;
    }
    Ok(report.pass)
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match &cli.command {
        Command::Render(a) => render(a)?,
        Command::CvdGrid(a) => cvd(a)?,
        Command::Alt(a) => alt(a)?,
        Command::Sonify(a) => sonify(a)?,
        Command::Tactile(a) => tactile(a)?,
        Command::AuditPalette(a) => {
            if !audit(a)? {
                eprintln!(
                    "{}",
                    CliError::new(
                        "E-AUDIT",
                        "palette has confusable colors under a simulated deficiency"
                    )
                );
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.render().to_string();
            let message = rendered.strip_prefix("error: ").unwrap_or(&rendered);
            eprint!("error[E-ARGS]: {message}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
