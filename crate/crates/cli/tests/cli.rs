use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use polyrep_core::read_wav;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/data")
        .join(name)
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("tests/golden")
            .join(name),
    )
    .unwrap()
}

fn polyrep<S: AsRef<std::ffi::OsStr>>(args: &[S]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polyrep"))
        .args(args)
        .env("POLYREP_NO_COLOR", "1")
        .output()
        .unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn help_matches_golden() {
    assert_eq!(stdout(&polyrep(&["--help"])), golden("help.txt"));
    for cmd in [
        "render",
        "cvd-grid",
        "alt",
        "sonify",
        "tactile",
        "audit-palette",
    ] {
        let o = polyrep(&[cmd, "--help"]);
        assert!(o.status.success());
        assert_eq!(stdout(&o), golden(&format!("help_{cmd}.txt")), "{cmd}");
    }
}

#[test]
fn version_exits_zero() {
    let o = polyrep(&["--version"]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        format!("polyrep {}\n", env!("CARGO_PKG_VERSION"))
    );
}

#[test]
fn render_writes_svg_and_alt_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bar.svg");
    let o = polyrep(&[
        "render".as_ref(),
        data("penguins_bar.json").as_os_str(),
        "-o".as_ref(),
        out.as_os_str(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let svg = std::fs::read_to_string(&out).unwrap();
    assert!(svg.contains("<desc id=\"chart-desc\">This is an untitled chart"));
    let alt = std::fs::read_to_string(dir.path().join("bar.svg.alt.txt")).unwrap();
    assert_eq!(alt, golden("penguins_bar.alt.txt"));
}

#[test]
fn default_output_sits_next_to_spec() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("lin.json");
    std::fs::copy(data("lin.json"), &spec).unwrap();
    for (cmd, file) in [
        ("cvd-grid", "lin.cvd.svg"),
        ("sonify", "lin.wav"),
        ("tactile", "lin.pdf"),
    ] {
        let o = polyrep(&[cmd.as_ref(), spec.as_os_str()]);
        assert!(o.status.success(), "{cmd}: {}", stderr(&o));
        assert!(dir.path().join(file).exists(), "{file}");
    }
}

#[test]
fn data_flag_overrides_spec_source() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("tiny.csv");
    std::fs::write(&csv, "x,y\n1,2\n2,4\n3,1\n").unwrap();
    let o = polyrep(&[
        "alt".as_ref(),
        data("lin.json").as_os_str(),
        "--data".as_ref(),
        csv.as_os_str(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("It has x-axis 'x' with labels"));
}

#[test]
fn alt_json_reports_checklist() {
    let o = polyrep(&[
        "alt".as_ref(),
        data("penguins_bar.json").as_os_str(),
        "--json".as_ref(),
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["source"], "auto");
    assert_eq!(v["sentences"].as_array().unwrap().len(), 7);
    assert_eq!(
        format!("{}\n", v["flattened"].as_str().unwrap()),
        golden("penguins_bar.alt.txt")
    );
    assert_eq!(v["checklist"]["has_type"], true);
}

#[test]
fn regression_sonification_length() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("reg.wav");
    let o = polyrep(&[
        "sonify".as_ref(),
        data("penguins_scatter.json").as_os_str(),
        "--mode".as_ref(),
        "regression".as_ref(),
        "-o".as_ref(),
        out.as_os_str(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let buf = read_wav(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(buf.len(), 220_500);
    assert_eq!(buf.rate, 44_100);
}

#[test]
fn bar_sonification_needs_opt_in() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bar.wav");
    let base: Vec<std::ffi::OsString> = vec![
        "sonify".into(),
        data("penguins_bar.json").into(),
        "-o".into(),
        out.clone().into(),
    ];
    let o = polyrep(&base);
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stderr(&o).starts_with("error[E-SONIFY]: "),
        "{}",
        stderr(&o)
    );
    assert!(!out.exists());
    let mut allowed = base.clone();
    allowed.push("--allow-bars".into());
    let o = polyrep(&allowed);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        read_wav(&std::fs::read(&out).unwrap()).unwrap().len(),
        220_500
    );
}

#[test]
fn tactile_preview_and_paper() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("box.pdf");
    let o = polyrep(&[
        "tactile".as_ref(),
        data("penguins_box.json").as_os_str(),
        "--paper".as_ref(),
        "a4".as_ref(),
        "--preview".as_ref(),
        "-o".as_ref(),
        out.as_os_str(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let pdf = std::fs::read(&out).unwrap();
    assert!(pdf.starts_with(b"%PDF-1.4"));
    assert!(String::from_utf8_lossy(&pdf).contains("/MediaBox [0 0 595.276 841.89]"));
    let preview = std::fs::read_to_string(dir.path().join("box.pdf.preview.svg")).unwrap();
    assert!(preview.contains("aria-label=\"Adelie\""));
}

#[test]
fn missing_file_is_io_error() {
    let o = polyrep(&["render", "/definitely/not/here.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error[E-IO]: /definitely/not/here.json: "));
}

#[test]
fn bad_spec_is_spec_error() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("pie.json");
    std::fs::write(&spec, r#"{"chart":{"type":"pie","x":"a"}}"#).unwrap();
    let o = polyrep(&["render".as_ref(), spec.as_os_str()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stderr(&o).starts_with("error[E-SPEC]: unknown chart type 'pie'"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn unknown_column_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("s.json");
    std::fs::write(
        &spec,
        r#"{"data":{"inline":{"a":[1,2]}},"chart":{"type":"scatter","x":"a","y":"b"}}"#,
    )
    .unwrap();
    let o = polyrep(&["alt".as_ref(), spec.as_os_str()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error[E-"), "{}", stderr(&o));
    assert!(stderr(&o).contains('b'));
}

#[test]
fn argument_errors_are_prefixed() {
    let o = polyrep(&["bogus"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stderr(&o).starts_with("error[E-ARGS]: unrecognized subcommand 'bogus'"),
        "{}",
        stderr(&o)
    );
    let o = polyrep(&["sonify", "x.json", "--mode", "loud"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error[E-ARGS]: "));
}

#[test]
fn audit_default_palette_passes() {
    let o = polyrep(&["audit-palette"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("Deutan"));
    assert!(text.lines().last().unwrap().contains("PASS"));
    let o = polyrep(&["audit-palette", "#E69F00,#56B4E9,#009E73"]);
    assert!(o.status.success());
}

#[test]
fn audit_failure_exits_one() {
    let o = polyrep(&["audit-palette", "#FF0000,#00FF00", "--threshold", "30"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error[E-AUDIT]: "));
    // Desaturate only gates on request.
    let o = polyrep(&["audit-palette", "#E69F00,#56B4E9", "--include-desaturate"]);
    assert_eq!(o.status.code(), Some(1));
    let o = polyrep(&["audit-palette", "#E69F00,#56B4E9"]);
    assert!(o.status.success());
}

#[test]
fn audit_json() {
    let o = polyrep(&["audit-palette", "okabe-ito", "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["threshold"], 10.0);
    assert_eq!(v["worst"].as_array().unwrap().len(), 4);
}

#[test]
fn invalid_palette_is_palette_error() {
    let o = polyrep(&["audit-palette", "#GG0000"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error[E-PALETTE]: "));
}
