//! End-to-end tests of the command-line interface: exit statuses, file
//! outputs and determinism.

use std::fs;
use std::process::{Command, Output};

use oddm::{io, Complex64, SampledSignal};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oddm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn pulse_prints_derived_extension_and_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("p");
    let out = run(&["pulse", "--ddop", "--out", out_dir.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("D = 2"), "missing derived depth in: {text}");
    assert!(out_dir.join("pulse.csv").is_file());
    assert!(out_dir.join("pulse.json").is_file());
    assert!(out_dir.join("pulse_params.json").is_file());
    let sidecar: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("pulse_params.json")).unwrap())
            .unwrap();
    assert_eq!(sidecar["extension"], 2);
    assert_eq!(sidecar["derived"]["sub_pulse_duration"], 1.25);
}

#[test]
fn pulse_rect_has_unit_energy() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("r");
    let out = run(&[
        "pulse",
        "--rect",
        "--duration",
        "1.0",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let signal =
        io::signal_from_json(&fs::read_to_string(out_dir.join("pulse.json")).unwrap()).unwrap();
    assert!((signal.energy() - 1.0).abs() <= 1e-12);
}

#[test]
fn pulse_single_subcarrier_train_equals_shaping_pulse() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert!(
        run(&["pulse", "--ddop", "-N", "1", "--out", a.to_str().unwrap()])
            .status
            .success()
    );
    assert!(
        run(&["pulse", "--rrc", "-N", "1", "--out", b.to_str().unwrap()])
            .status
            .success()
    );
    let left = fs::read(a.join("pulse.json")).unwrap();
    let right = fs::read(b.join("pulse.json")).unwrap();
    assert_eq!(left, right);
}

#[test]
fn ambiguity_grid_row_counts_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert!(run(&["ambiguity", "--out", a.to_str().unwrap()])
        .status
        .success());
    assert!(run(&["ambiguity", "--out", b.to_str().unwrap()])
        .status
        .success());
    let text = fs::read_to_string(a.join("ambiguity.csv")).unwrap();
    assert_eq!(text.lines().count(), 1 + 63 * 15);
    assert_eq!(
        fs::read(a.join("ambiguity.csv")).unwrap(),
        fs::read(b.join("ambiguity.csv")).unwrap()
    );

    let s = dir.path().join("s");
    assert!(
        run(&["ambiguity", "--slice-n", "0", "--out", s.to_str().unwrap()])
            .status
            .success()
    );
    let slice = fs::read_to_string(s.join("ambiguity.csv")).unwrap();
    assert_eq!(slice.lines().count(), 1 + 63);
    assert!(slice
        .lines()
        .skip(1)
        .all(|l| l.split(',').nth(1) == Some("0")));
}

#[test]
fn ambiguity_minimal_lattice_is_single_row() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("m");
    let out = run(&[
        "ambiguity",
        "-M",
        "1",
        "-N",
        "1",
        "-Q",
        "2",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = fs::read_to_string(out_dir.join("ambiguity.csv")).unwrap();
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn validate_passes_by_default_and_tolerance_flips_the_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let ok = run(&["validate", "--out", dir.path().join("v1").to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("PASS"));

    let strict = run(&[
        "validate",
        "--tol",
        "1e-12",
        "--out",
        dir.path().join("v2").to_str().unwrap(),
    ]);
    assert_eq!(strict.status.code(), Some(1));
    assert!(stdout(&strict).contains("FAIL"));

    let report: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(dir.path().join("v2").join("report.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(report["passed"], false);

    // the report is JSON-only, so the format filter must not suppress it
    let csv_only = run(&[
        "validate",
        "--format",
        "csv",
        "--out",
        dir.path().join("v3").to_str().unwrap(),
    ]);
    assert_eq!(csv_only.status.code(), Some(0));
    assert!(dir.path().join("v3").join("report.json").is_file());
}

#[test]
fn validate_freq_check_separates_periodic_from_random() {
    let dir = tempfile::tempdir().unwrap();

    // one period tiled eight times is orthogonal across Doppler bins
    let period: Vec<Complex64> = (0..64)
        .map(|k| Complex64::new((k as f64 * 0.7).sin(), (k as f64 * 0.3).cos()))
        .collect();
    let tiled: Vec<Complex64> = period.iter().cycle().take(8 * 64).copied().collect();
    let periodic = SampledSignal::new(tiled, 1.0 / 512.0, 0.0).unwrap();
    let periodic_path = dir.path().join("periodic.json");
    fs::write(&periodic_path, io::signal_to_json(&periodic)).unwrap();

    // an aperiodic ramp over the same support is not
    let ramp: Vec<Complex64> = (0..512)
        .map(|k| Complex64::new((k as f64 * 0.013).sin(), (k as f64 * 0.007).cos()))
        .collect();
    let aperiodic = SampledSignal::new(ramp, 1.0 / 512.0, 0.0).unwrap();
    let aperiodic_path = dir.path().join("aperiodic.json");
    fs::write(&aperiodic_path, io::signal_to_json(&aperiodic)).unwrap();

    let ok = run(&[
        "validate",
        "--check",
        "freq",
        "--input",
        periodic_path.to_str().unwrap(),
        "-N",
        "8",
        "--out",
        dir.path().join("v1").to_str().unwrap(),
    ]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));

    let bad = run(&[
        "validate",
        "--check",
        "freq",
        "--input",
        aperiodic_path.to_str().unwrap(),
        "-N",
        "8",
        "--out",
        dir.path().join("v2").to_str().unwrap(),
    ]);
    assert_eq!(bad.status.code(), Some(1), "{}", stdout(&bad));
}

#[test]
fn validate_periodicity_catches_undersized_extension() {
    let dir = tempfile::tempdir().unwrap();
    let ok = run(&[
        "validate",
        "--check",
        "periodicity",
        "--out",
        dir.path().join("ok").to_str().unwrap(),
    ]);
    assert_eq!(ok.status.code(), Some(0));

    let bad = run(&[
        "validate",
        "--check",
        "periodicity",
        "-D",
        "1",
        "--out",
        dir.path().join("bad").to_str().unwrap(),
    ]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn frame_round_trip_reports_small_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "frame",
        "--seed",
        "3",
        "--out",
        dir.path().join("f").to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let line = text
        .lines()
        .find(|l| l.starts_with("max entry error:"))
        .expect("error line present");
    let value: f64 = line.rsplit(' ').next().unwrap().parse().unwrap();
    assert!(value <= 1e-2, "round-trip error {value}");
    for name in [
        "frame_tx.csv",
        "frame_tx.json",
        "waveform.csv",
        "waveform.json",
        "frame_rx.csv",
        "frame_rx.json",
    ] {
        assert!(dir.path().join("f").join(name).is_file(), "{name} missing");
    }
}

#[test]
fn frame_accepts_an_input_file_and_higher_orders() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("f1");
    let out = run(&[
        "frame",
        "-M",
        "8",
        "-N",
        "4",
        "-Q",
        "4",
        "--order",
        "16",
        "--out",
        first.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    // feed the transmitted frame back in as an input file
    let second = dir.path().join("f2");
    let out = run(&[
        "frame",
        "-M",
        "8",
        "-N",
        "4",
        "-Q",
        "4",
        "--input",
        first.join("frame_tx.json").to_str().unwrap(),
        "--out",
        second.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(
        fs::read(first.join("frame_tx.json")).unwrap(),
        fs::read(second.join("frame_tx.json")).unwrap()
    );
}

#[test]
fn identity_channel_leaves_waveform_bytes_unchanged() {
    let dir = tempfile::tempdir().unwrap();
    let pulse_dir = dir.path().join("p");
    assert!(
        run(&["pulse", "--ddop", "--out", pulse_dir.to_str().unwrap()])
            .status
            .success()
    );

    let channel_path = dir.path().join("identity.json");
    let identity = oddm::DdChannel::identity(32.0, 8.0).unwrap();
    fs::write(&channel_path, io::channel_to_json(&identity)).unwrap();

    let out_dir = dir.path().join("c");
    let out = run(&[
        "channel",
        "--input",
        pulse_dir.join("pulse.json").to_str().unwrap(),
        "--channel",
        channel_path.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(
        fs::read(pulse_dir.join("pulse.json")).unwrap(),
        fs::read(out_dir.join("output.json")).unwrap()
    );
}

#[test]
fn random_channel_is_written_and_seed_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let pulse_dir = dir.path().join("p");
    assert!(
        run(&["pulse", "--ddop", "--out", pulse_dir.to_str().unwrap()])
            .status
            .success()
    );
    let input = pulse_dir.join("pulse.json");

    // include the optional noise term so the whole pipeline stays seeded
    let c1 = dir.path().join("c1");
    let c2 = dir.path().join("c2");
    for c in [&c1, &c2] {
        let out = run(&[
            "channel",
            "--snr-db",
            "15",
            "--input",
            input.to_str().unwrap(),
            "--seed",
            "11",
            "--out",
            c.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    assert_eq!(
        fs::read(c1.join("channel.json")).unwrap(),
        fs::read(c2.join("channel.json")).unwrap()
    );
    assert_eq!(
        fs::read(c1.join("output.json")).unwrap(),
        fs::read(c2.join("output.json")).unwrap()
    );
}

#[test]
fn spectrum_emits_both_columns_and_small_discrepancy() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("s");
    let out = run(&["spectrum", "--out", out_dir.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    let line = text
        .lines()
        .find(|l| l.starts_with("relative L2 discrepancy"))
        .expect("discrepancy line");
    let value: f64 = line.rsplit(' ').next().unwrap().parse().unwrap();
    assert!(value <= 0.05, "discrepancy {value}");

    let csv = fs::read_to_string(out_dir.join("spectrum.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 4097);
    assert_eq!(
        csv.lines().next().unwrap(),
        "f,re,im,abs,num_re,num_im,num_abs"
    );
}

#[test]
fn usage_errors_exit_with_code_two() {
    assert_eq!(run(&["pulse", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["frame", "--order", "5"]).status.code(), Some(2));
    // missing input file is an operational error, also reported as 2
    assert_eq!(
        run(&["channel", "--input", "/nonexistent/wave.json"])
            .status
            .code(),
        Some(2)
    );
}
