//! Serialization of signals, grids, frames, channels, spectra and reports.
//!
//! CSV is the plotting-friendly format; JSON is the machine format and round
//! trips bit-exactly. All floats are printed with 17 significant digits so
//! that CSV fixtures are stable across runs.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

use crate::ambiguity::AmbiguityGrid;
use crate::channel::{DdChannel, DdPath};
use crate::error::{Error, Result};
use crate::modem::Frame;
use crate::signal::SampledSignal;
use crate::spectral::Spectrum;
use crate::validators::OrthogonalityReport;

/// Shortest representation that still round-trips every f64 bit pattern.
fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Serialize, Deserialize)]
struct SignalJson {
    t0: f64,
    dt: f64,
    samples: Vec<[f64; 2]>,
}

pub fn signal_to_json(s: &SampledSignal) -> String {
    let doc = SignalJson {
        t0: s.t0(),
        dt: s.dt(),
        samples: s.samples().iter().map(|c| [c.re, c.im]).collect(),
    };
    serde_json::to_string(&doc).expect("finite fields serialize")
}

pub fn signal_from_json(text: &str) -> Result<SampledSignal> {
    let doc: SignalJson = serde_json::from_str(text)?;
    SampledSignal::new(
        doc.samples
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect(),
        doc.dt,
        doc.t0,
    )
}

pub fn signal_to_csv(s: &SampledSignal) -> String {
    let mut out = String::from("t,re,im\n");
    for (k, c) in s.samples().iter().enumerate() {
        let t = s.t0() + k as f64 * s.dt();
        let _ = writeln!(out, "{},{},{}", fmt_f64(t), fmt_f64(c.re), fmt_f64(c.im));
    }
    out
}

pub fn grid_to_csv(grid: &AmbiguityGrid) -> String {
    let mut out = String::from("m,n,re,im,abs\n");
    for (m, n, v) in grid.iter() {
        let _ = writeln!(
            out,
            "{m},{n},{},{},{}",
            fmt_f64(v.re),
            fmt_f64(v.im),
            fmt_f64(v.norm())
        );
    }
    out
}

#[derive(Serialize, Deserialize)]
struct GridJson {
    delay_count: usize,
    doppler_count: usize,
    delay_step: f64,
    doppler_step: f64,
    values: Vec<[f64; 2]>,
}

pub fn grid_to_json(grid: &AmbiguityGrid) -> String {
    let doc = GridJson {
        delay_count: grid.delay_count(),
        doppler_count: grid.doppler_count(),
        delay_step: grid.delay_step(),
        doppler_step: grid.doppler_step(),
        values: grid.values().iter().map(|c| [c.re, c.im]).collect(),
    };
    serde_json::to_string(&doc).expect("finite fields serialize")
}

#[derive(Serialize, Deserialize)]
struct FrameJson {
    symbols: usize,
    subcarriers: usize,
    values: Vec<[f64; 2]>,
}

pub fn frame_to_json(frame: &Frame) -> String {
    let doc = FrameJson {
        symbols: frame.symbols(),
        subcarriers: frame.subcarriers(),
        values: frame.values().iter().map(|c| [c.re, c.im]).collect(),
    };
    serde_json::to_string(&doc).expect("finite fields serialize")
}

pub fn frame_from_json(text: &str) -> Result<Frame> {
    let doc: FrameJson = serde_json::from_str(text)?;
    Frame::from_values(
        doc.values
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect(),
        doc.symbols,
        doc.subcarriers,
    )
}

pub fn frame_to_csv(frame: &Frame) -> String {
    let mut out = String::from("m,n,re,im\n");
    for m in 0..frame.symbols() {
        for n in 0..frame.subcarriers() {
            let v = frame.get(m, n);
            let _ = writeln!(out, "{m},{n},{},{}", fmt_f64(v.re), fmt_f64(v.im));
        }
    }
    out
}

pub fn frame_from_csv(text: &str) -> Result<Frame> {
    let mut entries = Vec::new();
    let mut max_m = 0usize;
    let mut max_n = 0usize;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (lineno == 0 && line.starts_with('m')) {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(Error::Parse(format!(
                "line {}: expected m,n,re,im",
                lineno + 1
            )));
        }
        let m: usize = fields[0]
            .parse()
            .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        let n: usize = fields[1]
            .parse()
            .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        let re: f64 = fields[2]
            .parse()
            .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        let im: f64 = fields[3]
            .parse()
            .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        max_m = max_m.max(m);
        max_n = max_n.max(n);
        entries.push((m, n, Complex64::new(re, im)));
    }
    if entries.is_empty() {
        return Err(Error::Parse("empty frame file".into()));
    }
    let mut frame = Frame::zeros(max_m + 1, max_n + 1)?;
    for (m, n, v) in entries {
        frame.set(m, n, v);
    }
    Ok(frame)
}

#[derive(Serialize, Deserialize)]
struct PathJson {
    re: f64,
    im: f64,
    l: u32,
    k: i32,
}

#[derive(Serialize, Deserialize)]
struct ChannelJson {
    paths: Vec<PathJson>,
    #[serde(rename = "W0")]
    w0: f64,
    #[serde(rename = "T0")]
    t0: f64,
}

pub fn channel_to_json(ch: &DdChannel) -> String {
    let doc = ChannelJson {
        paths: ch
            .paths()
            .iter()
            .map(|p| PathJson {
                re: p.gain.re,
                im: p.gain.im,
                l: p.delay_tap,
                k: p.doppler_tap,
            })
            .collect(),
        w0: ch.sampling_rate(),
        t0: ch.duration(),
    };
    serde_json::to_string(&doc).expect("finite fields serialize")
}

pub fn channel_from_json(text: &str) -> Result<DdChannel> {
    let doc: ChannelJson = serde_json::from_str(text)?;
    DdChannel::new(
        doc.paths
            .iter()
            .map(|p| DdPath {
                gain: Complex64::new(p.re, p.im),
                delay_tap: p.l,
                doppler_tap: p.k,
            })
            .collect(),
        doc.w0,
        doc.t0,
    )
}

pub fn spectrum_to_csv(sp: &Spectrum) -> String {
    let mut out = String::from("f,re,im,abs\n");
    for (f, v) in sp.freqs().iter().zip(sp.values()) {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fmt_f64(*f),
            fmt_f64(v.re),
            fmt_f64(v.im),
            fmt_f64(v.norm())
        );
    }
    out
}

pub fn report_to_json(report: &OrthogonalityReport) -> String {
    serde_json::to_string_pretty(report).expect("finite fields serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn signal_csv_has_header_and_rows() {
        let s = SampledSignal::new(
            vec![Complex64::new(0.1, -0.2), Complex64::new(1.5, 0.0)],
            0.5,
            -1.0,
        )
        .unwrap();
        let csv = signal_to_csv(&s);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], "t,re,im");
        assert!(lines[1].starts_with("-1.0000000000000000e0,"));
    }

    #[test]
    fn frame_csv_round_trip() {
        let frame = Frame::random_qpsk(4, 3, 11).unwrap();
        let parsed = frame_from_csv(&frame_to_csv(&frame)).unwrap();
        assert_eq!(parsed, frame);
        assert!(frame_from_csv("m,n,re,im\n").is_err());
        assert!(frame_from_csv("0,0,1.0\n").is_err());
    }

    #[test]
    fn channel_json_round_trip() {
        let ch = crate::channel::random_channel(5, 9, 2, 3, 32.0, 8.0).unwrap();
        let parsed = channel_from_json(&channel_to_json(&ch)).unwrap();
        assert_eq!(parsed, ch);
        // interface field names are part of the format
        let text = channel_to_json(&ch);
        assert!(text.contains("\"W0\""));
        assert!(text.contains("\"T0\""));
    }

    #[test]
    fn grid_csv_row_count() {
        let p = crate::pulses::DdopParams::new(4, 2, 1.0, 2, 0.5, 4).unwrap();
        let u = crate::pulses::make_ddop(&p);
        let grid = crate::ambiguity::ambiguity_grid(
            &u,
            &u,
            p.time_resolution(),
            p.frequency_resolution(),
            4,
            2,
        )
        .unwrap();
        let csv = grid_to_csv(&grid);
        assert_eq!(csv.lines().count(), 1 + 7 * 3);
    }

    proptest! {
        #[test]
        fn signal_json_round_trip_is_bit_exact(
            values in proptest::collection::vec((-1e12f64..1e12, -1e12f64..1e12), 1..64),
            dt_mant in 1u32..1000,
            t0 in -1e6f64..1e6,
        ) {
            let dt = dt_mant as f64 / 1024.0;
            let samples: Vec<Complex64> =
                values.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
            let s = SampledSignal::new(samples, dt, t0).unwrap();
            let back = signal_from_json(&signal_to_json(&s)).unwrap();
            prop_assert_eq!(back.len(), s.len());
            prop_assert!(back.t0().to_bits() == s.t0().to_bits());
            prop_assert!(back.dt().to_bits() == s.dt().to_bits());
            for (a, b) in back.samples().iter().zip(s.samples()) {
                prop_assert!(a.re.to_bits() == b.re.to_bits());
                prop_assert!(a.im.to_bits() == b.im.to_bits());
            }
        }
    }
}
