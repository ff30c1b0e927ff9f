//! Prototype pulse constructors: root-raised-cosine sub-pulses, rectangles,
//! pulse trains with optional cyclic extension, and periodic tilings.

use num_complex::Complex64;
use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};
use crate::signal::{integer_ratio, steps_on_grid, SampledSignal};

/// Parameters of the delay-Doppler pulse train and the lattice it lives on.
///
/// `symbols` (M) delay bins of width `spacing / symbols` and `subcarriers` (N)
/// Doppler bins of width `1 / (subcarriers * spacing)` tile one frame. The
/// train itself is `subcarriers` root-raised-cosine sub-pulses spaced by
/// `spacing`, each truncated to `half_span` delay bins on either side of its
/// center and carrying energy `1 / subcarriers`.
#[derive(Debug, Clone, PartialEq)]
pub struct DdopParams {
    symbols: usize,
    subcarriers: usize,
    spacing: f64,
    half_span: usize,
    rolloff: f64,
    oversampling: usize,
    extension: Option<usize>,
}

impl DdopParams {
    pub fn new(
        symbols: usize,
        subcarriers: usize,
        spacing: f64,
        half_span: usize,
        rolloff: f64,
        oversampling: usize,
    ) -> Result<Self> {
        if symbols == 0 || subcarriers == 0 || half_span == 0 || oversampling == 0 {
            return Err(Error::InvalidParameter(
                "symbols, subcarriers, half_span and oversampling must all be at least 1".into(),
            ));
        }
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "sub-pulse spacing must be positive, got {spacing}"
            )));
        }
        if !(0.0..=1.0).contains(&rolloff) {
            return Err(Error::InvalidParameter(format!(
                "roll-off must lie in [0, 1], got {rolloff}"
            )));
        }
        Ok(Self {
            symbols,
            subcarriers,
            spacing,
            half_span,
            rolloff,
            oversampling,
            extension: None,
        })
    }

    /// Override the cyclic extension depth instead of deriving it.
    pub fn with_extension(mut self, depth: usize) -> Self {
        self.extension = Some(depth);
        self
    }

    pub fn symbols(&self) -> usize {
        self.symbols
    }

    pub fn subcarriers(&self) -> usize {
        self.subcarriers
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn half_span(&self) -> usize {
        self.half_span
    }

    pub fn rolloff(&self) -> f64 {
        self.rolloff
    }

    pub fn oversampling(&self) -> usize {
        self.oversampling
    }

    /// Delay-lattice step: `spacing / symbols`.
    pub fn time_resolution(&self) -> f64 {
        self.spacing / self.symbols as f64
    }

    /// Doppler-lattice step: `1 / (subcarriers * spacing)`.
    pub fn frequency_resolution(&self) -> f64 {
        1.0 / (self.subcarriers as f64 * self.spacing)
    }

    /// Sample step `spacing / (symbols * oversampling)`, chosen so that every
    /// delay-lattice point is an exact integer number of samples.
    pub fn sample_step(&self) -> f64 {
        self.spacing / (self.symbols * self.oversampling) as f64
    }

    /// Duration of one truncated sub-pulse: `2 * half_span` delay bins.
    pub fn sub_pulse_duration(&self) -> f64 {
        2.0 * self.half_span as f64 * self.time_resolution()
    }

    /// Support length of the unextended pulse train.
    pub fn train_duration(&self) -> f64 {
        (self.subcarriers as f64 - 1.0) * self.spacing + self.sub_pulse_duration()
    }

    /// Frame period `subcarriers * spacing` (the reciprocal Doppler step).
    pub fn symbol_period(&self) -> f64 {
        self.subcarriers as f64 * self.spacing
    }

    /// Bandwidth-matched sampling rate `symbols / spacing`.
    pub fn sampling_rate(&self) -> f64 {
        self.symbols as f64 / self.spacing
    }

    /// Joint lattice-cell area, `1 / (symbols * subcarriers)`.
    pub fn jtfr(&self) -> f64 {
        1.0 / (self.symbols * self.subcarriers) as f64
    }

    /// Smallest extension depth that makes the extended train periodic over
    /// the window swept by the receive-side delay lattice: the number of
    /// spacings covered by one sub-pulse, rounded up.
    pub fn required_extension(&self) -> usize {
        (2 * self.half_span).div_ceil(self.symbols)
    }

    /// Extension depth in use: explicit override, or the derived minimum.
    pub fn extension_depth(&self) -> usize {
        self.extension.unwrap_or_else(|| self.required_extension())
    }

    /// Whether the configured extension depth reaches the derived minimum.
    /// An undersized extension still constructs, but the periodicity window
    /// (and with it the bin-for-bin recovery guarantee) no longer holds.
    pub fn extension_sufficient(&self) -> bool {
        self.extension_depth() >= self.required_extension()
    }

    /// Samples per sub-pulse spacing.
    pub fn samples_per_spacing(&self) -> usize {
        self.symbols * self.oversampling
    }

    /// Start of the window over which the extended train must be periodic:
    /// one delay sweep before the origin.
    pub fn periodicity_window_start(&self) -> f64 {
        -((self.symbols as f64 - 1.0) * self.time_resolution())
    }

    /// End of the periodicity window: the far edge of the furthest-delayed
    /// receive pulse.
    pub fn periodicity_window_end(&self) -> f64 {
        (self.symbols * self.subcarriers - 1) as f64 * self.time_resolution()
            + self.sub_pulse_duration()
    }
}

/// Root-raised-cosine time response at `x = t / symbol_interval`, in units of
/// `1 / sqrt(symbol_interval)`. The two removable singularities (the origin
/// and `|4 * rolloff * x| = 1`) are replaced by their limit values.
fn rrc_value(x: f64, rolloff: f64) -> f64 {
    const EPS: f64 = 1e-9;
    if x.abs() < EPS {
        return 1.0 + rolloff * (4.0 / PI - 1.0);
    }
    if rolloff > 0.0 && ((4.0 * rolloff * x).abs() - 1.0).abs() < EPS {
        let q = PI / (4.0 * rolloff);
        return rolloff / SQRT_2 * ((1.0 + 2.0 / PI) * q.sin() + (1.0 - 2.0 / PI) * q.cos());
    }
    let num =
        (PI * x * (1.0 - rolloff)).sin() + 4.0 * rolloff * x * (PI * x * (1.0 + rolloff)).cos();
    let den = PI * x * (1.0 - (4.0 * rolloff * x).powi(2));
    num / den
}

/// Build a root-raised-cosine pulse for the given symbol interval, hard
/// truncated to `[-half_span, +half_span)` symbol intervals and rescaled so
/// its sampled energy equals `energy` exactly.
pub fn make_rrc(
    symbol_interval: f64,
    half_span: usize,
    rolloff: f64,
    dt: f64,
    energy: f64,
) -> Result<SampledSignal> {
    if half_span == 0 {
        return Err(Error::InvalidParameter(
            "half_span must be at least 1".into(),
        ));
    }
    if !(0.0..=1.0).contains(&rolloff) {
        return Err(Error::InvalidParameter(format!(
            "roll-off must lie in [0, 1], got {rolloff}"
        )));
    }
    if !(energy.is_finite() && energy > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "energy must be positive, got {energy}"
        )));
    }
    if !(symbol_interval.is_finite() && symbol_interval > 0.0 && dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidParameter(
            "symbol interval and sample step must be positive".into(),
        ));
    }
    let per_symbol = steps_on_grid(symbol_interval, dt)?;
    if per_symbol < 1 {
        return Err(Error::InvalidParameter(format!(
            "sample step {dt} does not divide the symbol interval {symbol_interval}"
        )));
    }
    let n = 2 * half_span * per_symbol as usize;
    let t0 = -(half_span as f64) * symbol_interval;
    let scale = 1.0 / symbol_interval.sqrt();
    let raw: Vec<f64> = (0..n)
        .map(|k| {
            let t = t0 + k as f64 * dt;
            scale * rrc_value(t / symbol_interval, rolloff)
        })
        .collect();
    let raw_energy: f64 = raw.iter().map(|v| v * v).sum::<f64>() * dt;
    let norm = (energy / raw_energy).sqrt();
    let samples = raw.iter().map(|&v| Complex64::new(v * norm, 0.0)).collect();
    SampledSignal::new(samples, dt, t0)
}

/// Unit-energy rectangle on `[0, duration)`.
pub fn make_rect(duration: f64, dt: f64) -> Result<SampledSignal> {
    if !(duration.is_finite() && duration > 0.0 && dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidParameter(
            "duration and sample step must be positive".into(),
        ));
    }
    let n = steps_on_grid(duration, dt)?;
    if n < 1 {
        return Err(Error::InvalidParameter(format!(
            "sample step {dt} does not divide the duration {duration}"
        )));
    }
    let amp = Complex64::new(1.0 / duration.sqrt(), 0.0);
    SampledSignal::new(vec![amp; n as usize], dt, 0.0)
}

/// Sum of shifted sub-pulse copies starting at `first_index * spacing`.
fn sub_pulse_train(p: &DdopParams, first_index: i64, count: usize) -> SampledSignal {
    let a = make_rrc(
        p.time_resolution(),
        p.half_span,
        p.rolloff,
        p.sample_step(),
        1.0 / p.subcarriers as f64,
    )
    .expect("validated parameters");
    let step = p.samples_per_spacing();
    let len = (count - 1) * step + a.len();
    let mut samples = vec![Complex64::new(0.0, 0.0); len];
    for sub in 0..count {
        let base = sub * step;
        for (k, &v) in a.samples().iter().enumerate() {
            samples[base + k] += v;
        }
    }
    let t0 = first_index as f64 * p.spacing - p.sub_pulse_duration() / 2.0;
    SampledSignal::new(samples, p.sample_step(), t0).expect("finite by construction")
}

/// The delay-Doppler pulse train: `subcarriers` sub-pulses spaced by
/// `spacing`, with the first sub-pulse centered at t = 0. Where sub-pulses
/// overlap their values add; the train is not renormalized.
pub fn make_ddop(p: &DdopParams) -> SampledSignal {
    sub_pulse_train(p, 0, p.subcarriers)
}

/// The cyclically extended pulse train: `extension_depth()` extra sub-pulses
/// on each side make the result periodic (with period `spacing`) over the
/// window swept by the receive-side delay lattice. An extension depth below
/// `required_extension()` still constructs but fails that periodicity window;
/// callers can detect this up front via [`DdopParams::extension_sufficient`]
/// or after the fact via [`crate::validators::check_periodicity`].
pub fn make_ddop_extended(p: &DdopParams) -> Result<SampledSignal> {
    let depth = p.extension_depth();
    if depth == 0 {
        return Err(Error::InvalidParameter(
            "extension depth must be at least 1; use make_ddop for the plain train".into(),
        ));
    }
    Ok(sub_pulse_train(
        p,
        -(depth as i64),
        p.subcarriers + 2 * depth,
    ))
}

/// Tile `seed` end-to-end to cover `[0, total)`. The seed's support must
/// equal one period and the period must divide the total duration.
pub fn make_periodic(seed: &SampledSignal, period: f64, total: f64) -> Result<SampledSignal> {
    let steps = steps_on_grid(period, seed.dt())?;
    if steps < 1 || steps as usize != seed.len() {
        return Err(Error::InvalidParameter(format!(
            "seed support ({} samples) must equal one period ({steps} samples)",
            seed.len()
        )));
    }
    let reps = integer_ratio(total, period)?;
    if reps < 1 {
        return Err(Error::InvalidParameter(format!(
            "total duration {total} must be a positive multiple of the period {period}"
        )));
    }
    let mut samples = Vec::with_capacity(seed.len() * reps as usize);
    for _ in 0..reps {
        samples.extend_from_slice(seed.samples());
    }
    SampledSignal::new(samples, seed.dt(), 0.0)
}
