//! Deterministic delay-Doppler channels: sparse path lists with tap-quantized
//! delays and Doppler shifts, and their action on a waveform.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::signal::{steps_on_grid, SampledSignal};

/// One propagation path: complex gain, delay tap and Doppler tap. Physical
/// shifts follow from the channel's sampling rate and observation duration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DdPath {
    pub gain: Complex64,
    pub delay_tap: u32,
    pub doppler_tap: i32,
}

/// A finite list of delay-Doppler paths. Path p delays by
/// `delay_tap / sampling_rate` and shifts by `doppler_tap / duration`, the
/// delay and Doppler resolutions of the observation window.
#[derive(Debug, Clone, PartialEq)]
pub struct DdChannel {
    paths: Vec<DdPath>,
    sampling_rate: f64,
    duration: f64,
}

impl DdChannel {
    pub fn new(paths: Vec<DdPath>, sampling_rate: f64, duration: f64) -> Result<Self> {
        if !(sampling_rate.is_finite() && sampling_rate > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "sampling rate must be positive, got {sampling_rate}"
            )));
        }
        if !(duration.is_finite() && duration > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "duration must be positive, got {duration}"
            )));
        }
        if paths
            .iter()
            .any(|p| !p.gain.re.is_finite() || !p.gain.im.is_finite())
        {
            return Err(Error::NonFinite("path gains"));
        }
        Ok(Self {
            paths,
            sampling_rate,
            duration,
        })
    }

    /// The single-path identity channel on the given resolutions.
    pub fn identity(sampling_rate: f64, duration: f64) -> Result<Self> {
        Self::new(
            vec![DdPath {
                gain: Complex64::new(1.0, 0.0),
                delay_tap: 0,
                doppler_tap: 0,
            }],
            sampling_rate,
            duration,
        )
    }

    pub fn paths(&self) -> &[DdPath] {
        &self.paths
    }

    pub fn sampling_rate(&self) -> f64 {
        self.sampling_rate
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    /// Physical delay of a path in seconds.
    pub fn delay_of(&self, path: &DdPath) -> f64 {
        path.delay_tap as f64 / self.sampling_rate
    }

    /// Physical Doppler shift of a path in Hz.
    pub fn doppler_of(&self, path: &DdPath) -> f64 {
        path.doppler_tap as f64 / self.duration
    }
}

/// Apply the channel: `y(t) = sum_p gain_p x(t - tau_p) exp(j 2 pi nu_p (t - tau_p))`.
/// Path delays must land on the sample grid of `x`; the output support grows
/// by the largest delay.
pub fn apply(ch: &DdChannel, x: &SampledSignal) -> Result<SampledSignal> {
    let dt = x.dt();
    let mut resolved = Vec::with_capacity(ch.paths.len());
    let mut max_shift = 0i64;
    for p in &ch.paths {
        let shift = steps_on_grid(ch.delay_of(p), dt)?;
        max_shift = max_shift.max(shift);
        resolved.push((shift, ch.doppler_of(p), p.gain));
    }
    let mut out = vec![Complex64::new(0.0, 0.0); x.len() + max_shift as usize];
    for (shift, doppler, gain) in resolved {
        for (k, &v) in x.samples().iter().enumerate() {
            // the Doppler phase rides on the delayed copy, so it is evaluated
            // at the copy's own local time t - tau
            let local = x.t0() + k as f64 * dt;
            out[k + shift as usize] += gain * v * Complex64::cis(TAU * doppler * local);
        }
    }
    SampledSignal::new(out, dt, x.t0())
}

/// Draw a P-path channel with uniform integer taps in
/// `[0, max_delay_tap] x [-max_doppler_tap, max_doppler_tap]` and complex
/// Gaussian gains normalized to unit total power. Deterministic per seed.
pub fn random_channel(
    num_paths: usize,
    max_delay_tap: u32,
    max_doppler_tap: u32,
    seed: u64,
    sampling_rate: f64,
    duration: f64,
) -> Result<DdChannel> {
    if num_paths == 0 {
        return Err(Error::InvalidParameter(
            "channel needs at least one path".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut paths: Vec<DdPath> = (0..num_paths)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            DdPath {
                gain: Complex64::new(re, im),
                delay_tap: rng.gen_range(0..=max_delay_tap),
                doppler_tap: rng.gen_range(-(max_doppler_tap as i32)..=max_doppler_tap as i32),
            }
        })
        .collect();
    let total: f64 = paths.iter().map(|p| p.gain.norm_sqr()).sum();
    if total <= 0.0 {
        return Err(Error::InvalidParameter("degenerate zero-power draw".into()));
    }
    let norm = total.sqrt();
    for p in &mut paths {
        p.gain /= norm;
    }
    DdChannel::new(paths, sampling_rate, duration)
}

/// Additive white Gaussian noise at the given SNR relative to the mean sample
/// power of `x`. Deterministic per seed.
pub fn add_awgn(x: &SampledSignal, snr_db: f64, seed: u64) -> Result<SampledSignal> {
    if x.is_empty() {
        return Ok(x.clone());
    }
    let power = x.samples().iter().map(|c| c.norm_sqr()).sum::<f64>() / x.len() as f64;
    let sigma = (power * 10f64.powf(-snr_db / 10.0) / 2.0).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noisy = x
        .samples()
        .iter()
        .map(|&v| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            v + Complex64::new(sigma * re, sigma * im)
        })
        .collect();
    SampledSignal::new(noisy, x.dt(), x.t0())
}
