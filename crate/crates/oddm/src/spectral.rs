//! Frequency-domain tools: direct Fourier evaluation of sampled signals,
//! closed-form shaping-pulse and pulse-train spectra, and essential-bandwidth
//! measurement.

use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::pulses::DdopParams;
use crate::signal::SampledSignal;

/// Complex spectrum values on a strictly increasing frequency grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    freqs: Vec<f64>,
    values: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(freqs: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if freqs.len() != values.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} frequencies vs {} values",
                freqs.len(),
                values.len()
            )));
        }
        if freqs.iter().any(|f| !f.is_finite()) {
            return Err(Error::NonFinite("frequency grid"));
        }
        if freqs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter(
                "frequency grid must be strictly increasing".into(),
            ));
        }
        if values
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::NonFinite("spectrum values"));
        }
        Ok(Self { freqs, values })
    }

    pub fn freqs(&self) -> &[f64] {
        &self.freqs
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.freqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freqs.is_empty()
    }

    /// Relative L2 distance to another spectrum on the same grid.
    pub fn relative_l2_distance(&self, other: &Spectrum) -> Result<f64> {
        if self.freqs != other.freqs {
            return Err(Error::DimensionMismatch(
                "spectra live on different frequency grids".into(),
            ));
        }
        let diff: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        let base: f64 = other.values.iter().map(|c| c.norm_sqr()).sum();
        if base == 0.0 {
            return Err(Error::InvalidParameter(
                "reference spectrum is identically zero".into(),
            ));
        }
        Ok((diff / base).sqrt())
    }
}

/// Continuous-time Fourier transform approximation
/// `U(f) = sum_k s(t_k) exp(-j 2 pi f t_k) dt` at the requested frequencies.
pub fn transform(s: &SampledSignal, freqs: &[f64]) -> Result<Spectrum> {
    let dt = s.dt();
    let values = freqs
        .iter()
        .map(|&f| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, &v) in s.samples().iter().enumerate() {
                acc += v * Complex64::cis(-TAU * f * (s.t0() + k as f64 * dt));
            }
            acc * dt
        })
        .collect();
    Spectrum::new(freqs.to_vec(), values)
}

/// Closed-form magnitude response of the untruncated root-raised-cosine pulse
/// at a single frequency, scaled to the requested pulse energy.
fn rrc_response(symbol_interval: f64, rolloff: f64, energy: f64, f: f64) -> f64 {
    let af = f.abs();
    let flat_edge = (1.0 - rolloff) / (2.0 * symbol_interval);
    let stop_edge = (1.0 + rolloff) / (2.0 * symbol_interval);
    let h = if af <= flat_edge {
        symbol_interval
    } else if af < stop_edge {
        symbol_interval / 2.0 * (1.0 + (PI * symbol_interval / rolloff * (af - flat_edge)).cos())
    } else {
        0.0
    };
    (energy * h).sqrt()
}

/// Closed-form spectrum of the untruncated root-raised-cosine pulse: flat
/// over the inner band, cosine-tapered to zero at `(1 + rolloff) / (2 T)`,
/// scaled so the pulse has the requested energy.
pub fn rrc_spectrum(
    symbol_interval: f64,
    rolloff: f64,
    energy: f64,
    freqs: &[f64],
) -> Result<Spectrum> {
    if !(0.0..=1.0).contains(&rolloff) {
        return Err(Error::InvalidParameter(format!(
            "roll-off must lie in [0, 1], got {rolloff}"
        )));
    }
    if !(symbol_interval.is_finite() && symbol_interval > 0.0 && energy > 0.0) {
        return Err(Error::InvalidParameter(
            "symbol interval and energy must be positive".into(),
        ));
    }
    let values = freqs
        .iter()
        .map(|&f| Complex64::new(rrc_response(symbol_interval, rolloff, energy, f), 0.0))
        .collect();
    Spectrum::new(freqs.to_vec(), values)
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        let px = PI * x;
        1.0 - px * px / 6.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

/// Closed-form spectrum of the pulse train with support starting at t = 0:
/// the sub-pulse response times a truncated train comb,
///
/// `U(f) = exp(-j 2 pi f Tc) A(f) N sum_n (-1)^(n (N-1)) sinc(f N T - n N)`,
///
/// where `Tc` is the train center (half the train duration), `A` the
/// sub-pulse spectrum at energy `1 / N`, and the series runs over
/// `|n| <= n_max`. The comb term carries the Doppler-bin orthogonality, the
/// sub-pulse envelope the delay-bin orthogonality. Matches
/// `transform(make_ddop(p) delayed by half a sub-pulse)` as `n_max` grows.
pub fn ddop_spectrum_closed_form(p: &DdopParams, freqs: &[f64], n_max: usize) -> Result<Spectrum> {
    if n_max == 0 {
        return Err(Error::InvalidParameter(
            "series truncation must keep at least one harmonic".into(),
        ));
    }
    let n_sub = p.subcarriers() as f64;
    let spacing = p.spacing();
    let center = p.train_duration() / 2.0;
    let sub_energy = 1.0 / n_sub;
    let parity = p.subcarriers() as i64 - 1;
    let limit = n_max as i64;
    let values = freqs
        .iter()
        .map(|&f| {
            let envelope = rrc_response(p.time_resolution(), p.rolloff(), sub_energy, f);
            let mut comb = 0.0;
            for n in -limit..=limit {
                let sign = if (n * parity).rem_euclid(2) == 1 {
                    -1.0
                } else {
                    1.0
                };
                comb += sign * sinc(f * n_sub * spacing - (n * p.subcarriers() as i64) as f64);
            }
            Complex64::cis(-TAU * f * center) * (envelope * n_sub * comb)
        })
        .collect();
    Spectrum::new(freqs.to_vec(), values)
}

/// Width of the smallest symmetric band `[-B/2, B/2]` holding at least
/// `fraction` of the spectrum's energy, with per-point weights from the local
/// grid spacing.
pub fn essential_bandwidth(sp: &Spectrum, fraction: f64) -> Result<f64> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "fraction must lie in (0, 1), got {fraction}"
        )));
    }
    if sp.len() < 2 {
        return Err(Error::InvalidParameter(
            "spectrum needs at least two points".into(),
        ));
    }
    let freqs = sp.freqs();
    let n = freqs.len();
    let weight = |i: usize| -> f64 {
        let lo = if i == 0 { freqs[0] } else { freqs[i - 1] };
        let hi = if i == n - 1 {
            freqs[n - 1]
        } else {
            freqs[i + 1]
        };
        (hi - lo) / 2.0
    };
    let energies: Vec<f64> = sp
        .values()
        .iter()
        .enumerate()
        .map(|(i, c)| c.norm_sqr() * weight(i))
        .collect();
    let total: f64 = energies.iter().sum();
    if total <= 0.0 {
        return Err(Error::InvalidParameter("spectrum carries no energy".into()));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| freqs[a].abs().total_cmp(&freqs[b].abs()));
    let mut cumulative = 0.0;
    for idx in order {
        cumulative += energies[idx];
        if cumulative >= fraction * total {
            return Ok(2.0 * freqs[idx].abs());
        }
    }
    Ok(2.0 * freqs.last().unwrap().abs().max(freqs[0].abs()))
}

/// Default analysis grid: `|f| <= 2 * symbols / spacing` in steps of a
/// quarter Doppler bin, resolving both the train comb and the subcarrier
/// structure.
pub fn default_frequency_grid(p: &DdopParams) -> Vec<f64> {
    let step = p.frequency_resolution() / 4.0;
    let half = (2.0 * p.sampling_rate() / step).round() as i64;
    (-half..=half).map(|i| i as f64 * step).collect()
}
