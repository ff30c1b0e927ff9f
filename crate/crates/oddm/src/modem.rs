//! Multicarrier synthesis and matched-filter demodulation on the
//! delay-Doppler lattice, plus the QAM symbol alphabets used for round trips.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::pulses::{make_ddop, make_ddop_extended, DdopParams};
use crate::signal::{steps_on_grid, SampledSignal};

/// A matrix of information symbols, `symbols` delay bins by `subcarriers`
/// Doppler bins, stored row-major by delay bin.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    values: Vec<Complex64>,
    symbols: usize,
    subcarriers: usize,
}

impl Frame {
    pub fn zeros(symbols: usize, subcarriers: usize) -> Result<Self> {
        if symbols == 0 || subcarriers == 0 {
            return Err(Error::InvalidParameter(
                "frame dimensions must be at least 1".into(),
            ));
        }
        Ok(Self {
            values: vec![Complex64::new(0.0, 0.0); symbols * subcarriers],
            symbols,
            subcarriers,
        })
    }

    pub fn from_values(values: Vec<Complex64>, symbols: usize, subcarriers: usize) -> Result<Self> {
        if values.len() != symbols * subcarriers || symbols == 0 || subcarriers == 0 {
            return Err(Error::DimensionMismatch(format!(
                "{} values for a {symbols} x {subcarriers} frame",
                values.len()
            )));
        }
        if values
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::NonFinite("frame entries"));
        }
        Ok(Self {
            values,
            symbols,
            subcarriers,
        })
    }

    /// Deterministic QPSK frame from a seed, for round-trip fixtures.
    pub fn random_qpsk(symbols: usize, subcarriers: usize, seed: u64) -> Result<Self> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let bits: Vec<bool> = (0..2 * symbols * subcarriers).map(|_| rng.gen()).collect();
        Self::from_values(qam_map(&bits, QamOrder::Qam4)?, symbols, subcarriers)
    }

    pub fn symbols(&self) -> usize {
        self.symbols
    }

    pub fn subcarriers(&self) -> usize {
        self.subcarriers
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        self.values[m * self.subcarriers + n]
    }

    pub fn set(&mut self, m: usize, n: usize, v: Complex64) {
        self.values[m * self.subcarriers + n] = v;
    }

    /// Largest entry-wise magnitude difference to another frame.
    pub fn max_abs_diff(&self, other: &Frame) -> Result<f64> {
        if self.symbols != other.symbols || self.subcarriers != other.subcarriers {
            return Err(Error::DimensionMismatch("frames differ in shape".into()));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

/// Superpose time-frequency shifted copies of the prototype `g` weighted by
/// the frame entries: delay bin m shifts by `m * delay_step`, Doppler bin n
/// modulates by `n * doppler_step` referenced to the shifted origin.
pub fn mc_synthesize(
    frame: &Frame,
    g: &SampledSignal,
    delay_step: f64,
    doppler_step: f64,
) -> Result<SampledSignal> {
    let step = steps_on_grid(delay_step, g.dt())?;
    if step < 1 {
        return Err(Error::InvalidParameter(format!(
            "delay step {delay_step} must be a positive number of samples"
        )));
    }
    if !(doppler_step.is_finite() && doppler_step > 0.0) {
        return Err(Error::InvalidParameter(
            "doppler step must be positive".into(),
        ));
    }
    let step = step as usize;
    let len = (frame.symbols() - 1) * step + g.len();
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    for n in 0..frame.subcarriers() {
        let modulated: Vec<Complex64> = g
            .samples()
            .iter()
            .enumerate()
            .map(|(k, &v)| {
                v * Complex64::cis(TAU * n as f64 * doppler_step * (g.t0() + k as f64 * g.dt()))
            })
            .collect();
        for m in 0..frame.symbols() {
            let w = frame.get(m, n);
            let base = m * step;
            for (k, &v) in modulated.iter().enumerate() {
                out[base + k] += w * v;
            }
        }
    }
    SampledSignal::new(out, g.dt(), g.t0())
}

/// Synthesize one frame on the delay-Doppler lattice using the pulse train as
/// prototype; `extended` selects the cyclically extended transmit pulse.
pub fn oddm_modulate(frame: &Frame, p: &DdopParams, extended: bool) -> Result<SampledSignal> {
    if frame.symbols() != p.symbols() || frame.subcarriers() != p.subcarriers() {
        return Err(Error::DimensionMismatch(format!(
            "frame is {} x {}, parameters expect {} x {}",
            frame.symbols(),
            frame.subcarriers(),
            p.symbols(),
            p.subcarriers()
        )));
    }
    let g = if extended {
        make_ddop_extended(p)?
    } else {
        make_ddop(p)
    };
    mc_synthesize(frame, &g, p.time_resolution(), p.frequency_resolution())
}

/// Matched-filter projection of `y` onto the receive bank of lattice-shifted
/// plain pulse trains, normalized by the bank pulse energy so the no-channel
/// round trip targets the identity.
pub fn oddm_demodulate(y: &SampledSignal, p: &DdopParams) -> Result<Frame> {
    let u = make_ddop(p);
    let energy = u.energy();
    let delay_step = p.time_resolution();
    let doppler_step = p.frequency_resolution();
    let mut frame = Frame::zeros(p.symbols(), p.subcarriers())?;
    for n in 0..p.subcarriers() {
        let bank = u.tf_shift(0.0, n as f64 * doppler_step)?;
        for m in 0..p.symbols() {
            let shifted = bank.tf_shift(m as f64 * delay_step, 0.0)?;
            let projection = y.inner_product(&shifted)?;
            frame.set(m, n, projection / energy);
        }
    }
    Ok(frame)
}

/// Gray-mapped square QAM alphabets with unit average energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QamOrder {
    Qam4,
    Qam16,
    Qam64,
}

impl QamOrder {
    pub fn from_order(order: u32) -> Result<Self> {
        match order {
            4 => Ok(Self::Qam4),
            16 => Ok(Self::Qam16),
            64 => Ok(Self::Qam64),
            other => Err(Error::InvalidParameter(format!(
                "unsupported QAM order {other}; expected 4, 16 or 64"
            ))),
        }
    }

    pub fn order(self) -> u32 {
        match self {
            Self::Qam4 => 4,
            Self::Qam16 => 16,
            Self::Qam64 => 64,
        }
    }

    pub fn bits_per_symbol(self) -> usize {
        match self {
            Self::Qam4 => 2,
            Self::Qam16 => 4,
            Self::Qam64 => 6,
        }
    }

    /// Amplitude levels per axis.
    fn levels(self) -> u32 {
        match self {
            Self::Qam4 => 2,
            Self::Qam16 => 4,
            Self::Qam64 => 8,
        }
    }

    /// Normalization so the uniform constellation has unit average energy.
    fn scale(self) -> f64 {
        match self {
            Self::Qam4 => 2.0f64.sqrt(),
            Self::Qam16 => 10.0f64.sqrt(),
            Self::Qam64 => 42.0f64.sqrt(),
        }
    }
}

fn gray_decode(mut g: u32) -> u32 {
    let mut b = 0;
    while g > 0 {
        b ^= g;
        g >>= 1;
    }
    b
}

fn bits_to_level(bits: &[bool], levels: u32) -> f64 {
    let gray = bits.iter().fold(0u32, |acc, &b| (acc << 1) | b as u32);
    let index = gray_decode(gray);
    2.0 * index as f64 - (levels - 1) as f64
}

fn level_to_bits(level: f64, levels: u32, bits: usize, out: &mut Vec<bool>) {
    let index =
        (((level + (levels - 1) as f64) / 2.0).round() as i64).clamp(0, levels as i64 - 1) as u32;
    let gray = index ^ (index >> 1);
    for k in (0..bits).rev() {
        out.push((gray >> k) & 1 == 1);
    }
}

/// Map bits onto Gray-coded QAM symbols; the first half of each group drives
/// the in-phase axis, the second half the quadrature axis.
pub fn qam_map(bits: &[bool], order: QamOrder) -> Result<Vec<Complex64>> {
    let bps = order.bits_per_symbol();
    if !bits.len().is_multiple_of(bps) {
        return Err(Error::InvalidParameter(format!(
            "bit count {} is not a multiple of {bps}",
            bits.len()
        )));
    }
    let half = bps / 2;
    let levels = order.levels();
    let scale = order.scale();
    Ok(bits
        .chunks(bps)
        .map(|chunk| {
            let re = bits_to_level(&chunk[..half], levels) / scale;
            let im = bits_to_level(&chunk[half..], levels) / scale;
            Complex64::new(re, im)
        })
        .collect())
}

/// Nearest-neighbor demapping back to bits.
pub fn qam_demap(symbols: &[Complex64], order: QamOrder) -> Vec<bool> {
    let bps = order.bits_per_symbol();
    let half = bps / 2;
    let levels = order.levels();
    let scale = order.scale();
    let mut bits = Vec::with_capacity(symbols.len() * bps);
    for s in symbols {
        level_to_bits(s.re * scale, levels, half, &mut bits);
        level_to_bits(s.im * scale, levels, half, &mut bits);
    }
    bits
}
