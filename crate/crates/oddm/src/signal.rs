//! Uniformly sampled complex baseband signals.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Relative slack when deciding whether a time offset lands on the sample grid.
/// Offsets are formed from products of grid quantities, so anything further off
/// than this is a genuine off-grid request rather than rounding noise.
const GRID_SLACK: f64 = 1e-6;

/// A uniformly sampled complex-valued signal with an explicit time origin.
///
/// The signal is interpreted as zero outside `[t0, t0 + len * dt)`. Two signals
/// live on the same grid when they share `dt` and their `t0` difference is an
/// integer number of samples; all binary operations require this.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    samples: Vec<Complex64>,
    dt: f64,
    t0: f64,
}

impl SampledSignal {
    pub fn new(samples: Vec<Complex64>, dt: f64, t0: f64) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "sample step must be positive and finite, got {dt}"
            )));
        }
        if !t0.is_finite() {
            return Err(Error::NonFinite("signal start time"));
        }
        if samples
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::NonFinite("signal samples"));
        }
        Ok(Self { samples, dt, t0 })
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Length of the sampled support in seconds.
    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 * self.dt
    }

    /// Time of sample `k`.
    pub fn time_at(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    /// Signal energy: the Riemann sum of |s(t)|^2 over the support.
    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|c| c.norm_sqr()).sum::<f64>() * self.dt
    }

    /// Number of samples by which `other`'s origin precedes this signal's
    /// origin. Errors unless both signals share a grid.
    pub fn grid_offset(&self, other: &Self) -> Result<i64> {
        let rel = (self.dt - other.dt).abs() / self.dt;
        if rel > 1e-12 {
            return Err(Error::GridMismatch(format!(
                "sample steps differ: {} vs {}",
                self.dt, other.dt
            )));
        }
        steps_on_grid(self.t0 - other.t0, self.dt)
    }

    /// Time-frequency shift: returns `s(t - tau) * exp(j 2 pi nu (t - tau))`.
    ///
    /// The modulation phase is referenced to the shifted origin, so the sample
    /// values depend on `nu` but not on `tau`; only the start time moves. The
    /// delay must be an integer number of samples — off-grid delays are
    /// rejected rather than interpolated, because interpolation would corrupt
    /// the lattice quantities built on top of this operation.
    pub fn tf_shift(&self, tau: f64, nu: f64) -> Result<Self> {
        steps_on_grid(tau, self.dt)?;
        if !nu.is_finite() {
            return Err(Error::NonFinite("doppler shift"));
        }
        let shifted = self
            .samples
            .iter()
            .enumerate()
            .map(|(k, &v)| v * Complex64::cis(TAU * nu * (self.t0 + k as f64 * self.dt)))
            .collect();
        Self::new(shifted, self.dt, self.t0 + tau)
    }

    /// Inner product `<x, y> = integral x(t) y*(t) dt` by Riemann sum over the
    /// overlap of the two supports. Disjoint supports give exactly zero.
    pub fn inner_product(&self, other: &Self) -> Result<Complex64> {
        let shift = self.grid_offset(other)?;
        let lo = 0.max(-shift);
        let hi = (self.samples.len() as i64).min(other.samples.len() as i64 - shift);
        let mut acc = Complex64::new(0.0, 0.0);
        for i in lo..hi {
            acc += self.samples[i as usize] * other.samples[(i + shift) as usize].conj();
        }
        Ok(acc * self.dt)
    }
}

/// Express `offset` as a whole number of steps of size `dt`.
pub(crate) fn steps_on_grid(offset: f64, dt: f64) -> Result<i64> {
    if !offset.is_finite() {
        return Err(Error::NonFinite("grid offset"));
    }
    let ratio = offset / dt;
    let steps = ratio.round();
    if (ratio - steps).abs() > GRID_SLACK {
        return Err(Error::OffGrid { offset, dt });
    }
    Ok(steps as i64)
}

/// Express `total` as a whole number of periods of length `period`.
pub(crate) fn integer_ratio(total: f64, period: f64) -> Result<i64> {
    if !(period.is_finite() && period > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "period must be positive, got {period}"
        )));
    }
    let ratio = total / period;
    let count = ratio.round();
    if (ratio - count).abs() > GRID_SLACK {
        return Err(Error::InvalidParameter(format!(
            "{total} is not an integer multiple of {period}"
        )));
    }
    Ok(count as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp(n: usize, dt: f64, t0: f64) -> SampledSignal {
        let samples = (0..n)
            .map(|k| Complex64::new(k as f64, -(k as f64) * 0.5))
            .collect();
        SampledSignal::new(samples, dt, t0).unwrap()
    }

    #[test]
    fn rejects_bad_construction() {
        assert!(SampledSignal::new(vec![], 0.0, 0.0).is_err());
        assert!(SampledSignal::new(vec![], -1.0, 0.0).is_err());
        assert!(SampledSignal::new(vec![Complex64::new(f64::NAN, 0.0)], 1.0, 0.0).is_err());
        assert!(SampledSignal::new(vec![], 1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn energy_is_weighted_square_sum() {
        let s = SampledSignal::new(
            vec![Complex64::new(3.0, 4.0), Complex64::new(0.0, 2.0)],
            0.5,
            0.0,
        )
        .unwrap();
        assert_eq!(s.energy(), (25.0 + 4.0) * 0.5);
    }

    #[test]
    fn tf_shift_identity() {
        let s = ramp(16, 0.25, -1.0);
        let shifted = s.tf_shift(0.0, 0.0).unwrap();
        assert_eq!(shifted, s);
    }

    #[test]
    fn tf_shift_rejects_off_grid_delay() {
        let s = ramp(8, 0.25, 0.0);
        assert!(matches!(s.tf_shift(0.1, 0.0), Err(Error::OffGrid { .. })));
    }

    #[test]
    fn tf_shift_preserves_energy() {
        let s = ramp(32, 0.125, 0.5);
        let e = s.energy();
        let shifted = s.tf_shift(0.5, 3.7).unwrap();
        assert!((shifted.energy() - e).abs() <= 1e-12 * e);
    }

    #[test]
    fn tf_shift_composes_in_delay() {
        let s = ramp(16, 0.25, 0.0);
        let a = s.tf_shift(0.5, 0.0).unwrap().tf_shift(0.75, 0.0).unwrap();
        let b = s.tf_shift(1.25, 0.0).unwrap();
        assert_eq!(a.samples(), b.samples());
        assert!((a.t0() - b.t0()).abs() <= 1e-9 * s.dt());
    }

    #[test]
    fn inner_product_disjoint_supports_is_zero() {
        let a = ramp(4, 0.5, 0.0);
        let b = ramp(4, 0.5, 10.0);
        assert_eq!(a.inner_product(&b).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn inner_product_requires_matching_grid() {
        let a = ramp(4, 0.5, 0.0);
        let b = ramp(4, 0.25, 0.0);
        assert!(a.inner_product(&b).is_err());
        let c = ramp(4, 0.5, 0.13);
        assert!(a.inner_product(&c).is_err());
    }

    #[test]
    fn inner_product_self_is_energy() {
        let s = ramp(32, 0.125, -2.0);
        let ip = s.inner_product(&s).unwrap();
        assert_eq!(ip.re, s.energy());
        assert_eq!(ip.im, 0.0);
    }
}
