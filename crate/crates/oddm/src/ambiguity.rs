//! Cross-ambiguity evaluation on delay-Doppler lattices.
//!
//! The convention used throughout is
//! `A_{g,gamma}(tau, nu) = integral g(t) gamma*(t - tau) exp(-j 2 pi nu (t - tau)) dt`,
//! i.e. the Doppler phase is referenced to the delayed pulse. With this choice
//! the lattice inner products factor as
//! `<g_{m,n}, gamma_{m',n'}> = A(mbar*T, nbar*F) * exp(j 2 pi n mbar F T)`
//! with `mbar = m' - m`, `nbar = n' - n`, exactly on the sample grid.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::signal::{steps_on_grid, SampledSignal};

/// Complex ambiguity values on the `(mbar * delay_step, nbar * doppler_step)`
/// lattice, `|mbar| <= delay_count - 1`, `|nbar| <= doppler_count - 1`, stored
/// row-major with `mbar` as the slow index.
#[derive(Debug, Clone)]
pub struct AmbiguityGrid {
    values: Vec<Complex64>,
    delay_count: usize,
    doppler_count: usize,
    delay_step: f64,
    doppler_step: f64,
}

impl AmbiguityGrid {
    /// Number of delay rows, `2 * delay_count - 1`.
    pub fn rows(&self) -> usize {
        2 * self.delay_count - 1
    }

    /// Number of Doppler columns, `2 * doppler_count - 1`.
    pub fn cols(&self) -> usize {
        2 * self.doppler_count - 1
    }

    pub fn delay_count(&self) -> usize {
        self.delay_count
    }

    pub fn doppler_count(&self) -> usize {
        self.doppler_count
    }

    pub fn delay_step(&self) -> f64 {
        self.delay_step
    }

    pub fn doppler_step(&self) -> f64 {
        self.doppler_step
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Value at lattice point `(mbar, nbar)`. Panics outside the grid range.
    pub fn at(&self, mbar: i64, nbar: i64) -> Complex64 {
        let m_max = self.delay_count as i64 - 1;
        let n_max = self.doppler_count as i64 - 1;
        assert!(
            mbar.abs() <= m_max && nbar.abs() <= n_max,
            "lattice point ({mbar}, {nbar}) outside grid"
        );
        let row = (mbar + m_max) as usize;
        let col = (nbar + n_max) as usize;
        self.values[row * self.cols() + col]
    }

    /// Iterate over `(mbar, nbar, value)` in storage order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, i64, Complex64)> + '_ {
        let m_max = self.delay_count as i64 - 1;
        let n_max = self.doppler_count as i64 - 1;
        let cols = self.cols() as i64;
        self.values.iter().enumerate().map(move |(idx, &v)| {
            let row = idx as i64 / cols;
            let col = idx as i64 % cols;
            (row - m_max, col - n_max, v)
        })
    }
}

/// Single ambiguity value `A_{g,gamma}(tau, nu)` by Riemann sum over the
/// overlap of the supports. Disjoint supports give exactly zero; the delay
/// must land on the common sample grid.
pub fn cross_ambiguity(
    g: &SampledSignal,
    gamma: &SampledSignal,
    tau: f64,
    nu: f64,
) -> Result<Complex64> {
    if !nu.is_finite() {
        return Err(Error::NonFinite("doppler shift"));
    }
    let dt = g.dt();
    let base = g.grid_offset(gamma)?;
    let tau_steps = steps_on_grid(tau, dt)?;
    // gamma sample index corresponding to g sample index i
    let shift = base - tau_steps;
    let lo = 0.max(-shift);
    let hi = (g.len() as i64).min(gamma.len() as i64 - shift);
    let mut acc = Complex64::new(0.0, 0.0);
    for i in lo..hi {
        let j = (i + shift) as usize;
        // gamma's local sample time equals t - tau
        let t_local = gamma.t0() + j as f64 * dt;
        acc += g.samples()[i as usize]
            * gamma.samples()[j].conj()
            * Complex64::cis(-TAU * nu * t_local);
    }
    Ok(acc * dt)
}

/// Sweep `cross_ambiguity` over the full lattice.
pub fn ambiguity_grid(
    g: &SampledSignal,
    gamma: &SampledSignal,
    delay_step: f64,
    doppler_step: f64,
    delay_count: usize,
    doppler_count: usize,
) -> Result<AmbiguityGrid> {
    if delay_count == 0 || doppler_count == 0 {
        return Err(Error::InvalidParameter(
            "lattice extents must be at least 1".into(),
        ));
    }
    if !(delay_step.is_finite()
        && delay_step > 0.0
        && doppler_step.is_finite()
        && doppler_step > 0.0)
    {
        return Err(Error::InvalidParameter(
            "lattice steps must be positive and finite".into(),
        ));
    }
    let m_max = delay_count as i64 - 1;
    let n_max = doppler_count as i64 - 1;
    let mut values = Vec::with_capacity(((2 * m_max + 1) * (2 * n_max + 1)) as usize);
    for mbar in -m_max..=m_max {
        for nbar in -n_max..=n_max {
            values.push(cross_ambiguity(
                g,
                gamma,
                mbar as f64 * delay_step,
                nbar as f64 * doppler_step,
            )?);
        }
    }
    Ok(AmbiguityGrid {
        values,
        delay_count,
        doppler_count,
        delay_step,
        doppler_step,
    })
}

/// Inner product of two lattice-shifted pulses,
/// `<g shifted by (m1, n1), gamma shifted by (m2, n2)>`, evaluated directly
/// by quadrature rather than through the ambiguity function.
#[allow(clippy::too_many_arguments)]
pub fn shifted_inner_product(
    g: &SampledSignal,
    gamma: &SampledSignal,
    m1: i64,
    n1: i64,
    m2: i64,
    n2: i64,
    delay_step: f64,
    doppler_step: f64,
) -> Result<Complex64> {
    let a = g.tf_shift(m1 as f64 * delay_step, n1 as f64 * doppler_step)?;
    let b = gamma.tf_shift(m2 as f64 * delay_step, n2 as f64 * doppler_step)?;
    a.inner_product(&b)
}
