//! Executable orthogonality checks: delta structure of ambiguity grids,
//! single-axis variants, and windowed periodicity.

use num_complex::Complex64;
use serde::Serialize;

use crate::ambiguity::{ambiguity_grid, AmbiguityGrid};
use crate::error::{Error, Result};
use crate::signal::{steps_on_grid, SampledSignal};

/// Default tolerance for checks limited by shaping-pulse truncation and
/// Riemann quadrature at eight samples per delay bin.
pub const SRN_TOL: f64 = 1e-3;

/// Default tolerance for checks that are exact on the sample grid, where only
/// floating-point rounding remains.
pub const GRID_EXACT_TOL: f64 = 1e-10;

/// Verdict of a delta-structure sweep. `peak_value` is the origin magnitude
/// and `max_leakage` the largest off-origin magnitude, both normalized by the
/// origin reference (the energy for self checks, the origin inner product for
/// cross checks), so unit-energy conventions are not required of the caller.
#[derive(Debug, Clone, Serialize)]
pub struct OrthogonalityReport {
    pub passed: bool,
    pub peak_value: f64,
    pub max_leakage: f64,
    pub worst_point: (i64, i64),
    pub tolerance: f64,
}

/// Verdict of a windowed periodicity check.
#[derive(Debug, Clone, Serialize)]
pub struct PeriodicityReport {
    pub passed: bool,
    pub max_deviation: f64,
    pub tolerance: f64,
}

fn delta_report(grid: &AmbiguityGrid, norm: f64, tol: f64) -> OrthogonalityReport {
    let peak_value = grid.at(0, 0).norm() / norm;
    let mut max_leakage = 0.0;
    let mut worst_point = (0i64, 0i64);
    for (m, n, v) in grid.iter() {
        if (m, n) == (0, 0) {
            continue;
        }
        let mag = v.norm() / norm;
        if mag > max_leakage {
            max_leakage = mag;
            worst_point = (m, n);
        }
    }
    OrthogonalityReport {
        passed: (peak_value - 1.0).abs() <= tol && max_leakage <= tol,
        peak_value,
        max_leakage,
        worst_point,
        tolerance: tol,
    }
}

/// Check the self-ambiguity delta structure of `g` over the full lattice.
/// Values are normalized by the energy of `g`.
pub fn check_local_orthogonality(
    g: &SampledSignal,
    delay_step: f64,
    doppler_step: f64,
    delay_count: usize,
    doppler_count: usize,
    tol: f64,
) -> Result<OrthogonalityReport> {
    let grid = ambiguity_grid(g, g, delay_step, doppler_step, delay_count, doppler_count)?;
    Ok(delta_report(&grid, g.energy(), tol))
}

/// Check the cross-ambiguity delta structure of a transmit/receive pulse
/// pair. Values are normalized by the origin inner product `<g, gamma>`, so
/// the verdict measures leakage relative to the useful peak.
pub fn check_local_biorthogonality(
    g: &SampledSignal,
    gamma: &SampledSignal,
    delay_step: f64,
    doppler_step: f64,
    delay_count: usize,
    doppler_count: usize,
    tol: f64,
) -> Result<OrthogonalityReport> {
    let grid = ambiguity_grid(
        g,
        gamma,
        delay_step,
        doppler_step,
        delay_count,
        doppler_count,
    )?;
    let norm = grid.at(0, 0).norm();
    Ok(delta_report(&grid, norm, tol))
}

/// Check orthogonality across Doppler bins only (the zero-delay axis).
/// Requires the support of `g` to equal one reciprocal Doppler step.
pub fn check_freq_orthogonality(
    g: &SampledSignal,
    doppler_step: f64,
    doppler_count: usize,
    tol: f64,
) -> Result<OrthogonalityReport> {
    if !(doppler_step.is_finite() && doppler_step > 0.0) {
        return Err(Error::InvalidParameter(
            "doppler step must be positive".into(),
        ));
    }
    let period = 1.0 / doppler_step;
    if (g.duration() - period).abs() > 0.5 * g.dt() {
        return Err(Error::InvalidParameter(format!(
            "signal support {} must equal the reciprocal doppler step {period}",
            g.duration()
        )));
    }
    let grid = ambiguity_grid(g, g, g.dt(), doppler_step, 1, doppler_count)?;
    Ok(delta_report(&grid, g.energy(), tol))
}

/// Check the zero-Doppler axis only: the sampled autocorrelation at delay
/// lattice points, which is the square-root-Nyquist property for the given
/// interval.
pub fn check_srn(
    pulse: &SampledSignal,
    delay_step: f64,
    delay_count: usize,
    tol: f64,
) -> Result<OrthogonalityReport> {
    let grid = ambiguity_grid(pulse, pulse, delay_step, 1.0, delay_count, 1)?;
    Ok(delta_report(&grid, pulse.energy(), tol))
}

/// Maximum deviation `|s(t) - s(t + k * period)|` over all grid points of
/// `[window_start, window_end]` and all k >= 1 keeping both points inside the
/// window. The signal is taken as zero outside its sampled support, so a
/// window reaching past the support detects missing cyclic extension.
pub fn check_periodicity(
    s: &SampledSignal,
    period: f64,
    window_start: f64,
    window_end: f64,
    tol: f64,
) -> Result<PeriodicityReport> {
    let dt = s.dt();
    let steps = steps_on_grid(period, dt)?;
    if steps < 1 {
        return Err(Error::InvalidParameter(format!(
            "period {period} must be a positive number of samples"
        )));
    }
    let i0 = steps_on_grid(window_start - s.t0(), dt)?;
    let i1 = steps_on_grid(window_end - s.t0(), dt)?;
    if i1 < i0 {
        return Err(Error::InvalidParameter(
            "window end precedes window start".into(),
        ));
    }
    let value = |i: i64| -> Complex64 {
        if i >= 0 && (i as usize) < s.len() {
            s.samples()[i as usize]
        } else {
            Complex64::new(0.0, 0.0)
        }
    };
    let mut max_deviation = 0.0f64;
    for i in i0..=i1 {
        let mut j = i + steps;
        while j <= i1 {
            max_deviation = max_deviation.max((value(i) - value(j)).norm());
            j += steps;
        }
    }
    Ok(PeriodicityReport {
        passed: max_deviation <= tol,
        max_deviation,
        tolerance: tol,
    })
}
