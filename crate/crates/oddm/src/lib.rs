//! Construction and analysis of delay-Doppler plane multicarrier waveforms.
//!
//! The library builds pulse trains of square-root-Nyquist sub-pulses (with
//! optional cyclic extension), verifies their orthogonality on delay-Doppler
//! lattices through ambiguity-function sweeps, synthesizes and demodulates
//! multicarrier frames over deterministic delay-Doppler channels, and
//! cross-checks closed-form spectra against direct numerical transforms.
//!
//! ```
//! use oddm::{check_local_biorthogonality, make_ddop, make_ddop_extended, DdopParams};
//!
//! let p = DdopParams::new(32, 8, 1.0, 20, 0.1, 8).unwrap();
//! assert_eq!(p.extension_depth(), 2);
//!
//! let tx = make_ddop_extended(&p).unwrap();
//! let rx = make_ddop(&p);
//! let report = check_local_biorthogonality(
//!     &tx,
//!     &rx,
//!     p.time_resolution(),
//!     p.frequency_resolution(),
//!     p.symbols(),
//!     p.subcarriers(),
//!     1e-2,
//! )
//! .unwrap();
//! assert!(report.passed);
//! ```

pub mod ambiguity;
pub mod channel;
pub mod error;
pub mod io;
pub mod modem;
pub mod pulses;
pub mod signal;
pub mod spectral;
pub mod validators;

pub use ambiguity::{ambiguity_grid, cross_ambiguity, shifted_inner_product, AmbiguityGrid};
pub use channel::{DdChannel, DdPath};
pub use error::{Error, Result};
pub use modem::{
    mc_synthesize, oddm_demodulate, oddm_modulate, qam_demap, qam_map, Frame, QamOrder,
};
pub use pulses::{make_ddop, make_ddop_extended, make_periodic, make_rect, make_rrc, DdopParams};
pub use signal::SampledSignal;
pub use spectral::Spectrum;
pub use validators::{
    check_freq_orthogonality, check_local_biorthogonality, check_local_orthogonality,
    check_periodicity, check_srn, OrthogonalityReport, PeriodicityReport,
};

pub use num_complex::Complex64;
