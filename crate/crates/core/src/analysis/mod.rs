//! Bound verification, bandwidth tuning and error spectra.

mod bound_check;
mod iss;
mod spectrum;
mod tuning;

pub use bound_check::{
    bound_check, write_samples, BoundCheckParams, BoundReport, BoundSample, ControlCheck,
    ControlReport,
};
pub use iss::{
    check_nu, control_error_matrix, iss_control_bound, iss_observer_bound, observer_error_matrix,
    ControlBound, IssBoundParams, ObserverBound,
};
pub use spectrum::{
    bin_width, dominant_peak, error_spectrum, nearest_bin, windowed, write_spectrum_csv,
    SpectrumBin, MIN_SAMPLES,
};
pub use tuning::{je_at, tune_omega, TuneResult, MAX_ITERATIONS};
