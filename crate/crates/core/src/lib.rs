//! Simulation and benchmarking of disturbance-rejecting trajectory tracking
//! for a single-degree-of-freedom mechanical system, with six extended state
//! observers compared under sinusoidal disturbance and measurement noise.

pub mod analysis;
pub mod compare;
pub mod control;
pub mod document;
pub mod error;
pub mod observers;
pub mod plant;
pub mod simkernel;
pub mod smallmat;
pub mod trajectory;

pub use error::{Error, Result};

// The guide's code listings run as doctests, one module per chapter.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/tracking-loop.md")]
    mod tracking_loop {}
    #[doc = include_str!("../../../book/src/observers.md")]
    mod observers {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
    #[doc = include_str!("../../../book/src/analysis.md")]
    mod analysis {}
    #[doc = include_str!("../../../book/src/command-line.md")]
    mod command_line {}
}
