//! Extended state observers in the error domain.
//!
//! All variants estimate `z = [e, ė, f, …]` from the measured error
//! `y = e + w` and the effective input `u_eff = (τ − ĥ_m)/Ĵ`, where the error
//! dynamics are `ë = f − u_eff`.

mod am;
mod luenberger;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::smallmat::Mat;

pub use am::{am_default_gains, am_extract, AmObserver};
pub use luenberger::{luenberger_gains, LuenbergerEso};

/// Internal model of the extended state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EsoStructure {
    /// `[e, ė, f]`, constant-disturbance model.
    Standard3,
    /// `[e, ė, f, ḟ, f̈]`, `f` modeled as a quadratic in time.
    Extended5,
    /// `[e, ė, f, ḟ_o, f̈_o]` with an oscillator of rate `omega_r` embedded.
    Resonant5 { omega_r: f64 },
}

impl EsoStructure {
    pub fn order(&self) -> usize {
        match self {
            EsoStructure::Standard3 => 3,
            EsoStructure::Extended5 | EsoStructure::Resonant5 { .. } => 5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            EsoStructure::Resonant5 { omega_r } if !(omega_r > 0.0 && omega_r.is_finite()) => Err(
                Error::config("observer.omega_r", format!("must be positive, got {omega_r}")),
            ),
            _ => Ok(()),
        }
    }

    /// Chain map `φ_i(z)` for 1-based `i`: the right-hand side of `ż_i` in the
    /// noise-free model.
    pub(crate) fn phi(&self, z: &[f64], u_eff: f64, i: usize) -> f64 {
        let n = self.order();
        if i < n {
            let v = z[i];
            if i == 2 {
                v - u_eff
            } else {
                v
            }
        } else {
            match *self {
                EsoStructure::Resonant5 { omega_r } => -omega_r * omega_r * z[3],
                _ => 0.0,
            }
        }
    }
}

/// State-space matrices of the extended error model.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureMatrices {
    pub a: Mat,
    pub b: Mat,
    pub c: Mat,
    pub d: Mat,
}

pub fn structure_matrices(s: EsoStructure) -> StructureMatrices {
    let n = s.order();
    let mut a = Mat::zeros(n, n).expect("order within bounds");
    for i in 0..n - 1 {
        a[(i, i + 1)] = 1.0;
    }
    let mut b = Mat::zeros(n, 1).expect("order within bounds");
    b[(1, 0)] = 1.0;
    let mut c = Mat::zeros(1, n).expect("order within bounds");
    c[(0, 0)] = 1.0;
    let mut d = Mat::zeros(n, 1).expect("order within bounds");
    match s {
        EsoStructure::Resonant5 { omega_r } => {
            a[(4, 3)] = -omega_r * omega_r;
            d[(2, 0)] = 1.0;
        }
        _ => d[(n - 1, 0)] = 1.0,
    }
    StructureMatrices { a, b, c, d }
}

/// Measurement and input fed to an observer.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct EsoInput {
    pub y: f64,
    pub u_eff: f64,
}

/// `(ê, ê̇, f̂)`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Estimates {
    pub e: f64,
    pub edot: f64,
    pub f: f64,
}

/// The six benchmarked observers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObserverVariant {
    Eso3,
    Eso5,
    Reso,
    AmEso3,
    AmEso5,
    AmReso,
}

impl ObserverVariant {
    pub const ALL: [ObserverVariant; 6] = [
        ObserverVariant::Eso3,
        ObserverVariant::Eso5,
        ObserverVariant::Reso,
        ObserverVariant::AmEso3,
        ObserverVariant::AmEso5,
        ObserverVariant::AmReso,
    ];

    /// Row label used in comparison tables.
    pub fn label(&self) -> &'static str {
        match self {
            ObserverVariant::Eso3 => "ESO n=3",
            ObserverVariant::Eso5 => "ESO n=5",
            ObserverVariant::Reso => "RESO",
            ObserverVariant::AmEso3 => "AM ESO n=3",
            ObserverVariant::AmEso5 => "AM ESO n=5",
            ObserverVariant::AmReso => "AM RESO",
        }
    }

    /// Short machine-readable tag, as accepted by `FromStr`.
    pub fn tag(&self) -> &'static str {
        match self {
            ObserverVariant::Eso3 => "eso3",
            ObserverVariant::Eso5 => "eso5",
            ObserverVariant::Reso => "reso",
            ObserverVariant::AmEso3 => "am_eso3",
            ObserverVariant::AmEso5 => "am_eso5",
            ObserverVariant::AmReso => "am_reso",
        }
    }

    pub fn is_am(&self) -> bool {
        matches!(
            self,
            ObserverVariant::AmEso3 | ObserverVariant::AmEso5 | ObserverVariant::AmReso
        )
    }

    pub fn structure(&self, omega_r: f64) -> EsoStructure {
        match self {
            ObserverVariant::Eso3 | ObserverVariant::AmEso3 => EsoStructure::Standard3,
            ObserverVariant::Eso5 | ObserverVariant::AmEso5 => EsoStructure::Extended5,
            ObserverVariant::Reso | ObserverVariant::AmReso => EsoStructure::Resonant5 { omega_r },
        }
    }
}

impl fmt::Display for ObserverVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ObserverVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .trim()
            .to_ascii_lowercase()
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect();
        let v = match key.as_str() {
            "eso3" | "eson3" => ObserverVariant::Eso3,
            "eso5" | "eson5" => ObserverVariant::Eso5,
            "reso" => ObserverVariant::Reso,
            "ameso3" | "ameson3" => ObserverVariant::AmEso3,
            "ameso5" | "ameson5" => ObserverVariant::AmEso5,
            "amreso" => ObserverVariant::AmReso,
            _ => {
                return Err(Error::config(
                    "observer.variant",
                    format!(
                        "unknown variant `{s}` (expected one of eso3, eso5, reso, am_eso3, am_eso5, am_reso)"
                    ),
                ))
            }
        };
        Ok(v)
    }
}

/// Any of the observers, owning its state.
#[derive(Clone, Debug, PartialEq)]
pub enum Observer {
    Luenberger(LuenbergerEso),
    Am(AmObserver),
}

impl Observer {
    /// Zero-initialized observer. `am_gains` overrides the default block gains
    /// of the AM variants and is ignored otherwise.
    pub fn new(
        variant: ObserverVariant,
        omega_o: f64,
        omega_r: f64,
        am_gains: Option<Vec<[f64; 2]>>,
    ) -> Result<Self> {
        let structure = variant.structure(omega_r);
        if variant.is_am() {
            let gains = match am_gains {
                Some(g) => g,
                None => am_default_gains(structure.order())?,
            };
            Ok(Observer::Am(AmObserver::new(structure, omega_o, gains)?))
        } else {
            Ok(Observer::Luenberger(LuenbergerEso::new(structure, omega_o)?))
        }
    }

    pub fn structure(&self) -> EsoStructure {
        match self {
            Observer::Luenberger(o) => o.structure,
            Observer::Am(o) => o.structure,
        }
    }

    pub fn state(&self) -> &[f64] {
        match self {
            Observer::Luenberger(o) => &o.state,
            Observer::Am(o) => &o.state,
        }
    }

    pub fn state_len(&self) -> usize {
        self.state().len()
    }

    pub fn set_state(&mut self, x: &[f64]) -> Result<()> {
        let state = match self {
            Observer::Luenberger(o) => &mut o.state,
            Observer::Am(o) => &mut o.state,
        };
        if x.len() != state.len() {
            return Err(Error::DimensionMismatch {
                expected: format!("observer state of length {}", state.len()),
                found: format!("length {}", x.len()),
            });
        }
        state.copy_from_slice(x);
        Ok(())
    }

    /// Sets the state so that the extracted estimate equals `z`. For the AM
    /// observer each block's first entry copies the previous block's second.
    pub fn set_from_estimate(&mut self, z: &[f64]) -> Result<()> {
        let n = self.structure().order();
        if z.len() != n {
            return Err(Error::DimensionMismatch {
                expected: format!("estimate of length {n}"),
                found: format!("length {}", z.len()),
            });
        }
        match self {
            Observer::Luenberger(o) => o.state.copy_from_slice(z),
            Observer::Am(o) => {
                for i in 0..n - 1 {
                    o.state[2 * i] = z[i];
                    o.state[2 * i + 1] = z[i + 1];
                }
            }
        }
        Ok(())
    }

    /// Derivative of an arbitrary state vector `x` (used by the integrator stages).
    pub fn derivative_at(&self, x: &[f64], input: EsoInput, out: &mut [f64]) {
        match self {
            Observer::Luenberger(o) => o.derivative_at(x, input, out),
            Observer::Am(o) => o.derivative_at(x, input, out),
        }
    }

    pub fn derivative(&self, input: EsoInput) -> Vec<f64> {
        let mut out = vec![0.0; self.state_len()];
        self.derivative_at(self.state(), input, &mut out);
        out
    }

    /// Estimates read from an arbitrary state vector.
    pub fn estimates_at(&self, x: &[f64]) -> Estimates {
        match self {
            Observer::Luenberger(_) => Estimates {
                e: x[0],
                edot: x[1],
                f: x[2],
            },
            Observer::Am(_) => Estimates {
                e: x[0],
                edot: x[1],
                f: x[3],
            },
        }
    }

    pub fn estimates(&self) -> Estimates {
        self.estimates_at(self.state())
    }

    /// Full extended-state estimate `ẑ` (length `n`).
    pub fn extended_estimate(&self) -> Vec<f64> {
        match self {
            Observer::Luenberger(o) => o.state.clone(),
            Observer::Am(o) => am_extract(&o.state),
        }
    }
}

/// `(ê, ê̇, f̂)` of any observer.
pub fn observer_estimates(o: &Observer) -> Estimates {
    o.estimates()
}
