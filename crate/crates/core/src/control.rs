//! Disturbance-cancelling PD tracking law with a start-up gate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::observers::Estimates;
use crate::plant::ModelEstimate;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ControllerParams {
    pub kp: f64,
    pub kd: f64,
    /// The controller outputs zero before this time, hiding observer peaking.
    pub t_on: f64,
}

impl Default for ControllerParams {
    fn default() -> Self {
        ControllerParams {
            kp: 4.0,
            kd: 4.0,
            t_on: 1.0,
        }
    }
}

impl ControllerParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.kp > 0.0 && self.kp.is_finite()) {
            return Err(Error::config("controller.kp", format!("must be positive, got {}", self.kp)));
        }
        if !(self.kd > 0.0 && self.kd.is_finite()) {
            return Err(Error::config("controller.kd", format!("must be positive, got {}", self.kd)));
        }
        if !(self.t_on >= 0.0 && self.t_on.is_finite()) {
            return Err(Error::config(
                "controller.t_on",
                format!("must be non-negative, got {}", self.t_on),
            ));
        }
        Ok(())
    }

    pub fn is_active(&self, t: f64) -> bool {
        t >= self.t_on
    }
}

/// `ĥ_m` evaluated on the estimated state `(q_d − ê, q̇_d − ê̇)`.
pub fn modeled_term(est: &ModelEstimate, q_d: f64, qdot_d: f64, x: &Estimates) -> f64 {
    est.modeled_at(q_d - x.e, qdot_d - x.edot)
}

/// `τ = ĥ_m + Ĵ (f̂ + k_p ê + k_d ê̇)` once active, zero before `t_on`.
pub fn control_law(p: &ControllerParams, est: &ModelEstimate, hm_hat: f64, x: &Estimates, t: f64) -> f64 {
    gated_control(p, est, hm_hat, x, p.is_active(t))
}

/// As [`control_law`] with the gate state supplied by the caller.
pub fn gated_control(
    p: &ControllerParams,
    est: &ModelEstimate,
    hm_hat: f64,
    x: &Estimates,
    active: bool,
) -> f64 {
    if active {
        hm_hat + est.inertia() * (x.f + p.kp * x.e + p.kd * x.edot)
    } else {
        0.0
    }
}

/// Predicted `ë` of the closed loop given the estimation errors
/// `ẽ = e − ê`, `ė̃ = ė − ê̇`, `f̃ = f − f̂`:
/// `ë = −k_p e − k_d ė + f̃ + k_p ẽ + k_d ė̃`.
pub fn closed_loop_residual(
    e: f64,
    edot: f64,
    e_tilde: f64,
    edot_tilde: f64,
    f_tilde: f64,
    p: &ControllerParams,
) -> f64 {
    -p.kp * e - p.kd * edot + f_tilde + p.kp * e_tilde + p.kd * edot_tilde
}
