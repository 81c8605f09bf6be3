//! Single degree-of-freedom mechanical plant `J(q) q̈ + h(q, q̇) + h_m(q, q̇) + τ* = τ`
//! and the ground-truth total disturbance seen by the error-domain observers.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Configuration-dependent inertia `J(q)`.
pub type InertiaFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
/// Velocity/position dependent term such as `h(q, q̇)` or `h_m(q, q̇)`.
pub type DynamicsFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// External torque `τ*(t) = offset + amplitude·sin(rate·t)`, switched on at `start_time`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DisturbanceSchedule {
    pub offset: f64,
    pub amplitude: f64,
    pub angular_rate: f64,
    pub start_time: f64,
}

impl DisturbanceSchedule {
    pub const NONE: DisturbanceSchedule = DisturbanceSchedule {
        offset: 0.0,
        amplitude: 0.0,
        angular_rate: 0.0,
        start_time: 0.0,
    };

    /// `2.5 sin(15 t)` from `t = 5 s`.
    pub fn benchmark() -> Self {
        DisturbanceSchedule {
            offset: 0.0,
            amplitude: 2.5,
            angular_rate: 15.0,
            start_time: 5.0,
        }
    }

    pub fn is_active(&self, t: f64) -> bool {
        t >= self.start_time
    }

    /// Value at `t` when the switch state is decided elsewhere (the simulator
    /// fixes it at the start of each integration step).
    pub fn value_gated(&self, t: f64, active: bool) -> f64 {
        if active {
            self.offset + self.amplitude * (self.angular_rate * t).sin()
        } else {
            0.0
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        self.value_gated(t, self.is_active(t))
    }
}

/// Configuration and rate of the plant.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PlantState {
    pub q: f64,
    pub qdot: f64,
}

impl PlantState {
    pub fn is_finite(&self) -> bool {
        self.q.is_finite() && self.qdot.is_finite()
    }
}

#[derive(Clone)]
pub struct PlantModel {
    inertia: InertiaFn,
    unmodeled: DynamicsFn,
    modeled: DynamicsFn,
    pub disturbance: DisturbanceSchedule,
}

impl fmt::Debug for PlantModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PlantModel")
            .field("disturbance", &self.disturbance)
            .finish_non_exhaustive()
    }
}

impl PlantModel {
    pub fn new(
        inertia: InertiaFn,
        unmodeled: DynamicsFn,
        modeled: DynamicsFn,
        disturbance: DisturbanceSchedule,
    ) -> Self {
        PlantModel {
            inertia,
            unmodeled,
            modeled,
            disturbance,
        }
    }

    /// Constant-inertia mass-spring-damper `J q̈ + c q̇ + k q` where the whole
    /// `c q̇ + k q` term is treated as unmodeled.
    pub fn mass_spring_damper(
        inertia: f64,
        damping: f64,
        stiffness: f64,
        disturbance: DisturbanceSchedule,
    ) -> Self {
        PlantModel::new(
            Arc::new(move |_| inertia),
            Arc::new(move |q, qdot| damping * qdot + stiffness * q),
            Arc::new(|_, _| 0.0),
            disturbance,
        )
    }

    /// `G(s) = 1/(s+1)²` in mechanical form: `J = 1`, `h = 2q̇ + q`, `h_m ≡ 0`, no disturbance.
    pub fn preset_double_lag() -> Self {
        PlantModel::mass_spring_damper(1.0, 2.0, 1.0, DisturbanceSchedule::NONE)
    }

    /// Replaces the modeled dynamics `h_m` (friction hook).
    pub fn with_modeled_dynamics(mut self, modeled: DynamicsFn) -> Self {
        self.modeled = modeled;
        self
    }

    pub fn with_disturbance(mut self, disturbance: DisturbanceSchedule) -> Self {
        self.disturbance = disturbance;
        self
    }

    pub fn modeled_dynamics(&self) -> DynamicsFn {
        Arc::clone(&self.modeled)
    }

    pub fn inertia_at(&self, q: f64) -> Result<f64> {
        let j = (self.inertia)(q);
        if j > 0.0 {
            Ok(j)
        } else {
            Err(Error::NonPositiveInertia(j))
        }
    }

    /// `q̈` for a given external torque value.
    pub fn acceleration(&self, s: &PlantState, tau: f64, tau_star: f64) -> Result<f64> {
        let j = self.inertia_at(s.q)?;
        let h = (self.unmodeled)(s.q, s.qdot);
        let hm = (self.modeled)(s.q, s.qdot);
        Ok((tau - h - hm - tau_star) / j)
    }

    /// `f = q̈_d − (τ − h_m − h − τ*)/J + (τ − ĥ_m)/Ĵ` for a given `τ*` value.
    pub fn total_disturbance_with(
        &self,
        est: &ModelEstimate,
        s: &PlantState,
        tau: f64,
        qdd_desired: f64,
        tau_star: f64,
        hm_hat: f64,
    ) -> Result<f64> {
        let qdd = self.acceleration(s, tau, tau_star)?;
        Ok(qdd_desired - qdd + est.effective_input(tau, hm_hat))
    }
}

/// Returns `(q̇, q̈)`.
pub fn plant_derivative(m: &PlantModel, s: &PlantState, tau: f64, t: f64) -> Result<(f64, f64)> {
    let qdd = m.acceleration(s, tau, m.disturbance.value(t))?;
    Ok((s.qdot, qdd))
}

/// Total disturbance `f` from privileged knowledge of `J`, `h`, `h_m` and `τ*`.
///
/// `ĥ_m` is evaluated at the true state here; the controller evaluates it at
/// the estimated state, which only matters when a modeled-dynamics hook is set.
pub fn total_disturbance_truth(
    m: &PlantModel,
    est: &ModelEstimate,
    s: &PlantState,
    tau: f64,
    qdd_desired: f64,
    t: f64,
) -> Result<f64> {
    let hm_hat = est.modeled_at(s.q, s.qdot);
    m.total_disturbance_with(est, s, tau, qdd_desired, m.disturbance.value(t), hm_hat)
}

/// Controller-side model: `Ĵ` and `ĥ_m`.
#[derive(Clone)]
pub struct ModelEstimate {
    inertia: f64,
    modeled: Option<DynamicsFn>,
}

impl fmt::Debug for ModelEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ModelEstimate")
            .field("inertia", &self.inertia)
            .field("modeled", &self.modeled.is_some())
            .finish()
    }
}

impl ModelEstimate {
    /// `Ĵ` with `ĥ_m ≡ 0`.
    pub fn new(inertia: f64) -> Result<Self> {
        if !(inertia > 0.0) {
            return Err(Error::NonPositiveInertia(inertia));
        }
        Ok(ModelEstimate {
            inertia,
            modeled: None,
        })
    }

    pub fn with_modeled_dynamics(mut self, modeled: DynamicsFn) -> Self {
        self.modeled = Some(modeled);
        self
    }

    pub fn inertia(&self) -> f64 {
        self.inertia
    }

    /// `ĥ_m(q, q̇)`, zero when no hook is configured.
    pub fn modeled_at(&self, q: f64, qdot: f64) -> f64 {
        self.modeled.as_ref().map_or(0.0, |h| h(q, qdot))
    }

    /// `(τ − ĥ_m)/Ĵ`, the input seen by the observers.
    pub fn effective_input(&self, tau: f64, hm_hat: f64) -> f64 {
        (tau - hm_hat) / self.inertia
    }
}
