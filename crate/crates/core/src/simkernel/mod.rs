//! Fixed-step simulation of reference filter, plant and observer as one ODE.
//!
//! Regime switches (controller gate, disturbance onset, step input) and the
//! noise sample are fixed at the start of each step and held through all four
//! stages, so a switch lands exactly on the grid.

mod noise;
mod record;
pub mod rk4;

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::compare::benchmark_omega;
use crate::control::{gated_control, modeled_term, ControllerParams};
use crate::error::{Error, Result};
use crate::observers::{EsoInput, Estimates, Observer, ObserverVariant};
use crate::plant::{DisturbanceSchedule, ModelEstimate, PlantModel, PlantState};
use crate::trajectory::{FilteredStepParams, Reference, SinusoidGen, FILTER_ORDER};

pub use noise::{noise_stream, NoiseStream};
pub use record::{
    criteria, five_point_derivative, trapezoid, Criteria, CriteriaScale, RunMeta, RunRecord,
    Series, Summary, CSV_HEADER,
};

/// States beyond this magnitude count as divergence.
pub const DIVERGENCE_LIMIT: f64 = 1e12;
/// Largest accepted `ω_o · dt`.
pub const MAX_OMEGA_DT: f64 = 2.0;

/// Mass-spring-damper plant `J q̈ + c q̇ + k q`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlantParams {
    pub inertia: f64,
    pub damping: f64,
    pub stiffness: f64,
    /// Initial configuration; defaults to `q_d(0)`.
    pub q0: Option<f64>,
    /// Initial rate; defaults to `q̇_d(0)`.
    pub qdot0: Option<f64>,
}

impl Default for PlantParams {
    fn default() -> Self {
        PlantParams {
            inertia: 1.0,
            damping: 2.0,
            stiffness: 1.0,
            q0: None,
            qdot0: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum TrajectoryConfig {
    FilteredStep(FilteredStepParams),
    Sinusoid(SinusoidGen),
}

impl Default for TrajectoryConfig {
    fn default() -> Self {
        TrajectoryConfig::FilteredStep(FilteredStepParams::default())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObserverConfig {
    pub variant: ObserverVariant,
    pub omega_o: f64,
    /// Oscillator rate of the resonant variants.
    pub omega_r: f64,
    /// Block gains of the AM variants; defaults per order when absent.
    pub am_gains: Option<Vec<[f64; 2]>>,
    /// Initial extended-state estimate `ẑ(0)`; zeros when absent.
    pub initial: Option<Vec<f64>>,
}

impl ObserverConfig {
    pub fn new(variant: ObserverVariant, omega_o: f64) -> Self {
        ObserverConfig {
            variant,
            omega_o,
            omega_r: 15.0,
            am_gains: None,
            initial: None,
        }
    }

    pub fn build(&self) -> Result<Observer> {
        let mut o = Observer::new(self.variant, self.omega_o, self.omega_r, self.am_gains.clone())?;
        if let Some(z) = &self.initial {
            o.set_from_estimate(z)
                .map_err(|e| Error::config("observer.initial", e.to_string()))?;
        }
        Ok(o)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub enum NoiseModel {
    #[default]
    None,
    /// Discrete-time Gaussian of this variance, held over each step.
    Gaussian { variance: f64 },
}

impl NoiseModel {
    pub fn variance(&self) -> f64 {
        match *self {
            NoiseModel::None => 0.0,
            NoiseModel::Gaussian { variance } => variance,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimParams {
    pub t_sim: f64,
    pub dt: f64,
    pub seed: u64,
    pub criteria_scale: CriteriaScale,
}

impl Default for SimParams {
    fn default() -> Self {
        SimParams {
            t_sim: 20.0,
            dt: 1e-3,
            seed: 0,
            criteria_scale: CriteriaScale::Integral,
        }
    }
}

impl SimParams {
    pub fn steps(&self) -> usize {
        (self.t_sim / self.dt).round() as usize
    }
}

/// Complete description of one experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub plant: PlantParams,
    pub trajectory: TrajectoryConfig,
    pub observer: ObserverConfig,
    /// Controller-side inertia estimate `Ĵ`.
    pub inertia_hat: f64,
    pub controller: ControllerParams,
    pub noise: NoiseModel,
    pub disturbance: DisturbanceSchedule,
    pub sim: SimParams,
}

impl ScenarioConfig {
    /// Benchmark protocol around the given observer, without noise.
    pub fn benchmark(observer: ObserverConfig) -> Self {
        ScenarioConfig {
            plant: PlantParams::default(),
            trajectory: TrajectoryConfig::default(),
            observer,
            inertia_hat: 1.0,
            controller: ControllerParams::default(),
            noise: NoiseModel::None,
            disturbance: DisturbanceSchedule::benchmark(),
            sim: SimParams::default(),
        }
    }

    /// Noise-free protocol with the reference bandwidth for `variant`.
    pub fn scenario1(variant: ObserverVariant) -> Self {
        ScenarioConfig::preset(1, variant).expect("scenario 1 exists")
    }

    /// Noisy protocol (`σ_w = 1e-5`) with the reference bandwidth for `variant`.
    pub fn scenario2(variant: ObserverVariant) -> Self {
        ScenarioConfig::preset(2, variant).expect("scenario 2 exists")
    }

    pub fn preset(scenario: u8, variant: ObserverVariant) -> Result<Self> {
        let omega_o = benchmark_omega(scenario, variant)?;
        let mut cfg = ScenarioConfig::benchmark(ObserverConfig::new(variant, omega_o));
        if scenario == 2 {
            cfg.noise = NoiseModel::Gaussian { variance: 1e-5 };
        }
        Ok(cfg)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.sim.seed = seed;
        self
    }

    pub fn with_omega(mut self, omega_o: f64) -> Self {
        self.observer.omega_o = omega_o;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |key: &str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::config(key, format!("must be finite, got {v}")))
            }
        };
        let positive = |key: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::config(key, format!("must be positive, got {v}")))
            }
        };
        let s = &self.sim;
        positive("sim.dt", s.dt)?;
        positive("sim.t_sim", s.t_sim)?;
        if s.t_sim < s.dt {
            return Err(Error::config(
                "sim.t_sim",
                format!("must be at least sim.dt = {}, got {}", s.dt, s.t_sim),
            ));
        }
        positive("plant.inertia", self.plant.inertia)?;
        finite("plant.damping", self.plant.damping)?;
        finite("plant.stiffness", self.plant.stiffness)?;
        if let Some(q) = self.plant.q0 {
            finite("plant.q0", q)?;
        }
        if let Some(v) = self.plant.qdot0 {
            finite("plant.qdot0", v)?;
        }
        positive("controller.inertia_hat", self.inertia_hat)?;
        self.controller.validate()?;
        match self.trajectory {
            TrajectoryConfig::FilteredStep(p) => {
                finite("trajectory.step_time", p.step_time)?;
                finite("trajectory.amplitude", p.amplitude)?;
                positive("trajectory.time_constant", p.time_constant)?;
            }
            TrajectoryConfig::Sinusoid(g) => {
                if !(g.amplitude >= 0.0 && g.amplitude.is_finite()) {
                    return Err(Error::config(
                        "trajectory.amplitude",
                        format!("must be non-negative, got {}", g.amplitude),
                    ));
                }
                finite("trajectory.angular_rate", g.angular_rate)?;
            }
        }
        let v = self.noise.variance();
        if !(v >= 0.0 && v.is_finite()) {
            return Err(Error::config(
                "noise.variance",
                format!("must be non-negative, got {v}"),
            ));
        }
        let d = &self.disturbance;
        finite("disturbance.offset", d.offset)?;
        finite("disturbance.amplitude", d.amplitude)?;
        finite("disturbance.angular_rate", d.angular_rate)?;
        finite("disturbance.start_time", d.start_time)?;
        let o = &self.observer;
        positive("observer.omega_o", o.omega_o)?;
        if o.omega_o * s.dt > MAX_OMEGA_DT {
            return Err(Error::config(
                "observer.omega_o",
                format!(
                    "omega_o * dt = {} exceeds the stability margin {MAX_OMEGA_DT} of the \
                     fixed-step integrator; reduce sim.dt below {}",
                    o.omega_o * s.dt,
                    MAX_OMEGA_DT / o.omega_o
                ),
            ));
        }
        o.build()?;
        Ok(())
    }

    pub fn plant_model(&self) -> PlantModel {
        PlantModel::mass_spring_damper(
            self.plant.inertia,
            self.plant.damping,
            self.plant.stiffness,
            self.disturbance,
        )
    }

    pub fn model_estimate(&self) -> Result<ModelEstimate> {
        ModelEstimate::new(self.inertia_hat)
    }
}

/// Switch states held over one integration step.
#[derive(Clone, Copy, Debug)]
struct Regime {
    controller: bool,
    disturbance: bool,
    step: bool,
    noise: f64,
}

/// Everything evaluated at one state.
#[derive(Clone, Copy, Debug, Default)]
struct Signals {
    q: f64,
    reference: Reference,
    e: f64,
    edot: f64,
    y: f64,
    est: Estimates,
    tau: f64,
    f_true: f64,
}

struct System<'a> {
    plant: &'a PlantModel,
    model: &'a ModelEstimate,
    controller: &'a ControllerParams,
    trajectory: TrajectoryConfig,
    observer: &'a Observer,
    traj_len: usize,
}

impl System<'_> {
    fn eval(&self, t: f64, x: &[f64], r: &Regime, dx: &mut [f64]) -> Result<Signals> {
        let reference = match self.trajectory {
            TrajectoryConfig::FilteredStep(p) => {
                p.derivative(&x[..FILTER_ORDER], p.input(r.step), &mut dx[..FILTER_ORDER]);
                p.reference(&x[..FILTER_ORDER])
            }
            TrajectoryConfig::Sinusoid(g) => g.sample(t),
        };
        let o = self.traj_len;
        let s = PlantState {
            q: x[o],
            qdot: x[o + 1],
        };
        let e = reference.position - s.q;
        let edot = reference.velocity - s.qdot;
        let y = e + r.noise;
        let xo = &x[o + 2..];
        let est = self.observer.estimates_at(xo);
        let hm_hat = modeled_term(self.model, reference.position, reference.velocity, &est);
        let tau = gated_control(self.controller, self.model, hm_hat, &est, r.controller);
        let tau_star = self.plant.disturbance.value_gated(t, r.disturbance);
        let qdd = self.plant.acceleration(&s, tau, tau_star)?;
        let u_eff = self.model.effective_input(tau, hm_hat);
        dx[o] = s.qdot;
        dx[o + 1] = qdd;
        self.observer
            .derivative_at(xo, EsoInput { y, u_eff }, &mut dx[o + 2..]);
        Ok(Signals {
            q: s.q,
            reference,
            e,
            edot,
            y,
            est,
            tau,
            f_true: reference.acceleration - qdd + u_eff,
        })
    }
}

/// Runs the scenario with its mass-spring-damper plant and `ĥ_m ≡ 0`.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<RunRecord> {
    cfg.validate()?;
    run_scenario_with(cfg, &cfg.plant_model(), &cfg.model_estimate()?)
}

/// Runs the scenario against a caller-supplied plant and model estimate (for
/// example with friction hooks). The disturbance of `plant` is used as is.
pub fn run_scenario_with(
    cfg: &ScenarioConfig,
    plant: &PlantModel,
    model: &ModelEstimate,
) -> Result<RunRecord> {
    cfg.validate()?;
    let observer = cfg.observer.build()?;
    let traj_len = match cfg.trajectory {
        TrajectoryConfig::FilteredStep(_) => FILTER_ORDER,
        TrajectoryConfig::Sinusoid(_) => 0,
    };
    let sys = System {
        plant,
        model,
        controller: &cfg.controller,
        trajectory: cfg.trajectory,
        observer: &observer,
        traj_len,
    };
    let n_obs = observer.state_len();
    let mut x = vec![0.0; traj_len + 2 + n_obs];
    let r0 = match cfg.trajectory {
        TrajectoryConfig::FilteredStep(p) => p.reference(&x[..FILTER_ORDER]),
        TrajectoryConfig::Sinusoid(g) => g.sample(0.0),
    };
    x[traj_len] = cfg.plant.q0.unwrap_or(r0.position);
    x[traj_len + 1] = cfg.plant.qdot0.unwrap_or(r0.velocity);
    x[traj_len + 2..].copy_from_slice(observer.state());

    let dt = cfg.sim.dt;
    let steps = cfg.sim.steps();
    let mut noise = NoiseStream::new(cfg.sim.seed, cfg.noise.variance())?;
    let mut series = Series::with_capacity(steps + 1);
    let mut rk = rk4::Rk4::new(x.len());
    let mut scratch = vec![0.0; x.len()];
    let mut diverged_at = None;
    let step_regime = |t: f64| match cfg.trajectory {
        TrajectoryConfig::FilteredStep(p) => p.is_active(t),
        TrajectoryConfig::Sinusoid(_) => false,
    };

    for k in 0..=steps {
        let t = k as f64 * dt;
        let regime = Regime {
            controller: cfg.controller.is_active(t),
            disturbance: plant.disturbance.is_active(t),
            step: step_regime(t),
            noise: noise.next_sample(),
        };
        let sig = sys.eval(t, &x, &regime, &mut scratch)?;
        series.t.push(t);
        series.q.push(sig.q);
        series.q_d.push(sig.reference.position);
        series.e.push(sig.e);
        series.edot.push(sig.edot);
        series.y.push(sig.y);
        series.e_hat.push(sig.est.e);
        series.edot_hat.push(sig.est.edot);
        series.f_hat.push(sig.est.f);
        series.f_true.push(sig.f_true);
        series.tau.push(sig.tau);
        if k == steps {
            break;
        }
        let mut failure = None;
        rk.step(&mut x, t, dt, |ts, xs, dx| {
            if let Err(e) = sys.eval(ts, xs, &regime, dx) {
                failure.get_or_insert(e);
                dx.fill(f64::NAN);
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
        if x.iter().any(|v| !(v.abs() <= DIVERGENCE_LIMIT)) {
            diverged_at = Some(t + dt);
            break;
        }
    }

    let criteria = match diverged_at {
        Some(_) => None,
        None => Some(criteria(&series, cfg.sim.criteria_scale)?),
    };
    Ok(RunRecord {
        meta: RunMeta {
            observer: cfg.observer.variant,
            omega_o: cfg.observer.omega_o,
            seed: cfg.sim.seed,
            dt,
            t_sim: cfg.sim.t_sim,
            criteria_scale: cfg.sim.criteria_scale,
        },
        series,
        criteria,
        diverged_at,
    })
}

/// Runs independent configurations on worker threads. Results keep the input
/// order.
pub fn run_batch(cfgs: &[ScenarioConfig]) -> Vec<Result<RunRecord>> {
    let workers = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(cfgs.len().max(1));
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<Result<RunRecord>>>> = cfgs.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= cfgs.len() {
                    break;
                }
                let r = run_scenario(&cfgs[i]);
                *slots[i].lock().expect("slot lock") = Some(r);
            });
        }
    });
    slots
        .into_iter()
        .map(|m| m.into_inner().expect("slot lock").expect("every slot filled"))
        .collect()
}
