//! TOML scenario documents.
//!
//! Every section is optional except `[observer]` with its `variant`. Omitted
//! keys fall back to the benchmark protocol, or to the named `preset` when one
//! is given.
//!
//! ```
//! use adrc_core::document::ConfigDocument;
//!
//! let cfg = ConfigDocument::parse(r#"
//!     preset = "scenario2"
//!     [observer]
//!     variant = "reso"
//!     [sim]
//!     seed = 7
//! "#).unwrap().to_scenario().unwrap();
//! assert_eq!(cfg.observer.omega_o, 31.52);
//! assert_eq!(cfg.noise.variance(), 1e-5);
//! ```

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::observers::ObserverVariant;
use crate::simkernel::{NoiseModel, ObserverConfig, ScenarioConfig, TrajectoryConfig};
use crate::trajectory::{FilteredStepParams, SinusoidGen};

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    pub preset: Option<String>,
    pub plant: Option<PlantSection>,
    pub trajectory: Option<TrajectorySection>,
    pub observer: Option<ObserverSection>,
    pub controller: Option<ControllerSection>,
    pub noise: Option<NoiseSection>,
    pub disturbance: Option<DisturbanceSection>,
    pub sim: Option<SimSection>,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlantSection {
    pub inertia: Option<f64>,
    pub damping: Option<f64>,
    pub stiffness: Option<f64>,
    pub q0: Option<f64>,
    pub qdot0: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrajectorySection {
    /// `filtered_step` or `sinusoid`.
    pub kind: Option<String>,
    pub step_time: Option<f64>,
    pub amplitude: Option<f64>,
    pub time_constant: Option<f64>,
    pub angular_rate: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObserverSection {
    pub variant: Option<String>,
    pub omega_o: Option<f64>,
    pub omega_r: Option<f64>,
    pub am_gains: Option<Vec<[f64; 2]>>,
    pub initial: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControllerSection {
    pub kp: Option<f64>,
    pub kd: Option<f64>,
    pub t_on: Option<f64>,
    pub inertia_hat: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSection {
    /// Per-step variance; zero disables noise.
    pub variance: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DisturbanceSection {
    pub offset: Option<f64>,
    pub amplitude: Option<f64>,
    pub angular_rate: Option<f64>,
    pub start_time: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSection {
    pub t_sim: Option<f64>,
    pub dt: Option<f64>,
    pub seed: Option<u64>,
    /// `integral` or `mean`.
    pub criteria_scale: Option<String>,
}

fn set<T: Copy>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

impl ConfigDocument {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::config("config", e.to_string().trim_end().to_string()))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        ConfigDocument::parse(&std::fs::read_to_string(path)?)
    }

    fn preset_number(&self) -> Result<Option<u8>> {
        match self.preset.as_deref() {
            None => Ok(None),
            Some("scenario1") => Ok(Some(1)),
            Some("scenario2") => Ok(Some(2)),
            Some(other) => Err(Error::config(
                "preset",
                format!("unknown preset `{other}` (expected scenario1 or scenario2)"),
            )),
        }
    }

    /// Resolves the document into a validated scenario.
    pub fn to_scenario(&self) -> Result<ScenarioConfig> {
        let preset = self.preset_number()?;
        let obs = self
            .observer
            .as_ref()
            .ok_or_else(|| Error::config("observer.variant", "observer.variant required"))?;
        let variant: ObserverVariant = obs
            .variant
            .as_deref()
            .ok_or_else(|| Error::config("observer.variant", "observer.variant required"))?
            .parse()?;
        let mut cfg = match (preset, obs.omega_o) {
            (Some(n), _) => ScenarioConfig::preset(n, variant)?,
            (None, Some(w)) => ScenarioConfig::benchmark(ObserverConfig::new(variant, w)),
            (None, None) => {
                return Err(Error::config(
                    "observer.omega_o",
                    "observer.omega_o required when no preset is given",
                ))
            }
        };
        set(&mut cfg.observer.omega_o, obs.omega_o);
        set(&mut cfg.observer.omega_r, obs.omega_r);
        if obs.am_gains.is_some() {
            cfg.observer.am_gains = obs.am_gains.clone();
        }
        if obs.initial.is_some() {
            cfg.observer.initial = obs.initial.clone();
        }

        if let Some(p) = &self.plant {
            set(&mut cfg.plant.inertia, p.inertia);
            set(&mut cfg.plant.damping, p.damping);
            set(&mut cfg.plant.stiffness, p.stiffness);
            if p.q0.is_some() {
                cfg.plant.q0 = p.q0;
            }
            if p.qdot0.is_some() {
                cfg.plant.qdot0 = p.qdot0;
            }
        }

        if let Some(t) = &self.trajectory {
            cfg.trajectory = match t.kind.as_deref().unwrap_or("filtered_step") {
                "filtered_step" => {
                    if t.angular_rate.is_some() {
                        return Err(Error::config(
                            "trajectory.angular_rate",
                            "only valid with kind = \"sinusoid\"",
                        ));
                    }
                    let mut p = match cfg.trajectory {
                        TrajectoryConfig::FilteredStep(p) => p,
                        TrajectoryConfig::Sinusoid(_) => FilteredStepParams::default(),
                    };
                    set(&mut p.step_time, t.step_time);
                    set(&mut p.amplitude, t.amplitude);
                    set(&mut p.time_constant, t.time_constant);
                    TrajectoryConfig::FilteredStep(p)
                }
                "sinusoid" => {
                    for (key, v) in [("step_time", t.step_time), ("time_constant", t.time_constant)] {
                        if v.is_some() {
                            return Err(Error::config(
                                format!("trajectory.{key}"),
                                "only valid with kind = \"filtered_step\"",
                            ));
                        }
                    }
                    let mut g = SinusoidGen::slow_tracking();
                    set(&mut g.amplitude, t.amplitude);
                    set(&mut g.angular_rate, t.angular_rate);
                    TrajectoryConfig::Sinusoid(g)
                }
                other => {
                    return Err(Error::config(
                        "trajectory.kind",
                        format!("unknown kind `{other}` (expected filtered_step or sinusoid)"),
                    ))
                }
            };
        }

        if let Some(c) = &self.controller {
            set(&mut cfg.controller.kp, c.kp);
            set(&mut cfg.controller.kd, c.kd);
            set(&mut cfg.controller.t_on, c.t_on);
            set(&mut cfg.inertia_hat, c.inertia_hat);
        }
        if let Some(n) = &self.noise {
            if let Some(v) = n.variance {
                cfg.noise = if v == 0.0 {
                    NoiseModel::None
                } else {
                    NoiseModel::Gaussian { variance: v }
                };
            }
        }
        if let Some(d) = &self.disturbance {
            set(&mut cfg.disturbance.offset, d.offset);
            set(&mut cfg.disturbance.amplitude, d.amplitude);
            set(&mut cfg.disturbance.angular_rate, d.angular_rate);
            set(&mut cfg.disturbance.start_time, d.start_time);
        }
        if let Some(s) = &self.sim {
            set(&mut cfg.sim.t_sim, s.t_sim);
            set(&mut cfg.sim.dt, s.dt);
            set(&mut cfg.sim.seed, s.seed);
            if let Some(scale) = &s.criteria_scale {
                cfg.sim.criteria_scale = scale.parse()?;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Reads, resolves and validates a scenario document.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<ScenarioConfig> {
    ConfigDocument::read(path)?.to_scenario()
}
