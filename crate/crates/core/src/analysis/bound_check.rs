//! Pointwise comparison of logged estimation and tracking errors against the
//! input-to-state bounds.

use std::path::Path;

use super::iss::{check_nu, iss_control_bound, iss_observer_bound, ControlBound, ObserverBound};
use crate::error::{Error, Result};
use crate::observers::ObserverVariant;
use crate::simkernel::{five_point_derivative, Series};

/// Closed-loop part of the check. The bound is applied from `t_on`, when the
/// loop starts obeying the error dynamics it was derived for.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ControlCheck {
    pub kp: f64,
    pub kd: f64,
    pub rho: f64,
    pub t_on: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundCheckParams {
    pub variant: ObserverVariant,
    pub omega_o: f64,
    pub nu: f64,
    pub control: Option<ControlCheck>,
}

impl BoundCheckParams {
    pub fn new(variant: ObserverVariant, omega_o: f64) -> Self {
        BoundCheckParams {
            variant,
            omega_o,
            nu: 0.5,
            control: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundSample {
    pub t: f64,
    pub actual: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub observer: ObserverBound,
    pub samples: Vec<BoundSample>,
    /// `min(bound − actual)` over the observation-error samples.
    pub min_margin: f64,
    pub worst_t: f64,
    pub control: Option<ControlReport>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ControlReport {
    pub bound: ControlBound,
    pub samples: Vec<BoundSample>,
    pub min_margin: f64,
    pub worst_t: f64,
}

impl BoundReport {
    pub fn pass(&self) -> bool {
        self.min_margin >= 0.0 && self.control.as_ref().is_none_or(|c| c.min_margin >= 0.0)
    }

    /// Observation-error samples as `t,actual,bound`.
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        write_samples(&self.samples, path)
    }
}

pub fn write_samples(samples: &[BoundSample], path: impl AsRef<Path>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["t", "actual", "bound"])?;
    for s in samples {
        w.write_record([s.t.to_string(), s.actual.to_string(), s.bound.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

fn margins(samples: &[BoundSample]) -> (f64, f64) {
    samples
        .iter()
        .map(|s| (s.bound - s.actual, s.t))
        .fold((f64::INFINITY, f64::NAN), |a, b| if b.0 < a.0 { b } else { a })
}

/// Checks `‖x̃(t)‖` (and optionally `‖ε(t)‖`) against the bounds with
/// `sup|ḟ|` and `sup|w|` measured from the run itself.
pub fn bound_check(series: &Series, params: &BoundCheckParams) -> Result<BoundReport> {
    if params.variant != ObserverVariant::Eso3 {
        return Err(Error::UnsupportedStructure(params.variant.label().to_string()));
    }
    check_nu(params.nu)?;
    let n = series.len();
    if n < 5 {
        return Err(Error::SeriesTooShort { needed: 5, found: n });
    }
    for (name, v) in [
        ("e", &series.e),
        ("y", &series.y),
        ("e_hat", &series.e_hat),
        ("edot_hat", &series.edot_hat),
        ("f_hat", &series.f_hat),
        ("f_true", &series.f_true),
    ] {
        if v.len() != n {
            return Err(Error::MissingSignal(name.to_string()));
        }
    }
    let dt = series.dt()?;
    let edot = if series.edot.len() == n {
        series.edot.clone()
    } else {
        five_point_derivative(&series.e, dt)?
    };
    let fdot = five_point_derivative(&series.f_true, dt)?;
    let sup_fdot = fdot.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let sup_w = series
        .y
        .iter()
        .zip(&series.e)
        .fold(0.0_f64, |m, (y, e)| m.max((y - e).abs()));
    let xtilde: Vec<f64> = (0..n)
        .map(|k| {
            let de = series.e[k] - series.e_hat[k];
            let dv = edot[k] - series.edot_hat[k];
            let df = series.f_true[k] - series.f_hat[k];
            (de * de + dv * dv + df * df).sqrt()
        })
        .collect();
    let t0 = series.t[0];
    let observer = iss_observer_bound(
        params.omega_o,
        params.variant.structure(0.0),
        params.nu,
        sup_fdot,
        sup_w,
        xtilde[0],
    )?;
    let samples: Vec<BoundSample> = (0..n)
        .map(|k| BoundSample {
            t: series.t[k],
            actual: xtilde[k],
            bound: observer.eval(series.t[k] - t0),
        })
        .collect();
    let (min_margin, worst_t) = margins(&samples);

    let control = match params.control {
        None => None,
        Some(c) => {
            let start = series.t.partition_point(|&t| t < c.t_on);
            if start >= n {
                return Err(Error::SeriesTooShort { needed: start + 1, found: n });
            }
            let eps = |k: usize| series.e[k].hypot(edot[k]);
            let sup_x = xtilde[start..].iter().fold(0.0_f64, |m, v| m.max(*v));
            let bound = iss_control_bound(c.kp, c.kd, c.rho, params.nu, sup_x, eps(start))?;
            let ts = series.t[start];
            let samples: Vec<BoundSample> = (start..n)
                .map(|k| BoundSample {
                    t: series.t[k],
                    actual: eps(k),
                    bound: bound.eval(series.t[k] - ts),
                })
                .collect();
            let (min_margin, worst_t) = margins(&samples);
            Some(ControlReport {
                bound,
                samples,
                min_margin,
                worst_t,
            })
        }
    };

    Ok(BoundReport {
        observer,
        samples,
        min_margin,
        worst_t,
        control,
    })
}
