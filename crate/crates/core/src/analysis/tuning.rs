//! Bandwidth search for a prescribed tracking criterion `J_e`.

use crate::error::{Error, Result};
use crate::simkernel::{run_scenario, ScenarioConfig, MAX_OMEGA_DT};

pub const MAX_ITERATIONS: usize = 40;
const MAX_EXPANSIONS: usize = 20;

#[derive(Clone, Debug, PartialEq)]
pub struct TuneResult {
    pub omega_o: f64,
    pub je: f64,
    pub iterations: usize,
    /// Whether `|J_e − target| ≤ tol·target` was reached within the iteration cap.
    pub converged: bool,
    /// Every `(ω_o, J_e)` evaluated, in order.
    pub history: Vec<(f64, f64)>,
}

/// `J_e` of the template run at bandwidth `omega_o` (seed held fixed).
pub fn je_at(template: &ScenarioConfig, omega_o: f64) -> Result<f64> {
    let rec = run_scenario(&template.clone().with_omega(omega_o))?;
    match rec.criteria {
        Some(c) => Ok(c.je),
        None => Err(Error::Diverged(rec.diverged_at.unwrap_or(f64::NAN))),
    }
}

/// Bisection on `log10 ω_o`, assuming `J_e` falls as `ω_o` grows. The bracket
/// is widened (lower end halved, upper end doubled up to the integrator's
/// stability limit) until it straddles the target.
pub fn tune_omega(
    target_je: f64,
    template: &ScenarioConfig,
    bracket: (f64, f64),
    tol: f64,
) -> Result<TuneResult> {
    let (mut lo, mut hi) = bracket;
    if !(target_je > 0.0 && target_je.is_finite()) {
        return Err(Error::config("target_je", format!("must be positive, got {target_je}")));
    }
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::config(
            "bracket",
            format!("need 0 < lo < hi, got [{lo}, {hi}]"),
        ));
    }
    if !(tol > 0.0) {
        return Err(Error::config("tol", format!("must be positive, got {tol}")));
    }
    let cap = MAX_OMEGA_DT / template.sim.dt;
    hi = hi.min(cap);
    let mut history = Vec::new();
    let eval = |w: f64, history: &mut Vec<(f64, f64)>| -> Result<f64> {
        let je = je_at(template, w)?;
        history.push((w, je));
        Ok(je)
    };
    let hit = |je: f64| (je - target_je).abs() <= tol * target_je;
    let done = |w: f64, je: f64, iterations: usize, history: Vec<(f64, f64)>| TuneResult {
        omega_o: w,
        je,
        iterations,
        converged: true,
        history,
    };

    let mut je_lo = eval(lo, &mut history)?;
    if hit(je_lo) {
        return Ok(done(lo, je_lo, 0, history));
    }
    for _ in 0..MAX_EXPANSIONS {
        if je_lo > target_je {
            break;
        }
        lo *= 0.5;
        je_lo = eval(lo, &mut history)?;
        if hit(je_lo) {
            return Ok(done(lo, je_lo, 0, history));
        }
    }
    // A run that diverges at high bandwidth ends the upward expansion.
    let mut je_hi = match eval(hi, &mut history) {
        Err(Error::Diverged(_)) => f64::INFINITY,
        other => other?,
    };
    if hit(je_hi) {
        return Ok(done(hi, je_hi, 0, history));
    }
    for _ in 0..MAX_EXPANSIONS {
        if je_hi < target_je || hi >= cap || je_hi.is_infinite() {
            break;
        }
        let next = (2.0 * hi).min(cap);
        match eval(next, &mut history) {
            Err(Error::Diverged(_)) => break,
            other => {
                hi = next;
                je_hi = other?;
            }
        }
        if hit(je_hi) {
            return Ok(done(hi, je_hi, 0, history));
        }
    }
    if !(je_lo > target_je && target_je > je_hi) {
        return Err(Error::Bracket {
            target: target_je,
            omega_lo: lo,
            omega_hi: hi,
            je_low_omega: je_lo,
            je_high_omega: je_hi,
        });
    }

    let (mut a, mut b) = (lo.log10(), hi.log10());
    let mut best = (hi, je_hi);
    for it in 1..=MAX_ITERATIONS {
        let m = 0.5 * (a + b);
        let w = 10f64.powf(m);
        let je = eval(w, &mut history)?;
        if (je - target_je).abs() < (best.1 - target_je).abs() {
            best = (w, je);
        }
        if hit(je) {
            return Ok(done(w, je, it, history));
        }
        if je > target_je {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(TuneResult {
        omega_o: best.0,
        je: best.1,
        iterations: MAX_ITERATIONS,
        converged: false,
        history,
    })
}
