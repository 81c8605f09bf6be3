//! Reference trajectories `q_d` with their first two derivatives.
//!
//! The filtered step passes a step through five identical first-order lags,
//! `1/(T s + 1)⁵`. Its output is only four times continuously differentiable
//! at the step instant: the fifth derivative of `q_d` jumps there.

use serde::{Deserialize, Serialize};

/// Number of first-order lags in the step filter.
pub const FILTER_ORDER: usize = 5;

/// `q_d`, `q̇_d` and `q̈_d` at one instant.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Reference {
    pub position: f64,
    pub velocity: f64,
    pub acceleration: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FilteredStepParams {
    pub step_time: f64,
    pub amplitude: f64,
    pub time_constant: f64,
}

impl Default for FilteredStepParams {
    fn default() -> Self {
        FilteredStepParams {
            step_time: 7.5,
            amplitude: 1.0,
            time_constant: 0.5,
        }
    }
}

impl FilteredStepParams {
    pub fn input(&self, active: bool) -> f64 {
        if active {
            self.amplitude
        } else {
            0.0
        }
    }

    pub fn is_active(&self, t: f64) -> bool {
        t >= self.step_time
    }

    /// Cascade derivative for a given step input value.
    pub fn derivative(&self, states: &[f64], input: f64, out: &mut [f64]) {
        let rate = 1.0 / self.time_constant;
        out[0] = rate * (input - states[0]);
        for i in 1..FILTER_ORDER {
            out[i] = rate * (states[i - 1] - states[i]);
        }
    }

    /// Output and its derivatives, read off the cascade states.
    pub fn reference(&self, states: &[f64]) -> Reference {
        let rate = 1.0 / self.time_constant;
        let x4 = states[FILTER_ORDER - 2];
        let x5 = states[FILTER_ORDER - 1];
        let x3 = states[FILTER_ORDER - 3];
        let v = rate * (x4 - x5);
        let dx4 = rate * (x3 - x4);
        Reference {
            position: x5,
            velocity: v,
            acceleration: rate * (dx4 - v),
        }
    }

    /// Time after which the filtered step is treated as settled: the step time
    /// plus the summed lag time constants.
    pub fn settled_time(&self) -> f64 {
        self.step_time + FILTER_ORDER as f64 * self.time_constant
    }
}

/// Stand-alone filtered step generator that owns its cascade states.
#[derive(Clone, Debug, PartialEq)]
pub struct FilteredStepGen {
    pub params: FilteredStepParams,
    states: [f64; FILTER_ORDER],
}

impl FilteredStepGen {
    pub fn new(params: FilteredStepParams) -> Self {
        FilteredStepGen {
            params,
            states: [0.0; FILTER_ORDER],
        }
    }

    pub fn states(&self) -> &[f64; FILTER_ORDER] {
        &self.states
    }

    /// Reference at `t`, then advances the cascade by one RK4 step of `dt`.
    /// The step input is held at its value at `t` for the whole step.
    pub fn sample(&mut self, t: f64, dt: f64) -> Reference {
        let out = self.params.reference(&self.states);
        let input = self.params.input(self.params.is_active(t));
        let p = self.params;
        crate::simkernel::rk4::step(&mut self.states, t, dt, |_, x, dx| p.derivative(x, input, dx));
        out
    }
}

/// `q_d = A sin(ω t)` with analytic derivatives.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SinusoidGen {
    pub amplitude: f64,
    pub angular_rate: f64,
}

impl SinusoidGen {
    /// Slow tracking profile `2.89e-4 sin(0.4π t)`.
    pub fn slow_tracking() -> Self {
        SinusoidGen {
            amplitude: 2.89e-4,
            angular_rate: 0.4 * std::f64::consts::PI,
        }
    }

    pub fn sample(&self, t: f64) -> Reference {
        let (s, c) = (self.angular_rate * t).sin_cos();
        let w = self.angular_rate;
        Reference {
            position: self.amplitude * s,
            velocity: self.amplitude * w * c,
            acceleration: -self.amplitude * w * w * s,
        }
    }
}

/// Either generator; `dt` is ignored by the stateless sinusoid.
#[derive(Clone, Debug, PartialEq)]
pub enum Trajectory {
    FilteredStep(FilteredStepGen),
    Sinusoid(SinusoidGen),
}

pub fn traj_sample(gen: &mut Trajectory, t: f64, dt: f64) -> Reference {
    match gen {
        Trajectory::FilteredStep(g) => g.sample(t, dt),
        Trajectory::Sinusoid(g) => g.sample(t),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_before_step() {
        let mut g = FilteredStepGen::new(FilteredStepParams::default());
        let dt = 1e-3;
        for k in 0..7500 {
            let r = g.sample(k as f64 * dt, dt);
            assert_eq!(r, Reference::default());
        }
    }

    #[test]
    fn settles_to_amplitude() {
        let mut g = FilteredStepGen::new(FilteredStepParams {
            step_time: 0.0,
            amplitude: 1.0,
            time_constant: 0.5,
        });
        let dt = 1e-3;
        let mut r = Reference::default();
        for k in 0..40_000 {
            r = g.sample(k as f64 * dt, dt);
        }
        assert!((r.position - 1.0).abs() < 1e-9);
        assert!(r.velocity.abs() < 1e-9);
        assert!(r.acceleration.abs() < 1e-9);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let params = FilteredStepParams::default();
        let mut g = FilteredStepGen::new(params);
        let dt = 1e-3;
        let refs: Vec<Reference> = (0..20_000).map(|k| g.sample(k as f64 * dt, dt)).collect();
        let mut worst_v = 0.0_f64;
        let mut worst_a = 0.0_f64;
        for w in refs.windows(2) {
            worst_v = worst_v.max(((w[1].position - w[0].position) / dt - w[0].velocity).abs());
            worst_a = worst_a.max(((w[1].velocity - w[0].velocity) / dt - w[0].acceleration).abs());
        }
        // first-order difference error is about dt/2 * sup|next derivative|
        assert!(worst_v <= 2.0 * dt, "velocity mismatch {worst_v}");
        assert!(worst_a <= 10.0 * dt, "acceleration mismatch {worst_a}");
    }

    #[test]
    fn sinusoid_at_origin() {
        let g = SinusoidGen::slow_tracking();
        let r = g.sample(0.0);
        assert_eq!(r.position, 0.0);
        assert!((r.velocity - 2.89e-4 * 0.4 * std::f64::consts::PI).abs() < 1e-18);
        assert_eq!(r.acceleration, 0.0);
    }

    #[test]
    fn sinusoid_is_harmonic() {
        let g = SinusoidGen {
            amplitude: 1.7,
            angular_rate: 3.1,
        };
        for k in 0..100 {
            let r = g.sample(0.037 * k as f64);
            assert!((r.acceleration + 3.1 * 3.1 * r.position).abs() < 1e-12);
        }
    }
}
