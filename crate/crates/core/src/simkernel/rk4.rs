//! Classical fourth-order Runge–Kutta with fixed step.

/// Scratch buffers reused across steps so the hot loop does not allocate.
#[derive(Clone, Debug, Default)]
pub struct Rk4 {
    k1: Vec<f64>,
    k2: Vec<f64>,
    k3: Vec<f64>,
    k4: Vec<f64>,
    tmp: Vec<f64>,
}

impl Rk4 {
    pub fn new(len: usize) -> Self {
        Rk4 {
            k1: vec![0.0; len],
            k2: vec![0.0; len],
            k3: vec![0.0; len],
            k4: vec![0.0; len],
            tmp: vec![0.0; len],
        }
    }

    /// Advances `x` from `t` to `t + dt`. `f(t, x, dx)` writes the derivative.
    pub fn step<F>(&mut self, x: &mut [f64], t: f64, dt: f64, mut f: F)
    where
        F: FnMut(f64, &[f64], &mut [f64]),
    {
        let n = x.len();
        if self.k1.len() != n {
            *self = Rk4::new(n);
        }
        let half = 0.5 * dt;
        f(t, x, &mut self.k1);
        for i in 0..n {
            self.tmp[i] = x[i] + half * self.k1[i];
        }
        f(t + half, &self.tmp, &mut self.k2);
        for i in 0..n {
            self.tmp[i] = x[i] + half * self.k2[i];
        }
        f(t + half, &self.tmp, &mut self.k3);
        for i in 0..n {
            self.tmp[i] = x[i] + dt * self.k3[i];
        }
        f(t + dt, &self.tmp, &mut self.k4);
        let sixth = dt / 6.0;
        for i in 0..n {
            x[i] += sixth * (self.k1[i] + 2.0 * self.k2[i] + 2.0 * self.k3[i] + self.k4[i]);
        }
    }
}

/// One-off step with freshly allocated scratch space.
pub fn step<F>(x: &mut [f64], t: f64, dt: f64, f: F)
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    Rk4::new(x.len()).step(x, t, dt, f)
}
