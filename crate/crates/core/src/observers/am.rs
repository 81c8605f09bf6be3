use super::{EsoInput, EsoStructure};
use crate::error::{Error, Result};

/// Default block gains `α_i` for orders 3 and 5.
pub fn am_default_gains(n: usize) -> Result<Vec<[f64; 2]>> {
    match n {
        3 => Ok(vec![[0.8, 0.48], [0.8, 0.16]]),
        5 => Ok(vec![[0.6, 0.36], [0.6, 0.135], [0.6, 0.06], [0.6, 0.025]]),
        _ => Err(Error::UnsupportedOrder(n)),
    }
}

/// `ẑ = L ξ`: first block whole, then the second entry of every later block.
pub fn am_extract(xi: &[f64]) -> Vec<f64> {
    let blocks = xi.len() / 2;
    let mut z = Vec::with_capacity(blocks + 1);
    if blocks == 0 {
        return z;
    }
    z.push(xi[0]);
    for i in 0..blocks {
        z.push(xi[2 * i + 1]);
    }
    z
}

/// Cascade of `n − 1` second-order blocks whose gains grow only up to `ω_o²`.
#[derive(Clone, Debug, PartialEq)]
pub struct AmObserver {
    pub structure: EsoStructure,
    pub omega_o: f64,
    pub alphas: Vec<[f64; 2]>,
    pub state: Vec<f64>,
}

impl AmObserver {
    pub fn new(structure: EsoStructure, omega_o: f64, alphas: Vec<[f64; 2]>) -> Result<Self> {
        structure.validate()?;
        if !(omega_o > 0.0 && omega_o.is_finite()) {
            return Err(Error::config(
                "observer.omega_o",
                format!("must be positive, got {omega_o}"),
            ));
        }
        let n = structure.order();
        if alphas.len() != n - 1 {
            return Err(Error::config(
                "observer.am_gains",
                format!("expected {} blocks, got {}", n - 1, alphas.len()),
            ));
        }
        if alphas.iter().flatten().any(|a| !(*a > 0.0 && a.is_finite())) {
            return Err(Error::config("observer.am_gains", "gains must be positive"));
        }
        Ok(AmObserver {
            structure,
            omega_o,
            alphas,
            state: vec![0.0; 2 * (n - 1)],
        })
    }

    pub fn derivative_at(&self, xi: &[f64], input: EsoInput, out: &mut [f64]) {
        let n = self.structure.order();
        let mut z = [0.0; 8];
        z[0] = xi[0];
        for i in 0..n - 1 {
            z[i + 1] = xi[2 * i + 1];
        }
        let w = self.omega_o;
        for i in 0..n - 1 {
            let eps = if i == 0 {
                input.y - xi[0]
            } else {
                xi[2 * i - 1] - xi[2 * i]
            };
            let [a1, a2] = self.alphas[i];
            out[2 * i] = self.structure.phi(&z, input.u_eff, i + 1) + w * a1 * eps;
            out[2 * i + 1] = self.structure.phi(&z, input.u_eff, i + 2) + w * w * a2 * eps;
        }
    }

    pub fn derivative(&self, input: EsoInput) -> Vec<f64> {
        let mut out = vec![0.0; self.state.len()];
        self.derivative_at(&self.state, input, &mut out);
        out
    }
}
