use super::{EsoInput, EsoStructure};
use crate::error::{Error, Result};

/// Gains placing all poles of `A − l c` at `−ω_o`: the coefficients of
/// `(s + ω_o)ⁿ` without the leading one.
pub fn luenberger_gains(n: usize, omega_o: f64) -> Result<Vec<f64>> {
    if n != 3 && n != 5 {
        return Err(Error::UnsupportedOrder(n));
    }
    if !(omega_o > 0.0 && omega_o.is_finite()) {
        return Err(Error::config(
            "observer.omega_o",
            format!("must be positive, got {omega_o}"),
        ));
    }
    let mut gains = Vec::with_capacity(n);
    let mut binom = 1.0;
    let mut power = 1.0;
    for k in 1..=n {
        binom = binom * (n + 1 - k) as f64 / k as f64;
        power *= omega_o;
        gains.push(binom * power);
    }
    Ok(gains)
}

/// `dx̂ = A x̂ − b u_eff + l (y − c x̂)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LuenbergerEso {
    pub structure: EsoStructure,
    pub omega_o: f64,
    pub gains: Vec<f64>,
    pub state: Vec<f64>,
}

impl LuenbergerEso {
    pub fn new(structure: EsoStructure, omega_o: f64) -> Result<Self> {
        structure.validate()?;
        let n = structure.order();
        Ok(LuenbergerEso {
            structure,
            omega_o,
            gains: luenberger_gains(n, omega_o)?,
            state: vec![0.0; n],
        })
    }

    pub fn derivative_at(&self, x: &[f64], input: EsoInput, out: &mut [f64]) {
        let n = self.gains.len();
        let innovation = input.y - x[0];
        for i in 0..n {
            out[i] = self.structure.phi(x, input.u_eff, i + 1) + self.gains[i] * innovation;
        }
    }

    pub fn derivative(&self, input: EsoInput) -> Vec<f64> {
        let mut out = vec![0.0; self.state.len()];
        self.derivative_at(&self.state, input, &mut out);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observers::structure_matrices;
    use crate::smallmat::mat_apply;

    #[test]
    fn gain_examples() {
        assert_eq!(luenberger_gains(3, 1.0).unwrap(), vec![3.0, 3.0, 1.0]);
        assert_eq!(
            luenberger_gains(5, 2.0).unwrap(),
            vec![10.0, 40.0, 80.0, 80.0, 32.0]
        );
        let w = 490.03;
        let g = luenberger_gains(3, w).unwrap();
        assert!((g[0] - 1470.09).abs() < 1e-9);
        assert!((g[1] - 3.0 * w * w).abs() < 1e-6);
        assert!((g[2] - w * w * w).abs() < 1e-3);
        assert!(matches!(luenberger_gains(4, 1.0), Err(Error::UnsupportedOrder(4))));
        assert!(luenberger_gains(3, 0.0).is_err());
    }

    #[test]
    fn pure_innovation() {
        let o = LuenbergerEso::new(EsoStructure::Standard3, 1.0).unwrap();
        let d = o.derivative(EsoInput { y: 1.0, u_eff: 0.0 });
        assert_eq!(d, vec![3.0, 3.0, 1.0]);
    }

    #[test]
    fn zero_innovation_is_model_only() {
        let mut o = LuenbergerEso::new(EsoStructure::Resonant5 { omega_r: 15.0 }, 7.0).unwrap();
        o.state = vec![0.4, -1.0, 2.0, 0.3, -0.8];
        let u = 1.7;
        let d = o.derivative(EsoInput { y: 0.4, u_eff: u });
        let m = structure_matrices(o.structure);
        let mut expected = mat_apply(&m.a, &o.state).unwrap();
        expected[1] -= u;
        assert_eq!(d, expected);
    }

    #[test]
    fn matches_matrix_form() {
        for s in [
            EsoStructure::Standard3,
            EsoStructure::Extended5,
            EsoStructure::Resonant5 { omega_r: 15.0 },
        ] {
            let mut o = LuenbergerEso::new(s, 3.0).unwrap();
            let n = s.order();
            o.state = (0..n).map(|i| 0.1 * i as f64 - 0.2).collect();
            let input = EsoInput { y: 0.9, u_eff: -0.4 };
            let m = structure_matrices(s);
            let ax = mat_apply(&m.a, &o.state).unwrap();
            let cx = mat_apply(&m.c, &o.state).unwrap()[0];
            let expected: Vec<f64> = (0..n)
                .map(|i| ax[i] - m.b[(i, 0)] * input.u_eff + o.gains[i] * (input.y - cx))
                .collect();
            let got = o.derivative(input);
            for i in 0..n {
                assert!((got[i] - expected[i]).abs() < 1e-12);
            }
        }
    }
}
