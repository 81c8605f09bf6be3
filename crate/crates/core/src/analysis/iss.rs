//! Input-to-state bounds for the observation error of the third-order ESO and
//! for the resulting tracking error.

use crate::error::{Error, Result};
use crate::observers::{luenberger_gains, structure_matrices, EsoStructure};
use crate::smallmat::{eig_extremes, operator_norm, solve_lyapunov, Mat, SymMat};

/// Lyapunov solution and the constants derived from it.
#[derive(Clone, Debug, PartialEq)]
pub struct IssBoundParams {
    pub p: SymMat,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub p_norm: f64,
    pub nu: f64,
    /// Decay rate of the transient term.
    pub gamma: f64,
    /// Overshoot factor `√(λ_max/λ_min)`.
    pub c1: f64,
}

impl IssBoundParams {
    /// Solves `H P + P Hᵀ + ρ I = 0` and assembles the constants for decay
    /// rate `ρ(1 − ν)/(2 λ_max)`.
    pub fn from_lyapunov(h: &Mat, rho: f64, nu: f64) -> Result<Self> {
        check_nu(nu)?;
        let q = SymMat::scaled_identity(h.rows(), rho)?;
        let p = solve_lyapunov(h, &q)?;
        let (lambda_min, lambda_max) = eig_extremes(&p);
        Ok(IssBoundParams {
            p_norm: operator_norm(p.as_mat()),
            gamma: rho * (1.0 - nu) / (2.0 * lambda_max),
            c1: (lambda_max / lambda_min).sqrt(),
            p,
            lambda_min,
            lambda_max,
            nu,
        })
    }
}

pub fn check_nu(nu: f64) -> Result<()> {
    if nu > 0.0 && nu < 1.0 {
        Ok(())
    } else {
        Err(Error::config("nu", format!("must lie in (0, 1), got {nu}")))
    }
}

/// `A₃ − l₃ c₃` for bandwidth `ω_o`.
pub fn observer_error_matrix(omega_o: f64) -> Result<Mat> {
    let m = structure_matrices(EsoStructure::Standard3);
    let l = luenberger_gains(3, omega_o)?;
    let lc = Mat::column(&l)?.matmul(&m.c)?;
    m.a.sub(&lc)
}

/// `‖x̃(t)‖ ≤ c₁‖x̃(0)‖e^{−γt} + 2‖P‖/(νω_o)·sup|ḟ| + 2ω_o²‖P‖/ν·sup|w|`.
#[derive(Clone, Debug, PartialEq)]
pub struct ObserverBound {
    pub params: IssBoundParams,
    pub omega_o: f64,
    pub sup_fdot: f64,
    pub sup_w: f64,
    pub x0_norm: f64,
}

impl ObserverBound {
    pub fn transient(&self, t: f64) -> f64 {
        self.params.c1 * self.x0_norm * (-self.params.gamma * t).exp()
    }

    pub fn disturbance_term(&self) -> f64 {
        2.0 * self.params.p_norm / (self.params.nu * self.omega_o) * self.sup_fdot
    }

    pub fn noise_term(&self) -> f64 {
        2.0 * self.omega_o * self.omega_o * self.params.p_norm / self.params.nu * self.sup_w
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.transient(t) + self.disturbance_term() + self.noise_term()
    }
}

/// Observation-error bound; only the third-order standard structure is covered.
pub fn iss_observer_bound(
    omega_o: f64,
    structure: EsoStructure,
    nu: f64,
    sup_fdot: f64,
    sup_w: f64,
    x0_norm: f64,
) -> Result<ObserverBound> {
    if structure != EsoStructure::Standard3 {
        return Err(Error::UnsupportedStructure(format!("{structure:?}")));
    }
    let h = observer_error_matrix(omega_o)?;
    Ok(ObserverBound {
        params: IssBoundParams::from_lyapunov(&h, omega_o, nu)?,
        omega_o,
        sup_fdot,
        sup_w,
        x0_norm,
    })
}

/// `‖ε(t)‖ ≤ √(λ_max/λ_min)‖ε(0)‖e^{−γ_ε t} + 2‖P_ε‖‖k‖/(ν_ε ρ_ε)·sup‖x̃‖`.
#[derive(Clone, Debug, PartialEq)]
pub struct ControlBound {
    pub params: IssBoundParams,
    pub rho: f64,
    /// `‖[k_p, k_d, 1]‖`, the coupling of `x̃` into `ε̇`.
    pub k_norm: f64,
    pub sup_xtilde: f64,
    pub eps0_norm: f64,
}

impl ControlBound {
    pub fn eval(&self, t: f64) -> f64 {
        let p = &self.params;
        p.c1 * self.eps0_norm * (-p.gamma * t).exp()
            + 2.0 * p.p_norm * self.k_norm / (p.nu * self.rho) * self.sup_xtilde
    }
}

/// `H_ε = [[0, 1], [−k_p, −k_d]]`.
pub fn control_error_matrix(kp: f64, kd: f64) -> Result<Mat> {
    Mat::from_rows(&[&[0.0, 1.0], &[-kp, -kd]])
}

pub fn iss_control_bound(
    kp: f64,
    kd: f64,
    rho: f64,
    nu: f64,
    sup_xtilde: f64,
    eps0_norm: f64,
) -> Result<ControlBound> {
    if !(rho > 0.0) {
        return Err(Error::config("rho", format!("must be positive, got {rho}")));
    }
    let h = control_error_matrix(kp, kd)?;
    Ok(ControlBound {
        params: IssBoundParams::from_lyapunov(&h, rho, nu)?,
        rho,
        k_norm: (kp * kp + kd * kd + 1.0).sqrt(),
        sup_xtilde,
        eps0_norm,
    })
}
