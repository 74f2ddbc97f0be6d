//! Dressed states of the coherently driven atom.
//!
//! With the coherent input absorbed into the atom, the semiclassical
//! Hamiltonian is `omega_delta sz - sqrt(2 gamma) (beta s+ + beta* s-)`
//! (with `sz` eigenvalues `+-1/2`). Its eigenbasis is tilted from the bare
//! basis by the mixing angle `theta`, and transitions between the two dressed
//! states `g'` and `e'` are the quantum jumps.
//!
//! Matrices use the bare basis ordered `(g, e)`.

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{PhysicalParams, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Instantaneous dressed basis for a given drive amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DressedFrame {
    /// Mixing angle between bare and dressed bases.
    pub theta: f64,
    /// Phase of the drive amplitude.
    pub phi: f64,
    /// Energy gap between `e'` and `g'`.
    pub omega_beta: f64,
}

impl DressedFrame {
    /// Closed-form frame for drive amplitude `beta`.
    pub fn new(params: &PhysicalParams, beta: Complex64) -> Result<Self> {
        let mag = beta.norm();
        Ok(DressedFrame {
            theta: mixing_angle(params, mag)?,
            phi: if mag == 0.0 { 0.0 } else { beta.arg() },
            omega_beta: dressed_splitting(params, mag),
        })
    }

    /// Frame of the undriven atom.
    pub fn undriven(params: &PhysicalParams) -> Self {
        DressedFrame {
            theta: 0.0,
            phi: 0.0,
            omega_beta: params.omega_delta.abs(),
        }
    }

    pub fn rates(&self, gamma: f64) -> JumpRates {
        JumpRates::new(gamma, self.theta)
    }

    /// Dressed relaxation rate `gamma cos^4(theta/2)`; half the `e' -> g'` rate.
    pub fn gamma_prime(&self, gamma: f64) -> f64 {
        0.5 * jump_rate_down(gamma, self.theta)
    }
}

/// Jump rates between the dressed states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JumpRates {
    /// `g' -> e'`
    pub up: f64,
    /// `e' -> g'`
    pub down: f64,
}

impl JumpRates {
    pub fn new(gamma: f64, theta: f64) -> Self {
        JumpRates {
            up: jump_rate_up(gamma, theta),
            down: jump_rate_down(gamma, theta),
        }
    }

    /// Stationary occupation of `e'` for the two-state jump process.
    pub fn excited_fraction(&self) -> f64 {
        let total = self.up + self.down;
        if total == 0.0 {
            0.0
        } else {
            self.up / total
        }
    }
}

/// `theta = atan(2 sqrt(2 gamma) |beta| / omega_delta)`, in `[0, pi/2)`.
///
/// Only defined for a positive detuning.
pub fn mixing_angle(params: &PhysicalParams, beta_mag: f64) -> Result<f64> {
    params.require_off_resonant()?;
    if !(beta_mag.is_finite() && beta_mag >= 0.0) {
        return Err(crate::Error::domain(format!(
            "drive magnitude must be finite and nonnegative, got {beta_mag}"
        )));
    }
    Ok((2.0 * (2.0 * params.gamma).sqrt() * beta_mag / params.omega_delta).atan())
}

/// Dressed splitting `sqrt(omega_delta^2 + 8 gamma |beta|^2)`.
///
/// This is the eigenvalue gap of the semiclassical Hamiltonian.
pub fn dressed_splitting(params: &PhysicalParams, beta_mag: f64) -> f64 {
    params
        .omega_delta
        .hypot((8.0 * params.gamma).sqrt() * beta_mag)
}

/// Semiclassical Hamiltonian `omega_delta sz - sqrt(2 gamma)(beta s+ + beta* s-)`.
pub fn semiclassical_hamiltonian(params: &PhysicalParams, beta: Complex64) -> Matrix2<Complex64> {
    let half = 0.5 * params.omega_delta;
    let drive = beta * (2.0 * params.gamma).sqrt();
    // rows/cols: g, e; s+ = |e><g| sits at (e, g)
    Matrix2::new(
        Complex64::new(-half, 0.0),
        -drive.conj(),
        -drive,
        Complex64::new(half, 0.0),
    )
}

/// Numerically diagonalizes the semiclassical Hamiltonian.
///
/// `theta` is read off the upper eigenvector, `omega_beta` from the eigenvalue
/// gap and `phi` from the relative phase of the eigenvector components. This
/// route does not use the closed forms and serves as their oracle.
pub fn diagonalize_semiclassical(params: &PhysicalParams, beta: Complex64) -> DressedFrame {
    let h = semiclassical_hamiltonian(params, beta);
    let eig = h.symmetric_eigen();
    let (lo, hi) = if eig.eigenvalues[0] <= eig.eigenvalues[1] {
        (0, 1)
    } else {
        (1, 0)
    };
    let v = eig.eigenvectors.column(hi);
    let (a_g, a_e) = (v[0], v[1]);
    let theta = 2.0 * a_g.norm().atan2(a_e.norm());
    // upper state: a_g / a_e = -k conj(beta) with k > 0
    let phi = if a_g.norm() == 0.0 {
        0.0
    } else {
        (-(a_e * a_g.conj())).arg()
    };
    DressedFrame {
        theta,
        phi,
        omega_beta: eig.eigenvalues[hi] - eig.eigenvalues[lo],
    }
}

/// `g' -> e'` rate, `2 gamma sin^4(theta/2)`.
pub fn jump_rate_up(gamma: f64, theta: f64) -> f64 {
    2.0 * gamma * (0.5 * theta).sin().powi(4)
}

/// `e' -> g'` rate, `2 gamma cos^4(theta/2)`.
pub fn jump_rate_down(gamma: f64, theta: f64) -> f64 {
    2.0 * gamma * (0.5 * theta).cos().powi(4)
}

/// Bare-basis Pauli-type operators used below.
pub fn sigma_minus() -> Matrix2<Complex64> {
    Matrix2::new(ZERO, ONE, ZERO, ZERO)
}

pub fn sigma_z() -> Matrix2<Complex64> {
    Matrix2::new(Complex64::new(-0.5, 0.0), ZERO, ZERO, Complex64::new(0.5, 0.0))
}

/// Coefficients of the dressed lowering operator in the bare operator basis:
/// `s'- = lower * s- + raise * s+ + sz_coeff * sz`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoweringCoefficients {
    pub lower: Complex64,
    pub raise: Complex64,
    pub sz: Complex64,
}

pub fn dressed_lowering_coefficients(theta: f64, phi: f64) -> LoweringCoefficients {
    let (s, c) = (0.5 * theta).sin_cos();
    LoweringCoefficients {
        lower: Complex64::new(c * c, 0.0),
        raise: -Complex64::from_polar(s * s, 2.0 * phi),
        sz: -Complex64::from_polar(theta.sin(), phi),
    }
}

/// `s'- = cos^2(theta/2) s- - e^{2i phi} sin^2(theta/2) s+ - e^{i phi} sin(theta) sz`.
pub fn dressed_lowering_matrix(theta: f64, phi: f64) -> Matrix2<Complex64> {
    let k = dressed_lowering_coefficients(theta, phi);
    let sm = sigma_minus();
    sm * k.lower + sm.adjoint() * k.raise + sigma_z() * k.sz
}

/// `s'z = cos(theta) sz + sin(theta)/2 (e^{-i phi} s- + e^{i phi} s+)`.
pub fn dressed_sigma_z(theta: f64, phi: f64) -> Matrix2<Complex64> {
    let sm = sigma_minus();
    let half = 0.5 * theta.sin();
    sigma_z() * Complex64::new(theta.cos(), 0.0)
        + sm * Complex64::from_polar(half, -phi)
        + sm.adjoint() * Complex64::from_polar(half, phi)
}

/// Field couplings of the dressed Hamiltonian, per unit `sqrt(c)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InteractionCoefficients {
    /// Couples the field quadrature to `s'z`: `sqrt(2 gamma) sin(theta) e^{i phi}`.
    pub displacement: Complex64,
    /// Rotating (`b s'+`) term: `sqrt(2 gamma) cos^2(theta/2)`.
    pub conserving: f64,
    /// Counter-rotating (`b+ s'+`) term: `sqrt(2 gamma) sin^2(theta/2)`.
    pub counterrotating: f64,
}

impl InteractionCoefficients {
    /// Squared couplings are the jump rates.
    pub fn rates(&self) -> JumpRates {
        JumpRates {
            up: self.counterrotating * self.counterrotating,
            down: self.conserving * self.conserving,
        }
    }
}

pub fn dressed_interaction_coefficients(gamma: f64, theta: f64, phi: f64) -> InteractionCoefficients {
    let g = (2.0 * gamma).sqrt();
    let (s, c) = (0.5 * theta).sin_cos();
    InteractionCoefficients {
        displacement: Complex64::from_polar(g * theta.sin(), phi),
        conserving: g * c * c,
        counterrotating: g * s * s,
    }
}
