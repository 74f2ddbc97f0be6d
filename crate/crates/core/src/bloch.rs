//! Optical Bloch oracle.
//!
//! Integrates the driven, damped two-level atom directly in the bare basis,
//! `d rho/dt = -i[H, rho] + 2 gamma (s- rho s+ - {s+ s-, rho}/2)`, with the
//! semiclassical Hamiltonian of [`crate::dressed::semiclassical_hamiltonian`].
//! Nothing here uses the dressed-state closed forms, so the results serve as
//! an independent check on them.
//!
//! `rho` is stored in the standard `exp(-i H t)` convention. The crate's
//! amplitudes use the conjugate phase convention, so
//! [`oracle_output_amplitude`] conjugates on the way in and out.

use std::io::{self, Write};

use nalgebra::{Matrix2, Matrix4, Vector4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dressed::{dressed_splitting, semiclassical_hamiltonian, sigma_minus};
use crate::{Error, PhysicalParams, PulseEnvelope, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Density matrix of the two-level atom in the `(g, e)` basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix2(pub Matrix2<Complex64>);

impl DensityMatrix2 {
    pub fn ground() -> Self {
        let mut m = Matrix2::zeros();
        m[(0, 0)] = Complex64::new(1.0, 0.0);
        DensityMatrix2(m)
    }

    pub fn excited() -> Self {
        let mut m = Matrix2::zeros();
        m[(1, 1)] = Complex64::new(1.0, 0.0);
        DensityMatrix2(m)
    }

    pub fn rho_gg(&self) -> f64 {
        self.0[(0, 0)].re
    }

    pub fn rho_ee(&self) -> f64 {
        self.0[(1, 1)].re
    }

    pub fn rho_ge(&self) -> Complex64 {
        self.0[(0, 1)]
    }

    pub fn rho_eg(&self) -> Complex64 {
        self.0[(1, 0)]
    }

    /// `<s-> = Tr(s- rho) = rho_eg`.
    pub fn dipole(&self) -> Complex64 {
        self.rho_eg()
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn hermiticity_error(&self) -> f64 {
        (self.0 - self.0.adjoint()).norm()
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let a = self.rho_gg();
        let d = self.rho_ee();
        let b = 0.5 * (self.rho_ge() + self.rho_eg().conj());
        0.5 * (a + d) - (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt()
    }

    /// Trace one within `1e-12`, Hermitian, and no eigenvalue below `-1e-12`.
    pub fn is_physical(&self) -> bool {
        (self.trace() - Complex64::new(1.0, 0.0)).norm() <= 1e-12
            && self.hermiticity_error() <= 1e-12
            && self.min_eigenvalue() >= -1e-12
    }
}

#[derive(Serialize, Deserialize)]
struct DensityMatrixRepr {
    rho_gg: f64,
    rho_ee: f64,
    rho_ge: Complex64,
}

impl Serialize for DensityMatrix2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DensityMatrixRepr {
            rho_gg: self.rho_gg(),
            rho_ee: self.rho_ee(),
            rho_ge: self.rho_ge(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix2 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = DensityMatrixRepr::deserialize(d)?;
        Ok(DensityMatrix2(Matrix2::new(
            Complex64::new(r.rho_gg, 0.0),
            r.rho_ge,
            r.rho_ge.conj(),
            Complex64::new(r.rho_ee, 0.0),
        )))
    }
}

/// Right-hand side of the master equation.
pub fn lindblad_rhs(rho: &Matrix2<Complex64>, h: &Matrix2<Complex64>, gamma: f64) -> Matrix2<Complex64> {
    let sm = sigma_minus();
    let sp = sm.adjoint();
    let spsm = sp * sm;
    let unitary = (h * rho - rho * h) * (-I);
    let jump = (sm * rho * sp - (spsm * rho + rho * spsm) * re(0.5)) * re(2.0 * gamma);
    unitary + jump
}

/// Steady state of the Bloch equations for a constant drive `beta0`.
///
/// Solves `L rho = 0` with the trace condition replacing one row.
pub fn bloch_steady_state(params: &PhysicalParams, beta0: Complex64) -> Result<DensityMatrix2> {
    if params.gamma.is_nan() || params.gamma <= 0.0 {
        return Err(Error::NoSteadyState(format!(
            "decay rate must be positive, got gamma = {}",
            params.gamma
        )));
    }
    let h = semiclassical_hamiltonian(params, beta0);
    // column-stacked vec(rho): index = col * 2 + row
    let mut l = Matrix4::<Complex64>::zeros();
    for col in 0..2 {
        for row in 0..2 {
            let mut basis = Matrix2::zeros();
            basis[(row, col)] = Complex64::new(1.0, 0.0);
            let image = lindblad_rhs(&basis, &h, params.gamma);
            let j = col * 2 + row;
            for c2 in 0..2 {
                for r2 in 0..2 {
                    l[(c2 * 2 + r2, j)] = image[(r2, c2)];
                }
            }
        }
    }
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    l.set_row(0, &nalgebra::RowVector4::new(one, zero, zero, one));
    let rhs = Vector4::new(one, zero, zero, zero);
    let x = l
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::NoSteadyState("singular Bloch generator".into()))?;
    let m = Matrix2::new(x[0], x[2], x[1], x[3]);
    // symmetrize away rounding
    Ok(DensityMatrix2((m + m.adjoint()) * re(0.5)))
}

/// Output amplitude from the input-output relation at the Bloch steady state.
///
/// In the standard convention the outgoing amplitude is
/// `beta + i sqrt(2 gamma) <s->`; conjugating into the crate convention gives
/// the weak-drive limit `beta - i (2 gamma / omega_delta) beta`.
pub fn oracle_output_amplitude(params: &PhysicalParams, beta0: Complex64) -> Result<Complex64> {
    let standard_in = beta0.conj();
    let rho = bloch_steady_state(params, standard_in)?;
    let standard_out = standard_in + I * (2.0 * params.gamma).sqrt() * rho.dipole();
    Ok(standard_out.conj())
}

/// Sampled solution of [`bloch_evolve`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlochSeries {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix2>,
}

impl BlochSeries {
    pub fn last(&self) -> Option<&DensityMatrix2> {
        self.states.last()
    }

    /// CSV with columns `t,rho_ee,re_rho_ge,im_rho_ge`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "t,rho_ee,re_rho_ge,im_rho_ge")?;
        for (t, s) in self.times.iter().zip(&self.states) {
            let ge = s.rho_ge();
            writeln!(w, "{},{},{},{}", t, s.rho_ee(), ge.re, ge.im)?;
        }
        Ok(())
    }
}

/// Largest `dt * max(omega_beta, 2 gamma)` accepted by [`bloch_evolve`].
pub const MAX_STEP_PHASE: f64 = 0.05;

/// Fixed-step RK4 integration of the master equation over the envelope.
///
/// Each envelope sample is split into `ceil(env.dt / dt)` equal steps so the
/// drive is constant within every step. The returned series holds `t = 0` and
/// every step after it.
pub fn bloch_evolve(
    rho0: &DensityMatrix2,
    env: &PulseEnvelope,
    params: &PhysicalParams,
    dt: f64,
) -> Result<BlochSeries> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::domain(format!("step size must be positive, got {dt}")));
    }
    let substeps = (env.dt / dt).ceil().max(1.0) as usize;
    let h_step = env.dt / substeps as f64;
    let fastest = dressed_splitting(params, env.max_abs()).max(2.0 * params.gamma);
    if h_step * fastest > MAX_STEP_PHASE {
        return Err(Error::Resolution(format!(
            "step {h_step} does not resolve the fastest rate {fastest} (need dt * rate <= {MAX_STEP_PHASE})"
        )));
    }

    let mut rho = rho0.0;
    let mut times = Vec::with_capacity(env.len() * substeps + 1);
    let mut states = Vec::with_capacity(env.len() * substeps + 1);
    times.push(0.0);
    states.push(*rho0);
    for (k, &beta) in env.samples.iter().enumerate() {
        let h = semiclassical_hamiltonian(params, beta);
        let f = |r: &Matrix2<Complex64>| lindblad_rhs(r, &h, params.gamma);
        for s in 0..substeps {
            let k1 = f(&rho);
            let k2 = f(&(rho + k1 * re(0.5 * h_step)));
            let k3 = f(&(rho + k2 * re(0.5 * h_step)));
            let k4 = f(&(rho + k3 * re(h_step)));
            rho += (k1 + k2 * re(2.0) + k3 * re(2.0) + k4) * re(h_step / 6.0);
            times.push(k as f64 * env.dt + (s + 1) as f64 * h_step);
            states.push(DensityMatrix2(rho));
        }
    }
    Ok(BlochSeries { times, states })
}
