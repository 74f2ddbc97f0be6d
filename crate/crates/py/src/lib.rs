use atomshift::biphoton;
use atomshift::bloch;
use atomshift::cat;
use atomshift::dressed;
use atomshift::shift;
use atomshift::trajectory;
use atomshift::{Complex64, PulseEnvelope, Variant};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: atomshift::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn variant(name: &str) -> PyResult<Variant> {
    name.parse().map_err(err)
}

#[pyclass(frozen, from_py_object)]
#[derive(Clone)]
struct PhysicalParams {
    inner: atomshift::PhysicalParams,
}

#[pymethods]
impl PhysicalParams {
    #[new]
    #[pyo3(signature = (detuning, gamma = 1.0))]
    fn new(detuning: f64, gamma: f64) -> PyResult<Self> {
        Ok(PhysicalParams {
            inner: atomshift::PhysicalParams::new(gamma, detuning).map_err(err)?,
        })
    }

    #[getter]
    fn gamma(&self) -> f64 {
        self.inner.gamma
    }

    #[getter]
    fn detuning(&self) -> f64 {
        self.inner.omega_delta
    }

    fn __repr__(&self) -> String {
        format!("PhysicalParams(detuning={}, gamma={})", self.inner.omega_delta, self.inner.gamma)
    }
}

#[pyclass(frozen, get_all)]
struct DressedFrame {
    theta: f64,
    phi: f64,
    omega_beta: f64,
    rate_up: f64,
    rate_down: f64,
    gamma_prime: f64,
}

#[pymethods]
impl DressedFrame {
    fn __repr__(&self) -> String {
        format!(
            "DressedFrame(theta={}, phi={}, omega_beta={})",
            self.theta, self.phi, self.omega_beta
        )
    }
}

#[pyfunction]
fn dressed_frame(params: &PhysicalParams, beta: Complex64) -> PyResult<DressedFrame> {
    let p = &params.inner;
    let f = dressed::DressedFrame::new(p, beta).map_err(err)?;
    let r = f.rates(p.gamma);
    Ok(DressedFrame {
        theta: f.theta,
        phi: f.phi,
        omega_beta: f.omega_beta,
        rate_up: r.up,
        rate_down: r.down,
        gamma_prime: f.gamma_prime(p.gamma),
    })
}

/// Mixing angle and splitting from the 2x2 eigensolver, for cross-checks.
#[pyfunction]
fn eigensolver_frame(params: &PhysicalParams, beta: Complex64) -> (f64, f64) {
    let f = dressed::diagonalize_semiclassical(&params.inner, beta);
    (f.theta, f.omega_beta)
}

#[pyfunction]
fn jump_rate_up(gamma: f64, theta: f64) -> f64 {
    dressed::jump_rate_up(gamma, theta)
}

#[pyfunction]
fn jump_rate_down(gamma: f64, theta: f64) -> f64 {
    dressed::jump_rate_down(gamma, theta)
}

#[pyfunction]
fn shift_coefficient(params: &PhysicalParams, beta: Complex64) -> PyResult<Complex64> {
    shift::shift_coefficient(&params.inner, beta).map_err(err)
}

#[pyfunction]
fn pulse_shift(params: &PhysicalParams, beta0: Complex64, duration: f64) -> PyResult<Complex64> {
    shift::pulse_shift(beta0, duration, &params.inner).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (params, beta0, variant = "printed"))]
fn instantaneous_jump_rate(params: &PhysicalParams, beta0: Complex64, variant: &str) -> PyResult<f64> {
    Ok(shift::instantaneous_jump_rate(&params.inner, beta0, self::variant(variant)?)
        .map_err(err)?
        .rate)
}

/// Returns `(probability, valid)`.
#[pyfunction]
#[pyo3(signature = (shift, gamma_t, variant = "printed"))]
fn jump_probability_total(shift: f64, gamma_t: f64, variant: &str) -> PyResult<(f64, bool)> {
    let p = shift::jump_probability_total(shift, gamma_t, self::variant(variant)?).map_err(err)?;
    Ok((p.probability, p.valid))
}

#[pyfunction]
#[pyo3(signature = (target_shift, p_budget, variant = "printed"))]
fn plan_pulse(target_shift: f64, p_budget: f64, variant: &str) -> PyResult<f64> {
    shift::plan_pulse(target_shift, p_budget, self::variant(variant)?).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (gamma_t, p_budget, variant = "printed"))]
fn max_shift(gamma_t: f64, p_budget: f64, variant: &str) -> PyResult<f64> {
    shift::max_shift(gamma_t, p_budget, self::variant(variant)?).map_err(err)
}

/// Steady state as `(rho_ee, rho_ge)`.
#[pyfunction]
fn bloch_steady_state(params: &PhysicalParams, beta0: Complex64) -> PyResult<(f64, Complex64)> {
    let rho = bloch::bloch_steady_state(&params.inner, beta0).map_err(err)?;
    Ok((rho.rho_ee(), rho.rho_ge()))
}

#[pyfunction]
fn oracle_output_amplitude(params: &PhysicalParams, beta0: Complex64) -> PyResult<Complex64> {
    bloch::oracle_output_amplitude(&params.inner, beta0).map_err(err)
}

#[pyfunction]
fn biphoton_time(params: &PhysicalParams, beta: Complex64, tau: f64) -> PyResult<Complex64> {
    let f = dressed::DressedFrame::new(&params.inner, beta).map_err(err)?;
    Ok(biphoton::biphoton_time(tau, &f, params.inner.gamma))
}

#[pyfunction]
fn pair_rate(params: &PhysicalParams, beta: Complex64) -> PyResult<f64> {
    let f = dressed::DressedFrame::new(&params.inner, beta).map_err(err)?;
    Ok(biphoton::pair_rate(&f, params.inner.gamma))
}

#[pyfunction]
fn coherent_overlap(a1: Complex64, a2: Complex64) -> Complex64 {
    cat::coherent_overlap(a1, a2)
}

#[pyfunction]
fn cat_norm_sqr(alpha: Complex64, chi: f64) -> f64 {
    cat::cat_output(alpha, chi).norm_sqr
}

#[pyclass(frozen, get_all)]
struct EnsembleStats {
    n_trajectories: usize,
    n_up: usize,
    n_down: usize,
    mean_up_rate: f64,
    up_rate_stderr: f64,
    excited_occupancy: f64,
    pair_delays: Vec<f64>,
    warnings: Vec<String>,
}

/// Ensemble of rectangular-pulse trajectories; releases the GIL while running.
#[pyfunction]
#[pyo3(signature = (params, beta0, duration, n_runs, seed = 0))]
fn run_ensemble(
    py: Python<'_>,
    params: &PhysicalParams,
    beta0: Complex64,
    duration: f64,
    n_runs: usize,
    seed: u64,
) -> PyResult<EnsembleStats> {
    let p = params.inner;
    let s = py
        .detach(move || {
            let env = PulseEnvelope::constant(beta0, duration, duration)?;
            trajectory::run_ensemble(&env, &p, n_runs, seed)
        })
        .map_err(err)?;
    Ok(EnsembleStats {
        n_trajectories: s.n_trajectories,
        n_up: s.n_up,
        n_down: s.n_down,
        mean_up_rate: s.mean_up_rate,
        up_rate_stderr: s.up_rate_stderr,
        excited_occupancy: s.excited_occupancy,
        pair_delays: s.pair_delays,
        warnings: s.warnings,
    })
}

#[pymodule]
fn atomshift_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PhysicalParams>()?;
    m.add_class::<DressedFrame>()?;
    m.add_class::<EnsembleStats>()?;
    m.add_function(wrap_pyfunction!(dressed_frame, m)?)?;
    m.add_function(wrap_pyfunction!(eigensolver_frame, m)?)?;
    m.add_function(wrap_pyfunction!(jump_rate_up, m)?)?;
    m.add_function(wrap_pyfunction!(jump_rate_down, m)?)?;
    m.add_function(wrap_pyfunction!(shift_coefficient, m)?)?;
    m.add_function(wrap_pyfunction!(pulse_shift, m)?)?;
    m.add_function(wrap_pyfunction!(instantaneous_jump_rate, m)?)?;
    m.add_function(wrap_pyfunction!(jump_probability_total, m)?)?;
    m.add_function(wrap_pyfunction!(plan_pulse, m)?)?;
    m.add_function(wrap_pyfunction!(max_shift, m)?)?;
    m.add_function(wrap_pyfunction!(bloch_steady_state, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_output_amplitude, m)?)?;
    m.add_function(wrap_pyfunction!(biphoton_time, m)?)?;
    m.add_function(wrap_pyfunction!(pair_rate, m)?)?;
    m.add_function(wrap_pyfunction!(coherent_overlap, m)?)?;
    m.add_function(wrap_pyfunction!(cat_norm_sqr, m)?)?;
    m.add_function(wrap_pyfunction!(run_ensemble, m)?)?;
    Ok(())
}
