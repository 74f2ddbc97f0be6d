//! Coherent shift of the transmitted field and the quantum-jump budget.
//!
//! While the atom stays in `g'`, the field coupling to `s'z` only displaces
//! the outgoing light: the amplitude picks up `-i c(beta)` with
//! `c(beta) = 2 gamma beta / sqrt(omega_delta^2 + 8 gamma |beta|^2)`. Over a
//! rectangular pulse the shift accumulates as `sqrt(T)` while the jump
//! probability grows only linearly in `T` at fixed shift, which is what makes
//! large jump-free shifts possible.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dressed::mixing_angle;
use crate::{Error, PhysicalParams, PulseEnvelope, Result, Variant};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `2 gamma beta / sqrt(omega_delta^2 + 8 gamma |beta|^2)`.
pub fn shift_coefficient(params: &PhysicalParams, beta: Complex64) -> Result<Complex64> {
    params.require_off_resonant()?;
    let denom = params
        .omega_delta
        .hypot((8.0 * params.gamma).sqrt() * beta.norm());
    Ok(beta * (2.0 * params.gamma / denom))
}

/// Same coefficient written through the dressed frame,
/// `(1/2) sqrt(2 gamma) sin(theta) e^{i phi}`.
pub fn shift_coefficient_dressed(params: &PhysicalParams, beta: Complex64) -> Result<Complex64> {
    let theta = mixing_angle(params, beta.norm())?;
    let phi = if beta.norm() == 0.0 { 0.0 } else { beta.arg() };
    Ok(Complex64::from_polar(
        0.5 * (2.0 * params.gamma).sqrt() * theta.sin(),
        phi,
    ))
}

/// Output envelope `beta - i c(beta)` with the saturated coefficient.
///
/// Reduces to the linear response `beta - i (2 gamma / omega_delta) beta`
/// for weak drive.
pub fn output_envelope(env: &PulseEnvelope, params: &PhysicalParams) -> Result<PulseEnvelope> {
    params.require_off_resonant()?;
    let samples = env
        .samples
        .iter()
        .map(|&b| shift_coefficient(params, b).map(|c| b - I * c))
        .collect::<Result<Vec<_>>>()?;
    PulseEnvelope::from_samples(env.dt, samples, format!("output[{}]", env.label))
}

/// Weak-drive output `beta (1 - i 2 gamma / omega_delta)`.
pub fn linear_output_envelope(env: &PulseEnvelope, params: &PhysicalParams) -> Result<PulseEnvelope> {
    params.require_off_resonant()?;
    let factor = Complex64::new(1.0, -params.linear_phase());
    Ok(env.map(|b| b * factor, format!("linear_output[{}]", env.label)))
}

/// Shift of the pulse-mode amplitude for a rectangular pulse,
/// `-i (2 gamma / omega_delta) beta0 sqrt(T)`.
pub fn pulse_shift(beta0: Complex64, duration: f64, params: &PhysicalParams) -> Result<Complex64> {
    params.require_off_resonant()?;
    if !(duration.is_finite() && duration > 0.0) {
        return Err(Error::domain(format!("pulse duration must be positive, got {duration}")));
    }
    Ok(-I * beta0 * (params.linear_phase() * duration.sqrt()))
}

/// A jump rate together with the convention that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InstantaneousRate {
    pub rate: f64,
    pub variant: Variant,
    /// False once `sqrt(8 gamma)|beta0|` exceeds a tenth of the detuning.
    pub weak_regime: bool,
}

/// Weak-drive `g' -> e'` rate for amplitude `beta0`.
///
/// `Printed` is `(1/2 gamma)|2 (2 gamma/omega_delta) beta0|^4`; `Hamiltonian`
/// is the small-angle limit of `2 gamma sin^4(theta/2)`, which is exactly a
/// sixteenth of it.
pub fn instantaneous_jump_rate(
    params: &PhysicalParams,
    beta0: Complex64,
    variant: Variant,
) -> Result<InstantaneousRate> {
    params.require_off_resonant()?;
    let g = params.gamma;
    let x = 2.0 * params.linear_phase() * beta0.norm();
    let printed = x.powi(4) / (2.0 * g);
    Ok(InstantaneousRate {
        rate: printed * variant.scale(),
        variant,
        weak_regime: (8.0 * g).sqrt() * beta0.norm() <= 0.1 * params.omega_delta,
    })
}

/// Jump probability of a pulse, clamped into `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JumpProbability {
    pub probability: f64,
    /// Unclamped perturbative value.
    pub raw: f64,
    /// False when the perturbative formula exceeded 1 and was clamped.
    pub valid: bool,
    pub variant: Variant,
}

/// `P = |2 delta_alpha|^4 / (2 gamma T)` (printed), or a sixteenth of it.
pub fn jump_probability_total(shift: f64, gamma_t: f64, variant: Variant) -> Result<JumpProbability> {
    if !(gamma_t.is_finite() && gamma_t > 0.0) {
        return Err(Error::domain(format!("gamma*T must be positive, got {gamma_t}")));
    }
    if !(shift.is_finite() && shift >= 0.0) {
        return Err(Error::domain(format!("shift magnitude must be nonnegative, got {shift}")));
    }
    let raw = (2.0 * shift).powi(4) / (2.0 * gamma_t) * variant.scale();
    Ok(JumpProbability {
        probability: raw.min(1.0),
        raw,
        valid: raw <= 1.0,
        variant,
    })
}

/// Shortest pulse (in units of `1/gamma`) that reaches `target_shift` within
/// the jump budget `p_budget`.
pub fn plan_pulse(target_shift: f64, p_budget: f64, variant: Variant) -> Result<f64> {
    if !(p_budget > 0.0 && p_budget <= 1.0) {
        return Err(Error::domain(format!("p_budget must lie in (0, 1], got {p_budget}")));
    }
    if !(target_shift.is_finite() && target_shift >= 0.0) {
        return Err(Error::domain(format!(
            "target shift must be nonnegative, got {target_shift}"
        )));
    }
    Ok((2.0 * target_shift).powi(4) / (2.0 * p_budget) * variant.scale())
}

/// Largest shift reachable with pulse length `gamma_t` and jump budget `p_budget`.
pub fn max_shift(gamma_t: f64, p_budget: f64, variant: Variant) -> Result<f64> {
    if !(gamma_t.is_finite() && gamma_t > 0.0) {
        return Err(Error::domain(format!("gamma*T must be positive, got {gamma_t}")));
    }
    if !(p_budget > 0.0 && p_budget <= 1.0) {
        return Err(Error::domain(format!("p_budget must lie in (0, 1], got {p_budget}")));
    }
    Ok(0.5 * (2.0 * gamma_t * p_budget / variant.scale()).powf(0.25))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VariantProbabilities {
    pub hamiltonian: JumpProbability,
    pub printed: JumpProbability,
}

/// Pulse-level summary of the coherent shift.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShiftResult {
    pub delta_alpha: Complex64,
    pub alpha_in: Complex64,
    pub alpha_out: Complex64,
    pub variant_probabilities: VariantProbabilities,
}

/// Shift and jump budget of a rectangular pulse `beta0` of length `duration`.
pub fn rectangular_shift(beta0: Complex64, duration: f64, params: &PhysicalParams) -> Result<ShiftResult> {
    let delta_alpha = pulse_shift(beta0, duration, params)?;
    let alpha_in = beta0 * duration.sqrt();
    let gamma_t = params.gamma * duration;
    Ok(ShiftResult {
        delta_alpha,
        alpha_in,
        alpha_out: alpha_in + delta_alpha,
        variant_probabilities: VariantProbabilities {
            hamiltonian: jump_probability_total(delta_alpha.norm(), gamma_t, Variant::Hamiltonian)?,
            printed: jump_probability_total(delta_alpha.norm(), gamma_t, Variant::Printed)?,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn params(gamma: f64, omega_delta: f64) -> PhysicalParams {
        PhysicalParams::new(gamma, omega_delta).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn shift_coefficient_examples() {
        let k = shift_coefficient(&params(1.0, 100.0), c(1.0, 0.0)).unwrap();
        assert_relative_eq!(k.re, 0.019_992, epsilon = 1e-6);
        assert_eq!(shift_coefficient(&params(1.0, 100.0), c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        let k = shift_coefficient(&params(0.5, 2.0), c(1.0, 0.0)).unwrap();
        assert_relative_eq!(k.re, 1.0 / 8f64.sqrt(), epsilon = 1e-15);
        assert!(shift_coefficient(&params(1.0, 0.0), c(1.0, 0.0)).is_err());
    }

    #[test]
    fn shift_coefficient_weak_limit() {
        let p = params(0.7, 40.0);
        let b = c(1e-6, 2e-6);
        let k = shift_coefficient(&p, b).unwrap();
        assert!((k - b * p.linear_phase()).norm() < 1e-18);
    }

    #[test]
    fn output_envelope_examples() {
        let p = params(1.0, 100.0);
        let env = PulseEnvelope::constant(c(1.0, 0.0), 1.0, 0.1).unwrap();
        let lin = linear_output_envelope(&env, &p).unwrap();
        for b in &lin.samples {
            assert!((b - c(1.0, -0.02)).norm() < 1e-15);
        }
        let out = output_envelope(&env, &p).unwrap();
        for b in &out.samples {
            assert_relative_eq!(b.re, 1.0, epsilon = 1e-15);
            assert_relative_eq!(b.im, -0.019_992, epsilon = 1e-6);
        }
        let zero = PulseEnvelope::constant(c(0.0, 0.0), 1.0, 0.1).unwrap();
        assert!(output_envelope(&zero, &p).unwrap().samples.iter().all(|b| b.norm() == 0.0));
    }

    #[test]
    fn pulse_shift_examples() {
        let p = params(1.0, 100.0);
        let d = pulse_shift(c(1.0, 0.0), 100.0, &p).unwrap();
        assert!((d - c(0.0, -0.2)).norm() < 1e-15);
        assert_eq!(pulse_shift(c(0.0, 0.0), 100.0, &p).unwrap().norm(), 0.0);
        assert!(pulse_shift(c(1.0, 0.0), 0.0, &p).is_err());
    }

    #[test]
    fn instantaneous_rate_examples() {
        let p = params(1.0, 100.0);
        let printed = instantaneous_jump_rate(&p, c(1.0, 0.0), Variant::Printed).unwrap();
        assert_relative_eq!(printed.rate, 1.28e-6, max_relative = 1e-12);
        assert!(printed.weak_regime);
        let ham = instantaneous_jump_rate(&p, c(1.0, 0.0), Variant::Hamiltonian).unwrap();
        assert_relative_eq!(ham.rate, 8.0e-8, max_relative = 1e-12);
        // exact dressed rate sits within 0.2% of the small-angle form here
        let theta = mixing_angle(&p, 1.0).unwrap();
        assert_relative_eq!(
            crate::dressed::jump_rate_up(1.0, theta),
            ham.rate,
            max_relative = 2e-3
        );
        for v in [Variant::Printed, Variant::Hamiltonian] {
            assert_eq!(instantaneous_jump_rate(&p, c(0.0, 0.0), v).unwrap().rate, 0.0);
        }
        assert!(!instantaneous_jump_rate(&p, c(5.0, 0.0), Variant::Printed).unwrap().weak_regime);
    }

    #[test]
    fn jump_probability_examples() {
        let p = jump_probability_total(1.88, 1000.0, Variant::Printed).unwrap();
        assert_relative_eq!(p.probability, 0.0999, epsilon = 5e-4);
        assert!(p.valid);
        assert_eq!(jump_probability_total(0.0, 10.0, Variant::Printed).unwrap().probability, 0.0);
        let h = jump_probability_total(1.88, 1000.0, Variant::Hamiltonian).unwrap();
        assert_relative_eq!(h.probability, 0.006_25, epsilon = 1e-5);
        assert!(jump_probability_total(1.0, 0.0, Variant::Printed).is_err());
        assert!(jump_probability_total(1.0, -3.0, Variant::Printed).is_err());
    }

    #[test]
    fn jump_probability_clamps() {
        let p = jump_probability_total(10.0, 1.0, Variant::Printed).unwrap();
        assert_eq!(p.probability, 1.0);
        assert!(!p.valid);
        assert!(p.raw > 1.0);
    }

    #[test]
    fn plan_pulse_examples() {
        assert_relative_eq!(plan_pulse(1.88, 0.1, Variant::Printed).unwrap(), 999.4, epsilon = 0.5);
        assert_relative_eq!(plan_pulse(1.0, 0.1, Variant::Printed).unwrap(), 80.0, max_relative = 1e-14);
        assert_eq!(plan_pulse(0.0, 0.3, Variant::Hamiltonian).unwrap(), 0.0);
        assert!(plan_pulse(1.0, 0.0, Variant::Printed).is_err());
        assert!(plan_pulse(1.0, 1.5, Variant::Printed).is_err());
    }

    #[test]
    fn operating_point_reachable_shift() {
        let s = max_shift(1000.0, 0.1, Variant::Printed).unwrap();
        assert_relative_eq!(s, 1.88, epsilon = 5e-3);
    }

    #[test]
    fn rectangular_shift_summary() {
        let r = rectangular_shift(c(1.0, 0.0), 100.0, &params(1.0, 100.0)).unwrap();
        assert!((r.alpha_out - r.alpha_in - r.delta_alpha).norm() < 1e-15);
        assert_relative_eq!(
            r.variant_probabilities.printed.probability,
            16.0 * r.variant_probabilities.hamiltonian.probability,
            max_relative = 1e-14
        );
    }

    proptest! {
        #[test]
        fn plan_round_trip(shift in 0.01f64..20.0, p in 1e-4f64..1.0, ham in any::<bool>()) {
            let v = if ham { Variant::Hamiltonian } else { Variant::Printed };
            let gt = plan_pulse(shift, p, v).unwrap();
            let back = jump_probability_total(shift, gt, v).unwrap();
            prop_assert!((back.raw - p).abs() <= 1e-12 * p);
            let s = max_shift(gt, p, v).unwrap();
            prop_assert!((s - shift).abs() <= 1e-12 * shift);
        }

        #[test]
        fn coefficient_forms_agree(lg in -2.0f64..2.0, ld in -1.0f64..4.0, lb in -4.0f64..3.0, ph in -3.1f64..3.1) {
            let p = params(10f64.powf(lg), 10f64.powf(ld));
            let b = Complex64::from_polar(10f64.powf(lb), ph);
            let a = shift_coefficient(&p, b).unwrap();
            let d = shift_coefficient_dressed(&p, b).unwrap();
            prop_assert!((a - d).norm() <= 1e-12 * a.norm());
        }

        #[test]
        fn pulse_shift_scaling(b in 0.01f64..10.0, t in 0.1f64..1e4, lam in 0.1f64..10.0) {
            let p = params(1.0, 50.0);
            let base = pulse_shift(c(b, 0.0), t, &p).unwrap().norm();
            let longer = pulse_shift(c(b, 0.0), lam * t, &p).unwrap().norm();
            let stronger = pulse_shift(c(lam * b, 0.0), t, &p).unwrap().norm();
            prop_assert!((longer - base * lam.sqrt()).abs() <= 1e-12 * longer);
            prop_assert!((stronger - base * lam).abs() <= 1e-12 * stronger);
        }

        #[test]
        fn variant_ratio_is_sixteen(ld in 1.0f64..4.0, lb in -3.0f64..0.0) {
            let p = params(1.0, 10f64.powf(ld));
            let b = c(10f64.powf(lb), 0.0);
            let pr = instantaneous_jump_rate(&p, b, Variant::Printed).unwrap().rate;
            let hr = instantaneous_jump_rate(&p, b, Variant::Hamiltonian).unwrap().rate;
            prop_assert!((pr / hr - 16.0).abs() < 1e-9);
        }
    }
}
