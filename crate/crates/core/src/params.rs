//! Physical constants of the atom-field system and sampled pulse envelopes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Atom and carrier constants.
///
/// `gamma` is the dipole relaxation rate (half the spontaneous emission rate)
/// and `omega_delta = omega_atom - omega_light` the detuning.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub gamma: f64,
    pub omega_delta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_light: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_atom: Option<f64>,
}

impl PhysicalParams {
    pub fn new(gamma: f64, omega_delta: f64) -> Result<Self> {
        let p = PhysicalParams {
            gamma,
            omega_delta,
            omega_light: None,
            omega_atom: None,
        };
        p.validate()?;
        Ok(p)
    }

    /// Builds the parameters from absolute carrier and resonance frequencies.
    pub fn from_absolute(gamma: f64, omega_light: f64, omega_atom: f64) -> Result<Self> {
        let p = PhysicalParams {
            gamma,
            omega_delta: omega_atom - omega_light,
            omega_light: Some(omega_light),
            omega_atom: Some(omega_atom),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma.is_finite() && self.gamma > 0.0) {
            return Err(Error::domain(format!(
                "gamma must be finite and positive, got {}",
                self.gamma
            )));
        }
        if !self.omega_delta.is_finite() {
            return Err(Error::domain("detuning must be finite"));
        }
        if let (Some(light), Some(atom)) = (self.omega_light, self.omega_atom) {
            if atom - light != self.omega_delta {
                return Err(Error::domain(format!(
                    "omega_atom - omega_light = {} does not equal the detuning {}",
                    atom - light,
                    self.omega_delta
                )));
            }
        }
        Ok(())
    }

    /// Fails unless the drive is red of resonance (`omega_delta > 0`).
    pub(crate) fn require_off_resonant(&self) -> Result<()> {
        if self.omega_delta > 0.0 {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "detuning must be positive for an off-resonant drive, got {}",
                self.omega_delta
            )))
        }
    }

    /// `chi = 2 gamma / omega_delta`, the weak-drive phase per unit amplitude.
    pub fn linear_phase(&self) -> f64 {
        2.0 * self.gamma / self.omega_delta
    }
}

/// Complex flux amplitude `beta(t)` sampled on a uniform grid.
///
/// `|beta|^2` is a photon rate, so `sum |beta|^2 dt` is the mean photon number.
/// Sample `k` holds the value on `[k dt, (k+1) dt)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseEnvelope {
    pub dt: f64,
    pub samples: Vec<Complex64>,
    /// Short human-readable tag carried into jump records.
    pub label: String,
}

impl PulseEnvelope {
    pub fn from_samples(dt: f64, samples: Vec<Complex64>, label: impl Into<String>) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::domain(format!("dt must be positive, got {dt}")));
        }
        if samples.iter().any(|b| !b.re.is_finite() || !b.im.is_finite()) {
            return Err(Error::domain("envelope contains non-finite samples"));
        }
        Ok(PulseEnvelope {
            dt,
            samples,
            label: label.into(),
        })
    }

    fn sample_count(duration: f64, dt: f64) -> Result<usize> {
        if !(duration.is_finite() && duration > 0.0) {
            return Err(Error::domain(format!("duration must be positive, got {duration}")));
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::domain(format!("dt must be positive, got {dt}")));
        }
        let n = (duration / dt).round();
        if n < 1.0 {
            return Err(Error::domain("duration is shorter than one sample"));
        }
        Ok(n as usize)
    }

    /// Rectangular pulse of amplitude `beta0` lasting `duration`.
    pub fn constant(beta0: Complex64, duration: f64, dt: f64) -> Result<Self> {
        let n = Self::sample_count(duration, dt)?;
        Self::from_samples(
            dt,
            vec![beta0; n],
            format!("constant(beta0={},{};T={})", beta0.re, beta0.im, duration),
        )
    }

    /// Flat-top pulse with raised-cosine edges of length `rise` on both ends.
    pub fn raised_cosine(beta0: Complex64, duration: f64, rise: f64, dt: f64) -> Result<Self> {
        let n = Self::sample_count(duration, dt)?;
        if !(rise.is_finite() && rise >= 0.0 && 2.0 * rise <= duration) {
            return Err(Error::domain(format!(
                "rise time {rise} must lie in [0, duration/2]"
            )));
        }
        let samples = (0..n)
            .map(|k| {
                let t = (k as f64 + 0.5) * dt;
                let edge = t.min(duration - t);
                let w = if rise > 0.0 && edge < rise {
                    0.5 * (1.0 - (std::f64::consts::PI * edge / rise).cos())
                } else {
                    1.0
                };
                beta0 * w
            })
            .collect();
        Self::from_samples(
            dt,
            samples,
            format!(
                "raised_cosine(beta0={},{};T={};rise={})",
                beta0.re, beta0.im, duration, rise
            ),
        )
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 * self.dt
    }

    /// Amplitude in force at time `t`; zero outside the pulse.
    pub fn beta_at(&self, t: f64) -> Complex64 {
        if t < 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let k = (t / self.dt).floor() as usize;
        self.samples.get(k).copied().unwrap_or_default()
    }

    pub fn mean_photon_number(&self) -> f64 {
        self.samples.iter().map(|b| b.norm_sqr()).sum::<f64>() * self.dt
    }

    /// Amplitude of the flat temporal mode spanning the pulse,
    /// `(1/sqrt(T)) * integral beta dt`; equals `beta0 sqrt(T)` for a rectangular pulse.
    pub fn mode_amplitude(&self) -> Complex64 {
        let t = self.duration();
        if t == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        self.samples.iter().sum::<Complex64>() * (self.dt / t.sqrt())
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|b| b.norm()).fold(0.0, f64::max)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64, label: impl Into<String>) -> Self {
        PulseEnvelope {
            dt: self.dt,
            samples: self.samples.iter().map(|&b| f(b)).collect(),
            label: label.into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn absolute_frequencies_fix_detuning() {
        let p = PhysicalParams::from_absolute(1.0, 10.0, 10.5).unwrap();
        assert_eq!(p.omega_delta, 0.5);
        let bad = PhysicalParams {
            gamma: 1.0,
            omega_delta: 0.4,
            omega_light: Some(10.0),
            omega_atom: Some(10.5),
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn gamma_must_be_positive() {
        assert!(PhysicalParams::new(0.0, 1.0).is_err());
        assert!(PhysicalParams::new(-1.0, 1.0).is_err());
        assert!(PhysicalParams::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn constant_pulse_photon_number() {
        let env = PulseEnvelope::constant(Complex64::new(0.0, 2.0), 10.0, 0.01).unwrap();
        assert_eq!(env.len(), 1000);
        assert!((env.mean_photon_number() - 40.0).abs() < 1e-9);
        let a = env.mode_amplitude();
        assert!((a - Complex64::new(0.0, 2.0 * 10f64.sqrt())).norm() < 1e-9);
    }

    #[test]
    fn raised_cosine_is_symmetric_and_bounded() {
        let env = PulseEnvelope::raised_cosine(Complex64::new(1.0, 0.0), 10.0, 2.0, 0.1).unwrap();
        let n = env.len();
        for k in 0..n {
            let a = env.samples[k].norm();
            let b = env.samples[n - 1 - k].norm();
            assert!((a - b).abs() < 1e-12);
            assert!(a <= 1.0 + 1e-15);
        }
        assert!(env.samples[0].norm() < 0.01);
        assert_eq!(env.samples[n / 2].norm(), 1.0);
    }

    #[test]
    fn rejects_non_finite_samples() {
        let r = PulseEnvelope::from_samples(0.1, vec![Complex64::new(f64::NAN, 0.0)], "x");
        assert!(r.is_err());
        assert!(PulseEnvelope::constant(Complex64::new(1.0, 0.0), 1.0, 0.0).is_err());
    }

    #[test]
    fn beta_at_is_zero_outside() {
        let env = PulseEnvelope::constant(Complex64::new(1.0, 0.0), 1.0, 0.25).unwrap();
        assert_eq!(env.beta_at(-0.1), Complex64::new(0.0, 0.0));
        assert_eq!(env.beta_at(0.9), Complex64::new(1.0, 0.0));
        assert_eq!(env.beta_at(1.0), Complex64::new(0.0, 0.0));
    }
}
