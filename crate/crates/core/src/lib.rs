//! Single two-level atom driven by an off-resonant coherent pulse.
//!
//! The crate works in the frame co-rotating with the light carrier. The
//! coherent input is absorbed into the atomic dynamics (the input state acts
//! as an effective vacuum), so what remains is:
//!
//! * [`dressed`]: dressed-state angle, splitting, jump rates and the
//!   transformed atomic operators, with a 2x2 eigensolver cross-check.
//! * [`shift`]: the no-jump coherent shift of the output field, the jump
//!   probability budget of a rectangular pulse and its inverse.
//! * [`trajectory`]: seeded Monte Carlo of the g'/e' jump process.
//! * [`biphoton`]: the photon-pair wavefunction in time and frequency, with
//!   a numerical Fourier transform to check the closed forms.
//! * [`cat`]: the conditional phase gate and the resulting cat state.
//! * [`bloch`]: an optical Bloch (Lindblad) oracle that never touches the
//!   dressed picture.
//!
//! Times are in any consistent unit; rates in the inverse of that unit.
//! Complex amplitudes use the phase convention in which the weak-drive
//! output of the atom is `beta - i (2 gamma / detuning) beta`.

pub mod biphoton;
pub mod bloch;
pub mod cat;
pub mod dressed;
mod error;
pub mod fourier;
pub mod params;
pub mod shift;
pub mod trajectory;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use params::{PhysicalParams, PulseEnvelope};

/// Jump-probability convention.
///
/// The closed-form rate used for the pulse budget (`Printed`) is 16 times the
/// weak-drive limit of the dressed-state rate `2 gamma sin^4(theta/2)`
/// (`Hamiltonian`). Both are kept so either can be reproduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    #[default]
    Printed,
    Hamiltonian,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Printed => "printed",
            Variant::Hamiltonian => "hamiltonian",
        }
    }

    /// Ratio of this variant's rate to the `Printed` one.
    pub fn scale(self) -> f64 {
        match self {
            Variant::Printed => 1.0,
            Variant::Hamiltonian => 1.0 / 16.0,
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "printed" => Ok(Variant::Printed),
            "hamiltonian" => Ok(Variant::Hamiltonian),
            other => Err(Error::Domain(format!(
                "unknown variant `{other}` (expected `printed` or `hamiltonian`)"
            ))),
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}
