//! Atom-controlled phase gate on a coherent pulse and the heralded cat state.
//!
//! A three-level atom with a dark state `d` leaves the light untouched,
//! while `g` rotates the coherent amplitude by `-chi` with
//! `chi = 2 gamma / omega_delta`. Measuring the atom in `(|g> + |d>)/sqrt 2`
//! afterwards leaves the field in `|e^{-i chi} alpha> + |alpha>`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::shift::pulse_shift;
use crate::{Error, PhysicalParams, Result};

/// Above this `chi` the gate is outside the small-phase regime.
pub const WEAK_PHASE_LIMIT: f64 = 0.2;

/// Atomic qubit on the `{g, d}` subspace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomQubit {
    pub g: Complex64,
    pub d: Complex64,
}

impl AtomQubit {
    /// Normalizes the given amplitudes; fails on the zero vector.
    pub fn new(g: Complex64, d: Complex64) -> Result<Self> {
        let n = (g.norm_sqr() + d.norm_sqr()).sqrt();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::domain("atomic qubit amplitudes must be finite and nonzero"));
        }
        Ok(AtomQubit { g: g / n, d: d / n })
    }

    pub fn ground() -> Self {
        AtomQubit {
            g: Complex64::new(1.0, 0.0),
            d: Complex64::new(0.0, 0.0),
        }
    }

    pub fn dark() -> Self {
        AtomQubit {
            g: Complex64::new(0.0, 0.0),
            d: Complex64::new(1.0, 0.0),
        }
    }

    /// `(|g> + |d>)/sqrt 2`
    pub fn plus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        AtomQubit {
            g: Complex64::new(h, 0.0),
            d: Complex64::new(h, 0.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AtomLevel {
    G,
    D,
}

/// One term `weight * |alpha> (x) |level>` of the gate output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub level: AtomLevel,
    pub weight: Complex64,
    pub alpha: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateOutput {
    pub branches: Vec<Branch>,
    /// False when `chi` exceeds [`WEAK_PHASE_LIMIT`].
    pub weak_regime: bool,
}

/// Applies `U|alpha>|d> = |alpha>|d>`, `U|alpha>|g> = |e^{-i chi} alpha>|g>`.
///
/// Branches with zero weight are dropped.
pub fn conditional_phase(chi: f64, alpha: Complex64, atom: &AtomQubit) -> Result<GateOutput> {
    if !(chi.is_finite() && chi >= 0.0) {
        return Err(Error::domain(format!("chi must be nonnegative, got {chi}")));
    }
    let mut branches = Vec::with_capacity(2);
    if atom.g.norm() > 0.0 {
        branches.push(Branch {
            level: AtomLevel::G,
            weight: atom.g,
            alpha: alpha * Complex64::from_polar(1.0, -chi),
        });
    }
    if atom.d.norm() > 0.0 {
        branches.push(Branch {
            level: AtomLevel::D,
            weight: atom.d,
            alpha,
        });
    }
    Ok(GateOutput {
        branches,
        weak_regime: chi <= WEAK_PHASE_LIMIT,
    })
}

/// `<a1|a2> = exp(-|a1|^2/2 - |a2|^2/2 + conj(a1) a2)`.
pub fn coherent_overlap(a1: Complex64, a2: Complex64) -> Complex64 {
    (-(0.5 * a1.norm_sqr()) - 0.5 * a2.norm_sqr() + a1.conj() * a2).exp()
}

/// Superposition `sum_i w_i |alpha_i>` of coherent states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatState {
    /// `(alpha_i, w_i)` pairs.
    pub components: Vec<(Complex64, Complex64)>,
    /// Squared norm `sum_ij conj(w_i) w_j <alpha_i|alpha_j>`.
    pub norm_sqr: f64,
    /// `1 - |<alpha_1|alpha_2>|^2` for two-component states, else `None`.
    pub distinguishability: Option<f64>,
}

impl CatState {
    pub fn new(components: Vec<(Complex64, Complex64)>) -> Self {
        let mut norm = Complex64::new(0.0, 0.0);
        for &(ai, wi) in &components {
            for &(aj, wj) in &components {
                norm += wi.conj() * wj * coherent_overlap(ai, aj);
            }
        }
        let distinguishability = match components.as_slice() {
            [(a1, _), (a2, _)] => Some(1.0 - coherent_overlap(*a1, *a2).norm_sqr()),
            _ => None,
        };
        CatState {
            components,
            // Hermitian form: imaginary part is rounding only
            norm_sqr: norm.re.max(0.0),
            distinguishability,
        }
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr.sqrt()
    }
}

/// Unnormalized heralded field `|e^{-i chi} alpha> + |alpha>`.
pub fn cat_output(alpha: Complex64, chi: f64) -> CatState {
    let one = Complex64::new(1.0, 0.0);
    CatState::new(vec![
        (alpha * Complex64::from_polar(1.0, -chi), one),
        (alpha, one),
    ])
}

/// Field state left after projecting the atom of `out` onto `(|g> + |d>)/sqrt 2`.
pub fn project_plus(out: &GateOutput) -> CatState {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    CatState::new(
        out.branches
            .iter()
            .map(|b| (b.alpha, b.weight * h))
            .collect(),
    )
}

/// Cat coherence surviving a jump probability `p_jump`: `1 - p_jump`.
///
/// A single jump reveals that the atom was in `g`, so any jump destroys the
/// superposition completely.
pub fn cat_fidelity_bound(p_jump: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p_jump) {
        return Err(Error::domain(format!(
            "jump probability must lie in [0, 1], got {p_jump}"
        )));
    }
    Ok(1.0 - p_jump)
}

/// Gate parameters implied by a rectangular pulse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseGate {
    pub chi: f64,
    pub alpha: Complex64,
    /// `|alpha (1 - e^{-i chi})|`, the separation of the two branches.
    pub separation: f64,
    /// `|pulse_shift|`, equal to `chi |alpha|`.
    pub linear_shift: f64,
}

pub fn gate_from_pulse(params: &PhysicalParams, beta0: Complex64, duration: f64) -> Result<PulseGate> {
    let shift = pulse_shift(beta0, duration, params)?;
    let chi = params.linear_phase();
    let alpha = beta0 * duration.sqrt();
    Ok(PulseGate {
        chi,
        alpha,
        separation: (alpha * (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, -chi))).norm(),
        linear_shift: shift.norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn dark_state_is_untouched() {
        let out = conditional_phase(0.1, c(2.0, 0.0), &AtomQubit::dark()).unwrap();
        assert_eq!(out.branches.len(), 1);
        assert_eq!(out.branches[0].level, AtomLevel::D);
        assert_eq!(out.branches[0].alpha, c(2.0, 0.0));
    }

    #[test]
    fn ground_state_rotates() {
        let out = conditional_phase(0.1, c(2.0, 0.0), &AtomQubit::ground()).unwrap();
        let a = out.branches[0].alpha;
        assert!((a - Complex64::from_polar(2.0, -0.1)).norm() < 1e-15);
        assert!(out.weak_regime);
        assert!(!conditional_phase(1.0, a, &AtomQubit::ground()).unwrap().weak_regime);
    }

    #[test]
    fn zero_phase_is_identity() {
        let atom = AtomQubit::new(c(0.6, 0.0), c(0.0, 0.8)).unwrap();
        let out = conditional_phase(0.0, c(1.5, -0.5), &atom).unwrap();
        for b in &out.branches {
            assert_eq!(b.alpha, c(1.5, -0.5));
        }
        assert!(conditional_phase(-0.1, c(1.0, 0.0), &atom).is_err());
    }

    #[test]
    fn overlap_examples() {
        assert_relative_eq!(coherent_overlap(c(1.3, -0.2), c(1.3, -0.2)).re, 1.0, epsilon = 1e-15);
        assert_relative_eq!(coherent_overlap(c(0.0, 0.0), c(2.0, 0.0)).re, (-2f64).exp(), epsilon = 1e-15);
        let o = coherent_overlap(c(20.0, 0.0), Complex64::from_polar(20.0, -0.1));
        assert_relative_eq!(o.norm(), (-400.0 * (1.0 - 0.1f64.cos())).exp(), max_relative = 1e-12);
        assert_relative_eq!(o.norm(), 0.13558, epsilon = 1e-4);
    }

    #[test]
    fn cat_norm_examples() {
        assert_relative_eq!(cat_output(c(3.0, 1.0), 0.0).norm_sqr, 4.0, epsilon = 1e-12);
        assert_relative_eq!(cat_output(c(0.0, 0.0), 0.7).norm_sqr, 4.0, epsilon = 1e-15);
        let cat = cat_output(c(20.0, 0.0), 0.1);
        assert_relative_eq!(cat.norm_sqr, 1.833, epsilon = 2e-3);
        let ov = coherent_overlap(Complex64::from_polar(20.0, -0.1), c(20.0, 0.0));
        assert_relative_eq!(cat.norm_sqr, 2.0 + 2.0 * ov.re, epsilon = 1e-12);
        assert_relative_eq!(cat.distinguishability.unwrap(), 1.0 - ov.norm_sqr(), epsilon = 1e-15);
    }

    #[test]
    fn projection_reproduces_cat_up_to_scale() {
        let out = conditional_phase(0.3, c(2.0, 1.0), &AtomQubit::plus()).unwrap();
        let proj = project_plus(&out);
        let cat = cat_output(c(2.0, 1.0), 0.3);
        // two factors of 1/sqrt 2 on the amplitudes
        assert_relative_eq!(proj.norm_sqr * 4.0, cat.norm_sqr, max_relative = 1e-12);
    }

    #[test]
    fn wide_separation_approaches_two() {
        let cat = cat_output(c(200.0, 0.0), 0.1);
        assert_relative_eq!(cat.norm_sqr, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn fidelity_bound() {
        assert_eq!(cat_fidelity_bound(0.0).unwrap(), 1.0);
        assert_relative_eq!(cat_fidelity_bound(0.1).unwrap(), 0.9);
        assert_eq!(cat_fidelity_bound(1.0).unwrap(), 0.0);
        assert!(cat_fidelity_bound(-0.01).is_err());
        assert!(cat_fidelity_bound(1.01).is_err());
    }

    #[test]
    fn pulse_gate_links_to_shift() {
        let p = PhysicalParams::new(1.0, 100.0).unwrap();
        let g = gate_from_pulse(&p, c(1.0, 0.0), 100.0).unwrap();
        assert_relative_eq!(g.chi * g.alpha.norm(), g.linear_shift, max_relative = 1e-14);
        // separation = 2|alpha| sin(chi/2) = chi |alpha| (1 - chi^2/24 + ...)
        assert_relative_eq!(g.separation, g.linear_shift, max_relative = g.chi * g.chi / 20.0);
    }

    proptest! {
        #[test]
        fn overlap_magnitude_law(a in -5.0f64..5.0, b in -5.0f64..5.0, x in -5.0f64..5.0, y in -5.0f64..5.0) {
            let (a1, a2) = (c(a, b), c(x, y));
            let o = coherent_overlap(a1, a2);
            let expected = (-0.5 * (a1 - a2).norm_sqr()).exp();
            prop_assert!((o.norm() - expected).abs() <= 1e-12 * expected.max(1e-300));
            prop_assert!(o.norm() <= 1.0 + 1e-15);
        }

        #[test]
        fn gate_preserves_amplitude(chi in 0.0f64..3.0, r in 0.0f64..50.0, ph in -3.0f64..3.0) {
            let alpha = Complex64::from_polar(r, ph);
            let out = conditional_phase(chi, alpha, &AtomQubit::plus()).unwrap();
            for b in &out.branches {
                prop_assert!((b.alpha.norm() - r).abs() <= 1e-12 * r.max(1.0));
            }
        }

        #[test]
        fn cat_norm_bounded(r in 0.0f64..30.0, ph in -3.0f64..3.0, chi in 0.0f64..6.3) {
            let cat = cat_output(Complex64::from_polar(r, ph), chi);
            prop_assert!(cat.norm_sqr >= 0.0 && cat.norm_sqr <= 4.0 + 1e-12);
        }
    }
}
