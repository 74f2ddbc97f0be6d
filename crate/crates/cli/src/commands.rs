use std::fmt::Write as _;

use atomshift::biphoton::{self, GridSpec};
use atomshift::bloch::{self, DensityMatrix2};
use atomshift::cat::{self, AtomQubit};
use atomshift::dressed::{self, DressedFrame};
use atomshift::shift::{self, JumpProbability};
use atomshift::trajectory::{self, beta_for_theta};
use atomshift::{Complex64, PhysicalParams, PulseEnvelope, Variant};
use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::{Cplx, Failure, List, Outcome, Output};

#[derive(Args, Debug, Serialize)]
pub struct Physical {
    /// Dipole relaxation rate (the excited state decays at 2 gamma)
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    /// Detuning omega_atom - omega_light
    #[arg(long)]
    pub detuning: f64,
}

impl Physical {
    fn params(&self) -> Result<PhysicalParams, Failure> {
        Ok(PhysicalParams::new(self.gamma, self.detuning)?)
    }
}

/// Drive strength as an amplitude or as a mixing angle.
#[derive(Args, Debug, Serialize)]
#[group(required = true, multiple = false)]
pub struct Drive {
    /// Drive amplitude beta0 (`re` or `re,im`), in sqrt(photons per unit time)
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta0: Option<Cplx>,
    /// Mixing angle; picks a real beta0 that produces it
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
}

impl Drive {
    fn beta(&self, p: &PhysicalParams) -> Result<Complex64, Failure> {
        match (self.beta0, self.theta) {
            (Some(b), _) => Ok(b.0),
            (None, Some(t)) => Ok(Complex64::new(beta_for_theta(p, t)?, 0.0)),
            (None, None) => Err(Failure("one of --beta0, --theta is required".into())),
        }
    }
}

fn one_row(header: &str, values: &[f64]) -> String {
    let row: Vec<String> = values.iter().map(f64::to_string).collect();
    format!("{header}\n{}\n", row.join(","))
}

fn frame_json(f: &DressedFrame) -> Value {
    json!({ "theta": f.theta, "phi": f.phi, "omega_beta": f.omega_beta })
}

#[derive(Args, Debug, Serialize)]
pub struct DressedArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub phys: Physical,
    /// Drive amplitude beta0 (`re` or `re,im`)
    #[arg(long)]
    pub beta0: Cplx,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: Output,
}

pub fn dressed(a: &DressedArgs) -> Result<Outcome, Failure> {
    let p = a.phys.params()?;
    let frame = DressedFrame::new(&p, a.beta0.0)?;
    let eig = dressed::diagonalize_semiclassical(&p, a.beta0.0);
    let rates = frame.rates(p.gamma);
    let gp = frame.gamma_prime(p.gamma);
    let result = json!({
        "frame": frame_json(&frame),
        "eigensolver": frame_json(&eig),
        "rates": rates,
        "gamma_prime": gp,
        "excited_fraction": rates.excited_fraction(),
    });
    let csv = one_row(
        "theta,phi,omega_beta,rate_up,rate_down,gamma_prime",
        &[frame.theta, frame.phi, frame.omega_beta, rates.up, rates.down, gp],
    );
    Ok(Outcome { result, csv: Some(csv) })
}

#[derive(Args, Debug, Serialize)]
pub struct ShiftArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub phys: Physical,
    /// Drive amplitude beta0 (`re` or `re,im`)
    #[arg(long)]
    pub beta0: Cplx,
    /// Pulse length
    #[arg(long)]
    pub duration: f64,
    /// Sample spacing of the CSV envelope [default: duration / 100]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: Output,
}

pub fn shift(a: &ShiftArgs) -> Result<Outcome, Failure> {
    let p = a.phys.params()?;
    let b = a.beta0.0;
    let r = shift::rectangular_shift(b, a.duration, &p)?;
    let mut result = serde_json::to_value(r)?;
    result["shift_coefficient"] = serde_json::to_value(shift::shift_coefficient(&p, b)?)?;
    result["linear_phase"] = json!(-p.linear_phase());
    result["instantaneous_rate"] = json!({
        "printed": shift::instantaneous_jump_rate(&p, b, Variant::Printed)?,
        "hamiltonian": shift::instantaneous_jump_rate(&p, b, Variant::Hamiltonian)?,
    });
    let env = PulseEnvelope::constant(b, a.duration, a.dt.unwrap_or(a.duration / 100.0))?;
    let outp = shift::output_envelope(&env, &p)?;
    let mut csv = String::from("t,re_beta_in,im_beta_in,re_beta_out,im_beta_out\n");
    for (k, (bi, bo)) in env.samples.iter().zip(&outp.samples).enumerate() {
        let t = k as f64 * env.dt;
        writeln!(csv, "{t},{},{},{},{}", bi.re, bi.im, bo.re, bo.im).unwrap();
    }
    Ok(Outcome { result, csv: Some(csv) })
}

#[derive(Args, Debug, Serialize)]
pub struct PlanArgs {
    /// Required |alpha_out - alpha_in|
    #[arg(long)]
    pub target_shift: f64,
    /// Acceptable jump probability over the pulse
    #[arg(long)]
    pub p_budget: f64,
    /// Jump-probability convention
    #[arg(long, default_value = "printed")]
    pub variant: Variant,
    /// Dipole relaxation rate, used to convert gamma*T into T
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: Output,
}

pub fn plan(a: &PlanArgs) -> Result<Outcome, Failure> {
    if !(a.gamma.is_finite() && a.gamma > 0.0) {
        return Err(Failure(format!("gamma must be positive, got {}", a.gamma)));
    }
    let gt = shift::plan_pulse(a.target_shift, a.p_budget, a.variant)?;
    let check: Option<JumpProbability> = if gt > 0.0 {
        Some(shift::jump_probability_total(a.target_shift, gt, a.variant)?)
    } else {
        None
    };
    let result = json!({
        "gammaT": gt,
        "duration": gt / a.gamma,
        "variant": a.variant,
        "jump_probability": check,
    });
    let csv = format!("gammaT,duration,variant\n{},{},{}\n", gt, gt / a.gamma, a.variant.as_str());
    Ok(Outcome { result, csv: Some(csv) })
}

#[derive(Args, Debug, Serialize)]
pub struct TrajectoryArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub phys: Physical,
    #[command(flatten)]
    #[serde(flatten)]
    pub drive: Drive,
    /// Pulse length
    #[arg(long)]
    pub duration: f64,
    /// Envelope sample spacing [default: duration, or duration / 1000 with --rise]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    /// Raised-cosine edge length; omit for a rectangular pulse
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rise: Option<f64>,
    /// Number of trajectories
    #[arg(long, default_value_t = 1)]
    pub runs: usize,
    /// Master seed; trajectory i uses stream i
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Pair-delay histogram bins
    #[arg(long, default_value_t = 50)]
    pub bins: usize,
    /// Pair-delay histogram range [default: 5 / (2 gamma')]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    /// Worker threads [default: all cores]; results do not depend on it
    #[arg(long)]
    #[serde(skip)]
    pub threads: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: Output,
}

fn in_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, Failure> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(Failure("--threads must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map(|pool| pool.install(f))
            .map_err(|e| Failure(e.to_string())),
    }
}

pub fn trajectory(a: &TrajectoryArgs) -> Result<Outcome, Failure> {
    let p = a.phys.params()?;
    let b = a.drive.beta(&p)?;
    let env = match a.rise {
        Some(rise) => PulseEnvelope::raised_cosine(b, a.duration, rise, a.dt.unwrap_or(a.duration / 1000.0))?,
        None => PulseEnvelope::constant(b, a.duration, a.dt.unwrap_or(a.duration))?,
    };
    let ens = in_pool(a.threads, || trajectory::run_ensemble_records(&env, &p, a.runs, a.seed))??;
    let peak = DressedFrame::new(&p, b)?;
    let rates = peak.rates(p.gamma);
    let t_max = a.t_max.unwrap_or(5.0 / rates.down.max(f64::MIN_POSITIVE));
    let hist = trajectory::pair_delay_histogram(&ens.stats, a.bins, t_max)?;
    let mut stats = serde_json::to_value(&ens.stats)?;
    if let Value::Object(m) = &mut stats {
        m.remove("pair_delays");
        m.insert("n_pairs".into(), json!(ens.stats.pair_delays.len()));
    }
    let result = json!({
        "envelope_id": env.label,
        "stats": stats,
        "histogram": hist,
        "expected_at_peak": {
            "frame": frame_json(&peak),
            "up_rate": rates.up,
            "down_rate": rates.down,
            "excited_fraction": rates.excited_fraction(),
        },
    });
    let mut csv = Vec::new();
    ens.write_csv(&mut csv)?;
    Ok(Outcome {
        result,
        csv: Some(String::from_utf8(csv).expect("CSV is ASCII")),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainArg {
    Time,
    Frequency,
}

#[derive(Args, Debug, Serialize)]
pub struct PairsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub phys: Physical,
    #[command(flatten)]
    #[serde(flatten)]
    pub drive: Drive,
    /// Grid domain
    #[arg(long, value_enum, default_value_t = DomainArg::Frequency)]
    pub domain: DomainArg,
    /// Half-span of the delay grid in units of 1/gamma'
    #[arg(long, default_value_t = 40.0)]
    pub half_widths: f64,
    /// Grid intervals on each side of zero
    #[arg(long, default_value_t = 1 << 16)]
    pub intervals: usize,
    /// Absolute carrier frequency, for the sideband assignment
    #[arg(long, requires = "omega_atom")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_light: Option<f64>,
    /// Absolute atomic frequency, for the sideband assignment
    #[arg(long, requires = "omega_light")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_atom: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: Output,
}

pub fn pairs(a: &PairsArgs) -> Result<Outcome, Failure> {
    let mut p = a.phys.params()?;
    p.omega_light = a.omega_light;
    p.omega_atom = a.omega_atom;
    p.validate()?;
    let b = a.drive.beta(&p)?;
    let frame = DressedFrame::new(&p, b)?;
    let gp = frame.gamma_prime(p.gamma);
    let half_span = a.half_widths / gp;
    let mut result = json!({
        "frame": frame_json(&frame),
        "gamma_prime": gp,
        "pair_rate": biphoton::pair_rate(&frame, p.gamma),
        "pair_rate_quadrature": biphoton::pair_rate_quadrature(&frame, p.gamma, half_span, a.intervals),
    });
    if let (Some(l), Some(at)) = (a.omega_light, a.omega_atom) {
        let (first, second) = biphoton::sideband_frequencies(l, at)?;
        result["sidebands"] = json!([first, second]);
    }
    let grid = match a.domain {
        DomainArg::Time => biphoton::biphoton_time_grid(&frame, p.gamma, half_span, a.intervals)?,
        DomainArg::Frequency => {
            let spec = GridSpec {
                half_widths: a.half_widths,
                intervals: a.intervals,
            };
            let ft = biphoton::biphoton_freq_numeric(&frame, p.gamma, &spec)?;
            result["report"] = serde_json::to_value(&ft.report)?;
            ft.grid
        }
    };
    result["grid_norm_sqr"] = json!(grid.norm_sqr());
    result["grid_points"] = json!(grid.axis.len());
    let mut csv = Vec::new();
    grid.write_csv(&mut csv)?;
    Ok(Outcome {
        result,
        csv: Some(String::from_utf8(csv).expect("CSV is ASCII")),
    })
}

#[derive(Args, Debug, Serialize)]
pub struct CatArgs {
    /// Coherent amplitude of the pulse mode (`re` or `re,im`)
    #[arg(long, required_unless_present = "beta0")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Cplx>,
    /// Conditional phase
    #[arg(long, required_unless_present = "beta0")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi: Option<f64>,
    /// Derive alpha and chi from a rectangular pulse instead
    #[arg(long, conflicts_with_all = ["alpha", "chi"], requires_all = ["duration", "detuning"])]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta0: Option<Cplx>,
    /// Pulse length, with --beta0
    #[arg(long, requires = "beta0")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duration: Option<f64>,
    /// Detuning, with --beta0
    #[arg(long, requires = "beta0")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detuning: Option<f64>,
    /// Dipole relaxation rate, with --beta0
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    /// Jump probability for the fidelity bound (pulse mode computes it)
    #[arg(long, conflicts_with = "beta0")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_jump: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: Output,
}

pub fn cat(a: &CatArgs) -> Result<Outcome, Failure> {
    let mut result = json!({});
    let (alpha, chi) = match (a.beta0, a.duration, a.detuning) {
        (Some(b), Some(t), Some(d)) => {
            let p = PhysicalParams::new(a.gamma, d)?;
            let g = cat::gate_from_pulse(&p, b.0, t)?;
            let sr = shift::rectangular_shift(b.0, t, &p)?;
            let vp = sr.variant_probabilities;
            result["gate"] = serde_json::to_value(g)?;
            result["variant_probabilities"] = serde_json::to_value(vp)?;
            result["fidelity_bound"] = json!({
                "printed": { "variant": Variant::Printed, "bound": cat::cat_fidelity_bound(vp.printed.probability)? },
                "hamiltonian": { "variant": Variant::Hamiltonian, "bound": cat::cat_fidelity_bound(vp.hamiltonian.probability)? },
            });
            (g.alpha, g.chi)
        }
        _ => {
            let (Some(al), Some(chi)) = (a.alpha, a.chi) else {
                return Err(Failure("either --alpha and --chi or --beta0 with --duration and --detuning".into()));
            };
            if let Some(pj) = a.p_jump {
                result["fidelity_bound"] = json!(cat::cat_fidelity_bound(pj)?);
            }
            (al.0, chi)
        }
    };
    let gate = cat::conditional_phase(chi, alpha, &AtomQubit::plus())?;
    let heralded = cat::project_plus(&gate);
    let state = cat::cat_output(alpha, chi);
    let overlap = cat::coherent_overlap(alpha * Complex64::from_polar(1.0, -chi), alpha);
    result["alpha"] = serde_json::to_value(alpha)?;
    result["chi"] = json!(chi);
    result["weak_regime"] = json!(gate.weak_regime);
    result["overlap"] = serde_json::to_value(overlap)?;
    result["overlap_abs"] = json!(overlap.norm());
    result["cat_norm_sqr"] = json!(state.norm_sqr);
    result["distinguishability"] = json!(state.distinguishability);
    result["heralded_norm_sqr"] = json!(heralded.norm_sqr);
    let csv = one_row(
        "chi,re_alpha,im_alpha,overlap_abs,cat_norm_sqr",
        &[chi, alpha.re, alpha.im, overlap.norm(), state.norm_sqr],
    );
    Ok(Outcome { result, csv: Some(csv) })
}

#[derive(Args, Debug, Serialize)]
pub struct OracleArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub phys: Physical,
    /// Drive amplitude beta0 (`re` or `re,im`)
    #[arg(long)]
    pub beta0: Cplx,
    /// Also integrate from the ground state for this long
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duration: Option<f64>,
    /// Integrator step [default: a fortieth of the fastest period]
    #[arg(long, requires = "duration")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: Output,
}

struct OraclePoint {
    steady: DensityMatrix2,
    output: Complex64,
    theta: Option<f64>,
}

fn oracle_point(p: &PhysicalParams, b: Complex64) -> Result<OraclePoint, Failure> {
    Ok(OraclePoint {
        steady: bloch::bloch_steady_state(p, b)?,
        output: bloch::oracle_output_amplitude(p, b)?,
        theta: dressed::mixing_angle(p, b.norm()).ok(),
    })
}

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        (a - b).abs()
    } else {
        ((a - b) / b).abs()
    }
}

pub fn oracle(a: &OracleArgs) -> Result<Outcome, Failure> {
    let p = a.phys.params()?;
    let b = a.beta0.0;
    let pt = oracle_point(&p, b)?;
    let dressed_ee = pt.theta.map(|t| (0.5 * t).sin().powi(2));
    let phase = if b.norm() > 0.0 { Some((pt.output / b).arg()) } else { None };
    let mut result = json!({
        "steady_state": pt.steady,
        "rho_ee": pt.steady.rho_ee(),
        "rho_ee_dressed": dressed_ee,
        "rho_ee_rel_error": dressed_ee.map(|d| rel(pt.steady.rho_ee(), d)),
        "output_amplitude": pt.output,
        "output_phase": phase,
        "linear_phase": -p.linear_phase(),
    });
    let csv = if let Some(duration) = a.duration {
        let fastest = dressed::dressed_splitting(&p, b.norm()).max(2.0 * p.gamma);
        let dt = a.dt.unwrap_or(0.5 * bloch::MAX_STEP_PHASE / fastest);
        let env = PulseEnvelope::constant(b, duration, duration)?;
        let series = bloch::bloch_evolve(&DensityMatrix2::ground(), &env, &p, dt)?;
        let last = *series.last().expect("series holds t = 0");
        result["final_state"] = serde_json::to_value(last)?;
        result["distance_to_steady"] = json!((last.0 - pt.steady.0).norm());
        let mut buf = Vec::new();
        series.write_csv(&mut buf)?;
        String::from_utf8(buf).expect("CSV is ASCII")
    } else {
        one_row(
            "rho_ee,re_rho_ge,im_rho_ge,re_beta_out,im_beta_out",
            &[pt.steady.rho_ee(), pt.steady.rho_ge().re, pt.steady.rho_ge().im, pt.output.re, pt.output.im],
        )
    };
    Ok(Outcome { result, csv: Some(csv) })
}

#[derive(Args, Debug, Serialize)]
pub struct SweepArgs {
    /// Dipole relaxation rate
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    /// Detunings to scan (comma-separated)
    #[arg(long, default_value = "50,100,500")]
    pub detunings: List,
    /// Real drive amplitudes to scan (comma-separated)
    #[arg(long, default_value = "0.1,1")]
    pub betas: List,
    /// Worker threads [default: all cores]; results do not depend on it
    #[arg(long)]
    #[serde(skip)]
    pub threads: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: Output,
}

#[derive(Serialize)]
struct SweepRow {
    detuning: f64,
    beta0: f64,
    theta: Option<f64>,
    rho_ee: f64,
    rho_ee_dressed: Option<f64>,
    rho_ee_rel_error: Option<f64>,
    output_phase: Option<f64>,
    linear_phase: f64,
    phase_rel_error: Option<f64>,
    rate_printed: shift::InstantaneousRate,
    rate_hamiltonian: shift::InstantaneousRate,
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn sweep(a: &SweepArgs) -> Result<Outcome, Failure> {
    let points: Vec<(f64, f64)> = a
        .detunings
        .0
        .iter()
        .flat_map(|&d| a.betas.0.iter().map(move |&b| (d, b)))
        .collect();
    let rows = in_pool(a.threads, || {
        points
            .par_iter()
            .map(|&(d, bm)| {
                let p = PhysicalParams::new(a.gamma, d)?;
                let b = Complex64::new(bm, 0.0);
                let pt = oracle_point(&p, b)?;
                let dressed_ee = pt.theta.map(|t| (0.5 * t).sin().powi(2));
                let phase = (bm != 0.0).then(|| (pt.output / b).arg());
                let lin = -p.linear_phase();
                Ok(SweepRow {
                    detuning: d,
                    beta0: bm,
                    theta: pt.theta,
                    rho_ee: pt.steady.rho_ee(),
                    rho_ee_dressed: dressed_ee,
                    rho_ee_rel_error: dressed_ee.map(|x| rel(pt.steady.rho_ee(), x)),
                    output_phase: phase,
                    linear_phase: lin,
                    phase_rel_error: phase.map(|x| rel(x, lin)),
                    rate_printed: shift::instantaneous_jump_rate(&p, b, Variant::Printed)?,
                    rate_hamiltonian: shift::instantaneous_jump_rate(&p, b, Variant::Hamiltonian)?,
                })
            })
            .collect::<Result<Vec<_>, Failure>>()
    })??;
    let mut csv = String::from(
        "detuning,beta0,theta,rho_ee,rho_ee_dressed,output_phase,linear_phase,rate_printed,rate_hamiltonian\n",
    );
    for r in &rows {
        writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{}",
            r.detuning,
            r.beta0,
            opt(r.theta),
            r.rho_ee,
            opt(r.rho_ee_dressed),
            opt(r.output_phase),
            r.linear_phase,
            r.rate_printed.rate,
            r.rate_hamiltonian.rate
        )
        .unwrap();
    }
    Ok(Outcome {
        result: json!({ "rows": rows }),
        csv: Some(csv),
    })
}
