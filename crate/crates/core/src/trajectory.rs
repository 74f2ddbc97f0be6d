//! Monte Carlo of the dressed-state jump process.
//!
//! The atom hops between `g'` and `e'` with rates `2 gamma sin^4(theta/2)`
//! (up) and `2 gamma cos^4(theta/2)` (down), where `theta` follows the
//! envelope. Both rates are bounded by `2 gamma`, so jumps are sampled by
//! thinning a homogeneous Poisson stream of that rate; this is exact for
//! piecewise-constant envelopes.
//!
//! Every trajectory owns a ChaCha8 stream `(seed, index)`, so an ensemble
//! gives the same bits whatever the thread count.

use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dressed::{dressed_splitting, jump_rate_down, jump_rate_up, mixing_angle};
use crate::{Error, PhysicalParams, PulseEnvelope, Result};

/// Largest tolerated `|d theta / dt|` per sample, in units of `omega_beta`.
pub const ADIABATIC_LIMIT: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JumpKind {
    Up,
    Down,
}

impl JumpKind {
    pub fn as_str(self) -> &'static str {
        match self {
            JumpKind::Up => "up",
            JumpKind::Down => "down",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DressedLevel {
    #[serde(rename = "g'")]
    Ground,
    #[serde(rename = "e'")]
    Excited,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JumpEvent {
    pub time: f64,
    pub kind: JumpKind,
}

/// One simulated trajectory, starting in `g'`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JumpRecord {
    pub events: Vec<JumpEvent>,
    pub seed: u64,
    pub stream: u64,
    /// Label of the driving envelope.
    pub envelope_id: String,
    pub final_state: DressedLevel,
    pub duration: f64,
    /// Total time spent in `g'`.
    pub time_in_ground: f64,
}

impl JumpRecord {
    pub fn count(&self, kind: JumpKind) -> usize {
        self.events.iter().filter(|e| e.kind == kind).count()
    }

    /// `t_down - t_up` for every completed up/down pair.
    pub fn pair_delays(&self) -> impl Iterator<Item = f64> + '_ {
        self.events
            .windows(2)
            .filter(|w| w[0].kind == JumpKind::Up)
            .map(|w| w[1].time - w[0].time)
    }

    /// Dwell times in `g'` that ended in an up jump.
    pub fn ground_waits(&self) -> Vec<f64> {
        let mut last = 0.0;
        let mut out = Vec::new();
        for e in &self.events {
            match e.kind {
                JumpKind::Up => out.push(e.time - last),
                JumpKind::Down => last = e.time,
            }
        }
        out
    }
}

/// Per-sample jump rates of an envelope plus the adiabaticity verdict.
#[derive(Debug, Clone)]
struct RateTable {
    dt: f64,
    up: Vec<f64>,
    down: Vec<f64>,
    warnings: Vec<String>,
}

impl RateTable {
    fn new(env: &PulseEnvelope, params: &PhysicalParams) -> Result<Self> {
        params.validate()?;
        let theta = env
            .samples
            .iter()
            .map(|b| mixing_angle(params, b.norm()))
            .collect::<Result<Vec<_>>>()?;
        let mut worst: Option<(usize, f64)> = None;
        for k in 1..theta.len() {
            let slope = (theta[k] - theta[k - 1]).abs() / env.dt;
            let omega = dressed_splitting(params, env.samples[k].norm());
            let ratio = slope / omega;
            if ratio > ADIABATIC_LIMIT && worst.is_none_or(|(_, r)| ratio > r) {
                worst = Some((k, ratio));
            }
        }
        let warnings = worst
            .map(|(k, r)| {
                vec![format!(
                    "envelope not adiabatic: |dtheta/dt| reaches {r:.3e} omega_beta at sample {k} (limit {ADIABATIC_LIMIT})"
                )]
            })
            .unwrap_or_default();
        Ok(RateTable {
            dt: env.dt,
            up: theta.iter().map(|&t| jump_rate_up(params.gamma, t)).collect(),
            down: theta.iter().map(|&t| jump_rate_down(params.gamma, t)).collect(),
            warnings,
        })
    }

    fn duration(&self) -> f64 {
        self.up.len() as f64 * self.dt
    }

    fn run(&self, gamma: f64, seed: u64, stream: u64, envelope_id: &str) -> JumpRecord {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        let bound = 2.0 * gamma;
        let end = self.duration();
        let last = self.up.len().saturating_sub(1);
        let mut events = Vec::new();
        let mut state = DressedLevel::Ground;
        let mut entered_ground = 0.0;
        let mut time_in_ground = 0.0;
        let mut t = 0.0;
        if bound > 0.0 {
            loop {
                let wait: f64 = rng.sample(Exp1);
                t += wait / bound;
                if t >= end {
                    break;
                }
                let k = ((t / self.dt) as usize).min(last);
                let rate = match state {
                    DressedLevel::Ground => self.up[k],
                    DressedLevel::Excited => self.down[k],
                };
                let u: f64 = rng.random();
                if u * bound < rate {
                    match state {
                        DressedLevel::Ground => {
                            time_in_ground += t - entered_ground;
                            state = DressedLevel::Excited;
                            events.push(JumpEvent { time: t, kind: JumpKind::Up });
                        }
                        DressedLevel::Excited => {
                            entered_ground = t;
                            state = DressedLevel::Ground;
                            events.push(JumpEvent { time: t, kind: JumpKind::Down });
                        }
                    }
                }
            }
        }
        if state == DressedLevel::Ground {
            time_in_ground += end - entered_ground;
        }
        JumpRecord {
            events,
            seed,
            stream,
            envelope_id: envelope_id.to_owned(),
            final_state: state,
            duration: end,
            time_in_ground,
        }
    }
}

/// A single trajectory together with any adiabaticity warning.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub record: JumpRecord,
    pub warnings: Vec<String>,
}

/// Simulates one trajectory on stream 0 of `seed`.
pub fn simulate_trajectory(env: &PulseEnvelope, params: &PhysicalParams, seed: u64) -> Result<Trajectory> {
    let table = RateTable::new(env, params)?;
    Ok(Trajectory {
        record: table.run(params.gamma, seed, 0, &env.label),
        warnings: table.warnings,
    })
}

/// Aggregates over an ensemble of trajectories.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryStats {
    pub n_trajectories: usize,
    pub total_time: f64,
    pub time_in_ground: f64,
    pub n_up: usize,
    pub n_down: usize,
    /// `n_up / time_in_ground`.
    pub mean_up_rate: f64,
    /// Poisson error `sqrt(n_up) / time_in_ground`.
    pub up_rate_stderr: f64,
    /// Fraction of time spent in `e'`.
    pub excited_occupancy: f64,
    /// Spread of per-trajectory occupancies over `sqrt(n)`; needs two trajectories.
    pub occupancy_stderr: Option<f64>,
    pub pair_delays: Vec<f64>,
    pub warnings: Vec<String>,
}

impl TrajectoryStats {
    fn from_records(records: &[JumpRecord], warnings: Vec<String>) -> Self {
        let n = records.len();
        let total_time: f64 = records.iter().map(|r| r.duration).sum();
        let time_in_ground: f64 = records.iter().map(|r| r.time_in_ground).sum();
        let n_up: usize = records.iter().map(|r| r.count(JumpKind::Up)).sum();
        let n_down: usize = records.iter().map(|r| r.count(JumpKind::Down)).sum();
        let (mean_up_rate, up_rate_stderr) = if time_in_ground > 0.0 {
            (n_up as f64 / time_in_ground, (n_up as f64).sqrt() / time_in_ground)
        } else {
            (0.0, 0.0)
        };
        let excited_occupancy = if total_time > 0.0 {
            1.0 - time_in_ground / total_time
        } else {
            0.0
        };
        let occupancy_stderr = (n >= 2).then(|| {
            let fr: Vec<f64> = records
                .iter()
                .map(|r| 1.0 - r.time_in_ground / r.duration)
                .collect();
            let mean = fr.iter().sum::<f64>() / n as f64;
            let var = fr.iter().map(|f| (f - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            (var / n as f64).sqrt()
        });
        TrajectoryStats {
            n_trajectories: n,
            total_time,
            time_in_ground,
            n_up,
            n_down,
            mean_up_rate,
            up_rate_stderr,
            excited_occupancy,
            occupancy_stderr,
            pair_delays: records.iter().flat_map(|r| r.pair_delays()).collect(),
            warnings,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ensemble {
    pub records: Vec<JumpRecord>,
    pub stats: TrajectoryStats,
}

impl Ensemble {
    /// Jump list as CSV with columns `trajectory_id,time,kind`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "trajectory_id,time,kind")?;
        for r in &self.records {
            for e in &r.events {
                writeln!(w, "{},{},{}", r.stream, e.time, e.kind.as_str())?;
            }
        }
        Ok(())
    }
}

/// Runs `n_runs` trajectories; trajectory `i` uses stream `i` of `master_seed`.
pub fn run_ensemble_records(
    env: &PulseEnvelope,
    params: &PhysicalParams,
    n_runs: usize,
    master_seed: u64,
) -> Result<Ensemble> {
    if n_runs == 0 {
        return Err(Error::domain("n_runs must be at least 1"));
    }
    let table = RateTable::new(env, params)?;
    let records: Vec<JumpRecord> = (0..n_runs as u64)
        .into_par_iter()
        .map(|i| table.run(params.gamma, master_seed, i, &env.label))
        .collect();
    let stats = TrajectoryStats::from_records(&records, table.warnings);
    Ok(Ensemble { records, stats })
}

pub fn run_ensemble(
    env: &PulseEnvelope,
    params: &PhysicalParams,
    n_runs: usize,
    master_seed: u64,
) -> Result<TrajectoryStats> {
    run_ensemble_records(env, params, n_runs, master_seed).map(|e| e.stats)
}

/// Histogram of pair delays with a maximum-likelihood exponential fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DelayHistogram {
    pub t_max: f64,
    pub bin_width: f64,
    pub counts: Vec<u64>,
    /// Delays at or beyond `t_max`.
    pub overflow: u64,
    pub n_pairs: usize,
    /// `n / sum(tau)`.
    pub fitted_rate: Option<f64>,
    pub rate_stderr: Option<f64>,
    /// Normal-approximation 95% interval for the rate.
    pub rate_ci95: Option<(f64, f64)>,
    pub empty: bool,
}

impl DelayHistogram {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum::<u64>() + self.overflow
    }
}

pub fn pair_delay_histogram(stats: &TrajectoryStats, n_bins: usize, t_max: f64) -> Result<DelayHistogram> {
    if n_bins == 0 {
        return Err(Error::domain("histogram needs at least one bin"));
    }
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(Error::domain(format!("t_max must be positive, got {t_max}")));
    }
    let bin_width = t_max / n_bins as f64;
    let mut counts = vec![0u64; n_bins];
    let mut overflow = 0;
    for &d in &stats.pair_delays {
        let k = (d / bin_width) as usize;
        match counts.get_mut(k) {
            Some(c) if d < t_max => *c += 1,
            _ => overflow += 1,
        }
    }
    let n = stats.pair_delays.len();
    let sum: f64 = stats.pair_delays.iter().sum();
    let fit = (n > 0 && sum > 0.0).then(|| {
        let rate = n as f64 / sum;
        let se = rate / (n as f64).sqrt();
        (rate, se)
    });
    Ok(DelayHistogram {
        t_max,
        bin_width,
        counts,
        overflow,
        n_pairs: n,
        fitted_rate: fit.map(|f| f.0),
        rate_stderr: fit.map(|f| f.1),
        rate_ci95: fit.map(|(r, s)| (r - 1.96 * s, r + 1.96 * s)),
        empty: n == 0,
    })
}

/// Drive magnitude `|beta|` that produces mixing angle `theta`.
pub fn beta_for_theta(params: &PhysicalParams, theta: f64) -> Result<f64> {
    params.validate()?;
    if params.omega_delta.is_nan() || params.omega_delta <= 0.0 {
        return Err(Error::domain("mixing angle needs a positive detuning"));
    }
    if params.gamma.is_nan() || params.gamma <= 0.0 {
        return Err(Error::domain("mixing angle needs gamma > 0"));
    }
    if !(0.0..std::f64::consts::FRAC_PI_2).contains(&theta) {
        return Err(Error::domain(format!("theta must lie in [0, pi/2), got {theta}")));
    }
    Ok(params.omega_delta * theta.tan() / (2.0 * (2.0 * params.gamma).sqrt()))
}
