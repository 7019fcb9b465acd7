//! Multi-start direct search over pure-state ensembles.
//!
//! Independent of the χ(a) reduction: it only evaluates the Holevo quantity
//! through the channel's Kraus operators.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::channels::{KrausSet, QubitChannel};
use crate::error::{Error, Result};
use crate::holevo::holevo_with_kraus;
use crate::qstate::{Ensemble, PureQubit, Sign, MAX_ENSEMBLE_SIZE};

/// Weights below this are dropped from the reported ensemble.
pub const PRUNE_WEIGHT: f64 = 1e-9;

const MAX_SWEEPS_PER_STEP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleConfig {
    pub num_states: usize,
    pub restarts: usize,
    pub seed: u64,
    pub initial_step: f64,
    pub final_step: f64,
    /// Step multiplier after a sweep with no accepted move.
    pub shrink: f64,
    /// Minimum gain for a move to be accepted.
    pub improvement: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            num_states: MAX_ENSEMBLE_SIZE,
            restarts: 64,
            seed: 0,
            initial_step: 0.1,
            final_step: 1e-6,
            shrink: 0.5,
            improvement: 1e-10,
        }
    }
}

impl OracleConfig {
    pub fn new(num_states: usize, restarts: usize, seed: u64) -> Self {
        Self {
            num_states,
            restarts,
            seed,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(1..=MAX_ENSEMBLE_SIZE).contains(&self.num_states) {
            return Err(Error::InvalidParameter(format!(
                "num_states must be in 1..={MAX_ENSEMBLE_SIZE}, got {}",
                self.num_states
            )));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidParameter(
                "restarts must be at least 1".into(),
            ));
        }
        let steps_ok = self.final_step > 0.0 && self.initial_step >= self.final_step;
        if !steps_ok || !(self.shrink > 0.0 && self.shrink < 1.0) || !(self.improvement >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "bad step schedule: {self:?}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleResult {
    pub chi_hat: f64,
    pub ensemble: Ensemble,
    pub best_restart: usize,
    pub evaluations: u64,
}

#[derive(Debug, Clone)]
struct Point {
    p: Vec<f64>,
    a: Vec<f64>,
    phase: Vec<f64>,
    sign: Vec<Sign>,
}

impl Point {
    fn random(n: usize, rng: &mut ChaCha8Rng) -> Self {
        // Flat Dirichlet via normalised exponentials.
        let mut p: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
        let total: f64 = p.iter().sum();
        p.iter_mut().for_each(|w| *w /= total);
        let a = (0..n).map(|_| rng.gen::<f64>()).collect();
        let phase = (0..n).map(|_| rng.gen::<f64>() * TAU).collect();
        let sign = (0..n)
            .map(|_| {
                if rng.gen::<bool>() {
                    Sign::Plus
                } else {
                    Sign::Minus
                }
            })
            .collect();
        Self { p, a, phase, sign }
    }

    fn entries(&self) -> Vec<(f64, PureQubit)> {
        (0..self.p.len())
            .map(|j| {
                let state = PureQubit::with_phase(self.a[j], self.sign[j], self.phase[j])
                    .expect("a is kept in [0, 1]");
                (self.p[j], state)
            })
            .collect()
    }
}

/// Euclidean projection onto the probability simplex.
fn project_simplex(v: &mut [f64]) {
    let mut sorted = v.to_vec();
    sorted.sort_by(|x, y| y.total_cmp(x));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (i, &u) in sorted.iter().enumerate() {
        cumulative += u;
        let t = (cumulative - 1.0) / (i + 1) as f64;
        if u - t > 0.0 {
            theta = t;
        }
    }
    v.iter_mut().for_each(|x| *x = (*x - theta).max(0.0));
}

struct Run {
    chi: f64,
    point: Point,
    evaluations: u64,
}

fn climb(kraus: &KrausSet, cfg: &OracleConfig, restart: usize) -> Run {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(restart as u64);
    let mut point = Point::random(cfg.num_states, &mut rng);
    let mut evaluations = 1u64;
    let mut best = holevo_with_kraus(kraus, &point.entries());
    let n = cfg.num_states;

    let mut step = cfg.initial_step;
    while step >= cfg.final_step {
        let mut sweeps = 0;
        loop {
            let mut moved = false;
            for coord in 0..3 * n {
                let (kind, j) = (coord / n, coord % n);
                for dir in [1.0, -1.0] {
                    let mut trial = point.clone();
                    match kind {
                        0 => {
                            if n == 1 {
                                continue;
                            }
                            trial.p[j] += dir * step;
                            project_simplex(&mut trial.p);
                        }
                        1 => trial.a[j] = (trial.a[j] + dir * step).clamp(0.0, 1.0),
                        _ => trial.phase[j] = (trial.phase[j] + dir * step * TAU).rem_euclid(TAU),
                    }
                    let value = holevo_with_kraus(kraus, &trial.entries());
                    evaluations += 1;
                    if value > best + cfg.improvement {
                        best = value;
                        point = trial;
                        moved = true;
                        break;
                    }
                }
            }
            sweeps += 1;
            if !moved || sweeps >= MAX_SWEEPS_PER_STEP {
                break;
            }
        }
        step *= cfg.shrink;
    }
    Run {
        chi: best,
        point,
        evaluations,
    }
}

fn pruned_ensemble(point: &Point) -> Result<Ensemble> {
    let kept: Vec<(f64, PureQubit)> = point
        .entries()
        .into_iter()
        .filter(|(w, _)| *w >= PRUNE_WEIGHT)
        .collect();
    let total: f64 = kept.iter().map(|(w, _)| w).sum();
    Ensemble::new(kept.into_iter().map(|(w, s)| (w / total, s)).collect())
}

/// Lower bound on the product-state capacity from a seeded multi-start
/// coordinate search. Restarts run in parallel; the result depends only on
/// the configuration.
pub fn oracle_capacity(channel: &dyn QubitChannel, cfg: &OracleConfig) -> Result<OracleResult> {
    cfg.validate()?;
    let kraus = channel.kraus();
    let runs: Vec<Run> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| climb(&kraus, cfg, r))
        .collect();
    let evaluations = runs.iter().map(|r| r.evaluations).sum();
    let (best_restart, run) = runs
        .iter()
        .enumerate()
        .fold(None::<(usize, &Run)>, |acc, (i, r)| match acc {
            Some((_, b)) if b.chi >= r.chi => acc,
            _ => Some((i, r)),
        })
        .expect("at least one restart");
    if !run.chi.is_finite() {
        return Err(Error::Numeric(
            "oracle produced a non-finite Holevo quantity".into(),
        ));
    }
    let ensemble = pruned_ensemble(&run.point)?;
    let chi_hat = holevo_with_kraus(&kraus, ensemble.entries());
    Ok(OracleResult {
        chi_hat,
        ensemble,
        best_restart,
        evaluations,
    })
}
