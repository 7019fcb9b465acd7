//! Periodic channels and convex combinations of memoryless channels.
//!
//! Every branch must expose a χ(a) curve, so that one antipodal pair
//! parameter `a` serves all branches at once. Branches without one (generic
//! Kraus maps) are rejected.

use serde::Serialize;

use crate::channels::Channel;
use crate::error::{Error, Result};
use crate::optimize::{check_concave, maximize_concave_1d, CapacityResult, Method, DEFAULT_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MemoryKind {
    Periodic,
    ConvexCombination,
}

#[derive(Debug, Clone)]
pub struct MemorySpec {
    kind: MemoryKind,
    branches: Vec<Channel>,
    /// Mixing probabilities of a convex combination. Accepted and validated,
    /// but the capacity does not depend on them.
    weights: Option<Vec<f64>>,
}

impl MemorySpec {
    pub fn new(kind: MemoryKind, branches: Vec<Channel>) -> Result<Self> {
        if branches.is_empty() {
            return Err(Error::InvalidParameter(
                "a memory channel needs at least one branch".into(),
            ));
        }
        if let Some(bad) = branches.iter().find(|c| !c.has_chi_curve()) {
            return Err(bad.unsupported("memory branches must have a χ(a) curve"));
        }
        Ok(Self {
            kind,
            branches,
            weights: None,
        })
    }

    pub fn periodic(branches: Vec<Channel>) -> Result<Self> {
        Self::new(MemoryKind::Periodic, branches)
    }

    pub fn convex(branches: Vec<Channel>) -> Result<Self> {
        Self::new(MemoryKind::ConvexCombination, branches)
    }

    pub fn with_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        if self.kind != MemoryKind::ConvexCombination {
            return Err(Error::InvalidParameter(
                "weights apply only to convex combinations".into(),
            ));
        }
        if weights.len() != self.branches.len() {
            return Err(Error::InvalidParameter(format!(
                "{} weights for {} branches",
                weights.len(),
                self.branches.len()
            )));
        }
        let total: f64 = weights.iter().sum();
        if weights.iter().any(|w| !(*w >= 0.0)) || (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "weights {weights:?} are not a distribution"
            )));
        }
        self.weights = Some(weights);
        Ok(self)
    }

    pub fn kind(&self) -> MemoryKind {
        self.kind
    }

    pub fn branches(&self) -> &[Channel] {
        &self.branches
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    fn expect_kind(&self, kind: MemoryKind) -> Result<()> {
        if self.kind == kind {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "operation needs a {kind:?} spec, got {:?}",
                self.kind
            )))
        }
    }

    fn chi_values(&self, a: f64) -> impl Iterator<Item = f64> + '_ {
        self.branches
            .iter()
            .map(move |c| c.chi(a).unwrap_or(f64::NAN))
    }

    fn mean_chi(&self, a: f64) -> f64 {
        self.chi_values(a).sum::<f64>() / self.branches.len() as f64
    }

    fn min_chi(&self, a: f64) -> f64 {
        self.chi_values(a).fold(f64::INFINITY, f64::min)
    }
}

fn maximize_guarded<F: Fn(f64) -> f64>(f: F, tol: f64) -> Result<CapacityResult> {
    check_concave(&f, 0.0, 1.0)?;
    let m = maximize_concave_1d(&f, 0.0, 1.0, tol)?;
    Ok(CapacityResult {
        a_star: m.argmax,
        capacity_bits: m.max,
        iterations: m.iterations,
        residual: m.bracket,
        method: Method::GoldenSection,
        closed_form: None,
        note: None,
    })
}

/// `max_a (1/L) Σ χ_i(a)`.
pub fn periodic_capacity(spec: &MemorySpec) -> Result<CapacityResult> {
    periodic_capacity_with_tol(spec, DEFAULT_TOL)
}

pub fn periodic_capacity_with_tol(spec: &MemorySpec, tol: f64) -> Result<CapacityResult> {
    spec.expect_kind(MemoryKind::Periodic)?;
    maximize_guarded(|a| spec.mean_chi(a), tol)
}

/// Average of the branch capacities.
pub fn periodic_capacity_upper(spec: &MemorySpec) -> Result<f64> {
    let caps = branch_capacities(spec)?;
    Ok(caps.iter().map(|c| c.capacity_bits).sum::<f64>() / caps.len() as f64)
}

fn branch_capacities(spec: &MemorySpec) -> Result<Vec<CapacityResult>> {
    spec.branches
        .iter()
        .map(|c| c.capacity(DEFAULT_TOL))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterchangeReport {
    pub c_lower: f64,
    pub c_upper: f64,
    pub gap: f64,
    pub a_star_joint: f64,
    pub a_star_per_branch: Vec<f64>,
}

/// Compares the periodic capacity with the average of branch capacities.
pub fn interchange_report(spec: &MemorySpec) -> Result<InterchangeReport> {
    let joint = periodic_capacity(spec)?;
    let caps = branch_capacities(spec)?;
    let c_upper = caps.iter().map(|c| c.capacity_bits).sum::<f64>() / caps.len() as f64;
    Ok(InterchangeReport {
        c_lower: joint.capacity_bits,
        c_upper,
        gap: c_upper - joint.capacity_bits,
        a_star_joint: joint.a_star,
        a_star_per_branch: caps.iter().map(|c| c.a_star).collect(),
    })
}

/// `max_a min_i χ_i(a)`. Mixing weights play no role.
pub fn convex_combination_capacity(spec: &MemorySpec) -> Result<CapacityResult> {
    convex_combination_capacity_with_tol(spec, DEFAULT_TOL)
}

pub fn convex_combination_capacity_with_tol(spec: &MemorySpec, tol: f64) -> Result<CapacityResult> {
    spec.expect_kind(MemoryKind::ConvexCombination)?;
    maximize_guarded(|a| spec.min_chi(a), tol)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinMaxDiagnostic {
    /// `max_a min(χ₁, χ₂)`.
    pub sup_min: f64,
    /// `min(max_a χ₁, max_a χ₂)`.
    pub min_sup: f64,
    /// Interior points of `(0, 1)` where the two curves cross.
    pub crossings: Vec<f64>,
}

const CROSSING_GRID: usize = 2000;

/// Sup-of-min against min-of-sup for a two-branch convex combination.
pub fn minmax_diagnostic(spec: &MemorySpec) -> Result<MinMaxDiagnostic> {
    spec.expect_kind(MemoryKind::ConvexCombination)?;
    let [first, second] = spec.branches() else {
        return Err(Error::InvalidParameter(format!(
            "min-max diagnostic needs exactly 2 branches, got {}",
            spec.branches.len()
        )));
    };
    let sup_min = convex_combination_capacity(spec)?.capacity_bits;
    let min_sup = first
        .capacity(DEFAULT_TOL)?
        .capacity_bits
        .min(second.capacity(DEFAULT_TOL)?.capacity_bits);
    let diff =
        |a: f64| -> f64 { first.chi(a).unwrap_or(f64::NAN) - second.chi(a).unwrap_or(f64::NAN) };
    Ok(MinMaxDiagnostic {
        sup_min,
        min_sup,
        crossings: crossings(diff, CROSSING_GRID)?,
    })
}

/// Sign changes of `f` on the interior grid of `(0, 1)`, refined by bisection.
fn crossings<F: Fn(f64) -> f64>(f: F, n: usize) -> Result<Vec<f64>> {
    let grid = |i: usize| i as f64 / n as f64;
    let mut out = Vec::new();
    let mut prev = (grid(1), f(grid(1)));
    for i in 2..n {
        let x = grid(i);
        let fx = f(x);
        if fx.is_nan() {
            return Err(Error::Numeric(format!("χ difference is NaN at a = {x}")));
        }
        if prev.1 != 0.0 && fx != 0.0 && prev.1.signum() != fx.signum() {
            let (mut lo, mut hi) = (prev.0, x);
            let lo_sign = prev.1.signum();
            while hi - lo > 1e-13 {
                let mid = 0.5 * (lo + hi);
                if f(mid).signum() == lo_sign {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        prev = (x, fx);
    }
    Ok(out)
}
