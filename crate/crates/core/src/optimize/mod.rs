//! One-dimensional concave maximisation and per-family capacities.

mod oracle;

pub use oracle::{oracle_capacity, OracleConfig, OracleResult};

use serde::Serialize;

use crate::channels::{Channel, QubitChannel};
use crate::error::{check_unit, Error, Result};
use crate::holevo::{chi_ad, chi_ad_prime, chi_dep};
use crate::qstate::h2;

/// Default bracket-width tolerance for 1-D searches.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Smallest tolerance the derivative bisection accepts.
pub const MIN_TOL: f64 = 1e-14;

/// Upper end of the bisection bracket; `χ'` has a log singularity at `a = 1`.
pub const BISECTION_UPPER: f64 = 1.0 - 1e-9;

const MAX_ITERATIONS: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    DerivativeBisection,
    GoldenSection,
    /// Parameter at an endpoint where the value is known exactly.
    ClosedForm,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::DerivativeBisection => "derivative-bisection",
            Method::GoldenSection => "golden-section",
            Method::ClosedForm => "closed-form",
        }
    }
}

/// Optimiser output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapacityResult {
    pub a_star: f64,
    pub capacity_bits: f64,
    pub iterations: usize,
    /// Final bracket width.
    pub residual: f64,
    pub method: Method,
    /// Analytic capacity, for families that have one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CapacityResult {
    fn new(
        a_star: f64,
        capacity_bits: f64,
        iterations: usize,
        residual: f64,
        method: Method,
    ) -> Self {
        Self {
            a_star,
            capacity_bits,
            iterations,
            residual,
            method,
            closed_form: None,
            note: None,
        }
    }
}

/// Location and value of a 1-D maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    pub argmax: f64,
    pub max: f64,
    pub iterations: usize,
    pub bracket: f64,
}

/// Golden-section search for the maximum of a concave `f` on `[lo, hi]`.
///
/// Stops once the bracket is narrower than `tol`. Both endpoints are also
/// evaluated, so a maximum sitting on the boundary is returned exactly.
pub fn maximize_concave_1d<F>(f: F, lo: f64, hi: f64, tol: f64) -> Result<Maximum>
where
    F: Fn(f64) -> f64,
{
    if !(lo < hi) {
        return Err(Error::InvalidParameter(format!(
            "empty interval [{lo}, {hi}]"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance {tol} must be positive"
        )));
    }
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut iterations = 0;
    while b - a > tol && iterations < MAX_ITERATIONS {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        iterations += 1;
    }
    let mid = 0.5 * (a + b);
    let candidates = [(mid, f(mid)), (c, fc), (d, fd), (lo, f(lo)), (hi, f(hi))];
    if candidates.iter().any(|(_, v)| v.is_nan()) {
        return Err(Error::Numeric("objective returned NaN".into()));
    }
    let (argmax, max) = candidates
        .into_iter()
        .fold((mid, f64::NEG_INFINITY), |best, cand| {
            if cand.1 > best.1 {
                cand
            } else {
                best
            }
        });
    Ok(Maximum {
        argmax,
        max,
        iterations,
        bracket: b - a,
    })
}

/// Bisection for a sign change of `f` from positive at `lo` to non-positive at
/// `hi`. Returns `None` when the endpoints do not bracket a root.
pub fn bisect_decreasing<F>(
    f: F,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> Result<Option<(f64, usize, f64)>>
where
    F: Fn(f64) -> Result<f64>,
{
    let (flo, fhi) = (f(lo)?, f(hi)?);
    if flo.is_nan() || fhi.is_nan() {
        return Err(Error::Numeric("derivative returned NaN".into()));
    }
    if !(flo > 0.0 && fhi <= 0.0) {
        return Ok(None);
    }
    let mut iterations = 0;
    while hi - lo > tol && iterations < MAX_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if fm.is_nan() {
            return Err(Error::Numeric(format!("derivative is NaN at {mid}")));
        }
        if fm > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    Ok(Some((0.5 * (lo + hi), iterations, hi - lo)))
}

/// Number of sample points used by [`check_concave`].
pub const CONCAVITY_SAMPLES: usize = 129;

/// Slack on second differences in [`check_concave`].
pub const CONCAVITY_SLACK: f64 = 1e-10;

/// Rejects objectives whose second differences on an even grid are positive
/// beyond [`CONCAVITY_SLACK`]. Golden-section output is only trusted after
/// this passes.
pub fn check_concave<F>(f: F, lo: f64, hi: f64) -> Result<()>
where
    F: Fn(f64) -> f64,
{
    let n = CONCAVITY_SAMPLES;
    let values: Vec<f64> = (0..n)
        .map(|i| f(lo + (hi - lo) * i as f64 / (n - 1) as f64))
        .collect();
    for (i, w) in values.windows(3).enumerate() {
        let second = w[0] - 2.0 * w[1] + w[2];
        if !(second <= CONCAVITY_SLACK) {
            let at = lo + (hi - lo) * (i + 1) as f64 / (n - 1) as f64;
            return Err(Error::Numeric(format!(
                "objective is not concave near a = {at} (second difference {second:e})"
            )));
        }
    }
    Ok(())
}

fn check_tol(tol: f64) -> Result<f64> {
    if tol.is_finite() && tol >= MIN_TOL {
        Ok(tol)
    } else {
        Err(Error::Domain {
            what: "tol",
            value: tol,
            domain: ">= 1e-14",
        })
    }
}

/// Capacity of amplitude damping by bisection on `χ'_AD` over
/// `[0.5, 1 − 1e-9]`.
///
/// `χ'(½) > 0` for every `γ ∈ (0, 1)`, so the maximiser is at least ½. If the
/// bracket does not show a sign change the search falls back to golden
/// section over `[0, 1]`.
pub fn solve_amax_ad(gamma: f64, tol: f64) -> Result<CapacityResult> {
    let gamma = check_unit("gamma", gamma)?;
    let tol = check_tol(tol)?;
    if gamma == 0.0 {
        return Ok(CapacityResult::new(0.5, 1.0, 0, 0.0, Method::ClosedForm));
    }
    if gamma == 1.0 {
        let mut out = CapacityResult::new(0.5, 0.0, 0, 0.0, Method::ClosedForm);
        out.note = Some("every input decays to |0⟩; a* is arbitrary and reported as 0.5".into());
        return Ok(out);
    }
    match bisect_decreasing(|a| chi_ad_prime(gamma, a), 0.5, BISECTION_UPPER, tol)? {
        Some((a_star, iterations, width)) => Ok(CapacityResult::new(
            a_star,
            chi_ad(gamma, a_star),
            iterations,
            width,
            Method::DerivativeBisection,
        )),
        None => {
            let m = maximize_concave_1d(|a| chi_ad(gamma, a), 0.0, 1.0, tol)?;
            let mut out = CapacityResult::new(
                m.argmax,
                m.max,
                m.iterations,
                m.bracket,
                Method::GoldenSection,
            );
            out.note = Some("no sign change of χ' on [0.5, 1); fell back to golden section".into());
            Ok(out)
        }
    }
}

/// Golden-section maximisation of a channel's χ(a) after a concavity check.
pub fn golden_capacity<C>(channel: &C, tol: f64) -> Result<CapacityResult>
where
    C: QubitChannel + ?Sized,
{
    if !channel.has_chi_curve() {
        return Err(channel.unsupported("no single-parameter χ(a) reduction"));
    }
    let tol = check_tol(tol)?;
    let f = |a: f64| channel.chi(a).unwrap_or(f64::NAN);
    check_concave(f, 0.0, 1.0)?;
    let m = maximize_concave_1d(f, 0.0, 1.0, tol)?;
    Ok(CapacityResult::new(
        m.argmax,
        m.max,
        m.iterations,
        m.bracket,
        Method::GoldenSection,
    ))
}

/// Agreement required between the numeric and closed-form depolarising
/// capacities.
pub const DEPOLARIZING_AGREEMENT: f64 = 1e-9;

/// Depolarising capacity: numeric maximisation of `χ_dep(λ, ·)` checked
/// against `1 − H(λ/2)`.
pub fn depolarizing_capacity(lambda: f64, tol: f64) -> Result<CapacityResult> {
    let tol = check_tol(tol)?;
    let closed = 1.0 - h2(lambda / 2.0);
    if lambda == 1.0 {
        let mut out = CapacityResult::new(0.5, 0.0, 0, 0.0, Method::ClosedForm);
        out.closed_form = Some(closed);
        out.note = Some("every output is I/2; a* is arbitrary and reported as 0.5".into());
        return Ok(out);
    }
    let f = |a: f64| chi_dep(lambda, a);
    check_concave(f, 0.0, 1.0)?;
    let m = maximize_concave_1d(f, 0.0, 1.0, tol)?;
    if (m.max - closed).abs() > DEPOLARIZING_AGREEMENT {
        return Err(Error::Numeric(format!(
            "depolarising capacity mismatch: numeric {} vs closed form {closed}",
            m.max
        )));
    }
    let mut out = CapacityResult::new(
        m.argmax,
        m.max,
        m.iterations,
        m.bracket,
        Method::GoldenSection,
    );
    out.closed_form = Some(closed);
    Ok(out)
}

/// Capacity of a single channel with the default tolerance.
pub fn capacity(channel: &dyn QubitChannel) -> Result<CapacityResult> {
    channel.capacity(DEFAULT_TOL)
}

/// Same as [`capacity`] for a shared handle.
pub fn capacity_of(channel: &Channel) -> Result<CapacityResult> {
    channel.capacity(DEFAULT_TOL)
}

/// Angles between the optimal pair `|σ±⟩ = (√a, ±√(1 − a))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairAngles {
    /// `arccos |⟨σ₊|σ₋⟩|` in degrees.
    pub hilbert_deg: f64,
    /// Angle between the Bloch vectors, in degrees (twice the above).
    pub bloch_deg: f64,
}

pub fn optimal_pair_angles(a_star: f64) -> PairAngles {
    let overlap = (2.0 * a_star - 1.0).abs().min(1.0);
    let hilbert = overlap.acos().to_degrees();
    PairAngles {
        hilbert_deg: hilbert,
        bloch_deg: 2.0 * hilbert,
    }
}
