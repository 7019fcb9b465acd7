//! The Holevo quantity and its single-parameter reductions.
//!
//! For amplitude damping, generalised amplitude damping and depolarising
//! channels, replacing every ensemble state by itself and its mirror image
//! (`b ↦ −b`, half the weight each) never lowers χ. Combined with convexity of
//! the output entropy in `a`, the optimum reduces to the equiprobable pair
//! `{ρ_a, ρ_a′}` and χ becomes a concave function of `a` alone:
//!
//! ```text
//! χ(a) = H(top-left entry of Φ(ρ_a)) − S(Φ(ρ_a))
//! ```
//!
//! The first term needs no diagonalisation because the averaged output of the
//! pair is diagonal. Values are in bits; derivatives are taken in nats and
//! divided by `ln 2` at the end.

use serde::Serialize;
use std::f64::consts::LN_2;

use crate::channels::{output_eigs_ad, output_eigs_gad, KrausSet, QubitChannel};
use crate::error::{Error, Result};
use crate::qstate::{
    h2, von_neumann_entropy, DensityMatrix, Ensemble, PureQubit, MAX_ENSEMBLE_SIZE,
};

/// One sample of a χ(a) curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChiCurvePoint {
    pub a: f64,
    pub chi: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_chi: Option<f64>,
}

/// `S(Σ p_j Φ(ρ_j)) − Σ p_j S(Φ(ρ_j))`, clamped below at zero.
pub fn holevo_quantity(channel: &dyn QubitChannel, ensemble: &Ensemble) -> f64 {
    holevo_with_kraus(&channel.kraus(), ensemble.entries())
}

pub(crate) fn holevo_with_kraus(kraus: &KrausSet, entries: &[(f64, PureQubit)]) -> f64 {
    let mut outputs = [DensityMatrix::maximally_mixed(); MAX_ENSEMBLE_SIZE];
    let mut second = 0.0;
    for (slot, (p, state)) in outputs.iter_mut().zip(entries) {
        *slot = kraus.apply(&state.density());
        second += p * von_neumann_entropy(slot);
    }
    let average = DensityMatrix::mixture(
        entries
            .iter()
            .zip(outputs.iter())
            .map(|((p, _), out)| (*p, out)),
    );
    (von_neumann_entropy(&average) - second).max(0.0)
}

/// Replaces each `(p_j, ρ_j)` by `(p_j/2, ρ_j)` and `(p_j/2, ρ_j′)`.
///
/// At most two input states are accepted so the result respects the
/// four-state cap.
pub fn antipodalize(ensemble: &Ensemble) -> Result<Ensemble> {
    if ensemble.len() > MAX_ENSEMBLE_SIZE / 2 {
        return Err(Error::InvalidEnsemble(format!(
            "cannot antipodalize {} states without exceeding {MAX_ENSEMBLE_SIZE}",
            ensemble.len()
        )));
    }
    let entries = ensemble
        .entries()
        .iter()
        .flat_map(|(p, s)| [(p / 2.0, *s), (p / 2.0, s.mirror())])
        .collect();
    Ensemble::new(entries)
}

/// `ln((1 + x)/(1 − x)) / x`, with `1 − x²` passed in separately so that the
/// logarithm stays accurate as `x → 1`. Tends to 2 as `x → 0`.
fn log_ratio_over_x(x: f64, one_minus_x_sq: f64) -> f64 {
    if x < 1e-3 {
        let x2 = x * x;
        2.0 * (1.0 + x2 * (1.0 / 3.0 + x2 * (1.0 / 5.0 + x2 / 7.0)))
    } else if one_minus_x_sq <= 0.0 {
        f64::INFINITY
    } else {
        (2.0 * x.ln_1p() - one_minus_x_sq.ln()) / x
    }
}

/// `(ln((1 + x)/(1 − x))/x − 2) / x²`, finite at `x = 0` (limit 2/3).
fn log_ratio_excess(x: f64, one_minus_x_sq: f64) -> f64 {
    if x < 1e-2 {
        let x2 = x * x;
        2.0 * (1.0 / 3.0 + x2 * (1.0 / 5.0 + x2 * (1.0 / 7.0 + x2 * (1.0 / 9.0 + x2 / 11.0))))
    } else {
        (log_ratio_over_x(x, one_minus_x_sq) - 2.0) / (x * x)
    }
}

/// `ln((1 + x)/(1 − x)) ≥ 2x` on `[0, 1)`; exposed for the inequality check
/// behind convexity of the output entropy.
pub fn log_ratio(x: f64) -> f64 {
    ((1.0 + x) / (1.0 - x)).ln()
}

/// χ of the antipodal pair through amplitude damping:
/// `H(a + (1 − a)γ) − H((1 + x)/2)`.
pub fn chi_ad(gamma: f64, a: f64) -> f64 {
    let first = h2(a + (1.0 - a) * gamma);
    (first - output_entropy_ad(gamma, a)).max(0.0)
}

/// Output entropy `S(a) = S(Φ_AD(ρ_a))` for a real pure input.
pub fn output_entropy_ad(gamma: f64, a: f64) -> f64 {
    h2(output_eigs_ad(gamma, a).1)
}

fn check_open_unit(what: &'static str, v: f64) -> Result<f64> {
    if (0.0..1.0).contains(&v) {
        Ok(v)
    } else {
        Err(Error::Domain {
            what,
            value: v,
            domain: "[0, 1)",
        })
    }
}

/// `dχ_AD/da` in bits:
///
/// ```text
/// [(1 − γ) ln((1 − γ)(1 − a)/(a + γ(1 − a))) + (2γ(1 − γ)(1 − a)/x) ln((1 + x)/(1 − x))] / ln 2
/// ```
///
/// Diverges to −∞ at `a = 1`, which is therefore excluded.
pub fn chi_ad_prime(gamma: f64, a: f64) -> Result<f64> {
    let gamma = check_open_unit("gamma", gamma)?;
    let a = check_open_unit("a", a)?;
    let u = 1.0 - a;
    let c = gamma * (1.0 - gamma);
    let first = (1.0 - gamma) * ((1.0 - gamma) * u / (a + gamma * u)).ln();
    if c == 0.0 {
        return Ok(first / LN_2);
    }
    let x = crate::channels::ad_x(gamma, a);
    let second = 2.0 * c * u * log_ratio_over_x(x, 4.0 * c * u * u);
    Ok((first + second) / LN_2)
}

/// Analytic `S''(a)` of the amplitude-damping output entropy, in bits:
///
/// ```text
/// S''(a) ln 2 = (2γ(1 − γ)/x²) ((1/x) ln((1 + x)/(1 − x)) − 2)
/// ```
///
/// The bracket vanishes like `x²` so the expression has the finite limit
/// `4γ(1 − γ)/(3 ln 2)` at `x = 0` (reached only for `γ = ½, a = 0`).
pub fn output_entropy_ad_second(gamma: f64, a: f64) -> Result<f64> {
    crate::error::check_unit("gamma", gamma)?;
    let a = check_open_unit("a", a)?;
    let c = gamma * (1.0 - gamma);
    if c == 0.0 {
        return Ok(0.0);
    }
    let u = 1.0 - a;
    let x = crate::channels::ad_x(gamma, a);
    Ok(2.0 * c * log_ratio_excess(x, 4.0 * c * u * u) / LN_2)
}

/// χ of the antipodal pair through generalised amplitude damping:
/// `H(a(1 − γ) + pγ) − S(Φ_GAD(ρ_a))`.
pub fn chi_gad(gamma: f64, p: f64, a: f64) -> f64 {
    let first = h2(a * (1.0 - gamma) + p * gamma);
    (first - output_entropy_gad(gamma, p, a)).max(0.0)
}

pub fn output_entropy_gad(gamma: f64, p: f64, a: f64) -> f64 {
    h2(output_eigs_gad(gamma, p, a).1)
}

fn gad_x_and_gap(gamma: f64, p: f64, a: f64) -> (f64, f64) {
    let v = a - p;
    let one_minus_x_sq = 4.0 * (gamma * (1.0 - gamma) * v * v + gamma * p * (1.0 - p));
    ((1.0 - one_minus_x_sq).max(0.0).sqrt(), one_minus_x_sq)
}

/// `S'(a)` for the generalised channel, in bits:
/// `S'(a) ln 2 = −(2γ(1 − γ)(p − a)/x) ln((1 + x)/(1 − x))`.
pub fn output_entropy_gad_prime(gamma: f64, p: f64, a: f64) -> f64 {
    let (x, gap) = gad_x_and_gap(gamma, p, a);
    2.0 * gamma * (1.0 - gamma) * (a - p) * log_ratio_over_x(x, gap) / LN_2
}

/// `S''(a)` for the generalised channel, in bits, with `c = 4γp(1 − p)`:
///
/// ```text
/// S''(a) ln 2 = (2γ(1 − γ)/x³) {(1 − c) ln((1 + x)/(1 − x)) − 2x(1 − c − x²)/(1 − x²)}
/// ```
pub fn output_entropy_gad_second(gamma: f64, p: f64, a: f64) -> Result<f64> {
    crate::error::check_unit("gamma", gamma)?;
    crate::error::check_unit("p", p)?;
    crate::error::check_unit("a", a)?;
    let k = gamma * (1.0 - gamma);
    if k == 0.0 {
        return Ok(0.0);
    }
    let c = 4.0 * gamma * p * (1.0 - p);
    let (x, gap) = gad_x_and_gap(gamma, p, a);
    if gap <= 0.0 {
        return Err(Error::Domain {
            what: "a",
            value: a,
            domain: "points with a mixed output",
        });
    }
    // Same expression regrouped as (1 − c)(L/x − 2)/x² + 2c/(1 − x²), finite at x = 0.
    let value = (1.0 - c) * log_ratio_excess(x, gap) + 2.0 * c / gap;
    Ok(2.0 * k * value / LN_2)
}

/// χ of the antipodal pair through the depolarising channel:
/// `H((1 − λ)a + λ/2) − H(λ/2)`.
pub fn chi_dep(lambda: f64, a: f64) -> f64 {
    (h2((1.0 - lambda) * a + lambda / 2.0) - h2(lambda / 2.0)).max(0.0)
}

/// Samples a channel's χ(a) curve at `n ≥ 2` evenly spaced points of `[0, 1]`.
pub fn chi_curve(channel: &dyn QubitChannel, n: usize) -> Result<Vec<ChiCurvePoint>> {
    if n < 2 {
        return Err(Error::InvalidParameter(
            "need at least two sample points".into(),
        ));
    }
    (0..n)
        .map(|i| {
            let a = i as f64 / (n - 1) as f64;
            Ok(ChiCurvePoint {
                a,
                chi: channel.chi(a)?,
                d_chi: None,
            })
        })
        .collect()
}
