//! Qubit density operators, pure-state parametrisation, Bloch vectors and
//! entropy primitives.
//!
//! A qubit state is stored as the pair `(a, b)` of its top-left (real) and
//! top-right (complex) entries:
//!
//! ```text
//! ρ = [[a, b], [b̄, 1 − a]]
//! ```
//!
//! All entropies are in bits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Mat2, C64};

/// Slack allowed on positivity, normalisation and domain checks.
pub const STATE_SLACK: f64 = 1e-12;

/// Maximum number of pure states an ensemble may hold (d² for a qubit).
pub const MAX_ENSEMBLE_SIZE: usize = 4;

/// Binary entropy in bits, `0·log 0 := 0`.
///
/// Inputs within [`STATE_SLACK`] of `[0, 1]` are clamped; anything further
/// out is a domain error.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(-STATE_SLACK..=1.0 + STATE_SLACK).contains(&p) {
        return Err(Error::Domain {
            what: "p",
            value: p,
            domain: "[0, 1]",
        });
    }
    Ok(h2(p))
}

/// Total version of [`binary_entropy`]: clamps its argument into `[0, 1]`.
pub(crate) fn h2(p: f64) -> f64 {
    let p = p.clamp(0.0, 1.0);
    let q = 1.0 - p;
    let term = |t: f64| if t > 0.0 { -t * t.log2() } else { 0.0 };
    (term(p) + term(q)).clamp(0.0, 1.0)
}

/// A 2×2 density operator `[[a, b], [b̄, 1 − a]]`.
///
/// Trace one and Hermiticity hold by construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrix {
    a: f64,
    b_re: f64,
    b_im: f64,
}

impl DensityMatrix {
    /// Validated constructor: requires `a ∈ [0, 1]` and `|b|² ≤ a(1 − a)`
    /// (both up to [`STATE_SLACK`]).
    pub fn new(a: f64, b: C64) -> Result<Self> {
        if !(-STATE_SLACK..=1.0 + STATE_SLACK).contains(&a) {
            return Err(Error::Domain {
                what: "a",
                value: a,
                domain: "[0, 1]",
            });
        }
        let a = a.clamp(0.0, 1.0);
        if !(b.norm_sqr() <= a * (1.0 - a) + STATE_SLACK) {
            return Err(Error::InvalidParameter(format!(
                "|b|² = {} exceeds a(1 − a) = {}: not positive semidefinite",
                b.norm_sqr(),
                a * (1.0 - a)
            )));
        }
        Ok(Self::from_parts(a, b))
    }

    /// Real off-diagonal convenience constructor.
    pub fn real(a: f64, b: f64) -> Result<Self> {
        Self::new(a, C64::new(b, 0.0))
    }

    pub(crate) fn from_parts(a: f64, b: C64) -> Self {
        Self {
            a,
            b_re: b.re,
            b_im: b.im,
        }
    }

    /// `|0⟩⟨0|`.
    pub fn ground() -> Self {
        Self::from_parts(1.0, C64::new(0.0, 0.0))
    }

    /// `|1⟩⟨1|`.
    pub fn excited() -> Self {
        Self::from_parts(0.0, C64::new(0.0, 0.0))
    }

    /// `I/2`.
    pub fn maximally_mixed() -> Self {
        Self::from_parts(0.5, C64::new(0.0, 0.0))
    }

    /// Read the `(a, b)` entries of a full 2×2 matrix; the rest is assumed
    /// Hermitian with unit trace.
    pub(crate) fn from_matrix(m: &Mat2) -> Self {
        Self::from_parts(m.get(0, 0).re, m.get(0, 1))
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> C64 {
        C64::new(self.b_re, self.b_im)
    }

    pub fn matrix(&self) -> Mat2 {
        let b = self.b();
        Mat2::new(
            C64::new(self.a, 0.0),
            b,
            b.conj(),
            C64::new(1.0 - self.a, 0.0),
        )
    }

    /// Mirror image in the real b-axis: `b ↦ −b`.
    pub fn mirror(&self) -> Self {
        Self::from_parts(self.a, -self.b())
    }

    /// Determinant `a(1 − a) − |b|²` (product of the eigenvalues).
    pub fn determinant(&self) -> f64 {
        self.a * (1.0 - self.a) - self.b().norm_sqr()
    }

    /// Probability-weighted mixture of states.
    pub fn mixture<'a, I>(parts: I) -> Self
    where
        I: IntoIterator<Item = (f64, &'a DensityMatrix)>,
    {
        let (mut a, mut b) = (0.0, C64::new(0.0, 0.0));
        for (p, rho) in parts {
            a += p * rho.a;
            b += rho.b() * p;
        }
        Self::from_parts(a, b)
    }

    pub fn eigenvalues(&self) -> (f64, f64) {
        eigenvalues(self)
    }

    pub fn entropy(&self) -> f64 {
        von_neumann_entropy(self)
    }

    pub fn to_bloch(&self) -> BlochVector {
        bloch_from_density(self)
    }
}

/// Sorted spectrum `(λ₊, λ₋)` of a qubit density matrix, clamped to `[0, 1]`.
///
/// The small eigenvalue is taken as `det/λ₊`, which keeps relative accuracy
/// for nearly pure states.
pub fn eigenvalues(rho: &DensityMatrix) -> (f64, f64) {
    let z = 2.0 * rho.a - 1.0;
    let r = (z * z + 4.0 * rho.b().norm_sqr()).sqrt().min(1.0);
    let plus = (0.5 * (1.0 + r)).clamp(0.5, 1.0);
    let minus = (rho.determinant().max(0.0) / plus).clamp(0.0, 0.5);
    (plus, minus)
}

/// `S(ρ) = −Tr ρ log₂ ρ`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    let (_, minus) = eigenvalues(rho);
    h2(minus)
}

/// Sign of the off-diagonal amplitude of a [`PureQubit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// Pure qubit state on the Bloch-sphere boundary `|b|² = a(1 − a)`, with
/// `b = sign · e^{iφ} · √(a(1 − a))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PureQubit {
    a: f64,
    sign: Sign,
    phase: f64,
}

impl PureQubit {
    /// Real-amplitude pure state (phase 0).
    pub fn new(a: f64, sign: Sign) -> Result<Self> {
        Self::with_phase(a, sign, 0.0)
    }

    /// Phase is reduced into `[0, 2π)`.
    pub fn with_phase(a: f64, sign: Sign, phase: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&a) {
            return Err(Error::Domain {
                what: "a",
                value: a,
                domain: "[0, 1]",
            });
        }
        if !phase.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "phase {phase} is not finite"
            )));
        }
        Ok(Self {
            a,
            sign,
            phase: phase.rem_euclid(std::f64::consts::TAU),
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn b(&self) -> C64 {
        C64::from_polar(
            self.sign.value() * (self.a * (1.0 - self.a)).sqrt(),
            self.phase,
        )
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_parts(self.a, self.b())
    }

    /// Same state with `b ↦ −b`.
    pub fn mirror(&self) -> Self {
        Self {
            sign: self.sign.flip(),
            ..*self
        }
    }

    /// State-vector amplitudes `(√a, sign·e^{−iφ}·√(1 − a))`, so that
    /// `ρ₀₁ = c₀·c̄₁ = b`.
    pub fn amplitudes(&self) -> (f64, C64) {
        (
            self.a.sqrt(),
            C64::from_polar(self.sign.value() * (1.0 - self.a).sqrt(), -self.phase),
        )
    }
}

/// Bloch-ball coordinates with `z = 2a − 1` (|0⟩ at the north pole),
/// `x = 2 Re b`, `y = −2 Im b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    /// Validated constructor: norm at most `1 + STATE_SLACK`.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let v = Self { x, y, z };
        let n = v.norm();
        if !(n <= 1.0 + STATE_SLACK) {
            return Err(Error::InvalidParameter(format!(
                "Bloch vector norm {n} exceeds 1"
            )));
        }
        Ok(v)
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

pub fn bloch_from_density(rho: &DensityMatrix) -> BlochVector {
    BlochVector {
        x: 2.0 * rho.b_re,
        y: -2.0 * rho.b_im,
        z: 2.0 * rho.a - 1.0,
    }
}

pub fn density_from_bloch(v: &BlochVector) -> Result<DensityMatrix> {
    let n = v.norm();
    if !(n <= 1.0 + STATE_SLACK) {
        return Err(Error::InvalidParameter(format!(
            "Bloch vector norm {n} exceeds 1"
        )));
    }
    Ok(DensityMatrix::from_parts(
        0.5 * (1.0 + v.z),
        C64::new(0.5 * v.x, -0.5 * v.y),
    ))
}

/// Finite ensemble of pure states with probabilities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ensemble {
    entries: Vec<(f64, PureQubit)>,
}

impl Ensemble {
    pub fn new(entries: Vec<(f64, PureQubit)>) -> Result<Self> {
        if entries.is_empty() || entries.len() > MAX_ENSEMBLE_SIZE {
            return Err(Error::InvalidEnsemble(format!(
                "ensemble holds {} states, expected 1..={MAX_ENSEMBLE_SIZE}",
                entries.len()
            )));
        }
        if let Some((p, _)) = entries.iter().find(|(p, _)| !(*p >= 0.0)) {
            return Err(Error::InvalidEnsemble(format!("negative probability {p}")));
        }
        let total: f64 = entries.iter().map(|(p, _)| p).sum();
        if (total - 1.0).abs() > STATE_SLACK {
            return Err(Error::InvalidEnsemble(format!(
                "probabilities sum to {total}"
            )));
        }
        Ok(Self { entries })
    }

    /// Single state with probability one.
    pub fn singleton(state: PureQubit) -> Self {
        Self {
            entries: vec![(1.0, state)],
        }
    }

    /// `{(½, ρ_a), (½, ρ_a′)}` with real positive `b` for the first state.
    pub fn antipodal_pair(a: f64) -> Result<Self> {
        let plus = PureQubit::new(a, Sign::Plus)?;
        Ok(Self {
            entries: vec![(0.5, plus), (0.5, plus.mirror())],
        })
    }

    pub fn entries(&self) -> &[(f64, PureQubit)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Average input state `Σ p_j ρ_j`.
    pub fn average(&self) -> DensityMatrix {
        let states: Vec<_> = self
            .entries
            .iter()
            .map(|(p, s)| (*p, s.density()))
            .collect();
        DensityMatrix::mixture(states.iter().map(|(p, rho)| (*p, rho)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn binary_entropy_values() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        let direct = -0.1 * 0.1f64.log2() - 0.9 * 0.9f64.log2();
        assert_abs_diff_eq!(binary_entropy(0.1).unwrap(), direct, epsilon = 1e-15);
        assert_abs_diff_eq!(
            binary_entropy(0.1).unwrap(),
            0.468_995_593_5,
            epsilon = 1e-10
        );
    }

    #[test]
    fn binary_entropy_domain() {
        assert_eq!(binary_entropy(-1e-13).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0 + 1e-13).unwrap(), 0.0);
        assert!(matches!(binary_entropy(-1e-6), Err(Error::Domain { .. })));
        assert!(binary_entropy(1.1).is_err());
        assert!(binary_entropy(f64::NAN).is_err());
    }

    #[test]
    fn spectrum_examples() {
        assert_eq!(
            eigenvalues(&DensityMatrix::real(1.0, 0.0).unwrap()),
            (1.0, 0.0)
        );
        assert_eq!(
            eigenvalues(&DensityMatrix::real(0.5, 0.0).unwrap()),
            (0.5, 0.5)
        );
        let (p, m) = eigenvalues(&DensityMatrix::real(0.5, 0.5).unwrap());
        assert_abs_diff_eq!(p, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(m, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(von_neumann_entropy(&DensityMatrix::ground()), 0.0);
        assert_eq!(von_neumann_entropy(&DensityMatrix::maximally_mixed()), 1.0);
        let rho = DensityMatrix::real(0.9, 0.0).unwrap();
        assert_abs_diff_eq!(von_neumann_entropy(&rho), 0.468_995_593_5, epsilon = 1e-10);
    }

    #[test]
    fn rejects_non_positive_states() {
        assert!(DensityMatrix::real(0.5, 0.6).is_err());
        assert!(DensityMatrix::real(1.2, 0.0).is_err());
        assert!(DensityMatrix::real(0.5, 0.5 + 1e-14).is_ok());
    }

    #[test]
    fn bloch_examples() {
        let north = bloch_from_density(&DensityMatrix::ground());
        assert_eq!((north.x, north.y, north.z), (0.0, 0.0, 1.0));
        let plus = bloch_from_density(&DensityMatrix::real(0.5, 0.5).unwrap());
        assert_eq!((plus.x, plus.y, plus.z), (1.0, 0.0, 0.0));
        // |+i⟩ = (|0⟩ + i|1⟩)/√2 has b = −i/2 and sits at +y.
        let plus_i = DensityMatrix::new(0.5, C64::new(0.0, -0.5)).unwrap();
        assert_abs_diff_eq!(bloch_from_density(&plus_i).y, 1.0, epsilon = 1e-15);
        assert!(density_from_bloch(&BlochVector {
            x: 1.0,
            y: 0.1,
            z: 0.0
        })
        .is_err());
    }

    #[test]
    fn ensemble_validation() {
        let s = PureQubit::new(0.3, Sign::Plus).unwrap();
        assert!(Ensemble::new(vec![]).is_err());
        assert!(Ensemble::new(vec![(0.5, s); 5]).is_err());
        assert!(Ensemble::new(vec![(0.5, s), (0.4, s)]).is_err());
        assert!(Ensemble::new(vec![(1.2, s), (-0.2, s)]).is_err());
        assert!(Ensemble::new(vec![(0.25, s); 4]).is_ok());
    }

    #[test]
    fn pure_amplitudes() {
        let s = PureQubit::new(0.567214, Sign::Minus).unwrap();
        let (c0, c1) = s.amplitudes();
        assert_abs_diff_eq!(c0, 0.753_133, epsilon = 1e-5);
        assert_abs_diff_eq!(c1.re, -0.657_862, epsilon = 1e-5);
    }

    fn ball_point() -> impl Strategy<Value = BlochVector> {
        (0.0..1.0f64, -1.0..1.0f64, 0.0..std::f64::consts::TAU).prop_map(|(r, cos_t, phi)| {
            let sin_t = (1.0 - cos_t * cos_t).sqrt();
            BlochVector {
                x: r * sin_t * phi.cos(),
                y: r * sin_t * phi.sin(),
                z: r * cos_t,
            }
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn bloch_round_trip(v in ball_point()) {
            let back = bloch_from_density(&density_from_bloch(&v).unwrap());
            prop_assert!((back.x - v.x).abs() <= 1e-14);
            prop_assert!((back.y - v.y).abs() <= 1e-14);
            prop_assert!((back.z - v.z).abs() <= 1e-14);
        }

        #[test]
        fn spectrum_sums_to_one(v in ball_point()) {
            let (p, m) = eigenvalues(&density_from_bloch(&v).unwrap());
            prop_assert!(p >= m);
            prop_assert!((p + m - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn pure_states_have_unit_spectrum(a in 0.0..=1.0f64, phase in 0.0..7.0f64, minus in any::<bool>()) {
            let sign = if minus { Sign::Minus } else { Sign::Plus };
            let rho = PureQubit::with_phase(a, sign, phase).unwrap().density();
            let (p, m) = eigenvalues(&rho);
            prop_assert!((p - 1.0).abs() <= 1e-12 && m.abs() <= 1e-12);
            prop_assert!((rho.to_bloch().norm() - 1.0).abs() <= 1e-9);
        }

        #[test]
        fn binary_entropy_concave(p in 0.0..=1.0f64, q in 0.0..=1.0f64, t in 0.0..=1.0f64) {
            let lhs = h2(t * p + (1.0 - t) * q);
            let rhs = t * h2(p) + (1.0 - t) * h2(q);
            prop_assert!(lhs >= rhs - 1e-12);
        }
    }
}
