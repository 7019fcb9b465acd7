//! Qubit channel families.
//!
//! Every family implements [`QubitChannel`]. Kraus operators are the source
//! of truth for [`QubitChannel::apply`]; the closed-form spectra below are
//! kept as independent routes and cross-checked in tests.
//!
//! Families are looked up by name through [`ChannelRegistry`].

mod amplitude_damping;
mod depolarizing;
mod generic;
mod registry;

pub use amplitude_damping::{AmplitudeDamping, GeneralizedAmplitudeDamping};
pub use depolarizing::Depolarizing;
pub use generic::GenericKraus;
pub use registry::{ChannelEntry, ChannelRegistry};

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::Mat2;
use crate::optimize::{self, CapacityResult};
use crate::qstate::{bloch_from_density, density_from_bloch, BlochVector, DensityMatrix};

/// Maximum entrywise deviation of `Σ E†E` from the identity for a CPT set.
pub const CPT_TOLERANCE: f64 = 1e-12;

/// Shared handle to a channel.
pub type Channel = Arc<dyn QubitChannel>;

/// A qubit channel with the operations the capacity machinery needs.
pub trait QubitChannel: fmt::Debug + Send + Sync {
    /// Registry key of the family (`"ad"`, `"gad"`, ...).
    fn name(&self) -> &'static str;

    /// Named parameters, in registry order.
    fn params(&self) -> Vec<(&'static str, f64)>;

    fn kraus(&self) -> KrausSet;

    fn apply(&self, rho: &DensityMatrix) -> DensityMatrix {
        self.kraus().apply(rho)
    }

    fn bloch_image(&self, v: &BlochVector) -> Result<BlochVector> {
        Ok(bloch_from_density(&self.apply(&density_from_bloch(v)?)))
    }

    /// Holevo quantity of the equiprobable antipodal pair
    /// `{(½, ρ_a), (½, ρ_a′)}` in bits.
    ///
    /// Only families for which the mirror-image reduction holds provide it.
    fn chi(&self, a: f64) -> Result<f64> {
        let _ = a;
        Err(self.unsupported("no single-parameter χ(a) reduction"))
    }

    /// Product-state capacity over the antipodal family.
    fn capacity(&self, tol: f64) -> Result<CapacityResult> {
        optimize::golden_capacity(self, tol)
    }

    /// Whether [`QubitChannel::chi`] is available.
    fn has_chi_curve(&self) -> bool {
        false
    }

    /// `family:param[:param]` spec string, as accepted by the registry.
    fn spec(&self) -> String {
        let mut out = self.name().to_string();
        for (_, v) in self.params() {
            out.push(':');
            out.push_str(&v.to_string());
        }
        out
    }

    fn unsupported(&self, reason: &str) -> Error {
        Error::Unsupported {
            channel: self.spec(),
            reason: reason.to_string(),
        }
    }
}

/// A list of 2×2 Kraus operators.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    operators: Vec<Mat2>,
}

impl KrausSet {
    pub fn new(operators: Vec<Mat2>) -> Result<Self> {
        if operators.is_empty() {
            return Err(Error::InvalidParameter("empty Kraus set".into()));
        }
        Ok(Self { operators })
    }

    pub fn operators(&self) -> &[Mat2] {
        &self.operators
    }

    /// `Σ_k E_k ρ E_k†`.
    pub fn apply(&self, rho: &DensityMatrix) -> DensityMatrix {
        let m = rho.matrix();
        let out = self
            .operators
            .iter()
            .fold(Mat2::ZERO, |acc, e| acc + *e * m * e.adjoint());
        DensityMatrix::from_matrix(&out)
    }

    /// `Σ_k E_k† E_k`.
    pub fn completeness(&self) -> Mat2 {
        self.operators
            .iter()
            .fold(Mat2::ZERO, |acc, e| acc + e.adjoint() * *e)
    }
}

/// Outcome of [`validate_cpt`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CptDiagnostic {
    pub passed: bool,
    pub max_deviation: f64,
}

pub fn validate_cpt(kraus: &KrausSet) -> CptDiagnostic {
    let max_deviation = kraus.completeness().max_abs_diff(&Mat2::IDENTITY);
    CptDiagnostic {
        passed: max_deviation <= CPT_TOLERANCE,
        max_deviation,
    }
}

/// `x = √(1 − 4γ(1 − γ)(1 − a)²)`; a slightly negative radicand is clamped.
pub fn ad_x(gamma: f64, a: f64) -> f64 {
    let radicand = 1.0 - 4.0 * gamma * (1.0 - gamma) * (1.0 - a) * (1.0 - a);
    radicand.max(0.0).sqrt().min(1.0)
}

/// Sorted spectrum from a determinant: `λ₊ = (1 + √(1 − 4 det))/2`,
/// `λ₋ = det/λ₊`.
fn spectrum_from_det(det: f64) -> (f64, f64) {
    let det = det.clamp(0.0, 0.25);
    let plus = 0.5 * (1.0 + (1.0 - 4.0 * det).max(0.0).sqrt());
    (plus, det / plus)
}

/// Output spectrum of the amplitude-damping channel for the real pure input
/// `ρ_a`: `λ± = (1 ± x)/2`.
pub fn output_eigs_ad(gamma: f64, a: f64) -> (f64, f64) {
    let u = 1.0 - a;
    spectrum_from_det(gamma * (1.0 - gamma) * u * u)
}

/// Output spectrum of the generalised amplitude-damping channel for the real
/// pure input `ρ_a`. The determinant is `γ(1 − γ)(a − p)² + γp(1 − p)`.
pub fn output_eigs_gad(gamma: f64, p: f64, a: f64) -> (f64, f64) {
    let v = a - p;
    spectrum_from_det(gamma * (1.0 - gamma) * v * v + gamma * p * (1.0 - p))
}

/// Output spectrum of the depolarising channel on any pure input:
/// the set `{λ/2, 1 − λ/2}`, returned sorted.
pub fn output_eigs_dep(lambda: f64) -> (f64, f64) {
    let (lo, hi) = (lambda / 2.0, 1.0 - lambda / 2.0);
    if lo <= hi {
        (hi, lo)
    } else {
        (lo, hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;
    use crate::qstate::{eigenvalues, PureQubit, Sign};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pure(a: f64) -> DensityMatrix {
        PureQubit::new(a, Sign::Plus).unwrap().density()
    }

    #[test]
    fn ad_x_examples() {
        assert_eq!(ad_x(0.37, 1.0), 1.0);
        assert_eq!(ad_x(0.5, 0.0), 0.0);
        let u: f64 = 1.0 - 0.567214;
        let direct = (1.0 - 4.0 * 0.2 * 0.8 * u * u).sqrt();
        assert_abs_diff_eq!(ad_x(0.2, 0.567214), direct, epsilon = 1e-15);
    }

    #[test]
    fn ad_spectrum_examples() {
        for a in [0.0, 0.3, 1.0] {
            let (p, m) = output_eigs_ad(0.0, a);
            assert_abs_diff_eq!(p, 1.0, epsilon = 1e-15);
            assert_abs_diff_eq!(m, 0.0, epsilon = 1e-15);
        }
        for g in [0.1, 0.5, 0.9] {
            assert_eq!(output_eigs_ad(g, 1.0), (1.0, 0.0));
        }
        let applied = eigenvalues(&AmplitudeDamping::new(0.3).unwrap().apply(&pure(0.6)));
        let closed = output_eigs_ad(0.3, 0.6);
        assert_abs_diff_eq!(applied.0, closed.0, epsilon = 1e-12);
        assert_abs_diff_eq!(applied.1, closed.1, epsilon = 1e-12);
        let x = ad_x(0.3, 0.6);
        assert_abs_diff_eq!(closed.0, 0.5 * (1.0 + x), epsilon = 1e-12);
        assert_abs_diff_eq!(closed.1, 0.5 * (1.0 - x), epsilon = 1e-12);
    }

    /// The radical printed for the generalised channel, expanded in full.
    fn gad_x_expanded(g: f64, p: f64, a: f64) -> f64 {
        (1.0 + 4.0 * a * a * g * g - 4.0 * a * a * g - 8.0 * a * p * g * g
            + 8.0 * a * p * g
            + 4.0 * p * p * g * g
            - 4.0 * p * g)
            .max(0.0)
            .sqrt()
    }

    #[test]
    fn gad_spectrum_examples() {
        for a in [0.0, 0.2, 0.7, 1.0] {
            let (p1, m1) = output_eigs_gad(0.35, 1.0, a);
            let (p2, m2) = output_eigs_ad(0.35, a);
            assert_abs_diff_eq!(p1, p2, epsilon = 1e-15);
            assert_abs_diff_eq!(m1, m2, epsilon = 1e-15);
            assert_abs_diff_eq!(output_eigs_gad(0.0, 0.4, a).0, 1.0, epsilon = 1e-15);
        }
        let ch = GeneralizedAmplitudeDamping::new(0.5, 0.3).unwrap();
        let applied = eigenvalues(&ch.apply(&pure(0.7)));
        let closed = output_eigs_gad(0.5, 0.3, 0.7);
        assert_abs_diff_eq!(applied.0, closed.0, epsilon = 1e-12);
        assert_abs_diff_eq!(applied.1, closed.1, epsilon = 1e-12);
        let x = gad_x_expanded(0.5, 0.3, 0.7);
        assert_abs_diff_eq!(closed.1, 0.5 * (1.0 - x), epsilon = 1e-12);
    }

    #[test]
    fn dep_spectrum_examples() {
        assert_eq!(output_eigs_dep(0.0), (1.0, 0.0));
        assert_eq!(output_eigs_dep(1.0), (0.5, 0.5));
        let (hi, lo) = output_eigs_dep(0.4);
        assert_abs_diff_eq!(hi, 0.8, epsilon = 1e-15);
        assert_abs_diff_eq!(lo, 0.2, epsilon = 1e-15);
    }

    #[test]
    fn spectra_agree_with_applied_maps_on_grid() {
        let n = 50;
        for i in 0..n {
            let g = i as f64 / (n - 1) as f64;
            for j in 0..n {
                let a = j as f64 / (n - 1) as f64;
                let rho = pure(a);
                let ad = eigenvalues(&AmplitudeDamping::new(g).unwrap().apply(&rho));
                let ad_closed = output_eigs_ad(g, a);
                assert!((ad.0 - ad_closed.0).abs() <= 1e-12, "AD γ={g} a={a}");
                assert!((ad.1 - ad_closed.1).abs() <= 1e-12, "AD γ={g} a={a}");

                let p = 1.0 - a * 0.8;
                let gad = eigenvalues(&GeneralizedAmplitudeDamping::new(g, p).unwrap().apply(&rho));
                let gad_closed = output_eigs_gad(g, p, a);
                assert!(
                    (gad.0 - gad_closed.0).abs() <= 1e-12,
                    "GAD γ={g} p={p} a={a}"
                );
                assert!(
                    (gad.1 - gad_closed.1).abs() <= 1e-12,
                    "GAD γ={g} p={p} a={a}"
                );

                let dep = eigenvalues(&Depolarizing::new(g).unwrap().apply(&rho));
                let dep_closed = output_eigs_dep(g);
                assert!((dep.0 - dep_closed.0).abs() <= 1e-12, "dep λ={g} a={a}");
                assert!((dep.1 - dep_closed.1).abs() <= 1e-12, "dep λ={g} a={a}");
            }
        }
    }

    #[test]
    fn cpt_examples() {
        assert!(validate_cpt(&AmplitudeDamping::new(0.3).unwrap().kraus()).passed);
        assert!(validate_cpt(&GeneralizedAmplitudeDamping::new(0.7, 0.4).unwrap().kraus()).passed);
        let bad = KrausSet::new(vec![Mat2::IDENTITY, Mat2::real(1.0, 0.0, 0.0, 0.0)]).unwrap();
        let diag = validate_cpt(&bad);
        assert!(!diag.passed);
        assert_abs_diff_eq!(diag.max_deviation, 1.0, epsilon = 1e-15);
        assert!(KrausSet::new(vec![]).is_err());
    }

    #[test]
    fn cpt_holds_for_random_parameters() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let (g, p, l) = (
                rng.gen::<f64>(),
                rng.gen::<f64>(),
                rng.gen_range(0.0..=4.0 / 3.0),
            );
            let sets = [
                AmplitudeDamping::new(g).unwrap().kraus(),
                GeneralizedAmplitudeDamping::new(g, p).unwrap().kraus(),
                Depolarizing::new(l).unwrap().kraus(),
            ];
            for k in &sets {
                let d = validate_cpt(k);
                assert!(d.passed, "deviation {}", d.max_deviation);
            }
        }
    }

    #[test]
    fn ad_apply_matches_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let g: f64 = rng.gen();
            let v = random_ball(&mut rng);
            let rho = density_from_bloch(&v).unwrap();
            let out = AmplitudeDamping::new(g).unwrap().apply(&rho);
            let (a, b) = (rho.a(), rho.b());
            assert!((out.a() - (a + (1.0 - a) * g)).abs() <= 1e-14);
            assert!((out.b() - b * (1.0 - g).sqrt()).norm() <= 1e-14);
        }
    }

    #[test]
    fn gad_apply_matches_printed_closed_form() {
        // Real pure input: [[a + pγ − aγ, √(a(1−a))√(1−γ)], [·, a(γ−1) − pγ + 1]].
        for (g, p, a) in [(0.5, 0.3, 0.7), (0.2, 0.9, 0.1), (0.8, 0.0, 0.5)] {
            let out = GeneralizedAmplitudeDamping::new(g, p)
                .unwrap()
                .apply(&pure(a));
            assert_abs_diff_eq!(out.a(), a + p * g - a * g, epsilon = 1e-14);
            assert_abs_diff_eq!(
                out.b().re,
                (a * (1.0 - a)).sqrt() * (1.0 - g).sqrt(),
                epsilon = 1e-14
            );
            assert_abs_diff_eq!(1.0 - out.a(), a * (g - 1.0) - p * g + 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn apply_examples() {
        let ad = AmplitudeDamping::new(0.35).unwrap();
        assert_eq!(ad.apply(&DensityMatrix::ground()), DensityMatrix::ground());
        let decayed = ad.apply(&DensityMatrix::excited());
        assert_abs_diff_eq!(decayed.a(), 0.35, epsilon = 1e-15);
        assert_eq!(decayed.b(), C64::new(0.0, 0.0));
        let mixed = DensityMatrix::maximally_mixed();
        let out = Depolarizing::new(0.6).unwrap().apply(&mixed);
        assert_abs_diff_eq!(out.a(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(out.b().norm(), 0.0, epsilon = 1e-15);
        let rho = DensityMatrix::new(0.3, C64::new(0.2, -0.1)).unwrap();
        let id = Depolarizing::new(0.0).unwrap().apply(&rho);
        assert_abs_diff_eq!(id.a(), rho.a(), epsilon = 1e-15);
        assert_abs_diff_eq!((id.b() - rho.b()).norm(), 0.0, epsilon = 1e-15);
    }

    pub(crate) fn random_ball(rng: &mut ChaCha8Rng) -> BlochVector {
        loop {
            let (x, y, z) = (
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            if x * x + y * y + z * z <= 1.0 {
                return BlochVector { x, y, z };
            }
        }
    }

    fn random_sphere(rng: &mut ChaCha8Rng) -> BlochVector {
        let v = random_ball(rng);
        let n = v.norm().max(1e-3);
        BlochVector {
            x: v.x / n,
            y: v.y / n,
            z: v.z / n,
        }
    }

    #[test]
    fn bloch_image_examples() {
        let ad = AmplitudeDamping::new(0.3).unwrap();
        let north = ad
            .bloch_image(&BlochVector {
                x: 0.0,
                y: 0.0,
                z: 1.0,
            })
            .unwrap();
        assert_eq!((north.x, north.y, north.z), (0.0, 0.0, 1.0));
        let south = ad
            .bloch_image(&BlochVector {
                x: 0.0,
                y: 0.0,
                z: -1.0,
            })
            .unwrap();
        assert_abs_diff_eq!(south.z, 2.0 * 0.3 - 1.0, epsilon = 1e-15);
        let half = AmplitudeDamping::new(0.5).unwrap();
        let v = half
            .bloch_image(&BlochVector {
                x: 1.0,
                y: 0.0,
                z: 0.0,
            })
            .unwrap();
        assert_abs_diff_eq!(v.x, 0.5f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(v.y, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v.z, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn ad_image_is_the_shifted_ellipsoid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for g in [0.1, 0.25, 0.5, 0.75, 0.9] {
            let ad = AmplitudeDamping::new(g).unwrap();
            for _ in 0..500 {
                let v = random_sphere(&mut rng);
                let w = ad.bloch_image(&v).unwrap();
                let s = (1.0 - g).sqrt();
                assert!((w.x - v.x * s).abs() <= 1e-12);
                assert!((w.y - v.y * s).abs() <= 1e-12);
                assert!((w.z - (v.z * (1.0 - g) + g)).abs() <= 1e-12);
                let lhs =
                    (w.x * w.x + w.y * w.y) / (1.0 - g) + (w.z - g).powi(2) / (1.0 - g).powi(2);
                assert!((lhs - 1.0).abs() <= 1e-9, "γ={g}: {lhs}");
            }
        }
    }

    #[test]
    fn dep_image_is_scaled_ball() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for l in [0.0, 0.2, 0.5, 0.9, 1.0] {
            let dep = Depolarizing::new(l).unwrap();
            for _ in 0..200 {
                let v = random_ball(&mut rng);
                let w = dep.bloch_image(&v).unwrap();
                assert!((w.norm() - (1.0 - l) * v.norm()).abs() <= 1e-12);
            }
        }
    }
}
