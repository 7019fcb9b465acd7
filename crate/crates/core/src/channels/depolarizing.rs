use crate::error::{check_unit, Error, Result};
use crate::holevo;
use crate::linalg::Mat2;
use crate::optimize::{self, CapacityResult};

use super::{KrausSet, QubitChannel};

/// Upper end of the completely-positive range of `λ` for
/// `Δ_λ(ρ) = (1 − λ)ρ + λ I/2`.
pub const MAX_DEPOLARIZING_LAMBDA: f64 = 4.0 / 3.0;

/// Depolarising channel `Δ_λ(ρ) = (1 − λ)ρ + λ I/2`.
///
/// Realised with Kraus operators `√(1 − 3λ/4) I` and `√(λ/4) σ_{x,y,z}`,
/// which are valid for `λ ∈ [0, 4/3]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Depolarizing {
    lambda: f64,
}

impl Depolarizing {
    pub fn new(lambda: f64) -> Result<Self> {
        if !(0.0..=MAX_DEPOLARIZING_LAMBDA).contains(&lambda) {
            return Err(Error::Domain {
                what: "lambda",
                value: lambda,
                domain: "[0, 4/3]",
            });
        }
        Ok(Self { lambda })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

impl QubitChannel for Depolarizing {
    fn name(&self) -> &'static str {
        "dep"
    }

    fn params(&self) -> Vec<(&'static str, f64)> {
        vec![("lambda", self.lambda)]
    }

    fn kraus(&self) -> KrausSet {
        let l = self.lambda;
        let w0 = (1.0 - 0.75 * l).max(0.0).sqrt();
        let w = (0.25 * l).sqrt();
        KrausSet {
            operators: vec![
                Mat2::IDENTITY.scale(w0),
                Mat2::pauli_x().scale(w),
                Mat2::pauli_y().scale(w),
                Mat2::pauli_z().scale(w),
            ],
        }
    }

    fn chi(&self, a: f64) -> Result<f64> {
        Ok(holevo::chi_dep(self.lambda, check_unit("a", a)?))
    }

    fn has_chi_curve(&self) -> bool {
        true
    }

    fn capacity(&self, tol: f64) -> Result<CapacityResult> {
        optimize::depolarizing_capacity(self.lambda, tol)
    }
}
