use crate::error::{check_unit, Result};
use crate::holevo;
use crate::linalg::Mat2;
use crate::optimize::{self, CapacityResult};

use super::{KrausSet, QubitChannel};

/// Amplitude damping: `|1⟩` decays to `|0⟩` with probability `γ`.
///
/// ```text
/// E₀ = [[1, 0], [0, √(1 − γ)]]    E₁ = [[0, √γ], [0, 0]]
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeDamping {
    gamma: f64,
}

impl AmplitudeDamping {
    pub fn new(gamma: f64) -> Result<Self> {
        Ok(Self {
            gamma: check_unit("gamma", gamma)?,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

impl QubitChannel for AmplitudeDamping {
    fn name(&self) -> &'static str {
        "ad"
    }

    fn params(&self) -> Vec<(&'static str, f64)> {
        vec![("gamma", self.gamma)]
    }

    fn kraus(&self) -> KrausSet {
        let g = self.gamma;
        KrausSet {
            operators: vec![
                Mat2::real(1.0, 0.0, 0.0, (1.0 - g).sqrt()),
                Mat2::real(0.0, g.sqrt(), 0.0, 0.0),
            ],
        }
    }

    fn chi(&self, a: f64) -> Result<f64> {
        Ok(holevo::chi_ad(self.gamma, check_unit("a", a)?))
    }

    fn has_chi_curve(&self) -> bool {
        true
    }

    fn capacity(&self, tol: f64) -> Result<CapacityResult> {
        optimize::solve_amax_ad(self.gamma, tol)
    }
}

/// Generalised amplitude damping with damping `γ` and mixing weight `p`;
/// `p = 1` is plain amplitude damping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralizedAmplitudeDamping {
    gamma: f64,
    p: f64,
}

impl GeneralizedAmplitudeDamping {
    pub fn new(gamma: f64, p: f64) -> Result<Self> {
        Ok(Self {
            gamma: check_unit("gamma", gamma)?,
            p: check_unit("p", p)?,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

impl QubitChannel for GeneralizedAmplitudeDamping {
    fn name(&self) -> &'static str {
        "gad"
    }

    fn params(&self) -> Vec<(&'static str, f64)> {
        vec![("gamma", self.gamma), ("p", self.p)]
    }

    fn kraus(&self) -> KrausSet {
        let (g, p) = (self.gamma, self.p);
        let (sp, sq) = (p.sqrt(), (1.0 - p).sqrt());
        let s = (1.0 - g).sqrt();
        KrausSet {
            operators: vec![
                Mat2::real(1.0, 0.0, 0.0, s).scale(sp),
                Mat2::real(0.0, g.sqrt(), 0.0, 0.0).scale(sp),
                Mat2::real(s, 0.0, 0.0, 1.0).scale(sq),
                Mat2::real(0.0, 0.0, g.sqrt(), 0.0).scale(sq),
            ],
        }
    }

    fn chi(&self, a: f64) -> Result<f64> {
        Ok(holevo::chi_gad(self.gamma, self.p, check_unit("a", a)?))
    }

    fn has_chi_curve(&self) -> bool {
        true
    }
}
