use crate::error::{Error, Result};
use crate::linalg::Mat2;

use super::{validate_cpt, KrausSet, QubitChannel};

/// Arbitrary CPT qubit map given by its Kraus operators.
///
/// No antipodal reduction is assumed, so [`QubitChannel::chi`] and
/// [`QubitChannel::capacity`] are unsupported; use the ensemble oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct GenericKraus {
    label: &'static str,
    kraus: KrausSet,
}

impl GenericKraus {
    /// Fails unless the set is trace preserving within
    /// [`super::CPT_TOLERANCE`].
    pub fn new(kraus: KrausSet) -> Result<Self> {
        let diag = validate_cpt(&kraus);
        if !diag.passed {
            return Err(Error::InvalidParameter(format!(
                "Kraus set is not trace preserving (max deviation {:.3e})",
                diag.max_deviation
            )));
        }
        Ok(Self {
            label: "kraus",
            kraus,
        })
    }

    pub fn identity() -> Self {
        Self {
            label: "identity",
            kraus: KrausSet {
                operators: vec![Mat2::IDENTITY],
            },
        }
    }
}

impl QubitChannel for GenericKraus {
    fn name(&self) -> &'static str {
        self.label
    }

    fn params(&self) -> Vec<(&'static str, f64)> {
        Vec::new()
    }

    fn kraus(&self) -> KrausSet {
        self.kraus.clone()
    }

    fn capacity(&self, _tol: f64) -> Result<crate::optimize::CapacityResult> {
        Err(self.unsupported("capacity needs a χ(a) reduction; use the ensemble oracle"))
    }
}
