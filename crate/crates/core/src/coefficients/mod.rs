//! Mackey functor tables and the RO(C₂)-graded homology of a point.

pub mod complex;
pub mod mackey;
pub mod point;

use std::fmt;

use crate::error::{Error, Result};

pub use mackey::{AxiomFailure, MackeyTable};
pub use point::{point_homology, PointMonomial, PointRingC2};

/// Coefficient ring of a constant Mackey functor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoeffRing {
    F2,
    Z,
}

impl CoeffRing {
    /// Modulus for linear algebra (`None` for ℤ).
    pub fn modulus(&self) -> Option<i64> {
        match self {
            CoeffRing::F2 => Some(2),
            CoeffRing::Z => None,
        }
    }

    /// Order of the ring as an abelian group (0 for ℤ).
    pub fn order(&self) -> u64 {
        match self {
            CoeffRing::F2 => 2,
            CoeffRing::Z => 0,
        }
    }

    pub fn parse(s: &str) -> Result<CoeffRing> {
        match s.trim().to_ascii_lowercase().as_str() {
            "f2" | "z/2" => Ok(CoeffRing::F2),
            "z" => Ok(CoeffRing::Z),
            other => Err(Error::Model(format!("unknown coefficients `{other}` (expected f2 or z)"))),
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            CoeffRing::F2 => "f2",
            CoeffRing::Z => "z",
        }
    }

    pub(crate) fn reduce(&self, x: i64) -> i64 {
        match self {
            CoeffRing::F2 => x.rem_euclid(2),
            CoeffRing::Z => x,
        }
    }
}

impl fmt::Display for CoeffRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffRing::F2 => write!(f, "F2"),
            CoeffRing::Z => write!(f, "Z"),
        }
    }
}
