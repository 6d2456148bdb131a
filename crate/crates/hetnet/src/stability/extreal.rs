//! Extended reals for stability indices.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum ExtReal {
    NegInf,
    Finite(f64),
    PosInf,
}

/// Coarse class of a stability index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndexClass {
    MinusInfinity,
    FinitePositive,
    PlusInfinity,
}

impl IndexClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            IndexClass::MinusInfinity => "minus-infinity",
            IndexClass::FinitePositive => "finite-positive",
            IndexClass::PlusInfinity => "plus-infinity",
        }
    }
}

impl fmt::Display for IndexClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl ExtReal {
    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn is_pos_inf(self) -> bool {
        self == ExtReal::PosInf
    }

    pub fn is_neg_inf(self) -> bool {
        self == ExtReal::NegInf
    }

    /// `slope * self + offset` for a positive slope. Infinities are absorbed.
    pub fn affine(self, slope: f64, offset: f64) -> ExtReal {
        debug_assert!(slope > 0.0);
        match self {
            ExtReal::Finite(v) => ExtReal::Finite(slope * v + offset),
            other => other,
        }
    }

    pub fn add(self, offset: f64) -> ExtReal {
        self.affine(1.0, offset)
    }

    pub fn min(self, other: ExtReal) -> ExtReal {
        if self.total_cmp(&other) == Ordering::Greater {
            other
        } else {
            self
        }
    }

    pub fn total_cmp(&self, other: &ExtReal) -> Ordering {
        use ExtReal::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (_, NegInf) | (PosInf, _) => Ordering::Greater,
            (Finite(a), Finite(b)) => a.total_cmp(b),
        }
    }

    pub fn class(self) -> IndexClass {
        match self {
            ExtReal::NegInf => IndexClass::MinusInfinity,
            ExtReal::Finite(_) => IndexClass::FinitePositive,
            ExtReal::PosInf => IndexClass::PlusInfinity,
        }
    }

    /// Convert to f64 with IEEE infinities.
    pub fn to_f64(self) -> f64 {
        match self {
            ExtReal::NegInf => f64::NEG_INFINITY,
            ExtReal::Finite(v) => v,
            ExtReal::PosInf => f64::INFINITY,
        }
    }

    pub fn from_f64(v: f64) -> ExtReal {
        if v == f64::INFINITY {
            ExtReal::PosInf
        } else if v == f64::NEG_INFINITY {
            ExtReal::NegInf
        } else {
            ExtReal::Finite(v)
        }
    }

    pub fn is_positive(self) -> bool {
        match self {
            ExtReal::NegInf => false,
            ExtReal::Finite(v) => v > 0.0,
            ExtReal::PosInf => true,
        }
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => a.partial_cmp(b),
            _ => Some(self.total_cmp(other)),
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::NegInf => write!(f, "-inf"),
            ExtReal::Finite(v) => write!(f, "{v}"),
            ExtReal::PosInf => write!(f, "+inf"),
        }
    }
}
