//! Exact arithmetic over discrete valuation rings and their residue fields.
//!
//! Every ring here is local with a discrete valuation: the DVRs `Z@p` and
//! `Q[t]@t`, and their residue fields (which carry the trivial valuation).
//! Matrix algorithms only need the valuation, exact division and a way to
//! split an element into a unit times a normal form, so they run unchanged
//! over all four.

mod matrix;
mod qt;
mod snf;
mod zlocal;

use std::fmt::{self, Debug};
use std::hash::Hash;

use thiserror::Error;

pub use matrix::Matrix;
pub use qt::{Poly, QtLocal, RatFunc, Rationals};
pub use snf::{rank, smith_normal_form, Snf};
pub use zlocal::{PrimeField, ZLocal};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("unknown ring descriptor `{0}`")]
    UnknownRingKind(String),
    #[error("cannot parse `{input}`: {reason}")]
    Parse { input: String, reason: String },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not invertible")]
    NotInvertible,
}

/// Valuation of an element: `Finite(v)` or `Infinite` for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// A commutative local principal ring with a discrete valuation.
///
/// Ring values are small `Copy` descriptors; elements carry no context and
/// all arithmetic goes through the descriptor.
pub trait Ring: Copy + Debug + PartialEq + Eq + Send + Sync + 'static {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn valuation(&self, a: &Self::Elem) -> Valuation;

    /// Exact quotient `a / b` when `b` divides `a` in this ring.
    fn divide(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem>;

    /// Writes a non-zero `a` as `unit * normal`, returning `(unit, normal)`.
    /// The normal part depends only on the valuation of `a`.
    fn split_unit(&self, a: &Self::Elem) -> Option<(Self::Elem, Self::Elem)>;

    /// Canonical string form; `parse` accepts it back.
    fn format(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem, AlgebraError>;

    /// Descriptor string such as `Z@5` or `F_5`.
    fn descriptor(&self) -> String;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// Rough storage size, used to prefer small pivots among equal valuations.
    fn size(&self, _a: &Self::Elem) -> usize {
        0
    }

    fn is_unit(&self, a: &Self::Elem) -> bool {
        self.valuation(a) == Valuation::Finite(0)
    }

    fn inverse(&self, a: &Self::Elem) -> Option<Self::Elem> {
        if self.is_unit(a) {
            self.divide(&self.one(), a)
        } else {
            None
        }
    }

    fn pow(&self, a: &Self::Elem, k: u32) -> Self::Elem {
        let mut acc = self.one();
        for _ in 0..k {
            acc = self.mul(&acc, a);
        }
        acc
    }
}

/// A discrete valuation ring `B` with uniformizer `g` and residue field `B/gB`.
pub trait Dvr: Ring {
    type Residue: Ring;

    fn residue_field(&self) -> Self::Residue;
    fn uniformizer(&self) -> Self::Elem;
    fn residue(&self, a: &Self::Elem) -> <Self::Residue as Ring>::Elem;
    /// Canonical representative: an integer in `[0, p)` or a constant.
    fn lift(&self, a: &<Self::Residue as Ring>::Elem) -> Self::Elem;

    fn uniformizer_power(&self, k: u32) -> Self::Elem {
        self.pow(&self.uniformizer(), k)
    }
}

/// A ring chosen at runtime from its descriptor string.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnyRing {
    Integers(ZLocal),
    Polynomials(QtLocal),
}

impl AnyRing {
    pub fn descriptor(&self) -> String {
        match self {
            AnyRing::Integers(r) => r.descriptor(),
            AnyRing::Polynomials(r) => r.descriptor(),
        }
    }
}

/// Parses a ring descriptor: `Z@<prime>` or `Q[t]@t`.
pub fn make_ring(spec: &str) -> Result<AnyRing, AlgebraError> {
    let spec = spec.trim();
    if spec == "Q[t]@t" {
        return Ok(AnyRing::Polynomials(QtLocal));
    }
    if let Some(p) = spec.strip_prefix("Z@") {
        let p: u64 = p.parse().map_err(|_| AlgebraError::UnknownRingKind(spec.to_string()))?;
        return ZLocal::new(p).map(AnyRing::Integers);
    }
    Err(AlgebraError::UnknownRingKind(spec.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptors() {
        assert_eq!(make_ring("Z@5").unwrap(), AnyRing::Integers(ZLocal::new(5).unwrap()));
        assert_eq!(make_ring("Q[t]@t").unwrap(), AnyRing::Polynomials(QtLocal));
        assert_eq!(make_ring("Z@4"), Err(AlgebraError::NotPrime(4)));
        assert_eq!(make_ring("Z@1"), Err(AlgebraError::NotPrime(1)));
        assert!(matches!(make_ring("Z[i]@2"), Err(AlgebraError::UnknownRingKind(_))));
        assert!(matches!(make_ring("Z@x"), Err(AlgebraError::UnknownRingKind(_))));
    }

    #[test]
    fn generators() {
        let z5 = ZLocal::new(5).unwrap();
        assert_eq!(z5.uniformizer(), z5.from_int(5));
        assert_eq!(z5.descriptor(), "Z@5");
        assert_eq!(QtLocal.format(&QtLocal.uniformizer()), "t");
    }

    #[test]
    fn valuation_order() {
        assert!(Valuation::Finite(7) < Valuation::Infinite);
        assert!(Valuation::Finite(1) < Valuation::Finite(2));
    }
}
