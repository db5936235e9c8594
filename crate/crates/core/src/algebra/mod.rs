//! Graded path algebras over the rationals.
//!
//! Paths are written right to left: the path `psi.phi` applies `phi` first,
//! so its source is the source of `phi` and its target is the target of `psi`.
//! Multiplication is concatenation and carries no Koszul sign; signs enter
//! only through the graded Leibniz rule
//! `d(pq) = d(p) q + (-1)^{|p|} p d(q)`.

mod dg;
mod element;
mod name;
mod path;
mod quiver;

pub use dg::{leibniz_extend, DSquaredReport, DgQuiver};
pub use element::Element;
pub use name::ArrowName;
pub use path::Path;
pub use quiver::{Arrow, Quiver, VertexId};

use num_bigint::BigInt;
use num_rational::BigRational;

/// Exact rational coefficient.
pub type Scalar = BigRational;

pub fn scalar(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

/// `(-1)^exponent` as a scalar.
pub fn sign(exponent: i64) -> Scalar {
    if exponent.rem_euclid(2) == 0 {
        scalar(1)
    } else {
        scalar(-1)
    }
}
