//! Exact arithmetic for Drinfeld F_q[T]-modules: finite fields, twisted
//! polynomials, isogenies, heights, explicit bounds and Galois probes.

pub mod error;
pub mod ext;
pub mod factor;
pub mod field;
pub mod fq;
pub mod poly;
pub mod polya;
pub mod ratfunc;
pub mod twisted;
pub mod drinfeld;
pub mod linalg;
pub mod heights;
pub mod lambert;
pub mod bounds;
pub mod probe;
pub mod parse;
pub mod modfile;

pub use error::{Error, ErrorKind, Result};
pub use field::{FiniteField, Field};
pub use fq::{FqContext, FqElem};
pub use poly::{Poly, PolyRing};
pub use polya::PolyA;
pub use ratfunc::{RationalFunc, RationalFunctionField};
pub use twisted::{QPolynomial, TwistedPoly, TwistedRing};
