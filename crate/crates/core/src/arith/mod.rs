//! Exact and modular arithmetic: rationals and valuations, fixed-precision
//! p-adic residues, finite fields and matrices over them.

mod fq;
mod matrix;
mod padic;
pub mod primes;
mod rational;
mod ring;

pub use fq::{find_irreducible, fq_order, FqElem, FqField};
pub use matrix::{gl_order, matrix_order, MatrixFq};
pub use padic::{to_padic, PadicApprox, PadicValuation, PrimeContext};
pub use rational::{int, p_power, rat, val_p, val_p_int, Rational, Valuation};
pub(crate) use rational::{fmt_rational, residue_mod};
pub use ring::{det_field, Field, Ring};
