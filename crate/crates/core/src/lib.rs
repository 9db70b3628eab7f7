//! Fat Cantor traces on the unit circle, the barrier sets they induce in the
//! closed unit disk, numerical checks of the supporting inequalities, and a
//! discrete least-gradient (total variation) solver.
//!
//! The crate is `no_std` and only needs `alloc`; all file formats, the CLI and
//! figure rendering live in the `leastgrad` companion crate.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod barrier;
pub mod cantor;
pub mod chain;
mod error;
pub mod fields;
pub mod lemmas;
pub mod planar;
pub mod quadrature;
pub mod solver;

pub use error::{Error, Result};

/// Height of the chord of the root arc: `sin(pi/2 - 1/2) = cos(1/2)`.
///
/// Every link `L_{n+1}` of the barrier chains and every bottom piece meets
/// this horizontal line.
pub fn cut_height() -> f64 {
    #[allow(unused_imports)]
    use num_traits::Float;
    0.5f64.cos()
}
