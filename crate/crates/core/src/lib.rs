//! Total entropy production of a system–apparatus pair whose apparatus
//! qubit decoheres through an environment, and the non-Markovianity witness
//! built from temporary decreases of that production.
//!
//! The crate is organised bottom-up:
//!
//! * [`qmat`]: dense complex matrices, partial traces, Jacobi eigensolver, entropies.
//! * [`channels`]: Kraus families for pure dephasing, amplitude damping and
//!   generalized amplitude damping.
//! * [`entropy`]: entropy exchange, mutual information, classical correlation,
//!   discord and total entropy production.
//! * [`witness`]: trajectories, entropy-production rate, negative-rate integral
//!   and the search over initial states.
//! * [`dilation`]: explicit environment construction used as an independent check.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channels;
pub mod dilation;
pub mod entropy;
pub mod error;
pub mod optimize;
pub mod qmat;
pub mod quad;
pub mod random;
pub mod witness;

pub use error::{Error, Result};
