//! Exact sparse quantum state preparation.
//!
//! Given an `n`-qubit state with `d` nonzero computational-basis amplitudes and
//! a budget of `m` ancillary qubits, [`sqsp::synthesize`] builds a circuit over
//! single-qubit gates and CNOTs that maps `|0…0⟩` to the target state, with all
//! ancillae returned to `|0⟩`.
//!
//! The construction runs in three stages:
//!
//! 1. a dense `⌈log d⌉`-qubit state `Σ αᵢ|i⟩` is prepared on an index register
//!    ([`dense`]);
//! 2. the index is expanded into the `(n, r)`-unary encoding of each `qᵢ`, i.e.
//!    `n/r` one-hot blocks of width `2^r`, processing `k` terms at a time;
//! 3. every block is compacted back to `r` binary bits in parallel.
//!
//! Larger `r` and `k` cost more ancillae and buy depth; [`sqsp::select_parameters`]
//! picks them from an explicit qubit ledger.
//!
//! [`sim`] is a sparse statevector simulator used to verify circuits exactly.
//!
//! The crate is `no_std` (with `alloc`) when built without the default `std`
//! feature.

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod bits;
pub mod circuit;
pub mod dense;
mod error;
pub mod pool;
pub mod primitives;
pub mod sim;
pub mod sqsp;

pub use bits::BasisString;
pub use circuit::{Circuit, Gate, McxStrategy, Metrics, QubitId, Register};
pub use error::Error;
pub use pool::ScratchPool;
pub use sim::SparseVector;
pub use sqsp::{synthesize, SparseStateSpec, SynthesisOptions, SynthesisPlan};

pub type Result<T, E = Error> = core::result::Result<T, E>;

pub use num_complex::Complex64;
