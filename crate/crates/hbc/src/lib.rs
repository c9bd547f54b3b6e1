//! Toolkit for Hadamard quantum broadcast channels.
//!
//! A Hadamard broadcast channel sends Alice's input isometrically to two
//! receivers: Bob gets the coherent measurement record of a rank-one POVM,
//! Charlie gets a state prepared from the measurement outcome. Because
//! Charlie's channel can be simulated by measuring Bob's output and
//! re-preparing, the channel is degradable, and its two-receiver rate
//! regions reduce to single-letter entropic expressions.
//!
//! The crate provides:
//!
//! * [`linalg`] — dense complex matrices, Kronecker products, partial
//!   traces, and a Hermitian eigensolver;
//! * [`channel`] — building a channel from its POVM and prepared states,
//!   applying it and its reductions, and verifying the degrading structure;
//! * [`entropic`] — the rate functionals for classical (`cc`),
//!   classical–quantum (`cq`), and entanglement-assisted (`eac`) tasks;
//! * [`region`] — frontier tracing by scalarized derivative-free search,
//!   plus an independent brute-force oracle for classically-embedded
//!   channels.

pub mod channel;
pub mod entropic;
pub mod linalg;
pub mod region;

mod error;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
