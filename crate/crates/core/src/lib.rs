//! Sequential affine transformations on quantum amplitudes.
//!
//! A normalized vector `Ψ` is amplitude-encoded into a register and driven
//! through `A_k(…(A_1 Ψ + B_1)…) + B_k`. Each linear part is applied through a
//! unitary dilation on one fresh ancilla; each translation is added with a
//! Hadamard-interfered ancilla. After `k` steps the result sits, scaled by
//! `1/2^k`, on the first `N` basis amplitudes.

pub mod addsub;
pub mod apps;
pub mod baseline;
pub mod blockenc;
pub mod circuit;
pub mod error;
pub mod linalg;
pub mod pipeline;
pub mod random;
pub mod simulator;
pub mod synthesis;

pub use error::{Error, Result};
pub use linalg::{c64, ComplexMatrix, ComplexVector};
pub use simulator::QuantumState;
