//! Reference implementations used as test oracles.
//!
//! Everything here is deliberately naive and shares no code with
//! `meltdown-core`: cyclic Jacobi instead of Householder/QL, explicit
//! Kronecker products instead of bit arithmetic, normal equations instead of
//! QR, adaptive Simpson instead of the closed-form WKB integral.

pub mod jacobi;
pub mod kron;
pub mod lstsq;
pub mod quad;
pub mod sample;
