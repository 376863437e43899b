//! Invariants of map germs (ℂ²,0) → (ℂ³,0), embedded resolution of plane
//! curves, and plumbing graphs of the boundary of the Milnor fibre of the
//! image surface.

pub mod arith;
pub mod boundary;
pub mod catalog;
pub mod local;
pub mod germ;
pub mod input;
pub mod plumbing;
pub mod resolution;
pub mod verify;

pub use arith::{GaussRational, MultiPoly, PolyMatrix};
