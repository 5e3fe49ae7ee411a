//! Expansion and sieve computations over finite matrix groups.
//!
//! * [`group`]: F_p and rational matrices, breadth-first enumeration of
//!   SL_d(F_p), characteristic polynomials, cycle types, heights.
//! * [`spectral`]: Markov and Laplace operators on Cayley graphs, the
//!   spectral gap, trace identities and flattening trajectories.
//! * [`walk`]: exact convolution walks, Monte Carlo walks on integer matrix
//!   groups with per-prime residues, decay fits, strong approximation scans.
//! * [`approx`]: product sets, covering constants, tripling, energy and
//!   Larsen-Pink ratios.
//! * [`sieve`]: prime batteries, exclusion densities and the group sieve.
//! * [`cli`]: configuration, dispatch and report files for the binary.

pub mod approx;
pub mod cli;
pub mod error;
pub mod group;
pub mod numeric;
pub mod sieve;
pub mod spectral;
pub mod walk;

pub use error::{Error, Result};
