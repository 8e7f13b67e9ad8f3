//! B-matrix associative memory with active-site stimulation.
//!
//! Memories are bipolar patterns stored in an integer Hebbian weight matrix
//! `T = B + Bᵀ`. Recall grows a fragment one neuron at a time along an update
//! order derived from neuron geometry, starting from a set of clamped neurons.
//! Training also marks, per memory, the neurons whose bits set that memory
//! apart from the others ("active sites"); those are the clamp points used by
//! the multi-site retrieval strategies.
//!
//! Module map:
//!
//! * [`pattern`]: spins, bipolar vectors, memory sets and their text format.
//! * [`matrix`]: the weight matrix, update orders and basis permutation.
//! * [`training`]: Hebbian training, neuron geometry and proximity orders.
//! * [`sites`]: active-site identification and prime activation levels.
//! * [`retrieval`]: fragment growth and the four retrieval strategies.
//! * [`complexity`]: exact operation counts for retrieval sweeps.
//! * [`experiments`]: seeded Monte-Carlo capacity experiments.

pub mod complexity;
pub mod error;
pub mod experiments;
pub mod matrix;
pub mod pattern;
pub mod retrieval;
pub mod sites;
pub mod training;

mod csv;

pub use error::{Error, Result};
pub use matrix::{permute_matrix, UpdateOrder, WeightMatrix};
pub use pattern::{hamming, sgn, BipolarVector, MemorySet, Spin};
