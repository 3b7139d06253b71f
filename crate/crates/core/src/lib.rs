//! Rank-based dependence measurement.
//!
//! The crate computes the xi correlation coefficient `xi_n(X, Y)` in
//! `O(n log n)`, its asymptotic independence test (closed-form, estimated
//! variance, or permutation), the nearest-neighbour conditional dependence
//! coefficient `T_n` with FOCI variable selection, and multivariate and
//! conditional xi through an order-preserving digit-interlacing key for
//! points of `R^d`. A seeded simulation harness reproduces reference
//! Monte Carlo studies.
//!
//! Inputs are generic over `f32` and `f64` (see [`Scalar`]). Every
//! statistic is assembled from exact integer rank sums and returned as
//! `f64`. Tie-breaking randomness always comes from a caller-supplied
//! generator, so any result is reproducible from a seed.

pub mod cond_xi;
pub mod condep;
pub mod encode;
pub mod error;
pub mod foci;
pub mod keys;
pub mod neighbors;
pub mod points;
pub mod rank;
pub mod scalar;
pub mod seed;
pub mod sim;
pub mod xi;

pub use cond_xi::{cond_xi, CondXiResult};
pub use condep::{t_n, t_n_unconditional, TResult, TripleSample};
pub use encode::{encode, encode_sample, EncodedKey, EncodingParams};
pub use error::{Error, Result};
pub use foci::{foci_select, FociReport, StopReason};
pub use keys::{KeyPrecision, OrderKey};
pub use neighbors::{nearest_neighbors, NeighborMap};
pub use null_test::{xi_permutation_test, xi_test, IndependenceTest, TestMethod};
pub use points::PointSet;
pub use rank::{PairedSample, RankProfile};
pub use scalar::{Finite, Scalar};
pub use seed::{child_rng, rng_from_seed, split_seed, XiRng};
pub use xi::{xi_n, xi_scalars, XiResult};

pub type PairedSampleF64 = PairedSample<Finite<f64>, Finite<f64>>;
pub type PairedSampleF32 = PairedSample<Finite<f32>, Finite<f32>>;
pub type PointSetF64 = PointSet<f64>;
pub type PointSetF32 = PointSet<f32>;
pub type TripleSampleF64 = TripleSample<f64>;
pub type TripleSampleF32 = TripleSample<f32>;
pub type OrderKeyF64 = OrderKey<f64>;
pub type OrderKeyF32 = OrderKey<f32>;
