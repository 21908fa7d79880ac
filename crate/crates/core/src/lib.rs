//! Generalized Shannon entropy of finite distributions.
//!
//! The forward map sends a distribution `p` to the Shannon entropy of its
//! order-`m` escort `p_i^m / sum_j p_j^m`, evaluated at a finite set of orders.
//! This crate evaluates that map in the log domain, checks the determinant
//! structure of its Jacobian, inverts signatures back to sorted distributions,
//! builds collision pairs when too few orders are used, and runs signature
//! based goodness-of-fit tests.
//!
//! The crate is `no_std` (it needs `alloc`). The `parallel` feature pulls in
//! `std` and rayon for the randomized sweeps and bootstrap loops.
#![cfg_attr(not(feature = "std"), no_std)]
// `!(x > 0.0)` style guards are meant to catch NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod det;
pub mod dist;
pub mod entropy;
pub mod error;
pub mod gof;
pub mod inverse;
pub mod rng;
pub mod tp;
pub mod witness;

pub use nalgebra::DMatrix;

pub use dist::{
    make_sorted, make_sorted_with_tol, AsProbs, Distribution, GseSignature, OrderSet,
    ScalarProfile, SortedDistribution, DEFAULT_M_MAX, DEFAULT_TIE_TOL, SUM_TOL,
};
pub use entropy::{escort, gse, gse_gradient, gse_signature, phi, scalar_profile, shannon};
pub use error::{Error, Result};
