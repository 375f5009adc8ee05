#![no_std]
// `!(x > 0.0)` is used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
extern crate alloc;

pub mod algebra;
pub mod fields;
pub mod painleve;
pub mod polynomial;
pub mod rng;
pub mod verifier;
