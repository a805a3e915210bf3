//! Dynamics of multi-valued polynomial correspondences g(y) = f(x): escape
//! rates, heights, unicritical recursions over finite fields, and a renderer
//! for the bounded-critical-path set.

// `!(x <= y)` is used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod cli;
pub mod correspondence;
pub mod error;
pub mod heights;
pub mod localheights;
pub mod sdset;
pub mod unicritical;

pub use error::{CorrdynError, Result};
