//! Metrics for explaining where promptable segmentation models break down.
//!
//! The crate measures two families of object properties over
//! (image, mask, prediction) corpora:
//!
//! - **tree-likeness**: the contour pixel rate ([`treelike::cpr`]) and the
//!   difference of Gini impurity deviation between a global and a local
//!   window scale ([`treelike::dogd`]);
//! - **textural separability**: how well a linear probe separates
//!   first-layer convolution features inside an object from those in a thin
//!   band just outside it ([`separability::textural_separability`]).
//!
//! Around those sit the pieces needed to run controlled studies: raster
//! primitives ([`imgcore`]), a synthetic tree-like dataset generator
//! ([`synthgen`]), correlation and aggregation statistics ([`stats`]) and a
//! batch front-end driven by JSON Lines manifests ([`pipeline`]).
//!
//! ```
//! use segmetrics::imgcore::BinaryMask;
//! use segmetrics::treelike::{cpr, dogd};
//!
//! let mut m = BinaryMask::new(256, 256);
//! m.fill_rect(78, 78, 100, 100, true);
//! assert!((cpr(&m, 5).unwrap() - 0.19).abs() < 1e-12);
//! assert!(dogd(&m, 127, 3).unwrap().abs() <= 0.25);
//! ```

pub mod error;
pub mod imgcore;
pub mod pipeline;
pub mod seed;
pub mod separability;
pub mod stats;
pub mod synthgen;
pub mod treelike;

pub use error::{Error, Result};
