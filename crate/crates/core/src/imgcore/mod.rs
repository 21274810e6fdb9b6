//! Raster primitives: masks, images, structuring elements and the handful of
//! morphology operations the metrics rely on.

mod components;
mod element;
pub mod io;
mod raster;
mod resize;
mod skeleton;

pub use components::{connected_components, Connectivity, LabeledComponents};
pub use element::{dilate, neighbor_counts, ElementShape, StructuringElement};
pub use raster::{tight_bbox, BBox, BinaryMask, Grid, RasterImage};
pub use resize::{resize_image, resize_mask_nn};
pub use skeleton::skeletonize;
