//! Textural separability of an object from its immediate surroundings.
//!
//! The image goes through a fixed first-layer convolution bank; the object
//! mask is brought to feature resolution with nearest-neighbour sampling and
//! a band just outside it is grown with a disk. A logistic probe is trained
//! to tell object features from band features, and its held-out accuracy is
//! the score: near 0.5 when the object blends into its surroundings, near 1
//! when its texture stands out.

mod bank;
mod features;
mod probe;

pub use bank::{load_filter_bank, ConvFilterBank, IMAGENET_MEAN, IMAGENET_STD};
pub use features::{extract_features, FeatureMap};
pub use probe::{train_probe, LinearProbe, LogisticLoss, ProbeConfig, Samples};

use rand::seq::index;
use rand::Rng;

use crate::error::{Error, Result};
use crate::imgcore::{dilate, resize_mask_nn, BinaryMask, RasterImage, StructuringElement};

/// `dilate(m, Disk(radius)) \ m`.
pub fn boundary_band(m: &BinaryMask, radius: usize) -> BinaryMask {
    dilate(m, &StructuringElement::disk(radius))
        .and_not(m)
        .expect("same geometry")
}

/// Uniform subsample of `n` items without replacement, kept in input order.
fn subsample<R: Rng + ?Sized>(items: &mut Vec<usize>, n: usize, rng: &mut R) {
    if items.len() <= n {
        return;
    }
    let mut picked = index::sample(rng, items.len(), n).into_vec();
    picked.sort_unstable();
    *items = picked.into_iter().map(|i| items[i]).collect();
}

/// Gathers balanced object/boundary feature vectors.
///
/// Each class is first capped at `max_samples_per_class`, then the larger
/// class is downsampled to the size of the smaller one.
pub fn collect_samples<R: Rng + ?Sized>(
    feat: &FeatureMap,
    m: &BinaryMask,
    band: &BinaryMask,
    cfg: &ProbeConfig,
    rng: &mut R,
) -> Result<Samples> {
    let dims = (feat.height, feat.width);
    for mask in [m, band] {
        if mask.dims() != dims {
            return Err(Error::DimensionMismatch {
                expected: dims,
                got: mask.dims(),
            });
        }
    }
    if !m.and(band)?.is_empty() {
        return Err(Error::InvalidConfig(
            "object and boundary band overlap".into(),
        ));
    }
    let indices = |mask: &BinaryMask| -> Vec<usize> {
        mask.as_slice()
            .iter()
            .enumerate()
            .filter(|(_, &v)| v)
            .map(|(i, _)| i)
            .collect()
    };
    let mut obj = indices(m);
    let mut bdry = indices(band);
    if obj.is_empty() || bdry.is_empty() {
        return Err(Error::DegenerateObject);
    }
    subsample(&mut obj, cfg.max_samples_per_class, rng);
    subsample(&mut bdry, cfg.max_samples_per_class, rng);
    let n = obj.len().min(bdry.len());
    subsample(&mut obj, n, rng);
    subsample(&mut bdry, n, rng);

    let plane = feat.height * feat.width;
    let mut samples = Samples::new(feat.channels);
    for (idx, label) in [(&obj, true), (&bdry, false)] {
        for &p in idx.iter() {
            samples.push(
                (0..feat.channels).map(|ch| feat.values[ch * plane + p] as f64),
                label,
            );
        }
    }
    Ok(samples)
}

/// Held-out accuracy of a linear probe separating object texture from the
/// texture right outside it.
pub fn textural_separability<R: Rng + ?Sized>(
    x: &RasterImage,
    m: &BinaryMask,
    bank: &ConvFilterBank,
    cfg: &ProbeConfig,
    rng: &mut R,
) -> Result<f64> {
    cfg.validate()?;
    if x.dims() != m.dims() {
        return Err(Error::DimensionMismatch {
            expected: x.dims(),
            got: m.dims(),
        });
    }
    if m.is_empty() {
        return Err(Error::EmptyMask);
    }
    let feat = extract_features(x, bank)?;
    let small = resize_mask_nn(m, feat.height, feat.width);
    let band = boundary_band(&small, cfg.boundary_radius);
    let samples = collect_samples(&feat, &small, &band, cfg, rng)?;
    let (_, accuracy) = train_probe(&samples, cfg)?;
    Ok(accuracy)
}
