//! Controlled synthetic datasets and geometric ablations.
//!
//! The tree-like benchmark places one connected component of a source mask,
//! stretched to a fixed bounding box, at a random spot on a blank canvas and
//! paints foreground and background with two distinct textures, repeated for
//! several texture pairs per object. The module also hosts the skeleton
//! thickening and zoom transforms plus prompt sampling.

mod textures;
pub mod trees;

pub use textures::TextureBank;
pub use trees::{branching_skeleton, draw_line, tree_mask, TreeParams};

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imgcore::{
    connected_components, dilate, skeletonize, tight_bbox, BBox, BinaryMask, Connectivity,
    RasterImage, StructuringElement,
};
use crate::seed::derive_seed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub canvas: usize,
    pub target_bbox: usize,
    /// Texture pairs (images) per object.
    pub texture_pairs: usize,
    pub seed: u64,
    /// Scale the longer bbox edge to `target_bbox` instead of stretching
    /// both edges.
    pub preserve_aspect: bool,
}

impl Default for SynthSpec {
    fn default() -> Self {
        SynthSpec {
            canvas: 1024,
            target_bbox: 512,
            texture_pairs: 7,
            seed: 0,
            preserve_aspect: false,
        }
    }
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        if self.target_bbox == 0 || self.target_bbox > self.canvas {
            return Err(Error::InvalidConfig(format!(
                "target bbox {} must lie in 1..={}",
                self.target_bbox, self.canvas
            )));
        }
        if self.texture_pairs == 0 {
            return Err(Error::InvalidConfig("need at least one texture pair".into()));
        }
        Ok(())
    }
}

/// One uniformly chosen 8-connected component of `m`.
pub fn sample_component<R: Rng + ?Sized>(m: &BinaryMask, rng: &mut R) -> Result<BinaryMask> {
    let cc = connected_components(m, Connectivity::Eight);
    if cc.count == 0 {
        return Err(Error::EmptyMask);
    }
    let label = rng.random_range(1..=cc.count) as u32;
    Ok(cc.component(label))
}

/// Nearest-neighbour resize of a tight crop whose edge rows and columns
/// keep at least one foreground pixel, so the output bbox is the full frame.
fn resize_crop_tight(crop: &BinaryMask, height: usize, width: usize) -> BinaryMask {
    let mut out = crate::imgcore::resize_mask_nn(crop, height, width);
    let (sh, sw) = crop.dims();
    let map = |i: usize, src: usize, dst: usize| {
        if src == 1 {
            0
        } else {
            (i * (dst - 1) + (src - 1) / 2) / (src - 1)
        }
    };
    // Downsampling can skip the source pixels that make a border row/column
    // non-empty; project them back onto the frame.
    for (edge_r, src_r) in [(0, 0), (height - 1, sh - 1)] {
        if !(0..width).any(|c| out.get(edge_r, c)) {
            for c in (0..sw).filter(|&c| crop.get(src_r, c)) {
                out.set(edge_r, map(c, sw, width), true);
            }
        }
    }
    for (edge_c, src_c) in [(0, 0), (width - 1, sw - 1)] {
        if !(0..height).any(|r| out.get(r, edge_c)) {
            for r in (0..sh).filter(|&r| crop.get(r, src_c)) {
                out.set(map(r, sh, height), edge_c, true);
            }
        }
    }
    out
}

/// Stretches the component's tight crop to `target_bbox` and drops it at a
/// uniformly random position on a blank canvas.
pub fn place_object<R: Rng + ?Sized>(
    comp: &BinaryMask,
    spec: &SynthSpec,
    rng: &mut R,
) -> Result<BinaryMask> {
    spec.validate()?;
    let bbox = tight_bbox(comp)?;
    let crop = comp.crop(&bbox);
    let (th, tw) = if spec.preserve_aspect {
        let scale = spec.target_bbox as f64 / bbox.longer_edge() as f64;
        (
            ((bbox.height as f64 * scale).round() as usize).clamp(1, spec.target_bbox),
            ((bbox.width as f64 * scale).round() as usize).clamp(1, spec.target_bbox),
        )
    } else {
        (spec.target_bbox, spec.target_bbox)
    };
    let resized = resize_crop_tight(&crop, th, tw);
    let top = rng.random_range(0..=spec.canvas - th);
    let left = rng.random_range(0..=spec.canvas - tw);
    let mut out = BinaryMask::new(spec.canvas, spec.canvas);
    for (r, c) in resized.foreground() {
        out.set(top + r, left + c, true);
    }
    Ok(out)
}

/// Paints foreground pixels from `fg` and the rest from `bg`, tiling both
/// textures from the canvas origin.
pub fn texturize(m: &BinaryMask, fg: &RasterImage, bg: &RasterImage) -> RasterImage {
    let (fg, bg) = (fg.to_rgb(), bg.to_rgb());
    let (h, w) = m.dims();
    let mut out = RasterImage::new(h, w, 3);
    for r in 0..h {
        for c in 0..w {
            let tile = if m.get(r, c) { &fg } else { &bg };
            let src = tile.pixel(r % tile.height(), c % tile.width());
            for (k, &v) in src.iter().enumerate() {
                out.set(r, c, k, v);
            }
        }
    }
    out
}

/// One placed object and its textured renderings.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthObject {
    pub mask: BinaryMask,
    pub images: Vec<RasterImage>,
    /// `(foreground, background)` texture indices per image.
    pub pairs: Vec<(usize, usize)>,
}

/// Object `index` of a dataset: a component of `source` placed on the
/// canvas and painted with `spec.texture_pairs` texture pairs. The generator
/// is seeded from `spec.seed` and `index` alone.
pub fn generate_object(
    index: usize,
    source: &BinaryMask,
    bank: &TextureBank,
    spec: &SynthSpec,
) -> Result<SynthObject> {
    spec.validate()?;
    if bank.len() < 2 {
        return Err(Error::InsufficientTextures(bank.len()));
    }
    let mut rng =
        rand_chacha::ChaCha8Rng::seed_from_u64(derive_seed(spec.seed, &format!("object-{index}")));
    let comp = sample_component(source, &mut rng)?;
    let mask = place_object(&comp, spec, &mut rng)?;
    let mut images = Vec::with_capacity(spec.texture_pairs);
    let mut pairs = Vec::with_capacity(spec.texture_pairs);
    for _ in 0..spec.texture_pairs {
        let pair = index::sample(&mut rng, bank.len(), 2);
        let (f, b) = (pair.index(0), pair.index(1));
        images.push(texturize(&mask, &bank.textures[f], &bank.textures[b]));
        pairs.push((f, b));
    }
    Ok(SynthObject {
        mask,
        images,
        pairs,
    })
}

/// Builds one object per source mask, in parallel. Output does not depend
/// on scheduling.
pub fn generate_dataset(
    source_masks: &[BinaryMask],
    bank: &TextureBank,
    spec: &SynthSpec,
) -> Result<Vec<SynthObject>> {
    spec.validate()?;
    if bank.len() < 2 {
        return Err(Error::InsufficientTextures(bank.len()));
    }
    source_masks
        .par_iter()
        .enumerate()
        .map(|(i, src)| generate_object(i, src, bank, spec))
        .collect()
}

/// Skeleton of `m` dilated with a disk: straight lines end up exactly
/// `2·radius + 1` pixels wide.
pub fn thicken_skeleton(m: &BinaryMask, radius: usize) -> BinaryMask {
    dilate(&skeletonize(m), &StructuringElement::disk(radius))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Zoomed {
    Scaled { image: RasterImage, mask: BinaryMask },
    /// The scaled object would not fit on the canvas.
    Rejected,
}

/// Rescales image and mask about the object's bbox centre so that the
/// longer bbox edge becomes `p` pixels, keeping the canvas size. Areas that
/// come from outside the source are zero.
pub fn zoom_to_scale(x: &RasterImage, m: &BinaryMask, p: usize) -> Result<Zoomed> {
    if x.dims() != m.dims() {
        return Err(Error::DimensionMismatch {
            expected: x.dims(),
            got: m.dims(),
        });
    }
    if p == 0 {
        return Err(Error::InvalidConfig("target edge must be >= 1".into()));
    }
    let bbox = tight_bbox(m)?;
    let (h, w) = m.dims();
    let s = p as f64 / bbox.longer_edge() as f64;
    let cy = bbox.top as f64 + bbox.height as f64 / 2.0;
    let cx = bbox.left as f64 + bbox.width as f64 / 2.0;
    let (half_h, half_w) = (s * bbox.height as f64 / 2.0, s * bbox.width as f64 / 2.0);
    const EPS: f64 = 1e-9;
    if cy - half_h < -EPS || cy + half_h > h as f64 + EPS || cx - half_w < -EPS || cx + half_w > w as f64 + EPS {
        return Ok(Zoomed::Rejected);
    }

    let src_y: Vec<f64> = (0..h).map(|y| cy + (y as f64 + 0.5 - cy) / s).collect();
    let src_x: Vec<f64> = (0..w).map(|c| cx + (c as f64 + 0.5 - cx) / s).collect();

    let mut mask = BinaryMask::new(h, w);
    for (r, &sy) in src_y.iter().enumerate() {
        if sy < 0.0 || sy >= h as f64 {
            continue;
        }
        for (c, &sx) in src_x.iter().enumerate() {
            if sx >= 0.0 && sx < w as f64 {
                mask.set(r, c, m.get(sy as usize, sx as usize));
            }
        }
    }

    let ch = x.channels();
    let tap = |v: f64, n: usize| -> [(Option<usize>, f64); 2] {
        let f = v - 0.5;
        let i0 = f.floor();
        let t = f - i0;
        let idx = |i: f64| (i >= 0.0 && i < n as f64).then_some(i as usize);
        [(idx(i0), 1.0 - t), (idx(i0 + 1.0), t)]
    };
    let mut image = RasterImage::new(h, w, ch);
    for (r, &sy) in src_y.iter().enumerate() {
        let ty = tap(sy, h);
        for (c, &sx) in src_x.iter().enumerate() {
            let tx = tap(sx, w);
            for k in 0..ch {
                let mut v = 0.0;
                for &(yi, wy) in &ty {
                    for &(xi, wx) in &tx {
                        if let (Some(yi), Some(xi)) = (yi, xi) {
                            v += wy * wx * x.get(yi, xi, k) as f64;
                        }
                    }
                }
                image.set(r, c, k, v.round().clamp(0.0, 255.0) as u8);
            }
        }
    }
    Ok(Zoomed::Scaled { image, mask })
}

/// Box and point prompts for a promptable segmenter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptSet {
    pub bbox: BBox,
    pub positives: Vec<(usize, usize)>,
    pub negatives: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct PromptSetWire {
    bbox: [usize; 4],
    pos: Vec<[usize; 2]>,
    neg: Vec<[usize; 2]>,
}

impl Serialize for PromptSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PromptSetWire {
            bbox: [self.bbox.top, self.bbox.left, self.bbox.height, self.bbox.width],
            pos: self.positives.iter().map(|&(r, c)| [r, c]).collect(),
            neg: self.negatives.iter().map(|&(r, c)| [r, c]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PromptSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = PromptSetWire::deserialize(d)?;
        Ok(PromptSet {
            bbox: BBox::new(w.bbox[0], w.bbox[1], w.bbox[2], w.bbox[3]),
            positives: w.pos.into_iter().map(|[r, c]| (r, c)).collect(),
            negatives: w.neg.into_iter().map(|[r, c]| (r, c)).collect(),
        })
    }
}

/// Tight box plus `n_pos` foreground and `n_neg` in-box background points,
/// each drawn uniformly without replacement.
pub fn sample_prompts<R: Rng + ?Sized>(
    m: &BinaryMask,
    n_pos: usize,
    n_neg: usize,
    rng: &mut R,
) -> Result<PromptSet> {
    let bbox = tight_bbox(m)?;
    let (mut fg, mut bg) = (Vec::new(), Vec::new());
    for r in bbox.top..bbox.bottom() {
        for c in bbox.left..bbox.right() {
            if m.get(r, c) {
                fg.push((r, c));
            } else {
                bg.push((r, c));
            }
        }
    }
    let mut draw = |pool: &[(usize, usize)], n: usize| -> Result<Vec<(usize, usize)>> {
        if pool.len() < n {
            return Err(Error::InsufficientPixels {
                requested: n,
                available: pool.len(),
            });
        }
        Ok(index::sample(rng, pool.len(), n)
            .into_iter()
            .map(|i| pool[i])
            .collect())
    };
    let positives = draw(&fg, n_pos)?;
    let negatives = draw(&bg, n_neg)?;
    Ok(PromptSet {
        bbox,
        positives,
        negatives,
    })
}
