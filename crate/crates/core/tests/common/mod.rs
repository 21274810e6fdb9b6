//! Fixture corpora shared by the integration tests.
#![allow(dead_code)]

use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use segmetrics::imgcore::io::{save_image, save_mask};
use segmetrics::imgcore::BinaryMask;
use segmetrics::pipeline::{Manifest, ManifestRecord};
use segmetrics::synthgen::{texturize, tree_mask, TextureBank, TreeParams};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform random mask with foreground density drawn per mask.
pub fn random_mask(rng: &mut impl Rng, h: usize, w: usize) -> BinaryMask {
    let p = rng.random_range(0.05..0.95);
    BinaryMask::from_fn(h, w, |_, _| rng.random_bool(p))
}

/// Random mask of blocky blobs, closer to real objects than pixel noise.
pub fn blob_mask(rng: &mut impl Rng, h: usize, w: usize) -> BinaryMask {
    let mut m = BinaryMask::new(h, w);
    for _ in 0..rng.random_range(1..6) {
        let bh = rng.random_range(1..=h);
        let bw = rng.random_range(1..=w);
        let top = rng.random_range(0..=h - bh);
        let left = rng.random_range(0..=w - bw);
        m.fill_rect(top, left, bh, bw, rng.random_bool(0.75));
    }
    m
}

/// Flips pixels near the boundary of `gt` to imitate an imperfect model.
pub fn perturb(gt: &BinaryMask, rng: &mut impl Rng, flip: f64) -> BinaryMask {
    BinaryMask::from_fn(gt.height(), gt.width(), |r, c| {
        let v = gt.get(r, c);
        let edge = (r > 0 && gt.get(r - 1, c) != v) || (c > 0 && gt.get(r, c - 1) != v);
        if edge && rng.random_bool(flip) {
            !v
        } else {
            v
        }
    })
}

/// Writes `n` records of `size`² tree objects (three predictions each plus
/// an attention grid) and returns the manifest path. The record with index
/// `empty_at`, if any, gets an empty ground truth.
pub fn write_corpus(dir: &Path, n: usize, size: usize, seed: u64, empty_at: Option<usize>) -> PathBuf {
    let bank = TextureBank::procedural(6, 24, seed).unwrap();
    let params = TreeParams::new(size);
    let mut records = Vec::new();
    for i in 0..n {
        let mut rng = rng(seed * 1000 + i as u64);
        let id = format!("rec{i:03}");
        let width = rng.random_range(1..=9);
        let gt = if Some(i) == empty_at {
            BinaryMask::new(size, size)
        } else {
            tree_mask(&params, width, &mut rng)
        };
        let fg = rng.random_range(0..bank.len());
        let bg = (fg + rng.random_range(1..bank.len())) % bank.len();
        let img = texturize(&gt, &bank.textures[fg], &bank.textures[bg]);
        save_image(&img, dir.join(format!("{id}_img.png"))).unwrap();
        save_mask(&gt, dir.join(format!("{id}_gt.png"))).unwrap();
        let mut preds = Vec::new();
        for k in 0..3 {
            let name = format!("{id}_pred{k}.png");
            save_mask(&perturb(&gt, &mut rng, 0.2 + 0.05 * width as f64), dir.join(&name)).unwrap();
            preds.push(PathBuf::from(name));
        }
        let grid: Vec<String> = (0..8)
            .map(|r| {
                (0..8)
                    .map(|c| format!("{:.3}", rng.random_range(0.0..1.0) + ((r / 4 + c / 4) % 2) as f64))
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        let att = format!("{id}_att.csv");
        std::fs::write(dir.join(&att), grid.join("\n")).unwrap();
        records.push(ManifestRecord {
            id,
            image_path: format!("rec{i:03}_img.png").into(),
            gt_mask_path: format!("rec{i:03}_gt.png").into(),
            pred_mask_paths: preds,
            dataset: "fixture".into(),
            object_class: Some(if i % 2 == 0 { "even" } else { "odd" }.into()),
            attention_map_path: Some(att.into()),
        });
    }
    // shuffle-free but not id-sorted: reverse so writers must sort
    records.reverse();
    let manifest = Manifest::new(dir, records).unwrap();
    let path = dir.join("manifest.jsonl");
    manifest.save(&path).unwrap();
    path
}
