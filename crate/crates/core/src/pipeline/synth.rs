use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use super::{Manifest, ManifestRecord};
use crate::error::{Error, Result};
use crate::imgcore::io::{load_mask, save_image, save_mask};
use crate::imgcore::BinaryMask;
use crate::seed::derive_seed;
use crate::synthgen::{generate_object, tree_mask, SynthSpec, TextureBank, TreeParams};

/// Where the source masks of a synthetic dataset come from.
#[derive(Debug, Clone, PartialEq)]
pub enum SynthSource {
    /// Every PNG in a directory (sorted by name), e.g. vessel or road masks.
    MaskDir(PathBuf),
    /// `count` procedural trees on `size`² canvases with line widths drawn
    /// uniformly from `widths`.
    Procedural {
        count: usize,
        size: usize,
        widths: (usize, usize),
    },
}

impl SynthSource {
    fn masks(&self, seed: u64) -> Result<Vec<BinaryMask>> {
        match self {
            SynthSource::MaskDir(dir) => {
                let mut paths: Vec<_> = std::fs::read_dir(dir)?
                    .filter_map(|e| e.ok().map(|e| e.path()))
                    .filter(|p| p.extension().is_some_and(|e| e.eq_ignore_ascii_case("png")))
                    .collect();
                paths.sort();
                paths.iter().map(load_mask).collect()
            }
            &SynthSource::Procedural { count, size, widths } => {
                if widths.0 == 0 || widths.0 > widths.1 {
                    return Err(Error::InvalidConfig(format!("bad width range {widths:?}")));
                }
                let params = TreeParams::new(size);
                Ok((0..count)
                    .into_par_iter()
                    .map(|i| {
                        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(derive_seed(
                            seed,
                            &format!("tree-{i}"),
                        ));
                        let width = rng.random_range(widths.0..=widths.1);
                        tree_mask(&params, width, &mut rng)
                    })
                    .collect())
            }
        }
    }
}

/// Builds a synthetic dataset on disk: `<out>/<id>/mask.png`,
/// `<out>/<id>/img_<k>.png` and a `manifest.jsonl` whose records point at
/// the first image of each object. Without a texture directory a seeded
/// procedural bank is used.
pub fn cmd_synth(
    texture_dir: Option<&Path>,
    source: &SynthSource,
    out_dir: &Path,
    spec: &SynthSpec,
) -> Result<Manifest> {
    spec.validate()?;
    let bank = match texture_dir {
        Some(dir) => TextureBank::from_dir(dir)?,
        None => {
            log::info!("no texture directory given; using procedural textures");
            TextureBank::procedural(12, 64, spec.seed)?
        }
    };
    let sources = source.masks(spec.seed)?;
    std::fs::create_dir_all(out_dir)?;
    let records = sources
        .par_iter()
        .enumerate()
        .map(|(i, src)| {
            let id = format!("obj{i:04}");
            let obj = generate_object(i, src, &bank, spec)?;
            let dir = out_dir.join(&id);
            std::fs::create_dir_all(&dir)?;
            save_mask(&obj.mask, dir.join("mask.png"))?;
            for (k, img) in obj.images.iter().enumerate() {
                save_image(img, dir.join(format!("img_{k}.png")))?;
            }
            Ok(ManifestRecord {
                image_path: Path::new(&id).join("img_0.png"),
                gt_mask_path: Path::new(&id).join("mask.png"),
                pred_mask_paths: Vec::new(),
                dataset: "synthetic".into(),
                object_class: None,
                attention_map_path: None,
                id,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let manifest = Manifest::new(out_dir, records)?;
    manifest.save(out_dir.join("manifest.jsonl"))?;
    Ok(manifest)
}
