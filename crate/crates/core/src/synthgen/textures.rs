use std::path::Path;

use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::imgcore::io::load_image;
use crate::imgcore::RasterImage;

/// Named texture tiles to paint objects and backgrounds with.
#[derive(Debug, Clone, PartialEq)]
pub struct TextureBank {
    pub textures: Vec<RasterImage>,
    pub names: Vec<String>,
}

const IMAGE_EXTENSIONS: &[&str] = &["png", "jpg", "jpeg", "bmp", "tif", "tiff"];

impl TextureBank {
    pub fn new(textures: Vec<RasterImage>, names: Vec<String>) -> Result<Self> {
        if textures.len() != names.len() {
            return Err(Error::LengthMismatch(textures.len(), names.len()));
        }
        if textures.len() < 2 {
            return Err(Error::InsufficientTextures(textures.len()));
        }
        Ok(TextureBank {
            textures: textures.into_iter().map(|t| t.to_rgb()).collect(),
            names,
        })
    }

    /// Loads every PNG/JPEG tile in `dir`, ordered by file name.
    pub fn from_dir(dir: impl AsRef<Path>) -> Result<Self> {
        let mut paths: Vec<_> = std::fs::read_dir(dir.as_ref())?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| {
                p.extension()
                    .and_then(|e| e.to_str())
                    .is_some_and(|e| IMAGE_EXTENSIONS.contains(&e.to_ascii_lowercase().as_str()))
            })
            .collect();
        paths.sort();
        let mut textures = Vec::new();
        let mut names = Vec::new();
        for p in paths {
            match load_image(&p) {
                Ok(img) => {
                    names.push(p.file_stem().unwrap_or_default().to_string_lossy().into_owned());
                    textures.push(img);
                }
                Err(e) => log::warn!("skipping unreadable texture {}: {e}", p.display()),
            }
        }
        Self::new(textures, names)
    }

    /// Seeded synthetic tiles (noise, stripes, checks and blobs in random
    /// colours) for when no texture photographs are at hand.
    pub fn procedural(count: usize, tile: usize, seed: u64) -> Result<Self> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut textures = Vec::new();
        let mut names = Vec::new();
        for i in 0..count {
            let kind = i % 4;
            let a: [f64; 3] = std::array::from_fn(|_| rng.random_range(0.0..255.0));
            let b: [f64; 3] = std::array::from_fn(|_| rng.random_range(0.0..255.0));
            let period = rng.random_range(4..=16) as f64;
            let angle = rng.random_range(0.0..std::f64::consts::PI);
            let noise: Vec<f64> = (0..tile * tile).map(|_| rng.random_range(0.0..1.0)).collect();
            let img = RasterImage::from_fn(tile, tile, 3, |r, c, ch| {
                let (y, x) = (r as f64, c as f64);
                let t = match kind {
                    0 => noise[r * tile + c],
                    1 => 0.5 + 0.5 * ((y * angle.sin() + x * angle.cos()) * std::f64::consts::TAU / period).sin(),
                    2 => (((r / period as usize) + (c / period as usize)) % 2) as f64,
                    _ => {
                        let s = (y / period).sin() * (x / period).cos();
                        (0.5 + 0.5 * s) * 0.8 + 0.2 * noise[r * tile + c]
                    }
                };
                (a[ch] * (1.0 - t) + b[ch] * t).round().clamp(0.0, 255.0) as u8
            });
            names.push(format!("proc{i:02}"));
            textures.push(img);
        }
        Self::new(textures, names)
    }

    pub fn len(&self) -> usize {
        self.textures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.textures.is_empty()
    }
}
