//! Textural separability for objects that differ from their surroundings
//! by colour, by texture, or not at all.
//!
//! ```text
//! cargo run --example separability [-- bank.txfb]
//! ```
//!
//! Without a bank file a seeded random bank of the canonical geometry
//! (64 filters, 7x7, stride 2, padding 3) is used. Pretrained first-layer
//! weights exported to the TXFB format give more meaningful scores.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use segmetrics::imgcore::{BinaryMask, RasterImage};
use segmetrics::separability::{extract_features, load_filter_bank, textural_separability, ConvFilterBank, ProbeConfig};

fn main() -> segmetrics::Result<()> {
    let bank = match std::env::args().nth(1) {
        Some(path) => load_filter_bank(path)?,
        None => ConvFilterBank::random(0),
    };
    let size = 256;
    let mask = BinaryMask::from_fn(size, size, |r, c| {
        let (dy, dx) = (r as f64 - 128.0, c as f64 - 128.0);
        dy * dy + dx * dx < 70.0 * 70.0
    });

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let noise: Vec<u8> = (0..size * size * 3).map(|_| rng.random()).collect();
    let stripes = |r: usize, c: usize, period: usize| if ((r + c) / period).is_multiple_of(2) { 200 } else { 60 };

    let cases: Vec<(&str, RasterImage)> = vec![
        ("bright on dark", RasterImage::from_fn(size, size, 3, |r, c, _| if mask.get(r, c) { 220 } else { 30 })),
        ("fine vs coarse stripes", RasterImage::from_fn(size, size, 3, |r, c, _| {
            stripes(r, c, if mask.get(r, c) { 3 } else { 12 })
        })),
        ("noise on noise", RasterImage::from_fn(size, size, 3, |r, c, k| noise[(r * size + c) * 3 + k])),
    ];

    let feat = extract_features(&cases[0].1, &bank)?;
    println!(
        "{}x{} input -> {}x{}x{} features",
        size, size, feat.height, feat.width, feat.channels
    );
    let cfg = ProbeConfig::default();
    for (name, img) in &cases {
        let acc = textural_separability(img, &mask, &bank, &cfg, &mut ChaCha8Rng::seed_from_u64(cfg.seed))?;
        println!("{name:<24} held-out accuracy {acc:.3}");
    }
    Ok(())
}
