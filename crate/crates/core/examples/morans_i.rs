//! Spatial autocorrelation of attention maps: coherent maps score high,
//! fragmented ones near zero or below.
//!
//! ```text
//! cargo run --example morans_i [-- attention.png|attention.csv]
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use segmetrics::stats::{morans_i, AttentionMap, Contiguity};

fn main() -> segmetrics::Result<()> {
    if let Some(path) = std::env::args().nth(1) {
        let map = AttentionMap::load(&path)?;
        println!("{path}: {:.4}", morans_i(&map, Contiguity::Rook)?);
        return Ok(());
    }
    let k = 64;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let blob = AttentionMap::new(k, k, (0..k * k).map(|i| {
        let (r, c) = ((i / k) as f64 - 32.0, (i % k) as f64 - 32.0);
        (-(r * r + c * c) / 200.0).exp()
    }).collect())?;
    let speckle = AttentionMap::new(k, k, (0..k * k).map(|_| rng.random_range(0.0..1.0)).collect())?;
    let checker = AttentionMap::new(k, k, (0..k * k).map(|i| ((i / k + i % k) % 2) as f64).collect())?;

    for (name, map) in [("single blob", &blob), ("speckle", &speckle), ("checkerboard", &checker)] {
        println!(
            "{name:<13} rook {:+.4}  queen {:+.4}",
            morans_i(map, Contiguity::Rook)?,
            morans_i(map, Contiguity::Queen)?
        );
    }
    Ok(())
}
