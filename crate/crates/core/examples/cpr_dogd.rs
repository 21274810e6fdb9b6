//! Tree-likeness of a few reference shapes.
//!
//! ```text
//! cargo run --example cpr_dogd
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use segmetrics::imgcore::BinaryMask;
use segmetrics::synthgen::{tree_mask, TreeParams};
use segmetrics::treelike::{treelike_scores, TreelikeConfig};

fn main() -> segmetrics::Result<()> {
    let cfg = TreelikeConfig::default();
    let mut shapes: Vec<(String, BinaryMask)> = Vec::new();

    let mut square = BinaryMask::new(512, 512);
    square.fill_rect(106, 106, 300, 300, true);
    shapes.push(("solid square".into(), square));

    let ring = BinaryMask::from_fn(512, 512, |r, c| {
        let d = ((r as f64 - 256.0).powi(2) + (c as f64 - 256.0).powi(2)).sqrt();
        (150.0..170.0).contains(&d)
    });
    shapes.push(("ring".into(), ring));

    let comb = BinaryMask::from_fn(512, 512, |r, c| {
        (100..412).contains(&r) && (100..412).contains(&c) && (r < 120 || c % 16 < 4)
    });
    shapes.push(("comb".into(), comb));

    let params = TreeParams::new(512);
    for width in [1, 3, 7, 15] {
        let tree = tree_mask(&params, width, &mut ChaCha8Rng::seed_from_u64(42));
        shapes.push((format!("tree, {width} px lines"), tree));
    }

    println!("R={} a={} b={}", cfg.r, cfg.a, cfg.b);
    println!("{:<20} {:>8} {:>9} {:>8}", "shape", "CPR", "DoGD", "pixels");
    for (name, m) in &shapes {
        let s = treelike_scores(m, &cfg)?;
        println!("{name:<20} {:>8.4} {:>9.4} {:>8}", s.cpr, s.dogd, m.foreground_count());
    }
    Ok(())
}
