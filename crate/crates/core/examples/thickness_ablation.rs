//! Re-thickens one tree skeleton to several line widths and tracks how the
//! tree-likeness metrics respond.
//!
//! ```text
//! cargo run --example thickness_ablation
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use segmetrics::synthgen::{thicken_skeleton, tree_mask, TreeParams};
use segmetrics::treelike::{treelike_scores, TreelikeConfig};

fn main() -> segmetrics::Result<()> {
    let tree = tree_mask(&TreeParams::new(1024), 9, &mut ChaCha8Rng::seed_from_u64(11));
    let cfg = TreelikeConfig::default();
    println!("{:>6} {:>6} {:>8} {:>9}", "radius", "width", "CPR", "DoGD");
    for radius in [1, 2, 3, 4, 6, 8] {
        let m = thicken_skeleton(&tree, radius);
        let s = treelike_scores(&m, &cfg)?;
        println!("{radius:>6} {:>6} {:>8.4} {:>9.4}", 2 * radius + 1, s.cpr, s.dogd);
    }
    Ok(())
}
