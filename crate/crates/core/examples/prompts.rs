//! Box and point prompts sampled inside an object's bounding box.
//!
//! ```text
//! cargo run --example prompts
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use segmetrics::synthgen::{sample_prompts, tree_mask, TreeParams};

fn main() -> segmetrics::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mask = tree_mask(&TreeParams::new(256), 5, &mut rng);
    for (n_pos, n_neg) in [(0, 0), (1, 0), (3, 3), (10, 10)] {
        let prompts = sample_prompts(&mask, n_pos, n_neg, &mut rng)?;
        println!("{}", serde_json::to_string(&prompts)?);
    }
    if let Err(e) = sample_prompts(&mask, usize::MAX / 2, 0, &mut rng) {
        println!("oversized request: {e}");
    }
    Ok(())
}
