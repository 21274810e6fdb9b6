//! Emulates a change of effective patch size by zooming the object so its
//! longer bbox edge spans a given number of pixels.
//!
//! ```text
//! cargo run --example zoom_patch_size
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use segmetrics::imgcore::{tight_bbox, RasterImage};
use segmetrics::synthgen::{place_object, texturize, tree_mask, SynthSpec, TextureBank, TreeParams, Zoomed, zoom_to_scale};
use segmetrics::treelike::cpr;

fn main() -> segmetrics::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let tree = tree_mask(&TreeParams::new(256), 5, &mut rng);
    let spec = SynthSpec { target_bbox: 400, ..SynthSpec::default() };
    let mask = place_object(&tree, &spec, &mut rng)?;
    let bank = TextureBank::procedural(2, 32, 5)?;
    let image: RasterImage = texturize(&mask, &bank.textures[0], &bank.textures[1]);

    println!("{:>6} {:>10} {:>8}", "edge", "measured", "CPR");
    for p in [100, 200, 400, 800, 1100] {
        match zoom_to_scale(&image, &mask, p)? {
            Zoomed::Scaled { mask, .. } => {
                let edge = tight_bbox(&mask)?.longer_edge();
                println!("{p:>6} {edge:>10} {:>8.4}", cpr(&mask, 5)?);
            }
            Zoomed::Rejected => println!("{p:>6} {:>10} {:>8}", "-", "does not fit"),
        }
    }
    Ok(())
}
