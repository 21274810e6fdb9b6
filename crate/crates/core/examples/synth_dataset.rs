//! Builds a small synthetic tree-like dataset on disk.
//!
//! ```text
//! cargo run --example synth_dataset -- out_dir [texture_dir]
//! ```
//!
//! Each object gets `mask.png` and seven textured renderings; the emitted
//! `manifest.jsonl` can be passed to `segmetrics metrics` once predicted
//! masks have been added to its records.

use std::path::PathBuf;

use segmetrics::imgcore::tight_bbox;
use segmetrics::pipeline::{cmd_synth, SynthSource};
use segmetrics::synthgen::SynthSpec;

fn main() -> segmetrics::Result<()> {
    let mut args = std::env::args().skip(1);
    let out = PathBuf::from(args.next().unwrap_or_else(|| "synth_out".into()));
    let textures = args.next().map(PathBuf::from);

    let spec = SynthSpec { seed: 7, ..SynthSpec::default() };
    let source = SynthSource::Procedural { count: 4, size: 256, widths: (1, 15) };
    let manifest = cmd_synth(textures.as_deref(), &source, &out, &spec)?;

    for rec in &manifest.records {
        let mask = segmetrics::imgcore::io::load_mask(manifest.resolve(&rec.gt_mask_path))?;
        let bb = tight_bbox(&mask)?;
        println!(
            "{}: bbox {}x{} at ({}, {}), {} object pixels",
            rec.id, bb.height, bb.width, bb.top, bb.left, mask.foreground_count()
        );
    }
    println!("manifest: {}", out.join("manifest.jsonl").display());
    Ok(())
}
