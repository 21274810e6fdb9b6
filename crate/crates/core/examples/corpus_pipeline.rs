//! End-to-end run over a small corpus: synthesize objects, fake model
//! predictions that degrade with tree-likeness, compute the metrics table
//! and correlate each metric with IoU.
//!
//! ```text
//! cargo run --example corpus_pipeline [-- work_dir]
//! ```

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use segmetrics::imgcore::io::{load_mask, save_mask};
use segmetrics::imgcore::BinaryMask;
use segmetrics::pipeline::{cmd_correlate, cmd_metrics, cmd_synth, Manifest, RunConfig, SynthSource};
use segmetrics::synthgen::SynthSpec;
use segmetrics::treelike::cpr;

fn main() -> segmetrics::Result<()> {
    let work = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "corpus_out".into()));
    let spec = SynthSpec { canvas: 256, target_bbox: 128, texture_pairs: 1, seed: 1, preserve_aspect: false };
    let source = SynthSource::Procedural { count: 30, size: 256, widths: (1, 15) };
    let mut manifest = cmd_synth(None, &source, &work, &spec)?;

    // stand-in for a segmenter: it misses more of the object the more of it
    // lies on the contour
    for rec in &mut manifest.records {
        let gt = load_mask(manifest.root.join(&rec.gt_mask_path))?;
        let miss = cpr(&gt, 5)?;
        let mut rng = ChaCha8Rng::seed_from_u64(rec.id.len() as u64 + gt.foreground_count() as u64);
        let pred = BinaryMask::from_fn(gt.height(), gt.width(), |r, c| gt.get(r, c) && !rng.random_bool(miss * 0.9));
        let name = PathBuf::from(&rec.id).join("pred.png");
        save_mask(&pred, manifest.root.join(&name))?;
        rec.pred_mask_paths = vec![name];
    }
    let manifest_path = work.join("manifest.jsonl");
    Manifest::new(&manifest.root, manifest.records.clone())?.save(&manifest_path)?;

    let cfg = RunConfig { resize_to: Some(256), ..RunConfig::default() };
    let metrics = work.join("metrics.csv");
    let summary = cmd_metrics(&manifest_path, &metrics, &cfg)?;
    println!("{} of {} records scored", summary.successful, summary.total);

    for metric in ["cpr", "dogd", "separability"] {
        let rep = cmd_correlate(
            &metrics,
            metric,
            "iou",
            cfg.group_size,
            &work.join(format!("report_{metric}.json")),
            &work.join(format!("scatter_{metric}.csv")),
        )?;
        println!(
            "{metric:<13} tau={:+.3} rho={:+.3} (n={})",
            rep.kendall_tau.unwrap_or(f64::NAN),
            rep.spearman_rho.unwrap_or(f64::NAN),
            rep.n
        );
    }
    Ok(())
}
