use std::io::Write;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Manifest, ManifestRecord, RunConfig};
use crate::error::{Error, Result};
use crate::imgcore::io::{load_image, load_mask};
use crate::imgcore::{resize_image, resize_mask_nn, BinaryMask, RasterImage};
use crate::separability::{textural_separability, ConvFilterBank};
use crate::seed::derive_seed;
use crate::stats::{iou, majority_vote};
use crate::treelike::treelike_scores;

/// One row of the metrics table. Skipped records keep their identifying
/// columns and leave every metric empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub id: String,
    pub dataset: String,
    pub object_class: String,
    pub cpr: Option<f64>,
    pub dogd: Option<f64>,
    pub separability: Option<f64>,
    pub iou: Option<f64>,
    pub fg_pixels: Option<usize>,
    pub skipped_reason: String,
}

/// Sidecar entry for a skipped record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordError {
    pub id: String,
    pub kind: String,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunSummary {
    pub total: usize,
    pub successful: usize,
    pub skipped: usize,
}

pub(crate) struct Loaded {
    pub image: RasterImage,
    pub gt: BinaryMask,
    pub preds: Vec<BinaryMask>,
}

/// Reads a record's rasters and brings them to the working resolution.
pub(crate) fn load_record(
    manifest: &Manifest,
    rec: &ManifestRecord,
    resize_to: Option<usize>,
) -> Result<Loaded> {
    let image = load_image(manifest.resolve(&rec.image_path))?;
    let gt = load_mask(manifest.resolve(&rec.gt_mask_path))?;
    if image.dims() != gt.dims() {
        return Err(Error::DimensionMismatch {
            expected: image.dims(),
            got: gt.dims(),
        });
    }
    let mut preds = Vec::with_capacity(rec.pred_mask_paths.len());
    for p in &rec.pred_mask_paths {
        let pred = load_mask(manifest.resolve(p))?;
        if pred.dims() != gt.dims() {
            return Err(Error::DimensionMismatch {
                expected: gt.dims(),
                got: pred.dims(),
            });
        }
        preds.push(pred);
    }
    Ok(match resize_to {
        Some(s) if image.dims() != (s, s) => Loaded {
            image: resize_image(&image, s, s),
            gt: resize_mask_nn(&gt, s, s),
            preds: preds.iter().map(|p| resize_mask_nn(p, s, s)).collect(),
        },
        _ => Loaded { image, gt, preds },
    })
}

/// IoU of the majority-vote fusion of all predictions against `gt`.
pub(crate) fn fused_iou(preds: &[BinaryMask], gt: &BinaryMask) -> Result<Option<f64>> {
    match preds {
        [] => Ok(None),
        [one] => iou(one, gt).map(Some),
        many => iou(&majority_vote(many)?, gt).map(Some),
    }
}

fn process(
    manifest: &Manifest,
    rec: &ManifestRecord,
    cfg: &RunConfig,
    bank: &ConvFilterBank,
) -> Result<MetricsRow> {
    let Loaded { image, gt, preds } = load_record(manifest, rec, cfg.resize_to)?;
    let scores = treelike_scores(&gt, &cfg.treelike)?;
    let seed = derive_seed(cfg.seed, &rec.id);
    let probe = crate::separability::ProbeConfig { seed, ..cfg.probe.clone() };
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let separability = textural_separability(&image, &gt, bank, &probe, &mut rng)?;
    Ok(MetricsRow {
        id: rec.id.clone(),
        dataset: rec.dataset.clone(),
        object_class: rec.object_class.clone().unwrap_or_default(),
        cpr: Some(scores.cpr),
        dogd: Some(scores.dogd),
        separability: Some(separability),
        iou: fused_iou(&preds, &gt)?,
        fg_pixels: Some(gt.foreground_count()),
        skipped_reason: String::new(),
    })
}

pub(crate) fn skipped_row(rec: &ManifestRecord, err: &Error) -> MetricsRow {
    MetricsRow {
        id: rec.id.clone(),
        dataset: rec.dataset.clone(),
        object_class: rec.object_class.clone().unwrap_or_default(),
        cpr: None,
        dogd: None,
        separability: None,
        iou: None,
        fg_pixels: None,
        skipped_reason: err.kind().to_string(),
    }
}

/// Computes the metrics table in memory. Rows come back sorted by id,
/// failures as skipped rows plus matching sidecar entries.
pub fn compute_metrics(
    manifest: &Manifest,
    cfg: &RunConfig,
) -> Result<(Vec<MetricsRow>, Vec<RecordError>)> {
    cfg.validate()?;
    let bank = cfg.load_filter_bank()?;
    let results: Vec<(MetricsRow, Option<RecordError>)> = cfg.thread_pool()?.install(|| {
        manifest
            .records
            .par_iter()
            .map(|rec| match process(manifest, rec, cfg, &bank) {
                Ok(row) => (row, None),
                Err(e) => {
                    log::warn!("record {} skipped: {e}", rec.id);
                    let err = RecordError {
                        id: rec.id.clone(),
                        kind: e.kind().to_string(),
                        message: e.to_string(),
                    };
                    (skipped_row(rec, &e), Some(err))
                }
            })
            .collect()
    });
    let (mut rows, errors): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    rows.sort_by(|a, b| a.id.cmp(&b.id));
    let mut errors: Vec<RecordError> = errors.into_iter().flatten().collect();
    errors.sort_by(|a, b| a.id.cmp(&b.id));
    Ok((rows, errors))
}

/// `metrics.csv` -> `metrics.errors.jsonl`.
pub fn errors_sidecar_path(out_csv: &Path) -> PathBuf {
    out_csv.with_extension("errors.jsonl")
}

pub(crate) fn write_csv<T: Serialize>(rows: &[T], path: &Path) -> Result<()> {
    let tmp = crate::imgcore::io::tmp_sibling(path);
    {
        let mut w = csv::Writer::from_path(&tmp)?;
        for r in rows {
            w.serialize(r)?;
        }
        w.flush()?;
    }
    std::fs::rename(tmp, path)?;
    Ok(())
}

/// Runs the metrics over a manifest, writing the CSV table and an error
/// sidecar next to it. Fails only when no record succeeds; the files are
/// written either way.
pub fn cmd_metrics(manifest_path: &Path, out_csv: &Path, cfg: &RunConfig) -> Result<RunSummary> {
    let manifest = Manifest::load(manifest_path)?;
    let (rows, errors) = compute_metrics(&manifest, cfg)?;
    write_csv(&rows, out_csv)?;
    let mut side = std::io::BufWriter::new(std::fs::File::create(errors_sidecar_path(out_csv))?);
    for e in &errors {
        serde_json::to_writer(&mut side, e)?;
        side.write_all(b"\n")?;
    }
    side.flush()?;
    let summary = RunSummary {
        total: rows.len(),
        successful: rows.len() - errors.len(),
        skipped: errors.len(),
    };
    log::info!(
        "{} records: {} successful, {} skipped",
        summary.total,
        summary.successful,
        summary.skipped
    );
    if summary.successful == 0 {
        return Err(Error::NoSuccessfulRecords {
            skipped: summary.skipped,
        });
    }
    Ok(summary)
}
