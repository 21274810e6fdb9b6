use std::path::Path;

use rand::SeedableRng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::metrics::{fused_iou, load_record, write_csv, Loaded};
use super::{Manifest, RunConfig};
use crate::error::{Error, Result};
use crate::imgcore::io::load_mask;
use crate::imgcore::{dilate, resize_mask_nn, skeletonize, StructuringElement};
use crate::separability::{
    boundary_band, collect_samples, extract_features, train_probe, ConvFilterBank, ProbeConfig,
    Samples,
};
use crate::seed::derive_seed;
use crate::stats::{aggregate, morans_i, AttentionMap, Contiguity, CorrelationReport, MetricSeries};
use crate::treelike::{cpr, dogd};

pub const DEFAULT_R_GRID: &[usize] = &[1, 3, 5, 7, 9, 11];
pub const DEFAULT_A_GRID: &[usize] = &[63, 127, 255];
pub const DEFAULT_B_GRID: &[usize] = &[3, 7, 15, 31];
pub const DEFAULT_THICKNESS_RADII: &[usize] = &[1, 2, 3, 4, 6, 8];

fn parse_cell(s: &str) -> Option<f64> {
    let v: f64 = s.trim().parse().ok()?;
    v.is_finite().then_some(v)
}

/// Pairs `(metric, target)` from a metrics CSV, keyed by the `id` column.
/// Rows where either value is blank (skipped records) are dropped.
pub fn read_metric_column(path: &Path, metric: &str, target: &str) -> Result<MetricSeries> {
    let mut rdr = csv::Reader::from_path(path)?;
    let headers = rdr.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::InvalidConfig(format!("column {name:?} not in {}", path.display())))
    };
    let (id_col, m_col, t_col) = (col("id")?, col(metric)?, col(target)?);
    let (mut ids, mut xs, mut ys) = (Vec::new(), Vec::new(), Vec::new());
    for rec in rdr.records() {
        let rec = rec?;
        let x = rec.get(m_col).and_then(parse_cell);
        let y = rec.get(t_col).and_then(parse_cell);
        if let (Some(x), Some(y)) = (x, y) {
            ids.push(rec.get(id_col).unwrap_or_default().to_string());
            xs.push(x);
            ys.push(y);
        }
    }
    MetricSeries::new(ids, xs, ys)
}

/// Aggregates `(metric, target)` pairs from a metrics CSV into groups of
/// `group_size`, correlates them and writes the report JSON plus the
/// aggregated points as CSV.
pub fn cmd_correlate(
    metrics_csv: &Path,
    metric: &str,
    target: &str,
    group_size: usize,
    out_json: &Path,
    out_scatter: &Path,
) -> Result<CorrelationReport> {
    let series = read_metric_column(metrics_csv, metric, target)?;
    let agg = aggregate(&series, group_size)?;
    let report = CorrelationReport::compute(metric, target, &agg, group_size);
    std::fs::write(out_json, serde_json::to_string_pretty(&report)? + "\n")?;
    let mut w = csv::Writer::from_path(out_scatter)?;
    w.write_record(["group", metric, target, "members"])?;
    for (i, id) in agg.record_ids.iter().enumerate() {
        let members = id.split('+').count().to_string();
        w.write_record([
            id.as_str(),
            &agg.metric_values[i].to_string(),
            &agg.iou_values[i].to_string(),
            &members,
        ])?;
    }
    w.flush()?;
    Ok(report)
}

/// Hyperparameter grid for [`cmd_sweep`].
#[derive(Debug, Clone, PartialEq)]
pub enum SweepGrid {
    /// Contour radius of CPR.
    R(Vec<usize>),
    /// Global and local DoGD windows; every `(a, b)` combination.
    AB(Vec<usize>, Vec<usize>),
    /// Inverse regularization strength of the separability probe.
    C(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Point {
    R(usize),
    AB(usize, usize),
    C(f64),
}

impl SweepGrid {
    fn points(&self) -> Result<Vec<Point>> {
        let pts: Vec<Point> = match self {
            SweepGrid::R(rs) => rs.iter().map(|&r| Point::R(r)).collect(),
            SweepGrid::AB(a_s, bs) => a_s
                .iter()
                .flat_map(|&a| bs.iter().map(move |&b| Point::AB(a, b)))
                .collect(),
            SweepGrid::C(cs) => cs.iter().map(|&c| Point::C(c)).collect(),
        };
        if pts.is_empty() {
            return Err(Error::InvalidGrid("no grid points".into()));
        }
        Ok(pts)
    }
}

/// One grid point of a sweep, in long format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub metric: String,
    pub r: Option<usize>,
    pub a: Option<usize>,
    pub b: Option<usize>,
    pub c: Option<f64>,
    /// Records that produced both a metric value and an IoU.
    pub n_records: usize,
    /// Records that failed at this grid point.
    pub n_failed: usize,
    pub n_points: usize,
    pub kendall_tau: Option<f64>,
    pub spearman_rho: Option<f64>,
    pub pearson_r: Option<f64>,
    pub reason: String,
}

/// Per-record state for a sweep. Features and probe samples do not depend
/// on C, so they are built once and reused across grid points.
struct PointEval<'a> {
    loaded: &'a Loaded,
    probe: ProbeConfig,
    bank: Option<&'a ConvFilterBank>,
    samples: Option<std::result::Result<Samples, &'static str>>,
}

impl PointEval<'_> {
    fn eval(&mut self, point: Point) -> Result<f64> {
        let gt = &self.loaded.gt;
        match point {
            Point::R(r) => cpr(gt, r),
            Point::AB(a, b) => dogd(gt, a, b),
            Point::C(c) => {
                let (probe, loaded, bank) = (&self.probe, self.loaded, self.bank);
                let samples = self.samples.get_or_insert_with(|| {
                    let build = || -> Result<Samples> {
                        let bank = bank.ok_or(Error::InvalidConfig("no filter bank".into()))?;
                        if gt.is_empty() {
                            return Err(Error::EmptyMask);
                        }
                        let feat = extract_features(&loaded.image, bank)?;
                        let small = resize_mask_nn(gt, feat.height, feat.width);
                        let band = boundary_band(&small, probe.boundary_radius);
                        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(probe.seed);
                        collect_samples(&feat, &small, &band, probe, &mut rng)
                    };
                    build().map_err(|e| e.kind())
                });
                let samples = samples
                    .as_ref()
                    .map_err(|kind| Error::InvalidConfig(format!("sampling failed: {kind}")))?;
                train_probe(samples, &ProbeConfig { c, ..probe.clone() }).map(|(_, acc)| acc)
            }
        }
    }
}

/// Correlation of one metric with fused-prediction IoU at every grid point.
/// Records without predictions are ignored; per-point failures are counted
/// and the sweep carries on.
pub fn cmd_sweep(
    manifest_path: &Path,
    grid: &SweepGrid,
    cfg: &RunConfig,
    out_csv: &Path,
) -> Result<Vec<SweepRow>> {
    let points = grid.points()?;
    cfg.validate()?;
    let manifest = Manifest::load(manifest_path)?;
    let bank = match grid {
        SweepGrid::C(_) => Some(cfg.load_filter_bank()?),
        _ => None,
    };
    // per record: (id, iou, value per point)
    let mut per_record: Vec<(String, Option<f64>, Vec<Option<f64>>)> =
        cfg.thread_pool()?.install(|| {
            manifest
                .records
                .par_iter()
                .map(|rec| {
                    let loaded = match load_record(&manifest, rec, cfg.resize_to) {
                        Ok(l) => l,
                        Err(e) => {
                            log::warn!("record {} skipped: {e}", rec.id);
                            return (rec.id.clone(), None, vec![None; points.len()]);
                        }
                    };
                    let iou = fused_iou(&loaded.preds, &loaded.gt).ok().flatten();
                    let seed = derive_seed(cfg.seed, &rec.id);
                    let mut eval = PointEval {
                        loaded: &loaded,
                        probe: ProbeConfig { seed, ..cfg.probe.clone() },
                        bank: bank.as_ref(),
                        samples: None,
                    };
                    let values = points
                        .iter()
                        .map(|&p| {
                            eval.eval(p)
                                .map_err(|e| log::debug!("record {} at {p:?}: {e}", rec.id))
                                .ok()
                        })
                        .collect();
                    (rec.id.clone(), iou, values)
                })
                .collect()
        });
    per_record.sort_by(|a, b| a.0.cmp(&b.0));

    let metric = match grid {
        SweepGrid::R(_) => "cpr",
        SweepGrid::AB(..) => "dogd",
        SweepGrid::C(_) => "separability",
    };
    let mut rows = Vec::with_capacity(points.len());
    for (k, &p) in points.iter().enumerate() {
        let (mut ids, mut xs, mut ys) = (Vec::new(), Vec::new(), Vec::new());
        let mut failed = 0;
        for (id, iou, values) in &per_record {
            match (values[k], iou) {
                (Some(x), Some(y)) => {
                    ids.push(id.clone());
                    xs.push(x);
                    ys.push(*y);
                }
                (None, _) => failed += 1,
                _ => {}
            }
        }
        let n_records = ids.len();
        let agg = aggregate(&MetricSeries::new(ids, xs, ys)?, cfg.group_size)?;
        let report = CorrelationReport::compute(metric, "iou", &agg, cfg.group_size);
        let (r, a, b, c) = match p {
            Point::R(r) => (Some(r), None, None, None),
            Point::AB(a, b) => (None, Some(a), Some(b), None),
            Point::C(c) => (None, None, None, Some(c)),
        };
        rows.push(SweepRow {
            metric: metric.to_string(),
            r,
            a,
            b,
            c,
            n_records,
            n_failed: failed,
            n_points: report.n,
            kendall_tau: report.kendall_tau,
            spearman_rho: report.spearman_rho,
            pearson_r: report.pearson_r,
            reason: report.reason.unwrap_or_default(),
        });
    }
    write_csv(&rows, out_csv)?;
    Ok(rows)
}

/// Tree-likeness of one ground-truth mask after re-thickening its skeleton.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThicknessRow {
    pub id: String,
    pub radius: usize,
    pub cpr: Option<f64>,
    pub dogd: Option<f64>,
    pub fg_pixels: Option<usize>,
    pub skipped_reason: String,
}

/// Replaces every ground-truth mask by its skeleton dilated with a disk of
/// each radius and recomputes CPR and DoGD. Rows are keyed by `(id, radius)`.
pub fn cmd_ablate_thickness(
    manifest_path: &Path,
    radii: &[usize],
    cfg: &RunConfig,
    out_csv: &Path,
) -> Result<Vec<ThicknessRow>> {
    if radii.is_empty() {
        return Err(Error::InvalidGrid("no radii".into()));
    }
    cfg.validate()?;
    let manifest = Manifest::load(manifest_path)?;
    let mut rows: Vec<ThicknessRow> = cfg.thread_pool()?.install(|| {
        manifest
            .records
            .par_iter()
            .flat_map_iter(|rec| {
                let skeleton = load_mask(manifest.resolve(&rec.gt_mask_path)).map(|m| {
                    let m = match cfg.resize_to {
                        Some(s) if m.dims() != (s, s) => resize_mask_nn(&m, s, s),
                        _ => m,
                    };
                    skeletonize(&m)
                });
                radii
                    .iter()
                    .map(|&radius| {
                        let scored = skeleton.as_ref().map_err(|e| e.kind()).and_then(|sk| {
                            let thick = dilate(sk, &StructuringElement::disk(radius));
                            let c = cpr(&thick, cfg.treelike.r).map_err(|e| e.kind())?;
                            let d = dogd(&thick, cfg.treelike.a, cfg.treelike.b)
                                .map_err(|e| e.kind())?;
                            Ok((c, d, thick.foreground_count()))
                        });
                        match scored {
                            Ok((c, d, fg)) => ThicknessRow {
                                id: rec.id.clone(),
                                radius,
                                cpr: Some(c),
                                dogd: Some(d),
                                fg_pixels: Some(fg),
                                skipped_reason: String::new(),
                            },
                            Err(kind) => ThicknessRow {
                                id: rec.id.clone(),
                                radius,
                                cpr: None,
                                dogd: None,
                                fg_pixels: None,
                                skipped_reason: kind.to_string(),
                            },
                        }
                    })
                    .collect::<Vec<_>>()
            })
            .collect()
    });
    rows.sort_by(|a, b| a.id.cmp(&b.id).then(a.radius.cmp(&b.radius)));
    write_csv(&rows, out_csv)?;
    Ok(rows)
}

/// Attention fragmentation of one record next to its tree-likeness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttentionRow {
    pub id: String,
    pub cpr: Option<f64>,
    pub morans_i: Option<f64>,
    pub skipped_reason: String,
}

/// Moran's I of each record's attention map (PNG or CSV grid) alongside the
/// CPR of its ground truth.
pub fn cmd_attention(
    manifest_path: &Path,
    cfg: &RunConfig,
    weighting: Contiguity,
    out_csv: &Path,
) -> Result<Vec<AttentionRow>> {
    cfg.validate()?;
    let manifest = Manifest::load(manifest_path)?;
    let mut rows: Vec<AttentionRow> = cfg.thread_pool()?.install(|| {
        manifest
            .records
            .par_iter()
            .map(|rec| {
                let result = (|| -> Result<(f64, f64)> {
                    let path = rec
                        .attention_map_path
                        .as_ref()
                        .ok_or_else(|| Error::Manifest(format!("{} has no attention map", rec.id)))?;
                    let map = AttentionMap::load(manifest.resolve(path))?;
                    let mut gt = load_mask(manifest.resolve(&rec.gt_mask_path))?;
                    if let Some(s) = cfg.resize_to {
                        if gt.dims() != (s, s) {
                            gt = resize_mask_nn(&gt, s, s);
                        }
                    }
                    Ok((cpr(&gt, cfg.treelike.r)?, morans_i(&map, weighting)?))
                })();
                match result {
                    Ok((c, i)) => AttentionRow {
                        id: rec.id.clone(),
                        cpr: Some(c),
                        morans_i: Some(i),
                        skipped_reason: String::new(),
                    },
                    Err(e) => AttentionRow {
                        id: rec.id.clone(),
                        cpr: None,
                        morans_i: None,
                        skipped_reason: e.kind().to_string(),
                    },
                }
            })
            .collect()
    });
    rows.sort_by(|a, b| a.id.cmp(&b.id));
    write_csv(&rows, out_csv)?;
    Ok(rows)
}
