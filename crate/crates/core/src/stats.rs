//! Evaluation statistics: overlap, prediction fusion, correlation
//! coefficients, datapoint aggregation and spatial autocorrelation.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imgcore::BinaryMask;

/// Intersection over union; two empty masks score 1.
pub fn iou(a: &BinaryMask, b: &BinaryMask) -> Result<f64> {
    if a.dims() != b.dims() {
        return Err(Error::DimensionMismatch {
            expected: a.dims(),
            got: b.dims(),
        });
    }
    let (mut inter, mut union) = (0usize, 0usize);
    for (&x, &y) in a.as_slice().iter().zip(b.as_slice()) {
        inter += (x && y) as usize;
        union += (x || y) as usize;
    }
    Ok(if union == 0 {
        1.0
    } else {
        inter as f64 / union as f64
    })
}

/// Pixel-wise strict majority: set when more than half of the inputs are set.
pub fn majority_vote(masks: &[BinaryMask]) -> Result<BinaryMask> {
    let first = masks.first().ok_or(Error::EmptyList)?;
    let mut votes = vec![0usize; first.height() * first.width()];
    for m in masks {
        if m.dims() != first.dims() {
            return Err(Error::DimensionMismatch {
                expected: first.dims(),
                got: m.dims(),
            });
        }
        for (v, &px) in votes.iter_mut().zip(m.as_slice()) {
            *v += px as usize;
        }
    }
    let k = masks.len();
    BinaryMask::from_vec(
        first.height(),
        first.width(),
        votes.into_iter().map(|v| 2 * v > k).collect(),
    )
}

fn check_pair(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(Error::Undefined("need at least two observations"));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::Undefined("non-finite input"));
    }
    Ok(())
}

/// Kendall's tau-b with tie correction, O(n log n).
///
/// Sort by `(x, y)`, count tied pairs in `x` and jointly tied pairs, then
/// merge-sort by `y` counting exchanges (discordant pairs).
pub fn kendall_tau(x: &[f64], y: &[f64]) -> Result<f64> {
    check_pair(x, y)?;
    let n = x.len();
    let mut pairs: Vec<(f64, f64)> = x.iter().copied().zip(y.iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));

    let tied_pairs = |run: u64| run * (run - 1) / 2;
    let (mut ties_x, mut ties_xy) = (0u64, 0u64);
    let (mut run_x, mut run_xy) = (1u64, 1u64);
    for i in 1..n {
        if pairs[i].0 == pairs[i - 1].0 {
            run_x += 1;
            if pairs[i].1 == pairs[i - 1].1 {
                run_xy += 1;
            } else {
                ties_xy += tied_pairs(run_xy);
                run_xy = 1;
            }
        } else {
            ties_x += tied_pairs(run_x);
            ties_xy += tied_pairs(run_xy);
            run_x = 1;
            run_xy = 1;
        }
    }
    ties_x += tied_pairs(run_x);
    ties_xy += tied_pairs(run_xy);

    let mut ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let mut buf = vec![0.0; n];
    let swaps = merge_count(&mut ys, &mut buf);

    let mut ties_y = 0u64;
    let mut run_y = 1u64;
    for i in 1..n {
        if ys[i] == ys[i - 1] {
            run_y += 1;
        } else {
            ties_y += tied_pairs(run_y);
            run_y = 1;
        }
    }
    ties_y += tied_pairs(run_y);

    let total = tied_pairs(n as u64);
    if ties_x == total || ties_y == total {
        return Err(Error::Undefined("constant input"));
    }
    let num = total as i128 - ties_x as i128 - ties_y as i128 + ties_xy as i128 - 2 * swaps as i128;
    let den = ((total - ties_x) as f64 * (total - ties_y) as f64).sqrt();
    Ok((num as f64 / den).clamp(-1.0, 1.0))
}

/// Stable merge sort counting strict inversions.
fn merge_count(v: &mut [f64], buf: &mut [f64]) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut swaps = merge_count(&mut v[..mid], &mut buf[..mid]);
    swaps += merge_count(&mut v[mid..], &mut buf[mid..]);
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if v[j] < v[i] {
            swaps += (mid - i) as u64;
            buf[k] = v[j];
            j += 1;
        } else {
            buf[k] = v[i];
            i += 1;
        }
        k += 1;
    }
    buf[k..k + mid - i].copy_from_slice(&v[i..mid]);
    k += mid - i;
    buf[k..k + n - j].copy_from_slice(&v[j..n]);
    v.copy_from_slice(&buf[..n]);
    swaps
}

/// 1-based ranks with ties sharing their average rank.
pub fn midranks(v: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut ranks = vec![0.0; v.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && v[order[j]] == v[order[i]] {
            j += 1;
        }
        let rank = (i + j + 1) as f64 / 2.0;
        for &idx in &order[i..j] {
            ranks[idx] = rank;
        }
        i = j;
    }
    ranks
}

pub fn pearson_r(x: &[f64], y: &[f64]) -> Result<f64> {
    check_pair(x, y)?;
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        let (da, db) = (a - mx, b - my);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::Undefined("constant input"));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Pearson correlation of midranks.
pub fn spearman_rho(x: &[f64], y: &[f64]) -> Result<f64> {
    check_pair(x, y)?;
    pearson_r(&midranks(x), &midranks(y))
}

/// Paired `(metric, target)` observations keyed by record id.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MetricSeries {
    pub record_ids: Vec<String>,
    pub metric_values: Vec<f64>,
    pub iou_values: Vec<f64>,
}

impl MetricSeries {
    pub fn new(record_ids: Vec<String>, metric_values: Vec<f64>, iou_values: Vec<f64>) -> Result<Self> {
        if record_ids.len() != metric_values.len() {
            return Err(Error::LengthMismatch(record_ids.len(), metric_values.len()));
        }
        if metric_values.len() != iou_values.len() {
            return Err(Error::LengthMismatch(metric_values.len(), iou_values.len()));
        }
        Ok(MetricSeries {
            record_ids,
            metric_values,
            iou_values,
        })
    }

    pub fn len(&self) -> usize {
        self.metric_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.metric_values.is_empty()
    }
}

/// Sorts by metric (ties by id) and averages consecutive chunks of
/// `group_size` in both coordinates. A short trailing chunk is kept as its
/// own datapoint; group ids join member ids with `+`.
pub fn aggregate(series: &MetricSeries, group_size: usize) -> Result<MetricSeries> {
    if group_size == 0 {
        return Err(Error::InvalidConfig("group size must be >= 1".into()));
    }
    let mut order: Vec<usize> = (0..series.len()).collect();
    order.sort_by(|&a, &b| {
        series.metric_values[a]
            .total_cmp(&series.metric_values[b])
            .then_with(|| series.record_ids[a].cmp(&series.record_ids[b]))
    });
    let mut out = MetricSeries::default();
    for chunk in order.chunks(group_size) {
        let n = chunk.len() as f64;
        out.record_ids.push(
            chunk
                .iter()
                .map(|&i| series.record_ids[i].as_str())
                .collect::<Vec<_>>()
                .join("+"),
        );
        out.metric_values
            .push(chunk.iter().map(|&i| series.metric_values[i]).sum::<f64>() / n);
        out.iou_values
            .push(chunk.iter().map(|&i| series.iou_values[i]).sum::<f64>() / n);
    }
    Ok(out)
}

/// Correlation summary for one metric against segmentation quality.
///
/// Coefficients are `None` when undefined (e.g. constant input); `reason`
/// then says why.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub metric_name: String,
    pub target_name: String,
    pub n: usize,
    pub group_size: usize,
    pub kendall_tau: Option<f64>,
    pub spearman_rho: Option<f64>,
    pub pearson_r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl CorrelationReport {
    /// Correlates an already aggregated series.
    pub fn compute(
        metric_name: &str,
        target_name: &str,
        series: &MetricSeries,
        group_size: usize,
    ) -> Self {
        let (x, y) = (&series.metric_values, &series.iou_values);
        let mut reason = None;
        let mut keep = |r: Result<f64>| match r {
            Ok(v) => Some(v),
            Err(e) => {
                if reason.is_none() {
                    reason = Some(match e {
                        Error::Undefined(why) => why.to_string(),
                        other => other.to_string(),
                    });
                }
                None
            }
        };
        let kendall_tau = keep(kendall_tau(x, y));
        let spearman_rho = keep(spearman_rho(x, y));
        let pearson_r = keep(pearson_r(x, y));
        CorrelationReport {
            metric_name: metric_name.to_string(),
            target_name: target_name.to_string(),
            n: series.len(),
            group_size,
            kendall_tau,
            spearman_rho,
            pearson_r,
            reason,
        }
    }
}

/// Non-negative map on a regular grid, e.g. a ViT attention map.
#[derive(Debug, Clone, PartialEq)]
pub struct AttentionMap {
    pub rows: usize,
    pub cols: usize,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Contiguity {
    /// Edge-sharing neighbours.
    #[default]
    Rook,
    /// Edge- or corner-sharing neighbours.
    Queen,
}

impl AttentionMap {
    pub fn new(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != rows * cols {
            return Err(Error::LengthMismatch(rows * cols, values.len()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Undefined("non-finite attention value"));
        }
        Ok(AttentionMap { rows, cols, values })
    }

    /// Single-channel PNG, rescaled to `[0, 1]`.
    pub fn from_png(path: impl AsRef<Path>) -> Result<Self> {
        let (rows, cols, values) = crate::imgcore::io::load_gray_unit(path)?;
        Self::new(rows, cols, values)
    }

    /// Comma-separated grid, one row per line.
    pub fn from_csv(path: impl AsRef<Path>) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_path(path)?;
        let mut values = Vec::new();
        let mut rows = 0;
        let mut cols = None;
        for rec in reader.records() {
            let rec = rec?;
            if cols.is_some_and(|c| c != rec.len()) {
                return Err(Error::LengthMismatch(cols.unwrap_or(0), rec.len()));
            }
            cols = Some(rec.len());
            for field in rec.iter() {
                values.push(field.parse::<f64>().map_err(|e| {
                    Error::Manifest(format!("bad attention value {field:?}: {e}"))
                })?);
            }
            rows += 1;
        }
        Self::new(rows, cols.unwrap_or(0), values)
    }

    /// Picks the reader by file extension (`.csv` or image).
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => Self::from_csv(path),
            _ => Self::from_png(path),
        }
    }
}

/// Moran's I with binary contiguity weights (not row-standardised).
pub fn morans_i(map: &AttentionMap, weighting: Contiguity) -> Result<f64> {
    if map.rows * map.cols < 2 {
        return Err(Error::Undefined("need at least two cells"));
    }
    let n = map.values.len() as f64;
    let mean = map.values.iter().sum::<f64>() / n;
    let dev: Vec<f64> = map.values.iter().map(|v| v - mean).collect();
    let denom: f64 = dev.iter().map(|d| d * d).sum();
    if denom == 0.0 || map.values.iter().all(|&v| v == map.values[0]) {
        return Err(Error::Undefined("constant input"));
    }
    // Each unordered neighbour pair is visited once and counted twice.
    let forward: &[(isize, isize)] = match weighting {
        Contiguity::Rook => &[(0, 1), (1, 0)],
        Contiguity::Queen => &[(0, 1), (1, -1), (1, 0), (1, 1)],
    };
    let (mut cross, mut weight) = (0.0, 0.0);
    for r in 0..map.rows as isize {
        for c in 0..map.cols as isize {
            for &(dr, dc) in forward {
                let (rr, cc) = (r + dr, c + dc);
                if rr < 0 || cc < 0 || rr >= map.rows as isize || cc >= map.cols as isize {
                    continue;
                }
                let i = r as usize * map.cols + c as usize;
                let j = rr as usize * map.cols + cc as usize;
                cross += 2.0 * dev[i] * dev[j];
                weight += 2.0;
            }
        }
    }
    if weight == 0.0 {
        return Err(Error::Undefined("no neighbouring cells"));
    }
    Ok((n / weight) * cross / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rect(h: usize, w: usize, top: usize, left: usize, rh: usize, rw: usize) -> BinaryMask {
        let mut m = BinaryMask::new(h, w);
        m.fill_rect(top, left, rh, rw, true);
        m
    }

    /// O(n²) pair enumeration.
    fn tau_b_pairs(x: &[f64], y: &[f64]) -> f64 {
        let (mut conc, mut disc, mut tx, mut ty) = (0i64, 0i64, 0i64, 0i64);
        for i in 0..x.len() {
            for j in i + 1..x.len() {
                let dx = (x[i] - x[j]).signum() * (x[i] != x[j]) as i32 as f64;
                let dy = (y[i] - y[j]).signum() * (y[i] != y[j]) as i32 as f64;
                match (dx == 0.0, dy == 0.0) {
                    (true, true) => {}
                    (true, false) => tx += 1,
                    (false, true) => ty += 1,
                    _ if dx * dy > 0.0 => conc += 1,
                    _ => disc += 1,
                }
            }
        }
        (conc - disc) as f64 / (((conc + disc + tx) * (conc + disc + ty)) as f64).sqrt()
    }

    #[test]
    fn iou_examples() {
        let a = rect(8, 8, 1, 1, 3, 3);
        assert_eq!(iou(&a, &a).unwrap(), 1.0);
        assert_eq!(iou(&a, &rect(8, 8, 5, 5, 2, 2)).unwrap(), 0.0);
        // 2x3 and 3x2 rectangles sharing a 2x2 block
        let wide = rect(8, 8, 0, 0, 2, 3);
        let tall = rect(8, 8, 0, 0, 3, 2);
        assert_eq!(iou(&wide, &tall).unwrap(), 0.5);
        let empty = BinaryMask::new(8, 8);
        assert_eq!(iou(&empty, &empty).unwrap(), 1.0);
        assert!(iou(&a, &BinaryMask::new(4, 8)).is_err());
    }

    #[test]
    fn majority_examples() {
        let m = rect(6, 6, 1, 2, 3, 3);
        assert_eq!(majority_vote(&vec![m.clone(); 7]).unwrap(), m);
        assert_eq!(majority_vote(&vec![m.clone(); 4]).unwrap(), m);

        let mut masks = vec![BinaryMask::new(2, 2); 7];
        for m in masks.iter_mut().take(4) {
            m.set(0, 0, true);
        }
        for m in masks.iter_mut().take(3) {
            m.set(1, 1, true);
        }
        let fused = majority_vote(&masks).unwrap();
        assert!(fused.get(0, 0));
        assert!(!fused.get(1, 1));

        let tie = vec![rect(2, 2, 0, 0, 1, 1), BinaryMask::new(2, 2)];
        assert!(majority_vote(&tie).unwrap().is_empty());
        assert!(matches!(majority_vote(&[]), Err(Error::EmptyList)));
    }

    #[test]
    fn kendall_examples() {
        let x = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(kendall_tau(&x, &x).unwrap(), 1.0);
        assert_eq!(kendall_tau(&x, &[4.0, 3.0, 2.0, 1.0]).unwrap(), -1.0);
        let t = kendall_tau(&x, &[1.0, 3.0, 2.0, 4.0]).unwrap();
        assert!((t - 4.0 / 6.0).abs() < 1e-15);
        assert!(matches!(
            kendall_tau(&x, &[1.0; 4]),
            Err(Error::Undefined(_))
        ));
        assert!(matches!(
            kendall_tau(&x, &[1.0; 3]),
            Err(Error::LengthMismatch(4, 3))
        ));
    }

    #[test]
    fn spearman_examples() {
        let x: Vec<f64> = (0..10).map(|i| i as f64 * 0.3).collect();
        let ex: Vec<f64> = x.iter().map(|v| v.exp()).collect();
        assert_eq!(spearman_rho(&x, &ex).unwrap(), 1.0);
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert_eq!(spearman_rho(&x, &neg).unwrap(), -1.0);
        let r = spearman_rho(&[1.0, 2.0, 3.0], &[2.0, 1.0, 3.0]).unwrap();
        assert!((r - 0.5).abs() < 1e-15);
    }

    #[test]
    fn midranks_average_ties() {
        assert_eq!(midranks(&[10.0, 20.0, 10.0, 30.0]), vec![1.5, 3.0, 1.5, 4.0]);
    }

    #[test]
    fn pearson_examples() {
        let x = [0.0, 1.0, 2.0, 5.0];
        let lin: Vec<f64> = x.iter().map(|v| 3.0 * v + 1.0).collect();
        assert!((pearson_r(&x, &lin).unwrap() - 1.0).abs() < 1e-15);
        let neg: Vec<f64> = x.iter().map(|v| -2.0 * v).collect();
        assert!((pearson_r(&x, &neg).unwrap() + 1.0).abs() < 1e-15);
        // sxy = 3, sxx = 2, syy = 14/3
        let r = pearson_r(&[0.0, 1.0, 2.0], &[0.0, 1.0, 3.0]).unwrap();
        assert!((r - 3.0 / (2.0f64 * 14.0 / 3.0).sqrt()).abs() < 1e-15);
        assert!((r - 0.9820).abs() < 1e-4);
        assert!(pearson_r(&[1.0, 1.0], &[0.0, 1.0]).is_err());
    }

    #[test]
    fn aggregate_examples() {
        let ids: Vec<String> = (0..10).map(|i| format!("r{i}")).collect();
        let metric: Vec<f64> = (0..10).map(|i| ((i * 7) % 10) as f64).collect();
        let iou: Vec<f64> = (0..10).map(|i| i as f64 / 10.0).collect();
        let s = MetricSeries::new(ids, metric.clone(), iou.clone()).unwrap();

        let one = aggregate(&s, 1).unwrap();
        assert!(one.metric_values.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(one.len(), 10);

        let five = aggregate(&s, 5).unwrap();
        assert_eq!(five.len(), 2);
        let mut order: Vec<usize> = (0..10).collect();
        order.sort_by(|&a, &b| metric[a].total_cmp(&metric[b]));
        for g in 0..2 {
            let idx = &order[g * 5..g * 5 + 5];
            let m = idx.iter().map(|&i| metric[i]).sum::<f64>() / 5.0;
            let y = idx.iter().map(|&i| iou[i]).sum::<f64>() / 5.0;
            assert_eq!(five.metric_values[g], m);
            assert_eq!(five.iou_values[g], y);
        }
        let grand = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        assert!((grand(&five.iou_values) - grand(&iou)).abs() < 1e-12);

        let seven = MetricSeries::new(
            (0..7).map(|i| i.to_string()).collect(),
            vec![0.0; 7],
            vec![1.0; 7],
        )
        .unwrap();
        let agg = aggregate(&seven, 5).unwrap();
        assert_eq!(agg.len(), 2);
        assert_eq!(agg.record_ids[1], "5+6");
        assert!(aggregate(&seven, 0).is_err());
    }

    #[test]
    fn report_handles_constant_metric() {
        let s = MetricSeries::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![0.5; 3],
            vec![0.1, 0.2, 0.3],
        )
        .unwrap();
        let rep = CorrelationReport::compute("cpr", "iou", &s, 1);
        assert_eq!(rep.kendall_tau, None);
        assert_eq!(rep.pearson_r, None);
        assert_eq!(rep.reason.as_deref(), Some("constant input"));
    }

    #[test]
    fn morans_checkerboard_and_halves() {
        let checker = AttentionMap::new(2, 2, vec![1.0, -1.0, -1.0, 1.0]).unwrap();
        assert_eq!(morans_i(&checker, Contiguity::Rook).unwrap(), -1.0);

        let k = 16;
        let halves = AttentionMap::new(k, k, (0..k * k).map(|i| ((i % k) < k / 2) as u8 as f64).collect()).unwrap();
        assert!(morans_i(&halves, Contiguity::Rook).unwrap() > 0.5);
        assert!(morans_i(&halves, Contiguity::Queen).unwrap() > 0.5);

        let flat = AttentionMap::new(3, 3, vec![0.2; 9]).unwrap();
        assert!(matches!(
            morans_i(&flat, Contiguity::Rook),
            Err(Error::Undefined(_))
        ));
    }

    #[test]
    fn attention_csv_reader() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.csv");
        std::fs::write(&p, "0.1, 0.2,0.3\n0.4,0.5,0.6\n").unwrap();
        let a = AttentionMap::load(&p).unwrap();
        assert_eq!((a.rows, a.cols), (2, 3));
        assert_eq!(a.values[4], 0.5);
        std::fs::write(&p, "0.1,0.2\n0.4\n").unwrap();
        assert!(AttentionMap::load(&p).is_err());
    }

    fn short_lists() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
        (2usize..50).prop_flat_map(|n| {
            (
                proptest::collection::vec((0u8..8).prop_map(f64::from), n),
                proptest::collection::vec((0u8..8).prop_map(f64::from), n),
            )
        })
    }

    proptest! {
        #[test]
        fn kendall_matches_pair_count((x, y) in short_lists()) {
            match kendall_tau(&x, &y) {
                Ok(t) => prop_assert!((t - tau_b_pairs(&x, &y)).abs() < 1e-12),
                Err(_) => prop_assert!(tau_b_pairs(&x, &y).is_nan()),
            }
        }

        #[test]
        fn correlations_symmetric((x, y) in short_lists()) {
            for f in [kendall_tau, spearman_rho, pearson_r] {
                match (f(&x, &y), f(&y, &x)) {
                    (Ok(a), Ok(b)) => prop_assert!((a - b).abs() < 1e-12 && (-1.0..=1.0).contains(&a)),
                    (Err(_), Err(_)) => {}
                    _ => prop_assert!(false, "asymmetric definedness"),
                }
            }
        }

        #[test]
        fn rank_stats_invariant_under_monotone_maps((x, y) in short_lists()) {
            let tx: Vec<f64> = x.iter().map(|v| (v * 0.7).exp() + 3.0).collect();
            if let (Ok(a), Ok(b)) = (kendall_tau(&x, &y), kendall_tau(&tx, &y)) {
                prop_assert!((a - b).abs() < 1e-12);
            }
            if let (Ok(a), Ok(b)) = (spearman_rho(&x, &y), spearman_rho(&tx, &y)) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }

        #[test]
        fn majority_of_copies(data in proptest::collection::vec(any::<bool>(), 36), k in 1usize..9) {
            let m = BinaryMask::from_vec(6, 6, data).unwrap();
            prop_assert_eq!(majority_vote(&vec![m.clone(); k]).unwrap(), m);
        }

        #[test]
        fn morans_soft_range(values in proptest::collection::vec(0.0f64..1.0, 64)) {
            let map = AttentionMap::new(8, 8, values).unwrap();
            for w in [Contiguity::Rook, Contiguity::Queen] {
                let i = morans_i(&map, w).unwrap();
                prop_assert!((-1.25..=1.25).contains(&i));
            }
        }
    }
}
