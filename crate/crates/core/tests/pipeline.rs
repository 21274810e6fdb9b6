mod common;

use std::path::{Path, PathBuf};

use segmetrics::imgcore::io::{load_mask, save_image, save_mask};
use segmetrics::imgcore::{BinaryMask, RasterImage};
use segmetrics::pipeline::{
    cmd_ablate_thickness, cmd_attention, cmd_correlate, cmd_metrics, cmd_sweep, cmd_synth,
    errors_sidecar_path, Manifest, ManifestRecord, RecordError, RunConfig, SweepGrid, SynthSource,
};
use segmetrics::stats::{iou, majority_vote, Contiguity};
use segmetrics::synthgen::SynthSpec;
use segmetrics::Error;

use common::{perturb, rng, write_corpus};

fn small_cfg() -> RunConfig {
    RunConfig {
        resize_to: Some(160),
        ..RunConfig::default()
    }
}

fn square_record(dir: &Path, id: &str, gt: &BinaryMask, preds: &[BinaryMask]) -> ManifestRecord {
    let img = RasterImage::from_fn(gt.height(), gt.width(), 3, |r, c, _| if gt.get(r, c) { 200 } else { 40 });
    save_image(&img, dir.join(format!("{id}.png"))).unwrap();
    save_mask(gt, dir.join(format!("{id}_gt.png"))).unwrap();
    let mut pred_paths = Vec::new();
    for (k, p) in preds.iter().enumerate() {
        let name = format!("{id}_p{k}.png");
        save_mask(p, dir.join(&name)).unwrap();
        pred_paths.push(PathBuf::from(name));
    }
    ManifestRecord {
        id: id.into(),
        image_path: format!("{id}.png").into(),
        gt_mask_path: format!("{id}_gt.png").into(),
        pred_mask_paths: pred_paths,
        dataset: "unit".into(),
        object_class: None,
        attention_map_path: None,
    }
}

fn square(size: usize, top: usize, side: usize) -> BinaryMask {
    let mut m = BinaryMask::new(size, size);
    m.fill_rect(top, top, side, side, true);
    m
}

#[test]
fn metrics_iou_fusion_and_skips() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let gt = square(160, 40, 70);
    let mut g = rng(3);
    let preds: Vec<BinaryMask> = (0..7).map(|_| perturb(&gt, &mut g, 0.6)).collect();
    let records = vec![
        square_record(dir, "b_exact", &gt, std::slice::from_ref(&gt)),
        square_record(dir, "a_empty", &BinaryMask::new(160, 160), &[]),
        square_record(dir, "c_fused", &gt, &preds),
    ];
    let manifest_path = dir.join("m.jsonl");
    Manifest::new(dir, records).unwrap().save(&manifest_path).unwrap();
    let out = dir.join("metrics.csv");
    let summary = cmd_metrics(&manifest_path, &out, &small_cfg()).unwrap();
    assert_eq!((summary.total, summary.successful, summary.skipped), (3, 2, 1));

    let mut rdr = csv::Reader::from_path(&out).unwrap();
    let headers: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        headers,
        ["id", "dataset", "object_class", "cpr", "dogd", "separability", "iou", "fg_pixels", "skipped_reason"]
    );
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    let ids: Vec<&str> = rows.iter().map(|r| &r[0]).collect();
    assert_eq!(ids, ["a_empty", "b_exact", "c_fused"]);
    assert_eq!(&rows[0][8], "EmptyMask");
    assert_eq!(&rows[0][3], "");
    assert_eq!(rows[1][6].parse::<f64>().unwrap(), 1.0);
    assert_eq!(rows[1][7].parse::<usize>().unwrap(), 70 * 70);

    let want = iou(&majority_vote(&preds).unwrap(), &gt).unwrap();
    assert_eq!(rows[2][6].parse::<f64>().unwrap(), want);
    let single = iou(&preds[0], &gt).unwrap();
    assert_ne!(want, single);

    let side = std::fs::read_to_string(errors_sidecar_path(&out)).unwrap();
    let errs: Vec<RecordError> = side.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(errs.len(), 1);
    assert_eq!((errs[0].id.as_str(), errs[0].kind.as_str()), ("a_empty", "EmptyMask"));
}

#[test]
fn metrics_fails_only_without_successes() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let mut rec = square_record(dir, "x", &BinaryMask::new(64, 64), &[]);
    let missing = ManifestRecord { id: "y".into(), image_path: "nope.png".into(), ..rec.clone() };
    rec.dataset = "d".into();
    let path = dir.join("m.jsonl");
    Manifest::new(dir, vec![rec, missing]).unwrap().save(&path).unwrap();
    let out = dir.join("out.csv");
    let err = cmd_metrics(&path, &out, &RunConfig { resize_to: None, ..RunConfig::default() });
    assert!(matches!(err, Err(Error::NoSuccessfulRecords { skipped: 2 })));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("EmptyMask") && text.contains("ImageError"));
}

#[test]
fn metrics_are_seed_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let manifest = write_corpus(tmp.path(), 6, 160, 2, None);
    let run = |name: &str, seed: u64| {
        let out = tmp.path().join(name);
        cmd_metrics(&manifest, &out, &RunConfig { seed, ..small_cfg() }).unwrap();
        std::fs::read(out).unwrap()
    };
    assert_eq!(run("a.csv", 5), run("b.csv", 5));
}

#[test]
fn synth_layout_and_errors() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("ds");
    let spec = SynthSpec { canvas: 128, target_bbox: 64, seed: 1, ..SynthSpec::default() };
    let source = SynthSource::Procedural { count: 10, size: 128, widths: (1, 7) };
    let manifest = cmd_synth(None, &source, &out, &spec).unwrap();
    assert_eq!(manifest.records.len(), 10);
    let back = Manifest::load(out.join("manifest.jsonl")).unwrap();
    let (mut masks, mut images) = (0, 0);
    for rec in &back.records {
        assert!(back.resolve(&rec.image_path).exists());
        assert!(back.resolve(&rec.gt_mask_path).exists());
        for e in std::fs::read_dir(out.join(&rec.id)).unwrap() {
            let name = e.unwrap().file_name().into_string().unwrap();
            if name == "mask.png" {
                masks += 1;
            } else if name.starts_with("img_") {
                images += 1;
            }
        }
        let m = load_mask(back.resolve(&rec.gt_mask_path)).unwrap();
        let bb = segmetrics::imgcore::tight_bbox(&m).unwrap();
        assert_eq!((bb.height, bb.width), (64, 64));
    }
    assert_eq!((masks, images), (10, 70));

    // the synthetic manifest feeds straight into the metrics command
    let csv_out = tmp.path().join("synth_metrics.csv");
    let cfg = RunConfig { resize_to: None, treelike: segmetrics::treelike::TreelikeConfig { a: 63, ..Default::default() }, ..RunConfig::default() };
    let summary = cmd_metrics(&out.join("manifest.jsonl"), &csv_out, &cfg).unwrap();
    assert_eq!(summary.successful, 10);

    let tex = tmp.path().join("tex");
    std::fs::create_dir(&tex).unwrap();
    save_image(&RasterImage::filled(8, 8, 3, 7), tex.join("only.png")).unwrap();
    let err = cmd_synth(Some(&tex), &source, &tmp.path().join("x"), &spec);
    assert!(matches!(err, Err(Error::InsufficientTextures(1))));
}

fn write_metrics_csv(path: &Path, rows: &[(f64, f64)]) {
    let mut w = csv::Writer::from_path(path).unwrap();
    w.write_record(["id", "cpr", "iou", "skipped_reason"]).unwrap();
    for (i, (c, v)) in rows.iter().enumerate() {
        w.write_record([format!("r{i:02}"), c.to_string(), v.to_string(), String::new()]).unwrap();
    }
    w.write_record(["skipped", "", "", "EmptyMask"]).unwrap();
    w.flush().unwrap();
}

#[test]
fn correlate_reports() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let csv_path = dir.join("m.csv");
    let (json, scatter) = (dir.join("r.json"), dir.join("s.csv"));
    let anti: Vec<(f64, f64)> = (0..20).map(|i| (i as f64 / 20.0, 1.0 - i as f64 / 20.0)).collect();
    write_metrics_csv(&csv_path, &anti);

    let rep = cmd_correlate(&csv_path, "cpr", "iou", 5, &json, &scatter).unwrap();
    assert_eq!(rep.n, 4);
    assert_eq!(rep.kendall_tau, Some(-1.0));
    let self_rep = cmd_correlate(&csv_path, "iou", "iou", 1, &json, &scatter).unwrap();
    assert_eq!((self_rep.kendall_tau, self_rep.spearman_rho), (Some(1.0), Some(1.0)));
    assert!((self_rep.pearson_r.unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(std::fs::read_to_string(&scatter).unwrap().lines().count(), 21);

    let flat: Vec<(f64, f64)> = (0..10).map(|i| (0.3, i as f64 / 10.0)).collect();
    write_metrics_csv(&csv_path, &flat);
    let rep = cmd_correlate(&csv_path, "cpr", "iou", 1, &json, &scatter).unwrap();
    assert_eq!(rep.kendall_tau, None);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert!(v["kendall_tau"].is_null());
    assert_eq!(v["reason"], "constant input");

    assert!(cmd_correlate(&csv_path, "nope", "iou", 1, &json, &scatter).is_err());
}

#[test]
fn sweeps_emit_one_row_per_point() {
    let tmp = tempfile::tempdir().unwrap();
    let manifest = write_corpus(tmp.path(), 8, 128, 4, None);
    let cfg = RunConfig { resize_to: None, group_size: 1, ..RunConfig::default() };
    let out = tmp.path().join("sweep.csv");

    let rows = cmd_sweep(&manifest, &SweepGrid::R(vec![1, 3, 5, 7, 9, 11]), &cfg, &out).unwrap();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r.n_records == 8 && r.kendall_tau.is_some()));
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 7);

    // a = 255 exceeds the 128 px masks: recorded per point, sweep continues
    let rows = cmd_sweep(&manifest, &SweepGrid::AB(vec![63, 127, 255], vec![3, 7, 15, 31]), &cfg, &out).unwrap();
    assert_eq!(rows.len(), 12);
    assert!(rows.iter().filter(|r| r.a == Some(255)).all(|r| r.n_failed == 8 && r.kendall_tau.is_none()));
    assert!(rows.iter().filter(|r| r.a == Some(63)).all(|r| r.n_failed == 0));

    let rows = cmd_sweep(&manifest, &SweepGrid::C(vec![0.5, 2.0]), &cfg, &out).unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.n_records == 8));

    for empty in [SweepGrid::R(vec![]), SweepGrid::AB(vec![63], vec![]), SweepGrid::C(vec![])] {
        assert!(matches!(cmd_sweep(&manifest, &empty, &cfg, &out), Err(Error::InvalidGrid(_))));
    }
}

#[test]
fn sweep_c_matches_metrics_separability() {
    let tmp = tempfile::tempdir().unwrap();
    let manifest = write_corpus(tmp.path(), 3, 128, 8, None);
    let cfg = RunConfig { resize_to: None, group_size: 1, treelike: segmetrics::treelike::TreelikeConfig { a: 63, ..Default::default() }, ..RunConfig::default() };
    let (rows, _) = segmetrics::pipeline::compute_metrics(&Manifest::load(&manifest).unwrap(), &cfg).unwrap();
    let seps: Vec<f64> = rows.iter().map(|r| r.separability.unwrap()).collect();
    let ious: Vec<f64> = rows.iter().map(|r| r.iou.unwrap()).collect();
    let out = tmp.path().join("c.csv");
    let sweep = cmd_sweep(&manifest, &SweepGrid::C(vec![cfg.probe.c]), &cfg, &out).unwrap();
    let want = segmetrics::stats::pearson_r(&seps, &ious).ok();
    match (sweep[0].pearson_r, want) {
        (Some(a), Some(b)) => assert!((a - b).abs() < 1e-12),
        (a, b) => assert_eq!(a, b),
    }
}

#[test]
fn thickness_ablation() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let mut bar = BinaryMask::new(160, 160);
    bar.fill_rect(70, 10, 5, 140, true);
    let rec = square_record(dir, "bar", &bar, &[]);
    let path = dir.join("m.jsonl");
    Manifest::new(dir, vec![rec]).unwrap().save(&path).unwrap();
    let cfg = RunConfig { resize_to: None, ..RunConfig::default() };
    let out = dir.join("t.csv");
    let rows = cmd_ablate_thickness(&path, &[5, 1, 3], &cfg, &out).unwrap();
    let radii: Vec<usize> = rows.iter().map(|r| r.radius).collect();
    assert_eq!(radii, [1, 3, 5]);
    let cprs: Vec<f64> = rows.iter().map(|r| r.cpr.unwrap()).collect();
    assert!(cprs.windows(2).all(|w| w[1] <= w[0]), "{cprs:?}");

    let rows = cmd_ablate_thickness(&path, &[4], &cfg, &out).unwrap();
    let thick = segmetrics::synthgen::thicken_skeleton(&bar, 4);
    assert_eq!(rows[0].fg_pixels, Some(thick.foreground_count()));
    assert_eq!((0..160).filter(|&r| thick.get(r, 80)).count(), 9);

    assert!(matches!(cmd_ablate_thickness(&path, &[], &cfg, &out), Err(Error::InvalidGrid(_))));
}

#[test]
fn attention_rows() {
    let tmp = tempfile::tempdir().unwrap();
    let manifest = write_corpus(tmp.path(), 4, 128, 5, None);
    let out = tmp.path().join("att.csv");
    let rows = cmd_attention(&manifest, &RunConfig { resize_to: None, ..RunConfig::default() }, Contiguity::Rook, &out).unwrap();
    assert_eq!(rows.len(), 4);
    // the fixture grids are noisy 4x4 quadrants: clearly clustered
    assert!(rows.iter().all(|r| r.morans_i.unwrap() > 0.2), "{rows:?}");
}

#[test]
fn binary_smoke() {
    let tmp = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_segmetrics");
    let ds = tmp.path().join("ds");
    let status = std::process::Command::new(bin)
        .args(["synth", ds.to_str().unwrap(), "--count", "5", "--canvas", "160", "--bbox", "96", "-k", "2", "--seed", "3"])
        .status()
        .unwrap();
    assert!(status.success());
    let out = tmp.path().join("m.csv");
    let output = std::process::Command::new(bin)
        .args(["metrics", ds.join("manifest.jsonl").to_str().unwrap(), "-o", out.to_str().unwrap()])
        .args(["--no-resize", "--a", "63", "--jobs", "2", "--clf-c", "1.5", "--boundary-radius", "4"])
        .env_remove("SEGMETRICS_FILTER_BANK")
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
    let summary: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(summary["successful"], 5);

    let bank = tmp.path().join("bank.txfb");
    assert!(std::process::Command::new(bin).args(["random-bank", bank.to_str().unwrap()]).status().unwrap().success());
    let out2 = tmp.path().join("m2.csv");
    let status = std::process::Command::new(bin)
        .args(["metrics", ds.join("manifest.jsonl").to_str().unwrap(), "-o", out2.to_str().unwrap()])
        .args(["--no-resize", "--a", "63", "--clf-c", "1.5", "--boundary-radius", "4"])
        .env("SEGMETRICS_FILTER_BANK", &bank)
        .status()
        .unwrap();
    assert!(status.success());
    // the saved bank is the seed-0 random bank, which is also the fallback
    assert_eq!(std::fs::read(&out).unwrap(), std::fs::read(&out2).unwrap());

    let sweep = tmp.path().join("s.csv");
    let status = std::process::Command::new(bin)
        .args(["sweep", ds.join("manifest.jsonl").to_str().unwrap(), "--param", "r", "--no-resize", "-o"])
        .arg(&sweep)
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(std::fs::read_to_string(&sweep).unwrap().lines().count(), 7);
}
