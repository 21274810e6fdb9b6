//! Aggregated rank correlations between a metric and IoU.
//!
//! ```text
//! cargo run --example correlations
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use segmetrics::stats::{aggregate, CorrelationReport, MetricSeries};

fn main() -> segmetrics::Result<()> {
    // a noisy decreasing relation, as observed between CPR and IoU
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = 200;
    let cpr: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..0.95)).collect();
    let iou: Vec<f64> = cpr
        .iter()
        .map(|c| (0.9 - 0.7 * c + rng.random_range(-0.25..0.25)).clamp(0.0, 1.0))
        .collect();
    let ids = (0..n).map(|i| format!("obj{i:03}")).collect();
    let series = MetricSeries::new(ids, cpr, iou)?;

    for group in [1, 5, 20] {
        let agg = aggregate(&series, group)?;
        let rep = CorrelationReport::compute("cpr", "iou", &agg, group);
        println!(
            "group {group:>2}: n={:>3} tau={:+.3} rho={:+.3} r={:+.3}",
            rep.n,
            rep.kendall_tau.unwrap_or(f64::NAN),
            rep.spearman_rho.unwrap_or(f64::NAN),
            rep.pearson_r.unwrap_or(f64::NAN)
        );
    }

    let flat = MetricSeries::new(vec!["a".into(), "b".into(), "c".into()], vec![0.5; 3], vec![0.1, 0.2, 0.3])?;
    let rep = CorrelationReport::compute("cpr", "iou", &flat, 1);
    println!("constant metric: {}", serde_json::to_string(&rep)?);
    Ok(())
}
