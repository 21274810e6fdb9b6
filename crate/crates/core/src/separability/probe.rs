use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const GRAD_TOL: f64 = 1e-6;
const MAX_EPOCHS: usize = 500;

/// Settings for the separability probe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeConfig {
    /// Inverse L2 regularisation strength.
    pub c: f64,
    /// Radius of the disk used to grow the boundary band, in feature pixels.
    pub boundary_radius: usize,
    pub test_fraction: f64,
    pub max_samples_per_class: usize,
    pub seed: u64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            c: 2.0,
            boundary_radius: 5,
            test_fraction: 0.3,
            max_samples_per_class: 20_000,
            seed: 0,
        }
    }
}

impl ProbeConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.c.is_finite() && self.c > 0.0) {
            return Err(Error::InvalidConfig(format!("C must be > 0, got {}", self.c)));
        }
        if !(self.test_fraction > 0.0 && self.test_fraction < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "test fraction must lie in (0, 1), got {}",
                self.test_fraction
            )));
        }
        if self.max_samples_per_class < 2 {
            return Err(Error::InvalidConfig("sample cap must be >= 2".into()));
        }
        Ok(())
    }
}

/// Labelled feature vectors, row-major.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Samples {
    pub dim: usize,
    pub features: Vec<f64>,
    /// `true` for object, `false` for boundary.
    pub labels: Vec<bool>,
}

impl Samples {
    pub fn new(dim: usize) -> Self {
        Samples {
            dim,
            ..Default::default()
        }
    }

    pub fn push(&mut self, features: impl IntoIterator<Item = f64>, label: bool) {
        let before = self.features.len();
        self.features.extend(features);
        assert_eq!(self.features.len() - before, self.dim, "feature length");
        self.labels.push(label);
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.dim..(i + 1) * self.dim]
    }

    pub fn class_counts(&self) -> (usize, usize) {
        let pos = self.labels.iter().filter(|&&l| l).count();
        (pos, self.len() - pos)
    }

    /// Same samples with the labels flipped.
    pub fn relabeled(&self) -> Samples {
        Samples {
            dim: self.dim,
            features: self.features.clone(),
            labels: self.labels.iter().map(|l| !l).collect(),
        }
    }
}

/// Logistic-regression classifier operating on standardised features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearProbe {
    /// Weights in standardised feature space.
    pub weights: Vec<f64>,
    pub bias: f64,
    pub feature_mean: Vec<f64>,
    pub feature_scale: Vec<f64>,
}

impl LinearProbe {
    pub fn decision(&self, x: &[f64]) -> f64 {
        self.bias
            + x.iter()
                .zip(&self.weights)
                .zip(self.feature_mean.iter().zip(&self.feature_scale))
                .map(|((v, w), (m, s))| w * (v - m) / s)
                .sum::<f64>()
    }

    pub fn predict(&self, x: &[f64]) -> bool {
        self.decision(x) > 0.0
    }

    pub fn weight_norm(&self) -> f64 {
        self.weights.iter().map(|w| w * w).sum::<f64>().sqrt()
    }
}

/// Mean logistic loss plus `lambda/2 · |w|²`; the bias is not penalised.
///
/// Parameters are packed as `[w_0 .. w_{d-1}, bias]`.
pub struct LogisticLoss<'a> {
    pub x: &'a [f64],
    pub y: &'a [f64],
    pub dim: usize,
    pub lambda: f64,
}

fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

impl LogisticLoss<'_> {
    fn n(&self) -> usize {
        self.y.len()
    }

    fn margin(&self, theta: &[f64], i: usize) -> f64 {
        let row = &self.x[i * self.dim..(i + 1) * self.dim];
        theta[self.dim] + row.iter().zip(theta).map(|(a, b)| a * b).sum::<f64>()
    }

    pub fn value(&self, theta: &[f64]) -> f64 {
        let n = self.n() as f64;
        let data: f64 = (0..self.n())
            .map(|i| {
                let z = self.margin(theta, i);
                softplus(z) - self.y[i] * z
            })
            .sum();
        let reg: f64 = theta[..self.dim].iter().map(|w| w * w).sum();
        data / n + 0.5 * self.lambda * reg
    }

    pub fn gradient(&self, theta: &[f64]) -> Vec<f64> {
        let n = self.n() as f64;
        let mut g = vec![0.0; self.dim + 1];
        for i in 0..self.n() {
            let r = sigmoid(self.margin(theta, i)) - self.y[i];
            let row = &self.x[i * self.dim..(i + 1) * self.dim];
            for (gj, xj) in g.iter_mut().zip(row) {
                *gj += r * xj;
            }
            g[self.dim] += r;
        }
        for (j, gj) in g.iter_mut().enumerate() {
            *gj /= n;
            if j < self.dim {
                *gj += self.lambda * theta[j];
            }
        }
        g
    }

    fn hessian(&self, theta: &[f64]) -> DMatrix<f64> {
        let d = self.dim + 1;
        let n = self.n() as f64;
        let mut h = DMatrix::<f64>::zeros(d, d);
        let mut aug = vec![1.0; d];
        for i in 0..self.n() {
            let p = sigmoid(self.margin(theta, i));
            let s = p * (1.0 - p);
            aug[..self.dim].copy_from_slice(&self.x[i * self.dim..(i + 1) * self.dim]);
            for a in 0..d {
                let sa = s * aug[a];
                for b in 0..=a {
                    h[(a, b)] += sa * aug[b];
                }
            }
        }
        for a in 0..d {
            for b in 0..=a {
                let v = h[(a, b)] / n;
                h[(a, b)] = v;
                h[(b, a)] = v;
            }
            if a < self.dim {
                h[(a, a)] += self.lambda;
            }
        }
        h
    }

    /// Damped Newton iterations until the gradient norm drops below `1e-6`
    /// or 500 iterations pass.
    pub fn minimize(&self) -> Vec<f64> {
        let mut theta = vec![0.0; self.dim + 1];
        let mut f = self.value(&theta);
        for _ in 0..MAX_EPOCHS {
            let g = self.gradient(&theta);
            let gnorm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
            if gnorm <= GRAD_TOL {
                break;
            }
            let mut h = self.hessian(&theta);
            let gv = DVector::from_vec(g.clone());
            let step = loop {
                if let Some(ch) = h.clone().cholesky() {
                    break ch.solve(&gv);
                }
                // singular curvature: lean towards gradient descent
                for a in 0..=self.dim {
                    h[(a, a)] += 1e-8 + 1e-3 * h[(a, a)].abs();
                }
            };
            let slope: f64 = g.iter().zip(step.iter()).map(|(a, b)| a * b).sum();
            let mut t = 1.0;
            let mut accepted = false;
            while t > 1e-12 {
                let cand: Vec<f64> = theta.iter().zip(step.iter()).map(|(a, s)| a - t * s).collect();
                let fc = self.value(&cand);
                if fc <= f - 1e-4 * t * slope {
                    theta = cand;
                    f = fc;
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        theta
    }
}

/// Feature-wise mean and population standard deviation (1 when constant).
fn standardizer(samples: &Samples, rows: &[usize]) -> (Vec<f64>, Vec<f64>) {
    let d = samples.dim;
    let n = rows.len() as f64;
    let mut mean = vec![0.0; d];
    for &i in rows {
        for (m, v) in mean.iter_mut().zip(samples.row(i)) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n);
    let mut var = vec![0.0; d];
    for &i in rows {
        for ((s, v), m) in var.iter_mut().zip(samples.row(i)).zip(&mean) {
            *s += (v - m) * (v - m);
        }
    }
    let scale = var
        .into_iter()
        .map(|s| {
            let sd = (s / n).sqrt();
            if sd > 1e-12 {
                sd
            } else {
                1.0
            }
        })
        .collect();
    (mean, scale)
}

/// Stratified train/test split, per-class shuffle seeded from `seed`.
fn stratified_split(samples: &Samples, test_fraction: f64, seed: u64) -> (Vec<usize>, Vec<usize>) {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let (mut train, mut test) = (Vec::new(), Vec::new());
    for class in [true, false] {
        let mut idx: Vec<usize> = (0..samples.len())
            .filter(|&i| samples.labels[i] == class)
            .collect();
        idx.shuffle(&mut rng);
        let n_test = ((idx.len() as f64 * test_fraction).round() as usize).clamp(1, idx.len() - 1);
        test.extend_from_slice(&idx[..n_test]);
        train.extend_from_slice(&idx[n_test..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    (train, test)
}

/// Fits the probe on a stratified training split and returns it with its
/// held-out accuracy. Deterministic in `(samples, cfg)`.
pub fn train_probe(samples: &Samples, cfg: &ProbeConfig) -> Result<(LinearProbe, f64)> {
    cfg.validate()?;
    let (pos, neg) = samples.class_counts();
    if pos < 2 || neg < 2 {
        return Err(Error::TooFewSamples {
            needed: 2,
            got: pos.min(neg),
        });
    }
    let (train, test) = stratified_split(samples, cfg.test_fraction, cfg.seed);
    let (mean, scale) = standardizer(samples, &train);

    let d = samples.dim;
    let mut x = Vec::with_capacity(train.len() * d);
    let mut y = Vec::with_capacity(train.len());
    for &i in &train {
        x.extend(samples.row(i).iter().zip(mean.iter().zip(&scale)).map(|(v, (m, s))| (v - m) / s));
        y.push(if samples.labels[i] { 1.0 } else { 0.0 });
    }
    let loss = LogisticLoss {
        x: &x,
        y: &y,
        dim: d,
        lambda: 1.0 / (cfg.c * train.len() as f64),
    };
    let theta = loss.minimize();
    let probe = LinearProbe {
        weights: theta[..d].to_vec(),
        bias: theta[d],
        feature_mean: mean,
        feature_scale: scale,
    };
    let correct = test
        .iter()
        .filter(|&&i| probe.predict(samples.row(i)) == samples.labels[i])
        .count();
    Ok((probe, correct as f64 / test.len() as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_distr::{Distribution, Normal};

    fn gaussian_samples(n: usize, dim: usize, shift: f64, seed: u64) -> Samples {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let normal = Normal::new(0.0, 1.0).unwrap();
        let mut s = Samples::new(dim);
        for label in [true, false] {
            for _ in 0..n {
                let off = if label { shift } else { 0.0 };
                s.push((0..dim).map(|_| normal.sample(&mut rng) + off), label);
            }
        }
        s
    }

    #[test]
    fn separable_one_dimensional() {
        let mut s = Samples::new(1);
        for i in 0..50 {
            s.push([1.0 + (i % 3) as f64 * 0.01], true);
            s.push([0.0 - (i % 3) as f64 * 0.01], false);
        }
        let (_, acc) = train_probe(&s, &ProbeConfig::default()).unwrap();
        assert_eq!(acc, 1.0);
    }

    #[test]
    fn same_distribution_is_chance() {
        let s = gaussian_samples(1000, 8, 0.0, 4);
        let (_, acc) = train_probe(&s, &ProbeConfig::default()).unwrap();
        assert!((0.4..=0.6).contains(&acc), "accuracy {acc}");
    }

    #[test]
    fn stronger_regularisation_shrinks_weights() {
        let s = gaussian_samples(200, 5, 0.7, 9);
        let mut last = f64::INFINITY;
        for c in [2.0, 0.2, 0.02] {
            let cfg = ProbeConfig { c, ..Default::default() };
            let (probe, _) = train_probe(&s, &cfg).unwrap();
            let norm = probe.weight_norm();
            assert!(norm <= last + 1e-9, "C={c}: {norm} > {last}");
            last = norm;
        }
    }

    #[test]
    fn deterministic_and_label_symmetric() {
        let s = gaussian_samples(300, 6, 0.3, 21);
        let cfg = ProbeConfig::default();
        let (p1, a1) = train_probe(&s, &cfg).unwrap();
        let (p2, a2) = train_probe(&s, &cfg).unwrap();
        assert_eq!(a1.to_bits(), a2.to_bits());
        assert_eq!(p1, p2);
        let (_, swapped) = train_probe(&s.relabeled(), &cfg).unwrap();
        assert!((a1 - swapped).abs() <= 0.02);
    }

    #[test]
    fn converged_gradient_is_small() {
        let s = gaussian_samples(150, 4, 1.0, 2);
        let y: Vec<f64> = s.labels.iter().map(|&l| l as u8 as f64).collect();
        let loss = LogisticLoss { x: &s.features, y: &y, dim: 4, lambda: 1.0 / 600.0 };
        let theta = loss.minimize();
        let g = loss.gradient(&theta);
        assert!(g.iter().map(|v| v * v).sum::<f64>().sqrt() <= 1e-6);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        for trial in 0..10 {
            let s = gaussian_samples(20, 3, 0.5, trial);
            let y: Vec<f64> = s.labels.iter().map(|&l| l as u8 as f64).collect();
            let loss = LogisticLoss { x: &s.features, y: &y, dim: 3, lambda: 0.05 };
            let theta: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
            let g = loss.gradient(&theta);
            let h = 1e-6;
            for j in 0..4 {
                let (mut up, mut dn) = (theta.clone(), theta.clone());
                up[j] += h;
                dn[j] -= h;
                let fd = (loss.value(&up) - loss.value(&dn)) / (2.0 * h);
                let rel = (fd - g[j]).abs() / g[j].abs().max(1e-8);
                assert!(rel < 1e-5, "component {j}: {fd} vs {}", g[j]);
            }
        }
    }

    #[test]
    fn too_few_samples() {
        let mut s = Samples::new(1);
        s.push([0.0], true);
        s.push([1.0], false);
        s.push([2.0], false);
        assert!(matches!(
            train_probe(&s, &ProbeConfig::default()),
            Err(Error::TooFewSamples { .. })
        ));
    }

    #[test]
    fn config_validation() {
        assert!(ProbeConfig { c: 0.0, ..Default::default() }.validate().is_err());
        assert!(ProbeConfig { test_fraction: 1.0, ..Default::default() }.validate().is_err());
    }
}
