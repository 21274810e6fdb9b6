//! Tree-likeness of an object mask.
//!
//! Two complementary descriptors:
//!
//! * **Contour pixel rate**: the fraction of foreground pixels that have a
//!   background pixel within L1 distance `R` (pixels outside the raster count
//!   as background).
//! * **Difference of Gini impurity deviation**: the population standard
//!   deviation of the window-wise Gini impurity `1 - p² - (1-p)²` over every
//!   fully contained `a×a` window, minus the same quantity for `b×b` windows.
//!   Thin, densely branching structures push the local (`b`) deviation up and
//!   the global (`a`) deviation down, so the value goes negative.
//!
//! Both run in O(H·W) independent of `R`, `a` and `b`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imgcore::{neighbor_counts, BinaryMask, Grid, StructuringElement};

/// Contour radius and window sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreelikeConfig {
    pub r: usize,
    pub a: usize,
    pub b: usize,
}

impl Default for TreelikeConfig {
    fn default() -> Self {
        TreelikeConfig { r: 5, a: 127, b: 3 }
    }
}

impl TreelikeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.r < 1 {
            return Err(Error::InvalidConfig("contour radius must be >= 1".into()));
        }
        if self.b < 1 || self.a <= self.b {
            return Err(Error::InvalidConfig(format!(
                "need a > b >= 1, got a={} b={}",
                self.a, self.b
            )));
        }
        Ok(())
    }
}

/// Foreground pixels whose diamond neighbourhood of radius `r` reaches
/// background.
pub fn contour_pixels(m: &BinaryMask, r: usize) -> BinaryMask {
    let se = StructuringElement::diamond(r);
    let full = se.len() as u32;
    let counts = neighbor_counts(m, &se);
    let data = m
        .as_slice()
        .iter()
        .zip(&counts.data)
        .map(|(&fg, &n)| fg && n < full)
        .collect();
    BinaryMask::from_vec(m.height(), m.width(), data).expect("same geometry")
}

/// Contour pixel rate `|C| / |F|`.
pub fn cpr(m: &BinaryMask, r: usize) -> Result<f64> {
    let fg = m.foreground_count();
    if fg == 0 {
        return Err(Error::EmptyMask);
    }
    Ok(contour_pixels(m, r).foreground_count() as f64 / fg as f64)
}

/// Gini impurity of every valid `k×k` window.
#[derive(Debug, Clone, PartialEq)]
pub struct GiniMap {
    pub window: usize,
    /// `(H-k+1)×(W-k+1)`; entry `(h0, w0)` describes `m[h0..h0+k, w0..w0+k]`.
    pub values: Grid<f64>,
}

/// Inclusive-exclusive summed-area table of foreground counts.
struct SummedArea {
    stride: usize,
    table: Vec<u32>,
}

impl SummedArea {
    fn new(m: &BinaryMask) -> Self {
        let (h, w) = m.dims();
        let stride = w + 1;
        let mut table = vec![0u32; (h + 1) * stride];
        for r in 0..h {
            let mut run = 0u32;
            for c in 0..w {
                run += m.get(r, c) as u32;
                table[(r + 1) * stride + c + 1] = table[r * stride + c + 1] + run;
            }
        }
        SummedArea { stride, table }
    }

    #[inline]
    fn window(&self, r: usize, c: usize, k: usize) -> u32 {
        let s = self.stride;
        self.table[(r + k) * s + c + k] + self.table[r * s + c]
            - self.table[r * s + c + k]
            - self.table[(r + k) * s + c]
    }
}

fn check_window(m: &BinaryMask, k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidConfig("window size must be >= 1".into()));
    }
    if k > m.height().min(m.width()) {
        return Err(Error::WindowTooLarge {
            window: k,
            height: m.height(),
            width: m.width(),
        });
    }
    Ok(())
}

#[inline]
fn gini_from_count(count: u32, k: usize) -> f64 {
    let p = count as f64 / (k * k) as f64;
    1.0 - p * p - (1.0 - p) * (1.0 - p)
}

pub fn gini_map(m: &BinaryMask, k: usize) -> Result<GiniMap> {
    check_window(m, k)?;
    let sat = SummedArea::new(m);
    let (oh, ow) = (m.height() - k + 1, m.width() - k + 1);
    let mut values = Grid::filled(oh, ow, 0.0);
    for r in 0..oh {
        for c in 0..ow {
            values.set(r, c, gini_from_count(sat.window(r, c, k), k));
        }
    }
    Ok(GiniMap { window: k, values })
}

/// Histogram of foreground counts over all valid `k×k` windows.
fn window_count_histogram(m: &BinaryMask, k: usize) -> Vec<u64> {
    let sat = SummedArea::new(m);
    let mut hist = vec![0u64; k * k + 1];
    for r in 0..=m.height() - k {
        for c in 0..=m.width() - k {
            hist[sat.window(r, c, k) as usize] += 1;
        }
    }
    hist
}

/// Population standard deviation of the window Gini impurity.
///
/// With `n` foreground pixels in a window, Gini is `2·n(k²-n)/k⁴`, so the
/// moments are accumulated exactly in integers from a histogram of window
/// counts. The result is therefore independent of window visiting order and
/// invariant under swapping foreground and background.
pub fn gini_std(m: &BinaryMask, k: usize) -> Result<f64> {
    check_window(m, k)?;
    let hist = window_count_histogram(m, k);
    let kk = (k * k) as u128;
    let mut n = 0u128;
    let mut s1 = 0u128;
    let mut s2 = 0u128;
    let mut exact = true;
    for (count, &freq) in hist.iter().enumerate() {
        if freq == 0 {
            continue;
        }
        let q = count as u128 * (kk - count as u128);
        let f = freq as u128;
        n += f;
        s1 += f * q;
        match q.checked_mul(q).and_then(|qq| qq.checked_mul(f)) {
            Some(v) => s2 += v,
            None => exact = false,
        }
    }
    let k4 = (kk * kk) as f64;
    let spread = match (exact, n.checked_mul(s2), s1.checked_mul(s1)) {
        (true, Some(a), Some(b)) => (a - b) as f64,
        _ => return Ok(gini_std_float(&hist, k)),
    };
    Ok(2.0 * spread.sqrt() / (n as f64 * k4))
}

/// Two-pass floating-point fallback for masks too large for exact moments.
fn gini_std_float(hist: &[u64], k: usize) -> f64 {
    let n: f64 = hist.iter().map(|&f| f as f64).sum();
    let mean = hist
        .iter()
        .enumerate()
        .map(|(c, &f)| f as f64 * gini_from_count(c as u32, k))
        .sum::<f64>()
        / n;
    let var = hist
        .iter()
        .enumerate()
        .map(|(c, &f)| f as f64 * (gini_from_count(c as u32, k) - mean).powi(2))
        .sum::<f64>()
        / n;
    var.sqrt()
}

/// `gini_std(m, a) - gini_std(m, b)`.
pub fn dogd(m: &BinaryMask, a: usize, b: usize) -> Result<f64> {
    if b == 0 || a <= b {
        return Err(Error::InvalidConfig(format!(
            "need a > b >= 1, got a={a} b={b}"
        )));
    }
    Ok(gini_std(m, a)? - gini_std(m, b)?)
}

/// Both descriptors under one configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreelikeScores {
    pub cpr: f64,
    pub dogd: f64,
}

pub fn treelike_scores(m: &BinaryMask, cfg: &TreelikeConfig) -> Result<TreelikeScores> {
    cfg.validate()?;
    Ok(TreelikeScores {
        cpr: cpr(m, cfg.r)?,
        dogd: dogd(m, cfg.a, cfg.b)?,
    })
}
