use super::raster::{BinaryMask, RasterImage};

/// Source index sampled for destination index `i` under half-pixel-centre
/// nearest-neighbour mapping.
#[inline]
pub(crate) fn nn_source(i: usize, src: usize, dst: usize) -> usize {
    (((2 * i + 1) * src) / (2 * dst)).min(src - 1)
}

/// Nearest-neighbour resize.
///
/// Panics if `height` or `width` is zero.
pub fn resize_mask_nn(m: &BinaryMask, height: usize, width: usize) -> BinaryMask {
    assert!(height >= 1 && width >= 1, "target size must be positive");
    if m.dims() == (height, width) {
        return m.clone();
    }
    let cols: Vec<usize> = (0..width).map(|c| nn_source(c, m.width(), width)).collect();
    let mut out = BinaryMask::new(height, width);
    for r in 0..height {
        let sr = nn_source(r, m.height(), height);
        for (c, &sc) in cols.iter().enumerate() {
            out.set(r, c, m.get(sr, sc));
        }
    }
    out
}

/// Linear interpolation taps `(i0, i1, frac)` for each destination index,
/// half-pixel centres, edge-clamped.
fn linear_taps(src: usize, dst: usize) -> Vec<(usize, usize, f64)> {
    let scale = src as f64 / dst as f64;
    (0..dst)
        .map(|i| {
            let x = ((i as f64 + 0.5) * scale - 0.5).clamp(0.0, (src - 1) as f64);
            let i0 = x.floor() as usize;
            let i1 = (i0 + 1).min(src - 1);
            (i0, i1, x - i0 as f64)
        })
        .collect()
}

/// Bilinear resize. Values are rounded back to 8 bits, so a constant image
/// stays constant.
pub fn resize_image(x: &RasterImage, height: usize, width: usize) -> RasterImage {
    assert!(height >= 1 && width >= 1, "target size must be positive");
    if x.dims() == (height, width) {
        return x.clone();
    }
    let rows = linear_taps(x.height(), height);
    let cols = linear_taps(x.width(), width);
    let ch = x.channels();
    let mut out = RasterImage::new(height, width, ch);
    for (r, &(r0, r1, fy)) in rows.iter().enumerate() {
        for (c, &(c0, c1, fx)) in cols.iter().enumerate() {
            for k in 0..ch {
                let top = x.get(r0, c0, k) as f64 * (1.0 - fx) + x.get(r0, c1, k) as f64 * fx;
                let bot = x.get(r1, c0, k) as f64 * (1.0 - fx) + x.get(r1, c1, k) as f64 * fx;
                let v = top * (1.0 - fy) + bot * fy;
                out.set(r, c, k, v.round().clamp(0.0, 255.0) as u8);
            }
        }
    }
    out
}
