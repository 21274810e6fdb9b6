//! Procedural branching structures used as stand-ins for vessel and road
//! masks.

use rand::Rng;

use crate::imgcore::{dilate, BinaryMask, StructuringElement};

/// Shape controls for [`branching_skeleton`].
#[derive(Debug, Clone, PartialEq)]
pub struct TreeParams {
    /// Canvas side length.
    pub size: usize,
    /// Pixels kept free along every edge.
    pub margin: usize,
    /// Recursion depth range (inclusive); deeper trees branch more densely.
    pub depth: (usize, usize),
    /// Trunk length as a fraction of the canvas side.
    pub trunk: (f64, f64),
    /// Child/parent length ratio.
    pub shrink: (f64, f64),
    /// Branching half-angle range in radians.
    pub spread: (f64, f64),
    /// Probability that a node splits into three instead of two.
    pub trifurcate: f64,
}

impl TreeParams {
    pub fn new(size: usize) -> Self {
        TreeParams {
            size,
            margin: size / 16 + 2,
            depth: (3, 7),
            trunk: (0.2, 0.35),
            shrink: (0.6, 0.85),
            spread: (0.25, 0.9),
            trifurcate: 0.2,
        }
    }
}

/// Draws an 8-connected line (Bresenham) clipped to `m`.
pub fn draw_line(m: &mut BinaryMask, from: (isize, isize), to: (isize, isize)) {
    let (mut y, mut x) = from;
    let dy = -(to.0 - y).abs();
    let dx = (to.1 - x).abs();
    let sy = if y < to.0 { 1 } else { -1 };
    let sx = if x < to.1 { 1 } else { -1 };
    let mut err = dx + dy;
    loop {
        if y >= 0 && x >= 0 && (y as usize) < m.height() && (x as usize) < m.width() {
            m.set(y as usize, x as usize, true);
        }
        if (y, x) == to {
            break;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x += sx;
        }
        if e2 <= dx {
            err += dx;
            y += sy;
        }
    }
}

/// A random recursive tree rendered as 1-pixel polylines.
///
/// Each branch is a slightly wiggling polyline; at its end it splits into
/// two or three shorter children. Branches stop where they would leave the
/// margin box, so the result never touches the canvas edge.
pub fn branching_skeleton<R: Rng + ?Sized>(params: &TreeParams, rng: &mut R) -> BinaryMask {
    let size = params.size;
    let mut m = BinaryMask::new(size, size);
    let lo = params.margin as f64;
    let hi = (size - 1 - params.margin) as f64;
    let start = (
        rng.random_range(lo + (hi - lo) * 0.3..=lo + (hi - lo) * 0.7),
        rng.random_range(lo + (hi - lo) * 0.3..=lo + (hi - lo) * 0.7),
    );
    let heading = rng.random_range(0.0..std::f64::consts::TAU);
    let depth = rng.random_range(params.depth.0..=params.depth.1);
    let length = size as f64 * rng.random_range(params.trunk.0..=params.trunk.1);
    // A trunk grown in both directions makes the tree fill the canvas.
    grow(&mut m, params, rng, start, heading, length, depth, (lo, hi));
    grow(
        &mut m,
        params,
        rng,
        start,
        heading + std::f64::consts::PI,
        length,
        depth,
        (lo, hi),
    );
    m
}

#[allow(clippy::too_many_arguments)]
fn grow<R: Rng + ?Sized>(
    m: &mut BinaryMask,
    params: &TreeParams,
    rng: &mut R,
    start: (f64, f64),
    heading: f64,
    length: f64,
    depth: usize,
    bounds: (f64, f64),
) {
    if depth == 0 || length < 3.0 {
        return;
    }
    let steps = 4;
    let mut pos = start;
    let mut dir = heading;
    for _ in 0..steps {
        dir += rng.random_range(-0.25..0.25);
        let next = (
            pos.0 + dir.sin() * length / steps as f64,
            pos.1 + dir.cos() * length / steps as f64,
        );
        if next.0 < bounds.0 || next.0 > bounds.1 || next.1 < bounds.0 || next.1 > bounds.1 {
            return;
        }
        draw_line(
            m,
            (pos.0.round() as isize, pos.1.round() as isize),
            (next.0.round() as isize, next.1.round() as isize),
        );
        pos = next;
    }
    let children = if rng.random_bool(params.trifurcate) { 3 } else { 2 };
    let spread = rng.random_range(params.spread.0..=params.spread.1);
    for k in 0..children {
        let t = if children == 1 {
            0.0
        } else {
            k as f64 / (children - 1) as f64 * 2.0 - 1.0
        };
        let child_dir = dir + t * spread + rng.random_range(-0.1..0.1);
        let child_len = length * rng.random_range(params.shrink.0..=params.shrink.1);
        grow(m, params, rng, pos, child_dir, child_len, depth - 1, bounds);
    }
}

/// Branching skeleton dilated to a line width of `width` (odd widths are
/// exact: `width = 2r + 1`).
pub fn tree_mask<R: Rng + ?Sized>(params: &TreeParams, width: usize, rng: &mut R) -> BinaryMask {
    let skeleton = branching_skeleton(params, rng);
    dilate(&skeleton, &StructuringElement::disk(width.saturating_sub(1) / 2))
}
