use super::raster::BinaryMask;

/// Zhang–Suen thinning to 1-pixel-wide centerlines.
///
/// Candidates of each sub-iteration are collected on a snapshot, then removed
/// in raster order only if they are still deletable at removal time. The
/// re-check keeps 2-pixel-thick structures from vanishing (plain parallel
/// Zhang–Suen erases a 2×2 block entirely), so the number of 8-connected
/// components never changes.
pub fn skeletonize(m: &BinaryMask) -> BinaryMask {
    let mut out = m.clone();
    let mut candidates = Vec::new();
    loop {
        let mut changed = false;
        for step in 0..2 {
            candidates.clear();
            candidates.extend(out.foreground().filter(|&(r, c)| deletable(&out, r, c, step)));
            for &(r, c) in &candidates {
                if deletable(&out, r, c, step) {
                    out.set(r, c, false);
                    changed = true;
                }
            }
        }
        if !changed {
            return out;
        }
    }
}

fn deletable(m: &BinaryMask, r: usize, c: usize, step: usize) -> bool {
    let (r, c) = (r as isize, c as isize);
    // P2..P9, clockwise from north.
    let p = [
        m.get_signed(r - 1, c),
        m.get_signed(r - 1, c + 1),
        m.get_signed(r, c + 1),
        m.get_signed(r + 1, c + 1),
        m.get_signed(r + 1, c),
        m.get_signed(r + 1, c - 1),
        m.get_signed(r, c - 1),
        m.get_signed(r - 1, c - 1),
    ];
    let b = p.iter().filter(|&&v| v).count();
    if !(2..=6).contains(&b) {
        return false;
    }
    let a = (0..8).filter(|&i| !p[i] && p[(i + 1) % 8]).count();
    if a != 1 {
        return false;
    }
    let (n, e, s, w) = (p[0], p[2], p[4], p[6]);
    if step == 0 {
        !(n && e && s) && !(e && s && w)
    } else {
        !(n && e && w) && !(n && s && w)
    }
}
