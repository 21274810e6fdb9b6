use super::raster::{BinaryMask, Grid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElementShape {
    /// `|dy| + |dx| <= R`.
    Diamond(usize),
    /// `dy² + dx² <= r²`.
    Disk(usize),
}

/// Flat, origin-centred structuring element.
///
/// Both supported shapes are point-symmetric and every row of cells is a
/// contiguous run, which the counting kernels below rely on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuringElement {
    shape: ElementShape,
    offsets: Vec<(isize, isize)>,
    /// `(dy, dx_min, dx_max)` per element row, top to bottom.
    spans: Vec<(isize, isize, isize)>,
}

impl StructuringElement {
    pub fn new(shape: ElementShape) -> Self {
        let (radius, inside): (usize, Box<dyn Fn(isize, isize) -> bool>) = match shape {
            ElementShape::Diamond(r) => {
                let r = r as isize;
                (r as usize, Box::new(move |dy, dx| dy.abs() + dx.abs() <= r))
            }
            ElementShape::Disk(r) => {
                let r2 = (r * r) as isize;
                (r, Box::new(move |dy, dx| dy * dy + dx * dx <= r2))
            }
        };
        let r = radius as isize;
        let mut offsets = Vec::new();
        let mut spans = Vec::new();
        for dy in -r..=r {
            let row: Vec<isize> = (-r..=r).filter(|&dx| inside(dy, dx)).collect();
            if let (Some(&lo), Some(&hi)) = (row.first(), row.last()) {
                spans.push((dy, lo, hi));
            }
            offsets.extend(row.into_iter().map(|dx| (dy, dx)));
        }
        StructuringElement {
            shape,
            offsets,
            spans,
        }
    }

    pub fn diamond(radius: usize) -> Self {
        Self::new(ElementShape::Diamond(radius))
    }

    pub fn disk(radius: usize) -> Self {
        Self::new(ElementShape::Disk(radius))
    }

    pub fn shape(&self) -> ElementShape {
        self.shape
    }

    pub fn offsets(&self) -> &[(isize, isize)] {
        &self.offsets
    }

    /// Number of cells in the element.
    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }
}

/// Number of foreground pixels under the element centred at each pixel.
///
/// Pixels outside the mask count as background. Diamonds are counted in
/// O(H·W) regardless of radius with a summed-area table over the 45°-rotated
/// lattice, where the diamond becomes an axis-aligned square. Other shapes
/// use per-row prefix sums, O(H·W·rows).
pub fn neighbor_counts(m: &BinaryMask, se: &StructuringElement) -> Grid<u32> {
    match se.shape {
        ElementShape::Diamond(r) => diamond_counts(m, r),
        ElementShape::Disk(_) => span_counts(m, se),
    }
}

fn diamond_counts(m: &BinaryMask, radius: usize) -> Grid<u32> {
    let (h, w) = m.dims();
    // u = r + c, v = r - c + (w - 1); both in 0..n. Cells of the rotated
    // lattice whose parity does not map back to a pixel stay zero.
    let n = h + w - 1;
    let stride = n + 1;
    let mut sat = vec![0u32; stride * stride];
    for r in 0..h {
        for c in 0..w {
            if m.get(r, c) {
                let u = r + c;
                let v = r + w - 1 - c;
                sat[(u + 1) * stride + v + 1] = 1;
            }
        }
    }
    for u in 1..=n {
        let mut run = 0u32;
        for v in 1..=n {
            run += sat[u * stride + v];
            sat[u * stride + v] = run + sat[(u - 1) * stride + v];
        }
    }

    let mut out = Grid::filled(h, w, 0u32);
    for r in 0..h {
        for c in 0..w {
            let u = r + c;
            let v = r + w - 1 - c;
            let u0 = u.saturating_sub(radius);
            let v0 = v.saturating_sub(radius);
            let u1 = (u + radius + 1).min(n);
            let v1 = (v + radius + 1).min(n);
            let s = sat[u1 * stride + v1] + sat[u0 * stride + v0]
                - sat[u0 * stride + v1]
                - sat[u1 * stride + v0];
            out.data[r * w + c] = s;
        }
    }
    out
}

fn span_counts(m: &BinaryMask, se: &StructuringElement) -> Grid<u32> {
    let (h, w) = m.dims();
    let stride = w + 1;
    let mut prefix = vec![0u32; h * stride];
    for r in 0..h {
        let row = &mut prefix[r * stride..(r + 1) * stride];
        for c in 0..w {
            row[c + 1] = row[c] + m.get(r, c) as u32;
        }
    }
    let mut out = Grid::filled(h, w, 0u32);
    for r in 0..h {
        for &(dy, lo, hi) in &se.spans {
            let rr = r as isize + dy;
            if rr < 0 || rr >= h as isize {
                continue;
            }
            let row = &prefix[rr as usize * stride..(rr as usize + 1) * stride];
            let out_row = &mut out.data[r * w..(r + 1) * w];
            for (c, slot) in out_row.iter_mut().enumerate() {
                let a = (c as isize + lo).clamp(0, w as isize) as usize;
                let b = (c as isize + hi + 1).clamp(0, w as isize) as usize;
                *slot += row[b] - row[a];
            }
        }
    }
    out
}

/// Binary dilation: a pixel is set when the element centred on it covers at
/// least one foreground pixel.
pub fn dilate(m: &BinaryMask, se: &StructuringElement) -> BinaryMask {
    let counts = neighbor_counts(m, se);
    let data = counts.data.iter().map(|&n| n > 0).collect();
    BinaryMask::from_vec(m.height(), m.width(), data).expect("same geometry")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_counts(m: &BinaryMask, se: &StructuringElement) -> Vec<u32> {
        let mut out = Vec::new();
        for r in 0..m.height() as isize {
            for c in 0..m.width() as isize {
                let n = se
                    .offsets()
                    .iter()
                    .filter(|&&(dy, dx)| m.get_signed(r + dy, c + dx))
                    .count();
                out.push(n as u32);
            }
        }
        out
    }

    fn mask_strategy(max: usize) -> impl Strategy<Value = BinaryMask> {
        (1..=max, 1..=max).prop_flat_map(|(h, w)| {
            proptest::collection::vec(any::<bool>(), h * w)
                .prop_map(move |d| BinaryMask::from_vec(h, w, d).unwrap())
        })
    }

    #[test]
    fn diamond_sizes() {
        assert_eq!(StructuringElement::diamond(0).offsets(), &[(0, 0)]);
        assert_eq!(StructuringElement::diamond(1).len(), 5);
        for r in 0..8usize {
            assert_eq!(StructuringElement::diamond(r).len(), 2 * r * r + 2 * r + 1);
        }
    }

    #[test]
    fn diamond_five_enumeration() {
        let mut n = 0;
        for dy in -5i32..=5 {
            for dx in -5i32..=5 {
                if dy.abs() + dx.abs() <= 5 {
                    n += 1;
                }
            }
        }
        assert_eq!(n, 61);
        assert_eq!(StructuringElement::diamond(5).len(), 61);
    }

    #[test]
    fn disk_five_has_81_cells() {
        assert_eq!(StructuringElement::disk(5).len(), 81);
    }

    #[test]
    fn counts_on_trivial_masks() {
        let empty = BinaryMask::new(8, 8);
        let se = StructuringElement::diamond(1);
        assert!(neighbor_counts(&empty, &se).data.iter().all(|&v| v == 0));

        let full = BinaryMask::from_fn(8, 8, |_, _| true);
        let counts = neighbor_counts(&full, &se);
        assert_eq!(counts.get(4, 4), 5);
        assert_eq!(counts.get(0, 0), 3);
        assert_eq!(counts.get(0, 4), 4);
    }

    #[test]
    fn dilate_point_is_element() {
        let mut m = BinaryMask::new(21, 21);
        m.set(10, 10, true);
        let se = StructuringElement::disk(5);
        let d = dilate(&m, &se);
        assert_eq!(d.foreground_count(), se.len());
        for &(dy, dx) in se.offsets() {
            assert!(d.get((10 + dy) as usize, (10 + dx) as usize));
        }
    }

    #[test]
    fn dilate_identity_element() {
        let m = BinaryMask::from_fn(7, 9, |r, c| (r * 3 + c * 5) % 4 == 0);
        assert_eq!(dilate(&m, &StructuringElement::diamond(0)), m);
    }

    #[test]
    fn line_dilated_by_disk4_is_nine_tall() {
        let mut m = BinaryMask::new(30, 60);
        for c in 10..50 {
            m.set(15, c, true);
        }
        let d = dilate(&m, &StructuringElement::disk(4));
        for c in 10..50 {
            let col: usize = (0..30).filter(|&r| d.get(r, c)).count();
            assert_eq!(col, 9);
        }
    }

    proptest! {
        #[test]
        fn counts_match_brute_force(m in mask_strategy(24), r in 0usize..7, disk in any::<bool>()) {
            let se = if disk { StructuringElement::disk(r) } else { StructuringElement::diamond(r) };
            let fast = neighbor_counts(&m, &se);
            prop_assert_eq!(fast.data, brute_counts(&m, &se));
        }

        #[test]
        fn counts_bounded_by_element(m in mask_strategy(16), r in 0usize..5) {
            let se = StructuringElement::diamond(r);
            let counts = neighbor_counts(&m, &se);
            for row in 0..m.height() as isize {
                for col in 0..m.width() as isize {
                    let n = counts.get(row as usize, col as usize) as usize;
                    prop_assert!(n <= se.len());
                    let full = se.offsets().iter().all(|&(dy, dx)| m.get_signed(row + dy, col + dx));
                    prop_assert_eq!(n == se.len(), full);
                }
            }
        }

        #[test]
        fn dilate_is_monotone_and_extensive(m in mask_strategy(16), extra in mask_strategy(16), r in 0usize..4) {
            let se = StructuringElement::disk(r);
            let d = dilate(&m, &se);
            prop_assert!(m.and_not(&d).unwrap().is_empty());
            if extra.dims() == m.dims() {
                let bigger = m.or(&extra).unwrap();
                prop_assert!(d.and_not(&dilate(&bigger, &se)).unwrap().is_empty());
            }
        }
    }
}
