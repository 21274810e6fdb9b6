use super::raster::{BinaryMask, Grid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Connectivity {
    Four,
    #[default]
    Eight,
}

impl Connectivity {
    fn offsets(self) -> &'static [(isize, isize)] {
        match self {
            Connectivity::Four => &[(-1, 0), (0, -1), (0, 1), (1, 0)],
            Connectivity::Eight => &[
                (-1, -1),
                (-1, 0),
                (-1, 1),
                (0, -1),
                (0, 1),
                (1, -1),
                (1, 0),
                (1, 1),
            ],
        }
    }
}

/// Label grid with `0` for background and `1..=count` for components,
/// numbered in the raster order in which each component is first met.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledComponents {
    pub labels: Grid<u32>,
    pub count: usize,
}

impl LabeledComponents {
    /// Mask of the pixels carrying `label`.
    pub fn component(&self, label: u32) -> BinaryMask {
        let data = self.labels.data.iter().map(|&l| l == label).collect();
        BinaryMask::from_vec(self.labels.height, self.labels.width, data).expect("same geometry")
    }

    /// Pixel count per label; index 0 is background.
    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.count + 1];
        for &l in &self.labels.data {
            sizes[l as usize] += 1;
        }
        sizes
    }
}

pub fn connected_components(m: &BinaryMask, connectivity: Connectivity) -> LabeledComponents {
    let (h, w) = m.dims();
    let mut labels = Grid::filled(h, w, 0u32);
    let mut count = 0u32;
    let mut stack = Vec::new();
    for start in 0..h * w {
        if !m.as_slice()[start] || labels.data[start] != 0 {
            continue;
        }
        count += 1;
        labels.data[start] = count;
        stack.push(start);
        while let Some(i) = stack.pop() {
            let (r, c) = ((i / w) as isize, (i % w) as isize);
            for &(dy, dx) in connectivity.offsets() {
                let (rr, cc) = (r + dy, c + dx);
                if rr < 0 || cc < 0 || rr >= h as isize || cc >= w as isize {
                    continue;
                }
                let j = rr as usize * w + cc as usize;
                if m.as_slice()[j] && labels.data[j] == 0 {
                    labels.data[j] = count;
                    stack.push(j);
                }
            }
        }
    }
    LabeledComponents {
        labels,
        count: count as usize,
    }
}
