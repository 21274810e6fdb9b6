use std::io::{Read, Write};
use std::path::Path;

use rand::SeedableRng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"TXFB";
const VERSION: u32 = 1;

/// Per-channel statistics the canonical ImageNet-trained networks expect.
pub const IMAGENET_MEAN: [f32; 3] = [0.485, 0.456, 0.406];
pub const IMAGENET_STD: [f32; 3] = [0.229, 0.224, 0.225];

/// A fixed first-layer convolution used as the texture feature extractor.
///
/// Weights are stored `[filter][channel][row][col]`. Inputs are normalised as
/// `(v / 255 - mean) / std` per channel before convolution.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvFilterBank {
    pub num_filters: usize,
    pub in_channels: usize,
    pub kernel_h: usize,
    pub kernel_w: usize,
    pub stride: usize,
    pub padding: usize,
    pub input_mean: Vec<f32>,
    pub input_std: Vec<f32>,
    pub weights: Vec<f32>,
}

impl ConvFilterBank {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Format(msg));
        if self.num_filters == 0 || self.in_channels == 0 || self.kernel_h == 0 || self.kernel_w == 0 {
            return bad("zero-sized bank geometry".into());
        }
        if self.stride == 0 {
            return bad("stride must be >= 1".into());
        }
        if self.input_mean.len() != self.in_channels || self.input_std.len() != self.in_channels {
            return bad("normalisation vectors do not match channel count".into());
        }
        if self.input_std.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            return bad("input std must be finite and positive".into());
        }
        if self.input_mean.iter().any(|m| !m.is_finite()) {
            return bad("input mean must be finite".into());
        }
        let expected = self.num_filters * self.in_channels * self.kernel_h * self.kernel_w;
        if self.weights.len() != expected {
            return bad(format!(
                "expected {expected} weights, found {}",
                self.weights.len()
            ));
        }
        if self.weights.iter().any(|w| !w.is_finite()) {
            return bad("non-finite weight".into());
        }
        Ok(())
    }

    /// Seeded He-normal bank with the canonical geometry: 64 filters of
    /// 3×7×7, stride 2, padding 3, ImageNet normalisation.
    pub fn random(seed: u64) -> Self {
        Self::random_with(seed, 64, 3, 7, 2, 3)
    }

    pub fn random_with(
        seed: u64,
        num_filters: usize,
        in_channels: usize,
        kernel: usize,
        stride: usize,
        padding: usize,
    ) -> Self {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let fan_in = (in_channels * kernel * kernel) as f32;
        let normal = Normal::new(0.0f32, (2.0 / fan_in).sqrt()).expect("valid sigma");
        let n = num_filters * in_channels * kernel * kernel;
        let (input_mean, input_std) = if in_channels == 3 {
            (IMAGENET_MEAN.to_vec(), IMAGENET_STD.to_vec())
        } else {
            (vec![0.5; in_channels], vec![0.25; in_channels])
        };
        ConvFilterBank {
            num_filters,
            in_channels,
            kernel_h: kernel,
            kernel_w: kernel,
            stride,
            padding,
            input_mean,
            input_std,
            weights: (0..n).map(|_| normal.sample(&mut rng)).collect(),
        }
    }

    #[inline]
    pub fn weight(&self, filter: usize, channel: usize, row: usize, col: usize) -> f32 {
        self.weights[((filter * self.in_channels + channel) * self.kernel_h + row) * self.kernel_w + col]
    }

    /// Output size along one axis.
    pub fn output_len(&self, input: usize, kernel: usize) -> Option<usize> {
        (input + 2 * self.padding)
            .checked_sub(kernel)
            .map(|span| span / self.stride + 1)
    }

    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        self.validate()?;
        w.write_all(MAGIC)?;
        for v in [
            VERSION as usize,
            self.num_filters,
            self.in_channels,
            self.kernel_h,
            self.kernel_w,
            self.stride,
            self.padding,
        ] {
            let v = u32::try_from(v).map_err(|_| Error::Format("field exceeds u32".into()))?;
            w.write_all(&v.to_le_bytes())?;
        }
        for v in self.input_mean.iter().chain(&self.input_std).chain(&self.weights) {
            w.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    /// Parses the little-endian `TXFB` v1 layout. Trailing bytes are rejected.
    pub fn read_from(mut r: impl Read) -> Result<Self> {
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)?;
        let mut cur = Cursor { bytes: &bytes, pos: 0 };
        if cur.take(4)? != MAGIC {
            return Err(Error::Format("bad magic".into()));
        }
        let version = cur.u32()?;
        if version != VERSION {
            return Err(Error::Format(format!("unsupported version {version}")));
        }
        let mut header = [0usize; 6];
        for h in header.iter_mut() {
            *h = cur.u32()? as usize;
        }
        let [num_filters, in_channels, kernel_h, kernel_w, stride, padding] = header;
        let n_weights = num_filters
            .checked_mul(in_channels)
            .and_then(|v| v.checked_mul(kernel_h))
            .and_then(|v| v.checked_mul(kernel_w))
            .ok_or_else(|| Error::Format("weight count overflows".into()))?;
        let input_mean = cur.f32s(in_channels)?;
        let input_std = cur.f32s(in_channels)?;
        let weights = cur.f32s(n_weights)?;
        if cur.pos != bytes.len() {
            return Err(Error::Format(format!(
                "{} trailing bytes",
                bytes.len() - cur.pos
            )));
        }
        let bank = ConvFilterBank {
            num_filters,
            in_channels,
            kernel_h,
            kernel_w,
            stride,
            padding,
            input_mean,
            input_std,
            weights,
        };
        bank.validate()?;
        Ok(bank)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut buf = Vec::new();
        self.write_to(&mut buf)?;
        std::fs::write(path, buf)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_from(std::fs::File::open(path)?)
    }
}

/// Reads a bank from disk.
pub fn load_filter_bank(path: impl AsRef<Path>) -> Result<ConvFilterBank> {
    ConvFilterBank::load(path)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn take(&mut self, n: usize) -> Result<&[u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.bytes.len())
            .ok_or_else(|| Error::Format("truncated file".into()))?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    fn f32s(&mut self, n: usize) -> Result<Vec<f32>> {
        let len = n
            .checked_mul(4)
            .ok_or_else(|| Error::Format("payload size overflows".into()))?;
        Ok(self
            .take(len)?
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes(c.try_into().expect("4 bytes")))
            .collect())
    }
}
