use rayon::prelude::*;

use super::bank::ConvFilterBank;
use crate::error::{Error, Result};
use crate::imgcore::RasterImage;

/// Convolution output, `[channel][row][col]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMap {
    pub channels: usize,
    pub height: usize,
    pub width: usize,
    pub values: Vec<f32>,
}

impl FeatureMap {
    #[inline]
    pub fn get(&self, channel: usize, row: usize, col: usize) -> f32 {
        self.values[(channel * self.height + row) * self.width + col]
    }

    /// Feature vector at one location.
    pub fn vector(&self, row: usize, col: usize) -> Vec<f32> {
        (0..self.channels).map(|ch| self.get(ch, row, col)).collect()
    }
}

/// Cross-correlates the normalised image with every filter of the bank.
///
/// Single-channel images are replicated when the bank expects three channels.
/// Each filter is accumulated in a fixed `(channel, row, col)` tap order, so
/// results are bit-identical regardless of thread count.
pub fn extract_features(x: &RasterImage, bank: &ConvFilterBank) -> Result<FeatureMap> {
    bank.validate()?;
    let promoted;
    let x = if x.channels() == 1 && bank.in_channels == 3 {
        promoted = x.to_rgb();
        &promoted
    } else {
        x
    };
    if x.channels() != bank.in_channels {
        return Err(Error::ChannelMismatch {
            expected: bank.in_channels,
            got: x.channels(),
        });
    }
    let (h, w) = x.dims();
    let (oh, ow) = match (
        bank.output_len(h, bank.kernel_h),
        bank.output_len(w, bank.kernel_w),
    ) {
        (Some(oh), Some(ow)) => (oh, ow),
        _ => {
            return Err(Error::InvalidConfig(format!(
                "image {h}x{w} smaller than kernel {}x{}",
                bank.kernel_h, bank.kernel_w
            )))
        }
    };
    let (s, pad) = (bank.stride, bank.padding as isize);

    let mut out = vec![0f32; bank.num_filters * oh * ow];
    for ch in 0..bank.in_channels {
        let (mean, std) = (bank.input_mean[ch], bank.input_std[ch]);
        let plane: Vec<f32> = (0..h * w)
            .map(|i| (x.as_slice()[i * bank.in_channels + ch] as f32 / 255.0 - mean) / std)
            .collect();
        // One column-subsampled copy per horizontal tap, so the inner loop
        // below runs over contiguous memory. Zero padding falls out naturally.
        let phases: Vec<Vec<f32>> = (0..bank.kernel_w)
            .map(|kx| {
                let mut p = vec![0f32; h * ow];
                for r in 0..h {
                    for ox in 0..ow {
                        let ix = (ox * s) as isize + kx as isize - pad;
                        if ix >= 0 && (ix as usize) < w {
                            p[r * ow + ox] = plane[r * w + ix as usize];
                        }
                    }
                }
                p
            })
            .collect();
        out.par_chunks_mut(oh * ow)
            .enumerate()
            .for_each(|(f, fmap)| {
                for ky in 0..bank.kernel_h {
                    for (kx, phase) in phases.iter().enumerate() {
                        let wt = bank.weight(f, ch, ky, kx);
                        for oy in 0..oh {
                            let iy = (oy * s) as isize + ky as isize - pad;
                            if iy < 0 || iy as usize >= h {
                                continue;
                            }
                            let src = &phase[iy as usize * ow..(iy as usize + 1) * ow];
                            let dst = &mut fmap[oy * ow..(oy + 1) * ow];
                            for (d, &v) in dst.iter_mut().zip(src) {
                                *d += wt * v;
                            }
                        }
                    }
                }
            });
    }
    Ok(FeatureMap {
        channels: bank.num_filters,
        height: oh,
        width: ow,
        values: out,
    })
}
