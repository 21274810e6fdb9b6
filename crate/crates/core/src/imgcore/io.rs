//! PNG/JPEG reading and writing for masks and images.

use std::path::{Path, PathBuf};

use image::{DynamicImage, GrayImage, ImageFormat, RgbImage};

use super::raster::{BinaryMask, RasterImage};
use crate::error::{Error, Result};

fn open(path: &Path) -> Result<DynamicImage> {
    image::open(path).map_err(|source| Error::Image {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads a mask; any nonzero luma value is foreground.
pub fn load_mask(path: impl AsRef<Path>) -> Result<BinaryMask> {
    let gray = open(path.as_ref())?.into_luma8();
    let (w, h) = gray.dimensions();
    BinaryMask::from_vec(
        h as usize,
        w as usize,
        gray.into_raw().into_iter().map(|v| v != 0).collect(),
    )
}

/// Reads an image as 3-channel RGB, replicating grayscale input.
pub fn load_image(path: impl AsRef<Path>) -> Result<RasterImage> {
    let rgb = open(path.as_ref())?.into_rgb8();
    let (w, h) = rgb.dimensions();
    RasterImage::from_vec(h as usize, w as usize, 3, rgb.into_raw())
}

/// Reads a single-channel map scaled to `[0, 1]` (row-major).
pub fn load_gray_unit(path: impl AsRef<Path>) -> Result<(usize, usize, Vec<f64>)> {
    let gray = open(path.as_ref())?.into_luma16();
    let (w, h) = gray.dimensions();
    let values = gray
        .into_raw()
        .into_iter()
        .map(|v| v as f64 / u16::MAX as f64)
        .collect();
    Ok((h as usize, w as usize, values))
}

pub fn save_mask(m: &BinaryMask, path: impl AsRef<Path>) -> Result<()> {
    let raw = m.as_slice().iter().map(|&v| if v { 255 } else { 0 }).collect();
    let img = GrayImage::from_raw(m.width() as u32, m.height() as u32, raw).expect("geometry");
    write_atomic(path.as_ref(), |tmp| img.save_with_format(tmp, ImageFormat::Png))
}

pub fn save_image(x: &RasterImage, path: impl AsRef<Path>) -> Result<()> {
    let (w, h) = (x.width() as u32, x.height() as u32);
    let raw = x.as_slice().to_vec();
    let path = path.as_ref();
    if x.channels() == 1 {
        let img = GrayImage::from_raw(w, h, raw).expect("geometry");
        write_atomic(path, |tmp| img.save_with_format(tmp, ImageFormat::Png))
    } else {
        let img = RgbImage::from_raw(w, h, raw).expect("geometry");
        write_atomic(path, |tmp| img.save_with_format(tmp, ImageFormat::Png))
    }
}

/// Writes to a sibling temporary file and renames it into place.
fn write_atomic(
    path: &Path,
    write: impl FnOnce(&Path) -> image::ImageResult<()>,
) -> Result<()> {
    let tmp = tmp_sibling(path);
    write(&tmp).map_err(|source| Error::Image {
        path: path.to_path_buf(),
        source,
    })?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

pub(crate) fn tmp_sibling(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".tmp");
    path.with_file_name(name)
}
