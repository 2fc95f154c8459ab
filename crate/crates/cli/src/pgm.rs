//! Grayscale PGM input and output.

use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use image::DynamicImage;

/// Square image read from a PGM file, with its sample range.
pub struct Gray {
    pub n: usize,
    pub data: Vec<f64>,
    pub maxval: u32,
}

pub fn read(path: &Path) -> Result<Gray> {
    let img = image::ImageReader::open(path)
        .with_context(|| format!("opening {}", path.display()))?
        .with_guessed_format()?
        .decode()
        .with_context(|| format!("decoding {}", path.display()))?;
    let (w, h) = (img.width() as usize, img.height() as usize);
    if w != h {
        bail!("{}: image is {w}x{h}, expected a square image", path.display());
    }
    // Row-major with the first index along the rows (vertical axis).
    let (data, maxval) = match img {
        DynamicImage::ImageLuma8(b) => (b.into_raw().into_iter().map(f64::from).collect(), 255),
        DynamicImage::ImageLuma16(b) => (b.into_raw().into_iter().map(f64::from).collect(), 65535),
        other => bail!("{}: expected a grayscale image, found {:?}", path.display(), other.color()),
    };
    Ok(Gray { n: w, data, maxval })
}

/// Map from sample values to stored pixels: `pixel = round((v − offset)·scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Affine {
    pub offset: f64,
    pub scale: f64,
}

/// Identity when every value fits `[0, maxval]` after rounding, otherwise a
/// stretch of `[min, max]` onto the full range.
pub fn choose_affine(data: &[f64], maxval: u32) -> Affine {
    let lo = data.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = data.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let top = maxval as f64;
    if lo >= -0.5 && hi < top + 0.5 {
        Affine { offset: 0.0, scale: 1.0 }
    } else if hi > lo {
        Affine { offset: lo, scale: top / (hi - lo) }
    } else {
        Affine { offset: lo, scale: 1.0 }
    }
}

pub fn write(path: &Path, n: usize, data: &[f64], maxval: u32, affine: Affine) -> Result<()> {
    if !(1..=65535).contains(&maxval) {
        bail!("maxval {maxval} outside 1..=65535");
    }
    let mut out = Vec::with_capacity(64 + data.len() * 2);
    write!(
        out,
        "P5\n# qshear affine: pixel = round((value - {:e}) * {:e})\n{n} {n}\n{maxval}\n",
        affine.offset, affine.scale
    )?;
    for &v in data {
        let p = ((v - affine.offset) * affine.scale).round().clamp(0.0, maxval as f64) as u16;
        if maxval > 255 {
            out.extend_from_slice(&p.to_be_bytes());
        } else {
            out.push(p as u8);
        }
    }
    std::fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}
