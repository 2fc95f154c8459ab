//! Multi-level analysis and synthesis of periodic images.
//!
//! One level on an `m×m` image: forward DFT, multiply by `conj M_j` sampled
//! at the DFT frequencies, inverse DFT, keep the samples on `D̃_j·Z²` (mod
//! `m`) scaled by `√|det D̃_j|`. Synthesis is the exact adjoint, so the
//! round trip is the identity whenever the design satisfies identity
//! summation and shift cancellation. The scaling channel (an `m/2 × m/2`
//! array) feeds the next level.
//!
//! Coefficient layout on `Q·Z²` mod `m` (`Z_{m/2} × Z_{m/4}`):
//!
//! ```text
//! (r, c)  ↦  position (2r, 4c − 2r) mod m
//! ```
//!
//! A shift of the image by `Q·k` moves `(r, c)` by `(k1 + k2, k2)`.
//! On `D2·Z²` the layout is `(r, c) ↦ (2r, 2c)`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fft::Fft2;
use crate::lattice::IntMat2;
use crate::mfunc::{MFunctionSet, Variant};
use crate::partition::REGIONS;

/// Square image, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    pub n: usize,
    pub data: Vec<f64>,
}

impl Image {
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        if n == 0 || data.len() != n * n {
            return Err(Error::InvalidArgument(format!(
                "image of size {n} needs {} samples, got {}",
                n * n,
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite pixel".into()));
        }
        Ok(Image { n, data })
    }

    /// Uniform samples in `[0, 1)`, reproducible from `seed`.
    pub fn random(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Image {
            n,
            data: (0..n * n).map(|_| rng.gen::<f64>()).collect(),
        }
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// `‖self − other‖ / ‖other‖`.
    pub fn relative_error(&self, other: &Image) -> f64 {
        let d: f64 = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        d / other.norm()
    }

    /// Periodic shift: `out[x] = self[x − s]`.
    pub fn shifted(&self, s: [i64; 2]) -> Image {
        let n = self.n as i64;
        let mut data = vec![0.0; self.data.len()];
        for x in 0..n {
            for y in 0..n {
                let sx = (x - s[0]).rem_euclid(n);
                let sy = (y - s[1]).rem_euclid(n);
                data[(x * n + y) as usize] = self.data[(sx * n + sy) as usize];
            }
        }
        Image { n: self.n, data }
    }
}

/// Coefficients of one channel on a sampling lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffArray {
    pub lattice: IntMat2,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Complex64>,
}

impl CoeffArray {
    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn energy(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum()
    }
}

/// Array shape of the coset samples on an `m×m` grid.
pub fn lattice_shape(lattice: &IntMat2, m: usize) -> Result<(usize, usize)> {
    match *lattice {
        IntMat2::D2 if m.is_multiple_of(2) => Ok((m / 2, m / 2)),
        IntMat2::Q if m.is_multiple_of(4) => Ok((m / 2, m / 4)),
        IntMat2::IDENTITY => Ok((m, m)),
        _ => Err(Error::InvalidArgument(format!(
            "unsupported lattice {lattice:?} on a {m}-grid"
        ))),
    }
}

/// Image position of coefficient `(r, c)` (see the module docs).
pub fn lattice_position(lattice: &IntMat2, m: usize, r: usize, c: usize) -> (usize, usize) {
    match *lattice {
        IntMat2::Q => (2 * r % m, (4 * c + 2 * m - 2 * (r % (m / 2))) % m),
        IntMat2::D2 => (2 * r, 2 * c),
        _ => (r, c),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    /// Side length of the image analysed at this level.
    pub size: usize,
    /// Channels 1 … 6.
    pub details: Vec<CoeffArray>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoeffPyramid {
    pub variant: Variant,
    pub n: usize,
    /// Finest level first.
    pub levels: Vec<Level>,
    /// Scaling coefficients of the coarsest level.
    pub scaling: CoeffArray,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientCount {
    pub total: usize,
    /// Detail coefficients per level, finest first.
    pub per_level: Vec<usize>,
    pub scaling: usize,
}

impl CoeffPyramid {
    pub fn energy(&self) -> f64 {
        self.scaling.energy()
            + self
                .levels
                .iter()
                .flat_map(|l| &l.details)
                .map(CoeffArray::energy)
                .sum::<f64>()
    }

    pub fn max_imag(&self) -> f64 {
        self.arrays()
            .flat_map(|a| &a.data)
            .map(|v| v.im.abs())
            .fold(0.0, f64::max)
    }

    /// Every array, finest details first, scaling last.
    pub fn arrays(&self) -> impl Iterator<Item = &CoeffArray> {
        self.levels
            .iter()
            .flat_map(|l| &l.details)
            .chain(std::iter::once(&self.scaling))
    }

    pub fn arrays_mut(&mut self) -> impl Iterator<Item = &mut CoeffArray> {
        self.levels
            .iter_mut()
            .flat_map(|l| &mut l.details)
            .chain(std::iter::once(&mut self.scaling))
    }
}

pub fn coefficient_count(pyr: &CoeffPyramid) -> CoefficientCount {
    let per_level: Vec<usize> = pyr
        .levels
        .iter()
        .map(|l| l.details.iter().map(CoeffArray::len).sum())
        .collect();
    let scaling = pyr.scaling.len();
    CoefficientCount {
        total: per_level.iter().sum::<usize>() + scaling,
        per_level,
        scaling,
    }
}

fn check_size(n: usize, levels: usize) -> Result<()> {
    let block = 1usize
        .checked_shl(levels as u32 + 1)
        .ok_or(Error::ImageSize { n, levels })?;
    if n == 0 || !n.is_multiple_of(block) {
        return Err(Error::ImageSize { n, levels });
    }
    Ok(())
}

/// Centered grid index of DFT frequency index `a` on an `m`-grid.
fn centered(a: usize, m: usize) -> usize {
    (a + m / 2) % m
}

/// `L`-level decomposition.
pub fn analyze(image: &Image, set: &MFunctionSet, levels: usize) -> Result<CoeffPyramid> {
    check_size(image.n, levels)?;
    let mut current: Vec<Complex64> = image.data.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let mut m = image.n;
    let mut out = Vec::with_capacity(levels);
    for _ in 0..levels {
        let (scaling, details) = analyze_level(&current, m, set)?;
        out.push(Level { size: m, details });
        current = scaling.data;
        m /= 2;
    }
    let lattice = if levels == 0 { IntMat2::IDENTITY } else { IntMat2::D2 };
    Ok(CoeffPyramid {
        variant: set.variant(),
        n: image.n,
        levels: out,
        scaling: CoeffArray {
            lattice,
            rows: m,
            cols: m,
            data: current,
        },
    })
}

fn analyze_level(x: &[Complex64], m: usize, set: &MFunctionSet) -> Result<(CoeffArray, Vec<CoeffArray>)> {
    let grids = set.sample_all(m)?;
    let fft = Fft2::new(m);
    let mut spectrum = x.to_vec();
    fft.forward(&mut spectrum);
    let norm = 1.0 / (m * m) as f64;
    let mut channels: Vec<CoeffArray> = (0..REGIONS)
        .into_par_iter()
        .map(|j| {
            let g = &grids[j];
            let mut y: Vec<Complex64> = (0..m * m)
                .map(|k| {
                    let (a, b) = (k / m, k % m);
                    spectrum[k] * g[centered(a, m) * m + centered(b, m)].conj()
                })
                .collect();
            fft.inverse(&mut y);
            let lattice = set.downsampling(j)?;
            let (rows, cols) = lattice_shape(&lattice, m)?;
            let scale = (lattice.index() as f64).sqrt() * norm;
            let mut data = Vec::with_capacity(rows * cols);
            for r in 0..rows {
                for c in 0..cols {
                    let (px, py) = lattice_position(&lattice, m, r, c);
                    data.push(y[px * m + py] * scale);
                }
            }
            Ok(CoeffArray {
                lattice,
                rows,
                cols,
                data,
            })
        })
        .collect::<Result<_>>()?;
    let details = channels.split_off(1);
    Ok((channels.pop().unwrap(), details))
}

/// Adjoint of [`analyze`]; the real part of the result.
pub fn synthesize(pyr: &CoeffPyramid, set: &MFunctionSet) -> Result<Image> {
    let data = synthesize_complex(pyr, set)?;
    Image::new(pyr.n, data.iter().map(|v| v.re).collect())
}

pub fn synthesize_complex(pyr: &CoeffPyramid, set: &MFunctionSet) -> Result<Vec<Complex64>> {
    if pyr.variant != set.variant() {
        return Err(Error::VariantMismatch {
            pyramid: pyr.variant.to_string(),
            design: set.variant().to_string(),
        });
    }
    check_size(pyr.n, pyr.levels.len())?;
    let mut current = pyr.scaling.data.clone();
    for level in pyr.levels.iter().rev() {
        let m = level.size;
        if level.details.len() != REGIONS - 1 {
            return Err(Error::Format(format!(
                "level of size {m} has {} detail arrays",
                level.details.len()
            )));
        }
        let scaling = CoeffArray {
            lattice: IntMat2::D2,
            rows: m / 2,
            cols: m / 2,
            data: current,
        };
        current = synthesize_level(&scaling, &level.details, m, set)?;
    }
    Ok(current)
}

fn synthesize_level(scaling: &CoeffArray, details: &[CoeffArray], m: usize, set: &MFunctionSet) -> Result<Vec<Complex64>> {
    let grids = set.sample_all(m)?;
    let fft = Fft2::new(m);
    let arrays: Vec<&CoeffArray> = std::iter::once(scaling).chain(details).collect();
    let parts: Vec<Vec<Complex64>> = arrays
        .par_iter()
        .enumerate()
        .map(|(j, arr)| {
            let lattice = set.downsampling(j)?;
            if arr.lattice != lattice || lattice_shape(&lattice, m)? != (arr.rows, arr.cols) || arr.data.len() != arr.rows * arr.cols {
                return Err(Error::Format(format!("channel {j} does not match a {m}-grid on {lattice:?}")));
            }
            let scale = (lattice.index() as f64).sqrt();
            let mut z = vec![Complex64::new(0.0, 0.0); m * m];
            for r in 0..arr.rows {
                for c in 0..arr.cols {
                    let (px, py) = lattice_position(&lattice, m, r, c);
                    z[px * m + py] = arr.data[r * arr.cols + c] * scale;
                }
            }
            fft.forward(&mut z);
            let g = &grids[j];
            for (k, v) in z.iter_mut().enumerate() {
                let (a, b) = (k / m, k % m);
                *v *= g[centered(a, m) * m + centered(b, m)];
            }
            Ok(z)
        })
        .collect::<Result<_>>()?;
    let mut sum = vec![Complex64::new(0.0, 0.0); m * m];
    for p in &parts {
        for (s, v) in sum.iter_mut().zip(p) {
            *s += v;
        }
    }
    fft.inverse(&mut sum);
    let norm = 1.0 / (m * m) as f64;
    for v in &mut sum {
        *v *= norm;
    }
    Ok(sum)
}
