//! Scaling function and quasi-shearlets from the transfer functions.
//!
//! Fourier convention: `f̂(ξ) = (2π)⁻¹ ∫ f(x) e^{−ixᵀξ} dx`, unitary in 2D, so
//! `φ̂(0) = (2π)⁻¹` gives `∫φ = 1` and `‖φ‖ = ‖φ̂‖`.
//!
//! Spatial fields are computed from frequency samples on
//! `ω_k = −zπ + kΔω`, `Δω = 2πz/N`, at `x_n = (n − N/2)/z`:
//!
//! ```text
//! f(x_n) = (2π)⁻¹ Δω² Σ_k f̂(ω_k) e^{iω_kᵀx_n}
//!        = (2π)⁻¹ Δω² (−1)^{n1+n2−N} · IDFT[(−1)^{k1+k2} f̂_k]_n      (unnormalized IDFT)
//! ```
//!
//! so that `Σ|f|²Δx² = Σ|f̂|²Δω²` holds exactly on the grid.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fft::Fft2;
use crate::mfunc::MFunctionSet;

/// `(2π)⁻¹ ∏_{k=1}^{K} M_0(ξ/2^k)`.
pub fn scaling_fourier(set: &MFunctionSet, xi: [f64; 2], depth: usize) -> Result<Complex64> {
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    Ok(scaling_product(set, xi, depth, set.unit_core_radius()))
}

fn scaling_product(set: &MFunctionSet, xi: [f64; 2], depth: usize, core: Option<f64>) -> Complex64 {
    let mut acc = Complex64::new(1.0 / (2.0 * PI), 0.0);
    let mut x = xi;
    for _ in 0..depth {
        x = [x[0] / 2.0, x[1] / 2.0];
        // All later factors are exactly 1 inside the unit core.
        if core.is_some_and(|r| x[0].abs().max(x[1].abs()) < r) {
            break;
        }
        acc *= set.evaluate_all(x)[0];
        if acc == Complex64::new(0.0, 0.0) {
            break;
        }
    }
    acc
}

/// `ψ̂^j(ω) = M_j(ξ) φ̂(ξ)` with `ξ = (D_jᵀ)⁻¹ω`.
pub fn wavelet_fourier(set: &MFunctionSet, j: usize, omega: [f64; 2], depth: usize) -> Result<Complex64> {
    if !(1..=6).contains(&j) {
        return Err(Error::InvalidIndex(j));
    }
    let xi = set.downsampling(j)?.transpose().solve_f64(omega);
    Ok(set.evaluate(j, xi)? * scaling_fourier(set, xi, depth)?)
}

/// `φ̂(ξ)` and `M_j(ξ) φ̂(ξ)` for all seven channels; `None` where `φ̂ = 0`.
pub(crate) fn channel_products(
    set: &MFunctionSet,
    xi: [f64; 2],
    depth: usize,
    core: Option<f64>,
) -> Option<(Complex64, [Complex64; 7])> {
    let phi = scaling_product(set, xi, depth, core);
    if phi == Complex64::new(0.0, 0.0) {
        return None;
    }
    Some((phi, set.evaluate_all(xi).map(|v| v * phi)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    Phi,
    Psi(usize),
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Channel::Phi => f.write_str("phi"),
            Channel::Psi(j) => write!(f, "psi_{j}"),
        }
    }
}

impl FromStr for Channel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "phi" {
            return Ok(Channel::Phi);
        }
        s.strip_prefix("psi_")
            .or_else(|| s.strip_prefix("psi"))
            .and_then(|d| d.parse::<usize>().ok())
            .filter(|j| (1..=6).contains(j))
            .map(Channel::Psi)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown channel '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// Samples at `ω_k = −zπ + 2πzk/N`.
    Frequency,
    /// Samples at `x_n = (n − N/2)/z`.
    Space,
}

/// `N×N` samples, row-major, first index along the first coordinate.
#[derive(Debug, Clone)]
pub struct FieldGrid {
    pub n: usize,
    pub zoom: usize,
    pub depth: usize,
    pub channel: Channel,
    pub domain: Domain,
    pub values: Vec<Complex64>,
    /// Fraction of frequency samples with `f̂(ω) ≠ conj f̂(−ω)` (to 1e−12),
    /// i.e. samples lying on a jump line of the transfer functions.
    pub asymmetric_fraction: f64,
}

impl FieldGrid {
    pub fn spacing(&self) -> f64 {
        match self.domain {
            Domain::Frequency => 2.0 * PI * self.zoom as f64 / self.n as f64,
            Domain::Space => 1.0 / self.zoom as f64,
        }
    }

    /// Coordinate of sample index `k` along either axis.
    pub fn coord(&self, k: usize) -> f64 {
        match self.domain {
            Domain::Frequency => -(self.zoom as f64) * PI + k as f64 * self.spacing(),
            Domain::Space => (k as f64 - (self.n / 2) as f64) * self.spacing(),
        }
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }

    /// `Σ|f|² · cell area`.
    pub fn energy(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.spacing().powi(2)
    }
}

fn check_field_args(n: usize, zoom: usize, depth: usize) -> Result<()> {
    if n < 256 || !n.is_power_of_two() {
        return Err(Error::InvalidArgument(format!("grid {n} must be a power of two >= 256")));
    }
    if zoom == 0 {
        return Err(Error::InvalidArgument("zoom must be at least 1".into()));
    }
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    Ok(())
}

/// Fourier transform of `channel` sampled on `[−zπ, zπ)²`.
pub fn frequency_field(set: &MFunctionSet, channel: Channel, n: usize, depth: usize, zoom: usize) -> Result<FieldGrid> {
    check_field_args(n, zoom, depth)?;
    if let Channel::Psi(j) = channel {
        if !(1..=6).contains(&j) {
            return Err(Error::InvalidIndex(j));
        }
    }
    let dt = match channel {
        Channel::Phi => None,
        Channel::Psi(j) => Some((j, set.downsampling(j)?.transpose())),
    };
    let core = set.unit_core_radius();
    let step = 2.0 * PI * zoom as f64 / n as f64;
    let w = |k: usize| -(zoom as f64) * PI + k as f64 * step;
    let values: Vec<Complex64> = (0..n)
        .into_par_iter()
        .flat_map_iter(|k1| {
            (0..n).map(move |k2| {
                let omega = [w(k1), w(k2)];
                match dt {
                    None => scaling_product(set, omega, depth, core),
                    Some((j, ref m)) => {
                        let xi = m.solve_f64(omega);
                        let phi = scaling_product(set, xi, depth, core);
                        if phi == Complex64::new(0.0, 0.0) {
                            phi
                        } else {
                            set.evaluate_all(xi)[j] * phi
                        }
                    }
                }
            })
        })
        .collect();
    let asym = (0..n * n)
        .filter(|&k| {
            let (k1, k2) = (k / n, k % n);
            let mirror = ((n - k1) % n) * n + (n - k2) % n;
            (values[k] - values[mirror].conj()).norm() > 1e-12
        })
        .count();
    Ok(FieldGrid {
        n,
        zoom,
        depth,
        channel,
        domain: Domain::Frequency,
        values,
        asymmetric_fraction: asym as f64 / (n * n) as f64,
    })
}

/// Spatial samples of `φ` or `ψ^j` on `N×N` points spaced `1/z`.
///
/// Frequency samples on a jump line of the transfer functions take the mean
/// of the two one-sided values `f̂(ω)` and `conj f̂(−ω)` (indices mod `N`);
/// off those lines the two agree. The fraction of affected samples is kept
/// in [`FieldGrid::asymmetric_fraction`].
pub fn spatial_field(set: &MFunctionSet, channel: Channel, n: usize, depth: usize, zoom: usize) -> Result<FieldGrid> {
    let freq = frequency_field(set, channel, n, depth, zoom)?;
    let mut data: Vec<Complex64> = (0..n * n)
        .map(|k| {
            let (k1, k2) = (k / n, k % n);
            let mirror = ((n - k1) % n) * n + (n - k2) % n;
            let v = (freq.values[k] + freq.values[mirror].conj()) * 0.5;
            if (k1 + k2) % 2 == 1 {
                -v
            } else {
                v
            }
        })
        .collect();
    Fft2::new(n).inverse(&mut data);
    let step = freq.spacing();
    let scale = step * step / (2.0 * PI);
    for (k, v) in data.iter_mut().enumerate() {
        let (k1, k2) = (k / n, k % n);
        // (−1)^{n1+n2−N} = (−1)^{n1+n2} for even N.
        let s = if (k1 + k2) % 2 == 1 { -scale } else { scale };
        *v *= s;
    }
    Ok(FieldGrid {
        n,
        zoom,
        depth,
        channel,
        domain: Domain::Space,
        values: data,
        asymmetric_fraction: freq.asymmetric_fraction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mfunc::{shannon_design, smoothed_onb_design, SmoothingConfig};

    #[test]
    fn product_examples() {
        let s = shannon_design();
        let c = 1.0 / (2.0 * PI);
        assert_eq!(scaling_fourier(&s, [0.0, 0.0], 3).unwrap().re, c);
        assert_eq!(scaling_fourier(&s, [PI / 4.0, PI / 4.0], 1).unwrap().re, c);
        assert_eq!(scaling_fourier(&s, [PI / 4.0, PI / 4.0], 9).unwrap().re, c);
        assert_eq!(scaling_fourier(&s, [2.0 * PI, 0.0], 5).unwrap().norm(), 0.0);
        assert!(scaling_fourier(&s, [0.0, 0.0], 0).is_err());
    }

    #[test]
    fn wavelets_vanish_at_origin() {
        let s = smoothed_onb_design(SmoothingConfig::default()).unwrap();
        for j in 1..=6 {
            assert_eq!(wavelet_fourier(&s, j, [0.0, 0.0], 12).unwrap().norm(), 0.0);
        }
        assert!(wavelet_fourier(&s, 0, [0.0, 0.0], 12).is_err());
    }

    #[test]
    fn channel_names() {
        assert_eq!("phi".parse::<Channel>().unwrap(), Channel::Phi);
        assert_eq!("psi3".parse::<Channel>().unwrap(), Channel::Psi(3));
        assert_eq!("psi_6".parse::<Channel>().unwrap(), Channel::Psi(6));
        assert!("psi7".parse::<Channel>().is_err());
    }
}
