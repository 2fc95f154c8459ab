//! Square 2D FFTs on row-major buffers.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

pub struct Fft2 {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Fft2 {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Fft2 {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    /// Unnormalized `Σ_x f(x) e^{−2πi k·x/N}`.
    pub fn forward(&self, data: &mut [Complex64]) {
        self.run(&*self.forward, data);
    }

    /// Unnormalized `Σ_k F(k) e^{+2πi k·x/N}`.
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.run(&*self.inverse, data);
    }

    fn run(&self, fft: &dyn Fft<f64>, data: &mut [Complex64]) {
        let n = self.n;
        assert_eq!(data.len(), n * n);
        fft.process(data);
        transpose(data, n);
        fft.process(data);
        transpose(data, n);
    }
}

fn transpose(data: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in i + 1..n {
            data.swap(i * n + j, j * n + i);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_direct_sum() {
        let n = 8;
        let f: Vec<Complex64> = (0..n * n)
            .map(|k| Complex64::new((k as f64 * 0.37).sin(), (k as f64 * 0.11).cos()))
            .collect();
        let mut g = f.clone();
        Fft2::new(n).forward(&mut g);
        for k1 in 0..n {
            for k2 in 0..n {
                let mut s = Complex64::new(0.0, 0.0);
                for x1 in 0..n {
                    for x2 in 0..n {
                        let a = -2.0 * std::f64::consts::PI * ((k1 * x1 + k2 * x2) as f64) / n as f64;
                        s += f[x1 * n + x2] * Complex64::from_polar(1.0, a);
                    }
                }
                assert!((s - g[k1 * n + k2]).norm() < 1e-12);
            }
        }
        Fft2::new(n).inverse(&mut g);
        for (a, b) in f.iter().zip(&g) {
            assert!((a * (n * n) as f64 - b).norm() < 1e-11);
        }
    }
}
