//! Numerical checks of the perfect-reconstruction conditions.
//!
//! * identity summation: `Σ_j |M_j(ξ)|² = 1`;
//! * shift cancellation: `Σ_j M_j(ξ) conj M_j(ξ+ν) = 0` for every alias
//!   shift of the channels involved;
//! * critical sampling, continuous-domain unit norms, and the Cohen-type
//!   lower bound on `M_0` along contracted frequencies.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{fmt_pi, gamma, lambda, FreqShift, Rat};
use crate::mfunc::{grid_coord, MFunctionSet, Variant};
use crate::partition::{wrap_pi, REGIONS};
use crate::synthesis::channel_products;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub identity: f64,
    pub cancellation: f64,
    pub norm: f64,
    pub cohen: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            identity: 1e-12,
            cancellation: 1e-12,
            norm: 1e-4,
            cohen: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShiftResidual {
    pub shift: FreqShift,
    /// Channels entering the alias sum.
    pub channels: Vec<usize>,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CohenReport {
    /// `inf |M_0(2^{−k}ξ)|` over `ξ ∈ S0`, `k = 1 … K`.
    pub inf_value: f64,
    /// `max |Σ_{γ∈Γ} |M_0(ξ+γ)|² − 1|`.
    pub qmf_residual: f64,
    pub passed: bool,
}

fn check_grid(n: usize) -> Result<()> {
    if n == 0 || !n.is_multiple_of(4) {
        return Err(Error::GridSize(n));
    }
    Ok(())
}

/// `max_ξ |Σ_j |M_j(ξ)|² − 1|` over the `N×N` grid of `S0`.
pub fn check_identity_summation(set: &MFunctionSet, n: usize) -> Result<f64> {
    check_grid(n)?;
    let g = set.sample_all(n)?;
    Ok((0..n * n)
        .into_par_iter()
        .map(|k| (g.iter().map(|c| c[k].norm_sqr()).sum::<f64>() - 1.0).abs())
        .reduce(|| 0.0, f64::max))
}

/// Alias shifts checked for a design, with the channels that alias under each.
pub fn alias_shifts(set: &MFunctionSet) -> Vec<(FreqShift, Vec<usize>)> {
    let all: Vec<usize> = (0..REGIONS).collect();
    let ring: Vec<usize> = (1..REGIONS).collect();
    let gam = gamma();
    let mut out: Vec<(FreqShift, Vec<usize>)> = gam
        .iter()
        .filter(|s| !s.is_zero())
        .map(|s| (*s, all.clone()))
        .collect();
    if set.variant().is_orthonormal() {
        out.extend(
            lambda()
                .into_iter()
                .filter(|s| !gam.contains(s))
                .map(|s| (s, ring.clone())),
        );
    }
    out
}

/// `max_ξ |Σ_{j∈J(ν)} M_j(ξ) conj M_j(ξ+ν)|` for each alias shift `ν`.
pub fn check_shift_cancellation(set: &MFunctionSet, n: usize) -> Result<Vec<ShiftResidual>> {
    check_grid(n)?;
    let g = set.sample_all(n)?;
    alias_shifts(set)
        .into_iter()
        .map(|(shift, channels)| {
            let [o1, o2] = shift.grid_offset(n).ok_or(Error::GridSize(n))?;
            let residual = (0..n)
                .into_par_iter()
                .map(|k1| {
                    let r1 = (k1 + o1) % n;
                    (0..n)
                        .map(|k2| {
                            let a = k1 * n + k2;
                            let b = r1 * n + (k2 + o2) % n;
                            channels
                                .iter()
                                .map(|&j| g[j][a] * g[j][b].conj())
                                .sum::<Complex64>()
                                .norm()
                        })
                        .fold(0.0, f64::max)
                })
                .reduce(|| 0.0, f64::max);
            Ok(ShiftResidual {
                shift,
                channels,
                residual,
            })
        })
        .collect()
}

/// `|det D|⁻¹ + Σ_j |det D̃_j|⁻¹`, exactly.
pub fn check_criticality(set: &MFunctionSet) -> Rat {
    (0..REGIONS)
        .map(|j| Rat::new(1, set.downsampling(j).map(|m| m.index() as i64).unwrap_or(1)))
        .sum()
}

/// Cohen-type bound with `S0` as the compact set.
pub fn check_cohen(set: &MFunctionSet, n: usize, k_max: usize, tol: f64) -> Result<CohenReport> {
    check_grid(n)?;
    if k_max < 8 {
        return Err(Error::InvalidArgument(format!("depth {k_max} below 8")));
    }
    let inf_value = (0..n)
        .into_par_iter()
        .map(|k1| {
            let x = grid_coord(k1, n);
            let mut m: f64 = f64::INFINITY;
            for k2 in 0..n {
                let y = grid_coord(k2, n);
                let mut s = 0.5;
                for _ in 0..k_max {
                    m = m.min(set.eval_pi(wrap_pi([x * s, y * s]))[0].norm());
                    s *= 0.5;
                }
            }
            m
        })
        .reduce(|| f64::INFINITY, f64::min);
    let g = set.sample_all(n)?;
    let h = n / 2;
    let qmf_residual = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let (k1, k2) = (k / n, k % n);
            let s: f64 = [(0, 0), (h, 0), (0, h), (h, h)]
                .iter()
                .map(|&(a, b)| g[0][((k1 + a) % n) * n + (k2 + b) % n].norm_sqr())
                .sum();
            (s - 1.0).abs()
        })
        .reduce(|| 0.0, f64::max);
    Ok(CohenReport {
        inf_value,
        qmf_residual,
        passed: inf_value > tol,
    })
}

/// Continuous-domain norms `‖φ‖, ‖ψ^1‖, …, ‖ψ^6‖`.
///
/// `‖ψ^j‖² = |det D̃_j| ∫ |M_j φ̂|²`, integrated over `[−2π, 2π)²` (which
/// contains `supp φ̂` for the shipped designs) with the `N×N` midpoint rule.
/// With `8 | N` every jump line of the integrand at a multiple of π/2 is a
/// cell boundary.
pub fn check_unit_norms(set: &MFunctionSet, n: usize, depth: usize) -> Result<[f64; REGIONS]> {
    if n < 1024 || !n.is_multiple_of(4) {
        return Err(Error::InvalidArgument(format!("norm grid {n} must be a multiple of 4, >= 1024")));
    }
    if depth < 12 {
        return Err(Error::InvalidArgument(format!("product depth {depth} below 12")));
    }
    let h = 4.0 * PI / n as f64;
    let core = set.unit_core_radius();
    let sums = (0..n)
        .into_par_iter()
        .map(|k1| {
            let x = -2.0 * PI + (k1 as f64 + 0.5) * h;
            let mut acc = [0.0; REGIONS + 1];
            for k2 in 0..n {
                let y = -2.0 * PI + (k2 as f64 + 0.5) * h;
                if let Some((phi, v)) = channel_products(set, [x, y], depth, core) {
                    acc[0] += phi.norm_sqr();
                    for j in 0..REGIONS {
                        acc[j + 1] += v[j].norm_sqr();
                    }
                }
            }
            acc
        })
        .reduce(
            || [0.0; REGIONS + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    let mut out = [0.0; REGIONS];
    out[0] = (sums[0] * h * h).sqrt();
    for j in 1..REGIONS {
        let det = set.downsampling(j)?.index() as f64;
        out[j] = (det * sums[j + 1] * h * h).sqrt();
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOptions {
    pub grid: usize,
    pub depth: usize,
    /// Quadrature grid for the norms; `None` skips them.
    pub norm_grid: Option<usize>,
    pub tolerances: Tolerances,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            grid: 1024,
            depth: 12,
            norm_grid: Some(1024),
            tolerances: Tolerances::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub variant: Variant,
    pub grid: usize,
    pub depth: usize,
    pub tolerances: Tolerances,
    pub identity_residual: f64,
    pub cancellation: Vec<ShiftResidual>,
    pub criticality: Rat,
    /// Orthonormal variants only.
    pub norms: Option<[f64; REGIONS]>,
    /// Orthonormal variants only.
    pub cohen: Option<CohenReport>,
}

impl CheckReport {
    pub fn identity_passed(&self) -> bool {
        self.identity_residual <= self.tolerances.identity
    }

    pub fn cancellation_passed(&self) -> bool {
        self.cancellation
            .iter()
            .all(|c| c.residual <= self.tolerances.cancellation)
    }

    pub fn max_cancellation_residual(&self) -> f64 {
        self.cancellation.iter().map(|c| c.residual).fold(0.0, f64::max)
    }

    pub fn criticality_passed(&self) -> bool {
        let want = if self.variant.is_orthonormal() {
            Rat::from_integer(1)
        } else {
            Rat::new(7, 4)
        };
        self.criticality == want
    }

    pub fn norms_passed(&self) -> Option<bool> {
        self.norms
            .map(|n| n.iter().all(|v| (v - 1.0).abs() <= self.tolerances.norm))
    }

    pub fn cohen_passed(&self) -> Option<bool> {
        self.cohen.map(|c| c.passed)
    }

    pub fn passed(&self) -> bool {
        self.identity_passed()
            && self.cancellation_passed()
            && self.criticality_passed()
            && self.norms_passed().unwrap_or(true)
            && self.cohen_passed().unwrap_or(true)
    }

    /// `key=value` lines.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let flag = |b: bool| if b { "pass" } else { "fail" };
        let _ = writeln!(s, "variant={}", self.variant);
        let _ = writeln!(s, "grid={}", self.grid);
        let _ = writeln!(s, "depth={}", self.depth);
        let _ = writeln!(s, "identity_residual={:e}", self.identity_residual);
        let _ = writeln!(s, "identity_check={}", flag(self.identity_passed()));
        for c in &self.cancellation {
            let _ = writeln!(
                s,
                "cancellation_residual[{},{}]={:e}",
                fmt_pi(c.shift.x),
                fmt_pi(c.shift.y),
                c.residual
            );
        }
        let _ = writeln!(s, "cancellation_check={}", flag(self.cancellation_passed()));
        let _ = writeln!(s, "criticality={}", self.criticality);
        let _ = writeln!(s, "criticality_check={}", flag(self.criticality_passed()));
        match self.norms {
            Some(n) => {
                let names = ["phi", "psi_1", "psi_2", "psi_3", "psi_4", "psi_5", "psi_6"];
                for (name, v) in names.iter().zip(n) {
                    let _ = writeln!(s, "norm[{name}]={v:.12}");
                }
                let _ = writeln!(s, "norm_check={}", flag(self.norms_passed().unwrap()));
            }
            None => {
                let _ = writeln!(s, "norm_check=skipped");
            }
        }
        match self.cohen {
            Some(c) => {
                let _ = writeln!(s, "cohen_inf={:.12}", c.inf_value);
                let _ = writeln!(s, "cohen_qmf_residual={:e}", c.qmf_residual);
                let _ = writeln!(s, "cohen_check={}", flag(c.passed));
            }
            None => {
                let _ = writeln!(s, "cohen_check=skipped");
            }
        }
        let _ = writeln!(s, "passed={}", self.passed());
        s
    }
}

/// Every check applicable to the design's variant.
pub fn run_checks(set: &MFunctionSet, opts: &CheckOptions) -> Result<CheckReport> {
    let identity_residual = check_identity_summation(set, opts.grid)?;
    let cancellation = check_shift_cancellation(set, opts.grid)?;
    let orthonormal = set.variant().is_orthonormal();
    let norms = match opts.norm_grid {
        Some(n) if orthonormal => Some(check_unit_norms(set, n, opts.depth)?),
        _ => None,
    };
    let cohen = if orthonormal {
        Some(check_cohen(set, opts.grid, opts.depth.max(8), opts.tolerances.cohen)?)
    } else {
        None
    };
    Ok(CheckReport {
        variant: set.variant(),
        grid: opts.grid,
        depth: opts.depth,
        tolerances: opts.tolerances,
        identity_residual,
        cancellation,
        criticality: check_criticality(set),
        norms,
        cohen,
    })
}
