//! Integer lattices in the plane: sublattices `A·Z²`, their spatial coset
//! representatives and the matching reciprocal (frequency) shifts.
//!
//! Frequency shifts are kept exact as rational multiples of π in `[0, 2)`.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rational number, used for exact lattice and partition geometry.
pub type Rat = Ratio<i64>;

/// A 2×2 integer matrix acting on column vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMat2 {
    pub a11: i64,
    pub a12: i64,
    pub a21: i64,
    pub a22: i64,
}

impl IntMat2 {
    pub const IDENTITY: IntMat2 = IntMat2::new(1, 0, 0, 1);
    /// Dyadic dilation, `|det| = 4`.
    pub const D2: IntMat2 = IntMat2::new(2, 0, 0, 2);
    /// Dyadic quincunx dilation, `|det| = 8`.
    pub const Q: IntMat2 = IntMat2::new(2, 2, -2, 2);

    pub const fn new(a11: i64, a12: i64, a21: i64, a22: i64) -> Self {
        IntMat2 { a11, a12, a21, a22 }
    }

    pub fn det(&self) -> i64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    /// `|det|`, the index of `A·Z²` in `Z²`.
    pub fn index(&self) -> usize {
        self.det().unsigned_abs() as usize
    }

    pub fn transpose(&self) -> Self {
        IntMat2::new(self.a11, self.a21, self.a12, self.a22)
    }

    pub fn apply(&self, v: [i64; 2]) -> [i64; 2] {
        [
            self.a11 * v[0] + self.a12 * v[1],
            self.a21 * v[0] + self.a22 * v[1],
        ]
    }

    fn adjugate(&self) -> Self {
        IntMat2::new(self.a22, -self.a12, -self.a21, self.a11)
    }

    fn ensure_invertible(&self) -> Result<i64> {
        match self.det() {
            0 => Err(Error::SingularMatrix),
            d => Ok(d),
        }
    }

    /// Whether `v ∈ A·Z²`, decided exactly: `A·m = v` has the solution
    /// `m = adj(A)·v / det`, which is integral iff `det` divides both entries.
    pub fn contains(&self, v: [i64; 2]) -> Result<bool> {
        let det = self.ensure_invertible()?;
        let w = self.adjugate().apply(v);
        Ok(w[0] % det == 0 && w[1] % det == 0)
    }

    /// Exact inverse applied to a rational vector.
    pub fn solve(&self, v: [Rat; 2]) -> Result<[Rat; 2]> {
        let det = Rat::from_integer(self.ensure_invertible()?);
        let adj = self.adjugate();
        Ok([
            (v[0] * adj.a11 + v[1] * adj.a12) / det,
            (v[0] * adj.a21 + v[1] * adj.a22) / det,
        ])
    }

    /// Floating-point inverse applied to a real vector.
    pub fn solve_f64(&self, v: [f64; 2]) -> [f64; 2] {
        let det = self.det() as f64;
        let adj = self.adjugate();
        [
            (adj.a11 as f64 * v[0] + adj.a12 as f64 * v[1]) / det,
            (adj.a21 as f64 * v[0] + adj.a22 as f64 * v[1]) / det,
        ]
    }
}

/// Frequency shift stored as a rational multiple of π, each coordinate
/// reduced into `[0, 2)`. Ordering is lexicographic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FreqShift {
    pub x: Rat,
    pub y: Rat,
}

fn reduce_mod2(r: Rat) -> Rat {
    let two = Rat::from_integer(2);
    let q = (r / two).floor();
    r - q * two
}

impl FreqShift {
    /// Build from coordinates in units of π; reduces modulo 2.
    pub fn new(x: Rat, y: Rat) -> Self {
        FreqShift {
            x: reduce_mod2(x),
            y: reduce_mod2(y),
        }
    }

    /// Shorthand for `(xn/xd·π, yn/yd·π)`.
    pub fn from_fracs(xn: i64, xd: i64, yn: i64, yd: i64) -> Self {
        FreqShift::new(Rat::new(xn, xd), Rat::new(yn, yd))
    }

    pub fn zero() -> Self {
        FreqShift::new(Rat::zero(), Rat::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// The shift `−ν` reduced modulo 2π.
    pub fn neg(&self) -> Self {
        FreqShift::new(-self.x, -self.y)
    }

    pub fn add(&self, other: &FreqShift) -> Self {
        FreqShift::new(self.x + other.x, self.y + other.y)
    }

    /// Lexicographically smaller member of `{ν, −ν}`.
    pub fn pair_representative(&self) -> Self {
        (*self).min(self.neg())
    }

    pub fn radians(&self) -> [f64; 2] {
        [rat_to_f64(self.x) * PI, rat_to_f64(self.y) * PI]
    }

    /// Offset in grid samples on an `n`-point grid of `[−π, π)`, if the
    /// shift lands exactly on the grid.
    pub fn grid_offset(&self, n: usize) -> Option<[usize; 2]> {
        let half = Rat::from_integer(n as i64) / Rat::from_integer(2);
        let ox = self.x * half;
        let oy = self.y * half;
        if ox.is_integer() && oy.is_integer() {
            Some([ox.to_integer() as usize % n, oy.to_integer() as usize % n])
        } else {
            None
        }
    }
}

impl fmt::Display for FreqShift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", fmt_pi(self.x), fmt_pi(self.y))
    }
}

pub(crate) fn rat_to_f64(r: Rat) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Formats `r·π` compactly, e.g. `0`, `pi`, `3pi/2`.
pub fn fmt_pi(r: Rat) -> String {
    if r.is_zero() {
        return "0".into();
    }
    let n = *r.numer();
    let d = *r.denom();
    let num = match n {
        1 => "pi".to_string(),
        -1 => "-pi".to_string(),
        _ => format!("{n}pi"),
    };
    if d == 1 {
        num
    } else {
        format!("{num}/{d}")
    }
}

/// Spatial coset representatives of `Z²` modulo `A·Z²`.
///
/// Each representative is the lexicographically smallest non-negative member
/// of its coset; the list is sorted, so it starts with `(0, 0)`.
pub fn coset_representatives(a: &IntMat2) -> Result<Vec<[i64; 2]>> {
    a.ensure_invertible()?;
    let q = a.index() as i64;
    // q·Z² ⊆ A·Z², so every coset meets the box [0, q)².
    let mut reps: Vec<[i64; 2]> = Vec::with_capacity(q as usize);
    'outer: for x in 0..q {
        for y in 0..q {
            let v = [x, y];
            let mut fresh = true;
            for r in &reps {
                if a.contains([v[0] - r[0], v[1] - r[1]])? {
                    fresh = false;
                    break;
                }
            }
            if fresh {
                reps.push(v);
                if reps.len() == q as usize {
                    break 'outer;
                }
            }
        }
    }
    Ok(reps)
}

/// Frequency shifts `λ_m` associated with `A·Z² ⊂ Z²`: the points of the
/// reciprocal lattice `2π(Aᵀ)⁻¹Z²` reduced into `[0, 2π)²`, in lexicographic
/// order.
pub fn reciprocal_shift_set(a: &IntMat2) -> Result<Vec<FreqShift>> {
    let at = a.transpose();
    let reps = coset_representatives(&at)?;
    let two = Rat::from_integer(2);
    let mut shifts = reps
        .into_iter()
        .map(|k| {
            let s = at.solve([Rat::from_integer(k[0]), Rat::from_integer(k[1])])?;
            Ok(FreqShift::new(s[0] * two, s[1] * two))
        })
        .collect::<Result<Vec<_>>>()?;
    shifts.sort();
    shifts.dedup();
    Ok(shifts)
}

/// `Γ`, the shifts of the dyadic sublattice `D2·Z²`.
pub fn gamma() -> Vec<FreqShift> {
    reciprocal_shift_set(&IntMat2::D2).expect("D2 is invertible")
}

/// `Λ`, the shifts of the quincunx sublattice `Q·Z²`.
pub fn lambda() -> Vec<FreqShift> {
    reciprocal_shift_set(&IntMat2::Q).expect("Q is invertible")
}

/// Largest magnitude of `Σ_m exp(i λ_mᵀ λ̃_n)` over `n ≥ 1`.
///
/// For a dual pair of shift sets every such character sum vanishes.
pub fn verify_shift_duality(freq: &[[f64; 2]], spatial: &[[i64; 2]]) -> Result<f64> {
    if freq.len() != spatial.len() || freq.is_empty() {
        return Err(Error::LengthMismatch(freq.len(), spatial.len()));
    }
    let mut worst = 0.0f64;
    for s in spatial.iter().skip(1) {
        let sum: Complex64 = freq
            .iter()
            .map(|l| Complex64::from_polar(1.0, l[0] * s[0] as f64 + l[1] * s[1] as f64))
            .sum();
        worst = worst.max(sum.norm());
    }
    Ok(worst)
}

/// Anything with a membership test over `[−π, π)²` (radians).
pub trait FrequencySet {
    fn contains_point(&self, xi: [f64; 2]) -> bool;
}

impl<F: Fn([f64; 2]) -> bool> FrequencySet for F {
    fn contains_point(&self, xi: [f64; 2]) -> bool {
        self(xi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencySupportReport {
    /// `∫_S dξ`, the `n = 0` integral.
    pub diag_value: f64,
    /// `(2π)² / |det A|`.
    pub expected: f64,
    /// Largest `|∫_S e^{i nᵀξ} dξ|` over the nonzero lattice vectors tested.
    pub max_offdiag: f64,
}

/// Midpoint-rule check that `region` is a frequency support of `A·Z²`:
/// integrates `e^{i nᵀξ}` over the region for all `n = A·m`, `‖m‖∞ ≤ n_max`.
pub fn is_frequency_support<S: FrequencySet + ?Sized>(
    region: &S,
    a: &IntMat2,
    n_max: i64,
    quad_n: usize,
) -> Result<FrequencySupportReport> {
    a.ensure_invertible()?;
    if quad_n < 256 || n_max < 1 {
        return Err(Error::InvalidArgument(format!(
            "quad_n = {quad_n} must be >= 256 and n_max = {n_max} >= 1"
        )));
    }
    let h = 2.0 * PI / quad_n as f64;
    let nodes: Vec<f64> = (0..quad_n).map(|k| -PI + (k as f64 + 0.5) * h).collect();
    let mask: Vec<bool> = nodes
        .iter()
        .flat_map(|&x| nodes.iter().map(move |&y| [x, y]))
        .map(|p| region.contains_point(p))
        .collect();
    if !mask.iter().any(|&m| m) {
        return Err(Error::EmptyRegion);
    }
    let cell = h * h;
    let integral = |n: [i64; 2]| -> Complex64 {
        let ey: Vec<Complex64> = nodes
            .iter()
            .map(|&y| Complex64::from_polar(1.0, n[1] as f64 * y))
            .collect();
        let mut total = Complex64::new(0.0, 0.0);
        for (k1, &x) in nodes.iter().enumerate() {
            let row = &mask[k1 * quad_n..(k1 + 1) * quad_n];
            let inner: Complex64 = row
                .iter()
                .zip(&ey)
                .filter(|(m, _)| **m)
                .map(|(_, e)| *e)
                .sum();
            total += Complex64::from_polar(1.0, n[0] as f64 * x) * inner;
        }
        total * cell
    };
    let diag_value = integral([0, 0]).re;
    let mut max_offdiag = 0.0f64;
    for m1 in -n_max..=n_max {
        for m2 in -n_max..=n_max {
            if m1 == 0 && m2 == 0 {
                continue;
            }
            max_offdiag = max_offdiag.max(integral(a.apply([m1, m2])).norm());
        }
    }
    Ok(FrequencySupportReport {
        diag_value,
        expected: (2.0 * PI).powi(2) / a.index() as f64,
        max_offdiag,
    })
}
