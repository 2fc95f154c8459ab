//! The seven transfer functions `M_0 … M_6`.
//!
//! Three designs share one evaluator:
//!
//! * `shannon`: indicators of the partition regions;
//! * `smooth-onb`: every regular boundary off `∂S0` becomes a cos/sin
//!   transition of half-width ε, mirrored onto its partner boundary by
//!   translation, with integer phases `e^{iξᵀη_j}` that turn the mirrored
//!   alias terms into cancelling pairs;
//! * `tight-dyadic`: the orthonormal design with `M_0` additionally tapered
//!   into the corners of `S1`; all channels are sampled on `D2·Z²`.
//!
//! Geometry is handled in units of π; evaluators take radians.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{rat_to_f64, IntMat2, Rat};
use crate::partition::{
    canonical_partition, classify_boundaries, locate_pi_units, wrap_pi, BoundaryTriple, Segment,
    REGIONS,
};

/// Integer phase vectors `η_0 … η_6`.
pub type Phases = [[i64; 2]; REGIONS];

/// Per-channel samples on an `N×N` grid, row-major, `grid[k1·N + k2]` at
/// `ξ = (−π + 2πk1/N, −π + 2πk2/N)`.
pub type ChannelGrids = [Vec<Complex64>; REGIONS];

/// Multiplicative window applied to one channel; receives `ξ` wrapped into `S0`.
pub type Window = Arc<dyn Fn([f64; 2]) -> Complex64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Shannon,
    SmoothOnb,
    TightDyadic,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Shannon => "shannon",
            Variant::SmoothOnb => "smooth-onb",
            Variant::TightDyadic => "tight-dyadic",
        }
    }

    /// Critically sampled (`D2` for the scaling channel, `Q` for the rest).
    pub fn is_orthonormal(self) -> bool {
        !matches!(self, Variant::TightDyadic)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "shannon" => Ok(Variant::Shannon),
            "smooth" | "smooth-onb" => Ok(Variant::SmoothOnb),
            "tight" | "tight-dyadic" => Ok(Variant::TightDyadic),
            _ => Err(Error::InvalidArgument(format!("unknown variant '{s}'"))),
        }
    }
}

/// Ramp `β: [0,1] → [0,1]` with `β(t) + β(1−t) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    /// `t⁴(35 − 84t + 70t² − 20t³)`: C³ at both ends.
    Meyer,
}

impl Profile {
    pub fn ramp(self, t: f64) -> f64 {
        let t = t.clamp(0.0, 1.0);
        match self {
            // Upper half mirrored so that β(t) + β(1 − t) = 1 holds to roundoff.
            Profile::Meyer if t > 0.5 => 1.0 - meyer(1.0 - t),
            Profile::Meyer => meyer(t),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Profile::Meyer => "meyer",
        }
    }
}

fn meyer(t: f64) -> f64 {
    t.powi(4) * (35.0 - 84.0 * t + 70.0 * t * t - 20.0 * t * t * t)
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "meyer" => Ok(Profile::Meyer),
            _ => Err(Error::InvalidArgument(format!("unknown profile '{s}'"))),
        }
    }
}

/// Transition half-width `epsilon` and vertex taper length `delta`, radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmoothingConfig {
    pub epsilon: f64,
    pub delta: f64,
    pub profile: Profile,
}

impl Default for SmoothingConfig {
    fn default() -> Self {
        SmoothingConfig {
            epsilon: PI / 24.0,
            delta: PI / 24.0,
            profile: Profile::Meyer,
        }
    }
}

impl SmoothingConfig {
    pub fn new(epsilon: f64, delta: f64) -> Result<Self> {
        let cfg = SmoothingConfig {
            epsilon,
            delta,
            profile: Profile::Meyer,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// `δ = ε`, the widest admissible taper.
    pub fn with_epsilon(epsilon: f64) -> Result<Self> {
        Self::new(epsilon, epsilon)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon <= PI / 12.0 + 1e-15) {
            return Err(Error::EpsilonOutOfRange(self.epsilon));
        }
        if !(self.delta > 0.0 && self.delta <= self.epsilon) {
            return Err(Error::InvalidConfig(format!(
                "delta {} outside (0, epsilon]",
                self.delta
            )));
        }
        Ok(())
    }

    fn transition(&self, t: f64) -> (f64, f64) {
        let a = FRAC_PI_2 * self.profile.ramp(t);
        (a.cos(), a.sin())
    }
}

/// Tapered strip around a segment (π units). Membership is an open set; the
/// half-width closes linearly to zero over `taper` at both ends.
#[derive(Debug, Clone)]
struct Strip {
    a: [f64; 2],
    dir: [f64; 2],
    normal: [f64; 2],
    len: f64,
    half_width: f64,
    taper: f64,
}

impl Strip {
    /// `a → b`; the normal is the left normal of the direction.
    fn new(a: [f64; 2], b: [f64; 2], half_width: f64, taper: f64) -> Self {
        let e = [b[0] - a[0], b[1] - a[1]];
        let len = e[0].hypot(e[1]);
        let dir = [e[0] / len, e[1] / len];
        Strip {
            a,
            dir,
            normal: [-dir[1], dir[0]],
            len,
            half_width,
            taper,
        }
    }

    /// Transition coordinate in `(0, 1)`: 0 on the negative-normal side.
    fn coord(&self, p: [f64; 2]) -> Option<f64> {
        let r = [p[0] - self.a[0], p[1] - self.a[1]];
        let u = r[0] * self.dir[0] + r[1] * self.dir[1];
        if u <= 0.0 || u >= self.len {
            return None;
        }
        let w = self.half_width * (u / self.taper).min((self.len - u) / self.taper).min(1.0);
        let d = r[0] * self.normal[0] + r[1] * self.normal[1];
        // Points on the wedge rim keep their indicator value.
        (d.abs() < w - 1e-13).then(|| (d / w + 1.0) / 2.0)
    }
}

/// A smoothed regular boundary: `j1` on the negative side of `strip`,
/// `j2` on the positive side; the partner strip is `strip + shift`.
#[derive(Debug, Clone)]
struct Transition {
    triple: BoundaryTriple,
    shift: [f64; 2],
    strip: Strip,
}

/// Shipped integer phases.
pub fn phase_solution() -> Phases {
    [[0, 0], [0, 0], [1, 1], [1, -1], [0, 2], [1, 1], [-1, 1]]
}

/// `max |e^{iνᵀ(η_{j1} − η_{j2})} + 1|` over the triples.
pub fn verify_phases(phases: &Phases, triples: &[BoundaryTriple]) -> Result<f64> {
    if triples.is_empty() {
        return Err(Error::InvalidArgument("empty triple list".into()));
    }
    let mut worst: f64 = 0.0;
    for t in triples {
        if t.j1 >= REGIONS || t.j2 >= REGIONS {
            return Err(Error::InvalidIndex(t.j1.max(t.j2)));
        }
        let d = [
            phases[t.j1][0] - phases[t.j2][0],
            phases[t.j1][1] - phases[t.j2][1],
        ];
        // Exponent in units of π, reduced exactly before the trig call.
        let e: Rat = t.shift.x * d[0] + t.shift.y * d[1];
        let e = rat_to_f64(e - (e / 2).floor() * 2) * PI;
        let z = Complex64::new(e.cos(), e.sin());
        worst = worst.max((z + 1.0).norm());
    }
    Ok(worst)
}

/// The seven transfer functions of one design.
#[derive(Clone)]
pub struct MFunctionSet {
    variant: Variant,
    config: Option<SmoothingConfig>,
    phases: Phases,
    gains: [f64; REGIONS],
    windows: Vec<(usize, Window)>,
    transitions: Vec<Transition>,
    cache: Arc<Mutex<HashMap<usize, Arc<ChannelGrids>>>>,
}

impl fmt::Debug for MFunctionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MFunctionSet")
            .field("variant", &self.variant)
            .field("config", &self.config)
            .field("phases", &self.phases)
            .field("gains", &self.gains)
            .field("windows", &self.windows.len())
            .field("transitions", &self.smoothed_triples())
            .finish()
    }
}

pub fn shannon_design() -> MFunctionSet {
    MFunctionSet {
        variant: Variant::Shannon,
        config: None,
        phases: [[0, 0]; REGIONS],
        gains: [1.0; REGIONS],
        windows: Vec::new(),
        transitions: Vec::new(),
        cache: Default::default(),
    }
}

pub fn smoothed_onb_design(cfg: SmoothingConfig) -> Result<MFunctionSet> {
    let set = build_smoothed(Variant::SmoothOnb, cfg)?;
    gate(&set)?;
    Ok(set)
}

pub fn tight_frame_design(cfg: SmoothingConfig) -> Result<MFunctionSet> {
    let set = build_smoothed(Variant::TightDyadic, cfg)?;
    gate(&set)?;
    Ok(set)
}

/// Builds any variant; `config` is ignored for `shannon`.
pub fn design(variant: Variant, cfg: SmoothingConfig) -> Result<MFunctionSet> {
    match variant {
        Variant::Shannon => Ok(shannon_design()),
        Variant::SmoothOnb => smoothed_onb_design(cfg),
        Variant::TightDyadic => tight_frame_design(cfg),
    }
}

/// Residual gate applied after construction.
fn gate(set: &MFunctionSet) -> Result<()> {
    const GATE_N: usize = 256;
    let identity = crate::verify::check_identity_summation(set, GATE_N)?;
    let cancel = crate::verify::check_shift_cancellation(set, GATE_N)?;
    let worst = cancel.iter().map(|c| c.residual).fold(identity, f64::max);
    if worst > 1e-12 {
        return Err(Error::ConstructionCheck(format!(
            "identity residual {identity:.3e}, worst shift residual {worst:.3e} on a {GATE_N}² grid"
        )));
    }
    Ok(())
}

fn build_smoothed(variant: Variant, cfg: SmoothingConfig) -> Result<MFunctionSet> {
    cfg.validate()?;
    let eps = cfg.epsilon / PI;
    let taper = cfg.delta / PI;
    // The classification is combinatorial; any admissible width gives it.
    let cls = classify_boundaries(cfg.epsilon.min(PI / 24.0))?;
    let mut transitions = Vec::new();
    for b in cls.regular.iter().filter(|b| !b.on_outer_boundary()) {
        let t = b.triple;
        let (a, e) = b
            .segments
            .iter()
            .find_map(|s| orient(s, t.j1, t.j2))
            .ok_or_else(|| {
                Error::ConstructionCheck(format!("no {}|{} boundary for {t}", t.j1, t.j2))
            })?;
        let seg = Segment::new(a, e);
        let partner = seg.translate(t.shift.x, t.shift.y);
        let mirror = Segment::new([-a[0], -a[1]], [-e[0], -e[1]]);
        if !torus_equal(&partner, &mirror) {
            return Err(Error::ConstructionCheck(format!(
                "partner boundary of {t} is not the mirrored boundary"
            )));
        }
        transitions.push(Transition {
            triple: t,
            shift: [rat_to_f64(t.shift.x), rat_to_f64(t.shift.y)],
            strip: Strip::new(pi_f64(a), pi_f64(e), eps, taper),
        });
    }
    check_geometry(&transitions, eps, taper)?;
    Ok(MFunctionSet {
        variant,
        config: Some(cfg),
        phases: phase_solution(),
        gains: [1.0; REGIONS],
        windows: Vec::new(),
        transitions,
        cache: Default::default(),
    })
}

fn pi_f64(p: [Rat; 2]) -> [f64; 2] {
    [rat_to_f64(p[0]), rat_to_f64(p[1])]
}

/// Orders the endpoints of `s` so that `j1` lies on the right (negative
/// normal) and `j2` on the left; `None` if `s` does not separate them.
fn orient(s: &Segment, j1: usize, j2: usize) -> Option<([Rat; 2], [Rat; 2])> {
    let a = pi_f64(s.a);
    let b = pi_f64(s.b);
    let m = [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
    let e = [b[0] - a[0], b[1] - a[1]];
    let l = e[0].hypot(e[1]);
    let n = [-e[1] / l * 1e-6, e[0] / l * 1e-6];
    let right = locate_pi_units(wrap_pi([m[0] - n[0], m[1] - n[1]]));
    let left = locate_pi_units(wrap_pi([m[0] + n[0], m[1] + n[1]]));
    match (right, left) {
        (r, l) if r == j1 && l == j2 => Some((s.a, s.b)),
        (r, l) if r == j2 && l == j1 => Some((s.b, s.a)),
        _ => None,
    }
}

/// Equality of segments modulo `2Z²` (π units).
fn torus_equal(s: &Segment, t: &Segment) -> bool {
    let two = Rat::from_integer(2);
    let even = |r: Rat| r.is_integer() && (r / two).is_integer();
    [t.a, t.b].iter().any(|&p| {
        let d = [p[0] - s.a[0], p[1] - s.a[1]];
        even(d[0]) && even(d[1]) && s.translate(d[0], d[1]) == *t
    })
}

/// Rejects widths at which strips of different boundaries (or a strip and
/// an unsmoothed edge) would overlap. Strips are wedges of half-angle
/// `atan(ε/δ)` at their ends and parallel bands in between.
fn check_geometry(transitions: &[Transition], eps: f64, taper: f64) -> Result<()> {
    let half = (eps / taper).atan();
    let mut strips: Vec<[[f64; 2]; 2]> = Vec::new();
    for t in transitions {
        let a = t.strip.a;
        let b = [a[0] + t.strip.len * t.strip.dir[0], a[1] + t.strip.len * t.strip.dir[1]];
        strips.push([a, b]);
        strips.push([[-a[0], -a[1]], [-b[0], -b[1]]]);
    }
    let edges: Vec<[[f64; 2]; 2]> = canonical_partition()
        .iter()
        .flat_map(|r| r.components.clone())
        .flat_map(|poly| {
            let n = poly.len();
            (0..n)
                .map(|i| [pi_f64(poly[i]), pi_f64(poly[(i + 1) % n])])
                .collect::<Vec<_>>()
        })
        .collect();
    let translates = |s: [[f64; 2]; 2]| {
        let mut out = Vec::with_capacity(9);
        for i in -1..=1 {
            for j in -1..=1 {
                let d = [2.0 * i as f64, 2.0 * j as f64];
                out.push([
                    [s[0][0] + d[0], s[0][1] + d[1]],
                    [s[1][0] + d[0], s[1][1] + d[1]],
                ]);
            }
        }
        out
    };
    let close = |p: [f64; 2], q: [f64; 2]| (p[0] - q[0]).abs() < 1e-12 && (p[1] - q[1]).abs() < 1e-12;
    let outgoing = |s: [[f64; 2]; 2], from_a: bool| {
        let (p, q) = if from_a { (s[0], s[1]) } else { (s[1], s[0]) };
        let e = [q[0] - p[0], q[1] - p[1]];
        let l = e[0].hypot(e[1]);
        [e[0] / l, e[1] / l]
    };
    for (si, &s) in strips.iter().enumerate() {
        for from_a in [true, false] {
            let v = if from_a { s[0] } else { s[1] };
            let dv = outgoing(s, from_a);
            let others = strips
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != si)
                .map(|(_, &o)| (o, 2.0 * half))
                .chain(edges.iter().map(|&e| (e, half)));
            for (o, need) in others {
                for ot in translates(o) {
                    for o_from_a in [true, false] {
                        let w = if o_from_a { ot[0] } else { ot[1] };
                        if !close(v, w) {
                            continue;
                        }
                        let dw = outgoing(ot, o_from_a);
                        let angle = (dv[0] * dw[0] + dv[1] * dw[1]).clamp(-1.0, 1.0).acos();
                        // Same line: the strip's own boundary edge.
                        if angle < 1e-6 {
                            continue;
                        }
                        if angle < need - 1e-12 {
                            return Err(Error::TripleOverlap(format!(
                                "transitions at ({:.4}, {:.4})·pi need {:.1}° between boundaries, found {:.1}°",
                                v[0],
                                v[1],
                                need.to_degrees(),
                                angle.to_degrees()
                            )));
                        }
                    }
                }
            }
        }
    }
    // Strips without a common vertex must stay apart.
    for (i, &s) in strips.iter().enumerate() {
        for &o in strips.iter().skip(i + 1) {
            for ot in translates(o) {
                let shared = [s[0], s[1]].iter().any(|&p| close(p, ot[0]) || close(p, ot[1]));
                if !shared && segment_distance(s, ot) < 2.0 * eps {
                    return Err(Error::TripleOverlap(format!(
                        "strips around ({:.4}, {:.4})·pi and ({:.4}, {:.4})·pi intersect",
                        s[0][0], s[0][1], ot[0][0], ot[0][1]
                    )));
                }
            }
        }
    }
    Ok(())
}

fn segment_distance(s: [[f64; 2]; 2], t: [[f64; 2]; 2]) -> f64 {
    let point_seg = |p: [f64; 2], s: [[f64; 2]; 2]| {
        let e = [s[1][0] - s[0][0], s[1][1] - s[0][1]];
        let w = [p[0] - s[0][0], p[1] - s[0][1]];
        let u = ((w[0] * e[0] + w[1] * e[1]) / (e[0] * e[0] + e[1] * e[1])).clamp(0.0, 1.0);
        (w[0] - u * e[0]).hypot(w[1] - u * e[1])
    };
    // Non-crossing segments (strips of distinct boundaries never cross).
    point_seg(s[0], t)
        .min(point_seg(s[1], t))
        .min(point_seg(t[0], s))
        .min(point_seg(t[1], s))
}

impl MFunctionSet {
    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn config(&self) -> Option<SmoothingConfig> {
        self.config
    }

    pub fn phases(&self) -> Phases {
        self.phases
    }

    pub fn gains(&self) -> [f64; REGIONS] {
        self.gains
    }

    /// Regular boundaries that carry a transition.
    pub fn smoothed_triples(&self) -> Vec<BoundaryTriple> {
        self.transitions.iter().map(|t| t.triple).collect()
    }

    pub fn downsampling(&self, j: usize) -> Result<IntMat2> {
        match j {
            0 => Ok(IntMat2::D2),
            1..=6 if self.variant.is_orthonormal() => Ok(IntMat2::Q),
            1..=6 => Ok(IntMat2::D2),
            _ => Err(Error::InvalidIndex(j)),
        }
    }

    /// Whether gains, phases or windows differ from the construction.
    pub fn has_windows(&self) -> bool {
        !self.windows.is_empty()
    }

    pub fn is_tampered(&self) -> bool {
        let phases = match self.variant {
            Variant::Shannon => [[0, 0]; REGIONS],
            _ => phase_solution(),
        };
        !self.windows.is_empty() || self.gains != [1.0; REGIONS] || self.phases != phases
    }

    /// Radius `r` (radians) with `M_0(ξ) = 1` whenever `|ξ|∞ < r`; `None`
    /// once `M_0` has been modified.
    pub fn unit_core_radius(&self) -> Option<f64> {
        let touched = self.gains[0] != 1.0
            || self.phases[0] != [0, 0]
            || self.windows.iter().any(|(j, _)| *j == 0);
        if touched {
            return None;
        }
        Some(FRAC_PI_2 - self.config.map_or(0.0, |c| c.epsilon))
    }

    /// Copy with channel `j` scaled by `gain`.
    pub fn with_gain(&self, j: usize, gain: f64) -> Result<Self> {
        if j >= REGIONS {
            return Err(Error::InvalidIndex(j));
        }
        let mut s = self.fresh();
        s.gains[j] = gain;
        Ok(s)
    }

    pub fn with_gains(&self, gains: [f64; REGIONS]) -> Self {
        let mut s = self.fresh();
        s.gains = gains;
        s
    }

    pub fn with_phases(&self, phases: Phases) -> Self {
        let mut s = self.fresh();
        s.phases = phases;
        s
    }

    /// Copy with channel `j` multiplied pointwise by `window`.
    pub fn with_window(&self, j: usize, window: Window) -> Result<Self> {
        if j >= REGIONS {
            return Err(Error::InvalidIndex(j));
        }
        let mut s = self.fresh();
        s.windows.push((j, window));
        Ok(s)
    }

    fn fresh(&self) -> Self {
        let mut s = self.clone();
        s.cache = Default::default();
        s
    }

    pub fn evaluate(&self, j: usize, xi: [f64; 2]) -> Result<Complex64> {
        if j >= REGIONS {
            return Err(Error::InvalidIndex(j));
        }
        Ok(self.evaluate_all(xi)[j])
    }

    pub fn evaluate_all(&self, xi: [f64; 2]) -> [Complex64; REGIONS] {
        self.eval_pi(wrap_pi([xi[0] / PI, xi[1] / PI]))
    }

    /// Channel values at a point given in units of π, already in `[−1, 1)²`.
    pub(crate) fn eval_pi(&self, p: [f64; 2]) -> [Complex64; REGIONS] {
        let mut v = self.eval_onb(p);
        if self.variant == Variant::TightDyadic {
            self.apply_corner(p, &mut v);
        }
        for (j, g) in self.gains.iter().enumerate() {
            if *g != 1.0 {
                v[j] *= *g;
            }
        }
        for (j, w) in &self.windows {
            v[*j] *= w([p[0] * PI, p[1] * PI]);
        }
        v
    }

    fn eval_onb(&self, p: [f64; 2]) -> [Complex64; REGIONS] {
        let mut m = [0.0; REGIONS];
        match self.transition_at(p) {
            Some((j1, j2, c1, c2)) => {
                m[j1] = c1;
                m[j2] = c2;
            }
            None => m[locate_pi_units(p)] = 1.0,
        }
        let mut out = [Complex64::zero(); REGIONS];
        for j in 0..REGIONS {
            if m[j] != 0.0 {
                let eta = self.phases[j];
                let arg = PI * (p[0] * eta[0] as f64 + p[1] * eta[1] as f64);
                out[j] = Complex64::from_polar(m[j], arg);
            }
        }
        out
    }

    /// Real profile values `(j1, j2, 𝓜_j1, 𝓜_j2)` inside a transition strip
    /// or its translated partner.
    fn transition_at(&self, p: [f64; 2]) -> Option<(usize, usize, f64, f64)> {
        let cfg = self.config?;
        for tr in &self.transitions {
            let (j1, j2) = (tr.triple.j1, tr.triple.j2);
            if let Some(t) = tr.strip.coord(p) {
                let (c, s) = cfg.transition(t);
                return Some((j1, j2, c, s));
            }
            let q = wrap_pi([p[0] - tr.shift[0], p[1] - tr.shift[1]]);
            if let Some(t) = tr.strip.coord(q) {
                let (c, s) = cfg.transition(t);
                return Some((j1, j2, s, c));
            }
        }
        None
    }

    /// Inward taper of `M_0` along the singular edges of `S1`. The energy
    /// `1 − |M_0|²` is handed to the diagonal pair facing the corner across
    /// `γ = (π, π)`, arranged so the `γ` alias terms cancel.
    fn apply_corner(&self, p: [f64; 2], v: &mut [Complex64; REGIONS]) {
        let Some(cfg) = self.config else { return };
        if locate_pi_units(p) != 0 {
            return;
        }
        let eps = cfg.epsilon / PI;
        let taper = cfg.delta / PI;
        let sx = if p[0] >= 0.0 { 1.0 } else { -1.0 };
        let sy = if p[1] >= 0.0 { 1.0 } else { -1.0 };
        let along = |u: f64| (u > 0.0).then(|| eps * (u / taper).min(1.0));
        let t1 = along(sy * p[1] - 1.0 / 6.0).map_or(f64::INFINITY, |w| (0.5 - sx * p[0]) / w);
        let t2 = along(sx * p[0] - 1.0 / 6.0).map_or(f64::INFINITY, |w| (0.5 - sy * p[1]) / w);
        let t = t1.min(t2);
        if t >= 1.0 {
            return;
        }
        let (g, s) = cfg.transition(t);
        let (a, b) = if sx * sy > 0.0 { (3, 4) } else { (1, 6) };
        let w = self.eval_onb(wrap_pi([p[0] + 1.0, p[1] + 1.0]));
        v[0] *= s;
        v[a] = -w[b].conj() * g;
        v[b] = w[a].conj() * g;
    }

    /// Samples of channel `j`; see [`ChannelGrids`] for the layout.
    pub fn sample_grid(&self, j: usize, n: usize) -> Result<Vec<Complex64>> {
        if j >= REGIONS {
            return Err(Error::InvalidIndex(j));
        }
        Ok(self.sample_all(n)?[j].clone())
    }

    /// All seven channels on the `N×N` grid, cached per `N`.
    pub fn sample_all(&self, n: usize) -> Result<Arc<ChannelGrids>> {
        if n == 0 || !n.is_multiple_of(4) {
            return Err(Error::GridSize(n));
        }
        if let Some(g) = self.cache.lock().unwrap().get(&n) {
            return Ok(g.clone());
        }
        let rows: Vec<Vec<[Complex64; REGIONS]>> = (0..n)
            .into_par_iter()
            .map(|k1| {
                let x = grid_coord(k1, n);
                (0..n).map(|k2| self.eval_pi([x, grid_coord(k2, n)])).collect()
            })
            .collect();
        let mut grids: ChannelGrids = Default::default();
        for g in grids.iter_mut() {
            g.reserve_exact(n * n);
        }
        for row in rows {
            for vals in row {
                for (g, v) in grids.iter_mut().zip(vals) {
                    g.push(v);
                }
            }
        }
        let grids = Arc::new(grids);
        self.cache.lock().unwrap().insert(n, grids.clone());
        Ok(grids)
    }
}

/// `−1 + 2k/N` in units of π (exact for dyadic `N`).
pub(crate) fn grid_coord(k: usize, n: usize) -> f64 {
    -1.0 + 2.0 * k as f64 / n as f64
}
