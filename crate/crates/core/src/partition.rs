//! The frequency partition of `S0 = [−π, π)²`: a central square `C_0 = S1`
//! and six trapezoid pairs `C_1 … C_6` cut from the ring `S0 ∖ S1` by radial
//! lines of slope ±1/3, ±1 and ±3.
//!
//! Labels: `5` horizontal (`|ξ2/ξ1| ≤ 1/3`), `4` slope in `[1/3, 1]`,
//! `3` slope in `[1, 3]`, `2` vertical, `1` slope in `[−3, −1]`,
//! `6` slope in `[−1, −1/3]`.
//!
//! Polygons are stored exactly, with vertex coordinates in units of π.
//! A point on a shared edge belongs to the region that contains `ξ + τ·d` for
//! infinitesimal `τ > 0`, `d = (1, 1/2)`. The direction is parallel to no
//! partition edge, and the rule commutes with translation, so half-open
//! translates of each region tile the plane exactly.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::OnceLock;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{gamma, lambda, rat_to_f64, FreqShift, Rat};

/// A point with coordinates in units of π.
pub type PiPoint = [Rat; 2];

/// Number of partition regions (`C_0 … C_6`).
pub const REGIONS: usize = 7;

/// Tie-break direction for points on shared edges.
const TIE_DIRECTION: [f64; 2] = [1.0, 0.5];
/// Snapping tolerance, in units of π, for deciding that a point is on an edge.
const EDGE_TOL: f64 = 1e-11;

fn r(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

fn pt(x: Rat, y: Rat) -> PiPoint {
    [x, y]
}

/// Closed line segment in units of π.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Segment {
    pub a: PiPoint,
    pub b: PiPoint,
}

impl Segment {
    /// Endpoints in lexicographic order.
    pub fn new(a: PiPoint, b: PiPoint) -> Self {
        if a <= b {
            Segment { a, b }
        } else {
            Segment { a: b, b: a }
        }
    }

    pub fn length_sq(&self) -> Rat {
        let dx = self.b[0] - self.a[0];
        let dy = self.b[1] - self.a[1];
        dx * dx + dy * dy
    }

    pub fn radians(&self) -> [[f64; 2]; 2] {
        [to_radians(self.a), to_radians(self.b)]
    }

    pub fn translate(&self, dx: Rat, dy: Rat) -> Self {
        Segment::new(
            [self.a[0] + dx, self.a[1] + dy],
            [self.b[0] + dx, self.b[1] + dy],
        )
    }

    /// Segments on the outer lines `ξ1 = π` or `ξ2 = π` are moved to the
    /// identified lines `−π`, so equal torus segments compare equal.
    pub fn canonical(&self) -> Self {
        let one = Rat::from_integer(1);
        let two = Rat::from_integer(2);
        let mut s = *self;
        if s.a[0] == one && s.b[0] == one {
            s = s.translate(-two, Rat::zero());
        }
        if s.a[1] == one && s.b[1] == one {
            s = s.translate(Rat::zero(), -two);
        }
        s
    }

    /// Whether the segment lies on the boundary of `S0`.
    pub fn on_outer_boundary(&self) -> bool {
        let one = Rat::from_integer(1);
        (self.a[0].abs() == one && self.a[0] == self.b[0])
            || (self.a[1].abs() == one && self.a[1] == self.b[1])
    }

    fn point_at(&self, s: Rat) -> PiPoint {
        [
            self.a[0] + (self.b[0] - self.a[0]) * s,
            self.a[1] + (self.b[1] - self.a[1]) * s,
        ]
    }

    /// Parameter of `p` along the segment's line, if `p` is collinear.
    fn param_of(&self, p: PiPoint) -> Option<Rat> {
        let dx = self.b[0] - self.a[0];
        let dy = self.b[1] - self.a[1];
        let cross = (p[0] - self.a[0]) * dy - (p[1] - self.a[1]) * dx;
        if !cross.is_zero() {
            return None;
        }
        Some(((p[0] - self.a[0]) * dx + (p[1] - self.a[1]) * dy) / self.length_sq())
    }

    /// Parameter interval of the collinear overlap with `other`, if it has
    /// positive length.
    fn overlap_params(&self, other: &Segment) -> Option<(Rat, Rat)> {
        let s0 = self.param_of(other.a)?;
        let s1 = self.param_of(other.b)?;
        let (lo, hi) = if s0 <= s1 { (s0, s1) } else { (s1, s0) };
        let lo = lo.max(Rat::zero());
        let hi = hi.min(Rat::from_integer(1));
        (lo < hi).then_some((lo, hi))
    }

    /// Collinear overlap of positive length.
    pub fn overlap(&self, other: &Segment) -> Option<Segment> {
        let (lo, hi) = self.overlap_params(other)?;
        Some(Segment::new(self.point_at(lo), self.point_at(hi)))
    }

    /// Parts of `self` not covered by any of `covers`.
    pub fn subtract(&self, covers: &[Segment]) -> Vec<Segment> {
        let mut intervals: Vec<(Rat, Rat)> =
            covers.iter().filter_map(|c| self.overlap_params(c)).collect();
        intervals.sort();
        let mut out = Vec::new();
        let mut cursor = Rat::zero();
        for (lo, hi) in intervals {
            if lo > cursor {
                out.push(Segment::new(self.point_at(cursor), self.point_at(lo)));
            }
            cursor = cursor.max(hi);
        }
        if cursor < Rat::from_integer(1) {
            out.push(Segment::new(self.point_at(cursor), self.b));
        }
        out
    }

    fn contains_point(&self, p: [f64; 2]) -> bool {
        let a = to_f64(self.a);
        let b = to_f64(self.b);
        let e = [b[0] - a[0], b[1] - a[1]];
        let len = e[0].hypot(e[1]);
        let w = [p[0] - a[0], p[1] - a[1]];
        let dist = (e[0] * w[1] - e[1] * w[0]).abs() / len;
        let s = (e[0] * w[0] + e[1] * w[1]) / (len * len);
        dist <= 1e-9 && (-1e-9..=1.0 + 1e-9).contains(&s)
    }
}

fn to_f64(p: PiPoint) -> [f64; 2] {
    [rat_to_f64(p[0]), rat_to_f64(p[1])]
}

fn to_radians(p: PiPoint) -> [f64; 2] {
    let q = to_f64(p);
    [q[0] * PI, q[1] * PI]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionKind {
    CentralSquare,
    TrapezoidPair,
    Derived,
}

/// A subset of `S0`.
///
/// Canonical regions are unions of convex polygons with half-open ownership
/// of their edges. Derived regions (overlap and exclusive sets) are closed
/// unions of convex pieces and segments, minus optional holes.
#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    pub kind: RegionKind,
    pub index: usize,
    /// Convex pieces, vertices counter-clockwise, units of π.
    pub components: Vec<Vec<PiPoint>>,
    /// Measure-zero parts.
    pub segments: Vec<Segment>,
    /// Convex pieces removed from a derived region.
    pub holes: Vec<Vec<PiPoint>>,
}

impl Region {
    fn canonical(index: usize, components: Vec<Vec<PiPoint>>) -> Self {
        Region {
            kind: if index == 0 {
                RegionKind::CentralSquare
            } else {
                RegionKind::TrapezoidPair
            },
            index,
            components: components.into_iter().map(ccw).collect(),
            segments: Vec::new(),
            holes: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty() && self.segments.is_empty()
    }

    /// Whether the region has positive area.
    pub fn has_interior(&self) -> bool {
        !self.components.is_empty()
    }

    /// Membership of `ξ` (radians); `ξ` is wrapped into `S0` first.
    pub fn contains(&self, xi: [f64; 2]) -> bool {
        let p = wrap_pi_units(xi);
        match self.kind {
            RegionKind::Derived => {
                let in_piece = self.components.iter().any(|c| in_closed_polygon(c, p))
                    || self.segments.iter().any(|s| s.contains_point(p));
                in_piece && !self.holes.iter().any(|h| in_closed_polygon(h, p))
            }
            _ => self
                .components
                .iter()
                .any(|c| in_half_open_polygon(&poly_f64(c), p)),
        }
    }

    /// Distance (radians) from `ξ` to the closure of the region's pieces,
    /// periodically in `2πZ²`; zero inside.
    pub fn distance(&self, xi: [f64; 2]) -> f64 {
        let p = wrap_pi_units(xi);
        let mut best = f64::INFINITY;
        for c in &self.components {
            let poly = poly_f64(c);
            for tx in [-2.0, 0.0, 2.0] {
                for ty in [-2.0, 0.0, 2.0] {
                    let q = [p[0] + tx, p[1] + ty];
                    if in_closed_polygon(c, q) {
                        return 0.0;
                    }
                    for k in 0..poly.len() {
                        let (a, b) = (poly[k], poly[(k + 1) % poly.len()]);
                        best = best.min(point_segment_distance(q, a, b));
                    }
                }
            }
        }
        best * PI
    }

    /// Area in radians². Exact for canonical regions; derived regions are
    /// estimated on a 1024² midpoint grid.
    pub fn area(&self) -> f64 {
        match self.kind {
            RegionKind::Derived if !self.holes.is_empty() => {
                let n = 1024;
                let h = 2.0 / n as f64;
                let mut count = 0usize;
                for k1 in 0..n {
                    for k2 in 0..n {
                        let p = [-1.0 + (k1 as f64 + 0.5) * h, -1.0 + (k2 as f64 + 0.5) * h];
                        if self.contains([p[0] * PI, p[1] * PI]) {
                            count += 1;
                        }
                    }
                }
                count as f64 * h * h * PI * PI
            }
            _ => rat_to_f64(self.exact_area()) * PI * PI,
        }
    }

    /// Sum of the pieces' areas, in units of π².
    pub fn exact_area(&self) -> Rat {
        self.components.iter().map(|c| polygon_area(c)).sum()
    }
}

impl crate::lattice::FrequencySet for Region {
    fn contains_point(&self, xi: [f64; 2]) -> bool {
        self.contains(xi)
    }
}

fn polygon_area(poly: &[PiPoint]) -> Rat {
    let n = poly.len();
    let mut twice = Rat::zero();
    for i in 0..n {
        let p = poly[i];
        let q = poly[(i + 1) % n];
        twice += p[0] * q[1] - q[0] * p[1];
    }
    twice / Rat::from_integer(2)
}

fn ccw(mut poly: Vec<PiPoint>) -> Vec<PiPoint> {
    if polygon_area(&poly) < Rat::zero() {
        poly.reverse();
    }
    poly
}

fn point_segment_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    let len2 = d[0] * d[0] + d[1] * d[1];
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / len2).clamp(0.0, 1.0)
    };
    (p[0] - a[0] - t * d[0]).hypot(p[1] - a[1] - t * d[1])
}

fn poly_f64(poly: &[PiPoint]) -> Vec<[f64; 2]> {
    poly.iter().map(|&p| to_f64(p)).collect()
}

/// `ξ` in radians → point in units of π with coordinates in `[−1, 1)`.
pub(crate) fn wrap_pi_units(xi: [f64; 2]) -> [f64; 2] {
    wrap_pi([xi[0] / PI, xi[1] / PI])
}

/// Point in units of π → representative in `[−1, 1)²`.
pub(crate) fn wrap_pi(p: [f64; 2]) -> [f64; 2] {
    let w = |v: f64| {
        let mut u = (v + 1.0).rem_euclid(2.0) - 1.0;
        if u > 1.0 - EDGE_TOL {
            u -= 2.0;
        }
        u
    };
    [w(p[0]), w(p[1])]
}

fn cross(e: [f64; 2], w: [f64; 2]) -> f64 {
    e[0] * w[1] - e[1] * w[0]
}

/// Convex CCW polygon membership with the tie-break rule on edges.
fn in_half_open_polygon(poly: &[[f64; 2]], p: [f64; 2]) -> bool {
    let n = poly.len();
    (0..n).all(|i| {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let e = [b[0] - a[0], b[1] - a[1]];
        let f = cross(e, [p[0] - a[0], p[1] - a[1]]) / e[0].hypot(e[1]);
        if f > EDGE_TOL {
            true
        } else if f < -EDGE_TOL {
            false
        } else {
            cross(e, TIE_DIRECTION) > 0.0
        }
    })
}

fn in_closed_polygon(poly: &[PiPoint], p: [f64; 2]) -> bool {
    let poly = poly_f64(poly);
    let n = poly.len();
    (0..n).all(|i| {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let e = [b[0] - a[0], b[1] - a[1]];
        cross(e, [p[0] - a[0], p[1] - a[1]]) / e[0].hypot(e[1]) >= -1e-9
    })
}

fn negate(poly: &[PiPoint]) -> Vec<PiPoint> {
    poly.iter().map(|p| [-p[0], -p[1]]).collect()
}

/// The seven canonical regions `C_0 = S1, C_1, …, C_6`.
pub fn canonical_partition() -> Vec<Region> {
    let h = r(1, 2);
    let t = r(1, 6);
    let u = r(1, 3);
    let one = r(1, 1);
    let square = vec![pt(-h, -h), pt(h, -h), pt(h, h), pt(-h, h)];
    // Upper (or right) component of each pair; the other is its negative.
    let c1 = vec![pt(-h, h), pt(-t, h), pt(-u, one), pt(-one, one)];
    let c2 = vec![pt(-t, h), pt(t, h), pt(u, one), pt(-u, one)];
    let c3 = vec![pt(t, h), pt(h, h), pt(one, one), pt(u, one)];
    let c4 = vec![pt(h, t), pt(one, u), pt(one, one), pt(h, h)];
    let c5 = vec![pt(h, -t), pt(one, -u), pt(one, u), pt(h, t)];
    let c6 = vec![pt(-h, t), pt(-h, h), pt(-one, one), pt(-one, u)];
    let mut regions = vec![Region::canonical(0, vec![square])];
    for (j, c) in [c1, c2, c3, c4, c5, c6].into_iter().enumerate() {
        let lower = negate(&c);
        regions.push(Region::canonical(j + 1, vec![c, lower]));
    }
    regions
}

fn partition_f64() -> &'static Vec<(usize, Vec<[f64; 2]>)> {
    static CACHE: OnceLock<Vec<(usize, Vec<[f64; 2]>)>> = OnceLock::new();
    CACHE.get_or_init(|| {
        canonical_partition()
            .iter()
            .flat_map(|reg| reg.components.iter().map(move |c| (reg.index, poly_f64(c))))
            .collect()
    })
}

/// Index of the region owning `ξ` (radians), after wrapping into `S0`.
pub fn locate(xi: [f64; 2]) -> usize {
    locate_pi_units(wrap_pi_units(xi))
}

pub(crate) fn locate_pi_units(p: [f64; 2]) -> usize {
    partition_f64()
        .iter()
        .find(|(_, poly)| in_half_open_polygon(poly, p))
        .map(|(j, _)| *j)
        .expect("the half-open partition covers S0")
}

/// Which closed supports the overlap sets are built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Supports {
    /// The closed canonical regions; overlaps are segments.
    Canonical,
    /// Each region enlarged by an L∞ margin, given in units of π.
    Enlarged(Rat),
}

fn support_pieces(j: usize, supports: Supports) -> Vec<Vec<PiPoint>> {
    let region = &canonical_partition()[j];
    match supports {
        Supports::Canonical => region.components.clone(),
        Supports::Enlarged(e) => region.components.iter().map(|c| enlarge(c, e)).collect(),
    }
}

/// Minkowski sum of a convex polygon with the square `[−e, e]²`.
fn enlarge(poly: &[PiPoint], e: Rat) -> Vec<PiPoint> {
    let mut pts = Vec::with_capacity(poly.len() * 4);
    for p in poly {
        for (sx, sy) in [(-1, -1), (-1, 1), (1, -1), (1, 1)] {
            pts.push([p[0] + e * sx, p[1] + e * sy]);
        }
    }
    convex_hull(pts)
}

/// Andrew's monotone chain, counter-clockwise, collinear points dropped.
fn convex_hull(mut pts: Vec<PiPoint>) -> Vec<PiPoint> {
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let turn = |o: PiPoint, a: PiPoint, b: PiPoint| {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let mut lower: Vec<PiPoint> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && turn(lower[lower.len() - 2], lower[lower.len() - 1], p) <= Rat::zero() {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<PiPoint> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && turn(upper[upper.len() - 2], upper[upper.len() - 1], p) <= Rat::zero() {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Sutherland–Hodgman clip of a convex polygon by a convex CCW polygon,
/// closed half-planes, exact arithmetic. The result may be degenerate.
fn clip(subject: &[PiPoint], clipper: &[PiPoint]) -> Vec<PiPoint> {
    let mut out: Vec<PiPoint> = subject.to_vec();
    let n = clipper.len();
    for i in 0..n {
        if out.is_empty() {
            break;
        }
        let a = clipper[i];
        let b = clipper[(i + 1) % n];
        let side = |p: PiPoint| (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
        let input = std::mem::take(&mut out);
        let m = input.len();
        for k in 0..m {
            let cur = input[k];
            let prev = input[(k + m - 1) % m];
            let sc = side(cur);
            let sp = side(prev);
            if sc >= Rat::zero() {
                if sp < Rat::zero() {
                    out.push(intersect(prev, cur, sp, sc));
                }
                out.push(cur);
            } else if sp >= Rat::zero()
                && sp > Rat::zero() {
                    out.push(intersect(prev, cur, sp, sc));
                }
        }
        out.dedup();
        if out.len() > 1 && out.first() == out.last() {
            out.pop();
        }
    }
    out
}

fn intersect(p: PiPoint, q: PiPoint, sp: Rat, sq: Rat) -> PiPoint {
    let t = sp / (sp - sq);
    [p[0] + (q[0] - p[0]) * t, p[1] + (q[1] - p[1]) * t]
}

enum Piece {
    Polygon(Vec<PiPoint>),
    Segment(Segment),
}

fn classify_piece(pts: Vec<PiPoint>) -> Option<Piece> {
    if pts.len() >= 3 && !polygon_area(&pts).is_zero() {
        return Some(Piece::Polygon(ccw(convex_hull(pts))));
    }
    let mut best: Option<(Rat, Segment)> = None;
    for i in 0..pts.len() {
        for k in i + 1..pts.len() {
            let s = Segment::new(pts[i], pts[k]);
            let l = s.length_sq();
            if !l.is_zero() && best.as_ref().is_none_or(|(bl, _)| l > *bl) {
                best = Some((l, s));
            }
        }
    }
    best.map(|(_, s)| Piece::Segment(s))
}

fn translate_poly(poly: &[PiPoint], dx: Rat, dy: Rat) -> Vec<PiPoint> {
    poly.iter().map(|p| [p[0] + dx, p[1] + dy]).collect()
}

fn s0_square() -> Vec<PiPoint> {
    let one = r(1, 1);
    vec![pt(-one, -one), pt(one, -one), pt(one, one), pt(-one, one)]
}

fn check_index(j: usize) -> Result<()> {
    if j < REGIONS {
        Ok(())
    } else {
        Err(Error::InvalidIndex(j))
    }
}

/// `B(j, ν)`: points `ξ ∈ supp_j` with `ξ + ν ∈ supp_j` (modulo 2π),
/// restricted to the closed square `S0`.
pub fn overlap_set(j: usize, nu: &FreqShift, supports: Supports) -> Result<Region> {
    check_index(j)?;
    let pieces = support_pieces(j, supports);
    let square = s0_square();
    let offsets = [-2i64, 0, 2, 4];
    let mut components = Vec::new();
    let mut segments = Vec::new();
    for p in &pieces {
        for q in &pieces {
            for &k1 in &offsets[..3] {
                for &k2 in &offsets[..3] {
                    let pk = translate_poly(p, Rat::from_integer(k1), Rat::from_integer(k2));
                    let pk = clip(&pk, &square);
                    if pk.len() < 2 {
                        continue;
                    }
                    for &m1 in &offsets {
                        for &m2 in &offsets {
                            let qk = translate_poly(
                                q,
                                Rat::from_integer(m1) - nu.x,
                                Rat::from_integer(m2) - nu.y,
                            );
                            let qk = ccw(convex_hull(qk));
                            match classify_piece(clip(&pk, &qk)) {
                                Some(Piece::Polygon(poly)) => components.push(poly),
                                Some(Piece::Segment(s)) => segments.push(s.canonical()),
                                None => {}
                            }
                        }
                    }
                }
            }
        }
    }
    components.sort();
    components.dedup();
    segments.sort();
    segments.dedup();
    // Segments lying inside a 2-D piece add nothing.
    segments.retain(|s| {
        !components.iter().any(|c| {
            in_closed_polygon(c, to_f64(s.a)) && in_closed_polygon(c, to_f64(s.b))
        })
    });
    Ok(Region {
        kind: RegionKind::Derived,
        index: j,
        components,
        segments: merge_collinear(segments),
        holes: Vec::new(),
    })
}

/// Channels whose products enter the cancellation sum for shift `ν`.
pub fn channels_for_shift(nu: &FreqShift) -> Vec<usize> {
    if gamma().contains(nu) {
        (0..REGIONS).collect()
    } else {
        (1..REGIONS).collect()
    }
}

/// `C(j, ν) = B(j, ν) ∖ ⋃_{j' ≠ j} B(j', ν)`, with `j'` over the channels of
/// the cancellation sum for `ν`.
pub fn exclusive_set(j: usize, nu: &FreqShift, supports: Supports) -> Result<Region> {
    let own = overlap_set(j, nu, supports)?;
    let others: Vec<Region> = channels_for_shift(nu)
        .into_iter()
        .filter(|&k| k != j)
        .map(|k| overlap_set(k, nu, supports))
        .collect::<Result<_>>()?;
    let covers: Vec<Segment> = others.iter().flat_map(|o| o.segments.iter().copied()).collect();
    let segments = own
        .segments
        .iter()
        .flat_map(|s| s.subtract(&covers))
        .collect();
    let holes = others.iter().flat_map(|o| o.components.iter().cloned()).collect();
    Ok(Region {
        kind: RegionKind::Derived,
        index: j,
        components: own.components,
        segments,
        holes,
    })
}

/// Merges overlapping collinear segments.
fn merge_collinear(mut segs: Vec<Segment>) -> Vec<Segment> {
    let mut merged = true;
    while merged {
        merged = false;
        'scan: for i in 0..segs.len() {
            for k in i + 1..segs.len() {
                let (a, b) = (segs[i], segs[k]);
                let touching = a.overlap(&b).is_some()
                    || (a.param_of(b.a).is_some() && a.param_of(b.b).is_some() && (a.b == b.a || b.b == a.a));
                if touching {
                    let mut pts = [a.a, a.b, b.a, b.b];
                    pts.sort();
                    segs[i] = Segment::new(pts[0], pts[3]);
                    segs.remove(k);
                    merged = true;
                    break 'scan;
                }
            }
        }
    }
    segs.sort();
    segs
}

/// A regular boundary `(j1, j2, ν)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BoundaryTriple {
    pub j1: usize,
    pub j2: usize,
    pub shift: FreqShift,
}

impl BoundaryTriple {
    pub fn new(j1: usize, j2: usize, shift: FreqShift) -> Self {
        BoundaryTriple { j1, j2, shift }
    }
}

impl std::fmt::Display for BoundaryTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.j1, self.j2, self.shift)
    }
}

/// A regular triple together with the boundary segments it names
/// (`B_s(j1, ν) ∩ B_s(j2, ν)`).
#[derive(Debug, Clone, PartialEq)]
pub struct RegularBoundary {
    pub triple: BoundaryTriple,
    pub segments: Vec<Segment>,
}

impl RegularBoundary {
    pub fn on_outer_boundary(&self) -> bool {
        self.segments.iter().all(|s| s.on_outer_boundary())
    }
}

/// A singular boundary piece: part of `B_s(j, λ)` covered by no other channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct SingularSegment {
    pub region: usize,
    pub shift: FreqShift,
    pub segment: Segment,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryClassification {
    /// Distinct singular segments.
    pub singular: Vec<Segment>,
    /// Every `(region, shift, segment)` found singular.
    pub singular_detail: Vec<SingularSegment>,
    /// One entry per `{ν, −ν}` pair, keyed by the lexicographically smaller shift.
    pub regular: Vec<RegularBoundary>,
}

impl BoundaryClassification {
    pub fn triples(&self) -> Vec<BoundaryTriple> {
        self.regular.iter().map(|b| b.triple).collect()
    }
}

/// Splits every boundary of every region into singular and regular parts.
///
/// The classification is combinatorial on the closed canonical supports:
/// a piece of `B_s(j, λ)` is regular where some `B_s(j', λ)` with `j' ≠ j`
/// covers it, and singular elsewhere. `epsilon` (radians) only has to be an
/// admissible smoothing width; the result does not depend on it.
pub fn classify_boundaries(epsilon: f64) -> Result<BoundaryClassification> {
    if !(epsilon > 0.0 && epsilon < PI / 12.0) {
        return Err(Error::EpsilonOutOfRange(epsilon));
    }
    let mut singular_detail = Vec::new();
    let mut regular: BTreeMap<BoundaryTriple, Vec<Segment>> = BTreeMap::new();
    for nu in lambda().into_iter().filter(|l| !l.is_zero()) {
        let channels = channels_for_shift(&nu);
        let sets: Vec<(usize, Vec<Segment>)> = channels
            .iter()
            .map(|&j| Ok((j, overlap_set(j, &nu, Supports::Canonical)?.segments)))
            .collect::<Result<_>>()?;
        for (j, segs) in &sets {
            let covers: Vec<Segment> = sets
                .iter()
                .filter(|(k, _)| k != j)
                .flat_map(|(_, s)| s.iter().copied())
                .collect();
            for s in segs {
                for part in s.subtract(&covers) {
                    singular_detail.push(SingularSegment {
                        region: *j,
                        shift: nu,
                        segment: part,
                    });
                }
            }
        }
        for (a, (ja, sa)) in sets.iter().enumerate() {
            for (jb, sb) in sets.iter().skip(a + 1) {
                let shared: Vec<Segment> = sa
                    .iter()
                    .flat_map(|x| sb.iter().filter_map(move |y| x.overlap(y)))
                    .collect();
                if !shared.is_empty() && nu == nu.pair_representative() {
                    regular
                        .entry(BoundaryTriple::new(*ja, *jb, nu))
                        .or_default()
                        .extend(shared);
                }
            }
        }
    }
    singular_detail.sort();
    let mut singular: Vec<Segment> = singular_detail.iter().map(|s| s.segment).collect();
    singular.sort();
    singular.dedup();
    Ok(BoundaryClassification {
        singular,
        singular_detail,
        regular: regular
            .into_iter()
            .map(|(triple, segs)| RegularBoundary {
                triple,
                segments: merge_collinear(segs),
            })
            .collect(),
    })
}

/// The regular-boundary set `Δ` as printed with the phase solution.
pub fn delta() -> Vec<BoundaryTriple> {
    let s = FreqShift::from_fracs;
    let mut d = vec![
        BoundaryTriple::new(0, 2, s(0, 1, 1, 1)),
        BoundaryTriple::new(0, 5, s(1, 1, 0, 1)),
        BoundaryTriple::new(1, 3, s(1, 1, 0, 1)),
        BoundaryTriple::new(4, 6, s(0, 1, 1, 1)),
        BoundaryTriple::new(1, 6, s(1, 2, 3, 2)),
        BoundaryTriple::new(2, 3, s(1, 2, 3, 2)),
        BoundaryTriple::new(4, 5, s(1, 2, 3, 2)),
        BoundaryTriple::new(3, 4, s(1, 2, 1, 2)),
        BoundaryTriple::new(1, 2, s(1, 2, 1, 2)),
        BoundaryTriple::new(5, 6, s(1, 2, 1, 2)),
    ];
    d.sort();
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: f64 = PI;

    #[test]
    fn locate_examples() {
        assert_eq!(locate([0.0, 0.0]), 0);
        assert_eq!(locate([3.0 * P / 4.0, P / 8.0]), 5);
        assert_eq!(locate([P / 8.0, 3.0 * P / 4.0]), 2);
        assert_eq!(locate([3.0 * P / 4.0, 0.0]), 5);
        // periodic wrap
        assert_eq!(locate([3.0 * P / 4.0 + 2.0 * P, -2.0 * P]), 5);
    }

    #[test]
    fn square_is_half_open() {
        assert_eq!(locate([-P / 2.0, 0.0]), 0);
        assert_ne!(locate([P / 2.0, 0.0]), 0);
        assert_eq!(locate([0.0, -P / 2.0]), 0);
        assert_ne!(locate([0.0, P / 2.0]), 0);
        assert_ne!(locate([-P / 2.0, P / 2.0]), 0);
    }

    #[test]
    fn areas() {
        let regions = canonical_partition();
        assert_eq!(regions[0].exact_area(), r(1, 1));
        for reg in &regions[1..] {
            assert_eq!(reg.exact_area(), r(1, 2));
        }
        let total: Rat = regions.iter().map(|g| g.exact_area()).sum();
        assert_eq!(total, r(4, 1));
    }

    #[test]
    fn region_five_has_inner_edge_at_half_pi() {
        let c5 = &canonical_partition()[5];
        assert!(c5.contains([3.0 * P / 4.0, 0.0]));
        let xs: Vec<Rat> = c5.components.iter().flatten().map(|p| p[0].abs()).collect();
        assert!(xs.contains(&r(1, 2)));
    }

    #[test]
    fn overlap_of_five_under_horizontal_shift() {
        let b = overlap_set(5, &FreqShift::from_fracs(1, 1, 0, 1), Supports::Canonical).unwrap();
        assert!(!b.has_interior());
        let want = vec![
            Segment::new([r(-1, 2), r(-1, 6)], [r(-1, 2), r(1, 6)]),
            Segment::new([r(1, 2), r(-1, 6)], [r(1, 2), r(1, 6)]),
        ];
        assert_eq!(b.segments, want);
    }

    #[test]
    fn zero_shift_overlap_is_the_support() {
        let b = overlap_set(3, &FreqShift::zero(), Supports::Canonical).unwrap();
        let total: Rat = b.components.iter().map(|c| polygon_area(c)).sum();
        assert_eq!(total, r(1, 2));
    }

    #[test]
    fn central_square_quarter_shift_overlap() {
        // S1 ∩ (S1 − (π/2, π/2)) is the quarter square [−π/2, 0]².
        let b = overlap_set(0, &FreqShift::from_fracs(1, 2, 1, 2), Supports::Canonical).unwrap();
        assert_eq!(b.exact_area(), r(1, 4));
    }

    #[test]
    fn shannon_exclusive_sets_have_no_area() {
        for nu in lambda().into_iter().filter(|l| !l.is_zero()) {
            for j in channels_for_shift(&nu) {
                let c = exclusive_set(j, &nu, Supports::Canonical).unwrap();
                assert!(!c.has_interior(), "C({j},{nu}) has interior");
            }
        }
    }

    #[test]
    fn enlarged_exclusive_set_of_central_square() {
        let nu = FreqShift::from_fracs(1, 1, 0, 1);
        let c = exclusive_set(0, &nu, Supports::Enlarged(r(1, 24))).unwrap();
        assert!(c.area() > 0.0);
        // Near the corner thirds of ξ1 = ±π/2, not near the middle.
        assert!(c.contains([P / 2.0, P / 3.0]));
        assert!(c.contains([-P / 2.0, -P / 3.0]));
        assert!(!c.contains([P / 2.0, 0.0]));
    }

    #[test]
    fn invalid_index() {
        assert_eq!(
            overlap_set(7, &FreqShift::zero(), Supports::Canonical),
            Err(Error::InvalidIndex(7))
        );
        assert!(exclusive_set(9, &FreqShift::zero(), Supports::Canonical).is_err());
    }

    #[test]
    fn epsilon_range() {
        assert!(classify_boundaries(0.0).is_err());
        assert!(classify_boundaries(P / 12.0).is_err());
        assert!(classify_boundaries(P / 24.0).is_ok());
    }

    #[test]
    fn segment_subtract() {
        let s = Segment::new([r(0, 1), r(0, 1)], [r(1, 1), r(0, 1)]);
        let c = Segment::new([r(1, 4), r(0, 1)], [r(1, 2), r(0, 1)]);
        assert_eq!(
            s.subtract(&[c]),
            vec![
                Segment::new([r(0, 1), r(0, 1)], [r(1, 4), r(0, 1)]),
                Segment::new([r(1, 2), r(0, 1)], [r(1, 1), r(0, 1)]),
            ]
        );
    }
}
