use std::f64::consts::PI;

use qshear::lattice::{FreqShift, Rat};
use qshear::partition::{
    canonical_partition, classify_boundaries, delta, locate, BoundaryTriple, Segment,
};

fn r(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

#[test]
fn regular_triples_equal_delta() {
    let cls = classify_boundaries(PI / 24.0).unwrap();
    let mut got = cls.triples();
    got.sort();
    assert_eq!(got.len(), 10);
    assert_eq!(got, delta());
}

#[test]
fn every_regular_triple_has_partner() {
    let cls = classify_boundaries(PI / 24.0).unwrap();
    for b in &cls.regular {
        let partner = b.triple.shift.neg();
        let sum = b.triple.shift.add(&partner);
        assert!(sum.is_zero());
        assert_eq!(partner.pair_representative(), b.triple.shift);
        assert!(!b.segments.is_empty());
    }
}

#[test]
fn classification_is_independent_of_epsilon() {
    let base = classify_boundaries(PI / 24.0).unwrap();
    for eps in [1e-4, 0.01, PI / 48.0, PI / 30.0] {
        assert_eq!(classify_boundaries(eps).unwrap(), base);
    }
}

fn touches(s: &Segment, p: [Rat; 2]) -> bool {
    s.a == p || s.b == p
}

#[test]
fn corners_are_singular() {
    let cls = classify_boundaries(PI / 24.0).unwrap();
    let h = r(1, 2);
    for (sx, sy) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
        let s1_corner = [h * sx, h * sy];
        let n = cls.singular.iter().filter(|s| touches(s, s1_corner)).count();
        assert!(n >= 2, "S1 corner {s1_corner:?} has {n} singular edges");
    }
    // S0 corners: outer edges are identified with the lines at −π.
    let m = r(-1, 1);
    let near_s0_corner = cls
        .singular
        .iter()
        .filter(|s| s.on_outer_boundary() && (touches(s, [m, m]) || touches(s, [r(1, 1), m]) || touches(s, [m, r(1, 1)])))
        .count();
    assert!(near_s0_corner >= 4, "{near_s0_corner}");
    // The S1 edge pieces next to the corners are singular ...
    assert!(cls.singular.contains(&Segment::new([h, r(1, 6)], [h, h])));
    // ... the middle third belongs to the regular triple (0, 5, (π, 0)).
    let t05 = cls
        .regular
        .iter()
        .find(|b| b.triple == BoundaryTriple::new(0, 5, FreqShift::from_fracs(1, 1, 0, 1)))
        .unwrap();
    assert!(t05.segments.contains(&Segment::new([h, r(-1, 6)], [h, r(1, 6)])));
}

#[test]
fn partition_tiles_every_grid() {
    for n in [8usize, 12, 64, 256] {
        let regions = canonical_partition();
        let mut counts = [0usize; 7];
        for k1 in 0..n {
            for k2 in 0..n {
                let xi = [-PI + 2.0 * PI * k1 as f64 / n as f64, -PI + 2.0 * PI * k2 as f64 / n as f64];
                let owners: Vec<usize> = regions.iter().filter(|g| g.contains(xi)).map(|g| g.index).collect();
                assert_eq!(owners.len(), 1, "n={n} at {xi:?}: {owners:?}");
                assert_eq!(owners[0], locate(xi));
                counts[owners[0]] += 1;
            }
        }
        if n % 4 == 0 {
            assert_eq!(counts[0], n * n / 4);
        }
    }
}

#[test]
fn interior_points_are_symmetric() {
    let mut state = 12345u64;
    let mut next = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    for _ in 0..10_000 {
        let xi = [(2.0 * next() - 1.0) * PI, (2.0 * next() - 1.0) * PI];
        assert_eq!(locate(xi), locate([-xi[0], -xi[1]]), "{xi:?}");
    }
}

#[test]
fn translates_of_each_region_are_disjoint_on_grid() {
    // Half-open ownership: no grid point of C_j maps into C_j under a Λ shift
    // (Γ shifts for the square).
    let n = 48;
    let lam = qshear::lattice::lambda();
    let gam = qshear::lattice::gamma();
    for k1 in 0..n {
        for k2 in 0..n {
            let xi = [-PI + 2.0 * PI * k1 as f64 / n as f64, -PI + 2.0 * PI * k2 as f64 / n as f64];
            let j = locate(xi);
            let shifts = if j == 0 { &gam } else { &lam };
            for s in shifts.iter().filter(|s| !s.is_zero()) {
                let o = s.grid_offset(n).unwrap();
                let moved = [
                    -PI + 2.0 * PI * ((k1 + o[0]) % n) as f64 / n as f64,
                    -PI + 2.0 * PI * ((k2 + o[1]) % n) as f64 / n as f64,
                ];
                assert_ne!(locate(moved), j, "{xi:?} + {s}");
            }
        }
    }
}
