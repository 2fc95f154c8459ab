//! The acceptance suite, one function per criterion.
//!
//! Each criterion returns a [`Criterion`] with a pass flag and the measured
//! quantities; errors raised while measuring count as failures.

use std::f64::consts::PI;
use std::fmt;

use num_rational::Rational64 as Rat;

use crate::error::Result;
use crate::filterbank::{analyze, coefficient_count, synthesize, Image};
use crate::lattice::{coset_representatives, gamma, lambda, verify_shift_duality, FreqShift, IntMat2};
use crate::mfunc::{design, phase_solution, shannon_design, verify_phases, MFunctionSet, SmoothingConfig, Variant};
use crate::partition::{canonical_partition, classify_boundaries, delta, Segment};
use crate::synthesis::{spatial_field, wavelet_fourier, frequency_field, Channel};
use crate::verify::{check_cohen, check_identity_summation, check_shift_cancellation, check_unit_norms, Tolerances};

#[derive(Debug, Clone)]
pub struct Criterion {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub details: Vec<String>,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} [{}] {}: {}", self.id, self.title, self.details.join("; "))
    }
}

struct Builder {
    id: u8,
    title: &'static str,
    passed: bool,
    details: Vec<String>,
}

impl Builder {
    fn new(id: u8, title: &'static str) -> Self {
        Builder { id, title, passed: true, details: Vec::new() }
    }

    fn check(&mut self, ok: bool, detail: String) {
        self.passed &= ok;
        self.details.push(if ok { detail } else { format!("{detail} (violated)") });
    }

    fn finish(self) -> Criterion {
        Criterion { id: self.id, title: self.title, passed: self.passed, details: self.details }
    }
}

fn guarded(id: u8, title: &'static str, body: impl FnOnce(&mut Builder) -> Result<()>) -> Criterion {
    let mut b = Builder::new(id, title);
    if let Err(e) = body(&mut b) {
        b.check(false, format!("error: {e}"));
    }
    b.finish()
}

fn onb_designs() -> Result<Vec<MFunctionSet>> {
    Ok(vec![shannon_design(), design(Variant::SmoothOnb, SmoothingConfig::default())?])
}

fn all_designs() -> Result<Vec<MFunctionSet>> {
    let mut v = onb_designs()?;
    v.push(design(Variant::TightDyadic, SmoothingConfig::default())?);
    Ok(v)
}

pub fn lattice_duality() -> Criterion {
    guarded(1, "lattice duality", |b| {
        for (name, a, shifts) in [("dyadic", IntMat2::D2, gamma()), ("quincunx", IntMat2::Q, lambda())] {
            let freq: Vec<[f64; 2]> = shifts.iter().map(FreqShift::radians).collect();
            let r = verify_shift_duality(&freq, &coset_representatives(&a)?)?;
            b.check(r <= 1e-12, format!("{name} duality {r:.1e}"));
        }
        let f = FreqShift::from_fracs;
        let mut g = vec![f(0, 1, 0, 1), f(1, 1, 0, 1), f(0, 1, 1, 1), f(1, 1, 1, 1)];
        let mut l = g.clone();
        l.extend([f(1, 2, 1, 2), f(3, 2, 1, 2), f(1, 2, 3, 2), f(3, 2, 3, 2)]);
        g.sort();
        l.sort();
        b.check(gamma() == g, format!("|Γ| = {}", gamma().len()));
        b.check(lambda() == l, format!("|Λ| = {}", lambda().len()));
        Ok(())
    })
}

fn touches(s: &Segment, p: [Rat; 2]) -> bool {
    s.a == p || s.b == p
}

pub fn partition_fidelity() -> Criterion {
    guarded(2, "partition fidelity", |b| {
        let cls = classify_boundaries(PI / 24.0)?;
        let mut got = cls.triples();
        got.sort();
        b.check(got == delta(), format!("{} regular triples", got.len()));
        let h = Rat::new(1, 2);
        let s1 = [(1, 1), (1, -1), (-1, 1), (-1, -1)]
            .iter()
            .all(|&(sx, sy)| cls.singular.iter().filter(|s| touches(s, [h * sx, h * sy])).count() >= 2);
        b.check(s1, "inner corners singular".into());
        let (m, p) = (Rat::from_integer(-1), Rat::from_integer(1));
        let s0 = cls
            .singular
            .iter()
            .filter(|s| s.on_outer_boundary() && [[m, m], [p, m], [m, p]].iter().any(|&c| touches(s, c)))
            .count();
        b.check(s0 >= 4, format!("{s0} singular outer edges at the outer corner"));
        Ok(())
    })
}

pub fn phase_solution_check() -> Criterion {
    guarded(3, "phase solution", |b| {
        let r = verify_phases(&phase_solution(), &delta())?;
        b.check(r <= 1e-15, format!("max |e^(iν·Δη) + 1| = {r:.1e} over {} triples", delta().len()));
        Ok(())
    })
}

pub fn unitarity_conditions() -> Criterion {
    guarded(4, "identity summation and shift cancellation", |b| {
        let tol = Tolerances::default();
        for set in all_designs()? {
            let id = check_identity_summation(&set, 1024)?;
            let canc = check_shift_cancellation(&set, 1024)?;
            let worst = canc.iter().map(|r| r.residual).fold(0.0, f64::max);
            let expected = if set.variant().is_orthonormal() { 7 } else { 3 };
            b.check(
                id <= tol.identity && worst <= tol.cancellation && canc.len() == expected,
                format!("{}: identity {id:.1e}, {} shifts max {worst:.1e}", set.variant(), canc.len()),
            );
        }
        Ok(())
    })
}

const PR_IMAGES: u64 = 100;
const PR_SIZE: usize = 128;
const PR_LEVELS: usize = 2;

pub fn perfect_reconstruction() -> Criterion {
    guarded(5, "perfect reconstruction and coefficient count", |b| {
        for set in all_designs()? {
            let mut worst: f64 = 0.0;
            let mut counts = None;
            for seed in 0..PR_IMAGES {
                let img = Image::random(PR_SIZE, seed);
                let pyr = analyze(&img, &set, PR_LEVELS)?;
                worst = worst.max(img.relative_error(&synthesize(&pyr, &set)?));
                counts.get_or_insert_with(|| coefficient_count(&pyr));
            }
            let c = counts.unwrap();
            let n2 = PR_SIZE * PR_SIZE;
            let count_ok = if set.variant().is_orthonormal() {
                c.total == n2
            } else {
                // Six D2 channels plus the scaling channel: 7/4 samples per pixel of each level.
                c.per_level.iter().enumerate().all(|(l, &k)| {
                    let m2 = n2 >> (2 * l);
                    4 * (k + m2 / 4) == 7 * m2
                })
            };
            b.check(worst <= 1e-9, format!("{}: max rel. error {worst:.1e}", set.variant()));
            b.check(count_ok, format!("{}: {} coefficients, per level {:?}", set.variant(), c.total, c.per_level));
        }
        Ok(())
    })
}

pub fn orthonormality() -> Criterion {
    guarded(6, "orthonormality certificate", |b| {
        let tol = Tolerances::default();
        for set in onb_designs()? {
            let v = set.variant();
            let mut iso: f64 = 0.0;
            for seed in 0..10 {
                let img = Image::random(PR_SIZE, 1000 + seed);
                let pyr = analyze(&img, &set, PR_LEVELS)?;
                let e = img.norm().powi(2);
                iso = iso.max((pyr.energy() - e).abs() / e);
            }
            b.check(iso <= 1e-10, format!("{v}: Parseval {iso:.1e}"));
            let norms = check_unit_norms(&set, 4096, 16)?;
            let dev = norms.iter().map(|x| (x - 1.0).abs()).fold(0.0, f64::max);
            b.check(dev <= tol.norm, format!("{v}: max |‖ψ‖ − 1| {dev:.1e}"));
            let cohen = check_cohen(&set, 1024, 12, tol.cohen)?;
            b.check(cohen.passed, format!("{v}: Cohen inf {:.4}", cohen.inf_value));
        }
        Ok(())
    })
}

pub fn negative_controls() -> Criterion {
    guarded(7, "negative controls", |b| {
        let base = design(Variant::SmoothOnb, SmoothingConfig::default())?;
        let img = Image::random(PR_SIZE, 7);
        for (name, set) in [
            ("scaled channel", base.with_gain(1, 0.9)?),
            ("zeroed phases", base.with_phases([[0, 0]; 7])),
        ] {
            let id = check_identity_summation(&set, 1024)?;
            let canc = check_shift_cancellation(&set, 1024)?
                .iter()
                .map(|r| r.residual)
                .fold(0.0, f64::max);
            let worst = id.max(canc);
            b.check(worst >= 0.1, format!("{name}: identity {id:.2}, cancellation {canc:.2}"));
            let err = img.relative_error(&synthesize(&analyze(&img, &set, PR_LEVELS)?, &set)?);
            b.check(err >= 1e-3, format!("{name}: reconstruction error {err:.2e}"));
        }
        Ok(())
    })
}

/// Dominant axis (degrees in (−90, 90]) and eccentricity of `|f|²`.
fn dominant_axis(field: &crate::synthesis::FieldGrid) -> (f64, f64) {
    let n = field.n;
    let mut s = [0.0f64; 6];
    for k1 in 0..n {
        for k2 in 0..n {
            let w = field.values[k1 * n + k2].norm_sqr();
            let (x, y) = (field.coord(k1), field.coord(k2));
            s[0] += w;
            s[1] += w * x;
            s[2] += w * y;
            s[3] += w * x * x;
            s[4] += w * y * y;
            s[5] += w * x * y;
        }
    }
    let (mx, my) = (s[1] / s[0], s[2] / s[0]);
    let sxx = s[3] / s[0] - mx * mx;
    let syy = s[4] / s[0] - my * my;
    let sxy = s[5] / s[0] - mx * my;
    let angle = 0.5 * (2.0 * sxy).atan2(sxx - syy);
    let ecc = ((sxx - syy).powi(2) + 4.0 * sxy * sxy).sqrt() / (sxx + syy);
    (angle.to_degrees(), ecc)
}

/// Minimum separation of directions (degrees, modulo 180).
fn min_separation(angles: &[f64]) -> f64 {
    let mut best = f64::INFINITY;
    for (i, a) in angles.iter().enumerate() {
        for b in &angles[i + 1..] {
            let d = (a - b).rem_euclid(180.0);
            best = best.min(d.min(180.0 - d));
        }
    }
    best
}

pub fn figures() -> Criterion {
    guarded(8, "figure properties", |b| {
        let regions = canonical_partition();
        let cfg = SmoothingConfig::default();
        for (set, fat) in [(shannon_design(), 0.0), (design(Variant::SmoothOnb, cfg)?, cfg.epsilon)] {
            let v = set.variant();
            let q = IntMat2::Q.transpose();
            let mut worst: f64 = 0.0;
            for (j, region) in regions.iter().enumerate().skip(1) {
                let f = frequency_field(&set, Channel::Psi(j), 256, 16, 4)?;
                for k1 in 0..f.n {
                    for k2 in 0..f.n {
                        if f.values[k1 * f.n + k2].norm() > 1e-14 {
                            let xi = q.solve_f64([f.coord(k1), f.coord(k2)]);
                            worst = worst.max(region.distance(xi) - fat);
                        }
                    }
                }
            }
            b.check(worst <= 1e-9, format!("{v}: support excess {:.1e}", worst.max(0.0)));
        }

        let set = design(Variant::SmoothOnb, cfg)?;
        let mut imag: f64 = 0.0;
        let mut asym: f64 = 0.0;
        let mut angles = Vec::new();
        for j in 1..=6 {
            let f = spatial_field(&set, Channel::Psi(j), 256, 16, 4)?;
            imag = imag.max(f.max_imag());
            asym = asym.max(f.asymmetric_fraction);
            angles.push(dominant_axis(&f).0);
        }
        b.check(imag <= 1e-10, format!("max imaginary part {imag:.1e} (jump-line samples {asym:.1e})"));
        let mut herm: f64 = 0.0;
        for k in 0..200 {
            let t = k as f64 * 0.618_033_988_749_895;
            let w = [4.0 * PI * ((t * 1.7).fract() - 0.5), 4.0 * PI * ((t * 2.3).fract() - 0.5)];
            for j in 1..=6 {
                let a = wavelet_fourier(&set, j, w, 16)?;
                let c = wavelet_fourier(&set, j, [-w[0], -w[1]], 16)?;
                herm = herm.max((a - c.conj()).norm());
            }
        }
        b.check(herm <= 1e-12, format!("Hermitian symmetry {herm:.1e}"));
        let sep = min_separation(&angles);
        let shown: Vec<String> = angles.iter().map(|a| format!("{a:.0}°")).collect();
        b.check(sep >= 5.0, format!("directions {} (min separation {sep:.1}°)", shown.join(" ")));

        let f = spatial_field(&shannon_design(), Channel::Phi, 256, 16, 1)?;
        let sinc = |x: f64| if x == 0.0 { 1.0 } else { (PI * x).sin() / (PI * x) };
        let mut err: f64 = 0.0;
        for k1 in 0..f.n {
            for k2 in 0..f.n {
                let want = sinc(f.coord(k1)) * sinc(f.coord(k2));
                err = err.max((f.values[k1 * f.n + k2] - want).norm());
            }
        }
        b.check(err <= 1e-8, format!("separable sinc error {err:.1e}"));
        Ok(())
    })
}

pub type CriterionFn = fn() -> Criterion;

pub const CRITERIA: [CriterionFn; 8] = [
    lattice_duality,
    partition_fidelity,
    phase_solution_check,
    unitarity_conditions,
    perfect_reconstruction,
    orthonormality,
    negative_controls,
    figures,
];

pub fn run_all() -> Vec<Criterion> {
    CRITERIA.iter().map(|f| f()).collect()
}
