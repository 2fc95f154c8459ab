//! `qshear` command-line interface.

mod pgm;

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use qshear::filterbank::{analyze, coefficient_count, synthesize_complex, Image};
use qshear::format;
use qshear::lattice::fmt_pi;
use qshear::mfunc::{design, shannon_design, MFunctionSet, Profile, SmoothingConfig, Variant};
use qshear::partition::{classify_boundaries, PiPoint, Segment};
use qshear::selftest;
use qshear::synthesis::{frequency_field, spatial_field, Channel, FieldGrid};
use qshear::verify::{run_checks, CheckOptions, Tolerances};

#[derive(Parser)]
#[command(name = "qshear", version, about = "Orthonormal quasi-shearlets with quincunx downsampling")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a design and save it with its sampled transfer functions.
    Design {
        #[command(flatten)]
        params: DesignParams,
        /// Side of the sampled frequency grid stored in the file.
        #[arg(long, default_value_t = 1024)]
        grid: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Verify identity summation, shift cancellation, criticality, norms and Cohen's condition.
    Check {
        #[command(flatten)]
        source: DesignSource,
        #[arg(long, default_value_t = 1024)]
        grid: usize,
        /// Factors in the scaling-function product.
        #[arg(long, default_value_t = 12)]
        depth: usize,
        /// Quadrature grid for the continuous norms.
        #[arg(long, default_value_t = 1024)]
        norm_grid: usize,
        #[arg(long)]
        skip_norms: bool,
        #[arg(long)]
        identity_tol: Option<f64>,
        #[arg(long)]
        cancellation_tol: Option<f64>,
        #[arg(long)]
        norm_tol: Option<f64>,
        #[arg(long)]
        cohen_tol: Option<f64>,
        /// Also write the report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Print the regular boundary triples and singular segments as JSON.
    Classify {
        #[arg(long, default_value = "pi/24", value_parser = parse_angle)]
        epsilon: f64,
    },
    /// Multi-level decomposition of an image.
    Decompose {
        #[command(flatten)]
        source: DesignSource,
        /// Square grayscale PGM (P2/P5, 8 or 16 bit).
        #[arg(long, conflicts_with = "raw")]
        image: Option<PathBuf>,
        /// Square image of little-endian f64 samples.
        #[arg(long)]
        raw: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        levels: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Reconstruct an image from a coefficient file.
    Reconstruct {
        #[command(flatten)]
        source: DesignSource,
        #[arg(long)]
        coeffs: PathBuf,
        /// PGM output; values are rounded, or rescaled if out of range.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Exact reconstruction as little-endian f64.
        #[arg(long)]
        exact_out: Option<PathBuf>,
    },
    /// Sample the scaling function or a quasi-shearlet.
    Render {
        #[command(flatten)]
        source: DesignSource,
        /// `phi` or `psi1` … `psi6`.
        #[arg(long, default_value = "phi")]
        channel: String,
        #[arg(long, value_enum, default_value_t = DomainArg::Space)]
        domain: DomainArg,
        #[arg(long, default_value_t = 256)]
        grid: usize,
        /// Frequency window `[−zπ, zπ)²`, spatial spacing `1/z`.
        #[arg(long, default_value_t = 4)]
        zoom: usize,
        #[arg(long, default_value_t = 12)]
        depth: usize,
        /// `.csv` (x, y, re, im) or `.pgm` (magnitude).
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the acceptance suite.
    Selftest,
}

#[derive(Clone, Copy, ValueEnum)]
enum DomainArg {
    Space,
    Frequency,
}

#[derive(Args)]
struct DesignParams {
    /// shannon, smooth (smooth-onb) or tight (tight-dyadic).
    #[arg(long, default_value = "smooth")]
    variant: Variant,
    /// Transition half-width, radians (`0.131`, `pi/24`).
    #[arg(long, default_value = "pi/24", value_parser = parse_angle)]
    epsilon: f64,
    /// Vertex taper length; defaults to epsilon.
    #[arg(long, value_parser = parse_angle)]
    delta: Option<f64>,
    #[arg(long, default_value = "meyer")]
    profile: Profile,
}

#[derive(Args)]
struct DesignSource {
    /// Design file written by `qshear design`; overrides the parameters below.
    #[arg(long)]
    design: Option<PathBuf>,
    #[command(flatten)]
    params: DesignParams,
}

/// Invalid parameters detected before any work starts.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(e: impl std::fmt::Display) -> anyhow::Error {
    Usage(e.to_string()).into()
}

/// Radians as a decimal or a multiple of π: `0.131`, `pi`, `pi/24`, `3pi/4`, `-π/2`, `2*pi/3`.
fn parse_angle(s: &str) -> std::result::Result<f64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let t = t.replace('π', "pi");
    if let Some(pos) = t.find("pi") {
        let coef = t[..pos].trim_end_matches('*');
        let coef = match coef {
            "" | "+" => 1.0,
            "-" => -1.0,
            c => c.parse::<f64>().map_err(|_| format!("bad angle '{s}'"))?,
        };
        let rest = &t[pos + 2..];
        let den = match rest {
            "" => 1.0,
            r => r
                .strip_prefix('/')
                .and_then(|d| d.parse::<f64>().ok())
                .filter(|d| *d != 0.0)
                .ok_or_else(|| format!("bad angle '{s}'"))?,
        };
        Ok(coef * PI / den)
    } else {
        t.parse::<f64>().map_err(|_| format!("bad angle '{s}'"))
    }
}

fn build_design(p: &DesignParams) -> Result<MFunctionSet> {
    if p.variant == Variant::Shannon {
        return Ok(shannon_design());
    }
    let cfg = SmoothingConfig {
        epsilon: p.epsilon,
        delta: p.delta.unwrap_or(p.epsilon),
        profile: p.profile,
    };
    cfg.validate().map_err(usage)?;
    design(p.variant, cfg).map_err(usage)
}

fn load_design(src: &DesignSource) -> Result<MFunctionSet> {
    match &src.design {
        Some(path) => {
            let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
            let (set, header) = format::decode_design(&bytes).with_context(|| format!("loading {}", path.display()))?;
            eprintln!("loaded {} design ({}x{} grids) from {}", set.variant(), header.n, header.n, path.display());
            Ok(set)
        }
        None => build_design(&src.params),
    }
}

/// Writes to standard output; a closed pipe (`qshear classify | head`) is not an error.
fn emit(text: &str) -> Result<()> {
    use std::io::Write;
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn point_json(p: &PiPoint) -> serde_json::Value {
    json!([fmt_pi(p[0]), fmt_pi(p[1])])
}

fn segment_json(s: &Segment) -> serde_json::Value {
    json!([point_json(&s.a), point_json(&s.b)])
}

/// Exit status of a successful run.
enum Outcome {
    Ok,
    CheckFailed,
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Design { params, grid, out } => {
            let set = build_design(&params)?;
            if grid % 4 != 0 || grid == 0 {
                return Err(usage(format!("grid {grid} must be a positive multiple of 4")));
            }
            write_file(&out, &format::encode_design(&set, grid)?)?;
            eprintln!("wrote {} design on a {grid}x{grid} grid to {}", set.variant(), out.display());
            Ok(Outcome::Ok)
        }
        Command::Check {
            source,
            grid,
            depth,
            norm_grid,
            skip_norms,
            identity_tol,
            cancellation_tol,
            norm_tol,
            cohen_tol,
            report,
        } => {
            let set = load_design(&source)?;
            let d = Tolerances::default();
            let opts = CheckOptions {
                grid,
                depth,
                norm_grid: (!skip_norms).then_some(norm_grid),
                tolerances: Tolerances {
                    identity: identity_tol.unwrap_or(d.identity),
                    cancellation: cancellation_tol.unwrap_or(d.cancellation),
                    norm: norm_tol.unwrap_or(d.norm),
                    cohen: cohen_tol.unwrap_or(d.cohen),
                },
            };
            let start = Instant::now();
            let rep = run_checks(&set, &opts).map_err(|e| match e {
                qshear::Error::GridSize(_) | qshear::Error::InvalidArgument(_) => usage(e),
                e => e.into(),
            })?;
            let text = rep.to_text();
            emit(&text)?;
            if let Some(path) = report {
                write_file(&path, text.as_bytes())?;
            }
            eprintln!("checks {} in {:.1}s", if rep.passed() { "passed" } else { "FAILED" }, start.elapsed().as_secs_f64());
            Ok(if rep.passed() { Outcome::Ok } else { Outcome::CheckFailed })
        }
        Command::Classify { epsilon } => {
            let cls = classify_boundaries(epsilon).map_err(usage)?;
            let regular: Vec<_> = cls
                .regular
                .iter()
                .map(|b| {
                    json!({
                        "j1": b.triple.j1,
                        "j2": b.triple.j2,
                        "shift": [fmt_pi(b.triple.shift.x), fmt_pi(b.triple.shift.y)],
                        "segments": b.segments.iter().map(segment_json).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let singular: Vec<_> = cls.singular.iter().map(segment_json).collect();
            let doc = json!({ "epsilon": epsilon, "regular": regular, "singular": singular });
            emit(&format!("{}\n", serde_json::to_string_pretty(&doc)?))?;
            Ok(Outcome::Ok)
        }
        Command::Decompose { source, image, raw, levels, out } => {
            let set = load_design(&source)?;
            let (img, maxval) = match (image, raw) {
                (Some(path), None) => {
                    let g = pgm::read(&path)?;
                    (Image::new(g.n, g.data)?, Some(g.maxval))
                }
                (None, Some(path)) => {
                    let v = format::decode_f64(&fs::read(&path).with_context(|| format!("reading {}", path.display()))?)?;
                    let n = (v.len() as f64).sqrt().round() as usize;
                    if n * n != v.len() {
                        bail!("{}: {} samples do not form a square image", path.display(), v.len());
                    }
                    (Image::new(n, v)?, None)
                }
                _ => return Err(usage("exactly one of --image or --raw is required")),
            };
            let pyr = analyze(&img, &set, levels).map_err(|e| match e {
                qshear::Error::ImageSize { .. } => usage(e),
                e => e.into(),
            })?;
            write_file(&out, &format::encode_coeffs(&pyr, maxval)?)?;
            let c = coefficient_count(&pyr);
            eprintln!(
                "{}x{} image, {levels} levels, {} design: {} coefficients ({:?} per level + {} scaling)",
                img.n,
                img.n,
                set.variant(),
                c.total,
                c.per_level,
                c.scaling
            );
            Ok(Outcome::Ok)
        }
        Command::Reconstruct { source, coeffs, out, exact_out } => {
            if out.is_none() && exact_out.is_none() {
                return Err(usage("nothing to write: give --out and/or --exact-out"));
            }
            let set = load_design(&source)?;
            let bytes = fs::read(&coeffs).with_context(|| format!("reading {}", coeffs.display()))?;
            let file = format::decode_coeffs(&bytes)?;
            let data = synthesize_complex(&file.pyramid, &set)?;
            let imag = data.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
            let real: Vec<f64> = data.iter().map(|v| v.re).collect();
            eprintln!("reconstructed {0}x{0} image (max imaginary part {imag:.1e})", file.pyramid.n);
            if let Some(path) = exact_out {
                write_file(&path, &format::encode_f64(&real))?;
            }
            if let Some(path) = out {
                let maxval = file.maxval.unwrap_or(255);
                let affine = pgm::choose_affine(&real, maxval);
                pgm::write(&path, file.pyramid.n, &real, maxval, affine)?;
                eprintln!("pgm affine: offset {:e}, scale {:e}", affine.offset, affine.scale);
            }
            Ok(Outcome::Ok)
        }
        Command::Render { source, channel, domain, grid, zoom, depth, out } => {
            let set = load_design(&source)?;
            let ch: Channel = channel.parse().map_err(usage)?;
            let field = match domain {
                DomainArg::Space => spatial_field(&set, ch, grid, depth, zoom),
                DomainArg::Frequency => frequency_field(&set, ch, grid, depth, zoom),
            }
            .map_err(usage)?;
            write_field(&field, &out)?;
            eprintln!(
                "{ch}: energy {:.6}, max imaginary part {:.1e}, jump-line samples {:.1e}",
                field.energy(),
                field.max_imag(),
                field.asymmetric_fraction
            );
            Ok(Outcome::Ok)
        }
        Command::Selftest => {
            let mut failed = 0;
            emit(&format!("{:<3} {:<6} {:<46} {:>7}\n", "id", "status", "criterion", "time"))?;
            for criterion in selftest::CRITERIA {
                let start = Instant::now();
                let r = criterion();
                let status = if r.passed { "PASS" } else { "FAIL" };
                let mut block = format!("{:<3} {:<6} {:<46} {:>6.1}s\n", r.id, status, r.title, start.elapsed().as_secs_f64());
                for d in &r.details {
                    block += &format!("{:10} {d}\n", "");
                }
                emit(&block)?;
                failed += usize::from(!r.passed);
            }
            emit(&format!("{} passed, {failed} failed\n", selftest::CRITERIA.len() - failed))?;
            Ok(if failed == 0 { Outcome::Ok } else { Outcome::CheckFailed })
        }
    }
}

fn write_field(field: &FieldGrid, out: &Path) -> Result<()> {
    let n = field.n;
    match out.extension().and_then(|e| e.to_str()) {
        Some("pgm") => {
            let mag: Vec<f64> = field.values.iter().map(|v| v.norm()).collect();
            let peak = mag.iter().copied().fold(0.0, f64::max);
            let affine = pgm::Affine { offset: 0.0, scale: if peak > 0.0 { 255.0 / peak } else { 1.0 } };
            pgm::write(out, n, &mag, 255, affine)
        }
        Some("csv") => {
            let mut s = String::with_capacity(n * n * 48);
            s.push_str("x,y,re,im\n");
            for k1 in 0..n {
                for k2 in 0..n {
                    let v = field.values[k1 * n + k2];
                    s.push_str(&format!("{},{},{:e},{:e}\n", field.coord(k1), field.coord(k2), v.re, v.im));
                }
            }
            write_file(out, s.as_bytes())
        }
        _ => Err(usage(format!("{}: output must end in .csv or .pgm", out.display()))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::CheckFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Usage>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("0.131").unwrap(), 0.131);
        assert_eq!(parse_angle("pi/24").unwrap(), PI / 24.0);
        assert_eq!(parse_angle("π/24").unwrap(), PI / 24.0);
        assert_eq!(parse_angle("3pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_angle("2*pi/3").unwrap(), 2.0 * PI / 3.0);
        assert_eq!(parse_angle("-pi").unwrap(), -PI);
        assert!(parse_angle("pi/0").is_err());
        assert!(parse_angle("pie").is_err());
        assert!(parse_angle("x").is_err());
    }

    #[test]
    fn affine_choice() {
        assert_eq!(pgm::choose_affine(&[0.0, 255.2], 255), pgm::Affine { offset: 0.0, scale: 1.0 });
        let a = pgm::choose_affine(&[-1.0, 1.0], 255);
        assert_eq!((a.offset, a.scale), (-1.0, 127.5));
    }
}
