//! `etube`: domain-spec driven verifiers, distance and map queries, slice grids.
//!
//! Exit codes: 0 success, 1 violations or a domain error, 2 usage or spec error.

mod check;
mod numfmt;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use etube::duality::dual_domain;
use etube::spec::DomainSpec;
use etube::tangent::{from_tangent_chart, to_tangent_chart};
use etube::tube::{Membership, BOUNDARY_BAND};
use etube::verify::raster::fitted_window;
use etube::{Complex64, Error, Execution, TangentVector, Tube, VerifierReport};
use nalgebra::DVector;

use check::{apply_tol, expand, run_suite, Outcome, Params, Suite};

#[derive(Parser)]
#[command(name = "etube", version, about = "Elliptic tubes over convex projective domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verifier suites on a domain spec.
    Check {
        spec: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 200)]
        lines: usize,
        #[arg(long, default_value_t = 512)]
        grid: usize,
        /// Extra bound on the largest error each suite records.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the report document here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Run on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Emit a grid of u over the slice through a point, or over a complex line.
    Slice {
        spec: PathBuf,
        /// A non-real chart point `a+bi,...`; the grid covers its slice disk.
        #[arg(long, conflicts_with = "line")]
        point: Option<String>,
        /// A complex line `origin;direction`, both chart vectors `a+bi,...`.
        #[arg(long)]
        line: Option<String>,
        #[arg(long, default_value_t = 256)]
        grid: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Hilbert distance of two real points, or slice Kobayashi distance.
    Dist {
        spec: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
    },
    /// The map from the tube to the tangent bundle, or its inverse.
    Map {
        spec: PathBuf,
        /// A chart point `a+bi,...`; prints `base;direction;magnitude`.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "inverse", required_unless_present = "inverse")]
        forward: Option<String>,
        /// A tangent vector `base;direction;magnitude`; prints the chart point.
        #[arg(long, allow_hyphen_values = true)]
        inverse: Option<String>,
    },
    /// Write the dual domain as a spec.
    Dual {
        spec: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Pgm,
}

/// A failure with its exit code.
struct Fail(u8, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Spec(_) | Error::Validation(_) | Error::Dimension { .. } => 2,
            _ => 1,
        };
        Fail(code, e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Fail {
    Fail(2, msg.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("etube: {msg}");
            ExitCode::from(code)
        }
    }
}

fn load(path: &Path) -> Result<DomainSpec, Fail> {
    let spec = DomainSpec::load(path)?;
    // Validate up front so that malformed specs exit with 2 whatever the command.
    spec.to_domain()?;
    Ok(spec)
}

fn write_out(out: Option<&Path>, bytes: &[u8]) -> Result<(), Fail> {
    match out {
        Some(p) => std::fs::write(p, bytes).map_err(|e| Fail(1, format!("{}: {e}", p.display()))),
        None => std::io::stdout().write_all(bytes).map_err(|e| Fail(1, e.to_string())),
    }
}

fn cvec(s: &str, n: usize) -> Result<DVector<Complex64>, Fail> {
    let v = numfmt::parse_cvec(s).map_err(usage)?;
    if v.len() != n {
        return Err(usage(format!("expected {n} coordinates, got {}", v.len())));
    }
    Ok(DVector::from_vec(v))
}

fn run(command: Command) -> Result<u8, Fail> {
    match command {
        Command::Check { spec, suite, samples, lines, grid, tol, seed, out, sequential } => {
            let s = load(&spec)?;
            let exec = if sequential { Execution::Sequential } else { Execution::Parallel };
            let params = Params { samples, lines, grid, tol, seed, exec };
            let mut all = VerifierReport::new(format!("check {}", s.name), tol.unwrap_or(0.0), seed);
            for suite in expand(suite) {
                match run_suite(suite, &s, &params)? {
                    Outcome::Ran(mut r) => {
                        apply_tol(&mut r, params.tol);
                        println!("{}", r.summary());
                        all.absorb(r);
                    }
                    Outcome::NotApplicable(why) => {
                        println!("SKIP {suite:?}: {why}");
                        all.note(format!("{suite:?} not run: {why}"));
                    }
                }
            }
            println!("{}", all.summary());
            write_out(out.as_deref(), all.to_toml().as_bytes())?;
            Ok(if all.passed() { 0 } else { 1 })
        }
        Command::Slice { spec, point, line, grid, format, out } => {
            let s = load(&spec)?;
            let tube = s.tube()?;
            let bytes = slice(&tube, point.as_deref(), line.as_deref(), grid, format)?;
            write_out(out.as_deref(), &bytes)?;
            Ok(0)
        }
        Command::Dist { spec, from, to } => {
            let s = load(&spec)?;
            let tube = s.tube()?;
            let n = tube.dim();
            let (x, y) = (cvec(&from, n)?, cvec(&to, n)?);
            let real = |v: &DVector<Complex64>| v.iter().all(|c| c.im == 0.0);
            let d = if real(&x) && real(&y) {
                tube.base().hilbert_distance(&x.map(|c| c.re), &y.map(|c| c.re))?
            } else {
                tube.kobayashi_supported(&tube.lift(&x), &tube.lift(&y))?
            };
            println!("{}", numfmt::sig15(d));
            Ok(0)
        }
        Command::Map { spec, forward, inverse } => {
            let s = load(&spec)?;
            let tube = s.tube()?;
            let n = tube.dim();
            if let Some(z) = forward {
                let v = to_tangent_chart(&tube, &cvec(&z, n)?)?;
                println!("{}", format_tangent(&v));
            } else if let Some(t) = inverse {
                let v = parse_tangent(&t, n)?;
                let z = from_tangent_chart(&tube, &v)?;
                println!("{}", z.iter().map(|c| numfmt::complex(*c)).collect::<Vec<_>>().join(","));
            }
            Ok(0)
        }
        Command::Dual { spec, out } => {
            let s = load(&spec)?;
            let dual = dual_domain(&s.to_domain()?)?;
            let text = DomainSpec::from_domain(format!("{}-dual", s.name), &dual).to_toml();
            write_out(out.as_deref(), text.as_bytes())?;
            Ok(0)
        }
    }
}

/// Coordinates below this fraction of the largest one are printed as zero.
const PRINT_FLOOR: f64 = 1e-14;

fn clean(v: &DVector<f64>) -> Vec<f64> {
    let scale = v.amax().max(1.0);
    v.iter().map(|x| if x.abs() < PRINT_FLOOR * scale { 0.0 } else { *x }).collect()
}

fn format_tangent(v: &TangentVector) -> String {
    let base = clean(&v.base).iter().map(|x| numfmt::sig15(*x)).collect::<Vec<_>>().join(",");
    let dir = if v.is_zero() {
        "0".to_string()
    } else {
        let u = &v.direction / v.direction.norm();
        clean(&u).iter().map(|x| if *x >= 0.0 { format!("+{}", numfmt::sig15(*x)) } else { numfmt::sig15(*x) }).collect::<Vec<_>>().join(",")
    };
    format!("{base};{dir};{}", numfmt::sig15(v.magnitude))
}

fn parse_tangent(s: &str, n: usize) -> Result<TangentVector, Fail> {
    let parts: Vec<&str> = s.split(';').collect();
    let [base, dir, mag] = parts[..] else {
        return Err(usage("expected base;direction;magnitude"));
    };
    let base = DVector::from_vec(numfmt::parse_rvec(base).map_err(usage)?);
    let magnitude: f64 = mag.trim().parse().map_err(|_| usage(format!("bad magnitude {mag:?}")))?;
    if base.len() != n {
        return Err(usage(format!("expected {n} base coordinates")));
    }
    if dir.trim() == "0" {
        return Ok(TangentVector { base, direction: DVector::zeros(n), magnitude });
    }
    let direction = DVector::from_vec(numfmt::parse_rvec(dir).map_err(usage)?);
    if direction.len() != n {
        return Err(usage(format!("expected {n} direction coordinates")));
    }
    Ok(TangentVector { base, direction, magnitude })
}

/// Grid of `u` values: `u` inside, −1 outside, −2 in the boundary band.
fn slice(tube: &Tube, point: Option<&str>, line: Option<&str>, grid: usize, format: Format) -> Result<Vec<u8>, Fail> {
    let n = tube.dim();
    if grid == 0 {
        return Err(usage("--grid must be positive"));
    }
    let (origin, direction, center) = match (point, line) {
        (Some(p), _) => {
            let zeta = cvec(p, n)?;
            if zeta.iter().all(|c| c.im == 0.0) {
                return Err(usage("a real point has no slice of its own; pass --line"));
            }
            let slice = tube.slice_disk(&tube.lift(&zeta))?;
            let affine = &slice.interval.affine;
            let origin = affine.origin.map(Complex64::from);
            let dir = affine.direction.map(Complex64::from);
            // ζ = origin + w·direction with a real direction.
            let w = (&zeta - &origin).dot(&dir) / dir.norm_squared();
            (origin, dir, Some(w))
        }
        (None, Some(l)) => {
            let parts: Vec<&str> = l.split(';').collect();
            let [o, d] = parts[..] else {
                return Err(usage("--line expects origin;direction"));
            };
            let d = cvec(d, n)?;
            if d.norm() == 0.0 {
                return Err(usage("zero line direction"));
            }
            (cvec(o, n)?, d, None)
        }
        (None, None) => return Err(usage("pass --point or --line")),
    };
    let (fit_center, fit_half) = fitted_window(tube, &origin, &direction)?;
    let (center, half) = match center {
        Some(w) => {
            let off = fit_center - w;
            (w, off.re.abs().max(off.im.abs()) + fit_half)
        }
        None => (fit_center, fit_half),
    };
    let h = 2.0 * half / grid as f64;
    let mid = (grid / 2) as f64;
    let values: Vec<f64> = (0..grid * grid)
        .map(|k| {
            let (row, col) = (k / grid, k % grid);
            let s = center + Complex64::new((col as f64 - mid) * h, (mid - row as f64) * h);
            let zeta = &origin + &direction * s;
            match tube.membership_chart(&zeta, BOUNDARY_BAND) {
                Membership::Outside => -1.0,
                Membership::Boundary => -2.0,
                Membership::Inside => tube.u_value(&zeta).unwrap_or(-2.0),
            }
        })
        .collect();
    Ok(match format {
        Format::Csv => {
            let mut out = String::new();
            for row in values.chunks(grid) {
                out.push_str(&row.iter().map(|v| numfmt::sig15(*v)).collect::<Vec<_>>().join(","));
                out.push('\n');
            }
            out.into_bytes()
        }
        Format::Pgm => {
            let mut out = format!("P5\n{grid} {grid}\n255\n").into_bytes();
            out.extend(values.iter().map(|&v| {
                if v == -1.0 {
                    255u8
                } else if v == -2.0 {
                    254
                } else {
                    ((v / std::f64::consts::FRAC_PI_2) * 255.0).floor().clamp(0.0, 254.0) as u8
                }
            }));
            out
        }
    })
}
