//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 parse/validation/IO error,
//! 3 verification failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::factor::{correcting_factor, factor_profile};
use crate::geom::{Configuration, Direction, Line, Point};
use crate::io::{self, instance_digest, read_instance, read_result, write_file, IoError};
use crate::oracle::{brute_force_c_m, random_instance, verify_solution, InstanceRecipe, VerifyOptions};
use crate::solver::{solve_minimal_expansion, SolverOptions};
use crate::svg::render_svg;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "transversal", version, about = "Minimal expansion ratio for line transversals of convex polygons")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct SolverFlags {
    /// Uniform grid size over normal angles in [0, π)
    #[arg(long = "grid", default_value_t = SolverOptions::default().grid_size)]
    grid: usize,
    #[arg(long, default_value_t = SolverOptions::default().angle_tol)]
    angle_tol: f64,
    #[arg(long, default_value_t = SolverOptions::default().value_tol)]
    value_tol: f64,
    /// Centroid collinearity threshold, relative to the largest coordinate
    #[arg(long, default_value_t = SolverOptions::default().collinear_tol)]
    collinear_tol: f64,
    #[arg(long, default_value_t = SolverOptions::default().certificate_tol)]
    certificate_tol: f64,
}

impl SolverFlags {
    fn options(&self) -> SolverOptions {
        SolverOptions {
            grid_size: self.grid,
            angle_tol: self.angle_tol,
            value_tol: self.value_tol,
            collinear_tol: self.collinear_tol,
            certificate_tol: self.certificate_tol,
        }
    }
}

#[derive(Args, Debug)]
struct OracleFlags {
    #[arg(long, default_value_t = VerifyOptions::default().angle_steps)]
    angle_steps: usize,
    #[arg(long, default_value_t = VerifyOptions::default().c_tol)]
    c_tol: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute the minimal expansion ratio and optimal transversals
    Solve {
        instance: PathBuf,
        /// Write the result file here
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also render an SVG drawing
        #[arg(long)]
        svg: Option<PathBuf>,
        #[command(flatten)]
        solver: SolverFlags,
    },
    /// Brute-force estimate of the minimal expansion ratio
    Oracle {
        instance: PathBuf,
        #[command(flatten)]
        oracle: OracleFlags,
    },
    /// Check a result file against an instance
    Verify {
        instance: PathBuf,
        result: PathBuf,
        #[command(flatten)]
        oracle: OracleFlags,
    },
    /// Generate a seeded random instance
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = InstanceRecipe::default().vertices_range.0)]
        min_vertices: usize,
        #[arg(long, default_value_t = InstanceRecipe::default().vertices_range.1)]
        max_vertices: usize,
        /// Centroid box as x0,y0,x1,y1
        #[arg(long = "box", default_value = "0,0,1,1", value_parser = parse_box)]
        centroid_box: (Point, Point),
        #[arg(long, default_value_t = InstanceRecipe::default().radius_range.0)]
        min_radius: f64,
        #[arg(long, default_value_t = InstanceRecipe::default().radius_range.1)]
        max_radius: f64,
        /// Output file; standard output when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dump the factor of one polygon over parallel lines as offset,factor rows
    Profile {
        instance: PathBuf,
        /// 1-based polygon index
        #[arg(long)]
        polygon: usize,
        /// Normal angle of the lines, radians
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, default_value_t = 41)]
        samples: usize,
        /// Half-range of offsets around the apex; defaults to twice the widest strip side
        #[arg(long)]
        span: Option<f64>,
    },
    /// Render an instance, optionally with a result, to SVG
    Render {
        instance: PathBuf,
        result: Option<PathBuf>,
        #[arg(long)]
        svg: PathBuf,
    },
}

fn parse_box(s: &str) -> Result<(Point, Point), String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    match v.as_slice() {
        &[x0, y0, x1, y1] => Ok((Point::new(x0, y0), Point::new(x1, y1))),
        _ => Err(format!("expected x0,y0,x1,y1, got {s:?}")),
    }
}

enum Failure {
    Usage(String),
    Input(String),
    Verify(String),
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::Input(e.to_string())
    }
}

fn load(path: &Path) -> Result<Configuration, Failure> {
    Ok(read_instance(path)?)
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes())
        .map_err(|e| Failure::Input(format!("cannot write output: {e}")))
}

fn run(cmd: Command, out: &mut dyn Write) -> Result<(), Failure> {
    match cmd {
        Command::Solve {
            instance,
            out: result_path,
            svg,
            solver,
        } => {
            let config = load(&instance)?;
            let sol = solve_minimal_expansion(&config, &solver.options())
                .map_err(|e| Failure::Usage(e.to_string()))?;
            let mut text = format!(
                "c_m = {:.16e}\nclassification = {}\ndegenerate = {}\n",
                sol.c_m,
                sol.classification.as_str(),
                sol.degenerate
            );
            for (k, line) in sol.lines.iter().enumerate() {
                let (a, b, c) = line.implicit();
                text.push_str(&format!(
                    "line {}: theta = {:.16e}, offset = {:.16e} ({:.12}x + {:.12}y = {:.12})\n",
                    k + 1,
                    line.theta(),
                    line.offset(),
                    a,
                    b,
                    c
                ));
            }
            emit(out, &text)?;
            if let Some(path) = result_path {
                write_file(&path, &io::write_result(&sol, &config))?;
            }
            if let Some(path) = svg {
                render_svg(&config, Some(&sol), &path)?;
            }
            Ok(())
        }
        Command::Oracle { instance, oracle } => {
            let config = load(&instance)?;
            if oracle.angle_steps < 2 || oracle.c_tol.is_nan() || oracle.c_tol <= 0.0 {
                return Err(Failure::Usage("need --angle-steps >= 2 and --c-tol > 0".into()));
            }
            let c = brute_force_c_m(&config, oracle.angle_steps, oracle.c_tol);
            emit(out, &format!("c_m_oracle = {c:.16e}\n"))
        }
        Command::Verify {
            instance,
            result,
            oracle,
        } => {
            let config = load(&instance)?;
            let file = read_result(&result)?;
            let sol = file.to_solution()?;
            if file.instance_digest != instance_digest(&config) {
                return Err(Failure::Verify(
                    "result digest does not match the instance".into(),
                ));
            }
            let opts = VerifyOptions {
                angle_steps: oracle.angle_steps,
                c_tol: oracle.c_tol,
                ..VerifyOptions::default()
            };
            let report = verify_solution(&config, &sol, &opts);
            let mark = |ok: bool| if ok { "PASS" } else { "FAIL" };
            let mut text = format!(
                "{} value: reported {:.16e}, oracle {:.16e}, relative error {:.3e}\n",
                mark(report.value_ok),
                report.reported_c_m,
                report.oracle_c_m,
                report.relative_error
            );
            for (k, l) in report.lines.iter().enumerate() {
                let idx: Vec<String> = l.tangent_indices.iter().map(|i| (i + 1).to_string()).collect();
                text.push_str(&format!(
                    "{} line {}: transversal={} tangent=[{}] both_sides={} matches_certificate={}\n",
                    mark(l.passed()),
                    k + 1,
                    l.is_transversal,
                    idx.join(","),
                    l.certificate_ok,
                    l.matches_reported
                ));
            }
            match report.minimality_ok {
                Some(ok) => text.push_str(&format!(
                    "{} minimality: no transversal at c_m*(1-{:e})\n",
                    mark(ok),
                    opts.shrink
                )),
                None => text.push_str("SKIP minimality: degenerate instance\n"),
            }
            emit(out, &text)?;
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Verify("verification failed".into()))
            }
        }
        Command::Gen {
            seed,
            n,
            min_vertices,
            max_vertices,
            centroid_box,
            min_radius,
            max_radius,
            out: path,
        } => {
            let recipe = InstanceRecipe {
                seed,
                n_polygons: n,
                vertices_range: (min_vertices, max_vertices),
                centroid_box,
                radius_range: (min_radius, max_radius),
            };
            let config = random_instance(&recipe).map_err(|e| Failure::Usage(e.to_string()))?;
            let text = io::write_instance(&config);
            match path {
                Some(p) => Ok(write_file(&p, &text)?),
                None => emit(out, &text),
            }
        }
        Command::Profile {
            instance,
            polygon,
            theta,
            samples,
            span,
        } => {
            let config = load(&instance)?;
            let poly = polygon
                .checked_sub(1)
                .and_then(|i| config.polygons().get(i))
                .ok_or_else(|| {
                    Failure::Usage(format!(
                        "--polygon must be in 1..={}, got {polygon}",
                        config.len()
                    ))
                })?;
            if samples < 2 || !theta.is_finite() {
                return Err(Failure::Usage("need --samples >= 2 and a finite --theta".into()));
            }
            let dir = Direction::new(theta);
            let prof = factor_profile(poly, dir);
            let span = span.unwrap_or(2.0 / prof.slope_pos.min(prof.slope_neg));
            let mut text = format!(
                "# theta={:.16e} apex_offset={:.16e} slope_pos={:.16e} slope_neg={:.16e}\noffset,factor\n",
                dir.theta(),
                prof.apex_offset,
                prof.slope_pos,
                prof.slope_neg
            );
            for k in 0..samples {
                let b = prof.apex_offset - span + 2.0 * span * k as f64 / (samples - 1) as f64;
                let f = correcting_factor(poly, &Line::new(dir, b));
                text.push_str(&format!("{b:.16e},{f:.16e}\n"));
            }
            emit(out, &text)
        }
        Command::Render {
            instance,
            result,
            svg,
        } => {
            let config = load(&instance)?;
            let sol = match result {
                Some(p) => Some(read_result(&p)?.to_solution()?),
                None => None,
            };
            Ok(render_svg(&config, sol.as_ref(), &svg)?)
        }
    }
}

/// Runs the CLI with explicit output streams and returns the exit code.
pub fn run_cli_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let informational =
                matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let text = e.render().to_string();
            if informational {
                let _ = out.write_all(text.as_bytes());
                return EXIT_OK;
            }
            let _ = err.write_all(text.as_bytes());
            return EXIT_USAGE;
        }
    };
    match run(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Input(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_INPUT
        }
        Err(Failure::Verify(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_VERIFY
        }
    }
}

pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_cli_with(argv, &mut stdout.lock(), &mut stderr.lock())
}
