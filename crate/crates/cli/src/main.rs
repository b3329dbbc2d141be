//! `chiralosc` — spectra, order-parameter sweeps, and numerical oracle
//! checks for a planar relativistic oscillator in a magnetic field.
//!
//! Exit codes: 0 success, 2 validation error, 3 oracle mismatch,
//! 4 transition not bracketed, 5 numerical failure.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use chiralosc::error::Error;
use chiralosc::oracle;
use chiralosc::params::{classify, critical_field, derive_scales, Branch, PhysicalParams};
use chiralosc::phase;
use chiralosc::spectra::{spectrum_table, Frame};

const EXIT_VALIDATION: u8 = 2;
const EXIT_ORACLE_MISMATCH: u8 = 3;
const EXIT_NOT_BRACKETED: u8 = 4;
const EXIT_NUMERICAL: u8 = 5;

/// Environment variable naming the default directory for relative output
/// paths.
const OUTPUT_DIR_ENV: &str = "CHIRALOSC_OUTPUT_DIR";

#[derive(Parser)]
#[command(name = "chiralosc", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Units {
    Natural,
    Si,
}

#[derive(Clone, Copy, ValueEnum)]
enum FrameArg {
    Rel,
    Nonrel,
}

impl From<FrameArg> for Frame {
    fn from(f: FrameArg) -> Frame {
        match f {
            FrameArg::Rel => Frame::Relativistic,
            FrameArg::Nonrel => Frame::NonRelativistic,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct ParamArgs {
    /// Unit system. Natural units fix ħ = c = m = e = 1 and ignore the
    /// constant overrides; SI requires all four constants explicitly.
    #[arg(long, value_enum, default_value = "natural")]
    units: Units,
    /// Oscillator angular frequency ω (rad/s).
    #[arg(long)]
    omega: f64,
    /// Magnetic field magnitude B (T).
    #[arg(long = "B", default_value_t = 0.0)]
    b_field: f64,
    /// Fermion mass m (kg); SI mode only.
    #[arg(long)]
    mass: Option<f64>,
    /// Charge magnitude e (C); SI mode only.
    #[arg(long)]
    charge: Option<f64>,
    /// Reduced Planck constant ħ (J·s); SI mode only.
    #[arg(long)]
    hbar: Option<f64>,
    /// Speed of light c (m/s); SI mode only.
    #[arg(long)]
    c: Option<f64>,
}

impl ParamArgs {
    fn build(&self) -> Result<PhysicalParams, Error> {
        match self.units {
            Units::Natural => PhysicalParams::natural(self.omega, self.b_field),
            Units::Si => {
                let need = |name: &'static str, v: Option<f64>| {
                    v.ok_or(Error::InvalidParams {
                        field: name,
                        reason: "required in SI mode".into(),
                    })
                };
                PhysicalParams::new(
                    need("hbar", self.hbar)?,
                    need("c", self.c)?,
                    need("mass", self.mass)?,
                    need("charge", self.charge)?,
                    self.omega,
                    self.b_field,
                )
            }
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Output file; stdout when omitted. Relative paths are resolved
    /// against $CHIRALOSC_OUTPUT_DIR when that variable is set.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Report the regime (left / critical / right) and derived scales.
    Classify {
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Emit the closed-form energy spectrum.
    Spectrum {
        #[command(flatten)]
        params: ParamArgs,
        /// Highest level index n to include.
        #[arg(long = "n-max", default_value_t = 5)]
        n_max: u32,
        /// Relativistic or rest-mass-subtracted non-relativistic energies.
        #[arg(long, value_enum, default_value = "rel")]
        frame: FrameArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sweep the field, emit levels and the ⟨L_z⟩ order parameter, and
    /// locate the transition.
    Sweep {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long = "b-start")]
        b_start: f64,
        #[arg(long = "b-end")]
        b_end: f64,
        /// Number of uniform grid points (endpoints inclusive).
        #[arg(long, default_value_t = 101)]
        steps: usize,
        /// Level index whose order parameter locates the transition.
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, value_enum, default_value = "rel")]
        frame: FrameArg,
        /// Also write a minimal polyline SVG of ⟨L_z⟩(n) vs B to this path.
        #[arg(long)]
        svg: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Diagonalize the truncated Hamiltonian and match it against the
    /// closed-form spectrum; emits a JSON report.
    Oracle {
        #[command(flatten)]
        params: ParamArgs,
        /// Total-quanta cutoff of the Fock basis.
        #[arg(long = "N-max", default_value_t = oracle::DEFAULT_N_MAX)]
        cutoff: u32,
        /// Distinct levels per spectrum side to compare.
        #[arg(long, default_value_t = 6)]
        window: usize,
        /// Exit 3 unless the verdict is a pass.
        #[arg(long = "assert", default_value_t = false)]
        assert_pass: bool,
        /// Output file; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::InvalidParams { .. } | Error::Regime { .. } | Error::CriticalUndefined => {
            EXIT_VALIDATION
        }
        Error::NotBracketed => EXIT_NOT_BRACKETED,
        Error::Assembly(_)
        | Error::Convergence(_)
        | Error::Truncation(_)
        | Error::Degeneracy(_) => EXIT_NUMERICAL,
    }
}

fn resolve_output(path: &Path) -> PathBuf {
    if path.is_relative() {
        if let Some(dir) = std::env::var_os(OUTPUT_DIR_ENV) {
            return PathBuf::from(dir).join(path);
        }
    }
    path.to_path_buf()
}

fn emit(output: Option<&Path>, contents: &str) -> Result<(), String> {
    match output {
        None => {
            print!("{contents}");
            Ok(())
        }
        Some(path) => {
            let path = resolve_output(path);
            std::fs::write(&path, contents)
                .map_err(|e| format!("cannot write {}: {e}", path.display()))
        }
    }
}

/// Fixed 12-significant-digit CSV number format.
fn csv_num(v: f64) -> String {
    format!("{v:.11e}")
}

fn cmd_classify(params: &ParamArgs) -> Result<(), (u8, String)> {
    let p = params
        .build()
        .map_err(|e| (exit_code_for(&e), e.to_string()))?;
    let s = derive_scales(&p);
    let regime = classify(&p);
    println!("regime: {regime}");
    println!("B_c: {}", critical_field(&p));
    println!("b: {}", s.b);
    println!("r_omega: {}", s.r_omega);
    println!("F_w: {}", s.f_w);
    match s.f_s {
        Some(f_s) => println!("F_s: {f_s}"),
        None => println!("F_s: undefined (B = 0)"),
    }
    Ok(())
}

fn cmd_spectrum(
    params: &ParamArgs,
    n_max: u32,
    frame: Frame,
    output: &OutputArgs,
) -> Result<(), (u8, String)> {
    let p = params
        .build()
        .map_err(|e| (exit_code_for(&e), e.to_string()))?;
    let levels = spectrum_table(&p, n_max, frame);
    let mc2 = p.mc2();
    let contents = match output.format {
        FormatArg::Csv => {
            let mut out = String::from("n,branch,chirality,frame,energy_mc2,energy_output_units\n");
            for l in &levels {
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    l.n,
                    l.branch,
                    l.chirality,
                    l.frame,
                    csv_num(l.energy),
                    csv_num(l.energy * mc2)
                )
                .unwrap();
            }
            out
        }
        FormatArg::Json => {
            let rows: Vec<serde_json::Value> = levels
                .iter()
                .map(|l| {
                    serde_json::json!({
                        "n": l.n,
                        "branch": l.branch.to_string(),
                        "chirality": l.chirality.to_string(),
                        "frame": l.frame.to_string(),
                        "energy_mc2": l.energy,
                        "energy_output_units": l.energy * mc2,
                    })
                })
                .collect();
            let mut s = serde_json::to_string_pretty(&rows).unwrap();
            s.push('\n');
            s
        }
    };
    emit(output.output.as_deref(), &contents).map_err(|m| (EXIT_VALIDATION, m))
}

fn svg_polyline(records: &[phase::SweepRecord], n: u32) -> String {
    let (width, height, margin) = (640.0, 400.0, 40.0);
    let points: Vec<(f64, f64)> = records
        .iter()
        .filter_map(|r| {
            r.lz.iter()
                .find(|v| v.n == n && v.branch == Branch::Positive && v.defined)
                .map(|v| (r.b_field, v.value))
        })
        .collect();
    if points.is_empty() {
        return String::from("<svg xmlns=\"http://www.w3.org/2000/svg\"/>\n");
    }
    let (x0, x1) = points.iter().fold((f64::MAX, f64::MIN), |(lo, hi), p| {
        (lo.min(p.0), hi.max(p.0))
    });
    let (y0, y1) = points.iter().fold((f64::MAX, f64::MIN), |(lo, hi), p| {
        (lo.min(p.1), hi.max(p.1))
    });
    let sx = |x: f64| margin + (x - x0) / (x1 - x0).max(f64::MIN_POSITIVE) * (width - 2.0 * margin);
    let sy = |y: f64| {
        height - margin - (y - y0) / (y1 - y0).max(f64::MIN_POSITIVE) * (height - 2.0 * margin)
    };
    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n"
    );
    let _ = writeln!(
        svg,
        "  <rect width=\"{width}\" height=\"{height}\" fill=\"white\"/>"
    );
    let mut attr = String::new();
    for (x, y) in &points {
        let _ = write!(attr, "{:.2},{:.2} ", sx(*x), sy(*y));
    }
    let _ = writeln!(
        svg,
        "  <polyline points=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>",
        attr.trim_end()
    );
    svg.push_str("</svg>\n");
    svg
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    params: &ParamArgs,
    b_start: f64,
    b_end: f64,
    steps: usize,
    n: u32,
    frame: Frame,
    svg: Option<&Path>,
    output: &OutputArgs,
) -> Result<(), (u8, String)> {
    let p = params
        .build()
        .map_err(|e| (exit_code_for(&e), e.to_string()))?;
    let records = phase::sweep(&p, b_start, b_end, steps, n.max(1), frame)
        .map_err(|e| (exit_code_for(&e), e.to_string()))?;
    let transition = phase::detect_transition(&records, n.max(1))
        .map_err(|e| (exit_code_for(&e), e.to_string()))?;

    let contents = match output.format {
        FormatArg::Csv => {
            let mut out = String::from("B,b,regime,n,branch,energy_mc2,lz_hbar,lz_defined\n");
            for r in &records {
                for (level, lz) in r.levels.iter().zip(&r.lz) {
                    writeln!(
                        out,
                        "{},{},{},{},{},{},{},{}",
                        csv_num(r.b_field),
                        csv_num(r.b),
                        r.regime,
                        level.n,
                        level.branch,
                        csv_num(level.energy),
                        if lz.defined {
                            csv_num(lz.value)
                        } else {
                            String::from("nan")
                        },
                        lz.defined
                    )
                    .unwrap();
                }
            }
            let _ = writeln!(
                out,
                "# B_transition = {} +- {}",
                transition.b_field, transition.half_width
            );
            out
        }
        FormatArg::Json => {
            let rows: Vec<serde_json::Value> = records
                .iter()
                .flat_map(|r| {
                    r.levels.iter().zip(&r.lz).map(move |(level, lz)| {
                        serde_json::json!({
                            "B": r.b_field,
                            "b": r.b,
                            "regime": r.regime.to_string(),
                            "n": level.n,
                            "branch": level.branch.to_string(),
                            "energy_mc2": level.energy,
                            "lz_hbar": if lz.defined {
                                serde_json::json!(lz.value)
                            } else {
                                serde_json::Value::Null
                            },
                            "lz_defined": lz.defined,
                        })
                    })
                })
                .collect();
            let doc = serde_json::json!({
                "records": rows,
                "transition": { "B": transition.b_field, "half_width": transition.half_width },
            });
            let mut s = serde_json::to_string_pretty(&doc).unwrap();
            s.push('\n');
            s
        }
    };
    emit(output.output.as_deref(), &contents).map_err(|m| (EXIT_VALIDATION, m))?;
    if let Some(svg_path) = svg {
        emit(Some(svg_path), &svg_polyline(&records, n.max(1)))
            .map_err(|m| (EXIT_VALIDATION, m))?;
    }
    Ok(())
}

fn cmd_oracle(
    params: &ParamArgs,
    cutoff: u32,
    window: usize,
    assert_pass: bool,
    output: Option<&Path>,
) -> Result<(), (u8, String)> {
    let p = params
        .build()
        .map_err(|e| (exit_code_for(&e), e.to_string()))?;
    let report = oracle::oracle_report(&p, cutoff, window)
        .map_err(|e| (exit_code_for(&e), e.to_string()))?;
    let mut s = serde_json::to_string_pretty(&report).unwrap();
    s.push('\n');
    emit(output, &s).map_err(|m| (EXIT_VALIDATION, m))?;
    if assert_pass && report.verdict == oracle::Verdict::Fail {
        return Err((
            EXIT_ORACLE_MISMATCH,
            String::from("oracle verdict: fail (numeric spectrum does not match the closed form)"),
        ));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), (u8, String)> {
    match &cli.command {
        Command::Classify { params } => cmd_classify(params),
        Command::Spectrum {
            params,
            n_max,
            frame,
            output,
        } => cmd_spectrum(params, *n_max, (*frame).into(), output),
        Command::Sweep {
            params,
            b_start,
            b_end,
            steps,
            n,
            frame,
            svg,
            output,
        } => cmd_sweep(
            params,
            *b_start,
            *b_end,
            *steps,
            *n,
            (*frame).into(),
            svg.as_deref(),
            output,
        ),
        Command::Oracle {
            params,
            cutoff,
            window,
            assert_pass,
            output,
        } => cmd_oracle(params, *cutoff, *window, *assert_pass, output.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
