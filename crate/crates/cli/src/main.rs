//! Command-line front end: spectrum tables, field profiles, verification
//! reports, eigenvalue oracles, and geometry spot checks.
//!
//! Exit codes: 0 pass, 1 a verification check failed, 2 runtime error,
//! 64 usage error. Machine output goes to `--out` (or stdout when omitted);
//! the human summary goes to the other stream.

mod commands;
mod jsonout;

use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use commands::{
    cmd_geometry_check, cmd_oracle_axial, cmd_oracle_crosscheck, cmd_oracle_radial, cmd_profile,
    cmd_spectrum, cmd_verify, error_payload, parse_class, parse_perturbation, parse_shift, Emitted,
    ProfileConfig, VerifyConfig,
};
use dkp_s3::assembler::ComponentId;
use dkp_s3::modes::{HelicityClass, ModeSpec};
use dkp_s3::verifier::AxialShift;

const EXIT_VERIFICATION_FAILED: i32 = 1;
const EXIT_RUNTIME_ERROR: i32 = 2;
const EXIT_USAGE: i32 = 64;

#[derive(Parser)]
#[command(
    name = "dkp-s3",
    version,
    about = "Bound states of a spin-1 field on the 3-sphere: spectra, profiles, and verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form spectrum table for all modes up to a principal number
    Spectrum(SpectrumArgs),
    /// Assemble one mode and run every residual suite against it
    Verify(VerifyArgs),
    /// Sample the ten field components of one mode on a uniform grid (CSV)
    Profile(ProfileArgs),
    /// Finite-difference eigenvalue oracles vs the closed forms
    Oracle(OracleArgs),
    /// Tetrad orthonormality and connection checks at random interior points
    GeometryCheck(GeometryCheckArgs),
}

#[derive(Args)]
struct SpectrumArgs {
    /// Mass M
    #[arg(long = "M", default_value_t = 0.0)]
    mass: f64,
    /// Enumerate all modes with n_r + n_z + |m| <= max-n
    #[arg(long, default_value_t = 2)]
    max_n: u32,
    /// Helicity classes (comma separated)
    #[arg(
        long = "class",
        value_parser = parse_class,
        value_delimiter = ',',
        default_values = ["nonzero-plus", "nonzero-minus", "zero-sigma"]
    )]
    classes: Vec<HelicityClass>,
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ModeArgs {
    /// Helicity class
    #[arg(long = "class", value_parser = parse_class, default_value = "nonzero-plus")]
    class: HelicityClass,
    /// Azimuthal number m
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    m: i32,
    /// Radial node count
    #[arg(long, default_value_t = 0)]
    n_r: u32,
    /// Axial node count
    #[arg(long, default_value_t = 0)]
    n_z: u32,
    /// Mass M
    #[arg(long = "M", default_value_t = 1.0)]
    mass: f64,
}

impl ModeArgs {
    fn mode(&self) -> ModeSpec {
        ModeSpec::new(self.m, self.n_r, self.n_z, self.mass, self.class)
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    mode: ModeArgs,
    /// Relative residual tolerance
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Grid points in r
    #[arg(long, default_value_t = 64)]
    grid_nr: usize,
    /// Grid points in z
    #[arg(long, default_value_t = 64)]
    grid_nz: usize,
    /// Interior margin away from the coordinate singularities
    #[arg(long, default_value_t = 1e-3)]
    margin: f64,
    /// Quadrature cells for the ladder inversion
    #[arg(long, default_value_t = 2048)]
    ode_steps: usize,
    /// Multiply one component before verifying, e.g. Phi2:1e-3
    #[arg(long, value_parser = parse_perturbation)]
    perturb: Option<(ComponentId, f64)>,
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ProfileArgs {
    #[command(flatten)]
    mode: ModeArgs,
    /// Grid points in r
    #[arg(long, default_value_t = 32)]
    grid_nr: usize,
    /// Grid points in z
    #[arg(long, default_value_t = 32)]
    grid_nz: usize,
    /// Interior margin away from the coordinate singularities
    #[arg(long, default_value_t = 1e-3)]
    margin: f64,
    /// Quadrature cells for the ladder inversion
    #[arg(long, default_value_t = 2048)]
    ode_steps: usize,
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(subcommand)]
    kind: OracleKind,
}

#[derive(Subcommand)]
enum OracleKind {
    /// Radial separation constants vs N(N+1)
    Radial {
        /// Azimuthal number m
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        m: i32,
        /// Number of eigenvalues
        #[arg(long, default_value_t = 4)]
        count: usize,
        /// Coarse mesh (the fine mesh doubles it)
        #[arg(long, default_value_t = 2000)]
        mesh: usize,
        /// Relative tolerance
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Output file (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Axial oscillator eigenvalues vs (k + 1/2 + sqrt(4 lambda + 1)/2)^2
    Axial {
        /// Potential strength lambda
        #[arg(long, default_value_t = 0.0)]
        lambda: f64,
        /// Eigenvalue interpretation: none or plus-one
        #[arg(long, value_parser = parse_shift, default_value = "none")]
        shift: AxialShift,
        /// Number of eigenvalues
        #[arg(long, default_value_t = 4)]
        count: usize,
        /// Coarse mesh (the fine mesh doubles it)
        #[arg(long, default_value_t = 2000)]
        mesh: usize,
        /// Relative tolerance
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Output file (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Composed radial+axial oracle spectrum vs the closed form
    Crosscheck {
        /// Largest principal number
        #[arg(long, default_value_t = 2)]
        max_n: u32,
        /// Mass M
        #[arg(long = "M", default_value_t = 0.0)]
        mass: f64,
        /// Helicity class
        #[arg(long = "class", value_parser = parse_class, default_value = "nonzero-plus")]
        class: HelicityClass,
        /// Coarse mesh (the fine mesh doubles it)
        #[arg(long, default_value_t = 2000)]
        mesh: usize,
        /// Relative tolerance
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Output file (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GeometryCheckArgs {
    /// Number of random interior points
    #[arg(long, default_value_t = 100)]
    points: usize,
    /// Seed for the deterministic point stream
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Central-difference step
    #[arg(long, default_value_t = 1e-5)]
    fd_step: f64,
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let kind = err.kind();
            if kind == ErrorKind::DisplayHelp || kind == ErrorKind::DisplayVersion {
                print!("{err}");
                return 0;
            }
            eprint!("{err}");
            return EXIT_USAGE;
        }
    };

    let (result, out) = match cli.command {
        Command::Spectrum(args) => (
            Ok(cmd_spectrum(args.mass, args.max_n, &args.classes)),
            args.out,
        ),
        Command::Verify(args) => (
            cmd_verify(&VerifyConfig {
                mode: args.mode.mode(),
                tol: args.tol,
                grid_nr: args.grid_nr,
                grid_nz: args.grid_nz,
                margin: args.margin,
                ode_steps: args.ode_steps,
                perturb: args.perturb,
            }),
            args.out,
        ),
        Command::Profile(args) => (
            cmd_profile(&ProfileConfig {
                mode: args.mode.mode(),
                grid_nr: args.grid_nr,
                grid_nz: args.grid_nz,
                margin: args.margin,
                ode_steps: args.ode_steps,
            }),
            args.out,
        ),
        Command::Oracle(args) => match args.kind {
            OracleKind::Radial {
                m,
                count,
                mesh,
                tol,
                out,
            } => (cmd_oracle_radial(m, count, mesh, tol), out),
            OracleKind::Axial {
                lambda,
                shift,
                count,
                mesh,
                tol,
                out,
            } => (cmd_oracle_axial(lambda, shift, count, mesh, tol), out),
            OracleKind::Crosscheck {
                max_n,
                mass,
                class,
                mesh,
                tol,
                out,
            } => (cmd_oracle_crosscheck(max_n, mass, class, mesh, tol), out),
        },
        Command::GeometryCheck(args) => (
            cmd_geometry_check(args.points, args.seed, args.fd_step),
            args.out,
        ),
    };

    match result {
        Ok(emitted) => emit(emitted, out),
        Err(err) => {
            eprintln!("error: {err}");
            print!("{}", error_payload(&err));
            EXIT_RUNTIME_ERROR
        }
    }
}

/// Resolves `--out` against the optional output-directory override.
fn resolve_out(path: PathBuf) -> PathBuf {
    if path.is_relative() {
        if let Some(dir) = std::env::var_os("DKP_S3_OUT_DIR") {
            return PathBuf::from(dir).join(path);
        }
    }
    path
}

fn emit(emitted: Emitted, out: Option<PathBuf>) -> i32 {
    match out {
        Some(path) => {
            let path = resolve_out(path);
            if let Err(err) = std::fs::write(&path, emitted.payload.as_bytes()) {
                eprintln!("error: cannot write {}: {err}", path.display());
                return EXIT_RUNTIME_ERROR;
            }
            println!("{} -> {}", emitted.summary, path.display());
        }
        None => {
            print!("{}", emitted.payload);
            eprintln!("{}", emitted.summary);
        }
    }
    if emitted.failed {
        EXIT_VERIFICATION_FAILED
    } else {
        0
    }
}
