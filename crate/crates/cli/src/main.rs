//! `singlet`: build invariant subspaces, check uniformity, certify and
//! search for two-uniform singlet states.
//!
//! Exit codes: 0 success or predicate true, 1 predicate false or certificate
//! violation, 2 usage, input or IO error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use singlet_core::io::{self, BasisJson, OptimizationJson};
use singlet_core::singlet::{
    check_lemmas, extract_phase_function, MemberLemmas, PhaseFunctionReport,
};
use singlet_core::{
    build_singlet_basis, certify, is_k_uniform, minimize_deficit, verify_certificate_numerically,
    verify_invariance, Error, OptimizeOptions, SystemShape, DEFAULT_TOL,
};

#[derive(Parser)]
#[command(
    name = "singlet",
    version,
    about = "Singlet states and the two-uniformity no-go"
)]
struct Cli {
    /// Numerical tolerance (rank cutoff, uniformity threshold).
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Seed for every random choice; recorded in JSON output.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Also write the JSON output to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the orthonormal basis of the invariant subspace.
    Subspace {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
    },
    /// Measure invariance under random U⊗…⊗U and fit the phase function.
    CheckInvariance {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Test whether every k-site marginal is maximally mixed.
    Uniformity {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Check permutation phase, sign relation and support structure of each
    /// basis member.
    VerifyLemmas {
        #[arg(long)]
        basis: PathBuf,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Exact counting certificate for the shape.
    Certify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
    },
    /// Sample the basis span and check the counting identity and floor.
    Verify {
        #[arg(long)]
        basis: PathBuf,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Minimize the pair deficit over the basis span.
    Optimize {
        #[arg(long)]
        basis: PathBuf,
        #[arg(long, default_value_t = 16)]
        restarts: usize,
        #[arg(long, default_value_t = 5000)]
        max_iters: usize,
    },
}

/// Outcome of a command whose input was valid.
enum Verdict {
    Holds,
    Fails,
}

#[derive(Serialize)]
struct InvarianceJson {
    seed: u64,
    samples: usize,
    tolerance: f64,
    residual: f64,
    invariant: bool,
    phase_function: Option<PhaseFunctionReport>,
    phase_function_error: Option<String>,
}

#[derive(Serialize)]
struct MemberJson {
    member: usize,
    lemmas: MemberLemmas,
    phase_function: Option<PhaseFunctionReport>,
    phase_function_error: Option<String>,
}

#[derive(Serialize)]
struct LemmasJson {
    n: usize,
    d: usize,
    seed: u64,
    all_hold: bool,
    members: Vec<MemberJson>,
}

fn with_path<T>(path: &Path, result: singlet_core::Result<T>) -> singlet_core::Result<T> {
    result.inspect_err(|_| eprintln!("while accessing {}", path.display()))
}

fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> singlet_core::Result<()> {
    if let Some(path) = out {
        with_path(path, io::write_json(path, value))?;
    }
    print!("{}", io::to_pretty(value));
    Ok(())
}

fn read_state(path: &Path) -> singlet_core::Result<singlet_core::PureState> {
    with_path(path, io::read_state(path))
}

fn read_basis(path: &Path) -> singlet_core::Result<singlet_core::SingletBasis> {
    with_path(path, io::read_basis(path))
}

fn shape(n: usize, d: usize) -> singlet_core::Result<SystemShape> {
    SystemShape::new(n, d)
}

fn run(cli: Cli) -> singlet_core::Result<Verdict> {
    let out = cli.out.as_deref();
    let (tol, seed) = (cli.tol, cli.seed);
    match cli.command {
        Command::Subspace { n, d } => {
            let basis = build_singlet_basis(shape(n, d)?, tol);
            if let Some(path) = out {
                with_path(path, io::write_json(path, &BasisJson::from(&basis)))?;
            }
            if let Some(diagnostic) = basis.dimension_diagnostic() {
                eprintln!("{diagnostic}");
            }
            println!("dimension: {}", basis.len());
            match basis.shape().k_ratio() {
                Some(k) => println!("K: {k}"),
                None => println!("K: none"),
            }
            match basis.permutation_phase() {
                Some(phase) => println!(
                    "permutation_phase: {}",
                    serde_json::to_value(phase)?.as_str().unwrap_or("?")
                ),
                None => println!("permutation_phase: none"),
            }
            Ok(Verdict::Holds)
        }
        Command::CheckInvariance { state, samples } => {
            let psi = read_state(&state)?;
            let residual = verify_invariance(&psi, samples, seed)?;
            let invariant = residual <= tol.sqrt();
            let (phase_function, phase_function_error) =
                match extract_phase_function(&psi, samples, seed, tol.sqrt()) {
                    Ok(report) => (Some(report), None),
                    Err(e) => (None, Some(e.to_string())),
                };
            emit(
                &InvarianceJson {
                    seed,
                    samples,
                    tolerance: tol,
                    residual,
                    invariant,
                    phase_function,
                    phase_function_error,
                },
                out,
            )?;
            Ok(if invariant {
                Verdict::Holds
            } else {
                Verdict::Fails
            })
        }
        Command::Uniformity { state, k } => {
            let report = is_k_uniform(&read_state(&state)?, k, tol)?;
            emit(&report, out)?;
            Ok(if report.is_k_uniform {
                Verdict::Holds
            } else {
                Verdict::Fails
            })
        }
        Command::VerifyLemmas { basis, samples } => {
            let basis = read_basis(&basis)?;
            let check_tol = tol.sqrt();
            let members: Vec<MemberJson> = basis
                .members()
                .iter()
                .enumerate()
                .map(|(member, psi)| {
                    let (phase_function, phase_function_error) =
                        match extract_phase_function(psi, samples, seed, check_tol) {
                            Ok(report) => (Some(report), None),
                            Err(e) => (None, Some(e.to_string())),
                        };
                    MemberJson {
                        member,
                        lemmas: check_lemmas(psi, check_tol),
                        phase_function,
                        phase_function_error,
                    }
                })
                .collect();
            let all_hold = members
                .iter()
                .all(|m| m.lemmas.all_hold() && m.phase_function.is_some());
            let shape = basis.shape();
            emit(
                &LemmasJson {
                    n: shape.n(),
                    d: shape.d(),
                    seed,
                    all_hold,
                    members,
                },
                out,
            )?;
            Ok(if all_hold {
                Verdict::Holds
            } else {
                Verdict::Fails
            })
        }
        Command::Certify { n, d } => {
            emit(&certify(&shape(n, d)?), out)?;
            Ok(Verdict::Holds)
        }
        Command::Verify { basis, trials } => {
            let report = verify_certificate_numerically(&read_basis(&basis)?, trials, seed, tol)?;
            emit(&report, out)?;
            Ok(Verdict::Holds)
        }
        Command::Optimize {
            basis,
            restarts,
            max_iters,
        } => {
            let opts = OptimizeOptions {
                restarts,
                max_iters,
                seed,
                ..OptimizeOptions::default()
            };
            let result = minimize_deficit(&read_basis(&basis)?, &opts)?;
            emit(&OptimizationJson::from(&result), out)?;
            Ok(Verdict::Holds)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Verdict::Holds) => ExitCode::SUCCESS,
        Ok(Verdict::Fails) => ExitCode::from(1),
        Err(e @ (Error::CertificateViolation(_) | Error::Inconsistent(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
