//! Command-line interface. [`run`] parses arguments, executes one command
//! and returns the process exit code: 0 on success, 1 for usage errors, 2
//! when the inputs fail a precondition or a computation fails.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::io::{read_matrix, read_state, write_text, State};
use crate::jordan::{count_signatures, count_unique_classes, jordan_signature};
use crate::linalg::{CMatrix, C64};
use crate::matfun::{nth_root, Branch};
use crate::stabilizer::{classify, stabilizer_space};
use crate::states::{excitation, ghz, multi_block_excitation, unique_representative, BlockLayout};
use crate::symmetrize::symmetrize_locals;
use crate::symspace::{apply_site, full_to_sym, is_symmetric, sym_to_full, tensor_power_apply, SymState};

#[derive(Parser, Debug)]
#[command(name = "symqudit", version, about = "Stabilizers and entanglement classes of symmetric qudit states")]
pub struct Cli {
    #[command(flatten)]
    pub config: CliConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct CliConfig {
    /// Numerical tolerance
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Eigenvalue clustering radius relative to the matrix norm
    #[arg(long = "cluster-tol", global = true, default_value_t = 1e-7)]
    pub cluster_tol: f64,
    /// Random stabilizer samples per classification
    #[arg(long, global = true, default_value_t = 16)]
    pub samples: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Normalize generated or transformed states
    #[arg(long, global = true)]
    pub normalize: bool,
    /// Write output here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a representative state
    Gen {
        #[command(subcommand)]
        family: Family,
    },
    /// Stabilizer dimension, generic Jordan signature and uniqueness verdict
    Classify { state: PathBuf },
    /// Orthonormal basis of the stabilizer space
    Stab { state: PathBuf },
    /// Single operation A reproducing A_1 (x) ... (x) A_n on the state
    Symmetrize {
        state: PathBuf,
        #[arg(required = true)]
        matrices: Vec<PathBuf>,
    },
    /// Jordan signature of a matrix
    Jordan { matrix: PathBuf },
    /// Principal matrix root
    Root {
        matrix: PathBuf,
        #[arg(long)]
        order: u32,
    },
    /// Check permutation symmetry of a state
    CheckSym { state: PathBuf },
    /// Apply a matrix to every site, or to one site with --site
    Apply {
        state: PathBuf,
        matrix: PathBuf,
        #[arg(long)]
        site: Option<usize>,
    },
    /// Number of Jordan signatures and of unique classes for dimension d
    Count {
        #[arg(long)]
        d: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum Family {
    /// sum_i alpha_i |i...i>
    Ghz {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        /// Real weights, comma separated (default 1/sqrt(d) each)
        #[arg(long, value_delimiter = ',')]
        alpha: Option<Vec<f64>>,
    },
    /// Symmetric state with j excitations
    Excitation {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        j: usize,
    },
    /// Unique state for a layout of Jordan blocks with distinct eigenvalues
    Unique {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        blocks: Vec<usize>,
    },
    /// Excitations spread over several blocks with fixed particle counts
    Multiblock {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        blocks: Vec<usize>,
        #[arg(long)]
        j: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<usize>,
    },
}

enum Failure {
    Usage(String),
    Failed(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Failed(e)
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("serializable output")
}

fn load_sym(path: &Path, tol: f64) -> Result<SymState> {
    match read_state(path)? {
        State::Sym(s) => Ok(s),
        State::Full(f) => full_to_sym(&f, tol),
    }
}

fn finish_state(s: SymState, normalize: bool) -> Result<String> {
    let s = if normalize { s.normalized()? } else { s };
    Ok(crate::io::state_to_json(&State::Sym(s)))
}

fn validate(c: &CliConfig) -> std::result::Result<(), Failure> {
    for (name, v) in [("--tol", c.tol), ("--cluster-tol", c.cluster_tol)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Failure::Usage(format!("{name} must be a positive number")));
        }
    }
    if c.samples == 0 {
        return Err(Failure::Usage("--samples must be at least 1".into()));
    }
    Ok(())
}

fn generate(family: &Family, normalize: bool) -> Result<String> {
    let s = match family {
        Family::Ghz { n, d, alpha } => {
            let weights: Option<Vec<C64>> = alpha.as_ref().map(|a| a.iter().map(|&x| C64::new(x, 0.0)).collect());
            ghz(*n, *d, weights.as_deref())?
        }
        Family::Excitation { n, d, j } => excitation(*n, *d, *j)?,
        Family::Unique { n, blocks } => unique_representative(*n, &BlockLayout::new(blocks.clone())?)?,
        Family::Multiblock { n, blocks, j, weights } => {
            multi_block_excitation(*n, &BlockLayout::new(blocks.clone())?, *j, weights)?
        }
    };
    finish_state(s, normalize)
}

fn execute(cli: &Cli) -> std::result::Result<String, Failure> {
    let c = &cli.config;
    validate(c)?;
    let text = match &cli.command {
        Command::Gen { family } => generate(family, c.normalize)?,
        Command::Classify { state } => {
            let psi = load_sym(state, c.tol)?;
            to_json(&classify(&psi, c.samples, c.seed, c.tol, c.cluster_tol)?)
        }
        Command::Stab { state } => {
            let space = stabilizer_space(&load_sym(state, c.tol)?, c.tol)?;
            to_json(&json!({ "dimension": space.dimension(), "basis": space.basis }))
        }
        Command::Symmetrize { state, matrices } => {
            let psi = load_sym(state, c.tol)?;
            let ops = matrices.iter().map(|p| read_matrix(p)).collect::<Result<Vec<CMatrix>>>()?;
            to_json(&symmetrize_locals(&psi, &ops, c.tol, c.cluster_tol)?)
        }
        Command::Jordan { matrix } => {
            let r = jordan_signature(&read_matrix(matrix)?, c.tol, c.cluster_tol)?;
            let eigenvalues: Vec<_> = r.eigenvalues.iter().map(|z| json!({ "re": z.re, "im": z.im })).collect();
            to_json(&json!({
                "signature": r.signature,
                "eigenvalues": eigenvalues,
                "rank_sequences": r.rank_sequences,
                "repaired": r.repaired,
            }))
        }
        Command::Root { matrix, order } => {
            let x = read_matrix(matrix)?;
            to_json(&nth_root(&x, *order, &Branch::Principal, c.tol, c.cluster_tol)?.root)
        }
        Command::CheckSym { state } => {
            let check = match read_state(state)? {
                State::Sym(_) => json!({ "symmetric": true, "residual": 0.0 }),
                State::Full(f) => {
                    let r = is_symmetric(&f, c.tol);
                    json!({ "symmetric": r.symmetric, "residual": r.residual })
                }
            };
            to_json(&check)
        }
        Command::Apply { state, matrix, site } => {
            let m = read_matrix(matrix)?;
            let input = read_state(state)?;
            match site {
                None => {
                    let s = match input {
                        State::Sym(s) => s,
                        State::Full(f) => full_to_sym(&f, c.tol)?,
                    };
                    finish_state(tensor_power_apply(&s, &m)?, c.normalize)?
                }
                Some(k) => {
                    let f = match input {
                        State::Sym(s) => sym_to_full(&s)?,
                        State::Full(f) => f,
                    };
                    let mut out = apply_site(&f, &m, *k)?;
                    if c.normalize {
                        let norm = out.norm();
                        if norm == 0.0 {
                            return Err(Error::ZeroState.into());
                        }
                        out.amplitudes_mut().iter_mut().for_each(|z| *z /= norm);
                    }
                    crate::io::state_to_json(&State::Full(out))
                }
            }
        }
        Command::Count { d } => {
            #[derive(Serialize)]
            struct Counts {
                signatures: u128,
                unique_classes: u128,
            }
            to_json(&Counts {
                signatures: count_signatures(*d),
                unique_classes: count_unique_classes(*d),
            })
        }
    };
    Ok(text)
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = write!(sink, "{rendered}");
            return code;
        }
    };
    match execute(&cli) {
        Ok(text) => {
            let written = match &cli.config.out {
                Some(path) => write_text(path, &format!("{text}\n")),
                None => writeln!(stdout, "{text}").map_err(|e| Error::Format(e.to_string())),
            };
            match written {
                Ok(()) => 0,
                Err(e) => {
                    let _ = writeln!(stderr, "error: {e}");
                    2
                }
            }
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            1
        }
        Err(Failure::Failed(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}
