//! The `silt` command line tool.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::agreement::ginzburg_agreement;
use crate::algebra::{DgQuiver, VertexId};
use crate::compare::{equal_under, iso_search, IsoResult, ScalarDomain, DEFAULT_NODE_CAP};
use crate::error::{Error, Result};
use crate::format::{self, Document, ParseOptions};
use crate::mutation::{mutate, mutate_right};
use crate::potential::{
    classical_to_higher, ginzburg3, higher_ginzburg, higher_qp_mutate, qp_mutate, verify_derivative_lemma,
    QuiverWithPotential,
};
use crate::reduction::{simplify, DEFAULT_MAX_STEPS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "silt", version, about = "Silting mutation and Ginzburg dg quivers")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that the differential squares to zero (for qp files: on the Ginzburg dg quiver).
    Check { file: PathBuf },
    /// Silting-mutate a dg quiver at a vertex.
    Mutate {
        #[arg(short = 'i', long = "vertex")]
        vertex: u32,
        file: PathBuf,
        /// Mutate on the other side (through the opposite quiver).
        #[arg(long)]
        right: bool,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Cancel pairs `(rho, d rho)` until none are left.
    Simplify {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: usize,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Ginzburg dg quiver of a quiver with potential.
    Ginzburg {
        file: PathBuf,
        /// Only 3 is accepted for classical input; it selects the higher construction.
        #[arg(long)]
        dim: Option<i64>,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Mutate a quiver with potential.
    QpMutate {
        #[arg(short = 'i', long = "vertex")]
        vertex: u32,
        file: PathBuf,
        #[arg(long)]
        dim: Option<i64>,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Compare two dg quivers under a given correspondence or by search.
    Compare {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, conflicts_with = "search")]
        map: Option<PathBuf>,
        #[arg(long, value_enum)]
        search: Option<SearchMode>,
        #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
        node_cap: usize,
    },
    /// Compare the cyclic derivatives of the mutated potential with their predicted values.
    VerifyLemma {
        #[arg(short = 'i', long = "vertex")]
        vertex: u32,
        file: PathBuf,
    },
    /// Mutate the Ginzburg dg quiver, cancel, and compare with the Ginzburg dg quiver of the mutated quiver with potential.
    MutateVerifyGinzburg {
        #[arg(short = 'i', long = "vertex")]
        vertex: u32,
        file: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SearchMode {
    Signs,
    Field,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Semantic {
        line: 0,
        message: format!("cannot read {}: {e}", path.display()),
    })
}

fn read_doc(path: &Path, options: ParseOptions) -> Result<Document> {
    format::parse(&read(path)?, options)
}

fn read_dg(path: &Path) -> Result<DgQuiver> {
    format::parse_dg_quiver(&read(path)?, ParseOptions::default())
}

fn read_qp(path: &Path, dim: Option<i64>) -> Result<QuiverWithPotential> {
    let qp = format::parse_qp(&read(path)?)?;
    match dim {
        None => Ok(qp),
        Some(d) if d == qp.dimension() && !qp.is_classical() => Ok(qp),
        Some(3) if qp.is_classical() => classical_to_higher(&qp),
        Some(d) => Err(Error::InvalidPairing(format!(
            "--dim {d} does not match the file (dimension {})",
            qp.dimension()
        ))),
    }
}

fn emit(out: &mut dyn Write, output: Option<&Path>, text: &str) -> Result<()> {
    let io = |e: std::io::Error| Error::Semantic {
        line: 0,
        message: e.to_string(),
    };
    match output {
        Some(p) => fs::write(p, text).map_err(io),
        None => out.write_all(text.as_bytes()).map_err(io),
    }
}

/// Runs the tool and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
            } else {
                let _ = out.write_all(text.as_bytes());
            }
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let line = |out: &mut dyn Write, s: String| emit(out, None, &(s + "\n"));
    match command {
        Command::Check { file } => {
            let failures = match read_doc(&file, ParseOptions { check_d_squared: false })? {
                Document::DgQuiver(dg) => dg
                    .check_d_squared()
                    .failures
                    .into_iter()
                    .map(|(a, r)| format!("d² is nonzero on `{a}`: {r}"))
                    .collect(),
                Document::Qp(qp) => {
                    let built = if qp.is_classical() {
                        ginzburg3(&qp)
                    } else {
                        higher_ginzburg(&qp)
                    };
                    match built {
                        Ok(_) => Vec::new(),
                        Err(e @ (Error::InvalidPotential(_) | Error::DSquaredNonzero { .. })) => vec![e.to_string()],
                        Err(e) => return Err(e),
                    }
                }
            };
            if failures.is_empty() {
                line(out, "ok".into())?;
                return Ok(EXIT_OK);
            }
            for f in failures {
                line(out, f)?;
            }
            Ok(EXIT_FAIL)
        }
        Command::Mutate {
            vertex,
            file,
            right,
            output,
        } => {
            let dg = read_dg(&file)?;
            let m = if right {
                mutate_right(&dg, VertexId(vertex))?
            } else {
                mutate(&dg, VertexId(vertex))?
            };
            emit(out, output.as_deref(), &format::serialize_dg_quiver(&m))?;
            Ok(EXIT_OK)
        }
        Command::Simplify {
            file,
            max_steps,
            output,
        } => {
            let s = simplify(&read_dg(&file)?, max_steps)?;
            for w in &s.warnings {
                let _ = writeln!(err, "warning: {w}");
            }
            emit(out, output.as_deref(), &format::serialize_dg_quiver(&s.dg))?;
            Ok(EXIT_OK)
        }
        Command::Ginzburg { file, dim, output } => {
            let qp = read_qp(&file, dim)?;
            let g = if qp.is_classical() {
                ginzburg3(&qp)?
            } else {
                higher_ginzburg(&qp)?
            };
            emit(out, output.as_deref(), &format::serialize_dg_quiver(&g))?;
            Ok(EXIT_OK)
        }
        Command::QpMutate {
            vertex,
            file,
            dim,
            output,
        } => {
            let qp = read_qp(&file, dim)?;
            let m = if qp.is_classical() {
                qp_mutate(&qp, VertexId(vertex))?
            } else {
                higher_qp_mutate(&qp, VertexId(vertex))?
            };
            emit(out, output.as_deref(), &format::serialize_qp(&m))?;
            Ok(EXIT_OK)
        }
        Command::Compare {
            left,
            right,
            map,
            search,
            node_cap,
        } => {
            let (a, b) = (read_dg(&left)?, read_dg(&right)?);
            if let Some(map) = map {
                let map = format::parse_map(&read(&map)?)?;
                return Ok(match equal_under(&map, &a, &b)? {
                    None => {
                        line(out, "equal under the given correspondence".into())?;
                        EXIT_OK
                    }
                    Some(m) => {
                        line(
                            out,
                            format!(
                                "mismatch at `{}`: transported {} but expected {}",
                                m.arrow,
                                m.found.render(b.quiver()),
                                m.expected.render(b.quiver())
                            ),
                        )?;
                        EXIT_FAIL
                    }
                });
            }
            let domain = match search.unwrap_or(SearchMode::Signs) {
                SearchMode::Signs => ScalarDomain::Signs,
                SearchMode::Field => ScalarDomain::Field,
            };
            Ok(match iso_search(&a, &b, domain, node_cap)? {
                IsoResult::Found(map) => {
                    line(out, "isomorphic".into())?;
                    emit(out, None, &format::serialize_map(&map))?;
                    EXIT_OK
                }
                IsoResult::NotIsomorphic => {
                    line(out, "not isomorphic".into())?;
                    EXIT_FAIL
                }
                IsoResult::Inconclusive(why) => {
                    line(out, format!("inconclusive: {why}"))?;
                    EXIT_INCONCLUSIVE
                }
            })
        }
        Command::VerifyLemma { vertex, file } => {
            let mut qp = read_qp(&file, None)?;
            if qp.is_classical() {
                qp = classical_to_higher(&qp)?;
            }
            let report = verify_derivative_lemma(&qp, VertexId(vertex))?;
            for c in &report.checks {
                if c.passed() {
                    line(out, format!("formula {} at `{}`: ok", c.formula, c.arrow))?;
                } else {
                    line(
                        out,
                        format!(
                            "formula {} at `{}`: MISMATCH\n  cyclic derivative: {}\n  predicted:         {}",
                            c.formula, c.arrow, c.lhs, c.rhs
                        ),
                    )?;
                }
            }
            let bad = report.mismatches().count();
            line(out, format!("{} checks, {bad} mismatches", report.checks.len()))?;
            Ok(if bad == 0 { EXIT_OK } else { EXIT_FAIL })
        }
        Command::MutateVerifyGinzburg { vertex, file } => {
            let qp = read_qp(&file, None)?;
            let a = ginzburg_agreement(&qp, VertexId(vertex))?;
            for (rho, psi) in &a.cancelled {
                line(out, format!("cancelled ({rho}, {psi})"))?;
            }
            let negated: Vec<String> = a.negated().iter().map(ToString::to_string).collect();
            line(out, format!("negated: {}", negated.join(" ")))?;
            if a.passed() {
                line(out, "match".into())?;
                return Ok(EXIT_OK);
            }
            let m = a.mismatch.as_ref().expect("failed comparison");
            line(
                out,
                format!(
                    "explicit correspondence fails at `{}`: transported {} but expected {}",
                    m.arrow, m.found, m.expected
                ),
            )?;
            // the explicit renaming failed; an isomorphism may still exist
            Ok(
                match iso_search(&a.reduced, &a.expected, ScalarDomain::Signs, DEFAULT_NODE_CAP)? {
                    IsoResult::Found(map) => {
                        line(out, "match by search".into())?;
                        emit(out, None, &format::serialize_map(&map))?;
                        EXIT_OK
                    }
                    IsoResult::NotIsomorphic => {
                        line(out, "no match".into())?;
                        EXIT_FAIL
                    }
                    IsoResult::Inconclusive(why) => {
                        line(out, format!("inconclusive: {why}"))?;
                        EXIT_INCONCLUSIVE
                    }
                },
            )
        }
    }
}
