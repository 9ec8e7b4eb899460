//! Command-line front end. [`run`] returns the exit code and the text to
//! print, so it can be driven from tests.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::classify::{
    decide_isomorphism_bounded, decide_morita, decide_morita_via_k1, dichotomy, IsoOutcome,
    MoritaOutcome,
};
use crate::error::{Error, Result};
use crate::format::{parse_graph, parse_matrix, parse_script, print_graph};
use crate::graph::{Graph, VertexSet, DEFAULT_ISO_VERTEX_BOUND};
use crate::groups::{FieldDescriptor, DEFAULT_AUT_BOUND};
use crate::intlinalg::{snf, IntMatrix};
use crate::ktheory::{invariants, k2_torsion_status};
use crate::moves::{apply_script, search_move_equivalence, verify_bridge, MoveScript, SearchConfig, SearchOutcome};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_OPEN: i32 = 2;
pub const EXIT_NOT_APPLICABLE: i32 = 3;
pub const EXIT_INPUT: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "leavitt", version, about = "Invariants, moves and classification for Leavitt path algebras")]
struct Cli {
    /// File of `key = value` bounds: aut_bound, iso_vertex_bound, search_depth, max_split.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct FieldArg {
    /// Q, R, C, F<q>, algclosed, algclosed:p=<p>, nfq or generic.
    #[arg(long, default_value = "Q")]
    field: FieldDescriptor,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a graph and report its vertex classes and simplicity.
    Check {
        graph: PathBuf,
        #[arg(long)]
        porcelain: bool,
    },
    /// Print the invariant bundle of a graph.
    Invariants {
        graph: PathBuf,
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        porcelain: bool,
    },
    /// Smith normal form of an integer matrix.
    Snf {
        matrix: PathBuf,
        /// Also print U and V with U*M*V = D.
        #[arg(long)]
        transforms: bool,
        #[arg(long)]
        porcelain: bool,
    },
    /// Run a move script and print the resulting graph.
    Apply {
        graph: PathBuf,
        script: PathBuf,
        /// Check after every step that the basic invariants are unchanged.
        #[arg(long)]
        check: bool,
        #[arg(long)]
        porcelain: bool,
    },
    /// Check that two scripts carry two graphs to isomorphic graphs.
    Bridge {
        graph1: PathBuf,
        script1: PathBuf,
        graph2: PathBuf,
        script2: PathBuf,
        #[arg(long)]
        porcelain: bool,
    },
    /// Decide Morita equivalence or isomorphism.
    Classify {
        #[command(subcommand)]
        question: Question,
    },
    /// Whether K2 of the algebra is a torsion group.
    K2Status {
        graph: PathBuf,
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        porcelain: bool,
    },
    /// Bounded search for a bridge of moves between two graphs.
    Search {
        graph1: PathBuf,
        graph2: PathBuf,
        /// Maximum number of moves on each side.
        #[arg(long)]
        depth: Option<usize>,
        /// Largest piece split off a multiplicity when enumerating partitions.
        #[arg(long)]
        max_split: Option<u64>,
        #[arg(long)]
        porcelain: bool,
    },
}

#[derive(Subcommand, Debug)]
enum Question {
    /// Are the two algebras Morita equivalent.
    Morita {
        graph1: PathBuf,
        graph2: PathBuf,
        #[command(flatten)]
        field: FieldArg,
        /// Compare K0 together with algebraic K1.
        #[arg(long)]
        via_k1: bool,
        #[arg(long)]
        porcelain: bool,
    },
    /// Are the two algebras isomorphic.
    Iso {
        graph1: PathBuf,
        graph2: PathBuf,
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        porcelain: bool,
    },
}

/// Bounds read from the `--config` file.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub aut_bound: usize,
    pub iso_vertex_bound: usize,
    pub search_depth: usize,
    pub max_split: u64,
}

impl Default for Config {
    fn default() -> Self {
        let s = SearchConfig::default();
        Config {
            aut_bound: DEFAULT_AUT_BOUND,
            iso_vertex_bound: DEFAULT_ISO_VERTEX_BOUND,
            search_depth: s.search_depth,
            max_split: s.max_split,
        }
    }
}

impl Config {
    pub fn parse(text: &str) -> Result<Config> {
        toml::from_str(text).map_err(|e| Error::input(format!("config: {}", e.message())))
    }

    fn search(&self) -> SearchConfig {
        SearchConfig {
            iso_vertex_bound: self.iso_vertex_bound,
            search_depth: self.search_depth,
            max_split: self.max_split,
            ..SearchConfig::default()
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::input(format!("{}: {e}", path.display())))
}

fn in_file<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::input(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Graph> {
    in_file(path, parse_graph(&read(path)?))
}

fn load_script(path: &Path) -> Result<MoveScript> {
    in_file(path, parse_script(&read(path)?))
}

fn load_matrix(path: &Path) -> Result<IntMatrix> {
    in_file(path, parse_matrix(&read(path)?))
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_YES };
            return (code, e.to_string());
        }
    };
    match execute(cli) {
        Ok(out) => out,
        Err(e) => (EXIT_INPUT, format!("error: {}\n", one_line(&e.to_string()))),
    }
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn names(g: &Graph, set: &VertexSet) -> String {
    set.iter().map(|&v| g.name(v)).collect::<Vec<_>>().join(" ")
}

fn key_values(pairs: &[(&str, String)]) -> String {
    pairs.iter().map(|(k, v)| format!("{}\n", format!("{k}: {v}").trim_end())).collect()
}

fn execute(cli: Cli) -> Result<(i32, String)> {
    let cfg = match &cli.config {
        Some(path) => in_file(path, Config::parse(&read(path)?))?,
        None => Config::default(),
    };
    Ok(match cli.command {
        Command::Check { graph, porcelain: _ } => {
            let g = load_graph(&graph)?;
            let c = g.classify_vertices();
            let s = g.simplicity();
            let out = key_values(&[
                ("vertices", g.len().to_string()),
                ("regular", names(&g, &c.regular)),
                ("sinks", names(&g, &c.sinks)),
                ("infinite_emitters", names(&g, &c.infinite_emitters)),
                ("sources", names(&g, &c.sources)),
                ("cofinal", s.cofinal.to_string()),
                ("condition_l", s.condition_l.to_string()),
                ("simple", s.is_simple().to_string()),
                ("type", dichotomy(&g).to_string()),
            ]);
            (EXIT_YES, out)
        }
        Command::Invariants {
            graph,
            field,
            porcelain: _,
        } => {
            let g = load_graph(&graph)?;
            (EXIT_YES, key_values(&invariants(&g, field.field).fields()))
        }
        Command::Snf {
            matrix,
            transforms,
            porcelain: _,
        } => {
            let m = load_matrix(&matrix)?;
            let r = snf(&m);
            let d: Vec<String> = (0..m.rows().min(m.cols())).map(|i| r.diag(i).to_string()).collect();
            let mut out = format!("d: {}\n", d.join(" "));
            if transforms {
                write!(out, "u:\n{}v:\n{}", r.u, r.v).unwrap();
            }
            (EXIT_YES, out)
        }
        Command::Apply {
            graph,
            script,
            check,
            porcelain: _,
        } => {
            let g = load_graph(&graph)?;
            let s = load_script(&script)?;
            let run = apply_script(&g, &s, check)?;
            (EXIT_YES, print_graph(&run.graph))
        }
        Command::Bridge {
            graph1,
            script1,
            graph2,
            script2,
            porcelain: _,
        } => {
            let (g1, s1) = (load_graph(&graph1)?, load_script(&script1)?);
            let (g2, s2) = (load_graph(&graph2)?, load_script(&script2)?);
            if verify_bridge(&g1, &s1, &g2, &s2, cfg.iso_vertex_bound)? {
                (EXIT_YES, "bridge: verified\n".into())
            } else {
                (EXIT_NO, "bridge: endpoints not isomorphic\n".into())
            }
        }
        Command::Classify { question } => classify(question, &cfg)?,
        Command::K2Status {
            graph,
            field,
            porcelain: _,
        } => {
            let g = load_graph(&graph)?;
            (EXIT_YES, format!("k2: {}\n", k2_torsion_status(&g, field.field)))
        }
        Command::Search {
            graph1,
            graph2,
            depth,
            max_split,
            porcelain: _,
        } => {
            let (g1, g2) = (load_graph(&graph1)?, load_graph(&graph2)?);
            let mut sc = cfg.search();
            sc.search_depth = depth.unwrap_or(sc.search_depth);
            sc.max_split = max_split.unwrap_or(sc.max_split);
            match search_move_equivalence(&g1, &g2, &sc)? {
                SearchOutcome::Found(s1, s2) => {
                    (EXIT_YES, format!("outcome: Found\n[first]\n{s1}[second]\n{s2}"))
                }
                SearchOutcome::NotFoundWithinBounds => (EXIT_OPEN, "outcome: NotFoundWithinBounds\n".into()),
            }
        }
    })
}

fn verdict_text(outcome: String, clause: String, reason: &str, porcelain: bool) -> String {
    if porcelain {
        format!("outcome: {outcome}\nreason: {reason}\n")
    } else {
        format!("outcome: {outcome}\nclause: {clause}\nreason: {reason}\n")
    }
}

fn classify(q: Question, cfg: &Config) -> Result<(i32, String)> {
    Ok(match q {
        Question::Morita {
            graph1,
            graph2,
            field,
            via_k1,
            porcelain,
        } => {
            let (g1, g2) = (load_graph(&graph1)?, load_graph(&graph2)?);
            let v = if via_k1 {
                decide_morita_via_k1(&g1, &g2, field.field)
            } else {
                decide_morita(&g1, &g2, field.field)
            };
            let code = match v.outcome {
                MoritaOutcome::Equivalent => EXIT_YES,
                MoritaOutcome::NotEquivalent => EXIT_NO,
                MoritaOutcome::OpenProblem => EXIT_OPEN,
                MoritaOutcome::NotApplicable => EXIT_NOT_APPLICABLE,
            };
            let clause = format!("{:?}", v.clause);
            (code, verdict_text(v.outcome.to_string(), clause, &v.reason, porcelain))
        }
        Question::Iso {
            graph1,
            graph2,
            field,
            porcelain,
        } => {
            let (g1, g2) = (load_graph(&graph1)?, load_graph(&graph2)?);
            let v = decide_isomorphism_bounded(&g1, &g2, field.field, cfg.aut_bound);
            let code = match v.outcome {
                IsoOutcome::Isomorphic => EXIT_YES,
                IsoOutcome::NotIsomorphic => EXIT_NO,
                IsoOutcome::OpenProblem | IsoOutcome::Undecided => EXIT_OPEN,
                IsoOutcome::NotApplicable => EXIT_NOT_APPLICABLE,
            };
            let clause = format!("{:?}", v.clause);
            (code, verdict_text(v.outcome.to_string(), clause, &v.reason, porcelain))
        }
    })
}
