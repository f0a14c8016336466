//! Subcommand definitions and their execution. [`run`] returns the text to
//! print and the exit code instead of printing, so tests can call it.

use clap::{Args, Parser, Subcommand, ValueEnum};
use freetest::autos::{whitehead_minimize, OracleError};
use freetest::axes::{overlap, AxisError, OverlapCount};
use freetest::certify::{squares_word, Certificate, CertifyError, Verdict};
use freetest::whgraph::WhiteheadGraph;
use freetest::words::{parse_word, CyclicWord, ParseError, Word};
use serde::Serialize;
use serde_json::json;

use crate::config::{OutputFormat, RunConfig, SCHEMA};
use crate::corpus::{run_corpus, CorpusError, Count};
use crate::suites::{verify_paper, SuiteSizes};

pub const EXIT_TRUE: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_UNDECIDED: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "freetest",
    version,
    about = "Words, Whitehead graphs, axes and non-simplicity certificates in free groups"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Rank of the free group (default: largest generator index used)
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..=127))]
    pub rank: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    #[arg(long, global = true, env = "FREETEST_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Cap on classes visited by the simplicity oracle
    #[arg(long, global = true, env = "FREETEST_ORACLE_CAP", default_value_t = 1_000_000,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub oracle_cap: u64,
    /// Half-width of the axis scan (default 4(|g|+|h|)+8)
    #[arg(long, global = true, env = "FREETEST_OVERLAP_CAP", value_parser = clap::value_parser!(u64).range(1..))]
    pub overlap_cap: Option<u64>,
    /// Bound on |k| when looking for a power witness (default |w|+2)
    #[arg(long, global = true, env = "FREETEST_K_BOUND", value_parser = clap::value_parser!(u64).range(1..))]
    pub k_bound: Option<u64>,
    #[arg(long, global = true, env = "FREETEST_JOBS", default_value_t = 1,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: u64,
}

impl GlobalArgs {
    pub fn config(&self) -> RunConfig {
        RunConfig {
            rank: self.rank.map(|r| r as usize),
            format: self.format,
            seed: self.seed,
            oracle_cap: self.oracle_cap as usize,
            overlap_cap: self.overlap_cap.map(|c| c as usize),
            k_bound: self.k_bound.map(|k| k as usize),
            jobs: self.jobs as usize,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleChoice {
    Auto,
    Theorem,
    Squares,
    Commutators,
    Oracle,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Freely reduce a word
    Reduce { word: String },
    /// Split a word as t·c·t⁻¹ with c cyclically reduced
    CyclicReduce { word: String },
    /// Whitehead graph of the cyclic reduction
    WhGraph {
        word: String,
        #[arg(long, conflicts_with = "json")]
        dot: bool,
        #[arg(long)]
        json: bool,
    },
    /// Cut vertices of the Whitehead graph
    CutVertices { word: String },
    /// Whether the word lies in a proper free factor
    IsSimple { word: String },
    /// Shorten the cyclic word by Whitehead moves until no move helps
    Minimize { word: String },
    /// Common vertices of the axes of two elements
    AxisOverlap { g: String, h: String },
    /// Try to certify that a word is not simple
    Certify {
        word: String,
        /// Pivot for the overlap rule (default x1²…xr²)
        #[arg(long)]
        pivot: Option<String>,
        #[arg(long, value_enum, default_value_t = RuleChoice::Auto)]
        rule: RuleChoice,
    },
    /// Statistics over random or all cyclically reduced words
    Corpus {
        #[arg(long = "length")]
        length: usize,
        /// A sample size, or `all` for every word of that length
        #[arg(long, default_value = "1000")]
        count: Count,
    },
    /// Run the regression suites at the given ranks
    VerifyPaper {
        /// Ranks to check (repeatable; default 2)
        #[arg(long = "ranks", value_delimiter = ',')]
        ranks: Vec<usize>,
        #[arg(long, default_value_t = SuiteSizes::default().graph_samples)]
        graph_samples: usize,
        #[arg(long, default_value_t = SuiteSizes::default().oracle_samples)]
        oracle_samples: usize,
        #[arg(long, default_value_t = SuiteSizes::default().oracle_max_len)]
        oracle_max_len: usize,
        /// Shorthand for --format json
        #[arg(long)]
        json: bool,
    },
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String, code: i32) -> Outcome {
        Outcome {
            stdout,
            stderr: String::new(),
            code,
        }
    }

    fn input_error(message: impl std::fmt::Display) -> Outcome {
        Outcome {
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
            code: EXIT_INPUT,
        }
    }
}

#[derive(Serialize)]
struct Tagged<'a, T: Serialize> {
    schema: u32,
    #[serde(flatten)]
    body: &'a T,
}

fn to_json<T: Serialize>(body: &T) -> String {
    let mut s = serde_json::to_string_pretty(&Tagged { schema: SCHEMA, body }).expect("serializable");
    s.push('\n');
    s
}

/// For reports that already carry their own `schema` field.
fn report_json<T: Serialize>(report: &T) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("serializable");
    s.push('\n');
    s
}

fn parse_one(text: &str, rank: Option<usize>) -> Result<Word, ParseError> {
    parse_word(text, rank)
}

/// Parses several words at one common rank: the override if given, else
/// the largest rank any of them needs.
fn parse_many(texts: &[&str], rank: Option<usize>) -> Result<Vec<Word>, ParseError> {
    let rank = match rank {
        Some(r) => r,
        None => {
            let mut r = 1;
            for t in texts {
                r = r.max(parse_word(t, None)?.rank());
            }
            r
        }
    };
    texts.iter().map(|t| parse_word(t, Some(rank))).collect()
}

fn bool_code(b: bool) -> i32 {
    if b {
        EXIT_TRUE
    } else {
        EXIT_FALSE
    }
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::NonSimpleCertified => EXIT_TRUE,
        Verdict::HypothesisFailed => EXIT_FALSE,
        Verdict::Undecided => EXIT_UNDECIDED,
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let config = cli.global.config();
    match execute(&cli.command, &config) {
        Ok(out) => out,
        Err(message) => Outcome::input_error(message),
    }
}

fn execute(command: &Command, config: &RunConfig) -> Result<Outcome, String> {
    let json = config.format == OutputFormat::Json;
    let err = |e: &dyn std::fmt::Display| e.to_string();
    match command {
        Command::Reduce { word } => {
            let w = parse_one(word, config.rank).map_err(|e| err(&e))?;
            Ok(Outcome::ok(
                if json {
                    to_json(&json!({"rank": w.rank(), "reduced": w, "length": w.len()}))
                } else {
                    format!("{w}\n")
                },
                EXIT_TRUE,
            ))
        }
        Command::CyclicReduce { word } => {
            let w = parse_one(word, config.rank).map_err(|e| err(&e))?;
            let (t, core) = w.cyclic_reduce();
            Ok(Outcome::ok(
                if json {
                    to_json(&json!({
                        "rank": w.rank(),
                        "conjugator": t,
                        "core": core.as_word(),
                        "canonical": core.canonical(),
                    }))
                } else {
                    format!("conjugator: {t}\ncore: {}\n", core.as_word())
                },
                EXIT_TRUE,
            ))
        }
        Command::WhGraph {
            word,
            dot,
            json: as_json,
        } => {
            let w = parse_one(word, config.rank).map_err(|e| err(&e))?;
            let g = WhiteheadGraph::build(&w);
            let format = if *dot {
                OutputFormat::Dot
            } else if *as_json {
                OutputFormat::Json
            } else {
                config.format
            };
            let out = match format {
                OutputFormat::Dot => g.to_dot(),
                OutputFormat::Json => to_json(&g.to_json()),
                OutputFormat::Text => g
                    .edges()
                    .iter()
                    .map(|(a, b)| format!("{} -- {}\n", a.vertex_name(), b.vertex_name()))
                    .collect(),
            };
            Ok(Outcome::ok(out, EXIT_TRUE))
        }
        Command::CutVertices { word } => {
            let w = parse_one(word, config.rank).map_err(|e| err(&e))?;
            let g = WhiteheadGraph::build(&w);
            let cuts: Vec<String> = g.cut_vertices().into_iter().map(|v| v.vertex_name()).collect();
            Ok(Outcome::ok(
                if json {
                    to_json(&json!({"rank": g.rank(), "cut_vertices": cuts, "connected": g.is_connected()}))
                } else {
                    format!("{}\n", cuts.join(" "))
                },
                EXIT_TRUE,
            ))
        }
        Command::IsSimple { word } => {
            let w = parse_one(word, config.rank).map_err(|e| err(&e))?;
            let oracle = config.certifier();
            Ok(match oracle.oracle().is_simple(&w) {
                Ok(simple) => Outcome::ok(
                    if json {
                        to_json(&json!({"word": w, "simple": simple}))
                    } else {
                        format!("{simple}\n")
                    },
                    bool_code(simple),
                ),
                Err(OracleError::Undecided { visited, budget }) => Outcome::ok(
                    if json {
                        to_json(&json!({"word": w, "simple": "undecided", "visited": visited, "budget": budget}))
                    } else {
                        format!("undecided (visited {visited} classes, cap {budget})\n")
                    },
                    EXIT_UNDECIDED,
                ),
            })
        }
        Command::Minimize { word } => {
            let w = parse_one(word, config.rank).map_err(|e| err(&e))?;
            let c = CyclicWord::of(&w);
            let (min, moves) = whitehead_minimize(&c);
            let moves: Vec<String> = moves.iter().map(|m| m.to_string()).collect();
            Ok(Outcome::ok(
                if json {
                    to_json(&json!({
                        "input": w,
                        "minimal": min.as_word(),
                        "length": min.len(),
                        "moves": moves,
                    }))
                } else {
                    let mut s = format!("{}\nlength {} -> {}\n", min.as_word(), c.len(), min.len());
                    for m in &moves {
                        s.push_str(&format!("  {m}\n"));
                    }
                    s
                },
                EXIT_TRUE,
            ))
        }
        Command::AxisOverlap { g, h } => {
            let ws = parse_many(&[g, h], config.rank).map_err(|e| err(&e))?;
            match overlap(&ws[0], &ws[1], config.overlap_cap) {
                Ok(ov) => {
                    let edges = ov.edge_length().unwrap_or(OverlapCount::Finite(0));
                    Ok(Outcome::ok(
                        if json {
                            let mut v = json!({"overlap": ov.count, "edges": edges});
                            if let Some((p, q)) = &ov.endpoints {
                                v["endpoints"] = json!([p, q]);
                            }
                            to_json(&v)
                        } else {
                            let mut s = format!("{}\n", ov.count);
                            if let Some((p, q)) = &ov.endpoints {
                                s.push_str(&format!("endpoints: {p} {q}\n"));
                            }
                            s
                        },
                        EXIT_TRUE,
                    ))
                }
                Err(e @ AxisError::WindowExhausted { .. }) => Ok(Outcome {
                    stdout: String::new(),
                    stderr: format!("undecided: {e}\n"),
                    code: EXIT_UNDECIDED,
                }),
                Err(e) => Err(e.to_string()),
            }
        }
        Command::Certify { word, pivot, rule } => {
            let mut texts = vec![word.as_str()];
            if let Some(p) = pivot {
                texts.push(p);
            }
            let ws = parse_many(&texts, config.rank).map_err(|e| err(&e))?;
            let a = &ws[0];
            let c = config.certifier();
            let cert: Result<Certificate, CertifyError> = match rule {
                RuleChoice::Auto if ws.len() == 1 => c.auto(a),
                RuleChoice::Auto | RuleChoice::Theorem => match ws.get(1) {
                    Some(p) => c.via_theorem(p, a),
                    None => squares_word(a.rank()).and_then(|u| c.via_theorem(&u, a)),
                },
                RuleChoice::Squares => c.squares_subword(a),
                RuleChoice::Commutators => c.commutator_subword(a),
                RuleChoice::Oracle => Ok(c.via_oracle(a)),
            };
            let cert = cert.map_err(|e| err(&e))?;
            let code = verdict_code(cert.verdict);
            Ok(Outcome::ok(
                if json { to_json(&cert) } else { certificate_text(&cert) },
                code,
            ))
        }
        Command::Corpus { length, count } => {
            let rank = config.rank.unwrap_or(2);
            let report = run_corpus(config, rank, *length, *count).map_err(|e: CorpusError| e.to_string())?;
            let code = bool_code(report.violations == 0);
            Ok(Outcome::ok(
                if json {
                    report_json(&report)
                } else {
                    let mut s = format!(
                        "rank {} length {} ({}, {} words)\nsimple {} non-simple {} undecided {}\n",
                        report.rank,
                        report.length,
                        report.mode,
                        report.words,
                        report.simple,
                        report.non_simple,
                        report.undecided
                    );
                    for (rule, n) in &report.certified {
                        s.push_str(&format!(
                            "certified {rule}: {n} ({:.4})\n",
                            report.fraction_certified[rule]
                        ));
                    }
                    s.push_str(&format!("violations: {}\n", report.violations));
                    s
                },
                code,
            ))
        }
        Command::VerifyPaper {
            ranks,
            graph_samples,
            oracle_samples,
            oracle_max_len,
            json: as_json,
        } => {
            let mut ranks = ranks.clone();
            if ranks.is_empty() {
                ranks.push(config.rank.unwrap_or(2));
            }
            let sizes = SuiteSizes {
                graph_samples: *graph_samples,
                oracle_samples: *oracle_samples,
                oracle_max_len: *oracle_max_len,
            };
            let report = verify_paper(config, &ranks, sizes).map_err(|e| err(&e))?;
            let code = bool_code(report.passed);
            Ok(Outcome::ok(
                if json || *as_json {
                    report_json(&report)
                } else {
                    let mut s = String::new();
                    for (name, passed) in &report.checks {
                        s.push_str(&format!("{} {name}\n", if *passed { "PASS" } else { "FAIL" }));
                    }
                    for note in &report.skipped {
                        s.push_str(&format!("SKIP {note}\n"));
                    }
                    s
                },
                code,
            ))
        }
    }
}

fn certificate_text(cert: &Certificate) -> String {
    let mut s = format!(
        "subject: {}\nverdict: {}\nrule: {}\n",
        cert.subject,
        json!(cert.verdict).as_str().unwrap_or_default(),
        json!(cert.rule).as_str().unwrap_or_default()
    );
    if let Some(check) = cert.failed {
        s.push_str(&format!("failed: {}\n", json!(check).as_str().unwrap_or_default()));
    }
    let trail = serde_json::to_value(&cert.trail).expect("serializable");
    if let Some(map) = trail.as_object() {
        for (k, v) in map {
            let v = match v {
                serde_json::Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            s.push_str(&format!("  {k}: {v}\n"));
        }
    }
    s
}
