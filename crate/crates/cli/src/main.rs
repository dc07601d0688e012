use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use structctl::cases::{self, CaseStudyId, Family};
use structctl::classify::{classify, exists_distinct_input_cover, is_input_accessible, Label};
use structctl::cover::{generic_dimension, PathCycleCover};
use structctl::extend::{extend_general, extend_x_network, heterogeneity_bounds};
use structctl::graph::SystemGraph;
use structctl::model::{AnyNetwork, ExtendedNetwork};
use structctl::par::Execution;
use structctl::verify::{pbh_output_test, rank_estimate, sample_realization, FieldKind, PbhMode, RankKind, Verdict};
use structctl::Error;

mod schema;

const EXIT_NEGATIVE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INPUT: u8 = 3;
const EXIT_SIZE: u8 = 4;

#[derive(Parser)]
#[command(name = "structctl", version, about = "Structural (output) controllability of network systems")]
struct Cli {
    /// Write the JSON report to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for randomized trials; 1 runs them sequentially.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Print the JSON schemas of all documents and reports, then exit.
    #[arg(long)]
    schema: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Accessibility, generic dimension, witness cover and class label.
    Analyze { net: String },
    /// Class label with diagnostics.
    Classify { net: String },
    /// Synthesize a higher-order extension.
    Extend {
        net: String,
        #[arg(long, value_enum, default_value = "general")]
        mode: ExtendMode,
        /// Cover JSON to extend from; computed when omitted.
        #[arg(long)]
        cover: Option<PathBuf>,
    },
    /// Bounds on the number of higher-order subsystems for Y-networks.
    Bounds {
        net: String,
        #[arg(long)]
        nmax: usize,
    },
    /// Emit a generated network document.
    Gen {
        family: String,
        #[arg(long, default_value_t = 0)]
        height: usize,
        #[arg(long)]
        extended: bool,
    },
    /// Randomized rank estimates or the eigenvalue test on a realization.
    Verify {
        net: String,
        #[arg(long, value_enum, default_value = "structural")]
        what: What,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Defaults to prime for rank estimates and rational for the eigenvalue test.
        #[arg(long)]
        field: Option<String>,
        /// Exit with status 1 unless the result is positive.
        #[arg(long)]
        expect_controllable: bool,
    },
    /// Graphviz rendering of the (expanded) graph.
    ExportDot { net: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum ExtendMode {
    X,
    General,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum What {
    Structural,
    Output,
    Pbh,
}

/// Failure with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SizeLimit { .. } => EXIT_SIZE,
            Error::Parameter(_) => EXIT_USAGE,
            Error::Internal(_) | Error::Numeric(_) => EXIT_NEGATIVE,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: e.to_string(),
        }
    }
}

struct Input {
    text: String,
    digest: String,
}

fn read_input(path: &str) -> Result<Input, Failure> {
    let text = if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Failure {
            code: EXIT_INPUT,
            message: format!("{path}: {e}"),
        })?
    };
    let digest = format!("sha256:{}", hex::encode(Sha256::digest(text.as_bytes())));
    Ok(Input { text, digest })
}

/// What a command produced: a report object or raw text.
enum Output {
    Report { value: Value, summary: String, positive: bool },
    Text(String),
}

fn report(command: &str, input: Option<&Input>, seed: Option<u64>, result: Value) -> Value {
    json!({
        "tool": "structctl",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "seed": seed,
        "input_digest": input.map(|i| i.digest.clone()),
        "result": result,
    })
}

fn execution(jobs: Option<usize>) -> Result<Execution, Failure> {
    match jobs {
        Some(0) => Err(Failure {
            code: EXIT_USAGE,
            message: "--jobs must be at least 1".into(),
        }),
        Some(1) => Ok(Execution::Sequential),
        Some(_n) => {
            #[cfg(feature = "parallel")]
            {
                // Ignored if the global pool already exists.
                let _ = rayon::ThreadPoolBuilder::new().num_threads(_n).build_global();
            }
            Ok(Execution::Parallel)
        }
        None => Ok(Execution::Parallel),
    }
}

fn analyze(input: &Input) -> Result<Output, Failure> {
    let net = AnyNetwork::from_json_str(&input.text)?.into_extended();
    let g = SystemGraph::expanded(&net);
    let (accessible, missing) = is_input_accessible(&g);
    let label = classify(&g)?;
    let dimension = if accessible { Some(generic_dimension(&g)?) } else { None };
    let summary = match &dimension {
        Some(d) => format!("d_c = {} of {}, label {}", d.d_c, g.n_states(), label.label),
        None => format!("{} state nodes not input-accessible", missing.len()),
    };
    let positive = label.label == Label::StructurallyControllable;
    let result = json!({
        "n": g.n_states(),
        "m": g.n_inputs(),
        "accessible": accessible,
        "inaccessible": missing.iter().map(|v| v + 1).collect::<Vec<_>>(),
        "d_c": dimension.as_ref().map(|d| d.d_c),
        "structurally_controllable": dimension.as_ref().map(|d| d.is_structurally_controllable),
        "witness": dimension.as_ref().map(|d| d.witness.to_json()),
        "label": label.label.as_str(),
        "classification": label.to_json(),
    });
    Ok(Output::Report {
        value: report("analyze", Some(input), None, result),
        summary,
        positive,
    })
}

fn classify_cmd(input: &Input) -> Result<Output, Failure> {
    let net = AnyNetwork::from_json_str(&input.text)?.into_extended();
    let label = classify(&SystemGraph::expanded(&net))?;
    Ok(Output::Report {
        summary: format!("label {}", label.label),
        positive: label.label == Label::StructurallyControllable,
        value: report("classify", Some(input), None, label.to_json()),
    })
}

fn base_network(input: &Input) -> Result<structctl::StructuredNetwork, Failure> {
    match AnyNetwork::from_json_str(&input.text)? {
        AnyNetwork::Structured(n) => Ok(n),
        AnyNetwork::Extended(_) => Err(Failure {
            code: EXIT_INPUT,
            message: "expected a plain network document, got an extended one".into(),
        }),
    }
}

fn extend_cmd(input: &Input, mode: ExtendMode, cover: Option<&PathBuf>) -> Result<Output, Failure> {
    let net = base_network(input)?;
    let cover = match cover {
        Some(path) => {
            let text = fs::read_to_string(path)?;
            let value: Value = serde_json::from_str(&text).map_err(|e| Failure {
                code: EXIT_INPUT,
                message: format!("{}: {e}", path.display()),
            })?;
            Some(PathCycleCover::from_json(&value)?)
        }
        None => None,
    };
    let plan = match mode {
        ExtendMode::General => extend_general(&net, cover.as_ref())?,
        ExtendMode::X => {
            let cover = match cover {
                Some(c) => c,
                None => {
                    let g = SystemGraph::of_network(&net);
                    let label = classify(&g)?;
                    if label.label != Label::X {
                        return Err(Failure {
                            code: EXIT_NEGATIVE,
                            message: format!("network is {}, not an X-network; supply --cover", label.label),
                        });
                    }
                    exists_distinct_input_cover(&g)?.ok_or_else(|| Failure {
                        code: EXIT_NEGATIVE,
                        message: "no cover with distinct-input stems".into(),
                    })?
                }
            };
            extend_x_network(&net, &cover)?
        }
    };
    let mut result = plan.to_json();
    result["extended"] = serde_json::from_str(&plan.result.to_json_string()).expect("valid document");
    Ok(Output::Report {
        summary: format!(
            "n_hat = {}, S_hat = {}, S = {}, delta = {}",
            plan.result.n_hat(),
            plan.s_hat,
            plan.s_first_order,
            plan.delta
        ),
        positive: plan.structurally_controllable,
        value: report("extend", Some(input), None, result),
    })
}

fn bounds_cmd(input: &Input, nmax: usize) -> Result<Output, Failure> {
    let net = base_network(input)?;
    let b = heterogeneity_bounds(&net, nmax)?;
    Ok(Output::Report {
        summary: format!("{} <= S_hat_min <= {}", b.lower, b.upper),
        positive: true,
        value: report(
            "bounds",
            Some(input),
            None,
            json!({ "lower": b.lower, "upper": b.upper, "n_hat_max": b.n_hat_max, "z_size": b.z_size }),
        ),
    })
}

fn gen_cmd(family: &str, height: usize, extended: bool) -> Result<Output, Failure> {
    let family: Family = family.parse()?;
    let id = CaseStudyId::new(family, height, extended)?;
    Ok(Output::Text(cases::generate(id)?.to_json_string() + "\n"))
}

fn verify_cmd(
    input: &Input,
    what: What,
    trials: usize,
    seed: u64,
    field: Option<&str>,
    exec: Execution,
) -> Result<Output, Failure> {
    let net: ExtendedNetwork = AnyNetwork::from_json_str(&input.text)?.into_extended();
    let field: FieldKind = match field {
        Some(f) => f.parse()?,
        None if what == What::Pbh => FieldKind::Rational,
        None => FieldKind::Prime,
    };
    match what {
        What::Structural | What::Output => {
            let kind = if what == What::Output {
                RankKind::Output
            } else {
                RankKind::Controllability
            };
            let est = rank_estimate(&net, kind, field, trials, seed, exec)?;
            let mut result = est.to_json();
            result["verdict"] = json!(if est.is_full() { "pass" } else { "fail" });
            Ok(Output::Report {
                summary: format!(
                    "{} rank {} of {} ({} of {} trials full)",
                    kind.as_str(),
                    est.rank,
                    est.target,
                    est.full_trials(),
                    trials
                ),
                positive: est.is_full(),
                value: report("verify", Some(input), Some(seed), result),
            })
        }
        What::Pbh => {
            let mode = match field {
                FieldKind::Rational => PbhMode::Rational,
                FieldKind::Float => PbhMode::Float,
                FieldKind::Prime => {
                    return Err(Failure {
                        code: EXIT_USAGE,
                        message: "the eigenvalue test needs --field rational or float".into(),
                    })
                }
            };
            let sample = sample_realization(&net, field, seed);
            let r = pbh_output_test(&sample, mode)?;
            let mut result = r.to_json();
            result["realization"] = sample.to_json();
            Ok(Output::Report {
                summary: format!("eigenvalue test: {}", r.verdict.as_str()),
                positive: r.verdict == Verdict::OutputControllable,
                value: report("verify", Some(input), Some(seed), result),
            })
        }
    }
}

fn export_dot(input: &Input) -> Result<Output, Failure> {
    let net = AnyNetwork::from_json_str(&input.text)?.into_extended();
    Ok(Output::Text(SystemGraph::expanded(&net).to_dot()))
}

fn run(cli: Cli) -> Result<(Output, bool), Failure> {
    if cli.schema {
        return Ok((Output::Text(serde_json::to_string_pretty(&schema::all()).unwrap() + "\n"), false));
    }
    let Some(command) = cli.command else {
        return Err(Failure {
            code: EXIT_USAGE,
            message: "no command given; see --help".into(),
        });
    };
    let exec = execution(cli.jobs)?;
    Ok(match command {
        Command::Analyze { net } => (analyze(&read_input(&net)?)?, false),
        Command::Classify { net } => (classify_cmd(&read_input(&net)?)?, false),
        Command::Extend { net, mode, cover } => (extend_cmd(&read_input(&net)?, mode, cover.as_ref())?, false),
        Command::Bounds { net, nmax } => (bounds_cmd(&read_input(&net)?, nmax)?, false),
        Command::Gen {
            family,
            height,
            extended,
        } => (gen_cmd(&family, height, extended)?, false),
        Command::Verify {
            net,
            what,
            trials,
            seed,
            field,
            expect_controllable,
        } => (
            verify_cmd(&read_input(&net)?, what, trials, seed, field.as_deref(), exec)?,
            expect_controllable,
        ),
        Command::ExportDot { net } => (export_dot(&read_input(&net)?)?, false),
    })
}

fn emit(out: Option<&PathBuf>, text: &str) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.out.clone();
    match run(cli) {
        Ok((output, expect_positive)) => {
            let (text, positive) = match output {
                Output::Report {
                    value,
                    summary,
                    positive,
                } => {
                    eprintln!("{summary}");
                    (serde_json::to_string_pretty(&value).unwrap() + "\n", positive)
                }
                Output::Text(t) => (t, true),
            };
            if let Err(e) = emit(out.as_ref(), &text) {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_INPUT);
            }
            if expect_positive && !positive {
                ExitCode::from(EXIT_NEGATIVE)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
