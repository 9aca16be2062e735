use std::fs;
use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::app::api::{
    Criterion, ImpactRequest, InferRequest, JointRequest, LikelihoodRequest, MapRequest, PlanRequest, WeightsRequest,
    WhatifRequest,
};
use crate::app::{ApiError, Renderer, Service, DEFAULT_PRECISION};
use crate::curriculum::build_default_model;
use crate::error::{Error, ErrorCode};
use crate::learning::{forward_sample, mle_fit_with_report, RecordSet};
use crate::model::{load_model, load_structure, save_model, validate_network, Assignment, BayesianNetwork, Evidence, ModelDocument};

#[derive(Debug, Parser)]
#[command(name = "curriculum-bn", version, about = "Discrete Bayesian-network queries over a curriculum model")]
struct Cli {
    /// Decimal places for probabilities and other reals in JSON output (0-17).
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION)]
    precision: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct ModelArg {
    /// Model document; the bundled curriculum model when omitted.
    #[arg(long)]
    model: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a model document and list every violation.
    Validate { model: PathBuf },
    /// Posterior marginal of one variable.
    Infer {
        #[command(flatten)]
        model: ModelArg,
        /// Comma-separated Var=state pairs.
        #[arg(long, default_value = "")]
        evidence: String,
        #[arg(long)]
        query: String,
    },
    /// Most probable joint assignment of the given variables.
    Map {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long, default_value = "")]
        evidence: String,
        /// Comma-separated variable names.
        #[arg(long)]
        vars: String,
        /// Maximise P(evidence | hypothesis) instead of the posterior.
        #[arg(long)]
        ml: bool,
    },
    /// Probability of a full assignment.
    Joint {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        assignment: String,
    },
    /// Probability of the evidence.
    Likelihood {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long, default_value = "")]
        evidence: String,
    },
    /// Fit CPTs for a structure from complete CSV data.
    Learn {
        /// Model document whose rows are ignored (they may be absent).
        #[arg(long)]
        structure: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        smoothing: f64,
    },
    /// Draw records by ancestral sampling and write them as CSV.
    Sample {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Rank variables by their log-odds impact on a target state.
    Impact {
        #[command(flatten)]
        model: ModelArg,
        /// Var=state
        #[arg(long)]
        target: String,
        #[arg(long, default_value = "")]
        evidence: String,
    },
    /// Evaluate a student profile, or compare what-if scenarios over it.
    Plan {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long, default_value = "")]
        profile: String,
        /// Scenario overrides of NumC and A, scenarios separated by ';'.
        #[arg(long)]
        scenarios: Option<String>,
        /// Success-score weights for P(G=A), P(RecL=approved),
        /// P(Satisfaction=high), as three comma-separated numbers.
        #[arg(long)]
        weights: Option<String>,
    },
    /// Print the canonical model document.
    Export {
        #[command(flatten)]
        model: ModelArg,
    },
    /// Serve the JSON API and static files over HTTP.
    Serve {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: SocketAddr,
        /// Directory served under `/`.
        #[arg(long)]
        static_dir: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn load(arg: &ModelArg) -> Result<BayesianNetwork, Error> {
    match &arg.model {
        Some(path) => load_model(&read(path)?),
        None => Ok(build_default_model()),
    }
}

fn service(arg: &ModelArg, renderer: Renderer) -> Result<Service, Error> {
    Ok(Service::new(load(arg)?, renderer))
}

fn list(text: &str) -> Vec<String> {
    text.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

fn weights(text: Option<&str>) -> Result<Option<WeightsRequest>, Error> {
    let Some(text) = text else { return Ok(None) };
    let parts = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Error::Argument(format!("bad --weights '{text}': {e}")))?;
    match parts[..] {
        [grade, recommendation, satisfaction] => Ok(Some(WeightsRequest {
            grade,
            recommendation,
            satisfaction,
        })),
        _ => Err(Error::Argument(format!("--weights needs three numbers, got '{text}'"))),
    }
}

enum Output {
    Json(Value),
    Text(String),
    Invalid(Value),
}

fn execute(cli: Cli, err: &mut dyn Write) -> Result<Output, Error> {
    let renderer = Renderer::new(cli.precision)?;
    let out = match cli.command {
        Command::Validate { model } => {
            let doc = ModelDocument::parse(&read(&model)?)?;
            let report = validate_network(&doc);
            let violations: Vec<Value> = report
                .violations
                .iter()
                .map(|v| {
                    let mut o = json!({ "kind": v.kind, "locus": v.locus, "message": v.message });
                    if let Some(r) = v.residual {
                        o["residual"] = renderer.number(r);
                    }
                    o
                })
                .collect();
            let body = json!({ "valid": report.is_valid(), "violations": violations });
            if report.is_valid() {
                Output::Json(body)
            } else {
                Output::Invalid(body)
            }
        }
        Command::Infer { model, evidence, query } => Output::Json(service(&model, renderer)?.infer(&InferRequest {
            evidence: Evidence::parse(&evidence)?,
            query,
        })?),
        Command::Map { model, evidence, vars, ml } => Output::Json(service(&model, renderer)?.map(&MapRequest {
            evidence: Evidence::parse(&evidence)?,
            query: list(&vars),
            criterion: if ml { Criterion::Ml } else { Criterion::Map },
        })?),
        Command::Joint { model, assignment } => Output::Json(service(&model, renderer)?.joint(&JointRequest {
            assignment: Assignment::parse(&assignment)?,
        })?),
        Command::Likelihood { model, evidence } => {
            Output::Json(service(&model, renderer)?.likelihood(&LikelihoodRequest {
                evidence: Evidence::parse(&evidence)?,
            })?)
        }
        Command::Learn {
            structure,
            data,
            smoothing,
        } => {
            let structure = load_structure(&read(&structure)?)?;
            let file = fs::File::open(&data).map_err(|source| Error::Io {
                path: data.display().to_string(),
                source,
            })?;
            let records = RecordSet::read_csv(file, &structure.variables)?;
            let (net, report) = mle_fit_with_report(&structure, &records, smoothing)?;
            if !report.unseen.is_empty() {
                let _ = writeln!(err, "{}", json!({ "unseen": report.unseen }));
            }
            Output::Text(save_model(&net))
        }
        Command::Sample { model, n, seed, out } => {
            let net = load(&model)?;
            let records = forward_sample(&net, n, seed)?;
            fs::write(&out, records.to_csv_string()).map_err(|source| Error::Io {
                path: out.display().to_string(),
                source,
            })?;
            Output::Json(json!({ "records": n, "seed": seed, "out": out.display().to_string() }))
        }
        Command::Impact {
            model,
            target,
            evidence,
        } => Output::Json(service(&model, renderer)?.impact(&ImpactRequest {
            target,
            evidence: Evidence::parse(&evidence)?,
        })?),
        Command::Plan {
            model,
            profile,
            scenarios,
            weights: w,
        } => {
            let svc = service(&model, renderer)?;
            let profile = Evidence::parse(&profile)?;
            let weights = weights(w.as_deref())?;
            match scenarios {
                None => Output::Json(svc.plan(&PlanRequest { profile, weights })?),
                Some(text) => {
                    let scenarios = text.split(';').map(Evidence::parse).collect::<Result<Vec<_>, _>>()?;
                    Output::Json(svc.whatif(&WhatifRequest {
                        profile,
                        scenarios,
                        weights,
                    })?)
                }
            }
        }
        Command::Export { model } => Output::Text(save_model(&load(&model)?)),
        Command::Serve {
            model,
            addr,
            static_dir,
        } => {
            let svc = service(&model, renderer)?;
            let runtime = tokio::runtime::Runtime::new().map_err(|source| Error::Io {
                path: "tokio runtime".into(),
                source,
            })?;
            runtime
                .block_on(crate::app::serve(svc, addr, static_dir))
                .map_err(|source| Error::Io {
                    path: addr.to_string(),
                    source,
                })?;
            Output::Text(String::new())
        }
    };
    Ok(out)
}

/// Runs the command line `args` (program name first) and returns the exit
/// code: 0 success, 1 usage, 2 model or validation, 3 impossible evidence or
/// degenerate baseline, 4 size limit.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let api = ApiError::new(ErrorCode::UsageError, text.trim_end(), "argv");
                let _ = writeln!(err, "{}", api.to_json());
                return ErrorCode::UsageError.exit_code();
            }
            let _ = write!(out, "{text}");
            return 0;
        }
    };
    match execute(cli, err) {
        Ok(Output::Json(v)) => {
            let _ = writeln!(out, "{v}");
            0
        }
        Ok(Output::Text(t)) => {
            let _ = write!(out, "{t}");
            0
        }
        Ok(Output::Invalid(v)) => {
            let _ = writeln!(out, "{v}");
            ErrorCode::ValidationError.exit_code()
        }
        Err(e) => {
            let api = ApiError::from(e);
            let _ = writeln!(err, "{}", api.to_json());
            api.code.exit_code()
        }
    }
}
