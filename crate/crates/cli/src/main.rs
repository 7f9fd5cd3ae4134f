use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use tenfold::AlphabetSpec;
use tenfold_cli::{
    check_conjecture, discover, enumerate, load_or_discover, oracle_series, prove,
    render_conjecture, render_trace, run_pipeline, trace_obligations, write_grammar, Format,
    PipelineError, RunConfig, Status, Verbosity,
};

#[derive(Debug, Parser)]
#[command(
    name = "tenfold",
    version,
    about = "Discover, prove and enumerate mishap-free zero-sum languages"
)]
struct Cli {
    #[arg(long, global = true, default_value_t = 3)]
    a: i64,
    #[arg(long, global = true, default_value_t = 2)]
    b: i64,
    /// Longest corpus word used for discovery [default: 4(a+b)]
    #[arg(long, global = true)]
    corpus_max_len: Option<usize>,
    #[arg(long, global = true, default_value_t = tenfold::prover::DEFAULT_MAX_PURGES)]
    max_purges: usize,
    #[arg(long, global = true, default_value_t = tenfold::discovery::DEFAULT_MAX_VERTICES)]
    max_vertices: usize,
    #[arg(long, global = true, default_value_t = tenfold_cli::DEFAULT_SERIES_ORDER)]
    series_order: usize,
    #[arg(long, global = true)]
    grammar_file: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = VerbosityArg::Terse)]
    verbosity: VerbosityArg,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VerbosityArg {
    Terse,
    Verbose,
    VeryVerbose,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Structured,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Discover, prove, enumerate and cross-check (the default)
    Pipeline,
    /// Discover a grammar and write it to --grammar-file or stdout
    Discover,
    /// Prove the grammar in --grammar-file (or a freshly discovered one)
    Prove,
    /// Weight-enumerator and series of a grammar
    Gf,
    /// Brute-force counts of good words
    Count {
        /// A single length; otherwise every multiple of a+b up to the corpus length
        #[arg(long)]
        length: Option<usize>,
    },
    /// Compare counts at lengths (a+b)n with binomial(a+b,a)^n
    Conjecture {
        #[arg(long, default_value_t = 2)]
        n_max: usize,
    },
}

fn config(cli: &Cli) -> Result<RunConfig, PipelineError> {
    let spec = AlphabetSpec::new(cli.a, cli.b).map_err(|e| PipelineError::Usage(e.to_string()))?;
    let mut cfg = RunConfig::new(spec);
    if let Some(n) = cli.corpus_max_len {
        cfg.corpus_max_len = n;
    }
    cfg.max_purges = cli.max_purges;
    cfg.max_vertices = cli.max_vertices;
    cfg.series_order = cli.series_order;
    cfg.grammar_file = cli.grammar_file.clone();
    cfg.verbosity = match cli.verbosity {
        VerbosityArg::Terse => Verbosity::Terse,
        VerbosityArg::Verbose => Verbosity::Verbose,
        VerbosityArg::VeryVerbose => Verbosity::VeryVerbose,
    };
    cfg.format = match cli.format {
        FormatArg::Text => Format::Text,
        FormatArg::Structured => Format::Structured,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<(String, Status), PipelineError> {
    let cfg = config(cli)?;
    let command = cli.command.as_ref().unwrap_or(&Command::Pipeline);
    match command {
        Command::Pipeline => {
            let report = run_pipeline(&cfg)?;
            if let Some(n) = report.first_mismatch() {
                eprintln!("series disagrees with brute-force count at length {n}");
            }
            Ok((report.render(), report.status()))
        }
        Command::Discover => {
            let tree = discover(&cfg)?;
            match &cfg.grammar_file {
                Some(path) => {
                    write_grammar(path, &tree)?;
                    Ok((
                        format!("wrote {} vertices to {}\n", tree.len(), path.display()),
                        Status::Success,
                    ))
                }
                None => Ok((tree.to_string(), Status::Success)),
            }
        }
        Command::Prove => {
            let tree = load_or_discover(&cfg)?;
            let report = prove(&cfg, &tree)?;
            let mut out = match cfg.format {
                Format::Text => report.to_string(),
                Format::Structured => {
                    format!(
                        "{}\n",
                        serde_json::to_string_pretty(&tenfold_cli::proof_json(&report)).unwrap()
                    )
                }
            };
            if cfg.verbosity >= Verbosity::VeryVerbose && cfg.format == Format::Text {
                for t in trace_obligations(&cfg, &tree)? {
                    out.push_str(&render_trace(&t));
                }
            }
            let status = match report.verdict() {
                tenfold::prover::Verdict::True => Status::Success,
                tenfold::prover::Verdict::False => Status::Disproved,
                tenfold::prover::Verdict::Unknown => Status::Inconclusive,
            };
            Ok((out, status))
        }
        Command::Gf => {
            let tree = load_or_discover(&cfg)?;
            let e = enumerate(&tree, cfg.series_order)?;
            let series: Vec<String> = e.series.iter().map(|c| c.to_string()).collect();
            let out = match cfg.format {
                Format::Text => format!("gf {}\nseries {}\n", e.gf, series.join(",")),
                Format::Structured => format!(
                    "{}\n",
                    serde_json::to_string_pretty(
                        &serde_json::json!({ "gf": e.gf.to_string(), "series": series })
                    )
                    .unwrap()
                ),
            };
            Ok((out, Status::Success))
        }
        Command::Count { length } => {
            let spec = cfg.spec;
            let rows: Vec<(usize, u64)> = match length {
                Some(n) => vec![(*n, tenfold::wordcore::oracle_count(&spec, *n)?)],
                None => {
                    let counts = oracle_series(&spec, cfg.corpus_max_len + 1)?;
                    counts
                        .into_iter()
                        .enumerate()
                        .step_by(spec.period())
                        .collect()
                }
            };
            let out = match cfg.format {
                Format::Text => rows.iter().map(|(n, c)| format!("{n} {c}\n")).collect(),
                Format::Structured => {
                    let rows: Vec<_> = rows
                        .iter()
                        .map(|(n, c)| serde_json::json!({ "length": n, "count": c }))
                        .collect();
                    format!(
                        "{}\n",
                        serde_json::to_string_pretty(&serde_json::json!({ "counts": rows }))
                            .unwrap()
                    )
                }
            };
            Ok((out, Status::Success))
        }
        Command::Conjecture { n_max } => {
            let rows = check_conjecture(&cfg, *n_max)?;
            let status = if rows.iter().all(|r| r.equal) {
                Status::Success
            } else {
                Status::Disproved
            };
            Ok((render_conjecture(&rows, cfg.format), status))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() {
                Status::Usage.code()
            } else {
                0
            };
            return ExitCode::from(code as u8);
        }
    };
    match run(&cli) {
        Ok((out, status)) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.as_bytes());
            ExitCode::from(status.code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            if let Some(details) = e.details() {
                eprint!("{details}");
            }
            ExitCode::from(e.status().code() as u8)
        }
    }
}
