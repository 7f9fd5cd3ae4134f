//! Batch orchestration: discover a grammar, prove it, enumerate it, and
//! cross-check the enumeration against brute force.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use serde_json::{json, Value};
use thiserror::Error;

use tenfold::discovery::{
    discover_grammar, DiscoveryError, DiscoveryLimits, GrammarIoError, GrammarTree, VertexId,
    DEFAULT_MAX_VERTICES,
};
use tenfold::gfsolve::{grammar_gf, GfError, RationalFunction};
use tenfold::prover::{
    Obligation, ProofReport, Prover, ProverConfig, ProverError, PurgeTrace, Verdict,
    DEFAULT_MAX_PURGES,
};
use tenfold::wordcore::{binomial, oracle_count};
use tenfold::{AlphabetSpec, WordError};

pub const DEFAULT_SERIES_ORDER: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Verbosity {
    Terse,
    Verbose,
    VeryVerbose,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub spec: AlphabetSpec,
    pub corpus_max_len: usize,
    pub max_purges: usize,
    pub max_vertices: usize,
    pub series_order: usize,
    pub verbosity: Verbosity,
    pub format: Format,
    pub grammar_file: Option<PathBuf>,
}

impl RunConfig {
    /// Defaults for everything but the alphabet.
    pub fn new(spec: AlphabetSpec) -> Self {
        RunConfig {
            spec,
            corpus_max_len: 4 * spec.period(),
            max_purges: DEFAULT_MAX_PURGES,
            max_vertices: DEFAULT_MAX_VERTICES,
            series_order: DEFAULT_SERIES_ORDER,
            verbosity: Verbosity::Terse,
            format: Format::Text,
            grammar_file: None,
        }
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        for (name, v) in [
            ("corpus-max-len", self.corpus_max_len),
            ("max-vertices", self.max_vertices),
            ("series-order", self.series_order),
        ] {
            if v == 0 {
                return Err(PipelineError::Usage(format!("--{name} must be positive")));
            }
        }
        Ok(())
    }
}

/// Process exit statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success = 0,
    Disproved = 1,
    Inconclusive = 2,
    Usage = 3,
}

impl Status {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Discovery(#[from] DiscoveryError),
    #[error(transparent)]
    Prover(#[from] ProverError),
    #[error(transparent)]
    Gf(#[from] GfError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("series coefficient {value} at length {length} is not an integer")]
    NonInteger { length: usize, value: String },
    #[error("{path}: {source}")]
    Grammar {
        path: PathBuf,
        source: GrammarIoError,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl PipelineError {
    pub fn status(&self) -> Status {
        match self {
            PipelineError::Usage(_) | PipelineError::Io { .. } | PipelineError::Grammar { .. } => {
                Status::Usage
            }
            _ => Status::Inconclusive,
        }
    }

    /// Extra diagnostic lines, such as the tree built before a limit hit.
    pub fn details(&self) -> Option<String> {
        match self {
            PipelineError::Discovery(DiscoveryError::LimitExceeded { partial, .. }) => Some(
                format!("partial tree with {} vertices:\n{partial}", partial.len()),
            ),
            _ => None,
        }
    }
}

pub fn read_grammar(path: &Path) -> Result<GrammarTree, PipelineError> {
    let text = fs::read_to_string(path).map_err(|source| PipelineError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    text.parse().map_err(|source| PipelineError::Grammar {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_grammar(path: &Path, t: &GrammarTree) -> Result<(), PipelineError> {
    if !t.is_finished() {
        return Err(PipelineError::Usage(
            "refusing to write an unfinished tree".into(),
        ));
    }
    fs::write(path, t.to_string()).map_err(|source| PipelineError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn discover(cfg: &RunConfig) -> Result<GrammarTree, PipelineError> {
    let limits = DiscoveryLimits {
        max_vertices: cfg.max_vertices,
    };
    Ok(discover_grammar(&cfg.spec, cfg.corpus_max_len, limits)?)
}

/// Reads `--grammar-file` when given, otherwise discovers a fresh tree.
pub fn load_or_discover(cfg: &RunConfig) -> Result<GrammarTree, PipelineError> {
    match &cfg.grammar_file {
        Some(path) => {
            let t = read_grammar(path)?;
            if t.spec != cfg.spec {
                return Err(PipelineError::Usage(format!(
                    "{} is for ({}, {}), not ({}, {})",
                    path.display(),
                    t.spec.a(),
                    t.spec.b(),
                    cfg.spec.a(),
                    cfg.spec.b()
                )));
            }
            Ok(t)
        }
        None => discover(cfg),
    }
}

#[derive(Debug, Clone)]
pub struct ObligationTrace {
    pub leaf: VertexId,
    pub obligation: Obligation,
    pub trace: PurgeTrace,
}

pub fn prove(cfg: &RunConfig, t: &GrammarTree) -> Result<ProofReport, PipelineError> {
    let prover = Prover::new(t.spec, prover_config(cfg))?;
    Ok(prover.prove_grammar(t)?)
}

fn prover_config(cfg: &RunConfig) -> ProverConfig {
    ProverConfig {
        max_purges: cfg.max_purges,
        ..ProverConfig::default()
    }
}

/// Purge-by-purge survivor samples for every leaf obligation.
pub fn trace_obligations(
    cfg: &RunConfig,
    t: &GrammarTree,
) -> Result<Vec<ObligationTrace>, PipelineError> {
    let prover = Prover::new(t.spec, prover_config(cfg))?;
    let mut out = Vec::new();
    for v in t.leaves() {
        for obligation in prover.leaf_obligations(t, v) {
            let (_, trace) = prover.prove_obligation_traced(&obligation);
            out.push(ObligationTrace {
                leaf: v.id,
                obligation,
                trace,
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct Enumeration {
    pub gf: RationalFunction,
    pub series: Vec<BigInt>,
}

/// The weight-enumerator and its first `order` coefficients.
pub fn enumerate(t: &GrammarTree, order: usize) -> Result<Enumeration, PipelineError> {
    let gf = grammar_gf(t)?;
    let mut coeffs = gf.series(order)?;
    coeffs.truncate(order);
    let series = coeffs
        .into_iter()
        .enumerate()
        .map(|(length, c)| {
            if c.is_integer() {
                Ok(c.to_integer())
            } else {
                Err(PipelineError::NonInteger {
                    length,
                    value: c.to_string(),
                })
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Enumeration { gf, series })
}

/// Brute-force counts of good words of each length below `order`.
pub fn oracle_series(spec: &AlphabetSpec, order: usize) -> Result<Vec<u64>, PipelineError> {
    (0..order)
        .map(|n| oracle_count(spec, n).map_err(PipelineError::from))
        .collect()
}

#[derive(Debug, Clone)]
pub struct PipelineReport {
    pub config: RunConfig,
    pub tree: GrammarTree,
    pub proof: ProofReport,
    pub enumeration: Enumeration,
    pub oracle: Vec<u64>,
    pub traces: Vec<ObligationTrace>,
}

impl PipelineReport {
    pub fn verdict(&self) -> Verdict {
        self.proof.verdict()
    }

    /// Index of the first coefficient that disagrees with brute force.
    pub fn first_mismatch(&self) -> Option<usize> {
        let series = &self.enumeration.series;
        (0..self.oracle.len().max(series.len()))
            .find(|&n| series.get(n) != self.oracle.get(n).map(|&c| BigInt::from(c)).as_ref())
    }

    pub fn status(&self) -> Status {
        match self.verdict() {
            Verdict::True if self.first_mismatch().is_none() => Status::Success,
            Verdict::True | Verdict::False => Status::Disproved,
            Verdict::Unknown => Status::Inconclusive,
        }
    }

    pub fn render(&self) -> String {
        match self.config.format {
            Format::Text => self.render_text(),
            Format::Structured => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("json");
                s.push('\n');
                s
            }
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        let verbosity = self.config.verbosity;
        if verbosity >= Verbosity::Verbose {
            out.push_str(&self.tree.to_string());
            out.push_str(&self.proof.to_string());
        } else {
            writeln!(out, "verdict {}", self.verdict()).unwrap();
        }
        if verbosity >= Verbosity::VeryVerbose {
            for t in &self.traces {
                out.push_str(&render_trace(t));
            }
        }
        writeln!(out, "gf {}", self.enumeration.gf).unwrap();
        writeln!(out, "series {}", join(&self.enumeration.series)).unwrap();
        match self.first_mismatch() {
            None => writeln!(out, "cross-check ok {}", self.oracle.len()).unwrap(),
            Some(n) => writeln!(out, "cross-check mismatch at length {n}").unwrap(),
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let mut doc = json!({
            "grammar": grammar_json(&self.tree),
            "proof": proof_json(&self.proof),
            "gf": self.enumeration.gf.to_string(),
            "series": self.enumeration.series.iter().map(big_json).collect::<Vec<_>>(),
            "oracle": self.oracle,
            "cross_check": self.first_mismatch().is_none(),
        });
        if self.config.verbosity >= Verbosity::VeryVerbose {
            doc["traces"] = self.traces.iter().map(trace_json).collect();
        }
        doc
    }
}

/// Discover, write the grammar file if requested, prove, enumerate, and
/// cross-check against brute-force counts.
pub fn run_pipeline(cfg: &RunConfig) -> Result<PipelineReport, PipelineError> {
    cfg.validate()?;
    let tree = discover(cfg)?;
    if let Some(path) = &cfg.grammar_file {
        write_grammar(path, &tree)?;
    }
    let proof = prove(cfg, &tree)?;
    let traces = if cfg.verbosity >= Verbosity::VeryVerbose {
        trace_obligations(cfg, &tree)?
    } else {
        Vec::new()
    };
    let enumeration = enumerate(&tree, cfg.series_order)?;
    let oracle = oracle_series(&cfg.spec, cfg.series_order)?;
    Ok(PipelineReport {
        config: cfg.clone(),
        tree,
        proof,
        enumeration,
        oracle,
        traces,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjectureRow {
    pub n: usize,
    pub length: usize,
    pub count: u64,
    pub expected: u128,
    pub equal: bool,
}

/// Brute-force counts at lengths `(a+b)·n`, `n = 0..=n_max`, against `mⁿ`.
/// Empirical only.
pub fn check_conjecture(
    cfg: &RunConfig,
    n_max: usize,
) -> Result<Vec<ConjectureRow>, PipelineError> {
    let spec = &cfg.spec;
    let m = binomial((spec.a() + spec.b()) as u64, spec.a() as u64)? as u128;
    (0..=n_max)
        .map(|n| {
            let length = n * spec.period();
            let count = oracle_count(spec, length)?;
            let expected = m
                .checked_pow(n as u32)
                .ok_or_else(|| PipelineError::Usage(format!("{m}^{n} overflows")))?;
            Ok(ConjectureRow {
                n,
                length,
                count,
                expected,
                equal: count as u128 == expected,
            })
        })
        .collect()
}

pub fn render_conjecture(rows: &[ConjectureRow], format: Format) -> String {
    match format {
        Format::Text => {
            let mut out = String::from("n length count expected equal\n");
            for r in rows {
                writeln!(
                    out,
                    "{} {} {} {} {}",
                    r.n, r.length, r.count, r.expected, r.equal
                )
                .unwrap();
            }
            out.push_str("empirical check only\n");
            out
        }
        Format::Structured => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "n": r.n,
                        "length": r.length,
                        "count": r.count,
                        "expected": r.expected.to_string(),
                        "equal": r.equal,
                    })
                })
                .collect();
            format!(
                "{}\n",
                serde_json::to_string_pretty(&json!({ "rows": rows })).unwrap()
            )
        }
    }
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn big_json(c: &BigInt) -> Value {
    match u64::try_from(c) {
        Ok(v) => json!(v),
        Err(_) => json!(c.to_string()),
    }
}

pub fn render_trace(t: &ObligationTrace) -> String {
    let mut out = String::new();
    writeln!(out, "leaf {} obligation {}", t.leaf, t.obligation).unwrap();
    for (round, (count, sample)) in t.trace.rounds.iter().enumerate() {
        let sample: Vec<String> = sample.iter().map(|m| m.to_string()).collect();
        writeln!(
            out,
            "  round {round} survivors {count} {}",
            sample.join(" ")
        )
        .unwrap();
    }
    out
}

/// Fields of each text line, split at ` | `.
pub fn grammar_json(t: &GrammarTree) -> Value {
    let vertices: Vec<Value> = t
        .to_string()
        .lines()
        .skip(1)
        .map(|line| {
            let f: Vec<&str> = line.split(" | ").collect();
            json!({
                "id": f[0], "w1": f[1], "w2": f[2], "kind": f[3],
                "way": f[4], "links": f[5], "singleton": f[6],
            })
        })
        .collect();
    json!({
        "a": t.spec.a(),
        "b": t.spec.b(),
        "corpus": t.corpus_max_len,
        "vertices": vertices,
    })
}

pub fn proof_json(p: &ProofReport) -> Value {
    let leaves: Vec<Value> = p
        .leaves
        .iter()
        .map(|l| {
            let text = l.to_string();
            let f: Vec<&str> = text.splitn(5, ' ').collect();
            json!({ "id": l.id, "kind": f[2], "outcome": f[3], "detail": f.get(4).copied().unwrap_or("") })
        })
        .collect();
    json!({
        "a": p.spec.a(),
        "b": p.spec.b(),
        "max_purges": p.max_purges,
        "leaves": leaves,
        "verdict": p.verdict().to_string(),
    })
}

fn trace_json(t: &ObligationTrace) -> Value {
    let rounds: Vec<Value> = t
        .trace
        .rounds
        .iter()
        .map(|(count, sample)| {
            json!({
                "survivors": count,
                "sample": sample.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "leaf": t.leaf, "obligation": t.obligation.to_string(), "rounds": rounds })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(a: i64, b: i64) -> RunConfig {
        RunConfig::new(AlphabetSpec::new(a, b).unwrap())
    }

    #[test]
    fn defaults() {
        let c = cfg(3, 2);
        assert_eq!(c.corpus_max_len, 20);
        assert_eq!(c.max_purges, 3);
        assert_eq!(c.series_order, 20);
    }

    #[test]
    fn one_one_pipeline() {
        let r = run_pipeline(&cfg(1, 1)).unwrap();
        assert_eq!(r.status(), Status::Success);
        assert_eq!(r.enumeration.gf.to_string(), "1/(1-2*x^2)");
        let text = r.render();
        assert!(text.starts_with("verdict true\ngf 1/(1-2*x^2)\n"), "{text}");
    }

    #[test]
    fn vertex_limit_is_inconclusive() {
        let mut c = cfg(3, 2);
        c.max_vertices = 1;
        let err = run_pipeline(&c).unwrap_err();
        assert_eq!(err.status(), Status::Inconclusive);
        assert!(err
            .details()
            .unwrap()
            .starts_with("partial tree with 1 vertices"));
    }

    #[test]
    fn zero_limits_are_usage_errors() {
        let mut c = cfg(2, 1);
        c.series_order = 0;
        assert_eq!(run_pipeline(&c).unwrap_err().status(), Status::Usage);
    }

    #[test]
    fn conjecture_table() {
        let rows = check_conjecture(&cfg(2, 1), 3).unwrap();
        let counts: Vec<u64> = rows.iter().map(|r| r.count).collect();
        assert_eq!(counts, vec![1, 3, 9, 27]);
        assert!(rows.iter().all(|r| r.equal));
    }

    #[test]
    fn structured_mirrors_text() {
        let mut c = cfg(2, 1);
        c.format = Format::Structured;
        let r = run_pipeline(&c).unwrap();
        let doc: Value = serde_json::from_str(&r.render()).unwrap();
        assert_eq!(doc["gf"], "1/(1-3*x^3)");
        assert_eq!(doc["proof"]["verdict"], "true");
        assert_eq!(
            doc["grammar"]["vertices"].as_array().unwrap().len(),
            r.tree.len()
        );
        assert_eq!(doc["series"][3], 3);
    }

    #[test]
    fn mismatch_blocks_success() {
        let mut r = run_pipeline(&cfg(2, 1)).unwrap();
        r.oracle[3] += 1;
        assert_eq!(r.first_mismatch(), Some(3));
        assert_eq!(r.status(), Status::Disproved);
    }
}
