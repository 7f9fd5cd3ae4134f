//! Certification of a discovered grammar by minimal-counterexample purges.
//!
//! Every leaf claim reduces to obligations of the form
//! `u1 [A] u2 [B] u3 must contain a mishap`, where `[A]` stands for any word
//! summing to `A`. A minimal counterexample fills every bracket with a word
//! that is mishap-free and has no nonempty zero-sum factor (removing such a
//! factor keeps the instance and cannot create a mishap). Brackets are
//! therefore unfolded at their shortest positive (or negative) prefix:
//!
//! ```text
//! [A] = ∪_{i=1..a} [i-a] (+a) [A-i]     A > 0
//! [A] = ∪_{i=1..b} [b-i] (-b) [A+i]     A < 0
//! ```
//!
//! until only the fundamental brackets `[1] .. [b-1]` remain, and every
//! pattern that forces a mishap or forces a zero-sum run inside one original
//! bracket is discarded. Each further purge round unfolds the remaining
//! fundamental brackets by their self-referential expansions.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

use crate::discovery::{Context, GrammarTree, Vertex, VertexId, VertexKind};
use crate::wordcore::{is_good, is_mishap_free, AlphabetSpec, Word};

pub const DEFAULT_MAX_PURGES: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProverError {
    #[error("expansions did not close within {0} steps")]
    ClosureFailure(usize),
    #[error("context {0} already contains a mishap")]
    InherentContextMishap(Context),
    #[error("malformed tree: {0}")]
    MalformedTree(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Lit(i32),
    /// Any word with this (nonzero) sum.
    Bracket(i32),
}

impl Symbol {
    pub fn sum(self) -> i64 {
        match self {
            Symbol::Lit(v) | Symbol::Bracket(v) => v as i64,
        }
    }
}

/// A meta-letter plus the original obligation bracket it descends from
/// (`None` for literal context).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MetaLetter {
    pub symbol: Symbol,
    pub region: Option<u16>,
}

impl MetaLetter {
    pub fn lit(v: i32) -> Self {
        MetaLetter {
            symbol: Symbol::Lit(v),
            region: None,
        }
    }

    pub fn bracket(sum: i32, region: u16) -> Self {
        MetaLetter {
            symbol: Symbol::Bracket(sum),
            region: Some(region),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MetaWord(pub Vec<MetaLetter>);

impl MetaWord {
    pub fn from_symbols(symbols: &[Symbol], region: Option<u16>) -> Self {
        MetaWord(
            symbols
                .iter()
                .map(|&symbol| MetaLetter { symbol, region })
                .collect(),
        )
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        self.0.iter().map(|m| m.symbol).collect()
    }

    pub fn brackets(&self) -> impl Iterator<Item = (usize, i32)> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter_map(|(i, m)| match m.symbol {
                Symbol::Bracket(s) => Some((i, s)),
                Symbol::Lit(_) => None,
            })
    }

    pub fn has_brackets(&self) -> bool {
        self.brackets().next().is_some()
    }

    /// The literal word, if no brackets remain.
    pub fn literal(&self) -> Option<Word> {
        self.0
            .iter()
            .map(|m| match m.symbol {
                Symbol::Lit(v) => Some(v),
                Symbol::Bracket(_) => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(Word)
    }

    /// Replaces position `pos` by `symbols`, all inheriting its region.
    fn substitute(&self, pos: usize, symbols: &[Symbol]) -> MetaWord {
        let region = self.0[pos].region;
        let mut out = Vec::with_capacity(self.0.len() + symbols.len());
        out.extend_from_slice(&self.0[..pos]);
        out.extend(symbols.iter().map(|&symbol| MetaLetter { symbol, region }));
        out.extend_from_slice(&self.0[pos + 1..]);
        MetaWord(out)
    }
}

/// Bracketed listing: `[-2, [1], 3, [1], -2]`.
impl fmt::Display for MetaWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            match m.symbol {
                Symbol::Lit(v) => write!(f, "{v}")?,
                Symbol::Bracket(s) => write!(f, "[{s}]")?,
            }
        }
        f.write_str("]")
    }
}

/// Branches of the shortest-prefix recurrence for a nonzero sum, with
/// zero brackets dropped.
pub fn recurrence_branches(sum: i32, spec: &AlphabetSpec) -> Vec<Vec<Symbol>> {
    let (a, b) = (spec.a(), spec.b());
    let push = |v: &mut Vec<Symbol>, s: i32| {
        if s != 0 {
            v.push(Symbol::Bracket(s));
        }
    };
    let mut out = Vec::new();
    if sum > 0 {
        for i in 1..=a {
            let mut br = Vec::new();
            push(&mut br, i - a);
            br.push(Symbol::Lit(a));
            push(&mut br, sum - i);
            out.push(br);
        }
    } else if sum < 0 {
        for i in 1..=b {
            let mut br = Vec::new();
            push(&mut br, b - i);
            br.push(Symbol::Lit(-b));
            push(&mut br, sum + i);
            out.push(br);
        }
    }
    out
}

pub fn word_recurrence_expand(sum: i32, spec: &AlphabetSpec) -> Vec<MetaWord> {
    recurrence_branches(sum, spec)
        .iter()
        .map(|br| MetaWord::from_symbols(br, None))
        .collect()
}

/// True iff some `Lit(+a) … Lit(-b)` pair encloses meta-letters of total
/// sum `-a`, so that every instantiation contains a mishap.
pub fn guaranteed_mishap(mw: &MetaWord, spec: &AlphabetSpec) -> bool {
    let mut up_heights: Vec<i64> = Vec::new();
    let mut h = 0i64;
    for m in &mw.0 {
        match m.symbol {
            Symbol::Lit(v) if v == spec.up() => up_heights.push(h),
            Symbol::Lit(v) if v == spec.down() && up_heights.contains(&h) => return true,
            _ => {}
        }
        h += m.symbol.sum();
    }
    false
}

/// True iff a nonempty run strictly inside one region (and not the whole
/// region) sums to zero.
pub fn has_forced_zero_run(mw: &MetaWord) -> bool {
    let mut i = 0;
    while i < mw.0.len() {
        let Some(region) = mw.0[i].region else {
            i += 1;
            continue;
        };
        let start = i;
        while i < mw.0.len() && mw.0[i].region == Some(region) {
            i += 1;
        }
        let run = &mw.0[start..i];
        let mut heights = Vec::with_capacity(run.len() + 1);
        let mut h = 0i64;
        heights.push(h);
        for m in run {
            h += m.symbol.sum();
            heights.push(h);
        }
        let n = run.len();
        for x in 0..=n {
            for y in x + 1..=n {
                if heights[x] == heights[y] && !(x == 0 && y == n) {
                    return true;
                }
            }
        }
    }
    false
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Segment {
    Literal(Word),
    Bracket(i32),
}

/// Claim: every word obtained by filling each bracket with a word of the
/// stated sum contains a mishap.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Obligation {
    pub segments: Vec<Segment>,
}

impl Obligation {
    /// Merges adjacent literals and drops zero brackets.
    pub fn new(segments: Vec<Segment>) -> Self {
        let mut out: Vec<Segment> = Vec::new();
        for seg in segments {
            match seg {
                Segment::Bracket(0) => {}
                Segment::Literal(w) if w.is_empty() => {}
                Segment::Literal(w) => match out.last_mut() {
                    Some(Segment::Literal(prev)) => prev.0.extend(w.0),
                    _ => out.push(Segment::Literal(w)),
                },
                b @ Segment::Bracket(_) => out.push(b),
            }
        }
        Obligation { segments: out }
    }

    /// `prefix · [sum] · suffix`.
    pub fn wrapped(ctx: &Context, middle: Vec<Segment>) -> Self {
        let mut segs = vec![Segment::Literal(ctx.prefix.clone())];
        segs.extend(middle);
        segs.push(Segment::Literal(ctx.suffix.clone()));
        Obligation::new(segs)
    }

    pub fn to_meta_word(&self) -> MetaWord {
        let mut out = Vec::new();
        let mut region = 0u16;
        for seg in &self.segments {
            match seg {
                Segment::Literal(w) => out.extend(w.0.iter().map(|&v| MetaLetter::lit(v))),
                Segment::Bracket(s) => {
                    out.push(MetaLetter::bracket(*s, region));
                    region += 1;
                }
            }
        }
        MetaWord(out)
    }
}

impl fmt::Display for Obligation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .segments
            .iter()
            .map(|s| match s {
                Segment::Literal(w) => w.to_string(),
                Segment::Bracket(x) => format!("[{x}]"),
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProofOutcome {
    Proved {
        purges_used: usize,
    },
    /// A mishap-free instance of the claim.
    Disproved {
        counterexample: Word,
    },
    Inconclusive {
        survivors: Vec<MetaWord>,
        purges_used: usize,
    },
}

impl ProofOutcome {
    pub fn is_proved(&self) -> bool {
        matches!(self, ProofOutcome::Proved { .. })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ProverConfig {
    pub max_purges: usize,
    /// Survivor cap per round; exceeding it ends the attempt as inconclusive.
    pub max_survivors: usize,
    /// Cap on meta-words processed while unfolding to fundamental brackets.
    pub max_expansion_steps: usize,
}

impl Default for ProverConfig {
    fn default() -> Self {
        ProverConfig {
            max_purges: DEFAULT_MAX_PURGES,
            max_survivors: 200_000,
            max_expansion_steps: 2_000_000,
        }
    }
}

/// Survivor counts and a sample of survivors after each stage
/// (index 0 is the initial unfolding).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PurgeTrace {
    pub rounds: Vec<(usize, Vec<MetaWord>)>,
}

const TRACE_SAMPLE: usize = 8;

#[derive(Debug, Clone)]
pub struct Prover {
    spec: AlphabetSpec,
    config: ProverConfig,
    /// Self-referential expansions of the fundamental brackets `[1..b-1]`.
    lemmas: BTreeMap<i32, Vec<Vec<Symbol>>>,
}

impl Prover {
    pub fn new(spec: AlphabetSpec, config: ProverConfig) -> Result<Self, ProverError> {
        let mut prover = Prover {
            spec,
            config,
            lemmas: BTreeMap::new(),
        };
        for k in 1..spec.b() {
            let top = MetaWord(vec![MetaLetter::bracket(k, 0)]);
            let mut out = Vec::new();
            for br in recurrence_branches(k, &spec) {
                let mw = top.substitute(0, &br);
                if !prover.purgeable(&mw) {
                    out.extend(prover.unfold(mw)?);
                }
            }
            let mut lemma: Vec<Vec<Symbol>> = out.iter().map(MetaWord::symbols).collect();
            lemma.sort();
            lemma.dedup();
            prover.lemmas.insert(k, lemma);
        }
        Ok(prover)
    }

    pub fn spec(&self) -> &AlphabetSpec {
        &self.spec
    }

    pub fn config(&self) -> &ProverConfig {
        &self.config
    }

    fn is_fundamental(&self, sum: i32) -> bool {
        (1..self.spec.b()).contains(&sum)
    }

    fn purgeable(&self, mw: &MetaWord) -> bool {
        guaranteed_mishap(mw, &self.spec) || has_forced_zero_run(mw)
    }

    /// Unfolds non-fundamental brackets until none remain, purging along the way.
    fn unfold(&self, start: MetaWord) -> Result<Vec<MetaWord>, ProverError> {
        let mut stack = vec![start];
        let mut done = Vec::new();
        let mut steps = 0usize;
        while let Some(mw) = stack.pop() {
            steps += 1;
            if steps > self.config.max_expansion_steps {
                return Err(ProverError::ClosureFailure(self.config.max_expansion_steps));
            }
            let Some((pos, sum)) = mw.brackets().find(|&(_, s)| !self.is_fundamental(s)) else {
                done.push(mw);
                continue;
            };
            for br in recurrence_branches(sum, &self.spec) {
                let next = mw.substitute(pos, &br);
                if !self.purgeable(&next) {
                    stack.push(next);
                }
            }
        }
        Ok(done)
    }

    /// Expansion of `[sum]` over `{+a, -b, [1] .. [b-1]}` describing every
    /// mishap-free word of that sum without nonempty zero-sum factors. For
    /// fundamental sums this is the self-referential expansion.
    pub fn expansion(&self, sum: i32) -> Result<BTreeSet<MetaWord>, ProverError> {
        if let Some(lemma) = self.lemmas.get(&sum) {
            return Ok(lemma
                .iter()
                .map(|s| MetaWord::from_symbols(s, None))
                .collect());
        }
        if sum == 0 {
            return Ok(BTreeSet::from([MetaWord::default()]));
        }
        Ok(self
            .unfold(MetaWord(vec![MetaLetter::bracket(sum, 0)]))?
            .into_iter()
            .map(|mw| MetaWord::from_symbols(&mw.symbols(), None))
            .collect())
    }

    pub fn fundamental_expansions(
        &self,
        extra_sums: &[i32],
    ) -> Result<BTreeMap<i32, BTreeSet<MetaWord>>, ProverError> {
        let mut out = BTreeMap::new();
        for k in (1..self.spec.b()).chain(extra_sums.iter().copied()) {
            out.insert(k, self.expansion(k)?);
        }
        Ok(out)
    }

    pub fn prove_obligation(&self, ob: &Obligation) -> ProofOutcome {
        self.prove_obligation_traced(ob).0
    }

    pub fn prove_obligation_traced(&self, ob: &Obligation) -> (ProofOutcome, PurgeTrace) {
        let mut trace = PurgeTrace::default();
        let start = ob.to_meta_word();
        let mut survivors: Vec<MetaWord> = if self.purgeable(&start) {
            Vec::new()
        } else {
            match self.unfold(start) {
                Ok(s) => s,
                Err(_) => {
                    return (
                        ProofOutcome::Inconclusive {
                            survivors: Vec::new(),
                            purges_used: 0,
                        },
                        trace,
                    )
                }
            }
        };
        for round in 0..=self.config.max_purges {
            if round > 0 {
                match self.purge_round(&survivors) {
                    Some(next) => survivors = next,
                    None => {
                        return (
                            ProofOutcome::Inconclusive {
                                survivors,
                                purges_used: round,
                            },
                            trace,
                        )
                    }
                }
            }
            survivors.sort();
            survivors.dedup();
            trace.rounds.push((
                survivors.len(),
                survivors.iter().take(TRACE_SAMPLE).cloned().collect(),
            ));
            if let Some(counterexample) = survivors
                .iter()
                .filter_map(MetaWord::literal)
                .find(|w| is_mishap_free(&w.0, &self.spec))
            {
                return (ProofOutcome::Disproved { counterexample }, trace);
            }
            if survivors.is_empty() {
                return (ProofOutcome::Proved { purges_used: round }, trace);
            }
        }
        (
            ProofOutcome::Inconclusive {
                survivors,
                purges_used: self.config.max_purges,
            },
            trace,
        )
    }

    /// One round: every fundamental bracket of every survivor is replaced by
    /// its expansion. `None` when the survivor cap is exceeded.
    fn purge_round(&self, survivors: &[MetaWord]) -> Option<Vec<MetaWord>> {
        let mut out: HashSet<MetaWord> = HashSet::new();
        for mw in survivors {
            // Substitute right to left so earlier positions stay valid.
            let positions: Vec<(usize, i32)> = mw.brackets().collect();
            let mut partial = vec![mw.clone()];
            for &(pos, sum) in positions.iter().rev() {
                let lemma = &self.lemmas[&sum];
                let mut next = Vec::new();
                for p in &partial {
                    for rhs in lemma {
                        let cand = p.substitute(pos, rhs);
                        if !self.purgeable(&cand) {
                            next.push(cand);
                        }
                    }
                }
                if next.len() > self.config.max_survivors {
                    return None;
                }
                partial = next;
            }
            out.extend(partial);
            if out.len() > self.config.max_survivors {
                return None;
            }
        }
        Some(out.into_iter().collect())
    }

    /// Obligations for "`bad` middle ⇒ `good` middle is bad" with middles of
    /// sum `middle_sum`: one per way a mishap can straddle the `bad` context
    /// boundary while the middle itself is mishap-free.
    pub fn potential_mishap_obligations(
        &self,
        good: &Context,
        bad: &Context,
        middle_sum: i64,
    ) -> Result<Vec<Obligation>, ProverError> {
        let spec = &self.spec;
        if !is_mishap_free(&bad.prefix.0, spec) || !is_mishap_free(&bad.suffix.0, spec) {
            return Err(ProverError::InherentContextMishap(bad.clone()));
        }
        let (a, b) = (spec.a() as i64, spec.b() as i64);
        let br = |s: i64| Segment::Bracket(s as i32);
        let mut shapes: Vec<Vec<Segment>> = Vec::new();
        let pre = &bad.prefix.0;
        let suf = &bad.suffix.0;
        let up_tails: Vec<i64> = (0..pre.len())
            .filter(|&i| pre[i] == spec.up())
            .map(|i| pre[i + 1..].iter().map(|&l| l as i64).sum())
            .collect();
        let down_heads: Vec<i64> = (0..suf.len())
            .filter(|&j| suf[j] == spec.down())
            .map(|j| suf[..j].iter().map(|&l| l as i64).sum())
            .collect();
        // +a in the prefix, -b in the middle.
        for &tail in &up_tails {
            let x = -a - tail;
            let y = middle_sum - x + b;
            shapes.push(vec![
                br(x),
                Segment::Literal(Word(vec![spec.down()])),
                br(y),
            ]);
        }
        // +a in the middle, -b in the suffix.
        for &head in &down_heads {
            let y = -a - head;
            let x = middle_sum - a - y;
            shapes.push(vec![br(x), Segment::Literal(Word(vec![spec.up()])), br(y)]);
        }
        // +a in the prefix, -b in the suffix.
        if up_tails
            .iter()
            .any(|&t| down_heads.iter().any(|&h| t + middle_sum + h == -a))
        {
            shapes.push(vec![br(middle_sum)]);
        }
        let mut obligations: Vec<Obligation> = shapes
            .into_iter()
            .map(|shape| Obligation::wrapped(good, shape))
            .collect();
        obligations.sort();
        obligations.dedup();
        Ok(obligations)
    }

    fn emptiness_obligation(&self, ctx: &Context) -> Option<Obligation> {
        let middle = -ctx.sum();
        let g = num_integer::gcd(self.spec.a() as i64, self.spec.b() as i64);
        if middle % g != 0 {
            return None;
        }
        Some(Obligation::wrapped(
            ctx,
            vec![Segment::Bracket(middle as i32)],
        ))
    }

    /// Every `w1 [-(sum w1 + sum w2)] w2` contains a mishap.
    pub fn prove_empty_context(&self, ctx: &Context) -> ProofOutcome {
        match self.emptiness_obligation(ctx) {
            // No middle can balance the context at all.
            None => ProofOutcome::Proved { purges_used: 0 },
            Some(ob) => self.prove_obligation(&ob),
        }
    }

    pub fn prove_empty_leaf(&self, t: &GrammarTree, v: &Vertex) -> LeafReport {
        let _ = t;
        let outcome = self.prove_empty_context(&v.ctx);
        LeafReport {
            id: v.id,
            kind: LeafKind::Empty,
            obligations: 1,
            outcome,
        }
    }

    /// Both directions of `w1 v w2 good ⇔ w1' v w2' good`.
    pub fn clone_obligations(&self, ctx: &Context, target: &Context) -> Vec<Obligation> {
        let mut obligations = Vec::new();
        if ctx.sum() != target.sum() {
            // Equal residuals with different sums means both are empty.
            obligations.extend(self.emptiness_obligation(ctx));
            obligations.extend(self.emptiness_obligation(target));
        } else {
            let middle_sum = -ctx.sum();
            for (good, bad) in [(target, ctx), (ctx, target)] {
                match self.potential_mishap_obligations(good, bad, middle_sum) {
                    Ok(obs) => obligations.extend(obs),
                    // `bad` is always bad, so `good` must be empty too.
                    Err(_) => obligations.extend(self.emptiness_obligation(good)),
                }
            }
        }
        obligations.sort();
        obligations.dedup();
        obligations
    }

    pub fn prove_clone(&self, ctx: &Context, target: &Context) -> (ProofOutcome, usize) {
        let obligations = self.clone_obligations(ctx, target);
        let mut purges = 0;
        let mut inconclusive: Option<ProofOutcome> = None;
        for ob in &obligations {
            match self.prove_obligation(ob) {
                ProofOutcome::Proved { purges_used } => purges = purges.max(purges_used),
                ProofOutcome::Disproved { counterexample } => {
                    if self.distinguishes(ctx, target, &counterexample) {
                        return (
                            ProofOutcome::Disproved { counterexample },
                            obligations.len(),
                        );
                    }
                    inconclusive.get_or_insert(ProofOutcome::Inconclusive {
                        survivors: Vec::new(),
                        purges_used: 0,
                    });
                }
                other => {
                    inconclusive.get_or_insert(other);
                }
            }
        }
        let outcome = inconclusive.unwrap_or(ProofOutcome::Proved {
            purges_used: purges,
        });
        (outcome, obligations.len())
    }

    /// `word` is `w1 v w2` for one of the contexts, and exactly one of the
    /// two wrappings of `v` is good.
    fn distinguishes(&self, x: &Context, y: &Context, word: &Word) -> bool {
        [x, y].iter().any(|c| {
            let n = word.len();
            if n < c.len() || !word.0.starts_with(&c.prefix.0) || !word.0.ends_with(&c.suffix.0) {
                return false;
            }
            let v = Word(word.0[c.prefix.len()..n - c.suffix.len()].to_vec());
            is_good(&x.wrap(&v).0, &self.spec) != is_good(&y.wrap(&v).0, &self.spec)
        })
    }

    pub fn prove_clone_leaf(&self, t: &GrammarTree, v: &Vertex) -> LeafReport {
        let VertexKind::CloneLeaf { target, .. } = v.kind else {
            panic!("vertex {} is not a clone leaf", v.id);
        };
        let (outcome, obligations) = self.prove_clone(&v.ctx, &t.vertex(target).ctx);
        LeafReport {
            id: v.id,
            kind: LeafKind::Clone,
            obligations,
            outcome,
        }
    }

    /// The obligations a leaf's claim reduces to.
    pub fn leaf_obligations(&self, t: &GrammarTree, v: &Vertex) -> Vec<Obligation> {
        match v.kind {
            VertexKind::EmptyLeaf => self.emptiness_obligation(&v.ctx).into_iter().collect(),
            VertexKind::CloneLeaf { target, .. } => {
                self.clone_obligations(&v.ctx, &t.vertex(target).ctx)
            }
            _ => Vec::new(),
        }
    }

    pub fn prove_grammar(&self, t: &GrammarTree) -> Result<ProofReport, ProverError> {
        if t.spec != self.spec {
            return Err(ProverError::MalformedTree("alphabet mismatch".into()));
        }
        t.validate().map_err(ProverError::MalformedTree)?;
        let mut leaves = Vec::new();
        for v in &t.vertices {
            match v.kind {
                VertexKind::Internal { .. } => {}
                VertexKind::EmptyLeaf => leaves.push(self.prove_empty_leaf(t, v)),
                VertexKind::CloneLeaf { .. } => leaves.push(self.prove_clone_leaf(t, v)),
                VertexKind::Undecided => {
                    return Err(ProverError::MalformedTree(format!(
                        "vertex {} is undecided",
                        v.id
                    )))
                }
            }
        }
        Ok(ProofReport {
            spec: self.spec,
            max_purges: self.config.max_purges,
            leaves,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeafKind {
    Empty,
    Clone,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeafReport {
    pub id: VertexId,
    pub kind: LeafKind,
    pub obligations: usize,
    pub outcome: ProofOutcome,
}

impl fmt::Display for LeafReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            LeafKind::Empty => "EMP",
            LeafKind::Clone => "CLO",
        };
        write!(f, "leaf {} {} ", self.id, kind)?;
        match &self.outcome {
            ProofOutcome::Proved { purges_used } => write!(f, "PROVED p={purges_used}"),
            ProofOutcome::Disproved { counterexample } => write!(f, "DISPROVED w={counterexample}"),
            ProofOutcome::Inconclusive { survivors, .. } => {
                write!(f, "INCONCLUSIVE n={}", survivors.len())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    True,
    False,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::True => "true",
            Verdict::False => "false",
            Verdict::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofReport {
    pub spec: AlphabetSpec,
    pub max_purges: usize,
    pub leaves: Vec<LeafReport>,
}

impl ProofReport {
    pub fn verdict(&self) -> Verdict {
        let outcomes = || self.leaves.iter().map(|l| &l.outcome);
        if outcomes().any(|o| matches!(o, ProofOutcome::Disproved { .. })) {
            Verdict::False
        } else if outcomes().all(ProofOutcome::is_proved) {
            Verdict::True
        } else {
            Verdict::Unknown
        }
    }

    pub fn max_purges_used(&self) -> usize {
        self.leaves
            .iter()
            .filter_map(|l| match l.outcome {
                ProofOutcome::Proved { purges_used } => Some(purges_used),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    /// Leaves whose claim was not proved.
    pub fn failures(&self) -> impl Iterator<Item = &LeafReport> {
        self.leaves.iter().filter(|l| !l.outcome.is_proved())
    }
}

/// `proof ab <a> <b> max-purges <n> rounds-after-unfold`, one line per leaf,
/// then `verdict true|false|unknown`.
impl fmt::Display for ProofReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "proof ab {} {} max-purges {} rounds-after-unfold",
            self.spec.a(),
            self.spec.b(),
            self.max_purges
        )?;
        for leaf in &self.leaves {
            writeln!(f, "{leaf}")?;
        }
        writeln!(f, "verdict {}", self.verdict())
    }
}

pub fn prove_grammar(t: &GrammarTree, max_purges: usize) -> Result<ProofReport, ProverError> {
    let prover = Prover::new(
        t.spec,
        ProverConfig {
            max_purges,
            ..ProverConfig::default()
        },
    )?;
    prover.prove_grammar(t)
}
