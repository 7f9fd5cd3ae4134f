//! Empirical discovery of a linear grammar as a binary family tree of
//! residual languages `L(w1, w2)`.
//!
//! Growth is breadth-first. Each new context is classified against the
//! corpus: empty residual → [`VertexKind::EmptyLeaf`]; same residual as a
//! strictly shorter vertex → [`VertexKind::CloneLeaf`]; otherwise it is split
//! either after `w1` (head way) or before `w2` (tail way), keeping only the
//! chosen pair of children.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::wordcore::{self, is_good, AlphabetSpec, Corpus, Word, WordError};

pub type VertexId = usize;

pub const DEFAULT_MAX_VERTICES: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiscoveryError {
    #[error(
        "middle budget {budget} for context length {context_len} is below the minimum {minimum}"
    )]
    BudgetTooSmall {
        budget: usize,
        minimum: usize,
        context_len: usize,
    },
    #[error("discovery stopped: {reason}")]
    LimitExceeded {
        reason: String,
        partial: Box<GrammarTree>,
    },
    #[error(transparent)]
    Word(#[from] WordError),
}

/// A residual-language context `[w1, w2]`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Context {
    pub prefix: Word,
    pub suffix: Word,
}

impl Context {
    pub fn new(prefix: Word, suffix: Word) -> Self {
        Context { prefix, suffix }
    }

    pub fn root() -> Self {
        Context::default()
    }

    /// Combined length `len(w1) + len(w2)`.
    pub fn len(&self) -> usize {
        self.prefix.len() + self.suffix.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn sum(&self) -> i64 {
        self.prefix.sum() + self.suffix.sum()
    }

    /// `w1 · v · w2`.
    pub fn wrap(&self, middle: &Word) -> Word {
        Word::concat(&[&self.prefix, middle, &self.suffix])
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}; {}]", self.prefix, self.suffix)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Way {
    Head,
    Tail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexKind {
    Internal {
        way: Way,
        left: VertexId,
        right: VertexId,
    },
    EmptyLeaf,
    CloneLeaf {
        target: VertexId,
        delta_len: usize,
    },
    /// Not yet classified; only present in partial trees.
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub id: VertexId,
    pub ctx: Context,
    pub kind: VertexKind,
    /// Whether `w1·w2` itself is good.
    pub has_singleton: bool,
}

impl Vertex {
    pub fn context_sum(&self) -> i64 {
        self.ctx.sum()
    }

    pub fn is_leaf(&self) -> bool {
        matches!(
            self.kind,
            VertexKind::EmptyLeaf | VertexKind::CloneLeaf { .. }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrammarTree {
    pub spec: AlphabetSpec,
    pub vertices: Vec<Vertex>,
    /// Corpus length the discovery run used.
    pub corpus_max_len: usize,
}

impl GrammarTree {
    pub const ROOT: VertexId = 0;

    pub fn root(&self) -> &Vertex {
        &self.vertices[Self::ROOT]
    }

    pub fn vertex(&self, id: VertexId) -> &Vertex {
        &self.vertices[id]
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn leaves(&self) -> impl Iterator<Item = &Vertex> {
        self.vertices.iter().filter(|v| v.is_leaf())
    }

    pub fn is_finished(&self) -> bool {
        self.vertices
            .iter()
            .all(|v| !matches!(v.kind, VertexKind::Undecided))
    }

    /// Structural invariants: root context, children well-formed and owned
    /// by exactly one parent, clone targets strictly shorter, singleton flags.
    pub fn validate(&self) -> Result<(), String> {
        if self.vertices.is_empty() {
            return Err("tree has no vertices".into());
        }
        if !self.root().ctx.is_empty() {
            return Err("root context is not [e; e]".into());
        }
        let n = self.vertices.len();
        let mut parent = vec![None; n];
        for (i, v) in self.vertices.iter().enumerate() {
            if v.id != i {
                return Err(format!("vertex at position {i} has id {}", v.id));
            }
            for w in [&v.ctx.prefix, &v.ctx.suffix] {
                self.spec.check(w).map_err(|e| format!("vertex {i}: {e}"))?;
            }
            let single = is_good(v.ctx.wrap(&Word::empty()).letters(), &self.spec);
            if v.has_singleton != single {
                return Err(format!("vertex {i}: singleton flag should be {single}"));
            }
            match v.kind {
                VertexKind::Internal { way, left, right } => {
                    if left >= n || right >= n || left == right {
                        return Err(format!("vertex {i}: dangling children {left},{right}"));
                    }
                    let (l, r) = candidate_splits(&v.ctx, &self.spec).pair(way);
                    if self.vertices[left].ctx != l || self.vertices[right].ctx != r {
                        return Err(format!(
                            "vertex {i}: children do not match the {way:?} split"
                        ));
                    }
                    for c in [left, right] {
                        if c == Self::ROOT {
                            return Err(format!("vertex {i}: root used as a child"));
                        }
                        if let Some(p) = parent[c] {
                            return Err(format!("vertex {c} has two parents {p} and {i}"));
                        }
                        parent[c] = Some(i);
                    }
                }
                VertexKind::CloneLeaf { target, delta_len } => {
                    if target >= n {
                        return Err(format!("vertex {i}: dangling clone target {target}"));
                    }
                    let t = &self.vertices[target];
                    if t.ctx.len() >= v.ctx.len() || v.ctx.len() - t.ctx.len() != delta_len {
                        return Err(format!(
                            "vertex {i}: clone target {target} is not strictly shorter by {delta_len}"
                        ));
                    }
                }
                VertexKind::EmptyLeaf | VertexKind::Undecided => {}
            }
        }
        if let Some(orphan) = (1..n).find(|&i| parent[i].is_none()) {
            return Err(format!("vertex {orphan} has no parent"));
        }
        Ok(())
    }
}

/// The two candidate child pairs of a context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Splits {
    pub head: (Context, Context),
    pub tail: (Context, Context),
}

impl Splits {
    pub fn pair(&self, way: Way) -> (Context, Context) {
        match way {
            Way::Head => self.head.clone(),
            Way::Tail => self.tail.clone(),
        }
    }
}

pub fn candidate_splits(ctx: &Context, spec: &AlphabetSpec) -> Splits {
    let [up, down] = spec.letters();
    let head = |l| Context::new(ctx.prefix.pushed(l), ctx.suffix.clone());
    let tail = |l| Context::new(ctx.prefix.clone(), ctx.suffix.prepended(l));
    Splits {
        head: (head(up), head(down)),
        tail: (tail(up), tail(down)),
    }
}

/// Budget-checked residual comparisons against a corpus.
#[derive(Debug, Clone, Copy)]
pub struct ResidualOracle<'a> {
    pub corpus: &'a Corpus,
    /// Smallest middle-length budget accepted as a reliable comparison.
    pub min_budget: usize,
}

impl<'a> ResidualOracle<'a> {
    pub fn new(corpus: &'a Corpus) -> Self {
        ResidualOracle {
            corpus,
            min_budget: corpus.spec().period(),
        }
    }

    pub fn budget(&self, context_len: usize) -> Result<usize, DiscoveryError> {
        let budget = self.corpus.max_len().saturating_sub(context_len);
        if budget < self.min_budget || context_len > self.corpus.max_len() {
            return Err(DiscoveryError::BudgetTooSmall {
                budget,
                minimum: self.min_budget,
                context_len,
            });
        }
        Ok(budget)
    }

    pub fn middles(&self, ctx: &Context, budget: usize) -> Vec<Word> {
        wordcore::middles_iter(self.corpus, &ctx.prefix, &ctx.suffix, budget).collect()
    }

    /// Number of middles completing `ctx` to a good word of the top corpus
    /// length (the largest multiple of `a + b` in the corpus).
    pub fn top_length_count(&self, ctx: &Context) -> u64 {
        let period = self.corpus.spec().period();
        let top = self.corpus.max_len() / period * period;
        self.corpus
            .stratum(top)
            .iter()
            .filter(|w| w.0.starts_with(&ctx.prefix.0) && w.0.ends_with(&ctx.suffix.0))
            .filter(|w| w.len() >= ctx.len())
            .count() as u64
    }

    pub fn is_empty(&self, ctx: &Context) -> Result<bool, DiscoveryError> {
        let budget = self.budget(ctx.len())?;
        Ok(
            wordcore::middles_iter(self.corpus, &ctx.prefix, &ctx.suffix, budget)
                .next()
                .is_none(),
        )
    }

    pub fn equal(&self, x: &Context, y: &Context) -> Result<bool, DiscoveryError> {
        let budget = self.budget(x.len().max(y.len()))?;
        Ok(self.middles(x, budget) == self.middles(y, budget))
    }
}

pub fn residuals_equal_empirically(
    c: &Corpus,
    x: &Context,
    y: &Context,
) -> Result<bool, DiscoveryError> {
    ResidualOracle::new(c).equal(x, y)
}

pub fn is_empirically_empty(c: &Corpus, ctx: &Context) -> Result<bool, DiscoveryError> {
    ResidualOracle::new(c).is_empty(ctx)
}

/// First vertex (in creation order) with a strictly shorter context and the
/// same truncated residual.
pub fn find_clone_target(
    t: &GrammarTree,
    c: &Corpus,
    ctx: &Context,
) -> Result<Option<VertexId>, DiscoveryError> {
    let oracle = ResidualOracle::new(c);
    let budget = oracle.budget(ctx.len())?;
    let mine = oracle.middles(ctx, budget);
    if mine.is_empty() {
        return Ok(None);
    }
    Ok(scan_clone_candidates(t, &oracle, ctx, budget, &mine))
}

fn scan_clone_candidates(
    t: &GrammarTree,
    oracle: &ResidualOracle<'_>,
    ctx: &Context,
    budget: usize,
    mine: &[Word],
) -> Option<VertexId> {
    let sum = ctx.sum();
    t.vertices
        .iter()
        .filter(|v| v.ctx.len() < ctx.len() && v.context_sum() == sum)
        .filter(|v| !matches!(v.kind, VertexKind::EmptyLeaf))
        .find(|v| oracle.middles(&v.ctx, budget) == mine)
        .map(|v| v.id)
}

/// The part of `count` built from primes dividing `binomial(a+b, b)`.
pub fn congeniality_score(count: u64, spec: &AlphabetSpec) -> u64 {
    if count == 0 {
        return 0;
    }
    let mut rest = count;
    let mut m = spec.m();
    let mut p = 2;
    while m > 1 {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            while rest.is_multiple_of(p) {
                rest /= p;
            }
        }
        p += 1;
    }
    count / rest
}

/// Congeniality of a candidate child pair, ordered so that larger is better.
///
/// An empty child counts as maximally congenial (its cardinality 0 shares
/// every power of `m`), so pairs are compared first by how many children
/// are empty and then by the product of the smooth parts of the others.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct PairScore {
    pub empty_children: u8,
    pub smooth_product: u128,
}

impl PairScore {
    pub fn new(counts: [u64; 2], spec: &AlphabetSpec) -> Self {
        let mut empty_children = 0;
        let mut smooth_product = 1u128;
        for c in counts {
            if c == 0 {
                empty_children += 1;
            } else {
                smooth_product = smooth_product.saturating_mul(congeniality_score(c, spec) as u128);
            }
        }
        PairScore {
            empty_children,
            smooth_product,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct DiscoveryLimits {
    pub max_vertices: usize,
}

impl Default for DiscoveryLimits {
    fn default() -> Self {
        DiscoveryLimits {
            max_vertices: DEFAULT_MAX_VERTICES,
        }
    }
}

pub fn discover_grammar(
    spec: &AlphabetSpec,
    corpus_max_len: usize,
    limits: DiscoveryLimits,
) -> Result<GrammarTree, DiscoveryError> {
    let corpus = wordcore::generate_corpus(spec, corpus_max_len)?;
    discover_with_corpus(&corpus, limits)
}

pub fn discover_with_corpus(
    corpus: &Corpus,
    limits: DiscoveryLimits,
) -> Result<GrammarTree, DiscoveryError> {
    let spec = *corpus.spec();
    let oracle = ResidualOracle::new(corpus);
    let mut tree = GrammarTree {
        spec,
        vertices: Vec::new(),
        corpus_max_len: corpus.max_len(),
    };
    let push = |tree: &mut GrammarTree, ctx: Context| {
        let id = tree.vertices.len();
        let has_singleton = is_good(ctx.wrap(&Word::empty()).letters(), &spec);
        tree.vertices.push(Vertex {
            id,
            ctx,
            kind: VertexKind::Undecided,
            has_singleton,
        });
        id
    };
    push(&mut tree, Context::root());
    let mut queue = VecDeque::from([GrammarTree::ROOT]);

    let fail = |tree: &GrammarTree, reason: String| DiscoveryError::LimitExceeded {
        reason,
        partial: Box::new(tree.clone()),
    };

    while let Some(id) = queue.pop_front() {
        let ctx = tree.vertices[id].ctx.clone();
        let budget = oracle
            .budget(ctx.len())
            .map_err(|e| fail(&tree, format!("vertex {id} {ctx}: {e}")))?;
        let mine = oracle.middles(&ctx, budget);
        if mine.is_empty() {
            tree.vertices[id].kind = VertexKind::EmptyLeaf;
            continue;
        }
        if let Some(target) = scan_clone_candidates(&tree, &oracle, &ctx, budget, &mine) {
            let delta_len = ctx.len() - tree.vertices[target].ctx.len();
            tree.vertices[id].kind = VertexKind::CloneLeaf { target, delta_len };
            continue;
        }

        let splits = candidate_splits(&ctx, &spec);
        let score = |(l, r): &(Context, Context)| {
            PairScore::new(
                [oracle.top_length_count(l), oracle.top_length_count(r)],
                &spec,
            )
        };
        let way = if score(&splits.tail) > score(&splits.head) {
            Way::Tail
        } else {
            Way::Head
        };
        if tree.vertices.len() + 2 > limits.max_vertices {
            return Err(fail(
                &tree,
                format!("vertex limit {} reached", limits.max_vertices),
            ));
        }
        let (l, r) = splits.pair(way);
        let left = push(&mut tree, l);
        let right = push(&mut tree, r);
        tree.vertices[id].kind = VertexKind::Internal { way, left, right };
        queue.push_back(left);
        queue.push_back(right);
    }
    Ok(tree)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrammarIoError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid grammar tree: {0}")]
    Invariant(String),
}

impl fmt::Display for GrammarTree {
    /// Line-oriented text form: a header `ab <a> <b> corpus <max_len>` and
    /// one `id | w1 | w2 | kind | way | links | singleton` line per vertex.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "ab {} {} corpus {}",
            self.spec.a(),
            self.spec.b(),
            self.corpus_max_len
        )?;
        for v in &self.vertices {
            let (kind, way, links) = match v.kind {
                VertexKind::Internal { way, left, right } => (
                    "INT",
                    match way {
                        Way::Head => "H",
                        Way::Tail => "T",
                    },
                    format!("{left},{right}"),
                ),
                VertexKind::EmptyLeaf => ("EMP", "-", "-".to_string()),
                VertexKind::CloneLeaf { target, .. } => ("CLO", "-", target.to_string()),
                VertexKind::Undecided => ("UND", "-", "-".to_string()),
            };
            writeln!(
                f,
                "{} | {} | {} | {} | {} | {} | {}",
                v.id,
                v.ctx.prefix,
                v.ctx.suffix,
                kind,
                way,
                links,
                u8::from(v.has_singleton)
            )?;
        }
        Ok(())
    }
}

impl FromStr for GrammarTree {
    type Err = GrammarIoError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |line: usize, message: String| GrammarIoError::Parse { line, message };
        let mut lines = s.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (hl, header) = lines
            .next()
            .ok_or_else(|| err(1, "missing header".into()))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        let (a, b, corpus_max_len) = match h.as_slice() {
            ["ab", a, b, "corpus", n] => {
                let num = |t: &str| t.parse::<i64>().map_err(|e| err(hl + 1, e.to_string()));
                (num(a)?, num(b)?, num(n)?)
            }
            _ => return Err(err(hl + 1, format!("bad header {header:?}"))),
        };
        let spec = AlphabetSpec::new(a, b).map_err(|e| err(hl + 1, e.to_string()))?;
        let corpus_max_len =
            usize::try_from(corpus_max_len).map_err(|e| err(hl + 1, e.to_string()))?;

        let mut vertices = Vec::new();
        let mut clone_targets = Vec::new();
        for (i, line) in lines {
            let ln = i + 1;
            let f: Vec<&str> = line.split('|').map(str::trim).collect();
            let [id, w1, w2, kind, way, links, single] = f.as_slice() else {
                return Err(err(ln, format!("expected 7 fields, got {}", f.len())));
            };
            let id: VertexId = id.parse().map_err(|_| err(ln, format!("bad id {id:?}")))?;
            let word = |t: &str| t.parse::<Word>().map_err(|e| err(ln, e.to_string()));
            let ctx = Context::new(word(w1)?, word(w2)?);
            let has_singleton = match *single {
                "0" => false,
                "1" => true,
                other => return Err(err(ln, format!("bad singleton flag {other:?}"))),
            };
            let ids = |t: &str| -> Result<Vec<VertexId>, GrammarIoError> {
                t.split(',')
                    .map(|x| x.parse().map_err(|_| err(ln, format!("bad link {t:?}"))))
                    .collect()
            };
            let kind = match (*kind, *way) {
                ("INT", w @ ("H" | "T")) => match ids(links)?.as_slice() {
                    &[left, right] => VertexKind::Internal {
                        way: if w == "H" { Way::Head } else { Way::Tail },
                        left,
                        right,
                    },
                    _ => return Err(err(ln, "internal vertex needs two children".into())),
                },
                ("EMP", "-") if *links == "-" => VertexKind::EmptyLeaf,
                ("CLO", "-") => match ids(links)?.as_slice() {
                    &[target] => {
                        clone_targets.push((id, target));
                        VertexKind::CloneLeaf {
                            target,
                            delta_len: 0,
                        }
                    }
                    _ => return Err(err(ln, "clone leaf needs one target".into())),
                },
                _ => return Err(err(ln, format!("bad kind/way {kind:?} {way:?}"))),
            };
            vertices.push(Vertex {
                id,
                ctx,
                kind,
                has_singleton,
            });
        }
        for (id, target) in clone_targets {
            let (Some(v), Some(t)) = (vertices.get(id), vertices.get(target)) else {
                return Err(GrammarIoError::Invariant(format!(
                    "vertex {id}: dangling clone target {target}"
                )));
            };
            let delta_len = v.ctx.len().saturating_sub(t.ctx.len());
            vertices[id].kind = VertexKind::CloneLeaf { target, delta_len };
        }
        let tree = GrammarTree {
            spec,
            vertices,
            corpus_max_len,
        };
        tree.validate().map_err(GrammarIoError::Invariant)?;
        Ok(tree)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wordcore::generate_corpus;

    fn s32() -> AlphabetSpec {
        AlphabetSpec::new(3, 2).unwrap()
    }

    fn ctx(p: &[i32], s: &[i32]) -> Context {
        Context::new(Word(p.to_vec()), Word(s.to_vec()))
    }

    #[test]
    fn splits_unfold_definition() {
        let s = candidate_splits(&Context::root(), &s32());
        assert_eq!(s.head, (ctx(&[3], &[]), ctx(&[-2], &[])));
        assert_eq!(s.tail, (ctx(&[], &[3]), ctx(&[], &[-2])));
        let s = candidate_splits(&ctx(&[3], &[-2]), &s32());
        assert_eq!(s.head, (ctx(&[3, 3], &[-2]), ctx(&[3, -2], &[-2])));
        assert_eq!(s.tail, (ctx(&[3], &[3, -2]), ctx(&[3], &[-2, -2])));
    }

    #[test]
    fn congeniality() {
        let s = s32();
        assert_eq!(congeniality_score(100, &s), 100);
        assert_eq!(congeniality_score(30, &s), 10);
        assert_eq!(congeniality_score(7, &s), 1);
        assert_eq!(congeniality_score(0, &s), 0);
        let s11 = AlphabetSpec::new(1, 1).unwrap();
        assert_eq!(congeniality_score(24, &s11), 8);
    }

    #[test]
    fn empirical_equality_and_emptiness() {
        let c = generate_corpus(&s32(), 20).unwrap();
        let root = Context::root();
        assert!(residuals_equal_empirically(&c, &root, &root).unwrap());
        assert!(!residuals_equal_empirically(&c, &root, &ctx(&[3], &[-2, -2])).unwrap());
        // Different sums, both empty.
        let (e1, e2) = (ctx(&[3, -2, -2, 3, -2, -2], &[]), ctx(&[3, 3], &[3, 3]));
        assert_ne!(e1.sum(), e2.sum());
        assert!(residuals_equal_empirically(&c, &e1, &e2).unwrap());
        assert!(is_empirically_empty(&c, &e1).unwrap());
        assert!(!is_empirically_empty(&c, &root).unwrap());
        assert!(!is_empirically_empty(&c, &ctx(&[3], &[-2])).unwrap());
    }

    #[test]
    fn budget_too_small() {
        let c = generate_corpus(&s32(), 8).unwrap();
        assert!(matches!(
            is_empirically_empty(&c, &ctx(&[3, 3, 3, 3], &[])),
            Err(DiscoveryError::BudgetTooSmall { budget: 4, .. })
        ));
    }

    #[test]
    fn root_has_no_clone_target() {
        let c = generate_corpus(&s32(), 10).unwrap();
        let t = GrammarTree {
            spec: s32(),
            vertices: vec![],
            corpus_max_len: 10,
        };
        assert_eq!(find_clone_target(&t, &c, &Context::root()).unwrap(), None);
    }

    fn discovered(a: i64, b: i64, len: usize) -> (GrammarTree, Corpus) {
        let s = AlphabetSpec::new(a, b).unwrap();
        let c = generate_corpus(&s, len).unwrap();
        let t = discover_with_corpus(&c, DiscoveryLimits::default()).unwrap();
        (t, c)
    }

    #[test]
    fn discovers_finished_trees() {
        for (a, b, len) in [(1, 1, 12), (2, 1, 12), (3, 1, 16), (3, 2, 20)] {
            let (t, _) = discovered(a, b, len);
            assert!(t.is_finished());
            t.validate().unwrap();
            assert!(t
                .leaves()
                .any(|v| matches!(v.kind, VertexKind::CloneLeaf { .. })));
        }
    }

    #[test]
    fn clone_chains_terminate() {
        let (t, _) = discovered(3, 2, 20);
        for v in t.leaves() {
            let mut cur = v;
            let mut steps = 0;
            while let VertexKind::CloneLeaf { target, .. } = cur.kind {
                let next = t.vertex(target);
                assert!(next.ctx.len() < cur.ctx.len());
                cur = next;
                steps += 1;
                assert!(steps <= t.len());
            }
        }
    }

    #[test]
    fn partition_property() {
        let (t, c) = discovered(3, 2, 20);
        let oracle = ResidualOracle::new(&c);
        for v in &t.vertices {
            let VertexKind::Internal { way, left, right } = v.kind else {
                continue;
            };
            let budget = c.max_len() - v.ctx.len();
            let mut expected = oracle.middles(&v.ctx, budget);
            expected.sort();
            let mut got: Vec<Word> = Vec::new();
            if v.has_singleton {
                got.push(Word::empty());
            }
            for (child, is_left) in [(left, true), (right, false)] {
                let l = if is_left { 3 } else { -2 };
                for m in oracle.middles(&t.vertex(child).ctx, budget - 1) {
                    got.push(match way {
                        Way::Head => m.prepended(l),
                        Way::Tail => m.pushed(l),
                    });
                }
            }
            got.sort();
            assert_eq!(got, expected, "vertex {}", v.id);
        }
    }

    #[test]
    fn contexts_are_distinct_and_deterministic() {
        let (t1, _) = discovered(3, 2, 20);
        let (t2, _) = discovered(3, 2, 20);
        assert_eq!(t1.to_string(), t2.to_string());
        let mut ctxs: Vec<&Context> = t1.vertices.iter().map(|v| &v.ctx).collect();
        ctxs.sort();
        ctxs.dedup();
        assert_eq!(ctxs.len(), t1.len());
    }

    #[test]
    fn vertex_limit() {
        let s = s32();
        let err = discover_grammar(&s, 20, DiscoveryLimits { max_vertices: 1 }).unwrap_err();
        match err {
            DiscoveryError::LimitExceeded { partial, .. } => assert_eq!(partial.len(), 1),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn text_roundtrip() {
        let (t, _) = discovered(3, 2, 20);
        let text = t.to_string();
        let back: GrammarTree = text.parse().unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_string(), text);
    }

    #[test]
    fn text_rejects_dangling_child() {
        let text = "ab 3 2 corpus 20\n0 | e | e | INT | H | 1,7 | 1\n1 | 3 | e | EMP | - | - | 0\n";
        assert!(matches!(
            text.parse::<GrammarTree>(),
            Err(GrammarIoError::Invariant(_))
        ));
        let bad = "ab 3 2 corpus 20\n0 | e | e | FOO | H | 1,2 | 1\n";
        assert!(matches!(
            bad.parse::<GrammarTree>(),
            Err(GrammarIoError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn header_parses_spec() {
        let t: GrammarTree = "ab 3 2 corpus 20\n0 | e | e | EMP | - | - | 1\n"
            .parse()
            .unwrap();
        assert_eq!(t.spec, s32());
        assert_eq!(t.corpus_max_len, 20);
    }
}
