//! Words over the weighted alphabet `{+a, -b}`, mishap avoidance, and
//! exhaustive enumeration of the good words.
//!
//! A *mishap* is a factor `+a [-a] -b`: an up-letter, then a (possibly
//! empty) stretch summing to `-a`, then a down-letter. Read as a lattice
//! path, it is an up-step leaving height `h` followed later by a
//! down-step leaving the same height `h`. A word is *good* when it sums to
//! zero and contains no mishap.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use thiserror::Error;

/// Largest word length the exhaustive enumerators accept by default.
pub const DEFAULT_MAX_ENUMERATION_LEN: usize = 34;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("letter values must be positive, got a={a}, b={b}")]
    NonPositive { a: i64, b: i64 },
    #[error("a={a} and b={b} are not relatively prime")]
    NotCoprime { a: i64, b: i64 },
    #[error("binomial({n}, {k}) does not fit in 64 bits")]
    BinomialOverflow { n: u64, k: u64 },
    #[error("letter {letter} at position {position} is neither +{a} nor -{b}")]
    BadLetter {
        letter: i32,
        position: usize,
        a: i32,
        b: i32,
    },
    #[error("enumeration up to length {len} exceeds the budget of {limit}")]
    ResourceLimit { len: usize, limit: usize },
    #[error("cannot parse word {0:?}")]
    Parse(String),
}

/// The governing pair `(a, b)` with `gcd(a, b) = 1`; letters are `+a` and `-b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AlphabetSpec {
    a: i32,
    b: i32,
    m: u64,
}

impl AlphabetSpec {
    pub fn new(a: i64, b: i64) -> Result<Self, WordError> {
        if a <= 0 || b <= 0 || a > i32::MAX as i64 / 4 || b > i32::MAX as i64 / 4 {
            return Err(WordError::NonPositive { a, b });
        }
        if a.gcd(&b) != 1 {
            return Err(WordError::NotCoprime { a, b });
        }
        let m = binomial((a + b) as u64, b as u64)?;
        Ok(AlphabetSpec {
            a: a as i32,
            b: b as i32,
            m,
        })
    }

    /// Value of the positive letter.
    pub fn a(&self) -> i32 {
        self.a
    }

    /// Magnitude of the negative letter.
    pub fn b(&self) -> i32 {
        self.b
    }

    pub fn up(&self) -> i32 {
        self.a
    }

    pub fn down(&self) -> i32 {
        -self.b
    }

    /// `binomial(a + b, b)`.
    pub fn m(&self) -> u64 {
        self.m
    }

    /// Period of zero-sum lengths, `a + b`.
    pub fn period(&self) -> usize {
        (self.a + self.b) as usize
    }

    /// Both letters in canonical order (`+a` before `-b`).
    pub fn letters(&self) -> [i32; 2] {
        [self.a, -self.b]
    }

    pub fn check(&self, w: &Word) -> Result<(), WordError> {
        match w.0.iter().position(|&l| l != self.a && l != -self.b) {
            None => Ok(()),
            Some(position) => Err(WordError::BadLetter {
                letter: w.0[position],
                position,
                a: self.a,
                b: self.b,
            }),
        }
    }

    pub fn conforms(&self, w: &Word) -> bool {
        self.check(w).is_ok()
    }
}

pub fn binomial(n: u64, k: u64) -> Result<u64, WordError> {
    let k = k.min(n.saturating_sub(k));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return Err(WordError::BinomialOverflow { n, k });
        }
    }
    Ok(acc as u64)
}

/// A finite sequence of letters, stored as their signed values.
///
/// Ordered lexicographically with `+a` before `-b` (larger values first);
/// a proper prefix sorts before its extensions.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<i32>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn sum(&self) -> i64 {
        sum_of(&self.0)
    }

    pub fn concat(parts: &[&Word]) -> Word {
        Word(parts.iter().flat_map(|w| w.0.iter().copied()).collect())
    }

    pub fn pushed(&self, letter: i32) -> Word {
        let mut v = self.0.clone();
        v.push(letter);
        Word(v)
    }

    pub fn prepended(&self, letter: i32) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(letter);
        v.extend_from_slice(&self.0);
        Word(v)
    }
}

impl From<Vec<i32>> for Word {
    fn from(v: Vec<i32>) -> Self {
        Word(v)
    }
}

impl From<&[i32]> for Word {
    fn from(v: &[i32]) -> Self {
        Word(v.to_vec())
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        for (x, y) in self.0.iter().zip(&other.0) {
            match y.cmp(x) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Comma-separated letter values, or `e` for the empty word.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "e" {
            return Ok(Word::empty());
        }
        s.split(',')
            .map(|t| t.trim().parse::<i32>())
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
            .map_err(|_| WordError::Parse(s.to_string()))
    }
}

pub fn sum_of(letters: &[i32]) -> i64 {
    letters.iter().map(|&l| l as i64).sum()
}

/// True iff no factor `+a [-a] -b` occurs.
pub fn is_mishap_free(w: &[i32], spec: &AlphabetSpec) -> bool {
    // Heights at which an up-step has started so far.
    let mut up_heights: Vec<i64> = Vec::new();
    let mut h = 0i64;
    for &l in w {
        if l == spec.up() {
            up_heights.push(h);
        } else if l == spec.down() && up_heights.contains(&h) {
            return false;
        }
        h += l as i64;
    }
    true
}

pub fn is_good(w: &[i32], spec: &AlphabetSpec) -> bool {
    sum_of(w) == 0 && is_mishap_free(w, spec)
}

/// True iff some nonempty factor other than the whole word sums to zero.
pub fn has_proper_zero_factor(w: &[i32]) -> bool {
    let n = w.len();
    let mut prefix = Vec::with_capacity(n + 1);
    let mut h = 0i64;
    prefix.push(h);
    for &l in w {
        h += l as i64;
        prefix.push(h);
    }
    let mut seen: HashMap<i64, usize> = HashMap::new();
    for (i, &p) in prefix.iter().enumerate() {
        if let Some(&j) = seen.get(&p) {
            if !(j == 0 && i == n) {
                return true;
            }
        }
        // Keep the latest index so that only the (0, n) pair is exempt.
        seen.insert(p, i);
    }
    false
}

/// All good words of every length `0..=max_len`, each stratum in canonical order.
#[derive(Debug, Clone)]
pub struct Corpus {
    spec: AlphabetSpec,
    max_len: usize,
    strata: Vec<Vec<Word>>,
}

impl Corpus {
    pub fn spec(&self) -> &AlphabetSpec {
        &self.spec
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn stratum(&self, len: usize) -> &[Word] {
        self.strata.get(len).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn stratum_sizes(&self) -> Vec<usize> {
        self.strata.iter().map(Vec::len).collect()
    }

    /// Every word, shortest first.
    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.strata.iter().flatten()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.strata
            .get(w.len())
            .is_some_and(|s| s.binary_search(w).is_ok())
    }
}

/// Depth-first enumeration of mishap-free words, pruned by prefix
/// monotonicity of mishaps and by reachability of zero.
struct Enumerator<'a> {
    spec: &'a AlphabetSpec,
    max_len: usize,
    exact: bool,
    word: Vec<i32>,
    up_heights: Vec<i64>,
}

impl Enumerator<'_> {
    fn zero_reachable(&self, h: i64) -> bool {
        let r = (self.max_len - self.word.len()) as i64;
        let (a, b) = (self.spec.a() as i64, self.spec.b() as i64);
        if self.exact {
            // Need k ups and r-k downs with h + k*a - (r-k)*b = 0.
            let num = r * b - h;
            num.rem_euclid(a + b) == 0 && (0..=r).contains(&(num / (a + b)))
        } else {
            h <= r * b && -h <= r * a
        }
    }

    fn walk(&mut self, h: i64, visit: &mut dyn FnMut(&[i32])) {
        if h == 0 && (!self.exact || self.word.len() == self.max_len) {
            visit(&self.word);
        }
        if self.word.len() == self.max_len {
            return;
        }
        for l in self.spec.letters() {
            if l == self.spec.down() && self.up_heights.contains(&h) {
                continue;
            }
            let is_up = l == self.spec.up();
            if is_up {
                self.up_heights.push(h);
            }
            self.word.push(l);
            let next = h + l as i64;
            if self.zero_reachable(next) {
                self.walk(next, visit);
            }
            self.word.pop();
            if is_up {
                self.up_heights.pop();
            }
        }
    }
}

fn check_budget(len: usize, limit: usize) -> Result<(), WordError> {
    if len > limit {
        Err(WordError::ResourceLimit { len, limit })
    } else {
        Ok(())
    }
}

pub fn generate_corpus(spec: &AlphabetSpec, max_len: usize) -> Result<Corpus, WordError> {
    generate_corpus_with_limit(spec, max_len, DEFAULT_MAX_ENUMERATION_LEN)
}

pub fn generate_corpus_with_limit(
    spec: &AlphabetSpec,
    max_len: usize,
    limit: usize,
) -> Result<Corpus, WordError> {
    check_budget(max_len, limit)?;
    let mut strata = vec![Vec::new(); max_len + 1];
    let mut e = Enumerator {
        spec,
        max_len,
        exact: false,
        word: Vec::new(),
        up_heights: Vec::new(),
    };
    e.walk(0, &mut |w| strata[w.len()].push(Word(w.to_vec())));
    Ok(Corpus {
        spec: *spec,
        max_len,
        strata,
    })
}

/// `{ v : w1·v·w2 ∈ corpus }`, truncated at the corpus length.
pub fn residual_middles(c: &Corpus, w1: &Word, w2: &Word) -> BTreeSet<Word> {
    middles_iter(c, w1, w2, c.max_len()).collect()
}

/// Middles of `(w1, w2)` of length at most `budget`, shortest first.
pub(crate) fn middles_iter<'a>(
    c: &'a Corpus,
    w1: &'a Word,
    w2: &'a Word,
    budget: usize,
) -> impl Iterator<Item = Word> + 'a {
    let ctx = w1.len() + w2.len();
    let top = (ctx + budget).min(c.max_len());
    (ctx..=top)
        .flat_map(move |len| c.stratum(len).iter())
        .filter(move |w| w.0.starts_with(&w1.0) && w.0.ends_with(&w2.0))
        .map(move |w| Word(w.0[w1.len()..w.len() - w2.len()].to_vec()))
}

pub fn oracle_count(spec: &AlphabetSpec, length: usize) -> Result<u64, WordError> {
    oracle_count_with_limit(spec, length, DEFAULT_MAX_ENUMERATION_LEN)
}

pub fn oracle_count_with_limit(
    spec: &AlphabetSpec,
    length: usize,
    limit: usize,
) -> Result<u64, WordError> {
    check_budget(length, limit)?;
    if !length.is_multiple_of(spec.period()) {
        return Ok(0);
    }
    let mut count = 0u64;
    let mut e = Enumerator {
        spec,
        max_len: length,
        exact: true,
        word: Vec::new(),
        up_heights: Vec::new(),
    };
    e.walk(0, &mut |_| count += 1);
    Ok(count)
}
