use tenfold::discovery::{discover_grammar, DiscoveryLimits, GrammarTree, VertexKind};
use tenfold::gfsolve::grammar_gf;
use tenfold::prover::{prove_grammar, ProofOutcome, Verdict};
use tenfold::wordcore::{is_good, oracle_count};
use tenfold::{AlphabetSpec, Word};

fn check(a: i64, b: i64, corpus: usize) -> GrammarTree {
    let s = AlphabetSpec::new(a, b).unwrap();
    let t = discover_grammar(&s, corpus, DiscoveryLimits::default()).unwrap();
    assert!(t.is_finished());
    let report = prove_grammar(&t, 3).unwrap();
    assert_eq!(report.verdict(), Verdict::True, "({a},{b})\n{report}");
    let series = grammar_gf(&t).unwrap().series(21).unwrap();
    for (n, c) in series.iter().enumerate() {
        let want = oracle_count(&s, n).unwrap();
        assert_eq!(c.to_integer(), want.into(), "({a},{b}) length {n}");
        assert!(c.is_integer());
    }
    t
}

#[test]
fn small_alphabets_prove_and_count() {
    for (a, b) in [(1, 1), (2, 1), (3, 1), (4, 1), (5, 1), (1, 2)] {
        check(a, b, 4 * (a + b) as usize);
    }
    check(1, 3, 20);
    check(1, 4, 20);
}

#[test]
fn short_corpus_grammar_is_refuted() {
    // Length 16 hides good words of length 20, so some leaves are wrongly
    // declared empty; the prover must produce those words.
    let s = AlphabetSpec::new(1, 3).unwrap();
    let t = discover_grammar(&s, 16, DiscoveryLimits::default()).unwrap();
    let report = prove_grammar(&t, 3).unwrap();
    assert_eq!(report.verdict(), Verdict::False);
    let mut refuted = 0;
    for leaf in report.failures() {
        let ProofOutcome::Disproved { counterexample } = &leaf.outcome else {
            continue;
        };
        let w = counterexample.letters();
        let v = t.vertex(leaf.id);
        match v.kind {
            VertexKind::EmptyLeaf => {
                assert!(w.len() > 16);
                assert!(is_good(w, &s));
                assert!(
                    w.starts_with(v.ctx.prefix.letters()) && w.ends_with(v.ctx.suffix.letters())
                );
            }
            VertexKind::CloneLeaf { target, .. } => {
                let other = &t.vertex(target).ctx;
                let splits = [&v.ctx, other].into_iter().any(|c| {
                    let (p, q) = (c.prefix.len(), c.suffix.len());
                    if w.len() < p + q
                        || !w.starts_with(c.prefix.letters())
                        || !w.ends_with(c.suffix.letters())
                    {
                        return false;
                    }
                    let middle = Word(w[p..w.len() - q].to_vec());
                    is_good(v.ctx.wrap(&middle).letters(), &s)
                        != is_good(other.wrap(&middle).letters(), &s)
                });
                assert!(splits, "leaf {} witness {counterexample}", leaf.id);
            }
            _ => unreachable!(),
        }
        refuted += 1;
    }
    assert!(refuted > 0);
}

#[test]
fn tenfold_gf_is_stable_across_corpus_lengths() {
    for corpus in [15, 20, 25] {
        let t = check(3, 2, corpus);
        assert_eq!(grammar_gf(&t).unwrap().to_string(), "1/(1-10*x^5)");
    }
}

#[test]
fn written_tree_reproves() {
    let t = check(3, 2, 20);
    let back: GrammarTree = t.to_string().parse().unwrap();
    assert_eq!(back, t);
    assert_eq!(prove_grammar(&back, 3).unwrap().verdict(), Verdict::True);
}
