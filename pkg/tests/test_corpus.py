import random

from hdasem.corpus import CCS_ACTIONS, corpus, corpus_algebra, random_term, unfolded_size
from hdasem.flows import count_paths
from hdasem.proc import check_term, format_term, parse, size
from hdasem.semantics import interp


def test_random_terms_are_closed_and_guarded():
    rng = random.Random(7)
    for _ in range(300):
        t = random_term(rng, CCS_ACTIONS, 12)
        assert size(t) <= 12
        check_term(t)
        assert parse(format_term(t)) == t


def test_corpus_shape():
    entries = corpus()
    assert len(entries) >= 200
    assert {e.algebra for e in entries} == {"trivial", "ccs"}
    for e in entries:
        assert size(e.term) <= 12
        assert 0 <= e.depth <= 6
        assert unfolded_size(e.term, e.depth) <= 40 or e.depth == 0


def test_corpus_is_reproducible():
    assert corpus(seed=5, per_algebra=20) == corpus(seed=5, per_algebra=20)
    assert corpus(seed=5, per_algebra=20) != corpus(seed=6, per_algebra=20)


def test_path_bound_is_respected():
    for e in corpus(per_algebra=40):
        K = interp(corpus_algebra(e.algebra), e.term, e.depth).pcset
        assert count_paths(K) <= 20000 or e.depth == 0


def test_corpus_has_recursion_and_parallelism():
    text = " ".join(format_term(e.term) for e in corpus())
    assert "rec " in text and "||" in text and "nu " in text and " + " in text
