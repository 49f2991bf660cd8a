import pytest
from hypothesis import given, settings, strategies as st

from conftest import CCS, TRIV, closed_terms
from hdasem.corpus import CCS_ACTIONS, TRIVIAL_ACTIONS
from hdasem.pcset import boundary, iso_check, standard_cube, validate
from hdasem.proc import NIL, Par, Restrict, parse
from hdasem.semantics import (check_assoc, check_comm, check_unit, interp, verify_paradigm,
                              verify_restrict1)


def test_parallel_is_full_square():
    K = interp(TRIV, parse("a.nil || b.nil")).pcset
    assert K.census() == (4, 4, 1)
    assert iso_check(K, standard_cube("ab")) is not None


def test_choice_is_hollow_square():
    K = interp(TRIV, parse("a.b.nil + b.a.nil")).pcset
    assert K.census() == (4, 4)
    assert iso_check(K, boundary(standard_cube("ab"))) is not None


def test_ccs_square_with_diagonal():
    K = interp(CCS, parse("a.nil || coa.nil")).pcset
    assert K.census() == (4, 5, 1)
    (tau,) = [e for e in K.edges if K.labels(e) == ("tau",)]
    assert K.src(tau) == K.initial
    assert not K.out_edges()[K.tgt(tau)]


def test_restriction_keeps_only_tau():
    K = interp(CCS, parse("nu a (a.nil || coa.nil)")).pcset
    assert K.census() == (4, 1)
    assert [K.labels(e) for e in K.edges] == [("tau",)]


def test_rec_chain_is_decorated_by_rec():
    r = parse("rec x (a.x)")
    I = interp(TRIV, r, 3)
    assert I.census == (4, 3)
    assert set(I.pcset.decorations.values()) == {r}
    assert not I.meta["stabilized"]


def test_sum_initial_decoration():
    t = parse("a.b.nil + b.a.nil")
    K = interp(TRIV, t).pcset
    assert K.decorations[K.initial] == t
    finals = [v for v, es in K.out_edges().items() if not es]
    assert [K.decorations[v] for v in finals] == [NIL]


def test_paradigm_on_cube():
    assert verify_paradigm(standard_cube("abc")).ok


def double_filled_square():
    K = boundary(standard_cube("ab"))
    e = {K.labels(x) + (K.src(x), K.tgt(x)): x for x in K.edges}
    flat = (e[("b", 0, 2)], e[("b", 1, 3)], e[("a", 0, 1)], e[("a", 2, 3)])
    first = K.add_cube(("a", "b"), flat)
    second = K.add_cube(("a", "b"), flat, dedup=False)
    return K, {first, second}


def test_paradigm_counterexample():
    K, fillers = double_filled_square()
    assert validate(K, TRIV).ok
    rep = verify_paradigm(K)
    assert not rep.ok
    assert rep.rules() == {"multiple-fillers"}
    assert set(rep.violations[0].witness["fillers"]) == fillers


@pytest.mark.parametrize("alg,text", [(TRIV, "a.b.nil + b.a.nil"), (CCS, "a.nil || coa.nil"), (TRIV, "nil")])
def test_restrict1_examples(alg, text):
    t = parse(text)
    rep = verify_restrict1(alg, t, interp(alg, t, 2))
    assert rep.ok, rep.violations


def test_restrict1_counts():
    t = parse("a.b.nil + b.a.nil")
    rep = verify_restrict1(TRIV, t, interp(TRIV, t, 2))
    assert (rep.stats["states"], rep.stats["edges"]) == (4, 4)


def test_restrict1_detects_tampering():
    t = parse("a.nil || b.nil")
    I = interp(TRIV, t, 2)
    K = I.pcset
    extra = K.add_vertex()
    I.keys[extra] = NIL
    K.add_cube(("a",), (K.initial, extra))
    assert "edge-mismatch" in verify_restrict1(TRIV, t, I).rules()


def test_unit_comm_assoc_examples():
    t = parse("(a.nil || coa.b.nil) || b.tau.nil")
    for check in (check_unit, check_comm, check_assoc):
        assert check(CCS, t, 3).ok


@settings(max_examples=40)
@given(closed_terms(CCS_ACTIONS, 9), st.integers(0, 4))
def test_interp_obeys_theorems(t, d):
    I = interp(CCS, t, d)
    assert validate(I.pcset, CCS).ok
    assert verify_paradigm(I.pcset).ok
    assert verify_restrict1(CCS, t, I).ok


@settings(max_examples=30)
@given(closed_terms(TRIVIAL_ACTIONS, 6), st.integers(0, 2))
def test_nil_is_a_unit(t, d):
    base = interp(TRIV, t, d).pcset
    assert iso_check(interp(TRIV, Par(t, NIL), d).pcset, base) is not None
    assert iso_check(interp(TRIV, Par(NIL, t), d).pcset, base) is not None


@settings(max_examples=30)
@given(closed_terms(CCS_ACTIONS, 5), closed_terms(CCS_ACTIONS, 5), st.integers(0, 2))
def test_parallel_commutes(p, q, d):
    assert check_comm(CCS, Par(p, q), d).ok


@settings(max_examples=20)
@given(closed_terms(CCS_ACTIONS, 4), closed_terms(CCS_ACTIONS, 4), closed_terms(CCS_ACTIONS, 4))
def test_parallel_associates(p, q, r):
    assert check_assoc(CCS, Par(Par(p, q), r), 1).ok


@settings(max_examples=30)
@given(closed_terms(CCS_ACTIONS, 8), st.sampled_from(CCS_ACTIONS))
def test_restriction_idempotent(t, a):
    once = interp(CCS, Restrict(a, t), 2).pcset
    twice = interp(CCS, Restrict(a, Restrict(a, t)), 2).pcset
    assert iso_check(once, twice) is not None


def test_meta_reports_truncation():
    I = interp(TRIV, parse("rec x (a.x) || b.nil"), 2)
    assert I.meta["truncated"] > 0
    assert I.meta["recs"] == 1
    J = interp(TRIV, parse("a.nil || b.nil"), 2)
    assert J.meta["stabilized"] and J.meta["truncated"] == 0
