import itertools

import pytest
from hypothesis import given, strategies as st

from conftest import CCS, TRIV
from hdasem.flows import (FlowError, bad_realization, count_paths, enumerate_paths, path_class_counts,
                          path_label, swap_closure, trace_normal_form)
from hdasem.pcset import boundary, standard_cube
from hdasem.proc import parse
from hdasem.semantics import interp
from hdasem.syncalg import builtin

TCSP = builtin("tcsp", ["a", "b", "tau"])


def top(n):
    return (1 << n) - 1


def test_square_has_one_class():
    pc = bad_realization(standard_cube("ab"))
    assert path_class_counts(pc, 0, 3) == 1


def test_hollow_square_has_two_classes():
    pc = bad_realization(boundary(standard_cube("ab")))
    assert path_class_counts(pc, 0, 3) == 2


@pytest.mark.parametrize("n", [3, 4])
def test_hollow_cube_has_one_class(n):
    labels = "abcd"[:n]
    assert path_class_counts(bad_realization(boundary(standard_cube(labels))), 0, top(n)) == 1


@pytest.mark.parametrize("n", range(1, 6))
def test_cube_collapses_between_comparable_vertices(n):
    K = standard_cube("abcde"[:n])
    pc = bad_realization(K)
    for u, v in itertools.product(K.vertices, repeat=2):
        if u != v and u & v == u:
            assert path_class_counts(pc, u, v) == 1


def test_congruence_is_saturated():
    for K in (standard_cube("abc"), boundary(standard_cube("abc")), interp(CCS, parse("a.nil || coa.b.nil")).pcset):
        assert bad_realization(K).is_congruence()


def test_path_count_matches_enumeration():
    K = standard_cube("abc")
    assert count_paths(K) == len(enumerate_paths(K))


def test_normal_forms():
    assert trace_normal_form(CCS, ["b", "a"]) == ("a", "b")
    assert trace_normal_form(TCSP, ["b", "a"]) == ("b", "a")
    assert trace_normal_form(CCS, ["a"]) == ("a",)
    with pytest.raises(FlowError):
        trace_normal_form(CCS, [])


def test_square_paths_are_trace_equivalent():
    K = standard_cube("ab")
    pc = bad_realization(K)
    words = {path_label(K, p) for p in pc.paths if len(p) == 2}
    assert words == {("a", "b"), ("b", "a")}
    assert len({trace_normal_form(TRIV, w) for w in words}) == 1


def test_choice_paths_are_distinct_classes():
    K = interp(TRIV, parse("a.b.nil + b.a.nil")).pcset
    pc = bad_realization(K)
    full = [p for p in pc.paths if len(p) == 2]
    assert len(full) == 2
    assert not pc.congruent(full[0], full[1])
    assert trace_normal_form(TRIV, path_label(K, full[0])) == trace_normal_form(TRIV, path_label(K, full[1]))


def test_tau_diagonal_word():
    K = interp(CCS, parse("a.nil || coa.nil")).pcset
    (tau,) = [e for e in K.edges if K.labels(e) == ("tau",)]
    assert path_label(K, (tau,)) == ("tau",)


def test_path_label_rejects_gaps():
    K = standard_cube("ab")
    a0 = next(e for e in K.edges if K.src(e) == 0)
    with pytest.raises(FlowError):
        path_label(K, (a0, a0))


words = st.lists(st.sampled_from(["a", "b", "coa", "tau"]), min_size=1, max_size=6)


@given(words)
def test_normal_form_is_least_in_swap_closure(w):
    closure = swap_closure(CCS, w)
    nf = trace_normal_form(CCS, w)
    ranked = min(closure, key=lambda u: [CCS.rank(x) for x in u])
    assert nf == ranked
    assert all(trace_normal_form(CCS, u) == nf for u in closure)
    assert trace_normal_form(CCS, nf) == nf


@given(st.lists(st.sampled_from(["a", "b", "tau"]), min_size=1, max_size=6))
def test_tcsp_only_commutes_tau(w):
    closure = swap_closure(TCSP, w)
    nf = trace_normal_form(TCSP, w)
    assert nf in closure
    assert nf == min(closure, key=lambda u: [TCSP.rank(x) for x in u])
