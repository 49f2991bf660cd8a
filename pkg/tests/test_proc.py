import pytest
from hypothesis import assume, given

from conftest import closed_terms, raw_asts
from hdasem.corpus import CCS_ACTIONS
from hdasem.proc import (NIL, Horizon, Nil, Par, Prefix, ProcError, ProcSyntaxError, Rec, Restrict,
                         Sum, UnboundVariableError, UnguardedVariableError, UnknownActionError,
                         Unfolding, Var, check_term, format_term, free_vars, has_horizon, parse,
                         substitute, unfold_once)
from hdasem.syncalg import builtin


def test_parse_sum():
    assert parse("a.b.nil + b.a.nil") == Sum(Prefix("a", Prefix("b", Nil())), Prefix("b", Prefix("a", Nil())))


def test_parse_rec():
    assert parse("rec x (a.x || b.nil)") == Rec("x", Par(Prefix("a", Var("x")), Prefix("b", Nil())))


def test_unguarded_rejected():
    with pytest.raises(UnguardedVariableError):
        parse("rec x (x + a.nil)")


def test_unbound_rejected():
    with pytest.raises(UnboundVariableError):
        parse("a.x")


def test_unknown_action_with_algebra():
    alg = builtin("trivial", ["a"])
    with pytest.raises(UnknownActionError):
        parse("a.b.nil", alg)


@pytest.mark.parametrize("text", ["a.", "a.nil +", "(a.nil", "rec (a.nil)", "nu a", "a.nil ) ", "a..nil", "1.nil"])
def test_syntax_errors(text):
    with pytest.raises(ProcSyntaxError) as info:
        parse(text)
    assert info.value.to_json()["error"] == "syntax"


def test_format_basics():
    assert format_term(Nil()) == "nil"
    assert format_term(Par(Prefix("a", Nil()), Prefix("b", Nil()))) == "a.nil || b.nil"
    assert format_term(Restrict("a", Par(Prefix("a", Nil()), Prefix("coa", Nil())))) == "nu a (a.nil || coa.nil)"


def test_precedence():
    t = parse("a.nil + b.nil || c.nil")
    assert parse(format_term(t)) == t
    assert parse("(a.nil + b.nil) || c.nil") != t


def test_unfold_once():
    r = parse("rec x (a.x)")
    assert unfold_once(r) == Prefix("a", r)


def test_substitute_respects_shadowing():
    t = parse("rec x (a.x)")
    assert substitute(t, "x", NIL) == t


def test_unfolding_folds_chain():
    r = parse("rec x (a.x)")
    u = Unfolding(3)
    key = u.unfold(r)
    assert has_horizon(key)
    cur = key
    for _ in range(3):
        assert u.fold(cur) == r
        cur = cur.body
    assert isinstance(cur, Horizon)
    assert u.fold(cur) == r


def test_vacuous_rec_is_dropped():
    u = Unfolding(4)
    assert u.unfold(parse("rec x (a.nil)")) == parse("a.nil")
    assert len(u.vacuous) == 1


@given(closed_terms(CCS_ACTIONS, 12))
def test_round_trip_generated(t):
    assert parse(format_term(t)) == t


@given(raw_asts())
def test_round_trip_raw(t):
    try:
        check_term(t)
    except ProcError:
        assume(False)
    assert parse(format_term(t)) == t


@given(raw_asts())
def test_parse_never_returns_invalid(t):
    try:
        back = parse(format_term(t))
    except ProcError:
        return
    assert not free_vars(back)
    check_term(back)
