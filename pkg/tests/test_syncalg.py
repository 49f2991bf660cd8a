import itertools
import json

import pytest
from hypothesis import given, strategies as st

from hdasem.errors import AlgebraError, UnknownLabelError
from hdasem.syncalg import (BOT, IDLE, SyncAlgebra, builtin, closed_alphabet, complement,
                            load_algebra, validate_algebra)


def test_ccs_table_is_valid():
    alg = builtin("ccs", ["a", "coa", "b", "cob", "tau"])
    assert validate_algebra(alg).ok


def test_async_must_be_self_or_bot():
    alg = SyncAlgebra.from_entries(["a", "b"], [("a", IDLE, "b"), ("b", IDLE, "b")])
    assert "async-or-bot" in validate_algebra(alg).rules()


def test_trivial_is_valid():
    assert validate_algebra(builtin("trivial", ["a", "b", "c"])).ok


def test_ccs_sync():
    alg = builtin("ccs", ["a", "coa", "tau"])
    assert alg.sync("a", "coa") == "tau"
    assert alg.sync("coa", "a") == "tau"
    assert alg.sync("tau", "tau") == BOT
    assert alg.sync("a", "a") == BOT


@pytest.mark.parametrize("name", ["ccs", "tcsp", "trivial"])
def test_bot_absorbs(name):
    alg = builtin(name, closed_alphabet(name, ["a", "b"]))
    for x in alg.labels:
        assert alg.sync(x, BOT) == BOT == alg.sync(BOT, x)


def test_trivial_never_syncs_actions():
    alg = builtin("trivial", ["a", "b"])
    for x, y in itertools.product(alg.alphabet, repeat=2):
        assert alg.sync(x, y) == BOT


def test_asynchrony_per_algebra():
    ccs = builtin("ccs", ["a", "coa", "tau"])
    tcsp = builtin("tcsp", ["a", "b", "tau"])
    assert ccs.asynchronous("a")
    assert not tcsp.asynchronous("a")
    assert tcsp.asynchronous("tau")
    assert tcsp.sync("a", "a") == "a"
    assert builtin("trivial", ["a"]).sync("a", IDLE) == "a"


def test_unknown_label():
    alg = builtin("trivial", ["a"])
    with pytest.raises(UnknownLabelError):
        alg.sync("a", "zzz")
    with pytest.raises(UnknownLabelError):
        alg.asynchronous("zzz")


def test_from_entries_needs_idle_entry():
    with pytest.raises(AlgebraError):
        SyncAlgebra.from_entries(["a"], [])


def test_conflicting_mirror_breaks_commutativity():
    alg = SyncAlgebra.from_entries(
        ["a", "b", "c"], [(x, IDLE, x) for x in "abc"] + [("a", "b", "c"), ("b", "a", "a")])
    assert "commutativity" in validate_algebra(alg).rules()


def test_non_associative_table():
    # a.a = b but b.a is bot while a.b = b: (a.a).a = bot, a.(a.a) = a.b = b
    alg = SyncAlgebra.from_entries(
        ["a", "b"], [("a", IDLE, "a"), ("b", IDLE, "b"), ("a", "a", "b"), ("a", "b", "b"), ("b", "a", BOT)])
    assert "associativity" in validate_algebra(alg).rules()


def test_idle_only_from_idle():
    alg = SyncAlgebra.from_entries(["a"], [("a", IDLE, "a"), ("a", "a", IDLE)])
    assert "idle-iff-both-idle" in validate_algebra(alg).rules()


def test_json_round_trip(tmp_path):
    alg = builtin("ccs", ["a", "coa", "tau"])
    p = tmp_path / "alg.json"
    p.write_text(json.dumps(alg.to_json()))
    back = load_algebra(str(p))
    assert back.alphabet == alg.alphabet
    assert all(back.sync(x, y) == alg.sync(x, y) for x in alg.labels for y in alg.labels)


def test_json_file_format():
    obj = {"alphabet": ["a", "coa", "tau"],
           "entries": [{"x": "a", "y": "0", "r": "a"}, {"x": "coa", "y": "0", "r": "coa"},
                       {"x": "tau", "y": "0", "r": "tau"}, {"x": "a", "y": "coa", "r": "tau"}]}
    alg = SyncAlgebra.from_json(obj)
    assert alg.sync("coa", "a") == "tau"
    assert alg.sync("a", "a") == BOT
    assert validate_algebra(alg).ok


def test_restricted_alphabet():
    alg = builtin("ccs", ["a", "coa", "b", "cob", "tau"])
    assert alg.restricted_alphabet("a") == {"b", "cob", "tau"}


def test_complement():
    assert complement("a") == "coa"
    assert complement("coa") == "a"
    assert closed_alphabet("ccs", ["a"]) == ("a", "coa", "tau")


action_sets = st.sets(st.sampled_from(["a", "b", "c", "d", "coa", "cob", "tau"]), min_size=1, max_size=5)


@given(st.sampled_from(["ccs", "tcsp", "trivial"]), action_sets)
def test_builtins_satisfy_axioms(name, acts):
    alg = builtin(name, closed_alphabet(name, acts))
    assert validate_algebra(alg).ok
    s = alg.sync
    for x, y in itertools.product(alg.labels, repeat=2):
        assert s(x, y) == s(y, x)
        assert (s(x, y) == IDLE) == (x == IDLE and y == IDLE)
    for x, y, z in itertools.product(alg.labels, repeat=3):
        assert s(s(x, y), z) == s(x, s(y, z))
