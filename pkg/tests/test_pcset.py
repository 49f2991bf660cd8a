import itertools
import json
import random

import pytest
from hypothesis import given, strategies as st

from conftest import TRIV, brute_force_isomorphic, small_operands
from hdasem.errors import CycleError, PCSetError
from hdasem.pcset import (PCSet, boundary, disjoint_union, iso_check, merge_vertices, skeleton,
                          standard_cube, validate)


def square(a_left="a", a_right="a"):
    K = PCSet()
    v = [K.add_vertex() for _ in range(4)]
    e_a0 = K.add_cube((a_left,), (v[0], v[2]), check=False)
    e_a1 = K.add_cube((a_right,), (v[1], v[3]), check=False)
    e_b0 = K.add_cube(("b",), (v[0], v[1]), check=False)
    e_b1 = K.add_cube(("b",), (v[2], v[3]), check=False)
    K.add_cube(("a", "b"), (e_b0, e_b1, e_a0, e_a1), check=False)
    K.initial = v[0]
    return K


def test_square_validates():
    assert validate(square(), TRIV).ok


def test_label_coherence_violation():
    assert "label-coherence" in validate(square("a", "c")).rules()


def test_cubical_relation_violation():
    K = PCSet()
    v = [K.add_vertex() for _ in range(5)]
    e_a0 = K.add_cube(("a",), (v[0], v[2]))
    e_a1 = K.add_cube(("a",), (v[1], v[3]))
    e_b0 = K.add_cube(("b",), (v[4], v[1]))
    e_b1 = K.add_cube(("b",), (v[2], v[3]))
    K.add_cube(("a", "b"), (e_b0, e_b1, e_a0, e_a1), check=False)
    assert "cubical-relation" in validate(K).rules()
    with pytest.raises(PCSetError):
        K.add_cube(("a", "b"), (e_b0, e_b1, e_a0, e_a1), dedup=False)


def test_standard_cube_counts():
    assert standard_cube(()).census() == (1,)
    assert standard_cube(("a", "b")).census() == (4, 4, 1)
    assert standard_cube(("a", "b", "c")).census() == (8, 12, 6, 1)
    # 3^n face words graded by the number of free coordinates
    for n in range(5):
        K = standard_cube(["a"] * n)
        assert len(K) == 3 ** n
        assert K.census() == tuple(2 ** (n - k) * len(list(itertools.combinations(range(n), k)))
                                   for k in range(n + 1))


def test_boundary():
    assert len(boundary(standard_cube(()))) == 0
    assert boundary(standard_cube(("a", "b"))).census() == (4, 4)
    assert len(boundary(standard_cube(("a", "b", "c")))) == 26


def test_skeleton():
    sq = standard_cube(("a", "b"))
    assert iso_check(skeleton(sq, 1), boundary(sq)) is not None
    assert skeleton(sq, 5).census() == sq.census()
    assert skeleton(standard_cube("abc"), 1).census() == (8, 12)


def test_fork_by_merging_sources():
    edge_a, edge_b = standard_cube(("a",)), standard_cube(("b",))
    both, ma, mb = disjoint_union(edge_a, edge_b)
    fork = merge_vertices(both, [(ma[0], mb[0])])
    assert fork.census() == (3, 2)
    assert len({fork.src(e) for e in fork.edges}) == 1


def test_chain_by_merging_target_and_source():
    edge_a, edge_b = standard_cube(("a",)), standard_cube(("b",))
    both, ma, mb = disjoint_union(edge_a, edge_b)
    chain = merge_vertices(both, [(ma[1], mb[0])])
    assert chain.census() == (3, 2)
    assert validate(chain).ok


def test_merge_creating_loop():
    edge = standard_cube(("a",))
    with pytest.raises(CycleError):
        merge_vertices(edge, [(0, 1)])


def test_iso_identity_and_cardinality():
    sq = standard_cube(("a", "b"))
    assert iso_check(sq, standard_cube(("a", "b"))) is not None
    assert iso_check(sq, boundary(sq)) is None
    assert iso_check(sq, standard_cube(("b", "a"))) is None


def test_json_round_trip():
    K = standard_cube("abc")
    back = PCSet.from_json(json.loads(K.dumps()))
    assert iso_check(K, back) is not None
    assert K.dumps() == back.dumps()


def test_dot_has_edges_and_header():
    dot = standard_cube("ab").to_dot("cmd")
    assert dot.splitlines()[0] == "// cmd"
    assert dot.count("->") == 4


@given(st.lists(st.sampled_from("abc"), max_size=4))
def test_standard_cube_is_coherent(labels):
    K = standard_cube(labels)
    assert validate(K, TRIV).ok
    assert validate(boundary(K), TRIV).ok
    for n in range(len(labels) + 1):
        assert validate(skeleton(K, n), TRIV).ok


@given(st.lists(st.sampled_from("abc"), min_size=1, max_size=4))
def test_face_paths_agree(labels):
    K = standard_cube(labels)
    for c in K.cubes():
        n = K.dim(c)
        for i, j in itertools.combinations(range(1, n + 1), 2):
            for a, b in itertools.product((0, 1), repeat=2):
                assert K.face(K.face(c, j, b), i, a) == K.face(K.face(c, i, a), j - 1, b)
            for a in (0, 1):
                assert K.labels(K.face(c, i, 0)) == K.labels(K.face(c, i, 1))


@given(small_operands("trivial"), small_operands("trivial"))
def test_iso_check_agrees_with_brute_force(K, L):
    if len(K.vertices) > 7 or len(L.vertices) > 7:
        return
    assert (iso_check(K, L) is not None) == brute_force_isomorphic(K, L)
    assert brute_force_isomorphic(K, K)
    assert iso_check(K, K) is not None


def shuffled(K, seed):
    """The same set with cube ids permuted within each dimension."""
    obj = K.to_json()
    ids = [c["id"] for c in obj["cubes"]]
    perm = ids[:]
    random.Random(seed).shuffle(perm)
    ren = dict(zip(ids, perm))
    for c in obj["cubes"]:
        c["id"] = ren[c["id"]]
        c["faces"] = [[ren[f] for f in pair] for pair in c["faces"]]
    obj["initial"] = ren[obj["initial"]]
    obj["decorations"] = {}
    return PCSet.from_json(obj)


@given(small_operands("ccs"), st.integers(0, 1000))
def test_iso_found_is_a_morphism(K, seed):
    L = shuffled(K, seed)
    iso = iso_check(K, L)
    assert iso is not None
    m = iso.cubes
    assert sorted(m) == list(range(len(K)))
    assert sorted(m.values()) == list(range(len(L)))
    assert m[K.initial] == L.initial
    for c in K.cubes():
        assert K.labels(c) == L.labels(m[c])
        assert tuple(m[f] for f in K.flat_faces(c)) == L.flat_faces(m[c])
