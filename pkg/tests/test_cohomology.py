from __future__ import annotations

import itertools
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

import sporadic
from oracles import Brute, corpus
from sporadic.bsgs import schreier_sims
from sporadic.cohomology import (ModuleError, ModuleRep, fixed_space, h1, lemma4_criterion, nullspace_mod_p,
                                 rank_mod_p)
from sporadic.perm import GeneratorSet, Permutation, parse_cycles

MODULES = Path(sporadic.__file__).resolve().parent / "data" / "modules"
CORPUS = {name: (gens, n) for name, gens, n in corpus()}


def matrix_group_module(mats: list[list[list[int]]], p: int, name: str = "") -> ModuleRep:
    """A matrix group acting on its nonzero row vectors, with those matrices as module."""
    mats = [np.asarray(m, dtype=np.int64) % p for m in mats]
    d = mats[0].shape[0]
    vecs = [v for v in itertools.product(range(p), repeat=d) if any(v)]
    where = {v: i for i, v in enumerate(vecs)}
    perms = []
    for m in mats:
        perms.append(Permutation([where[tuple(int(x) for x in (np.asarray(v) @ m) % p)] for v in vecs]))
    return ModuleRep(p, d, mats, GeneratorSet.of(perms), name)


def gl32() -> ModuleRep:
    return matrix_group_module([[[1, 1, 0], [0, 1, 0], [0, 0, 1]], [[0, 1, 0], [0, 0, 1], [1, 0, 0]]], 2, "GL3(2)")


def sl23() -> ModuleRep:
    return matrix_group_module([[[1, 1], [0, 1]], [[0, 2], [1, 0]]], 3, "SL2(3)")


def sl25() -> ModuleRep:
    return matrix_group_module([[[1, 1], [0, 1]], [[0, 4], [1, 0]]], 5, "SL2(5)")


def z7() -> ModuleRep:
    # companion matrix of x^3 + x + 1, fixed-point-free of order 7
    return matrix_group_module([[[0, 1, 0], [0, 0, 1], [1, 1, 0]]], 2, "Z7")


def s3_natural() -> ModuleRep:
    return matrix_group_module([[[0, 1], [1, 1]], [[0, 1], [1, 0]]], 2, "GL2(2)")


@pytest.fixture(scope="module")
def a7() -> ModuleRep:
    return ModuleRep.load(MODULES / "A7_natural.json")


def test_a7_natural(a7):
    assert a7.validate()
    assert a7.chain().order() == 2520
    res = h1(a7)
    assert (res.dim_Z1, res.dim_B1, res.dim_H1) == (4, 4, 0)
    other = h1(a7, method="generic")
    assert (other.dim_Z1, other.dim_B1) == (res.dim_Z1, res.dim_B1)


def test_a7_redundant_generators(a7):
    g = list(a7.group.generators)
    m = list(a7.matrices)
    gens = GeneratorSet.of(g + [g[0] * g[1], g[1] ** 3])
    mats = m + [(m[0] @ m[1]) % 2, np.linalg.matrix_power(m[1], 3) % 2]
    V = ModuleRep(2, 4, mats, gens, "A7 redundant")
    assert V.validate()
    assert h1(V).dim_H1 == h1(a7).dim_H1 == 0


def test_fixed_space_examples(a7):
    G = a7.chain()
    assert fixed_space(a7, [Permutation.identity(7)]) == 4
    five = parse_cycles("(1,2,3,4,5)", 7)
    seven = parse_cycles("(1,2,3,4,5,6,7)", 7)
    assert G.contains(five) and G.contains(seven)
    assert fixed_space(a7, [five]) == 0
    assert fixed_space(a7, [seven]) >= 1
    # direct kernel oracle over all 16 vectors
    for x, expect_zero in ((five, True), (seven, False)):
        M = a7.matrix_of(x)
        fixed = [v for v in itertools.product(range(2), repeat=4) if np.array_equal((np.asarray(v) @ M) % 2, v)]
        assert (len(fixed) == 1) == expect_zero
        assert len(fixed) == 2 ** fixed_space(a7, [x])


def test_matrix_of_is_homomorphism(a7, rng):
    G = a7.chain()
    for _ in range(20):
        a, b = G.random_element(rng), G.random_element(rng)
        assert np.array_equal(a7.matrix_of(a * b), (a7.matrix_of(a) @ a7.matrix_of(b)) % 2)


@pytest.mark.parametrize("make,expect", [(gl32, 1), (sl23, 0), (sl25, 0), (z7, 0), (s3_natural, 0)])
def test_matrix_group_modules(make, expect):
    V = make()
    assert V.validate()
    res = h1(V)
    assert res.dim_H1 == expect
    assert res.dim_B1 == V.dimension - fixed_space(V, V.matrices)
    gen = h1(V, method="generic")
    assert gen.dim_H1 == expect


def test_trivial_module_is_hom_space():
    s4 = GeneratorSet.of([parse_cycles("(1,2,3,4)", 4), parse_cycles("(1,2)", 4)])
    assert h1(ModuleRep.trivial(s4, 2)).dim_H1 == 1
    assert h1(ModuleRep.trivial(s4, 3)).dim_H1 == 0
    assert h1(ModuleRep.trivial(s4, 2, dim=3)).dim_H1 == 3


@settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.sampled_from(sorted(n for n, (g, d) in CORPUS.items() if Brute(g, d).order <= 2000)),
       st.sampled_from([2, 3, 5, 7]))
def test_trivial_module_matches_abelianization(name, p):
    gens, n = CORPUS[name]
    gs = GeneratorSet.of([Permutation(g) for g in gens])
    assert h1(ModuleRep.trivial(gs, p)).dim_H1 == Brute(gens, n).abelianization_p_rank(p)


def test_invalid_module_rejected():
    s3 = GeneratorSet.of([parse_cycles("(1,2,3)", 3), parse_cycles("(1,2)", 3)])
    # the 3-cycle sent to an involution does not define a representation
    V = ModuleRep(2, 2, [np.array([[0, 1], [1, 0]]), np.array([[1, 1], [0, 1]])], s3)
    assert not V.validate()
    with pytest.raises(ModuleError):
        ModuleRep(2, 2, [np.array([[1, 1], [1, 1]]), np.eye(2)], s3)
    with pytest.raises(ModuleError):
        ModuleRep(2, 2, [np.eye(2)], s3)


def test_lemma4_cyclic_free():
    V = z7()
    G = V.chain()
    v = lemma4_criterion(G, V, Permutation(G.generators[0]))
    assert v.verdict == "vanishes"
    assert h1(V).dim_H1 == 0


def test_lemma4_a7_three_cycle(a7):
    G = a7.chain()
    x = parse_cycles("(1,2,3)", 7)
    assert fixed_space(a7, [x]) == 0
    v = lemma4_criterion(G, a7, x)
    assert v.verdict == "vanishes" and v.class_size == 70
    assert h1(a7).dim_H1 == 0
    assert v.to_json()["verdict"] == "vanishes"


def test_lemma4_a7_five_cycle_agrees(a7):
    v = lemma4_criterion(a7.chain(), a7, parse_cycles("(1,2,3,4,5)", 7))
    assert v.verdict in ("vanishes", "inconclusive")


def test_lemma4_preconditions(a7):
    G = a7.chain()
    with pytest.raises(ValueError, match="fixed"):
        lemma4_criterion(G, a7, parse_cycles("(1,2,3,4,5,6,7)", 7))
    with pytest.raises(ValueError, match="prime to p"):
        lemma4_criterion(G, a7, parse_cycles("(1,2)(3,4)", 7))


def test_lemma4_class_budget(a7):
    v = lemma4_criterion(a7.chain(), a7, parse_cycles("(1,2,3)", 7), class_budget=10)
    assert v.verdict == "inconclusive"


@pytest.mark.parametrize("make", [gl32, sl23, sl25, z7, s3_natural])
def test_lemma4_soundness(make):
    V = make()
    G = V.chain()
    exact = h1(V).dim_H1
    seen = set()
    for g in G.element_array():
        x = Permutation(g)
        if x.cycle_type() in seen or x.is_identity() or np.gcd(x.order(), V.prime) != 1:
            continue
        seen.add(x.cycle_type())
        if fixed_space(V, [x]):
            continue
        if lemma4_criterion(G, V, x).verdict == "vanishes":
            assert exact == 0


def test_linear_algebra_mod_p():
    rows = np.array([[1, 2, 0], [2, 4, 0], [0, 0, 3]])
    assert rank_mod_p(rows, 5) == 2
    assert rank_mod_p(rows, 3) == 1
    ns = nullspace_mod_p(rows, 3, 5)
    assert ns.shape == (1, 3)
    assert not ((rows @ ns.T) % 5).any()


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 6), st.integers(1, 8), st.sampled_from([2, 3, 5]), st.integers(0, 2**32 - 1))
def test_nullspace_property(r, c, p, seed):
    rows = np.random.default_rng(seed).integers(0, p, size=(r, c))
    ns = nullspace_mod_p(rows, c, p)
    assert ns.shape[0] == c - rank_mod_p(rows, p)
    assert not ((rows @ ns.T) % p).any()
    if ns.shape[0]:
        assert rank_mod_p(ns, p) == ns.shape[0]


def test_module_json_files_load():
    for path in MODULES.glob("*.json"):
        V = ModuleRep.load(path)
        assert V.dimension in (4, 8) and V.prime == 2
