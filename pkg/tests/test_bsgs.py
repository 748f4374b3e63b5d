from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import Brute, corpus
from sporadic.atlas import available_groups
from sporadic.bsgs import (contains, order, point_stabilizer, random_element, rebase,
                           schreier_sims)
from sporadic.perm import GeneratorSet, Permutation, PermutationError, identity, parse_cycles

CORPUS = corpus()
SMALL_BUNDLED = ["M11", "M12", "M12.2", "M22", "M22.2", "M23", "M24", "J1", "J2", "J2.2", "HS", "HS.2"]


def test_cyclic_five():
    ch = schreier_sims([parse_cycles("(0,1,2,3,4)", 5, 0)])
    assert order(ch) == 5


def test_trivial_group(rng):
    ch = schreier_sims([identity(4)])
    assert order(ch) == 1
    assert random_element(ch, rng).is_identity()


def test_mathieu_ladder(group):
    # sharply 4-transitive M11; M24 via a 5-transitivity ladder of point stabilizers
    assert group("M11").order() == 11 * 10 * 9 * 8
    m24 = group("M24").chain
    r = rebase(m24, range(5))
    assert r.orbit_sizes()[:5] == [24, 23, 22, 21, 20]
    assert r.stabilizer_chain(5).order() == 48
    assert m24.order() == 24 * 23 * 22 * 21 * 20 * 48 == 244823040


def test_hs_and_fi22_orders(group):
    hs, m22 = group("HS"), group("M22")
    assert hs.order() == 100 * m22.order() == 44352000
    assert group("Fi22").order() % 3510 == 0


def test_contains_examples(group):
    m12 = group("M12").chain
    assert contains(m12, identity(12))
    for g in m12.generator_set().generators:
        assert contains(m12, g)
    assert not contains(m12, parse_cycles("(1,2)", 12))
    with pytest.raises(PermutationError):
        contains(m12, identity(11))


def test_random_elements_of_m11(group, rng):
    m11 = group("M11").chain
    orders = set()
    for _ in range(10**4):
        g = random_element(m11, rng)
        orders.add(g.order())
    assert orders <= {1, 2, 3, 4, 5, 6, 8, 11}
    brute = Brute(list(m11.generator_set().as_array()), 11)
    assert {Permutation(e).order() for e in brute.E} == {1, 2, 3, 4, 5, 6, 8, 11}
    assert all(contains(m11, random_element(m11, rng)) for _ in range(200))


def test_random_element_uniform(rng):
    # chi-square on S4 with 24 cells
    ch = schreier_sims([parse_cycles("(1,2,3,4)", 4), parse_cycles("(1,2)", 4)])
    counts = {}
    for _ in range(24000):
        k = random_element(ch, rng).images.tobytes()
        counts[k] = counts.get(k, 0) + 1
    assert len(counts) == 24
    chi2 = sum((c - 1000) ** 2 / 1000 for c in counts.values())
    assert chi2 < 60  # 23 degrees of freedom; p < 1e-4 above this


def test_point_stabilizer_examples(group):
    c3 = schreier_sims([parse_cycles("(0,1,2)", 3, 0)])
    assert order(schreier_sims(point_stabilizer(c3, 0))) == 1
    hs = group("HS").chain
    assert order(schreier_sims(point_stabilizer(hs, 5))) == 443520
    m24 = group("M24").chain
    assert order(schreier_sims(point_stabilizer(m24, 7))) == 10200960
    with pytest.raises(PermutationError):
        point_stabilizer(m24, 24)


def test_chain_invariants(group):
    ch = group("M22").chain
    assert ch.complete
    for i, b in enumerate(ch.base):
        for g in ch.level_generators(i):
            assert all(g[x] == x for x in ch.base[:i])
    for g in ch.strong:
        h, lev = ch.sift(g)
        assert lev == len(ch.levels) and np.array_equal(h, np.arange(ch.degree))


@pytest.mark.parametrize("name", SMALL_BUNDLED)
def test_orbit_stabilizer_every_point(group, name):
    ch = group(name).chain
    for pt in range(ch.degree):
        r = rebase(ch, [pt])
        assert r.orbit_sizes()[0] * r.stabilizer_chain(1).order() == ch.order()


@pytest.mark.parametrize("name", ["Mc", "Co3", "Suz", "He", "Co2", "Ru", "Fi22"])
def test_orbit_stabilizer_sampled_points(group, name, rng):
    ch = group(name).chain
    for pt in rng.choice(ch.degree, 2, replace=False):
        r = rebase(ch, [int(pt)])
        assert r.orbit_sizes()[0] * r.stabilizer_chain(1).order() == ch.order()


@pytest.mark.parametrize("name", ["M11", "M12", "M22", "M23", "M24", "J2", "HS"])
def test_order_independent_of_base_order(group, name, rng):
    gens = group(name).generators
    n = gens.degree
    for _ in range(2):
        base = rng.permutation(n)[:4].tolist()
        ch = schreier_sims(gens, base=base, base_preference=rng.permutation(n).tolist())
        assert ch.base[:4] == base
        assert ch.order() == group(name).order()


@pytest.mark.parametrize("name,gens,n", CORPUS, ids=[c[0] for c in CORPUS])
def test_order_matches_enumeration(name, gens, n):
    ch = schreier_sims([Permutation(g) for g in gens])
    brute = Brute(gens, n)
    assert ch.order() == brute.order
    elems = ch.element_array()
    assert {e.tobytes() for e in elems} == set(brute.index)
    assert all(ch.rank(ch.unrank(r)) == r for r in range(0, ch.order(), max(1, ch.order() // 50)))


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 7), st.lists(st.permutations(list(range(7))), min_size=1, max_size=3))
def test_order_random_generators(n, raw):
    gens = [Permutation([x for x in p if x < n]) for p in raw]
    ch = schreier_sims(gens)
    assert ch.order() == Brute([g.images for g in gens], n).order


def test_bundled_inventory():
    have = set(available_groups())
    assert {"M11", "M12", "M12.2", "M22", "M22.2", "M23", "M24", "J1", "J2", "J2.2", "HS", "HS.2", "Mc",
            "Mc.2", "Suz", "Suz.2", "He", "He.2", "Ru", "Co3", "Co2", "Fi22", "Fi22.2"} <= have


def test_generator_set_input_forms():
    a = parse_cycles("(1,2,3)", 3)
    b = parse_cycles("(1,2)", 3)
    assert schreier_sims(GeneratorSet.of([a, b])).order() == 6
    assert schreier_sims([a.images, b.images]).order() == 6
