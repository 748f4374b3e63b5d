from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sporadic.perm import (GeneratorSet, Permutation, PermutationError, compose, identity, inverse,
                           order_of, parse_cycles, print_cycles)


@st.composite
def perms(draw, min_degree=1, max_degree=30, degree=None):
    n = degree if degree is not None else draw(st.integers(min_degree, max_degree))
    return Permutation(draw(st.permutations(list(range(n)))))


@st.composite
def perm_pairs(draw):
    n = draw(st.integers(1, 30))
    return draw(perms(degree=n)), draw(perms(degree=n))


def test_involution_squared():
    t = parse_cycles("(1,2)", 4)
    assert compose(t, t) == identity(4)


def test_three_cycle_squared():
    c = parse_cycles("(0,1,2)", 3, base_index=0)
    assert compose(c, c) == parse_cycles("(0,2,1)", 3, base_index=0)


def test_compose_matches_pointwise_table(rng):
    for _ in range(20):
        p, q = Permutation(rng.permutation(24)), Permutation(rng.permutation(24))
        r = compose(p, q)
        assert all(r(x) == q(p(x)) for x in range(24))


def test_compose_degree_mismatch():
    with pytest.raises(PermutationError):
        compose(identity(3), identity(4))


def test_inverse_examples(rng):
    assert inverse(identity(5)) == identity(5)
    c = parse_cycles("(0,1,2)", 3, base_index=0)
    assert inverse(c) == parse_cycles("(0,2,1)", 3, base_index=0)
    p = Permutation(rng.permutation(100))
    assert compose(p, inverse(p)).is_identity()


def test_parse_examples():
    assert parse_cycles("(1,2,3)(4,5)", 5).images.tolist() == [1, 2, 0, 4, 3]
    assert parse_cycles("", 7) == identity(7)
    with pytest.raises(PermutationError, match="repeated"):
        parse_cycles("(1,1,2)", 5)
    with pytest.raises(PermutationError, match="out of range"):
        parse_cycles("(1,9)", 5)
    with pytest.raises(PermutationError, match="malformed"):
        parse_cycles("(1,2", 5)
    assert parse_cycles("(1 2)(3 4)", 4) == parse_cycles("(1,2)(3,4)", 4)


def test_rejects_non_bijection():
    with pytest.raises(PermutationError):
        Permutation([0, 0, 1])
    with pytest.raises(PermutationError):
        Permutation([0, 3])


def test_order_examples(group):
    assert order_of(identity(6)) == 1
    assert order_of(parse_cycles("(0,1)(2,3,4)", 5, base_index=0)) == 6
    m24 = group("M24")
    for g in m24.generators.generators:
        assert m24.order() % order_of(g) == 0


def test_generator_set_checks_degree():
    with pytest.raises(PermutationError):
        GeneratorSet.of([identity(3), identity(4)])
    gs = GeneratorSet.of([identity(3), parse_cycles("(1,2)", 3)])
    assert gs.as_array().shape == (1, 3)


def test_immutable():
    p = parse_cycles("(1,2)", 3)
    with pytest.raises(ValueError):
        p.images[0] = 2


def test_conjugate_convention():
    x = parse_cycles("(1,2,3)", 4)
    g = parse_cycles("(3,4)", 4)
    # g^-1 x g maps a^g to a^(x g)
    assert x.conjugate(g) == compose(compose(inverse(g), x), g)
    assert x.conjugate(g) == parse_cycles("(1,2,4)", 4)


@given(perm_pairs())
def test_inverse_of_composition(pq):
    p, q = pq
    assert inverse(compose(p, q)) == compose(inverse(q), inverse(p))


@given(perms(), st.sampled_from([0, 1]))
def test_print_parse_round_trip(p, base):
    assert parse_cycles(print_cycles(p, base), p.degree, base) == p


@settings(max_examples=300)
@given(perms(max_degree=12))
def test_order_by_lcm_matches_repeated_composition(p):
    k, cur = 1, p
    while not cur.is_identity():
        cur, k = compose(cur, p), k + 1
    assert order_of(p) == k == math.lcm(*p.cycle_type())


@given(perms())
def test_power_and_parity(p):
    assert (p ** order_of(p)).is_identity()
    assert p ** -1 == inverse(p)
    sign = np.linalg.det(np.eye(p.degree)[p.images])
    assert (sign < 0) == (p.parity() == 1)
