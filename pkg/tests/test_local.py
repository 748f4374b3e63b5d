from __future__ import annotations

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from oracles import Brute, conj, corpus, p_part, perm
from sporadic.backtrack import centralizer_chain, normalizer_chain
from sporadic.bsgs import schreier_sims
from sporadic.local import (alternating_group, automorphism_group_small, center, center_chain, conjugacy_classes,
                            conjugate_chain, cyclic_group, derived_subgroup_chain, elementary_abelian_subgroups,
                            fused_E_p2_class_count, is_2_constrained, is_isomorphic_small, is_normal,
                            normal_closure_chain, normal_four_subgroups, p_core, p_core_chain, prime_divisors,
                            sl2_3_central_z4, sylow, sylow_chain, symmetric_group)
from sporadic.perm import Permutation, parse_cycles

CORPUS = {name: (gens, n) for name, gens, n in corpus()}
ALL_BUNDLED = ["M11", "M12", "M12.2", "M22", "M22.2", "M23", "M24", "J1", "J2", "J2.2", "HS", "HS.2",
               "Mc", "Mc.2", "Suz", "Suz.2", "He", "He.2", "Ru", "Co3", "Co2", "Fi22", "Fi22.2"]


def _elements(ch):
    return [Permutation(e) for e in ch.element_array()]


def _is_abelian(ch) -> bool:
    g = ch.generators
    return all(np.array_equal(a[b], b[a]) for a in g for b in g)


def test_sylow_m11(group, rng):
    G = group("M11").chain
    S = sylow(G, 2, rng)
    assert S.order == 16
    elems = _elements(S.chain)
    assert {e.order() for e in elems} == {1, 2, 4, 8}
    Z = center_chain(S.chain)
    assert Z.order() == 2
    # semidihedral: not abelian, 5 involutions, 6 elements of order 4
    assert sum(e.order() == 2 for e in elems) == 5
    P3 = sylow_chain(G, 3, rng)
    assert P3.order() == 9 and _is_abelian(P3)
    assert all(e.order() in (1, 3) for e in _elements(P3))


def test_sylow_he(group, rng):
    P = sylow_chain(group("He").chain, 5, rng)
    assert P.order() == 25 and _is_abelian(P)
    assert all(e.order() in (1, 5) for e in _elements(P))


def test_sylow_for_non_divisor(rng):
    assert sylow_chain(symmetric_group(4), 5, rng).order() == 1


@pytest.mark.parametrize("name", ALL_BUNDLED)
def test_sylow_full_p_part(group, name):
    G = group(name).chain
    rng = np.random.default_rng(2024)
    for p in [2, 3, 5, 7, 11, 13, 17, 19, 23]:
        if G.order() % p:
            continue
        P = sylow_chain(G, p, rng)
        assert P.order() == p_part(G.order(), p)
        assert all(G.contains(g) for g in P.generators)


def test_center_examples(group, rng):
    c = cyclic_group(12)
    assert center_chain(c).order() == 12
    T = sylow_chain(group("J2").chain, 2, rng)
    assert center_chain(T).order() == 2
    T = sylow_chain(group("M12").chain, 2, rng)
    assert T.order() == 64
    elems = T.element_array()
    brute_center = [e for e in elems if all(np.array_equal(e[g], g[e]) for g in T.generators)]
    assert len(brute_center) == center_chain(T).order() == 2
    assert schreier_sims(center(T)).order() == 2


def test_p_core_examples(group, rng):
    M11 = group("M11").chain
    assert p_core_chain(M11, 2, rng=rng).order() == 1
    He = group("He").chain
    P = sylow_chain(He, 5, rng)
    N = normalizer_chain(He, P)
    Q = p_core_chain(N, 5, rng=rng)
    assert Q.order() == 25 and all(Q.contains(g) for g in P.generators)


def test_p_core_of_m22_parabolic(group, rng):
    G = group("M22").chain
    T = sylow_chain(G, 2, rng)
    cands = elementary_abelian_subgroups(T, 2, 4, normal_only=True)
    assert len(cands) == 2
    for Q in cands:
        N = normalizer_chain(G, Q)
        core = p_core_chain(N, 2, rng=rng)
        assert core.order() == 16 and all(core.contains(g) for g in Q.generators)
        assert N.order() in (1920, 5760)


def test_derived_examples(group):
    assert derived_subgroup_chain(cyclic_group(6)).order() == 1
    assert derived_subgroup_chain(group("M22.2").chain).order() == 443520
    s4 = symmetric_group(4)
    d = derived_subgroup_chain(s4)
    assert d.order() == 12 and all(Permutation(g).parity() == 0 for g in d.generators)
    assert is_normal(s4, d)


def test_normal_closure():
    s4 = symmetric_group(4)
    v = normal_closure_chain(s4, [perm(4, [0, 1], [2, 3])])
    assert v.order() == 4
    assert normal_closure_chain(s4, [perm(4, [0, 1])]).order() == 24


def test_class_examples(group):
    s3 = symmetric_group(3)
    t = conjugacy_classes(s3)
    assert t.complete and t.sizes() == [1, 2, 3]
    m12 = group("M12").chain
    inv = conjugacy_classes(m12, mode="involutions")
    assert len(inv.involution_classes()) == 2
    # brute force over all 95040 elements
    E = m12.element_array()
    ident = np.arange(12)
    invs = {e.tobytes(): e for e in E if not np.array_equal(e, ident) and np.array_equal(e[e], ident)}
    seen, classes = set(), 0
    for k, e in invs.items():
        if k in seen:
            continue
        classes += 1
        todo = [e]
        seen.add(k)
        while todo:
            y = todo.pop()
            for g in m12.generators:
                z = conj(y, g)
                if z.tobytes() not in seen:
                    seen.add(z.tobytes())
                    todo.append(z)
    assert classes == 2
    assert sorted(c.size for c in inv.involution_classes()) == sorted([396, 495])


@pytest.mark.parametrize("name", ["M11", "M12", "M22", "J1"])
def test_class_equation(group, name):
    G = group(name).chain
    t = conjugacy_classes(G, mode="complete", recheck=True)
    assert t.complete and sum(t.sizes()) == G.order()
    for c in t.classes:
        assert c.size * c.centralizer_order == G.order()
    js = t.to_json()
    assert js["complete"] and len(js["classes"]) == len(t.classes)


def test_fused_examples(group):
    assert fused_E_p2_class_count(cyclic_group(9), 3) == 0
    assert fused_E_p2_class_count(symmetric_group(4), 3) == 0
    G = group("M11").chain
    assert fused_E_p2_class_count(G, 3) == 1
    # brute force: the Sylow 3 is the only E9 up to conjugacy and its 8 elements of order 3 are fused
    E = G.element_array()
    ident = np.arange(11)
    threes = [e for e in E if not np.array_equal(e, ident) and np.array_equal(e[e[e]], ident)]
    cls = {threes[0].tobytes()}
    todo = [threes[0]]
    while todo:
        y = todo.pop()
        for g in G.generators:
            z = conj(y, g)
            if z.tobytes() not in cls:
                cls.add(z.tobytes())
                todo.append(z)
    assert len(cls) == len(threes)


def test_two_constrained_examples(group, rng):
    T = sylow_chain(group("M12").chain, 2, rng)
    assert is_2_constrained(T)
    J2 = group("J2").chain
    z = center_chain(sylow_chain(J2, 2, rng)).generators[0]
    assert is_2_constrained(centralizer_chain(J2, z))
    gens, n = CORPUS["Z3xS3"]
    assert not is_2_constrained(schreier_sims([Permutation(g) for g in gens]))


def test_automorphism_examples():
    z2 = cyclic_group(2)
    a = automorphism_group_small(z2)
    assert a.automorphisms == 1 and a.inner == 1 and not a.complete
    a = automorphism_group_small(symmetric_group(3))
    assert a.automorphisms == 6 and a.complete
    a = automorphism_group_small(cyclic_group(7))
    assert a.automorphisms == 6 and not a.complete
    with pytest.raises(ValueError, match="bound"):
        automorphism_group_small(symmetric_group(8), bound=1000)


@pytest.mark.parametrize("name", sorted(n for n, (g, d) in CORPUS.items() if Brute(g, d).order <= 200))
def test_automorphisms_pruned_vs_exhaustive(name):
    gens, n = CORPUS[name]
    X = schreier_sims([Permutation(g) for g in gens])
    fast = automorphism_group_small(X)
    slow = automorphism_group_small(X, prune=False)
    assert fast.automorphisms == slow.automorphisms
    assert fast.automorphisms % fast.inner == 0


def test_known_automorphism_counts():
    expect = {"S4": 24, "A4": 24, "Q8": 24, "D8": 8, "V4": 6, "E8": 168, "Z8": 4, "A5": 120, "D12": 12}
    for name, count in expect.items():
        gens, n = CORPUS[name]
        assert automorphism_group_small(schreier_sims([Permutation(g) for g in gens])).automorphisms == count


def test_isomorphism_small():
    assert is_isomorphic_small(symmetric_group(3), schreier_sims([Permutation(g) for g in CORPUS["D6"][0]]))
    assert not is_isomorphic_small(cyclic_group(4), schreier_sims([Permutation(g) for g in CORPUS["V4"][0]]))
    assert is_isomorphic_small(alternating_group(5), schreier_sims([Permutation(g) for g in CORPUS["A5_on_6"][0]]))
    sl = sl2_3_central_z4()
    assert sl.order() == 48


def test_normal_four_examples(group, rng):
    v4 = schreier_sims([Permutation(g) for g in CORPUS["V4"][0]])
    fours = normal_four_subgroups(v4)
    assert len(fours) == 1 and fours[0].order() == 4
    q8 = schreier_sims([Permutation(g) for g in CORPUS["Q8"][0]])
    assert normal_four_subgroups(q8) == []
    T = sylow_chain(group("Suz").chain, 2, rng)
    assert len(normal_four_subgroups(T)) == 1


@pytest.mark.parametrize("name", ["M12", "J2", "HS"])
def test_normal_four_invariant_under_conjugation(group, name, rng):
    G = group(name).chain
    T = sylow_chain(G, 2, rng)
    g = G.random_array(rng)
    Tg = conjugate_chain(T, g)
    a = normal_four_subgroups(T)
    b = normal_four_subgroups(Tg)
    translated = sorted(sorted(conj(e, g).tobytes() for e in U.element_array()) for U in a)
    assert translated == sorted(sorted(e.tobytes() for e in U.element_array()) for U in b)
    for U in a:
        assert is_normal(T, U)


@pytest.mark.parametrize("name", ["D16", "V4", "D8wrZ2", "Q8", "E8", "Z4wrZ2"])
def test_elementary_abelian_subgroups_brute(name):
    gens, n = CORPUS[name]
    P = schreier_sims([Permutation(g) for g in gens])
    E = P.element_array()
    ident = np.arange(n)
    invs = [e for e in E if not np.array_equal(e, ident) and np.array_equal(e[e], ident)]
    brute = set()
    for i, a in enumerate(invs):
        for b in invs[i + 1:]:
            if np.array_equal(a[b], b[a]):
                brute.add(frozenset([ident.astype(np.int32).tobytes(), a.tobytes(), b.tobytes(), a[b].tobytes()]))
    got = {frozenset(e.tobytes() for e in U.element_array()) for U in elementary_abelian_subgroups(P, 2, 2)}
    assert got == brute
    normal = [U for U in elementary_abelian_subgroups(P, 2, 2, normal_only=True)]
    assert len(normal) == len(normal_four_subgroups(P))


def test_prime_divisors():
    assert prime_divisors(443520) == [2, 3, 5, 7, 11]
    assert prime_divisors(1) == []


@settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.sampled_from(sorted(CORPUS)), st.sampled_from([2, 3, 5]))
def test_p_core_matches_brute(name, p):
    gens, n = CORPUS[name]
    G = schreier_sims([Permutation(g) for g in gens])
    Q = p_core_chain(G, p, rng=np.random.default_rng(0))
    assert {e.tobytes() for e in Q.element_array()} == Brute(gens, n).p_core(p)
    assert schreier_sims(p_core(G, p)).order() == Q.order()


@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.sampled_from(sorted(CORPUS)))
def test_two_constrained_matches_brute(name):
    gens, n = CORPUS[name]
    b = Brute(gens, n)
    Q = b.p_core(2)
    Qgens = [np.frombuffer(k, dtype=np.int32) for k in Q]
    expect = b.centralizer(Qgens) <= Q
    assert is_2_constrained(schreier_sims([Permutation(g) for g in gens])) == expect


@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.sampled_from(sorted(CORPUS)))
def test_classes_match_brute(name):
    gens, n = CORPUS[name]
    b = Brute(gens, n)
    t = conjugacy_classes(schreier_sims([Permutation(g) for g in gens]), mode="complete")
    assert t.complete
    assert t.sizes() == sorted(len(c) for c in b.classes())
