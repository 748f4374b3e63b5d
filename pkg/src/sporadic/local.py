"""Local subgroup machinery: Sylow subgroups, cores, centers, classes,
fusion counts, 2-constraint and automorphisms of small groups.

Every returned subgroup carries a certified stabilizer chain.  Sylow
subgroups are built by descending into centralizers of p-central elements
and, when the chosen element is central, passing to the action on its
orbits (the kernel of that action is elementary abelian).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .actions import CombinedAction, induced_action
from .backtrack import (
    Budget,
    _budget,
    centralizer_chain,
    conj,
    conjugacy_witness,
    intersection_chain,
    subgroup_conjugacy_witness,
)
from .bsgs import StabilizerChain, schreier_sims
from .perm import IDX, GeneratorSet, Permutation, cycles_of

ENUMERATION_LIMIT = 4 * 10**8  # entries (elements x degree) allowed in explicit element lists


class SylowFailure(RuntimeError):
    """The randomized Sylow construction did not reach the full p-part."""


# ----------------------------------------------------------------- numbers
def p_part(n: int, p: int) -> int:
    q = 1
    while n % p == 0:
        n //= p
        q *= p
    return q


def prime_divisors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _chain(G) -> StabilizerChain:
    if isinstance(G, StabilizerChain):
        return G
    return schreier_sims(G)


def _perm_order(g: np.ndarray) -> int:
    return math.lcm(1, *(len(c) for c in cycles_of(g)))


def _power(g: np.ndarray, k: int) -> np.ndarray:
    return (Permutation._wrap(g) ** k).images


def _gens_chain(gens: Sequence[np.ndarray], n: int, order: int | None = None) -> StabilizerChain:
    return schreier_sims(list(gens), degree=n, order_bound=order)


# ------------------------------------------------------------------ Sylow
@dataclass
class SylowSubgroup:
    prime: int
    chain: StabilizerChain

    @property
    def order(self) -> int:
        return self.chain.order()

    @property
    def generators(self) -> GeneratorSet:
        return self.chain.generator_set()


def random_p_element(X: StabilizerChain, p: int, rng: np.random.Generator, tries: int = 5000) -> np.ndarray:
    """An element of order exactly ``p`` (power of a random element)."""
    for _ in range(tries):
        g = X.random_array(rng)
        o = _perm_order(g)
        if o % p == 0:
            return _power(g, o // p)
    raise SylowFailure(f"no element of order {p} found")


def _omega_center(Q: StabilizerChain, p: int, rng) -> list[np.ndarray]:
    """Elements of order p in Z(Q), shuffled."""
    Z = center_chain(Q)
    ident = np.arange(Q.degree, dtype=IDX)
    if Z.order() * Q.degree <= ENUMERATION_LIMIT // 100:
        cand = list(Z.element_array())
    else:
        cand = [Z.random_array(rng) for _ in range(200)]
    out = {}
    for z in cand:
        if np.array_equal(z, ident):
            continue
        o = _perm_order(z)
        if o % p == 0:
            w = _power(z, o // p)
            out[w.tobytes()] = w
    vals = list(out.values())
    rng.shuffle(vals)
    return vals


def _sylow_rec(X: StabilizerChain, p: int, rng, budget: Budget, attempts: int) -> StabilizerChain:
    """Climb through centralizers: for a p-subgroup Q below a Sylow P,
    N_P(Q) > Q fixes some z of order p in Z(Q), so C_X(z) has a larger
    p-part than Q."""
    full = p_part(X.order(), p)
    if full == 1:
        return schreier_sims([], degree=X.degree)
    if full == X.order():
        return X
    x = random_p_element(X, p, rng)
    C = centralizer_chain(X, x, budget=budget, rng=rng)
    if C.order() == X.order():
        return _sylow_quotient(X, x, p, rng, budget, attempts)
    Q = _sylow_rec(C, p, rng, budget, attempts)
    while Q.order() < full:
        for z in _omega_center(Q, p, rng):
            C = centralizer_chain(X, z, budget=budget, rng=rng)
            if p_part(C.order(), p) > Q.order():
                if C.order() == X.order():
                    return _sylow_quotient(X, z, p, rng, budget, attempts)
                Q = _sylow_rec(C, p, rng, budget, attempts)
                break
        else:
            raise SylowFailure(f"centralizer climb stalled at order {Q.order()} below {full}")
    return Q


def _sylow_quotient(X: StabilizerChain, x: np.ndarray, p: int, rng, budget, attempts) -> StabilizerChain:
    """``x`` is central of order p: recurse on the action on the <x>-orbits."""
    label = np.empty(X.degree, dtype=IDX)
    cyc = cycles_of(x, include_fixed=True)
    for i, c in enumerate(cyc):
        label[c] = i
    images = induced_action(X.generators, label, len(cyc))
    hom = CombinedAction(X, images, rng=rng)
    Pbar = _sylow_rec(hom.image_chain(), p, rng, budget, attempts)
    kernel = hom.kernel_generators()
    lifts = [hom.preimage(g) for g in Pbar.generators]
    target = p_part(X.order(), p)
    if Pbar.order() * hom.kernel_order() != target:
        raise AssertionError("kernel of the orbit action is not a p-group")
    return _gens_chain(lifts + kernel, X.degree, target)


def sylow_chain(G, p: int, rng: np.random.Generator | None = None, budget=None,
                attempts: int = 20) -> StabilizerChain:
    """Certified chain of a Sylow p-subgroup of ``G`` (trivial if p does not divide |G|)."""
    G = _chain(G)
    rng = rng if rng is not None else np.random.default_rng(p)
    budget = _budget(budget)
    target = p_part(G.order(), p)
    last: Exception | None = None
    for _ in range(attempts):
        try:
            P = _sylow_rec(G, p, rng, budget, attempts)
        except SylowFailure as exc:
            last = exc
            continue
        if P.order() == target and all(G.contains(g) for g in P.generators):
            return P
    raise SylowFailure(f"Sylow {p}-subgroup not reached after {attempts} restarts: {last}")


def sylow(G, p: int, rng=None, budget=None) -> SylowSubgroup:
    return SylowSubgroup(p, sylow_chain(G, p, rng, budget))


# ------------------------------------------------------ centers and cores
def center_chain(H, budget=None) -> StabilizerChain:
    H = _chain(H)
    if not H.generators:
        return H
    return centralizer_chain(H, np.stack(H.generators), budget=budget)


def center(H, budget=None) -> GeneratorSet:
    return center_chain(H, budget).generator_set()


def conjugate_chain(H: StabilizerChain, g: np.ndarray) -> StabilizerChain:
    return _gens_chain([conj(h, g) for h in H.generators], H.degree, H.order())


def is_normal(G: StabilizerChain, H: StabilizerChain) -> bool:
    return all(H.contains(conj(h, g)) for g in G.generators for h in H.generators)


def p_core_chain(G, p: int, P: StabilizerChain | None = None, rng=None, budget=None) -> StabilizerChain:
    """O_p(G): intersect a Sylow subgroup with its conjugates until normal."""
    G = _chain(G)
    O = P if P is not None else sylow_chain(G, p, rng, budget)
    changed = True
    while changed:
        changed = False
        for g in G.generators:
            Og = conjugate_chain(O, g)
            if not all(O.contains(h) for h in Og.generators):
                O = intersection_chain(O, Og, budget)
                changed = True
    if not is_normal(G, O):
        raise AssertionError("p-core is not normal")
    return O


def p_core(G, p: int, rng=None, budget=None) -> GeneratorSet:
    return p_core_chain(G, p, rng=rng, budget=budget).generator_set()


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``a^-1 b^-1 a b``."""
    ai = np.empty_like(a)
    ai[a] = np.arange(a.size, dtype=IDX)
    bi = np.empty_like(b)
    bi[b] = np.arange(b.size, dtype=IDX)
    return b[a[bi[ai]]]


def normal_closure_chain(G, S: Iterable[np.ndarray], rng=None) -> StabilizerChain:
    """Smallest normal subgroup of ``G`` containing ``S`` (certified normal)."""
    G = _chain(G)
    n = G.degree
    rng = rng if rng is not None else np.random.default_rng(11)
    ident = np.arange(n, dtype=IDX)
    gens = [np.asarray(s, dtype=IDX) for s in S if not np.array_equal(s, ident)]
    if not gens:
        return schreier_sims([], degree=n)
    # a few random conjugates usually generate the closure at once
    seed = list(gens)
    for _ in range(4):
        seed.append(conj(gens[int(rng.integers(len(gens)))], G.random_array(rng)))
    N = schreier_sims(seed, degree=n)
    while True:
        extra = None
        for g in G.generators:
            for s in N.generators:
                t = conj(s, g)
                if not N.contains(t):
                    extra = t
                    break
            if extra is not None:
                break
        if extra is None:
            return N
        N = schreier_sims(list(N.generators) + [extra], degree=n)


def derived_subgroup_chain(H, rng=None) -> StabilizerChain:
    H = _chain(H)
    rng = rng if rng is not None else np.random.default_rng(13)
    gens = H.generators
    S = [commutator(a, b) for i, a in enumerate(gens) for b in gens[i + 1:]]
    for _ in range(6):
        S.append(commutator(H.random_array(rng), H.random_array(rng)))
    return normal_closure_chain(H, S, rng)


def derived_subgroup(H, rng=None) -> GeneratorSet:
    return derived_subgroup_chain(H, rng).generator_set()


def normal_closure(G, S, rng=None) -> GeneratorSet:
    arrs = [s.images if isinstance(s, Permutation) else np.asarray(s, dtype=IDX) for s in S]
    return normal_closure_chain(G, arrs, rng).generator_set()


def is_2_constrained(X, rng=None, budget=None) -> bool:
    """C_X(O_2(X)) <= O_2(X)."""
    X = _chain(X)
    Q = p_core_chain(X, 2, rng=rng, budget=budget)
    if not Q.generators or Q.order() == 1:
        return X.order() == 1
    C = centralizer_chain(X, np.stack(Q.generators), budget=budget)
    return all(Q.contains(g) for g in C.generators)


# -------------------------------------------------------- conjugacy classes
@dataclass
class ConjugacyClass:
    representative: Permutation
    element_order: int
    centralizer_order: int
    size: int


@dataclass
class ClassTable:
    group_order: int
    classes: list[ConjugacyClass] = field(default_factory=list)
    complete: bool = False
    mode: str = "complete"

    def sizes(self) -> list[int]:
        return sorted(c.size for c in self.classes)

    def involution_classes(self) -> list[ConjugacyClass]:
        return [c for c in self.classes if c.element_order == 2]

    def to_json(self) -> dict:
        return {
            "group_order": str(self.group_order),
            "mode": self.mode,
            "complete": self.complete,
            "classes": [
                {"order": c.element_order, "centralizer_order": str(c.centralizer_order),
                 "size": str(c.size), "representative": repr(c.representative)}
                for c in self.classes
            ],
        }


class _ClassCollector:
    def __init__(self, G: StabilizerChain, budget: Budget, rng):
        self.G = G
        self.budget = budget
        self.rng = rng
        self.table: list[ConjugacyClass] = []
        self.by_key: dict[tuple, list[ConjugacyClass]] = {}
        self.total = 0

    def add(self, g: np.ndarray) -> bool:
        x = Permutation._wrap(g)
        key = (x.order(), x.cycle_type())
        for c in self.by_key.get(key, []):
            if conjugacy_witness(self.G, c.representative, x, self.budget, self.rng) is not None:
                return False
        C = centralizer_chain(self.G, g, budget=self.budget, rng=self.rng)
        cls = ConjugacyClass(x, key[0], C.order(), self.G.order() // C.order())
        self.table.append(cls)
        self.by_key.setdefault(key, []).append(cls)
        self.total += cls.size
        return True


def conjugacy_classes(G, mode: str = "auto", max_samples: int = 20000, rng=None, budget=None,
                      recheck: bool = True) -> ClassTable:
    """Class representatives with centralizer orders.

    ``complete`` mode samples random elements and their powers until the
    class equation sums to |G|.  ``involutions`` mode covers every
    involution of one Sylow 2-subgroup up to G-fusion.
    """
    G = _chain(G)
    rng = rng if rng is not None else np.random.default_rng(17)
    budget = _budget(budget)
    if mode == "auto":
        mode = "complete" if G.order() <= 10**9 else "involutions"
    col = _ClassCollector(G, budget, rng)
    n = G.degree
    if mode == "complete":
        col.add(np.arange(n, dtype=IDX))
        for _ in range(max_samples):
            if col.total == G.order():
                break
            g = G.random_array(rng)
            o = _perm_order(g)
            for d in sorted(d for d in range(1, o + 1) if o % d == 0):
                col.add(_power(g, o // d))
        table = ClassTable(G.order(), col.table, col.total == G.order(), mode)
    elif mode == "involutions":
        T = sylow_chain(G, 2, rng, budget)
        if T.order() * n > ENUMERATION_LIMIT:
            raise ValueError("Sylow 2-subgroup too large to enumerate")
        E = T.element_array(ENUMERATION_LIMIT)
        ident = np.arange(n, dtype=IDX)
        invs = [e for e in E if not np.array_equal(e, ident) and np.array_equal(e[e], ident)]
        seen: set[bytes] = set()
        for u in invs:
            if u.tobytes() in seen:
                continue
            # T-class of u, so each T-class is tested once
            orbit = [u]
            seen.add(u.tobytes())
            for v in orbit:
                for t in T.generators:
                    w = conj(v, t)
                    if w.tobytes() not in seen:
                        seen.add(w.tobytes())
                        orbit.append(w)
            col.add(u)
        table = ClassTable(G.order(), col.table, True, mode)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if recheck:
        for c in table.classes:
            C2 = centralizer_chain(G, c.representative.images, budget=budget, recheck=True,
                                   rng=np.random.default_rng(99))
            if C2.order() != c.centralizer_order:
                raise AssertionError("centralizer order changed under recheck")
    return table


# ------------------------------------------------------------ fusion counts
def _subgroup_key(idxs: Iterable[int]) -> frozenset:
    return frozenset(idxs)


def fused_E_p2_class_count(G, p: int, rng=None, budget=None) -> int:
    """Number of G-classes of E_{p^2} subgroups whose nonidentity elements
    form a single G-class."""
    return len(fused_E_p2_classes(G, p, rng, budget))


def fused_E_p2_classes(G, p: int, rng=None, budget=None) -> list[StabilizerChain]:
    """One representative per G-class of fused E_{p^2} subgroups."""
    G = _chain(G)
    rng = rng if rng is not None else np.random.default_rng(19)
    budget = _budget(budget)
    P = sylow_chain(G, p, rng, budget)
    if P.order() > p**6:
        raise ValueError("Sylow subgroup larger than p^6")
    if P.order() < p * p:
        return []
    E = P.element_array()
    n = G.degree
    index = {e.tobytes(): i for i, e in enumerate(E)}
    ident = np.arange(n, dtype=IDX)
    order_p = [i for i, e in enumerate(E) if not np.array_equal(e, ident) and np.array_equal(_power(e, p), ident)]

    def mul(i: int, j: int) -> int:
        return index[E[j][E[i]].tobytes()]

    subgroups: dict[frozenset, tuple[int, int]] = {}
    for a in order_p:
        for b in order_p:
            if mul(a, b) != mul(b, a):
                continue
            powers_a = {index[_power(E[a], k).tobytes()] for k in range(p)}
            if b in powers_a:
                continue
            elems = set()
            for i in range(p):
                for j in range(p):
                    elems.add(index[(_power(E[b], j)[_power(E[a], i)]).tobytes()])
            key = _subgroup_key(elems)
            if key not in subgroups:
                subgroups[key] = (a, b)
    fused = []
    for key, (a, b) in subgroups.items():
        xa = Permutation._wrap(E[a])
        others = [i for i in key if not np.array_equal(E[i], ident) and i != a]
        if all(conjugacy_witness(G, xa, Permutation._wrap(E[i]), budget, rng) is not None for i in others):
            fused.append((a, b))
    reps: list[StabilizerChain] = []
    for a, b in fused:
        H = _gens_chain([E[a], E[b]], n, p * p)
        if not any(subgroup_conjugacy_witness(G, H, K, budget) is not None for K in reps):
            reps.append(H)
    return reps


# ------------------------------------------------------------- four-groups
def normal_four_subgroups(T, budget=None) -> list[StabilizerChain]:
    """All normal E_4 subgroups of the 2-group ``T``.

    A normal four-group U meets Z(T) in some z and U = {1, z, u, uz} with
    u^t in {u, uz}; such u lies in the second center.
    """
    T = _chain(T)
    n = T.degree
    if T.order() & (T.order() - 1):
        raise ValueError("T is not a 2-group")
    if T.order() * n > ENUMERATION_LIMIT:
        raise ValueError("2-group too large to enumerate")
    ident = np.arange(n, dtype=IDX)
    Z = center_chain(T, budget)
    zs = [z for z in Z.element_array() if not np.array_equal(z, ident) and np.array_equal(z[z], ident)]
    E = T.element_array(ENUMERATION_LIMIT)
    invol = E[(E[np.arange(E.shape[0])[:, None], E] == ident).all(axis=1)]
    out: dict[frozenset, StabilizerChain] = {}
    for z in zs:
        zb = z.tobytes()
        for u in invol:
            if np.array_equal(u, ident) or np.array_equal(u, z):
                continue
            uz = z[u]
            if not np.array_equal(z[u], u[z]):
                continue
            ok = all(conj(u, t).tobytes() in (u.tobytes(), uz.tobytes()) for t in T.generators)
            if not ok:
                continue
            key = frozenset((zb, u.tobytes(), uz.tobytes()))
            if key not in out:
                out[key] = _gens_chain([z, u], n, 4)
    for U in out.values():
        if not is_normal(T, U):
            raise AssertionError("four-group is not normal")
    return list(out.values())


def elementary_abelian_subgroups(P, p: int, rank: int, normal_only: bool = False,
                                 limit: int = 10**4) -> list[StabilizerChain]:
    """All E_{p^rank} subgroups of a small group, optionally only the normal ones.

    Subgroups are grown one generator at a time with increasing element
    index; the element sets deduplicate the many generating sequences.
    """
    P = _chain(P)
    if P.order() > limit:
        raise ValueError(f"group of order {P.order()} exceeds the enumeration bound {limit}")
    n = P.degree
    E = P.element_array(limit)
    index = {e.tobytes(): i for i, e in enumerate(E)}
    ident = np.arange(n, dtype=IDX)
    id0 = index[ident.tobytes()]

    def mul(i: int, j: int) -> int:
        return index[E[j][E[i]].tobytes()]

    order_p = [i for i in range(E.shape[0]) if i != id0 and np.array_equal(_power(E[i], p), ident)]
    target = p**rank
    found: dict[frozenset, list[int]] = {}

    def rec(elems: frozenset, gens: list[int]) -> None:
        if len(elems) == target:
            found.setdefault(elems, list(gens))
            return
        for u in order_p:
            if u in elems or (gens and u < gens[-1]):
                continue
            if any(mul(u, s) != mul(s, u) for s in gens):
                continue
            powers = [id0]
            for _ in range(p - 1):
                powers.append(mul(powers[-1], u))
            rec(frozenset(mul(s, w) for s in elems for w in powers), gens + [u])

    rec(frozenset([id0]), [])
    out = []
    for elems, gens in found.items():
        if normal_only and any(index[conj(E[s], g).tobytes()] not in elems
                               for g in P.generators for s in gens):
            continue
        out.append(_gens_chain([E[g] for g in gens], n, target))
    return out


# ------------------------------------------------------- small group tables
class SmallTable:
    """Explicit element table of a small group with right-multiplication
    columns computed on demand."""

    def __init__(self, G, bound: int = 10**4):
        G = _chain(G)
        if G.order() > bound:
            raise ValueError(f"group of order {G.order()} exceeds the bound {bound}")
        self.chain = G
        self.n = G.degree
        self.E = G.element_array(bound)
        self.size = self.E.shape[0]
        self.index = {e.tobytes(): i for i, e in enumerate(self.E)}
        ident = np.arange(self.n, dtype=IDX)
        self.identity = self.index[ident.tobytes()]
        self.orders = [_perm_order(e) for e in self.E]
        self._cols: dict[int, list[int]] = {}
        self._class_size: list[int] | None = None

    def lookup(self, arr: np.ndarray) -> list[int]:
        return [self.index[row.tobytes()] for row in arr]

    def right(self, j: int) -> list[int]:
        """``i -> index(E[i] * E[j])``."""
        col = self._cols.get(j)
        if col is None:
            col = self.lookup(self.E[j][self.E])
            self._cols[j] = col
        return col

    def class_sizes(self) -> list[int]:
        if self._class_size is None:
            parent = list(range(self.size))

            def find(a):
                while parent[a] != a:
                    parent[a] = parent[parent[a]]
                    a = parent[a]
                return a

            for g in self.chain.generators:
                conjd = np.empty_like(self.E)
                conjd[:, g] = g[self.E]
                for i, j in enumerate(self.lookup(conjd)):
                    ra, rb = find(i), find(j)
                    if ra != rb:
                        parent[ra] = rb
            roots = [find(i) for i in range(self.size)]
            count: dict[int, int] = {}
            for r in roots:
                count[r] = count.get(r, 0) + 1
            self._class_size = [count[r] for r in roots]
        return self._class_size

    def generated(self, idxs: Sequence[int]) -> int:
        """Order of the subgroup generated by the given elements."""
        cols = [self.right(j) for j in idxs]
        seen = {self.identity}
        stack = [self.identity]
        while stack:
            e = stack.pop()
            for c in cols:
                f = c[e]
                if f not in seen:
                    seen.add(f)
                    stack.append(f)
        return len(seen)

    def generating_sequence(self, rng=None) -> list[int]:
        """A short generating sequence (irredundant)."""
        rng = rng if rng is not None else np.random.default_rng(23)
        if self.size == 1:
            return []
        by_order = sorted(range(self.size), key=lambda i: -self.orders[i])
        for i in by_order[: min(40, self.size)]:
            if self.generated([i]) == self.size:
                return [i]
        for _ in range(400):
            a, b = (int(v) for v in rng.integers(self.size, size=2))
            if self.generated([a, b]) == self.size:
                return [a, b]
        gens: list[int] = []
        cur = 1
        for i in by_order:
            o = self.generated(gens + [i])
            if o > cur:
                gens.append(i)
                cur = o
            if cur == self.size:
                break
        i = 0
        while i < len(gens):
            rest = gens[:i] + gens[i + 1:]
            if rest and self.generated(rest) == self.size:
                gens = rest
            else:
                i += 1
        return gens


def _extends(src: SmallTable, gens: Sequence[int], dst: SmallTable, images: Sequence[int],
             injective: bool = True) -> bool:
    """Whether gens -> images extends to a homomorphism (injective if asked)."""
    scols = [src.right(g) for g in gens]
    dcols = [dst.right(h) for h in images]
    phi = {src.identity: dst.identity}
    used = {dst.identity}
    stack = [src.identity]
    while stack:
        e = stack.pop()
        fe = phi[e]
        for sc, dc in zip(scols, dcols):
            e2, f2 = sc[e], dc[fe]
            got = phi.get(e2)
            if got is not None:
                if got != f2:
                    return False
                continue
            if injective and f2 in used:
                return False
            phi[e2] = f2
            used.add(f2)
            stack.append(e2)
    return True


def _image_tuples(src: SmallTable, dst: SmallTable, gens: list[int], prune: bool = True,
                  limit: int = 10**7) -> int:
    """Count of injective homomorphisms determined by generator images."""
    if prune:
        ssz, dsz = src.class_sizes(), dst.class_sizes()
        cands = [[j for j in range(dst.size) if dst.orders[j] == src.orders[g] and dsz[j] == ssz[g]] for g in gens]
    else:
        cands = [list(range(dst.size)) for _ in gens]
    count = 0

    def rec(prefix: list[int]) -> None:
        nonlocal count
        if count > limit:
            raise ValueError("too many homomorphisms to count")
        k = len(prefix)
        if k == len(gens):
            if _extends(src, gens, dst, prefix):
                count += 1
            return
        for j in cands[k]:
            if not prune or _extends(src, gens[: k + 1], dst, prefix + [j]):
                rec(prefix + [j])

    rec([])
    return count


@dataclass
class SmallGroupAut:
    automorphisms: int
    inner: int
    complete: bool


def automorphism_group_small(X, bound: int = 10**4, prune: bool = True) -> SmallGroupAut:
    tab = SmallTable(X, bound)
    gens = tab.generating_sequence()
    count = _image_tuples(tab, tab, gens, prune) if gens else 1
    zorder = center_chain(tab.chain).order()
    inner = tab.size // zorder
    if count % inner:
        raise AssertionError("inner automorphism count does not divide the total")
    return SmallGroupAut(count, inner, count == inner and zorder == 1)


def centralizing_automorphism_count(X, Y, bound: int = 10**4) -> int:
    """Number of automorphisms of X that fix every element of the subgroup Y."""
    tab = SmallTable(X, bound)
    ygens = [tab.index[np.asarray(g, dtype=IDX).tobytes()] for g in _chain(Y).generators]
    if tab.generated(ygens) == tab.size:
        return 1
    rest = tab.generating_sequence()
    gens = ygens + rest
    ssz = tab.class_sizes()
    cands = [[j for j in range(tab.size) if tab.orders[j] == tab.orders[g] and ssz[j] == ssz[g]] for g in rest]
    count = 0

    def rec(prefix: list[int]) -> None:
        nonlocal count
        k = len(prefix)
        if k == len(rest):
            count += 1
            return
        for j in cands[k]:
            imgs = ygens + prefix + [j]
            if _extends(tab, gens[: len(imgs)], tab, imgs):
                rec(prefix + [j])

    rec([])
    return count


def is_isomorphic_small(X, Y, bound: int = 10**5) -> bool:
    tx, ty = SmallTable(X, bound), SmallTable(Y, bound)
    if tx.size != ty.size:
        return False
    if sorted(tx.orders) != sorted(ty.orders):
        return False
    gens = tx.generating_sequence()
    if not gens:
        return True
    ssz, dsz = tx.class_sizes(), ty.class_sizes()
    cands = [[j for j in range(ty.size) if ty.orders[j] == tx.orders[g] and dsz[j] == ssz[g]] for g in gens]

    def rec(prefix: list[int]) -> bool:
        k = len(prefix)
        if k == len(gens):
            return True
        return any(_extends(tx, gens[: k + 1], ty, prefix + [j]) and rec(prefix + [j]) for j in cands[k])

    return rec([])


# ------------------------------------------------------------ named groups
def symmetric_group(n: int) -> StabilizerChain:
    if n < 2:
        return schreier_sims([], degree=max(n, 1))
    cyc = np.roll(np.arange(n, dtype=IDX), -1)
    tr = np.arange(n, dtype=IDX)
    tr[[0, 1]] = [1, 0]
    return schreier_sims([cyc, tr], degree=n, order_bound=math.factorial(n))


def alternating_group(n: int) -> StabilizerChain:
    if n < 3:
        return schreier_sims([], degree=max(n, 1))
    gens = []
    for k in range(2, n):
        g = np.arange(n, dtype=IDX)
        g[[0, 1, k]] = [1, k, 0]
        gens.append(g)
    return schreier_sims(gens, degree=n, order_bound=math.factorial(n) // 2)


def cyclic_group(n: int) -> StabilizerChain:
    return schreier_sims([np.roll(np.arange(n, dtype=IDX), -1)], degree=n, order_bound=n)


def sl2_3_central_z4() -> StabilizerChain:
    """SL2(3) extended by the scalars of order 4 in GL2(9), acting on the
    80 nonzero vectors of F_9^2.  Order 24 * 4 / 2 = 48."""
    # F_9 = F_3[i], i^2 = -1; element a + b i stored as (a, b)
    def fmul(x, y):
        return ((x[0] * y[0] - x[1] * y[1]) % 3, (x[0] * y[1] + x[1] * y[0]) % 3)

    def fadd(x, y):
        return ((x[0] + y[0]) % 3, (x[1] + y[1]) % 3)

    field_el = [(a, b) for a in range(3) for b in range(3)]
    vecs = [(u, v) for u in field_el for v in field_el if (u, v) != ((0, 0), (0, 0))]
    where = {v: k for k, v in enumerate(vecs)}

    def perm_of(m):
        out = np.empty(len(vecs), dtype=IDX)
        for k, (u, v) in enumerate(vecs):
            # row vector times matrix
            w = (fadd(fmul(u, m[0][0]), fmul(v, m[1][0])), fadd(fmul(u, m[0][1]), fmul(v, m[1][1])))
            out[k] = where[w]
        return out

    one, zero, minus, i = (1, 0), (0, 0), (2, 0), (0, 1)
    gens = [perm_of(((one, one), (zero, one))), perm_of(((zero, minus), (one, zero))),
            perm_of(((i, zero), (zero, i)))]
    return schreier_sims(gens, degree=len(vecs))
