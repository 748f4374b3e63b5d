"""Stabilizer chains via Schreier-Sims.

A randomized phase (product replacement elements sifted through the partial
chain) builds most of the chain quickly.  Completeness is then certified in
one of two ways:

* deterministically: every Schreier generator of every level sifts to the
  identity through the deeper levels, or
* by an order bound: when the caller knows ``|<gens>| <= bound`` and the
  product of basic orbit lengths reaches ``bound``.  The product never
  exceeds the true order, so equality proves the chain complete.

Transversals are Schreier vectors (parent point and generator label per
orbit point).  Inverse coset representatives are cached beside them because
sifting needs them constantly.
"""
from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .perm import IDX, GeneratorSet, Permutation, PermutationError


def _inverse(arr: np.ndarray) -> np.ndarray:
    inv = np.empty_like(arr)
    inv[arr] = np.arange(arr.size, dtype=IDX)
    return inv


class _Level:
    """One level of a chain: base point, orbit and Schreier vector."""

    __slots__ = ("point", "gens", "orbit", "pos", "sv_parent", "sv_gen", "uinv")

    def __init__(self, point: int, n: int):
        self.point = point
        self.gens: list[int] = []  # indices into the chain's strong generator list
        self.orbit: list[int] = [point]
        self.pos = np.full(n, -1, dtype=IDX)
        self.pos[point] = 0
        self.sv_parent = np.full(n, -1, dtype=IDX)
        self.sv_gen = np.full(n, -1, dtype=IDX)
        self.sv_parent[point] = -2
        self.sv_gen[point] = -2
        self.uinv: list[np.ndarray] = [np.arange(n, dtype=IDX)]

    def copy(self) -> "_Level":
        c = object.__new__(_Level)
        c.point = self.point
        c.gens = list(self.gens)
        c.orbit = list(self.orbit)
        c.pos = self.pos.copy()
        c.sv_parent = self.sv_parent.copy()
        c.sv_gen = self.sv_gen.copy()
        c.uinv = list(self.uinv)
        return c


class StabilizerChain:
    """Base and strong generating set of a permutation group.

    Build with :func:`schreier_sims`.  Once complete the chain is treated as
    immutable; :meth:`packed` exposes flat arrays for the numba kernels.
    """

    def __init__(self, degree: int, generators: Sequence[np.ndarray]):
        self.degree = int(degree)
        self.generators = [np.ascontiguousarray(g, dtype=IDX) for g in generators]
        self.strong: list[np.ndarray] = []
        self.strong_inv: list[np.ndarray] = []
        self.levels: list[_Level] = []
        self.complete = False
        self._packed = None

    # ------------------------------------------------------------------ basics
    @property
    def base(self) -> list[int]:
        return [lv.point for lv in self.levels]

    def orbit_sizes(self) -> list[int]:
        return [len(lv.orbit) for lv in self.levels]

    def order(self) -> int:
        return math.prod(self.orbit_sizes())

    def generator_set(self) -> GeneratorSet:
        gens = [Permutation._wrap(g) for g in self.generators]
        if not gens:
            gens = [Permutation.identity(self.degree)]
        return GeneratorSet(self.degree, tuple(gens))

    def strong_generator_set(self) -> GeneratorSet:
        gens = [Permutation._wrap(g) for g in self.strong] or [Permutation.identity(self.degree)]
        return GeneratorSet(self.degree, tuple(gens))

    def level_generators(self, i: int) -> list[np.ndarray]:
        if i >= len(self.levels):
            return []
        return [self.strong[j] for j in self.levels[i].gens]

    def transversal_inverse(self, i: int, point: int) -> np.ndarray:
        lv = self.levels[i]
        return lv.uinv[int(lv.pos[point])]

    def transversal(self, i: int, point: int) -> np.ndarray:
        """Coset representative ``u`` in level ``i`` with ``base[i]^u = point``."""
        return _inverse(self.transversal_inverse(i, point))

    def __repr__(self) -> str:
        return f"StabilizerChain(degree={self.degree}, order={self.order()}, base={self.base})"

    # ------------------------------------------------------------------ sifting
    def sift(self, g: np.ndarray, start: int = 0) -> tuple[np.ndarray, int]:
        h = g
        for i in range(start, len(self.levels)):
            lv = self.levels[i]
            j = lv.pos[h[lv.point]]
            if j < 0:
                return h, i
            if j:
                h = lv.uinv[j][h]
        return h, len(self.levels)

    def contains(self, p: Permutation | np.ndarray) -> bool:
        arr = p.images if isinstance(p, Permutation) else np.asarray(p, dtype=IDX)
        if arr.size != self.degree:
            raise PermutationError(f"degree mismatch: {arr.size} vs {self.degree}")
        if self._packed is not None:
            base, pos, offs, uinv, _ = self._packed
            return bool(kernels.contains_packed(arr, base, pos, offs, uinv))
        h, lev = self.sift(arr)
        return lev == len(self.levels) and bool(np.array_equal(h, np.arange(self.degree, dtype=IDX)))

    def __contains__(self, p) -> bool:
        return self.contains(p)

    # ------------------------------------------------------------- construction
    def _new_level(self, point: int) -> int:
        self.levels.append(_Level(point, self.degree))
        return len(self.levels) - 1

    def _extend_orbit(self, i: int, new_gen: int) -> None:
        lv = self.levels[i]
        lv.gens.append(new_gen)
        s = self.strong[new_gen]
        orbit, pos = lv.orbit, lv.pos
        imgs = s[np.asarray(orbit, dtype=IDX)]
        fresh = np.flatnonzero(pos[imgs] < 0)
        if fresh.size == 0:
            return
        s_inv = self.strong_inv[new_gen]

        def add(y: int, x: int, j: int, ginv: np.ndarray) -> None:
            pos[y] = len(orbit)
            orbit.append(y)
            lv.sv_parent[y] = x
            lv.sv_gen[y] = j
            lv.uinv.append(lv.uinv[pos[x]][ginv])

        head = len(orbit)
        for t in fresh.tolist():
            y = int(imgs[t])
            if pos[y] < 0:
                add(y, orbit[t], new_gen, s_inv)
        # new points are closed under every generator of the level
        gens = [(j, self.strong[j], self.strong_inv[j]) for j in lv.gens]
        while head < len(orbit):
            x = orbit[head]
            head += 1
            for j, g, ginv in gens:
                y = int(g[x])
                if pos[y] < 0:
                    add(y, x, j, ginv)

    def _add_strong(self, g: np.ndarray, upto: int) -> None:
        """Add ``g`` (fixing base[:upto]) as a strong generator of levels 0..upto."""
        self.strong.append(g)
        self.strong_inv.append(_inverse(g))
        idx = len(self.strong) - 1
        if upto == len(self.levels):
            self._new_level(self._choose_point(g))
        for i in range(upto + 1):
            self._extend_orbit(i, idx)
        self._packed = None

    def _choose_point(self, g: np.ndarray) -> int:
        pref = getattr(self, "_preference", None)
        if pref is not None:
            moved = g[pref] != pref
            if moved.any():
                return int(pref[int(np.argmax(moved))])
        # the point in the longest cycle of g, ties to the smallest point
        best, best_len = -1, 0
        seen = np.zeros(self.degree, dtype=bool)
        for start in np.flatnonzero(g != np.arange(self.degree, dtype=IDX)).tolist():
            if seen[start]:
                continue
            length = 0
            x = start
            while not seen[x]:
                seen[x] = True
                length += 1
                x = int(g[x])
            if length > best_len:
                best, best_len = start, length
        if best < 0:
            raise ValueError("identity has no moved point")
        return best

    def _sift_and_add(self, g: np.ndarray) -> bool:
        """Sift ``g``; on a non-identity residue add it.  Returns True if added."""
        h, lev = self.sift(g)
        if lev == len(self.levels) and np.array_equal(h, np.arange(self.degree, dtype=IDX)):
            return False
        self._add_strong(h, lev)
        return True

    def _verify(self) -> None:
        """Deterministic Schreier-Sims test, repairing the chain as needed."""
        n = self.degree
        ident = np.arange(n, dtype=IDX)
        i = len(self.levels) - 1
        while i >= 0:
            lv = self.levels[i]
            if i == 0:
                gen_list = [(-1, g) for g in self.generators]
            else:
                gen_list = [(j, self.strong[j]) for j in lv.gens]
            added_at = None
            for bi, beta in enumerate(list(lv.orbit)):
                u = _inverse(lv.uinv[bi])
                for j, s in gen_list:
                    gamma = int(s[beta])
                    if j >= 0 and lv.sv_parent[gamma] == beta and lv.sv_gen[gamma] == j:
                        continue
                    schreier = lv.uinv[lv.pos[gamma]][s[u]]
                    h, lev = self.sift(schreier, i + 1)
                    if lev == len(self.levels) and np.array_equal(h, ident):
                        continue
                    self._add_strong(h, lev)
                    added_at = lev
                    break
                if added_at is not None:
                    break
            if added_at is None:
                i -= 1
            else:
                i = min(added_at, len(self.levels) - 1)
        self.complete = True

    # ---------------------------------------------------------------- packing
    def packed(self):
        """``(base, pos, offs, uinv, orb)`` flat arrays for kernel calls."""
        if self._packed is None:
            k = len(self.levels)
            n = self.degree
            base = np.array(self.base, dtype=IDX)
            pos = np.full((max(k, 1), n), -1, dtype=IDX)[:k]
            offs = np.zeros(k + 1, dtype=np.int64)
            for i, lv in enumerate(self.levels):
                pos[i] = lv.pos
                offs[i + 1] = offs[i] + len(lv.orbit)
            total = int(offs[-1])
            uinv = np.empty((max(total, 1), n), dtype=IDX)[:total]
            orb = np.empty(total, dtype=IDX)
            for i, lv in enumerate(self.levels):
                a = int(offs[i])
                if lv.uinv:
                    uinv[a:a + len(lv.orbit)] = np.stack(lv.uinv)
                orb[a:a + len(lv.orbit)] = lv.orbit
            self._packed = (base, np.ascontiguousarray(pos), offs, uinv, orb)
        return self._packed

    # ------------------------------------------------------------- sampling
    def random_element(self, rng: np.random.Generator) -> Permutation:
        return Permutation._wrap(self.random_array(rng))

    def random_array(self, rng: np.random.Generator) -> np.ndarray:
        if not self.levels:
            return np.arange(self.degree, dtype=IDX)
        _, _, offs, uinv, _ = self.packed()
        choices = np.array([rng.integers(len(lv.orbit)) for lv in self.levels], dtype=np.int64)
        return kernels.random_element_packed(choices, offs, uinv)

    # ------------------------------------------------------------- ranking
    def strides(self) -> np.ndarray:
        sizes = self.orbit_sizes()
        strides = np.ones(len(sizes), dtype=np.int64)
        for i in range(len(sizes) - 2, -1, -1):
            strides[i] = strides[i + 1] * sizes[i + 1]
        return strides

    def rank(self, g: np.ndarray) -> int:
        """Bijection from the group onto ``range(order)``; -1 for non-members."""
        base, pos, offs, uinv, _ = self.packed()
        if self.order() >= 2**62:
            raise OverflowError("group too large to rank in 64 bits")
        return int(kernels.rank_packed(np.asarray(g, dtype=IDX), base, pos, offs, uinv, self.strides()))

    def unrank(self, r: int) -> np.ndarray:
        _, _, offs, uinv, _ = self.packed()
        sizes = np.array(self.orbit_sizes(), dtype=np.int64)
        return kernels.unrank_packed(int(r), offs, uinv, sizes, self.strides())

    def elements(self):
        """Iterate over every element (small groups only)."""
        for r in range(self.order()):
            yield self.unrank(r)

    def element_array(self, limit: int = 10**6) -> np.ndarray:
        """All elements as an ``(order, n)`` array; row ``r`` is ``unrank(r)``."""
        if self.order() > limit:
            raise ValueError(f"group of order {self.order()} exceeds the element bound {limit}")
        _, _, offs, uinv, _ = self.packed()
        out = np.arange(self.degree, dtype=IDX)[None, :]
        for i in range(len(self.levels) - 1, -1, -1):
            reps = np.argsort(uinv[offs[i]:offs[i + 1]], axis=1).astype(IDX)
            out = reps[:, out].reshape(-1, self.degree)
        return np.ascontiguousarray(out)

    # ------------------------------------------------------------- derived
    def point_stabilizer(self, point: int) -> GeneratorSet:
        if not 0 <= point < self.degree:
            raise PermutationError(f"point {point} out of range")
        ch = rebase(self, [point])
        # strong generators fixing the first base point generate its stabilizer
        gens = [g for g in ch.strong if g[point] == point]
        return GeneratorSet(self.degree, tuple(Permutation._wrap(g) for g in gens) or (Permutation.identity(self.degree),))

    def stabilizer_chain(self, i: int) -> "StabilizerChain":
        """Chain of the pointwise stabilizer of ``base[:i]`` (shares arrays)."""
        ch = StabilizerChain(self.degree, [self.strong[j] for j in (self.levels[i].gens if i < len(self.levels) else [])])
        ch.strong = list(self.strong)
        ch.strong_inv = list(self.strong_inv)
        ch.levels = self.levels[i:]
        ch.complete = self.complete
        return ch


# ---------------------------------------------------------------------------
class ProductReplacement:
    """Product replacement random elements (with accumulator)."""

    def __init__(self, gens: Sequence[np.ndarray], degree: int, rng: np.random.Generator,
                 slots: int = 10, warmup: int = 50):
        self.rng = rng
        gens = [np.asarray(g, dtype=IDX) for g in gens] or [np.arange(degree, dtype=IDX)]
        state = [gens[i % len(gens)].copy() for i in range(max(slots, len(gens)))]
        self.state = state
        self.acc = np.arange(degree, dtype=IDX)
        for _ in range(warmup):
            self.next()

    def next(self) -> np.ndarray:
        m = len(self.state)
        i = int(self.rng.integers(m))
        j = int(self.rng.integers(m - 1))
        if j >= i:
            j += 1
        other = self.state[j]
        if self.rng.integers(2):
            other = _inverse(other)
        if self.rng.integers(2):
            self.state[i] = other[self.state[i]]  # state[i] * other
        else:
            self.state[i] = self.state[i][other]  # other * state[i]
        self.acc = self.state[i][self.acc]
        return self.acc


def schreier_sims(
    gens: GeneratorSet | Sequence[Permutation] | Sequence[np.ndarray],
    *,
    degree: int | None = None,
    base: Iterable[int] = (),
    base_preference: Sequence[int] | None = None,
    order_bound: int | None = None,
    random_source=None,
    rng: np.random.Generator | None = None,
    patience: int = 30,
    verify: bool = True,
) -> StabilizerChain:
    """Complete stabilizer chain of the group generated by ``gens``.

    ``base`` is a prescribed base prefix (kept even where redundant).
    ``base_preference`` orders the candidates for further base points.
    ``order_bound`` must be a proven upper bound on the group order; reaching
    it certifies completeness without the deterministic pass.
    ``random_source`` is a callable returning random group elements (for
    example uniform samples from an existing chain of the same group).
    """
    arrs, n = _as_arrays(gens, degree)
    ch = StabilizerChain(n, arrs)
    if base_preference is not None:
        ch._preference = np.asarray(base_preference, dtype=IDX)
    for b in base:
        ch._new_level(int(b))
    ident = np.arange(n, dtype=IDX)
    nontrivial = [g for g in arrs if not np.array_equal(g, ident)]
    for g in nontrivial:
        ch._sift_and_add(g)
    if not nontrivial:
        ch.complete = True
        return ch
    if order_bound is not None and ch.order() == order_bound:
        ch.complete = True
        return ch
    rng = rng if rng is not None else np.random.default_rng(0x5EED)
    if random_source is None:
        pr = ProductReplacement(nontrivial, n, rng)
        random_source = pr.next
    streak = 0
    while True:
        if ch._sift_and_add(random_source()):
            streak = 0
            if order_bound is not None and ch.order() == order_bound:
                ch.complete = True
                return ch
        else:
            streak += 1
            if streak >= patience and (order_bound is None or streak >= 4 * patience):
                break
    if verify:
        ch._verify()
    return ch


def rebase(chain: StabilizerChain, base: Iterable[int] = (), base_preference: Sequence[int] | None = None,
           rng: np.random.Generator | None = None) -> StabilizerChain:
    """Chain of the same group with a new base prefix.

    Uses uniform samples from ``chain`` and its certified order, so no
    deterministic verification is needed.
    """
    if not chain.complete:
        raise ValueError("rebase needs a complete chain")
    rng = rng if rng is not None else np.random.default_rng(0xBA5E)
    base = [int(b) for b in base]

    def build(prefix: list[int]) -> StabilizerChain:
        return schreier_sims(
            chain.generators, degree=chain.degree, base=prefix, base_preference=base_preference,
            order_bound=chain.order(), random_source=lambda: chain.random_array(rng), rng=rng,
        )

    ch = build(base)
    if base_preference is None:
        return ch
    # random construction creates levels in discovery order; insist on the
    # greedy base (earliest preferred point moved at every level)
    rank = np.empty(chain.degree, dtype=np.int64)
    rank[np.asarray(base_preference, dtype=np.int64)] = np.arange(len(base_preference))
    for _ in range(chain.degree):
        bad = None
        for i in range(len(base), len(ch.levels)):
            lv = ch.levels[i]
            if len(lv.orbit) == 1:
                continue
            moved = np.zeros(chain.degree, dtype=bool)
            for j in lv.gens:
                moved |= ch.strong[j] != np.arange(chain.degree, dtype=IDX)
            best = int(np.flatnonzero(moved)[np.argmin(rank[moved])])
            if best != lv.point:
                bad = ch.base[:i] + [best]
                break
        if bad is None:
            return ch
        ch = build(bad)
    return ch


def _as_arrays(gens, degree: int | None) -> tuple[list[np.ndarray], int]:
    if isinstance(gens, GeneratorSet):
        return [g.images for g in gens.generators], gens.degree
    arrs = []
    for g in gens:
        arrs.append(g.images if isinstance(g, Permutation) else np.ascontiguousarray(g, dtype=IDX))
    if degree is None:
        if not arrs:
            raise ValueError("empty generator list needs an explicit degree")
        degree = arrs[0].size
    for a in arrs:
        if a.size != degree:
            raise PermutationError("generator degree mismatch")
    return arrs, int(degree)


def order(chain: StabilizerChain) -> int:
    return chain.order()


def contains(chain: StabilizerChain, p: Permutation) -> bool:
    return chain.contains(p)


def random_element(chain: StabilizerChain, rng: np.random.Generator | None = None) -> Permutation:
    return chain.random_element(rng if rng is not None else np.random.default_rng())


def point_stabilizer(chain: StabilizerChain, point: int) -> GeneratorSet:
    return chain.point_stabilizer(point)
