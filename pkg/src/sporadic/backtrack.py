"""Base-image backtrack: centralizers, normalizers, stabilizers, intersections
and conjugacy witnesses.

All searches run over a stabilizer chain whose base is adapted to the
problem: base points are taken from the largest orbits of the constraint
group, so that fixing the image of one base point forces the images of its
whole orbit (``a^g = c`` implies ``(a^x)^g = c^y`` when ``x^g = y``).

Subgroup searches process levels bottom-up and try one image per orbit of
the subgroup found so far (first-in-orbit pruning).  Every returned element
is re-checked against the defining property and membership before it is
handed out; a search that runs out of budget raises
:class:`SearchBudgetExceeded`, which callers report as "undecided".
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from . import kernels
from .bsgs import StabilizerChain, rebase, schreier_sims
from .perm import IDX, GeneratorSet, Permutation, PermutationError

DEFAULT_NODE_BUDGET = 10**8


class SearchBudgetExceeded(RuntimeError):
    """The node budget ran out before the search finished."""

    def __init__(self, nodes: int, what: str = "search"):
        super().__init__(f"{what}: node budget exhausted after {nodes} nodes")
        self.nodes = nodes


@dataclass
class Budget:
    """Shared node counter across the searches of one computation."""

    limit: int = DEFAULT_NODE_BUDGET
    used: int = 0

    def remaining(self) -> int:
        return max(self.limit - self.used, 0)

    def charge(self, nodes: int, what: str) -> None:
        self.used += int(nodes)
        if self.used > self.limit:
            raise SearchBudgetExceeded(self.used, what)


def _budget(b: Budget | int | None) -> Budget:
    if isinstance(b, Budget):
        return b
    return Budget(DEFAULT_NODE_BUDGET if b is None else int(b))


# --------------------------------------------------------------------- helpers
def _arrays(obj, n: int) -> np.ndarray:
    """Non-identity generator images as an ``(m, n)`` array."""
    if isinstance(obj, Permutation):
        items = [obj]
    elif isinstance(obj, GeneratorSet):
        items = list(obj.generators)
    elif isinstance(obj, StabilizerChain):
        items = obj.generators
    elif isinstance(obj, np.ndarray) and obj.ndim == 1:
        items = [obj]
    else:
        items = list(obj)
    rows = []
    ident = np.arange(n, dtype=IDX)
    for g in items:
        a = g.images if isinstance(g, Permutation) else np.asarray(g, dtype=IDX)
        if a.size != n:
            raise PermutationError(f"degree mismatch: {a.size} vs {n}")
        if not np.array_equal(a, ident):
            rows.append(a)
    if not rows:
        return np.empty((0, n), dtype=IDX)
    return np.ascontiguousarray(np.stack(rows), dtype=IDX)


def _orbits_bfs_order(gens: np.ndarray, n: int) -> list[list[int]]:
    """Orbits of ``gens``, each listed in BFS order from its least point."""
    seen = np.zeros(n, dtype=bool)
    out = []
    mask = np.ones(gens.shape[0], dtype=np.bool_)
    for start in range(n):
        if seen[start]:
            continue
        if gens.shape[0] == 0:
            orb = [start]
        else:
            orb = kernels.orbit_bfs(gens, start, mask)[0].tolist()
        seen[orb] = True
        out.append(orb)
    return out


def base_preference(gens: np.ndarray, n: int, first: Sequence[int] = (),
                    shuffle: np.random.Generator | None = None) -> np.ndarray:
    """Point order for an adapted base: ``first``, then large orbits first.

    With ``shuffle``, orbits of equal length come in random order (each
    orbit stays contiguous), giving a different but still adapted base.
    """
    orbs = _orbits_bfs_order(gens, n)
    if shuffle is None:
        orbs.sort(key=lambda o: (-len(o), o[0]))
    else:
        tie = shuffle.permutation(len(orbs))
        orbs = [o for _, o in sorted(zip(tie.tolist(), orbs), key=lambda t: (-len(t[1]), t[0]))]
    seen = np.zeros(n, dtype=bool)
    pref = []
    for x in first:
        if not seen[x]:
            seen[x] = True
            pref.append(int(x))
    for o in orbs:
        for x in o:
            if not seen[x]:
                seen[x] = True
                pref.append(x)
    return np.asarray(pref, dtype=IDX)


def orbit_length_colours(gens: np.ndarray, n: int) -> np.ndarray:
    col = np.ones(n, dtype=IDX)
    for o in _orbits_bfs_order(gens, n):
        col[o] = len(o)
    return col


def commutes(g: np.ndarray, x: np.ndarray) -> bool:
    return bool(np.array_equal(x[g], g[x]))


def conj(x: np.ndarray, g: np.ndarray) -> np.ndarray:
    """``g^-1 x g`` as an image array."""
    out = np.empty_like(x)
    out[g] = g[x]
    return out


@dataclass
class Problem:
    """Constraints for one search (see :func:`kernels.backtrack_search`)."""

    n: int
    xs: np.ndarray
    ys: np.ndarray
    csrc: np.ndarray
    cdst: np.ndarray
    inside: StabilizerChain | None = None  # restrict to members of this group
    extra: Callable[[np.ndarray], bool] | None = None  # leaf predicate (Python)

    @classmethod
    def make(cls, n: int, xs=None, ys=None, colours=None, colours_dst=None, inside=None, extra=None) -> "Problem":
        xs = np.empty((0, n), dtype=IDX) if xs is None else np.ascontiguousarray(xs, dtype=IDX)
        ys = xs if ys is None else np.ascontiguousarray(ys, dtype=IDX)
        if xs.shape != ys.shape:
            raise ValueError("constraint tuples differ in length")
        csrc = np.zeros(n, dtype=IDX) if colours is None else np.ascontiguousarray(colours, dtype=IDX)
        cdst = csrc if colours_dst is None else np.ascontiguousarray(colours_dst, dtype=IDX)
        return cls(n, xs, ys, csrc, cdst, inside, extra)

    def holds(self, g: np.ndarray) -> bool:
        for x, y in zip(self.xs, self.ys):
            if not np.array_equal(g[x], y[g]):
                return False
        if not np.array_equal(self.cdst[g], self.csrc):
            return False
        if self.inside is not None and not self.inside.contains(g):
            return False
        if self.extra is not None and not self.extra(g):
            return False
        return True


class Searcher:
    """Runs kernel searches for one problem over one adapted chain."""

    def __init__(self, chain: StabilizerChain, problem: Problem, budget: Budget):
        self.chain = chain
        self.problem = problem
        self.budget = budget
        n = chain.degree
        self.packed = chain.packed()
        if problem.inside is not None:
            hch = problem.inside
            if hch.base[: len(chain.base)] != chain.base:
                hch = rebase(hch, base=chain.base)
            hb, hp, ho, hu, _ = hch.packed()
            self.hpacked = (True, hb, hp, ho, hu)
        else:
            self.hpacked = (False, np.zeros(0, dtype=IDX), np.zeros((0, n), dtype=IDX),
                            np.zeros(1, dtype=np.int64), np.zeros((0, n), dtype=IDX))
        self.no_pairs = np.zeros(0, dtype=IDX)

    def run(self, start_level: int = 0, first: Sequence[int] = (), init: Sequence[tuple[int, int]] = (),
            what: str = "search") -> np.ndarray | None:
        """One coset search; returns an element or None."""
        p = self.problem
        base, pos, offs, uinv, orb = self.packed
        use_h, hb, hp, ho, hu = self.hpacked
        first_arr = np.asarray(first, dtype=IDX)
        ia = np.asarray([a for a, _ in init], dtype=IDX) if init else self.no_pairs
        ic = np.asarray([c for _, c in init], dtype=IDX) if init else self.no_pairs
        if p.extra is None:
            status, g, nodes = kernels.backtrack_search(
                base, pos, offs, uinv, orb, start_level, first_arr, p.xs, p.ys, p.csrc, p.cdst,
                use_h, hb, hp, ho, hu, ia, ic, self.budget.remaining())
            self.budget.charge(nodes, what)
            if status == 2:
                raise SearchBudgetExceeded(self.budget.used, what)
            if status == 1:
                if not p.holds(g) or not self.chain.contains(g):
                    raise AssertionError("backtrack kernel returned an element failing certification")
                return g
            return None
        return self._run_python(start_level, first_arr, ia, ic, what)

    def _run_python(self, start_level, first_arr, ia, ic, what) -> np.ndarray | None:
        """Same search with a Python leaf predicate (small groups only)."""
        ch = self.chain
        p = self.problem
        n = ch.degree
        k = len(ch.levels)
        base = ch.base
        f = np.full(n, -1, dtype=IDX)
        finv = np.full(n, -1, dtype=IDX)
        for a, c in zip(ia.tolist(), ic.tolist()):
            if not _py_assign(a, c, f, finv, p, []):
                return None
        nodes = [0]

        def rec(level: int, hinv: np.ndarray) -> np.ndarray | None:
            h = np.empty_like(hinv)
            h[hinv] = np.arange(n, dtype=IDX)
            if level == k:
                if p.holds(h):
                    return h
                return None
            b = base[level]
            lv = ch.levels[level]
            if level == start_level and first_arr.size:
                cands = first_arr.tolist()
            elif f[b] >= 0:
                cands = [int(f[b])]
            else:
                cands = sorted(int(h[x]) for x in lv.orbit if finv[h[x]] < 0 and p.cdst[h[x]] == p.csrc[b])
            for gam in cands:
                delta = int(hinv[gam])
                j = lv.pos[delta]
                if j < 0:
                    continue
                nodes[0] += 1
                if nodes[0] > self.budget.remaining():
                    raise SearchBudgetExceeded(self.budget.used + nodes[0], what)
                trail: list[int] = []
                if _py_assign(b, gam, f, finv, p, trail):
                    res = rec(level + 1, lv.uinv[j][hinv])
                    if res is not None:
                        return res
                for a in reversed(trail):
                    finv[f[a]] = -1
                    f[a] = -1
            return None

        res = rec(start_level, np.arange(n, dtype=IDX))
        self.budget.charge(nodes[0], what)
        if res is not None and not ch.contains(res):
            raise AssertionError("search returned a non-member")
        return res


def _py_assign(a: int, c: int, f, finv, p: Problem, trail: list[int]) -> bool:
    if f[a] >= 0:
        return int(f[a]) == c
    if finv[c] >= 0 or p.csrc[a] != p.cdst[c]:
        return False
    f[a] = c
    finv[c] = a
    trail.append(a)
    queue = [a]
    while queue:
        u = queue.pop()
        v = int(f[u])
        for x, y in zip(p.xs, p.ys):
            a2, c2 = int(x[u]), int(y[v])
            if f[a2] < 0:
                if finv[c2] >= 0 or p.csrc[a2] != p.cdst[c2]:
                    return False
                f[a2] = c2
                finv[c2] = a2
                trail.append(a2)
                queue.append(a2)
            elif f[a2] != c2:
                return False
    return True


def adapted_chain(G: StabilizerChain, constraint_gens: np.ndarray, first: Sequence[int] = (),
                  rng: np.random.Generator | None = None) -> StabilizerChain:
    pref = base_preference(constraint_gens, G.degree, first)
    return rebase(G, base_preference=pref, rng=rng)


# ------------------------------------------------------------ subgroup search
@dataclass
class SubgroupResult:
    generators: list[np.ndarray]
    order: int
    nodes: int = 0
    chain: StabilizerChain | None = field(default=None, repr=False)

    def generator_set(self, n: int) -> GeneratorSet:
        gens = tuple(Permutation._wrap(g) for g in self.generators) or (Permutation.identity(n),)
        return GeneratorSet(n, gens)


def subgroup_search(chain: StabilizerChain, problem: Problem, known: Iterable[np.ndarray] = (),
                    budget: Budget | int | None = None, what: str = "subgroup search") -> SubgroupResult:
    """All elements of ``chain``'s group satisfying a subgroup property."""
    budget = _budget(budget)
    used0 = budget.used
    s = Searcher(chain, problem, budget)
    n = chain.degree
    base = chain.base
    k = len(base)
    ident = np.arange(n, dtype=IDX)
    found: list[np.ndarray] = []
    for g in known:
        g = np.asarray(g, dtype=IDX)
        if np.array_equal(g, ident):
            continue
        if not problem.holds(g) or not chain.contains(g):
            raise ValueError("a known element does not satisfy the property")
        found.append(g)
    # stabilizer chain of the known subgroup in the search base, so its
    # point stabilizers prune every level (an incomplete chain only prunes less)
    pool = list(found)
    if found:
        pool += schreier_sims(found, degree=n, base=base, verify=False).strong
    sizes = [1] * k
    for l in range(k - 1, -1, -1):
        b = base[l]
        prefix = np.asarray(base[:l], dtype=IDX)
        level_gens = [g for g in pool if np.array_equal(g[prefix], prefix)]
        orbit = sorted(chain.levels[l].orbit)
        if len(orbit) == 1:
            continue

        def labels(gens_list):
            if not gens_list:
                return np.arange(n, dtype=IDX)
            return kernels.orbit_labels(np.stack(gens_list), n)

        rep = labels(level_gens)
        done = [b]
        init = [(int(x), int(x)) for x in prefix]
        for delta in orbit:
            if rep[delta] in {int(rep[d]) for d in done}:
                continue
            g = s.run(l, [delta], init, what)
            if g is None:
                done.append(delta)
            else:
                found.append(g)
                level_gens.append(g)
                rep = labels(level_gens)
        rep = labels(level_gens)
        sizes[l] = int(np.count_nonzero(rep[np.asarray(orbit, dtype=IDX)] == rep[b]))
    order = math.prod(sizes)
    res = SubgroupResult(found, order, budget.used - used0)
    res.chain = schreier_sims(found, degree=n, order_bound=order) if found else schreier_sims([], degree=n)
    if res.chain.order() != order:
        raise AssertionError("subgroup search order does not match its generators")
    return res


def _ambient(G) -> StabilizerChain:
    if isinstance(G, StabilizerChain):
        return G
    return schreier_sims(G)


# ------------------------------------------------------------- public API
def centralizer_chain(G: StabilizerChain, target, known: Iterable = (), budget=None,
                      recheck: bool = False, rng: np.random.Generator | None = None) -> StabilizerChain:
    G = _ambient(G)
    n = G.degree
    xs = _arrays(target, n)
    if xs.shape[0] == 0:
        return G
    budget = _budget(budget)
    problem = Problem.make(n, xs, colours=orbit_length_colours(xs, n))
    known_arr = [np.asarray(g.images if isinstance(g, Permutation) else g, dtype=IDX) for g in known]
    if not known_arr and xs.shape[0] == 1 and np.array_equal(xs[0][xs[0]], np.arange(n, dtype=IDX)):
        known_arr = involution_centralizer_sample(G, xs[0], rng if rng is not None else np.random.default_rng(5))
    ch = adapted_chain(G, xs, rng=rng)
    res = subgroup_search(ch, problem, known_arr, budget, "centralizer")
    if recheck:
        # an independent adapted base: equal-length orbits in shuffled order
        pref2 = base_preference(xs, n, shuffle=np.random.default_rng(12345))
        ch2 = rebase(G, base_preference=pref2)
        res2 = subgroup_search(ch2, problem, [], budget, "centralizer recheck")
        if res2.order != res.order:
            raise AssertionError(f"centralizer order differs between bases: {res.order} vs {res2.order}")
    return res.chain


def centralizer(G: StabilizerChain, target, known: Iterable = (), budget=None, recheck: bool = True) -> GeneratorSet:
    """Elements of ``G`` commuting with every element of ``target``."""
    ch = centralizer_chain(G, target, known, budget, recheck)
    return ch.generator_set() if ch.strong else GeneratorSet(ch.degree, (Permutation.identity(ch.degree),))


def setwise_stabilizer_chain(G: StabilizerChain, points: Iterable[int], budget=None) -> StabilizerChain:
    G = _ambient(G)
    n = G.degree
    pts = sorted({int(x) for x in points})
    if any(not 0 <= x < n for x in pts):
        raise PermutationError("point out of range")
    col = np.zeros(n, dtype=IDX)
    col[pts] = 1
    if len(pts) in (0, n):
        return G
    problem = Problem.make(n, colours=col)
    ch = rebase(G, base_preference=base_preference(np.empty((0, n), dtype=IDX), n, first=pts))
    known = [g for g in G.generators if np.array_equal(col[g], col)]
    return subgroup_search(ch, problem, known, budget, "setwise stabilizer").chain


def setwise_stabilizer(G: StabilizerChain, points: Iterable[int], budget=None) -> GeneratorSet:
    return setwise_stabilizer_chain(G, points, budget).generator_set()


def intersection_chain(G: StabilizerChain, H: StabilizerChain, budget=None) -> StabilizerChain:
    G = _ambient(G)
    H = _ambient(H)
    if G.degree != H.degree:
        raise PermutationError("degree mismatch")
    if H.order() < G.order():
        G, H = H, G
    n = G.degree
    known = [g for g in G.generators if H.contains(g)]
    if len(known) == len(G.generators):
        return G
    problem = Problem.make(n, inside=H)
    return subgroup_search(G, problem, known, budget, "intersection").chain


def intersection(G: StabilizerChain, H: StabilizerChain, budget=None) -> GeneratorSet:
    return intersection_chain(G, H, budget).generator_set()


def _involution_witness(G: StabilizerChain, x: np.ndarray, y: np.ndarray, rng, tries: int = 400):
    """Dihedral trick for involutions.

    If ``c = x*y'`` has odd order m for a random conjugate ``y' = y^g``, then
    x inverts c and ``x^(c^((m+1)/2)) = y'``.
    """
    for _ in range(tries):
        g = G.random_array(rng)
        yg = conj(y, g)
        prod = yg[x]  # x * y'
        m = Permutation._wrap(prod).order()
        if m % 2 == 1:
            # (x y')^((m+1)/2) conjugates x to y'
            c = Permutation._wrap(prod) ** ((m + 1) // 2)
            ca = c.images
            if np.array_equal(conj(x, ca), yg):
                ginv = np.empty_like(g)
                ginv[g] = np.arange(g.size, dtype=IDX)
                w = ginv[ca]  # c * g^-1
                if np.array_equal(conj(x, w), y):
                    return w
    return None


def involution_centralizer_sample(G: StabilizerChain, x: np.ndarray, rng, count: int = 24,
                                  tries: int = 200) -> list[np.ndarray]:
    """Elements of C_G(x) for an involution x from dihedral products.

    With ``c = x * x^g`` of order m, x inverts c: for even m the central
    involution ``c^(m/2)`` commutes with x, and for odd m some
    ``g * c^k`` does.  Candidates are kept only after a commutation test.
    Needs ``x`` in ``G``; otherwise the products leave ``G``.
    """
    out: list[np.ndarray] = []
    if not G.contains(x):
        return out
    for _ in range(tries):
        if len(out) >= count:
            break
        g = G.random_array(rng)
        c = conj(x, g)[x]  # x * x^g
        cp = Permutation._wrap(c)
        m = cp.order()
        if m % 2 == 0:
            cands = [(cp ** (m // 2)).images]
        else:
            cands = [(Permutation._wrap(g) * cp ** k).images for k in ((m - 1) // 2, (m + 1) // 2)]
        for w in cands:
            if np.array_equal(x[w], w[x]):
                out.append(w)
    return out


def conjugacy_witness(G: StabilizerChain, x: Permutation, y: Permutation, budget=None,
                      rng: np.random.Generator | None = None) -> Permutation | None:
    """Some ``g`` in ``G`` with ``x^g = y``, or None when none exists."""
    G = _ambient(G)
    n = G.degree
    if x.degree != n or y.degree != n:
        raise PermutationError("degree mismatch")
    if x == y:
        return Permutation.identity(n)
    if x.cycle_type() != y.cycle_type():
        return None
    rng = rng if rng is not None else np.random.default_rng(7)
    xa, ya = x.images, y.images
    if x.order() == 2:
        w = _involution_witness(G, xa, ya, rng)
        if w is not None and G.contains(w):
            return Permutation._wrap(w)
    xs = xa[None, :]
    ys = ya[None, :]
    problem = Problem.make(n, xs, ys, colours=orbit_length_colours(xs, n),
                           colours_dst=orbit_length_colours(ys, n))
    ch = adapted_chain(G, xs, rng=rng)
    g = Searcher(ch, problem, _budget(budget)).run(0, (), (), "conjugacy")
    if g is None:
        return None
    if not (G.contains(g) and np.array_equal(conj(xa, g), ya)):
        raise AssertionError("conjugacy witness failed certification")
    return Permutation._wrap(g)


# --------------------------------------------------------- small subgroups
class SmallGroup:
    """Explicit element list of a small group, for tuple enumeration."""

    def __init__(self, chain: StabilizerChain, limit: int = 200000):
        if chain.order() > limit:
            raise ValueError(f"group of order {chain.order()} exceeds the element-list bound {limit}")
        self.chain = chain
        self.n = chain.degree
        self.elements = list(chain.element_array(limit))
        self.index = {e.tobytes(): i for i, e in enumerate(self.elements)}
        self.ctype = [Permutation._wrap(e).cycle_type() for e in self.elements]

    def idx(self, g: np.ndarray) -> int:
        return self.index.get(np.asarray(g, dtype=IDX).tobytes(), -1)

    def small_generators(self) -> list[np.ndarray]:
        """A short generating list (greedy over the chain's generators)."""
        target = self.chain.order()
        chosen: list[np.ndarray] = []
        cur = 1
        cands = list(self.chain.generators) + list(self.chain.strong)
        for g in cands:
            trial = chosen + [g]
            o = schreier_sims(trial, degree=self.n, order_bound=target).order() if trial else 1
            if o > cur:
                chosen, cur = trial, o
            if cur == target:
                break
        # drop redundant ones
        i = 0
        while i < len(chosen) and len(chosen) > 1:
            rest = chosen[:i] + chosen[i + 1:]
            if schreier_sims(rest, degree=self.n, order_bound=target).order() == target:
                chosen = rest
            else:
                i += 1
        return chosen

    def image_tuples(self, gens: list[np.ndarray], targets: "SmallGroup", limit: int = 10**6):
        """All generator-image tuples in ``targets`` defining an isomorphism
        that preserves cycle types (the necessary condition for conjugacy in
        the symmetric group)."""
        r = len(gens)
        gi = [self.idx(g) for g in gens]
        cands = [[j for j in range(len(targets.elements)) if targets.ctype[j] == self.ctype[i]] for i in gi]
        out: list[tuple[int, ...]] = []

        def consistent(prefix: list[int]) -> bool:
            # BFS over <gens[:len(prefix)]> mapping to <images>
            m = len(prefix)
            ident = np.arange(self.n, dtype=IDX)
            img_of = {ident.tobytes(): ident}
            queue = [ident]
            used = {ident.tobytes()}
            while queue:
                e = queue.pop()
                fe = img_of[e.tobytes()]
                for j in range(m):
                    e2 = gens[j][e]  # e * gens[j]
                    f2 = targets.elements[prefix[j]][fe]
                    key = e2.tobytes()
                    if key in img_of:
                        if not np.array_equal(img_of[key], f2):
                            return False
                        continue
                    if f2.tobytes() in used:
                        return False
                    if self.ctype[self.idx(e2)] != targets.ctype[targets.idx(f2)]:
                        return False
                    img_of[key] = f2
                    used.add(f2.tobytes())
                    queue.append(e2)
            return True

        def rec(prefix: list[int]) -> None:
            if len(out) > limit:
                raise ValueError("too many candidate tuples")
            if len(prefix) == r:
                out.append(tuple(prefix))
                return
            for j in cands[len(prefix)]:
                if j in prefix:
                    continue
                if consistent(prefix + [j]):
                    rec(prefix + [j])

        rec([])
        return out


def _tuple_key(arrs: Sequence[np.ndarray]) -> bytes:
    return b"".join(a.tobytes() for a in arrs)


def normalizer_chain(G: StabilizerChain, H, budget=None, small_limit: int = 200000) -> StabilizerChain:
    """``N_G(H)``; small ``H`` via generator-image tuples, otherwise a
    predicate search (small ``G`` only)."""
    G = _ambient(G)
    n = G.degree
    budget = _budget(budget)
    Hch = _ambient(H) if not isinstance(H, (Permutation,)) else schreier_sims([H])
    Hgens = _arrays(Hch.generators, n)
    if Hgens.shape[0] == 0:
        return G

    def normalizes(g: np.ndarray) -> bool:
        return all(Hch.contains(conj(h, g)) for h in Hgens)

    if all(normalizes(g) for g in G.generators):
        return G
    if Hch.order() <= small_limit:
        return _normalizer_tuples(G, Hch, budget)
    if G.order() > 10**7:
        raise SearchBudgetExceeded(0, "normalizer of a large subgroup in a large group is out of reach")
    col = orbit_length_colours(Hgens, n)
    problem = Problem.make(n, colours=col, extra=normalizes)
    known = [g for g in G.generators if normalizes(g)] + [h for h in Hgens if G.contains(h)]
    ch = adapted_chain(G, Hgens)
    return subgroup_search(ch, problem, known, budget, "normalizer").chain


def _normalizer_tuples(G: StabilizerChain, Hch: StabilizerChain, budget: Budget) -> StabilizerChain:
    n = G.degree
    small = SmallGroup(Hch)
    gens = small.small_generators()
    xs = np.stack(gens)
    C = centralizer_chain(G, xs, budget=budget)
    tuples = small.image_tuples(gens, small)
    key_of = {_tuple_key([small.elements[j] for j in t]): t for t in tuples}
    col = orbit_length_colours(xs, n)
    ch = adapted_chain(G, xs)
    found: list[np.ndarray] = [h for h in Hch.generators if G.contains(h)]

    def orbit_of(t0: tuple[int, ...], gl: list[np.ndarray]) -> set[tuple[int, ...]]:
        seen = {t0}
        queue = [t0]
        while queue:
            t = queue.pop()
            arrs = [small.elements[j] for j in t]
            for g in gl:
                img = [conj(a, g) for a in arrs]
                tt = key_of.get(_tuple_key(img))
                if tt is None:
                    raise AssertionError("normalizing element maps a generating tuple outside the tuple set")
                if tt not in seen:
                    seen.add(tt)
                    queue.append(tt)
        return seen

    t0 = tuple(small.idx(g) for g in gens)
    reached = orbit_of(t0, found)
    failed: set[tuple[int, ...]] = set()
    for t in tuples:
        if t in reached or t in failed:
            continue
        ys = np.stack([small.elements[j] for j in t])
        problem = Problem.make(n, xs, ys, colours=col, colours_dst=orbit_length_colours(ys, n))
        g = Searcher(ch, problem, budget).run(0, (), (), "normalizer")
        if g is None:
            failed |= orbit_of(t, found)
        else:
            found.append(g)
            reached = orbit_of(t0, found)
    order = C.order() * len(reached)
    allgens = list(C.strong) + found
    N = schreier_sims(allgens, degree=n, order_bound=order)
    if N.order() != order:
        raise AssertionError("normalizer order mismatch")
    for g in allgens:
        if not all(Hch.contains(conj(h, g)) for h in gens):
            raise AssertionError("normalizer generator fails certification")
    return N


def normalizer(G: StabilizerChain, H, budget=None) -> GeneratorSet:
    return normalizer_chain(G, H, budget).generator_set()


def subgroup_conjugacy_witness(G: StabilizerChain, H, K, budget=None) -> Permutation | None:
    """Some ``g`` in ``G`` with ``H^g = K``, or None when none exists."""
    G = _ambient(G)
    n = G.degree
    budget = _budget(budget)
    Hch, Kch = _ambient(H), _ambient(K)
    if Hch.order() != Kch.order():
        return None
    if all(Kch.contains(h) for h in Hch.generators):
        return Permutation.identity(n)
    sh, sk = SmallGroup(Hch), SmallGroup(Kch)
    gens = sh.small_generators()
    xs = np.stack(gens)
    tuples = sh.image_tuples(gens, sk)
    col = orbit_length_colours(xs, n)
    ch = adapted_chain(G, xs)
    # elements of N_G(K) found along the way would prune; the plain loop is
    # enough at the sizes used here
    for t in tuples:
        ys = np.stack([sk.elements[j] for j in t])
        problem = Problem.make(n, xs, ys, colours=col, colours_dst=orbit_length_colours(ys, n))
        g = Searcher(ch, problem, budget).run(0, (), (), "subgroup conjugacy")
        if g is not None:
            if not all(Kch.contains(conj(h, g)) for h in Hch.generators):
                raise AssertionError("subgroup conjugacy witness failed certification")
            return Permutation._wrap(g)
    return None
