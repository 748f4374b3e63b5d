"""Orbits, block systems, subdegrees and coset actions."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from ._accel import NUMBA_DISABLED
from .bsgs import StabilizerChain, rebase, schreier_sims
from .perm import IDX, GeneratorSet, Permutation


def _gen_array(gens, degree: int | None = None) -> tuple[np.ndarray, int]:
    if isinstance(gens, StabilizerChain):
        arrs, n = gens.generators, gens.degree
    elif isinstance(gens, GeneratorSet):
        arrs, n = [g.images for g in gens.generators], gens.degree
    else:
        arrs = [g.images if isinstance(g, Permutation) else np.asarray(g, dtype=IDX) for g in gens]
        n = degree if degree is not None else arrs[0].size
    if not len(arrs):
        return np.empty((0, n), dtype=IDX), n
    return np.ascontiguousarray(np.stack(arrs), dtype=IDX), n


@dataclass
class OrbitPartition:
    """Orbits with the least point of each as representative."""

    rep: np.ndarray
    orbits: list[list[int]]

    def lengths(self) -> list[int]:
        return sorted(len(o) for o in self.orbits)

    def orbit_of(self, x: int) -> list[int]:
        r = int(self.rep[x])
        for o in self.orbits:
            if o[0] == r:
                return o
        raise KeyError(x)


@dataclass
class BlockSystem:
    size: int
    label: np.ndarray  # least point of the block containing each point

    def blocks(self) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for x, b in enumerate(self.label.tolist()):
            out.setdefault(b, []).append(x)
        return sorted(out.values())

    def is_invariant(self, gens: np.ndarray) -> bool:
        lab = self.label
        for g in gens:
            # points sharing a block must land in one block
            img = lab[g]
            first = {}
            for b, im in zip(lab.tolist(), img.tolist()):
                if first.setdefault(b, im) != im:
                    return False
        return True


class IntransitiveError(ValueError):
    """The operation needs a transitive group."""


def orbits(gens, domain_subset: Iterable[int] | None = None, degree: int | None = None) -> OrbitPartition:
    arr, n = _gen_array(gens, degree)
    rep = kernels.orbit_labels(arr, n) if arr.shape[0] else np.arange(n, dtype=IDX)
    groups: dict[int, list[int]] = {}
    for x, r in enumerate(rep.tolist()):
        groups.setdefault(r, []).append(x)
    orbs = [groups[r] for r in sorted(groups)]
    if domain_subset is not None:
        keep = {int(rep[x]) for x in domain_subset}
        orbs = [o for o in orbs if o[0] in keep]
    return OrbitPartition(np.asarray(rep, dtype=IDX), orbs)


def is_transitive(gens, degree: int | None = None) -> bool:
    return len(orbits(gens, degree=degree).orbits) == 1


def is_primitive(gens, degree: int | None = None, seeds: Sequence[int] | None = None
                 ) -> tuple[bool, BlockSystem | None]:
    """Primitivity with a nontrivial block system as witness when it fails.

    Seeds are the points x paired with 0; by default every x != 0.
    """
    arr, n = _gen_array(gens, degree)
    if n == 1:
        return True, None
    if not is_transitive(arr, n):
        raise IntransitiveError("primitivity needs a transitive group")
    if seeds is None:
        if NUMBA_DISABLED and n > 200:
            # one seed per stabilizer orbit suffices; keeps the fallback usable
            ch = schreier_sims(list(arr), degree=n)
            seeds = [o[0] for o in suborbits(ch, 0).orbits if o[0] != 0]
        else:
            seeds = range(1, n)
    for x in seeds:
        lab = kernels.minimal_block(arr, 0, int(x))
        size = int(np.count_nonzero(lab == lab[0]))
        if size < n:
            bs = BlockSystem(size, np.asarray(lab, dtype=IDX))
            if not bs.is_invariant(arr):
                raise AssertionError("block system is not invariant")
            return False, bs
    return True, None


def suborbits(chain: StabilizerChain, point: int) -> OrbitPartition:
    """Orbits of the point stabilizer on the whole domain."""
    stab = chain.point_stabilizer(point)
    return orbits(stab)


def subdegrees(chain: StabilizerChain, point: int = 0) -> list[int]:
    if not is_transitive(chain):
        raise IntransitiveError("subdegrees need a transitive group")
    return suborbits(chain, point).lengths()


def restrict(gens, points: Sequence[int], degree: int | None = None) -> list[np.ndarray]:
    """Generators acting on an invariant subset, relabelled ``0..len-1``."""
    arr, n = _gen_array(gens, degree)
    pts = np.asarray(points, dtype=IDX)
    where = np.full(n, -1, dtype=IDX)
    where[pts] = np.arange(pts.size, dtype=IDX)
    out = []
    for g in arr:
        img = where[g[pts]]
        if (img < 0).any():
            raise ValueError("subset is not invariant")
        out.append(img)
    return out


# ------------------------------------------------------------- coset action
@dataclass
class CosetAction:
    degree: int
    generators: GeneratorSet
    image_chain: StabilizerChain
    faithful: bool
    kernel_order: int
    representatives: list[np.ndarray] = field(repr=False, default_factory=list)


class _CosetKeys:
    """Canonical key of the right coset Hg: the element of Hg whose images
    of H's base points are lexicographically least."""

    def __init__(self, H: StabilizerChain):
        self.levels = [(np.asarray(lv.orbit, dtype=IDX), lv) for lv in H.levels]

    def key(self, g: np.ndarray) -> bytes:
        cur = g
        for orb, lv in self.levels:
            vals = cur[orb]
            k = int(np.argmin(vals))
            if k:
                # u maps the base point to orb[k]; move to u * cur
                u = np.argsort(lv.uinv[k]).astype(IDX)
                cur = cur[u]
        return cur.tobytes()


def coset_action(G: StabilizerChain, H, bound: int = 10**5) -> CosetAction:
    """Action of G's generators on the right cosets of H."""
    Hch = H if isinstance(H, StabilizerChain) else schreier_sims(H)
    if G.order() % Hch.order():
        raise ValueError("H is not a subgroup of G")
    if not all(G.contains(h) for h in Hch.generators):
        raise ValueError("H is not contained in G")
    index = G.order() // Hch.order()
    if index > bound:
        raise ValueError(f"index {index} exceeds the bound {bound}")
    keys = _CosetKeys(Hch)
    n = G.degree
    ident = np.arange(n, dtype=IDX)
    reps = [ident]
    where = {keys.key(ident): 0}
    images = [[] for _ in G.generators]
    i = 0
    while i < len(reps):
        r = reps[i]
        for j, s in enumerate(G.generators):
            t = s[r]  # r * s
            k = keys.key(t)
            c = where.get(k)
            if c is None:
                c = len(reps)
                where[k] = c
                reps.append(t)
            images[j].append(c)
        i += 1
    if len(reps) != index:
        raise AssertionError("coset enumeration found the wrong index")
    gens = [np.asarray(im, dtype=IDX) for im in images]
    img = schreier_sims(gens, degree=index, order_bound=None)
    faithful = img.order() == G.order()
    gs = GeneratorSet(index, tuple(Permutation(g) for g in gens))
    return CosetAction(index, gs, img, faithful, G.order() // img.order(), reps)


# ----------------------------------------------------------------- Lemma 3
@dataclass
class SuborbitReport:
    length: int
    unique_length: bool
    faithful: bool
    primitive: bool

    @property
    def good(self) -> bool:
        return self.unique_length and self.faithful and self.primitive


@dataclass
class Lemma3Verdict:
    faithful_primitive: bool  # (a)
    psi_length: int | None
    psi_faithful_primitive: bool  # (b)
    psi_unique: bool  # (c)
    all_suborbits: bool  # (d1)
    centralizer_condition: str  # (d2): "true", "false" or "unevaluated"
    stabilizer_not_cyclic: bool  # (e)
    suborbits: list[SuborbitReport]
    block_witness: BlockSystem | None = None
    note: str = ""

    @property
    def condition_d(self) -> bool:
        return self.all_suborbits or self.centralizer_condition == "true"

    @property
    def holds(self) -> bool:
        return (self.faithful_primitive and self.psi_faithful_primitive and self.psi_unique
                and self.condition_d and self.stabilizer_not_cyclic)

    def to_json(self) -> dict:
        return {
            "a": self.faithful_primitive, "b": self.psi_faithful_primitive, "c": self.psi_unique,
            "d1": self.all_suborbits, "d2": self.centralizer_condition, "e": self.stabilizer_not_cyclic,
            "psi_length": self.psi_length, "holds": self.holds, "note": self.note,
            "suborbits": [s.__dict__ for s in self.suborbits],
        }


def _is_cyclic(ch: StabilizerChain) -> bool:
    from .local import _perm_order
    order = ch.order()
    if order == 1:
        return True
    gens = ch.generators
    if any(not np.array_equal(a[b], b[a]) for i, a in enumerate(gens) for b in gens[i + 1:]):
        return False
    if order <= 10**6:
        return any(_perm_order(g) == order for g in ch.element_array(10**6))
    rng = np.random.default_rng(3)
    for _ in range(5000):
        if _perm_order(ch.random_array(rng)) == order:
            return True
    raise RuntimeError("cyclicity of a large abelian group left undecided")


def lemma3_check(G: StabilizerChain, point: int = 0, psi_length: int | None = None,
                 small_bound: int = 10**4) -> Lemma3Verdict:
    """Evaluate the hypotheses of the faithful-primitive suborbit criterion.

    Hypothesis (d2) is evaluated for one point per suborbit (the
    stabilizer is transitive on each suborbit, so one point represents it).
    """
    n = G.degree
    if not is_transitive(G):
        raise IntransitiveError("lemma 3 needs a transitive group")
    prim, witness = is_primitive(G)
    faithful = True  # a permutation group acts faithfully on its own domain
    ch = rebase(G, [point])
    stab_gens = [g for g in ch.strong if g[point] == point]
    stab = schreier_sims(stab_gens, degree=n, order_bound=G.order() // len(ch.levels[0].orbit))
    subs = [o for o in orbits(stab).orbits if o != [point]]
    lengths = [len(o) for o in subs]
    reports = []
    for o in subs:
        r = restrict(stab, o)
        img = schreier_sims(r, degree=len(o))
        f = img.order() == stab.order()
        pr = is_primitive(r, len(o))[0] if len(o) > 1 else True
        reports.append(SuborbitReport(len(o), lengths.count(len(o)) == 1, f, pr))
    if psi_length is None:
        good = [r for r in reports if r.good]
        chosen = good[0] if good else (reports[0] if reports else None)
    else:
        cand = [r for r in reports if r.length == psi_length]
        chosen = cand[0] if cand else None
    d2 = "unevaluated"
    note = ""
    if chosen is not None and stab.order() <= small_bound:
        from .local import centralizing_automorphism_count
        ok = True
        for o in subs:
            if len(o) != chosen.length:
                continue
            beta = o[0]
            two = schreier_sims([g for g in rebase(stab, [beta]).strong if g[beta] == beta], degree=n)
            ok = ok and centralizing_automorphism_count(stab, two, small_bound) == 1
        d2 = "true" if ok else "false"
        note = "d2 evaluated at one point of each suborbit of length |Psi|"
    elif chosen is not None:
        note = f"d2 unevaluated: point stabilizer order {stab.order()} exceeds {small_bound}"
    return Lemma3Verdict(
        faithful_primitive=faithful and prim,
        psi_length=chosen.length if chosen else None,
        psi_faithful_primitive=bool(chosen and chosen.faithful and chosen.primitive),
        psi_unique=bool(chosen and chosen.unique_length),
        all_suborbits=bool(reports) and all(r.good for r in reports),
        centralizer_condition=d2,
        stabilizer_not_cyclic=not _is_cyclic(stab),
        suborbits=reports,
        block_witness=witness,
        note=note,
    )
