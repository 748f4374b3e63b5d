"""F_p-modules for permutation groups, first cohomology, and the
normalizer-graph vanishing criterion.

Matrices act on row vectors (``v -> v M``), matching the left-to-right
permutation convention: the matrix of ``g*h`` is ``M_g M_h``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .actions import CombinedAction
from .backtrack import centralizer_chain, conj
from .bsgs import StabilizerChain, schreier_sims
from .local import normal_closure_chain
from .perm import IDX, GeneratorSet, Permutation


class ModuleError(ValueError):
    """Inconsistent or malformed module data."""


# --------------------------------------------------------- linear algebra
def rank_mod_p(rows: np.ndarray, p: int) -> int:
    return len(_row_reduce(rows, p)[1])


def _row_reduce(rows: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form mod p and its pivot columns."""
    a = np.array(rows, dtype=np.int64) % p
    if a.ndim != 2 or a.size == 0:
        return a.reshape(0, a.shape[-1] if a.ndim == 2 else 0), []
    m, ncol = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncol):
        if r == m:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        a[[r, k]] = a[[k, r]]
        a[r] = (a[r] * pow(int(a[r, c]), -1, p)) % p
        others = np.flatnonzero(a[:, c])
        others = others[others != r]
        if others.size:
            a[others] = (a[others] - np.outer(a[others, c], a[r])) % p
        pivots.append(c)
        r += 1
    return a[:r], pivots


def nullspace_mod_p(rows: np.ndarray, ncol: int, p: int) -> np.ndarray:
    """Basis (as rows) of ``{u : rows @ u = 0}``."""
    if len(rows) == 0:
        return np.eye(ncol, dtype=np.int64)
    red, piv = _row_reduce(np.asarray(rows).reshape(-1, ncol), p)
    free = [c for c in range(ncol) if c not in piv]
    out = np.zeros((len(free), ncol), dtype=np.int64)
    for i, f in enumerate(free):
        out[i, f] = 1
        for r, c in enumerate(piv):
            out[i, c] = (-red[r, f]) % p
    return out


def _matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return (a.astype(np.int64) @ b.astype(np.int64)) % p


# ------------------------------------------------------------------ modules
@dataclass
class ModuleRep:
    """F_p-module given by one matrix per group generator."""

    prime: int
    dimension: int
    matrices: list[np.ndarray]
    group: GeneratorSet
    name: str = ""
    _hom: CombinedAction | None = field(default=None, repr=False)
    _chain: StabilizerChain | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        p, d = self.prime, self.dimension
        if len(self.matrices) != len(self.group.generators):
            raise ModuleError("one matrix per group generator is required")
        mats = []
        for m in self.matrices:
            m = np.asarray(m, dtype=np.int64) % p
            if m.shape != (d, d):
                raise ModuleError(f"matrix of shape {m.shape}, expected {(d, d)}")
            if rank_mod_p(m, p) != d:
                raise ModuleError("matrix is not invertible")
            mats.append(m)
        self.matrices = mats

    @classmethod
    def load(cls, path: str | Path) -> "ModuleRep":
        data = json.loads(Path(path).read_text())
        grp = data["group"]
        gens = GeneratorSet.parse(grp["generators"], int(grp["degree"]), int(grp.get("base_index", 1)))
        mats = [np.asarray(m, dtype=np.int64) for m in data["matrices"]]
        rep = cls(int(data["field"]), int(data["dimension"]), mats, gens, data.get("name", ""))
        rep.expected_order = int(grp["expected_order"]) if "expected_order" in grp else None
        return rep

    @staticmethod
    def trivial(group: GeneratorSet, p: int, dim: int = 1) -> "ModuleRep":
        return ModuleRep(p, dim, [np.eye(dim, dtype=np.int64) for _ in group.generators], group, "trivial")

    # vectors of F_p^d numbered by base-p digits, coordinate 0 least
    def _vector_action(self, m: np.ndarray) -> np.ndarray:
        p, d = self.prime, self.dimension
        size = p**d
        if size > 10**6:
            raise ModuleError("module too large for the vector-permutation action")
        digits = (np.arange(size)[:, None] // (p ** np.arange(d))[None, :]) % p
        img = (digits @ m) % p
        return (img @ (p ** np.arange(d))).astype(IDX)

    def chain(self) -> StabilizerChain:
        if self._chain is None:
            order = getattr(self, "expected_order", None)
            self._chain = schreier_sims(self.group)
            if order is not None and self._chain.order() != order:
                raise ModuleError("acting group has the wrong order")
        return self._chain

    def validate(self) -> bool:
        """The assignment extends to a homomorphism iff the group generated
        on Omega + V has the same order as the group on Omega."""
        G = self.chain()
        combo = [np.concatenate([g.images, self._vector_action(m) + G.degree]).astype(IDX)
                 for g, m in zip(self.group.generators, self.matrices)]
        both = schreier_sims(combo, degree=G.degree + self.prime**self.dimension)
        return both.order() == G.order()

    def matrix_of(self, g: Permutation | np.ndarray) -> np.ndarray:
        """Matrix of a group element given as a permutation."""
        if self._hom is None:
            images = [self._vector_action(m) for m in self.matrices]
            self._hom = CombinedAction(self.chain(), images)
        arr = g.images if isinstance(g, Permutation) else np.asarray(g, dtype=IDX)
        vperm = self._hom.image(arr)
        p, d = self.prime, self.dimension
        rows = vperm[(p ** np.arange(d))]
        return ((rows[:, None] // (p ** np.arange(d))[None, :]) % p).astype(np.int64)


def fixed_space(V: ModuleRep, elements: Iterable) -> int:
    """Dimension of the subspace fixed by every given element (matrices or
    permutations)."""
    d, p = V.dimension, V.prime
    blocks = []
    for e in elements:
        m = e if isinstance(e, np.ndarray) and e.shape == (d, d) else V.matrix_of(e)
        blocks.append((np.asarray(m, dtype=np.int64) - np.eye(d, dtype=np.int64)) % p)
    if not blocks:
        return d
    return d - rank_mod_p(np.hstack(blocks), p)


# ------------------------------------------------------------- cohomology
@dataclass
class CocycleSpace:
    prime: int
    dim_Z1: int
    dim_B1: int
    basis: np.ndarray  # rows: generator values (f(s_1), ..., f(s_k)) concatenated
    method: str

    @property
    def dim_H1(self) -> int:
        return self.dim_Z1 - self.dim_B1


def _constraint_rows_generic(G: StabilizerChain, gens: list[np.ndarray], mats: list[np.ndarray],
                             p: int, d: int) -> np.ndarray:
    """Generic Cayley propagation (any p); small groups only."""
    k = len(gens)
    nu = k * d
    ident = np.arange(G.degree, dtype=IDX)
    key0 = ident.tobytes()
    rho = {key0: np.eye(d, dtype=np.int64)}
    lin = {key0: np.zeros((nu, d), dtype=np.int64)}
    sel = []
    for j in range(k):
        e = np.zeros((nu, d), dtype=np.int64)
        e[j * d:(j + 1) * d] = np.eye(d, dtype=np.int64)
        sel.append(e)
    queue = [ident]
    rows: list[np.ndarray] = []
    i = 0
    while i < len(queue):
        g = queue[i]
        i += 1
        kg = g.tobytes()
        for j, s in enumerate(gens):
            h = s[g]
            kh = h.tobytes()
            nrho = _matmul(rho[kg], mats[j], p)
            nlin = (_matmul(lin[kg], mats[j], p) + sel[j]) % p
            if kh not in rho:
                rho[kh] = nrho
                lin[kh] = nlin
                queue.append(h)
            else:
                if not np.array_equal(rho[kh], nrho):
                    raise ModuleError("matrices fail a closed-walk check")
                diff = (lin[kh] - nlin) % p
                if diff.any():
                    rows.extend(diff.T)
                    if len(rows) > 4 * nu:
                        rows = list(_row_reduce(np.asarray(rows), p)[0])
    if len(queue) != G.order():
        raise AssertionError("Cayley enumeration missed elements")
    return np.asarray(rows, dtype=np.int64).reshape(-1, nu)


def h1(V: ModuleRep, method: str = "auto", limit: int = 3 * 10**6) -> CocycleSpace:
    """dim Z^1, B^1 and H^1 of the acting group on V."""
    G = V.chain()
    p, d = V.prime, V.dimension
    pairs = [(g.images, m) for g, m in zip(V.group.generators, V.matrices) if not g.is_identity()]
    for g, m in zip(V.group.generators, V.matrices):
        if g.is_identity() and not np.array_equal(m, np.eye(d, dtype=np.int64)):
            raise ModuleError("identity generator with a nonidentity matrix")
    gens = [a for a, _ in pairs]
    mats = [m for _, m in pairs]
    k = len(gens)
    nu = k * d
    if G.order() > limit:
        raise MemoryError(f"group order {G.order()} exceeds the cocycle enumeration limit {limit}")
    if method == "auto":
        method = "bitmask" if p == 2 and nu <= 64 and d <= 32 else "generic"
    if k == 0:
        rows = np.zeros((0, 0), dtype=np.int64)
    elif method == "bitmask":
        if p != 2 or nu > 64 or d > 32:
            raise ValueError("bitmask route needs p = 2, k*d <= 64 and d <= 32")
        rho_gens = np.zeros((k, d), dtype=np.uint32)
        for j, m in enumerate(mats):
            for i in range(d):
                rho_gens[j, i] = int(sum(int(m[i, c]) << c for c in range(d)))
        base, pos, offs, uinv, _ = G.packed()
        sizes = np.array(G.orbit_sizes(), dtype=np.int64)
        status, basis, _rank, visited = kernels.cocycles_f2(
            np.ascontiguousarray(np.stack(gens)), rho_gens, d, base, pos, offs, uinv, sizes, G.strides())
        if status:
            raise ModuleError("matrices fail a closed-walk check")
        if visited != G.order():
            raise AssertionError("Cayley enumeration missed elements")
        nz = [int(b) for b in basis if b]
        rows = np.array([[(b >> u) & 1 for u in range(nu)] for b in nz], dtype=np.int64).reshape(-1, nu)
    elif method == "generic":
        rows = _constraint_rows_generic(G, gens, mats, p, d)
    else:
        raise ValueError(f"unknown method {method!r}")
    Z = nullspace_mod_p(rows, nu, p) if nu else np.zeros((0, 0), dtype=np.int64)
    dim_B = d - fixed_space(V, [m for m in mats])
    return CocycleSpace(p, Z.shape[0], dim_B, Z, method)


# -------------------------------------------------------------- Lemma 4
@dataclass
class Lemma4Verdict:
    verdict: str  # "vanishes" or "inconclusive"
    class_size: int
    component_size: int
    in_core: str  # "true", "false" or "unevaluated"
    normalizes_component: bool
    centralizers_generate: bool
    reason: str = ""

    def to_json(self) -> dict:
        return dict(self.__dict__)


def _cyclic_elements(x: np.ndarray) -> np.ndarray:
    out = [np.arange(x.size, dtype=IDX)]
    cur = x
    while not np.array_equal(cur, out[0]):
        out.append(cur)
        cur = x[cur]
    return np.stack(out)


def lemma4_criterion(G: StabilizerChain, V: ModuleRep, x: Permutation, class_budget: int = 10**6,
                     core_bound: int | None = None) -> Lemma4Verdict:
    """Sufficient conditions for H^1(G, V) = 0 from the conjugacy graph of x."""
    p = V.prime
    xa = x.images
    if math.gcd(x.order(), p) != 1:
        raise ValueError("x must have order prime to p")
    if fixed_space(V, [x]) != 0:
        raise ValueError("x must have no nonzero fixed vectors")
    n = G.degree
    # class of x by conjugation
    cls = [xa]
    where = {xa.tobytes(): 0}
    i = 0
    while i < len(cls):
        y = cls[i]
        i += 1
        for s in G.generators:
            z = conj(y, s)
            kz = z.tobytes()
            if kz not in where:
                if len(cls) >= class_budget:
                    return Lemma4Verdict("inconclusive", -1, -1, "unevaluated", False, False,
                                         f"class larger than {class_budget}")
                where[kz] = len(cls)
                cls.append(z)
    C = np.stack(cls)
    m = C.shape[0]
    rows = np.arange(m)[:, None]
    powsets = [{e.tobytes() for e in _cyclic_elements(y)} for y in cls]
    comp = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for a in frontier:
            y = C[a]
            # y^w and w^y for every w in the class
            y_w = np.empty_like(C)
            y_w[rows, C] = C[:, y]
            w_y = np.empty_like(C)
            w_y[:, y] = y[C]
            for b in range(m):
                if b in comp:
                    continue
                if y_w[b].tobytes() in powsets[a] and w_y[b].tobytes() in powsets[b]:
                    comp.add(b)
                    nxt.append(b)
        frontier = nxt
    # x in O_p'(G) iff the normal closure of x is a p'-group
    core = normal_closure_chain(G, [xa])
    in_core = "true" if core.order() % p else "false"
    normalizes = all(conj(C[a], s).tobytes() in where and where[conj(C[a], s).tobytes()] in comp
                     for a in comp for s in G.generators)
    generate = False
    if not normalizes and in_core != "true":
        gens: list[np.ndarray] = []
        for a in sorted(comp):
            gens.extend(centralizer_chain(G, C[a]).generators)
            H = schreier_sims(gens, degree=n, order_bound=G.order()) if gens else None
            if H is not None and H.order() == G.order():
                generate = True
                break
    ok = in_core == "true" or normalizes or generate
    reason = ("x lies in O_p'(G)" if in_core == "true" else
              "G normalizes the component" if normalizes else
              "centralizers of the component generate G" if generate else "no condition holds")
    return Lemma4Verdict("vanishes" if ok else "inconclusive", m, len(comp), in_core, normalizes, generate, reason)
