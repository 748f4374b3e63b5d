"""Brute-force oracles over explicit element lists, and a corpus of small
permutation groups.  Nothing here calls the library's algorithms."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

IDX = np.int32


def perm(n: int, *cycles) -> np.ndarray:
    out = np.arange(n, dtype=IDX)
    for c in cycles:
        for a, b in zip(c, c[1:] + c[:1]):
            out[a] = b
    return out


def from_map(points: list, f) -> np.ndarray:
    where = {p: i for i, p in enumerate(points)}
    return np.asarray([where[f(p)] for p in points], dtype=IDX)


def closure(gens: list[np.ndarray], n: int, limit: int = 10**5) -> np.ndarray:
    """All elements generated by ``gens`` (rows, sorted)."""
    ident = tuple(range(n))
    seen = {ident}
    frontier = [np.arange(n, dtype=IDX)]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = np.asarray(g, dtype=IDX)[a]
                t = tuple(b.tolist())
                if t not in seen:
                    seen.add(t)
                    nxt.append(b)
                    if len(seen) > limit:
                        raise ValueError("group too large for brute force")
        frontier = nxt
    return np.asarray(sorted(seen), dtype=IDX)


def conj(x: np.ndarray, g: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    out[g] = g[x]
    return out


def order_of(x: np.ndarray) -> int:
    ident = np.arange(x.size)
    cur, k = x, 1
    while not np.array_equal(cur, ident):
        cur, k = x[cur], k + 1
    return k


def p_part(n: int, p: int) -> int:
    q = 1
    while n % p == 0:
        n //= p
        q *= p
    return q


@dataclass
class Brute:
    gens: list[np.ndarray]
    n: int

    @cached_property
    def E(self) -> np.ndarray:
        return closure(self.gens, self.n)

    @cached_property
    def index(self) -> dict[bytes, int]:
        return {e.tobytes(): i for i, e in enumerate(self.E)}

    @property
    def order(self) -> int:
        return self.E.shape[0]

    def keyset(self, rows) -> set[bytes]:
        return {np.asarray(r, dtype=IDX).tobytes() for r in rows}

    def centralizer(self, xs: list[np.ndarray]) -> set[bytes]:
        E = self.E
        ok = np.ones(E.shape[0], dtype=bool)
        for x in xs:
            ok &= (x[E] == E[:, x]).all(axis=1)
        return self.keyset(E[ok])

    def subgroup(self, gens: list[np.ndarray]) -> set[bytes]:
        return self.keyset(closure(gens, self.n))

    def normalizer(self, hgens: list[np.ndarray]) -> set[bytes]:
        H = self.subgroup(hgens)
        out = [g for g in self.E if all(conj(h, g).tobytes() in H for h in hgens)]
        return self.keyset(out)

    def classes(self) -> list[list[int]]:
        seen = np.zeros(self.order, dtype=bool)
        out = []
        for i in range(self.order):
            if seen[i]:
                continue
            cls, todo = [i], [i]
            seen[i] = True
            while todo:
                j = todo.pop()
                for g in self.gens:
                    k = self.index[conj(self.E[j], g).tobytes()]
                    if not seen[k]:
                        seen[k] = True
                        cls.append(k)
                        todo.append(k)
            out.append(cls)
        return out

    def normal_closure(self, xs: list[np.ndarray]) -> set[bytes]:
        conjs = {x.tobytes(): x for x in xs}
        todo = list(conjs.values())
        while todo:
            y = todo.pop()
            for g in self.gens:
                z = conj(y, g)
                if z.tobytes() not in conjs:
                    conjs[z.tobytes()] = z
                    todo.append(z)
        return self.subgroup(list(conjs.values()))

    def p_core(self, p: int) -> set[bytes]:
        """x lies in O_p(G) iff the normal closure of x is a p-group."""
        ident = np.arange(self.n, dtype=IDX)
        members = {ident.tobytes()}
        for cls in self.classes():
            x = self.E[cls[0]]
            if np.array_equal(x, ident) or p_part(order_of(x), p) != order_of(x):
                continue
            N = self.normal_closure([x])
            if p_part(len(N), p) == len(N):
                members |= {self.E[i].tobytes() for i in cls}
        return members

    def abelianization_p_rank(self, p: int) -> int:
        """log_p |G : G' G^p| with G' the normal closure of generator commutators."""
        comms = []
        for a in self.gens:
            for b in self.gens:
                ai, bi = np.argsort(a).astype(IDX), np.argsort(b).astype(IDX)
                comms.append(b[a[bi[ai]]])
        D = self.normal_closure(comms)
        cur = np.tile(np.arange(self.n, dtype=IDX), (self.order, 1))
        for _ in range(p):
            cur = np.take_along_axis(self.E, cur, axis=1)
        extra = [np.frombuffer(k, dtype=IDX) for k in self.keyset(cur) - D]
        sub = D
        for x in extra:
            if x.tobytes() not in sub:
                sub = self.subgroup([np.frombuffer(k, dtype=IDX) for k in sub] + [x])
        return round(math.log(self.order // len(sub), p))


def _pgl2(q: int, projective_special: bool) -> tuple[list[np.ndarray], int]:
    """PSL(2,q) or PGL(2,q) on the projective line, q prime."""
    pts = list(range(q)) + ["inf"]

    def mobius(a, b, c, d):
        def f(x):
            if x == "inf":
                return "inf" if c == 0 else (a * pow(c, -1, q)) % q
            den = (c * x + d) % q
            if den == 0:
                return "inf"
            return ((a * x + b) * pow(den, -1, q)) % q
        return f

    squares = sorted({(x * x) % q for x in range(1, q)})
    nonsq = [x for x in range(1, q) if x not in squares]
    gens = [from_map(pts, mobius(1, 1, 0, 1)), from_map(pts, mobius(0, -1 % q, 1, 0))]
    gens.append(from_map(pts, mobius(squares[1] if len(squares) > 1 else 1, 0, 0, 1)))
    if not projective_special:
        gens.append(from_map(pts, mobius(nonsq[0], 0, 0, 1)))
    return gens, q + 1


def _affine(p: int, dim: int, special: bool) -> tuple[list[np.ndarray], int]:
    pts = [tuple((i // p**k) % p for k in range(dim)) for i in range(p**dim)]
    gens = []
    e = [0] * dim
    e[0] = 1
    gens.append(from_map(pts, lambda v: tuple((v[i] + e[i]) % p for i in range(dim))))
    # elementary transvection and a cyclic coordinate shift generate SL
    gens.append(from_map(pts, lambda v: tuple(((v[0] + v[1]) % p if i == 0 else v[i]) for i in range(dim))))
    gens.append(from_map(pts, lambda v: tuple(v[(i + 1) % dim] if i < dim - 1 else (-v[0]) % p
                                          for i in range(dim))))
    if not special and p > 2:
        gens.append(from_map(pts, lambda v: tuple(((2 * v[0]) % p if i == 0 else v[i]) for i in range(dim))))
    return gens, p**dim


def corpus() -> list[tuple[str, list[np.ndarray], int]]:
    """Fifty assorted permutation groups of order at most 5000."""
    out: list[tuple[str, list[np.ndarray], int]] = []
    for n in range(2, 9):
        out.append((f"Z{n}", [perm(n, list(range(n)))], n))
    for n in range(3, 9):
        refl = perm(n, *[[i, n - 1 - i] for i in range(n // 2)])
        out.append((f"D{2 * n}", [perm(n, list(range(n))), refl], n))
    for n in (3, 4, 5, 6):
        out.append((f"S{n}", [perm(n, list(range(n))), perm(n, [0, 1])], n))
    for n in (4, 5, 6):
        gens = [perm(n, [0, 1, 2]), perm(n, list(range(1, n))) if n % 2 == 0 else perm(n, list(range(n)))]
        if n % 2 == 0:
            gens = [perm(n, [i, i + 1, i + 2]) for i in range(n - 2)]
        out.append((f"A{n}", gens, n))
    out.append(("A7", [perm(7, [0, 1, 2]), perm(7, list(range(7)))], 7))
    # Q8 in its regular representation: i -> (0 2 1 3)(4 7 5 6)? built from quaternion units
    units = [(s, u) for u in "1ijk" for s in (1, -1)]
    table = {("1", x): (1, x) for x in "1ijk"}
    table.update({(x, "1"): (1, x) for x in "1ijk"})
    table.update({("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
                  ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
                  ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j")})

    def qmul(a, b):
        s, u = table[(a[1], b[1])]
        return (a[0] * b[0] * s, u)

    out.append(("Q8", [from_map(units, lambda v: qmul(v, (1, "i"))), from_map(units, lambda v: qmul(v, (1, "j")))], 8))
    out.append(("V4", [perm(4, [0, 1], [2, 3]), perm(4, [0, 2], [1, 3])], 4))
    out.append(("E8", [perm(8, [0, 1], [2, 3], [4, 5], [6, 7]), perm(8, [0, 2], [1, 3], [4, 6], [5, 7]),
                       perm(8, [0, 4], [1, 5], [2, 6], [3, 7])], 8))
    for p, g in ((5, 2), (7, 3), (11, 2)):
        out.append((f"AGL1_{p}", [from_map(list(range(p)), lambda x: (x + 1) % p),
                                  from_map(list(range(p)), lambda x, g=g: (g * x) % p)], p))
    out.append(("F21", [from_map(list(range(7)), lambda x: (x + 1) % 7),
                        from_map(list(range(7)), lambda x: (2 * x) % 7)], 7))
    out.append(("S2wrS3", [perm(6, [0, 1]), perm(6, [0, 2, 4], [1, 3, 5]), perm(6, [0, 2], [1, 3])], 6))
    out.append(("S3wrS2", [perm(6, [0, 1, 2]), perm(6, [0, 1]), perm(6, [0, 3], [1, 4], [2, 5])], 6))
    out.append(("S2wrS4", [perm(8, [0, 1]), perm(8, [0, 2, 4, 6], [1, 3, 5, 7]), perm(8, [0, 2], [1, 3])], 8))
    out.append(("S3xS3", [perm(6, [0, 1, 2]), perm(6, [0, 1]), perm(6, [3, 4, 5]), perm(6, [3, 4])], 6))
    out.append(("S4xS3", [perm(7, [0, 1, 2, 3]), perm(7, [0, 1]), perm(7, [4, 5, 6]), perm(7, [4, 5])], 7))
    out.append(("Z3xS3", [perm(6, [0, 1, 2]), perm(6, [3, 4, 5]), perm(6, [3, 4])], 6))
    out.append(("Z6_intransitive", [perm(5, [0, 1], [2, 3, 4])], 5))
    out.append(("Z2xA4", [perm(7, [0, 1]), perm(7, [2, 3, 4]), perm(7, [3, 4, 5])], 7))
    for q, special, name in ((5, False, "PGL2_5"), (7, True, "PSL2_7"), (7, False, "PGL2_7"),
                             (11, True, "PSL2_11"), (13, True, "PSL2_13"), (11, False, "PGL2_11")):
        gens, n = _pgl2(q, special)
        out.append((name, gens, n))
    for p, dim, special, name in ((3, 2, False, "AGL2_3"), (3, 2, True, "ASL2_3"), (2, 3, True, "AGL3_2")):
        gens, n = _affine(p, dim, special)
        out.append((name, gens, n))
    pairs4 = [(a, b) for a in range(4) for b in range(a + 1, 4)]
    out.append(("S4_on_pairs", [from_map(pairs4, lambda e, g=g: tuple(sorted(int(g[x]) for x in e)))
                                for g in (perm(4, [0, 1, 2, 3]), perm(4, [0, 1]))], 6))
    gens6, _ = _pgl2(5, True)
    out.append(("A5_on_6", gens6, 6))
    pairs5 = [(a, b) for a in range(5) for b in range(a + 1, 5)]
    out.append(("S5_on_pairs", [from_map(pairs5, lambda e, g=g: tuple(sorted(int(g[x]) for x in e)))
                                for g in (perm(5, [0, 1, 2, 3, 4]), perm(5, [0, 1]))], 10))
    out.append(("D8wrZ2", [perm(8, [0, 1, 2, 3]), perm(8, [0, 2]), perm(8, [0, 4], [1, 5], [2, 6], [3, 7])], 8))
    out.append(("Z4wrZ2", [perm(8, [0, 1, 2, 3]), perm(8, [0, 4], [1, 5], [2, 6], [3, 7])], 8))
    return out
