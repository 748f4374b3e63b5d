"""Permutations of {0..n-1} and generator sets.

Action is left to right: ``x^(p*q) = (x^p)^q``, so ``compose(p, q)`` maps
``x`` to ``q(p(x))``.  Points are 0-based internally; cycle text may be
1-based (the traditional format of generator files) via ``base_index``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

IDX = np.int32


class PermutationError(ValueError):
    """Malformed permutation data or a degree mismatch."""


class Permutation:
    """Immutable permutation stored as an image array."""

    __slots__ = ("_img", "_hash")

    def __init__(self, images: Sequence[int] | np.ndarray, *, check: bool = True):
        arr = np.array(images, dtype=IDX, copy=True).reshape(-1)
        if arr.size == 0:
            raise PermutationError("degree must be positive")
        if check:
            n = arr.size
            if arr.min() < 0 or arr.max() >= n:
                raise PermutationError("image out of range")
            seen = np.zeros(n, dtype=bool)
            seen[arr] = True
            if not seen.all():
                raise PermutationError("images are not a bijection")
        arr.setflags(write=False)
        self._img = arr
        self._hash = None

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "Permutation":
        """Wrap a trusted image array without validation or copying."""
        p = object.__new__(cls)
        arr = np.ascontiguousarray(arr, dtype=IDX)
        arr.setflags(write=False)
        p._img = arr
        p._hash = None
        return p

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls._wrap(np.arange(n, dtype=IDX))

    @property
    def images(self) -> np.ndarray:
        return self._img

    @property
    def degree(self) -> int:
        return int(self._img.size)

    def __call__(self, x: int) -> int:
        return int(self._img[x])

    def _check(self, other: "Permutation") -> None:
        if not isinstance(other, Permutation):
            raise TypeError(f"expected Permutation, got {type(other).__name__}")
        if other.degree != self.degree:
            raise PermutationError(f"degree mismatch: {self.degree} vs {other.degree}")

    def __mul__(self, other: "Permutation") -> "Permutation":
        self._check(other)
        return Permutation._wrap(other._img[self._img])

    def __invert__(self) -> "Permutation":
        inv = np.empty_like(self._img)
        inv[self._img] = np.arange(self.degree, dtype=IDX)
        return Permutation._wrap(inv)

    inverse = __invert__

    def __pow__(self, k: int) -> "Permutation":
        k = int(k)
        base = self if k >= 0 else ~self
        k = abs(k)
        result = np.arange(self.degree, dtype=IDX)
        cur = base._img
        while k:
            if k & 1:
                result = cur[result]
            cur = cur[cur]
            k >>= 1
        return Permutation._wrap(result)

    def conjugate(self, g: "Permutation") -> "Permutation":
        """``g^-1 * self * g``; maps ``x^g`` to ``x^(self g)``."""
        self._check(g)
        out = np.empty_like(self._img)
        out[g._img] = g._img[self._img]
        return Permutation._wrap(out)

    def __xor__(self, g: "Permutation") -> "Permutation":
        return self.conjugate(g)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return self.degree == other.degree and bool(np.array_equal(self._img, other._img))

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._img.tobytes())
        return self._hash

    def is_identity(self) -> bool:
        return bool(np.array_equal(self._img, np.arange(self.degree, dtype=IDX)))

    def support(self) -> np.ndarray:
        return np.flatnonzero(self._img != np.arange(self.degree, dtype=IDX))

    def cycles(self, include_fixed: bool = False) -> list[list[int]]:
        return cycles_of(self._img, include_fixed)

    def cycle_type(self) -> tuple[int, ...]:
        """Sorted cycle lengths including fixed points."""
        return tuple(sorted(len(c) for c in self.cycles(include_fixed=True)))

    def order(self) -> int:
        return order_of(self)

    def parity(self) -> int:
        """0 for even, 1 for odd."""
        return sum(len(c) - 1 for c in self.cycles()) % 2

    def __repr__(self) -> str:
        return f"Permutation({print_cycles(self)!r}, degree={self.degree})"

    def __reduce__(self):
        return (Permutation, (self._img.tolist(),))


def cycles_of(img: np.ndarray, include_fixed: bool = False) -> list[list[int]]:
    n = img.size
    seen = np.zeros(n, dtype=bool)
    out: list[list[int]] = []
    lst = img.tolist()
    for start in range(n):
        if seen[start]:
            continue
        cyc = [start]
        seen[start] = True
        x = lst[start]
        while x != start:
            cyc.append(x)
            seen[x] = True
            x = lst[x]
        if len(cyc) > 1 or include_fixed:
            out.append(cyc)
    return out


def identity(n: int) -> Permutation:
    return Permutation.identity(n)


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Apply ``p`` then ``q``."""
    return p * q


def inverse(p: Permutation) -> Permutation:
    return ~p


def order_of(p: Permutation) -> int:
    return reduce(math.lcm, (len(c) for c in p.cycles()), 1)


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, degree: int, base_index: int = 1) -> Permutation:
    """Parse disjoint cycle notation such as ``"(1,2,3)(4,5)"``.

    Points may be separated by commas or whitespace.  ``base_index`` says
    whether the text counts from 0 or from 1.
    """
    if base_index not in (0, 1):
        raise PermutationError("base_index must be 0 or 1")
    s = text.strip()
    if s in ("", "()"):
        return Permutation.identity(degree)
    if _CYCLE_RE.sub("", s).strip():
        raise PermutationError(f"malformed cycle text: {text!r}")
    img = np.arange(degree, dtype=IDX)
    used = np.zeros(degree, dtype=bool)
    for body in _CYCLE_RE.findall(s):
        toks = [t for t in re.split(r"[,\s]+", body.strip()) if t]
        if not toks:
            continue
        try:
            pts = [int(t) - base_index for t in toks]
        except ValueError as exc:
            raise PermutationError(f"malformed cycle text: {text!r}") from exc
        for x in pts:
            if not 0 <= x < degree:
                raise PermutationError(f"point {x + base_index} out of range for degree {degree}")
            if used[x]:
                raise PermutationError(f"repeated point {x + base_index}")
            used[x] = True
        for a, b in zip(pts, pts[1:] + pts[:1]):
            img[a] = b
    return Permutation._wrap(img)


def print_cycles(p: Permutation, base_index: int = 0) -> str:
    cyc = p.cycles()
    if not cyc:
        return "()"
    return "".join("(" + ",".join(str(x + base_index) for x in c) + ")" for c in cyc)


@dataclass(frozen=True)
class GeneratorSet:
    """A group given by generators, all of one degree."""

    degree: int
    generators: tuple[Permutation, ...]

    def __post_init__(self) -> None:
        gens = tuple(self.generators)
        if self.degree <= 0:
            raise PermutationError("degree must be positive")
        for g in gens:
            if not isinstance(g, Permutation):
                raise TypeError("generators must be Permutation instances")
            if g.degree != self.degree:
                raise PermutationError(f"generator of degree {g.degree} in a degree-{self.degree} set")
        object.__setattr__(self, "generators", gens)

    @classmethod
    def of(cls, gens: Iterable[Permutation], degree: int | None = None) -> "GeneratorSet":
        gens = tuple(gens)
        if degree is None:
            if not gens:
                raise PermutationError("empty generator list needs an explicit degree")
            degree = gens[0].degree
        return cls(degree, gens)

    @classmethod
    def parse(cls, texts: Iterable[str], degree: int, base_index: int = 1) -> "GeneratorSet":
        return cls(degree, tuple(parse_cycles(t, degree, base_index) for t in texts))

    def nontrivial(self) -> list[Permutation]:
        return [g for g in self.generators if not g.is_identity()]

    def as_array(self) -> np.ndarray:
        """Non-identity generators stacked as a ``(k, n)`` int32 array."""
        gens = self.nontrivial()
        if not gens:
            return np.empty((0, self.degree), dtype=IDX)
        return np.stack([g.images for g in gens]).astype(IDX, copy=False)

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)
