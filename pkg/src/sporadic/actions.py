"""Homomorphisms given by a second permutation action.

A group X acting faithfully on Omega (degree n) and, through the same
generators, on a second set (degree m) is realised as one permutation group
on the disjoint union.  Its order equals |X|, so chains with any base
prefix are built from random elements and certified by that order.  Walking
the first levels of such a chain maps elements across the two actions.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .bsgs import StabilizerChain, schreier_sims
from .perm import IDX


def induced_action(gens: Sequence[np.ndarray], label: np.ndarray, m: int) -> list[np.ndarray]:
    """Action on the classes of a generator-invariant partition.

    ``label[x]`` in ``range(m)`` is the class of point x.
    """
    reps = np.full(m, -1, dtype=np.int64)
    order = np.argsort(label, kind="stable")
    first = np.searchsorted(label[order], np.arange(m))
    reps = order[first]
    out = []
    for g in gens:
        img = label[g[reps]].astype(IDX)
        # invariance check: every class must map into one class
        if not np.array_equal(label[g], img[label]):
            raise ValueError("partition is not invariant under the generators")
        out.append(img)
    return out


class CombinedAction:
    """X acting on Omega (faithfully) and on a second set at once."""

    def __init__(self, source: StabilizerChain, images: Sequence[np.ndarray], rng=None):
        if not source.complete:
            raise ValueError("source chain must be complete")
        self.source = source
        self.n = source.degree
        self.m = int(images[0].size) if len(images) else 0
        if len(images) != len(source.generators):
            raise ValueError("one image per source generator is required")
        self.images = [np.asarray(a, dtype=IDX) for a in images]
        self.gens = [np.concatenate([g, a + self.n]).astype(IDX) for g, a in zip(source.generators, self.images)]
        self.rng = rng if rng is not None else np.random.default_rng(0xC0B)
        self._by_source: StabilizerChain | None = None
        self._by_image: StabilizerChain | None = None
        self._image_chain: StabilizerChain | None = None

    def _build(self, base: Sequence[int]) -> StabilizerChain:
        ch = schreier_sims(self.gens, degree=self.n + self.m, base=base,
                           order_bound=self.source.order(), rng=self.rng)
        if ch.order() != self.source.order():
            raise AssertionError("combined action has the wrong order")
        return ch

    def image_chain(self) -> StabilizerChain:
        if self._image_chain is None:
            self._image_chain = schreier_sims(self.images, degree=self.m)
        return self._image_chain

    def image_order(self) -> int:
        return self.image_chain().order()

    def _walk(self, chain: StabilizerChain, part: np.ndarray, lo: int, levels: int) -> np.ndarray:
        """Element of the combined group whose restriction to the part
        starting at ``lo`` is ``part`` (which must lie in that restriction)."""
        total = self.n + self.m
        r = part.astype(IDX) + lo
        cinv = np.arange(total, dtype=IDX)
        for i in range(levels):
            lv = chain.levels[i]
            delta = int(r[lv.point - lo])
            j = lv.pos[delta]
            if j < 0:
                raise ValueError("element is not in the group")
            if j:
                row = lv.uinv[j]
                r = row[r]
                cinv = row[cinv]
        if not np.array_equal(r - lo, np.arange(part.size)):
            raise ValueError("element is not in the group")
        c = np.empty_like(cinv)
        c[cinv] = np.arange(total, dtype=IDX)
        return c

    def image(self, g: np.ndarray) -> np.ndarray:
        """Image of a member of X under the second action."""
        if self._by_source is None:
            self._by_source = self._build(self.source.base)
        c = self._walk(self._by_source, np.asarray(g, dtype=IDX), 0, len(self.source.base))
        return (c[self.n:] - self.n).astype(IDX)

    def _image_prefixed(self) -> StabilizerChain:
        if self._by_image is None:
            ibase = [b + self.n for b in self.image_chain().base]
            self._by_image = self._build(ibase)
        return self._by_image

    def preimage(self, h: np.ndarray) -> np.ndarray:
        """Some member of X whose image is ``h``."""
        ch = self._image_prefixed()
        c = self._walk(ch, np.asarray(h, dtype=IDX), self.n, len(self.image_chain().base))
        return c[: self.n].copy()

    def kernel_generators(self) -> list[np.ndarray]:
        """Generators of the kernel of the second action."""
        ch = self._image_prefixed()
        fixed = np.arange(self.n, self.n + self.m, dtype=IDX)
        return [g[: self.n].copy() for g in ch.strong if np.array_equal(g[self.n:], fixed)]

    def kernel_order(self) -> int:
        return self.source.order() // self.image_order()
