"""Computational verification of local-analysis claims about sporadic groups."""
from __future__ import annotations

from .perm import GeneratorSet, Permutation, PermutationError, parse_cycles, print_cycles
from .bsgs import StabilizerChain, rebase, schreier_sims

__all__ = [
    "GeneratorSet",
    "Permutation",
    "PermutationError",
    "StabilizerChain",
    "parse_cycles",
    "print_cycles",
    "rebase",
    "schreier_sims",
]
__version__ = "0.1.0"
