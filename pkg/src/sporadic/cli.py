"""Command-line front end: ad-hoc group queries and manifest verification."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .atlas import AtlasError, CacheError, ChainCache, load_group, spot_check
from .backtrack import DEFAULT_NODE_BUDGET, Budget, SearchBudgetExceeded
from .claims import DEFAULT_CLASS_BUDGET, TIERS, ManifestError, resolve_manifest, run_manifest
from .cohomology import ModuleError, ModuleRep, h1
from .local import SylowFailure, center_chain, sylow_chain
from .orbits import IntransitiveError, subdegrees
from .perm import Permutation, print_cycles


def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


USAGE_ERROR = 3  # 0/1/2 are reserved for verdicts


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=_u64, default=None, help="random seed (u64)")
    common.add_argument("--budget-nodes", type=_positive, default=DEFAULT_NODE_BUDGET,
                        help="backtrack node budget per computation")
    common.add_argument("--budget-class", type=_positive, default=DEFAULT_CLASS_BUDGET,
                        help="cap on conjugacy class enumeration")
    common.add_argument("--cache-dir", default=None, help="stabilizer chain cache directory")
    common.add_argument("--data-dir", default=None, help="alternative data directory")
    common.add_argument("--tier", choices=TIERS, default="default")
    common.add_argument("--threads", type=_positive, default=1, help="worker processes for verify")
    common.add_argument("--timings", action="store_true", help="include wall-clock in JSON output")

    p = _Parser(prog="sporadic", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, helptext in (("order", "group order"), ("subdegrees", "subdegrees of a transitive group"),
                           ("center-sylow", "order of the center of a Sylow 2-subgroup")):
        s = sub.add_parser(name, help=helptext, parents=[common])
        s.add_argument("group")
    s = sub.add_parser("sylow", help="a Sylow p-subgroup", parents=[common])
    s.add_argument("group")
    s.add_argument("prime", type=int)
    s = sub.add_parser("h1", help="dimension of H^1 for a module file", parents=[common])
    s.add_argument("group", help="group name (checked against the module's acting group)")
    s.add_argument("module", help="module file or bundled module name")
    s = sub.add_parser("verify", help="evaluate a claim manifest", parents=[common])
    s.add_argument("manifest")
    return p


def _rng(args) -> np.random.Generator:
    return np.random.default_rng(args.seed if args.seed is not None else 0)


def _group(args):
    return load_group(args.group, args.data_dir, ChainCache(args.cache_dir) if args.cache_dir else None)


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def cmd_order(args) -> int:
    g = _group(args)
    _emit(args, {"group": g.name, "degree": g.chain.degree, "order": g.order()}, str(g.order()))
    return 0


def cmd_subdegrees(args) -> int:
    g = _group(args)
    s = subdegrees(g.chain)
    _emit(args, {"group": g.name, "subdegrees": s}, " ".join(map(str, s)))
    return 0


def cmd_sylow(args) -> int:
    g = _group(args)
    P = sylow_chain(g.chain, args.prime, _rng(args), Budget(args.budget_nodes))
    gens = [print_cycles(Permutation._wrap(x), 1) for x in P.generators]
    _emit(args, {"group": g.name, "prime": args.prime, "order": P.order(), "generators": gens},
          f"order {P.order()}\n" + "\n".join(gens))
    return 0


def cmd_center_sylow(args) -> int:
    g = _group(args)
    budget = Budget(args.budget_nodes)
    T = sylow_chain(g.chain, 2, _rng(args), budget)
    Z = center_chain(T, budget)
    gens = [print_cycles(Permutation._wrap(x), 1) for x in Z.generators]
    _emit(args, {"group": g.name, "sylow_order": T.order(), "center_order": Z.order(), "generators": gens},
          f"|T| = {T.order()}, |Z(T)| = {Z.order()}")
    return 0


def _module_path(args) -> Path:
    p = Path(args.module)
    if p.exists():
        return p
    base = Path(args.data_dir) if args.data_dir else Path(__file__).resolve().parent / "data"
    cand = (base / "modules" / p.name).with_suffix(".json")
    if cand.exists():
        return cand
    raise ModuleError(f"no module file {args.module!r}")


def cmd_h1(args) -> int:
    V = ModuleRep.load(_module_path(args))
    G = V.chain()
    try:
        named = _group(args).order()
    except AtlasError:
        named = None  # the acting group need not be bundled (A7 is not)
    if named is not None and named != G.order():
        raise ModuleError(f"module acts by a group of order {G.order()}, not {args.group}")
    if not V.validate():
        raise ModuleError("module matrices do not define a representation")
    res = h1(V)
    _emit(args, {"module": V.name, "prime": V.prime, "dimension": V.dimension, "dim_Z1": res.dim_Z1,
                 "dim_B1": res.dim_B1, "dim_H1": res.dim_H1},
          f"dim H^1 = {res.dim_H1}  (Z^1 {res.dim_Z1}, B^1 {res.dim_B1})")
    return 0


def cmd_verify(args) -> int:
    path = resolve_manifest(args.manifest, args.data_dir)
    if args.cache_dir:
        checked = spot_check(ChainCache(args.cache_dir), _rng(args), args.data_dir)
        if checked and not args.json:
            print(f"cache spot check: {checked} ok", file=sys.stderr)
    rep = run_manifest(path, seed=args.seed, tier=args.tier, node_budget=args.budget_nodes,
                       class_budget=args.budget_class, data_dir=args.data_dir, cache_dir=args.cache_dir,
                       threads=args.threads)
    if args.json:
        print(rep.dumps(timings=args.timings))
    else:
        print(rep.to_text())
    return rep.exit_code()


COMMANDS = {"order": cmd_order, "subdegrees": cmd_subdegrees, "sylow": cmd_sylow,
            "center-sylow": cmd_center_sylow, "h1": cmd_h1, "verify": cmd_verify}


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # argparse exits on --help and on usage errors
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR
    try:
        return COMMANDS[args.command](args)
    except (AtlasError, ManifestError, ModuleError, CacheError, IntransitiveError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (SearchBudgetExceeded, SylowFailure) as exc:
        print(f"undecided: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
