"""Machine-checkable claims about the bundled groups and a runner for them.

A manifest is a JSON document holding a seed and a list of claim records.
Each record names a kind, the groups it concerns, kind-specific
parameters, a citation and an expected value.  The runner validates the
whole manifest before evaluating anything, then evaluates every claim and
collects verdicts into a :class:`ClaimReport`.

Expected values are compared structurally: a dict expectation only checks
the keys it lists, so a claim can pin part of a richer computed value.
"""
from __future__ import annotations

import hashlib
import json
import resource
import time
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

import numpy as np

from .atlas import DATA_DIR, AtlasError, ChainCache, find_descriptor, load_group
from .backtrack import (
    DEFAULT_NODE_BUDGET,
    Budget,
    SearchBudgetExceeded,
    centralizer_chain,
    conj,
    conjugacy_witness,
    normalizer_chain,
    subgroup_conjugacy_witness,
)
from .bsgs import StabilizerChain, schreier_sims
from .cohomology import ModuleRep, h1, lemma4_criterion
from .local import (
    SylowFailure,
    _gens_chain,
    alternating_group,
    automorphism_group_small,
    center_chain,
    conjugacy_classes,
    cyclic_group,
    derived_subgroup_chain,
    elementary_abelian_subgroups,
    fused_E_p2_classes,
    is_2_constrained,
    is_isomorphic_small,
    normal_four_subgroups,
    p_core_chain,
    sl2_3_central_z4,
    sylow_chain,
    symmetric_group,
)
from .orbits import coset_action, lemma3_check, suborbits
from .perm import IDX, Permutation, parse_cycles, print_cycles

VERDICTS = ("verified", "refuted", "undecided")
PROVENANCE = ("paper", "derived", "trivial")
TIERS = ("default", "stretch")
DEFAULT_CLASS_BUDGET = 10**6


class ManifestError(ValueError):
    """The manifest is malformed; raised before any claim is evaluated."""


class Undecided(RuntimeError):
    """A computation could not reach a verdict within its limits."""


# ------------------------------------------------------------------ records
@dataclass
class Claim:
    id: str
    kind: str
    groups: list[str]
    params: dict[str, Any]
    citation: dict[str, str]
    expected: Any
    provenance: str
    tier: str = "default"
    negative_control: bool = False
    feeds: str = ""


@dataclass
class ClaimResult:
    id: str
    kind: str
    groups: list[str]
    verdict: str
    expected: Any
    computed: Any = None
    witnesses: dict[str, Any] = field(default_factory=dict)
    reason: str = ""
    provenance: str = ""
    citation: dict[str, str] = field(default_factory=dict)
    negative_control: bool = False
    seconds: float = 0.0

    def to_json(self, timings: bool = False) -> dict:
        out = {
            "id": self.id, "kind": self.kind, "groups": self.groups, "verdict": self.verdict,
            "expected": self.expected, "computed": self.computed, "witnesses": self.witnesses,
            "reason": self.reason, "provenance": self.provenance, "citation": self.citation,
            "negative_control": self.negative_control,
        }
        if timings:
            out["seconds"] = round(self.seconds, 3)
        return out


@dataclass
class ClaimReport:
    seed: int
    manifest: str
    tier: str
    results: list[ClaimResult]
    skipped: list[str] = field(default_factory=list)
    seconds: float = 0.0
    max_rss_kb: int = 0

    def counts(self) -> dict[str, int]:
        return {v: sum(r.verdict == v for r in self.results) for v in VERDICTS}

    def exit_code(self) -> int:
        c = self.counts()
        if c["refuted"]:
            return 1
        if c["undecided"]:
            return 2
        return 0

    def to_json(self, timings: bool = False) -> dict:
        out = {
            "seed": self.seed, "manifest": self.manifest, "tier": self.tier,
            "counts": self.counts(), "exit_code": self.exit_code(), "skipped": self.skipped,
            "results": [r.to_json(timings) for r in self.results],
        }
        if timings:
            out["seconds"] = round(self.seconds, 3)
            out["max_rss_kb"] = self.max_rss_kb
        return out

    def dumps(self, timings: bool = False) -> str:
        return json.dumps(self.to_json(timings), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, data: dict) -> "ClaimReport":
        results = [ClaimResult(
            id=r["id"], kind=r["kind"], groups=list(r["groups"]), verdict=r["verdict"],
            expected=r["expected"], computed=r["computed"], witnesses=r["witnesses"],
            reason=r["reason"], provenance=r["provenance"], citation=r["citation"],
            negative_control=r["negative_control"], seconds=r.get("seconds", 0.0),
        ) for r in data["results"]]
        return cls(int(data["seed"]), data["manifest"], data["tier"], results, list(data["skipped"]),
                   data.get("seconds", 0.0), data.get("max_rss_kb", 0))

    def to_text(self, timings: bool = True) -> str:
        lines = [f"manifest {self.manifest}  seed {self.seed}  tier {self.tier}"]
        for r in self.results:
            tag = " [negative control]" if r.negative_control else ""
            t = f"  ({r.seconds:.1f}s)" if timings else ""
            lines.append(f"{r.verdict:<10} {r.id}{tag}{t}")
            if r.verdict != "verified":
                lines.append(f"           expected {json.dumps(r.expected)}")
                lines.append(f"           computed {json.dumps(r.computed)}")
                if r.reason:
                    lines.append(f"           reason   {r.reason}")
        for s in self.skipped:
            lines.append(f"skipped    {s} (stretch tier)")
        c = self.counts()
        tail = f"  {self.seconds:.1f}s, peak RSS {self.max_rss_kb // 1024} MiB" if timings else ""
        lines.append(f"{c['verified']} verified, {c['refuted']} refuted, {c['undecided']} undecided{tail}")
        return "\n".join(lines)


# ------------------------------------------------------------ run context
@dataclass
class RunContext:
    seed: int = 0
    node_budget: int = DEFAULT_NODE_BUDGET
    class_budget: int = DEFAULT_CLASS_BUDGET
    data_dir: str | None = None
    cache_dir: str | None = None
    _groups: dict[str, StabilizerChain] = field(default_factory=dict, repr=False)
    _inside: dict[tuple[str, str], StabilizerChain] = field(default_factory=dict, repr=False)

    def group(self, name: str) -> StabilizerChain:
        if name not in self._groups:
            cache = ChainCache(self.cache_dir) if self.cache_dir else None
            self._groups[name] = load_group(name, self.data_dir, cache).chain
        return self._groups[name]

    def rng(self, claim_id: str) -> np.random.Generator:
        digest = hashlib.sha256(f"{self.seed}:{claim_id}".encode()).digest()
        return np.random.default_rng(int.from_bytes(digest[:8], "little"))

    def budget(self) -> Budget:
        return Budget(self.node_budget)

    def inside(self, g_name: str, a_name: str) -> StabilizerChain:
        """G as a subgroup of A's representation: the bundled generators when
        A contains them, otherwise the derived subgroup of A."""
        if g_name == a_name:
            return self.group(a_name)
        key = (g_name, a_name)
        if key not in self._inside:
            G, A = self.group(g_name), self.group(a_name)
            if G.degree == A.degree and all(A.contains(g) for g in G.generators):
                self._inside[key] = G
            else:
                D = derived_subgroup_chain(A)
                if D.order() != G.order():
                    raise AtlasError(f"derived subgroup of {a_name} has order {D.order()}, not |{g_name}|")
                self._inside[key] = D
        return self._inside[key]

    def module_path(self, name: str) -> Path:
        base = Path(self.data_dir) if self.data_dir else DATA_DIR
        p = base / "modules" / name
        return p if p.suffix == ".json" else p.with_suffix(".json")


def _cycles(g: np.ndarray) -> str:
    return print_cycles(Permutation._wrap(np.asarray(g, dtype=IDX)), base_index=1)


# ------------------------------------------------------- small group names
def named_group(name: str) -> StabilizerChain:
    """Groups the engine can construct for isomorphism tests."""
    if name == "SL2(3)*Z4":
        return sl2_3_central_z4()
    head, num = name[0], name[1:]
    if head in "ASZ" and num.isdigit():
        k = int(num)
        return {"A": alternating_group, "S": symmetric_group, "Z": cyclic_group}[head](k)
    raise ValueError(f"cannot construct {name!r}")


def identify(X: StabilizerChain, candidates: list[str]) -> str:
    """First candidate isomorphic to X, or ``"unidentified"``."""
    for name in candidates:
        Y = named_group(name)
        if Y.order() == X.order() and is_isomorphic_small(X, Y):
            return name
    return "unidentified"


def conjugation_action(N: StabilizerChain, M: StabilizerChain) -> StabilizerChain:
    """Image of N in Aut(M) as a permutation group on the elements of M."""
    E = M.element_array()
    where = {e.tobytes(): i for i, e in enumerate(E)}
    gens = []
    for g in N.generators:
        img = np.fromiter((where[conj(e, g).tobytes()] for e in E), dtype=IDX, count=E.shape[0])
        gens.append(img)
    return schreier_sims(gens, degree=E.shape[0])


# ------------------------------------------------------------- evaluators
# each returns (computed value, witnesses)
Outcome = tuple[Any, dict[str, Any]]


def _order(ctx: RunContext, c: Claim, rng) -> Outcome:
    G = ctx.group(c.groups[0])
    # the order is the product of the basic orbit lengths
    return G.order(), {"base": G.base, "basic_orbit_lengths": G.orbit_sizes()}


def _subdegrees(ctx: RunContext, c: Claim, rng) -> Outcome:
    point = int(c.params.get("point", 0))
    part = suborbits(ctx.group(c.groups[0]), point)
    reps = {str(o[0]): len(o) for o in sorted(part.orbits, key=len)}
    return part.lengths(), {"point": point, "suborbit_representatives": reps}


def _sylow_center(ctx: RunContext, c: Claim, rng) -> Outcome:
    G = ctx.group(c.groups[0])
    P = sylow_chain(G, int(c.params["prime"]), rng, ctx.budget())
    Z = center_chain(P, ctx.budget())
    return Z.order(), {"sylow_order": P.order(), "center_generators": [_cycles(z) for z in Z.generators]}


def _center_involution(G: StabilizerChain, ctx: RunContext, rng) -> tuple[StabilizerChain, StabilizerChain]:
    T = sylow_chain(G, 2, rng, ctx.budget())
    Z = center_chain(T, ctx.budget())
    return T, Z


def _two_constrained(ctx: RunContext, c: Claim, rng) -> Outcome:
    G = ctx.group(c.groups[0])
    T, Z = _center_involution(G, ctx, rng)
    C = centralizer_chain(G, np.stack(Z.generators), budget=ctx.budget(), rng=rng)
    Q = p_core_chain(C, 2, rng=rng, budget=ctx.budget())
    value = {"center_order": Z.order(), "centralizer_order": C.order(),
             "two_constrained": is_2_constrained(C, rng, ctx.budget())}
    return value, {"O2_order": Q.order()}


def _normal_four(ctx: RunContext, c: Claim, rng) -> Outcome:
    G = ctx.group(c.groups[0])
    T, Z = _center_involution(G, ctx, rng)
    if Z.order() != 2:
        raise Undecided(f"Z(T) has order {Z.order()}, so z is not determined")
    z = Z.generators[0]
    good, wit = 0, {}
    zp = Permutation._wrap(z)
    for U in normal_four_subgroups(T, ctx.budget()):
        others = [u for u in U.element_array() if not np.array_equal(u, np.arange(G.degree)) and not np.array_equal(u, z)]
        ws = [conjugacy_witness(G, zp, Permutation._wrap(u), ctx.budget(), rng) for u in others]
        if all(w is not None for w in ws):
            good += 1
            if not wit:
                wit = {"U": [_cycles(u) for u in others], "conjugators": [_cycles(w.images) for w in ws]}
    return {"count": good, "exists": good > 0}, wit


def _fused_ep2(ctx: RunContext, c: Claim, rng) -> Outcome:
    reps = fused_E_p2_classes(ctx.group(c.groups[0]), int(c.params["prime"]), rng, ctx.budget())
    return len(reps), {"class_representatives": [[_cycles(g) for g in H.generators] for H in reps]}


def _sylow_automizer(ctx: RunContext, c: Claim, rng) -> Outcome:
    p = int(c.params["prime"])
    A_name = c.groups[1] if len(c.groups) > 1 else c.groups[0]
    G = ctx.inside(c.groups[0], A_name)
    A = ctx.group(A_name)
    M = sylow_chain(G, p, rng, ctx.budget())
    gens = M.generators
    abelian = all(np.array_equal(a[b], b[a]) for a in gens for b in gens)
    ident = np.arange(G.degree, dtype=IDX)
    exponent_p = all(np.array_equal(_pow(g, p), ident) for g in M.element_array())
    N = normalizer_chain(A, M, ctx.budget())
    C = centralizer_chain(A, np.stack(gens), budget=ctx.budget(), rng=rng)
    image = conjugation_action(N, M)
    if image.order() * C.order() != N.order():
        raise AssertionError("automizer order disagrees with |N|/|C|")
    value = {"sylow_order": M.order(), "elementary_abelian": abelian and exponent_p,
             "normalizer_order": N.order(), "centralizer_order": C.order(), "order": image.order()}
    if "compare_with" in c.params:
        value["type"] = identify(image, [c.params["compare_with"]])
    return value, {"sylow_generators": [_cycles(g) for g in gens]}


def _pow(g: np.ndarray, k: int) -> np.ndarray:
    out = np.arange(g.size, dtype=IDX)
    for _ in range(k):
        out = g[out]
    return out


def verify_m22_parabolics(ctx: RunContext, rng, group: str = "M22") -> Outcome:
    """The two G-classes of E_16 subgroups normal in a Sylow 2-subgroup and
    the quotients of their normalizers."""
    G = ctx.group(group)
    budget = ctx.budget()
    T = sylow_chain(G, 2, rng, budget)
    cands = elementary_abelian_subgroups(T, 2, 4, normal_only=True)
    reps: list[StabilizerChain] = []
    for Q in cands:
        if not any(subgroup_conjugacy_witness(G, Q, R, budget) is not None for R in reps):
            reps.append(Q)
    rows = []
    for Q in reps:
        N = normalizer_chain(G, Q, budget)
        quot = coset_action(N, Q).image_chain
        rows.append((quot.order(), identify(quot, ["A6", "S5"]), N.order(), Q))
    rows.sort(key=lambda r: -r[0])
    nonconj = len(reps) == 2 and subgroup_conjugacy_witness(G, reps[0], reps[1], budget) is None
    value = {"classes": len(reps), "quotient_orders": [r[0] for r in rows],
             "quotient_types": [r[1] for r in rows], "non_conjugate": nonconj}
    wit = {"normalizer_orders": [r[2] for r in rows],
           "subgroups": [[_cycles(g) for g in r[3].generators] for r in rows]}
    return value, wit


def _quotient(ctx: RunContext, c: Claim, rng) -> Outcome:
    construction = c.params["construction"]
    if construction == "sylow_automizer":
        return _sylow_automizer(ctx, c, rng)
    if construction == "m22_parabolics":
        return verify_m22_parabolics(ctx, rng, c.groups[0])
    raise ManifestError(f"unknown construction {construction!r}")


def _small_complete(ctx: RunContext, c: Claim, rng) -> Outcome:
    G = ctx.group(c.groups[0])
    P = sylow_chain(G, int(c.params["prime"]), rng, ctx.budget())
    N = normalizer_chain(G, P, ctx.budget())
    aut = automorphism_group_small(N, bound=int(c.params.get("bound", 10**4)))
    return {"order": N.order(), "automorphisms": aut.automorphisms, "complete": aut.complete}, {}


def _module(ctx: RunContext, c: Claim) -> ModuleRep:
    V = ModuleRep.load(ctx.module_path(c.params["module"]))
    if not V.validate():
        raise AssertionError("module matrices do not define a representation")
    return V


def _h1(ctx: RunContext, c: Claim, rng) -> Outcome:
    V = _module(ctx, c)
    res = h1(V, c.params.get("method", "auto"))
    return {"dim_H1": res.dim_H1}, {"dim_Z1": res.dim_Z1, "dim_B1": res.dim_B1, "method": res.method}


def _lemma4(ctx: RunContext, c: Claim, rng) -> Outcome:
    V = _module(ctx, c)
    G = V.chain()
    x = parse_cycles(c.params["element"], G.degree, 1)
    verdict = lemma4_criterion(G, V, x, class_budget=ctx.class_budget)
    exact = h1(V).dim_H1
    agrees = verdict.verdict != "vanishes" or exact == 0
    return {"verdict": verdict.verdict, "dim_H1": exact, "agrees_with_h1": agrees}, verdict.to_json()


def _lemma3(ctx: RunContext, c: Claim, rng) -> Outcome:
    G = ctx.group(c.groups[0])
    v = lemma3_check(G, int(c.params.get("point", 0)), c.params.get("psi_length"))
    js = v.to_json()
    value = {k: js[k] for k in ("a", "b", "c", "d1", "d2", "e", "psi_length", "holds")}
    wit = {"suborbits": js["suborbits"], "note": js["note"]}
    if v.block_witness is not None:
        wit["blocks"] = v.block_witness.blocks()
    return value, wit


def verify_oliver(ctx: RunContext, g_name: str, a_name: str, rng, subject: str = "T") -> Outcome:
    """C_A(S) for S a Sylow 2-subgroup T of G, a Sylow 2-subgroup T_M of a
    point stabilizer M of G, or O_2(C_G(Z(T)))."""
    G = ctx.inside(g_name, a_name)
    A = ctx.group(a_name)
    budget = ctx.budget()
    if subject == "T":
        S = sylow_chain(G, 2, rng, budget)
    elif subject == "T_M":
        M = schreier_sims(G.point_stabilizer(0))
        S = sylow_chain(M, 2, rng, budget)
    elif subject == "O2C":
        T = sylow_chain(G, 2, rng, budget)
        Z = center_chain(T, budget)
        C = centralizer_chain(G, np.stack(Z.generators), budget=budget, rng=rng)
        S = p_core_chain(C, 2, rng=rng, budget=budget)
    else:
        raise ManifestError(f"unknown subject {subject!r}")
    CA = centralizer_chain(A, np.stack(S.generators), budget=budget, recheck=True, rng=rng)
    ZS = center_chain(S, budget)
    outside_g = [g for g in CA.generators if not G.contains(g)]
    outside_z = [g for g in CA.generators if not ZS.contains(g)]
    # Z(S) <= C_A(S) directly: Z(S) lies in S, hence in A, and commutes with S
    z_in = all(A.contains(z) and all(np.array_equal(z[s], s[z]) for s in S.generators) for z in ZS.generators)
    value = {"subject_order": S.order(), "centralizer_order": CA.order(), "center_order": ZS.order(),
             "equals_center": not outside_z and z_in and CA.order() == ZS.order(),
             "inside_G": not outside_g}
    wit = {}
    if outside_z:
        wit["outside_center"] = _cycles(outside_z[0])
    if outside_g:
        wit["outside_G"] = _cycles(outside_g[0])
    return value, wit


def _oliver(ctx: RunContext, c: Claim, rng) -> Outcome:
    a = c.groups[1] if len(c.groups) > 1 else c.groups[0]
    return verify_oliver(ctx, c.groups[0], a, rng, c.params.get("subject", "T"))


def _derived_index(ctx: RunContext, c: Claim, rng) -> Outcome:
    A = ctx.group(c.groups[1])
    D = derived_subgroup_chain(A)
    G = ctx.group(c.groups[0])
    return {"index": A.order() // D.order(), "derived_order": D.order(),
            "derived_is_named": D.order() == G.order()}, {}


def _involution_classes(ctx: RunContext, c: Claim, rng) -> Outcome:
    G = ctx.group(c.groups[0])
    table = conjugacy_classes(G, mode="involutions", rng=rng, budget=ctx.budget())
    inv = sorted(table.involution_classes(), key=lambda k: -k.centralizer_order)
    value = {"count": len(inv), "centralizer_orders": [k.centralizer_order for k in inv]}
    return value, {"representatives": [_cycles(k.representative.images) for k in inv]}


def verify_lemma2_hypotheses(ctx: RunContext, g_name: str, rng) -> dict[str, Any]:
    """Hypotheses (a), (b), (c) of the four-group criterion, each reported
    as computed (``None`` when its computation hit a limit)."""
    out: dict[str, Any] = {}
    G = ctx.group(g_name)
    try:
        T, Z = _center_involution(G, ctx, rng)
        out["a"] = Z.order() == 2
    except (SearchBudgetExceeded, SylowFailure):
        return {"a": None, "b": None, "c": None}
    try:
        out["b"] = _two_constrained(ctx, Claim("", "", [g_name], {}, {}, None, ""), rng)[0]["two_constrained"]
    except (SearchBudgetExceeded, SylowFailure):
        out["b"] = None
    try:
        out["c"] = _normal_four(ctx, Claim("", "", [g_name], {}, {}, None, ""), rng)[0]["exists"]
    except (SearchBudgetExceeded, SylowFailure, Undecided):
        out["c"] = None
    return out


@dataclass(frozen=True)
class KindSpec:
    groups: tuple[int, int]  # allowed count range
    required: dict[str, type]
    optional: dict[str, type]
    run: Callable[[RunContext, Claim, Any], Outcome]


KINDS: dict[str, KindSpec] = {
    "OrderEquals": KindSpec((1, 1), {}, {}, _order),
    "SubdegreesEqual": KindSpec((1, 1), {}, {"point": int}, _subdegrees),
    "SylowCenterOrder": KindSpec((1, 1), {"prime": int}, {}, _sylow_center),
    "TwoConstrainedCentralizer": KindSpec((1, 1), {}, {}, _two_constrained),
    "NormalFourFusedToCenter": KindSpec((1, 1), {}, {}, _normal_four),
    "FusedEp2ClassCount": KindSpec((1, 1), {"prime": int}, {}, _fused_ep2),
    "QuotientOrderEquals": KindSpec((1, 2), {"construction": str}, {"prime": int, "compare_with": str}, _quotient),
    "SmallGroupComplete": KindSpec((1, 1), {"prime": int}, {"bound": int}, _small_complete),
    "H1Vanishes": KindSpec((0, 1), {"module": str}, {"method": str}, _h1),
    "Lemma4Vanishes": KindSpec((0, 1), {"module": str, "element": str}, {}, _lemma4),
    "Lemma3Hypotheses": KindSpec((1, 1), {}, {"point": int, "psi_length": int}, _lemma3),
    "OliverCentralizer": KindSpec((1, 2), {}, {"subject": str}, _oliver),
    "DerivedIndexTwo": KindSpec((2, 2), {}, {}, _derived_index),
    "InvolutionClassData": KindSpec((1, 1), {}, {}, _involution_classes),
}


# --------------------------------------------------------------- manifests
@dataclass
class Manifest:
    path: str
    seed: int
    claims: list[Claim]


def _check_claim(raw: Any, i: int, data_dir, module_base: Path, seen: set[str]) -> tuple[Claim | None, list[str]]:
    errs: list[str] = []
    if not isinstance(raw, dict):
        return None, [f"claim #{i}: not an object"]
    cid = raw.get("id")
    where = f"claim {cid!r}" if cid else f"claim #{i}"
    if not isinstance(cid, str) or not cid:
        errs.append(f"{where}: missing id")
    elif cid in seen:
        errs.append(f"{where}: duplicate id")
    else:
        seen.add(cid)
    kind = raw.get("kind")
    spec = KINDS.get(kind) if isinstance(kind, str) else None
    if spec is None:
        errs.append(f"{where}: unknown kind {kind!r}")
    groups = raw.get("groups", [])
    if not isinstance(groups, list) or not all(isinstance(g, str) for g in groups):
        errs.append(f"{where}: groups must be a list of names")
        groups = []
    for g in groups:
        try:
            find_descriptor(g, data_dir)
        except AtlasError:
            errs.append(f"{where}: unknown group {g!r}")
    params = raw.get("params", {})
    if not isinstance(params, dict):
        errs.append(f"{where}: params must be an object")
        params = {}
    if spec is not None:
        lo, hi = spec.groups
        if not lo <= len(groups) <= hi:
            errs.append(f"{where}: {kind} takes {lo}..{hi} groups, got {len(groups)}")
        allowed = {**spec.required, **spec.optional}
        for k in spec.required:
            if k not in params:
                errs.append(f"{where}: missing parameter {k!r}")
        for k, v in params.items():
            if k not in allowed:
                errs.append(f"{where}: unknown parameter {k!r}")
            elif not isinstance(v, allowed[k]) or isinstance(v, bool):
                errs.append(f"{where}: parameter {k!r} must be {allowed[k].__name__}")
        if "module" in params and isinstance(params["module"], str):
            mp = module_base / params["module"]
            if not mp.with_suffix(".json").exists() and not mp.exists():
                errs.append(f"{where}: unknown module {params['module']!r}")
    cit = raw.get("citation")
    if not (isinstance(cit, dict) and cit.get("section") and cit.get("quote")):
        errs.append(f"{where}: citation needs a section and a quote")
    exp = raw.get("expected")
    if not (isinstance(exp, dict) and "value" in exp and exp.get("provenance") in PROVENANCE):
        errs.append(f"{where}: expected needs a value and a provenance in {PROVENANCE}")
    tier = raw.get("tier", "default")
    if tier not in TIERS:
        errs.append(f"{where}: unknown tier {tier!r}")
    if errs:
        return None, errs
    return Claim(cid, kind, groups, params, dict(cit), exp["value"], exp["provenance"], tier,
                 bool(raw.get("negative_control", False)), str(raw.get("feeds", ""))), []


def load_manifest(path: str | Path, data_dir: str | Path | None = None) -> Manifest:
    """Parse and validate every claim; all problems are reported together."""
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ManifestError(f"cannot read manifest {path}: {exc}") from exc
    if isinstance(data, list):
        data = {"claims": data}
    if not isinstance(data, dict) or not isinstance(data.get("claims"), list):
        raise ManifestError("manifest must be a list of claims or an object with a 'claims' list")
    module_base = (Path(data_dir) if data_dir else DATA_DIR) / "modules"
    claims, errs, seen = [], [], set()
    for i, raw in enumerate(data["claims"]):
        c, e = _check_claim(raw, i, data_dir, module_base, seen)
        errs.extend(e)
        if c is not None:
            claims.append(c)
    if errs:
        raise ManifestError("; ".join(errs))
    return Manifest(str(path), int(data.get("seed", 0)), claims)


def resolve_manifest(name: str | Path, data_dir: str | Path | None = None) -> Path:
    """A manifest path, or a bare name looked up in the data directory."""
    p = Path(name)
    if p.exists():
        return p
    base = (Path(data_dir) if data_dir else DATA_DIR) / "manifests"
    for cand in (base / p, base / p.name, (base / p.name).with_suffix(".json")):
        if cand.exists():
            return cand
    raise ManifestError(f"no manifest {name!r}")


# ------------------------------------------------------------------ running
def matches(expected: Any, computed: Any) -> bool:
    if isinstance(expected, dict):
        return isinstance(computed, dict) and all(k in computed and matches(v, computed[k])
                                                  for k, v in expected.items())
    if isinstance(expected, list):
        return (isinstance(computed, (list, tuple)) and len(expected) == len(computed)
                and all(matches(a, b) for a, b in zip(expected, computed)))
    if isinstance(expected, bool) or isinstance(computed, bool):
        return expected is computed
    return expected == computed


def _jsonable(x: Any) -> Any:
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    return x


def evaluate(ctx: RunContext, claim: Claim) -> ClaimResult:
    t0 = time.perf_counter()
    res = ClaimResult(claim.id, claim.kind, claim.groups, "undecided", claim.expected,
                      provenance=claim.provenance, citation=claim.citation,
                      negative_control=claim.negative_control)
    try:
        value, wit = KINDS[claim.kind].run(ctx, claim, ctx.rng(claim.id))
        res.computed, res.witnesses = _jsonable(value), _jsonable(wit)
        if matches(claim.expected, res.computed):
            res.verdict = "verified"
        else:
            res.verdict = "refuted"
            res.reason = "computed value differs from the expected value"
    except (SearchBudgetExceeded, SylowFailure, Undecided) as exc:
        res.reason = f"{type(exc).__name__}: {exc}"
    except Exception as exc:  # any crash is reported, never silently verified
        res.reason = f"error {type(exc).__name__}: {exc}"
        res.witnesses = {"traceback": traceback.format_exc(limit=3)}
    res.seconds = time.perf_counter() - t0
    return res


_WORKER_CTX: RunContext | None = None


def _worker_init(ctx: RunContext) -> None:
    global _WORKER_CTX
    _WORKER_CTX = ctx


def _worker_eval(claim: Claim) -> ClaimResult:
    assert _WORKER_CTX is not None
    return evaluate(_WORKER_CTX, claim)


def run_manifest(path: str | Path, seed: int | None = None, tier: str = "default",
                 node_budget: int = DEFAULT_NODE_BUDGET, class_budget: int = DEFAULT_CLASS_BUDGET,
                 data_dir: str | Path | None = None, cache_dir: str | Path | None = None,
                 threads: int = 1, only: list[str] | None = None) -> ClaimReport:
    """Validate the manifest, then evaluate its claims.

    Each claim draws from its own generator seeded by (seed, claim id), so
    results do not depend on the evaluation order or worker count.
    """
    if tier not in TIERS:
        raise ManifestError(f"unknown tier {tier!r}")
    man = load_manifest(path, data_dir)
    seed = man.seed if seed is None else int(seed)
    ctx = RunContext(seed, int(node_budget), int(class_budget),
                     str(data_dir) if data_dir else None, str(cache_dir) if cache_dir else None)
    todo, skipped = [], []
    for c in man.claims:
        if only is not None and c.id not in only:
            continue
        if c.tier == "stretch" and tier != "stretch":
            skipped.append(c.id)
        else:
            todo.append(c)
    t0 = time.perf_counter()
    if threads > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=threads, initializer=_worker_init, initargs=(ctx,)) as ex:
            results = list(ex.map(_worker_eval, todo))
    else:
        results = [evaluate(ctx, c) for c in todo]
    rss = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss
    rss = max(rss, resource.getrusage(resource.RUSAGE_CHILDREN).ru_maxrss)
    return ClaimReport(seed, Path(path).name, tier, results, skipped, time.perf_counter() - t0, int(rss))
