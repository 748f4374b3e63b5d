"""Bundled group data, ingestion certification and the chain cache."""
from __future__ import annotations

import hashlib
import io
import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .bsgs import StabilizerChain, _Level, _inverse, schreier_sims
from .perm import IDX, GeneratorSet

DATA_DIR = Path(__file__).resolve().parent / "data"
CACHE_MAGIC = b"SPBSGS\x00"
CACHE_VERSION = 1


class AtlasError(ValueError):
    """Malformed or inconsistent group data."""


class CacheError(ValueError):
    """Unreadable, stale or corrupted cache entry."""


# ---------------------------------------------------------------- descriptors
@dataclass
class GroupDescriptor:
    name: str
    degree: int
    generators: list[str]
    base_index: int = 1
    expected_order: int | None = None
    links: dict[str, str] = field(default_factory=dict)
    source: str = ""
    path: Path | None = None

    @classmethod
    def load(cls, path: str | Path) -> "GroupDescriptor":
        path = Path(path)
        try:
            data = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise AtlasError(f"cannot read descriptor {path}: {exc}") from exc
        for key in ("name", "degree", "generators"):
            if key not in data:
                raise AtlasError(f"descriptor {path} lacks {key!r}")
        eo = data.get("expected_order")
        return cls(
            name=str(data["name"]),
            degree=int(data["degree"]),
            generators=list(data["generators"]),
            base_index=int(data.get("base_index", 1)),
            expected_order=int(eo) if eo is not None else None,
            links=dict(data.get("links", {})),
            source=str(data.get("source", "")),
            path=path,
        )

    def generator_set(self) -> GeneratorSet:
        return GeneratorSet.parse(self.generators, self.degree, self.base_index)


def groups_dir(data_dir: str | Path | None = None) -> Path:
    return Path(data_dir) / "groups" if data_dir is not None else DATA_DIR / "groups"


def available_groups(data_dir: str | Path | None = None) -> list[str]:
    return sorted(p.stem for p in groups_dir(data_dir).glob("*.json"))


def find_descriptor(name_or_path: str | Path, data_dir: str | Path | None = None) -> Path:
    p = Path(name_or_path)
    if p.suffix == ".json" and p.exists():
        return p
    cand = groups_dir(data_dir) / f"{name_or_path}.json"
    if cand.exists():
        return cand
    raise AtlasError(f"no group data for {name_or_path!r}")


# ---------------------------------------------------------------- the cache
def chain_key(gens: GeneratorSet) -> str:
    h = hashlib.sha256()
    h.update(str(gens.degree).encode())
    for b in sorted(g.images.tobytes() for g in gens.generators):
        h.update(b)
    return h.hexdigest()


def serialize_chain(ch: StabilizerChain) -> bytes:
    if not ch.complete:
        raise CacheError("only complete chains are cached")
    n = ch.degree
    k = len(ch.levels)
    arrays = {
        "degree": np.array([n], dtype=np.int64),
        "generators": np.stack(ch.generators) if ch.generators else np.empty((0, n), dtype=IDX),
        "strong": np.stack(ch.strong) if ch.strong else np.empty((0, n), dtype=IDX),
        "base": np.array(ch.base, dtype=np.int64),
        "sv_parent": np.stack([lv.sv_parent for lv in ch.levels]) if k else np.empty((0, n), dtype=IDX),
        "sv_gen": np.stack([lv.sv_gen for lv in ch.levels]) if k else np.empty((0, n), dtype=IDX),
        "orbits": np.array([x for lv in ch.levels for x in lv.orbit], dtype=np.int64),
        "orbit_offs": np.cumsum([0] + [len(lv.orbit) for lv in ch.levels]).astype(np.int64),
        "level_gens": np.array([j for lv in ch.levels for j in lv.gens], dtype=np.int64),
        "level_gen_offs": np.cumsum([0] + [len(lv.gens) for lv in ch.levels]).astype(np.int64),
    }
    buf = io.BytesIO()
    np.savez(buf, **arrays)
    payload = buf.getvalue()
    header = CACHE_MAGIC + CACHE_VERSION.to_bytes(4, "little")
    return header + hashlib.sha256(payload).digest() + payload


def deserialize_chain(blob: bytes) -> StabilizerChain:
    m = len(CACHE_MAGIC)
    if blob[:m] != CACHE_MAGIC:
        raise CacheError("not a chain cache file")
    version = int.from_bytes(blob[m:m + 4], "little")
    if version != CACHE_VERSION:
        raise CacheError(f"cache version {version}, expected {CACHE_VERSION}")
    digest, payload = blob[m + 4:m + 36], blob[m + 36:]
    if hashlib.sha256(payload).digest() != digest:
        raise CacheError("checksum failure")
    with np.load(io.BytesIO(payload)) as z:
        a = {key: z[key] for key in z.files}
    n = int(a["degree"][0])
    ch = StabilizerChain(n, [g.astype(IDX) for g in a["generators"]])
    ch.strong = [np.ascontiguousarray(g, dtype=IDX) for g in a["strong"]]
    ch.strong_inv = [_inverse(g) for g in ch.strong]
    oo, go = a["orbit_offs"], a["level_gen_offs"]
    for i, b in enumerate(a["base"].tolist()):
        lv = _Level(int(b), n)
        lv.orbit = a["orbits"][oo[i]:oo[i + 1]].astype(int).tolist()
        lv.gens = a["level_gens"][go[i]:go[i + 1]].astype(int).tolist()
        lv.sv_parent = a["sv_parent"][i].astype(IDX)
        lv.sv_gen = a["sv_gen"][i].astype(IDX)
        lv.pos[:] = -1
        lv.pos[np.asarray(lv.orbit, dtype=np.int64)] = np.arange(len(lv.orbit), dtype=IDX)
        # rebuild inverse transversals along the Schreier tree
        uinv = [np.arange(n, dtype=IDX)]
        for y in lv.orbit[1:]:
            parent = int(lv.sv_parent[y])
            uinv.append(uinv[int(lv.pos[parent])][ch.strong_inv[int(lv.sv_gen[y])]])
        lv.uinv = uinv
        ch.levels.append(lv)
    ch.complete = True
    return ch


class ChainCache:
    """Content-addressed store of complete chains (an optimization only)."""

    def __init__(self, directory: str | Path):
        self.dir = Path(directory)

    def path(self, key: str) -> Path:
        return self.dir / f"{key}.bsgs"

    def load(self, key: str) -> StabilizerChain | None:
        p = self.path(key)
        if not p.exists():
            return None
        return deserialize_chain(p.read_bytes())

    def save(self, key: str, ch: StabilizerChain) -> Path:
        self.dir.mkdir(parents=True, exist_ok=True)
        blob = serialize_chain(ch)
        fd, tmp = tempfile.mkstemp(dir=self.dir, prefix=".tmp-", suffix=".bsgs")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(blob)
            os.replace(tmp, self.path(key))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return self.path(key)


def spot_check(cache: ChainCache, rng: np.random.Generator | None = None,
               data_dir: str | Path | None = None) -> str | None:
    """Recompute one random cached chain of a bundled group and compare order
    and base with the cached copy.  Returns the checked group, or None when
    no bundled group is cached."""
    rng = rng if rng is not None else np.random.default_rng()
    cached = []
    for name in available_groups(data_dir):
        gens = GroupDescriptor.load(find_descriptor(name, data_dir)).generator_set()
        if cache.path(chain_key(gens)).exists():
            cached.append((name, gens))
    if not cached:
        return None
    name, gens = cached[int(rng.integers(len(cached)))]
    old = cache.load(chain_key(gens))
    fresh = schreier_sims(gens)
    if old is None or old.order() != fresh.order() or old.base != fresh.base:
        raise CacheError(f"cached chain of {name} differs from a fresh computation")
    return name


def save_chain(cache: ChainCache, key: str, ch: StabilizerChain) -> Path:
    return cache.save(key, ch)


def load_chain(cache: ChainCache, key: str) -> StabilizerChain | None:
    return cache.load(key)


# ------------------------------------------------------------------ loading
@dataclass
class LoadedGroup:
    descriptor: GroupDescriptor
    generators: GeneratorSet
    chain: StabilizerChain
    from_cache: bool = False
    link_checks: dict[str, str] = field(default_factory=dict)

    @property
    def name(self) -> str:
        return self.descriptor.name

    def order(self) -> int:
        return self.chain.order()


_MEMO: dict[tuple[str, str], LoadedGroup] = {}


def _chain_for(gens: GeneratorSet, cache: ChainCache | None) -> tuple[StabilizerChain, bool]:
    key = chain_key(gens)
    if cache is not None:
        try:
            ch = cache.load(key)
        except CacheError:
            ch = None
        if ch is not None and ch.degree == gens.degree:
            return ch, True
    ch = schreier_sims(gens)  # deterministic verification, no trusted bound
    if cache is not None:
        cache.save(key, ch)
    return ch, False


def load_group(name_or_path: str | Path, data_dir: str | Path | None = None,
               cache: ChainCache | str | Path | None = None, check_links: bool = True) -> LoadedGroup:
    """Parse, certify and return a bundled group.

    The order must match the descriptor exactly.  A ``derived`` link is
    certified by computing the derived subgroup and matching the linked
    group's order; an ``automorphism_extension`` link by loading the
    extension and checking the index is 2.
    """
    if cache is not None and not isinstance(cache, ChainCache):
        cache = ChainCache(cache)
    path = find_descriptor(name_or_path, data_dir)
    memo_key = (str(path.resolve()), str(check_links))
    if memo_key in _MEMO:
        return _MEMO[memo_key]
    desc = GroupDescriptor.load(path)
    try:
        gens = desc.generator_set()
    except ValueError as exc:
        raise AtlasError(f"{desc.name}: {exc}") from exc
    ch, hit = _chain_for(gens, cache)
    if desc.expected_order is not None and ch.order() != desc.expected_order:
        raise AtlasError(f"{desc.name}: order {ch.order()} differs from expected {desc.expected_order}")
    out = LoadedGroup(desc, gens, ch, hit)
    if check_links:
        for rel, other in desc.links.items():
            out.link_checks[rel] = _cached_link(out, rel, other, data_dir, cache)
    _MEMO[memo_key] = out
    return out


def _cached_link(g: LoadedGroup, rel: str, other: str, data_dir, cache: ChainCache | None) -> str:
    """Link verdicts are cached next to the chains, keyed by both generator sets."""
    if cache is None:
        return _certify_link(g, rel, other, data_dir, cache)
    target = GroupDescriptor.load(find_descriptor(other, data_dir)).generator_set()
    key = hashlib.sha256(f"{chain_key(g.generators)}:{rel}:{chain_key(target)}".encode()).hexdigest()
    p = cache.dir / f"{key}.link"
    if p.exists():
        return p.read_text()
    verdict = _certify_link(g, rel, other, data_dir, cache)
    cache.dir.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=cache.dir, prefix=".tmp-", suffix=".link")
    with os.fdopen(fd, "w") as fh:
        fh.write(verdict)
    os.replace(tmp, p)
    return verdict


def _certify_link(g: LoadedGroup, rel: str, other: str, data_dir, cache) -> str:
    from .local import derived_subgroup_chain

    target = load_group(other, data_dir, cache, check_links=False)
    if rel == "derived":
        D = derived_subgroup_chain(g.chain)
        if D.order() != target.order():
            raise AtlasError(f"{g.name}: derived subgroup order {D.order()} differs from {other}")
        if g.chain.order() != 2 * D.order():
            raise AtlasError(f"{g.name}: derived subgroup is not of index 2")
        same = target.chain.degree == g.chain.degree and all(D.contains(h) for h in target.chain.generators)
        return "certified (contains the bundled generators)" if same else "certified (order)"
    if rel == "automorphism_extension":
        if target.order() != 2 * g.order():
            raise AtlasError(f"{g.name}: extension {other} does not have index 2")
        return "certified (index 2)"
    raise AtlasError(f"{g.name}: unknown link {rel!r}")


def clear_memo() -> None:
    _MEMO.clear()
