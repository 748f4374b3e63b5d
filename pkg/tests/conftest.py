from __future__ import annotations

import os
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from sporadic.atlas import ChainCache, load_group  # noqa: E402

# criterion number -> (passed, description, seconds)
ACCEPTANCE: dict[int, tuple[bool, str, float]] = {}


@pytest.fixture(scope="session")
def cache_dir(tmp_path_factory) -> Path:
    """Chain cache shared by the whole session; SPORADIC_TEST_CACHE reuses one across runs."""
    env = os.environ.get("SPORADIC_TEST_CACHE")
    if env:
        Path(env).mkdir(parents=True, exist_ok=True)
        return Path(env)
    return tmp_path_factory.mktemp("chains")


@pytest.fixture(scope="session")
def group(cache_dir):
    cache = ChainCache(cache_dir)

    def get(name: str):
        return load_group(name, cache=cache)
    return get


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


class Criterion:
    def __init__(self, number: int, text: str, limit: float):
        self.number, self.text, self.limit = number, text, limit
        self.start = time.perf_counter()
        self.end: float | None = None

    def stop(self) -> float:
        if self.end is None:
            self.end = time.perf_counter()
        return self.elapsed()

    def elapsed(self) -> float:
        return (self.end or time.perf_counter()) - self.start


@pytest.fixture
def criterion(request):
    """Times an acceptance criterion and records its verdict for the summary."""
    made: list[Criterion] = []

    def start(number: int, text: str, limit: float) -> Criterion:
        c = Criterion(number, text, limit)
        made.append(c)
        return c
    yield start
    rep = getattr(request.node, "rep_call", None)
    for c in made:
        ok = rep is not None and rep.passed
        ACCEPTANCE[c.number] = (ok, c.text, c.stop())


@pytest.hookimpl(hookwrapper=True, tryfirst=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, text, secs = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {text}  ({secs:.1f} s)")
