from __future__ import annotations

import json
import os
import subprocess
import sys

import pytest

PROBE = r"""
import json
import numpy as np
from pathlib import Path
import sporadic
from sporadic._accel import backend
from sporadic.atlas import load_group
from sporadic.backtrack import centralizer_chain, setwise_stabilizer_chain
from sporadic.cohomology import ModuleRep, h1
from sporadic.local import center_chain, sylow_chain
from sporadic.orbits import is_primitive, subdegrees

m12 = load_group("M12").chain
m22 = load_group("M22").chain
rng = np.random.default_rng(3)
T = sylow_chain(m12, 2, rng)
a7 = ModuleRep.load(Path(sporadic.__file__).parent / "data" / "modules" / "A7_natural.json")
print(json.dumps({
    "backend": backend(),
    "order": m12.order(),
    "subdegrees": subdegrees(m22),
    "centralizer": centralizer_chain(m12, [m12.generators[0]]).order(),
    "setwise": setwise_stabilizer_chain(m22, [0, 1, 2]).order(),
    "sylow_center": [T.order(), center_chain(T).order()],
    "h1": h1(a7).dim_H1,
    "primitive": bool(is_primitive(m22.generators)),
    "rank": [int(m12.rank(g)) for g in m12.generators],
}))
"""


def _probe(no_numba: bool) -> dict:
    env = dict(os.environ)
    env.pop("SPORADIC_NO_NUMBA", None)
    if no_numba:
        env["SPORADIC_NO_NUMBA"] = "1"
    p = subprocess.run([sys.executable, "-c", PROBE], capture_output=True, text=True, env=env, timeout=600)
    assert p.returncode == 0, p.stderr
    return json.loads(p.stdout)


def test_fallback_matches_numba():
    pytest.importorskip("numba")
    fast, slow = _probe(False), _probe(True)
    assert fast.pop("backend") == "numba"
    assert slow.pop("backend") == "python"
    assert fast == slow
    assert fast["order"] == 95040 and fast["subdegrees"] == [1, 21] and fast["h1"] == 0
