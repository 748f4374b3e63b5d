"""Convert the raw GAP output in tools/gap_output into the bundled JSON data.

The GAP scripts in tools/gap were run once, offline, to produce the raw
files.  This script is deterministic and only reformats them.

    python3 tools/import_gap_output.py
"""
from __future__ import annotations

import json
import re
from pathlib import Path

ROOT = Path(__file__).resolve().parent
RAW = ROOT / "gap_output"
DATA = ROOT.parent / "src" / "sporadic" / "data"

# (degree, order) -> (name, links)
NAMES: dict[tuple[int, int], tuple[str, dict[str, str]]] = {
    (11, 7920): ("M11", {}),
    (12, 95040): ("M12", {"automorphism_extension": "M12.2"}),
    (22, 443520): ("M22", {"automorphism_extension": "M22.2"}),
    (22, 887040): ("M22.2", {"derived": "M22"}),
    (23, 10200960): ("M23", {}),
    (24, 244823040): ("M24", {}),
    (266, 175560): ("J1", {}),
    (100, 604800): ("J2", {"automorphism_extension": "J2.2"}),
    (100, 1209600): ("J2.2", {"derived": "J2"}),
    (100, 44352000): ("HS", {"automorphism_extension": "HS.2"}),
    (100, 88704000): ("HS.2", {"derived": "HS"}),
    (275, 898128000): ("Mc", {"automorphism_extension": "Mc.2"}),
    (275, 1796256000): ("Mc.2", {"derived": "Mc"}),
    (276, 495766656000): ("Co3", {}),
    (1782, 448345497600): ("Suz", {"automorphism_extension": "Suz.2"}),
    (1782, 896690995200): ("Suz.2", {"derived": "Suz"}),
    (2058, 4030387200): ("He", {"automorphism_extension": "He.2"}),
    (2058, 8060774400): ("He.2", {"derived": "He"}),
    (2300, 42305421312000): ("Co2", {}),
    (3510, 64561751654400): ("Fi22", {"automorphism_extension": "Fi22.2"}),
    (3510, 129123503308800): ("Fi22.2", {"derived": "Fi22"}),
    (4060, 145926144000): ("Ru", {}),
}


def _clean(line: str) -> str:
    return re.sub(r"\s+", "", line)


def parse_groups(text: str) -> list[dict]:
    out: list[dict] = []
    cur: dict | None = None
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("GROUP"):
            _, deg, order, idx = line.split()
            name, links = NAMES[(int(deg), int(order))]
            cur = {
                "name": name,
                "degree": int(deg),
                "base_index": 1,
                "expected_order": str(int(order)),
                "generators": [],
                "links": links,
                "source": f"GAP primitive groups library, PrimitiveGroup({deg}, {idx})",
            }
            out.append(cur)
        else:
            assert cur is not None
            cur["generators"].append(_clean(line))
    return out


def parse_modules(text: str) -> list[dict]:
    blocks: list[dict] = []
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    i = 0
    while i < len(lines):
        tag = lines[i]
        i += 1
        gens, mats = [], []
        while i < len(lines) and lines[i].startswith("("):
            gens.append(_clean(lines[i]))
            mats.append(json.loads(lines[i + 1]))
            i += 2
        blocks.append({"tag": tag, "generators": gens, "matrices": mats})
    return blocks


def main() -> None:
    (DATA / "groups").mkdir(parents=True, exist_ok=True)
    (DATA / "modules").mkdir(parents=True, exist_ok=True)
    for desc in parse_groups((RAW / "groups.txt").read_text()):
        path = DATA / "groups" / f"{desc['name']}.json"
        path.write_text(json.dumps(desc, indent=1) + "\n")

    m122 = [_clean(ln) for ln in (RAW / "m122.txt").read_text().splitlines() if ln.strip()]
    desc = {
        "name": "M12.2",
        "degree": 24,
        "base_index": 1,
        "expected_order": "190080",
        "generators": m122,
        "links": {"derived": "M12"},
        "source": "GAP, stabilizer in MathieuGroup(24) of a complementary dodecad pair",
    }
    (DATA / "groups" / "M12.2.json").write_text(json.dumps(desc, indent=1) + "\n")

    info = {
        "A7": ("A7_natural", 7, 2520, "GAP, IsomorphismGroups(AlternatingGroup(8), GL(4,2)) restricted to A7"),
        "SP62": ("Sp6_2_spin", 28, 1451520, "GAP MeatAxe, 8-dimensional composition factor of the permutation module on the cosets of G2(2)"),
    }
    for blk in parse_modules((RAW / "mods.txt").read_text()):
        name, deg, order, src = info[blk["tag"]]
        mod = {
            "name": name,
            "field": 2,
            "dimension": len(blk["matrices"][0]),
            "group": {
                "name": name.split("_")[0] if name.startswith("A7") else "Sp6(2)",
                "degree": deg,
                "base_index": 1,
                "expected_order": str(order),
                "generators": blk["generators"],
            },
            "action": "row vectors, v -> v*M",
            "matrices": blk["matrices"],
            "source": src,
        }
        (DATA / "modules" / f"{name}.json").write_text(json.dumps(mod, indent=1) + "\n")


if __name__ == "__main__":
    main()
