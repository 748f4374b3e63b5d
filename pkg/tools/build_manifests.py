"""Regenerate the bundled claim manifests."""
from __future__ import annotations

import json
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "sporadic" / "data" / "manifests"

CT1 = r"$\widetilde C(T)=1$"


def claim(cid, kind, groups, expected, prov, section, quote, params=None, tier="default", **extra):
    rec = {"id": cid, "kind": kind, "groups": groups, "params": params or {},
           "citation": {"section": section, "quote": quote},
           "expected": {"value": expected, "provenance": prov}, "tier": tier}
    rec.update(extra)
    return rec


def table1() -> list[dict]:
    out = []
    orders = {"M11": 7920, "M12": 95040, "M22": 443520, "M23": 10200960, "M24": 244823040}
    for g, o in orders.items():
        out.append(claim(f"order-{g}", "OrderEquals", [g], o, "derived", g, "transitive"))
    for g, a in [("M12", "M12.2"), ("M22", "M22.2"), ("J2", "J2.2"), ("HS", "HS.2"), ("Mc", "Mc.2"),
                 ("Suz", "Suz.2"), ("He", "He.2"), ("Fi22", "Fi22.2")]:
        out.append(claim(f"out-{g}", "DerivedIndexTwo", [g, a], {"index": 2, "derived_is_named": True},
                         "paper", "Table 1", "$Z_2$"))
    subs = {"HS": ([1, 22, 77], "of orders $22$ and $77$"), "Suz": ([1, 416, 1365], "$1+1365+416$"),
            "Ru": ([1, 1755, 2304], "$1755$ and $2304$"), "Fi22": ([1, 693, 2816], "$3510=1+693+2816$")}
    for g, (s, q) in subs.items():
        out.append(claim(f"subdegrees-{g}", "SubdegreesEqual", [g], s, "paper", g, q))
    pairs = [("M11", "M11"), ("M12", "M12.2"), ("M22", "M22.2"), ("M23", "M23"), ("M24", "M24"),
             ("J1", "J1"), ("J2", "J2.2"), ("HS", "HS.2"), ("Mc", "Mc.2"), ("Suz", "Suz.2"),
             ("He", "He.2"), ("Ru", "Ru"), ("Co3", "Co3"), ("Co2", "Co2"), ("Fi22", "Fi22.2")]
    for g, a in pairs:
        groups = [g] if g == a else [g, a]
        out.append(claim(f"oliver-{g}", "OliverCentralizer", groups,
                         {"equals_center": True, "inside_G": True}, "paper", "Introduction",
                         "a Sylow subgroup of", {"subject": "T"}))
    for g, a in [("M22", "M22.2"), ("Suz", "Suz.2")]:
        out.append(claim(f"table1-TM-{g}", "OliverCentralizer", [g, a], {"inside_G": True}, "paper",
                         "Table 1", r"$\widetilde C(T_M)=1$", {"subject": "T_M"}))
    out.append(claim("table1-O2C-J2", "OliverCentralizer", ["J2", "J2.2"], {"inside_G": True}, "paper",
                     "Table 1", r"$\widetilde C(O_2(C))=1$", {"subject": "O2C"}))
    out.append(claim("lemma2a-J2", "SylowCenterOrder", ["J2"], 2, "paper", "J2", r"$Z:=Z(T)=\<z>\cong Z_2$",
                     {"prime": 2}))
    out.append(claim("lemma2b-J2", "TwoConstrainedCentralizer", ["J2"],
                     {"two_constrained": True, "centralizer_order": 1920}, "paper", "J2", "$C=2^{1+4}_-A_5$"))
    out.append(claim("lemma2c-J2", "NormalFourFusedToCenter", ["J2"], {"exists": True}, "paper", "J2",
                     r"$U^\#\subseteq z^G$"))
    out.append(claim("lemma2a-M12", "SylowCenterOrder", ["M12"], 2, "derived", "M12", CT1, {"prime": 2}))
    out.append(claim("fusion-M12", "FusedEp2ClassCount", ["M12"], 2, "paper", "M12", "exactly two",
                     {"prime": 3}))
    out.append(claim("parabolics-M22", "QuotientOrderEquals", ["M22"],
                     {"classes": 2, "quotient_orders": [360, 120], "quotient_types": ["A6", "S5"],
                      "non_conjugate": True},
                     "paper", "M22", r"$N_G(Q_0)/Q_0\cong A_6$", {"construction": "m22_parabolics"}))
    out.append(claim("automizer-He", "QuotientOrderEquals", ["He"],
                     {"sylow_order": 25, "elementary_abelian": True, "order": 48, "type": "SL2(3)*Z4"},
                     "paper", "He", "$SL_2(3)*Z_4$",
                     {"construction": "sylow_automizer", "prime": 5, "compare_with": "SL2(3)*Z4"}))
    out.append(claim("automizer-He.2", "QuotientOrderEquals", ["He", "He.2"], {"order": 96}, "derived",
                     "He", "$E_{5^2}$", {"construction": "sylow_automizer", "prime": 5}))
    out.append(claim("complete-M11", "SmallGroupComplete", ["M11"], {"order": 144, "complete": True},
                     "paper", "M11", "$M$ is complete", {"prime": 3}))
    out.append(claim("involutions-Co3", "InvolutionClassData", ["Co3"],
                     {"count": 2, "centralizer_orders": [2903040, 190080]}, "paper", "Co3",
                     "$M=2Sp_6(2)$"))
    out.append(claim("h1-A7", "H1Vanishes", [], {"dim_H1": 0}, "paper", "Mc", "$H^1(A_7,Q)=1$",
                     {"module": "A7_natural"}))
    out.append(claim("h1-Sp6-spin", "H1Vanishes", [], {"dim_H1": 0}, "paper", "Co2", "the spin module",
                     {"module": "Sp6_2_spin"}))
    out.append(claim("lemma4-A7", "Lemma4Vanishes", [], {"verdict": "vanishes", "agrees_with_h1": True},
                     "derived", "Lemma 4", "normalize each other",
                     {"module": "A7_natural", "element": "(1,2,3)"}))
    for g in ("M12", "M22", "M23", "M24"):
        out.append(claim(f"lemma3-{g}", "Lemma3Hypotheses", [g],
                         {"a": True, "b": True, "c": True, "d1": True, "e": True, "holds": True},
                         "paper", g, "condition (d1) holds"))
    for g, psi in (("HS", 22), ("Suz", 416)):
        out.append(claim(f"lemma3-{g}", "Lemma3Hypotheses", [g],
                         {"a": True, "b": True, "c": True, "e": True, "holds": True, "psi_length": psi},
                         "paper", g, "(d2)", {"psi_length": psi}))
    return out


def negative_controls() -> list[dict]:
    return [
        claim("neg-order-M11", "OrderEquals", ["M11"], 7921, "trivial", "M11", "sharply quadruply transitive",
              negative_control=True),
        claim("neg-subdegrees-HS", "SubdegreesEqual", ["HS"], [1, 21, 78], "trivial", "HS",
              "of orders $22$ and $77$", negative_control=True),
        claim("neg-fusion-M12", "FusedEp2ClassCount", ["M12"], 3, "trivial", "M12", "exactly two",
              {"prime": 3}, negative_control=True),
    ]


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    for name, claims in (("table1", table1()), ("negative_controls", negative_controls())):
        (OUT / f"{name}.json").write_text(json.dumps({"seed": 20240601, "claims": claims}, indent=1) + "\n")


if __name__ == "__main__":
    main()
