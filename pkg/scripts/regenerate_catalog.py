"""Rebuild the bundled catalog configs, including their recorded expectations.

Run from the repository root after changing a case definition:

    python scripts/regenerate_catalog.py

Every regenerated case is verified before it is written.
"""

import json
import sys
import time
from pathlib import Path

from qkz import blocks as qb
from qkz.cli import CaseConfig, run_case, transport_images
from qkz.report import vector_witness

CATALOG = Path(__file__).resolve().parents[1] / "src" / "qkz" / "catalog"

BASE = ["yangian-relations", "rmatrix-axioms", "compatibility", "e-forms", "invariance",
        "permutation", "e-relations", "remark", "proof-steps", "blocks"]
V2, V3 = [1, 0], [1, 0, 0]

CASES = [
    ("case_A2", "gl(2), two vector representations, p=-2, l=1 (k=1)",
     2, [V2] * 2, ["0", "7"], "-2", 1, BASE + ["jordan-identity", "hilbert"]),
    ("case_A3", "gl(2), three vector representations, p=-3, l=1 (k=1)",
     2, [V2] * 3, ["0", "5", "11"], "-3", 1, BASE),
    ("case_A4_k1", "gl(2), four vector representations, p=-2, l=2 (k=1)",
     2, [V2] * 4, ["0", "13", "29", "47"], "-2", 2, BASE),
    ("case_A4_k2", "gl(2), four vector representations, p=-3, l=2 (k=2)",
     2, [V2] * 4, ["0", "13", "29", "47"], "-3", 2, BASE),
    ("case_A2_sym", "gl(2), (2,0) x (1,0), p=-3, l=1 (k=1)",
     2, [[2, 0], V2], ["1/2", "9"], "-3", 1, BASE),
    ("case_A3_sym", "gl(2), (2,0) x (1,0) x (1,0), p=-4, l=1",
     2, [[2, 0], V2, V2], ["0", "13", "31"], "-4", 1, BASE),
    ("case_B3", "gl(3), vector x vector x (1,1,0), p=-4, l=1 (k=1)",
     3, [V3, V3, [1, 1, 0]], ["0", "13", "31"], "-4", 1, BASE),
    ("case_B3_sym", "gl(3), (2,0,0) x vector x vector, p=-5, l=1 (k=1)",
     3, [[2, 0, 0], V3, V3], ["0", "13", "31"], "-5", 1, BASE),
    ("case_B4", "gl(3), four vector representations, p=-5, l=1 (k=1)",
     3, [V3] * 4, ["0", "13", "31", "53"], "-5", 1, BASE),
    ("case_B2_adj", "gl(3), vector x adjoint, p=-4, l=1 (k=1)",
     3, [V3, [2, 1, 0]], ["0", "11"], "-4", 1, BASE),
]


def main():
    ok = True
    for name, desc, n, factors, z, p, l, checks in CASES:
        data = {"case": name, "description": desc, "n_rank": n, "factors": factors,
                "z": z, "p": p, "l": l, "checks": checks}
        ctx = CaseConfig.from_json(data).context()
        blocks = qb.conformal_blocks(ctx, l)
        data["expected"] = {
            "k": qb.resonance_k(ctx, l).k,
            "basis": blocks.to_json()["basis"],
            "transport": [vector_witness(v) for v in transport_images(ctx, l)],
        }
        start = time.perf_counter()
        report = run_case(CaseConfig.from_json(data))
        print(f"{name}: {'ok' if report.passed else 'FAILED'} ({len(report)} checks, "
              f"{time.perf_counter() - start:.1f}s, dim C = {blocks.dim})")
        if not report.passed:
            ok = False
            continue
        (CATALOG / f"{name}.json").write_text(json.dumps(data, indent=2) + "\n")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
