#!/usr/bin/env python3
"""Write fixtures/golden_trace.json from a by-hand worked example.

Six 1-D points and two LFs, traced with exact fraction arithmetic and no
package code, so the suite can check the full augmentation pass against
an independently derived answer. Every term below is written out
literally; change nothing here without redoing the derivation on paper.

Points (single feature): 0, 0.1, 0.25, 0.5, 0.8, 1.0
LF A "band_low_high":  f > 0.75 -> 1 ; f < 0.15 -> 0 ; else abstain
LF B "upper_half":     f > 0.45 -> 1 ; else abstain

Matrix (rows = points, cols = [A, B]):
    x0 0.00:  0  -1
    x1 0.10:  0  -1
    x2 0.25: -1  -1
    x3 0.50: -1   1
    x4 0.80:  1   1
    x5 1.00:  1   1
"""

import json
from fractions import Fraction as F
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "fixtures" / "golden_trace.json"

POINTS = [0.0, 0.1, 0.25, 0.5, 0.8, 1.0]
MATRIX = [[0, -1], [0, -1], [-1, -1], [-1, 1], [1, 1], [1, 1]]

# Stats by enumeration (k = 6):
#   A labels rows {0,1,4,5}; B labels rows {3,4,5}
#   both label rows {4,5}; labels agree there, so no conflicts anywhere.
STATS = {
    "coverage": [F(4, 6), F(3, 6)],
    "overlaps": [F(2, 6), F(2, 6)],
    "conflicts": [F(0), F(0)],
}

# Effects with alpha = beta = 1, eps_d = inf, euclidean distance |xi - xj|.
# Column A, abstain row 2 (x = 0.25); contributors rows 0, 1 (label 0)
# and 4, 5 (label 1):
E2A = -F(1) / F(1, 4) - F(1) / F(3, 20) + F(1) / F(11, 20) + F(1) / F(3, 4)
# = -4 - 20/3 + 20/11 + 4/3 = -248/33
assert E2A == F(-248, 33)
# Column A, abstain row 3 (x = 0.5):
E3A = -F(1) / F(1, 2) - F(1) / F(2, 5) + F(1) / F(3, 10) + F(1) / F(1, 2)
# = -2 - 5/2 + 10/3 + 2 = 5/6
assert E3A == F(5, 6)
# Column B, abstain rows 0, 1, 2; contributors rows 3, 4, 5 (all label 1):
E0B = F(1) / F(1, 2) + F(1) / F(4, 5) + F(1) / F(1)     # = 17/4
E1B = F(1) / F(2, 5) + F(1) / F(7, 10) + F(1) / F(9, 10)  # = 635/126
E2B = F(1) / F(1, 4) + F(1) / F(11, 20) + F(1) / F(3, 4)  # = 236/33
assert (E0B, E1B, E2B) == (F(17, 4), F(635, 126), F(236, 33))

EFFECTS = [
    [F(0), E0B],
    [F(0), E1B],
    [E2A, E2B],
    [E3A, F(0)],
    [F(0), F(0)],
    [F(0), F(0)],
]

# Abstain-cell population, sorted:  E2A < E3A < E0B < E1B < E2B.
# Five values, so linear-interpolation quartiles land on elements 1 and 3.
Q1, Q3 = E3A, E1B
IQR = Q3 - Q1
assert IQR == F(265, 63)

# --- variant 1: iqr_factor with h = 1/2 (global, abstain-only) ----------
B_NEG_H = Q1 - IQR * F(1, 2)   # = -80/63
B_POS_H = Q3 + IQR * F(1, 2)   # = 50/7
assert (B_NEG_H, B_POS_H) == (F(-80, 63), F(50, 7))
# Fires: E2A < b_neg -> cell (2, A) = 0;  E2B > b_pos (236/33 - 50/7 =
# 2/231 > 0) -> cell (2, B) = 1. E3A, E0B, E1B stay inside the band.
AUG_H = [[0, -1], [0, -1], [0, 1], [-1, 1], [1, 1], [1, 1]]

# --- variant 2: fixed epsilon = 2 ---------------------------------------
# Fires wherever |effect| > 2: cells (2,A)->0, (0,B)->1, (1,B)->1, (2,B)->1.
AUG_EPS = [[0, 1], [0, 1], [0, 1], [-1, 1], [1, 1], [1, 1]]

# --- variant 3: auto_iqr with xi = 0.35 ----------------------------------
# h = 0.35 * (7/6) * (2/3) * 0 = 0, so the boundaries are the quartiles
# themselves. E3A equals Q1 and E1B equals Q3; strict comparisons leave
# both abstaining. Fires: (2,A)->0 and (2,B)->1, as in variant 1.
H_AUTO = F(35, 100) * (STATS["coverage"][0] + STATS["coverage"][1]) \
    * (STATS["overlaps"][0] + STATS["overlaps"][1]) \
    * (STATS["conflicts"][0] + STATS["conflicts"][1])
assert H_AUTO == 0
AUG_AUTO = AUG_H

# Majority vote per row: pre = [0, 0, -1, 1, 1, 1] -> 5 labeled points.
# Variant 1/3 turn row 2 into a (0, 1) tie -> still 5. Variant 2 also
# ties rows 0 and 1 -> 3.
LABELED_PRE = 5


def flt(x):
    return float(x)


def main():
    trace = {
        "points": [[p] for p in POINTS],
        "lf_names": ["band_low_high", "upper_half"],
        "matrix_pre": MATRIX,
        "stats_pre": {key: [flt(v) for v in vals] for key, vals in STATS.items()},
        "effects": [[flt(v) for v in row] for row in EFFECTS],
        "quartiles": {"q1": flt(Q1), "q3": flt(Q3), "iqr": flt(IQR)},
        "labeled_pre": LABELED_PRE,
        "variants": {
            "iqr_h_0.5": {
                "mode": "iqr_factor", "h_iqr": 0.5,
                "boundaries": [flt(B_NEG_H), flt(B_POS_H)],
                "augmented": AUG_H, "augmented_cells": 2, "labeled_post": 5,
            },
            "fixed_eps_2": {
                "mode": "fixed_epsilon", "epsilon": 2.0,
                "boundaries": [-2.0, 2.0],
                "augmented": AUG_EPS, "augmented_cells": 4, "labeled_post": 3,
            },
            "auto_xi_0.35": {
                "mode": "auto_iqr", "xi": 0.35, "h_iqr": 0.0,
                "boundaries": [flt(Q1), flt(Q3)],
                "augmented": AUG_AUTO, "augmented_cells": 2, "labeled_post": 5,
            },
        },
    }
    OUT.write_text(json.dumps(trace, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
