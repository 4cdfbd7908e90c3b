"""Naive pure-Python reference for the augmentation pass.

Deliberately independent of the package internals: plain lists, explicit
loops, math-module arithmetic, and a hand-rolled percentile. Used by the
test suite as the second route for cell-for-cell comparison.
"""

import math

ABSTAIN = -1
COSINE_SNAP = 1e-12


def ref_distance(kind, x, y, p=3.0, inv_cov=None):
    n = len(x)
    if kind == "euclidean":
        return math.sqrt(sum((x[t] - y[t]) ** 2 for t in range(n)))
    if kind == "cosine":
        nx = math.sqrt(sum(v * v for v in x))
        ny = math.sqrt(sum(v * v for v in y))
        if nx == 0.0 and ny == 0.0:
            return 0.0
        if nx == 0.0 or ny == 0.0:
            return 1.0
        d = 1.0 - sum(x[t] * y[t] for t in range(n)) / (nx * ny)
        return d if d > COSINE_SNAP else 0.0
    if kind == "chebyshev":
        return max((abs(x[t] - y[t]) for t in range(n)), default=0.0)
    if kind == "hamming":
        if n == 0:
            return 0.0
        return sum(1 for t in range(n) if x[t] != y[t]) / n
    if kind == "jaccard":
        union = inter = 0
        for t in range(n):
            if x[t] != 0 or y[t] != 0:
                union += 1
                if x[t] != 0 and y[t] != 0:
                    inter += 1
        return 0.0 if union == 0 else 1.0 - inter / union
    if kind == "mahalanobis":
        diff = [x[t] - y[t] for t in range(n)]
        quad = sum(diff[a] * inv_cov[a][b] * diff[b]
                   for a in range(n) for b in range(n))
        return math.sqrt(quad) if quad > 0.0 else 0.0
    if kind == "minkowski":
        return sum(abs(x[t] - y[t]) ** p for t in range(n)) ** (1.0 / p)
    raise ValueError(kind)


def ref_percentile(values, q):
    """Linear interpolation between closest ranks, q in [0, 100]."""
    ordered = sorted(values)
    if len(ordered) == 1:
        return ordered[0]
    pos = q / 100.0 * (len(ordered) - 1)
    lo = int(math.floor(pos))
    hi = min(lo + 1, len(ordered) - 1)
    frac = pos - lo
    return ordered[lo] + frac * (ordered[hi] - ordered[lo])


def ref_stats(labels):
    k = len(labels)
    m = len(labels[0])
    coverage, overlaps, conflicts = [], [], []
    for l in range(m):
        cov = ov = cf = 0
        for i in range(k):
            if labels[i][l] == ABSTAIN:
                continue
            cov += 1
            others = [labels[i][j] for j in range(m)
                      if j != l and labels[i][j] != ABSTAIN]
            if others:
                ov += 1
            if any(o != labels[i][l] for o in others):
                cf += 1
        coverage.append(cov / k)
        overlaps.append(ov / k)
        conflicts.append(cf / k)
    return coverage, overlaps, conflicts


def ref_effects(points, labels, kind, alpha, beta, eps_d, p=3.0, inv_cov=None):
    """Triple loop over (LF, abstain row, labeled row) with a pair cache."""
    k = len(points)
    m = len(labels[0])
    distances = {}
    effects = [[0.0] * m for _ in range(k)]
    zero_signs = [[0.0] * m for _ in range(k)]
    dmin = None
    any_zero = False
    for l in range(m):
        for i in range(k):
            if labels[i][l] != ABSTAIN:
                continue
            for j in range(k):
                if j == i or labels[j][l] == ABSTAIN:
                    continue
                key = (i, j) if i < j else (j, i)
                if key not in distances:
                    distances[key] = ref_distance(kind, points[i], points[j],
                                                  p=p, inv_cov=inv_cov)
                d = distances[key]
                if d > 0.0 and (dmin is None or d < dmin):
                    dmin = d
                if d >= eps_d:
                    continue
                sign = 1.0 if labels[j][l] == 1 else -1.0
                if d == 0.0:
                    zero_signs[i][l] += sign
                    any_zero = True
                else:
                    effects[i][l] += sign * (beta / d ** alpha)
    if any_zero:
        cap = beta / dmin ** alpha if dmin is not None else beta
        for i in range(k):
            for l in range(m):
                effects[i][l] += zero_signs[i][l] * cap
    return effects, dmin


def ref_boundaries(effects, labels, h, scope="global",
                   population="abstain_only"):
    def bounds(values):
        if not values:
            return (0.0, 0.0)
        q1 = ref_percentile(values, 25.0)
        q3 = ref_percentile(values, 75.0)
        iqr = q3 - q1
        return (q1 - iqr * h, q3 + iqr * h)

    k = len(effects)
    m = len(effects[0])
    if scope == "global":
        vals = [effects[i][l] for i in range(k) for l in range(m)
                if population == "all_cells" or labels[i][l] == ABSTAIN]
        return bounds(vals)
    out = []
    for l in range(m):
        vals = [effects[i][l] for i in range(k)
                if population == "all_cells" or labels[i][l] == ABSTAIN]
        out.append(bounds(vals))
    return out


def ref_augment(labels, effects, bounds_by_lf):
    k = len(labels)
    m = len(labels[0])
    out = [row[:] for row in labels]
    for l in range(m):
        b_neg, b_pos = bounds_by_lf[l]
        for i in range(k):
            if labels[i][l] != ABSTAIN:
                continue
            if effects[i][l] < b_neg:
                out[i][l] = 0
            if effects[i][l] > b_pos:
                out[i][l] = 1
    return out


def ref_auto_h(labels, xi):
    coverage, overlaps, conflicts = ref_stats(labels)
    return xi * sum(coverage) * sum(overlaps) * sum(conflicts)


def ref_reinforce(points, labels, kind="euclidean", alpha=1.0, beta=1.0,
                  eps_d=math.inf, mode="fixed_epsilon", epsilon=None,
                  h_iqr=None, xi=0.35, scope="global",
                  population="abstain_only", p=3.0, inv_cov=None):
    """Full reference pass; returns (effects, bounds per LF, augmented)."""
    m = len(labels[0])
    effects, _ = ref_effects(points, labels, kind, alpha, beta, eps_d,
                             p=p, inv_cov=inv_cov)
    if mode == "fixed_epsilon":
        bounds = [(-epsilon, epsilon)] * m
    else:
        h = h_iqr if mode == "iqr_factor" else ref_auto_h(labels, xi)
        raw = ref_boundaries(effects, labels, h, scope=scope,
                             population=population)
        bounds = raw if isinstance(raw, list) else [raw] * m
    return effects, bounds, ref_augment(labels, effects, bounds)


def ref_majority(labels):
    out = []
    for row in labels:
        ones = sum(1 for v in row if v == 1)
        zeros = sum(1 for v in row if v == 0)
        out.append(1 if ones > zeros else 0 if zeros > ones else ABSTAIN)
    return out
