# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled gravitation kernel.

Walks abstain cells LF by LF, pulling each toward the points that LF
labeled, with distances computed on demand into a symmetric cache (one
computation per unordered pair). Semantics match the NumPy backend in
``reinforce`` and are documented there: strict eps_d cutoff, duplicate
pairs capped at beta / d_min**alpha, cosine snap below 1e-12.
"""

import numpy as np

from libc.math cimport fabs, pow, sqrt, INFINITY

DEF COSINE_SNAP = 1e-12

# Metric codes (must match gravlabel.distances.METRIC_CODES).
DEF M_EUCLIDEAN = 0
DEF M_COSINE = 1
DEF M_CHEBYSHEV = 2
DEF M_HAMMING = 3
DEF M_JACCARD = 4
DEF M_MAHALANOBIS = 5
DEF M_MINKOWSKI = 6


cdef double _pair_distance(const double[:, ::1] X, Py_ssize_t i, Py_ssize_t j,
                           int metric, double p, const double[:, ::1] inv_cov,
                           const double[::1] norms) noexcept nogil:
    cdef Py_ssize_t n = X.shape[1]
    cdef Py_ssize_t a, b
    cdef double acc = 0.0, diff, dot, d, quad
    cdef Py_ssize_t inter, union_

    if metric == M_EUCLIDEAN:
        for a in range(n):
            diff = X[i, a] - X[j, a]
            acc += diff * diff
        return sqrt(acc)

    if metric == M_COSINE:
        if norms[i] == 0.0 and norms[j] == 0.0:
            return 0.0
        if norms[i] == 0.0 or norms[j] == 0.0:
            return 1.0
        dot = 0.0
        for a in range(n):
            dot += X[i, a] * X[j, a]
        d = 1.0 - dot / (norms[i] * norms[j])
        if d <= COSINE_SNAP:
            return 0.0
        return d

    if metric == M_CHEBYSHEV:
        for a in range(n):
            diff = fabs(X[i, a] - X[j, a])
            if diff > acc:
                acc = diff
        return acc

    if metric == M_HAMMING:
        if n == 0:
            return 0.0
        inter = 0
        for a in range(n):
            if X[i, a] != X[j, a]:
                inter += 1
        return <double>inter / <double>n

    if metric == M_JACCARD:
        inter = 0
        union_ = 0
        for a in range(n):
            if X[i, a] != 0.0 or X[j, a] != 0.0:
                union_ += 1
                if X[i, a] != 0.0 and X[j, a] != 0.0:
                    inter += 1
        if union_ == 0:
            return 0.0
        return 1.0 - <double>inter / <double>union_

    if metric == M_MAHALANOBIS:
        quad = 0.0
        for a in range(n):
            diff = 0.0
            for b in range(n):
                diff += inv_cov[a, b] * (X[i, b] - X[j, b])
            quad += (X[i, a] - X[j, a]) * diff
        if quad < 0.0:
            quad = 0.0
        return sqrt(quad)

    # Minkowski of order p.
    for a in range(n):
        acc += pow(fabs(X[i, a] - X[j, a]), p)
    return pow(acc, 1.0 / p)


def aggregate(double[:, ::1] X, const signed char[:, ::1] labels,
              int metric, double p, inv_cov, double alpha, double beta,
              double eps_d):
    """Aggregated effects for every abstain cell.

    Returns (effects array, min nonzero distance or None, number of
    distance computations).
    """
    cdef Py_ssize_t k = X.shape[0]
    cdef Py_ssize_t m = labels.shape[1]
    cdef Py_ssize_t i, j, l

    effects_nd = np.zeros((k, m), dtype=np.float64)
    zsum_nd = np.zeros((k, m), dtype=np.float64)
    cache_nd = np.full((k, k), -1.0, dtype=np.float64)
    cdef double[:, ::1] effects = effects_nd
    cdef double[:, ::1] zsum = zsum_nd
    cdef double[:, ::1] cache = cache_nd

    cdef const double[:, ::1] ic
    if inv_cov is None:
        ic = np.zeros((1, 1), dtype=np.float64)
    else:
        ic = inv_cov

    norms_nd = np.sqrt(np.einsum("ij,ij->i", X, X)) if metric == M_COSINE \
        else np.zeros(k, dtype=np.float64)
    cdef const double[::1] norms = np.ascontiguousarray(norms_nd,
                                                        dtype=np.float64)

    cdef double dmin = INFINITY
    cdef double d, sign, cap
    cdef bint any_zero = False
    cdef long long computations = 0

    with nogil:
        for l in range(m):
            for i in range(k):
                if labels[i, l] != -1:
                    continue
                for j in range(k):
                    if j == i or labels[j, l] == -1:
                        continue
                    d = cache[i, j]
                    if d < 0.0:
                        d = _pair_distance(X, i, j, metric, p, ic, norms)
                        cache[i, j] = d
                        cache[j, i] = d
                        computations += 1
                    if d > 0.0 and d < dmin:
                        dmin = d
                    if d >= eps_d:
                        continue
                    sign = 1.0 if labels[j, l] == 1 else -1.0
                    if d == 0.0:
                        zsum[i, l] += sign
                        any_zero = True
                    else:
                        effects[i, l] += sign * (beta / pow(d, alpha))

    if any_zero:
        cap = beta / pow(dmin, alpha) if dmin != INFINITY else beta
        effects_nd += zsum_nd * cap
    return effects_nd, (float(dmin) if dmin != INFINITY else None), computations
