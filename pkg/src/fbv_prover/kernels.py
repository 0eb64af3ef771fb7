"""Hot inner loops over relation matrices.

A relation matrix is a small square ``uint8`` array holding one bitmask
per ordered occurrence pair:

    LT = 1   row occurrence sequenced before column occurrence
    GT = 2   column occurrence sequenced before row occurrence
    PR = 4   par relation
    CP = 8   copar relation

Valid webs carry exactly one bit per off-diagonal cell and mirrored
cells agree; candidates may hold anything.

Two interchangeable backends implement the checks: numba ``@njit``
loops (default) and a pure-numpy vectorized fallback.  Selection is by
the ``FBV_PROVER_KERNELS`` environment variable (``numba`` or
``numpy``) or `set_backend`; ``benchmarks/bench_kernels.py`` compares
the two.  Both return identical witness arrays: index tuples of the
first violating occurrence combination, or all ``-1`` when the
condition holds.
"""

from __future__ import annotations

import os

import numpy as np

LT = np.uint8(1)
GT = np.uint8(2)
PR = np.uint8(4)
CP = np.uint8(8)

_NONE3 = np.full(3, -1, dtype=np.int64)
_NONE5 = np.full(5, -1, dtype=np.int64)
_NONE4 = np.full(4, -1, dtype=np.int64)


# ---------------------------------------------------------------------
# Loop bodies.  Plain Python here; the numba backend jits them verbatim.
# ---------------------------------------------------------------------

def _loop_s4(m):
    """First seq-transitivity failure (a, b, c): a<b, b<c but not a<c."""
    n = m.shape[0]
    out = np.full(3, -1, dtype=np.int64)
    for a in range(n):
        for b in range(n):
            if a == b or not (m[a, b] & 1):
                continue
            for c in range(n):
                if c == a or c == b:
                    continue
                if (m[b, c] & 1) and not (m[a, c] & 1):
                    out[0], out[1], out[2] = a, b, c
                    return out
    return out


def _loop_s6(m):
    """First triangle with three pairwise different relation kinds."""
    # kind per cell: 0 = seq (either direction), 1 = par, 2 = copar, 3 = none
    n = m.shape[0]
    out = np.full(3, -1, dtype=np.int64)
    for a in range(n):
        for b in range(a + 1, n):
            v = m[a, b]
            k1 = 0 if v & 3 else (1 if v & 4 else (2 if v & 8 else 3))
            if k1 == 3:
                continue
            for c in range(b + 1, n):
                v = m[b, c]
                k2 = 0 if v & 3 else (1 if v & 4 else (2 if v & 8 else 3))
                v = m[c, a]
                k3 = 0 if v & 3 else (1 if v & 4 else (2 if v & 8 else 3))
                if k2 == 3 or k3 == 3:
                    continue
                if k1 != k2 and k2 != k3 and k3 != k1:
                    out[0], out[1], out[2] = a, b, c
                    return out
    return out


def _loop_s7(m):
    """First square failure: (form, a, b, c, d); form 0 = seq, 1 = par,
    2 = copar.  Forms are scanned in that order, witnesses in
    lexicographic quadruple order within a form."""
    n = m.shape[0]
    out = np.full(5, -1, dtype=np.int64)
    for a in range(n):
        for b in range(n):
            if b == a:
                continue
            for c in range(n):
                if c == a or c == b:
                    continue
                for d in range(n):
                    if d == a or d == b or d == c:
                        continue
                    if (m[a, b] & 1) and (m[a, d] & 1) and (m[c, d] & 1):
                        if not ((m[a, c] & 1) or (m[b, c] & 1)
                                or (m[b, d] & 1) or (m[c, a] & 1)
                                or (m[c, b] & 1) or (m[d, b] & 1)):
                            out[0], out[1], out[2], out[3], out[4] = 0, a, b, c, d
                            return out
    for bit, form in ((4, 1), (8, 2)):
        for a in range(n):
            for b in range(n):
                if b == a or not (m[a, b] & bit):
                    continue
                for c in range(n):
                    if c == a or c == b:
                        continue
                    for d in range(n):
                        if d == a or d == b or d == c:
                            continue
                        if (m[a, d] & bit) and (m[c, d] & bit):
                            if not ((m[a, c] & bit) or (m[b, c] & bit)
                                    or (m[b, d] & bit)):
                                out[0], out[1], out[2] = form, a, b
                                out[3], out[4] = c, d
                                return out
    return out


def _loop_ainc(m, i, j):
    """Count occurrences related to i and j by different kinds (par vs
    copar).  Counting form of the incoherence number; callers guarantee
    a flat web (no seq bits)."""
    n = m.shape[0]
    count = 0
    for x in range(n):
        if x == i or x == j:
            continue
        ri = 1 if (m[i, x] & 4) else 2
        rj = 1 if (m[j, x] & 4) else 2
        if ri != rj:
            count += 1
    return count


def _loop_c2(m, pairs):
    """First pair of dual pairs matching the forbidden square: both
    diagonals copar, all four sides par.  ``pairs[k] = (pos, neg)``
    occurrence indices of one dual name pair.  Returns (a, abar, q,
    qbar) or -1s."""
    p = pairs.shape[0]
    out = np.full(4, -1, dtype=np.int64)
    for u in range(p):
        a, ab = pairs[u, 0], pairs[u, 1]
        for v in range(u + 1, p):
            for flip in range(2):
                q = pairs[v, flip]
                qb = pairs[v, 1 - flip]
                if ((m[a, q] & 8) and (m[ab, qb] & 8)
                        and (m[a, ab] & 4) and (m[q, qb] & 4)
                        and (m[a, qb] & 4) and (m[ab, q] & 4)):
                    out[0], out[1], out[2], out[3] = a, ab, q, qb
                    return out
    return out


# ---------------------------------------------------------------------
# Pure-numpy backend.
# ---------------------------------------------------------------------

def _np_s4(m):
    lt = (m & 1) > 0
    np.fill_diagonal(lt, False)
    n = lt.shape[0]
    # witness order must match the loop backend: (a, b, c) lexicographic
    for a in range(n):
        for b in np.flatnonzero(lt[a]):
            bad = lt[b] & ~lt[a]
            bad[a] = bad[b] = False
            cs = np.flatnonzero(bad)
            if cs.size:
                return np.array([a, b, cs[0]], dtype=np.int64)
    return _NONE3.copy()


def _np_s6(m):
    kinds = np.full(m.shape, 3, dtype=np.int64)
    kinds[(m & 8) > 0] = 2
    kinds[(m & 4) > 0] = 1
    kinds[(m & 3) > 0] = 0
    n = m.shape[0]
    idx = np.arange(n)
    k_ab = kinds[:, :, None]
    k_bc = kinds[None, :, :]
    k_ca = kinds.T[:, None, :]
    present = (k_ab != 3) & (k_bc != 3) & (k_ca != 3)
    distinct = (k_ab != k_bc) & (k_bc != k_ca) & (k_ca != k_ab)
    bad = present & distinct
    bad &= (idx[:, None, None] != idx[None, :, None])
    bad &= (idx[None, :, None] != idx[None, None, :])
    bad &= (idx[:, None, None] != idx[None, None, :])
    hits = np.argwhere(bad)
    if hits.size:
        return hits[0].astype(np.int64)
    return _NONE3.copy()


def _np_s7(m):
    n = m.shape[0]
    idx = np.arange(n)
    ne = idx[:, None] != idx[None, :]
    distinct = (ne[:, :, None, None] & ne[:, None, :, None]
                & ne[:, None, None, :] & ne[None, :, :, None]
                & ne[None, :, None, :] & ne[None, None, :, :])
    for form, bit in ((0, 1), (1, 4), (2, 8)):
        r = (m & bit) > 0
        # hyp[a,b,c,d] = r[a,b] & r[a,d] & r[c,d]
        hyp = (r[:, :, None, None] & r[:, None, None, :]
               & r[None, None, :, :])
        if form == 0:
            concl = (r[:, None, :, None] | r[None, :, :, None]
                     | r[None, :, None, :] | r.T[:, None, :, None]
                     | r.T[None, :, :, None] | r.T[None, :, None, :])
        else:
            concl = (r[:, None, :, None] | r[None, :, :, None]
                     | r[None, :, None, :])
        bad = hyp & ~concl & distinct
        hits = np.argwhere(bad)
        if hits.size:
            a, b, c, d = hits[0]
            return np.array([form, a, b, c, d], dtype=np.int64)
    return _NONE5.copy()


def _np_ainc(m, i, j):
    pr_i = (m[i] & 4) > 0
    pr_j = (m[j] & 4) > 0
    mism = pr_i != pr_j
    mism[i] = mism[j] = False
    return int(np.count_nonzero(mism))


def _np_c2(m, pairs):
    p = pairs.shape[0]
    for u in range(p):
        a, ab = int(pairs[u, 0]), int(pairs[u, 1])
        for v in range(u + 1, p):
            for flip in range(2):
                q = int(pairs[v, flip])
                qb = int(pairs[v, 1 - flip])
                if ((m[a, q] & 8) and (m[ab, qb] & 8)
                        and (m[a, ab] & 4) and (m[q, qb] & 4)
                        and (m[a, qb] & 4) and (m[ab, q] & 4)):
                    return np.array([a, ab, q, qb], dtype=np.int64)
    return _NONE4.copy()


_NUMPY_BACKEND = {
    "s4": _np_s4,
    "s6": _np_s6,
    "s7": _np_s7,
    "ainc": _np_ainc,
    "c2": _np_c2,
}

_BACKENDS = {"numpy": _NUMPY_BACKEND}

try:
    from numba import njit

    _BACKENDS["numba"] = {
        "s4": njit(cache=True)(_loop_s4),
        "s6": njit(cache=True)(_loop_s6),
        "s7": njit(cache=True)(_loop_s7),
        "ainc": njit(cache=True)(_loop_ainc),
        "c2": njit(cache=True)(_loop_c2),
    }
    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    _HAVE_NUMBA = False


def _default_backend() -> str:
    env = os.environ.get("FBV_PROVER_KERNELS", "").strip().lower()
    if env in _BACKENDS:
        return env
    if env and env not in _BACKENDS:
        raise ValueError(f"FBV_PROVER_KERNELS must be one of "
                         f"{sorted(_BACKENDS)}, got {env!r}")
    return "numba" if _HAVE_NUMBA else "numpy"


_active = _default_backend()


def active_backend() -> str:
    return _active


def set_backend(name: str) -> None:
    if name not in _BACKENDS:
        raise ValueError(f"unknown kernel backend {name!r}; "
                         f"available: {sorted(_BACKENDS)}")
    global _active
    _active = name


def s4_witness(m: np.ndarray) -> np.ndarray:
    return _BACKENDS[_active]["s4"](m)


def s6_witness(m: np.ndarray) -> np.ndarray:
    return _BACKENDS[_active]["s6"](m)


def s7_witness(m: np.ndarray) -> np.ndarray:
    return _BACKENDS[_active]["s7"](m)


def ainc_count(m: np.ndarray, i: int, j: int) -> int:
    return int(_BACKENDS[_active]["ainc"](m, i, j))


def c2_witness(m: np.ndarray, pairs: np.ndarray) -> np.ndarray:
    return _BACKENDS[_active]["c2"](m, pairs)
