"""Integer inner loops: lattice scans, compositions, cone-shift scans.

Each kernel has a numba ``@njit`` version and a pure-numpy version with the
same contract.  The numba path is used when numba imports and the environment
variable ``TVAR_DISABLE_NUMBA`` is unset (or ``0``).  Inputs whose int64
products could overflow are routed to an exact Python-int path regardless.
"""
from __future__ import annotations

import itertools
import os

import numpy as np

try:  # pragma: no cover - exercised implicitly
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

_INT64_SAFE = 2**62


def numba_enabled() -> bool:
    flag = os.environ.get("TVAR_DISABLE_NUMBA", "").strip().lower()
    return HAVE_NUMBA and flag in ("", "0", "false", "no")


# ---------------------------------------------------------------------------
# halfspace scan: integer points x in [lo, hi] with A x >= b


def _scan_numpy(A, b, lo, hi):
    n = lo.shape[0]
    shape = tuple(int(h - l + 1) for l, h in zip(lo, hi))
    if any(s <= 0 for s in shape):
        return np.zeros((0, n), dtype=A.dtype)
    pts = np.indices(shape, dtype=A.dtype).reshape(n, -1).T + lo.astype(A.dtype)
    if A.shape[0] == 0:
        return pts
    mask = np.all(pts @ A.T >= b, axis=1)
    return pts[mask]


if HAVE_NUMBA:

    @njit(cache=True)
    def _scan_numba(A, b, lo, hi):  # pragma: no cover - compiled
        n = lo.shape[0]
        m = A.shape[0]
        total = 1
        for i in range(n):
            w = hi[i] - lo[i] + 1
            if w <= 0:
                return np.zeros((0, n), dtype=np.int64)
            total *= w
        keep = np.zeros(total, dtype=np.bool_)
        x = lo.copy()
        count = 0
        for k in range(total):
            ok = True
            for r in range(m):
                s = 0
                for j in range(n):
                    s += A[r, j] * x[j]
                if s < b[r]:
                    ok = False
                    break
            keep[k] = ok
            if ok:
                count += 1
            # odometer, last coordinate fastest (lexicographic)
            j = n - 1
            while j >= 0:
                x[j] += 1
                if x[j] <= hi[j]:
                    break
                x[j] = lo[j]
                j -= 1
        out = np.empty((count, n), dtype=np.int64)
        x = lo.copy()
        c = 0
        for k in range(total):
            if keep[k]:
                for j in range(n):
                    out[c, j] = x[j]
                c += 1
            j = n - 1
            while j >= 0:
                x[j] += 1
                if x[j] <= hi[j]:
                    break
                x[j] = lo[j]
                j -= 1
        return out


def _fits_int64(A, b, lo, hi) -> bool:
    span = max([abs(int(v)) for v in list(lo) + list(hi)] + [1])
    amax = max([abs(int(v)) for row in A for v in row] + [1])
    bmax = max([abs(int(v)) for v in b] + [1])
    n = max(len(lo), 1)
    return amax * span * n + bmax < _INT64_SAFE


def scan_halfspaces(A, b, lo, hi, backend: str | None = None) -> list[tuple[int, ...]]:
    """All integer ``x`` with ``lo <= x <= hi`` and ``A x >= b``, lexicographic."""
    n = len(lo)
    if n == 0:
        return [()] if all(bi <= 0 for bi in b) else []
    if not _fits_int64(A, b, lo, hi):
        A_o = np.array(A, dtype=object).reshape(len(A), n)
        b_o = np.array(b, dtype=object)
        pts = _scan_numpy(A_o, b_o, np.array(lo, dtype=object), np.array(hi, dtype=object))
        return [tuple(int(c) for c in p) for p in pts]
    A64 = np.array(A, dtype=np.int64).reshape(len(A), n)
    b64 = np.array(b, dtype=np.int64)
    lo64 = np.array(lo, dtype=np.int64)
    hi64 = np.array(hi, dtype=np.int64)
    backend = backend or ("numba" if numba_enabled() else "numpy")
    if backend == "numba":
        pts = _scan_numba(A64, b64, lo64, hi64)
    else:
        pts = _scan_numpy(A64, b64, lo64, hi64)
    return [tuple(int(c) for c in p) for p in pts]


# ---------------------------------------------------------------------------
# compositions: nonnegative y with sum(y) == total, lexicographically decreasing


def _compositions_numpy(total, parts):
    rows = []
    # stars and bars; bar positions in increasing order give decreasing y lex
    for bars in itertools.combinations(range(total + parts - 1), parts - 1):
        prev = -1
        row = []
        for bpos in bars:
            row.append(bpos - prev - 1)
            prev = bpos
        row.append(total + parts - 2 - prev)
        rows.append(row)
    arr = np.array(rows, dtype=np.int64).reshape(len(rows), parts)
    if len(arr):
        order = np.lexsort(arr.T[::-1])[::-1]
        arr = arr[order]
    return arr


if HAVE_NUMBA:

    @njit(cache=True)
    def _compositions_numba(total, parts):  # pragma: no cover - compiled
        # count = C(total + parts - 1, parts - 1)
        count = 1
        for i in range(1, parts):
            count = count * (total + i) // i
        out = np.zeros((count, parts), dtype=np.int64)
        y = np.zeros(parts, dtype=np.int64)
        y[0] = total
        for k in range(count):
            for j in range(parts):
                out[k, j] = y[j]
            # next in lexicographically decreasing order
            j = parts - 2
            while j >= 0 and y[j] == 0:
                j -= 1
            if j < 0:
                break
            rest = y[parts - 1]
            y[parts - 1] = 0
            y[j] -= 1
            y[j + 1] += 1 + rest
        return out


def compositions(total: int, parts: int, backend: str | None = None) -> np.ndarray:
    """Rows ``y >= 0`` with ``sum(y) == total``, in lexicographically decreasing order."""
    if parts <= 0:
        return np.zeros((1 if total == 0 else 0, 0), dtype=np.int64)
    if total < 0:
        return np.zeros((0, parts), dtype=np.int64)
    if parts == 1:
        return np.array([[total]], dtype=np.int64)
    backend = backend or ("numba" if numba_enabled() else "numpy")
    if backend == "numba":
        return _compositions_numba(int(total), int(parts))
    return _compositions_numpy(int(total), int(parts))


# ---------------------------------------------------------------------------
# cone-shift scan: compare "z interior" with "z - u in cone" on a cube


def _shift_mismatch_numpy(N, cands, radius):
    d = N.shape[1]
    side = 2 * radius + 1
    Z = np.indices((side,) * d, dtype=np.int64).reshape(d, -1).T - radius
    inner = np.all(Z @ N.T > 0, axis=1)
    out = np.zeros(cands.shape[0], dtype=np.int64)
    for i in range(cands.shape[0]):
        shifted = np.all((Z - cands[i]) @ N.T >= 0, axis=1)
        out[i] = int(np.count_nonzero(inner != shifted))
    return out


if HAVE_NUMBA:

    @njit(cache=True)
    def _shift_mismatch_numba(N, cands, radius):  # pragma: no cover - compiled
        k = N.shape[0]
        d = N.shape[1]
        side = 2 * radius + 1
        total = 1
        for _ in range(d):
            total *= side
        out = np.zeros(cands.shape[0], dtype=np.int64)
        z = np.empty(d, dtype=np.int64)
        for c in range(cands.shape[0]):
            for j in range(d):
                z[j] = -radius
            bad = 0
            for _t in range(total):
                inner = True
                shifted = True
                for r in range(k):
                    s = 0
                    t = 0
                    for j in range(d):
                        s += N[r, j] * z[j]
                        t += N[r, j] * (z[j] - cands[c, j])
                    if s <= 0:
                        inner = False
                    if t < 0:
                        shifted = False
                if inner != shifted:
                    bad += 1
                j = d - 1
                while j >= 0:
                    z[j] += 1
                    if z[j] <= radius:
                        break
                    z[j] = -radius
                    j -= 1
            out[c] = bad
        return out


def shift_mismatches(normals, candidates, radius: int, backend: str | None = None) -> list[int]:
    """For each candidate ``u``, count lattice points ``z`` of the cube of the given
    radius where ``z`` in the open cone disagrees with ``z - u`` in the closed cone.

    The cone is ``{z : n . z >= 0}`` over the rows ``n`` of ``normals``.
    """
    N = np.array(normals, dtype=np.int64)
    C = np.array(candidates, dtype=np.int64).reshape(len(candidates), N.shape[1])
    backend = backend or ("numba" if numba_enabled() else "numpy")
    if backend == "numba":
        res = _shift_mismatch_numba(N, C, int(radius))
    else:
        res = _shift_mismatch_numpy(N, C, int(radius))
    return [int(x) for x in res]
