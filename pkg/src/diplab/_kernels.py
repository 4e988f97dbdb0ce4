"""Hot modular-arithmetic kernels over int64 arrays.

Each kernel has a numba ``@njit`` version and a pure-numpy version with the
same signature.  The numba path is used when numba imports cleanly and the
environment variable ``DIPLAB_PURE_NUMPY`` is unset (or ``0``).

All inputs are canonical residues in ``[0, q)`` with ``q < 2**31``, so any
product of two residues fits in a signed 64-bit intermediate.
"""

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba ships with the dev env
    HAVE_NUMBA = False

PURE_NUMPY = os.environ.get("DIPLAB_PURE_NUMPY", "0") not in ("", "0")


# ---------------------------------------------------------------------------
# pure-numpy path
# ---------------------------------------------------------------------------


def inner_mod_np(a, b, q):
    # each reduced product is < 2**31, so the row sum cannot overflow int64
    return int(np.sum((a * b) % q) % q)


def matvec_mod_np(x, m, q):
    """Row vector ``x`` (k,) times matrix ``m`` (k, n), reduced mod ``q``."""
    return np.sum((x[:, None] * m) % q, axis=0) % q


def inv_mod_np(a, q):
    return pow(int(a), -1, int(q))


def rref_mod_np(m, q):
    """Reduce ``m`` in place to reduced row echelon form mod ``q``.

    Pivot is the first nonzero entry found scanning down the current column.
    Returns the pivot column indices as an int64 array (its length is the rank).
    """
    rows, cols = m.shape
    pivots = np.empty(min(rows, cols), dtype=np.int64)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        p = r + nz[0]
        if p != r:
            m[[r, p]] = m[[p, r]]
        m[r] = (m[r] * inv_mod_np(m[r, c], q)) % q
        f = m[:, c].copy()
        f[r] = 0
        m -= (f[:, None] * m[r][None, :]) % q
        m %= q
        pivots[r] = c
        r += 1
    return pivots[:r]


# ---------------------------------------------------------------------------
# numba path
# ---------------------------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True, nogil=True)
    def inner_mod_nb(a, b, q):
        acc = 0
        for i in range(a.shape[0]):
            acc = (acc + a[i] * b[i]) % q
        return acc

    @njit(cache=True, nogil=True)
    def matvec_mod_nb(x, m, q):
        k, n = m.shape
        out = np.zeros(n, dtype=np.int64)
        for i in range(k):
            xi = x[i]
            if xi == 0:
                continue
            for j in range(n):
                out[j] = (out[j] + xi * m[i, j]) % q
        return out

    @njit(cache=True, nogil=True)
    def inv_mod_nb(a, q):
        # extended Euclid; caller guarantees a != 0 mod q
        t, new_t = 0, 1
        r, new_r = q, a % q
        while new_r != 0:
            quo = r // new_r
            t, new_t = new_t, t - quo * new_t
            r, new_r = new_r, r - quo * new_r
        return t % q

    @njit(cache=True, nogil=True)
    def rref_mod_nb(m, q):
        rows, cols = m.shape
        pivots = np.empty(min(rows, cols), dtype=np.int64)
        r = 0
        for c in range(cols):
            if r == rows:
                break
            p = -1
            for i in range(r, rows):
                if m[i, c] != 0:
                    p = i
                    break
            if p < 0:
                continue
            if p != r:
                for j in range(cols):
                    tmp = m[r, j]
                    m[r, j] = m[p, j]
                    m[p, j] = tmp
            inv = inv_mod_nb(m[r, c], q)
            for j in range(cols):
                m[r, j] = (m[r, j] * inv) % q
            for i in range(rows):
                if i == r:
                    continue
                f = m[i, c]
                if f == 0:
                    continue
                for j in range(cols):
                    m[i, j] = (m[i, j] - f * m[r, j]) % q
            pivots[r] = c
            r += 1
        return pivots[:r]


else:  # pragma: no cover
    inner_mod_nb = matvec_mod_nb = inv_mod_nb = rref_mod_nb = None


USE_NUMBA = HAVE_NUMBA and not PURE_NUMPY
BACKEND = "numba" if USE_NUMBA else "numpy"

if USE_NUMBA:
    inner_mod = inner_mod_nb
    matvec_mod = matvec_mod_nb
    rref_mod = rref_mod_nb
else:
    inner_mod = inner_mod_np
    matvec_mod = matvec_mod_np
    rref_mod = rref_mod_np


def backends():
    """Map backend name to its kernel table; used by tests and the benchmark."""
    table = {
        "numpy": {
            "inner_mod": inner_mod_np,
            "matvec_mod": matvec_mod_np,
            "rref_mod": rref_mod_np,
        }
    }
    if HAVE_NUMBA:
        table["numba"] = {
            "inner_mod": inner_mod_nb,
            "matvec_mod": matvec_mod_nb,
            "rref_mod": rref_mod_nb,
        }
    return table
