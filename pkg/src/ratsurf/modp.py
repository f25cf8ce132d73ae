"""Dense Gaussian elimination over a prime field."""

from __future__ import annotations

import numpy as np

from .errors import InvalidInputError

# Largest prime below 2**31; products of two residues fit in int64.
DEFAULT_MODULUS = 2**31 - 1


def _as_residues(rows, p: int) -> np.ndarray:
    a = np.array(rows, dtype=object)
    if a.ndim == 1:
        a = a.reshape(1, -1) if a.size else np.zeros((0, 0), dtype=object)
    return np.array(a % p, dtype=np.int64)


def rank_mod_p(rows, p: int = DEFAULT_MODULUS) -> int:
    """Rank of an integer matrix reduced modulo the prime ``p`` (``p < 2**31``)."""
    if p >= 2**31:
        raise InvalidInputError("modulus must be below 2**31 for int64 elimination")
    a = _as_residues(rows, p)
    if a.size == 0:
        return 0
    m, n = a.shape
    r = 0
    for c in range(n):
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = (a[r] * inv) % p
        below = a[r + 1 :, c].copy()
        mask = below != 0
        if mask.any():
            idx = np.nonzero(mask)[0] + r + 1
            a[idx] = (a[idx] - (below[mask][:, None] * a[r]) % p) % p
        r += 1
        if r == m:
            break
    return r


def is_singular_mod_p(rows, p: int = DEFAULT_MODULUS) -> bool:
    """True when the square matrix ``rows`` has zero determinant modulo ``p``."""
    n = len(rows)
    return rank_mod_p(rows, p) < n
