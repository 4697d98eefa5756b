"""Small linear-algebra helpers: deterministic power-iteration spectral norm."""

from __future__ import annotations

import numpy as np

__all__ = ["spectral_norm"]


def spectral_norm(a: np.ndarray, tol: float = 1e-10, max_iters: int = 2000) -> float:
    """Largest singular value of ``a`` via power iteration on ``a* a``.

    Deterministic: starts from one Gram step off the all-ones vector (with
    a fixed index ramp to break symmetry), iterates until the Rayleigh
    quotient stabilizes to ``tol`` relative.
    """
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    m, n = a.shape
    v = np.ones(n, dtype=complex) + np.arange(n) / max(n, 1) * 0.5
    v = a.conj().T @ (a @ v)
    nv = np.linalg.norm(v)
    if nv == 0.0:
        # ones vector lies in the null space; fall back to column norms
        col = np.linalg.norm(a, axis=0)
        j = int(np.argmax(col))
        if col[j] == 0.0:
            return 0.0
        v = np.zeros(n, dtype=complex)
        v[j] = 1.0
    else:
        v /= nv
    prev = 0.0
    for _ in range(max_iters):
        w = a @ v
        s = np.linalg.norm(w)
        if s == 0.0:
            return 0.0
        v = a.conj().T @ w
        nv = np.linalg.norm(v)
        sigma = np.sqrt(nv)  # ||a* a v|| -> sigma^2 when v is unit
        if abs(sigma - prev) <= tol * max(sigma, 1e-300):
            return float(sigma)
        prev = sigma
        v /= nv
    return float(prev)
