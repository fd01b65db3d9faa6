"""Small dense linear-algebra helpers used throughout the package."""

from __future__ import annotations

import numpy as np

from .errors import AmbiguousRankError

# Relative eigenvalue/singular-value threshold for every rank decision.
RANK_REL_TOL = 1e-10

# Singular values within this factor of the threshold make the rank decision
# ambiguous; such decisions fail loudly instead of silently.
AMBIGUITY_FACTOR = 10.0


def opnorm(a: np.ndarray) -> float:
    """Spectral norm, with the empty matrix mapped to 0."""
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def hermitize(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.conj().T)


def canonical_phases(u: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-magnitude entry is real positive.

    Removes the arbitrary phase of eigenvectors and singular vectors, which
    keeps reported matrices deterministic across runs.
    """
    if u.size == 0:
        return u
    out = np.array(u, dtype=complex)
    for j in range(out.shape[1]):
        k = int(np.argmax(np.abs(out[:, j])))
        pivot = out[k, j]
        if abs(pivot) > 0.0:
            out[:, j] *= pivot.conjugate() / abs(pivot)
    return out


def psd_decompose(a: np.ndarray):
    """Eigendecomposition of a Hermitian matrix, returned ascending.

    Returns (eigvals, eigvecs) with canonical column phases.
    """
    if a.shape[0] == 0:
        return np.zeros(0), np.zeros((0, 0), dtype=complex)
    vals, vecs = np.linalg.eigh(hermitize(a))
    return vals, canonical_phases(vecs)


def psd_sqrt(a: np.ndarray):
    """Positive square root of a Hermitian matrix with negative eigenvalues clipped.

    Returns (sqrt_matrix, min_eig, eigvals, eigvecs).
    """
    vals, vecs = psd_decompose(a)
    min_eig = float(vals[0]) if len(vals) else 0.0
    clipped = np.clip(vals, 0.0, None)
    root = (vecs * np.sqrt(clipped)) @ vecs.conj().T
    return root, min_eig, vals, vecs


def orthonormal_range(a: np.ndarray, rel_tol: float = RANK_REL_TOL):
    """Orthonormal basis of the numerical range of a Hermitian PSD matrix.

    Columns are eigenvectors with eigenvalue above rel_tol * max_eig, kept in
    ascending eigenvalue order with canonical phases.  Returns
    (basis, kept_eigvals).
    """
    vals, vecs = psd_decompose(a)
    if len(vals) == 0 or vals[-1] <= 0.0:
        return np.zeros((a.shape[0], 0), dtype=complex), np.zeros(0)
    keep = vals > rel_tol * vals[-1]
    return vecs[:, keep], vals[keep]


def split_rank(svals: np.ndarray, rel_tol: float = RANK_REL_TOL) -> int:
    """Numerical rank from a descending singular-value array, failing loudly.

    Raises AmbiguousRankError when any singular value sits within a factor of
    AMBIGUITY_FACTOR of the threshold.
    """
    if len(svals) == 0 or svals[0] <= 0.0:
        return 0
    thr = rel_tol * float(svals[0])
    for s in svals:
        if thr / AMBIGUITY_FACTOR < s < thr * AMBIGUITY_FACTOR:
            raise AmbiguousRankError(
                f"singular value {s:.3e} within a factor of {AMBIGUITY_FACTOR} "
                f"of the rank threshold {thr:.3e}"
            )
    return int(np.sum(svals >= thr))
