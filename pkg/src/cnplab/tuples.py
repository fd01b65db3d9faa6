"""Commuting matrix tuples, defect operators, contractivity and purity tests.

The desk-scale stand-in for a commuting d-tuple of bounded operators is a
tuple of d pairwise-commuting complex square matrices.  Strong-operator
convergence statements become truncated series with a monitored tail window,
so every verdict here is three-valued: yes / no / inconclusive.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._linalg import RANK_REL_TOL, hermitize, opnorm, orthonormal_range, psd_sqrt
from .coeffs import CoeffTable, graded_indices, multi_coeff
from .errors import CommutationError

COMMUTATOR_TOL = 1e-12


@dataclass(frozen=True)
class TruncationParams:
    """Series cut-off degree, verification tolerance and tail policy."""

    N: int
    tol: float = 1e-9
    tail_window: int = 3

    def __post_init__(self):
        if self.N < 1:
            raise ValueError(f"truncation degree must be >= 1, got {self.N}")
        if self.tol <= 0.0:
            raise ValueError(f"tolerance must be positive, got {self.tol}")
        if self.tail_window < 1:
            raise ValueError(f"tail window must be >= 1, got {self.tail_window}")


@dataclass(frozen=True)
class OperatorTuple:
    """d pairwise-commuting complex h x h matrices.

    Commutators are checked at construction against
    commutator_tol * max(1, |T_i| |T_j|); matrices are stored read-only.
    """

    mats: tuple
    commutator_tol: float = COMMUTATOR_TOL

    def __post_init__(self):
        mats = tuple(np.array(m, dtype=complex) for m in self.mats)
        if len(mats) == 0:
            raise ValueError("need at least one matrix")
        h = mats[0].shape[0]
        for m in mats:
            if m.ndim != 2 or m.shape != (h, h):
                raise ValueError(f"all matrices must be square of equal size, got {m.shape}")
        norms = [opnorm(m) for m in mats]
        for i in range(len(mats)):
            for j in range(i + 1, len(mats)):
                comm = opnorm(mats[i] @ mats[j] - mats[j] @ mats[i])
                bound = self.commutator_tol * max(1.0, norms[i] * norms[j])
                if comm > bound:
                    raise CommutationError(
                        f"matrices {i} and {j} do not commute: |[T_i, T_j]| = {comm:.3e} > {bound:.3e}"
                    )
        for m in mats:
            m.setflags(write=False)
        object.__setattr__(self, "mats", mats)

    @property
    def h(self) -> int:
        return self.mats[0].shape[0]

    @property
    def d(self) -> int:
        return len(self.mats)

    @classmethod
    def zero(cls, h: int, d: int) -> "OperatorTuple":
        return cls(tuple(np.zeros((h, h), dtype=complex) for _ in range(d)))

    @classmethod
    def from_scalars(cls, *values: complex) -> "OperatorTuple":
        return cls(tuple(np.array([[v]], dtype=complex) for v in values))


def tuple_power(t: OperatorTuple, alpha: Sequence[int]) -> np.ndarray:
    """T^alpha = T_1^a1 ... T_d^ad; the identity when alpha = 0 or any entry is negative."""
    alpha = tuple(int(x) for x in alpha)
    if len(alpha) != t.d:
        raise ValueError(f"multi-index length {len(alpha)} does not match d={t.d}")
    out = np.eye(t.h, dtype=complex)
    if any(x < 0 for x in alpha):
        return out
    for m, power in zip(t.mats, alpha):
        if power:
            out = out @ np.linalg.matrix_power(m, power)
    return out


class TuplePowers:
    """All products T^alpha for |alpha| <= N, one multiplication per index."""

    def __init__(self, t: OperatorTuple, n: int):
        self.tuple = t
        self._mats: dict[tuple[int, ...], np.ndarray] = {}
        eye = np.eye(t.h, dtype=complex)
        for alpha in graded_indices(t.d, n):
            if sum(alpha) == 0:
                self._mats[alpha] = eye
                continue
            i = next(k for k, x in enumerate(alpha) if x > 0)
            beta = alpha[:i] + (alpha[i] - 1,) + alpha[i + 1:]
            self._mats[alpha] = t.mats[i] @ self._mats[beta]

    def power(self, alpha: tuple[int, ...]) -> np.ndarray:
        return self._mats[alpha]


def _indices_by_degree(d: int, n: int) -> list[list[tuple[int, ...]]]:
    groups: list[list[tuple[int, ...]]] = [[] for _ in range(n + 1)]
    for alpha in graded_indices(d, n):
        groups[sum(alpha)].append(alpha)
    return groups


def _weighted_series(
    t: OperatorTuple,
    table: CoeffTable,
    n: int,
    which: str,
    middle: np.ndarray | None = None,
    start_degree: int = 0,
    powers: TuplePowers | None = None,
):
    """sum over |alpha| in [start_degree, n] of c_alpha T^alpha M (T^alpha)^*.

    Returns (total, per-degree increment norms).  M defaults to the identity.
    """
    if powers is None:
        powers = TuplePowers(t, n)
    h = t.h
    total = np.zeros((h, h), dtype=complex)
    inc_norms: list[float] = []
    for deg, group in enumerate(_indices_by_degree(t.d, n)):
        if deg < start_degree:
            inc_norms.append(0.0)
            continue
        inc = np.zeros((h, h), dtype=complex)
        for alpha in group:
            c = multi_coeff(table, alpha, which)
            if c == 0.0:
                continue
            p = powers.power(alpha)
            if middle is None:
                inc += c * (p @ p.conj().T)
            else:
                inc += c * (p @ middle @ p.conj().T)
        total += inc
        inc_norms.append(opnorm(inc))
    return total, inc_norms


def _tail(inc_norms: list[float], window: int) -> float:
    tail = inc_norms[-window:] if len(inc_norms) >= window else inc_norms
    return max(tail) if tail else 0.0


# ---------------------------------------------------------------------------
# Defect operator
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DefectData:
    """Truncated defect operator of a tuple against one kernel.

    delta_sq is I - sum_{1<=|alpha|<=N} b_alpha T^alpha (T^alpha)^*, delta its
    positive square root (computed from the eigenvalue-clipped matrix when
    delta_sq is indefinite, with `positive` recording the honest sign),
    ran_delta_basis an orthonormal basis of the numerical range of delta.
    """

    delta_sq: np.ndarray
    delta: np.ndarray
    ran_delta_basis: np.ndarray
    tail_norm: float
    min_eig: float
    positive: bool
    increment_norms: tuple

    @property
    def rank(self) -> int:
        return self.ran_delta_basis.shape[1]


def defect(t: OperatorTuple, table: CoeffTable, p: TruncationParams,
           powers: TuplePowers | None = None) -> DefectData:
    """Truncated defect of t: the b-weighted series subtracted from the identity."""
    table.require_b(p.N)
    series, inc_norms = _weighted_series(t, table, p.N, "b", start_degree=1, powers=powers)
    delta_sq = hermitize(np.eye(t.h, dtype=complex) - series)
    delta, min_eig, _, _ = psd_sqrt(delta_sq)
    basis, _ = orthonormal_range(delta_sq, RANK_REL_TOL)
    tail = _tail(inc_norms[1:], p.tail_window)
    return DefectData(
        delta_sq=delta_sq,
        delta=delta,
        ran_delta_basis=basis,
        tail_norm=tail,
        min_eig=min_eig,
        positive=min_eig >= -p.tol,
        increment_norms=tuple(inc_norms[1:]),
    )


# ---------------------------------------------------------------------------
# Contractivity and purity
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ContractionVerdict:
    status: str  # "yes" | "no" | "inconclusive"
    min_eig: float
    tail_norm: float

    @property
    def ok(self) -> bool:
        return self.status == "yes"


def is_contraction(t: OperatorTuple, table: CoeffTable, p: TruncationParams) -> ContractionVerdict:
    """Three-valued contractivity test on the truncated defect.

    yes requires both positivity of delta_sq (up to tol) and a tail window
    already below tol; a positive defect with a live tail stays inconclusive
    because the truncation cannot certify convergence.
    """
    dd = defect(t, table, p)
    if dd.min_eig < -p.tol:
        return ContractionVerdict(status="no", min_eig=dd.min_eig, tail_norm=dd.tail_norm)
    if dd.tail_norm > p.tol:
        return ContractionVerdict(status="inconclusive", min_eig=dd.min_eig, tail_norm=dd.tail_norm)
    return ContractionVerdict(status="yes", min_eig=dd.min_eig, tail_norm=dd.tail_norm)


@dataclass(frozen=True)
class PurityVerdict:
    status: str  # "pure" | "not_pure" | "inconclusive"
    residual: float
    tail_increments: tuple

    @property
    def ok(self) -> bool:
        return self.status == "pure"


def is_pure(t: OperatorTuple, table: CoeffTable, p: TruncationParams,
            defect_data: DefectData | None = None) -> PurityVerdict:
    """Tests whether the a-weighted defect series reaches the identity.

    pure: the partial sum at degree N is within tol of I and the monitored
    tail increments are non-increasing.  not_pure: the increments have
    numerically converged while the partial sum stays far from I.
    """
    if defect_data is None:
        defect_data = defect(t, table, p)
    table.require_a(p.N)
    total, inc_norms = _weighted_series(t, table, p.N, "a", middle=defect_data.delta_sq)
    residual = opnorm(total - np.eye(t.h, dtype=complex))
    window = inc_norms[-p.tail_window:] if len(inc_norms) >= p.tail_window else inc_norms
    # non-increasing up to rounding: equal increments must count as shrinking
    shrinking = all(window[k + 1] <= window[k] * (1.0 + 1e-12) + 1e-15
                    for k in range(len(window) - 1))
    if residual <= p.tol and shrinking:
        return PurityVerdict(status="pure", residual=residual, tail_increments=tuple(window))
    if max(window, default=0.0) <= p.tol and residual > 10.0 * p.tol:
        return PurityVerdict(status="not_pure", residual=residual, tail_increments=tuple(window))
    return PurityVerdict(status="inconclusive", residual=residual, tail_increments=tuple(window))


# ---------------------------------------------------------------------------
# Truncated shift matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TruncatedShifts:
    """Compressions of the coordinate multipliers to degrees <= N.

    Matrices act on the orthonormal monomial basis e(alpha) = sqrt(a_alpha)
    z^alpha listed in graded_indices(d, N) order.
    """

    ops: OperatorTuple
    indices: tuple
    N: int

    @property
    def dim(self) -> int:
        return len(self.indices)


def shift_matrices(table: CoeffTable, n: int) -> TruncatedShifts:
    """Matrices of the coordinate shifts compressed to degree <= n.

    The only nonzero entries are <M_i e(alpha), e(alpha + e_i)> =
    sqrt(a_alpha / a_{alpha+e_i}); the a-table must extend through n + 1.
    """
    table.require_a(n + 1)
    d = table.d
    indices = graded_indices(d, n)
    pos = {alpha: i for i, alpha in enumerate(indices)}
    size = len(indices)
    mats = []
    for i in range(d):
        m = np.zeros((size, size), dtype=complex)
        for alpha in indices:
            if sum(alpha) >= n:
                continue
            up = alpha[:i] + (alpha[i] + 1,) + alpha[i + 1:]
            m[pos[up], pos[alpha]] = np.sqrt(
                multi_coeff(table, alpha, "a") / multi_coeff(table, up, "a")
            )
        mats.append(m)
    return TruncatedShifts(ops=OperatorTuple(tuple(mats)), indices=indices, N=n)


@dataclass(frozen=True)
class ShiftNormBound:
    """max_{|alpha|<=N} a_alpha / a_{alpha+e_i}: the squared shift norm.

    Exact for the truncated matrix; a lower bound for the full operator when
    the maximum sits at the truncation boundary, which `lower_bound` flags.
    """

    value: float
    lower_bound: bool
    argmax: tuple


def shift_norm_sq(table: CoeffTable, i: int, n: int) -> ShiftNormBound:
    table.require_a(n + 1)
    if not 0 <= i < table.d:
        raise ValueError(f"coordinate {i} out of range for d={table.d}")
    best = -np.inf
    best_alpha = None
    for alpha in graded_indices(table.d, n):
        up = alpha[:i] + (alpha[i] + 1,) + alpha[i + 1:]
        ratio = multi_coeff(table, alpha, "a") / multi_coeff(table, up, "a")
        if ratio > best:
            best = ratio
            best_alpha = alpha
    return ShiftNormBound(value=float(best), lower_bound=sum(best_alpha) == n, argmax=best_alpha)
