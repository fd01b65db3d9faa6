"""Dilation isometry, factorability, and the characteristic-function existence test.

A pure tuple embeds isometrically into a truncated vector-valued kernel space
through the map built here; whether the kernel of the adjoint embedding is
itself contractive for the same kernel decides existence of a characteristic
function.  The generalized Bergman kernels with exponent m >= 2 fail that
test with an explicit closed-form witness, reproduced numerically by
`bergman_counterexample`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._linalg import (
    RANK_REL_TOL,
    canonical_phases,
    hermitize,
    opnorm,
    split_rank,
)
from .coeffs import CoeffTable, KernelSpec, bergman, build_table, graded_indices, multi_coeff
from .errors import DegenerateDilationError, PrerequisiteError
from .tuples import (
    DefectData,
    OperatorTuple,
    TruncatedShifts,
    TruncationParams,
    TuplePowers,
    _tail,
    _weighted_series,
    defect,
    is_contraction,
    is_pure,
    shift_matrices,
    shift_norm_sq,
    ContractionVerdict,
)

COMMUTATOR_TOL = 1e-12


# ---------------------------------------------------------------------------
# The dilation map
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DilationMap:
    """Block-column matrix of the embedding into (truncated H_k) x Ran(defect).

    The block at multi-index alpha is sqrt(a_alpha) * C^* Delta (T^alpha)^*
    where C holds the orthonormal defect-range basis; rows are stacked in
    graded_indices order with the defect-range coordinate fastest.
    """

    matrix: np.ndarray
    N: int
    indices: tuple
    domain_dim: int
    codomain_dims: tuple  # (number of multi-indices, defect rank)
    isometry_defect: float
    defect_data: DefectData
    degenerate: bool = False

    @property
    def big_dim(self) -> int:
        return self.codomain_dims[0] * self.codomain_dims[1]


def build_dilation(t: OperatorTuple, table: CoeffTable, p: TruncationParams,
                   allow_degenerate: bool = False) -> DilationMap:
    """Matrix of h -> sum_alpha sqrt(a_alpha) e(alpha) x (defect-range coords of Delta (T^alpha)^* h).

    For a pure tuple this is an isometry up to the purity residual; the
    defect of V^*V from the identity is recorded.  A rank-zero defect admits
    no dilation space and raises unless allow_degenerate is set, in which
    case the zero map is returned with its honest isometry defect.
    """
    table.require_a(p.N)
    dd = defect(t, table, p)
    indices = graded_indices(t.d, p.N)
    c = dd.ran_delta_basis
    r = c.shape[1]
    if r == 0 and t.h > 0 and not allow_degenerate:
        raise DegenerateDilationError("defect operator has rank zero; no dilation space")
    powers = TuplePowers(t, p.N)
    blocks = []
    cd = c.conj().T @ dd.delta
    for alpha in indices:
        w = np.sqrt(multi_coeff(table, alpha, "a"))
        blocks.append(w * (cd @ powers.power(alpha).conj().T))
    matrix = np.vstack(blocks) if blocks else np.zeros((0, t.h), dtype=complex)
    gram = matrix.conj().T @ matrix
    iso_defect = opnorm(gram - np.eye(t.h, dtype=complex))
    return DilationMap(
        matrix=matrix,
        N=p.N,
        indices=indices,
        domain_dim=t.h,
        codomain_dims=(len(indices), r),
        isometry_defect=iso_defect,
        defect_data=dd,
        degenerate=(r == 0 and t.h > 0),
    )


def _tensor_shift(shifts: TruncatedShifts, alpha: tuple, r: int) -> np.ndarray:
    m = np.eye(shifts.dim, dtype=complex)
    for mat, power in zip(shifts.ops.mats, alpha):
        for _ in range(power):
            m = mat @ m
    return np.kron(m, np.eye(r, dtype=complex))


def check_intertwining(v: DilationMap, t: OperatorTuple, shifts: TruncatedShifts,
                       alphas: Sequence[tuple]) -> float:
    """Max residual of V^*(M^alpha x I) = T^alpha V^* on interior degrees.

    Columns whose source degree exceeds N - |alpha| are excluded: their image
    leaves the truncated space, so they only measure the cut-off, not the
    intertwining.
    """
    if shifts.N != v.N or shifts.indices != v.indices:
        raise ValueError("shift matrices and dilation map use different basis orderings")
    n_idx, r = v.codomain_dims
    vstar = v.matrix.conj().T
    powers = TuplePowers(t, max(sum(a) for a in alphas))
    worst = 0.0
    for alpha in alphas:
        alpha = tuple(int(x) for x in alpha)
        lhs = vstar @ _tensor_shift(shifts, alpha, r)
        rhs = powers.power(alpha) @ vstar
        keep = [
            j * r + k
            for j, beta in enumerate(v.indices)
            if sum(beta) <= v.N - sum(alpha)
            for k in range(r)
        ]
        if not keep:
            continue
        diff = (lhs - rhs)[:, keep]
        worst = max(worst, opnorm(diff))
    return worst


# ---------------------------------------------------------------------------
# Factorability of a positive operator
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FactorabilityReport:
    """Numerical evaluation of the three factorability conditions.

    cond1: per-coordinate min eigenvalue of c_i X - T_i X T_i^*.
    cond2: min eigenvalue of X - P(X) where P(X) is the b-weighted series,
           plus the tail of that series.
    cond3: residual of the a-weighted series of X - P(X) against X, plus its
           tail.  The verdict is factorable only when all three pass.
    """

    verdict: str  # "factorable" | "not_factorable" | "inconclusive"
    failed_condition: int | None
    cond1_min_eigs: tuple
    cond2_min_eig: float
    cond2_tail: float
    cond3_residual: float
    cond3_tail: float


def check_factorability(x: np.ndarray, t: OperatorTuple, table: CoeffTable,
                        p: TruncationParams, c: Sequence[float] | None = None) -> FactorabilityReport:
    """Evaluate the factorability conditions for a Hermitian PSD matrix x.

    The constants c_i default to the squared truncated shift norms of the
    kernel.  Sign failures of conditions (1) and (2) are definitive at this
    truncation; condition (3) distinguishes a converged-but-wrong series
    (not factorable) from one that is still moving (inconclusive).
    """
    x = np.asarray(x, dtype=complex)
    if opnorm(x - x.conj().T) > 1e-10 * max(1.0, opnorm(x)):
        raise ValueError("x must be Hermitian")
    x = hermitize(x)
    min_x = float(np.linalg.eigvalsh(x)[0]) if x.size else 0.0
    if min_x < -p.tol:
        raise ValueError(f"x must be PSD up to tol, min eigenvalue {min_x:.3e}")
    if c is None:
        c = [shift_norm_sq(table, i, p.N).value for i in range(t.d)]

    cond1 = []
    for i in range(t.d):
        g = hermitize(c[i] * x - t.mats[i] @ x @ t.mats[i].conj().T)
        cond1.append(float(np.linalg.eigvalsh(g)[0]) if g.size else 0.0)

    powers = TuplePowers(t, p.N)
    p_of_x, inc2 = _weighted_series(t, table, p.N, "b", middle=x, start_degree=1, powers=powers)
    gap = hermitize(x - p_of_x)
    cond2_min = float(np.linalg.eigvalsh(gap)[0]) if gap.size else 0.0
    cond2_tail = _tail(inc2[1:], p.tail_window)

    recon, inc3 = _weighted_series(t, table, p.N, "a", middle=gap, powers=powers)
    cond3_res = opnorm(recon - x)
    cond3_tail = _tail(inc3, p.tail_window)

    failed = None
    verdict = "factorable"
    if any(m < -p.tol for m in cond1):
        verdict, failed = "not_factorable", 1
    elif cond2_min < -p.tol:
        verdict, failed = "not_factorable", 2
    elif cond2_tail > p.tol:
        verdict = "inconclusive"
    elif cond3_res > p.tol:
        if cond3_tail <= p.tol:
            verdict, failed = "not_factorable", 3
        else:
            verdict = "inconclusive"
    return FactorabilityReport(
        verdict=verdict,
        failed_condition=failed,
        cond1_min_eigs=tuple(cond1),
        cond2_min_eig=cond2_min,
        cond2_tail=cond2_tail,
        cond3_residual=cond3_res,
        cond3_tail=cond3_tail,
    )


# ---------------------------------------------------------------------------
# Associated tuple on the kernel of the adjoint embedding
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AssociatedTuple:
    """Compression of the tensored shifts to the orthogonal complement of Ran V.

    The complement is invariant for the shifts up to truncation, so the
    compression equals the restriction up to `invariance_residual`, measured
    on rows of degree <= N - 1 where the cut-off cannot pollute it.
    """

    ops: OperatorTuple | None
    basis: np.ndarray
    invariance_residual: float
    dim: int


def associated_tuple(v: DilationMap, shifts: TruncatedShifts) -> AssociatedTuple:
    if shifts.N != v.N or shifts.indices != v.indices:
        raise ValueError("shift matrices and dilation map use different basis orderings")
    n_idx, r = v.codomain_dims
    big = n_idx * r
    u, svals, _ = np.linalg.svd(v.matrix, full_matrices=True)
    rank = split_rank(svals, RANK_REL_TOL)
    k = canonical_phases(u[:, rank:])
    dim = k.shape[1]
    if dim == 0:
        return AssociatedTuple(ops=None, basis=k, invariance_residual=0.0, dim=0)

    interior_rows = np.array(
        [sum(beta) <= v.N - 1 for beta in v.indices for _ in range(r)], dtype=bool
    )
    mats = []
    inv_res = 0.0
    proj_out = np.eye(big, dtype=complex) - k @ k.conj().T
    for i in range(shifts.ops.d):
        big_m = np.kron(shifts.ops.mats[i], np.eye(r, dtype=complex))
        mk = big_m @ k
        leak = proj_out @ mk
        inv_res = max(inv_res, opnorm(leak[interior_rows, :]))
        mats.append(k.conj().T @ mk)
    ctol = max(COMMUTATOR_TOL, 10.0 * inv_res)
    ops = OperatorTuple(tuple(mats), commutator_tol=ctol)
    return AssociatedTuple(ops=ops, basis=k, invariance_residual=inv_res, dim=dim)


# ---------------------------------------------------------------------------
# Existence of a characteristic function
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExistenceReport:
    """Verdict of the characteristic-function existence test.

    does_not_admit carries the unit vector (in the ambient truncated-space
    coordinates) achieving the negative quadratic form, together with its
    value.
    """

    status: str  # "admits" | "does_not_admit" | "inconclusive"
    value: float
    witness: np.ndarray | None
    contraction: ContractionVerdict
    invariance_residual: float
    kernel_dim: int


def admits_charfn(t: OperatorTuple, table: CoeffTable, p: TruncationParams) -> ExistenceReport:
    """Decide whether a pure tuple admits a characteristic function.

    Runs the contractivity test on the tuple associated with the dilation.
    Non-pure inputs are rejected: outside the hypothesis there is nothing to
    decide.  The associated tuple lives on a space truncated at degree N
    where the shifts are nilpotent of order N + 1, so its contraction series
    is summed through N + tail_window: past degree N the increments vanish
    identically and the tail verdict reflects the finite matrix algebra, not
    the cut-off.  The table must therefore extend through N + tail_window.
    """
    purity = is_pure(t, table, p)
    if purity.status != "pure":
        raise PrerequisiteError(
            f"existence test requires a pure tuple; purity verdict was {purity.status!r} "
            f"(residual {purity.residual:.3e})"
        )
    v = build_dilation(t, table, p)
    shifts = shift_matrices(table, p.N)
    assoc = associated_tuple(v, shifts)
    if assoc.dim == 0:
        trivial = ContractionVerdict(status="yes", min_eig=0.0, tail_norm=0.0)
        return ExistenceReport(
            status="admits", value=0.0, witness=None, contraction=trivial,
            invariance_residual=assoc.invariance_residual, kernel_dim=0,
        )
    p_series = TruncationParams(N=p.N + p.tail_window, tol=p.tol, tail_window=p.tail_window)
    verdict = is_contraction(assoc.ops, table, p_series)
    if verdict.status == "yes":
        status, witness = "admits", None
    elif verdict.status == "no":
        status = "does_not_admit"
        dd = defect(assoc.ops, table, p_series)
        vals, vecs = np.linalg.eigh(hermitize(dd.delta_sq))
        witness = canonical_phases((assoc.basis @ vecs[:, :1]))[:, 0]
    else:
        status, witness = "inconclusive", None
    return ExistenceReport(
        status=status,
        value=verdict.min_eig,
        witness=witness,
        contraction=verdict,
        invariance_residual=assoc.invariance_residual,
        kernel_dim=assoc.dim,
    )


# ---------------------------------------------------------------------------
# The generalized Bergman counterexample
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CounterexamplePoint:
    """One (m, N) instance of the failing quadratic form.

    closed_form = 1 - m (N+2) / (m+N+1) is negative exactly when
    m (N+2) / (m+N+1) > 1, i.e. for every m >= 2; `numeric` is the same
    quantity computed from matrices, and bound_value the ratio itself.
    """

    m: int
    N: int
    d: int
    closed_form: float
    numeric: float
    match_error: float
    bound_value: float


def bergman_counterexample(m: int, n: int, d: int = 1,
                           p: TruncationParams | None = None) -> CounterexamplePoint:
    """Quadratic form of the associated tuple of the degree-n compressed shifts.

    Builds the compression T of the Bergman-m shifts to degrees <= n, embeds
    it at a higher truncation, and evaluates the contractivity form of the
    associated tuple on the basis vector of degree n + 2 along the first
    coordinate.  m = 1 is rejected: there the ratio drops below 1 and the
    form is nonnegative.
    """
    if m < 2:
        raise PrerequisiteError(
            "counterexample requires m >= 2; at m = 1 the kernel has nonnegative "
            "inverted coefficients and the bound m(N+2)/(m+N+1) falls to within 1"
        )
    if n < 0:
        raise ValueError(f"compression degree must be >= 0, got {n}")
    big_n = n + 3 if p is None else max(p.N, n + 3)
    if p is None:
        p = TruncationParams(N=big_n)
    else:
        p = TruncationParams(N=big_n, tol=p.tol, tail_window=p.tail_window)
    table = build_table(bergman(m, d=d), big_n + 1)

    inner = shift_matrices(table, n)
    t = inner.ops
    v = build_dilation(t, table, p)
    shifts = shift_matrices(table, big_n)
    assoc = associated_tuple(v, shifts)

    target = (n + 2,) + (0,) * (d - 1)
    pos = {alpha: i for i, alpha in enumerate(shifts.indices)}
    r = v.codomain_dims[1]
    e = np.zeros(len(shifts.indices) * r, dtype=complex)
    e[pos[target] * r] = 1.0

    dd = defect(assoc.ops, table, p)
    coords = assoc.basis.conj().T @ e
    numeric = float(np.real(np.vdot(coords, dd.delta_sq @ coords)))

    closed = 1.0 - m * (n + 2) / (m + n + 1)
    bound = m * (n + 2) / (m + n + 1)
    return CounterexamplePoint(
        m=m, N=n, d=d,
        closed_form=closed,
        numeric=numeric,
        match_error=abs(numeric - closed),
        bound_value=bound,
    )


# ---------------------------------------------------------------------------
# Operator-level CNP probe
# ---------------------------------------------------------------------------

def cnp_zero_tuple_probe(table: CoeffTable, n: int) -> np.ndarray:
    """Quadratic forms of the zero tuple's associated shifts, one per degree.

    For the zero tuple on the constants, the contractivity form of the
    restricted shifts evaluated at the degree-k basis vector collapses to
    b_k / a_k.  Returned for k = 2 .. n, computed entirely from shift
    matrices so the sign pattern cross-validates the coefficient-level CNP
    classification.  The computation lives on the first coordinate axis, so
    it is carried out with one-variable shift matrices regardless of the
    ambient dimension.
    """
    if n < 2:
        raise ValueError(f"probe needs n >= 2, got {n}")
    spec1 = KernelSpec(d=1, rule=table.spec.rule, param=table.spec.param,
                       label=table.spec.label)
    table1 = build_table(spec1, n + 1)
    shifts = shift_matrices(table1, n)
    m = shifts.ops.mats[0]
    size = shifts.dim
    proj = np.eye(size)
    proj[0, 0] = 0.0  # kill the constants: the complement of the embedded space

    b = table1.require_b(n)
    out = np.empty(n - 1)
    for k in range(2, n + 1):
        e = np.zeros(size, dtype=complex)
        e[k] = 1.0  # one-variable index k sits at position k
        q = 1.0
        w = e
        for i in range(1, n + 1):
            w = m.conj().T @ w
            pw = proj @ w
            q -= b[i] * float(np.real(np.vdot(pw, pw)))
        out[k - 2] = q
    return out
