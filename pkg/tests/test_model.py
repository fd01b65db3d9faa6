"""Dilation map, factorability, associated tuples, existence, counterexample."""

import numpy as np
import pytest

import cnplab as cl
from cnplab.tuples import TuplePowers


def P(n, tol=1e-9, window=3):
    return cl.TruncationParams(N=n, tol=tol, tail_window=window)


def tensored_shifts(shifts, r):
    return cl.OperatorTuple(tuple(np.kron(m, np.eye(r, dtype=complex)) for m in shifts.ops.mats))


# ---------------------------------------------------------------------------
# dilation map
# ---------------------------------------------------------------------------

def test_dilation_zero_tuple():
    table = cl.build_table(cl.szego(), 12)
    v = cl.build_dilation(cl.OperatorTuple.zero(2, 1), table, P(10))
    assert v.isometry_defect <= 1e-14
    assert np.array_equal(v.matrix[:2, :], np.eye(2))
    assert np.all(v.matrix[2:, :] == 0.0)


def test_dilation_scalar_szego_column():
    t = 0.5
    table = cl.build_table(cl.szego(), 62)
    v = cl.build_dilation(cl.OperatorTuple.from_scalars(t), table, P(60))
    expected = np.sqrt(1 - t * t) * t ** np.arange(61)
    assert np.max(np.abs(v.matrix[:, 0] - expected)) <= 1e-14
    assert v.isometry_defect <= 1e-9


def test_dilation_degenerate():
    table = cl.build_table(cl.szego(), 12)
    unit = cl.OperatorTuple.from_scalars(1.0)
    with pytest.raises(cl.DegenerateDilationError):
        cl.build_dilation(unit, table, P(10))
    v = cl.build_dilation(unit, table, P(10), allow_degenerate=True)
    assert v.degenerate and abs(v.isometry_defect - 1.0) <= 1e-15
    assert v.codomain_dims[1] == 0


def test_intertwining_zero_tuple():
    table = cl.build_table(cl.drury_arveson(2), 10)
    zero = cl.OperatorTuple.zero(2, 2)
    p = P(8)
    v = cl.build_dilation(zero, table, p)
    shifts = cl.shift_matrices(table, 8)
    res = cl.check_intertwining(v, zero, shifts, [(1, 0), (0, 1), (1, 1)])
    assert res == 0.0


def test_intertwining_scalar_and_truncation_trend():
    table = cl.build_table(cl.szego(), 82)
    t = cl.OperatorTuple.from_scalars(0.5)
    residuals = {}
    for n in (40, 60):
        v = cl.build_dilation(t, table, P(n))
        shifts = cl.shift_matrices(table, n)
        residuals[n] = cl.check_intertwining(v, t, shifts, [(3,)])
    assert residuals[60] <= 1e-9
    assert residuals[60] <= residuals[40] + 1e-13


def test_intertwining_rejects_mismatched_basis():
    table = cl.build_table(cl.szego(), 22)
    t = cl.OperatorTuple.from_scalars(0.5)
    v = cl.build_dilation(t, table, P(20))
    shifts = cl.shift_matrices(table, 10)
    with pytest.raises(ValueError):
        cl.check_intertwining(v, t, shifts, [(1,)])


# ---------------------------------------------------------------------------
# factorability
# ---------------------------------------------------------------------------

def test_factorability_zero_operator():
    table = cl.build_table(cl.szego(), 12)
    shifts = cl.shift_matrices(table, 8)
    x = np.zeros((shifts.dim, shifts.dim))
    report = cl.check_factorability(x, shifts.ops, table, P(8))
    assert report.verdict == "factorable"


def test_factorability_identity_on_szego_shift():
    table = cl.build_table(cl.szego(), 12)
    shifts = cl.shift_matrices(table, 8)
    p = P(8)
    report = cl.check_factorability(np.eye(shifts.dim), shifts.ops, table, p)
    assert report.verdict == "factorable"
    assert report.cond2_min_eig >= -1e-12
    assert report.cond3_residual <= 1e-12
    # the gap X - P(X) is exactly the rank-one projection onto the constants
    powers = TuplePowers(shifts.ops, p.N)
    gap = np.eye(shifts.dim, dtype=complex)
    for alpha in cl.graded_indices(1, p.N):
        if sum(alpha) == 0:
            continue
        b = cl.multi_coeff(table, alpha, "b")
        m = powers.power(alpha)
        gap -= b * (m @ m.conj().T)
    e0 = np.zeros_like(gap)
    e0[0, 0] = 1.0
    assert np.max(np.abs(gap - e0)) <= 1e-12


def test_factorability_bergman_projection_fails_cond2():
    table = cl.build_table(cl.bergman(2), 20)
    p = P(12)
    t0 = cl.shift_matrices(table, 0).ops  # compression to the constants
    v = cl.build_dilation(t0, table, p)
    shifts = cl.shift_matrices(table, p.N)
    x = np.eye(v.big_dim) - v.matrix @ v.matrix.conj().T
    report = cl.check_factorability(x, tensored_shifts(shifts, v.codomain_dims[1]), table,
                                    P(p.N + 3))
    assert report.verdict == "not_factorable"
    assert report.failed_condition == 2
    assert report.cond2_min_eig <= -(1.0 / 3.0) + 1e-10


def test_factorability_rejects_non_hermitian():
    table = cl.build_table(cl.szego(), 12)
    shifts = cl.shift_matrices(table, 6)
    x = np.zeros((shifts.dim, shifts.dim))
    x[0, 1] = 1.0
    with pytest.raises(ValueError):
        cl.check_factorability(x, shifts.ops, table, P(6))


# ---------------------------------------------------------------------------
# associated tuple
# ---------------------------------------------------------------------------

def test_ambiguous_rank_fails_loudly():
    from cnplab._linalg import split_rank

    clean = np.array([1.0, 0.9, 1e-14])
    assert split_rank(clean) == 2
    straddling = np.array([1.0, 0.9, 5e-10])  # within a factor 10 of 1e-10
    with pytest.raises(cl.AmbiguousRankError):
        split_rank(straddling)


def test_associated_tuple_full_range_is_empty():
    # the truncated shifts dilate to themselves: the embedding is the identity
    table = cl.build_table(cl.dirichlet_t(1.0), 14)
    p = P(10)
    shifts = cl.shift_matrices(table, p.N)
    v = cl.build_dilation(shifts.ops, table, p)
    assoc = cl.associated_tuple(v, shifts)
    assert assoc.dim == 0 and assoc.ops is None


def test_associated_tuple_scalar_szego():
    table = cl.build_table(cl.szego(), 82)
    p = P(80)
    t = cl.OperatorTuple.from_scalars(0.5)
    v = cl.build_dilation(t, table, p)
    shifts = cl.shift_matrices(table, p.N)
    assoc = cl.associated_tuple(v, shifts)
    assert assoc.dim == 80
    assert assoc.invariance_residual <= 1e-10
    assert np.linalg.norm(assoc.ops.mats[0], 2) <= 1.0 + 1e-10


def test_associated_tuple_bergman_kernel_structure():
    # kernel of the adjoint embedding of the constants-compression spans the
    # positive degrees
    table = cl.build_table(cl.bergman(2), 20)
    p = P(12)
    t0 = cl.shift_matrices(table, 0).ops
    v = cl.build_dilation(t0, table, p)
    shifts = cl.shift_matrices(table, p.N)
    assoc = cl.associated_tuple(v, shifts)
    assert assoc.dim == p.N
    # basis columns have no component on the constants
    assert np.max(np.abs(assoc.basis[0, :])) <= 1e-12


# ---------------------------------------------------------------------------
# existence test
# ---------------------------------------------------------------------------

def test_admits_zero_tuple_drury_arveson():
    table = cl.build_table(cl.drury_arveson(2), 14)
    report = cl.admits_charfn(cl.OperatorTuple.zero(1, 2), table, P(8))
    assert report.status == "admits"


def test_does_not_admit_zero_tuple_bergman():
    table = cl.build_table(cl.bergman(2), 24)
    report = cl.admits_charfn(cl.OperatorTuple.zero(1, 1), table, P(16))
    assert report.status == "does_not_admit"
    assert abs(report.value + 1.0 / 3.0) <= 1e-12
    # witness concentrates on the degree-2 basis vector
    assert abs(abs(report.witness[2]) - 1.0) <= 1e-8


def test_witness_value_t0_bergman():
    table = cl.build_table(cl.bergman(2), 20)
    t0 = cl.shift_matrices(table, 0).ops
    report = cl.admits_charfn(t0, table, P(12))
    assert report.status == "does_not_admit"
    assert abs(report.value + 1.0 / 3.0) <= 1e-12


def test_admits_requires_purity():
    table = cl.build_table(cl.szego(), 22)
    with pytest.raises(cl.PrerequisiteError):
        cl.admits_charfn(cl.OperatorTuple.from_scalars(1.0), table, P(20))


def test_existence_factorability_consistency(existence_examples):
    for ex in existence_examples:
        table = ex.table()
        report = cl.admits_charfn(ex.ops, table, ex.p)
        v = cl.build_dilation(ex.ops, table, ex.p)
        shifts = cl.shift_matrices(table, ex.p.N)
        r = v.codomain_dims[1]
        x = np.eye(v.big_dim) - v.matrix @ v.matrix.conj().T
        p_series = P(ex.p.N + ex.p.tail_window, tol=ex.p.tol, window=ex.p.tail_window)
        fact = cl.check_factorability(x, tensored_shifts(shifts, r), table, p_series)
        assert report.status in ("admits", "does_not_admit"), ex.name
        assert fact.verdict in ("factorable", "not_factorable"), ex.name
        assert (report.status == "admits") == (fact.verdict == "factorable"), ex.name


def test_associated_tuple_purity_follows_contractivity(pure_examples):
    # whenever the associated tuple is a contraction it is itself pure
    for ex in pure_examples[:5]:
        table = ex.table()
        v = cl.build_dilation(ex.ops, table, ex.p)
        shifts = cl.shift_matrices(table, ex.p.N)
        assoc = cl.associated_tuple(v, shifts)
        if assoc.dim == 0:
            continue
        p_series = P(ex.p.N + ex.p.tail_window, tol=ex.p.tol, window=ex.p.tail_window)
        if cl.is_contraction(assoc.ops, table, p_series).status == "yes":
            verdict = cl.is_pure(assoc.ops, table, p_series)
            assert verdict.status == "pure", (ex.name, verdict)


def orbit_closure(shifts, v0, thr=1e-10):
    """Orthonormal basis of the smallest shift-invariant subspace containing v0.

    Breadth-first closure with doubled Gram-Schmidt; a candidate direction is
    declined only when its out-of-span component is below thr relative to its
    own norm, so the result is invariant up to ~thr by construction.
    """
    q = np.asarray(v0, dtype=complex)
    q = q / np.linalg.norm(q)
    basis = q.reshape(-1, 1)
    queue = [q]
    while queue:
        q = queue.pop(0)
        for m in shifts.ops.mats:
            w = m @ q
            nw = np.linalg.norm(w)
            if nw <= 1e-14:
                continue
            r = w - basis @ (basis.conj().T @ w)
            r = r - basis @ (basis.conj().T @ r)
            nr = np.linalg.norm(r)
            if nr > thr * nw:
                newq = r / nr
                basis = np.hstack([basis, newq.reshape(-1, 1)])
                queue.append(newq)
    return basis


def test_invariant_subspaces_stay_contractive():
    # restrictions of the tensored shifts to shift-invariant subspaces remain
    # contractive for a CNP kernel; orbit closures are invariant by construction
    table = cl.build_table(cl.drury_arveson(2), 12)
    p = P(8)
    shifts = cl.shift_matrices(table, p.N)
    rng = np.random.default_rng(314159)
    for trial in range(20):
        v0 = rng.standard_normal(shifts.dim) + 1j * rng.standard_normal(shifts.dim)
        k = orbit_closure(shifts, v0)
        defect = max(
            np.linalg.norm((np.eye(shifts.dim) - k @ k.conj().T) @ (m @ k), 2)
            for m in shifts.ops.mats
        )
        assert defect <= 1e-8, (trial, defect)
        restricted = cl.OperatorTuple(tuple(k.conj().T @ m @ k for m in shifts.ops.mats),
                                      commutator_tol=max(1e-12, 10.0 * defect))
        verdict = cl.is_contraction(restricted, table, p)
        assert verdict.status == "yes", (trial, verdict)


# ---------------------------------------------------------------------------
# the counterexample
# ---------------------------------------------------------------------------

def test_counterexample_closed_forms():
    assert abs(cl.bergman_counterexample(2, 0).closed_form + 1.0 / 3.0) <= 1e-15
    assert abs(cl.bergman_counterexample(2, 1).closed_form + 0.5) <= 1e-15
    assert abs(cl.bergman_counterexample(3, 0).closed_form + 0.5) <= 1e-15
    assert abs(cl.bergman_counterexample(3, 1).closed_form + 0.8) <= 1e-15


def test_counterexample_sweep():
    for m in (2, 3, 4):
        for n in (0, 1, 2, 3):
            point = cl.bergman_counterexample(m, n)
            assert point.match_error <= 1e-12, (m, n, point)
            assert point.closed_form < 0.0
            assert point.bound_value > 1.0


def test_counterexample_dimension_invariance():
    for d in (1, 2, 3):
        point = cl.bergman_counterexample(2, 0, d=d)
        assert abs(point.numeric + 1.0 / 3.0) <= 1e-12


def test_counterexample_bound_value():
    assert abs(cl.bergman_counterexample(2, 0).bound_value - 4.0 / 3.0) <= 1e-15


def test_counterexample_rejects_m1():
    with pytest.raises(cl.PrerequisiteError):
        cl.bergman_counterexample(1, 0)


def test_counterexample_against_direct_quadratic_form():
    # independent route: no embedding, no basis compression; the projection
    # onto degrees > n is written down structurally and the form evaluated
    # with plain matrix-vector products
    for m, n in ((2, 0), (2, 2), (3, 1), (4, 3)):
        big_n = n + 3
        table = cl.build_table(cl.bergman(m), big_n + 1)
        shifts = cl.shift_matrices(table, big_n)
        proj = np.diag([1.0 if sum(alpha) > n else 0.0 for alpha in shifts.indices])
        e = np.zeros(shifts.dim, dtype=complex)
        e[shifts.indices.index((n + 2,))] = 1.0
        q = 1.0
        mat = shifts.ops.mats[0]
        w = e
        for i in range(1, big_n + 1):
            w = mat.conj().T @ w
            pw = proj @ w
            q -= table.b[i] * float(np.real(np.vdot(pw, pw)))
        point = cl.bergman_counterexample(m, n)
        assert abs(q - point.numeric) <= 1e-12, (m, n, q, point.numeric)
        assert abs(q - point.closed_form) <= 1e-12


# ---------------------------------------------------------------------------
# operator-level CNP probe
# ---------------------------------------------------------------------------

def test_probe_szego_all_zero():
    table = cl.build_table(cl.szego(), 40)
    probe = cl.cnp_zero_tuple_probe(table, 10)
    assert np.max(np.abs(probe)) <= 1e-14


def test_probe_bergman_value():
    table = cl.build_table(cl.bergman(2), 40)
    probe = cl.cnp_zero_tuple_probe(table, 10)
    assert abs(probe[0] + 1.0 / 3.0) <= 1e-12  # n = 2 entry is b_2 / a_2


def test_probe_matches_coefficient_ratios():
    for spec in (cl.szego(), cl.drury_arveson(2), cl.bergman(2), cl.bergman(3),
                 cl.dirichlet_t(0.5), cl.dirichlet_t(1.0), cl.dirichlet_t(2.0)):
        table = cl.build_table(spec, 40)
        probe = cl.cnp_zero_tuple_probe(table, 30)
        for k, n in enumerate(range(2, 31)):
            expected = table.b[n] / table.a[n]
            assert abs(probe[k] - expected) <= 1e-12, (spec.label, n)


def test_probe_sign_agreement_with_classifier():
    for spec in (cl.szego(), cl.drury_arveson(2), cl.bergman(2), cl.bergman(4),
                 cl.dirichlet_t(1.0)):
        table = cl.build_table(spec, 40)
        probe = cl.cnp_zero_tuple_probe(table, 30)
        cls = cl.is_cnp(table, 30)
        probe_negative = [n for n, q in zip(range(2, 31), probe) if q < -1e-12]
        if cls.consistent:
            assert not probe_negative, spec.label
        else:
            assert probe_negative and probe_negative[0] == cls.first_failure, spec.label
