"""Coefficient algebra for unitarily invariant kernels on the unit ball.

A unitarily invariant kernel k(z, w) = sum_n a_n <z, w>^n is determined by
its scalar coefficient sequence {a_n} with a_0 = 1 and a_n > 0.  Everything
downstream is derived from that sequence: the reciprocal sequence {b_n}
solving sum_{n>=1} b_n t^n = 1 - 1/(sum_n a_n t^n), multi-index coefficients
a_alpha = a_|alpha| * multinomial(alpha), the complete Nevanlinna-Pick
classification (all b_n >= 0), pointwise kernel evaluation, and ratio-test
radius estimates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .errors import DomainError, InsufficientCacheError, InvalidKernelError

# Multinomials are exact integers up to this total degree, log-gamma floats
# beyond it.
EXACT_MULTINOMIAL_LIMIT = 20

# Absolute tolerance below which a numerically computed b_n counts as zero
# for CNP classification.
CNP_TOL = 1e-12

RULES = ("szego", "drury_arveson", "bergman", "dirichlet_t", "custom")


# ---------------------------------------------------------------------------
# Multi-index utilities
# ---------------------------------------------------------------------------

def _compositions(n: int, d: int) -> Iterator[tuple[int, ...]]:
    if d == 1:
        yield (n,)
        return
    for k in range(n + 1):
        for rest in _compositions(n - k, d - 1):
            yield (k,) + rest


@lru_cache(maxsize=None)
def graded_indices(d: int, n: int) -> tuple[tuple[int, ...], ...]:
    """All multi-indices of length d with total degree <= n.

    Ordering is graded lexicographic and stable: primary key is the total
    degree, secondary key is ascending lexicographic order of the tuple.
    Every basis-dependent matrix in the package is reported in this order.
    """
    if d < 1 or n < 0:
        raise ValueError(f"need d >= 1 and n >= 0, got d={d}, n={n}")
    out: list[tuple[int, ...]] = []
    for deg in range(n + 1):
        out.extend(_compositions(deg, d))
    return tuple(out)


@lru_cache(maxsize=None)
def graded_index_map(d: int, n: int) -> dict[tuple[int, ...], int]:
    """Position of each multi-index inside graded_indices(d, n)."""
    return {alpha: i for i, alpha in enumerate(graded_indices(d, n))}


def multinomial(alpha: Sequence[int]) -> int | float:
    """Multinomial coefficient |alpha|! / prod(alpha_i!).

    Exact integer arithmetic for |alpha| <= 20; log-gamma beyond that, where
    the result no longer fits common fixed-width integers anyway.
    """
    entries = tuple(int(a) for a in alpha)
    if any(a < 0 for a in entries):
        raise ValueError(f"multinomial undefined for negative entries: {entries}")
    total = sum(entries)
    if total <= EXACT_MULTINOMIAL_LIMIT:
        out = math.factorial(total)
        for a in entries:
            out //= math.factorial(a)
        return out
    log_val = math.lgamma(total + 1) - sum(math.lgamma(a + 1) for a in entries)
    return math.exp(log_val)


# ---------------------------------------------------------------------------
# Kernel specifications
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KernelSpec:
    """A unitarily invariant kernel: ambient dimension plus a coefficient rule.

    rule is one of "szego", "drury_arveson", "bergman" (param: integer
    m >= 1), "dirichlet_t" (param: real t >= 0) or "custom" (param: finite
    list of positive coefficients starting with 1).
    """

    d: int
    rule: str
    param: object = None
    label: str = ""

    def __post_init__(self):
        if self.d < 1:
            raise InvalidKernelError(f"ambient dimension must be >= 1, got {self.d}")
        if self.rule not in RULES:
            raise InvalidKernelError(f"unknown rule {self.rule!r}; expected one of {RULES}")
        if self.rule == "bergman":
            m = self.param
            if not isinstance(m, int) or m < 1:
                raise InvalidKernelError(f"bergman requires integer m >= 1, got {m!r}")
        elif self.rule == "dirichlet_t":
            t = self.param
            if not isinstance(t, (int, float)) or t < 0:
                raise InvalidKernelError(f"dirichlet_t requires real t >= 0, got {t!r}")
        elif self.rule == "custom":
            coeffs = self.param
            if coeffs is None or isinstance(coeffs, (str, int, float)):
                raise InvalidKernelError("custom rule requires a sequence of coefficients")
            coeffs = tuple(float(c) for c in coeffs)
            if len(coeffs) == 0 or coeffs[0] != 1.0:
                raise InvalidKernelError("custom coefficients must start with a_0 = 1")
            if any(c <= 0.0 for c in coeffs):
                raise InvalidKernelError("custom coefficients must all be positive")
            object.__setattr__(self, "param", coeffs)
        if not self.label:
            object.__setattr__(self, "label", self._default_label())

    def _default_label(self) -> str:
        if self.rule == "bergman":
            return f"bergman({self.param})"
        if self.rule == "dirichlet_t":
            return f"dirichlet_t({self.param})"
        if self.rule == "custom":
            return "custom"
        return self.rule


def szego(d: int = 1, label: str = "") -> KernelSpec:
    return KernelSpec(d=d, rule="szego", label=label)


def drury_arveson(d: int, label: str = "") -> KernelSpec:
    return KernelSpec(d=d, rule="drury_arveson", label=label)


def bergman(m: int, d: int = 1, label: str = "") -> KernelSpec:
    return KernelSpec(d=d, rule="bergman", param=m, label=label)


def dirichlet_t(t: float, d: int = 1, label: str = "") -> KernelSpec:
    return KernelSpec(d=d, rule="dirichlet_t", param=t, label=label)


def custom_kernel(coeffs: Sequence[float], d: int = 1, label: str = "") -> KernelSpec:
    return KernelSpec(d=d, rule="custom", param=tuple(coeffs), label=label)


def _scalar_coeffs(spec: KernelSpec, n: int) -> np.ndarray:
    if spec.rule in ("szego", "drury_arveson"):
        return np.ones(n + 1)
    if spec.rule == "bergman":
        m = spec.param
        a = np.empty(n + 1)
        a[0] = 1.0
        for k in range(1, n + 1):
            # binomial(k + m - 1, m - 1) via the stable recurrence
            a[k] = a[k - 1] * (k + m - 1) / k
        return a
    if spec.rule == "dirichlet_t":
        t = float(spec.param)
        return (np.arange(n + 1) + 1.0) ** (-t)
    # custom: missing tail entries are an error, never extrapolated
    coeffs = spec.param
    if n + 1 > len(coeffs):
        raise InvalidKernelError(
            f"custom rule supplies {len(coeffs)} coefficients, degree {n} requested"
        )
    return np.asarray(coeffs[: n + 1], dtype=float)


# ---------------------------------------------------------------------------
# Coefficient tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoeffTable:
    """Cached prefix of the scalar sequences {a_n} and {b_n} for one kernel.

    Immutable after construction; the multi-index cache is filled lazily but
    only ever stores values derived from the frozen arrays.
    """

    spec: KernelSpec
    a: np.ndarray
    b: np.ndarray | None = None
    _multi_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        a.setflags(write=False)
        object.__setattr__(self, "a", a)
        if self.b is not None:
            b = np.asarray(self.b, dtype=float)
            b.setflags(write=False)
            object.__setattr__(self, "b", b)

    @property
    def n_max(self) -> int:
        return len(self.a) - 1

    @property
    def d(self) -> int:
        return self.spec.d

    def require_b(self, n: int | None = None) -> np.ndarray:
        if self.b is None:
            raise InsufficientCacheError("inverted coefficients not computed; call invert_coefficients")
        if n is not None and n > self.n_max:
            raise InsufficientCacheError(f"table cached through degree {self.n_max}, degree {n} requested")
        return self.b

    def require_a(self, n: int) -> np.ndarray:
        if n > self.n_max:
            raise InsufficientCacheError(f"table cached through degree {self.n_max}, degree {n} requested")
        return self.a


def generate_coeffs(spec: KernelSpec, n: int) -> CoeffTable:
    """Generate a_0 .. a_n for the rule of spec.  a_0 is exactly 1."""
    if n < 0:
        raise ValueError(f"degree must be >= 0, got {n}")
    a = _scalar_coeffs(spec, n)
    if a[0] != 1.0:
        raise InvalidKernelError("generated sequence must start with a_0 = 1")
    if np.any(a <= 0.0):
        raise InvalidKernelError("generated coefficients must be strictly positive")
    return CoeffTable(spec=spec, a=a)


def invert_coefficients(table: CoeffTable) -> CoeffTable:
    """Fill the reciprocal sequence {b_n} with sum b_n t^n = 1 - 1/(sum a_n t^n).

    Convolution recursion: b_n = a_n - sum_{j=1}^{n-1} b_j a_{n-j}, which
    makes b_1 = a_1 bit-exact.  Total for every positive input sequence.
    For custom coefficient lists the relation is a formal power-series
    statement about the cached prefix; nothing is claimed about pointwise
    values of the reciprocal beyond it.
    """
    a = table.a
    n_max = table.n_max
    b = np.zeros(n_max + 1)
    for n in range(1, n_max + 1):
        acc = a[n]
        for j in range(1, n):
            acc -= b[j] * a[n - j]
        b[n] = acc
    return CoeffTable(spec=table.spec, a=a, b=b)


def build_table(spec: KernelSpec, n: int) -> CoeffTable:
    """Convenience: generate and invert in one step."""
    return invert_coefficients(generate_coeffs(spec, n))


def multi_coeff(table: CoeffTable, alpha: Sequence[int], which: str = "a") -> float:
    """Multi-index coefficient a_alpha or b_alpha.

    a_alpha = a_|alpha| * multinomial(alpha) on nonnegative indices and 0 as
    soon as any entry is negative; b_alpha analogously but undefined at
    alpha = 0.
    """
    if which not in ("a", "b"):
        raise ValueError(f"which must be 'a' or 'b', got {which!r}")
    alpha = tuple(int(x) for x in alpha)
    if len(alpha) != table.d:
        raise ValueError(f"multi-index length {len(alpha)} does not match d={table.d}")
    key = (alpha, which)
    cached = table._multi_cache.get(key)
    if cached is not None:
        return cached
    if any(x < 0 for x in alpha):
        return 0.0
    deg = sum(alpha)
    if which == "b":
        if deg == 0:
            raise ValueError("b_alpha is undefined at alpha = 0")
        scalars = table.require_b(deg)
    else:
        scalars = table.require_a(deg)
    if deg > table.n_max:
        raise InsufficientCacheError(f"degree {deg} exceeds cached maximum {table.n_max}")
    value = float(scalars[deg]) * float(multinomial(alpha))
    table._multi_cache[key] = value
    return value


# ---------------------------------------------------------------------------
# CNP classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CnpClassification:
    """Degree-limited CNP certificate: all b_n >= 0 through the given degree.

    A consistent verdict certifies nonnegativity only up to `degree`; it is
    not a proof for the full sequence.
    """

    consistent: bool
    degree: int
    first_failure: int | None = None
    value: float | None = None

    def describe(self) -> str:
        if self.consistent:
            return f"cnp_consistent(N={self.degree})"
        return f"not_cnp(n={self.first_failure}, b={self.value:.6g})"


def is_cnp(table: CoeffTable, n: int | None = None, tol_zero: float = CNP_TOL) -> CnpClassification:
    """Classify the kernel by the sign pattern of b_1 .. b_n."""
    b = table.require_b()
    if n is None:
        n = table.n_max
    table.require_b(n)
    for k in range(1, n + 1):
        if b[k] < -tol_zero:
            return CnpClassification(consistent=False, degree=n, first_failure=k, value=float(b[k]))
    return CnpClassification(consistent=True, degree=n)


# ---------------------------------------------------------------------------
# Pointwise evaluation and radius estimates
# ---------------------------------------------------------------------------

def as_point(z, d: int) -> np.ndarray:
    """Coerce a scalar or sequence to a complex point in C^d."""
    arr = np.atleast_1d(np.asarray(z, dtype=complex))
    if arr.shape != (d,):
        raise ValueError(f"point has shape {arr.shape}, expected ({d},)")
    return arr


@dataclass(frozen=True)
class KernelValue:
    value: complex
    tail_term: float


def kernel_eval(table: CoeffTable, z, w, n: int | None = None) -> KernelValue:
    """Truncated kernel value sum_{k<=n} a_k <z, w>^k with <z, w> = sum z_i conj(w_i).

    The magnitude of the last retained term is reported as a truncation
    diagnostic.  Points must lie strictly inside the unit ball.
    """
    z = as_point(z, table.d)
    w = as_point(w, table.d)
    for name, p in (("z", z), ("w", w)):
        if np.linalg.norm(p) >= 1.0:
            raise DomainError(f"{name} must lie strictly inside the unit ball")
    if n is None:
        n = table.n_max
    a = table.require_a(n)
    x = complex(np.vdot(w, z))
    value = 0.0 + 0.0j
    power = 1.0 + 0.0j
    last = 0.0
    for k in range(n + 1):
        term = a[k] * power
        value += term
        last = abs(term)
        power *= x
    return KernelValue(value=value, tail_term=last)


@dataclass(frozen=True)
class RadiusEstimate:
    radius: float
    reliable: bool
    exact_polynomial: bool
    spread: float


def estimate_radius(table: CoeffTable, which: str = "a") -> RadiusEstimate:
    """Ratio-test estimate of the radius of convergence of the a- or b-series.

    Consecutive-coefficient ratios |c_n / c_{n+1}| are averaged over the last
    quartile of cached indices; zero coefficients are skipped, with the ratio
    of the surviving neighbours taken to the power 1/gap so that a sparse
    series is still estimated consistently.  If everything past the last
    quartile boundary is zero the series is an exact polynomial and the
    radius is +inf.
    """
    if which == "a":
        coeffs = np.asarray(table.a)
        start = 0
    elif which == "b":
        coeffs = np.asarray(table.require_b())[1:]
        start = 1
    else:
        raise ValueError(f"which must be 'a' or 'b', got {which!r}")
    if len(coeffs) < 10:
        raise InsufficientCacheError("radius estimate needs at least 10 cached coefficients")

    top = start + len(coeffs) - 1
    tail_start = 3 * top // 4
    nonzero = [(i + start, c) for i, c in enumerate(coeffs) if c != 0.0]
    in_tail = [idx for idx, _ in nonzero if idx > tail_start]
    if len(nonzero) < 2 or not in_tail:
        return RadiusEstimate(radius=math.inf, reliable=True, exact_polynomial=True, spread=0.0)

    ratios = []
    for (i0, c0), (i1, c1) in zip(nonzero[:-1], nonzero[1:]):
        ratios.append(((i1, c1), (abs(c0) / abs(c1)) ** (1.0 / (i1 - i0))))
    window = [r for (i1, _), r in ratios if i1 > tail_start]
    if not window:
        window = [r for _, r in ratios[-max(3, len(ratios) // 4):]]
    mean = float(np.mean(window))
    spread = float((max(window) - min(window)) / mean) if mean > 0 else math.inf
    return RadiusEstimate(radius=mean, reliable=spread <= 0.10, exact_polynomial=False, spread=spread)
