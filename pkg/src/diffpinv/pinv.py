"""Moore-Penrose inverses of the difference operators, built three independent ways.

``pinv_closed_form``
    Explicit entry formulas.  Each entry is evaluated as an integer
    numerator over a single integer denominator, so the float result is the
    correctly rounded exact value.
``pinv_generic``
    ``L+ = (L - tau J)^-1 + J / (tau n^2)`` for any nonzero ``tau``, with
    ``J`` the all-ones matrix.
``pinv_spectral``
    Symmetric eigendecomposition with the single zero eigenvalue dropped.

The three agree to within rounding, which is what the test-suite checks.
"""

import csv
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.linalg as sla
from scipy.linalg import circulant

from ._validation import check_positive_int, readonly
from .exceptions import (
    EigensolverFailure,
    RankAssumptionViolated,
    SingularSystem,
    Unsupported,
)
from .operators import Boundary, Order, OperatorKind, build_operator

SPECTRAL_RTOL = 1e-8
DEFAULT_TAU = -1.0

# int64 numerators of the biharmonic Neumann formula overflow past this size
_INT64_MAX_N = 4096


class Provenance(str, Enum):
    CLOSED_FORM = "closed-form"
    GENERIC_TAU = "generic-tau"
    SPECTRAL = "spectral"


@dataclass(frozen=True, eq=False)
class PinvMatrix:
    kind: OperatorKind
    n: int
    entries: np.ndarray
    provenance: Provenance
    tau: float | None = None

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.entries
        return self.entries.astype(dtype)

    @property
    def shape(self):
        return self.entries.shape

    def column(self, k):
        return self.entries[:, k]

    def __repr__(self):
        extra = f", tau={self.tau:g}" if self.tau is not None else ""
        return f"PinvMatrix({self.kind}, n={self.n}, {self.provenance.value}{extra})"


def _index_grid(n):
    dtype = np.int64 if n <= _INT64_MAX_N else object
    idx = np.arange(n, dtype=np.int64).astype(dtype)
    rows, cols = np.meshgrid(idx, idx, indexing="ij")
    return np.maximum(rows, cols), np.minimum(rows, cols)


def _exact_ratio(num, den):
    if num.dtype == object:
        # int / int true division is correctly rounded
        return np.array([v / den for v in num.ravel()]).reshape(num.shape)
    # num is exact when it fits in 53 bits; one rounding in the division
    return num.astype(np.float64) / float(den)


def periodic_laplace_column(n):
    """First column ``a_0..a_{n-1}`` of the periodic Laplacian pseudo-inverse."""
    n = check_positive_int(n, "n")
    j = np.arange(n, dtype=np.int64 if n <= _INT64_MAX_N else object)
    return _exact_ratio((1 - n * n) + 6 * j * (n - j), 12 * n)


def periodic_biharmonic_column(n):
    """First column ``c_0..c_{n-1}`` of the periodic biharmonic pseudo-inverse."""
    n = check_positive_int(n, "n")
    k = np.arange(n, dtype=np.int64 if n <= _INT64_MAX_N else object)
    num = (1 - n * n) * (n * n + 11) + 30 * k * (n - k) * (n * k - k * k + 2)
    return _exact_ratio(num, 720 * n)


def _neumann_laplace_entries(n):
    jj, kk = _index_grid(n)  # jj >= kk; mirrored by construction
    num = -(n - 1) * (2 * n - 1) + 6 * n * jj - 3 * jj * (jj + 1) - 3 * kk * (kk + 1)
    return _exact_ratio(num, 6 * n)


def _neumann_biharmonic_entries(n):
    jj, kk = _index_grid(n)
    p = jj * (jj + 1)
    q = kk * (kk + 1)
    # every term brought over the common denominator 360 n
    num = (
        -2 * (n * n - 1) * (4 * n * n - 1)
        + 15 * (p + q) ** 2
        + 60 * p * q
        + 60 * n * n * (p + q)
        - 30 * n * (2 * jj + 1) * (p + 3 * q)
    )
    return _exact_ratio(num, 360 * n)


def pinv_closed_form(op):
    """Pseudo-inverse of ``op`` from the explicit entry formulas."""
    kind, n = op.kind, op.n
    if kind.boundary is Boundary.PERIODIC:
        if kind.order is Order.LAPLACE:
            col = periodic_laplace_column(n)
        else:
            col = periodic_biharmonic_column(n)
        entries = circulant(col)
    elif kind.order is Order.LAPLACE:
        entries = _neumann_laplace_entries(n)
    else:
        entries = _neumann_biharmonic_entries(n)
    return PinvMatrix(kind, n, readonly(entries), Provenance.CLOSED_FORM)


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _split(a):
    c = 134217729.0 * a  # 2**27 + 1
    hi = c - (c - a)
    return hi, a - hi


def _two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def compensated_residual(rhs, mat, x):
    """``rhs - mat @ x`` accumulated with error-free transformations.

    The result is as accurate as if computed in twice the working precision,
    while every operation stays in float64.
    """
    s = np.array(rhs, dtype=np.float64, copy=True)
    c = np.zeros_like(s)
    for k in range(mat.shape[1]):
        p, pe = _two_prod(-mat[:, k : k + 1], x[k : k + 1, :])
        s, se = _two_sum(s, p)
        c += se + pe
    return s + c


def _refined_solve(mat, rhs, max_steps=4):
    """Dense LU solve, then iterative refinement on compensated residuals."""
    with warnings.catch_warnings():
        warnings.simplefilter("error", sla.LinAlgWarning)
        try:
            lu = sla.lu_factor(mat, check_finite=False)
        except (sla.LinAlgWarning, np.linalg.LinAlgError, ValueError) as exc:
            raise SingularSystem(str(exc)) from exc
    pivots = np.abs(np.diag(lu[0]))
    if pivots.min() <= mat.shape[0] * np.finfo(float).eps * pivots.max():
        raise SingularSystem("matrix is numerically singular")
    x = sla.lu_solve(lu, rhs, check_finite=False)
    for _ in range(max_steps):
        dx = sla.lu_solve(lu, compensated_residual(rhs, mat, x), check_finite=False)
        x += dx
        if np.abs(dx).max() <= 4 * np.finfo(float).eps * np.abs(x).max():
            break
    return x


def regularized_inverse(op, tau=DEFAULT_TAU):
    """Return ``(L - tau J)^-1`` for nonzero ``tau``."""
    tau = float(tau)
    if tau == 0.0 or not np.isfinite(tau):
        raise ValueError(f"tau must be a nonzero finite real, got {tau}")
    n = op.n
    return _refined_solve(op.dense - tau * np.ones((n, n)), np.eye(n))


def pinv_generic(op, tau=DEFAULT_TAU):
    """Pseudo-inverse via the regularized inverse plus a rank-one correction."""
    inv = regularized_inverse(op, tau)
    n = op.n
    entries = inv + 1.0 / (float(tau) * n * n)
    entries = 0.5 * (entries + entries.T)
    return PinvMatrix(op.kind, n, readonly(entries), Provenance.GENERIC_TAU, float(tau))


def _eigh(mat):
    try:
        return np.linalg.eigh(mat)
    except np.linalg.LinAlgError as exc:
        raise EigensolverFailure(str(exc)) from exc


def spectrum(op):
    """Eigenvalues of the dense operator, ascending."""
    try:
        return np.linalg.eigvalsh(op.dense)
    except np.linalg.LinAlgError as exc:
        raise EigensolverFailure(str(exc)) from exc


def pinv_spectral(op, rtol=SPECTRAL_RTOL):
    """Pseudo-inverse by eigendecomposition, dropping the null eigenvalue.

    Biharmonic operators share eigenvectors with their Laplacian factor
    ``M``; decomposing ``M`` and inverting ``-mu^2`` avoids squaring the
    condition number before the eigensolver sees it.
    """
    mat = op.laplace_dense if op.kind.is_biharmonic else op.dense
    w, vecs = _eigh(mat)
    small = np.abs(w) <= rtol * np.abs(w).max()
    if small.sum() != 1:
        raise RankAssumptionViolated(
            f"{small.sum()} eigenvalues below {rtol:g} * max|lambda| for {op}; expected exactly 1"
        )
    inv = np.zeros_like(w)
    if op.kind.is_biharmonic:
        inv[~small] = -1.0 / w[~small] ** 2
    else:
        inv[~small] = 1.0 / w[~small]
    entries = (vecs * inv) @ vecs.T
    entries = 0.5 * (entries + entries.T)
    return PinvMatrix(op.kind, op.n, readonly(entries), Provenance.SPECTRAL)


def penrose_residuals(lmat, pmat):
    """Max-norm residuals of the four Moore-Penrose conditions.

    Returns a dict with keys ``LPL``, ``PLP`` (relative to ``max|L|`` and
    ``max|P|``), and ``LP_sym``, ``PL_sym`` (absolute).
    """
    lmat = np.asarray(lmat, dtype=float)
    pmat = np.asarray(pmat, dtype=float)
    lp = lmat @ pmat
    pl = pmat @ lmat
    return {
        "LPL": np.abs(lp @ lmat - lmat).max() / np.abs(lmat).max(),
        "PLP": np.abs(pl @ pmat - pmat).max() / np.abs(pmat).max(),
        "LP_sym": np.abs(lp - lp.T).max(),
        "PL_sym": np.abs(pl - pl.T).max(),
    }


def trig_identity_residual(n, j):
    """Residuals of the four cosine/sine sums against their closed forms.

    For ``k = 1..n-1`` and ``s_k = sin(k pi / n)``::

        sum cos(2 pi k j/n) / s_k^2 = (n^2-1)/3 - 2 j (n-j)
        sum cos(2 pi k j/n) / s_k^4 = (n^2-1)(n^2+11)/45 - 2 j (n-j)(n j - j^2 + 2)/3
        sum sin(2 pi k j/n) / s_k^2 = 0
        sum sin(2 pi k j/n) / s_k^4 = 0

    At ``j = 0`` the second line gives ``sum 1/s_k^4 = (n^2-1)(n^2+11)/45``.
    """
    n = check_positive_int(n, "n", minimum=2)
    if not 0 <= j < n:
        raise ValueError(f"j must lie in [0, {n - 1}], got {j}")
    k = np.arange(1, n)
    s2 = np.sin(np.pi * k / n) ** 2
    # reduce k*j mod n before scaling to keep the phase accurate
    phase = 2.0 * np.pi * ((k * j) % n) / n
    cos_p, sin_p = np.cos(phase), np.sin(phase)
    rhs2 = (n * n - 1) / 3.0 - 2.0 * j * (n - j)
    rhs4 = (n * n - 1) * (n * n + 11) / 45.0 - 2.0 * j * (n - j) * (n * j - j * j + 2) / 3.0
    return (
        abs(np.sum(cos_p / s2) - rhs2),
        abs(np.sum(cos_p / s2**2) - rhs4),
        abs(np.sum(sin_p / s2)),
        abs(np.sum(sin_p / s2**2)),
    )


def column_norm_squared_closed_form(kind, n):
    """Squared Euclidean norm shared by all columns of the periodic Laplacian pseudo-inverse."""
    if not isinstance(kind, OperatorKind):
        kind = OperatorKind(*kind)
    if kind.order is not Order.LAPLACE or kind.boundary is not Boundary.PERIODIC:
        raise Unsupported(f"no closed-form column norm for {kind}; compute it numerically")
    n = check_positive_int(n, "n")
    return (n * n + 11) * (n * n - 1) / (720.0 * n)


def build_pinv(kind, n, method="closed-form", tau=DEFAULT_TAU):
    """Convenience wrapper: build the operator and its pseudo-inverse in one call."""
    op = build_operator(kind, n)
    method = Provenance(method)
    if method is Provenance.CLOSED_FORM:
        return pinv_closed_form(op)
    if method is Provenance.GENERIC_TAU:
        return pinv_generic(op, tau)
    return pinv_spectral(op)


def dump_csv(pinv, path):
    """Write the matrix as plain CSV, one row per line, 17 significant digits."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        for row in np.asarray(pinv):
            writer.writerow(format(float(v), ".17g") for v in row)


def load_csv(path):
    return np.loadtxt(path, delimiter=",", ndmin=2)
