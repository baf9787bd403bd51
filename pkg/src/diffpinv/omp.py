"""Orthogonal matching pursuit over a pseudo-inverse dictionary.

Atoms are selected greedily by absolute correlation with the current
residual, and after every selection all coefficients are refit by least
squares.  Optionally the final refit enforces ``sum(g) = 0``, the condition
under which ``u = L+ g`` is an exact solution of the inpainting equations.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_triangular

from ._validation import check_positive_int, check_vector, readonly
from .exceptions import (
    BudgetTooLarge,
    IndexOutOfRange,
    NotMeanZero,
    RankDeficientSelection,
)

CONDITION_LIMIT = 1e12
EARLY_STOP_RTOL = 1e-12
MEAN_ZERO_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class SparseCode:
    """Selected atom indices, their coefficients, and the stored signal mean.

    Coefficients refer to the unnormalized atoms (columns of ``L+``).
    """

    indices: tuple
    coefficients: np.ndarray
    mean: float = 0.0
    constrained: bool = False

    def __len__(self):
        return len(self.indices)

    def dense_coefficients(self, n):
        """Full length-``n`` coefficient vector ``g`` with zeros off the support."""
        g = np.zeros(n)
        g[list(self.indices)] = self.coefficients
        return g


@dataclass
class OmpTrace:
    """Per-iteration diagnostics of one OMP run."""

    indices: list = field(default_factory=list)
    residual_norms: list = field(default_factory=list)
    residuals: list = field(default_factory=list)
    constrained_steps: list = field(default_factory=list)

    def record(self, index, residual, constrained):
        self.indices.append(index)
        self.residuals.append(residual.copy())
        self.residual_norms.append(float(np.linalg.norm(residual)))
        self.constrained_steps.append(constrained)

    def __len__(self):
        return len(self.indices)


def _least_squares(atoms, target, trace):
    q, r = np.linalg.qr(atoms)
    cond = np.linalg.cond(r)
    if not cond <= CONDITION_LIMIT:
        raise RankDeficientSelection(
            f"selected atoms are numerically dependent (condition {cond:.3g})", trace
        )
    return solve_triangular(r, q.T @ target)


def _constrained_least_squares(atoms, target, weights, trace):
    """Minimize ``||target - atoms h||`` subject to ``weights . h = 0`` (KKT system)."""
    m = atoms.shape[1]
    kkt = np.zeros((m + 1, m + 1))
    kkt[:m, :m] = atoms.T @ atoms
    kkt[:m, m] = weights
    kkt[m, :m] = weights
    rhs = np.concatenate([atoms.T @ target, [0.0]])
    try:
        sol = np.linalg.solve(kkt, rhs)
    except np.linalg.LinAlgError as exc:
        raise RankDeficientSelection(f"constrained update failed: {exc}", trace) from exc
    return sol[:m]


def omp(d, f0, k, constrained=False, constrain_every_step=False):
    """Run ``k`` OMP iterations on a mean-zero signal.

    Parameters
    ----------
    d : Dictionary
    f0 : array_like, shape (n,)
        Signal with zero mean.
    k : int
        Number of atoms to select, ``1 <= k <= n - 1``.
    constrained : bool
        Impose ``sum(g) = 0`` in the final coefficient update.
    constrain_every_step : bool
        Impose it in every update instead (only with ``constrained``).

    Returns
    -------
    code : SparseCode
    trace : OmpTrace

    Selection excludes atoms already chosen and breaks ties by the smallest
    index.  Iteration stops early once ``||r|| <= 1e-12 ||f0||``.
    """
    f0 = check_vector(f0, "f0", d.n)
    k = check_positive_int(k, "k")
    n = d.n
    if k >= n:
        raise BudgetTooLarge(f"budget k={k} must be below n={n}")
    scale = np.abs(f0).max() if n else 0.0
    if abs(f0.mean()) > MEAN_ZERO_RTOL * scale:
        raise NotMeanZero(f"mean {f0.mean():.3g} is not zero relative to max|f0|={scale:.3g}")

    trace = OmpTrace()
    f_norm = np.linalg.norm(f0)
    if f_norm == 0.0:
        return SparseCode((), readonly(np.empty(0)), 0.0, constrained), trace

    available = np.ones(d.n_atoms, dtype=bool)
    selected = []
    residual = f0
    coef = np.empty(0)
    for step in range(1, k + 1):
        scores = np.abs(d.normalized.T @ residual)
        scores[~available] = -np.inf
        idx = int(np.argmax(scores))  # first maximum wins ties
        selected.append(idx)
        available[idx] = False

        sel = np.array(selected)
        unit = d.normalized[:, sel]
        coef = _least_squares(unit, f0, trace) / d.norms[sel]
        residual = f0 - d.atoms[:, sel] @ coef

        last = step == k or np.linalg.norm(residual) <= EARLY_STOP_RTOL * f_norm
        impose = constrained and (last or constrain_every_step)
        if impose:
            weights = 1.0 / d.norms[sel]
            coef = _constrained_least_squares(unit, f0, weights, trace) * weights
            residual = f0 - d.atoms[:, sel] @ coef
        trace.record(idx, residual, impose)
        if last:
            break

    return SparseCode(tuple(selected), readonly(coef), 0.0, constrained), trace


def center(f):
    """Split ``f`` into its mean and the mean-zero remainder."""
    f = check_vector(f, "f")
    if np.ptp(f) == 0.0:
        return float(f[0]), np.zeros_like(f)
    mean = math.fsum(f) / f.size
    f0 = f - mean
    # second pass removes the rounding left by the first
    f0 -= f0.mean()
    return mean, f0


def sparse_approximate(f, d, k, constrained=False, constrain_every_step=False):
    """Approximate ``f`` by its mean plus ``k`` atoms.

    Returns ``(code, u)`` with ``u = mean + sum_i g_i a_i``.
    """
    f = check_vector(f, "f", d.n)
    mean, f0 = center(f)
    code, _ = omp(d, f0, k, constrained, constrain_every_step)
    code = SparseCode(code.indices, code.coefficients, mean, code.constrained)
    return code, reconstruct(code, d)


def reconstruct(code, d):
    """Evaluate ``mean * 1 + sum_i g_i a_i``."""
    idx = np.asarray(code.indices, dtype=np.intp)
    if idx.size and (idx.min() < 0 or idx.max() >= d.n_atoms):
        raise IndexOutOfRange(f"indices must lie in [0, {d.n_atoms - 1}]")
    coef = np.asarray(code.coefficients, dtype=np.float64)
    if coef.shape != idx.shape:
        raise ValueError("indices and coefficients differ in length")
    u = np.full(d.n, float(code.mean))
    if idx.size:
        u += d.atoms[:, idx] @ coef
    return u
