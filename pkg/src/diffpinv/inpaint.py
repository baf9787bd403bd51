"""Diffusion inpainting from a sparse set of known samples.

Given known values ``f_k`` on a mask ``Gamma``, the inpainted signal ``u``
satisfies ``u_k = f_k`` on ``Gamma`` and ``(L u)_k = 0`` elsewhere, i.e.
``C (u - f) - (I - C) L u = 0`` with ``C = diag(mask indicator)``.

For the Neumann Laplacian the solution is the piecewise-linear interpolant
of the known samples, extended by constants beyond the first and last
knot; :func:`spline_reconstruct` builds it block by block and serves as an
independent check on :func:`solve_inpainting`.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from ._validation import check_positive_int, check_vector
from .exceptions import DimensionMismatch, EmptyMask, IndexOutOfRange, SingularSystem

RESIDUAL_RTOL = 1e-10


@dataclass(frozen=True)
class Mask:
    n: int
    gamma: tuple

    def __post_init__(self):
        check_positive_int(self.n, "n")
        gamma = tuple(sorted(int(i) for i in self.gamma))
        if not gamma:
            raise EmptyMask("mask must contain at least one index")
        if len(set(gamma)) != len(gamma):
            raise ValueError("mask indices must be distinct")
        if gamma[0] < 0 or gamma[-1] >= self.n:
            raise IndexOutOfRange(f"mask indices must lie in [0, {self.n - 1}]")
        object.__setattr__(self, "gamma", gamma)

    @property
    def indicator(self):
        c = np.zeros(self.n)
        c[list(self.gamma)] = 1.0
        return c

    def __len__(self):
        return len(self.gamma)


def _sorted_data(gamma, data):
    """Pair indices with values and sort both by index."""
    gamma = np.asarray(gamma, dtype=np.intp)
    data = check_vector(data, "data")
    if data.shape != gamma.shape:
        raise DimensionMismatch(f"{data.size} values for {gamma.size} mask indices")
    order = np.argsort(gamma, kind="stable")
    return gamma[order], data[order]


@dataclass(frozen=True, eq=False)
class InpaintProblem:
    """An operator, a mask, and one value per mask index (given in any order)."""

    op: object
    mask: Mask
    data: np.ndarray

    @classmethod
    def from_pairs(cls, op, indices, values):
        if len(indices) == 0:
            raise EmptyMask("mask must contain at least one index")
        gamma, data = _sorted_data(indices, values)
        return cls(op, Mask(op.n, tuple(gamma)), data)

    def __post_init__(self):
        if self.mask.n != self.op.n:
            raise DimensionMismatch(f"mask size {self.mask.n} != operator size {self.op.n}")
        data = check_vector(self.data, "data", len(self.mask))
        object.__setattr__(self, "data", data)

    def known_vector(self):
        """Length-``n`` vector of known values, zero off the mask."""
        full = np.zeros(self.op.n)
        full[list(self.mask.gamma)] = self.data
        return full

    def system_matrix(self):
        c = self.mask.indicator
        return np.diag(c) - (1.0 - c)[:, None] * self.op.dense


def solve_inpainting(problem):
    """Solve ``C (u - f) - (I - C) L u = 0`` for ``u``.

    The rows on the mask just pin ``u_k = f_k``; they are eliminated and the
    remaining dense system ``L[free, free] u_free = -L[free, known] f_known``
    is solved directly, so the known samples are reproduced exactly.
    """
    n = problem.op.n
    known = np.asarray(problem.mask.gamma, dtype=np.intp)
    free = np.setdiff1d(np.arange(n), known)
    u = problem.known_vector()
    if free.size:
        lmat = problem.op.dense
        a = lmat[np.ix_(free, free)]
        b = -lmat[np.ix_(free, known)] @ problem.data
        try:
            lu = sla.lu_factor(a, check_finite=False)
        except (np.linalg.LinAlgError, ValueError) as exc:
            raise SingularSystem(str(exc)) from exc
        pivots = np.abs(np.diag(lu[0]))
        if pivots.min() <= free.size * np.finfo(float).eps * pivots.max():
            raise SingularSystem("inpainting system is singular for this mask")
        u[free] = sla.lu_solve(lu, b, check_finite=False)

    res = inpainting_residual(problem, u)
    if res > RESIDUAL_RTOL * (1.0 + np.abs(problem.data).max()):
        raise SingularSystem(f"inpainting residual {res:.3g} exceeds tolerance")
    return u


def inpainting_residual(problem, u):
    """Max-norm residual of ``C (u - f) - (I - C) L u``."""
    f = problem.known_vector()
    c = problem.mask.indicator
    lu = problem.op.dense @ u
    return float(np.abs(c * (u - f) - (1.0 - c) * lu).max())


def implied_source(problem, u):
    """Sparse vector ``g = C (u - f + L u)`` with ``L u = g`` when ``u`` solves the problem."""
    c = problem.mask.indicator
    return c * (u - problem.known_vector() + problem.op.dense @ u)


def spline_reconstruct(mask, data, n=None):
    """Piecewise-linear interpolant of the known samples, constant past the end knots.

    Between consecutive knots ``l_j < l_{j+1}`` with gap ``m = l_{j+1} - l_j``::

        u[l_j + k] = ((m - k) f[l_j] + k f[l_{j+1}]) / m,   k = 0..m

    and ``u`` equals the first (last) known value before the first (after the
    last) knot.  This is the inpainting solution for the Neumann Laplacian.
    """
    if isinstance(mask, Mask):
        n = mask.n if n is None else n
        gamma = mask.gamma
    else:
        gamma = tuple(mask)
    if n is None:
        raise ValueError("n is required when mask is not a Mask")
    if len(gamma) == 0:
        raise EmptyMask("mask must contain at least one index")
    knots, values = _sorted_data(gamma, data)
    u = np.empty(n)
    u[: knots[0] + 1] = values[0]
    u[knots[-1] :] = values[-1]
    for left, right, fl, fr in zip(knots[:-1], knots[1:], values[:-1], values[1:]):
        gap = right - left
        k = np.arange(gap + 1)
        u[left : right + 1] = ((gap - k) * fl + k * fr) / gap
    return u
