"""The four symmetric difference matrices: periodic/Neumann Laplacian and biharmonic.

Every operator ``L`` built here is symmetric, has rank ``n - 1`` and
annihilates the constant vector.  The biharmonic matrices are formed as the
negated square of the matching Laplacian rather than from a five-point
stencil, which keeps the Neumann boundary rows and small-``n`` wraparound
right without special cases.
"""

from dataclasses import dataclass
from enum import Enum
from functools import cached_property

import numpy as np

from ._validation import check_positive_int, check_vector, readonly
from .exceptions import SizeTooSmall

MIN_SIZE = 3


class Order(str, Enum):
    LAPLACE = "laplace"
    BIHARMONIC = "biharmonic"


class Boundary(str, Enum):
    PERIODIC = "periodic"
    NEUMANN = "neumann"


@dataclass(frozen=True)
class OperatorKind:
    order: Order
    boundary: Boundary

    def __post_init__(self):
        object.__setattr__(self, "order", Order(self.order))
        object.__setattr__(self, "boundary", Boundary(self.boundary))

    @property
    def is_periodic(self):
        return self.boundary is Boundary.PERIODIC

    @property
    def is_biharmonic(self):
        return self.order is Order.BIHARMONIC

    @property
    def laplace(self):
        """The Laplacian kind with the same boundary condition."""
        return OperatorKind(Order.LAPLACE, self.boundary)

    def __str__(self):
        return f"{self.order.value}/{self.boundary.value}"


LAPLACE_PERIODIC = OperatorKind(Order.LAPLACE, Boundary.PERIODIC)
LAPLACE_NEUMANN = OperatorKind(Order.LAPLACE, Boundary.NEUMANN)
BIHARMONIC_PERIODIC = OperatorKind(Order.BIHARMONIC, Boundary.PERIODIC)
BIHARMONIC_NEUMANN = OperatorKind(Order.BIHARMONIC, Boundary.NEUMANN)
ALL_KINDS = (LAPLACE_PERIODIC, LAPLACE_NEUMANN, BIHARMONIC_PERIODIC, BIHARMONIC_NEUMANN)


def _laplace_dense(boundary, n):
    # accumulate shifts so that n=2 periodic gets circ(-2, 2), not circ(-2, 1)
    mat = -2.0 * np.eye(n)
    if boundary is Boundary.PERIODIC:
        shift = np.roll(np.eye(n), 1, axis=1)
        mat += shift + shift.T
    else:
        mat += np.eye(n, k=1) + np.eye(n, k=-1)
        mat[0, 0] = -1.0
        mat[-1, -1] = -1.0
    return mat


@dataclass(frozen=True, eq=False)
class DifferenceOperator:
    """One of the four difference matrices at order ``n``.

    The dense matrix is materialized lazily and returned read-only.
    """

    kind: OperatorKind
    n: int

    @cached_property
    def laplace_dense(self):
        """Dense Laplacian with this operator's boundary (the factor of a biharmonic)."""
        return readonly(_laplace_dense(self.kind.boundary, self.n))

    @cached_property
    def dense(self):
        lap = self.laplace_dense
        if self.kind.is_biharmonic:
            # integer entries, so the product is exact
            return readonly(-(lap @ lap))
        return lap

    def matvec(self, x):
        return matvec(self, x)

    def __repr__(self):
        return f"DifferenceOperator({self.kind}, n={self.n})"


def build_operator(kind, n, min_size=MIN_SIZE):
    """Construct the difference operator of the given kind and size.

    ``min_size`` may be lowered to 2 for oracle cross-checks; the default
    rejects ``n < 3``.
    """
    if not isinstance(kind, OperatorKind):
        kind = OperatorKind(*kind)
    n = check_positive_int(n, "n", minimum=0)
    if n < max(min_size, 2):
        raise SizeTooSmall(f"n={n} is below the minimum size {max(min_size, 2)}")
    return DifferenceOperator(kind, n)


def _apply_laplace(boundary, x):
    if boundary is Boundary.PERIODIC:
        return np.roll(x, 1) + np.roll(x, -1) - 2.0 * x
    # reflecting boundary: ghost values mirror the edge samples
    padded = np.concatenate(([x[0]], x, [x[-1]]))
    return padded[:-2] + padded[2:] - 2.0 * x


def matvec(op, x):
    """Apply ``op`` to ``x`` via its stencil, without forming the dense matrix."""
    x = check_vector(x, "x", op.n)
    y = _apply_laplace(op.kind.boundary, x)
    if op.kind.is_biharmonic:
        return -_apply_laplace(op.kind.boundary, y)
    return y
