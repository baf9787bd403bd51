"""Pseudo-inverse columns as an OMP dictionary.

Each column of ``L+`` is a discrete Green's function.  Columns are kept
twice: as-is (``atoms``) for reporting coefficients, and unit-normalized
(``normalized``) for atom selection and the least-squares updates.
"""

from dataclasses import dataclass

import numpy as np

from ._validation import check_vector, readonly
from .exceptions import ZeroColumn

ZERO_NORM_TOL = 1e-14


@dataclass(frozen=True, eq=False)
class Dictionary:
    atoms: np.ndarray
    norms: np.ndarray
    normalized: np.ndarray
    kind: object = None

    @property
    def n(self):
        return self.atoms.shape[0]

    @property
    def n_atoms(self):
        return self.atoms.shape[1]

    @classmethod
    def from_atoms(cls, atoms, kind=None):
        """Build a dictionary from an ``(n, n_atoms)`` matrix whose columns are atoms."""
        atoms = np.array(atoms, dtype=np.float64)
        if atoms.ndim != 2:
            raise ValueError(f"atoms must be a 2-D array, got shape {atoms.shape}")
        norms = np.sqrt(np.sum(atoms * atoms, axis=0))
        bad = np.flatnonzero(norms < ZERO_NORM_TOL)
        if bad.size:
            raise ZeroColumn(f"atom(s) {bad.tolist()} have norm below {ZERO_NORM_TOL:g}")
        return cls(readonly(atoms), readonly(norms), readonly(atoms / norms), kind)

    def __repr__(self):
        return f"Dictionary(n={self.n}, kind={self.kind})"


def build_dictionary(pinv):
    """Dictionary whose atoms are the columns of a :class:`~diffpinv.pinv.PinvMatrix`."""
    return Dictionary.from_atoms(np.asarray(pinv), kind=getattr(pinv, "kind", None))


def correlations(d, r):
    """Inner products of ``r`` with every unit-norm atom."""
    r = check_vector(r, "r", d.n)
    return d.normalized.T @ r
