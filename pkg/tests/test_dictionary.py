import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from diffpinv.dictionary import Dictionary, build_dictionary, correlations
from diffpinv.exceptions import DimensionMismatch, ZeroColumn
from diffpinv.operators import LAPLACE_NEUMANN, LAPLACE_PERIODIC, build_operator
from diffpinv.pinv import pinv_closed_form


def _dict(kind, n):
    return build_dictionary(pinv_closed_form(build_operator(kind, n)))


def test_periodic_n3_norms():
    d = _dict(LAPLACE_PERIODIC, 3)
    np.testing.assert_allclose(d.norms**2, 2 / 27, rtol=1e-15)


def test_neumann_norms_differ():
    d = _dict(LAPLACE_NEUMANN, 8)
    assert d.norms.max() / d.norms.min() > 1 + 1e-6


@pytest.mark.parametrize("n", [3, 16, 50])
def test_dictionary_invariants(kind, n):
    d = build_dictionary(pinv_closed_form(build_operator(kind, n)))
    p = np.asarray(pinv_closed_form(build_operator(kind, n)))
    assert d.n == n and d.n_atoms == n
    np.testing.assert_array_equal(d.atoms, p)
    assert np.abs(d.atoms.mean(axis=0)).max() <= 1e-12
    assert np.all(d.norms > 0)
    np.testing.assert_allclose(np.linalg.norm(d.normalized, axis=0), 1.0, rtol=1e-14)
    np.testing.assert_allclose(d.normalized * d.norms, d.atoms, rtol=1e-15, atol=1e-300)
    if kind.is_periodic:
        np.testing.assert_allclose(d.norms, d.norms[0], rtol=1e-12)


def test_zero_column_rejected():
    atoms = np.eye(4)
    atoms[:, 2] = 0.0
    with pytest.raises(ZeroColumn):
        Dictionary.from_atoms(atoms)


def test_from_atoms_requires_matrix():
    with pytest.raises(ValueError):
        Dictionary.from_atoms(np.ones(4))


def test_self_correlation():
    d = _dict(LAPLACE_NEUMANN, 12)
    c = correlations(d, d.normalized[:, 5])
    assert c[5] == pytest.approx(1.0, abs=1e-12)
    assert np.all(np.abs(c) <= np.abs(c[5]) + 1e-15)


def test_zero_residual_correlations():
    d = _dict(LAPLACE_NEUMANN, 7)
    np.testing.assert_array_equal(correlations(d, np.zeros(7)), 0.0)


def test_correlations_match_loop(kind, rng):
    d = build_dictionary(pinv_closed_form(build_operator(kind, 16)))
    r = rng.standard_normal(16)
    loop = np.array([sum(d.normalized[i, k] * r[i] for i in range(16)) for k in range(16)])
    np.testing.assert_allclose(correlations(d, r), loop, rtol=0, atol=1e-13)


def test_correlations_length_checked():
    with pytest.raises(DimensionMismatch):
        correlations(_dict(LAPLACE_NEUMANN, 6), np.ones(5))


@settings(max_examples=50, deadline=None)
@given(
    a=st.floats(-10, 10),
    b=st.floats(-10, 10),
    seed=st.integers(0, 2**16),
)
def test_correlations_linear(a, b, seed):
    d = _dict(LAPLACE_NEUMANN, 10)
    g = np.random.default_rng(seed)
    r1, r2 = g.standard_normal(10), g.standard_normal(10)
    lhs = correlations(d, a * r1 + b * r2)
    rhs = a * correlations(d, r1) + b * correlations(d, r2)
    assert np.abs(lhs - rhs).max() <= 1e-12 * (1 + abs(a) + abs(b)) * 10
