import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from diffpinv.dictionary import Dictionary, build_dictionary
from diffpinv.exceptions import (
    BudgetTooLarge,
    DimensionMismatch,
    IndexOutOfRange,
    NotMeanZero,
    RankDeficientSelection,
)
from diffpinv.operators import ALL_KINDS, LAPLACE_NEUMANN, LAPLACE_PERIODIC, build_operator
from diffpinv.omp import SparseCode, center, omp, reconstruct, sparse_approximate
from diffpinv.pinv import pinv_closed_form


def _dict(kind, n):
    return build_dictionary(pinv_closed_form(build_operator(kind, n)))


def _mean_zero(rng, n):
    f = rng.standard_normal(n)
    return f - f.mean()


def test_single_scaled_atom(kind):
    d = _dict(kind, 20)
    code, trace = omp(d, 3.0 * d.atoms[:, 7], 1)
    assert code.indices == (7,)
    assert code.coefficients[0] == pytest.approx(3.0, rel=1e-10)
    assert trace.residual_norms[-1] <= 1e-10


def test_full_budget_recovers_signal(kind, rng):
    n = 24
    d = _dict(kind, n)
    f0 = _mean_zero(rng, n)
    code, trace = omp(d, f0, n - 1)
    # direct least-squares projection onto the selected atoms
    sel = d.atoms[:, list(code.indices)]
    coef, *_ = np.linalg.lstsq(sel, f0, rcond=None)
    assert np.linalg.norm(f0 - sel @ coef) <= 1e-8 * np.linalg.norm(f0)
    assert trace.residual_norms[-1] <= 1e-8 * np.linalg.norm(f0)


def test_selection_maximizes_correlation(kind, rng):
    n = 30
    d = _dict(kind, n)
    f0 = _mean_zero(rng, n)
    code, trace = omp(d, f0, 8)
    residual = f0
    chosen = []
    for idx, r_next in zip(trace.indices, trace.residuals):
        scores = np.abs(d.normalized.T @ residual)
        scores[chosen] = -1.0
        assert scores[idx] >= scores.max() - 1e-12
        chosen.append(idx)
        residual = r_next
    assert len(set(code.indices)) == len(code.indices) == 8


def test_residual_orthogonal_and_monotone(kind, rng):
    n = 32
    d = _dict(kind, n)
    f0 = _mean_zero(rng, n)
    _, trace = omp(d, f0, 12)
    norms = trace.residual_norms
    assert all(b <= a + 1e-12 for a, b in zip(norms, norms[1:]))
    for step, r in enumerate(trace.residuals, 1):
        sel = list(trace.indices[:step])
        assert np.abs(d.normalized[:, sel].T @ r).max() <= 1e-9


def test_tie_breaks_to_smallest_index():
    # two orthogonal unit atoms equally correlated with f
    atoms = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
    d = Dictionary.from_atoms(atoms)
    code, _ = omp(d, atoms[:, 0] + atoms[:, 1], 1)
    assert code.indices == (0,)


def test_constrained_sum_zero(kind, rng):
    d = _dict(kind, 40)
    f0 = _mean_zero(rng, 40)
    code, trace = omp(d, f0, 9, constrained=True)
    g = code.coefficients
    assert abs(g.sum()) <= 1e-9 * np.abs(g).max()
    assert code.constrained
    assert trace.constrained_steps == [False] * 8 + [True]


def test_constrain_every_step(rng):
    d = _dict(LAPLACE_NEUMANN, 30)
    f0 = _mean_zero(rng, 30)
    _, trace = omp(d, f0, 5, constrained=True, constrain_every_step=True)
    assert all(trace.constrained_steps)


def test_constrained_early_stop_keeps_constraint():
    d = _dict(LAPLACE_NEUMANN, 16)
    f0 = 2.0 * d.atoms[:, 3] - 2.0 * d.atoms[:, 9]
    code, trace = omp(d, f0, 10, constrained=True)
    assert len(code) < 10
    assert trace.constrained_steps[-1]
    assert abs(code.coefficients.sum()) <= 1e-9 * np.abs(code.coefficients).max()


def test_constrained_error_not_smaller(kind, rng):
    d = _dict(kind, 48)
    f = rng.uniform(0, 1, 48)
    free, u_free = sparse_approximate(f, d, 10)
    con, u_con = sparse_approximate(f, d, 10, constrained=True)
    assert free.indices == con.indices
    assert np.linalg.norm(f - u_con) >= np.linalg.norm(f - u_free) - 1e-12


def test_constrained_result_is_inpainting_solution(rng):
    # with sum(g) = 0, u0 = L+ g solves L u0 = g exactly
    op = build_operator(LAPLACE_NEUMANN, 32)
    d = build_dictionary(pinv_closed_form(op))
    code, _ = omp(d, _mean_zero(rng, 32), 6, constrained=True)
    g = code.dense_coefficients(32)
    u0 = reconstruct(code, d)
    np.testing.assert_allclose(op.dense @ u0, g, atol=1e-9)


def test_early_stop_on_exact_fit():
    d = _dict(LAPLACE_NEUMANN, 12)
    f0 = d.atoms[:, 2] - 0.5 * d.atoms[:, 8]
    code, trace = omp(d, f0, 6)
    assert sorted(code.indices) == [2, 8]
    assert trace.residual_norms[-1] <= 1e-12 * np.linalg.norm(f0)


def test_zero_signal_gives_empty_code():
    d = _dict(LAPLACE_NEUMANN, 8)
    code, trace = omp(d, np.zeros(8), 3)
    assert len(code) == 0 and len(trace) == 0


def test_not_mean_zero():
    d = _dict(LAPLACE_NEUMANN, 8)
    with pytest.raises(NotMeanZero):
        omp(d, np.arange(8.0), 2)


@pytest.mark.parametrize("k", [8, 9])
def test_budget_too_large(k):
    with pytest.raises(BudgetTooLarge):
        omp(_dict(LAPLACE_NEUMANN, 8), np.zeros(8), k)


def test_budget_must_be_positive():
    with pytest.raises(ValueError):
        omp(_dict(LAPLACE_NEUMANN, 8), np.zeros(8), 0)


def test_length_mismatch():
    with pytest.raises(DimensionMismatch):
        omp(_dict(LAPLACE_NEUMANN, 8), np.zeros(7), 2)


def test_dependent_selection_aborts_with_trace():
    a = np.array([1.0, -1, 0, 0, 0])
    b = np.array([0.0, 0, 1, -1, 0])
    e = np.array([1.0, 1, 1, 1, -4])
    extra = np.array([1.0, 1, -1, -1, 0])
    d = Dictionary.from_atoms(np.column_stack([a, b, a + b, e]))
    with pytest.raises(RankDeficientSelection) as info:
        omp(d, a + b + 0.5 * e + 0.1 * extra, 4)
    assert info.value.trace.indices == [3, 2, 0]


def test_center_constant_exact():
    mean, f0 = center(np.full(7, 0.3))
    assert mean == 0.3
    np.testing.assert_array_equal(f0, 0.0)


def test_center_mean_zero(rng):
    f = rng.uniform(0, 1, 101)
    mean, f0 = center(f)
    assert mean == pytest.approx(f.mean(), rel=1e-15)
    assert abs(f0.mean()) <= 1e-15


def test_constant_signal_reconstructed_exactly(kind):
    d = _dict(kind, 10)
    code, u = sparse_approximate(np.full(10, 0.7), d, 4)
    np.testing.assert_array_equal(u, 0.7)
    assert np.linalg.norm(code.coefficients) <= 1e-12


def test_shifted_atom(kind):
    d = _dict(kind, 16)
    f = 5.0 + d.atoms[:, 2]
    code, u = sparse_approximate(f, d, 1)
    assert code.mean == pytest.approx(5.0, abs=1e-12)
    assert code.indices == (2,)
    assert np.abs(u - f).max() <= 1e-10


def test_reconstruct_empty_code():
    d = _dict(LAPLACE_PERIODIC, 5)
    np.testing.assert_array_equal(reconstruct(SparseCode((), np.empty(0), 1.25), d), 1.25)


def test_reconstruct_equals_signal_minus_residual(rng):
    d = _dict(LAPLACE_NEUMANN, 20)
    f0 = _mean_zero(rng, 20)
    code, trace = omp(d, f0, 5)
    np.testing.assert_allclose(reconstruct(code, d), f0 - trace.residuals[-1], atol=1e-12)


def test_reconstruct_bad_index():
    d = _dict(LAPLACE_NEUMANN, 5)
    with pytest.raises(IndexOutOfRange):
        reconstruct(SparseCode((5,), np.ones(1)), d)
    with pytest.raises(ValueError):
        reconstruct(SparseCode((1, 2), np.ones(1)), d)


def test_dense_coefficients():
    code = SparseCode((4, 1), np.array([2.0, -3.0]))
    np.testing.assert_array_equal(code.dense_coefficients(6), [0, -3, 0, 0, 2, 0])


@settings(max_examples=40, deadline=None)
@given(
    kind=st.sampled_from(ALL_KINDS),
    n=st.integers(6, 40),
    seed=st.integers(0, 2**20),
    frac=st.floats(0.1, 0.9),
)
def test_omp_contract_property(kind, n, seed, frac):
    d = _dict(kind, n)
    f0 = _mean_zero(np.random.default_rng(seed), n)
    k = max(1, int(frac * (n - 1)))
    code, trace = omp(d, f0, k)
    norms = trace.residual_norms
    assert all(b <= a * (1 + 1e-12) + 1e-14 for a, b in zip(norms, norms[1:]))
    assert norms[-1] <= np.linalg.norm(f0) * (1 + 1e-12)
    sel = list(code.indices)
    assert np.abs(d.normalized[:, sel].T @ trace.residuals[-1]).max() <= 1e-9 * max(1.0, norms[0])
