"""Built-in oracle and identity checks, runnable from the command line."""

from dataclasses import dataclass

import numpy as np

from . import pinv as _pinv
from .dictionary import build_dictionary
from .inpaint import InpaintProblem, solve_inpainting, spline_reconstruct
from .omp import omp
from .operators import ALL_KINDS, LAPLACE_NEUMANN, build_operator


@dataclass
class SuiteResult:
    name: str
    passed: bool
    worst: float
    tolerance: float


def _closed_form(op, perturb):
    p = _pinv.pinv_closed_form(op).entries
    if perturb:
        p = p.copy()
        p[0, -1] += 1e-6
        p[-1, 0] += 1e-6
    return p


def _suite(name, values, tol):
    worst = float(max(values)) if values else 0.0
    return SuiteResult(name, worst <= tol, worst, tol)


def run_selftest(sizes=(8, 16, 32), perturb=False, seed=0):
    """Run every suite at each size in ``sizes``.

    ``perturb`` corrupts the closed-form matrices so the checks must fail.
    """
    ops = [build_operator(kind, n) for kind in ALL_KINDS for n in sizes]
    closed = {id(op): _closed_form(op, perturb) for op in ops}
    out = []

    vals = []
    for op in ops:
        lmat = op.dense
        eig = np.sort(np.abs(np.linalg.eigvalsh(lmat)))
        vals += [np.abs(lmat - lmat.T).max(), np.abs(lmat.sum(axis=1)).max(), eig[0],
                 1e-10 if eig[1] <= 1e-10 else 0.0]
    out.append(_suite("operator invariants", vals, 1e-10))

    generic = {}
    vals = []
    for op in ops:
        g = [_pinv.pinv_generic(op, tau).entries for tau in (-1.0, 0.5, 3.0)]
        generic[id(op)] = g
        vals += [np.abs(x - closed[id(op)]).max() for x in g]
    out.append(_suite("closed form vs generic tau", vals, 1e-8))

    vals = []
    for op in ops:
        g = generic[id(op)]
        vals += [np.abs(g[0] - g[1]).max(), np.abs(g[0] - g[2]).max(), np.abs(g[1] - g[2]).max()]
    out.append(_suite("tau independence", vals, 1e-9))

    vals = [np.abs(_pinv.pinv_spectral(op).entries - closed[id(op)]).max() for op in ops]
    out.append(_suite("closed form vs spectral", vals, 1e-8))

    residuals = [_pinv.penrose_residuals(op.dense, closed[id(op)]) for op in ops]
    vals = [r[key] for r in residuals for key in ("LPL", "PLP")]
    out.append(_suite("Moore-Penrose products", vals, 1e-9))
    vals = [r[key] for r in residuals for key in ("LP_sym", "PL_sym")]
    out.append(_suite("Moore-Penrose symmetry", vals, 1e-10))

    vals = []
    for n in sizes:
        for j in range(n):
            vals += list(_pinv.trig_identity_residual(n, j))
    out.append(_suite("trigonometric identities", vals, 1e-8))

    vals = []
    for op in ops:
        if op.kind.is_biharmonic:
            lap = _closed_form(build_operator(op.kind.laplace, op.n), perturb)
            vals.append(np.abs(closed[id(op)] + lap @ lap).max())
    out.append(_suite("biharmonic = -(laplace pinv)^2", vals, 1e-9))

    rng = np.random.default_rng(seed)
    vals = []
    for n in sizes:
        op = build_operator(LAPLACE_NEUMANN, n)
        for _ in range(5):
            size = int(rng.integers(1, n + 1))
            gamma = np.sort(rng.choice(n, size=size, replace=False))
            data = rng.normal(size=size)
            prob = InpaintProblem.from_pairs(op, gamma, data)
            vals.append(np.abs(solve_inpainting(prob) - spline_reconstruct(gamma, data, n)).max())
    out.append(_suite("inpainting vs linear spline", vals, 1e-10))

    vals = []
    for op in ops:
        d = build_dictionary(_pinv.PinvMatrix(op.kind, op.n, closed[id(op)],
                                              _pinv.Provenance.CLOSED_FORM))
        f0 = rng.normal(size=op.n)
        f0 -= f0.mean()
        code, trace = omp(d, f0, min(5, op.n - 1))
        norms = trace.residual_norms
        vals += [max(0.0, b - a) for a, b in zip(norms, norms[1:])]
        for j, r in enumerate(trace.residuals):
            sel = list(trace.indices[: j + 1])
            vals.append(np.abs(d.normalized[:, sel].T @ r).max() / np.linalg.norm(f0))
    out.append(_suite("OMP residual contract", vals, 1e-9))
    return out


def format_table(results):
    width = max(len(r.name) for r in results)
    lines = [f"{'suite':<{width}}  status  worst       tolerance"]
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"{r.name:<{width}}  {status:<6}  {r.worst:<10.3e}  {r.tolerance:.0e}")
    return "\n".join(lines)
