"""Reconstruction error metrics."""

import math

import numpy as np

from ._validation import check_vector
from .exceptions import DimensionMismatch

#: value returned by :func:`psnr` when the two signals coincide
INFINITE_PSNR = math.inf


def mse(u, f):
    """Mean squared error ``(1/N) sum (u_i - f_i)^2``."""
    u = check_vector(u, "u")
    f = check_vector(f, "f")
    if u.shape != f.shape:
        raise DimensionMismatch(f"lengths differ: {u.shape[0]} vs {f.shape[0]}")
    diff = u - f
    return float(np.dot(diff, diff) / diff.size)


def psnr(u, f, peak=1.0):
    """Peak signal-to-noise ratio in dB, ``10 log10(peak^2 / MSE)``.

    Returns :data:`INFINITE_PSNR` (``math.inf``) when the MSE is zero.
    """
    peak = float(peak)
    if not peak > 0 or not math.isfinite(peak):
        raise ValueError(f"peak must be a positive finite real, got {peak}")
    err = mse(u, f)
    if err == 0.0:
        return INFINITE_PSNR
    return 10.0 * math.log10(peak * peak / err)


def is_infinite(value):
    return math.isinf(value) and value > 0
