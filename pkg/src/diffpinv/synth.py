"""Reproducible piecewise-smooth test signals."""

import numpy as np

from ._validation import check_positive_int


def synth_signal(n=256, seed=1, low=0.1, high=0.9):
    """Seeded sum of a trend, a few steps, kinks and sinusoids, rescaled to ``[low, high]``.

    The two ends of the signal generally differ, so it is not periodic.
    """
    n = check_positive_int(n, "n", minimum=3)
    rng = np.random.default_rng(seed)
    t = np.linspace(0.0, 1.0, n)
    f = rng.uniform(-0.5, 0.5) * t

    for pos in rng.uniform(0.1, 0.9, size=rng.integers(2, 5)):
        f += rng.uniform(-0.3, 0.3) * (t >= pos)
    for pos in rng.uniform(0.05, 0.95, size=rng.integers(1, 4)):
        f += rng.uniform(-1.0, 1.0) * np.maximum(t - pos, 0.0)
    for _ in range(rng.integers(1, 4)):
        freq = rng.uniform(0.5, 4.0)
        f += rng.uniform(0.02, 0.12) * np.sin(2 * np.pi * freq * t + rng.uniform(0, 2 * np.pi))

    span = f.max() - f.min()
    return low + (high - low) * (f - f.min()) / span
