"""Random positive weights, positive by construction rather than by rejection."""

import numpy as np

from .fourier import Fourier1, Fourier2

DEFAULT_SEED = 0x5EED


def random_positive_s1(rng, low=2, high=6, amplitude=0.1):
    """``1 + sum_{n=low}^{high} (a_n cos + b_n sin)`` with coefficients in ``[-amplitude, amplitude]``.

    The default keeps the absolute coefficient sum below one, so the weight is
    positive, and leaves out the first harmonics.
    """
    a = np.zeros(high)
    b = np.zeros(high)
    a[low - 1 :] = rng.uniform(-amplitude, amplitude, high - low + 1)
    b[low - 1 :] = rng.uniform(-amplitude, amplitude, high - low + 1)
    if 2 * (high - low + 1) * amplitude > 1.0:
        raise ValueError("coefficient budget does not guarantee positivity")
    return Fourier1(1.0, a, b)


def random_positive_t2(rng, degree=3, budget=0.9):
    """``1 + g`` with ``g`` a random degree-``degree`` torus polynomial, ``sum |g_ij| <= budget``."""
    if not 0.0 < budget < 1.0:
        raise ValueError("budget must lie in (0, 1)")
    side = 2 * degree + 1
    table = rng.uniform(-1.0, 1.0, (side, side))
    table[0, 0] = 0.0
    table *= budget * rng.uniform(0.1, 1.0) / np.abs(table).sum()
    table[0, 0] = 1.0
    return Fourier2(table)


def mean_zero_trial(rng, f, degree=6):
    """Random circle function orthogonal to ``f`` (shifted by a constant)."""
    from .fourier import inner_product

    psi = Fourier1(rng.normal(), rng.normal(size=degree), rng.normal(size=degree))
    one = Fourier1.constant(1.0)
    return psi - inner_product(f, psi) / inner_product(f, one)
