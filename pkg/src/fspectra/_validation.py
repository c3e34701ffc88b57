"""Input validation helpers shared by the estimators and check routines."""

import numbers

from .fourier import POSITIVITY_MARGIN, Fourier1, Fourier2, parse_function, positivity

MANIFOLDS = ("s1", "t2")


class NotPositiveError(ValueError):
    """The weight is not certified positive on the sampling grid."""

    def __init__(self, status, minimum=None):
        self.status = status
        self.minimum = minimum
        msg = f"weight is {status}"
        if minimum is not None:
            msg += f" (grid minimum {minimum:.3e})"
        super().__init__(msg)


def check_function(f, manifold=None):
    """Coerce ``f`` to a series and check it lives on ``manifold``."""
    if isinstance(f, dict):
        f = parse_function(f)
    if not isinstance(f, (Fourier1, Fourier2)):
        raise TypeError(f"expected a Fourier series or literal record, got {type(f).__name__}")
    if manifold is not None:
        if manifold not in MANIFOLDS:
            raise ValueError(f"manifold must be one of {MANIFOLDS}, got {manifold!r}")
        if f.manifold != manifold:
            raise ValueError(f"function lives on {f.manifold}, expected {manifold}")
    return f


def check_positive(f, margin=None):
    from .fourier import min_on_grid

    margin = POSITIVITY_MARGIN if margin is None else margin
    status = positivity(f, margin)
    if status != "positive":
        raise NotPositiveError(status, min_on_grid(f)[0])
    return f


def check_truncation(N, minimum=0, maximum=None):
    if isinstance(N, bool) or not isinstance(N, numbers.Integral):
        raise TypeError(f"truncation must be an integer, got {N!r}")
    N = int(N)
    if N < minimum or (maximum is not None and N > maximum):
        raise ValueError(f"truncation {N} outside [{minimum}, {maximum}]")
    return N
