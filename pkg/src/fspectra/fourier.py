"""Truncated real Fourier series on the circle and on the square flat torus.

Coefficients are stored in the real trigonometric basis.  On the circle the
ambient coefficient vector is laid out as::

    [half_a0, a_1, b_1, a_2, b_2, ..., a_N, b_N]

so that slot ``0`` is the constant ``1``, slot ``2n - 1`` is ``cos(n t)`` and
slot ``2n`` is ``sin(n t)``.  The torus uses the tensor product of that
layout: ``table[i, j]`` multiplies ``e_i(x) * e_j(y)``.

All integrals are taken with respect to the flat measure on ``[0, 2 pi)`` (or
its square), and are computed from coefficients.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import minimize, minimize_scalar

TWO_PI = 2.0 * math.pi

# Positivity acceptance: grid minimum must exceed this margin.
POSITIVITY_MARGIN = 1e-9


def _frozen(arr):
    arr = np.array(arr, dtype=float)
    arr.setflags(write=False)
    return arr


def basis_mass(N):
    """Squared L2 norms of the circle basis elements, length ``2N + 1``."""
    m = np.full(2 * N + 1, math.pi)
    m[0] = TWO_PI
    return m


def basis_frequency(N):
    """Frequency ``n`` of each circle basis slot."""
    return np.concatenate([[0], np.repeat(np.arange(1, N + 1), 2)])


def basis_values(theta, N):
    """Evaluate the circle basis at ``theta``; shape ``(len(theta), 2N + 1)``."""
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    out = np.empty(theta.shape + (2 * N + 1,))
    out[..., 0] = 1.0
    if N:
        nt = np.multiply.outer(theta, np.arange(1, N + 1))
        out[..., 1::2] = np.cos(nt)
        out[..., 2::2] = np.sin(nt)
    return out


def _pad_vector(v, N):
    n_old = (len(v) - 1) // 2
    if n_old == N:
        return v
    if n_old > N:
        raise ValueError(f"cannot pad degree-{n_old} coefficients down to {N}")
    out = np.zeros(2 * N + 1)
    out[: len(v)] = v
    return out


class Fourier1:
    """Real trigonometric polynomial on the circle.

    Parameters
    ----------
    half_a0 : float
        The constant term (``a_0 / 2`` in the classical notation).
    cos_coeffs, sin_coeffs : array_like
        ``a_1..a_N`` and ``b_1..b_N``; must have the same length.
    """

    manifold = "s1"

    __slots__ = ("_vec",)

    def __init__(self, half_a0=0.0, cos_coeffs=(), sin_coeffs=()):
        a = np.atleast_1d(np.asarray(cos_coeffs, dtype=float))
        b = np.atleast_1d(np.asarray(sin_coeffs, dtype=float))
        if a.ndim != 1 or a.shape != b.shape:
            raise ValueError(
                f"cos/sin coefficient arrays must have identical length, "
                f"got {a.shape} and {b.shape}"
            )
        vec = np.empty(2 * len(a) + 1)
        vec[0] = float(half_a0)
        vec[1::2] = a
        vec[2::2] = b
        if not np.all(np.isfinite(vec)):
            raise ValueError("Fourier coefficients must be finite")
        self._vec = _frozen(vec)

    @classmethod
    def from_vector(cls, vec):
        vec = np.asarray(vec, dtype=float)
        if vec.ndim != 1 or len(vec) % 2 != 1:
            raise ValueError("circle coefficient vector must have odd length 2N+1")
        return cls(vec[0], vec[1::2], vec[2::2])

    @classmethod
    def constant(cls, value, N=0):
        return cls(value, np.zeros(N), np.zeros(N))

    @classmethod
    def harmonic(cls, n, kind="cos", coeff=1.0, N=None):
        """``coeff * cos(n t)`` or ``coeff * sin(n t)``."""
        N = n if N is None else N
        vec = np.zeros(2 * N + 1)
        if n == 0:
            if kind != "cos":
                raise ValueError("sin(0 t) is identically zero")
            vec[0] = coeff
        else:
            vec[2 * n - 1 if kind == "cos" else 2 * n] = coeff
        return cls.from_vector(vec)

    @property
    def truncation(self):
        return (len(self._vec) - 1) // 2

    @property
    def vector(self):
        return self._vec

    @property
    def half_a0(self):
        return float(self._vec[0])

    @property
    def cos_coeffs(self):
        return self._vec[1::2]

    @property
    def sin_coeffs(self):
        return self._vec[2::2]

    @property
    def degree(self):
        nz = np.flatnonzero(self._vec)
        if len(nz) == 0:
            return 0
        return int(basis_frequency(self.truncation)[nz[-1]])

    def pad(self, N):
        return Fourier1.from_vector(_pad_vector(self._vec, N))

    def truncate(self, N):
        return Fourier1.from_vector(self._vec[: 2 * N + 1])

    def __call__(self, theta):
        return evaluate(self, theta)

    def derivative(self):
        return derivative(self)

    def antiderivative(self):
        """Mean-zero antiderivative of a mean-zero series."""
        if self._vec[0] != 0.0:
            raise ValueError("antiderivative requires a zero constant term")
        n = np.arange(1, self.truncation + 1)
        a, b = self.cos_coeffs, self.sin_coeffs
        return Fourier1(0.0, -b / n, a / n)

    def _binary(self, other, op):
        if np.isscalar(other):
            other = Fourier1.constant(float(other))
        if not isinstance(other, Fourier1):
            return NotImplemented
        N = max(self.truncation, other.truncation)
        return Fourier1.from_vector(op(_pad_vector(self._vec, N), _pad_vector(other._vec, N)))

    def __add__(self, other):
        return self._binary(other, np.add)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, np.subtract)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Fourier1.from_vector(-self._vec)

    def __mul__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        return Fourier1.from_vector(float(scalar) * self._vec)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Fourier1):
            return NotImplemented
        N = max(self.truncation, other.truncation)
        return bool(np.array_equal(_pad_vector(self._vec, N), _pad_vector(other._vec, N)))

    __hash__ = None

    def __repr__(self):
        return (
            f"Fourier1(half_a0={self.half_a0!r}, cos_coeffs={self.cos_coeffs.tolist()!r}, "
            f"sin_coeffs={self.sin_coeffs.tolist()!r})"
        )

    def to_dict(self):
        return {
            "manifold": "s1",
            "half_a0": self.half_a0,
            "cos": self.cos_coeffs.tolist(),
            "sin": self.sin_coeffs.tolist(),
        }


class Fourier2:
    """Real trigonometric polynomial on the square torus ``[0, 2 pi)^2``.

    ``table`` has shape ``(2N + 1, 2N + 1)``; entry ``[i, j]`` is the
    coefficient of ``e_i(x) e_j(y)`` with ``e`` the circle basis.
    """

    manifold = "t2"

    __slots__ = ("_table",)

    def __init__(self, table):
        table = np.asarray(table, dtype=float)
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] % 2 != 1:
            raise ValueError(f"torus table must be (2N+1)x(2N+1), got {table.shape}")
        if not np.all(np.isfinite(table)):
            raise ValueError("Fourier coefficients must be finite")
        self._table = _frozen(table)

    @classmethod
    def from_vector(cls, vec):
        vec = np.asarray(vec, dtype=float)
        side = math.isqrt(len(vec))
        if side * side != len(vec):
            raise ValueError("torus coefficient vector length must be a perfect square")
        return cls(vec.reshape(side, side))

    @classmethod
    def constant(cls, value, N=0):
        table = np.zeros((2 * N + 1, 2 * N + 1))
        table[0, 0] = value
        return cls(table)

    @classmethod
    def from_modes(cls, modes, N=None):
        """Build from ``(p, q, role, coeff)`` records.

        ``role`` is a two-letter string over ``{c, s}`` naming the x and y
        factors, e.g. ``"cs"`` for ``cos(p x) sin(q y)``.  A zero frequency
        only admits ``c`` (the constant factor).
        """
        modes = [tuple(m) for m in modes]
        top = max((max(int(m[0]), int(m[1])) for m in modes), default=0)
        N = top if N is None else int(N)
        if N < top:
            raise ValueError(f"truncation {N} below mode frequency {top}")
        table = np.zeros((2 * N + 1, 2 * N + 1))
        for p, q, role, coeff in modes:
            p, q = int(p), int(q)
            if p < 0 or q < 0:
                raise ValueError("mode frequencies must be non-negative")
            if len(role) != 2 or set(role) - {"c", "s"}:
                raise ValueError(f"mode role must be two letters from 'cs', got {role!r}")
            table[_slot(p, role[0]), _slot(q, role[1])] += float(coeff)
        return cls(table)

    @property
    def truncation(self):
        return (self._table.shape[0] - 1) // 2

    @property
    def table(self):
        return self._table

    @property
    def vector(self):
        return self._table.ravel()

    @property
    def degree(self):
        nz = np.argwhere(self._table)
        if len(nz) == 0:
            return 0
        freq = basis_frequency(self.truncation)
        return int(freq[nz].max())

    def pad(self, N):
        n_old = self.truncation
        if n_old == N:
            return self
        if n_old > N:
            raise ValueError(f"cannot pad degree-{n_old} table down to {N}")
        out = np.zeros((2 * N + 1, 2 * N + 1))
        out[: 2 * n_old + 1, : 2 * n_old + 1] = self._table
        return Fourier2(out)

    def truncate(self, N):
        return Fourier2(self._table[: 2 * N + 1, : 2 * N + 1])

    def __call__(self, x, y):
        return evaluate(self, (x, y))

    def partial(self, axis):
        """Partial derivative in ``x`` (axis 0) or ``y`` (axis 1)."""
        d = _derivative_matrix(self.truncation)
        if axis == 0:
            return Fourier2(d @ self._table)
        return Fourier2(self._table @ d.T)

    def translate(self, dx, dy):
        """The function ``(x, y) -> s(x - dx, y - dy)``."""
        rx = _shift_matrix(self.truncation, dx)
        ry = _shift_matrix(self.truncation, dy)
        return Fourier2(rx @ self._table @ ry.T)

    def _binary(self, other, op):
        if np.isscalar(other):
            other = Fourier2.constant(float(other))
        if not isinstance(other, Fourier2):
            return NotImplemented
        N = max(self.truncation, other.truncation)
        return Fourier2(op(self.pad(N)._table, other.pad(N)._table))

    def __add__(self, other):
        return self._binary(other, np.add)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, np.subtract)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Fourier2(-self._table)

    def __mul__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        return Fourier2(float(scalar) * self._table)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Fourier2):
            return NotImplemented
        N = max(self.truncation, other.truncation)
        return bool(np.array_equal(self.pad(N)._table, other.pad(N)._table))

    __hash__ = None

    def __repr__(self):
        return f"Fourier2(N={self.truncation}, nonzero={np.count_nonzero(self._table)})"

    def modes(self):
        freq = basis_frequency(self.truncation)
        out = []
        for i, j in np.argwhere(self._table):
            role = ("c" if i == 0 or i % 2 else "s") + ("c" if j == 0 or j % 2 else "s")
            out.append([int(freq[i]), int(freq[j]), role, float(self._table[i, j])])
        return out

    def to_dict(self):
        return {"manifold": "t2", "N": self.truncation, "modes": self.modes()}


def _slot(p, kind):
    if p == 0:
        if kind != "c":
            raise ValueError("a zero frequency only admits the constant factor 'c'")
        return 0
    return 2 * p - 1 if kind == "c" else 2 * p


def _derivative_matrix(N):
    # d/dt cos(nt) = -n sin(nt), d/dt sin(nt) = n cos(nt)
    d = np.zeros((2 * N + 1, 2 * N + 1))
    for n in range(1, N + 1):
        d[2 * n, 2 * n - 1] = -n
        d[2 * n - 1, 2 * n] = n
    return d


def _shift_matrix(N, delta):
    r = np.zeros((2 * N + 1, 2 * N + 1))
    r[0, 0] = 1.0
    for n in range(1, N + 1):
        c, s = math.cos(n * delta), math.sin(n * delta)
        # cos(n(t - d)) = c cos(nt) + s sin(nt); sin(n(t - d)) = c sin(nt) - s cos(nt)
        r[2 * n - 1, 2 * n - 1] = c
        r[2 * n, 2 * n - 1] = s
        r[2 * n - 1, 2 * n] = -s
        r[2 * n, 2 * n] = c
    return r


def mass(s_or_manifold, N=None):
    """Mass diagonal (squared basis norms) in ambient-vector order."""
    if isinstance(s_or_manifold, (Fourier1, Fourier2)):
        manifold, N = s_or_manifold.manifold, s_or_manifold.truncation
    else:
        manifold = s_or_manifold
    m1 = basis_mass(N)
    if manifold == "s1":
        return m1
    if manifold == "t2":
        return np.outer(m1, m1).ravel()
    raise ValueError(f"unknown manifold {manifold!r}")


def laplace_symbol(manifold, N):
    """Laplacian eigenvalue of each basis element, in ambient-vector order."""
    f1 = basis_frequency(N).astype(float) ** 2
    if manifold == "s1":
        return f1
    if manifold == "t2":
        return np.add.outer(f1, f1).ravel()
    raise ValueError(f"unknown manifold {manifold!r}")


def evaluate(s, point):
    """Value of ``s`` at ``point`` (an angle, or an ``(x, y)`` pair for the torus).

    Array arguments broadcast; a scalar input gives a float back.
    """
    if isinstance(s, Fourier1):
        theta = np.asarray(point, dtype=float)
        vals = basis_values(theta.ravel(), s.truncation) @ s.vector
        return float(vals[0]) if theta.ndim == 0 else vals.reshape(theta.shape)
    if isinstance(s, Fourier2):
        x, y = (np.asarray(v, dtype=float) for v in point)
        x, y = np.broadcast_arrays(x, y)
        N = s.truncation
        bx = basis_values(x.ravel(), N)
        by = basis_values(y.ravel(), N)
        vals = np.einsum("ki,ij,kj->k", bx, s.table, by)
        return float(vals[0]) if x.ndim == 0 else vals.reshape(x.shape)
    raise TypeError(f"expected Fourier1 or Fourier2, got {type(s).__name__}")


def evaluate_grid(s, resolution):
    """Values on the uniform grid with ``resolution`` nodes per dimension."""
    nodes = grid_nodes(resolution)
    b = basis_values(nodes, s.truncation)
    if isinstance(s, Fourier1):
        return b @ s.vector
    return b @ s.table @ b.T


def grid_nodes(resolution):
    return TWO_PI * np.arange(resolution) / resolution


def derivative(s):
    """Term-wise derivative of a circle series."""
    if not isinstance(s, Fourier1):
        raise TypeError("derivative is defined for Fourier1; use Fourier2.partial on the torus")
    return Fourier1.from_vector(_derivative_matrix(s.truncation) @ s.vector)


def inner_product(u, v):
    """L2 pairing from coefficients; the shorter series is zero-padded."""
    if type(u) is not type(v):
        raise TypeError("inner_product needs two series over the same manifold")
    N = max(u.truncation, v.truncation)
    uv = u.pad(N).vector
    vv = v.pad(N).vector
    return float(np.dot(mass(u.manifold, N) * uv, vv))


def norm(u):
    return math.sqrt(inner_product(u, u))


def dirichlet_energy(u):
    """Integral of ``|grad u|^2`` over the manifold."""
    sym = laplace_symbol(u.manifold, u.truncation)
    return float(np.dot(mass(u) * sym * u.vector, u.vector))


def _real_transform(samples, N, axis):
    G = samples.shape[axis]
    if G < 2 * N + 1:
        raise ValueError(f"grid of {G} points is too coarse for truncation {N} (need >= {2 * N + 1})")
    X = np.fft.rfft(samples, axis=axis) / G
    X = np.moveaxis(X, axis, 0)[: N + 1]
    out = np.empty((2 * N + 1,) + X.shape[1:])
    out[0] = X[0].real
    out[1::2] = 2.0 * X[1:].real
    out[2::2] = -2.0 * X[1:].imag
    return np.moveaxis(out, 0, axis)


def project_sampled(samples, N):
    """Degree-``N`` real Fourier coefficients of uniform-grid samples.

    A 1-D array is read as circle samples at ``2 pi k / G``; a square 2-D
    array as torus samples with ``samples[i, j]`` at ``(x_i, y_j)``.
    """
    samples = np.asarray(samples, dtype=float)
    if samples.ndim == 1:
        return Fourier1.from_vector(_real_transform(samples, N, 0))
    if samples.ndim == 2:
        if samples.shape[0] != samples.shape[1]:
            raise ValueError("torus samples must be on a square grid")
        return Fourier2(_real_transform(_real_transform(samples, N, 0), N, 1))
    raise ValueError("samples must be a 1-D or 2-D array")


def min_on_grid(s, resolution=None):
    """Minimum of ``s`` over a uniform grid and the point attaining it.

    ``resolution`` defaults to ``8 (N + 1)`` nodes per dimension; coarser
    grids are rejected.  The best node is then polished by a bounded local
    search inside its grid cell, so the returned value never exceeds the
    plain grid minimum.
    """
    need = 8 * (s.truncation + 1)
    resolution = need if resolution is None else int(resolution)
    if resolution < need:
        raise ValueError(f"resolution {resolution} below the required {need}")
    vals = evaluate_grid(s, resolution)
    k = int(np.argmin(vals))
    nodes = grid_nodes(resolution)
    cell = TWO_PI / resolution
    if isinstance(s, Fourier1):
        t0 = float(nodes[k])
        res = minimize_scalar(lambda t: evaluate(s, t), bounds=(t0 - cell, t0 + cell), method="bounded",
                              options={"xatol": 1e-12})
        if res.fun < vals[k]:
            return float(res.fun), float(res.x % TWO_PI)
        return float(vals[k]), t0
    i, j = np.unravel_index(k, vals.shape)
    x0 = np.array([nodes[i], nodes[j]])
    gx, gy = s.partial(0), s.partial(1)
    res = minimize(
        lambda p: evaluate(s, (p[0], p[1])),
        x0,
        jac=lambda p: np.array([evaluate(gx, (p[0], p[1])), evaluate(gy, (p[0], p[1]))]),
        method="L-BFGS-B",
        bounds=[(x0[0] - cell, x0[0] + cell), (x0[1] - cell, x0[1] + cell)],
    )
    if res.fun < vals[i, j]:
        return float(res.fun), (float(res.x[0] % TWO_PI), float(res.x[1] % TWO_PI))
    return float(vals[i, j]), (float(nodes[i]), float(nodes[j]))


def positivity(s, margin=POSITIVITY_MARGIN, resolution=None):
    """Classify ``s`` as ``"positive"``, ``"indeterminate"`` or ``"nonpositive"``.

    Only a grid minimum above ``margin`` counts as positive; a minimum at or
    below ``-margin`` is a witness of non-positivity.
    """
    lo, _ = min_on_grid(s, resolution)
    if lo > margin:
        return "positive"
    if lo <= -margin:
        return "nonpositive"
    return "indeterminate"


def trapezoid_inner_product(u, v, nodes=None):
    """Uniform-trapezoid quadrature of ``u * v``; exact for trig polynomials.

    Used as an independent check on :func:`inner_product`.
    """
    N = max(u.truncation, v.truncation)
    nodes = 4 * N + 4 if nodes is None else nodes
    cell = TWO_PI / nodes
    prod = evaluate_grid(u, nodes) * evaluate_grid(v, nodes)
    if isinstance(u, Fourier1):
        return float(prod.sum() * cell)
    return float(prod.sum() * cell * cell)


def parse_function(record):
    """Build a series from its literal record (see ``Fourier1.to_dict``)."""
    if not isinstance(record, dict):
        raise ValueError("function literal must be a mapping")
    manifold = record.get("manifold", "t2" if "modes" in record else "s1")
    if manifold == "s1":
        try:
            return Fourier1(record.get("half_a0", 0.0), record.get("cos", []), record.get("sin", []))
        except (TypeError, ValueError) as exc:
            raise ValueError(f"malformed circle literal: {exc}") from exc
    if manifold == "t2":
        if "modes" not in record:
            raise ValueError("torus literal needs a 'modes' list")
        try:
            return Fourier2.from_modes(record["modes"], record.get("N"))
        except (TypeError, ValueError, IndexError) as exc:
            raise ValueError(f"malformed torus literal: {exc}") from exc
    raise ValueError(f"unknown manifold {manifold!r} in function literal")
