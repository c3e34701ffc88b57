"""Galerkin discretization of the Laplacian restricted to the complement of a weight.

For a positive weight ``f`` the constrained spectrum is the list of min-max
values of the Rayleigh quotient over functions ``u`` with ``<f, u> = 0``.  In
the orthonormal trigonometric basis the Laplacian is diagonal, so the
constrained operator is ``Q^T diag(d) Q`` with ``Q`` spanning the complement of
the constraint direction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from ._validation import check_function, check_positive, check_truncation
from .fourier import (
    Fourier1,
    Fourier2,
    dirichlet_energy,
    evaluate_grid,
    inner_product,
    laplace_symbol,
    mass,
)
from .linalg import constraint_complement_basis, symmetric_eigen

SCHEMA_VERSION = 1

# Constraint weight below this fraction of |c| is treated as exactly zero.
_ZERO_WEIGHT = 1e-14
# Relative gap under which two eigenvalues count as tied for ordering.
_TIE = 1e-12


@dataclass(frozen=True)
class GalerkinProblem:
    """Diagonal mass/stiffness data and the constraint vector ``c_i = <f, e_i>``."""

    manifold: str
    truncation: int
    mass: np.ndarray
    stiffness: np.ndarray
    constraint: np.ndarray
    f: Fourier1 | Fourier2

    @property
    def size(self):
        return len(self.mass)

    @property
    def symbol(self):
        """Laplacian eigenvalue of each basis element, ``D_i / M_i``."""
        return self.stiffness / self.mass


@dataclass
class SpectrumResult:
    manifold: str
    truncation: int
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # (K, m) ambient coefficients, unit L2 norm
    residuals: np.ndarray
    all_eigenvalues: np.ndarray  # every constrained value, ascending
    laplace: np.ndarray = field(repr=False)  # discrete unconstrained values, with 0

    def eigenfunction(self, k):
        """The ``k``-th eigenfunction (0-based) as a series."""
        cls = Fourier1 if self.manifold == "s1" else Fourier2
        return cls.from_vector(self.eigenvectors[k])

    def to_dict(self):
        K = len(self.eigenvalues)
        return {
            "schema_version": SCHEMA_VERSION,
            "manifold": self.manifold,
            "N": self.truncation,
            "lambda_f": [float(v) for v in self.eigenvalues],
            "lambda": [float(v) for v in self.laplace[1 : K + 1]],
            "residuals": [float(v) for v in self.residuals],
        }


def assemble(manifold, f, N, margin=None):
    """Build the Galerkin data for ``f`` at truncation ``N``.

    ``f`` must be positive on the grid and representable at degree ``N``.
    """
    f = check_function(f, manifold)
    N = check_truncation(N, minimum=0)
    if f.degree > N:
        raise ValueError(f"truncation {N} is below the degree {f.degree} of f")
    check_positive(f, margin)
    f = f.pad(N) if f.truncation < N else f.truncate(N)
    m = mass(manifold, N)
    return GalerkinProblem(
        manifold=manifold,
        truncation=N,
        mass=m,
        stiffness=m * laplace_symbol(manifold, N),
        constraint=m * f.vector,
        f=f,
    )


def _first_index(z):
    big = np.abs(z)
    return int(np.argmax(big > 1e-8 * big.max()))


def _order(values, vectors):
    """Ascending order with ties broken by first significant coefficient index."""
    idx = sorted(range(len(values)), key=lambda i: values[i])
    out, start = [], 0
    while start < len(idx):
        stop = start + 1
        while stop < len(idx) and values[idx[stop]] - values[idx[start]] <= _TIE * max(
            1.0, abs(values[idx[start]])
        ):
            stop += 1
        block = idx[start:stop]
        out.extend(sorted(block, key=lambda i: _first_index(vectors[i])))
        start = stop
    return out


def _dense_pairs(sym, g):
    Q = constraint_complement_basis(g)
    w, Y = symmetric_eigen(Q.T @ (sym[:, None] * Q))
    return w, lambda sel: (Q @ Y[:, sel]).T


def _deflated_pairs(sym, g):
    # Each eigenspace of the diagonal operator meets the constraint in at most
    # one direction; the rest of the eigenspace is already an exact pair.
    m = len(sym)
    levels, inverse = np.unique(sym, return_inverse=True)
    gnorm = np.linalg.norm(g)
    free_vals, free_vecs = [], []
    coupled_d, coupled_w, reps = [], [], []
    for lev in range(len(levels)):
        members = np.flatnonzero(inverse == lev)
        wg = g[members]
        size = np.linalg.norm(wg)
        if size <= _ZERO_WEIGHT * gnorm:
            for i in members:
                free_vals.append(levels[lev])
                free_vecs.append(("axis", i))
            continue
        coupled_d.append(levels[lev])
        coupled_w.append(size)
        reps.append((members, wg / size))
        if len(members) > 1:
            Qg = constraint_complement_basis(wg)
            for col in range(Qg.shape[1]):
                free_vals.append(levels[lev])
                free_vecs.append(("group", members, Qg[:, col]))

    coupled_vals = np.empty(0)
    Y = Qc = None
    if len(coupled_d) > 1:
        Qc = constraint_complement_basis(np.array(coupled_w))
        coupled_vals, Y = symmetric_eigen(Qc.T @ (np.array(coupled_d)[:, None] * Qc))

    values = np.concatenate([np.array(free_vals, dtype=float), coupled_vals])
    n_free = len(free_vals)

    def build(sel):
        out = np.zeros((len(sel), m))
        for row, k in enumerate(sel):
            if k < n_free:
                item = free_vecs[k]
                if item[0] == "axis":
                    out[row, item[1]] = 1.0
                else:
                    out[row, item[1]] = item[2]
            else:
                coords = Qc @ Y[:, k - n_free]
                for (members, direction), a in zip(reps, coords):
                    out[row, members] += a * direction
        return out

    return values, build


def f_spectrum(problem, K, method="deflated"):
    """Lowest ``K`` constrained eigenpairs of ``problem``.

    ``method="dense"`` diagonalizes the full projected matrix and is kept as
    a cross-check for the default block-deflated path.
    """
    m = problem.size
    if not 1 <= K <= m - 1:
        raise ValueError(f"K={K} out of range for a basis of size {m} (need 1 <= K <= {m - 1})")
    sym = problem.symbol
    root = np.sqrt(problem.mass)
    g = problem.constraint / root
    if method == "dense":
        values, build = _dense_pairs(sym, g)
    elif method == "deflated":
        values, build = _deflated_pairs(sym, g)
    else:
        raise ValueError(f"unknown method {method!r}")

    ranked = np.argsort(values, kind="stable")
    cut = values[ranked[K - 1]]
    take = [k for k in ranked if values[k] - cut <= _TIE * max(1.0, abs(cut))]
    Z = build(take)
    Z /= np.linalg.norm(Z, axis=1, keepdims=True)
    order = _order([values[k] for k in take], Z)[:K]
    Z = Z[order]
    lam = np.array([values[take[i]] for i in order])

    coeffs = Z / root
    cls = Fourier1 if problem.manifold == "s1" else Fourier2
    residuals = np.array(
        [euler_lagrange_residual(cls.from_vector(u), l, problem.f) for u, l in zip(coeffs, lam)]
    )
    return SpectrumResult(
        manifold=problem.manifold,
        truncation=problem.truncation,
        eigenvalues=lam,
        eigenvectors=coeffs,
        residuals=residuals,
        all_eigenvalues=np.sort(values),
        laplace=np.sort(sym),
    )


def euler_lagrange_residual(u, lam, f):
    """``|| P (Delta u + lam u) || / ||u||`` with ``P`` the L2 projection off ``f``."""
    N = max(u.truncation, f.truncation)
    u, f = u.pad(N), f.pad(N)
    m = mass(u.manifold, N)
    r = (lam - laplace_symbol(u.manifold, N)) * u.vector
    fv = f.vector
    r = r - (np.dot(m * r, fv) / np.dot(m * fv, fv)) * fv
    return math.sqrt(np.dot(m * r, r) / np.dot(m * u.vector, u.vector))


def rayleigh(u):
    """Rayleigh quotient ``int |grad u|^2 / int u^2``."""
    den = inner_product(u, u)
    if den == 0.0:
        raise ValueError("Rayleigh quotient of the zero function")
    return dirichlet_energy(u) / den


def laplace_spectrum(manifold, count, dim=None):
    """First ``count`` Laplacian eigenvalues with multiplicity, starting at 0.

    ``manifold`` is ``"s1"``, ``"t2"`` or ``"sn"`` (round unit sphere of
    dimension ``dim``, eigenvalues ``k (k + dim - 1)``).
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    if manifold == "s1":
        out = [0] + [n * n for n in range(1, count) for _ in range(2)]
    elif manifold == "t2":
        r = 1
        while True:
            out = sorted(
                p * p + q * q
                for p in range(-r, r + 1)
                for q in range(-r, r + 1)
                if p * p + q * q <= r * r
            )
            if len(out) >= count:
                break
            r *= 2
    elif manifold == "sn":
        if dim is None or dim < 1:
            raise ValueError("sphere spectrum needs dim >= 1")
        out, k = [], 0
        while len(out) < count:
            mult = math.comb(dim + k, dim) - (math.comb(dim + k - 2, dim) if k >= 2 else 0)
            out.extend([k * (k + dim - 1)] * mult)
            k += 1
    else:
        raise ValueError(f"unknown manifold {manifold!r}")
    return out[:count]


def _fd_symbol(grid_n):
    h = 2.0 * math.pi / grid_n
    return 4.0 / (h * h) * np.sin(math.pi * np.arange(grid_n) / grid_n) ** 2


def rayleigh_min_oracle(f, grid_n=256):
    """Smallest eigenvalue of the finite-difference Laplacian on the complement of sampled ``f``.

    Independent of the Galerkin path: the second-order periodic difference
    operator on a uniform grid is diagonalized by the DFT, and the rank-one
    constraint against the samples of ``f`` reduces to a scalar secular
    equation ``sum_l W_l / (mu_l - nu) = 0`` solved by bracketing.
    """
    if grid_n < 64:
        raise ValueError("grid_n must be at least 64")
    mu1 = _fd_symbol(grid_n)
    y = evaluate_grid(f, grid_n)
    if isinstance(f, Fourier1):
        mu = mu1
    elif isinstance(f, Fourier2):
        mu = np.add.outer(mu1, mu1)
    else:
        raise TypeError("f must be a Fourier1 or Fourier2")
    weight = np.abs(np.fft.fftn(y, norm="ortho")) ** 2

    scale = mu.max()
    levels, inverse = np.unique(np.round(mu.ravel() / scale, 12), return_inverse=True)
    level_mu = np.bincount(inverse, weights=mu.ravel()) / np.bincount(inverse)
    level_w = np.bincount(inverse, weights=weight.ravel())
    mult = np.bincount(inverse)
    coupled = level_w > 1e-24 * level_w.sum()

    # Eigenvalues surviving unchanged inside each eigenspace of the operator.
    leftover = mult - coupled.astype(int)
    candidates = [level_mu[leftover > 0].min()] if np.any(leftover > 0) else []

    mus, ws = level_mu[coupled], level_w[coupled]
    if len(mus) > 1:
        lo, hi = mus[0], mus[1]

        def secular(nu):
            return np.sum(ws / (mus - nu))

        gap = hi - lo
        a, b = lo + 1e-15 * gap, hi - 1e-15 * gap
        candidates.append(brentq(secular, a, b, xtol=1e-15 * max(1.0, hi), rtol=1e-15))
    return float(min(candidates))


class FSpectrum(TransformerMixin, BaseEstimator):
    """Constrained Laplacian spectrum of a positive weight, as an estimator.

    ``fit`` takes the weight ``f`` (a series or its literal record) and
    computes the lowest ``n_eigs`` eigenpairs of the Laplacian restricted to
    ``f``'s orthogonal complement.  ``transform`` maps coefficient vectors to
    their L2 coordinates along the fitted eigenfunctions.

    Parameters
    ----------
    manifold : {"s1", "t2"}
    truncation : int or None
        Basis truncation ``N``; ``None`` uses ``max(degree(f), 8)``.
    n_eigs : int
    method : {"deflated", "dense"}
    positivity_margin : float or None
        Grid-minimum margin for accepting ``f`` as positive.
    """

    def __init__(self, manifold="s1", truncation=None, n_eigs=6, method="deflated",
                 positivity_margin=None):
        self.manifold = manifold
        self.truncation = truncation
        self.n_eigs = n_eigs
        self.method = method
        self.positivity_margin = positivity_margin

    def fit(self, X, y=None):
        f = check_function(X, self.manifold)
        N = self.truncation if self.truncation is not None else max(f.degree, 8)
        self.problem_ = assemble(self.manifold, f, N, self.positivity_margin)
        self.result_ = f_spectrum(self.problem_, self.n_eigs, method=self.method)
        self.eigenvalues_ = self.result_.eigenvalues
        self.eigenfunctions_ = self.result_.eigenvectors
        self.residuals_ = self.result_.residuals
        self.spectrum_ = self.result_.all_eigenvalues
        self.n_features_in_ = self.problem_.size
        return self

    def _as_matrix(self, X):
        if isinstance(X, (Fourier1, Fourier2)):
            X = [X]
        if isinstance(X, (list, tuple)) and X and isinstance(X[0], (Fourier1, Fourier2)):
            N = self.problem_.truncation
            X = [check_function(u, self.manifold).pad(N).vector for u in X]
        X = check_array(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"expected {self.n_features_in_} coefficients per row, got {X.shape[1]}"
            )
        return X

    def transform(self, X):
        check_is_fitted(self, "result_")
        X = self._as_matrix(X)
        return (X * self.problem_.mass) @ self.eigenfunctions_.T

    def inverse_transform(self, Y):
        check_is_fitted(self, "result_")
        Y = check_array(Y)
        return Y @ self.eigenfunctions_

    def rayleigh_quotients(self, X):
        """Rayleigh quotient of each row of coefficient vectors."""
        check_is_fitted(self, "result_")
        X = self._as_matrix(X)
        m = self.problem_.mass
        return ((X * X * m) @ self.problem_.symbol) / ((X * X) @ m)
