"""Weights on spheres and the square torus that defeat the Poincare-type inequality.

The recipe: take ``phi = eps + (second eigenfunction)`` with ``eps`` large
enough that ``R(phi) < lambda_1`` but small enough that ``phi`` changes sign,
then find a positive weight ``f`` that is even (hence orthogonal to the odd
first eigenspace) and orthogonal to ``phi``.

On ``S^n`` only the closed-form side is checked.  On the torus the weight is
built explicitly from two smooth bumps placed where ``phi < 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .fourier import (
    TWO_PI,
    Fourier1,
    Fourier2,
    grid_nodes,
    inner_product,
    min_on_grid,
    norm,
    positivity,
    project_sampled,
)
from .spectrum import assemble, f_spectrum, laplace_spectrum, rayleigh, rayleigh_min_oracle

SCHEMA_VERSION = 1


def sphere_cn(n):
    """Threshold ``4 (n + 2) / (n (n + 1) (n + 3))`` as an exact fraction."""
    if isinstance(n, bool) or not isinstance(n, int) or n < 2:
        raise ValueError(f"sphere dimension must be an integer >= 2, got {n!r}")
    return Fraction(4 * (n + 2), n * (n + 1) * (n + 3))


def sphere_moments(n):
    """Closed-form monomial integrals over the unit sphere ``S^n``."""
    if n < 1:
        raise ValueError("sphere dimension must be >= 1")
    vol = 2.0 * math.pi ** ((n + 1) / 2) / math.gamma((n + 1) / 2)
    return {
        "vol": vol,
        "x1^2": vol / (n + 1),
        "x1^4": 3.0 * vol / ((n + 1) * (n + 3)),
        "x1^2x2^2": vol / ((n + 1) * (n + 3)),
        "(x1^2-x2^2)^2": 4.0 * vol / ((n + 1) * (n + 3)),
    }


def sphere_gap_constant(n):
    """``(lambda_2 / lambda_1 - 1) * int (x1^2 - x2^2)^2 / Vol`` from the moments."""
    lam1, lam2 = n, 2 * n + 2
    mom = sphere_moments(n)
    return (lam2 / lam1 - 1.0) * mom["(x1^2-x2^2)^2"] / mom["vol"]


def sphere_rayleigh(n, eps):
    """Rayleigh quotient of ``eps + x1^2 - x2^2`` on ``S^n``."""
    if n < 2:
        raise ValueError("sphere dimension must be >= 2")
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must lie in (0, 1)")
    mom = sphere_moments(n)
    I = mom["(x1^2-x2^2)^2"]
    return (2 * n + 2) * I / (I + eps * eps * mom["vol"])


@dataclass(frozen=True)
class SphereCase:
    n: int
    eps: float
    cn: Fraction = field(init=False)
    vol: float = field(init=False)
    phi2_sq: float = field(init=False)
    rayleigh: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "cn", sphere_cn(self.n))
        mom = sphere_moments(self.n)
        object.__setattr__(self, "vol", mom["vol"])
        object.__setattr__(self, "phi2_sq", mom["(x1^2-x2^2)^2"])
        object.__setattr__(self, "rayleigh", sphere_rayleigh(self.n, self.eps))


def torus_threshold():
    """``(lambda_2 / lambda_1 - 1) * int (cos x cos y)^2 / Vol``, exactly."""
    lam1, lam2 = 1, 2
    # int cos^2 x cos^2 y = pi^2 against Vol = 4 pi^2
    return (Fraction(lam2, lam1) - 1) * Fraction(1, 4)


def torus_phi(eps):
    """``eps + cos x cos y`` on the square torus."""
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must lie in (0, 1) for a sign change")
    return Fourier2.from_modes([(0, 0, "cc", eps), (1, 1, "cc", 1.0)])


def _bump_samples(centers, radius, grid):
    nodes = grid_nodes(grid)
    X, Y = np.meshgrid(nodes, nodes, indexing="ij")
    out = np.zeros_like(X)
    for cx, cy in centers:
        # flat-torus distance to the center
        dx = np.abs((X - cx + math.pi) % TWO_PI - math.pi)
        dy = np.abs((Y - cy + math.pi) % TWO_PI - math.pi)
        s = np.hypot(dx, dy) / radius
        inside = s < 1.0
        out[inside] += np.exp(-1.0 / (1.0 - s[inside] ** 2))
    return out


def fejer_weights(N):
    """Cesaro factors ``1 - n / (N + 1)`` in circle-basis order."""
    from .fourier import basis_frequency

    return 1.0 - basis_frequency(N) / (N + 1.0)


def torus_bump(radius, N, grid=None, smoothing="fejer"):
    """Two antipodal bumps at ``(pi, 0)`` and ``(0, pi)``, projected to degree ``N``.

    With ``smoothing="fejer"`` the projection is a Fejer mean of the grid
    samples: a convolution with a nonnegative kernel, so the result is
    nonnegative everywhere.  ``smoothing=None`` gives the plain truncation,
    which rings below zero for narrow bumps.
    """
    grid = max(256, 8 * (N + 1)) if grid is None else int(grid)
    if grid % 2:
        raise ValueError("grid size must be even so the bump centers are nodes")
    table = project_sampled(_bump_samples([(math.pi, 0.0), (0.0, math.pi)], radius, grid), N).table
    if smoothing == "fejer":
        w = fejer_weights(N)
        table = np.outer(w, w) * table
    elif smoothing is not None:
        raise ValueError(f"unknown smoothing {smoothing!r}")
    # modes killed by the bump symmetries come out at roundoff level
    return Fourier2(np.where(np.abs(table) > 1e-13 * np.abs(table).max(), table, 0.0))


def torus_build_f(eps=0.6, radius=0.3, N=24, grid=None, smoothing="fejer"):
    """Positive even weight orthogonal to ``eps + cos x cos y``.

    ``f = 1 + t h`` with ``h`` the projected bump pair and
    ``t = -<1, phi> / <h, phi>``.
    """
    if not 0.5 < eps < 1.0:
        raise ValueError("eps must lie in (1/2, 1)")
    if not 0.0 < radius <= math.pi / 4:
        raise ValueError("bump radius must lie in (0, pi/4]")
    phi = torus_phi(eps)
    h = torus_bump(radius, N, grid, smoothing)
    hp = inner_product(h, phi)
    if hp >= 0.0:
        raise ValueError(f"<h, phi> = {hp:.3e} is not negative; shrink the bump radius")
    one = Fourier2.constant(1.0, N)
    t = -inner_product(one, phi) / hp
    f = one + t * h
    status = positivity(f)
    if status != "positive":
        raise ValueError(
            f"projected weight is {status} (grid minimum {min_on_grid(f)[0]:.3e}); increase N"
        )
    return f


FIRST_EIGENSPACE = {
    "s1": [Fourier1.harmonic(1, "cos"), Fourier1.harmonic(1, "sin")],
    "t2": [
        Fourier2.from_modes([(1, 0, "cc", 1.0)]),
        Fourier2.from_modes([(1, 0, "sc", 1.0)]),
        Fourier2.from_modes([(0, 1, "cc", 1.0)]),
        Fourier2.from_modes([(0, 1, "cs", 1.0)]),
    ],
}


def first_eigenspace_pairings(f):
    """Relative pairings ``<f, b> / (|f| |b|)`` with the first-eigenspace basis."""
    fn = norm(f)
    return [inner_product(f, b) / (fn * norm(b)) for b in FIRST_EIGENSPACE[f.manifold]]


@dataclass
class CounterexampleCertificate:
    manifold: str
    eps: float
    phi: Fourier2 | None = None
    f: Fourier2 | None = None
    dim: int | None = None
    params: dict = field(default_factory=dict)
    scalars: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    verdict: str = "unverified"

    def to_dict(self):
        out = {
            "schema_version": SCHEMA_VERSION,
            "manifold": self.manifold,
            "eps": self.eps,
            "params": dict(self.params),
            "scalars": dict(self.scalars),
            "failures": list(self.failures),
            "verdict": self.verdict,
        }
        if self.dim is not None:
            out["dim"] = self.dim
        if self.phi is not None:
            out["phi"] = self.phi.to_dict()
        if self.f is not None:
            out["f"] = self.f.to_dict()
        return out


ORTHO_TOL = 1e-8


def verify_certificate(cert, oracle_grid=None, n_eigs=2):
    """Fill every scalar of ``cert`` and set its verdict.

    A torus certificate is valid iff ``min f > 0``, every orthogonality
    scalar is below ``1e-8`` (relative), ``R(phi) < lambda_1`` and the
    computed ``lambda_1(f) < lambda_1``.  Sphere certificates are
    existence-grade: they check the Rayleigh gap and the sign change of
    ``phi`` only.
    """
    cert.failures = []
    sc = cert.scalars
    if cert.manifold == "sn":
        n = cert.dim
        cn = sphere_cn(n)
        sc["c_n"] = float(cn)
        sc["lambda_1"] = float(n)
        sc["R_phi"] = sphere_rayleigh(n, cert.eps)
        sc["min_phi"] = cert.eps - 1.0
        sc["max_phi"] = cert.eps + 1.0
        sc["gap_constant"] = sphere_gap_constant(n)
        if not sc["R_phi"] < n:
            cert.failures.append("R(phi) >= lambda_1")
        if not Fraction(cert.eps) ** 2 > cn:
            cert.failures.append("eps^2 <= c_n")
        if not sc["min_phi"] < 0.0 < sc["max_phi"]:
            cert.failures.append("phi does not change sign")
        # phi is even under x -> -x while the first eigenspace (linear
        # coordinates) is odd, so any even positive f is admissible.
        sc["evenness_feasible"] = True
        cert.verdict = "existence-grade valid" if not cert.failures else "invalid"
        return cert

    if cert.manifold != "t2":
        raise ValueError(f"no certificate construction for manifold {cert.manifold!r}")
    f, phi = cert.f, cert.phi
    lam1 = float(laplace_spectrum("t2", 2)[1])
    sc["min_f"] = min_on_grid(f)[0]
    sc["f_phi"] = inner_product(f, phi) / (norm(f) * norm(phi))
    pair = first_eigenspace_pairings(f)
    sc["pairings_U1"] = pair
    sc["R_phi"] = rayleigh(phi)
    sc["min_phi"] = min_on_grid(phi)[0]
    sc["lambda_1"] = lam1
    N = cert.params.get("N", f.truncation)
    spec = f_spectrum(assemble("t2", f, max(N, f.truncation)), n_eigs)
    sc["lambda_1_f"] = float(spec.eigenvalues[0])
    sc["residual"] = float(spec.residuals[0])
    if oracle_grid:
        sc["lambda_1_f_grid"] = rayleigh_min_oracle(f, oracle_grid)

    if not sc["min_f"] > 0.0:
        cert.failures.append("f is not positive on the grid")
    if abs(sc["f_phi"]) > ORTHO_TOL:
        cert.failures.append("f is not orthogonal to phi")
    if max(abs(p) for p in pair) > ORTHO_TOL:
        cert.failures.append("f is not orthogonal to the first eigenspace")
    if not sc["R_phi"] < lam1:
        cert.failures.append("R(phi) >= lambda_1")
    if not sc["min_phi"] < 0.0:
        cert.failures.append("phi does not change sign")
    if not sc["lambda_1_f"] < lam1:
        cert.failures.append("lambda_1(f) >= lambda_1")
    if oracle_grid and not sc["lambda_1_f_grid"] < lam1:
        cert.failures.append("grid oracle lambda_1(f) >= lambda_1")
    cert.verdict = "valid" if not cert.failures else "invalid"
    return cert


def torus_certificate(eps=0.6, radius=0.3, N=24, oracle_grid=None, smoothing="fejer"):
    f = torus_build_f(eps, radius, N, smoothing=smoothing)
    cert = CounterexampleCertificate(
        manifold="t2",
        eps=eps,
        phi=torus_phi(eps),
        f=f,
        params={"radius": radius, "N": N, "smoothing": smoothing or "none"},
    )
    return verify_certificate(cert, oracle_grid=oracle_grid)


def sphere_certificate(n, eps=None):
    """Existence-grade certificate on ``S^n``; ``eps`` defaults to ``(sqrt(c_n) + 1) / 2``."""
    if eps is None:
        eps = (math.sqrt(sphere_cn(n)) + 1.0) / 2.0
    cert = CounterexampleCertificate(manifold="sn", eps=eps, dim=n)
    return verify_certificate(cert)


def circle_search(weights, N=32, tol=1e-8):
    """Look for a circle weight with ``lambda_1(f) < 1``; returns the offenders.

    Every weight must be positive and orthogonal to the first harmonics.  On
    the circle the list is expected to come back empty.
    """
    offenders = []
    for f in weights:
        lam = f_spectrum(assemble("s1", f, max(N, f.degree)), 1).eigenvalues[0]
        if lam < 1.0 - tol:
            offenders.append((f, float(lam)))
    return offenders
