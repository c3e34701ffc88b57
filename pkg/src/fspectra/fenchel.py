"""Closed space curves built from a weight and a test function, and their total curvature.

For a positive weight ``f`` orthogonal to ``cos`` and ``sin`` and a function
``phi`` orthogonal to ``f``, the curve

    gamma(theta) = int_0^theta f(t) (cos t, sin t, sigma phi(t)) dt

closes up for every ``sigma``.  Its total curvature depends only on the
tangent direction, so ``f`` drops out of the analytic formula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fourier import TWO_PI, Fourier1, derivative, dirichlet_energy, evaluate, inner_product, norm

QUADRATURE_NODES = 1024
FD_STEP = 1e-3
ORTHO_TOL = 1e-12


@dataclass(frozen=True)
class CurveFamily:
    f: Fourier1
    phi: Fourier1
    sigma: float = 0.0

    def __post_init__(self):
        if not isinstance(self.f, Fourier1) or not isinstance(self.phi, Fourier1):
            raise TypeError("curve families live on the circle")
        fn = norm(self.f)
        cos1 = Fourier1.harmonic(1, "cos")
        sin1 = Fourier1.harmonic(1, "sin")
        scale = fn * norm(cos1)
        if abs(inner_product(self.f, cos1)) > ORTHO_TOL * scale or abs(
            inner_product(self.f, sin1)
        ) > ORTHO_TOL * scale:
            raise ValueError("f must be orthogonal to cos and sin for the curve to close")
        pn = norm(self.phi)
        if pn and abs(inner_product(self.f, self.phi)) > ORTHO_TOL * fn * pn:
            raise ValueError("phi must be orthogonal to f for the curve to close")

    def with_sigma(self, sigma):
        return CurveFamily(self.f, self.phi, sigma)


def curve_points(fam, samples=QUADRATURE_NODES):
    """Points ``gamma(theta_j)`` at ``theta_j = 2 pi j / samples``, ``j = 0..samples``.

    Cumulative trapezoid rule; the last row is ``gamma(2 pi)``.
    """
    theta = TWO_PI * np.arange(samples + 1) / samples
    fv = evaluate(fam.f, theta)
    speed = np.stack([fv * np.cos(theta), fv * np.sin(theta), fam.sigma * fv * evaluate(fam.phi, theta)], axis=1)
    h = TWO_PI / samples
    steps = 0.5 * h * (speed[1:] + speed[:-1])
    pts = np.zeros((samples + 1, 3))
    pts[1:] = np.cumsum(steps, axis=0)
    return pts


def curve_length(points):
    return float(np.linalg.norm(np.diff(points, axis=0), axis=1).sum())


def export_points(fam, samples=QUADRATURE_NODES):
    """Plain-text rows ``theta x y z``."""
    pts = curve_points(fam, samples)
    theta = TWO_PI * np.arange(samples + 1) / samples
    return "\n".join(f"{t!r} {x!r} {y!r} {z!r}" for t, (x, y, z) in zip(theta.tolist(), pts.tolist()))


def total_curvature_analytic(phi, sigma, nodes=QUADRATURE_NODES):
    """Trapezoid value of ``int sqrt(1 + s^2 phi^2 + s^2 phi'^2) / (1 + s^2 phi^2)``."""
    theta = TWO_PI * np.arange(nodes) / nodes
    p = evaluate(phi, theta)
    dp = evaluate(derivative(phi), theta)
    s2 = sigma * sigma
    integrand = np.sqrt(1.0 + s2 * p * p + s2 * dp * dp) / (1.0 + s2 * p * p)
    return float(integrand.sum() * TWO_PI / nodes)


def total_curvature_polygonal(points):
    """Sum of exterior angles of the closed polygon through ``points``.

    A repeated final point (closing the loop) is dropped.
    """
    pts = np.asarray(points, dtype=float)
    if len(pts) > 1 and np.allclose(pts[-1], pts[0], rtol=0.0, atol=1e-12 * max(1.0, np.abs(pts).max())):
        pts = pts[:-1]
    if len(pts) < 16:
        raise ValueError("need at least 16 points")
    edges = np.roll(pts, -1, axis=0) - pts
    lengths = np.linalg.norm(edges, axis=1)
    if np.any(lengths == 0.0):
        raise ValueError("repeated consecutive points")
    nxt = np.roll(edges, -1, axis=0)
    cross = np.linalg.norm(np.cross(edges, nxt), axis=1)
    dot = np.einsum("ij,ij->i", edges, nxt)
    return float(np.arctan2(cross, dot).sum())


def second_variation(phi):
    """``int phi'^2 - int phi^2``, from coefficients."""
    return dirichlet_energy(phi) - inner_product(phi, phi)


def fd_second_derivative(phi, h=FD_STEP, nodes=QUADRATURE_NODES):
    """Central difference ``(L(h) - 2 L(0) + L(-h)) / h^2`` of the analytic total curvature."""
    if not 1e-4 <= h <= 1e-2:
        raise ValueError("finite-difference step must lie in [1e-4, 1e-2]")
    Lp = total_curvature_analytic(phi, h, nodes)
    L0 = total_curvature_analytic(phi, 0.0, nodes)
    Lm = total_curvature_analytic(phi, -h, nodes)
    return (Lp - 2.0 * L0 + Lm) / (h * h)


def sigma_grid(lo=-0.5, hi=0.5, steps=21):
    return np.linspace(lo, hi, steps)


def sigma_sweep(phi, sigmas=None, nodes=QUADRATURE_NODES):
    sigmas = sigma_grid() if sigmas is None else np.asarray(sigmas, dtype=float)
    return {
        "sigma": [float(s) for s in sigmas],
        "L": [total_curvature_analytic(phi, float(s), nodes) for s in sigmas],
    }


def orthogonalize(phi, f):
    """Shift ``phi`` by a constant so that it is orthogonal to ``f``."""
    one = Fourier1.constant(1.0)
    return phi - inner_product(f, phi) / inner_product(f, one)


def fenchel_margin(phi, sigma, nodes=QUADRATURE_NODES):
    return total_curvature_analytic(phi, sigma, nodes) - 2.0 * math.pi
