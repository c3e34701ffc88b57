"""Numerical checks of the inequalities relating the constrained and plain spectra."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from ._validation import check_function
from .fourier import Fourier1, inner_product, laplace_symbol, mass, norm, positivity
from .spectrum import assemble, f_spectrum, rayleigh

INEQ_TOL = 1e-8
MATRIX_TOL = 1e-10

VOLUME = {"s1": 2.0 * math.pi, "t2": 4.0 * math.pi * math.pi}
LAMBDA_1 = {"s1": 1.0, "t2": 1.0}


def leq(a, b, tol=INEQ_TOL):
    """One-sided ``a <= b``: slack is allowed only above ``b``."""
    return a <= b + tol * max(1.0, abs(b))


def default_truncation(f, N=None):
    if N is not None:
        return max(N, f.degree)
    return max(32 if f.manifold == "s1" else 8, f.degree)


def solve(f, K, N=None):
    f = check_function(f)
    return f_spectrum(assemble(f.manifold, f, default_truncation(f, N)), K)


@dataclass
class LemmaReport:
    S: float
    bound: float
    slack: float
    verdict: str
    positivity: str

    def to_dict(self):
        return asdict(self)


def lemma_sum_check(f):
    """Compare ``sum_{n>=2} (a_n^2 + b_n^2) / (n^2 - 1)`` with ``a_0^2 / 2``.

    The sums are formed in exact rational arithmetic on the stored float
    coefficients, so the verdict carries no rounding.
    """
    f = check_function(f, "s1")
    a, b = f.cos_coeffs, f.sin_coeffs
    scale = max(1.0, float(np.max(np.abs(f.vector))))
    if len(a) and max(abs(a[0]), abs(b[0])) > 1e-12 * scale:
        raise ValueError("f has nonzero first harmonics; the lemma does not apply")
    S = Fraction(0)
    for n in range(2, f.truncation + 1):
        S += (Fraction(a[n - 1]) ** 2 + Fraction(b[n - 1]) ** 2) / (n * n - 1)
    a0 = 2 * Fraction(f.half_a0)
    bound = a0 * a0 / 2
    slack = bound - S
    verdict = "strict" if slack > 0 else ("non-strict" if slack == 0 else "violated")
    return LemmaReport(float(S), float(bound), float(slack), verdict, positivity(f))


@dataclass
class LowerBoundReport:
    bound: float
    lambda_1_f: float
    holds: bool

    def to_dict(self):
        return asdict(self)


def lower_bound_check(f, manifold=None, N=None, spectrum=None):
    """``lambda_1(f) >= lambda_1 (int f)^2 / (|M| int f^2)``."""
    f = check_function(f, manifold)
    vol = VOLUME[f.manifold]
    total = vol * f.vector[0]
    bound = LAMBDA_1[f.manifold] * total * total / (vol * inner_product(f, f))
    spectrum = spectrum or solve(f, 1, N)
    lam = float(spectrum.eigenvalues[0])
    return LowerBoundReport(bound, lam, bool(bound > 0.0 and leq(bound, lam)))


@dataclass
class InterlaceReport:
    lam: list
    lam_f: list
    links: list = field(default_factory=list)
    matrix_worst: float = 0.0
    matrix_holds: bool = True
    holds: bool = True

    def to_dict(self):
        return asdict(self)

    def failures(self):
        return [l for l in self.links if not l["holds"]]


def _link(name, lhs, rhs, tol):
    return {
        "relation": name,
        "lhs": float(lhs),
        "rhs": float(rhs),
        "margin": float(rhs - lhs),
        "tol": tol,
        "holds": bool(leq(lhs, rhs, tol)),
    }


def matrix_interlacing(spectrum, tol=MATRIX_TOL):
    """Worst violation of ``mu_k <= nu_k <= mu_{k+1}`` over the whole discrete spectrum.

    ``mu`` includes the zero eigenvalue; ``nu`` is the constrained spectrum.
    Returns ``(worst, holds)`` where ``worst`` is the largest amount by which
    any link fails (negative when all links hold with room).
    """
    mu = spectrum.laplace
    nu = spectrum.all_eigenvalues
    lower = mu[:-1] - nu
    upper = nu - mu[1:]
    worst = float(max(lower.max(), upper.max()))
    return worst, bool(worst <= tol * max(1.0, float(mu.max())))


def interlace_check(f, K=6, N=None, spectrum=None):
    """The chain ``0 < lambda_1(f) <= lambda_1 <= lambda_2(f) <= ... <= lambda_K``.

    Eigenvalues are counted with multiplicity; ``lambda_k`` runs over the
    nonzero Laplacian eigenvalues.  Matrix-level interlacing against the
    discrete spectrum (including 0) is checked separately.
    """
    f = check_function(f)
    spectrum = spectrum or solve(f, K + 1, N)
    if len(spectrum.eigenvalues) < K + 1 or len(spectrum.laplace) < K + 2:
        raise ValueError("truncation too small for the requested chain length")
    lam_f = spectrum.eigenvalues[: K + 1]
    lam = spectrum.laplace[1 : K + 2]
    links = [_link("0 < lambda_1(f)", 0.0, lam_f[0], 0.0)]
    links[0]["holds"] = bool(lam_f[0] > 0.0)
    for k in range(1, K + 1):
        links.append(_link(f"lambda_{k}(f) <= lambda_{k}", lam_f[k - 1], lam[k - 1], INEQ_TOL))
        links.append(_link(f"lambda_{k} <= lambda_{k + 1}(f)", lam[k - 1], lam_f[k], INEQ_TOL))
    worst, mholds = matrix_interlacing(spectrum)
    report = InterlaceReport(
        lam=[float(v) for v in lam[:K]],
        lam_f=[float(v) for v in lam_f],
        links=links,
        matrix_worst=worst,
        matrix_holds=mholds,
    )
    report.holds = bool(all(l["holds"] for l in links) and mholds)
    return report


@dataclass
class StrictnessReport:
    lambda_1_f: float
    lambda_1: float
    pairing: float
    predicted: float
    strict: bool
    holds: bool

    def to_dict(self):
        return asdict(self)


def strictness_check(f, N=None, spectrum=None):
    """If ``f`` pairs with the first eigenspace, ``lambda_1(f)`` must drop below ``lambda_1``.

    The predicted ceiling comes from the trial function ``phi_1 + c`` with
    ``phi_1`` the first-eigenspace component of ``f`` and ``c`` fixed by
    orthogonality to ``f``.
    """
    f = check_function(f)
    spectrum = spectrum or solve(f, 1, N)
    lam_f = float(spectrum.eigenvalues[0])
    lam1 = LAMBDA_1[f.manifold]
    vol = VOLUME[f.manifold]

    sym = laplace_symbol(f.manifold, f.truncation)
    first = np.where(np.isclose(sym, lam1), f.vector, 0.0)
    phi1 = type(f).from_vector(first)
    pairing = norm(phi1) / norm(f) if np.any(first) else 0.0
    if pairing <= 1e-10:
        return StrictnessReport(lam_f, lam1, pairing, lam1, bool(lam_f < lam1 - INEQ_TOL), True)
    c = -inner_product(f, phi1) / (vol * f.vector[0])
    phi_sq = inner_product(phi1, phi1)
    predicted = lam1 - lam1 * c * c * vol / (phi_sq + c * c * vol)
    holds = bool(lam_f < lam1 and leq(lam_f, predicted))
    return StrictnessReport(lam_f, lam1, pairing, predicted, bool(lam_f < lam1), holds)


def shift_bound_check(f, K=6, N=None, spectrum=None):
    """``lambda_k <= lambda_k(f) + R(f)`` for ``k = 1..K``."""
    f = check_function(f)
    spectrum = spectrum or solve(f, K, N)
    Rf = rayleigh(f)
    out = []
    for k in range(1, K + 1):
        lam = float(spectrum.laplace[k])
        rhs = float(spectrum.eigenvalues[k - 1]) + Rf
        out.append({"k": k, "lambda": lam, "bound": rhs, "R_f": Rf, "holds": bool(leq(lam, rhs))})
    return out


def corollary_check(f, h, K=5, N=None):
    """``lambda_k(f) <= lambda_{k+1}(h)`` for ``k = 1..K``."""
    sf = solve(f, K, N)
    sh = solve(h, K + 1, N)
    return [bool(leq(sf.eigenvalues[k], sh.eigenvalues[k + 1])) for k in range(K)]


def equality_case_mass(spectrum, level=1.0, tol=1e-8):
    """Relative L2 mass outside the first eigenspace for eigenfunctions at ``level``.

    Returns the worst ratio over all returned eigenfunctions whose eigenvalue
    is within ``tol`` of ``level``; ``nan`` if there are none.
    """
    m = mass(spectrum.manifold, spectrum.truncation)
    inside = np.isclose(laplace_symbol(spectrum.manifold, spectrum.truncation), level)
    worst = float("nan")
    for lam, u in zip(spectrum.eigenvalues, spectrum.eigenvectors):
        if abs(lam - level) > tol:
            continue
        total = np.dot(m * u, u)
        outside = np.sum((m * u * u)[~inside])
        ratio = math.sqrt(outside / total)
        worst = ratio if math.isnan(worst) else max(worst, ratio)
    return worst


def circle_orthogonal(f, tol=1e-12):
    """True when ``f`` has no first-harmonic component."""
    if not isinstance(f, Fourier1) or f.truncation == 0:
        return True
    scale = max(1.0, float(np.max(np.abs(f.vector))))
    return bool(max(abs(f.vector[1]), abs(f.vector[2])) <= tol * scale)
