"""Dense symmetric eigensolver and constraint-complement bases."""

from __future__ import annotations

import numpy as np

# Off-diagonal threshold relative to ||A||_F, and sweep cap.
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 30


class ConvergenceError(RuntimeError):
    pass


def _round_robin(n):
    """Pairings for one cyclic sweep: ``n - 1`` rounds of disjoint pairs.

    Uses the circle method; an odd ``n`` gets a phantom index that is
    dropped from each round.
    """
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = [(players[i], players[m - 1 - i]) for i in range(m // 2)]
        pairs = [(min(p, q), max(p, q)) for p, q in pairs if p < n and q < n]
        if pairs:
            rounds.append(np.array(pairs, dtype=np.intp))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def symmetric_eigen(A, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    """Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.

    Each sweep visits every off-diagonal pair once, in round-robin order so
    that the rotations within a round act on disjoint index pairs and can be
    applied together.

    Returns
    -------
    w : ndarray, shape (n,)
        Eigenvalues in ascending order.
    V : ndarray, shape (n, n)
        Orthonormal eigenvectors, ``A @ V[:, k] = w[k] * V[:, k]``.
    """
    A = np.array(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    n = A.shape[0]
    scale = np.linalg.norm(A)
    if n and np.max(np.abs(A - A.T)) > tol * max(scale, 1.0):
        raise ValueError("matrix is not symmetric within tolerance")
    A = 0.5 * (A + A.T)
    V = np.eye(n)
    if n <= 1 or scale == 0.0:
        return np.diag(A).copy(), V

    thresh = tol * scale
    rounds = _round_robin(n)
    off_mask = ~np.eye(n, dtype=bool)
    for _ in range(max_sweeps):
        if np.max(np.abs(A[off_mask])) <= thresh:
            break
        for pairs in rounds:
            p, q = pairs[:, 0], pairs[:, 1]
            apq = A[p, q]
            active = np.abs(apq) > 0.1 * thresh
            if not active.any():
                continue
            p, q, apq = p[active], q[active], apq[active]
            tau = (A[q, q] - A[p, p]) / (2.0 * apq)
            sgn = np.where(tau >= 0.0, 1.0, -1.0)
            t = sgn / (np.abs(tau) + np.sqrt(1.0 + tau * tau))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            # A <- J^T A J with J = [[c, s], [-s, c]] on each (p, q) block
            Ap, Aq = A[:, p].copy(), A[:, q]
            A[:, p] = c * Ap - s * Aq
            A[:, q] = s * Ap + c * Aq
            Ap, Aq = A[p, :].copy(), A[q, :]
            A[p, :] = c[:, None] * Ap - s[:, None] * Aq
            A[q, :] = s[:, None] * Ap + c[:, None] * Aq
            A[p, q] = 0.0
            A[q, p] = 0.0
            Vp, Vq = V[:, p].copy(), V[:, q]
            V[:, p] = c * Vp - s * Vq
            V[:, q] = s * Vp + c * Vq
    else:
        if np.max(np.abs(A[off_mask])) > thresh:
            raise ConvergenceError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")

    w = np.diag(A).copy()
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


def constraint_complement_basis(c):
    """Orthonormal basis of the hyperplane orthogonal to ``c``.

    A single Householder reflection maps ``c / |c|`` onto the coordinate axis
    of its largest-magnitude entry (with the sign chosen to avoid
    cancellation); the remaining reflected axes span the complement.

    Returns an ``m x (m - 1)`` matrix ``Q`` with ``Q.T @ Q = I`` and
    ``Q.T @ c = 0``.
    """
    c = np.asarray(c, dtype=float)
    if c.ndim != 1:
        raise ValueError("constraint must be a vector")
    size = np.linalg.norm(c)
    if size == 0.0:
        raise ValueError("constraint vector is zero")
    v = c / size
    k = int(np.argmax(np.abs(v)))
    w = v.copy()
    w[k] += 1.0 if v[k] >= 0.0 else -1.0
    keep = np.delete(np.arange(len(c)), k)
    Q = np.eye(len(c))[:, keep] - (2.0 / np.dot(w, w)) * np.outer(w, w[keep])
    return Q
