"""Jacobi eigen/singular value kernels for small complex matrices.

Blocks in the finite-group model never exceed a few rows, so cyclic Jacobi
sweeps are accurate and fast enough.  Both routines use the same 2x2
Hermitian rotation.
"""
from __future__ import annotations

import cmath
import math

import numpy as np

JACOBI_TOL = 1e-12
MAX_SWEEPS = 100


class ConvergenceError(RuntimeError):
    pass


def _rotation(a: float, b: complex, c: float) -> np.ndarray:
    """Unitary J with J^* [[a, b], [conj(b), c]] J diagonal."""
    mag = abs(b)
    phase = cmath.exp(1j * cmath.phase(b))
    tau = (c - a) / (2.0 * mag)
    t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + math.sqrt(1.0 + tau * tau))
    cs = 1.0 / math.sqrt(1.0 + t * t)
    sn = t * cs
    return np.array([[cs, sn * phase], [-sn * phase.conjugate(), cs]], dtype=complex)


def eigh(A, tol: float = JACOBI_TOL, max_sweeps: int = MAX_SWEEPS) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Returns ascending real eigenvalues ``w`` and unitary ``V`` with
    ``A @ V = V @ diag(w)``.  Only the Hermitian part of ``A`` is used.
    """
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("eigh needs a square matrix")
    H = 0.5 * (A + A.conj().T)
    V = np.eye(n, dtype=complex)
    scale = np.linalg.norm(H)
    if n <= 1 or scale == 0.0:
        w = np.real(np.diag(H)).copy()
        return w, V
    for _ in range(max_sweeps):
        off = np.linalg.norm(H - np.diag(np.diag(H)))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = H[p, q]
                if abs(b) <= 1e-300 or abs(b) < 1e-18 * scale:
                    continue
                J = _rotation(H[p, p].real, b, H[q, q].real)
                idx = [p, q]
                H[:, idx] = H[:, idx] @ J
                H[idx, :] = J.conj().T @ H[idx, :]
                H[p, q] = H[q, p] = 0.0
                H[p, p] = H[p, p].real
                H[q, q] = H[q, q].real
                V[:, idx] = V[:, idx] @ J
    else:
        raise ConvergenceError(f"Jacobi eigh did not converge in {max_sweeps} sweeps")
    w = np.real(np.diag(H))
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


def eigvalsh(A) -> np.ndarray:
    return eigh(A)[0]


def svd(A, tol: float = JACOBI_TOL, max_sweeps: int = MAX_SWEEPS) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Thin SVD ``A = U @ diag(s) @ Vh`` by one-sided (Hestenes) Jacobi.

    ``s`` is descending; ``U`` (m x r) and ``Vh`` (r x n) have orthonormal
    columns/rows with r = min(m, n).  Columns of ``U`` belonging to zero
    singular values are completed to an orthonormal set.
    """
    A = np.asarray(A, dtype=complex)
    m, n = A.shape
    if m < n:
        U, s, Vh = svd(A.conj().T, tol, max_sweeps)
        return Vh.conj().T, s, U.conj().T
    G = A.copy()
    V = np.eye(n, dtype=complex)
    # columns below this squared norm are numerical zeros and cannot be orthogonalized further
    floor = (1e-15 * np.linalg.norm(A)) ** 2
    for _ in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                gp, gq = G[:, p], G[:, q]
                alpha = float(np.vdot(gp, gp).real)
                beta = float(np.vdot(gq, gq).real)
                gamma = complex(np.vdot(gp, gq))
                if alpha <= floor or beta <= floor or abs(gamma) <= tol * math.sqrt(alpha * beta):
                    continue
                rotated = True
                J = _rotation(alpha, gamma, beta)
                idx = [p, q]
                G[:, idx] = G[:, idx] @ J
                V[:, idx] = V[:, idx] @ J
        if not rotated:
            break
    else:
        raise ConvergenceError(f"one-sided Jacobi did not converge in {max_sweeps} sweeps")
    s = np.linalg.norm(G, axis=0)
    order = np.argsort(-s, kind="stable")
    s, G, V = s[order], G[:, order], V[:, order]
    U = np.zeros((m, n), dtype=complex)
    # columns this small carry no direction information; complete them instead
    nz = s > (1e-13 * s[0] if n and s[0] > 0 else 0.0)
    U[:, nz] = G[:, nz] / s[nz]
    if not nz.all():
        U = _complete_columns(U, nz)
    return U, s, V.conj().T


def _complete_columns(U: np.ndarray, have: np.ndarray) -> np.ndarray:
    """Fill columns not flagged in ``have`` with vectors orthonormal to the rest."""
    m = U.shape[0]
    basis = [U[:, j] for j in range(U.shape[1]) if have[j]]
    fill = []
    for e in np.eye(m, dtype=complex):
        v = e.copy()
        for _ in range(2):
            for b in basis + fill:
                v = v - np.vdot(b, v) * b
        nv = np.linalg.norm(v)
        if nv > 1e-8:
            fill.append(v / nv)
        if len(fill) == int((~have).sum()):
            break
    out = U.copy()
    for j, v in zip(np.flatnonzero(~have), fill):
        out[:, j] = v
    return out


def svdvals(A) -> np.ndarray:
    return svd(A)[1]


def trace_norm(A) -> float:
    if np.size(A) == 1:
        return float(abs(np.ravel(A)[0]))
    return float(np.sum(svdvals(A))) if np.size(A) else 0.0


def rank_tolerance(scale: float, rel: float = 1e-8) -> float:
    """Nonzero threshold: ``rel`` times the scale, with the scale floored at 1."""
    return rel * max(scale, 1.0)


def range_basis(A, tol: float | None = None) -> np.ndarray:
    """Orthonormal basis (as columns) of the column space of ``A``."""
    A = np.asarray(A, dtype=complex)
    if A.size == 0:
        return np.zeros((A.shape[0], 0), dtype=complex)
    U, s, _ = svd(A)
    if tol is None:
        tol = rank_tolerance(s[0] if s.size else 0.0)
    return U[:, s > tol]


def range_projection(A, tol: float | None = None) -> np.ndarray:
    B = range_basis(A, tol)
    return B @ B.conj().T
