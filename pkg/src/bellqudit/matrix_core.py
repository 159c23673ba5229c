"""Dense complex matrix kernels.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  The bipartite
basis of C^d (x) C^d is ordered ``|i>_A (x) |j>_B -> i*d + j`` everywhere in
the package.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

HERMITIAN_TOL = 1e-12
JACOBI_TOL = 1e-14
MAX_SWEEPS = 60


def as_matrix(m) -> np.ndarray:
    """Return ``m`` as a 2-D complex array (no copy when already one)."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {arr.shape}")
    return arr


def _square(m: np.ndarray, name: str = "matrix") -> int:
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be square, got shape {m.shape}")
    return m.shape[0]


def hermiticity_residual(m) -> float:
    """max_{ij} |M_ij - conj(M_ji)|."""
    m = as_matrix(m)
    _square(m)
    if m.size == 0:
        return 0.0
    return float(np.max(np.abs(m - m.conj().T)))


def is_hermitian(m, tol: float = HERMITIAN_TOL) -> bool:
    m = as_matrix(m)
    return m.shape[0] == m.shape[1] and hermiticity_residual(m) <= tol


def kron(a, b) -> np.ndarray:
    """Kronecker product, ``(a (x) b)[i*rb + p, j*cb + q] = a[i, j] * b[p, q]``."""
    a = as_matrix(a)
    b = as_matrix(b)
    ra, ca = a.shape
    rb, cb = b.shape
    out = a[:, None, :, None] * b[None, :, None, :]
    return out.reshape(ra * rb, ca * cb)


def ket(d: int, k: int) -> np.ndarray:
    """Computational basis vector |k> in C^d."""
    if not 0 <= k < d:
        raise ValueError(f"basis index {k} out of range for dimension {d}")
    v = np.zeros(d, dtype=complex)
    v[k] = 1.0
    return v


def normalize(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    norm = np.linalg.norm(v)
    if norm == 0:
        raise ValueError("cannot normalize the zero vector")
    return v / norm


def projector(v) -> np.ndarray:
    """|v><v| for a (not necessarily normalized) vector."""
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())


def partial_transpose_b(m, d: int) -> np.ndarray:
    """Transpose on the second tensor factor of a d^2 x d^2 matrix.

    ``out[(i,l), (k,j)] = m[(i,j), (k,l)]``.
    """
    m = as_matrix(m)
    n = _square(m)
    if d < 1 or n != d * d:
        raise ValueError(f"matrix of size {n} is not d^2 x d^2 for d={d}")
    t = m.reshape(d, d, d, d)
    return t.transpose(0, 3, 2, 1).reshape(n, n).copy()


@lru_cache(maxsize=None)
def _round_robin(n: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    # Tournament ordering: each round is a set of disjoint (p, q) pairs and
    # every pair p < q occurs exactly once per sweep.
    players = list(range(n)) + ([-1] if n % 2 else [])
    size = len(players)
    rounds = []
    for _ in range(size - 1):
        ps, qs = [], []
        for i in range(size // 2):
            a, b = players[i], players[size - 1 - i]
            if a >= 0 and b >= 0:
                ps.append(min(a, b))
                qs.append(max(a, b))
        rounds.append((np.array(ps, dtype=int), np.array(qs, dtype=int)))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def _jacobi(m: np.ndarray, tol: float, vectors: bool):
    n = m.shape[0]
    a = 0.5 * (m + m.conj().T)
    x = np.eye(n, dtype=complex) if vectors else None
    scale = np.linalg.norm(a)
    if n < 2 or scale == 0.0:
        return np.real(np.diag(a)).copy(), x
    rounds = _round_robin(n)
    threshold = tol * scale
    for _ in range(MAX_SWEEPS):
        if _off_norm(a) <= threshold:
            break
        for p, q in rounds:
            apq = a[p, q]
            mag = np.abs(apq)
            # entries this small cannot move the stopping test; skipping them
            # also keeps tau finite
            active = mag > 1e-18 * scale
            if not active.any():
                continue
            safe = np.where(active, mag, 1.0)
            phase = np.where(active, apq / safe, 1.0)
            tau = (a[q, q].real - a[p, p].real) / (2.0 * safe)
            t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.hypot(1.0, tau))
            t = np.where(active, t, 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            # V = diag(1, conj(phase)) @ [[c, s], [-s, c]] on each (p, q) block
            vqp = -s * phase.conj()
            vqq = c * phase.conj()
            ap = a[:, p]
            aq = a[:, q]
            a[:, p] = ap * c + aq * vqp
            a[:, q] = ap * s + aq * vqq
            rp = a[p, :]
            rq = a[q, :]
            a[p, :] = c[:, None] * rp + vqp.conj()[:, None] * rq
            a[q, :] = s[:, None] * rp + vqq.conj()[:, None] * rq
            a[p, q] = 0.0
            a[q, p] = 0.0
            if vectors:
                xp = x[:, p]
                xq = x[:, q]
                x[:, p] = xp * c + xq * vqp
                x[:, q] = xp * s + xq * vqq
    else:
        off = _off_norm(a)
        if off > 1e3 * threshold:
            raise RuntimeError(f"Jacobi iteration did not converge (off-diagonal mass {off:.3e})")
    return np.real(np.diag(a)).copy(), x


def _check_hermitian(m: np.ndarray) -> None:
    _square(m)
    res = hermiticity_residual(m)
    if res > HERMITIAN_TOL:
        raise ValueError(f"matrix is not Hermitian (residual {res:.3e})")


def hermitian_eigenvalues(m, tol: float = JACOBI_TOL) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix by cyclic Jacobi rotations.

    Rotations are applied in round-robin order, a full set of disjoint pivot
    pairs per step, until the off-diagonal Frobenius mass drops below
    ``tol * ||M||_F``.
    """
    m = as_matrix(m)
    _check_hermitian(m)
    w, _ = _jacobi(m, tol, vectors=False)
    return np.sort(w)


def hermitian_eigh(m, tol: float = JACOBI_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and eigenvectors (columns) by Jacobi rotations."""
    m = as_matrix(m)
    _check_hermitian(m)
    w, x = _jacobi(m, tol, vectors=True)
    order = np.argsort(w)
    return w[order], x[:, order]


def min_eigenvalue(m, tol: float = JACOBI_TOL) -> float:
    return float(hermitian_eigenvalues(m, tol)[0])


def trace_product(a, b) -> complex:
    """Tr(a @ b) without forming the product."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[0] != b.shape[1] or a.shape[1] != b.shape[0] or a.shape[0] != a.shape[1]:
        raise ValueError(f"incompatible shapes {a.shape} and {b.shape}")
    return complex(np.sum(a * b.T))


def commutator_norm(a, b) -> float:
    """Largest absolute entry of ``ab - ba``."""
    a = as_matrix(a)
    b = as_matrix(b)
    _square(a)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch {a.shape} vs {b.shape}")
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a @ b - b @ a)))


def max_entry_error(a, b) -> float:
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch {a.shape} vs {b.shape}")
    return float(np.max(np.abs(a - b))) if a.size else 0.0
