"""Bell-diagonal qudit states with abelian U (x) conj(U) symmetry.

Operators built here: the shift ``S``, Weyl unitaries ``U_mn``, Bell
projectors ``P_mn``, the diagonal projectors ``Pi_n`` and the state families
parametrised by :class:`FamWeights`, :class:`FamGWeights` and
:class:`FamUUWeights`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .matrix_core import commutator_norm, kron

SUM_TOL = 1e-12
D_MIN, D_MAX = 2, 8


def _check_dim(d: int, minimum: int = D_MIN) -> int:
    if isinstance(d, bool) or int(d) != d:
        raise ValueError(f"dimension must be an integer, got {d!r}")
    d = int(d)
    if d < minimum:
        raise ValueError(f"dimension d={d} must be at least {minimum}")
    if d > D_MAX:
        raise ValueError(f"dimension d={d} exceeds the supported maximum {D_MAX}")
    return d


def _check_index(d: int, *idx: int) -> None:
    for i in idx:
        if not 0 <= i < d:
            raise ValueError(f"index {i} out of range 0..{d - 1}")


def _simplex(values, what: str) -> tuple[float, ...]:
    arr = np.asarray(values, dtype=float).ravel()
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what}: weights must be finite")
    if np.any(arr < 0):
        i = int(np.flatnonzero(arr < 0)[0])
        raise ValueError(f"{what}: weight at position {i} is negative ({arr[i]!r})")
    total = float(arr.sum())
    if abs(total - 1.0) > SUM_TOL:
        raise ValueError(f"{what}: weights sum to {total!r}, expected 1")
    return tuple(float(x) for x in arr)


@dataclass(frozen=True)
class BellSpectrum:
    """Probability table ``p[m][n]`` over the d^2 Bell projectors."""

    p: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        arr = np.asarray(self.p, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"Bell spectrum must be a d x d table, got shape {arr.shape}")
        _check_dim(arr.shape[0])
        _simplex(arr, "BellSpectrum")
        object.__setattr__(self, "p", tuple(tuple(float(x) for x in row) for row in arr))

    @property
    def d(self) -> int:
        return len(self.p)


@dataclass(frozen=True)
class FamWeights:
    """Weights ``(lambda_1, ..., lambda_d)`` of sum_i lambda_i Pi_i + lambda_d P+."""

    lambdas: tuple[float, ...]

    def __post_init__(self):
        lams = _simplex(self.lambdas, "FamWeights")
        _check_dim(len(lams))
        object.__setattr__(self, "lambdas", lams)

    @property
    def d(self) -> int:
        return len(self.lambdas)

    def lam(self, i: int) -> float:
        """lambda_i with the 1-based indexing of the family (1..d)."""
        return self.lambdas[i - 1]

    def to_famg(self) -> FamGWeights:
        return FamGWeights((0.0,) + self.lambdas)


@dataclass(frozen=True)
class FamGWeights:
    """Weights ``(lambda_0, lambda_1, ..., lambda_d)``; adds a Pi_0 term."""

    lambdas: tuple[float, ...]

    def __post_init__(self):
        lams = _simplex(self.lambdas, "FamGWeights")
        _check_dim(len(lams) - 1)
        object.__setattr__(self, "lambdas", lams)

    @property
    def d(self) -> int:
        return len(self.lambdas) - 1

    def lam(self, i: int) -> float:
        return self.lambdas[i]


@dataclass(frozen=True)
class FamUUWeights:
    """Coefficients of sum_m mu_m Pi_m + nu_m P_m0.

    Only trace normalisation is enforced; the operator need not be positive.
    """

    mu: tuple[float, ...]
    nu: tuple[float, ...]

    def __post_init__(self):
        mu = np.asarray(self.mu, dtype=float).ravel()
        nu = np.asarray(self.nu, dtype=float).ravel()
        if mu.shape != nu.shape:
            raise ValueError(f"mu and nu must have equal length, got {mu.size} and {nu.size}")
        _check_dim(mu.size)
        if not (np.all(np.isfinite(mu)) and np.all(np.isfinite(nu))):
            raise ValueError("FamUUWeights: coefficients must be finite")
        total = float(mu.sum() + nu.sum())
        if abs(total - 1.0) > SUM_TOL:
            raise ValueError(f"FamUUWeights: coefficients sum to {total!r}, expected 1")
        object.__setattr__(self, "mu", tuple(float(x) for x in mu))
        object.__setattr__(self, "nu", tuple(float(x) for x in nu))

    @property
    def d(self) -> int:
        return len(self.mu)


# -- operators ---------------------------------------------------------------


def shift_operator(d: int) -> np.ndarray:
    """S|k> = |k+1 mod d>."""
    d = _check_dim(d)
    s = np.zeros((d, d), dtype=complex)
    k = np.arange(d)
    s[(k + 1) % d, k] = 1.0
    return s


def weyl_unitary(d: int, m: int, n: int) -> np.ndarray:
    """U_mn|k> = omega^{mk} |k+n>, omega = exp(2 pi i / d)."""
    d = _check_dim(d)
    _check_index(d, m, n)
    u = np.zeros((d, d), dtype=complex)
    k = np.arange(d)
    u[(k + n) % d, k] = np.exp(2j * np.pi * m * k / d)
    return u


@lru_cache(maxsize=None)
def _max_entangled(d: int) -> np.ndarray:
    psi = np.zeros(d * d, dtype=complex)
    psi[np.arange(d) * (d + 1)] = 1.0 / np.sqrt(d)
    out = np.outer(psi, psi.conj())
    out.setflags(write=False)
    return out


def max_entangled(d: int) -> np.ndarray:
    """P+_d = (1/d) sum_ij |ii><jj|."""
    return _max_entangled(_check_dim(d)).copy()


def bell_projector(d: int, m: int, n: int) -> np.ndarray:
    """P_mn = (I (x) U_mn) P+ (I (x) U_mn)^dagger."""
    d = _check_dim(d)
    _check_index(d, m, n)
    op = kron(np.eye(d), weyl_unitary(d, m, n))
    return op @ _max_entangled(d) @ op.conj().T


@lru_cache(maxsize=None)
def _pi_state(d: int, n: int) -> np.ndarray:
    diag = np.zeros(d * d)
    i = np.arange(d)
    diag[i * d + (i + n) % d] = 1.0 / d
    out = np.diag(diag).astype(complex)
    out.setflags(write=False)
    return out


def pi_state(d: int, n: int) -> np.ndarray:
    """Pi_n = (1/d) sum_i |i, i+n><i, i+n|."""
    d = _check_dim(d)
    _check_index(d, n)
    return _pi_state(d, n).copy()


def abelian_unitary(x) -> np.ndarray:
    """U_x = diag(exp(i x_0), ..., exp(i x_{d-1}))."""
    x = np.asarray(x, dtype=float).ravel()
    if not np.all(np.isfinite(x)):
        raise ValueError("phase vector must be finite")
    return np.diag(np.exp(1j * x))


def random_phase_vectors(d: int, count: int, seed: int) -> np.ndarray:
    """``count`` phase vectors drawn uniformly from [0, 2 pi)^d."""
    rng = np.random.default_rng(seed)
    return rng.uniform(0.0, 2.0 * np.pi, size=(count, d))


# -- states ------------------------------------------------------------------


def bell_diagonal(spec: BellSpectrum) -> np.ndarray:
    d = spec.d
    rho = np.zeros((d * d, d * d), dtype=complex)
    for m in range(d):
        for n in range(d):
            if spec.p[m][n]:
                rho += spec.p[m][n] * bell_projector(d, m, n)
    return rho


def fam_g_state(w: FamGWeights) -> np.ndarray:
    """sum_{i=0}^{d-1} lambda_i Pi_i + lambda_d P+."""
    d = w.d
    rho = w.lam(d) * _max_entangled(d)
    for i in range(d):
        if w.lam(i):
            rho = rho + w.lam(i) * _pi_state(d, i)
    return rho


def fam_state(w: FamWeights) -> np.ndarray:
    """sum_{i=1}^{d-1} lambda_i Pi_i + lambda_d P+."""
    return fam_g_state(w.to_famg())


def fam_uu_state(w: FamUUWeights) -> np.ndarray:
    """sum_m (mu_m Pi_m + nu_m P_m0); Hermitian and unit trace, possibly not positive."""
    d = w.d
    op = np.zeros((d * d, d * d), dtype=complex)
    for m in range(d):
        op = op + w.mu[m] * _pi_state(d, m)
        if w.nu[m]:
            op = op + w.nu[m] * bell_projector(d, m, 0)
    return op


def isotropic_state(d: int, lambda_d: float) -> np.ndarray:
    """(1 - lambda_d)/d^2 I + lambda_d P+."""
    d = _check_dim(d)
    if not 0.0 <= lambda_d <= 1.0:
        raise ValueError(f"lambda_d={lambda_d!r} must lie in [0, 1]")
    return (1.0 - lambda_d) / d**2 * np.eye(d * d, dtype=complex) + lambda_d * _max_entangled(d)


def isotropic_weights(d: int, lambda_d: float) -> FamGWeights:
    """FamG weights lambda_0 = ... = lambda_{d-1} = (1 - lambda_d)/d."""
    d = _check_dim(d)
    if not 0.0 <= lambda_d <= 1.0:
        raise ValueError(f"lambda_d={lambda_d!r} must lie in [0, 1]")
    rest = (1.0 - lambda_d) / d
    return FamGWeights((rest,) * d + (lambda_d,))


def uniform_weights(d: int) -> FamWeights:
    """Weights of the separable state (1/d)(sum_{i>=1} Pi_i + P+)."""
    return FamWeights((1.0 / _check_dim(d),) * d)


def horodecki_family(d: int, alpha: float) -> FamWeights:
    """One-parameter family extending the d=3 Horodecki construction.

    lambda_1 = alpha/N, lambda_{d-1} = ((d-1)^2 + 1 - alpha)/N and every other
    weight (d-1)/N, with N = (d-1)(2d-3) + 1.
    """
    d = _check_dim(d, minimum=3)
    top = (d - 1) ** 2 + 1
    if not 0.0 <= alpha <= top:
        raise ValueError(f"alpha={alpha!r} must lie in [0, {top}] for d={d}")
    norm = (d - 1) * (2 * d - 3) + 1
    lams = [(d - 1) / norm] * d
    lams[0] = alpha / norm
    lams[d - 2] = (top - alpha) / norm
    return FamWeights(lams)


def epsilon_family(d: int, epsilon: float) -> FamWeights:
    """Weights proportional to (eps, 1, ..., 1, 1/eps, 1), normalised to sum 1.

    lambda_1 * lambda_{d-1} == lambda_d^2 for every eps, so each member sits on
    the PPT boundary.
    """
    d = _check_dim(d, minimum=3)
    if not (np.isfinite(epsilon) and epsilon > 0):
        raise ValueError(f"epsilon={epsilon!r} must be positive")
    norm = d - 2 + epsilon + 1.0 / epsilon
    lams = [1.0 / norm] * d
    lams[0] = epsilon / norm
    lams[d - 2] = 1.0 / (epsilon * norm)
    return FamWeights(lams)


def check_symmetry(rho, x) -> float:
    """commutator_norm(U_x (x) conj(U_x), rho)."""
    rho = np.asarray(rho, dtype=complex)
    u = abelian_unitary(x)
    d = u.shape[0]
    if rho.shape != (d * d, d * d):
        raise ValueError(f"state of shape {rho.shape} does not match phase vector of length {d}")
    return commutator_norm(kron(u, u.conj()), rho)
