"""Entanglement witnesses (d-k) Pi_0 + sum_{i<=k} Pi_pi(i) - P+."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .matrix_core import as_matrix, trace_product
from .states import _check_dim, _max_entangled, _pi_state

DETECTION_TOL = 1e-12
IMAG_TOL = 1e-12


@dataclass(frozen=True)
class WitnessSpec:
    """Witness label: dimension, cut-off ``k`` and a permutation of 1..d-1.

    ``pi`` lists the images ``(pi(1), ..., pi(d-1))``; omit it for the
    identity.
    """

    d: int
    k: int
    pi: tuple[int, ...] | None = None

    def __post_init__(self):
        d = _check_dim(self.d)
        pi = tuple(range(1, d)) if self.pi is None else tuple(int(i) for i in self.pi)
        if sorted(pi) != list(range(1, d)):
            raise ValueError(f"pi={pi} is not a permutation of 1..{d - 1}")
        if not 1 <= self.k <= d - 1:
            raise ValueError(f"k={self.k} must lie in 1..{d - 1}")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "pi", pi)

    @property
    def selected(self) -> tuple[int, ...]:
        """Indices pi(1), ..., pi(k) of the Pi terms carried with weight 1."""
        return self.pi[: self.k]


@dataclass(frozen=True)
class DetectionResult:
    detected: bool
    best_spec: WitnessSpec | None
    best_value: float


def witness_matrix(spec: WitnessSpec) -> np.ndarray:
    d, k = spec.d, spec.k
    w = (d - k) * _pi_state(d, 0) - _max_entangled(d)
    for i in spec.selected:
        w = w + _pi_state(d, i)
    return w


def reduction_witness(d: int) -> np.ndarray:
    """(id (x) R) P+ with the reduction map R(X) = Tr(X) I - X."""
    d = _check_dim(d)
    blocks = _max_entangled(d).reshape(d, d, d, d)
    out = np.empty_like(blocks)
    eye = np.eye(d)
    for i in range(d):
        for j in range(d):
            x = blocks[i, :, j, :]
            out[i, :, j, :] = np.trace(x) * eye - x
    return out.reshape(d * d, d * d)


def _real_trace(rho: np.ndarray, w: np.ndarray) -> float:
    val = trace_product(rho, w)
    if abs(val.imag) > IMAG_TOL:
        raise ValueError(f"Tr(rho W) has imaginary part {val.imag:.3e}; is rho Hermitian?")
    return val.real


def evaluate(rho, spec: WitnessSpec) -> float:
    """Tr(rho W) for the witness labelled by ``spec``."""
    rho = as_matrix(rho)
    n = spec.d * spec.d
    if rho.shape != (n, n):
        raise ValueError(f"state of shape {rho.shape} does not match witness dimension {n}")
    return _real_trace(rho, witness_matrix(spec))


def _random_unit(rng: np.random.Generator, count: int, d: int) -> np.ndarray:
    v = rng.standard_normal((count, d)) + 1j * rng.standard_normal((count, d))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def product_positivity_check(witness, samples: int, seed: int, batch: int = 4096) -> float:
    """Minimum of <a(x)b|W|a(x)b> over random unit product vectors.

    ``witness`` is a :class:`WitnessSpec` or a d^2 x d^2 matrix.  Only a
    falsification test: a negative result disproves block-positivity, a
    non-negative one proves nothing.
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    w = witness_matrix(witness) if isinstance(witness, WitnessSpec) else as_matrix(witness)
    n = w.shape[0]
    d = int(round(np.sqrt(n)))
    if d * d != n or w.shape != (n, n):
        raise ValueError(f"witness of shape {w.shape} is not d^2 x d^2")
    rng = np.random.default_rng(seed)
    best = np.inf
    done = 0
    while done < samples:
        m = min(batch, samples - done)
        a = _random_unit(rng, m, d)
        b = _random_unit(rng, m, d)
        psi = (a[:, :, None] * b[:, None, :]).reshape(m, n)
        vals = np.einsum("si,ij,sj->s", psi.conj(), w, psi).real
        best = min(best, float(vals.min()))
        done += m
    return best


def detect(rho, d: int) -> DetectionResult:
    """Search every (k, pi) for the most negative Tr(rho W).

    Ties go to the lexicographically first (k, pi).  Tr(rho W) is linear in
    W, so each candidate is scored from the d + 1 traces Tr(rho Pi_n) and
    Tr(rho P+); the winner is re-evaluated on the dense witness.
    """
    d = _check_dim(d)
    rho = as_matrix(rho)
    if rho.shape != (d * d, d * d):
        raise ValueError(f"state of shape {rho.shape} is not {d * d} x {d * d}")
    t_pi = [_real_trace(rho, _pi_state(d, n)) for n in range(d)]
    t_plus = _real_trace(rho, _max_entangled(d))
    rest = range(1, d)
    best_val = np.inf
    best = None
    for k in range(1, d):
        base = (d - k) * t_pi[0] - t_plus
        # k-prefixes in lexicographic order; the smallest completion of a
        # prefix is the lexicographically first full permutation carrying it
        for prefix in permutations(rest, k):
            val = base + sum(t_pi[i] for i in prefix)
            if val < best_val - 1e-15:
                best_val = val
                best = (k, prefix)
    k, prefix = best
    pi = prefix + tuple(i for i in rest if i not in prefix)
    spec = WitnessSpec(d, k, pi)
    value = evaluate(rho, spec)
    return DetectionResult(detected=value < -DETECTION_TOL, best_spec=spec, best_value=value)
