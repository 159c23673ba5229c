"""Separability verdicts for the Fam and FamG families.

Each verdict carries evidence that an independent routine can re-check:
analytic inequalities on the weights, the smallest eigenvalue of the partial
transpose, a witness value, or an explicit ensemble of product vectors.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .matrix_core import JACOBI_TOL, max_entry_error, min_eigenvalue, partial_transpose_b
from .states import FamGWeights, FamWeights, fam_g_state, fam_state
from .witnesses import DetectionResult, WitnessSpec, detect, evaluate

ANALYTIC_SLACK = 1e-15
EIG_TOL = 1e-10
RECONSTRUCTION_TOL = 1e-10
FULL_ENSEMBLE_MAX_D = 6


class NotSeparableError(ValueError):
    """The sufficient separability condition fails, so no ensemble is built."""


class VerdictKind(str, enum.Enum):
    SEPARABLE = "Separable"
    PPT_ENTANGLED = "PptEntangled"
    NPT_ENTANGLED = "NptEntangled"
    UNDECIDED = "Undecided"


class EvidenceKind(str, enum.Enum):
    ANALYTIC_PPT = "AnalyticPpt"
    NUMERIC_PPT_EIG = "NumericPptEig"
    ANALYTIC_SEP = "AnalyticSep"
    WITNESS_VIOLATION = "WitnessViolation"
    DECOMPOSITION = "Decomposition"
    NECESSARY_COND_FAIL = "NecessaryCondFail"


@dataclass
class Evidence:
    kind: EvidenceKind
    data: dict
    attachment: object = field(default=None, repr=False, compare=False)

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "payload": dict(self.data)}


@dataclass
class Verdict:
    kind: VerdictKind
    evidence: list[Evidence]
    min_pt_eig: float
    best_witness: DetectionResult | None = None

    def find(self, kind: EvidenceKind) -> Evidence | None:
        return next((e for e in self.evidence if e.kind == kind), None)


@dataclass
class SeparableEnsemble:
    """Convex mixture sum_t w_t |a_t><a_t| (x) |b_t><b_t| of product states.

    Stored as arrays: ``weights`` (m,), ``kets_a`` and ``kets_b`` (m, d).
    """

    weights: np.ndarray
    kets_a: np.ndarray
    kets_b: np.ndarray

    def __len__(self) -> int:
        return len(self.weights)

    @property
    def d(self) -> int:
        return self.kets_a.shape[1]

    def terms(self):
        yield from zip(self.weights, self.kets_a, self.kets_b)

    def density_matrix(self) -> np.ndarray:
        m, d = self.kets_a.shape
        psi = (self.kets_a[:, :, None] * self.kets_b[:, None, :]).reshape(m, d * d)
        return (psi.T * self.weights) @ psi.conj()

    def reconstruction_error(self, target) -> float:
        return max_entry_error(self.density_matrix(), target)

    def max_norm_defect(self) -> float:
        """Largest deviation of a factor's norm from 1."""
        norms = np.concatenate(
            [np.linalg.norm(self.kets_a, axis=1), np.linalg.norm(self.kets_b, axis=1)]
        )
        return float(np.max(np.abs(norms - 1.0))) if norms.size else 0.0

    def is_valid(self, tol: float = RECONSTRUCTION_TOL) -> bool:
        return (
            bool(np.all(self.weights >= 0))
            and abs(float(self.weights.sum()) - 1.0) <= tol
            and self.max_norm_defect() <= tol
        )


# -- analytic conditions -------------------------------------------------------


def _lams(w) -> tuple[int, list[float]]:
    """d and a list indexed 0..d holding lambda_0 (0 for Fam) .. lambda_d."""
    if isinstance(w, FamWeights):
        return w.d, [0.0, *w.lambdas]
    if isinstance(w, FamGWeights):
        return w.d, list(w.lambdas)
    raise TypeError(f"expected FamWeights or FamGWeights, got {type(w).__name__}")


def ppt_analytic(w) -> tuple[bool, list[tuple[int, int]]]:
    """lambda_i lambda_{d-i} >= lambda_d^2 for i = 1..d-1.

    Each pair is reported once as ``(i, d-i)`` with ``i <= d-i``; for even d
    the self-paired index reads lambda_{d/2} >= lambda_d.  lambda_0 plays no
    role, so FamG weights are accepted as well.
    """
    d, lam = _lams(w)
    ld = lam[d]
    violated = []
    for i in range(1, d // 2 + 1):
        j = d - i
        if i == j:
            ok = lam[i] >= ld - ANALYTIC_SLACK
        else:
            ok = lam[i] * lam[j] >= ld * ld - ANALYTIC_SLACK
        if not ok:
            violated.append((i, j))
    return not violated, violated


def separable_analytic(w: FamWeights) -> tuple[bool, list[int]]:
    """lambda_i >= lambda_d for i = 1..d-1; violated indices ascending."""
    d, lam = _lams(w)
    violated = [i for i in range(1, d) if lam[i] < lam[d] - ANALYTIC_SLACK]
    return not violated, violated


def sufficient_separability_famg(w: FamGWeights) -> bool:
    """lambda_i >= lambda_d for i = 1..d-1, lambda_0 unconstrained."""
    return separable_analytic(w)[0]


def necessary_conditions_famg(w: FamGWeights) -> tuple[bool, list[tuple[int, tuple[int, ...]]]]:
    """Non-negativity of Tr(rho W) for every witness (d-k) Pi_0 + sum Pi_pi(i) - P+.

    Tr(rho W) = [(d-k-1) lambda_0 + sum_{i<=k} lambda_pi(i) - k lambda_d] / d,
    so the condition for a given k reads

        mean(lambda_pi(1..k)) >= lambda_d - (d-k-1) lambda_0 / k.

    Only the k smallest of lambda_1..lambda_{d-1} need checking.  One
    violation per failing k is reported, naming those k indices.
    """
    d, lam = _lams(w)
    order = sorted(range(1, d), key=lambda i: (lam[i], i))
    violated = []
    running = 0.0
    for k in range(1, d):
        running += lam[order[k - 1]]
        if running / k < lam[d] - (d - k - 1) * lam[0] / k - ANALYTIC_SLACK:
            violated.append((k, tuple(sorted(order[:k]))))
    return not violated, violated


def ppt_numeric(rho, d: int, tol: float = JACOBI_TOL) -> float:
    """Smallest eigenvalue of the partial transpose of ``rho``."""
    return min_eigenvalue(partial_transpose_b(rho, d), tol)


# -- separable decompositions ----------------------------------------------


def _smallest_odd_prime_at_least(n: int) -> int:
    p = max(n, 3)
    while True:
        if p % 2 and all(p % f for f in range(3, int(p**0.5) + 1, 2)):
            return p
        p += 1


def phase_ensemble(d: int, kind: str = "auto") -> SeparableEnsemble:
    """Uniform mixture of |e> (x) |conj e> averaging to (1/d)(sum_{n>=1} Pi_n + P+).

    ``|e> = d^{-1/2} sum_k exp(i phi_k) |k>``.  Phase sets:

    * ``"full"``: phi = 2 pi j / d for all j in Z_d^d (d^d terms); for d = 2
      the fourth roots of unity are used instead (16 terms), since with
      d-th roots the |00><11| coherences would not average out.
    * ``"quadratic"``: phi_k = 2 pi (s k + t k^2) / M for (s, t) in Z_M^2,
      M the smallest odd prime >= d (M^2 terms).
    * ``"auto"``: full up to d = 6, quadratic beyond.
    """
    if kind == "auto":
        kind = "full" if d <= FULL_ENSEMBLE_MAX_D else "quadratic"
    k = np.arange(d)
    if kind == "full":
        base = 4 if d == 2 else d
        js = np.array(list(product(range(base), repeat=d)), dtype=float)
        phases = 2 * np.pi * js / base
    elif kind == "quadratic":
        m = _smallest_odd_prime_at_least(d)
        st = np.array(list(product(range(m), repeat=2)))
        phases = 2 * np.pi * ((st[:, :1] * k + st[:, 1:] * k**2) % m) / m
    else:
        raise ValueError(f"unknown phase ensemble kind {kind!r}")
    kets = np.exp(1j * phases) / np.sqrt(d)
    weights = np.full(len(kets), 1.0 / len(kets))
    return SeparableEnsemble(weights, kets, kets.conj())


def separable_decomposition(w, kind: str = "auto") -> SeparableEnsemble:
    """Explicit product ensemble for weights satisfying lambda_i >= lambda_d.

    rho = d lambda_d rho~ + lambda_0 Pi_0 + sum_{i>=1} (lambda_i - lambda_d) Pi_i,
    with rho~ expanded by :func:`phase_ensemble` and each Pi_n into its d
    product basis terms |i> (x) |i+n>.
    """
    d, lam = _lams(w)
    ok, bad = separable_analytic(w)
    if not ok:
        i = bad[0]
        raise NotSeparableError(
            f"sufficient condition fails at index {i}: lambda_{i}={lam[i]!r} < lambda_{d}={lam[d]!r}"
        )
    weights, kets_a, kets_b = [], [], []
    if lam[d] > 0:
        ens = phase_ensemble(d, kind)
        weights.append(ens.weights * (d * lam[d]))
        kets_a.append(ens.kets_a)
        kets_b.append(ens.kets_b)
    eye = np.eye(d, dtype=complex)
    i = np.arange(d)
    for n in range(d):
        coef = lam[0] if n == 0 else max(lam[n] - lam[d], 0.0)
        if coef <= 0:
            continue
        weights.append(np.full(d, coef / d))
        kets_a.append(eye[i])
        kets_b.append(eye[(i + n) % d])
    return SeparableEnsemble(
        np.concatenate(weights), np.concatenate(kets_a), np.concatenate(kets_b)
    )


# -- verdicts ----------------------------------------------------------------


def _ppt_evidence(w, rho, d, tol_eig, eig_tol) -> tuple[bool, float, list[Evidence]]:
    ok, pairs = ppt_analytic(w)
    min_eig = ppt_numeric(rho, d, eig_tol)
    evidence = [
        Evidence(EvidenceKind.ANALYTIC_PPT, {"holds": ok, "violated_pairs": [list(p) for p in pairs]}),
        Evidence(EvidenceKind.NUMERIC_PPT_EIG, {"min_eigenvalue": min_eig, "ppt": min_eig >= -tol_eig}),
    ]
    return ok, min_eig, evidence


def _decomposition_evidence(w, rho) -> Evidence:
    ens = separable_decomposition(w)
    err = ens.reconstruction_error(rho)
    return Evidence(
        EvidenceKind.DECOMPOSITION,
        {"terms": len(ens), "reconstruction_error": err},
        attachment=ens,
    )


def _witness_evidence(det: DetectionResult) -> Evidence:
    spec = det.best_spec
    return Evidence(
        EvidenceKind.WITNESS_VIOLATION,
        {"d": spec.d, "k": spec.k, "pi": list(spec.pi), "value": det.best_value},
    )


def _classify(w, rho, d, tol_eig, eig_tol, famg: bool) -> Verdict:
    ppt_ok, min_eig, evidence = _ppt_evidence(w, rho, d, tol_eig, eig_tol)
    det = detect(rho, d)
    if not ppt_ok:
        return Verdict(VerdictKind.NPT_ENTANGLED, evidence, min_eig, det)

    sep_ok, bad = separable_analytic(w)
    evidence.append(Evidence(EvidenceKind.ANALYTIC_SEP, {"holds": sep_ok, "violated_indices": bad}))
    if sep_ok:
        evidence.append(_decomposition_evidence(w, rho))
        return Verdict(VerdictKind.SEPARABLE, evidence, min_eig, det)

    entangled = det.detected
    if famg:
        nec_ok, failures = necessary_conditions_famg(w)
        if not nec_ok:
            evidence.append(
                Evidence(
                    EvidenceKind.NECESSARY_COND_FAIL,
                    {"violations": [{"k": k, "indices": list(idx)} for k, idx in failures]},
                )
            )
            entangled = True
    else:
        # the lambda_i >= lambda_d condition is necessary for this family
        entangled = True
    if det.detected:
        evidence.append(_witness_evidence(det))
    kind = VerdictKind.PPT_ENTANGLED if entangled else VerdictKind.UNDECIDED
    return Verdict(kind, evidence, min_eig, det)


def classify_fam(w: FamWeights, tol_eig: float = EIG_TOL, eig_tol: float = JACOBI_TOL) -> Verdict:
    """Complete classification of sum_{i>=1} lambda_i Pi_i + lambda_d P+.

    The verdict follows the exact analytic conditions; the numeric partial
    transpose check (PPT when its smallest eigenvalue is >= -``tol_eig``)
    is attached as independent evidence.
    """
    if not isinstance(w, FamWeights):
        raise TypeError("classify_fam expects FamWeights")
    return _classify(w, fam_state(w), w.d, tol_eig, eig_tol, famg=False)


def classify_famg(w: FamGWeights, tol_eig: float = EIG_TOL, eig_tol: float = JACOBI_TOL) -> Verdict:
    """Classification of the family with an extra lambda_0 Pi_0 term.

    The separability condition is only sufficient here, so weights that pass
    the PPT test and every witness test but fail lambda_i >= lambda_d come
    back Undecided.
    """
    if isinstance(w, FamWeights):
        w = w.to_famg()
    if not isinstance(w, FamGWeights):
        raise TypeError("classify_famg expects FamGWeights")
    return _classify(w, fam_g_state(w), w.d, tol_eig, eig_tol, famg=True)


def recheck(verdict: Verdict, w) -> bool:
    """Re-derive every evidence item of ``verdict`` by independent routines."""
    d, _ = _lams(w)
    rho = fam_state(w) if isinstance(w, FamWeights) else fam_g_state(w)
    for ev in verdict.evidence:
        if ev.kind is EvidenceKind.ANALYTIC_PPT:
            if ppt_analytic(w)[0] != ev.data["holds"]:
                return False
        elif ev.kind is EvidenceKind.ANALYTIC_SEP:
            if separable_analytic(w)[0] != ev.data["holds"]:
                return False
        elif ev.kind is EvidenceKind.NUMERIC_PPT_EIG:
            ref = float(np.linalg.eigvalsh(partial_transpose_b(rho, d))[0])
            if abs(ref - ev.data["min_eigenvalue"]) > 1e-10:
                return False
        elif ev.kind is EvidenceKind.WITNESS_VIOLATION:
            spec = WitnessSpec(ev.data["d"], ev.data["k"], tuple(ev.data["pi"]))
            if not evaluate(rho, spec) < -1e-12:
                return False
        elif ev.kind is EvidenceKind.DECOMPOSITION:
            ens = ev.attachment
            if not (ens.is_valid() and ens.reconstruction_error(rho) <= RECONSTRUCTION_TOL):
                return False
        elif ev.kind is EvidenceKind.NECESSARY_COND_FAIL:
            if necessary_conditions_famg(w)[0]:
                return False
    return True
