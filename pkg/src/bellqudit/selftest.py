"""Invariant suites run by ``bellqudit selftest``."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import matrix_core
from .classify import (
    ppt_analytic,
    ppt_numeric,
    separable_decomposition,
)
from .matrix_core import hermitian_eigenvalues, max_entry_error, partial_transpose_b
from .states import (
    FamGWeights,
    FamUUWeights,
    FamWeights,
    bell_projector,
    check_symmetry,
    fam_g_state,
    fam_state,
    fam_uu_state,
    isotropic_state,
    max_entangled,
    pi_state,
    random_phase_vectors,
)
from .witnesses import WitnessSpec, product_positivity_check, reduction_witness, witness_matrix


@dataclass
class SuiteResult:
    name: str
    passed: bool
    detail: str


@dataclass
class SelftestConfig:
    d_min: int = 2
    d_max: int = 5
    seed: int = 42
    phase_samples: int = 100
    oracle_samples: int = 200
    product_samples: int = 2000
    decomposition_samples: int = 20
    jacobi_tol: float = matrix_core.JACOBI_TOL

    @property
    def dims(self) -> range:
        return range(self.d_min, self.d_max + 1)


def _projector_algebra(cfg: SelftestConfig) -> tuple[bool, str]:
    worst = 0.0
    for d in cfg.dims:
        pis = [pi_state(d, n) for n in range(d)]
        for m in range(d):
            for n in range(d):
                expected = pis[n] / d if m == n else 0 * pis[n]
                worst = max(worst, max_entry_error(pis[m] @ pis[n], expected))
        worst = max(worst, max_entry_error(sum(pis), np.eye(d * d) / d))
    return worst <= 1e-12, f"max residual {worst:.2e}"


def _bell_basis(cfg: SelftestConfig) -> tuple[bool, str]:
    worst = 0.0
    for d in cfg.dims:
        ps = [bell_projector(d, m, n) for m in range(d) for n in range(d)]
        vecs = np.array([p.ravel() for p in ps])
        gram = vecs @ vecs.conj().T
        worst = max(worst, max_entry_error(gram, np.eye(d * d)))
        worst = max(worst, max_entry_error(sum(ps), np.eye(d * d)))
    return worst <= 1e-12, f"max residual {worst:.2e}"


def _symmetry(cfg: SelftestConfig) -> tuple[bool, str]:
    rng = np.random.default_rng(cfg.seed)
    worst = 0.0
    for d in cfg.dims:
        states = [
            fam_state(FamWeights(rng.dirichlet(np.ones(d)))),
            fam_g_state(FamGWeights(rng.dirichlet(np.ones(d + 1)))),
        ]
        coef = rng.dirichlet(np.ones(2 * d))
        states.append(fam_uu_state(FamUUWeights(coef[:d], coef[d:])))
        for x in random_phase_vectors(d, cfg.phase_samples, cfg.seed + d):
            for rho in states:
                worst = max(worst, check_symmetry(rho, x))
    return worst <= 1e-12, f"max commutator {worst:.2e}"


def _oracle_equivalence(cfg: SelftestConfig) -> tuple[bool, str]:
    rng = np.random.default_rng(cfg.seed)
    disagreements = 0
    total = 0
    for d in cfg.dims:
        for _ in range(cfg.oracle_samples):
            w = FamWeights(rng.dirichlet(np.ones(d)))
            numeric = ppt_numeric(fam_state(w), d, cfg.jacobi_tol) >= -1e-10
            disagreements += ppt_analytic(w)[0] != numeric
            total += 1
    return disagreements == 0, f"{disagreements} disagreements in {total} states"


def _boundaries(cfg: SelftestConfig) -> tuple[bool, str]:
    worst = 0.0
    for d in cfg.dims:
        pt_plus = ppt_numeric(max_entangled(d), d, cfg.jacobi_tol)
        worst = max(worst, abs(pt_plus + 1.0 / d))
        iso = ppt_numeric(isotropic_state(d, 1.0 / (d + 1)), d, cfg.jacobi_tol)
        worst = max(worst, abs(iso))
    return worst <= 1e-10, f"max deviation {worst:.2e}"


def _reduction(cfg: SelftestConfig) -> tuple[bool, str]:
    worst_id = 0.0
    min_pt = np.inf
    for d in cfg.dims:
        r = reduction_witness(d)
        worst_id = max(worst_id, max_entry_error(r, witness_matrix(WitnessSpec(d, d - 1))))
        pt = partial_transpose_b(r, d)
        min_pt = min(min_pt, hermitian_eigenvalues(pt, cfg.jacobi_tol)[0])
    ok = worst_id <= 1e-12 and min_pt >= -1e-10
    return ok, f"identity residual {worst_id:.2e}, min PT eigenvalue {min_pt:.2e}"


def _witness_positivity(cfg: SelftestConfig) -> tuple[bool, str]:
    worst_prod = np.inf
    worst_neg = -np.inf
    for d in cfg.dims:
        for k in range(1, d):
            spec = WitnessSpec(d, k)
            worst_prod = min(worst_prod, product_positivity_check(spec, cfg.product_samples, cfg.seed))
            lo = hermitian_eigenvalues(witness_matrix(spec), cfg.jacobi_tol)[0]
            worst_neg = max(worst_neg, lo)
    ok = worst_prod >= -1e-12 and worst_neg < -1e-12
    return ok, f"min product value {worst_prod:.2e}, largest min eigenvalue {worst_neg:.2e}"


def _decomposition(cfg: SelftestConfig) -> tuple[bool, str]:
    rng = np.random.default_rng(cfg.seed)
    worst = 0.0
    for d in cfg.dims:
        for _ in range(cfg.decomposition_samples):
            w = random_separable_weights(d, rng)
            ens = separable_decomposition(w)
            if not ens.is_valid():
                return False, f"invalid ensemble for {w.lambdas}"
            worst = max(worst, ens.reconstruction_error(fam_state(w)))
    return worst <= 1e-10, f"max reconstruction error {worst:.2e}"


def random_separable_weights(d: int, rng: np.random.Generator) -> FamWeights:
    """Random weights with lambda_i >= lambda_d for every i."""
    # lambda_d = t, lambda_i = t + share_i * (1 - d t)
    t = rng.uniform(0.0, 1.0 / d)
    lams = np.append(t + rng.dirichlet(np.ones(d - 1)) * (1.0 - d * t), t)
    return FamWeights(lams / lams.sum())


SUITES: dict[str, Callable[[SelftestConfig], tuple[bool, str]]] = {
    "projector_algebra": _projector_algebra,
    "bell_basis": _bell_basis,
    "symmetry": _symmetry,
    "oracle_equivalence": _oracle_equivalence,
    "pt_boundaries": _boundaries,
    "reduction_identity": _reduction,
    "witness_positivity": _witness_positivity,
    "decomposition_soundness": _decomposition,
}


def run_selftest(cfg: SelftestConfig | None = None) -> list[SuiteResult]:
    cfg = cfg or SelftestConfig()
    results = []
    for name, suite in SUITES.items():
        try:
            ok, detail = suite(cfg)
        except Exception as exc:  # a crashing suite is a failing suite
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(SuiteResult(name, bool(ok), detail))
    return results
