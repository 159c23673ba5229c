from fractions import Fraction
from itertools import combinations, permutations, product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bellqudit.classify import (
    EvidenceKind,
    NotSeparableError,
    SeparableEnsemble,
    VerdictKind,
    classify_fam,
    classify_famg,
    necessary_conditions_famg,
    phase_ensemble,
    ppt_analytic,
    ppt_numeric,
    recheck,
    separable_analytic,
    separable_decomposition,
    sufficient_separability_famg,
)
from bellqudit.matrix_core import partial_transpose_b
from bellqudit.states import (
    FamGWeights,
    FamWeights,
    epsilon_family,
    fam_g_state,
    fam_state,
    horodecki_family,
    isotropic_state,
    isotropic_weights,
    max_entangled,
    pi_state,
    uniform_weights,
)
from bellqudit.witnesses import WitnessSpec, evaluate


def rho_tilde_by_definition(d):
    """(1/d)(sum_{n>=1} Pi_n + P+) assembled entry by entry."""
    out = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for n in range(1, d):
            idx = i * d + (i + n) % d
            out[idx, idx] += 1 / d**2
        for j in range(d):
            out[i * d + i, j * d + j] += 1 / d**2
    return out


def brute_force_average(d, phases_per_term):
    total = np.zeros((d * d, d * d), dtype=complex)
    for phases in phases_per_term:
        e = np.exp(1j * np.asarray(phases)) / np.sqrt(d)
        psi = np.kron(e, e.conj())
        total += np.outer(psi, psi.conj())
    return total / len(phases_per_term)


def horodecki_regions(d, alpha):
    """Closed-form PPT / separable intervals in exact arithmetic."""
    a = Fraction(alpha).limit_denominator(1000)
    ppt = 1 <= a <= (d - 1) ** 2
    sep = d - 1 <= a <= (d - 1) * (d - 2) + 1
    return ppt, sep


def alpha_grid(d, step=Fraction(1, 20)):
    top = (d - 1) ** 2 + 1
    return [float(step * k) for k in range(int(top / step) + 1)]


weights_strategy = st.integers(3, 6).flatmap(
    lambda d: st.lists(st.floats(0.01, 1.0), min_size=d, max_size=d)
)


def to_fam(raw):
    total = sum(raw)
    return FamWeights([x / total for x in raw])


def to_famg(raw):
    total = sum(raw)
    return FamGWeights([x / total for x in raw])


class TestPptAnalytic:
    @pytest.mark.parametrize("d", [3, 4, 5, 6])
    @pytest.mark.parametrize("eps", [0.25, 0.5, 1.0, 2.0, 4.0, 37.0])
    def test_epsilon_family_on_boundary(self, d, eps):
        ok, bad = ppt_analytic(epsilon_family(d, eps))
        assert ok and bad == []

    @pytest.mark.parametrize("d", [3, 4, 5])
    def test_horodecki_interval(self, d):
        for alpha in alpha_grid(d):
            assert ppt_analytic(horodecki_family(d, alpha))[0] == horodecki_regions(d, alpha)[0], alpha

    def test_zero_lambda_d(self):
        assert ppt_analytic(FamWeights([1, 0, 0, 0]))[0]

    def test_violated_pairs_reported(self):
        ok, bad = ppt_analytic(FamWeights([0.1, 0.1, 0.8]))
        assert not ok and bad == [(1, 2)]

    def test_even_self_paired(self):
        # d=4: lambda_2 < lambda_4 violates only the (2, 2) pair
        ok, bad = ppt_analytic(FamWeights([0.3, 0.1, 0.3, 0.3]))
        assert not ok and bad == [(2, 2)]

    def test_famg_ignores_lambda0(self):
        w = FamGWeights([0.9, 0.05, 0.025, 0.025])
        assert ppt_analytic(w)[0]

    def test_rejects_other_types(self):
        with pytest.raises(TypeError):
            ppt_analytic([0.5, 0.5])


class TestPptNumeric:
    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    def test_max_entangled(self, d):
        assert ppt_numeric(max_entangled(d), d) == pytest.approx(-1 / d, abs=1e-12)

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_pi_states(self, d):
        for n in range(d):
            assert ppt_numeric(pi_state(d, n), d) >= -1e-15

    @pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
    def test_isotropic_boundary(self, d):
        assert abs(ppt_numeric(isotropic_state(d, 1 / (d + 1)), d)) <= 1e-10

    @settings(max_examples=60, deadline=None)
    @given(weights_strategy)
    def test_agrees_with_lapack(self, raw):
        w = to_fam(raw)
        rho = fam_state(w)
        ref = np.linalg.eigvalsh(partial_transpose_b(rho, w.d))[0]
        assert ppt_numeric(rho, w.d) == pytest.approx(ref, abs=1e-12)

    @settings(max_examples=100, deadline=None)
    @given(weights_strategy)
    def test_oracle_equivalence(self, raw):
        w = to_fam(raw)
        analytic = ppt_analytic(w)[0]
        numeric = ppt_numeric(fam_state(w), w.d) >= -1e-10
        assert analytic == numeric


class TestSeparableAnalytic:
    @pytest.mark.parametrize("d", range(2, 9))
    def test_uniform(self, d):
        assert separable_analytic(uniform_weights(d)) == (True, [])

    @pytest.mark.parametrize("d", [3, 4, 5])
    def test_horodecki_interval(self, d):
        for alpha in alpha_grid(d):
            assert separable_analytic(horodecki_family(d, alpha))[0] == horodecki_regions(d, alpha)[1], alpha

    @pytest.mark.parametrize("d", [3, 4, 5])
    def test_epsilon_only_at_one(self, d):
        assert separable_analytic(epsilon_family(d, 1.0))[0]
        ok, bad = separable_analytic(epsilon_family(d, 4.0))
        assert not ok and bad == [d - 1]
        ok, bad = separable_analytic(epsilon_family(d, 0.25))
        assert not ok and bad == [1]

    @settings(max_examples=100, deadline=None)
    @given(weights_strategy)
    def test_separable_implies_ppt(self, raw):
        w = to_fam(raw)
        if separable_analytic(w)[0]:
            assert ppt_analytic(w)[0]

    @settings(max_examples=100, deadline=None)
    @given(weights_strategy)
    def test_witness_direction(self, raw):
        w = to_fam(raw)
        ok, bad = separable_analytic(w)
        rho = fam_state(w)
        for i in bad:
            pi = (i, *[j for j in range(1, w.d) if j != i])
            value = evaluate(rho, WitnessSpec(w.d, 1, pi))
            assert value == pytest.approx((w.lam(i) - w.lam(w.d)) / w.d, abs=1e-14)
            assert value < 0


class TestFamGConditions:
    def test_d3_reduction(self):
        rng = np.random.default_rng(5)
        for _ in range(300):
            lam = rng.dirichlet(np.ones(4))
            expected = (
                lam[1] >= lam[3] - lam[0]
                and lam[2] >= lam[3] - lam[0]
                and (lam[1] + lam[2]) / 2 >= lam[3]
            )
            assert necessary_conditions_famg(FamGWeights(lam))[0] == expected

    @pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
    def test_isotropic_reduces_to_threshold(self, d):
        for ld in np.linspace(0, 1, 41):
            ok = necessary_conditions_famg(isotropic_weights(d, ld))[0]
            assert ok == (ld <= 1 / (d + 1) + 1e-14), ld

    @settings(max_examples=100, deadline=None)
    @given(weights_strategy)
    def test_lambda0_zero_k1_is_separability(self, raw):
        w = to_fam(raw)
        ok, failures = necessary_conditions_famg(w.to_famg())
        k1 = [idx for k, idx in failures if k == 1]
        assert (not k1) == separable_analytic(w)[0]

    @pytest.mark.parametrize("d", [3, 4, 5])
    def test_matches_all_subsets(self, d):
        """Checking the k smallest weights equals checking every k-subset."""
        rng = np.random.default_rng(d)
        for _ in range(100):
            lam = rng.dirichlet(np.ones(d + 1) * 0.7)
            full = all(
                sum(Fraction(lam[i]) for i in sub) / k >= Fraction(lam[d]) - (d - k - 1) * Fraction(lam[0]) / k
                for k in range(1, d)
                for sub in combinations(range(1, d), k)
            )
            assert necessary_conditions_famg(FamGWeights(lam))[0] == full

    @pytest.mark.parametrize("d", [3, 4, 5])
    def test_equivalent_to_witness_nonnegativity(self, d):
        rng = np.random.default_rng(100 + d)
        specs = [WitnessSpec(d, k, pi) for k in range(1, d) for pi in permutations(range(1, d))]
        for _ in range(20):
            lam = rng.dirichlet(np.ones(d + 1) * 0.7)
            rho = fam_g_state(FamGWeights(lam))
            min_value = min(evaluate(rho, s) for s in specs)
            ok = necessary_conditions_famg(FamGWeights(lam))[0]
            if abs(min_value) > 1e-12:
                assert ok == (min_value > 0)

    def test_sufficient_examples(self):
        assert sufficient_separability_famg(FamGWeights([1, 0, 0, 0]))
        for d in range(2, 7):
            assert sufficient_separability_famg(isotropic_weights(d, 1 / (d + 1)))
        assert not sufficient_separability_famg(FamGWeights([0.5, 0, 0.3, 0.2]))

    @settings(max_examples=100, deadline=None)
    @given(st.integers(3, 6).flatmap(lambda d: st.lists(st.floats(0.0, 1.0), min_size=d + 1, max_size=d + 1)))
    def test_sufficient_implies_necessary(self, raw):
        if sum(raw) < 1e-3:
            return
        w = to_famg(raw)
        if sufficient_separability_famg(w):
            assert necessary_conditions_famg(w)[0]


class TestPhaseEnsemble:
    def test_d3_full_has_27_terms(self):
        ens = phase_ensemble(3)
        assert len(ens) == 27
        np.testing.assert_allclose(ens.density_matrix(), rho_tilde_by_definition(3), atol=1e-12)

    @pytest.mark.parametrize("d", [3, 4])
    def test_full_brute_force(self, d):
        phases = [2 * np.pi * np.array(j) / d for j in product(range(d), repeat=d)]
        np.testing.assert_allclose(brute_force_average(d, phases), rho_tilde_by_definition(d), atol=1e-12)
        np.testing.assert_allclose(phase_ensemble(d, "full").density_matrix(), rho_tilde_by_definition(d), atol=1e-12)

    def test_d2_needs_fourth_roots(self):
        roots_d = [np.pi * np.array(j) for j in product(range(2), repeat=2)]
        assert np.abs(brute_force_average(2, roots_d) - rho_tilde_by_definition(2)).max() > 0.1
        roots_4 = [np.pi / 2 * np.array(j) for j in product(range(4), repeat=2)]
        np.testing.assert_allclose(brute_force_average(2, roots_4), rho_tilde_by_definition(2), atol=1e-12)
        ens = phase_ensemble(2)
        assert len(ens) == 16
        np.testing.assert_allclose(ens.density_matrix(), rho_tilde_by_definition(2), atol=1e-12)

    @pytest.mark.parametrize("d", range(2, 9))
    def test_quadratic(self, d):
        ens = phase_ensemble(d, "quadratic")
        assert ens.is_valid()
        np.testing.assert_allclose(ens.density_matrix(), rho_tilde_by_definition(d), atol=1e-12)

    def test_auto_switch(self):
        assert len(phase_ensemble(6)) == 6**6
        assert len(phase_ensemble(7)) == 49

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            phase_ensemble(3, "sobol")


class TestDecomposition:
    def test_uniform_d3(self):
        ens = separable_decomposition(uniform_weights(3))
        assert len(ens) == 27
        assert ens.reconstruction_error(fam_state(uniform_weights(3))) <= 1e-12

    def test_isotropic_d3(self):
        w = isotropic_weights(3, 0.25)
        ens = separable_decomposition(w)
        assert ens.is_valid()
        assert ens.reconstruction_error(isotropic_state(3, 0.25)) <= 1e-10

    def test_diagonal_state(self):
        w = FamGWeights([0.2, 0.5, 0.3, 0.0])
        ens = separable_decomposition(w)
        assert len(ens) == 9
        for _, a, b in ens.terms():
            assert np.count_nonzero(a) == 1 and np.count_nonzero(b) == 1
        assert ens.reconstruction_error(fam_g_state(w)) <= 1e-15

    def test_horodecki_separable(self):
        w = horodecki_family(3, 2.5)
        assert separable_decomposition(w).reconstruction_error(fam_state(w)) <= 1e-10

    def test_precondition(self):
        with pytest.raises(NotSeparableError, match="index 1"):
            separable_decomposition(horodecki_family(3, 1.5))
        with pytest.raises(ValueError):
            separable_decomposition(epsilon_family(4, 4.0))

    @pytest.mark.parametrize("d", range(2, 9))
    def test_random_sound(self, d):
        rng = np.random.default_rng(d)
        for _ in range(5):
            t = rng.uniform(0, 1 / d)
            x = rng.dirichlet(np.ones(d)) * (1 - d * t)
            w = FamGWeights([x[0], *(t + x[1:]), t])
            ens = separable_decomposition(w)
            assert ens.is_valid()
            assert ens.reconstruction_error(fam_g_state(w)) <= 1e-10

    def test_ensemble_validity_flags(self):
        ket = np.array([[1.0, 0.0]], dtype=complex)
        assert not SeparableEnsemble(np.array([0.5]), ket, ket).is_valid()
        assert not SeparableEnsemble(np.array([1.0]), 2 * ket, ket).is_valid()
        assert SeparableEnsemble(np.array([1.0]), ket, ket).is_valid()


class TestClassifyFam:
    @pytest.mark.parametrize(
        "alpha,kind",
        [(1.5, VerdictKind.PPT_ENTANGLED), (2.5, VerdictKind.SEPARABLE), (4.5, VerdictKind.NPT_ENTANGLED),
         (0.5, VerdictKind.NPT_ENTANGLED), (3.5, VerdictKind.PPT_ENTANGLED)],
    )
    def test_horodecki_examples(self, alpha, kind):
        verdict = classify_fam(horodecki_family(3, alpha))
        assert verdict.kind is kind
        assert recheck(verdict, horodecki_family(3, alpha))

    @pytest.mark.parametrize("d", [3, 4, 5])
    def test_horodecki_regions(self, d):
        for alpha in alpha_grid(d):
            ppt, sep = horodecki_regions(d, alpha)
            expected = VerdictKind.SEPARABLE if sep else VerdictKind.PPT_ENTANGLED if ppt else VerdictKind.NPT_ENTANGLED
            assert classify_fam(horodecki_family(d, alpha)).kind is expected, alpha

    def test_evidence_contents(self):
        v = classify_fam(horodecki_family(3, 1.5))
        assert v.min_pt_eig >= -1e-10
        wit = v.find(EvidenceKind.WITNESS_VIOLATION)
        assert wit is not None and wit.data["value"] < -1e-12
        assert v.find(EvidenceKind.DECOMPOSITION) is None

        v = classify_fam(horodecki_family(3, 2.5))
        dec = v.find(EvidenceKind.DECOMPOSITION)
        assert dec.data["reconstruction_error"] <= 1e-10
        assert isinstance(dec.attachment, SeparableEnsemble)

        v = classify_fam(horodecki_family(3, 4.5))
        assert v.find(EvidenceKind.ANALYTIC_PPT).data == {"holds": False, "violated_pairs": [[1, 2]]}
        assert v.min_pt_eig < -1e-10
        assert v.find(EvidenceKind.NUMERIC_PPT_EIG).data["ppt"] is False

    @settings(max_examples=60, deadline=None)
    @given(weights_strategy)
    def test_verdict_invariants(self, raw):
        w = to_fam(raw)
        v = classify_fam(w)
        assert v.kind is not VerdictKind.UNDECIDED
        if v.kind is VerdictKind.NPT_ENTANGLED:
            assert v.min_pt_eig < -1e-10 or not v.find(EvidenceKind.ANALYTIC_PPT).data["holds"]
        elif v.kind is VerdictKind.PPT_ENTANGLED:
            assert v.min_pt_eig >= -1e-10
            assert v.find(EvidenceKind.WITNESS_VIOLATION).data["value"] < -1e-12
        else:
            assert v.find(EvidenceKind.DECOMPOSITION) is not None
        assert recheck(v, w)

    def test_rejects_famg(self):
        with pytest.raises(TypeError):
            classify_fam(FamGWeights([0.25] * 4))


class TestClassifyFamG:
    def test_undecided_gap(self):
        # large lambda_0, (l1 + l2)/2 >= l3 but l1 < l3, PPT since l1 l2 >= l3^2
        w = FamGWeights([0.4, 0.1, 0.35, 0.15])
        v = classify_famg(w)
        assert v.kind is VerdictKind.UNDECIDED
        assert v.best_witness.best_value >= 0
        assert recheck(v, w)

    @pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
    def test_isotropic(self, d):
        assert classify_famg(isotropic_weights(d, 1 / (d + 1))).kind is VerdictKind.SEPARABLE
        above = classify_famg(isotropic_weights(d, 1 / (d + 1) + 0.01))
        assert above.kind is VerdictKind.NPT_ENTANGLED
        assert above.min_pt_eig < -1e-10

    def test_necessary_failure_is_entangled(self):
        # d=3: l1 < l3 - l0 while l1 l2 >= l3^2
        w = FamGWeights([0.02, 0.1, 0.68, 0.2])
        assert ppt_analytic(w)[0]
        assert not necessary_conditions_famg(w)[0]
        v = classify_famg(w)
        assert v.kind is VerdictKind.PPT_ENTANGLED
        assert v.find(EvidenceKind.NECESSARY_COND_FAIL).data["violations"][0]["k"] == 1
        assert recheck(v, w)

    @settings(max_examples=60, deadline=None)
    @given(weights_strategy)
    def test_lambda0_zero_matches_fam(self, raw):
        w = to_fam(raw)
        assert classify_famg(w.to_famg()).kind is classify_fam(w).kind
        assert classify_famg(w).kind is classify_fam(w).kind

    @settings(max_examples=60, deadline=None)
    @given(st.integers(3, 5).flatmap(lambda d: st.lists(st.floats(0.01, 1.0), min_size=d + 1, max_size=d + 1)))
    def test_monotone_consistency(self, raw):
        w = to_famg(raw)
        v = classify_famg(w)
        embedded = to_fam(list(w.lambdas[1:]))
        if classify_fam(embedded).kind is VerdictKind.NPT_ENTANGLED:
            assert v.kind is VerdictKind.NPT_ENTANGLED
        assert recheck(v, w)

    def test_recheck_detects_tampering(self):
        w = horodecki_family(3, 1.5)
        v = classify_fam(w)
        v.find(EvidenceKind.NUMERIC_PPT_EIG).data["min_eigenvalue"] = -0.5
        assert not recheck(v, w)
