import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fringelab import (
    DensityMatrix,
    GramMatrix,
    IndependentPhases,
    LinearPhases,
    Scenario,
    apply_phases,
    block_paths,
    decohere,
    from_pure_amplitudes,
    gram_from_ancilla_states,
)
from fringelab.errors import (
    DegenerateBlockError,
    DimensionError,
    NormalizationError,
    ValidationError,
)
from fringelab.sampling import random_density, random_gram

from conftest import three_path


def outer_oracle(amps):
    n = len(amps)
    return np.array([[amps[j] * np.conj(amps[k]) for k in range(n)] for j in range(n)])


class TestDensityMatrix:
    def test_rejects_non_hermitian(self):
        with pytest.raises(ValidationError, match="Hermitian"):
            DensityMatrix([[0.5, 0.1], [0.2, 0.5]])

    def test_rejects_bad_trace(self):
        with pytest.raises(ValidationError, match="trace"):
            DensityMatrix(np.eye(2))

    def test_rejects_negative_eigenvalue(self):
        with pytest.raises(ValidationError, match="semidefinite"):
            DensityMatrix([[0.5, 0.6], [0.6, 0.5]])

    def test_accepts_tiny_negative_eigenvalue_without_mutation(self):
        m = np.array([[0.5, 0.5 + 1e-11], [0.5 + 1e-11, 0.5]])
        rho = DensityMatrix(m)
        assert rho.entries[0, 1] == m[0, 1]

    def test_immutable(self, uniform4):
        with pytest.raises(ValueError):
            uniform4.entries[0, 0] = 1


class TestFromPureAmplitudes:
    def test_uniform_four_path(self):
        rho = from_pure_amplitudes([0.5] * 4)
        np.testing.assert_array_equal(rho.entries, np.full((4, 4), 0.25))

    def test_single_path(self):
        np.testing.assert_array_equal(from_pure_amplitudes([1, 0]).entries, np.diag([1, 0]))

    def test_signed_three_path_matches_reference_at_one(self):
        a = np.exp(1j * np.array([0, np.pi, 0])) / np.sqrt(3)
        rho = from_pure_amplitudes(a)
        np.testing.assert_allclose(rho.entries, outer_oracle(a), atol=1e-15)
        np.testing.assert_allclose(rho.entries, three_path(1.0).entries, atol=1e-15)

    def test_pure(self, rng):
        a = rng.normal(size=5) + 1j * rng.normal(size=5)
        rho = from_pure_amplitudes(a / np.linalg.norm(a))
        assert rho.is_pure()

    def test_normalization_error(self):
        with pytest.raises(NormalizationError):
            from_pure_amplitudes([1, 1])


class TestApplyPhases:
    def test_zero_and_constant_phases_are_identity(self, rng):
        rho = random_density(4, rng)
        np.testing.assert_allclose(apply_phases(rho, np.zeros(4)).entries, rho.entries, atol=1e-15)
        np.testing.assert_allclose(apply_phases(rho, np.full(4, 1.3)).entries, rho.entries, atol=1e-15)

    def test_linear_quarter_turn(self, uniform4):
        out = apply_phases(uniform4, LinearPhases.plain(4, np.pi / 2))
        assert out.entries[0, 1] == pytest.approx(0.25 * np.exp(-1j * np.pi / 2), abs=1e-15)

    def test_entrywise_oracle(self, rng):
        rho = random_density(3, rng)
        th = rng.uniform(0, 6, size=3)
        expect = np.array([[rho.entries[j, k] * np.exp(1j * (th[j] - th[k])) for k in range(3)]
                           for j in range(3)])
        np.testing.assert_allclose(apply_phases(rho, th).entries, expect, atol=1e-15)

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.floats(-10, 10), min_size=3, max_size=3),
           st.lists(st.floats(-10, 10), min_size=3, max_size=3),
           st.integers(0, 2**32 - 1))
    def test_composition_and_moduli(self, a, b, seed):
        rho = random_density(3, np.random.default_rng(seed))
        two = apply_phases(apply_phases(rho, a), b)
        one = apply_phases(rho, np.add(a, b))
        np.testing.assert_allclose(two.entries, one.entries, atol=1e-12)
        np.testing.assert_allclose(np.abs(one.entries), np.abs(rho.entries), atol=1e-15)
        assert np.trace(one.entries).real == pytest.approx(1, abs=1e-12)

    def test_dimension_mismatch(self, uniform4):
        with pytest.raises(DimensionError):
            apply_phases(uniform4, [0, 1])


class TestDecohere:
    def test_path4_detector(self, uniform4, detector4, decohered4):
        np.testing.assert_array_equal(decohere(uniform4, detector4).entries, decohered4.entries)

    def test_identical_ancillas_leave_state(self, rng):
        rho = random_density(4, rng)
        np.testing.assert_array_equal(decohere(rho, GramMatrix.ones(4)).entries, rho.entries)

    def test_orthogonal_ancillas_kill_coherence(self, rng):
        rho = random_density(4, rng)
        np.testing.assert_array_equal(decohere(rho, GramMatrix.identity(4)).entries,
                                      np.diag(np.diag(rho.entries)))

    def test_conjugation_convention(self):
        # Gamma_12 = <chi_1|chi_2> = i ; factor applied to rho_12 is <chi_2|chi_1> = -i
        g = gram_from_ancilla_states([[1, 0], [1j, 0]])
        assert g.entries[0, 1] == pytest.approx(1j)
        rho = DensityMatrix([[0.5, 0.5], [0.5, 0.5]])
        assert decohere(rho, g).entries[0, 1] == pytest.approx(-0.5j)

    def test_invalid_gram_rejected(self):
        with pytest.raises(ValidationError):
            GramMatrix([[1, 2], [2, 1]])
        with pytest.raises(ValidationError):
            GramMatrix([[1, 0], [0, 0.5]])


class TestBlockPaths:
    def test_uniform_pair(self, uniform4):
        np.testing.assert_allclose(block_paths(uniform4, 1, 2).entries, np.full((2, 2), 0.5))

    def test_detected_pair(self, decohered4):
        np.testing.assert_allclose(block_paths(decohered4, 1, 4).entries, np.eye(2) / 2)

    def test_three_path_pair(self):
        out = block_paths(three_path(0.6), 1, 3)
        np.testing.assert_allclose(out.entries, [[0.5, 0.3], [0.3, 0.5]], atol=1e-15)

    def test_trace_exact(self, rng):
        for _ in range(200):
            rho = random_density(5, rng)
            i, j = rng.choice(np.arange(1, 6), 2, replace=False)
            assert np.trace(block_paths(rho, i, j).entries).real == 1.0

    def test_dark_pair(self):
        with pytest.raises(DegenerateBlockError):
            block_paths(DensityMatrix(np.diag([1.0, 0, 0])), 2, 3)

    def test_same_index(self, uniform4):
        with pytest.raises(ValidationError):
            block_paths(uniform4, 2, 2)


class TestGramFromAncillaStates:
    def test_orthonormal(self):
        np.testing.assert_array_equal(gram_from_ancilla_states(np.eye(3)).entries, np.eye(3))

    def test_all_equal(self):
        v = np.array([0.6, 0.8j])
        np.testing.assert_allclose(gram_from_ancilla_states([v, v, v]).entries, np.ones((3, 3)))

    def test_path4_detector(self, detector4):
        g = gram_from_ancilla_states([[1, 0], [1, 0], [1, 0], [0, 1]])
        np.testing.assert_array_equal(g.entries, detector4.entries)

    def test_inner_product_oracle(self, rng):
        s = rng.normal(size=(4, 3)) + 1j * rng.normal(size=(4, 3))
        s /= np.linalg.norm(s, axis=1, keepdims=True)
        g = gram_from_ancilla_states(s)
        for j in range(4):
            for k in range(4):
                assert g.entries[j, k] == pytest.approx(np.vdot(s[j], s[k]), abs=1e-14)

    def test_unnormalized(self):
        with pytest.raises(NormalizationError):
            gram_from_ancilla_states([[1, 1], [1, 0]])


def test_schur_product_preserves_validity(rng):
    for _ in range(1000):
        n = int(rng.integers(2, 7))
        rho = random_density(n, rng)
        out = decohere(rho, random_gram(n, rng))  # constructor validates every invariant
        np.testing.assert_array_equal(out.entries.diagonal(), rho.entries.diagonal())


def test_scenario_dimension_checks(uniform4):
    with pytest.raises(DimensionError):
        Scenario(uniform4, IndependentPhases.zeros(3))
    with pytest.raises(DimensionError):
        Scenario(uniform4, LinearPhases.plain(4), GramMatrix.ones(3))
    with pytest.raises(ValidationError):
        Scenario(uniform4, LinearPhases.plain(4), alpha_sq=0)
