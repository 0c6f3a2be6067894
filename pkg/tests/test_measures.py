import numpy as np
import pytest

from fringelab import (
    DensityMatrix,
    block_paths,
    GramMatrix,
    IndependentPhases,
    Scenario,
    apply_phases,
    decohere,
    distinguishability_pure,
    extremize,
    l1_coherence,
    pairwise_coherence,
    two_path_visibility,
    visibility_new,
    visibility_traditional,
)
from fringelab import scenarios as sc
from fringelab.core import permute
from fringelab.errors import (
    DegenerateBlockError,
    DimensionError,
    MeasureInapplicableError,
    UndefinedVisibilityError,
    UnsupportedOperationError,
)
from fringelab.measures import (
    measure_report,
    pairwise_average,
    simulate_pairwise,
    visibility_new_of,
)
from fringelab.sampling import random_density, random_gram, random_pure, sample_states

from conftest import three_path, three_path_decohered


def l1_oracle(m):
    m = np.asarray(m)
    n = len(m)
    return sum(abs(m[j, k]) for j in range(n) for k in range(n) if j != k) / (n - 1)


class TestTraditional:
    def test_reference_pairs(self):
        assert visibility_traditional(7 / 4, 1 / 4) == pytest.approx(0.75, abs=1e-15)
        assert visibility_traditional(5 / 2, 1 / 4) == pytest.approx(9 / 11, abs=1e-15)

    def test_flat(self):
        assert visibility_traditional(0.3, 0.3) == 0

    def test_dark(self):
        with pytest.raises(UndefinedVisibilityError):
            visibility_traditional(0, 0)


class TestCoherence:
    def test_reference_states(self, uniform4, decohered4):
        assert l1_coherence(uniform4) == pytest.approx(1.0, abs=1e-15)
        assert l1_coherence(decohered4) == pytest.approx(0.5, abs=1e-15)

    @pytest.mark.parametrize("lam", [0.0, 0.3, 0.6, 1.0])
    def test_three_path(self, lam):
        assert l1_coherence(three_path(lam)) == pytest.approx(lam, abs=1e-15)
        assert l1_coherence(three_path_decohered(lam)) == pytest.approx(lam / 3, abs=1e-15)

    def test_oracle(self, rng):
        for rho in sample_states(5, 60, rng):
            assert l1_coherence(rho) == pytest.approx(l1_oracle(rho.entries), abs=1e-13)

    def test_single_path(self):
        with pytest.raises(DimensionError):
            l1_coherence(DensityMatrix([[1.0]]))


class TestNewVisibility:
    def test_examples(self):
        assert visibility_new(4, 1, 4) == 1.0
        assert visibility_new(1, 1, 3) == 0.0
        assert visibility_new(1 + 2 * 0.6 / 3, 1, 3) == pytest.approx(0.2, abs=1e-15)

    def test_refuses_constrained_phases(self):
        with pytest.raises(MeasureInapplicableError):
            visibility_new(1.77, 1, 4, absorbable=False)
        with pytest.raises(MeasureInapplicableError):
            visibility_new_of(sc.piflip4())

    def test_engine_route_equals_coherence(self):
        for lam in (0.2, 0.6, 1.0):
            s = Scenario(three_path_decohered(lam), IndependentPhases.zeros(3))
            assert visibility_new_of(s) == pytest.approx(lam / 3, abs=1e-12)


class TestTwoPath:
    def test_examples(self, uniform4, decohered4):
        assert two_path_visibility(uniform4, 1, 2) == pytest.approx(1.0, abs=1e-15)
        assert two_path_visibility(decohered4, 1, 4) == 0.0
        assert two_path_visibility(three_path_decohered(0.9), 1, 2) == pytest.approx(0.9, abs=1e-15)

    def test_matches_engine(self, rng):
        for _ in range(30):
            rho = random_density(4, rng)
            i, j = sorted(rng.choice(np.arange(1, 5), 2, replace=False))
            e = extremize(Scenario(block_paths(rho, i, j), IndependentPhases.zeros(2)))
            v = visibility_traditional(e.i_max, e.i_min)
            assert two_path_visibility(rho, i, j) == pytest.approx(v, abs=1e-9)

    def test_dark_pair(self):
        with pytest.raises(DegenerateBlockError):
            two_path_visibility(DensityMatrix(np.diag([1.0, 0, 0])), 2, 3)


class TestPairwise:
    def test_decohered_four(self, decohered4):
        assert pairwise_coherence(decohered4) == pytest.approx(0.5, abs=1e-15)
        assert pairwise_average(decohered4) == pytest.approx(0.5, abs=1e-15)

    def test_diagonal(self):
        assert pairwise_coherence(DensityMatrix(np.eye(5) / 5)) == 0

    def test_identity_on_random(self, rng):
        for _ in range(200):
            rho = random_density(5, rng)
            assert pairwise_coherence(rho) == pytest.approx(l1_coherence(rho), abs=1e-12)

    def test_simulated_protocol(self):
        res = simulate_pairwise(sc.mw4().effective_state())
        vis = sorted(round(p.visibility, 9) for p in res.pairs)
        assert vis == [0, 0, 0, 1, 1, 1]
        assert res.reconstructed == pytest.approx(0.5, abs=1e-9)
        assert res.unweighted_average == pytest.approx(0.5, abs=1e-9)

    def test_dark_pair_note(self):
        res = simulate_pairwise(DensityMatrix(np.diag([0.5, 0.5, 0.0])))
        dark = [p for p in res.pairs if p.visibility is None]
        assert len(dark) == 0  # every pair has some population
        res = simulate_pairwise(DensityMatrix(np.diag([1.0, 0.0, 0.0])))
        assert [(p.i, p.j) for p in res.pairs if p.visibility is None] == [(2, 3)]
        assert res.unweighted_average is None
        assert res.reconstructed == 0 == res.direct


class TestDistinguishability:
    def test_examples(self, uniform4, detector4):
        assert distinguishability_pure(uniform4, detector4) == pytest.approx(0.5, abs=1e-15)
        assert distinguishability_pure(uniform4, GramMatrix.identity(4)) == pytest.approx(1.0)
        assert distinguishability_pure(uniform4, GramMatrix.ones(4)) == pytest.approx(0.0, abs=1e-15)

    def test_mixed_refused(self, decohered4, detector4):
        with pytest.raises(UnsupportedOperationError):
            distinguishability_pure(decohered4, detector4)

    def test_saturation(self, rng):
        for _ in range(100):
            n = int(rng.integers(2, 6))
            rho, g = random_pure(n, rng), random_gram(n, rng)
            assert distinguishability_pure(rho, g) + l1_coherence(decohere(rho, g)) == pytest.approx(1, abs=1e-10)


class TestInvariances:
    def test_phase_invariance_exact(self, rng):
        for rho in sample_states(4, 60, rng):
            th = rng.uniform(-7, 7, 4)
            r2 = apply_phases(rho, th)
            assert l1_coherence(r2) == pytest.approx(l1_coherence(rho), abs=1e-15)
            assert pairwise_coherence(r2) == pytest.approx(pairwise_coherence(rho), abs=1e-14)
            assert two_path_visibility(r2, 1, 3) == pytest.approx(two_path_visibility(rho, 1, 3), abs=1e-15)

    def test_permutation_invariance(self, rng):
        for _ in range(60):
            rho, g = random_pure(4, rng), random_gram(4, rng)
            perm = rng.permutation(4)
            gp = GramMatrix(g.entries[np.ix_(perm, perm)])
            assert l1_coherence(permute(rho, perm)) == pytest.approx(l1_coherence(rho), abs=1e-14)
            assert distinguishability_pure(permute(rho, perm), gp) == pytest.approx(
                distinguishability_pure(rho, g), abs=1e-14)


class TestReport:
    def test_mw4(self):
        r = measure_report(sc.mw4())
        assert r.coherence == pytest.approx(0.5, abs=1e-12)
        assert r.v_new == pytest.approx(0.5, abs=1e-9)
        assert r.d_q == pytest.approx(0.5, abs=1e-12)
        assert r.v_traditional == pytest.approx(9 / 11, abs=1e-9)
        d = r.to_dict()
        assert list(d) == ["v_traditional", "v_new", "coherence", "d_q", "absorbable_phases", "reason"]
        assert d["reason"] is None

    def test_piflip_reason(self):
        d = measure_report(sc.piflip4()).to_dict()
        assert d["v_new"] is None and d["d_q"] is None
        assert "v_new:" in d["reason"] and "d_q:" in d["reason"]
        assert d["absorbable_phases"] is False

    def test_dark_pattern(self):
        r = measure_report(sc.dark())
        assert r.v_traditional == 0 and r.v_new == pytest.approx(0, abs=1e-12) and r.coherence == 0

    def test_values_in_unit_interval(self, rng):
        for _ in range(8):
            n = int(rng.integers(2, 5))
            s = Scenario(random_pure(n, rng), IndependentPhases.zeros(n), random_gram(n, rng))
            d = measure_report(s).to_dict()
            assert d["v_new"] is not None or not d["absorbable_phases"]
            for k in ("v_traditional", "v_new", "coherence", "d_q"):
                if d[k] is not None:
                            assert -1e-10 <= d[k] <= 1 + 1e-10
