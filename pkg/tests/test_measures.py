"""Empirical measures, samplers, and exact Wasserstein distances."""

import numpy as np
import pytest
from scipy.optimize import linprog
from scipy.stats import truncnorm

from distreg import (
    CapacityError,
    DistributionSpec,
    EmpiricalMeasure,
    Witness,
    kr_lower_bound,
    optimal_plan,
    sample_measure,
    wasserstein,
)


def ball_measure(rng, n, d):
    g = rng.standard_normal((n, d))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return EmpiricalMeasure(atoms=g * rng.uniform(0.0, 1.0, (n, 1)) ** (1.0 / d))


def lp_oracle_cost(mu, nu, p):
    """Independent dense-LP transcription: full row and column equality system."""
    x, y = mu.atoms, nu.atoms
    n, m = x.shape[0], y.shape[0]
    cost = np.sqrt(((x[:, None, :] - y[None, :, :]) ** 2).sum(-1)) ** p
    A = np.zeros((n + m, n * m))
    for i in range(n):
        A[i, i * m:(i + 1) * m] = 1.0
    for j in range(m):
        A[n + j, j::m] = 1.0
    b = np.concatenate([np.full(n, 1.0 / n), np.full(m, 1.0 / m)])
    res = linprog(cost.ravel(), A_eq=A, b_eq=b, bounds=(0, None), method="highs")
    assert res.success
    return res.fun


class TestEmpiricalMeasure:
    def test_rejects_atoms_outside_ball(self):
        with pytest.raises(ValueError):
            EmpiricalMeasure(atoms=np.array([[1.1, 0.0]]))

    def test_rejects_empty_and_nonfinite(self):
        with pytest.raises(ValueError):
            EmpiricalMeasure(atoms=np.zeros((0, 2)))
        with pytest.raises(ValueError):
            EmpiricalMeasure(atoms=np.array([[np.inf, 0.0]]))

    def test_csv_round_trip_is_exact(self):
        rng = np.random.default_rng(3)
        mu = ball_measure(rng, 7, 3)
        text = mu.to_csv()
        assert text.startswith("# n=7 d=3\n")
        assert text.splitlines()[1] == "x0,x1,x2"
        back = EmpiricalMeasure.from_csv(text)
        assert np.array_equal(back.atoms, mu.atoms)

    def test_csv_size_comment_mismatch_rejected(self):
        mu = EmpiricalMeasure(atoms=np.zeros((2, 1)))
        bad = mu.to_csv().replace("# n=2", "# n=3")
        with pytest.raises(ValueError):
            EmpiricalMeasure.from_csv(bad)


class TestSampling:
    def test_dirac_all_atoms_equal(self):
        spec = DistributionSpec(family="dirac", d=2, point=(0.1, -0.2))
        mu = sample_measure(spec, 5, 0)
        assert mu.n == 5
        assert np.all(mu.atoms == np.array([0.1, -0.2]))

    def test_uniform_ball_support(self):
        spec = DistributionSpec(family="uniform-ball", d=2)
        mu = sample_measure(spec, 100, 7)
        assert mu.n == 100
        assert np.linalg.norm(mu.atoms, axis=1).max() <= 1.0

    def test_deterministic_per_seed(self):
        spec = DistributionSpec(family="truncated-gaussian", d=3, mean=(0.2, 0.0, 0.1), scale=0.3)
        a = sample_measure(spec, 64, 19).atoms
        b = sample_measure(spec, 64, 19).atoms
        assert np.array_equal(a, b)
        c = sample_measure(spec, 64, 20).atoms
        assert not np.array_equal(a, c)

    def test_truncated_gaussian_mean_against_quadrature_oracle(self):
        # in d=1 the rejection sampler is exactly the normal law conditioned
        # on [-1, 1]; scipy's truncnorm supplies the analytic mean
        spec = DistributionSpec(family="truncated-gaussian", d=1, mean=(0.5,), scale=0.2)
        mu = sample_measure(spec, 10_000, 123)
        a, b = (-1.0 - 0.5) / 0.2, (1.0 - 0.5) / 0.2
        exact = truncnorm.mean(a, b, loc=0.5, scale=0.2)
        assert abs(mu.atoms.mean() - exact) <= 0.02

    def test_sphere_mixture_stays_in_ball(self):
        spec = DistributionSpec(
            family="sphere-mixture", d=2,
            means=((0.5, 0.0), (-0.3, 0.3)), scales=(0.4, 0.9), weights=(0.3, 0.7),
        )
        mu = sample_measure(spec, 500, 2)
        assert np.linalg.norm(mu.atoms, axis=1).max() <= 1.0 + 1e-12

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            DistributionSpec(family="pareto", d=2)
        with pytest.raises(ValueError):
            DistributionSpec(family="truncated-gaussian", d=2, mean=(0.2, 0.1), scale=-1.0)
        with pytest.raises(ValueError):
            DistributionSpec(family="dirac", d=2, point=(2.0, 0.0))
        with pytest.raises(ValueError):
            sample_measure(DistributionSpec(family="uniform-ball", d=1), 0, 0)

    def test_spec_json_round_trip(self):
        spec = DistributionSpec(
            family="sphere-mixture", d=2,
            means=((0.5, 0.0), (-0.3, 0.3)), scales=(0.4, 0.9), weights=(0.3, 0.7),
        )
        assert DistributionSpec.from_json(spec.to_json()) == spec
        g = DistributionSpec(family="truncated-gaussian", d=2, mean=(0.25, -0.5), scale=0.125)
        assert DistributionSpec.from_json(g.to_json()) == g


class TestWasserstein:
    def test_single_atom_pair_is_euclidean_distance(self):
        mu = EmpiricalMeasure(atoms=np.array([[0.3, 0.4]]))
        nu = EmpiricalMeasure(atoms=np.array([[-0.3, 0.4]]))
        assert abs(wasserstein(mu, nu, 1) - 0.6) <= 1e-12
        assert abs(wasserstein(mu, nu, 2) - 0.6) <= 1e-12

    def test_identity_gives_zero_and_distinct_positive(self):
        rng = np.random.default_rng(4)
        mu = ball_measure(rng, 6, 2)
        assert wasserstein(mu, mu, 1) == 0.0
        nu = EmpiricalMeasure(atoms=mu.atoms + np.array([0.01, 0.0]) - 0.02 * mu.atoms)
        assert wasserstein(mu, nu, 1) > 0.0

    def test_sorted_one_dimensional_formula(self):
        rng = np.random.default_rng(9)
        a = np.sort(rng.uniform(-1, 1, 8))
        b = np.sort(rng.uniform(-1, 1, 8))
        mu = EmpiricalMeasure(atoms=a[:, None])
        nu = EmpiricalMeasure(atoms=b[:, None])
        assert abs(wasserstein(mu, nu, 1) - np.abs(a - b).mean()) <= 1e-12

    def test_equal_sizes_match_lp_oracle(self):
        rng = np.random.default_rng(31)
        for n in (1, 2, 5, 9, 16):
            mu, nu = ball_measure(rng, n, 2), ball_measure(rng, n, 2)
            for p in (1, 2):
                assert abs(wasserstein(mu, nu, p) ** p - lp_oracle_cost(mu, nu, p)) <= 1e-9

    def test_lcm_expansion_matches_lp_oracle(self):
        rng = np.random.default_rng(32)
        for n, m in ((2, 3), (4, 6), (5, 7), (9, 12), (13, 16)):
            mu, nu = ball_measure(rng, n, 2), ball_measure(rng, m, 2)
            for p in (1, 2):
                assert abs(wasserstein(mu, nu, p) ** p - lp_oracle_cost(mu, nu, p)) <= 1e-9

    def test_lp_fallback_path_matches_oracle(self):
        # 64 and 66 atoms: lcm is 2112 ... still under the expansion cap,
        # so force sizes whose lcm blows past it
        rng = np.random.default_rng(33)
        mu, nu = ball_measure(rng, 64, 2), ball_measure(rng, 127, 2)
        assert 64 * 127 // np.gcd(64, 127) > 4096
        for p in (1, 2):
            assert abs(wasserstein(mu, nu, p) ** p - lp_oracle_cost(mu, nu, p)) <= 1e-9

    def test_support_cap_raises_capacity_error(self):
        big = EmpiricalMeasure(atoms=np.zeros((513, 1)))
        other = EmpiricalMeasure(atoms=np.full((997, 1), 0.5))
        with pytest.raises(CapacityError):
            wasserstein(big, other, 1)

    def test_symmetry_is_exact(self):
        rng = np.random.default_rng(35)
        for _ in range(50):
            n, m = int(rng.integers(1, 9)), int(rng.integers(1, 9))
            mu, nu = ball_measure(rng, n, 3), ball_measure(rng, m, 3)
            for p in (1, 2):
                assert wasserstein(mu, nu, p) == wasserstein(nu, mu, p)

    def test_permutation_changes_nothing(self):
        rng = np.random.default_rng(36)
        mu, nu = ball_measure(rng, 11, 2), ball_measure(rng, 11, 2)
        shuffled = EmpiricalMeasure(atoms=mu.atoms[rng.permutation(11)])
        for p in (1, 2):
            assert abs(wasserstein(mu, nu, p) - wasserstein(shuffled, nu, p)) < 1e-12

    def test_triangle_inequality_and_order_monotonicity(self):
        rng = np.random.default_rng(37)
        for _ in range(120):
            n = int(rng.integers(1, 8))
            mu, nu, sg = (ball_measure(rng, n, 2) for _ in range(3))
            for p in (1, 2):
                assert wasserstein(mu, nu, p) <= (
                    wasserstein(mu, sg, p) + wasserstein(sg, nu, p) + 1e-9
                )
            assert wasserstein(mu, nu, 1) <= wasserstein(mu, nu, 2) + 1e-9

    def test_invalid_order_rejected(self):
        mu = EmpiricalMeasure(atoms=np.zeros((1, 1)))
        with pytest.raises(ValueError):
            wasserstein(mu, mu, 3)

    def test_dimension_mismatch_rejected(self):
        mu = EmpiricalMeasure(atoms=np.zeros((2, 1)))
        nu = EmpiricalMeasure(atoms=np.zeros((2, 2)))
        with pytest.raises(ValueError):
            wasserstein(mu, nu, 1)

    def test_plan_marginals_and_cost_consistency(self):
        rng = np.random.default_rng(38)
        mu, nu = ball_measure(rng, 4, 2), ball_measure(rng, 6, 2)
        plan = optimal_plan(mu, nu, 2)
        assert np.abs(plan.coupling.sum(axis=1) - 1.0 / 4).max() <= 1e-9
        assert np.abs(plan.coupling.sum(axis=0) - 1.0 / 6).max() <= 1e-9
        pair_cost = ((mu.atoms[:, None, :] - nu.atoms[None, :, :]) ** 2).sum(-1)
        assert abs((plan.coupling * pair_cost).sum() - plan.cost) <= 1e-9
        assert plan.distance == plan.cost ** 0.5


class TestDualityLowerBound:
    def test_linear_witness_on_diracs(self):
        xi = np.array([0.6, 0.8])
        mu = EmpiricalMeasure(atoms=np.array([[0.5, 0.0]]))
        nu = EmpiricalMeasure(atoms=np.array([[0.0, 0.5]]))
        w = Witness(fn=lambda X: X @ xi)
        got = kr_lower_bound(mu, nu, [w])
        assert abs(got - abs(xi @ (mu.atoms[0] - nu.atoms[0]))) <= 1e-12
        assert got <= wasserstein(mu, nu, 1) + 1e-9

    def test_random_witnesses_stay_below_distance(self):
        rng = np.random.default_rng(41)
        # piecewise-linear 1-Lipschitz witnesses: distance to a random anchor
        anchors = rng.uniform(-0.5, 0.5, size=(5, 2))
        witnesses = [
            Witness(fn=lambda X, a=a: np.linalg.norm(X - a, axis=1)) for a in anchors
        ]
        for _ in range(25):
            mu, nu = ball_measure(rng, 6, 2), ball_measure(rng, 6, 2)
            assert kr_lower_bound(mu, nu, witnesses) <= wasserstein(mu, nu, 1) + 1e-9

    def test_identical_measures_give_zero(self):
        mu = EmpiricalMeasure(atoms=np.array([[0.1, 0.2], [0.0, 0.0]]))
        w = Witness(fn=lambda X: X[:, 0])
        assert kr_lower_bound(mu, mu, [w]) == 0.0
        assert kr_lower_bound(mu, mu, []) == 0.0

    def test_witness_constant_validated(self):
        with pytest.raises(ValueError):
            Witness(fn=lambda X: X[:, 0], lipschitz_constant=2.0)
