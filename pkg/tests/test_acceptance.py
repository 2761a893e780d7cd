"""End-to-end acceptance sweep: one test per shipped guarantee.

Each test exercises one library promise at its stated scale and
tolerance; conftest.py prints a PASS/FAIL line per criterion after the
run.  Tolerances here are fixed by the guarantee being checked, not
tuned to the implementation, so a failure means the library broke.
"""

import math
import re

import numpy as np
from scipy.optimize import linprog

from distreg import (
    DistributionNet,
    EmpiricalMeasure,
    HypothesisSpaceSpec,
    MetaDistribution,
    TheoryConstants,
    build_for_target,
    certify_bounds,
    covering_bound,
    decompose_error,
    erm_train,
    forward,
    generate,
    get_target,
    in_hypothesis_space,
    lipschitz_certificate,
    measure_suite,
    Mesh,
    n_q,
    plain_forward,
    quasi_interpolant,
    scalar_function,
    uniform_bound,
    wasserstein,
)
from distreg.cli import main as cli_main
from distreg.spline import interpolation_error_bound

COMPOSITE_IDS = (
    "poly-prod-abs",
    "poly-prod-sq-sin",
    "poly-lin-id",
    "radial-abs",
    "radial-d3-sqrt",
    "radial-d1-id",
)


def ball_measure(rng, n, d):
    g = rng.standard_normal((n, d))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return EmpiricalMeasure(atoms=g * rng.uniform(0.0, 1.0, (n, 1)) ** (1.0 / d))


def single_point_suite(d):
    # certification and counting need a suite only as a formality
    return [EmpiricalMeasure(atoms=np.zeros((1, d)))]


def test_criterion_01_spline_sup_error_within_bound():
    """spline quasi-interpolant: dense-grid sup error within 2 B^a |g| / N^a"""
    grid = np.linspace(-1.0, 1.0, 10_000)
    for name in ("identity", "abs", "abs-third", "sin", "exp-neg", "square"):
        g = scalar_function(name)
        assert g.beta == 1.0
        for N in (4, 8, 16, 32, 64):
            spline = quasi_interpolant(g.fn, Mesh(N, 1.0))
            err = float(np.max(np.abs(spline(grid) - g.fn(grid))))
            bound = interpolation_error_bound(1.0, g.beta, g.seminorm_on(1.0), N)
            assert err <= bound + 1e-9, (name, N, err, bound)


def test_criterion_02_ridge_bound_and_decay_slope():
    """ridge constructions: measured error within the claimed bound, slope steep enough"""
    suite = measure_suite(2)
    Ns = (2, 4, 8, 16, 32)
    for tid in ("ridge-exp-id", "ridge-id-sin", "ridge-id-sqrt", "ridge-sq-id"):
        errs = []
        beta = None
        for N in Ns:
            rep = build_for_target(tid, N, suite=suite)
            assert rep.measured_error <= rep.claimed_bound, (tid, N)
            errs.append(rep.measured_error)
            beta = rep.beta
        slope = float(np.polyfit(np.log(Ns), np.log(errs), 1)[0])
        assert slope <= -beta + 0.25, (tid, slope, beta)


def test_criterion_03_laplace_transform_error():
    """laplace transform nets: error within 8e/N for feature norms up to one"""
    suite = measure_suite(2)
    for tid in ("laplace-unit", "laplace-zero"):
        for N in (4, 8, 16, 32):
            rep = build_for_target(tid, N, suite=suite)
            assert rep.measured_error <= 8.0 * math.e / N, (tid, N, rep.measured_error)


def test_criterion_04_composite_bound_and_inner_surrogate():
    """composite constructions: outer bound plus inner surrogate within 2q|gamma|/N"""
    suite = measure_suite(2)
    rng = np.random.default_rng(404)
    pts = ball_measure(rng, 400, 2).atoms
    for tid in ("poly-prod-abs", "poly-prod-sq-sin", "poly-lin-id", "radial-abs"):
        target = get_target(tid)
        q = target.poly.degree
        for N in (2, 4, 8, 16):
            rep = build_for_target(tid, N, seed=0, suite=suite)
            assert rep.measured_error <= rep.claimed_bound, (tid, N)
            gap = float(np.max(np.abs(rep.inner_poly(pts) - target.inner_values(pts))))
            assert gap <= 2.0 * q * rep.gamma_l1 / N + 1e-9, (tid, N, gap)


def test_criterion_05_free_parameter_counts():
    """free-parameter counts match the closed-form formulas for every family"""
    cases = (
        "ridge-id-abs",
        "ridge-lin-id",
        "poly-prod-abs",
        "poly-lin-id",
        "radial-abs",
        "radial-d3-sqrt",
        "radial-d1-id",
    )
    for tid in cases:
        target = get_target(tid)
        d = target.d
        for N in (1, 3, 6):
            rep = build_for_target(tid, N, suite=single_point_suite(d))
            if rep.kind == "ridge":
                want = 8 * N + d + 12
            elif rep.kind == "radial":
                want = 12 * N + d * d + d + 18
            else:
                q = target.poly.degree
                want = (2 * q + 10) * N + (d + q) * math.comb(d + q - 1, q) + 3 * q + 15
            assert rep.param_count == want, (tid, N, rep.param_count, want)


def test_criterion_06_certification_passes_and_halving_fails():
    """norm certification: every depth-3 net passes at its R and fails once shrunk"""
    reports = []
    for tid in COMPOSITE_IDS:
        tiny = single_point_suite(get_target(tid).d)
        for N in (1, 2, 4, 8, 16):
            reports.append(build_for_target(tid, N, suite=tiny))
    assert all(certify_bounds(rep).ok for rep in reports)
    # halving R breaks at least one constraint somewhere in the family;
    # a tenfold shrink breaks every single net
    assert any(not certify_bounds(rep, R_scale=0.5).ok for rep in reports)
    assert all(not certify_bounds(rep, R_scale=0.1).ok for rep in reports)


def test_criterion_07_network_invariants_on_random_grid():
    """network invariants: symmetry, duplication, single atom, Lipschitz, sup bound"""
    rng = np.random.default_rng(20250816)

    def member_net(d, R, N):
        widths = [int(rng.integers(1, 6)) for _ in range(3)]
        Ws, bs = [], []
        fan = d
        for w in widths:
            W = rng.standard_normal((w, fan))
            cap = rng.uniform(0.1, 1.0, size=w) * R * N**2
            W *= (cap / np.maximum(np.abs(W).sum(axis=1), 1e-12))[:, None]
            Ws.append(W)
            bs.append(rng.uniform(-R, R, size=w))
            fan = w
        c = rng.uniform(-R * N, R * N, size=widths[-1])
        return DistributionNet(J=3, J1=2, weights=tuple(Ws), biases=tuple(bs), c=c)

    for k in range(100):
        d = 1 + k % 3
        N = 1 + k % 2
        R = float(rng.uniform(0.5, 1.5))
        spec = HypothesisSpaceSpec(R=R, N=N)
        net = member_net(d, R, N)
        assert in_hypothesis_space(net, spec)
        cert = lipschitz_certificate(net, spec)
        sup = uniform_bound(spec)
        for _ in range(100):
            n = int(rng.integers(1, 9))
            mu = ball_measure(rng, n, d)
            nu = ball_measure(rng, n, d)
            hmu, hnu = forward(net, mu), forward(net, nu)
            assert abs(hmu - hnu) <= cert * wasserstein(mu, nu, 1) + 1e-9
            assert abs(hmu) <= sup and abs(hnu) <= sup
            perm = rng.permutation(n)
            assert abs(forward(net, EmpiricalMeasure(atoms=mu.atoms[perm])) - hmu) < 1e-12
            dup = EmpiricalMeasure(atoms=np.repeat(nu.atoms, 2, axis=0))
            assert abs(forward(net, dup) - hnu) < 1e-12
            x = mu.atoms[0]
            assert forward(net, EmpiricalMeasure(atoms=x[None, :])) == plain_forward(net, x)


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


def test_criterion_08_wasserstein_oracle_and_metric_axioms():
    """optimal transport: dense-LP oracle agreement, metric axioms, order monotonicity"""
    rng = np.random.default_rng(1618)
    for n in range(1, 17):
        for m in range(1, 17):
            mu, nu = ball_measure(rng, n, 2), ball_measure(rng, m, 2)
            for p in (1, 2):
                ours = wasserstein(mu, nu, p)
                ref = lp_oracle_cost(mu, nu, p) ** (1.0 / p)
                assert abs(ours - ref) <= 1e-9, (n, m, p)
    sizes = (4, 6, 8, 12)
    for k in range(1000):
        d = 1 + k % 3
        na, nb, nc = (int(v) for v in rng.choice(sizes, size=3))
        mu, nu, ze = ball_measure(rng, na, d), ball_measure(rng, nb, d), ball_measure(rng, nc, d)
        assert wasserstein(mu, mu, 1) == 0.0
        w2 = None
        for p in (2, 1):
            ab = wasserstein(mu, nu, p)
            assert ab <= wasserstein(mu, ze, p) + wasserstein(ze, nu, p) + 1e-9
            if p == 2:
                w2 = ab
            else:
                assert abs(wasserstein(nu, mu, 1) - ab) <= 1e-9
                assert ab <= w2 + 1e-9


def test_criterion_09_integral_functional_continuity():
    """integral functionals: increments within lip(g) * sup grad Q * W1"""
    rng = np.random.default_rng(909)
    for tid in COMPOSITE_IDS:
        target = get_target(tid)
        lip = target.g.seminorm_on(target.inner_sup()) * target.grad_sup_Q
        for _ in range(500):
            mu = ball_measure(rng, int(rng.integers(1, 13)), target.d)
            nu = ball_measure(rng, int(rng.integers(1, 13)), target.d)
            gap = abs(target.link(mu) - target.link(nu))
            assert gap <= lip * wasserstein(mu, nu, 1) + 1e-9, tid


def test_criterion_10_erm_monotone_membership_and_toy_optimum():
    """ERM: loss never increases, iterates stay feasible, toy problem hits least squares"""
    meta = MetaDistribution(target=get_target("radial-d1-id"), noise=0.05, n_ref=512)
    data = generate(meta, m=16, n=16, seed=15)
    space = HypothesisSpaceSpec(R=36.0, N=2)
    seen = []
    res = erm_train(
        data, space, epochs=25, step=0.02,
        on_epoch=lambda net, loss: seen.append((net, loss)),
    )
    assert all(b <= a for a, b in zip(res.losses, res.losses[1:]))
    assert len(seen) == res.epochs_run
    assert all(in_hypothesis_space(net, space) for net, _ in seen)

    # width-1 identity stack with only c trainable: the model is c * phi
    # for a fixed feature vector phi, so the optimum is closed form
    meta_toy = MetaDistribution(target=get_target("radial-d1-id"), noise=0.2, n_ref=256)
    toy_data = generate(meta_toy, m=32, n=16, seed=5)
    toy = DistributionNet(
        J=3, J1=2, weights=([[1.0]], [[1.0]], [[1.0]]), biases=([0.0],) * 3, c=[0.0]
    )
    fit = erm_train(
        toy_data, HypothesisSpaceSpec(R=2.0, N=1),
        init=toy, epochs=2500, step=0.05, train_only_c=True,
    )
    phi = np.maximum(toy_data.second, 0.0).mean(axis=1).ravel()
    c_star = float(phi @ toy_data.y / (phi @ phi))
    opt_loss = float(np.mean((c_star * phi - toy_data.y) ** 2))
    assert abs(float(fit.net.c[0]) - c_star) <= 1e-6
    assert fit.final_loss - opt_loss <= 1e-6


def test_criterion_11_error_decomposition_inequality():
    """error decomposition: the excess-risk split holds within three standard errors"""
    meta = MetaDistribution(target=get_target("radial-d1-id"), noise=0.05, n_ref=512)
    comparison = build_for_target("radial-d1-id", 2).net
    space = HypothesisSpaceSpec(R=36.0, N=2)
    for run in range(20):
        data = generate(meta, m=24, n=48, seed=1000 + run)
        trained = erm_train(data, space, init=comparison, epochs=15, step=0.02)
        dec = decompose_error(
            trained.net, comparison, data, meta, mc_size=64, seed=7000 + run
        )
        assert dec.holds(), (run, dec)


def test_criterion_12_learning_rate_slope(capsys):
    """learning pipeline: noiseless excess risk decays with slope at most -2/3 + 0.3"""
    # stock learn-rate settings: noiseless radial-d1-id, m grid 64..1024
    rc = cli_main(["learn-rate"])
    out = capsys.readouterr().out
    assert rc == 0
    trailer = out.splitlines()[-1]
    m = re.match(r"^# slope=(\S+) half_width=(\S+) fit_points=(\d+)$", trailer)
    assert m is not None, trailer
    assert int(m.group(3)) == 5
    slope = float(m.group(1))
    assert slope <= -2.0 / 3.0 + 0.3, trailer


def test_criterion_13_theory_calculator_consistency():
    """capacity calculators: closed forms recovered to 1e-12, covering bound monotone"""
    eps = 1.0
    for d, q in [(1, 1), (2, 1), (1, 3), (3, 2), (4, 4)]:
        nq = n_q(d, q)
        rh = 15.0 * (10 * nq + d + 18)
        v1 = covering_bound(HypothesisSpaceSpec(R=1.0, N=1), d, q, eps).value
        v2 = covering_bound(HypothesisSpaceSpec(R=1.0, N=2), d, q, eps).value
        t1 = v1 / math.log(rh / eps)
        t2 = (v2 - 2.0 * v1) / (2.0 * math.log(2.0))
        assert abs(t1 - ((d + q) * nq + 5 * q + 5)) <= 1e-12 * t1
        assert abs(t2 - (9 * (d + q) * nq + 45 * q + 190)) <= 1e-12 * t2

    b, M, R = 1.0, 0.01, 1.0
    tc = TheoryConstants(d=1, q=1, R=R, M=M, beta=b, B_G=1.0, B_Q=1.0, f_sem=1.0, g_lip=1.0)
    c1 = 2.0 + 3.0**b
    rh = 15.0 * R**4 * (10 * 1 + 1 + 18)
    a1 = 12 * (math.log(8 * M * rh / c1**2) + 2 * b) + 253
    a2 = 12 * (math.log(40 * M * rh * R**2 / c1**2) + 2 * b + 4) + 253
    a3 = 115200.0 * (M + c1) ** 2 * R**8
    a4 = min(3 * c1**2 / (2048 * M**2 * a1), 3 * c1**2 / (4096 * M**2 * a2)) ** (1 / (2 * b + 1))
    a5 = 3 * a3 * a4 ** (2 * b + 16) / (4096 * M**2 * c1**2)
    a6 = 3 * c1**2 * a4 ** (-2 * b) / (4096 * M**2)
    a7 = 18 * c1**2 * 2 ** (2 * b) * a4 ** (-2 * b) * (math.log(a4) + 1 / (2 * b + 1)) + 2304 * (
        4 * M + c1
    ) ** 2
    for got, want in [
        (tc.A1, a1), (tc.A2, a2), (tc.A3, a3), (tc.A4, a4),
        (tc.A5, a5), (tc.A6, a6), (tc.A7, a7),
    ]:
        assert abs(got - want) <= 1e-12 * abs(want)

    d, q = 2, 2
    for N in (1, 2, 5):
        spec = HypothesisSpaceSpec(R=1.5, N=N)
        assert covering_bound(spec, d, q, 0.05).value > covering_bound(spec, d, q, 0.1).value
    vals = [
        covering_bound(HypothesisSpaceSpec(R=1.5, N=N), d, q, 0.05).value
        for N in (1, 2, 4, 8)
    ]
    assert all(a < b for a, b in zip(vals, vals[1:]))
