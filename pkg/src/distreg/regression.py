"""Two-stage sampled regression on distribution inputs.

A meta distribution draws an input law, a reference sample of fixed
size stands in for that law when labeling, and a smaller second-stage
sample is what the learner actually sees.  Training is projected
gradient descent over the norm-constrained (2, 3) network class with a
monotone acceptance rule, and the error decomposition splits the excess
risk of the truncated trained net into the four estimation terms plus
the approximation term of a comparison network.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .construct import TargetFunctional, build_for_target, get_target
from .measures import DistributionSpec, EmpiricalMeasure, sample_measure
from .network import (
    DistributionNet,
    HypothesisSpaceSpec,
    forward,
    forward_batch,
    in_hypothesis_space,
    project_M,
)

__all__ = [
    "MetaDistribution",
    "TwoStageDataset",
    "TrainResult",
    "ErrorDecomposition",
    "generate",
    "save_dataset",
    "load_dataset",
    "erm_train",
    "empirical_error",
    "decompose_error",
]

REFERENCE_SIZE = 4096

# fixed substream tags so any draw can be regenerated independently
_TAG_SPEC = 0
_TAG_REF = 1
_TAG_SECOND = 2
_TAG_NOISE = 3


def _stream(seed: int, i: int, tag: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(i), int(tag)]))


_PRIOR_KINDS = ("gaussian-family", "uniform-family", "dirac-family", "mixed-family")


def _default_prior() -> dict:
    return {"kind": "gaussian-family", "center_radius": 0.6, "scale_lo": 0.1, "scale_hi": 0.4}


@dataclass(frozen=True)
class MetaDistribution:
    """Law over input distributions together with the labeling model.

    Labels are y = clamp(F(mu_ref) + eps, -M, M) where mu_ref is the
    size ``n_ref`` reference sample for the drawn law, eps is uniform on
    [-noise, noise], and M defaults to the target's output sup norm plus
    the noise level.
    """

    target: TargetFunctional
    noise: float = 0.0
    prior: dict = field(default_factory=_default_prior)
    M: Optional[float] = None
    n_ref: int = REFERENCE_SIZE

    def __post_init__(self):
        if self.noise < 0:
            raise ValueError(f"noise level must be >= 0, got {self.noise}")
        if self.n_ref < 1:
            raise ValueError(f"n_ref must be >= 1, got {self.n_ref}")
        kind = self.prior.get("kind")
        if kind not in _PRIOR_KINDS:
            raise ValueError(f"prior kind must be one of {_PRIOR_KINDS}, got {kind!r}")
        if self.M is None:
            object.__setattr__(self, "M", float(self.target.output_sup() + self.noise))
        if not (self.M > 0):
            raise ValueError(f"label bound M must be positive, got {self.M}")

    def draw_spec(self, rng: np.random.Generator) -> DistributionSpec:
        """Draw one input-law description from the prior."""
        kind = self.prior["kind"]
        if kind == "mixed-family":
            kind = _PRIOR_KINDS[rng.integers(0, 3)]
        d = self.target.d
        if kind == "uniform-family":
            return DistributionSpec(family="uniform-ball", d=d)
        u = rng.standard_normal(d)
        nrm = np.linalg.norm(u)
        while nrm == 0.0:
            u = rng.standard_normal(d)
            nrm = np.linalg.norm(u)
        u /= nrm
        radial = rng.uniform(0.0, 1.0) ** (1.0 / d)
        if kind == "dirac-family":
            r = self.prior.get("radius", 1.0)
            return DistributionSpec(family="dirac", d=d, point=tuple(r * radial * u))
        cr = self.prior.get("center_radius", 0.6)
        lo = self.prior.get("scale_lo", 0.1)
        hi = self.prior.get("scale_hi", 0.4)
        return DistributionSpec(
            family="truncated-gaussian",
            d=d,
            mean=tuple(cr * radial * u),
            scale=float(rng.uniform(lo, hi)),
        )


@dataclass(frozen=True)
class TwoStageDataset:
    """Observed two-stage sample plus everything needed to regenerate it.

    ``second`` holds the per-input atom blocks, shape (m, n, d).  The
    reference samples are not stored; :meth:`reference_measure` redraws
    them bit-for-bit from the recorded seed streams.
    """

    specs: tuple
    y: np.ndarray
    f_ref: np.ndarray
    second: np.ndarray
    seed: int
    n_ref: int
    M: float
    noise: float
    target_id: str

    def __post_init__(self):
        object.__setattr__(self, "y", np.asarray(self.y, dtype=float))
        object.__setattr__(self, "f_ref", np.asarray(self.f_ref, dtype=float))
        object.__setattr__(self, "second", np.asarray(self.second, dtype=float))
        if self.second.ndim != 3:
            raise ValueError("second-stage block must have shape (m, n, d)")
        m = self.second.shape[0]
        if len(self.specs) != m or self.y.shape != (m,) or self.f_ref.shape != (m,):
            raise ValueError("inconsistent first-stage sizes")
        sq = np.einsum("mnd,mnd->mn", self.second, self.second)
        if sq.size and sq.max() > 1.0 + 2e-9:
            raise ValueError("second-stage atoms must lie in the closed unit ball")
        if np.any(np.abs(self.y) > self.M + 1e-12):
            raise ValueError("labels must satisfy |y| <= M")

    @property
    def m(self) -> int:
        return self.second.shape[0]

    @property
    def n(self) -> int:
        return self.second.shape[1]

    @property
    def d(self) -> int:
        return self.second.shape[2]

    def empirical_measure(self, i: int) -> EmpiricalMeasure:
        return EmpiricalMeasure(atoms=self.second[i])

    def reference_measure(self, i: int) -> EmpiricalMeasure:
        return sample_measure(self.specs[i], self.n_ref, _stream(self.seed, i, _TAG_REF))


def generate(meta: MetaDistribution, m: int, n: int, seed: int) -> TwoStageDataset:
    """Draw m input laws, label each against its reference sample, then
    draw n observed atoms per law.  Fully determined by ``seed``."""
    if m < 1 or n < 1:
        raise ValueError(f"need m >= 1 and n >= 1, got m={m}, n={n}")
    seed = int(seed)
    if seed < 0:
        raise ValueError(f"seed must be a nonnegative integer, got {seed}")
    d = meta.target.d
    specs = []
    y = np.empty(m)
    f_ref = np.empty(m)
    second = np.empty((m, n, d))
    for i in range(m):
        spec = meta.draw_spec(_stream(seed, i, _TAG_SPEC))
        specs.append(spec)
        ref = sample_measure(spec, meta.n_ref, _stream(seed, i, _TAG_REF))
        f_ref[i] = meta.target.evaluate(ref)
        eps = 0.0
        if meta.noise > 0:
            eps = meta.noise * _stream(seed, i, _TAG_NOISE).uniform(-1.0, 1.0)
        y[i] = min(max(f_ref[i] + eps, -meta.M), meta.M)
        second[i] = sample_measure(spec, n, _stream(seed, i, _TAG_SECOND)).atoms
    return TwoStageDataset(
        specs=tuple(specs),
        y=y,
        f_ref=f_ref,
        second=second,
        seed=seed,
        n_ref=meta.n_ref,
        M=float(meta.M),
        noise=float(meta.noise),
        target_id=meta.target.target_id,
    )


def save_dataset(data: TwoStageDataset, meta: MetaDistribution, dirpath: str) -> None:
    """Write meta.json, first_stage.csv and second_stage/<i>.csv.

    All floats are written with repr so a reload reproduces the exact
    binary64 values.  Only registry targets can be saved since the load
    path rebuilds the target from its id.
    """
    if not data.target_id:
        raise ValueError("dataset must come from a registry target to be saved")
    get_target(data.target_id)
    os.makedirs(dirpath, exist_ok=True)
    os.makedirs(os.path.join(dirpath, "second_stage"), exist_ok=True)
    payload = {
        "target_id": data.target_id,
        "noise": data.noise,
        "prior": meta.prior,
        "M": data.M,
        "n_ref": data.n_ref,
        "m": data.m,
        "n": data.n,
        "d": data.d,
        "seed": data.seed,
    }
    with open(os.path.join(dirpath, "meta.json"), "w") as fh:
        fh.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["i", "y", "f_ref", "spec"])
    for i in range(data.m):
        writer.writerow([i, repr(float(data.y[i])), repr(float(data.f_ref[i])), data.specs[i].to_json()])
    with open(os.path.join(dirpath, "first_stage.csv"), "w") as fh:
        fh.write(buf.getvalue())
    for i in range(data.m):
        with open(os.path.join(dirpath, "second_stage", f"{i}.csv"), "w") as fh:
            fh.write(data.empirical_measure(i).to_csv())


def load_dataset(dirpath: str):
    """Inverse of :func:`save_dataset`; returns (meta, dataset)."""
    with open(os.path.join(dirpath, "meta.json")) as fh:
        payload = json.load(fh)
    target = get_target(payload["target_id"])
    meta = MetaDistribution(
        target=target,
        noise=payload["noise"],
        prior=payload["prior"],
        M=payload["M"],
        n_ref=payload["n_ref"],
    )
    with open(os.path.join(dirpath, "first_stage.csv")) as fh:
        rows = list(csv.reader(fh))
    if rows[0] != ["i", "y", "f_ref", "spec"]:
        raise ValueError("unexpected first_stage.csv header")
    m, n, d = payload["m"], payload["n"], payload["d"]
    if len(rows) - 1 != m:
        raise ValueError(f"expected {m} first-stage rows, found {len(rows) - 1}")
    specs, y, f_ref = [], np.empty(m), np.empty(m)
    for row in rows[1:]:
        i = int(row[0])
        y[i] = float(row[1])
        f_ref[i] = float(row[2])
        specs.append(DistributionSpec.from_json(row[3]))
    second = np.empty((m, n, d))
    for i in range(m):
        with open(os.path.join(dirpath, "second_stage", f"{i}.csv")) as fh:
            second[i] = EmpiricalMeasure.from_csv(fh.read()).atoms
    data = TwoStageDataset(
        specs=tuple(specs),
        y=y,
        f_ref=f_ref,
        second=second,
        seed=payload["seed"],
        n_ref=payload["n_ref"],
        M=payload["M"],
        noise=payload["noise"],
        target_id=payload["target_id"],
    )
    return meta, data


def _project_row_l1(v: np.ndarray, z: float) -> np.ndarray:
    """Euclidean projection of one row onto the l1 ball of radius z.

    Sorted-threshold algorithm; np.sort is stable so ties resolve by
    index and the result is deterministic.
    """
    a = np.abs(v)
    if a.sum() <= z:
        return v
    u = np.sort(a)[::-1]
    cumulative = np.cumsum(u) - z
    idx = np.arange(1, a.size + 1)
    rho = np.nonzero(u > cumulative / idx)[0][-1]
    theta = cumulative[rho] / (rho + 1.0)
    return np.sign(v) * np.maximum(a - theta, 0.0)


def _project_params(params: list, space: HypothesisSpaceSpec) -> list:
    F1, b1, F2, b2, F3, b3, c = params
    lim_F = space.R * space.N**2
    out_F = []
    for F in (F1, F2, F3):
        out_F.append(np.vstack([_project_row_l1(row, lim_F) for row in F]))
    b_out = [np.clip(b, -space.R, space.R) for b in (b1, b2, b3)]
    c_out = np.clip(c, -space.R * space.N, space.R * space.N)
    return [out_F[0], b_out[0], out_F[1], b_out[1], out_F[2], b_out[2], c_out]


def _make_net(params: list) -> DistributionNet:
    F1, b1, F2, b2, F3, b3, c = params
    return DistributionNet(J=3, J1=2, weights=(F1, F2, F3), biases=(b1, b2, b3), c=c)


def _loss(net: DistributionNet, atoms: np.ndarray, y: np.ndarray) -> float:
    pred = forward_batch(net, atoms)
    r = pred - y
    return float(np.mean(r * r))


def _gradients(params: list, atoms: np.ndarray, y: np.ndarray) -> list:
    """Mean-squared-error gradient for the (2, 3) architecture.

    The subgradient at a dead unit is taken as 0 (strict > mask), which
    matches the forward pass max(., 0) on either side of the kink.
    """
    F1, b1, F2, b2, F3, b3, c = params
    m = atoms.shape[0]
    n = atoms.shape[1]
    Z1 = atoms @ F1.T - b1
    A1 = np.maximum(Z1, 0.0)
    Z2 = A1 @ F2.T - b2
    A2 = np.maximum(Z2, 0.0)
    H = A2.mean(axis=1)
    Z3 = H @ F3.T - b3
    A3 = np.maximum(Z3, 0.0)
    out = A3 @ c
    dout = (2.0 / m) * (out - y)
    gc = A3.T @ dout
    dZ3 = (dout[:, None] * c[None, :]) * (Z3 > 0)
    gF3 = dZ3.T @ H
    gb3 = -dZ3.sum(axis=0)
    dZ2 = ((dZ3 @ F3)[:, None, :] / n) * (Z2 > 0)
    gF2 = np.einsum("mnj,mnk->jk", dZ2, A1)
    gb2 = -dZ2.sum(axis=(0, 1))
    dZ1 = (dZ2 @ F2) * (Z1 > 0)
    gF1 = np.einsum("mnj,mnk->jk", dZ1, atoms)
    gb1 = -dZ1.sum(axis=(0, 1))
    return [gF1, gb1, gF2, gb2, gF3, gb3, gc]


@dataclass(frozen=True)
class TrainResult:
    """Trained network with the accepted-loss trace."""

    net: DistributionNet = field(repr=False)
    losses: tuple
    step_final: float
    epochs_run: int

    @property
    def initial_loss(self) -> float:
        return self.losses[0]

    @property
    def final_loss(self) -> float:
        return self.losses[-1]


def erm_train(
    data: TwoStageDataset,
    space: HypothesisSpaceSpec,
    init: Optional[DistributionNet] = None,
    *,
    epochs: int = 50,
    step: float = 1e-2,
    step_floor: float = 1e-12,
    seed: int = 0,
    train_only_c: bool = False,
    on_epoch: Optional[Callable[[DistributionNet, float], None]] = None,
) -> TrainResult:
    """Projected gradient descent with monotone acceptance.

    Each epoch computes one gradient, then halves the step until the
    projected update does not increase the second-stage empirical loss.
    When the step falls below ``step_floor`` training stops, so the
    final loss can never exceed the initial loss.

    ``init=None`` warm-starts from the analytic construction of the
    dataset's target at resolution ``space.N``.  ``train_only_c``
    freezes everything except the output coefficients, making the model
    linear in its trainable parameters.  ``seed`` is accepted for
    interface stability; the optimizer itself is deterministic.
    """
    del seed
    if epochs < 0:
        raise ValueError(f"epochs must be >= 0, got {epochs}")
    if not (step > 0):
        raise ValueError(f"step must be positive, got {step}")
    if init is None:
        if not data.target_id:
            raise ValueError("warm start needs a dataset generated from a registry target")
        init = build_for_target(data.target_id, space.N).net
    if not in_hypothesis_space(init, space):
        raise ValueError("initial network violates the hypothesis-space constraints")
    atoms = data.second
    y = data.y
    F1, F2, F3 = (np.array(w, dtype=float) for w in init.weights)
    b1, b2, b3 = (np.array(b, dtype=float) for b in init.biases)
    params = [F1, b1, F2, b2, F3, b3, np.array(init.c, dtype=float)]
    current = _loss(_make_net(params), atoms, y)
    losses = [current]
    epochs_run = 0
    for _ in range(epochs):
        grads = _gradients(params, atoms, y)
        if train_only_c:
            grads = [np.zeros_like(g) for g in grads[:-1]] + [grads[-1]]
        accepted = False
        while step >= step_floor:
            candidate = _project_params(
                [p - step * g for p, g in zip(params, grads)], space
            )
            cand_loss = _loss(_make_net(candidate), atoms, y)
            if cand_loss <= current:
                params = candidate
                current = cand_loss
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break
        epochs_run += 1
        losses.append(current)
        if on_epoch is not None:
            on_epoch(_make_net(params), current)
    return TrainResult(net=_make_net(params), losses=tuple(losses), step_final=step, epochs_run=epochs_run)


def empirical_error(
    net: DistributionNet,
    data: TwoStageDataset,
    which: str = "second-stage",
    truncate: bool = False,
) -> float:
    """Mean squared label error over the dataset.

    ``which`` selects the inputs: the observed second-stage samples or
    the regenerated first-stage reference samples.  ``truncate`` clamps
    predictions to [-M, M] first.
    """
    if which == "second-stage":
        pred = forward_batch(net, data.second)
    elif which == "first-stage-reference":
        pred = np.array([forward(net, data.reference_measure(i)) for i in range(data.m)])
    else:
        raise ValueError(f"which must be 'second-stage' or 'first-stage-reference', got {which!r}")
    if truncate:
        pred = project_M(pred, data.M)
    r = pred - data.y
    return float(np.mean(r * r))


@dataclass(frozen=True)
class ErrorDecomposition:
    """Estimated pieces of the excess-risk split for a trained network.

    ``excess`` estimates the population excess risk of the truncated
    trained net; I1/I2 are the two population-vs-first-stage gaps, I3/I4
    the two first-vs-second-stage gaps, and R_H the population excess
    risk of the comparison network.  ``erm_gap`` is the second-stage
    loss difference trained-minus-comparison, nonpositive whenever
    training started at the comparison net.
    """

    I1: float
    I2: float
    I3: float
    I4: float
    R_H: float
    excess: float
    erm_gap: float
    mc_size: int
    se_net: float
    se_h: float

    @property
    def se_combined(self) -> float:
        return math.hypot(self.se_net, self.se_h)

    def components_total(self) -> float:
        return self.I1 + self.I2 + abs(self.I3) + abs(self.I4) + self.R_H

    def holds(self, slack: float = 1e-9) -> bool:
        """Excess at most the component total, three standard errors wide."""
        return self.excess <= self.components_total() + 3.0 * self.se_combined + slack


def decompose_error(
    net: DistributionNet,
    h: DistributionNet,
    data: TwoStageDataset,
    meta: MetaDistribution,
    mc_size: int = 200,
    seed: int = 977,
    space: Optional[HypothesisSpaceSpec] = None,
) -> ErrorDecomposition:
    """Estimate the four-term excess-risk decomposition.

    Population quantities are Monte Carlo averages over fresh draws from
    the meta distribution using common random numbers for ``net`` and
    ``h``, so the shared label terms cancel exactly inside each sample.
    The trained net is truncated at M, the comparison net is not.
    """
    if mc_size < 2:
        raise ValueError(f"mc_size must be >= 2, got {mc_size}")
    if space is not None and not in_hypothesis_space(h, space):
        raise ValueError("comparison network violates the hypothesis-space constraints")
    M = data.M
    diff_net = np.empty(mc_size)
    diff_h = np.empty(mc_size)
    for j in range(mc_size):
        spec = meta.draw_spec(_stream(seed, j, _TAG_SPEC))
        ref = sample_measure(spec, meta.n_ref, _stream(seed, j, _TAG_REF))
        fr = meta.target.evaluate(ref)
        eps = 0.0
        if meta.noise > 0:
            eps = meta.noise * _stream(seed, j, _TAG_NOISE).uniform(-1.0, 1.0)
        yj = min(max(fr + eps, -M), M)
        p_net = float(project_M(forward(net, ref), M))
        p_h = forward(h, ref)
        base = (fr - yj) ** 2
        diff_net[j] = (p_net - yj) ** 2 - base
        diff_h[j] = (p_h - yj) ** 2 - base
    excess = float(diff_net.mean())
    r_h = float(diff_h.mean())
    se_net = float(diff_net.std(ddof=1) / math.sqrt(mc_size))
    se_h = float(diff_h.std(ddof=1) / math.sqrt(mc_size))

    e_d_fref = float(np.mean((data.f_ref - data.y) ** 2))
    e_d_net = empirical_error(net, data, "first-stage-reference", truncate=True)
    e_d_h = empirical_error(h, data, "first-stage-reference", truncate=False)
    e_dhat_net = empirical_error(net, data, "second-stage", truncate=True)
    e_dhat_h = empirical_error(h, data, "second-stage", truncate=False)

    i1 = excess - (e_d_net - e_d_fref)
    i2 = (e_d_h - e_d_fref) - r_h
    i3 = e_d_net - e_dhat_net
    i4 = e_dhat_h - e_d_h
    erm_gap = e_dhat_net - e_dhat_h
    return ErrorDecomposition(
        I1=i1,
        I2=i2,
        I3=i3,
        I4=i4,
        R_H=r_h,
        excess=excess,
        erm_gap=erm_gap,
        mc_size=mc_size,
        se_net=se_net,
        se_h=se_h,
    )
