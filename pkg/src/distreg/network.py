"""Fully connected ReLU networks taking a probability measure as input.

A network of depth J with realising level J1 applies layers 1..J1 to each
atom of the input measure, averages the level-J1 activations against the
measure, applies layers J1+1..J to the averaged vector and returns the
inner product with the output coefficients:

    h^(0)(x) = x
    h^(j)(x) = relu(F^(j) h^(j-1)(x) - b^(j))        j <= J1, per atom
    h^(J1)   = (1/n) sum_atoms h^(J1)(x_i)
    h^(j)    = relu(F^(j) h^(j-1) - b^(j))           j > J1
    output   = c . h^(J)

Evaluation is invariant to atom order and duplication, and on a single
Dirac atom it reduces to the plain vector network.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .measures import CapacityError, EmpiricalMeasure

__all__ = [
    "DistributionNet",
    "HypothesisSpaceSpec",
    "ParamNorms",
    "forward",
    "plain_forward",
    "param_norms",
    "in_hypothesis_space",
    "project_M",
    "lipschitz_certificate",
    "uniform_bound",
]

_MAX_WIDTH = 4096
_MEMBERSHIP_SLACK = 1e-12


def _relu(x):
    return np.maximum(x, 0.0)


@dataclass(frozen=True)
class DistributionNet:
    """Weights, biases and output coefficients of a distribution-input net."""

    J: int
    J1: int
    weights: tuple = field(repr=False)
    biases: tuple = field(repr=False)
    c: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not (self.J >= 1 and 0 <= self.J1 <= self.J):
            raise ValueError(f"need J >= 1 and 0 <= J1 <= J, got J={self.J}, J1={self.J1}")
        Fs = tuple(np.asarray(F, dtype=float) for F in self.weights)
        bs = tuple(np.asarray(b, dtype=float) for b in self.biases)
        c = np.asarray(self.c, dtype=float)
        if len(Fs) != self.J or len(bs) != self.J:
            raise ValueError(f"expected {self.J} weight matrices and biases")
        for j, (F, b) in enumerate(zip(Fs, bs), start=1):
            if F.ndim != 2:
                raise ValueError(f"layer {j} weight must be a matrix")
            if b.shape != (F.shape[0],):
                raise ValueError(f"layer {j} bias length {b.shape} mismatches width {F.shape[0]}")
            if F.shape[0] > _MAX_WIDTH:
                raise CapacityError(f"layer {j} width {F.shape[0]} exceeds cap {_MAX_WIDTH}")
            if j > 1 and F.shape[1] != Fs[j - 2].shape[0]:
                raise ValueError(f"layer {j} input width {F.shape[1]} breaks the dimension chain")
        if c.shape != (Fs[-1].shape[0],):
            raise ValueError(f"output coefficients must have length {Fs[-1].shape[0]}")
        object.__setattr__(self, "weights", Fs)
        object.__setattr__(self, "biases", bs)
        object.__setattr__(self, "c", c)

    @property
    def dims(self) -> tuple:
        """Width chain (d_0, d_1, ..., d_J)."""
        return (self.weights[0].shape[1],) + tuple(F.shape[0] for F in self.weights)

    def to_json(self) -> str:
        payload = {
            "J": self.J,
            "J1": self.J1,
            "dims": list(self.dims),
            "F": [[ [float(v) for v in row] for row in F] for F in self.weights],
            "b": [[float(v) for v in b] for b in self.biases],
            "c": [float(v) for v in self.c],
        }
        return json.dumps(payload)

    @classmethod
    def from_json(cls, text: str) -> "DistributionNet":
        payload = json.loads(text)
        net = cls(
            J=payload["J"],
            J1=payload["J1"],
            weights=tuple(np.asarray(F) for F in payload["F"]),
            biases=tuple(np.asarray(b) for b in payload["b"]),
            c=np.asarray(payload["c"]),
        )
        if list(net.dims) != payload["dims"]:
            raise ValueError("serialized dims field disagrees with the matrix shapes")
        return net


def forward(net: DistributionNet, mu: EmpiricalMeasure) -> float:
    """Evaluate the network on an empirical measure."""
    if mu.d != net.dims[0]:
        raise ValueError(f"measure dimension {mu.d} mismatches network input {net.dims[0]}")
    return float(forward_batch(net, mu.atoms[None, :, :])[0])


def forward_batch(net: DistributionNet, atoms: np.ndarray) -> np.ndarray:
    """Evaluate on a stack of measures with equal atom counts.

    ``atoms`` has shape (batch, n, d); returns a vector of length batch.
    The averaging step keeps a singleton axis so a single-atom measure
    follows the same floating-point path as :func:`plain_forward`.
    """
    h = np.asarray(atoms, dtype=float)
    if h.ndim != 3 or h.shape[2] != net.dims[0]:
        raise ValueError(f"atom stack must have shape (batch, n, {net.dims[0]})")
    for j in range(net.J1):
        h = _relu(h @ net.weights[j].T - net.biases[j])
    h = h.mean(axis=1)  # (batch, d_J1)
    for j in range(net.J1, net.J):
        h = _relu(h @ net.weights[j].T - net.biases[j])
    return h @ net.c


def plain_forward(net: DistributionNet, x: np.ndarray) -> float:
    """Reference vector-network evaluation, no averaging branch."""
    h = np.asarray(x, dtype=float).reshape(1, -1)
    if h.shape[1] != net.dims[0]:
        raise ValueError(f"input dimension {h.shape[1]} mismatches network input {net.dims[0]}")
    for j in range(net.J):
        h = _relu(h @ net.weights[j].T - net.biases[j])
    return float((h @ net.c)[0])


class ParamNorms(NamedTuple):
    """Per-layer norms: max row l1 for matrices, sup norm for biases and c."""

    F: tuple
    b: tuple
    c: float


def param_norms(net: DistributionNet) -> ParamNorms:
    f_norms = tuple(float(np.abs(F).sum(axis=1).max()) for F in net.weights)
    b_norms = tuple(float(np.abs(b).max()) if b.size else 0.0 for b in net.biases)
    c_norm = float(np.abs(net.c).max()) if net.c.size else 0.0
    return ParamNorms(F=f_norms, b=b_norms, c=c_norm)


@dataclass(frozen=True)
class HypothesisSpaceSpec:
    """Constraint radii of the depth-3, level-2 hypothesis space.

    Matrices obey max-row-l1 at most R N^2, biases sup norm at most R,
    output coefficients sup norm at most R N.
    """

    R: float
    N: int

    def __post_init__(self):
        if not (self.R > 0 and np.isfinite(self.R)):
            raise ValueError(f"R must be positive and finite, got {self.R}")
        if not (isinstance(self.N, (int, np.integer)) and self.N >= 1):
            raise ValueError(f"N must be an integer >= 1, got {self.N}")


def in_hypothesis_space(net: DistributionNet, spec: HypothesisSpaceSpec) -> bool:
    """Membership test for the (J1, J) = (2, 3) constrained class."""
    if net.J != 3 or net.J1 != 2:
        raise ValueError(f"hypothesis space requires J=3, J1=2, got J={net.J}, J1={net.J1}")
    norms = param_norms(net)
    lim_F = spec.R * spec.N**2
    if any(v > lim_F + _MEMBERSHIP_SLACK for v in norms.F):
        return False
    if any(v > spec.R + _MEMBERSHIP_SLACK for v in norms.b):
        return False
    return norms.c <= spec.R * spec.N + _MEMBERSHIP_SLACK


def project_M(value, M: float):
    """Clamp a prediction (or array of predictions) to [-M, M]."""
    if not (M > 0):
        raise ValueError(f"projection level M must be positive, got {M}")
    return np.clip(value, -M, M)


def lipschitz_certificate(net: DistributionNet, spec: HypothesisSpaceSpec) -> float:
    """Certified W_1 Lipschitz constant of the network functional.

    Returns (2N+3) * ||c||_inf * prod_j ||F^(j)||_inf, valid for members
    of the hypothesis space and at most (2N+3) R^4 N^7.
    """
    if not in_hypothesis_space(net, spec):
        raise ValueError("network is not in the hypothesis space; certificate invalid")
    norms = param_norms(net)
    prod = 1.0
    for v in norms.F:
        prod *= v
    return (2 * spec.N + 3) * norms.c * prod


def uniform_bound(spec: HypothesisSpaceSpec) -> float:
    """Sup-norm bound (2N+3)(2R^4 + R^3 + R^2) N^7 over the hypothesis space."""
    R, N = spec.R, spec.N
    return (2 * N + 3) * (2 * R**4 + R**3 + R**2) * N**7
