"""Empirical measures on the closed unit ball and exact Wasserstein distances.

All probability measures handled by the package live on the closed unit
ball of R^d and are represented by uniformly weighted atom lists.  The
module provides parametric samplers for four measure families, exact
optimal transport between empirical measures (assignment solver for equal
atom counts, least-common-multiple expansion or a dense transportation LP
otherwise), and Kantorovich-Rubinstein lower bounds from certified
1-Lipschitz witnesses.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment, linprog
from scipy.sparse import coo_matrix
from scipy.spatial.distance import cdist

__all__ = [
    "CapacityError",
    "EmpiricalMeasure",
    "DistributionSpec",
    "TransportPlan",
    "Witness",
    "sample_measure",
    "wasserstein",
    "optimal_plan",
    "kr_lower_bound",
]

#: atoms may exceed unit norm by at most this much (serialisation round off)
_BALL_TOL = 1e-9

#: expansion path is used only while lcm(n, m) stays at or below this
_LCM_CAP = 4096

#: the LP fallback refuses supports larger than this
_SUPPORT_CAP = 512


class CapacityError(RuntimeError):
    """Raised when an input exceeds a documented size cap."""


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


@dataclass(frozen=True)
class EmpiricalMeasure:
    """Uniformly weighted empirical measure with atoms in the unit ball."""

    atoms: np.ndarray = field(repr=False)

    def __post_init__(self):
        a = np.asarray(self.atoms, dtype=float)
        if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
            raise ValueError(f"atoms must form a nonempty (n, d) array, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("atoms must be finite")
        norms = np.linalg.norm(a, axis=1)
        worst = float(norms.max())
        if worst > 1.0 + _BALL_TOL:
            raise ValueError(f"atoms must lie in the closed unit ball, max norm {worst}")
        object.__setattr__(self, "atoms", a)

    @property
    def n(self) -> int:
        return self.atoms.shape[0]

    @property
    def d(self) -> int:
        return self.atoms.shape[1]

    def to_csv(self) -> str:
        """Serialise to CSV with a size comment and x0..x{d-1} header."""
        buf = io.StringIO()
        buf.write(f"# n={self.n} d={self.d}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow([f"x{k}" for k in range(self.d)])
        for row in self.atoms:
            writer.writerow([repr(float(v)) for v in row])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "EmpiricalMeasure":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        meta = None
        if lines and lines[0].startswith("#"):
            meta = lines[0]
            lines = lines[1:]
        if not lines:
            raise ValueError("empty measure CSV")
        header = next(csv.reader([lines[0]]))
        d = len(header)
        if header != [f"x{k}" for k in range(d)]:
            raise ValueError(f"unexpected measure CSV header {header}")
        rows = [[float(v) for v in rec] for rec in csv.reader(lines[1:]) if rec]
        atoms = np.asarray(rows, dtype=float)
        if atoms.ndim != 2 or atoms.shape[1] != d:
            raise ValueError("measure CSV rows do not match the header width")
        if meta is not None:
            fields = dict(tok.split("=") for tok in meta[1:].split())
            if int(fields.get("n", atoms.shape[0])) != atoms.shape[0]:
                raise ValueError("measure CSV size comment disagrees with the row count")
            if int(fields.get("d", d)) != d:
                raise ValueError("measure CSV size comment disagrees with the header width")
        return cls(atoms=atoms)


_FAMILIES = ("uniform-ball", "truncated-gaussian", "sphere-mixture", "dirac")


@dataclass(frozen=True)
class DistributionSpec:
    """Parameters of one sampleable measure family on the unit ball.

    family
        "uniform-ball": uniform on the ball, no extra parameters.
        "truncated-gaussian": isotropic normal with the given mean and
        scale, rejection sampled to the ball.
        "sphere-mixture": mixture of uniform spheres; component k has
        weight ``weights[k]``, centre ``means[k]`` and radius
        ``scales[k]``; points falling outside the ball are radially
        projected back onto it.
        "dirac": every atom equals ``point``.
    """

    family: str
    d: int
    mean: Optional[tuple] = None
    scale: Optional[float] = None
    means: Optional[tuple] = None
    scales: Optional[tuple] = None
    weights: Optional[tuple] = None
    point: Optional[tuple] = None

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown measure family {self.family!r}, expected one of {_FAMILIES}")
        if not (isinstance(self.d, (int, np.integer)) and self.d >= 1):
            raise ValueError(f"dimension must be an integer >= 1, got {self.d}")
        object.__setattr__(self, "d", int(self.d))
        if self.family == "truncated-gaussian":
            mean = np.asarray(self.mean, dtype=float)
            if mean.shape != (self.d,):
                raise ValueError(f"truncated-gaussian mean must have shape ({self.d},)")
            if np.linalg.norm(mean) > 1.0 + _BALL_TOL:
                raise ValueError("truncated-gaussian mean must lie in the unit ball")
            if self.scale is None or not (self.scale > 0):
                raise ValueError("truncated-gaussian scale must be positive")
            object.__setattr__(self, "mean", tuple(float(v) for v in mean))
        elif self.family == "sphere-mixture":
            means = np.asarray(self.means, dtype=float)
            scales = np.asarray(self.scales, dtype=float)
            weights = np.asarray(self.weights, dtype=float)
            if means.ndim != 2 or means.shape[1] != self.d:
                raise ValueError(f"sphere-mixture means must have shape (k, {self.d})")
            k = means.shape[0]
            if scales.shape != (k,) or weights.shape != (k,):
                raise ValueError("sphere-mixture scales and weights must match the means count")
            if np.any(scales < 0):
                raise ValueError("sphere-mixture radii must be nonnegative")
            if np.any(weights < 0) or weights.sum() <= 0:
                raise ValueError("sphere-mixture weights must be nonnegative with positive sum")
            object.__setattr__(self, "means", tuple(tuple(float(v) for v in row) for row in means))
            object.__setattr__(self, "scales", tuple(float(v) for v in scales))
            object.__setattr__(self, "weights", tuple(float(v) for v in weights))
        elif self.family == "dirac":
            point = np.asarray(self.point, dtype=float)
            if point.shape != (self.d,):
                raise ValueError(f"dirac point must have shape ({self.d},)")
            if np.linalg.norm(point) > 1.0 + _BALL_TOL:
                raise ValueError("dirac point must lie in the unit ball")
            object.__setattr__(self, "point", tuple(float(v) for v in point))

    def to_json(self) -> str:
        payload = {"family": self.family, "d": self.d}
        for key in ("mean", "scale", "means", "scales", "weights", "point"):
            val = getattr(self, key)
            if val is not None:
                payload[key] = val
        return json.dumps(payload)

    @classmethod
    def from_json(cls, text: str) -> "DistributionSpec":
        payload = json.loads(text)
        kwargs = {}
        for key in ("mean", "means", "scales", "weights", "point"):
            if key in payload:
                val = payload[key]
                if key == "means":
                    kwargs[key] = tuple(tuple(row) for row in val)
                else:
                    kwargs[key] = tuple(val)
        if "scale" in payload:
            kwargs["scale"] = payload["scale"]
        return cls(family=payload["family"], d=payload["d"], **kwargs)


def _unit_directions(rng: np.random.Generator, n: int, d: int) -> np.ndarray:
    g = rng.standard_normal((n, d))
    norms = np.linalg.norm(g, axis=1, keepdims=True)
    # a zero draw has probability zero; resample defensively
    while np.any(norms == 0):
        bad = norms[:, 0] == 0
        g[bad] = rng.standard_normal((int(bad.sum()), d))
        norms = np.linalg.norm(g, axis=1, keepdims=True)
    return g / norms


def sample_measure(spec: DistributionSpec, n: int, seed) -> EmpiricalMeasure:
    """Draw an n-atom empirical measure from the family; deterministic per seed."""
    if not (isinstance(n, (int, np.integer)) and n >= 1):
        raise ValueError(f"atom count must be an integer >= 1, got {n}")
    rng = _as_rng(seed)
    d = spec.d
    if spec.family == "uniform-ball":
        radii = rng.uniform(0.0, 1.0, size=n) ** (1.0 / d)
        atoms = _unit_directions(rng, n, d) * radii[:, None]
    elif spec.family == "truncated-gaussian":
        mean = np.asarray(spec.mean)
        atoms = np.empty((n, d))
        got = 0
        for _ in range(10000):
            draw = mean + spec.scale * rng.standard_normal((max(n, 64), d))
            keep = draw[np.linalg.norm(draw, axis=1) <= 1.0]
            take = min(n - got, keep.shape[0])
            atoms[got:got + take] = keep[:take]
            got += take
            if got == n:
                break
        else:
            raise RuntimeError(
                "truncated-gaussian rejection sampling failed to reach the unit ball; "
                "the requested parameters place almost no mass there"
            )
    elif spec.family == "sphere-mixture":
        means = np.asarray(spec.means)
        scales = np.asarray(spec.scales)
        weights = np.asarray(spec.weights, dtype=float)
        comp = rng.choice(means.shape[0], size=n, p=weights / weights.sum())
        atoms = means[comp] + scales[comp, None] * _unit_directions(rng, n, d)
        norms = np.linalg.norm(atoms, axis=1)
        outside = norms > 1.0
        if np.any(outside):
            atoms[outside] /= norms[outside, None]
    else:  # dirac
        atoms = np.tile(np.asarray(spec.point), (n, 1))
    return EmpiricalMeasure(atoms=atoms)


@dataclass(frozen=True)
class TransportPlan:
    """Optimal coupling between two empirical measures.

    ``cost`` is the optimal value of the p-th power objective, so the
    Wasserstein distance is ``cost ** (1/p)``.  Row sums of ``coupling``
    equal 1/n and column sums 1/m.
    """

    coupling: np.ndarray = field(repr=False)
    cost: float
    p: int

    @property
    def distance(self) -> float:
        return float(self.cost) ** (1.0 / self.p)


def _check_pair(mu: EmpiricalMeasure, nu: EmpiricalMeasure, p: int):
    if not isinstance(mu, EmpiricalMeasure) or not isinstance(nu, EmpiricalMeasure):
        raise TypeError("wasserstein expects EmpiricalMeasure inputs")
    if mu.d != nu.d:
        raise ValueError(f"dimension mismatch: {mu.d} vs {nu.d}")
    if p not in (1, 2):
        raise ValueError(f"order p must be 1 or 2, got {p}")


def _assignment_plan(x: np.ndarray, y: np.ndarray, p: int, n: int, m: int) -> TransportPlan:
    """Exact plan via assignment on equally replicated atom lists."""
    L = x.shape[0]
    cost_mat = cdist(x, y) ** p
    rows, cols = linear_sum_assignment(cost_mat)
    total = float(cost_mat[rows, cols].sum()) / L
    rep_n, rep_m = L // n, L // m
    coupling = np.zeros((n, m))
    np.add.at(coupling, (rows // rep_n, cols // rep_m), 1.0 / L)
    return TransportPlan(coupling=coupling, cost=total, p=p)


def _lp_plan(mu: EmpiricalMeasure, nu: EmpiricalMeasure, p: int) -> TransportPlan:
    n, m = mu.n, nu.n
    if n > _SUPPORT_CAP or m > _SUPPORT_CAP:
        raise CapacityError(
            f"transportation LP supports at most {_SUPPORT_CAP} atoms per measure, got {n} and {m}"
        )
    cost_mat = cdist(mu.atoms, nu.atoms) ** p
    # row sums 1/n, column sums 1/m; drop one redundant column constraint
    row_ii = np.repeat(np.arange(n), m)
    row_jj = np.arange(n * m)
    col_ii = n + np.repeat(np.arange(m - 1), n)
    col_jj = (np.arange(m - 1)[:, None] + m * np.arange(n)[None, :]).ravel()
    ii = np.concatenate([row_ii, col_ii])
    jj = np.concatenate([row_jj, col_jj])
    A = coo_matrix((np.ones(ii.size), (ii, jj)), shape=(n + m - 1, n * m))
    rhs = np.concatenate([np.full(n, 1.0 / n), np.full(m - 1, 1.0 / m)])
    res = linprog(cost_mat.ravel(), A_eq=A, b_eq=rhs, bounds=(0, None), method="highs")
    if not res.success:
        raise RuntimeError(f"transportation LP failed: {res.message}")
    coupling = res.x.reshape(n, m)
    total = float(cost_mat.ravel() @ res.x)
    return TransportPlan(coupling=coupling, cost=total, p=p)


def _plan_dispatch(mu: EmpiricalMeasure, nu: EmpiricalMeasure, p: int) -> TransportPlan:
    n, m = mu.n, nu.n
    if n == m:
        return _assignment_plan(mu.atoms, nu.atoms, p, n, m)
    L = math.lcm(n, m)
    if L <= _LCM_CAP:
        x = np.repeat(mu.atoms, L // n, axis=0)
        y = np.repeat(nu.atoms, L // m, axis=0)
        return _assignment_plan(x, y, p, n, m)
    return _lp_plan(mu, nu, p)


def optimal_plan(mu: EmpiricalMeasure, nu: EmpiricalMeasure, p: int = 1) -> TransportPlan:
    """Optimal transport plan between two empirical measures.

    Equal atom counts reduce to an exact assignment problem.  Unequal
    counts are handled by replicating atoms up to lcm(n, m) when that
    stays at or below 4096, and by a dense transportation LP otherwise
    (supports capped at 512 atoms per measure).  Arguments are put in a
    canonical order before solving (and the coupling transposed back),
    so the cost is bit-for-bit symmetric.
    """
    _check_pair(mu, nu, p)
    if (mu.n, mu.atoms.tobytes()) > (nu.n, nu.atoms.tobytes()):
        plan = _plan_dispatch(nu, mu, p)
        return TransportPlan(coupling=plan.coupling.T, cost=plan.cost, p=p)
    return _plan_dispatch(mu, nu, p)


def wasserstein(mu: EmpiricalMeasure, nu: EmpiricalMeasure, p: int = 1) -> float:
    """Exact Wasserstein distance W_p between empirical measures, p in {1, 2}."""
    return optimal_plan(mu, nu, p).distance


@dataclass(frozen=True)
class Witness:
    """Test function with a certified Lipschitz constant at most 1."""

    fn: Callable[[np.ndarray], np.ndarray]
    lipschitz_constant: float = 1.0

    def __post_init__(self):
        if not (0 <= self.lipschitz_constant <= 1.0 + 1e-12):
            raise ValueError(
                f"witness Lipschitz constant must lie in [0, 1], got {self.lipschitz_constant}"
            )


def kr_lower_bound(mu: EmpiricalMeasure, nu: EmpiricalMeasure, witnesses: Sequence[Witness]) -> float:
    """Duality lower bound on W_1 from 1-Lipschitz witnesses.

    Returns max over witnesses of |mean psi(mu) - mean psi(nu)|; with no
    witnesses the trivial bound 0 is returned.
    """
    if mu.d != nu.d:
        raise ValueError(f"dimension mismatch: {mu.d} vs {nu.d}")
    best = 0.0
    for w in witnesses:
        if not isinstance(w, Witness):
            raise TypeError("witnesses must be Witness instances")
        gap = abs(float(np.mean(w.fn(mu.atoms))) - float(np.mean(w.fn(nu.atoms))))
        best = max(best, gap)
    return best
