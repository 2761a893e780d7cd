"""Ridge decompositions of multivariate polynomials on the unit ball.

A polynomial Q of degree q in d variables is rewritten as

    Q(x) = Q(0) + sum_{k=1}^{n_q} sum_{l=1}^{q} gamma[k, l] * (xi_k . x)^l

with unit directions xi_k.  Generic directions sampled uniformly on the
sphere span every homogeneous degree with probability one; the span is
certified by a rank check and the coefficients are recovered degree by
degree with minimal-norm least squares.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np
from scipy.stats import norm as _gauss
from scipy.stats import qmc

from .measures import CapacityError

__all__ = [
    "Polynomial",
    "RidgeDecomposition",
    "DegenerateDirectionsError",
    "n_q",
    "decompose",
    "poly_sup_norm",
]

_RANK_RTOL = 1e-10
_MAX_RETRIES = 50
_RESIDUAL_TOL = 1e-8


class DegenerateDirectionsError(RuntimeError):
    """Sampled directions failed the span rank check repeatedly."""


def n_q(d: int, q: int) -> int:
    """Number of ridge directions, the dimension of the degree-q homogeneous space.

    Equals binom(d - 1 + q, q).  Values beyond 64-bit range raise a
    capacity error.
    """
    if d < 1 or q < 1:
        raise ValueError(f"need d >= 1 and q >= 1, got d={d}, q={q}")
    val = math.comb(d - 1 + q, q)
    if val > 2**63 - 1:
        raise CapacityError(f"direction count binom({d - 1 + q},{q}) exceeds 64-bit range")
    return val


def _check_multi_index(alpha, d: int) -> Tuple[int, ...]:
    key = tuple(int(a) for a in alpha)
    if len(key) != d or any(a < 0 for a in key):
        raise ValueError(f"multi-index {alpha} invalid for dimension {d}")
    return key


@dataclass(frozen=True)
class Polynomial:
    """Polynomial in the monomial basis: coefficients keyed by multi-index.

    The declared degree must equal the total degree of the highest
    nonzero coefficient.  The constant term is cached as ``q0``.
    """

    d: int
    degree: int
    coeffs: Dict[Tuple[int, ...], float]

    def __post_init__(self):
        if self.d < 1:
            raise ValueError(f"dimension must be >= 1, got {self.d}")
        clean = {}
        for alpha, cval in self.coeffs.items():
            key = _check_multi_index(alpha, self.d)
            cval = float(cval)
            if cval != 0.0:
                clean[key] = cval
        actual = max((sum(a) for a in clean), default=0)
        if actual != self.degree:
            raise ValueError(
                f"declared degree {self.degree} but highest nonzero coefficient has degree {actual}"
            )
        object.__setattr__(self, "coeffs", clean)

    @property
    def q0(self) -> float:
        """Constant term, the value at the origin."""
        return self.coeffs.get((0,) * self.d, 0.0)

    def homogeneous_part(self, level: int) -> Dict[Tuple[int, ...], float]:
        return {a: c for a, c in self.coeffs.items() if sum(a) == level}

    def __call__(self, x):
        X = np.atleast_2d(np.asarray(x, dtype=float))
        if X.shape[1] != self.d:
            raise ValueError(f"points must have dimension {self.d}, got {X.shape[1]}")
        vals = np.zeros(X.shape[0])
        for alpha, cval in self.coeffs.items():
            vals += cval * np.prod(X ** np.asarray(alpha), axis=1)
        if np.asarray(x).ndim == 1:
            return float(vals[0])
        return vals

    def gradient(self, x) -> np.ndarray:
        """Gradient at each point; shape matches the input points."""
        X = np.atleast_2d(np.asarray(x, dtype=float))
        grad = np.zeros_like(X)
        for alpha, cval in self.coeffs.items():
            for j, aj in enumerate(alpha):
                if aj == 0:
                    continue
                shifted = list(alpha)
                shifted[j] -= 1
                grad[:, j] += cval * aj * np.prod(X ** np.asarray(shifted), axis=1)
        if np.asarray(x).ndim == 1:
            return grad[0]
        return grad


def _multi_indices(d: int, level: int):
    """All multi-indices in d variables with total degree equal to level."""
    for bars in itertools.combinations(range(level + d - 1), d - 1):
        prev = -1
        alpha = []
        for b in bars:
            alpha.append(b - prev - 1)
            prev = b
        alpha.append(level + d - 2 - prev)
        yield tuple(alpha)


def _multinomial(level: int, alpha: Tuple[int, ...]) -> float:
    out = math.factorial(level)
    for a in alpha:
        out //= math.factorial(a)
    return float(out)


def _span_matrix(dirs: np.ndarray, level: int):
    """Matrix mapping ridge coefficients to monomial coefficients at one degree.

    Row k lists multinom(level, alpha) * dirs[k]^alpha across the degree-level
    multi-indices, so that (xi_k . x)^level = sum_alpha row[k, alpha] x^alpha.
    """
    d = dirs.shape[1]
    alphas = list(_multi_indices(d, level))
    M = np.empty((dirs.shape[0], len(alphas)))
    for col, alpha in enumerate(alphas):
        M[:, col] = _multinomial(level, alpha) * np.prod(dirs ** np.asarray(alpha), axis=1)
    return M, alphas


@dataclass(frozen=True)
class RidgeDecomposition:
    """Directions and per-degree coefficients reproducing a polynomial."""

    poly: Polynomial
    directions: np.ndarray = field(repr=False)
    gamma: np.ndarray = field(repr=False)
    residual: float

    def __post_init__(self):
        dirs = np.asarray(self.directions, dtype=float)
        g = np.asarray(self.gamma, dtype=float)
        if dirs.ndim != 2 or g.ndim != 2 or g.shape[0] != dirs.shape[0]:
            raise ValueError("directions and gamma must be 2-d with matching direction count")
        norms = np.linalg.norm(dirs, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-12):
            raise ValueError("directions must have unit Euclidean norm within 1e-12")
        object.__setattr__(self, "directions", dirs)
        object.__setattr__(self, "gamma", g)

    @property
    def n_directions(self) -> int:
        return self.directions.shape[0]

    @property
    def gamma_l1(self) -> float:
        """Total l1 mass of the coefficient matrix; feeds downstream constants."""
        return float(np.abs(self.gamma).sum())

    def __call__(self, x):
        X = np.atleast_2d(np.asarray(x, dtype=float))
        proj = X @ self.directions.T  # (n_points, n_q)
        vals = np.full(X.shape[0], self.poly.q0)
        for level in range(1, self.gamma.shape[1] + 1):
            vals += (proj ** level) @ self.gamma[:, level - 1]
        if np.asarray(x).ndim == 1:
            return float(vals[0])
        return vals

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        buf.write("# gamma\n")
        writer.writerow(["k", "l", "gamma"])
        nq, q = self.gamma.shape
        for k in range(nq):
            for level in range(1, q + 1):
                writer.writerow([k, level, repr(float(self.gamma[k, level - 1]))])
        buf.write("# directions\n")
        d = self.directions.shape[1]
        writer.writerow(["k"] + [f"x{j}" for j in range(d)])
        for k in range(nq):
            writer.writerow([k] + [repr(float(v)) for v in self.directions[k]])
        return buf.getvalue()


def _unit_sphere(rng: np.random.Generator, n: int, d: int) -> np.ndarray:
    g = rng.standard_normal((n, d))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def decompose(poly: Polynomial, seed=0) -> RidgeDecomposition:
    """Ridge decomposition of a polynomial of degree q >= 1.

    Directions are redrawn (at most 50 times) until, for every degree
    l in 1..q, the functions (xi_k . x)^l span the homogeneous
    polynomials of degree l; the rank check uses singular values with
    relative tolerance 1e-10.  Coefficients are solved degree by degree
    by minimal-norm least squares and the reconstruction is verified at
    512 random ball points.
    """
    q = poly.degree
    if q < 1:
        raise ValueError("decompose requires a polynomial of degree at least 1")
    d = poly.d
    nq = n_q(d, q)
    rng = np.random.default_rng(seed)

    span = None
    for _ in range(_MAX_RETRIES):
        dirs = _unit_sphere(rng, nq, d)
        span = []
        ok = True
        for level in range(1, q + 1):
            M, alphas = _span_matrix(dirs, level)
            s = np.linalg.svd(M, compute_uv=False)
            if s[-1] <= _RANK_RTOL * s[0]:
                ok = False
                break
            span.append((M, alphas))
        if ok:
            break
    else:
        raise DegenerateDirectionsError(
            f"no spanning direction set found in {_MAX_RETRIES} draws (d={d}, q={q})"
        )

    gamma = np.zeros((nq, q))
    for level in range(1, q + 1):
        M, alphas = span[level - 1]
        target = poly.homogeneous_part(level)
        rhs = np.array([target.get(a, 0.0) for a in alphas])
        if np.any(rhs != 0.0):
            sol, *_ = np.linalg.lstsq(M.T, rhs, rcond=None)
            gamma[:, level - 1] = sol

    # verify on fresh random ball points before accepting the decomposition
    pts = _unit_sphere(rng, 512, d) * rng.uniform(0.0, 1.0, size=512)[:, None] ** (1.0 / d)
    deco = RidgeDecomposition(poly=poly, directions=dirs, gamma=gamma, residual=0.0)
    qvals = poly(pts)
    err = np.abs(deco(pts) - qvals) / (1.0 + np.abs(qvals))
    residual = float(err.max())
    if residual > _RESIDUAL_TOL:
        raise DegenerateDirectionsError(
            f"reconstruction residual {residual:.3e} exceeds {_RESIDUAL_TOL}"
        )
    return RidgeDecomposition(poly=poly, directions=dirs, gamma=gamma, residual=residual)


def poly_sup_norm(poly: Polynomial, grid_size: int = 4096) -> float:
    """Lower estimate of sup |Q| over the unit ball.

    Evaluates Q on a low-discrepancy sequence inside the ball and on a
    matching sample of the boundary sphere, returning the largest
    absolute value.  This underestimates the true sup norm; shipped
    analytic targets carry exact values instead.
    """
    if grid_size < 1000:
        raise ValueError(f"grid_size must be at least 1000, got {grid_size}")
    d = poly.d
    m = 2 ** int(math.ceil(math.log2(grid_size)))
    eng = qmc.Sobol(d=d, scramble=False)
    cube = 2.0 * eng.random_base2(int(math.log2(m)))[:grid_size] - 1.0
    inside = cube[np.linalg.norm(cube, axis=1) <= 1.0]
    best = float(np.abs(poly(inside)).max()) if inside.size else 0.0
    # boundary sample: same low-discrepancy block pushed through the inverse
    # normal map and radially normalised
    raw = (cube + 1.0) / 2.0
    gauss = _gauss.ppf(np.clip(raw, 1e-12, 1 - 1e-12))
    norms = np.linalg.norm(gauss, axis=1)
    keep = norms > 0
    sphere = gauss[keep] / norms[keep, None]
    if sphere.size:
        best = max(best, float(np.abs(poly(sphere)).max()))
    return best
