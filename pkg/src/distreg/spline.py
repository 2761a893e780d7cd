"""ReLU spline quasi-interpolation on a uniform mesh.

A univariate function g on [-B, B] is approximated by a linear combination
of shifted ReLU units sitting on the uniform mesh

    t_i = -1 + (i - 2) / N,   i = 1, ..., 2N + 3,

so that t_2 = -1 and t_{2N+2} = +1 while t_1 and t_{2N+3} overshoot the
interval by one mesh width.  The combination weights come from a second
difference operator applied to the samples of g at the 2N + 1 interior
knots.  The resulting function

    L(x) = (N / B) * sum_i  c_i * relu(x - B * t_i)

agrees with the piecewise linear interpolant of g at the scaled knots
B * t_2, ..., B * t_{2N+2}, reproduces affine functions exactly, and for
g in C^{0,alpha}[-B, B] satisfies

    sup_{|x| <= B} |L(x) - g(x)| <= 2 * B^alpha * |g|_{0,alpha} / N^alpha.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Mesh",
    "SplineCoefficients",
    "diff_operator",
    "quasi_interpolant",
    "interpolation_error_bound",
]


@dataclass(frozen=True)
class Mesh:
    """Uniform knot mesh with 2N + 3 knots covering [-B, B].

    Parameters
    ----------
    N : int
        Mesh resolution, N >= 1.  Interior spacing is 1/N before scaling.
    B : float
        Half width of the target interval, B > 0.
    """

    N: int
    B: float = 1.0

    def __post_init__(self):
        if not (isinstance(self.N, (int, np.integer)) and self.N >= 1):
            raise ValueError(f"mesh resolution N must be an integer >= 1, got {self.N}")
        if not (np.isfinite(self.B) and self.B > 0):
            raise ValueError(f"mesh half width B must be positive and finite, got {self.B}")

    @property
    def size(self) -> int:
        """Total number of knots, 2N + 3."""
        return 2 * self.N + 3

    @property
    def unit_knots(self) -> np.ndarray:
        """Unscaled knots t_i = -1 + (i - 2)/N for i = 1..2N+3."""
        return -1.0 + (np.arange(1, 2 * self.N + 4) - 2.0) / self.N

    @property
    def knots(self) -> np.ndarray:
        """Scaled knots B * t_i."""
        return self.B * self.unit_knots

    @property
    def interior_knots(self) -> np.ndarray:
        """Scaled sampling knots B * t_i for i = 2..2N+2; these span [-B, B]."""
        return self.knots[1:-1]


def diff_operator(values: np.ndarray) -> np.ndarray:
    """Second difference operator mapping R^{2N+1} to R^{2N+3}.

    With input (z_2, ..., z_{2N+2}) indexed to match the interior knots,
    the output coefficient vector is, in knot order i = 1..2N+3,

        i = 1:            z_2
        i = 2:            z_3 - 2 z_2
        3 <= i <= 2N+1:   z_{i-1} - 2 z_i + z_{i+1}
        i = 2N+2:         z_{2N+1} - 2 z_{2N+2}
        i = 2N+3:         z_{2N+2}

    The output infinity norm is at most 4 times the input infinity norm.
    """
    z = np.asarray(values, dtype=float)
    if z.ndim != 1 or z.size < 3 or z.size % 2 == 0:
        raise ValueError(
            f"diff_operator expects a vector of odd length 2N+1 >= 3, got shape {z.shape}"
        )
    n = z.size  # 2N + 1
    out = np.empty(n + 2, dtype=float)
    out[0] = z[0]
    out[1] = z[1] - 2.0 * z[0]
    out[2:n] = z[0:n - 2] - 2.0 * z[1:n - 1] + z[2:n]
    out[n] = z[n - 2] - 2.0 * z[n - 1]
    out[n + 1] = z[n - 1]
    return out


@dataclass(frozen=True)
class SplineCoefficients:
    """ReLU combination weights on a mesh, with evaluation.

    Evaluates x -> (N/B) * sum_i coef_i * relu(x - knot_i).  Instances are
    produced by :func:`quasi_interpolant`; they can also be built directly
    from any coefficient vector of length 2N + 3.
    """

    mesh: Mesh
    coef: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.asarray(self.coef, dtype=float)
        if c.shape != (self.mesh.size,):
            raise ValueError(
                f"coefficient vector must have length {self.mesh.size}, got shape {c.shape}"
            )
        object.__setattr__(self, "coef", c)

    def __call__(self, x):
        x_arr = np.asarray(x, dtype=float)
        scalar = x_arr.ndim == 0
        ramps = np.maximum(x_arr.reshape(-1, 1) - self.mesh.knots, 0.0)
        vals = (self.mesh.N / self.mesh.B) * (ramps @ self.coef)
        if scalar:
            return float(vals[0])
        return vals.reshape(x_arr.shape)


def quasi_interpolant(g, mesh: Mesh) -> SplineCoefficients:
    """Quasi-interpolant of g on [-B, B] as a ReLU spline.

    Parameters
    ----------
    g : callable or array_like
        Either a function evaluated at the 2N + 1 scaled interior knots,
        or a precomputed vector of those samples.
    mesh : Mesh

    Returns
    -------
    SplineCoefficients
        Callable approximant; coincides with the piecewise linear
        interpolant of g at the scaled knots B*t_2, ..., B*t_{2N+2}.
    """
    if callable(g):
        samples = np.asarray([g(x) for x in mesh.interior_knots], dtype=float)
        # prefer vectorised evaluation when the callable supports it
        try:
            vec = np.asarray(g(mesh.interior_knots), dtype=float)
            if vec.shape == mesh.interior_knots.shape:
                samples = vec
        except Exception:
            pass
    else:
        samples = np.asarray(g, dtype=float)
    if samples.shape != (2 * mesh.N + 1,):
        raise ValueError(
            f"expected {2 * mesh.N + 1} samples at the interior knots, got shape {samples.shape}"
        )
    if not np.all(np.isfinite(samples)):
        raise ValueError("samples at the interior knots must be finite")
    return SplineCoefficients(mesh=mesh, coef=diff_operator(samples))


def interpolation_error_bound(B: float, alpha: float, seminorm: float, N: int) -> float:
    """Certified sup-norm error bound 2 * B^alpha * |g|_{0,alpha} / N^alpha."""
    if not (0 < alpha <= 1):
        raise ValueError(f"Holder exponent must lie in (0, 1], got {alpha}")
    if B <= 0 or seminorm < 0 or N < 1:
        raise ValueError("need B > 0, seminorm >= 0, N >= 1")
    return 2.0 * B**alpha * seminorm / N**alpha
