"""Watch the ReLU spline quasi-interpolant converge.

For a few scalar functions on [-1, 1] the script prints the dense-grid
sup error of the interpolant next to the certified bound
2 B^a |g|_{0,a} / N^a.  Doubling N halves the error for Lipschitz
functions; the square-root function decays at its slower exponent.
"""

import numpy as np

from distreg import Mesh, quasi_interpolant, scalar_function
from distreg.spline import interpolation_error_bound


def main():
    grid = np.linspace(-1.0, 1.0, 20_001)
    print(f"{'function':<10} {'N':>4} {'sup error':>12} {'bound':>12}")
    for name in ("abs-third", "sin", "exp-neg", "sqrt-abs"):
        g = scalar_function(name)
        for N in (4, 8, 16, 32, 64):
            spline = quasi_interpolant(g.fn, Mesh(N, 1.0))
            err = float(np.max(np.abs(spline(grid) - g.fn(grid))))
            bound = interpolation_error_bound(1.0, g.beta, g.seminorm_on(1.0), N)
            print(f"{name:<10} {N:>4} {err:>12.3e} {bound:>12.3e}")
        print()


if __name__ == "__main__":
    main()
