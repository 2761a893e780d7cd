"""Scalar functions with analytic Holder data on symmetric intervals.

Construction bounds need, for an outer function f and inner function g,
the seminorm |f|_{C^{0,beta}} and sup norm on [-B, B] for interval half
widths B that are only known at build time.  Each entry here therefore
carries closed-form expressions for both quantities as functions of B.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

__all__ = ["ScalarFunction", "scalar_function", "SCALAR_FUNCTIONS"]


@dataclass(frozen=True)
class ScalarFunction:
    """A scalar function with certified Holder constants per interval.

    ``seminorm_on(B)`` returns |f|_{C^{0,beta}[-B,B]} for the declared
    exponent ``beta``; ``sup_on(B)`` returns sup_{|x|<=B} |f(x)|.
    """

    name: str
    fn: Callable = field(repr=False)
    beta: float
    seminorm_on: Callable[[float], float] = field(repr=False)
    sup_on: Callable[[float], float] = field(repr=False)

    def __post_init__(self):
        if not (0 < self.beta <= 1):
            raise ValueError(f"Holder exponent must lie in (0, 1], got {self.beta}")

    def __call__(self, x):
        return self.fn(x)


SCALAR_FUNCTIONS = {
    "identity": ScalarFunction(
        name="identity",
        fn=lambda x: np.asarray(x, dtype=float) + 0.0,
        beta=1.0,
        seminorm_on=lambda B: 1.0,
        sup_on=lambda B: B,
    ),
    "abs": ScalarFunction(
        name="abs",
        fn=np.abs,
        beta=1.0,
        seminorm_on=lambda B: 1.0,
        sup_on=lambda B: B,
    ),
    # |sqrt|x| - sqrt|y|| <= sqrt(|x - y|), with equality approached at 0
    "sqrt-abs": ScalarFunction(
        name="sqrt-abs",
        fn=lambda x: np.sqrt(np.abs(x)),
        beta=0.5,
        seminorm_on=lambda B: 1.0,
        sup_on=lambda B: math.sqrt(B),
    ),
    # kink at 1/3 stays off every mesh whose knot spacing is 1/N, so the
    # approximation error of this function is never accidentally zero
    "abs-third": ScalarFunction(
        name="abs-third",
        fn=lambda x: np.abs(np.asarray(x, dtype=float) - 1.0 / 3.0),
        beta=1.0,
        seminorm_on=lambda B: 1.0,
        sup_on=lambda B: B + 1.0 / 3.0,
    ),
    "sin": ScalarFunction(
        name="sin",
        fn=np.sin,
        beta=1.0,
        seminorm_on=lambda B: 1.0,
        sup_on=lambda B: 1.0 if B >= math.pi / 2 else math.sin(B),
    ),
    "exp-neg": ScalarFunction(
        name="exp-neg",
        fn=lambda x: np.exp(-np.asarray(x, dtype=float)),
        beta=1.0,
        seminorm_on=lambda B: math.exp(B),
        sup_on=lambda B: math.exp(B),
    ),
    "square": ScalarFunction(
        name="square",
        fn=lambda x: np.square(np.asarray(x, dtype=float)),
        beta=1.0,
        seminorm_on=lambda B: 2.0 * B,
        sup_on=lambda B: B * B,
    ),
    "one": ScalarFunction(
        name="one",
        fn=lambda x: np.ones_like(np.asarray(x, dtype=float)),
        beta=1.0,
        seminorm_on=lambda B: 0.0,
        sup_on=lambda B: 1.0,
    ),
}


def scalar_function(name: str) -> ScalarFunction:
    """Look up a shipped scalar function by name."""
    try:
        return SCALAR_FUNCTIONS[name]
    except KeyError:
        raise KeyError(
            f"unknown scalar function {name!r}; available: {sorted(SCALAR_FUNCTIONS)}"
        ) from None
