"""Certified Holder data for the shipped scalar functions."""

import math

import numpy as np
import pytest

from distreg import SCALAR_FUNCTIONS, ScalarFunction, scalar_function


@pytest.mark.parametrize("name", sorted(SCALAR_FUNCTIONS))
@pytest.mark.parametrize("B", [0.25, 1.0, 2.5])
def test_seminorm_certifies_holder_increments(name, B):
    f = scalar_function(name)
    sem = f.seminorm_on(B)
    rng = np.random.default_rng(hash((name, B)) % 2**32)
    x = rng.uniform(-B, B, 4000)
    y = rng.uniform(-B, B, 4000)
    lhs = np.abs(np.asarray(f(x), dtype=float) - np.asarray(f(y), dtype=float))
    rhs = sem * np.abs(x - y) ** f.beta
    assert np.all(lhs <= rhs + 1e-12)


@pytest.mark.parametrize("name", sorted(SCALAR_FUNCTIONS))
@pytest.mark.parametrize("B", [0.25, 1.0, 2.5])
def test_sup_bound_is_valid_and_nearly_attained(name, B):
    f = scalar_function(name)
    sup = f.sup_on(B)
    grid = np.linspace(-B, B, 20001)
    vals = np.abs(np.asarray(f(grid), dtype=float))
    assert vals.max() <= sup + 1e-12
    # closed forms are exact sups on the interval, so the grid gets close
    assert vals.max() >= sup - 1e-6 * max(1.0, sup)


def test_holder_equality_cases():
    # abs attains its Lipschitz constant, sqrt-abs its 1/2-Holder constant at 0
    f = scalar_function("abs")
    assert abs(f(2.0) - f(0.0)) == pytest.approx(f.seminorm_on(2.0) * 2.0, abs=1e-15)
    g = scalar_function("sqrt-abs")
    assert abs(float(g(0.25)) - float(g(0.0))) == pytest.approx(
        g.seminorm_on(1.0) * 0.25**0.5, abs=1e-15
    )


def test_specific_values():
    assert scalar_function("identity")(0.7) == 0.7
    assert scalar_function("abs-third")(1.0 / 3.0) == 0.0
    assert scalar_function("exp-neg")(0.0) == 1.0
    assert scalar_function("square").sup_on(2.0) == 4.0
    assert scalar_function("sin").sup_on(0.5) == math.sin(0.5)
    assert scalar_function("sin").sup_on(3.0) == 1.0
    assert np.array_equal(scalar_function("one")(np.array([-1.0, 2.0])), [1.0, 1.0])


def test_vector_evaluation_shapes():
    x = np.linspace(-1, 1, 11)
    for name in SCALAR_FUNCTIONS:
        out = np.asarray(scalar_function(name)(x), dtype=float)
        assert out.shape == x.shape


def test_beta_declaration_validated():
    with pytest.raises(ValueError):
        ScalarFunction(
            name="bad", fn=lambda x: x, beta=1.5, seminorm_on=lambda B: 1.0, sup_on=lambda B: B
        )
    with pytest.raises(ValueError):
        ScalarFunction(
            name="bad", fn=lambda x: x, beta=0.0, seminorm_on=lambda B: 1.0, sup_on=lambda B: B
        )


def test_unknown_name_raises_keyerror():
    with pytest.raises(KeyError, match="unknown scalar function"):
        scalar_function("cosh")
