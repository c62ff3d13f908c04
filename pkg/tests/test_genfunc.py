import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from susyqes.errors import CapacityError, ConstructionError, EvaluationRangeError
from susyqes.genfunc import (
    HermiteOdd,
    HermiteRatio,
    Monomial,
    Polynomial,
    SinhFamily,
    check_admissible,
    eval_with_derivs,
    pseudo_hermite,
    pseudo_hermite_table,
)
from susyqes.susy import superpotentials_from_phi


def complex_hermite(n, z):
    """Physicists' H_n(z) by its own three-term recurrence, complex argument."""
    h0, h1 = np.ones_like(z), 2 * z
    if n == 0:
        return h0
    for j in range(1, n):
        h0, h1 = h1, 2 * z * h1 - 2 * j * h0
    return h1


CATALOG = [
    Monomial(),
    HermiteOdd(0),
    HermiteOdd(1),
    HermiteOdd(2),
    HermiteOdd(4),
    HermiteRatio(1, 1),
    HermiteRatio(2, 1),
    HermiteRatio(3, 2),
    SinhFamily(1, 2.5),
    SinhFamily(3, 2.5),
    SinhFamily(5, 3.3),
]


def test_pseudo_hermite_low_degrees():
    assert pseudo_hermite(0).coeffs == (1,)
    assert pseudo_hermite(2).coeffs == (2, 0, 4)
    assert pseudo_hermite(3).coeffs == (0, 12, 0, 8)


def test_pseudo_hermite_capacity():
    pseudo_hermite(64)
    with pytest.raises(CapacityError):
        pseudo_hermite(65)


@pytest.mark.parametrize("n", range(0, 13))
def test_matches_complex_hermite(n):
    x = np.linspace(-4, 4, 64)
    ref = ((1j) ** (-n) * complex_hermite(n, 1j * x)).real
    p = pseudo_hermite(n)(x)
    assert np.max(np.abs(p - ref) / np.maximum(1, np.abs(p))) < 1e-12


@pytest.mark.parametrize("n", [1, 5, 12, 33, 64])
def test_coefficient_structure(n):
    c = pseudo_hermite(n).coeffs
    for p, v in enumerate(c):
        if p % 2 == n % 2:
            assert v > 0
        else:
            assert v == 0


@pytest.mark.parametrize("n", [1, 2, 7, 20])
def test_coefficients_agree_with_values(n):
    x = np.linspace(-2, 2, 9)
    poly = np.polynomial.Polynomial([float(c) for c in pseudo_hermite(n).coeffs])
    assert np.allclose(poly(x), pseudo_hermite(n)(x), rtol=1e-12)


@given(st.integers(1, 30), st.floats(-6, 6))
def test_recurrence_and_derivative_identity(n, x):
    c = {j: np.polynomial.Polynomial([float(v) for v in pseudo_hermite(j).coeffs]) for j in (n - 1, n, n + 1)}
    scale = max(1.0, abs(c[n + 1](x)))
    assert abs(c[n + 1](x) - (2 * x * c[n](x) + 2 * n * c[n - 1](x))) <= 1e-12 * scale
    assert np.allclose(c[n].deriv().coef, 2 * n * c[n - 1].coef)


@given(st.integers(0, 20), st.floats(-10, 10))
def test_even_degrees_positive(k, x):
    assert pseudo_hermite_table(2 * k, x)[2 * k] > 0


def test_odd_degree_single_zero():
    x = np.linspace(-5, 5, 2001)
    for k in range(6):
        p = pseudo_hermite(2 * k + 1)(x)
        assert np.all(p[x < 0] < 0) and np.all(p[x > 0] > 0) and p[1000] == 0


def test_eval_examples():
    assert eval_with_derivs(Monomial(), 2.0) == (2.0, 1.0, 0.0, 0.0)
    assert np.allclose(eval_with_derivs(HermiteOdd(1), 0.0), (0, 12, 0, 48))
    for a in (1.5, 2.5, 7.0):
        assert np.allclose(eval_with_derivs(SinhFamily(1, a), 0.0), (0, 1, 0, 1))


def test_sinh_closed_forms():
    x = np.linspace(-3, 3, 41)
    a = 2.5
    phi3 = (1 - a + (2 + a) * np.cosh(2 * x)) * np.sinh(x)
    phi5 = (
        6 + a + 3 * a * a - 4 * (a * a + 2 * a - 3) * np.cosh(2 * x) + (a * a + 7 * a + 12) * np.cosh(4 * x)
    ) * np.sinh(x)
    assert np.allclose(SinhFamily(3, a)(x), phi3, rtol=1e-13)
    assert np.allclose(SinhFamily(5, a)(x), phi5, rtol=1e-13)


def test_sinh_index_rejected():
    with pytest.raises(ConstructionError):
        SinhFamily(2, 2.5)


def test_hermite_ratio_precondition():
    with pytest.raises(ConstructionError):
        HermiteRatio(1, 2)


@pytest.mark.parametrize("g", CATALOG, ids=lambda g: str(g.describe()))
def test_parity(g):
    x = np.linspace(0.01, 6, 50)
    assert np.array_equal(g(-x), -g(x))


@pytest.mark.parametrize("g", CATALOG, ids=lambda g: str(g.describe()))
def test_derivatives_against_finite_differences(g):
    h = 1e-5
    x = np.linspace(-2.5, 2.5, 23)
    p0, p1, p2, p3 = g.derivs(x)
    fd1 = (g(x + h) - g(x - h)) / (2 * h)
    fd2 = (g.derivs(x + h)[1] - g.derivs(x - h)[1]) / (2 * h)
    fd3 = (g.derivs(x + h)[2] - g.derivs(x - h)[2]) / (2 * h)
    for exact, fd in ((p1, fd1), (p2, fd2), (p3, fd3)):
        assert np.all(np.abs(exact - fd) <= 1e-6 * np.maximum(1.0, np.abs(exact)))


@given(st.floats(0.1, 100.0), st.sampled_from(CATALOG[1:]))
@settings(max_examples=40)
def test_beta_invariance(beta, g):
    scaled = type(g)(**{**{f: getattr(g, f) for f in g.__dataclass_fields__ if f not in ("scale", "terms")}, "scale": beta})
    x = np.linspace(-5, 5, 37)
    W, _ = superpotentials_from_phi(g, 1.7, check=False)
    Wb, _ = superpotentials_from_phi(scaled, 1.7, check=False)
    assert np.all(np.abs(W(x) - Wb(x)) <= 1e-14 * np.maximum(1, np.abs(W(x))))
    assert np.allclose(scaled(x), beta * g(x), rtol=1e-14)


def test_sinh_ratios_stay_finite_far_out():
    g = SinhFamily(5, 3.3)
    a, b, c = g.ratios(np.array([-500.0, 500.0]))
    assert np.all(np.isfinite([a, b, c]))
    assert np.allclose(b, [-5.0, 5.0]) and np.allclose(c, 25.0)
    with pytest.raises(EvaluationRangeError) as info:
        g.derivs(500.0)
    assert info.value.threshold < 500


def test_polynomial_overflow_reports_threshold():
    with pytest.raises(EvaluationRangeError) as info:
        HermiteOdd(30).derivs(1e7)
    assert 1e3 < info.value.threshold < 1e7


@pytest.mark.parametrize(
    "g,domain",
    [
        (HermiteOdd(2), (-6, 6)),
        (SinhFamily(3, 2.5), (-5, 5)),
        (SinhFamily(5, 2.0), (-5, 5)),
        (HermiteRatio(2, 1), (-12, 12)),
        (HermiteRatio(3, 2), (-12, 12)),
    ],
)
def test_admissible(g, domain):
    rep = check_admissible(g, domain, 1001)
    assert rep.passed and rep.node_count == 1 and rep.monotone


def test_bad_polynomial_rejected():
    rep = check_admissible(Polynomial((0.0, -1.0, 0.0, 1.0)), (-6, 6), 1201)
    assert not rep.passed
    assert rep.node_count == 3
    assert rep.min_dphi < 0
    assert len(rep.violations()) == 2


def test_admissibility_needs_samples():
    with pytest.raises(ValueError):
        check_admissible(Monomial(), (-1, 1), 2)
