import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from susyqes.ces import example1_potential, example1_superpotentials
from susyqes.errors import ConstructionError, InputError
from susyqes.genfunc import HermiteOdd, HermiteRatio, Monomial, Polynomial, SinhFamily
from susyqes.susy import (
    EigenPair,
    Superpotential,
    apply_B,
    cosine_similarity,
    eigenpair_from_phi,
    node_count,
    partner_potentials,
    riccati_residual,
    sum_and_difference,
    superpotentials_from_phi,
    unbroken_susy_check,
    wplus_from_wminus,
)

X = np.linspace(-8, 8, 1001)

CATALOG = [
    (Monomial(), 2.0),
    (HermiteOdd(1), 3.0),
    (HermiteOdd(1), 1.3),
    (HermiteOdd(2), 1.7),
    (HermiteOdd(2), 5.0),
    (HermiteRatio(2, 1), 3.0),
    (HermiteRatio(3, 2), 0.8),
    (SinhFamily(1, 2.5), 3.0),
    (SinhFamily(3, 2.5), 9.0),
    (SinhFamily(5, 3.3), 20.0),
]
IDS = [f"{g.describe()}-eps{e}" for g, e in CATALOG]


def test_monomial_superpotentials():
    W, W1 = superpotentials_from_phi(Monomial(), 2.5)
    assert np.allclose(W(X), 2.5 * X) and np.allclose(W1(X), 2.5 * X)
    assert np.allclose(W.d(X), 2.5)


@pytest.mark.parametrize("k,eps", [(1, 3.0), (1, 2.0), (2, 1.7), (3, 4.1)])
def test_hermite_odd_matches_gamma_form(k, eps):
    W, W1 = superpotentials_from_phi(HermiteOdd(k), eps)
    w_ref, w1_ref = example1_superpotentials(k, eps / (2 * k + 1))
    x = np.linspace(-6, 6, 301)
    assert np.allclose(W(x), w_ref(x), rtol=1e-13, atol=1e-13)
    assert np.allclose(W1(x), w1_ref(x), rtol=1e-13, atol=1e-13)


@pytest.mark.parametrize("alpha", [1.2, 2.5, 6.0])
def test_sinh1_gives_tanh(alpha):
    W, _ = superpotentials_from_phi(SinhFamily(1, alpha), alpha + 0.5)
    assert np.allclose(W(X), (alpha + 1) * np.tanh(X), rtol=1e-14, atol=1e-14)


def test_bad_generator_and_gap_rejected():
    with pytest.raises(ConstructionError, match="phi'"):
        superpotentials_from_phi(Polynomial((0.0, -1.0, 0.0, 1.0)), 1.0)
    for eps in (0.0, -1.0):
        with pytest.raises(ConstructionError, match="eps"):
            superpotentials_from_phi(Monomial(), eps)
        with pytest.raises(ConstructionError):
            EigenPair(Monomial(), eps)


def test_partner_potentials_examples():
    p = partner_potentials(Superpotential.linear())
    assert np.allclose(p.V_minus(X), 0.5 * (X * X - 1))
    assert np.allclose(p.V_plus(X), 0.5 * (X * X + 1))
    p = partner_potentials(Superpotential.linear(1.7))
    assert np.allclose(p.V_minus(X), 0.5 * (1.7**2 * X * X - 1.7))


def test_hermite_odd_potential_at_origin():
    W, _ = superpotentials_from_phi(HermiteOdd(1), 3.0)
    assert partner_potentials(W).V_minus(0.0) == pytest.approx(-2.5, abs=1e-14)
    assert example1_potential(1, 1.0)(0.0) == pytest.approx(-2.5, abs=1e-14)


@pytest.mark.parametrize("k,gamma", [(1, 1.0), (1, 0.4), (2, 1.3), (3, 2.0)])
def test_gamma_form_potential_matches_direct(k, gamma):
    W, _ = superpotentials_from_phi(HermiteOdd(k), gamma * (2 * k + 1))
    x = np.linspace(-6, 6, 301)
    v = partner_potentials(W).V_minus(x)
    assert np.max(np.abs(v - example1_potential(k, gamma)(x))) <= 1e-12 * np.max(np.abs(v))


@pytest.mark.parametrize("g,eps", CATALOG, ids=IDS)
def test_riccati_and_partner_shift(g, eps):
    W, W1 = superpotentials_from_phi(g, eps)
    assert riccati_residual(W, W1, eps, X) < 1e-9
    assert partner_potentials(W, W1, eps).shift_residual(X) < 1e-10
    v = partner_potentials(W)
    w, dw = W(X), W.d(X)
    assert np.allclose(v.V_plus(X) - v.V_minus(X), dw, rtol=1e-12, atol=1e-12)
    assert np.allclose(v.V_plus(X) + v.V_minus(X), w * w, rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("g,eps", CATALOG, ids=IDS)
def test_sign_condition(g, eps):
    W, W1 = superpotentials_from_phi(g, eps)
    assert unbroken_susy_check(W, 8).passed
    assert unbroken_susy_check(W1, 8).passed


@pytest.mark.parametrize("g,eps", CATALOG, ids=IDS)
def test_exact_derivatives(g, eps):
    W, W1 = superpotentials_from_phi(g, eps)
    h = 1e-5
    x = np.linspace(-3, 3, 31)
    for s in (W, W1):
        fd = (s(x + h) - s(x - h)) / (2 * h)
        assert np.allclose(s.d(x), fd, rtol=1e-6, atol=1e-6)


def test_riccati_detects_perturbation():
    W, W1 = superpotentials_from_phi(HermiteOdd(2), 1.7)
    assert riccati_residual(W, W1.perturbed(1e-3), 1.7, X) > 1e-3
    s = Superpotential.linear(2.0)
    assert riccati_residual(s, s, 2.0, X) < 1e-12


def test_sum_and_difference():
    W, W1 = superpotentials_from_phi(HermiteOdd(1), 2.0)
    wp, wm = sum_and_difference(W, W1)
    g = HermiteOdd(1)
    a, b, _ = g.ratios(X)
    assert np.allclose(wp(X), 4.0 * a) and np.allclose(wm(X), -b)


def test_unbroken_examples():
    assert unbroken_susy_check(Superpotential.linear(), 5) == (-1, 1, True)
    W = Superpotential(lambda x: 3.5 * np.tanh(x), lambda x: 3.5 / np.cosh(x) ** 2)
    assert unbroken_susy_check(W, 5).passed
    assert not unbroken_susy_check(Superpotential.linear(-1.0), 5).passed


def test_monomial_states_are_oscillator():
    ep = eigenpair_from_phi(Monomial(), 2.0)
    x = np.linspace(-4, 4, 81)
    assert np.allclose(ep.psi0(x), np.exp(-x * x))
    assert np.allclose(ep.psi1(x), x * np.exp(-x * x))
    assert ep.E0 == 0 and ep.E1 == 2.0


def test_hermite_odd_ground_state_closed_form():
    ep = eigenpair_from_phi(HermiteOdd(1), 3.0)
    assert ep.method == "closed-form"
    x = np.linspace(-6, 6, 121)
    ref = np.exp(-0.5 * x * x) / (4 * x * x + 2)
    r = ep.psi0(x) / ref
    assert np.allclose(r, r[0], rtol=1e-13)


def test_quadrature_route_matches_closed_form():
    x = np.linspace(-4, 4, 33)
    closed = EigenPair(HermiteOdd(1), 2.0)
    quad = EigenPair(HermiteOdd(1), 2.0, method="quadrature")
    assert quad.method == "quadrature"
    a, b = closed.psi0(x), quad.psi0(x)
    assert np.max(np.abs(b - a) / a) < 1e-8


def test_sinh1_closed_form_integral():
    ep = EigenPair(SinhFamily(1, 2.0), 2.5)
    q = EigenPair(SinhFamily(1, 2.0), 2.5, method="quadrature")
    x = np.linspace(-9, 9, 37)
    assert np.allclose(ep.exponent_integral(x), np.log(np.cosh(x)), atol=1e-13)
    assert np.allclose(q.exponent_integral(x), np.log(np.cosh(x)), atol=1e-9)


@pytest.mark.parametrize("g,eps", CATALOG, ids=IDS)
def test_ratio_identity_and_nodes(g, eps):
    ep = EigenPair(g, eps)
    x = np.linspace(-10, 10, 2001)
    p0, p1 = ep.psi0(x), ep.psi1(x)
    assert np.allclose(p1 / p0, g(x), rtol=1e-13, atol=0)
    assert node_count(p0) == 0
    assert node_count(p1) == 1


@pytest.mark.parametrize("g,eps", [(HermiteOdd(2), 1.7), (HermiteRatio(2, 1), 3.0), (SinhFamily(3, 2.5), 9.0)])
def test_norms_converge(g, eps):
    ep = EigenPair(g, eps)
    c0, c1 = ep.norms()
    assert c0 > 0 and c1 > 0
    assert ep.norm_convergence() < 1e-8


def test_wplus_trivial_cases():
    x = np.linspace(-3, 3, 13)
    zero = lambda t: np.zeros_like(t)
    assert np.allclose(wplus_from_wminus(zero, 1.5)(x), 3.0 * x, atol=1e-12)
    assert np.allclose(wplus_from_wminus(zero, 1.5, lam=1.0)(x), 3.0 * x + 1.0, atol=1e-12)


@pytest.mark.parametrize("eps", [1.0, 3.0])
def test_wplus_two_routes(eps):
    g = HermiteOdd(1)
    w_minus = lambda t: -g.ratios(t)[1]
    x = np.linspace(-3, 3, 61)
    got = wplus_from_wminus(w_minus, eps)(x)
    assert np.max(np.abs(got - 2 * eps * g.ratios(x)[0])) < 1e-7


def test_apply_B_harmonic():
    x = np.linspace(-8, 8, 3201)
    psi = np.exp(-0.5 * x * x)
    out = apply_B("minus", Superpotential.linear(), psi, x)
    assert np.max(np.abs(out)) < 1e-8
    # B+ psi0 = sqrt(2) x psi0
    out = apply_B("plus", Superpotential.linear(), psi, x)
    assert np.allclose(out, np.sqrt(2) * x * psi, atol=1e-8)


def test_apply_B_argument_checks():
    with pytest.raises(InputError):
        apply_B("minus", Superpotential.linear(), np.ones(4), np.arange(4.0))
    with pytest.raises(ValueError):
        apply_B("sideways", Superpotential.linear(), np.ones(9), np.arange(9.0))


@pytest.mark.parametrize("g,eps", [(HermiteOdd(1), 3.0), (HermiteOdd(2), 1.7), (SinhFamily(3, 2.5), 9.0)])
def test_zero_mode_converges_fourth_order(g, eps):
    W, _ = superpotentials_from_phi(g, eps)
    ep = EigenPair(g, eps)
    errs = []
    for n in (1201, 2401):
        x = np.linspace(-6, 6, n)
        psi = ep.psi0(x)
        errs.append(np.max(np.abs(apply_B("minus", W, psi, x))) / np.max(psi))
    assert 16 * 0.7 < errs[0] / errs[1] < 16 * 1.3


def test_node_counter_self_check():
    x = np.linspace(-np.pi, np.pi, 2001)
    assert node_count(np.sin(3 * x)) == 5
    assert node_count(np.zeros(5)) == 0
    # a tiny negative tail below the floor is ignored
    assert node_count(np.array([1.0, 0.5, -1e-14, 0.2])) == 0


@given(st.floats(0.3, 6.0), st.integers(0, 3))
@settings(max_examples=25, deadline=None)
def test_riccati_property_hermite_odd(eps, k):
    W, W1 = superpotentials_from_phi(HermiteOdd(k), eps, check=False)
    assert riccati_residual(W, W1, eps, X) < 1e-9


def test_cosine_similarity():
    assert cosine_similarity([1, 2], [-2, -4]) == pytest.approx(1.0)
