"""Superpotentials, partner potentials and the two closed-form eigenstates.

Given an admissible generator phi and a gap eps > 0,

    W  = (eps phi + phi''/2) / phi',     W1 = (eps phi - phi''/2) / phi',

satisfy W^2 + W' = W1^2 - W1' + 2 eps, so H+ = H-^(1) + eps and the lower
partner H- has the exact levels E0 = 0 and E1 = eps with

    psi0 = phi'^(-1/2) exp(-eps I),   psi1 = phi psi0,   I(x) = int_0^x phi/phi'.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .errors import ConstructionError, InputError, NumericalError
from .genfunc import (
    DEFAULT_DOMAIN,
    GeneratorFunction,
    HermiteOdd,
    Monomial,
    SinhFamily,
    check_admissible,
    pseudo_hermite_table,
    sign_changes,
)
from .quadrature import cumulative_integral, gauss_legendre

DEFAULT_PROBE = 8.0


@dataclass(frozen=True)
class Superpotential:
    """W(x) together with its exact derivative."""

    func: Callable
    deriv: Callable
    label: str = ""

    def __call__(self, x):
        return self.func(np.asarray(x, dtype=float))

    def d(self, x):
        return self.deriv(np.asarray(x, dtype=float))

    def asymptotic_signs(self, probe: float = DEFAULT_PROBE):
        return int(np.sign(self(-probe))), int(np.sign(self(probe)))

    def perturbed(self, delta: float) -> "Superpotential":
        """W(x) + delta * x; used to exercise the validators."""
        return Superpotential(
            lambda x: self.func(x) + delta * x,
            lambda x: self.deriv(x) + delta,
            label=f"{self.label}+{delta:g}x",
        )

    @classmethod
    def linear(cls, slope: float = 1.0) -> "Superpotential":
        return cls(lambda x: slope * x, lambda x: slope * np.ones_like(x), f"{slope:g}x")


def superpotentials_from_phi(g: GeneratorFunction, eps: float, check=True, domain=DEFAULT_DOMAIN):
    """Return (W, W1) built from generator ``g`` and gap ``eps``."""
    if not eps > 0:
        raise ConstructionError(f"eps must be strictly positive, got {eps}")
    if check:
        report = check_admissible(g, domain)
        if not report.passed:
            raise ConstructionError(
                f"generator {g.describe()} is not admissible: " + "; ".join(report.violations())
            )

    def w(x):
        a, b, _ = g.ratios(x)
        return eps * a + 0.5 * b

    def dw(x):
        a, b, c = g.ratios(x)
        return eps + 0.5 * c - (eps * a + 0.5 * b) * b

    def w1(x):
        a, b, _ = g.ratios(x)
        return eps * a - 0.5 * b

    def dw1(x):
        a, b, c = g.ratios(x)
        return eps - 0.5 * c - (eps * a - 0.5 * b) * b

    return Superpotential(w, dw, "W"), Superpotential(w1, dw1, "W1")


def sum_and_difference(W: Superpotential, W1: Superpotential):
    """The intermediate pair W+ = W1 + W and W- = W1 - W."""
    wp = Superpotential(lambda x: W1.func(x) + W.func(x), lambda x: W1.deriv(x) + W.deriv(x), "W+")
    wm = Superpotential(lambda x: W1.func(x) - W.func(x), lambda x: W1.deriv(x) - W.deriv(x), "W-")
    return wp, wm


@dataclass(frozen=True)
class PartnerPotentials:
    """V-(x) = (W^2 - W')/2 and V+(x) = (W^2 + W')/2.

    When the pair was built with a second superpotential ``W1`` and gap
    ``eps``, ``V1_minus`` is (W1^2 - W1')/2 and V+ = V1_minus + eps.
    """

    W: Superpotential
    W1: Superpotential | None = None
    eps: float | None = None

    def V_minus(self, x):
        w = self.W(x)
        return 0.5 * (w * w - self.W.d(x))

    def V_plus(self, x):
        w = self.W(x)
        return 0.5 * (w * w + self.W.d(x))

    def V1_minus(self, x):
        w1 = self.W1(x)
        return 0.5 * (w1 * w1 - self.W1.d(x))

    def V1_plus(self, x):
        w1 = self.W1(x)
        return 0.5 * (w1 * w1 + self.W1.d(x))

    def shift_residual(self, x) -> float:
        """max |V+ - V1_minus - eps| over x."""
        return float(np.max(np.abs(self.V_plus(x) - self.V1_minus(x) - self.eps)))


def partner_potentials(W: Superpotential, W1: Superpotential | None = None, eps=None):
    return PartnerPotentials(W, W1, eps)


def _log_dphi(g, x):
    if isinstance(g, SinhFamily):
        (_, p1, _, _), J = g.scaled_derivs(x)
        return np.log(p1) + J * np.abs(x)
    return np.log(g._unit_derivs(x)[1])


class EigenPair:
    """Closed-form ground and first excited states of H- (unnormalised).

    ``method`` selects how the exponent integral I(x) is obtained: "auto" uses
    a closed form where one is known (monomial, HermiteOdd, SinhFamily index 1)
    and adaptive quadrature anchored at x = 0 otherwise; "quadrature" forces
    the numerical path.
    """

    E0 = 0.0

    def __init__(self, g: GeneratorFunction, eps: float, method="auto", quad_tol=1e-10):
        if not eps > 0:
            raise ConstructionError(f"eps must be strictly positive, got {eps}")
        if method not in ("auto", "quadrature"):
            raise ValueError(f"unknown method {method!r}")
        self.g = g
        self.eps = float(eps)
        self.quad_tol = quad_tol
        self.method = "quadrature" if method == "quadrature" or not self._has_closed_form() else "closed-form"

    @property
    def E1(self):
        return self.eps

    def _has_closed_form(self):
        g = self.g
        return isinstance(g, (Monomial, HermiteOdd)) or (isinstance(g, SinhFamily) and g.index == 1)

    def exponent_integral(self, x):
        """I(x) = int_0^x phi(t)/phi'(t) dt."""
        x = np.asarray(x, dtype=float)
        if self.method == "quadrature":
            return cumulative_integral(lambda t: self.g.ratios(t)[0], x, tol=self.quad_tol)
        g = self.g
        if isinstance(g, Monomial):
            return 0.5 * x * x
        if isinstance(g, HermiteOdd):
            P = pseudo_hermite_table(2 * g.k, x)[2 * g.k]
            p0 = pseudo_hermite_table(2 * g.k, 0.0)[2 * g.k]
            return (0.5 * x * x + 0.5 * np.log(P / p0)) / (2 * g.k + 1)
        ax = np.abs(x)
        return ax + np.log1p(np.exp(-2.0 * ax)) - math.log(2.0)

    def log_psi0(self, x):
        x = np.asarray(x, dtype=float)
        return -0.5 * _log_dphi(self.g, x) - self.eps * self.exponent_integral(x)

    def psi0(self, x):
        return np.exp(self.log_psi0(x))

    def psi1(self, x):
        x = np.asarray(x, dtype=float)
        return self.g(x) * self.psi0(x)

    def psi0_plus(self, x):
        """Ground state of H+, proportional to exp(-int W1) = phi'^(1/2) exp(-eps I)."""
        x = np.asarray(x, dtype=float)
        return np.exp(0.5 * _log_dphi(self.g, x) - self.eps * self.exponent_integral(x))

    def norms(self, half_width=DEFAULT_DOMAIN[1], panels=240, order=16):
        """Normalisation constants (C0, C1) over [-half_width, half_width]."""
        n0 = gauss_legendre(lambda t: self.psi0(t) ** 2, -half_width, half_width, panels, order)
        n1 = gauss_legendre(lambda t: self.psi1(t) ** 2, -half_width, half_width, panels, order)
        return 1.0 / math.sqrt(n0), 1.0 / math.sqrt(n1)

    def norm_convergence(self, half_width=DEFAULT_DOMAIN[1]):
        """Relative change of both squared norms when the interval is doubled."""
        c_small = self.norms(half_width)
        c_big = self.norms(2 * half_width, panels=480)
        return max(abs(cs**-2 - cb**-2) / cb**-2 for cs, cb in zip(c_small, c_big))


def eigenpair_from_phi(g: GeneratorFunction, eps: float, method="auto", check=True, domain=DEFAULT_DOMAIN):
    if check:
        report = check_admissible(g, domain)
        if not report.passed:
            raise ConstructionError(
                f"generator {g.describe()} is not admissible: " + "; ".join(report.violations())
            )
    return EigenPair(g, eps, method=method)


def riccati_residual(W: Superpotential, W1: Superpotential, eps: float, samples) -> float:
    """max |W^2 + W' - W1^2 + W1' - 2 eps| over the samples."""
    x = np.asarray(samples, dtype=float)
    w, w1 = W(x), W1(x)
    r = w * w + W.d(x) - w1 * w1 + W1.d(x) - 2.0 * eps
    return float(np.max(np.abs(r)))


def wplus_from_wminus(w_minus: Callable, eps: float, lam: float = 0.0, tol=1e-11):
    """Solve W+' = W- W+ + 2 eps for W+ by quadrature, anchored at x = 0.

    W+(x) = exp(int_0^x W-) [2 eps int_0^x exp(-int_0^t W-) dt + lam]
    """

    def inner(t):
        return cumulative_integral(w_minus, t, tol=tol)

    def w_plus(x):
        x = np.asarray(x, dtype=float)
        outer = cumulative_integral(lambda t: np.exp(-inner(t)), x, tol=tol)
        return np.exp(inner(x)) * (2.0 * eps * outer + lam)

    return w_plus


class SusyCheck(NamedTuple):
    sign_minus: int
    sign_plus: int
    passed: bool


def unbroken_susy_check(W, probe: float = DEFAULT_PROBE) -> SusyCheck:
    """sign W(-probe) = -1 and sign W(+probe) = +1."""
    lo, hi = float(W(-probe)), float(W(probe))
    s_lo, s_hi = int(np.sign(lo)), int(np.sign(hi))
    return SusyCheck(s_lo, s_hi, s_lo == -1 and s_hi == 1)


def _grid_x(grid):
    x = getattr(grid, "x", grid)
    return np.asarray(x, dtype=float)


def grid_derivative(f, h):
    """First derivative: 4th-order central interior, 3rd-order one-sided at the two end rows."""
    f = np.asarray(f, dtype=float)
    if f.size < 5:
        raise InputError(f"grid too coarse for the derivative stencil ({f.size} < 5 points)")
    d = np.empty_like(f)
    d[2:-2] = (f[:-4] - 8.0 * f[1:-3] + 8.0 * f[3:-1] - f[4:]) / (12.0 * h)
    d[0] = (-11.0 * f[0] + 18.0 * f[1] - 9.0 * f[2] + 2.0 * f[3]) / (6.0 * h)
    d[1] = (-2.0 * f[0] - 3.0 * f[1] + 6.0 * f[2] - f[3]) / (6.0 * h)
    d[-1] = (11.0 * f[-1] - 18.0 * f[-2] + 9.0 * f[-3] - 2.0 * f[-4]) / (6.0 * h)
    d[-2] = (2.0 * f[-1] + 3.0 * f[-2] - 6.0 * f[-3] + f[-4]) / (6.0 * h)
    return d


def apply_B(direction: str, W, psi, grid):
    """B+- psi = (-+ psi' + W psi) / sqrt(2) on a uniform grid."""
    x = _grid_x(grid)
    psi = np.asarray(psi, dtype=float)
    if x.size < 5:
        raise InputError(f"grid too coarse for the derivative stencil ({x.size} < 5 points)")
    h = x[1] - x[0]
    dpsi = grid_derivative(psi, h)
    if direction == "plus":
        sgn = -1.0
    elif direction == "minus":
        sgn = 1.0
    else:
        raise ValueError(f"direction must be 'plus' or 'minus', got {direction!r}")
    return (sgn * dpsi + W(x) * psi) / math.sqrt(2.0)


def node_count(psi, grid=None, rel_floor=1e-12) -> int:
    """Strict sign changes of psi, ignoring samples below rel_floor * max|psi|."""
    psi = np.asarray(psi, dtype=float)
    peak = np.max(np.abs(psi))
    if peak == 0:
        return 0
    return sign_changes(np.where(np.abs(psi) < rel_floor * peak, 0.0, psi))


def cosine_similarity(a, b) -> float:
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 or nb == 0:
        raise NumericalError("zero vector in cosine similarity")
    return float(abs(a @ b) / (na * nb))
