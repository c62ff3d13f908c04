"""Generator functions phi(x) with closed-form derivatives up to third order.

The imaginary-argument Hermite expressions H_n(ix) are handled through the
real "pseudo-Hermite" polynomials

    P_n(x) = i**(-n) * H_n(ix),    P_{n+1} = 2x P_n + 2n P_{n-1},

whose coefficients are all non-negative.  Every generator returns
(phi, phi', phi'', phi''') and the scale-free ratios
(phi/phi', phi''/phi', phi'''/phi') that the superpotential formulas need.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import CapacityError, ConstructionError, EvaluationRangeError

MAX_DEGREE = 64
DEFAULT_DOMAIN = (-12.0, 12.0)
_LOG_FLOAT_MAX = math.log(np.finfo(float).max)


@dataclass(frozen=True)
class PseudoHermite:
    """P_n(x) = i^-n H_n(ix) with exact integer coefficients (ascending powers)."""

    degree: int
    coeffs: tuple

    def __call__(self, x):
        return pseudo_hermite_table(self.degree, x)[self.degree]

    def deriv(self) -> "PseudoHermite":
        return pseudo_hermite(max(self.degree - 1, 0)) if self.degree else self


@lru_cache(maxsize=None)
def _coeff_table(n: int) -> tuple:
    table = [(1,), (0, 2)]
    for j in range(1, n):
        prev, cur = table[j - 1], table[j]
        nxt = [0] * (j + 2)
        for p, c in enumerate(cur):
            nxt[p + 1] += 2 * c
        for p, c in enumerate(prev):
            nxt[p] += 2 * j * c
        table.append(tuple(nxt))
    return tuple(table[: n + 1])


def pseudo_hermite(n: int, max_degree: int = MAX_DEGREE) -> PseudoHermite:
    """Return P_n with its monomial coefficients.

    >>> pseudo_hermite(3).coeffs
    (0, 12, 0, 8)
    """
    if n < 0:
        raise ValueError(f"degree must be non-negative, got {n}")
    if n > max_degree:
        raise CapacityError(f"degree {n} exceeds the configured maximum {max_degree}")
    return PseudoHermite(n, _coeff_table(n)[n])


def pseudo_hermite_table(n: int, x):
    """Values P_0(x) .. P_n(x) stacked along axis 0, via the forward recurrence.

    All terms of the recurrence have the same sign for a given parity, so the
    forward direction is stable for every real x.
    """
    if n > MAX_DEGREE:
        raise CapacityError(f"degree {n} exceeds the configured maximum {MAX_DEGREE}")
    x = np.asarray(x, dtype=float)
    out = np.empty((n + 1,) + x.shape)
    out[0] = 1.0
    if n >= 1:
        out[1] = 2.0 * x
    with np.errstate(over="ignore", invalid="ignore"):
        for j in range(1, n):
            out[j + 1] = 2.0 * x * out[j] + 2.0 * j * out[j - 1]
    return out


def _check_finite(values, x, threshold, what):
    for v in values:
        if not np.all(np.isfinite(v)):
            raise EvaluationRangeError(
                f"{what} overflowed; keep |x| below about {threshold:.4g}",
                threshold=threshold,
            )


class GeneratorFunction:
    """Common behaviour of the catalog families.

    Subclasses implement ``_unit_derivs`` (the four derivatives at scale 1).
    ``scale`` multiplies phi and all its derivatives and drops out of every
    downstream quantity.
    """

    family = "abstract"
    scale = 1.0
    odd = True

    def _unit_derivs(self, x):
        raise NotImplementedError

    @property
    def overflow_threshold(self) -> float:
        return math.inf

    def derivs(self, x):
        """(phi, phi', phi'', phi''') at x, including the scale factor."""
        x = np.asarray(x, dtype=float)
        with np.errstate(over="ignore", invalid="ignore"):
            vals = tuple(self.scale * d for d in self._unit_derivs(x))
        _check_finite(vals, x, self.overflow_threshold, self.family)
        return vals

    def ratios(self, x):
        """(phi/phi', phi''/phi', phi'''/phi'); independent of the scale."""
        with np.errstate(over="ignore", invalid="ignore"):
            p0, p1, p2, p3 = self._unit_derivs(np.asarray(x, dtype=float))
        _check_finite((p0, p1, p2, p3), x, self.overflow_threshold, self.family)
        return p0 / p1, p2 / p1, p3 / p1

    def __call__(self, x):
        return self.derivs(x)[0]

    def describe(self) -> dict:
        return {"family": self.family}


@dataclass(frozen=True)
class Monomial(GeneratorFunction):
    """phi(x) = x; yields the harmonic oscillator W = eps * x."""

    scale: float = 1.0
    family = "monomial"

    def _unit_derivs(self, x):
        zero = np.zeros_like(x)
        return x, np.ones_like(x), zero, zero


@dataclass(frozen=True)
class HermiteOdd(GeneratorFunction):
    """phi(x) = P_{2k+1}(x), the real form of H_{2k+1}(ix)."""

    k: int
    scale: float = 1.0
    family = "hermite-odd"

    def __post_init__(self):
        if self.k < 0:
            raise ConstructionError(f"HermiteOdd needs k >= 0, got {self.k}")
        pseudo_hermite(2 * self.k + 1)

    @property
    def degree(self) -> int:
        return 2 * self.k + 1

    @property
    def overflow_threshold(self) -> float:
        return 0.5 * math.exp((_LOG_FLOAT_MAX - 10.0) / self.degree)

    def _unit_derivs(self, x):
        n = self.degree
        P = pseudo_hermite_table(n, x)

        def at(j):
            return P[j] if j >= 0 else np.zeros_like(x)

        with np.errstate(over="ignore", invalid="ignore"):
            return (
                P[n],
                2.0 * n * at(n - 1),
                4.0 * n * (n - 1) * at(n - 2),
                8.0 * n * (n - 1) * (n - 2) * at(n - 3),
            )

    def describe(self):
        return {"family": self.family, "k": self.k}


@dataclass(frozen=True)
class HermiteRatio(GeneratorFunction):
    """phi(x) = P_{2k+1}(x) / P_{2m}(x) with k >= m.

    Derivatives follow from differentiating phi * v = u three times.
    P_{2m} has only even powers with positive coefficients, so it never vanishes.
    """

    k: int
    m: int
    scale: float = 1.0
    family = "hermite-ratio"

    def __post_init__(self):
        if self.m < 0 or self.k < self.m:
            raise ConstructionError(
                f"HermiteRatio needs k >= m >= 0, got k={self.k}, m={self.m}"
            )
        pseudo_hermite(2 * self.k + 1)

    @property
    def overflow_threshold(self) -> float:
        return 0.5 * math.exp((_LOG_FLOAT_MAX - 10.0) / (2 * self.k + 1))

    def _unit_derivs(self, x):
        nu, nv = 2 * self.k + 1, 2 * self.m
        P = pseudo_hermite_table(nu, x)

        def poly_derivs(n):
            out = []
            c = 1.0
            for p in range(4):
                out.append(c * P[n - p] if n - p >= 0 else np.zeros_like(x))
                c *= 2.0 * (n - p)
            return out

        u0, u1, u2, u3 = poly_derivs(nu)
        v0, v1, v2, v3 = poly_derivs(nv)
        f0 = u0 / v0
        f1 = (u1 - f0 * v1) / v0
        f2 = (u2 - 2.0 * f1 * v1 - f0 * v2) / v0
        f3 = (u3 - 3.0 * f2 * v1 - 3.0 * f1 * v2 - f0 * v3) / v0
        return f0, f1, f2, f3

    def describe(self):
        return {"family": self.family, "k": self.k, "m": self.m}


# bracket coefficients of cosh(2jx), j = 0, 1, 2, multiplying sinh(x)
def _sinh_bracket(index: int, a: float):
    if index == 1:
        return (1.0,)
    if index == 3:
        return (1.0 - a, 2.0 + a)
    if index == 5:
        return (6.0 + a + 3.0 * a * a, -4.0 * (a * a + 2.0 * a - 3.0), a * a + 7.0 * a + 12.0)
    raise ConstructionError(f"SinhFamily index must be one of 1, 3, 5; got {index}")


@dataclass(frozen=True)
class SinhFamily(GeneratorFunction):
    """The odd Rosen-Morse generators phi_1, phi_3, phi_5.

    phi is rewritten as sum_j c_j sinh(j x) over odd j, so every derivative is
    a closed form.  Values are formed after factoring out exp(-J|x|) with J the
    largest frequency; the ratios therefore stay finite for any |x|.
    """

    index: int
    alpha: float
    scale: float = 1.0
    family = "sinh"
    terms: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        bracket = _sinh_bracket(self.index, float(self.alpha))
        coef = {}
        for j, b in enumerate(bracket):
            if j == 0:
                coef[1] = coef.get(1, 0.0) + b
            else:
                # cosh(2jx) sinh x = (sinh((2j+1)x) - sinh((2j-1)x)) / 2
                coef[2 * j + 1] = coef.get(2 * j + 1, 0.0) + 0.5 * b
                coef[2 * j - 1] = coef.get(2 * j - 1, 0.0) - 0.5 * b
        object.__setattr__(self, "terms", tuple(sorted(coef.items())))

    @property
    def top_frequency(self) -> int:
        return self.terms[-1][0]

    @property
    def overflow_threshold(self) -> float:
        big = max(abs(c) * j**3 for j, c in self.terms) + 1.0
        return (_LOG_FLOAT_MAX - math.log(big) - math.log(self.scale)) / self.top_frequency

    def scaled_derivs(self, x):
        """Derivatives multiplied by exp(-J|x|); returns (values, J)."""
        x = np.asarray(x, dtype=float)
        J = self.top_frequency
        ax, sgn = np.abs(x), np.sign(x)
        out = [np.zeros_like(x) for _ in range(4)]
        for j, c in self.terms:
            grow = np.exp((j - J) * ax)
            decay = np.exp(-(j + J) * ax)
            sh = 0.5 * sgn * (grow - decay)
            ch = 0.5 * (grow + decay)
            for p in range(4):
                out[p] = out[p] + c * j**p * (sh if p % 2 == 0 else ch)
        return tuple(out), J

    def _unit_derivs(self, x):
        vals, J = self.scaled_derivs(x)
        with np.errstate(over="ignore", invalid="ignore"):
            grow = np.exp(J * np.abs(np.asarray(x, dtype=float)))
            return tuple(v * grow for v in vals)

    def ratios(self, x):
        (p0, p1, p2, p3), _ = self.scaled_derivs(x)
        return p0 / p1, p2 / p1, p3 / p1

    def describe(self):
        return {"family": self.family, "index": self.index, "alpha": float(self.alpha)}


@dataclass(frozen=True)
class Polynomial(GeneratorFunction):
    """Arbitrary real polynomial phi (ascending coefficients); no admissibility implied."""

    coeffs: tuple
    scale: float = 1.0
    family = "polynomial"

    @property
    def odd(self):
        return all(c == 0 for c in self.coeffs[::2])

    def _unit_derivs(self, x):
        p = np.polynomial.Polynomial(self.coeffs)
        return tuple(p.deriv(j)(x) if j else p(x) for j in range(4))

    def describe(self):
        return {"family": self.family, "coeffs": list(self.coeffs)}


def eval_with_derivs(g: GeneratorFunction, x):
    """(phi, phi', phi'', phi''') of generator ``g`` at x."""
    return g.derivs(x)


@dataclass
class AdmissibilityReport:
    min_dphi: float
    node_count: int
    monotone: bool
    domain: tuple
    samples: int

    @property
    def passed(self) -> bool:
        return self.min_dphi > 0 and self.node_count == 1

    def violations(self):
        out = []
        if not self.min_dphi > 0:
            out.append(f"phi' not positive (min {self.min_dphi:.3g})")
        if self.node_count != 1:
            out.append(f"phi has {self.node_count} nodes, need exactly 1")
        return out

    def as_dict(self):
        return {
            "passed": self.passed,
            "min_dphi": float(self.min_dphi),
            "node_count": int(self.node_count),
            "monotone": bool(self.monotone),
            "domain": list(self.domain),
            "samples": int(self.samples),
        }


def sign_changes(values) -> int:
    s = np.sign(np.asarray(values, dtype=float))
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


def check_admissible(g: GeneratorFunction, domain=DEFAULT_DOMAIN, samples: int = 2001):
    """Sample phi on ``domain``: phi' must stay positive and phi must have one node."""
    if samples < 3:
        raise ValueError("need at least 3 samples")
    x = np.linspace(domain[0], domain[1], samples)
    if isinstance(g, SinhFamily):
        # sign information is all that matters; avoid overflow at large |x|
        (p0, p1, _, _), J = g.scaled_derivs(x)
        with np.errstate(over="ignore"):
            dphi = p1 * np.exp(J * np.abs(x))
        phi = p0
    else:
        phi, dphi, _, _ = g.derivs(x)
    return AdmissibilityReport(
        min_dphi=float(np.min(dphi)),
        node_count=sign_changes(phi),
        monotone=bool(np.all(np.diff(phi) > 0)),
        domain=tuple(float(d) for d in domain),
        samples=samples,
    )
