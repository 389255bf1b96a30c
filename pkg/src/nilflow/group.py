"""Group-level geometry in exponential coordinates.

Points of the simply connected group are identified with their
logarithms, so the product is the Baker-Campbell-Hausdorff series, which
closes at the terms implemented here for step at most 3.  The
differential of exp and its inverse are the finite operator polynomials
Phi(ad w) = sum_k (-ad w)^k / (k+1)!  and its Neumann-series inverse.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from . import linalg


CHART_EXPONENTIAL = "exponential"
CHART_CATALOG = "catalog-coordinates"


class StepUnsupported(ValueError):
    """The closed product formula only covers step <= 3."""


@dataclass
class GroupElement:
    """Group point as a coordinate tuple in a named chart."""

    coords: tuple
    chart: str = CHART_EXPONENTIAL

    def __post_init__(self):
        self.coords = tuple(self.coords)
        if self.chart not in (CHART_EXPONENTIAL, CHART_CATALOG):
            raise ValueError("unknown chart %r" % self.chart)


@dataclass
class TangentPoint:
    """Phase-space point: base coordinates w, left-trivialized momentum y."""

    w: tuple
    y: tuple

    def __post_init__(self):
        self.w = tuple(self.w)
        self.y = tuple(self.y)


def _require_low_step(alg):
    step = alg.analyze().step
    if step > 3:
        raise StepUnsupported("product formula implemented for step <= 3, "
                              "algebra has step %d" % step)


def bch(alg, u, v):
    """log(exp u * exp v) for step <= 3."""
    _require_low_step(alg)
    uv = alg.bracket(u, v)
    out = [a + b + Fraction(1, 2) * c for a, b, c in zip(u, v, uv)]
    if alg.analyze().step >= 3:
        uuv = alg.bracket(u, uv)
        vvu = alg.bracket(v, alg.bracket(v, u))
        out = [x + Fraction(1, 12) * (a + b) for x, a, b in zip(out, uuv, vvu)]
    return out


def group_inverse(u):
    return [-x for x in u]


def _nilpotent_series(alg, w, coeff):
    """sum_k coeff(k) * (-ad w)^k, truncated when the power vanishes."""
    n = alg.dim
    neg_ad = linalg.mat_scale(alg.ad(w), Fraction(-1))
    out = linalg.mat_scale(linalg.identity(n), coeff(0))
    power = linalg.identity(n)
    for k in range(1, n + 2):
        power = linalg.mat_mul(power, neg_ad)
        if all(x == 0 for row in power for x in row):
            break
        out = linalg.mat_add(out, linalg.mat_scale(power, coeff(k)))
    return out


def adjoint_inverse(alg, w):
    """Matrix of Ad(exp(-w)) = exp(-ad w), a finite sum by nilpotency."""
    return _nilpotent_series(alg, w, lambda k: Fraction(1, math.factorial(k)))


def dexp_matrix(alg, w):
    """Phi(ad w): the differential of exp at w in left trivialization."""
    return _nilpotent_series(alg, w, lambda k: Fraction(1, math.factorial(k + 1)))


def dexp_inverse_matrix(alg, w):
    """Neumann-series inverse of Phi(ad w)."""
    n = alg.dim
    phi = dexp_matrix(alg, w)
    nil = linalg.mat_add(linalg.identity(n), linalg.mat_scale(phi, Fraction(-1)))
    out = linalg.identity(n)
    power = linalg.identity(n)
    for _ in range(n + 1):
        power = linalg.mat_mul(power, nil)
        if all(x == 0 for row in power for x in row):
            break
        out = linalg.mat_add(out, power)
    return out


def dexp_apply(alg, w, u):
    return linalg.mat_vec(dexp_matrix(alg, w), u)


def dexp_inverse_apply(alg, w, u):
    return linalg.mat_vec(dexp_inverse_matrix(alg, w), u)
