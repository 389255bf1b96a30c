"""Exact Poisson brackets on the left-trivialized phase space.

For f with gradient (U, V) and g with gradient (U', V'),

    {f, g}(p, Y) = <U, V'> - <U', V> - <Y, [V, V']>.

Gradients are assembled from the polynomial expansion of each integral:
V = G^{-1} grad_y f and U = G^{-1} Psi(ad w)^T grad_w f, where Psi is the
inverse of the differential of exp.  This makes the bracket exact and
independent of any closed-form gradient the integral may also carry.
"""

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .integrals import (DerivationIntegral, Energy, QuotientInduced,
                        RightInvariant, _mat_polyvec, _w_vec, _y_vec,
                        poly_bracket)
from .ratpoly import PolyVector, RationalPolynomial


@dataclass
class BracketResult:
    poly: RationalPolynomial
    is_zero: bool
    matched_integral: str = None


@dataclass
class IntegralCheck:
    ok: bool
    bracket: RationalPolynomial
    witness: tuple = None
    detail: str = ""


@dataclass
class CriterionCheck:
    """One involution criterion: bracket test vs. algebraic condition."""

    bracket_is_zero: bool
    condition_holds: bool

    @property
    def agrees(self):
        return self.bracket_is_zero == self.condition_holds


def _poly_mat_identity(nvars, n):
    return [[RationalPolynomial.constant(nvars, 1) if i == j
             else RationalPolynomial.zero(nvars) for j in range(n)]
            for i in range(n)]


def _poly_mat_mul(a, b):
    n = len(a)
    nvars = a[0][0].nvars
    out = [[RationalPolynomial.zero(nvars) for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for k in range(n):
            if a[i][k]:
                for j in range(n):
                    if b[k][j]:
                        out[i][j] = out[i][j] + a[i][k] * b[k][j]
    return out


def _poly_mat_is_zero(a):
    return all(p.is_zero for row in a for p in row)


def _poly_mat_apply(a, pv):
    n = len(a)
    nvars = a[0][0].nvars
    out = []
    for i in range(n):
        acc = RationalPolynomial.zero(nvars)
        for j in range(n):
            if a[i][j] and pv[j]:
                acc = acc + a[i][j] * pv[j]
        out.append(acc)
    return PolyVector(out)


class PoissonEngine:
    """Bracket evaluator with cached symbolic dexp data for one algebra."""

    def __init__(self, alg):
        self.alg = alg
        self.n = alg.dim
        self.nvars = 2 * alg.dim
        self._grad_cache = {}
        self._psi_t = self._build_psi_transpose()

    def _build_psi_transpose(self):
        n = self.n
        nvars = self.nvars
        w = _w_vec(self.alg)
        ad_w = [[RationalPolynomial.zero(nvars) for _ in range(n)] for _ in range(n)]
        for j, col in enumerate(linalg.identity(n)):
            image = poly_bracket(self.alg, w, PolyVector(
                [RationalPolynomial.constant(nvars, c) for c in col]))
            for i in range(n):
                ad_w[i][j] = image[i]
        # Phi(ad w) = sum_k (-ad w)^k / (k+1)!
        phi = _poly_mat_identity(nvars, n)
        power = _poly_mat_identity(nvars, n)
        k = 1
        while True:
            power = _poly_mat_mul(power, ad_w)
            if _poly_mat_is_zero(power) or k > n + 1:
                break
            coeff = Fraction((-1) ** k, math.factorial(k + 1))
            for i in range(n):
                for j in range(n):
                    phi[i][j] = phi[i][j] + power[i][j] * coeff
            k += 1
        # Psi = Phi^{-1} via the Neumann series of I - Phi (nilpotent)
        nil = _poly_mat_identity(nvars, n)
        for i in range(n):
            for j in range(n):
                nil[i][j] = nil[i][j] - phi[i][j]
        psi = _poly_mat_identity(nvars, n)
        power = _poly_mat_identity(nvars, n)
        for _ in range(n + 1):
            power = _poly_mat_mul(power, nil)
            if _poly_mat_is_zero(power):
                break
            for i in range(n):
                for j in range(n):
                    psi[i][j] = psi[i][j] + power[i][j]
        return [[psi[j][i] for j in range(n)] for i in range(n)]

    def gradient_polys(self, f):
        """Exact (U, V) PolyVectors from the value polynomial of f."""
        # The cache entry keeps a reference to f so the id stays unique.
        key = id(f)
        if key in self._grad_cache:
            return self._grad_cache[key][1:]
        fp = f.as_polynomial()
        n = self.n
        grad_w = PolyVector([fp.partial(i) for i in range(n)])
        grad_y = PolyVector([fp.partial(n + i) for i in range(n)])
        u = _poly_mat_apply(self._psi_t, grad_w)
        ginv = self.alg.gram_inverse()
        if self.alg.metric is not None:
            u = _mat_polyvec(ginv, u)
            v = _mat_polyvec(ginv, grad_y)
        else:
            v = grad_y
        self._grad_cache[key] = (f, u, v)
        return u, v

    def bracket(self, f, g, candidates=None):
        uf, vf = self.gradient_polys(f)
        ug, vg = self.gradient_polys(g)
        gram = self.alg.metric
        poly = uf.dot(vg, gram=gram) - ug.dot(vf, gram=gram)
        poly = poly - _y_vec(self.alg).dot(poly_bracket(self.alg, vf, vg), gram=gram)
        matched = None
        if candidates and not poly.is_zero:
            matched = self._match(poly, candidates)
        return BracketResult(poly=poly, is_zero=poly.is_zero, matched_integral=matched)

    def _match(self, poly, candidates):
        for cand in candidates:
            try:
                cp = cand.as_polynomial()
            except Exception:
                continue
            if poly == cp:
                return cand.spec_string()
            if poly == -cp:
                return "-" + cand.spec_string()
        return None

    def is_first_integral(self, f):
        """{f, E} == 0, with an exact witness point when it is not."""
        if isinstance(f, QuotientInduced):
            num = self.is_first_integral(f.num)
            den = self.is_first_integral(f.den)
            bad = None if (num.ok and den.ok) else (num if not num.ok else den)
            return IntegralCheck(
                ok=num.ok and den.ok,
                bracket=bad.bracket if bad else num.bracket,
                witness=bad.witness if bad else None,
                detail="checked through numerator and denominator")
        res = self.bracket(f, Energy(self.alg))
        witness = None if res.is_zero else _nonzero_point(res.poly)
        return IntegralCheck(ok=res.is_zero, bracket=res.poly, witness=witness)

    def involution_table(self, fs, candidates=None):
        out = []
        for i in range(len(fs)):
            for j in range(i + 1, len(fs)):
                out.append((i, j, self.bracket(fs[i], fs[j], candidates=candidates)))
        return out


def _nonzero_point(poly):
    """A rational point where the (nonzero) polynomial does not vanish."""
    rnd = random.Random(20240817)
    for _ in range(500):
        values = [Fraction(rnd.randint(-9, 9), rnd.randint(1, 3))
                  for _ in range(poly.nvars)]
        if poly.evaluate(values) != 0:
            return tuple(values)
    return None


# -- homomorphism and injectivity of the momentum assignment ------------

@dataclass
class IsoReport:
    ok: bool
    identity_failures: list
    checked_pairs: int
    injectivity_ok: bool
    injectivity_rank: int
    injectivity_expected: int


def verify_iso_homomorphism(alg, deriv_basis=None, engine=None):
    """Check the bracket identities and injectivity of D, X -> functions.

    Identities, over a basis of the metric-skew derivation space and the
    algebra basis:
        {f_{D1*}, f_{D2*}} = f_{([D1,D2])*}
        {f_{D*}, f_{X*}}   = f_{(D X)*}
        {f_{X1*}, f_{X2*}} = f_{([X1,X2])*}
    Injectivity is a rank computation on the linear map sending (D, X) to
    the coefficient vector of the value polynomial of f_{D*} + f_{X*}.
    """
    if deriv_basis is None:
        from .solvers import skew_derivations
        deriv_basis = skew_derivations(alg)
    if engine is None:
        engine = PoissonEngine(alg)
    n = alg.dim
    basis = linalg.identity(n)
    failures = []
    checked = 0

    d_ints = [DerivationIntegral(alg, d) for d in deriv_basis]
    x_ints = [RightInvariant(alg, x) for x in basis]

    for a in range(len(deriv_basis)):
        for b in range(a + 1, len(deriv_basis)):
            comm = linalg.mat_add(
                linalg.mat_mul(deriv_basis[a], deriv_basis[b]),
                linalg.mat_scale(
                    linalg.mat_mul(deriv_basis[b], deriv_basis[a]), Fraction(-1)))
            lhs = engine.bracket(d_ints[a], d_ints[b]).poly
            rhs = DerivationIntegral(alg, comm).as_polynomial()
            checked += 1
            if lhs != rhs:
                failures.append("{D%d, D%d} != (D-commutator)*" % (a + 1, b + 1))
    for a in range(len(deriv_basis)):
        for k in range(n):
            image = linalg.mat_vec(deriv_basis[a], basis[k])
            lhs = engine.bracket(d_ints[a], x_ints[k]).poly
            rhs = RightInvariant(alg, image).as_polynomial()
            checked += 1
            if lhs != rhs:
                failures.append("{D%d, e%d} != (D e%d)*" % (a + 1, k + 1, k + 1))
    for k in range(n):
        for m in range(k + 1, n):
            lhs = engine.bracket(x_ints[k], x_ints[m]).poly
            rhs = RightInvariant(alg, alg.bracket(basis[k], basis[m])).as_polynomial()
            checked += 1
            if lhs != rhs:
                failures.append("{e%d*, e%d*} != [e%d, e%d]*" % (k + 1, m + 1, k + 1, m + 1))

    # injectivity: coefficient vectors of the generating functions
    monomials = {}
    rows = []
    for f in d_ints + x_ints:
        rows.append(f.as_polynomial())
    for poly in rows:
        for e in poly.terms:
            monomials.setdefault(e, len(monomials))
    matrix = []
    for poly in rows:
        row = [Fraction(0)] * len(monomials)
        for e, c in poly.terms.items():
            row[monomials[e]] = c
        matrix.append(row)
    expected = len(deriv_basis) + n
    got = linalg.rank(matrix) if matrix else 0
    inj_ok = got == expected

    return IsoReport(ok=not failures and inj_ok, identity_failures=failures,
                     checked_pairs=checked, injectivity_ok=inj_ok,
                     injectivity_rank=got, injectivity_expected=expected)


# -- involution criteria ------------------------------------------------

def _gram_antisymmetric(alg, m):
    gm = linalg.mat_mul(alg.gram(), m)
    return linalg.transpose(gm) == linalg.mat_scale(gm, Fraction(-1))


def criterion_linear_linear(engine, fu, fv):
    """{f_U, f_V} = 0 iff [U, V] = 0."""
    res = engine.bracket(fu, fv)
    cond = linalg.is_zero_vec(engine.alg.bracket(fu.x, fv.x))
    return CriterionCheck(res.is_zero, cond)


def criterion_linear_quadratic(engine, fu, gs):
    """{f_U, g_S} = 0 iff ad(U) S is skew for the metric."""
    res = engine.bracket(fu, gs)
    m = linalg.mat_mul(engine.alg.ad(fu.x), gs.s)
    return CriterionCheck(res.is_zero, _gram_antisymmetric(engine.alg, m))


def criterion_derivation_linear(engine, fd, fu):
    """{f_{D*}, f_U} = 0 iff D U = 0."""
    res = engine.bracket(fd, fu)
    cond = linalg.is_zero_vec(linalg.mat_vec(fd.d, fu.x))
    return CriterionCheck(res.is_zero, cond)


def criterion_derivation_quadratic(engine, fd, gs):
    """{f_{D*}, g_S} = 0 iff D S is skew for the metric."""
    res = engine.bracket(fd, gs)
    m = linalg.mat_mul(fd.d, gs.s)
    return CriterionCheck(res.is_zero, _gram_antisymmetric(engine.alg, m))
