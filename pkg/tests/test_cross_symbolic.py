"""Recompute brackets with an independent sympy implementation and compare."""

from fractions import Fraction

import sympy

from nilflow.algebra import LieAlgebraDescriptor
from nilflow.geodesic import GeodesicField
from nilflow.integrals import (
    DerivationIntegral,
    Energy,
    FirstIntegral,
    Linear,
    Quadratic,
    RightInvariant,
)
from nilflow.poisson import PoissonEngine
from nilflow.ratpoly import RationalPolynomial
from nilflow.solvers import killing2_tensors


def _h3(metric=None):
    return LieAlgebraDescriptor(3, {(1, 2): {3: Fraction(1)}}, metric=metric)


def _free_23():
    structure = {
        (1, 2): {3: Fraction(1)},
        (1, 3): {4: Fraction(1)},
        (2, 3): {5: Fraction(1)},
    }
    return LieAlgebraDescriptor(5, structure)


def _symbols(n):
    ws = sympy.symbols("w1:%d" % (n + 1))
    ys = sympy.symbols("y1:%d" % (n + 1))
    return list(ws), list(ys)


def _to_sympy(poly, ws, ys):
    syms = ws + ys
    expr = sympy.Integer(0)
    for exps, coeff in poly.terms.items():
        term = sympy.Rational(coeff.numerator, coeff.denominator)
        for var, k in enumerate(exps):
            if k:
                term *= syms[var] ** k
        expr += term
    return sympy.expand(expr)


def _sym_ad(alg, vec):
    n = alg.dim
    m = sympy.zeros(n, n)
    for j in range(n):
        basis = [Fraction(int(k == j)) for k in range(n)]
        col = alg.bracket(vec, basis)
        for i in range(n):
            m[i, j] += _scalar(col[i])
    return m


def _scalar(x):
    if isinstance(x, Fraction):
        return sympy.Rational(x.numerator, x.denominator)
    return x


def _sym_bracket_vec(alg, a, b):
    """[a, b] for sympy coefficient vectors."""
    n = alg.dim
    out = [sympy.Integer(0)] * n
    for (i, j), targets in alg.structure.items():
        c = a[i - 1] * b[j - 1] - a[j - 1] * b[i - 1]
        for k, coeff in targets.items():
            out[k - 1] += _scalar(coeff) * c
    return out


def _independent_bracket(alg, f, g):
    """{f, g} assembled from scratch with sympy matrices."""
    n = alg.dim
    ws, ys = _symbols(n)
    gram = sympy.Matrix([[_scalar(c) for c in row] for row in alg.gram()])
    ginv = gram.inv()
    adw = _sym_ad(alg, ws)
    # Phi = sum (-ad w)^k / (k+1)!; nilpotent, so the series terminates
    phi = sympy.zeros(n, n)
    power = sympy.eye(n)
    k = 0
    while not power.is_zero_matrix:
        phi += power / sympy.factorial(k + 1)
        power = (-adw) * power
        k += 1
    psi = phi.inv()

    def grads(h):
        expr = _to_sympy(h.as_polynomial(), ws, ys)
        dw = sympy.Matrix([sympy.diff(expr, s) for s in ws])
        dy = sympy.Matrix([sympy.diff(expr, s) for s in ys])
        u = ginv * psi.T * dw
        v = ginv * dy
        return u, v

    uf, vf = grads(f)
    ug, vg = grads(g)
    yvec = sympy.Matrix(ys)
    comm = sympy.Matrix(_sym_bracket_vec(alg, list(vf), list(vg)))
    expr = (uf.T * gram * vg - ug.T * gram * vf - yvec.T * gram * comm)[0, 0]
    return sympy.expand(expr)


def _engine_bracket_sympy(alg, f, g):
    poly = PoissonEngine(alg).bracket(f, g).poly
    ws, ys = _symbols(alg.dim)
    return _to_sympy(poly, ws, ys)


def _e(n, i):
    return [Fraction(int(k == i)) for k in range(1, n + 1)]


def test_right_invariant_pair_three_step():
    alg = _free_23()
    f = RightInvariant(alg, _e(5, 1))
    g = RightInvariant(alg, _e(5, 2))
    assert sympy.simplify(_engine_bracket_sympy(alg, f, g)
                          - _independent_bracket(alg, f, g)) == 0


def test_derivation_linear_pair():
    alg = _h3()
    d = [[Fraction(0), Fraction(1), Fraction(0)],
         [Fraction(-1), Fraction(0), Fraction(0)],
         [Fraction(0), Fraction(0), Fraction(0)]]
    f = DerivationIntegral(alg, d)
    g = Linear(alg, [Fraction(0), Fraction(2), Fraction(-3)])
    assert sympy.simplify(_engine_bracket_sympy(alg, f, g)
                          - _independent_bracket(alg, f, g)) == 0


def test_energy_right_invariant_with_metric():
    g = [[Fraction(1), Fraction(0), Fraction(0)],
         [Fraction(0), Fraction(2), Fraction(1)],
         [Fraction(0), Fraction(1), Fraction(3)]]
    alg = _h3(metric=g)
    f = Energy(alg)
    h = RightInvariant(alg, _e(3, 1))
    assert sympy.simplify(_engine_bracket_sympy(alg, f, h)
                          - _independent_bracket(alg, f, h)) == 0


def test_killing_tensors_commute_with_energy_symbolically():
    alg = _h3()
    e = Energy(alg)
    for s in killing2_tensors(alg):
        gs = Quadratic(alg, s)
        assert sympy.simplify(_independent_bracket(alg, e, gs)) == 0


class _Coordinate(FirstIntegral):
    kind = "coordinate"

    def __init__(self, alg, index):
        super().__init__(alg, label="x%d" % index)
        self._index = index

    def _expand(self):
        return RationalPolynomial.variable(2 * self.alg.dim, self._index)


def test_flow_field_is_hamiltonian():
    # d(coordinate)/dt along the flow equals {coordinate, E}
    for alg in (_h3(), _free_23()):
        n = alg.dim
        eng = PoissonEngine(alg)
        e = Energy(alg)
        field = GeodesicField(alg)
        w = [0.31, -0.42, 0.55, 0.12, -0.73][:n]
        y = [1.21, 0.44, -0.95, 0.61, 1.52][:n]
        import numpy as np
        rhs = field(np.array([w + y]))[0]
        for i in range(2 * n):
            br = eng.bracket(_Coordinate(alg, i), e).poly
            val = float(br.evaluate([Fraction(repr(v)) for v in w + y]))
            assert abs(val - rhs[i]) < 1e-12, "slot %d" % i
