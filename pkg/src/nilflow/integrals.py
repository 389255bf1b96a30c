"""Candidate first integrals of the geodesic flow.

Every integral is bound to an algebra at construction and exposes three
views: a numeric ``value`` at a phase-space point, a numeric ``gradient``
(U, V) in the left trivialization, and, when the function is polynomial
in (w, y), an exact ``as_polynomial`` expansion in 2n variables.

Constructors validate what can be validated: a quadratic form must be
symmetric for the metric, a derivation must actually satisfy the product
rule and be skew for the metric.  The ``check=False`` escape hatch on
DerivationIntegral stores a matrix without validation so that defective
reference data can still be evaluated and reported against.
"""

import math
from fractions import Fraction

from . import group, linalg
from .algebra import StepMismatch
from .linalg import frac
from .ratpoly import PolyVector, RationalPolynomial


class NonPolynomialVariant(TypeError):
    """The integral has no polynomial expansion in (w, y)."""


class NotADerivation(ValueError):
    def __init__(self, pair, defect):
        self.pair = pair
        self.defect = defect
        super().__init__(
            "matrix fails the derivation identity on basis pair (e%d, e%d): "
            "defect %s" % (pair[0], pair[1], defect))


class NotGramSkew(ValueError):
    """The matrix is not skew-adjoint for the metric."""


def _wy(point):
    if isinstance(point, group.TangentPoint):
        return list(point.w), list(point.y)
    w, y = point
    return list(w), list(y)


def _vector_label(x):
    hits = [i for i, c in enumerate(x) if c != 0]
    if len(hits) == 1 and x[hits[0]] == 1:
        return "e%d" % (hits[0] + 1)
    return "[" + ",".join(str(c) for c in x) + "]"


# -- polynomial helpers -------------------------------------------------

def _poly_zero_vec(alg):
    nv = 2 * alg.dim
    return PolyVector([RationalPolynomial.zero(nv) for _ in range(alg.dim)])


def _w_vec(alg):
    nv = 2 * alg.dim
    return PolyVector([RationalPolynomial.variable(nv, i) for i in range(alg.dim)])


def _y_vec(alg):
    nv = 2 * alg.dim
    return PolyVector([RationalPolynomial.variable(nv, alg.dim + i)
                       for i in range(alg.dim)])


def _const_vec(alg, x):
    nv = 2 * alg.dim
    return PolyVector([RationalPolynomial.constant(nv, c) for c in x])


def poly_bracket(alg, a, b):
    """[a, b] for PolyVectors of coefficient polynomials."""
    nv = 2 * alg.dim
    out = [RationalPolynomial.zero(nv) for _ in range(alg.dim)]
    for (i, j), targets in alg.structure.items():
        c = a[i - 1] * b[j - 1] - a[j - 1] * b[i - 1]
        if c:
            for k, coeff in targets.items():
                out[k - 1] = out[k - 1] + c * coeff
    return PolyVector(out)


def _mat_polyvec(mat, pv):
    """Rational matrix applied to a PolyVector."""
    nv = pv[0].nvars
    out = []
    for row in mat:
        acc = RationalPolynomial.zero(nv)
        for c, p in zip(row, pv.components):
            if c != 0:
                acc = acc + p * c
        out.append(acc)
    return PolyVector(out)


def _adjoint_inverse_poly(alg, x):
    """Ad(exp(-w)) x with w symbolic: sum_k (-1)^k/k! ad(w)^k x."""
    w = _w_vec(alg)
    term = _const_vec(alg, x)
    out = term
    k = 1
    while True:
        term = poly_bracket(alg, w, term)
        if term.is_zero() or k > alg.dim:
            break
        out = out + term.scale(Fraction((-1) ** k, math.factorial(k)))
        k += 1
    return out


def _dexp_poly(alg, u_poly):
    """Phi(ad w) u with w symbolic: sum_k (-1)^k/(k+1)! ad(w)^k u."""
    w = _w_vec(alg)
    term = u_poly
    out = term
    k = 1
    while True:
        term = poly_bracket(alg, w, term)
        if term.is_zero() or k > alg.dim:
            break
        out = out + term.scale(Fraction((-1) ** k, math.factorial(k + 1)))
        k += 1
    return out


def _gram_dot(alg, a, b):
    return a.dot(b, gram=alg.metric)


# -- the integral family ------------------------------------------------

class FirstIntegral:
    """Base class; concrete kinds set ``kind`` and the three views."""

    kind = None

    def __init__(self, alg, label=None):
        self.alg = alg
        self.label = label
        self._poly = None

    def value(self, point):
        raise NotImplementedError

    def gradient(self, point):
        raise NotImplementedError

    def as_polynomial(self):
        if self._poly is None:
            self._poly = self._expand()
        return self._poly

    def _expand(self):
        raise NotImplementedError

    def spec_string(self):
        return self.label if self.label is not None else self._default_label()

    def _default_label(self):
        return self.kind

    def __repr__(self):
        return "<%s %s>" % (type(self).__name__, self.spec_string())


class Energy(FirstIntegral):
    """E = (1/2) <Y, Y>, the Hamiltonian itself."""

    kind = "energy"

    def value(self, point):
        _, y = _wy(point)
        return self.alg.inner(y, y) / 2

    def gradient(self, point):
        _, y = _wy(point)
        return [0] * self.alg.dim, list(y)

    def _expand(self):
        y = _y_vec(self.alg)
        return _gram_dot(self.alg, y, y) * Fraction(1, 2)

    def _default_label(self):
        return "E"


class Linear(FirstIntegral):
    """f_X = <Y, X> for a fixed direction X (an integral when X is central)."""

    kind = "linear"

    def __init__(self, alg, x, label=None):
        super().__init__(alg, label)
        self.x = [frac(c) for c in x]
        if len(self.x) != alg.dim:
            raise ValueError("direction has length %d, algebra has dimension %d"
                             % (len(self.x), alg.dim))

    def value(self, point):
        _, y = _wy(point)
        return self.alg.inner(y, self.x)

    def gradient(self, point):
        return [0] * self.alg.dim, list(self.x)

    def _expand(self):
        return _gram_dot(self.alg, _y_vec(self.alg), _const_vec(self.alg, self.x))

    def _default_label(self):
        return "lin:%s" % _vector_label(self.x)


class Quadratic(FirstIntegral):
    """g_S = (1/2) <Y, S Y> for a metric-symmetric operator S."""

    kind = "quadratic"

    def __init__(self, alg, s, label=None):
        super().__init__(alg, label)
        self.s = [[frac(c) for c in row] for row in s]
        gs = linalg.mat_mul(alg.gram(), self.s)
        if linalg.transpose(gs) != gs:
            raise ValueError("quadratic operator is not symmetric for the metric")

    def value(self, point):
        _, y = _wy(point)
        return self.alg.inner(y, linalg.mat_vec(self.s, y)) / 2

    def gradient(self, point):
        _, y = _wy(point)
        return [0] * self.alg.dim, linalg.mat_vec(self.s, y)

    def _expand(self):
        y = _y_vec(self.alg)
        return _gram_dot(self.alg, y, _mat_polyvec(self.s, y)) * Fraction(1, 2)

    def _default_label(self):
        return "quad:S"


class RightInvariant(FirstIntegral):
    """f_{X*} = <Ad(p^{-1}) X, Y>, the momentum of right translation."""

    kind = "right-invariant"

    def __init__(self, alg, x, label=None):
        super().__init__(alg, label)
        self.x = [frac(c) for c in x]
        if len(self.x) != alg.dim:
            raise ValueError("direction has length %d, algebra has dimension %d"
                             % (len(self.x), alg.dim))

    def _transported(self, w):
        return linalg.mat_vec(group.adjoint_inverse(self.alg, w), self.x)

    def value(self, point):
        w, y = _wy(point)
        return self.alg.inner(self._transported(w), y)

    def gradient(self, point):
        w, y = _wy(point)
        a = self._transported(w)
        u = linalg.mat_vec(self.alg.ad_transpose(a), y)
        return u, a

    def _expand(self):
        a = _adjoint_inverse_poly(self.alg, self.x)
        return _gram_dot(self.alg, a, _y_vec(self.alg))

    def _default_label(self):
        return "right:%s" % _vector_label(self.x)


class DerivationIntegral(FirstIntegral):
    """f_{D*} = <dexp_w(D w), Y> for a metric-skew derivation D."""

    kind = "derivation"

    def __init__(self, alg, d, check=True, label=None):
        super().__init__(alg, label)
        self.d = [[frac(c) for c in row] for row in d]
        self.checked = bool(check)
        if check:
            validate_derivation(alg, self.d)

    def value(self, point):
        w, y = _wy(point)
        b = group.dexp_apply(self.alg, w, linalg.mat_vec(self.d, w))
        return self.alg.inner(b, y)

    def gradient(self, point):
        alg = self.alg
        w, y = _wy(point)
        dw = linalg.mat_vec(self.d, w)
        u = linalg.vec_sub(linalg.mat_vec(alg.ad_transpose(dw), y),
                           linalg.mat_vec(self.d, y))
        if alg.analyze().step >= 3:
            dww = alg.bracket(dw, w)
            u = linalg.vec_add(u, linalg.vec_scale(
                linalg.mat_vec(alg.ad_transpose(dww), y), Fraction(1, 2)))
        v = group.dexp_apply(alg, w, dw)
        return u, v

    def _expand(self):
        b = _dexp_poly(self.alg, _mat_polyvec(self.d, _w_vec(self.alg)))
        return _gram_dot(self.alg, b, _y_vec(self.alg))

    def _default_label(self):
        return "der:D"


def validate_derivation(alg, d):
    """Raise unless d is a derivation that is skew for the metric."""
    n = alg.dim
    basis = linalg.identity(n)
    cols = [linalg.mat_vec(d, b) for b in basis]
    for i in range(n):
        for j in range(i + 1, n):
            lhs = linalg.mat_vec(d, alg.bracket(basis[i], basis[j]))
            rhs = linalg.vec_add(alg.bracket(cols[i], basis[j]),
                                 alg.bracket(basis[i], cols[j]))
            defect = linalg.vec_sub(lhs, rhs)
            if not linalg.is_zero_vec(defect):
                raise NotADerivation((i + 1, j + 1), defect)
    gd = linalg.mat_mul(alg.gram(), d)
    if linalg.transpose(gd) != linalg.mat_scale(gd, Fraction(-1)):
        raise NotGramSkew("matrix is not skew-adjoint for the metric")


class Butler(FirstIntegral):
    """g_i = <V, j(Z)^{2i} V> on a 2-step algebra, Y = V + Z split."""

    kind = "butler"

    def __init__(self, alg, index, label=None):
        super().__init__(alg, label)
        self.index = int(index)
        if self.index < 0:
            raise ValueError("index must be >= 0")
        analysis = alg.analyze()
        if analysis.step != 2:
            raise StepMismatch(
                "this family needs a 2-step algebra, step is %d" % analysis.step)
        self.v_basis = analysis.v_complement
        self.z_basis = analysis.center_basis
        cols = self.v_basis + self.z_basis
        if len(cols) != alg.dim:
            raise ValueError("complement and center do not span")
        bmat = [[cols[j][i] for j in range(alg.dim)] for i in range(alg.dim)]
        self._coords = linalg.inverse(bmat)
        self.gv = [[alg.inner(a, b) for b in self.v_basis] for a in self.v_basis]
        self._j_parts = [alg.j_map(z)[0] for z in self.z_basis]

    def _split(self, y):
        c = linalg.mat_vec(self._coords, y)
        dv = len(self.v_basis)
        return c[:dv], c[dv:]

    def _jmat(self, zc):
        dv = len(self.v_basis)
        out = [[0] * dv for _ in range(dv)]
        for coeff, part in zip(zc, self._j_parts):
            for a in range(dv):
                for b in range(dv):
                    out[a][b] = out[a][b] + coeff * part[a][b]
        return out

    def _ambient(self, vc):
        out = [0] * self.alg.dim
        for c, b in zip(vc, self.v_basis):
            for k in range(self.alg.dim):
                out[k] = out[k] + c * b[k]
        return out

    def value(self, point):
        _, y = _wy(point)
        vc, zc = self._split(y)
        jm = self._jmat(zc)
        m = list(vc)
        for _ in range(2 * self.index):
            m = linalg.mat_vec(jm, m)
        return linalg.inner(vc, linalg.mat_vec(self.gv, m))

    def gradient(self, point):
        alg = self.alg
        _, y = _wy(point)
        vc, zc = self._split(y)
        jm = self._jmat(zc)
        powers = [list(vc)]
        for _ in range(2 * self.index):
            powers.append(linalg.mat_vec(jm, powers[-1]))
        v = linalg.vec_scale(self._ambient(powers[2 * self.index]), 2)
        for j in range(2 * self.index):
            term = alg.bracket(self._ambient(powers[j]),
                               self._ambient(powers[2 * self.index - 1 - j]))
            sign = (-1) ** (j + 1)
            v = linalg.vec_add(v, linalg.vec_scale(term, sign))
        return [0] * alg.dim, v

    def _expand(self):
        alg = self.alg
        nv = 2 * alg.dim
        y = _y_vec(alg)
        coords = _mat_polyvec(self._coords, y)
        dv = len(self.v_basis)
        vc = PolyVector(coords.components[:dv])
        zc = coords.components[dv:]
        jm = [[RationalPolynomial.zero(nv) for _ in range(dv)] for _ in range(dv)]
        for zpoly, part in zip(zc, self._j_parts):
            for a in range(dv):
                for b in range(dv):
                    if part[a][b] != 0:
                        jm[a][b] = jm[a][b] + zpoly * part[a][b]
        m = vc
        for _ in range(2 * self.index):
            m = PolyVector([
                sum((jm[a][b] * m[b] for b in range(dv)),
                    RationalPolynomial.zero(nv))
                for a in range(dv)])
        return vc.dot(m, gram=self.gv)

    def _default_label(self):
        return "butler:%d" % self.index


class QuotientInduced(FirstIntegral):
    """exp(-1/den^2) * sin(2 pi num / den), descending to lattice quotients."""

    kind = "quotient-induced"

    def __init__(self, num, den, label=None):
        if num.alg is not den.alg:
            raise ValueError("numerator and denominator use different algebras")
        super().__init__(num.alg, label)
        self.num = num
        self.den = den

    def value(self, point):
        d = float(self.den.value(point))
        q = float(self.num.value(point)) / d
        return math.exp(-1.0 / d ** 2) * math.sin(2 * math.pi * q)

    def gradient(self, point):
        d = float(self.den.value(point))
        fn = float(self.num.value(point))
        un, vn = self.num.gradient(point)
        ud, vd = self.den.gradient(point)
        h = math.exp(-1.0 / d ** 2)
        hp = h * 2.0 / d ** 3
        s = math.sin(2 * math.pi * fn / d)
        c = math.cos(2 * math.pi * fn / d) * 2 * math.pi
        cn = h * c / d
        cd = hp * s - h * c * fn / d ** 2
        u = [cn * float(a) + cd * float(b) for a, b in zip(un, ud)]
        v = [cn * float(a) + cd * float(b) for a, b in zip(vn, vd)]
        return u, v

    def _expand(self):
        raise NonPolynomialVariant("quotient-induced functions are not polynomial")

    def _default_label(self):
        return "quot(%s / %s)" % (self.num.spec_string(), self.den.spec_string())


# -- the little spec-string grammar ------------------------------------

def basis_vector(alg, ref, names=None):
    """Resolve 'e4' or a registered alias to a basis coefficient vector."""
    idx = None
    if names and ref in names:
        idx = names[ref]
    elif ref.startswith("e"):
        try:
            idx = int(ref[1:])
        except ValueError:
            idx = None
    if idx is None or not (1 <= idx <= alg.dim):
        raise ValueError("unknown basis reference %r" % ref)
    out = [Fraction(0)] * alg.dim
    out[idx - 1] = Fraction(1)
    return out


def parse_integral(alg, text, names=None, quad_refs=None, der_refs=None):
    """Build an integral from its compact string form.

    Grammar: ``E``, ``lin:e4``, ``right:e2``, ``quad:NAME``, ``der:NAME``,
    ``butler:1``, ``quot(SPEC / SPEC)``.  NAME references are resolved
    through the optional quad_refs / der_refs dictionaries.
    """
    text = text.strip()
    if text == "E":
        return Energy(alg, label="E")
    if text.startswith("quot(") and text.endswith(")"):
        inner_text = text[5:-1]
        depth = 0
        for pos in range(len(inner_text) - 2):
            ch = inner_text[pos]
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif depth == 0 and inner_text[pos:pos + 3] == " / ":
                num = parse_integral(alg, inner_text[:pos], names, quad_refs, der_refs)
                den = parse_integral(alg, inner_text[pos + 3:], names, quad_refs, der_refs)
                return QuotientInduced(num, den, label=text)
        raise ValueError("malformed quotient spec %r" % text)
    if ":" not in text:
        raise ValueError("malformed integral spec %r" % text)
    head, ref = text.split(":", 1)
    if head == "lin":
        return Linear(alg, basis_vector(alg, ref, names), label=text)
    if head == "right":
        return RightInvariant(alg, basis_vector(alg, ref, names), label=text)
    if head == "quad":
        if not quad_refs or ref not in quad_refs:
            raise ValueError("unknown quadratic reference %r" % ref)
        return Quadratic(alg, quad_refs[ref], label=text)
    if head == "der":
        if not der_refs or ref not in der_refs:
            raise ValueError("unknown derivation reference %r" % ref)
        matrix, check = der_refs[ref]
        return DerivationIntegral(alg, matrix, check=check, label=text)
    if head == "butler":
        return Butler(alg, int(ref), label=text)
    raise ValueError("unknown integral kind %r" % head)
