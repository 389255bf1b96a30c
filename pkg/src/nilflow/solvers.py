"""Linear solvers for symmetry spaces and rank scans for independence.

The two symmetry spaces are computed exactly as nullspaces:

* metric-skew derivations: D = G^{-1} A with A antisymmetric, subject to
  the product rule on basis pairs;
* degree-2 Killing tensors: symmetric S with <Y, [S Y, Y]> identically
  zero, obtained by collecting the coefficients of the cubic.

``killing2_structured`` solves the same problem through the splitting
conditions of the 2- and 3-step normal forms, which gives an independent
route whose span must agree with the direct cubic computation.
"""

import os

import numpy as np

from fractions import Fraction

from . import linalg
from .integrals import QuotientInduced
from .ratpoly import PolyVector, RationalPolynomial


DEFAULT_SAMPLES = 200
SINGULAR_THRESHOLD = 1e-10


def _sample_count(nsamples):
    if nsamples is not None:
        return int(nsamples)
    env = os.environ.get("NILFLOW_SAMPLES")
    return int(env) if env else DEFAULT_SAMPLES


def _skew_parameter_basis(alg):
    """Basis of metric-skew matrices: D = G^{-1} A, A antisymmetric."""
    n = alg.dim
    ginv = alg.gram_inverse()
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            a = linalg.zeros(n, n)
            a[i][j] = Fraction(1)
            a[j][i] = Fraction(-1)
            out.append(linalg.mat_mul(ginv, a) if alg.metric is not None else a)
    return out


def _symmetric_parameter_basis(alg):
    """Basis of metric-symmetric matrices: S = G^{-1} B, B symmetric."""
    n = alg.dim
    ginv = alg.gram_inverse()
    out = []
    for i in range(n):
        for j in range(i, n):
            b = linalg.zeros(n, n)
            b[i][j] = Fraction(1)
            b[j][i] = Fraction(1)
            out.append(linalg.mat_mul(ginv, b) if alg.metric is not None else b)
    return out


def _solve_in_parameter_space(parameter_basis, equation_rows):
    """Nullspace coordinates -> concrete matrices."""
    if not parameter_basis:
        return []
    if not equation_rows:
        coeffs = linalg.nullspace([], ncols=len(parameter_basis))
    else:
        coeffs = linalg.nullspace(equation_rows, ncols=len(parameter_basis))
    out = []
    n = len(parameter_basis[0])
    for combo in coeffs:
        m = linalg.zeros(n, n)
        for c, base in zip(combo, parameter_basis):
            if c != 0:
                m = linalg.mat_add(m, linalg.mat_scale(base, c))
        out.append(m)
    return out


def skew_derivations(alg):
    """Basis of the space of metric-skew derivations."""
    n = alg.dim
    params = _skew_parameter_basis(alg)
    basis = linalg.identity(n)
    rows = []
    # one equation block per basis pair (i, j): D[ei,ej] = [D ei, ej] + [ei, D ej]
    per_param = []
    for d in params:
        cols = [linalg.mat_vec(d, b) for b in basis]
        block = []
        for i in range(n):
            for j in range(i + 1, n):
                lhs = linalg.mat_vec(d, alg.bracket(basis[i], basis[j]))
                rhs = linalg.vec_add(alg.bracket(cols[i], basis[j]),
                                     alg.bracket(basis[i], cols[j]))
                block.extend(linalg.vec_sub(lhs, rhs))
        per_param.append(block)
    if per_param:
        nrows = len(per_param[0])
        rows = [[per_param[p][r] for p in range(len(params))] for r in range(nrows)]
    return _solve_in_parameter_space(params, rows)


def _cubic_rows(alg, params, vectors):
    """Coefficient rows of <X, [S X, X]> over X in span(vectors)."""
    m = len(vectors)
    nv = m  # polynomial in the span coordinates
    coords = [RationalPolynomial.variable(nv, i) for i in range(m)]
    x_poly = []
    for k in range(alg.dim):
        acc = RationalPolynomial.zero(nv)
        for c, vec in zip(coords, vectors):
            if vec[k] != 0:
                acc = acc + c * vec[k]
        x_poly.append(acc)
    x_vec = PolyVector(x_poly)

    def poly_bracket_local(a, b):
        out = [RationalPolynomial.zero(nv) for _ in range(alg.dim)]
        for (i, j), targets in alg.structure.items():
            c = a[i - 1] * b[j - 1] - a[j - 1] * b[i - 1]
            if c:
                for k, coeff in targets.items():
                    out[k - 1] = out[k - 1] + c * coeff
        return PolyVector(out)

    rows_by_monomial = []
    gram = alg.metric
    for s in params:
        sx = []
        for row in s:
            acc = RationalPolynomial.zero(nv)
            for c, p in zip(row, x_vec.components):
                if c != 0:
                    acc = acc + p * c
            sx.append(acc)
        cubic = x_vec.dot(poly_bracket_local(PolyVector(sx), x_vec), gram=gram)
        rows_by_monomial.append(cubic.terms)
    monomials = {}
    for terms in rows_by_monomial:
        for e in terms:
            monomials.setdefault(e, len(monomials))
    rows = []
    for r in range(len(monomials)):
        rows.append([Fraction(0)] * len(params))
    for p, terms in enumerate(rows_by_monomial):
        for e, c in terms.items():
            rows[monomials[e]][p] = c
    return rows


def killing2_tensors(alg):
    """Basis of symmetric S with <Y, [S Y, Y]> identically zero."""
    params = _symmetric_parameter_basis(alg)
    rows = _cubic_rows(alg, params, linalg.identity(alg.dim))
    return _solve_in_parameter_space(params, rows)


def killing2_structured(alg):
    """Same space through the splitting conditions of steps 1-3."""
    analysis = alg.analyze()
    step = analysis.step
    if step > 3:
        raise ValueError("structured conditions implemented for step <= 3")
    params = _symmetric_parameter_basis(alg)
    if step == 1:
        return _solve_in_parameter_space(params, [])

    vb = analysis.v_complement
    if step == 2:
        wb = analysis.center_basis
    else:
        wb = analysis.commutator_chain[0]

    rows = []
    per_param = [[] for _ in params]
    for p, s in enumerate(params):
        block = []
        # (i) [S X, X'] = [X, S X'] on the complement, diagonal included
        # (at a == b the defect is 2 [S v_a, v_a])
        for a in range(len(vb)):
            for b in range(a, len(vb)):
                sa = linalg.mat_vec(s, vb[a])
                sb = linalg.mat_vec(s, vb[b])
                defect = linalg.vec_sub(alg.bracket(sa, vb[b]),
                                        alg.bracket(vb[a], sb))
                block.extend(defect)
        # (ii) the induced operator on the distinguished ideal is skew
        for a in range(len(vb)):
            x = vb[a]
            sx = linalg.mat_vec(s, x)
            for c in range(len(wb)):
                for d in range(c, len(wb)):
                    def form(u, v):
                        t = alg.bracket(x, linalg.mat_vec(s, u))
                        if step == 3:
                            t = linalg.vec_sub(t, alg.bracket(sx, u))
                        return alg.inner(t, v)
                    block.append(form(wb[c], wb[d]) + form(wb[d], wb[c]))
        per_param[p] = block
    if params:
        nrows = len(per_param[0])
        rows = [[per_param[p][r] for p in range(len(params))] for r in range(nrows)]
    # (iii) for step 3: the cubic restricted to the distinguished ideal
    if step == 3:
        rows.extend(_cubic_rows(alg, params, wb))
    return _solve_in_parameter_space(params, rows)


def killing2_same_span(alg):
    direct = [sum(m, []) for m in killing2_tensors(alg)]
    struct = [sum(m, []) for m in killing2_structured(alg)]
    return linalg.span_equal(direct, struct)


# -- independence scans -------------------------------------------------

class ScanReport:
    def __init__(self, accepted, full_rank, target_rank, ranks):
        self.accepted = accepted
        self.full_rank = full_rank
        self.target_rank = target_rank
        self.ranks = ranks

    @property
    def fraction(self):
        return self.full_rank / self.accepted if self.accepted else 0.0

    def __repr__(self):
        return ("<ScanReport %d/%d full rank (%d)>"
                % (self.full_rank, self.accepted, self.target_rank))


def _accepts(integrals, predicate, w, y, den_min):
    if predicate is not None and not predicate(w, y):
        return False
    for f in integrals:
        if isinstance(f, QuotientInduced):
            if abs(float(f.den.value((w, y)))) < den_min:
                return False
    return True


def independence_scan(alg, integrals, predicate=None, nsamples=None, seed=0,
                      exact=False, threshold=SINGULAR_THRESHOLD, den_min=0.1):
    """Rank of the stacked gradients at random accepted sample points.

    Float path: uniform samples in [-2, 2]^{2n}, numpy singular values
    with a relative cutoff.  Exact path: rational sample points and exact
    row reduction, so the rank statement carries no floating error.
    """
    n = alg.dim
    count = _sample_count(nsamples)
    rng = np.random.default_rng(seed)
    target = len(integrals)
    accepted = 0
    full = 0
    ranks = []
    attempts = 0
    while accepted < count and attempts < 1000 * count:
        attempts += 1
        pt = rng.uniform(-2.0, 2.0, 2 * n)
        if exact:
            pt = [Fraction(int(round(x * 32)), 32) for x in pt]
        w, y = list(pt[:n]), list(pt[n:])
        if not _accepts(integrals, predicate, w, y, den_min):
            continue
        accepted += 1
        rows = []
        for f in integrals:
            u, v = f.gradient((w, y))
            rows.append(list(u) + list(v))
        if exact:
            rk = linalg.rank(rows)
        else:
            mat = np.array([[float(x) for x in row] for row in rows])
            sv = np.linalg.svd(mat, compute_uv=False)
            rk = int(np.sum(sv > threshold * sv[0])) if sv[0] > 0 else 0
        ranks.append(rk)
        if rk == target:
            full += 1
    return ScanReport(accepted, full, target, ranks)
