import random
from fractions import Fraction

from nilflow.algebra import LieAlgebraDescriptor
from nilflow.integrals import (
    DerivationIntegral,
    Energy,
    FirstIntegral,
    Linear,
    Quadratic,
    RightInvariant,
)
from nilflow.poisson import (
    PoissonEngine,
    criterion_derivation_linear,
    criterion_derivation_quadratic,
    criterion_linear_linear,
    criterion_linear_quadratic,
    verify_iso_homomorphism,
)
from nilflow.ratpoly import RationalPolynomial


def _h3(metric=None):
    return LieAlgebraDescriptor(3, {(1, 2): {3: Fraction(1)}}, metric=metric)


def _free_23():
    structure = {
        (1, 2): {3: Fraction(1)},
        (1, 3): {4: Fraction(1)},
        (2, 3): {5: Fraction(1)},
    }
    return LieAlgebraDescriptor(5, structure)


def _e(n, i):
    out = [Fraction(0)] * n
    out[i - 1] = Fraction(1)
    return out


class _Poly(FirstIntegral):
    """Wrap a raw phase-space polynomial so the engine can bracket it."""

    kind = "poly"

    def __init__(self, alg, poly):
        super().__init__(alg, label=poly.render())
        self._wrapped = poly

    def _expand(self):
        return self._wrapped


def test_central_pair_gives_center_momentum():
    alg = _h3()
    eng = PoissonEngine(alg)
    r1 = RightInvariant(alg, _e(3, 1))
    r2 = RightInvariant(alg, _e(3, 2))
    cand = [RightInvariant(alg, _e(3, 3), label="right:Z")]
    res = eng.bracket(r1, r2, candidates=cand)
    assert res.poly == RationalPolynomial.parse("(1) y3", 6)
    assert not res.is_zero
    assert res.matched_integral == "right:Z"


def test_central_linear_commutes_with_everything():
    alg = _h3()
    eng = PoissonEngine(alg)
    z = Linear(alg, _e(3, 3))
    others = [Energy(alg), RightInvariant(alg, _e(3, 1)),
              Quadratic(alg, [[Fraction(1), Fraction(0), Fraction(0)],
                              [Fraction(0), Fraction(1), Fraction(0)],
                              [Fraction(0), Fraction(0), Fraction(0)]])]
    for f in others:
        assert eng.bracket(z, f).is_zero


def test_derivation_linear_bracket_value():
    alg = _h3()
    eng = PoissonEngine(alg)
    # D rotates e2 -> e1, e1 -> -e2 and kills the center
    d = [[Fraction(0), Fraction(1), Fraction(0)],
         [Fraction(-1), Fraction(0), Fraction(0)],
         [Fraction(0), Fraction(0), Fraction(0)]]
    fd = DerivationIntegral(alg, d)
    u = [Fraction(0), Fraction(2), Fraction(-3)]
    fu = Linear(alg, u)
    # {f_D, f_U} = <Y, D U> = <Y, 2 e1>
    res = eng.bracket(fd, fu)
    assert res.poly == RationalPolynomial.parse("(2) y1", 6)


def test_antisymmetry():
    alg = _free_23()
    eng = PoissonEngine(alg)
    fs = [Energy(alg), RightInvariant(alg, _e(5, 1)), Linear(alg, _e(5, 2)),
          RightInvariant(alg, _e(5, 3))]
    for i in range(len(fs)):
        for j in range(i, len(fs)):
            ab = eng.bracket(fs[i], fs[j]).poly
            ba = eng.bracket(fs[j], fs[i]).poly
            assert (ab + ba).is_zero


def test_jacobi_identity_spot_check():
    alg = _free_23()
    eng = PoissonEngine(alg)
    nv = 10
    a = _Poly(alg, RationalPolynomial.parse("(1) w1 y3 + (2) y5", nv))
    b = _Poly(alg, RationalPolynomial.parse("(1) y1 y2 + (-1) w3", nv))
    c = _Poly(alg, RationalPolynomial.parse("(1) w2^2 y5 + (1) y4", nv))
    total = RationalPolynomial.zero(nv)
    for f, g, h in ((a, b, c), (b, c, a), (c, a, b)):
        inner = _Poly(alg, eng.bracket(g, h).poly)
        total = total + eng.bracket(f, inner).poly
    assert total.is_zero


def test_is_first_integral():
    alg = _h3()
    eng = PoissonEngine(alg)
    assert eng.is_first_integral(Energy(alg)).ok
    assert eng.is_first_integral(RightInvariant(alg, _e(3, 1))).ok
    assert eng.is_first_integral(Linear(alg, _e(3, 3))).ok
    bad = eng.is_first_integral(Linear(alg, _e(3, 1)))
    assert not bad.ok
    assert bad.witness is not None
    # the witness is a concrete phase point where {E, f} is nonzero
    w = list(bad.witness[:3])
    y = list(bad.witness[3:])
    assert bad.bracket.evaluate(w + y) != 0


def test_involution_table():
    alg = _h3()
    eng = PoissonEngine(alg)
    fine = [Linear(alg, _e(3, 3)), Energy(alg), RightInvariant(alg, _e(3, 1))]
    table = eng.involution_table(fine)
    assert len(table) == 3
    assert all(res.is_zero for _, _, res in table)
    broken = fine + [Linear(alg, _e(3, 1))]
    table = eng.involution_table(broken)
    bad_pairs = [(i, j) for i, j, res in table if not res.is_zero]
    assert bad_pairs  # the non-central linear breaks involution with E


def test_criterion_linear_linear():
    alg = _h3()
    eng = PoissonEngine(alg)
    commuting = criterion_linear_linear(eng, Linear(alg, _e(3, 1)),
                                        Linear(alg, _e(3, 3)))
    assert commuting.bracket_is_zero and commuting.condition_holds
    clashing = criterion_linear_linear(eng, Linear(alg, _e(3, 1)),
                                       Linear(alg, _e(3, 2)))
    assert not clashing.bracket_is_zero and not clashing.condition_holds
    assert commuting.agrees and clashing.agrees


def test_criterion_linear_quadratic():
    alg = _h3()
    eng = PoissonEngine(alg)
    s = [[Fraction(1), Fraction(0), Fraction(0)],
         [Fraction(0), Fraction(1), Fraction(0)],
         [Fraction(0), Fraction(0), Fraction(0)]]
    gs = Quadratic(alg, s)
    central = criterion_linear_quadratic(eng, Linear(alg, _e(3, 3)), gs)
    assert central.bracket_is_zero and central.condition_holds
    off = criterion_linear_quadratic(eng, Linear(alg, _e(3, 1)), gs)
    assert off.agrees  # equivalence holds in both directions


def test_criterion_derivation_linear():
    alg = _h3()
    eng = PoissonEngine(alg)
    d = [[Fraction(0), Fraction(1), Fraction(0)],
         [Fraction(-1), Fraction(0), Fraction(0)],
         [Fraction(0), Fraction(0), Fraction(0)]]
    fd = DerivationIntegral(alg, d)
    in_kernel = criterion_derivation_linear(eng, fd, Linear(alg, _e(3, 3)))
    assert in_kernel.bracket_is_zero and in_kernel.condition_holds
    moved = criterion_derivation_linear(eng, fd, Linear(alg, _e(3, 2)))
    assert not moved.bracket_is_zero and not moved.condition_holds


def test_criterion_derivation_quadratic():
    alg = _h3()
    eng = PoissonEngine(alg)
    d = [[Fraction(0), Fraction(1), Fraction(0)],
         [Fraction(-1), Fraction(0), Fraction(0)],
         [Fraction(0), Fraction(0), Fraction(0)]]
    fd = DerivationIntegral(alg, d)
    s_good = [[Fraction(1), Fraction(0), Fraction(0)],
              [Fraction(0), Fraction(1), Fraction(0)],
              [Fraction(0), Fraction(0), Fraction(0)]]
    ok = criterion_derivation_quadratic(eng, fd, Quadratic(alg, s_good))
    assert ok.bracket_is_zero and ok.condition_holds
    s_bad = [[Fraction(1), Fraction(0), Fraction(0)],
             [Fraction(0), Fraction(0), Fraction(0)],
             [Fraction(0), Fraction(0), Fraction(0)]]
    broken = criterion_derivation_quadratic(eng, fd, Quadratic(alg, s_bad))
    assert not broken.bracket_is_zero and not broken.condition_holds


def test_criteria_agree_on_random_instances():
    alg = _free_23()
    eng = PoissonEngine(alg)
    rng = random.Random(7)
    for _ in range(25):
        u = [Fraction(rng.randint(-3, 3)) for _ in range(5)]
        v = [Fraction(rng.randint(-3, 3)) for _ in range(5)]
        assert criterion_linear_linear(eng, Linear(alg, u), Linear(alg, v)).agrees


def test_iso_homomorphism_report():
    alg = _h3()
    rep = verify_iso_homomorphism(alg)
    assert rep.ok
    assert rep.injectivity_ok
    assert rep.checked_pairs > 0
    assert not rep.identity_failures


def test_fresh_objects_get_fresh_gradients():
    # equal-content integrals built in a loop must all bracket identically
    alg = _h3()
    eng = PoissonEngine(alg)
    seen = set()
    for _ in range(30):
        d = [[Fraction(0), Fraction(1), Fraction(0)],
             [Fraction(-1), Fraction(0), Fraction(0)],
             [Fraction(0), Fraction(0), Fraction(0)]]
        fd = DerivationIntegral(alg, d)
        fu = Linear(alg, [Fraction(0), Fraction(2), Fraction(-3)])
        seen.add(eng.bracket(fd, fu).poly.render())
    assert seen == {"(2) y1"}


def test_metric_changes_bracket_values():
    g = [[Fraction(1), Fraction(0), Fraction(0)],
         [Fraction(0), Fraction(2), Fraction(1)],
         [Fraction(0), Fraction(1), Fraction(3)]]
    alg = _h3(metric=g)
    eng = PoissonEngine(alg)
    res = eng.bracket(RightInvariant(alg, _e(3, 1)), RightInvariant(alg, _e(3, 2)))
    # {X1*, X2*} = f_{[X1,X2]} = <e3, Y>_G = y2 + 3 y3
    assert res.poly == RationalPolynomial.parse("(1) y2 + (3) y3", 6)
