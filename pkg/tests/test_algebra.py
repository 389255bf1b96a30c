from fractions import Fraction

import pytest

from nilflow.algebra import (
    JacobiViolation,
    LieAlgebraDescriptor,
    NotNilpotent,
    dump_algebra,
    from_definition,
    load_algebra,
    to_definition,
)


def _h3():
    return LieAlgebraDescriptor(3, {(1, 2): {3: Fraction(1)}}, name="h3")


def _free_23():
    structure = {
        (1, 2): {3: Fraction(1)},
        (1, 3): {4: Fraction(1)},
        (2, 3): {5: Fraction(1)},
    }
    return LieAlgebraDescriptor(5, structure, name="free23")


def test_bracket_bilinear_antisymmetric():
    alg = _h3()
    e1 = [Fraction(1), Fraction(0), Fraction(0)]
    e2 = [Fraction(0), Fraction(1), Fraction(0)]
    b = alg.bracket(e1, e2)
    assert b == [Fraction(0), Fraction(0), Fraction(1)]
    assert alg.bracket(e2, e1) == [Fraction(0), Fraction(0), Fraction(-1)]
    u = [Fraction(2), Fraction(-1), Fraction(5)]
    assert alg.bracket(u, u) == [Fraction(0)] * 3


def test_jacobi_rejected():
    # [[e3,e1],e2] = -[e4,e2] = e5 is the lone nonzero cyclic term
    bad = {
        (1, 2): {3: Fraction(1)},
        (1, 3): {4: Fraction(1)},
        (2, 4): {5: Fraction(1)},
    }
    with pytest.raises(JacobiViolation) as err:
        LieAlgebraDescriptor(5, bad)
    assert err.value.triple == (1, 2, 3)


def test_not_nilpotent_rejected():
    # [e1,e2]=e2 is solvable but not nilpotent; detected at analysis time
    alg = LieAlgebraDescriptor(2, {(1, 2): {2: Fraction(1)}})
    with pytest.raises(NotNilpotent):
        alg.analyze()


def test_analysis_h3():
    an = _h3().analyze()
    assert an.step == 2
    assert len(an.center_basis) == 1
    assert an.center_basis[0] == [Fraction(0), Fraction(0), Fraction(1)]
    assert len(an.v_complement) == 2


def test_analysis_free_23():
    an = _free_23().analyze()
    assert an.step == 3
    # center is span(e4, e5); the complement is taken against [g, g]
    assert len(an.center_basis) == 2
    assert len(an.v_complement) == 2


def test_is_central():
    alg = _h3()
    assert alg.is_central([Fraction(0), Fraction(0), Fraction(7)])
    assert not alg.is_central([Fraction(1), Fraction(0), Fraction(0)])


def test_ad_transpose_adjoint_identity():
    alg = _free_23()
    x = [Fraction(1), Fraction(-2), Fraction(3), Fraction(0), Fraction(1)]
    a = [Fraction(2), Fraction(0), Fraction(1), Fraction(1), Fraction(0)]
    b = [Fraction(0), Fraction(1), Fraction(0), Fraction(-1), Fraction(2)]
    m = alg.ad_transpose(x)
    ma = [sum(m[i][j] * a[j] for j in range(5)) for i in range(5)]
    lhs = alg.inner(ma, b)
    rhs = alg.inner(a, alg.bracket(x, b))
    assert lhs == rhs


def test_metric_inner_and_gram_inverse():
    g = [[Fraction(2), Fraction(1), Fraction(0)],
         [Fraction(1), Fraction(2), Fraction(0)],
         [Fraction(0), Fraction(0), Fraction(1)]]
    alg = LieAlgebraDescriptor(3, {(1, 2): {3: Fraction(1)}}, metric=g)
    u = [Fraction(1), Fraction(0), Fraction(0)]
    v = [Fraction(0), Fraction(1), Fraction(0)]
    assert alg.inner(u, v) == Fraction(1)
    gi = alg.gram_inverse()
    prod = [[sum(g[i][k] * gi[k][j] for k in range(3)) for j in range(3)]
            for i in range(3)]
    assert prod == [[Fraction(int(i == j)) for j in range(3)] for i in range(3)]


def test_metric_must_be_positive_definite():
    g = [[Fraction(1), Fraction(2), Fraction(0)],
         [Fraction(2), Fraction(1), Fraction(0)],
         [Fraction(0), Fraction(0), Fraction(1)]]
    with pytest.raises(ValueError):
        LieAlgebraDescriptor(3, {(1, 2): {3: Fraction(1)}}, metric=g)


def test_j_map_identity():
    alg = _h3()
    z = [Fraction(0), Fraction(0), Fraction(1)]
    jz, vbasis = alg.j_map(z)
    nv = len(vbasis)
    # columns: j(z) v_b = sum_a J[a][b] v_a, and <j(z) v, w> = <z, [v, w]>
    for b in range(nv):
        jvb = [sum(jz[a][b] * vbasis[a][i] for a in range(nv)) for i in range(3)]
        for c in range(nv):
            lhs = alg.inner(jvb, vbasis[c])
            rhs = alg.inner(z, alg.bracket(vbasis[b], vbasis[c]))
            assert lhs == rhs
    # and it is skew on the complement for the flat metric here
    assert jz[0][0] == 0 and jz[1][1] == 0 and jz[0][1] == -jz[1][0]


def test_definition_round_trip(tmp_path):
    alg = _free_23()
    data = to_definition(alg)
    back = from_definition(data)
    assert back.dim == alg.dim
    assert back.structure == alg.structure
    path = tmp_path / "free23.alg"
    dump_algebra(alg, path)
    loaded = load_algebra(path)
    assert loaded.dim == 5
    assert loaded.structure == alg.structure
    assert loaded.name == "free23"


def test_rational_coefficients_survive_serialization(tmp_path):
    alg = LieAlgebraDescriptor(3, {(1, 2): {3: Fraction(5, 3)}})
    path = tmp_path / "frac.alg"
    dump_algebra(alg, path)
    loaded = load_algebra(path)
    assert loaded.structure[(1, 2)][3] == Fraction(5, 3)
