import itertools
from fractions import Fraction as F

import numpy as np
import pytest
import sympy

from jrcommute.act_core import ricci
from jrcommute.classify import Variant, classify_simple
from jrcommute.errors import NonConstantDeterminant, VariableCountMismatch
from jrcommute.geometry import (
    PolyMetric, example_report, flat_metric, is_locally_symmetric, neutral_example_metric,
    reference_ricci, reference_table, riemann_model_at, table_components,
)
from jrcommute.polynomial import MultiPoly
from jrcommute.scalar_linalg import signature

X = sympy.symbols("x1:5")


def to_sympy(poly: MultiPoly):
    return sum((sympy.Rational(c.numerator, c.denominator) * sympy.Mul(*[v ** e for v, e in zip(X, exps)])
                for exps, c in poly.terms.items()), sympy.Integer(0))


def sympy_curvature(gmat):
    """Christoffel and lowered curvature from the textbook formulas, done by sympy."""
    m = gmat.shape[0]
    gi = gmat.inv()
    Gam = [[[sympy.expand(sum(gi[k, l] * (sympy.diff(gmat[j, l], X[i]) + sympy.diff(gmat[i, l], X[j])
                                          - sympy.diff(gmat[i, j], X[l])) for l in range(m)) / 2)
             for j in range(m)] for i in range(m)] for k in range(m)]
    R = {}
    for i, j, k, l in itertools.product(range(m), repeat=4):
        up = [sympy.diff(Gam[n][j][k], X[i]) - sympy.diff(Gam[n][i][k], X[j])
              + sum(Gam[n][i][a] * Gam[a][j][k] - Gam[n][j][a] * Gam[a][i][k] for a in range(m))
              for n in range(m)]
        R[i, j, k, l] = sympy.expand(sum(up[n] * gmat[n, l] for n in range(m)))
    return Gam, R


def perturbed_metric(s):
    g = neutral_example_metric(s)
    entries = [row[:] for row in g.entries]
    entries[2][2] = entries[2][2] + MultiPoly.variable(4, 0) ** 3
    return PolyMetric(entries)


@pytest.mark.parametrize("metric_fn", [lambda: neutral_example_metric(F(3, 2)), lambda: perturbed_metric(1)])
def test_curvature_matches_sympy(metric_fn):
    metric = metric_fn()
    gmat = sympy.Matrix(4, 4, lambda i, j: to_sympy(metric[i, j]))
    Gam, R = sympy_curvature(gmat)
    for k, i, j in itertools.product(range(4), repeat=3):
        assert sympy.expand(to_sympy(metric.christoffel[k][i][j]) - Gam[k][i][j]) == 0
    for key, poly in metric.curvature.items():
        assert sympy.expand(to_sympy(poly) - R[key]) == 0


def test_inverse_metric_block_form():
    metric = neutral_example_metric(2)
    inv = metric.inverse
    # inverse of [[0, I], [I, B]] is [[-B, I], [I, 0]]
    for i, j in itertools.product(range(2), repeat=2):
        assert inv[i][j] == -metric[i + 2, j + 2]
        assert inv[i + 2][j + 2].is_zero()
        assert inv[i][j + 2] == MultiPoly.constant(4, 1 if i == j else 0)


def test_nonconstant_determinant_rejected():
    x = MultiPoly.variable(2, 0)
    one = MultiPoly.constant(2, 1)
    metric = PolyMetric([[one + x * x, MultiPoly.zero(2)], [MultiPoly.zero(2), one]])
    with pytest.raises(NonConstantDeterminant):
        metric.inverse


def lowered_christoffel(metric, i, j, l):
    total = MultiPoly.zero(4)
    for k in range(4):
        total = total + metric[l, k] * metric.christoffel[k][i][j]
    return total


def test_lowered_christoffel_is_at_most_linear_and_scales_with_s():
    g1, g3 = neutral_example_metric(1), neutral_example_metric(3)
    for i, j, l in itertools.product(range(4), repeat=3):
        low1 = lowered_christoffel(g1, i, j, l)
        assert low1.degree() <= 1
        assert lowered_christoffel(g3, i, j, l) == low1 * 3


@pytest.mark.parametrize("s", [1, F(3, 2), -2])
def test_raw_components_are_constant(s):
    metric = neutral_example_metric(s)
    raw = {k: p for k, p in metric.curvature.items() if not p.is_zero()}
    assert all(p.is_constant() for p in raw.values())
    model = riemann_model_at(metric, [F(1), F(-2), F(5), F(1, 3)])
    assert sorted(model.tensor.components.values()) == sorted([-s, s, -s, s])
    assert model.tensor[0, 2, 0, 3] == -s and model.tensor[0, 2, 1, 2] == s


@pytest.mark.parametrize("s", [1, F(3, 2), -2])
@pytest.mark.parametrize("point", [(0, 0, 0, 0), (1, -2, 5, F(1, 3)), (F(1, 2), F(1, 2), 7, -1)])
def test_reference_tables(s, point):
    model = riemann_model_at(neutral_example_metric(s), point)
    assert table_components(model) == reference_table(s)
    assert np.all(ricci(model) == reference_ricci(s))
    assert signature(model.inner) == (2, 2)
    cls = classify_simple(model)
    assert cls.variant is Variant.SIMPLE_COMPLEX and cls.a1 == 0 and cls.a2_squared == 4 * s * s


def test_locally_symmetric_and_perturbation():
    assert is_locally_symmetric(neutral_example_metric(1))
    assert not is_locally_symmetric(perturbed_metric(1))
    assert is_locally_symmetric(flat_metric([[1, 0], [0, -1]]))


def test_point_length_checked():
    with pytest.raises(VariableCountMismatch):
        riemann_model_at(neutral_example_metric(1), [0, 0])


def test_example_report_passes():
    report = example_report(1, [(0, 0, 0, 0), (1, -2, 5, F(1, 3))])
    assert report.ok, report.format()
    assert report["locally_symmetric"].passed


def test_nonsymmetric_metric_rejected():
    one, zero, x = MultiPoly.constant(2, 1), MultiPoly.zero(2), MultiPoly.variable(2, 0)
    with pytest.raises(ValueError):
        PolyMetric([[one, x], [zero, one]])
