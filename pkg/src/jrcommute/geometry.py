"""Exact Levi-Civita curvature of metrics with polynomial entries.

Conventions::

    Gamma^k_ij  = 1/2 g^kl (d_i g_jl + d_j g_il - d_l g_ij)
    R(d_i, d_j) d_k = (d_i Gamma^l_jk - d_j Gamma^l_ik
                       + Gamma^l_im Gamma^m_jk - Gamma^l_jm Gamma^m_ik) d_l
    A_ijkl = g(R(d_i, d_j) d_k, d_l)

Only metrics with constant determinant are supported, so the inverse metric
and every derived quantity is again polynomial.

For the neutral signature example below the Ricci operator computed from
this ``A`` agrees with the published Ricci table, while its curvature table
agrees with ``A_ijlk = -A_ijkl``.  :func:`table_components` reads a model
under that labelling; see ``TABLE_CONVENTION``.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Dict, List, Sequence

import numpy as np

from .act_core import CurvTensor, Model, canonical_keys, ricci
from .errors import DimensionMismatch, NonConstantDeterminant, VariableCountMismatch
from .polynomial import MultiPoly
from .report import Report
from .scalar_linalg import BilinearForm, exact_array, signature, to_scalar

TABLE_CONVENTION = "R_ijkl = A(d_i, d_j, d_l, d_k)"


class PolyMetric:
    """Symmetric matrix of polynomials in ``nvars`` coordinates."""

    def __init__(self, entries: List[List[MultiPoly]]):
        m = len(entries)
        if any(len(row) != m for row in entries):
            raise DimensionMismatch("metric must be square")
        nvars = entries[0][0].nvars if m else 0
        for i, j in itertools.product(range(m), repeat=2):
            if entries[i][j].nvars != nvars:
                raise VariableCountMismatch("metric entries use different variable counts")
            if entries[i][j] != entries[j][i]:
                raise ValueError(f"metric is not symmetric at ({i + 1},{j + 1})")
        self.m = m
        self.nvars = nvars
        self.entries = [list(row) for row in entries]

    def __getitem__(self, ij) -> MultiPoly:
        i, j = ij
        return self.entries[i][j]

    def evaluate(self, point) -> np.ndarray:
        return exact_array([[self.entries[i][j](point) for j in range(self.m)] for i in range(self.m)])

    @cached_property
    def determinant(self) -> MultiPoly:
        return _poly_det(self.entries, self.nvars)

    @cached_property
    def inverse(self) -> List[List[MultiPoly]]:
        return inverse_metric(self)

    @cached_property
    def christoffel(self):
        return christoffel(self)

    @cached_property
    def curvature(self) -> Dict[tuple, MultiPoly]:
        return curvature_polynomials(self)


def _poly_det(rows: List[List[MultiPoly]], nvars: int) -> MultiPoly:
    n = len(rows)

    @lru_cache(maxsize=None)
    def minor(row: int, cols: tuple) -> MultiPoly:
        if row == n:
            return MultiPoly.constant(nvars, 1)
        total = MultiPoly.zero(nvars)
        for pos, c in enumerate(cols):
            entry = rows[row][c]
            if entry.is_zero():
                continue
            rest = cols[:pos] + cols[pos + 1:]
            term = entry * minor(row + 1, rest)
            total = total + term if pos % 2 == 0 else total - term
        return total

    return minor(0, tuple(range(n)))


def inverse_metric(metric: PolyMetric) -> List[List[MultiPoly]]:
    """Adjugate over the (constant) determinant."""
    d = metric.determinant
    if not d.is_constant() or d.is_zero():
        raise NonConstantDeterminant(f"determinant {d!r} is not a nonzero constant")
    scale = 1 / d.constant_term()
    m, nv = metric.m, metric.nvars
    inv = [[None] * m for _ in range(m)]
    for i, j in itertools.product(range(m), repeat=2):
        sub = [[metric.entries[r][c] for c in range(m) if c != i] for r in range(m) if r != j]
        cof = _poly_det(sub, nv) if sub else MultiPoly.constant(nv, 1)
        inv[i][j] = cof * (scale if (i + j) % 2 == 0 else -scale)
    return inv


def christoffel(metric: PolyMetric):
    """``Gamma[k][i][j]`` as polynomials."""
    m = metric.m
    if metric.nvars != m:
        raise VariableCountMismatch("metric must use one coordinate per dimension")
    g, gi = metric.entries, metric.inverse
    dg = [[[g[i][j].diff(a) for a in range(m)] for j in range(m)] for i in range(m)]
    half = Fraction(1, 2)
    gamma = [[[None] * m for _ in range(m)] for _ in range(m)]
    for i in range(m):
        for j in range(i, m):
            lowered = [dg[j][l][i] + dg[i][l][j] - dg[i][j][l] for l in range(m)]
            for k in range(m):
                total = MultiPoly.zero(m)
                for l in range(m):
                    if not gi[k][l].is_zero() and not lowered[l].is_zero():
                        total = total + gi[k][l] * lowered[l]
                gamma[k][i][j] = gamma[k][j][i] = total * half
    return gamma


def curvature_polynomials(metric: PolyMetric) -> Dict[tuple, MultiPoly]:
    """``A_ijkl`` for every index quadruple."""
    m = metric.m
    G = metric.christoffel
    g = metric.entries
    up = {}
    for l, i, j, k in itertools.product(range(m), repeat=4):
        total = G[l][j][k].diff(i) - G[l][i][k].diff(j)
        for n in range(m):
            total = total + G[l][i][n] * G[n][j][k] - G[l][j][n] * G[n][i][k]
        up[l, i, j, k] = total
    low = {}
    for i, j, k, l in itertools.product(range(m), repeat=4):
        total = MultiPoly.zero(m)
        for n in range(m):
            if not g[n][l].is_zero() and not up[n, i, j, k].is_zero():
                total = total + up[n, i, j, k] * g[n][l]
        low[i, j, k, l] = total
    return low


def covariant_derivative_curvature(metric: PolyMetric) -> Dict[tuple, MultiPoly]:
    """``(nabla_a A)_ijkl`` for every ``(a, i, j, k, l)``."""
    m = metric.m
    G = metric.christoffel
    R = metric.curvature
    out = {}
    for a, i, j, k, l in itertools.product(range(m), repeat=5):
        total = R[i, j, k, l].diff(a)
        for n in range(m):
            total = (total - G[n][a][i] * R[n, j, k, l] - G[n][a][j] * R[i, n, k, l]
                     - G[n][a][k] * R[i, j, n, l] - G[n][a][l] * R[i, j, k, n])
        out[a, i, j, k, l] = total
    return out


def is_locally_symmetric(metric: PolyMetric) -> bool:
    return all(p.is_zero() for p in covariant_derivative_curvature(metric).values())


def riemann_model_at(metric: PolyMetric, point: Sequence) -> Model:
    """Tangent-space model ``(g_P, A_P)`` at a rational point."""
    if len(point) != metric.nvars:
        raise VariableCountMismatch(f"point of length {len(point)} for {metric.nvars} coordinates")
    point = [to_scalar(x) for x in point]
    gram = metric.evaluate(point)
    R = metric.curvature
    comps = {key: R[key](point) for key in canonical_keys(metric.m)}
    return Model(BilinearForm(gram), CurvTensor(metric.m, comps))


def flat_metric(entries) -> PolyMetric:
    """Constant metric from a rational matrix."""
    M = exact_array(entries)
    m = M.shape[0]
    return PolyMetric([[MultiPoly.constant(m, M[i, j]) for j in range(m)] for i in range(m)])


def neutral_example_metric(s) -> PolyMetric:
    """Signature (2,2) metric on R^4 with quadratic entries.

    Nonzero entries: ``g13 = g24 = 1``, ``g33 = 2 s x1 x2``,
    ``g44 = -2 s x1 x2``, ``g34 = s (x2^2 - x1^2)``.
    """
    s = to_scalar(s)
    x1, x2 = MultiPoly.variable(4, 0), MultiPoly.variable(4, 1)
    one, zero = MultiPoly.constant(4, 1), MultiPoly.zero(4)
    g = [[zero] * 4 for _ in range(4)]
    g[0][2] = g[2][0] = one
    g[1][3] = g[3][1] = one
    g[2][2] = x1 * x2 * (2 * s)
    g[3][3] = x1 * x2 * (-2 * s)
    g[2][3] = g[3][2] = (x2 * x2 - x1 * x1) * s
    return PolyMetric(g)


def reference_table(s) -> Dict[tuple, Fraction]:
    """Listed curvature components (1-based) for :func:`neutral_example_metric`."""
    s = to_scalar(s)
    return {(1, 3, 1, 4): s, (1, 3, 2, 3): -s, (1, 4, 2, 4): s, (2, 3, 2, 4): -s}


def reference_ricci(s) -> np.ndarray:
    """Listed Ricci operator: ``d1 -> -2s d2, d2 -> 2s d1, d3 -> 2s d4, d4 -> -2s d3``."""
    s = to_scalar(s)
    rho = exact_array(np.zeros((4, 4), dtype=int))
    rho[1, 0] = -2 * s
    rho[0, 1] = 2 * s
    rho[3, 2] = 2 * s
    rho[2, 3] = -2 * s
    return rho


def table_components(model: Model) -> Dict[tuple, Fraction]:
    """Nonzero canonical components, 1-based, under ``TABLE_CONVENTION``."""
    return {tuple(x + 1 for x in key): -v for key, v in model.tensor.components.items()}


def example_report(s, points) -> Report:
    """Conformance report for :func:`neutral_example_metric` at the given points."""
    from .classify import Variant, classify_simple

    s = to_scalar(s)
    metric = neutral_example_metric(s)
    report = Report(subject=f"neutral (2,2) example, s={s}")
    for point in points:
        point = [to_scalar(x) for x in point]
        label = ",".join(str(x) for x in point)
        model = riemann_model_at(metric, point)
        comps = table_components(model)
        report.add(f"curvature_table@{label}", comps == reference_table(s),
                   f"{TABLE_CONVENTION}: " + ", ".join(f"R{''.join(map(str, k))}={v}" for k, v in sorted(comps.items())))
        rho = ricci(model)
        report.add(f"ricci_table@{label}", bool(np.all(rho == reference_ricci(s))),
                   "rho d1=-2s d2, rho d2=2s d1, rho d3=2s d4, rho d4=-2s d3")
        sig = signature(model.inner)
        report.add(f"signature@{label}", sig == (2, 2), f"signature {sig}")
        cls = classify_simple(model)
        ok = (cls.variant is Variant.SIMPLE_COMPLEX and cls.a1 == 0 and cls.a2_squared == 4 * s * s)
        report.add(f"classification@{label}", ok, f"{cls.variant.value} a1={cls.a1} a2^2={cls.a2_squared}")
    report.add("locally_symmetric", is_locally_symmetric(metric), "every nabla A component is the zero polynomial")
    report.scalars.update({"s": s, "a1": Fraction(0), "a2_squared": 4 * s * s})
    return report
