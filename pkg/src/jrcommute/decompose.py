"""Adapted bases for a self-adjoint complex structure, and seed extraction.

Given a neutral inner product and a self-adjoint ``J`` with ``J^2 = -id``, the
basis is built two vectors at a time.  In each step a unit spacelike ``f+``
and a unit timelike ``f-`` spanning ``{f+, J f+}`` are chosen so that in the
frame ``(f+, f-)``::

    J = [[a, b], [-b, -a]],   b > 0,  b^2 - a^2 = 1

The vector ``e(t) = cosh(t) f+ + sinh(t) f-`` has
``<J e, e> = ((a + b) e^{2t} + (a - b) e^{-2t}) / 2``, which vanishes at
``t = ln((b - a) / (b + a)) / 4``.  Then ``e+ = e(t)``, ``e- = J e+`` and the
construction recurses on the orthogonal complement of ``{e+, e-}``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .act_core import CurvTensor, Model, find_violation, ricci
from .ansatz import Seed, build_model, complex_structure, make_seed
from .classify import Variant, classify_simple
from .errors import IllConditioned, NotComplexStructure, NotSimpleComplex, ToleranceExceeded
from .scalar_linalg import (
    BilinearForm, allclose, contract_slots, exact_array, identity, is_exact, max_abs,
    rational_root, signature,
)

DEFAULT_TOL = 1e-9


@dataclass
class AdaptedBasis:
    """Columns ``e_1+ .. e_p+, e_1- .. e_p-`` plus the worst residual seen."""

    vectors: np.ndarray
    residual: float
    thetas: List[float] = field(default_factory=list)
    exact: bool = False

    @property
    def p(self) -> int:
        return self.vectors.shape[1] // 2


def _residuals(G, J, E):
    p = E.shape[1] // 2
    exact = is_exact(E) and is_exact(G) and is_exact(J)
    target = identity(2 * p, exact)
    target[p:, p:] = -target[p:, p:]
    gram = E.T @ G @ E
    Jstd = complex_structure(p, exact)
    r_gram = max_abs(np.asarray(gram - target, dtype=float)) if E.size else 0.0
    r_J = max_abs(np.asarray(J @ E - E @ Jstd, dtype=float)) if E.size else 0.0
    return r_gram, r_J


def _check_inputs(G, J, tol):
    m = G.shape[0]
    if J.shape != (m, m):
        raise NotComplexStructure(f"J has shape {J.shape}, form has dim {m}")
    GJ = G @ J
    if not allclose(GJ, GJ.T, tol):
        raise NotComplexStructure("J is not self-adjoint")
    if not allclose(J @ J, -identity(m, is_exact(J)), tol):
        raise NotComplexStructure("J does not square to -id")
    p, q = signature(G)
    if p != q:
        raise NotComplexStructure(f"signature ({p},{q}) is not neutral")
    return p


def _exact_pair(G, J, v):
    """Rational ``(e+, e-, log r)`` grown from ``v``, or None if a root is irrational."""
    ip = lambda u, w: u @ G @ w
    n2 = ip(v, v)
    if n2 <= 0:
        return None
    n = rational_root(n2)
    if n is None:
        return None
    fp = v / n
    Jf = J @ fp
    a = ip(Jf, fp)
    r = rational_root(1 + a * a)
    if r is None:
        return None
    fm = (Jf - a * fp) / r
    b = ip(Jf, fm)
    if b < 0:
        fm, b = -fm, -b
    # e^{4t} = (b - a)/(b + a); cosh, sinh need its fourth root
    root = rational_root((b - a) / (b + a), 4)
    if root is None:
        return None
    ep = (root + 1 / root) / 2 * fp + (root - 1 / root) / 2 * fm
    return ep, J @ ep, math.log(root)


def _adapted_exact(G, J) -> Optional[AdaptedBasis]:
    """Rational version; returns None when no candidate pivot stays rational."""
    m = G.shape[0]
    ip = lambda u, v: u @ G @ v
    work = [identity(m)[:, i] for i in range(m)]
    plus, minus, thetas = [], [], []
    while work:
        candidates = work + [u + w for i, u in enumerate(work) for w in work[i + 1:]]
        candidates.sort(key=lambda u: ip(u, u), reverse=True)
        step = next((r for r in (_exact_pair(G, J, v) for v in candidates) if r is not None), None)
        if step is None:
            return None
        ep, em, theta = step
        plus.append(ep)
        minus.append(em)
        thetas.append(theta)
        nxt = []
        for u in work:
            u = u - ip(u, ep) * ep + ip(u, em) * em
            if any(x != 0 for x in u):
                nxt.append(u)
        work = _independent_exact(nxt)
    E = np.column_stack(plus + minus) if plus else exact_array(np.zeros((m, 0), dtype=int))
    return AdaptedBasis(E, 0.0, thetas, exact=True)


def _independent_exact(vectors):
    """Greedy subset of linearly independent rational vectors."""
    keep = []
    for v in vectors:
        if _rank_exact(keep + [v]) == len(keep) + 1:
            keep.append(v)
    return keep


def _rank_exact(vectors) -> int:
    rows = [list(v) for v in vectors]
    rank, ncol = 0, len(rows[0]) if rows else 0
    for c in range(ncol):
        piv = next((r for r in range(rank, len(rows)) if rows[r][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][c] != 0:
                f = rows[r][c] / rows[rank][c]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def _adapted_float(G, J, tol) -> AdaptedBasis:
    m = G.shape[0]
    ip = lambda u, v: float(u @ G @ v)
    W = np.eye(m)
    plus, minus, thetas = [], [], []
    worst = 0.0
    while W.shape[1]:
        # greedy pivot: the unit vector of span(W) with the largest <v, v>
        GW = W.T @ G @ W
        vals, vecs = np.linalg.eigh((GW + GW.T) / 2)
        k = int(np.argmax(vals))
        if vals[k] <= tol:
            raise IllConditioned(f"no spacelike direction left (max <v,v> = {vals[k]:.3e})")
        v = W @ vecs[:, k]
        v = v * np.sign(v[np.argmax(np.abs(v))])
        fp = v / math.sqrt(ip(v, v))
        Jf = J @ fp
        a = ip(Jf, fp)
        w = Jf - a * fp
        fm = w / math.sqrt(1 + a * a)
        b = ip(Jf, fm)
        if b < 0:
            fm, b = -fm, -b
        theta = 0.25 * math.log((b - a) / (b + a))
        ep = math.cosh(theta) * fp + math.sinh(theta) * fm
        em = J @ ep
        worst = max(worst, abs(ip(J @ ep, ep)), abs(ip(ep, ep) - 1), abs(ip(em, em) + 1))
        plus.append(ep)
        minus.append(em)
        thetas.append(theta)
        # orthogonal complement of {e+, e-} inside span(W)
        proj = W - np.outer(ep, ep @ G @ W) + np.outer(em, em @ G @ W)
        U, s, _ = np.linalg.svd(proj, full_matrices=False)
        rank = W.shape[1] - 2
        if rank > 0 and s[rank - 1] <= tol * max(1.0, s[0]):
            raise IllConditioned("orthogonal complement lost rank")
        W = U[:, :rank]
        if rank:
            # complement must be J-invariant with neutral signature
            JW = J @ W
            leak = JW - W @ np.linalg.lstsq(W, JW, rcond=None)[0]
            worst = max(worst, float(np.max(np.abs(leak))))
    E = np.column_stack(plus + minus) if plus else np.zeros((m, 0))
    r_gram, r_J = _residuals(G, J, E)
    return AdaptedBasis(E, max(worst, r_gram, r_J), thetas)


def adapted_basis(inner, J, tol: float = DEFAULT_TOL) -> AdaptedBasis:
    """Orthonormal basis ``e_i+-`` with ``J e_i+- = +- e_i-+``.

    Exact inputs are tried in rational arithmetic first; the float path is
    used when an irrational square or fourth root turns up.
    """
    G = inner.gram if isinstance(inner, BilinearForm) else np.asarray(inner)
    J = np.asarray(J)
    if is_exact(G) and is_exact(J):
        _check_inputs(G, J, 0.0)
        result = _adapted_exact(G, J)
        if result is not None:
            return result
    G, J = np.asarray(G, dtype=float), np.asarray(J, dtype=float)
    _check_inputs(G, J, tol)
    return _adapted_float(G, J, tol)


@dataclass
class Decomposition:
    seed: Seed
    basis: AdaptedBasis
    residuals: dict
    flipped: bool = False


def flip_sign(seed: Seed) -> Seed:
    """Seed with ``A2`` negated; the models agree after ``e_i- -> -e_i-``."""
    return Seed(seed.g, seed.A1, -seed.A2, seed.a1, -seed.a2)


def flip_map(p: int, exact: bool = True) -> np.ndarray:
    D = identity(2 * p, exact)
    D[p:, p:] = -D[p:, p:]
    return D


def decompose_model(model: Model, tol: float = DEFAULT_TOL) -> Decomposition:
    """Recover a seed whose complexification is isomorphic to ``model``."""
    cls = classify_simple(model)
    if cls.variant is not Variant.SIMPLE_COMPLEX:
        raise NotSimpleComplex(f"model classifies as {cls.variant.value}")
    basis = adapted_basis(model.inner, cls.J, tol)
    residuals = {"adapted_basis": basis.residual}
    if basis.residual > tol:
        raise ToleranceExceeded("adapted basis", basis.residual, tol)
    p = basis.p
    exact = basis.exact and model.exact
    if exact:
        E, A, G = basis.vectors, model.tensor.dense, model.gram
    else:
        E = np.asarray(basis.vectors, dtype=float)
        A = np.asarray(model.dense, dtype=float)
        G = np.asarray(model.gram, dtype=float)
    AE = contract_slots(A, [E, E, E, E])
    A1 = AE[:p, :p, :p, :p]
    A2 = -AE[p:, :p, :p, :p]
    g = E[:, :p].T @ G @ E[:, :p]
    if not exact:
        g = (g + g.T) / 2
    check_tol = 0.0 if exact else tol

    for name, arr in (("A1", A1), ("A2", A2)):
        bad = find_violation(arr, check_tol)
        if bad is not None:
            raise ToleranceExceeded(f"{name} curvature symmetry ({bad[0]})", float("nan"), tol)
    tA1 = CurvTensor.from_dense(A1, check_tol)
    tA2 = CurvTensor.from_dense(A2, check_tol)
    seed = make_seed(BilinearForm(g), tA1, tA2, tol=check_tol)

    expected_a1 = float(cls.a1) / 2
    expected_a2 = math.sqrt(float(cls.a2_squared)) / 2
    flipped = False
    if seed.a2 < 0:
        seed, flipped = flip_sign(seed), True
        AE = contract_slots(AE, [flip_map(p, exact)] * 4)
    residuals["a1"] = abs(float(seed.a1) - expected_a1)
    residuals["a2"] = abs(float(seed.a2) - expected_a2)
    for key in ("a1", "a2"):
        if residuals[key] > tol:
            raise ToleranceExceeded(f"Einstein constant {key}", residuals[key], tol)
    rebuilt = build_model(seed)
    residuals["reconstruction"] = max_abs(np.asarray(rebuilt.dense, dtype=float) - np.asarray(AE, dtype=float))
    if residuals["reconstruction"] > tol:
        raise ToleranceExceeded("reconstruction", residuals["reconstruction"], tol)
    residuals["einstein_A1"] = _einstein_deviation(seed.g, seed.A1, seed.a1)
    residuals["einstein_A2"] = _einstein_deviation(seed.g, seed.A2, seed.a2)
    return Decomposition(seed, basis, residuals, flipped)


def _einstein_deviation(g: BilinearForm, A: CurvTensor, a) -> float:
    rho = np.asarray(ricci(Model(g, A, tol=1.0)), dtype=float)
    return max_abs(rho - float(a) * np.eye(g.dim))


def extract_seed(model: Model, tol: float = DEFAULT_TOL) -> Seed:
    return decompose_model(model, tol).seed


def einstein_sums(seed: Seed):
    """``sum_k A1(e_i, e_k, e_k, e_l)`` and ``sum_k A2(...)`` in an orthonormal frame of ``g``."""
    G = np.asarray(seed.g.gram, dtype=float)
    L = np.linalg.cholesky(np.linalg.inv(G))  # columns are g-orthonormal
    out = []
    for A in (seed.A1, seed.A2):
        D = contract_slots(np.asarray(A.dense, dtype=float), [L, L, L, L])
        out.append(np.einsum("ikkl->il", D))
    return tuple(out)
