"""Reparametrizing a seed by a skew-adjoint contraction ``T``.

Inside the complexified model, the graph ``{v + J T v : v in V0}`` is another
maximal spacelike subspace orthogonal to its image under ``J`` exactly when
``T`` is skew-adjoint for ``g``, and it is spacelike exactly when
``|T| < 1``.  Reading the seed off that subspace gives

    g~(v, w)  = <v + JTv, w + JTw>
    A1~(...)  =  A(v + JTv, w + JTw, x + JTx, y + JTy)
    A2~(...)  = -A(J(v + JTv), w + JTw, x + JTx, y + JTy)

(the minus sign on ``A2~`` is what makes ``T = 0`` give back the seed).  The
same result written out multilinearly is a 16-term sum per tensor, generated
from :data:`EXPANSION_TERMS`.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import List, NamedTuple, Tuple

import numpy as np

from .act_core import CurvTensor
from .ansatz import Seed, build_model, complex_structure, make_seed
from .errors import DimensionMismatch, FormNotPositiveDefinite, WitnessInvalid
from .scalar_linalg import (
    BilinearForm, allclose, contract_slots, contraction_positive, exact_array, identity,
    is_exact, is_skew_adjoint,
)


class Term(NamedTuple):
    target: int          # 1 -> A1~, 2 -> A2~
    sign: int
    source: int          # 1 -> A1, 2 -> A2
    slots: Tuple[int, ...]  # 0-based slots that receive T


def _expansion_terms() -> List[Term]:
    # Re and Im of i^n (A1 + i A2), n = number of T-slots
    real = {0: (1, 1), 1: (-1, 2), 2: (-1, 1), 3: (1, 2), 4: (1, 1)}
    imag = {0: (1, 2), 1: (1, 1), 2: (-1, 2), 3: (-1, 1), 4: (1, 2)}
    terms = []
    for target, table in ((1, real), (2, imag)):
        for n in range(5):
            for slots in itertools.combinations(range(4), n):
                sign, source = table[n]
                terms.append(Term(target, sign, source, slots))
    return terms


EXPANSION_TERMS = _expansion_terms()


@dataclass(frozen=True, eq=False)
class Witness:
    """Isomorphism data: ``theta: V0 -> V0~`` and a skew-adjoint contraction ``T``."""

    theta: np.ndarray
    T: np.ndarray


def _as_matrix(M, exact: bool):
    M = np.asarray(M)
    if exact and M.dtype != float:
        return exact_array(M)
    return np.asarray(M, dtype=float)


def check_witness_T(seed: Seed, T) -> np.ndarray:
    T = np.asarray(T)
    if T.shape != (seed.p, seed.p):
        raise DimensionMismatch(f"T has shape {T.shape}, seed has p={seed.p}")
    exact = seed.exact and T.dtype != float
    T = _as_matrix(T, exact)
    tol = 0.0 if exact else 1e-12
    G = seed.g.gram
    if not is_skew_adjoint(T, G, tol):
        raise WitnessInvalid("T is not skew-adjoint for g")
    if not contraction_positive(T, G):
        raise WitnessInvalid("T does not satisfy |T| < 1")
    return T


def graph_map(T) -> np.ndarray:
    """The ``2p x p`` matrix of ``v -> v + J T v`` in the ``(e+, e-)`` basis."""
    T = np.asarray(T)
    return np.vstack([identity(T.shape[0], is_exact(T)), T])


def _seed_tensors(seed: Seed, exact: bool):
    D1, D2 = seed.A1.dense, seed.A2.dense
    G = seed.g.gram
    if not exact:
        D1, D2, G = (np.asarray(x, dtype=float) for x in (D1, D2, G))
    return G, D1, D2


def _finish(seed_like, g, A1, A2, exact: bool, tol) -> Seed:
    if exact:
        return make_seed(BilinearForm(g), CurvTensor.from_dense(A1), CurvTensor.from_dense(A2))
    g = (g + g.T) / 2
    return make_seed(BilinearForm(g), CurvTensor.from_dense(A1, tol), CurvTensor.from_dense(A2, tol), tol=tol)


def _float_tol(seed: Seed) -> float:
    scale = max([1.0] + [abs(float(v)) for v in seed.A1.components.values()]
                + [abs(float(v)) for v in seed.A2.components.values()])
    return 1e-9 * scale


def transform_seed_pullback(seed: Seed, T) -> Seed:
    """Seed read off the graph subspace inside the complexified model."""
    T = check_witness_T(seed, T)
    exact = is_exact(T) and seed.exact
    model = build_model(seed)
    A = model.tensor.dense if exact else np.asarray(model.dense, dtype=float)
    Gfull = model.gram if exact else np.asarray(model.gram, dtype=float)
    phi = graph_map(T)
    Jphi = complex_structure(seed.p, exact) @ phi
    g = phi.T @ Gfull @ phi
    A1 = contract_slots(A, [phi, phi, phi, phi])
    A2 = -contract_slots(A, [Jphi, phi, phi, phi])
    return _finish(seed, g, A1, A2, exact, _float_tol(seed))


def transform_seed_expansion(seed: Seed, T) -> Seed:
    """Same transform as :func:`transform_seed_pullback`, by the explicit 16-term sums."""
    T = check_witness_T(seed, T)
    exact = is_exact(T) and seed.exact
    G, D1, D2 = _seed_tensors(seed, exact)
    g = G - T.T @ G @ T
    out = {1: 0 * D1, 2: 0 * D1}
    for term in EXPANSION_TERMS:
        src = D1 if term.source == 1 else D2
        mats = [T if s in term.slots else None for s in range(4)]
        out[term.target] = out[term.target] + term.sign * contract_slots(src, mats)
    return _finish(seed, g, out[1], out[2], exact, _float_tol(seed))


def pull_back_seed(seed: Seed, theta) -> tuple:
    """``(g(theta., theta.), A1(theta., ...), A2(theta., ...))`` as dense arrays."""
    exact = seed.exact and np.asarray(theta).dtype != float
    theta = _as_matrix(theta, exact)
    G, D1, D2 = _seed_tensors(seed, exact)
    return (theta.T @ G @ theta,
            contract_slots(D1, [theta] * 4),
            contract_slots(D2, [theta] * 4))


def push_forward_seed(seed: Seed, theta) -> Seed:
    """Seed on the target of ``theta`` whose pullback along ``theta`` is ``seed``."""
    from .scalar_linalg import inverse
    exact = seed.exact and np.asarray(theta).dtype != float
    theta = _as_matrix(theta, exact)
    inv = inverse(theta)
    g, A1, A2 = pull_back_seed(seed, inv)
    return _finish(seed, g, A1, A2, exact, _float_tol(seed))


def verify_witness(seed: Seed, seed_tilde: Seed, witness: Witness, tol: float = 1e-9) -> bool:
    """True iff ``(theta, T)`` carries ``seed`` to ``seed_tilde`` per the 16-term identities."""
    p = seed.p
    if seed_tilde.p != p or np.shape(witness.theta) != (p, p) or np.shape(witness.T) != (p, p):
        raise DimensionMismatch("seed, seed_tilde and witness dimensions disagree")
    try:
        transformed = transform_seed_expansion(seed, witness.T)
    except (WitnessInvalid, FormNotPositiveDefinite):
        return False
    exact = transformed.exact and seed_tilde.exact and np.asarray(witness.theta).dtype != float
    theta = _as_matrix(witness.theta, exact)
    from .scalar_linalg import det
    if det(theta) == 0:
        return False
    g_t, A1_t, A2_t = pull_back_seed(seed_tilde, theta)
    t = 0.0 if exact else tol
    return (allclose(g_t, transformed.g.gram, t)
            and allclose(A1_t, transformed.A1.dense, t)
            and allclose(A2_t, transformed.A2.dense, t))


def isomorphism_map(T) -> np.ndarray:
    """``[phi | J phi]``: sends the ``(e~+, e~-)`` basis of the new model into the old one."""
    T = np.asarray(T)
    p = T.shape[0]
    phi = graph_map(T)
    return np.hstack([phi, complex_structure(p, is_exact(T)) @ phi])
