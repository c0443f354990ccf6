"""Seeded random rational test objects.

All randomness comes from ``numpy.random.default_rng(seed)`` (PCG64), so a
given integer seed yields the same objects on every platform.
"""
from __future__ import annotations

from fractions import Fraction
from typing import List, Optional

import numpy as np

from .act_core import (
    CurvTensor, Model, canonical_keys, constant_curvature, kaehler_like, perturb,
    standard_complex_structure,
)
from .ansatz import Seed, make_seed
from .scalar_linalg import (
    BilinearForm, contraction_positive, exact_array, identity, inverse, to_scalar,
)


def _rng(rng) -> np.random.Generator:
    return rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)


def random_invertible(m: int, rng, spread: int = 2) -> np.ndarray:
    """Integer matrix with a dominant diagonal, hence invertible."""
    rng = _rng(rng)
    M = rng.integers(-spread, spread + 1, size=(m, m))
    M += np.diag((m * spread + 1) * rng.choice([-1, 1], size=m))
    return exact_array(M)


def random_frame(p: int, rng):
    """``(g, P)`` with ``g`` positive definite and ``P^T g P = id``."""
    P = random_invertible(p, rng)
    g = inverse(P @ P.T)
    return BilinearForm(g), P


def random_einstein(p: int, kind: str, constant, rng=None, g: Optional[BilinearForm] = None,
                    frame: Optional[np.ndarray] = None) -> CurvTensor:
    """Einstein tensor with the requested Einstein constant.

    ``kind`` is ``"constant"`` (constant sectional curvature, needs ``p >= 2``
    for a nonzero constant) or ``"kaehler"`` (needs even ``p``).
    """
    constant = to_scalar(constant)
    if g is None:
        g, frame = random_frame(p, rng)
    if kind == "constant":
        if p < 2:
            if constant != 0:
                raise ValueError("nonzero Einstein constant needs dim >= 2")
            return CurvTensor.zero(p)
        return constant_curvature(p, constant / (p - 1), g)
    if kind == "kaehler":
        if frame is None:
            frame = identity(p)
        phi = frame @ standard_complex_structure(p) @ inverse(frame)
        return kaehler_like(phi, g) * (constant / 3)
    raise ValueError(f"unknown Einstein kind {kind!r}")


def seed_corpus(count: int = 54, rng_seed: int = 0) -> List[Seed]:
    """Seeds cycling over ``p in {2,3,4}``, ``A1 in {0, c = -1, 1, 2}`` and both ``A2`` kinds."""
    rng = np.random.default_rng(rng_seed)
    combos = []
    for p in (2, 3, 4):
        for c1 in (None, -1, 1, 2):
            for kind2 in ("kaehler", "constant"):
                if kind2 == "kaehler" and p % 2:
                    continue
                combos.append((p, c1, kind2))
    seeds = []
    n = 0
    while len(seeds) < count:
        p, c1, kind2 = combos[n % len(combos)]
        n += 1
        if rng.random() < 0.5:
            g, P = BilinearForm.identity(p), identity(p)
        else:
            g, P = random_frame(p, rng)
        A1 = CurvTensor.zero(p) if c1 is None else constant_curvature(p, c1, g)
        a2 = Fraction(int(rng.integers(1, 4)), int(rng.integers(1, 3)))
        A2 = random_einstein(p, kind2, a2, g=g, frame=P)
        seeds.append(make_seed(g, A1, A2))
    return seeds


def repeated_index_keys(m: int):
    return [k for k in canonical_keys(m) if len(set(k)) < 4]


def mutants(models: List[Model], count: int = 60, min_false: int = 10, rng_seed: int = 1) -> List[Model]:
    """One-component perturbations of ``models``.

    Perturbations touch representatives with a repeated index so that the
    result is still a curvature tensor.  Keeps drawing until at least
    ``min_false`` of them fail the slotwise commuting test.
    """
    from .classify import commutes_slotwise

    rng = np.random.default_rng(rng_seed)
    out, flags = [], []
    n = 0
    while len(out) < count or sum(not f for f in flags) < min_false:
        base = models[n % len(models)]
        n += 1
        keys = repeated_index_keys(base.dim)
        key = keys[int(rng.integers(len(keys)))]
        delta = Fraction(int(rng.choice([-3, -2, -1, 1, 2, 3])), int(rng.integers(1, 4)))
        mutant = perturb(base, key, delta)
        commuting = commutes_slotwise(mutant)
        if len(out) < count:
            out.append(mutant)
            flags.append(commuting)
        elif not commuting:
            # swap out a mutant that still commutes
            i = flags.index(True)
            out[i], flags[i] = mutant, False
    return out


def random_skew(g: BilinearForm, rng, scale=Fraction(1)) -> np.ndarray:
    """``g^{-1} K`` with ``K`` a random antisymmetric rational matrix."""
    rng = _rng(rng)
    p = g.dim
    K = rng.integers(-4, 5, size=(p, p))
    K = np.triu(K, 1)
    K = exact_array(K - K.T) * to_scalar(scale)
    return g.inverse @ K


def random_contraction(g: BilinearForm, rng) -> np.ndarray:
    """Skew-adjoint ``T`` with ``|T| < 1`` (halved until it qualifies)."""
    rng = _rng(rng)
    T = random_skew(g, rng, Fraction(1, int(rng.integers(2, 9))))
    while not contraction_positive(T, g):
        T = T / 2
    return T


def random_expansion(g: BilinearForm, rng) -> np.ndarray:
    """Skew-adjoint nonzero ``T`` with ``|T| >= 1`` (doubled until it qualifies)."""
    rng = _rng(rng)
    T = random_skew(g, rng)
    while not T.any():
        T = random_skew(g, rng)
    while contraction_positive(T, g):
        T = T * 2
    return T


def random_non_skew(g: BilinearForm, rng) -> np.ndarray:
    """Random rational ``T`` whose ``g``-symmetric part is nonzero."""
    rng = _rng(rng)
    p = g.dim
    T = random_skew(g, rng, Fraction(1, 4))
    S = rng.integers(-3, 4, size=(p, p))
    S = S + S.T
    if not S.any():
        S[0, 0] = 1
    return T + g.inverse @ exact_array(S) * Fraction(1, 5)
