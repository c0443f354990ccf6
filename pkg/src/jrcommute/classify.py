"""Jacobi-Ricci commuting test and the simple-spectrum classification.

The slotwise test ``A(rho x,y,z,w) = A(x,rho y,z,w) = ...`` is the decision
procedure.  The two operator tests (``rho`` commuting with every ``J(v)``,
and with every ``R(v1, v2)``) are evaluated on finite sets of vectors that
suffice by polarization and serve as cross-checks.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .act_core import Model, jacobi, ricci, skew_curv
from .scalar_linalg import (
    Scalar, allclose, contract_slots, exact_array, identity, minimal_quadratic, rational_root, signature,
)


class Variant(enum.Enum):
    EINSTEIN = "Einstein"
    SIMPLE_COMPLEX = "SimpleComplex"
    NOT_SIMPLE = "NotSimple"
    NOT_COMMUTING = "NotCommuting"


class NotSimpleReason(enum.Enum):
    NILPOTENT_PART = "rho - a1 is nonzero but squares to zero"
    REAL_SPLIT = "rho - a1 squares to a positive multiple of id (real eigenvalue pair)"
    NOT_QUADRATIC = "(rho - a1)^2 is not a multiple of the identity"


@dataclass(frozen=True, eq=False)
class Classification:
    variant: Variant
    a1: Optional[Scalar] = None
    a2_squared: Optional[Scalar] = None
    S: Optional[np.ndarray] = None
    J: Optional[np.ndarray] = None
    reason: Optional[NotSimpleReason] = None

    @property
    def a2(self) -> Optional[float]:
        """Positive imaginary part of the Ricci eigenvalues."""
        if self.a2_squared is None:
            return None
        return math.sqrt(self.a2_squared)

    def to_json(self) -> dict:
        from .serialization import scalar_to_json
        out = {"variant": self.variant.value}
        if self.a1 is not None:
            out["a1"] = scalar_to_json(self.a1)
        if self.a2_squared is not None:
            out["a2_squared"] = scalar_to_json(self.a2_squared)
        if self.reason is not None:
            out["reason"] = self.reason.name
        return out


def _tol(model: Model, tol: Optional[float]) -> float:
    return model.tol if tol is None else tol


def commutes_slotwise(model: Model, tol: Optional[float] = None) -> bool:
    """Decide Jacobi-Ricci commuting: ``rho`` may move freely between the four slots."""
    tol = _tol(model, tol)
    if model.dim == 0:
        return True
    rho = ricci(model)
    moved = [contract_slots(model.A, [rho if s == slot else None for s in range(4)])
             for slot in range(4)]
    return all(allclose(moved[0], other, tol) for other in moved[1:])


def _probe_vectors(model: Model, samples: int, rng_seed: int):
    m = model.dim
    exact = model.exact
    rng = np.random.default_rng(rng_seed)
    eye = identity(m, exact)
    vecs = [eye[i] for i in range(m)]
    vecs += [eye[i] + eye[j] for i in range(m) for j in range(i + 1, m)]
    for _ in range(samples):
        v = rng.integers(-5, 6, size=m)
        vecs.append(exact_array(v) if exact else v.astype(float))
    return vecs


def commutes_jacobi_sampled(model: Model, samples: int = 8, rng_seed: int = 0,
                            tol: Optional[float] = None) -> bool:
    """``J(v) rho = rho J(v)`` for basis vectors, pairwise sums and random ``v``.

    ``J(v)`` is quadratic in ``v``, so the basis vectors together with the
    sums ``e_i + e_j`` already determine it; the random draws are extra.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    tol = _tol(model, tol)
    rho = ricci(model)
    for v in _probe_vectors(model, samples, rng_seed):
        Jv = jacobi(model, v)
        if not allclose(Jv @ rho, rho @ Jv, tol):
            return False
    return True


def commutes_skew_sampled(model: Model, samples: int = 8, rng_seed: int = 0,
                          tol: Optional[float] = None) -> bool:
    """``R(v1, v2) rho = rho R(v1, v2)`` for basis pairs and random pairs."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    tol = _tol(model, tol)
    rho = ricci(model)
    m = model.dim
    exact = model.exact
    eye = identity(m, exact)
    pairs = [(eye[i], eye[j]) for i in range(m) for j in range(i + 1, m)]
    rng = np.random.default_rng(rng_seed)
    for _ in range(samples):
        v, w = rng.integers(-5, 6, size=(2, m))
        if exact:
            pairs.append((exact_array(v), exact_array(w)))
        else:
            pairs.append((v.astype(float), w.astype(float)))
    for x, y in pairs:
        R = skew_curv(model, x, y)
        if not allclose(R @ rho, rho @ R, tol):
            return False
    return True


def classify_simple(model: Model, tol: Optional[float] = None) -> Classification:
    tol = _tol(model, tol)
    if not commutes_slotwise(model, tol):
        return Classification(Variant.NOT_COMMUTING)
    rho = ricci(model)
    a1, c, is_quadratic = minimal_quadratic(rho, tol)
    exact = model.exact
    S = rho - a1 * identity(model.dim, exact)
    if allclose(S, 0 * S, tol):
        return Classification(Variant.EINSTEIN, a1=a1)
    if not is_quadratic:
        return Classification(Variant.NOT_SIMPLE, a1=a1, reason=NotSimpleReason.NOT_QUADRATIC)
    if c > tol:
        root = rational_root(c) if exact else None
        J = S / root if root is not None else np.asarray(S, dtype=float) / math.sqrt(c)
        result = Classification(Variant.SIMPLE_COMPLEX, a1=a1, a2_squared=c, S=S, J=J)
        p, q = signature(model.inner)
        if p != q:
            raise AssertionError(f"self-adjoint complex structure on signature ({p},{q})")
        return result
    if c < -tol:
        return Classification(Variant.NOT_SIMPLE, a1=a1, reason=NotSimpleReason.REAL_SPLIT)
    return Classification(Variant.NOT_SIMPLE, a1=a1, reason=NotSimpleReason.NILPOTENT_PART)
