"""The complexification construction and its verification report.

A seed ``(V0, g, A1, A2)`` with ``g`` positive definite and ``A1``, ``A2``
Einstein is turned into a neutral-signature model on ``V0 + i V0``.  The
basis is always ordered ``e_1+ .. e_p+, e_1- .. e_p-`` where ``e_i- = i e_i+``
is timelike.  In that basis a component with ``n`` minus-indices equals

    n = 0, 4:  +A1      n = 1:  -A2      n = 2:  -A1      n = 3:  +A2

(the real part of ``i^n (A1 + i A2)``).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .act_core import CurvTensor, Model, default_tol, find_violation, is_einstein, ricci
from .errors import InvalidTensor, SeedInvariantViolation
from .report import Report
from .scalar_linalg import (
    BilinearForm, Scalar, allclose, block_diag, identity, is_positive_definite, signature, zeros,
)

# coefficient and source tensor (1 or 2) by number of minus-indices
SIGN_TABLE = {0: (1, 1), 1: (-1, 2), 2: (-1, 1), 3: (1, 2), 4: (1, 1)}


@dataclass(frozen=True, eq=False)
class Seed:
    """Positive definite form with two Einstein tensors; constants are recomputed."""

    g: BilinearForm
    A1: CurvTensor
    A2: CurvTensor
    a1: Scalar
    a2: Scalar

    @property
    def p(self) -> int:
        return self.g.dim

    @property
    def exact(self) -> bool:
        return self.g.exact and self.A1.exact and self.A2.exact

    def __repr__(self):
        return f"Seed(p={self.p}, a1={self.a1}, a2={self.a2}, exact={self.exact})"


def make_seed(g, A1: CurvTensor, A2: CurvTensor, tol: Optional[float] = None) -> Seed:
    """Validate ``(g, A1, A2)`` and read the Einstein constants off the Ricci operators."""
    g = g if isinstance(g, BilinearForm) else BilinearForm(g)
    if A1.dim != g.dim or A2.dim != g.dim:
        raise SeedInvariantViolation("seed dimensions disagree")
    if not is_positive_definite(g.gram):
        raise SeedInvariantViolation("seed form is not positive definite")
    exact = g.exact and A1.exact and A2.exact
    if tol is None:
        tol = 0.0 if exact else max(default_tol(A1), default_tol(A2))
    constants = []
    for name, A in (("A1", A1), ("A2", A2)):
        bad = find_violation(A, tol)
        if bad is not None:
            raise SeedInvariantViolation(f"{name} is not a curvature tensor: {InvalidTensor(*bad)}")
        a = is_einstein(Model(g, A, tol=tol), tol)
        if a is None:
            raise SeedInvariantViolation(f"{name} is not Einstein")
        constants.append(a)
    return Seed(g, A1, A2, constants[0], constants[1])


def complexify(g: BilinearForm, A1: CurvTensor, A2: CurvTensor) -> Model:
    """Real model of ``Re(A1 + i A2)`` on ``V0 + i V0``, filled from the sign table."""
    p = g.dim
    exact = g.exact and A1.exact and A2.exact
    D1, D2 = A1.dense, A2.dense
    if not exact:
        D1, D2 = np.asarray(D1, dtype=float), np.asarray(D2, dtype=float)
    full = zeros((2 * p,) * 4, exact)
    for minus in itertools.product((0, 1), repeat=4):
        sign, which = SIGN_TABLE[sum(minus)]
        block = tuple(slice(p * b, p * (b + 1)) for b in minus)
        full[block] = sign * (D1 if which == 1 else D2)
    G = g.gram if exact else np.asarray(g.gram, dtype=float)
    gram = block_diag(G, -G)
    tensor = CurvTensor.from_dense(full)
    return Model(BilinearForm(gram), tensor)


def build_model(seed: Seed) -> Model:
    return complexify(seed.g, seed.A1, seed.A2)


def complex_structure(p: int, exact: bool = True) -> np.ndarray:
    """Multiplication by ``i``: ``e_i+ -> e_i-`` and ``e_i- -> -e_i+``."""
    J = zeros((2 * p, 2 * p), exact)
    one = Fraction(1) if exact else 1.0
    for i in range(p):
        J[p + i, i] = one
        J[i, p + i] = -one
    return J


def verify_ansatz(seed: Seed) -> Report:
    """Exact checks that the constructed model is simple, non-Einstein and commuting.

    Checks: Ricci operator sends ``e_i+-`` to ``2 a1 e_i+- +- 2 a2 e_i-+``;
    classification is SimpleComplex with constants ``(2 a1, 4 a2^2)``;
    ``rho - 2 a1`` equals ``2 a2`` times multiplication by ``i``; the
    slotwise commuting test holds; signature is ``(p, p)``.
    """
    from .classify import Variant, classify_simple, commutes_slotwise

    if not seed.a2 > 0:
        raise SeedInvariantViolation(f"a2 must be positive, got {seed.a2}")
    model = build_model(seed)
    tol = model.tol
    p, exact = seed.p, model.exact
    J = complex_structure(p, exact)
    two = 2 if exact else 2.0
    expected_rho = two * seed.a1 * identity(2 * p, exact) + two * seed.a2 * J
    rho = ricci(model)
    report = Report(subject=f"complexified seed p={p}")
    report.add("ricci_complex_scalar", allclose(rho, expected_rho, tol),
               "rho e_i(+-) = 2 a1 e_i(+-) +- 2 a2 e_i(-+)")
    cls = classify_simple(model)
    ok = (cls.variant is Variant.SIMPLE_COMPLEX and allclose([cls.a1], [two * seed.a1], tol)
          and allclose([cls.a2_squared], [4 * seed.a2 ** 2], tol))
    report.add("classification", ok, f"{cls.variant.value} a1={cls.a1} a2^2={cls.a2_squared}")
    ok_S = cls.S is not None and allclose(cls.S, two * seed.a2 * J, tol)
    report.add("complex_structure_is_i", ok_S, "rho - 2 a1 = 2 a2 * (multiplication by i)")
    report.add("jacobi_ricci_commuting", commutes_slotwise(model), "slotwise test")
    sig = signature(model.inner)
    report.add("neutral_signature", sig == (p, p), f"signature {sig}")
    report.scalars.update({"a1": seed.a1, "a2": seed.a2, "rho_a1": cls.a1, "rho_a2_squared": cls.a2_squared})
    return report
