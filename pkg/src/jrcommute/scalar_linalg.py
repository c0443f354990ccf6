"""Exact rational scalars, dense matrices and bilinear-form predicates.

Exact values are :class:`fractions.Fraction` objects held in numpy arrays of
``dtype=object``; the floating alternative is a plain ``float64`` array.
Every routine here accepts either kind and keeps exact inputs exact.

Heavy contractions go through :func:`einsum` / :func:`contract_slots`, which
clear denominators and run the sum over Python integers.  That is roughly two
orders of magnitude faster than summing ``Fraction`` objects directly.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from math import isqrt, lcm
from numbers import Integral, Rational as _RationalABC
from typing import NamedTuple, Optional, Sequence, Union

import numpy as np

from .errors import DegenerateForm, DimensionMismatch, FormNotPositiveDefinite

Rational = Fraction
Scalar = Union[Fraction, float]

__all__ = [
    "Rational", "Scalar", "BilinearForm", "MinimalQuadratic", "IntScaled",
    "to_scalar", "exact_array", "float_array", "is_exact", "zeros", "identity",
    "einsum", "contract_slots", "scale_to_int", "det", "inverse", "max_abs",
    "allclose", "rational_root", "decongruence", "signature",
    "leading_principal_minors", "is_positive_definite", "is_skew_adjoint",
    "contraction_positive", "minimal_quadratic", "block_diag",
]


# -- scalars and arrays -------------------------------------------------------

def to_scalar(value) -> Scalar:
    """Coerce ``value`` to a Fraction, or to float when it is floating."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (bool, np.bool_)):
        return Fraction(int(value))
    if isinstance(value, (Integral, np.integer)):
        return Fraction(int(value))
    if isinstance(value, _RationalABC):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, (float, np.floating)):
        return float(value)
    raise TypeError(f"cannot interpret {value!r} as a scalar")


_to_fraction = np.frompyfunc(lambda v: to_scalar(v) if not isinstance(v, float) else Fraction(v), 1, 1)


def exact_array(data) -> np.ndarray:
    """Object array of Fractions built from ints, strings, Fractions."""
    arr = np.asarray(data, dtype=object)
    if arr.size == 0:
        return np.empty(arr.shape, dtype=object)
    out = _to_fraction(arr)
    return np.asarray(out, dtype=object).reshape(arr.shape)


def float_array(data) -> np.ndarray:
    return np.asarray(data, dtype=float)


def is_exact(arr) -> bool:
    if isinstance(arr, IntScaled):
        return True
    return np.asarray(arr).dtype == object


def zeros(shape, exact: bool = True) -> np.ndarray:
    if exact:
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out
    return np.zeros(shape)


def identity(m: int, exact: bool = True) -> np.ndarray:
    out = zeros((m, m), exact)
    for i in range(m):
        out[i, i] = Fraction(1) if exact else 1.0
    return out


def block_diag(*blocks: np.ndarray) -> np.ndarray:
    exact = all(is_exact(b) for b in blocks)
    n = sum(b.shape[0] for b in blocks)
    out = zeros((n, n), exact)
    at = 0
    for b in blocks:
        k = b.shape[0]
        out[at:at + k, at:at + k] = b if exact else np.asarray(b, dtype=float)
        at += k
    return out


def _coerce_pair(*arrays):
    """Return arrays all exact, or all float if any is floating."""
    if all(is_exact(a) for a in arrays):
        return arrays
    return tuple(_as_float(a) for a in arrays)


def _as_float(a) -> np.ndarray:
    if isinstance(a, IntScaled):
        return np.asarray(a.ints, dtype=float) / float(a.den)
    return np.asarray(a, dtype=float)


# -- integer-scaled kernels --------------------------------------------------

class IntScaled(NamedTuple):
    """An exact array stored as ``ints / den`` with a common denominator."""

    ints: np.ndarray
    den: int

    @property
    def shape(self):
        return self.ints.shape


def scale_to_int(arr) -> IntScaled:
    if isinstance(arr, IntScaled):
        return arr
    arr = np.asarray(arr, dtype=object)
    flat = arr.ravel()
    den = reduce(lcm, (f.denominator for f in flat), 1)
    ints = np.empty(arr.shape, dtype=object)
    iflat = ints.reshape(-1)
    for n, f in enumerate(flat):
        iflat[n] = f.numerator * (den // f.denominator)
    return IntScaled(ints, den)


def _unscale(ints, den: int):
    if np.ndim(ints) == 0:
        return Fraction(int(ints), den)
    arr = np.asarray(ints, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    oflat = out.reshape(-1)
    for n, v in enumerate(arr.ravel()):
        oflat[n] = Fraction(int(v), den)
    return out


def einsum(subscripts: str, *operands):
    """``numpy.einsum`` that stays exact for Fraction operands."""
    if all(is_exact(op) for op in operands):
        scaled = [scale_to_int(op) for op in operands]
        result = np.einsum(subscripts, *(s.ints for s in scaled))
        den = 1
        for s in scaled:
            den *= s.den
        return _unscale(result, den)
    return np.einsum(subscripts, *(_as_float(op) for op in operands))


def contract_slots(tensor, mats: Sequence[Optional[np.ndarray]]):
    """Apply ``mats[s]`` to slot ``s`` of ``tensor``.

    The result is ``T'[i,j,...] = sum T[a,b,...] M0[a,i] M1[b,j] ...``, i.e. the
    tensor evaluated on the columns of each matrix.  ``None`` leaves a slot as
    is.
    """
    ops = [tensor] + [m for m in mats if m is not None]
    if all(is_exact(op) for op in ops):
        cur = scale_to_int(tensor)
        ints, den = cur.ints, cur.den
        for slot, m in enumerate(mats):
            if m is None:
                continue
            ms = scale_to_int(m)
            ints = np.moveaxis(np.tensordot(ints, ms.ints, axes=([slot], [0])), -1, slot)
            den *= ms.den
        return _unscale(ints, den)
    out = _as_float(tensor)
    for slot, m in enumerate(mats):
        if m is None:
            continue
        out = np.moveaxis(np.tensordot(out, _as_float(m), axes=([slot], [0])), -1, slot)
    return out


def max_abs(arr) -> float:
    a = np.asarray(arr)
    if a.size == 0:
        return 0.0
    if a.dtype == object:
        return float(max(abs(v) for v in a.ravel()))
    return float(np.max(np.abs(a)))


def allclose(x, y, tol: float = 0.0) -> bool:
    """Exact equality when both sides are exact and ``tol == 0``."""
    x, y = _coerce_pair(x, y)
    if np.shape(x) != np.shape(y):
        return False
    if is_exact(x) and tol == 0:
        return bool(np.all(np.asarray(x) == np.asarray(y)))
    return max_abs(np.asarray(x, dtype=float) - np.asarray(y, dtype=float)) <= tol


# -- elementary exact linear algebra ------------------------------------------

def det(M) -> Scalar:
    M = np.asarray(M)
    n = M.shape[0]
    if M.shape != (n, n):
        raise DimensionMismatch(f"det of non-square {M.shape}")
    if n == 0:
        return Fraction(1) if M.dtype == object else 1.0
    if M.dtype != object:
        return float(np.linalg.det(M))
    a = [list(row) for row in M]
    result = Fraction(1)
    for k in range(n):
        piv = next((r for r in range(k, n) if a[r][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            result = -result
        result *= a[k][k]
        inv = 1 / a[k][k]
        for r in range(k + 1, n):
            f = a[r][k] * inv
            if f:
                for c in range(k, n):
                    a[r][c] -= f * a[k][c]
    return result


def inverse(M) -> np.ndarray:
    M = np.asarray(M)
    n = M.shape[0]
    if M.shape != (n, n):
        raise DimensionMismatch(f"inverse of non-square {M.shape}")
    if M.dtype != object:
        return np.linalg.inv(M)
    a = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for k in range(n):
        piv = next((r for r in range(k, n) if a[r][k] != 0), None)
        if piv is None:
            raise DegenerateForm("matrix is singular")
        a[k], a[piv] = a[piv], a[k]
        inv = 1 / a[k][k]
        a[k] = [v * inv for v in a[k]]
        for r in range(n):
            if r != k and a[r][k] != 0:
                f = a[r][k]
                a[r] = [vr - f * vk for vr, vk in zip(a[r], a[k])]
    return exact_array([row[n:] for row in a])


def rational_root(x: Fraction, n: int = 2) -> Optional[Fraction]:
    """Exact n-th root of a nonnegative rational, or None if irrational."""
    x = Fraction(x)
    if x < 0:
        return None

    def iroot(k: int) -> Optional[int]:
        if n == 2:
            r = isqrt(k)
        else:
            r = int(round(k ** (1.0 / n)))
            while r ** n > k:
                r -= 1
            while (r + 1) ** n <= k:
                r += 1
        return r if r ** n == k else None

    num, den = iroot(x.numerator), iroot(x.denominator)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def leading_principal_minors(M) -> list:
    M = np.asarray(M)
    return [det(M[:k, :k]) for k in range(1, M.shape[0] + 1)]


def is_positive_definite(M, tol: float = 0.0) -> bool:
    """Sylvester's criterion on leading principal minors."""
    M = np.asarray(M)
    if M.dtype == object:
        return all(v > 0 for v in leading_principal_minors(M))
    if not np.allclose(M, M.T, atol=max(tol, 1e-12)):
        return False
    try:
        np.linalg.cholesky(M)
    except np.linalg.LinAlgError:
        return False
    return bool(np.min(np.linalg.eigvalsh(M)) > tol)


def decongruence(gram, tol: float = 0.0):
    """Symmetric Gaussian elimination: returns ``(P, d)`` with ``P^T G P = diag(d)``.

    Columns of ``P`` form an orthogonal basis.  When no nonzero diagonal pivot
    is left, a basis vector ``e_i`` is replaced by ``e_i + e_j`` for an
    off-diagonal nonzero ``G_ij``, which produces the pivot ``2 G_ij``.
    """
    G = np.asarray(gram)
    exact = G.dtype == object
    m = G.shape[0]
    A = G.copy() if exact else np.array(G, dtype=float)
    P = identity(m, exact)
    nonzero = (lambda v: v != 0) if exact and tol == 0 else (lambda v: abs(v) > tol)

    for k in range(m):
        sub = [abs(A[i, i]) for i in range(k, m)]
        best = max(range(len(sub)), key=sub.__getitem__) if sub else None
        if best is None or not nonzero(A[k + best, k + best]):
            pair = None
            for i in range(k, m):
                for j in range(i + 1, m):
                    if nonzero(A[i, j]):
                        pair = (i, j)
                        break
                if pair:
                    break
            if pair is None:
                raise DegenerateForm(f"form is degenerate (rank {k} of {m})")
            i, j = pair
            A[:, i] = A[:, i] + A[:, j]
            A[i, :] = A[i, :] + A[j, :]
            P[:, i] = P[:, i] + P[:, j]
            piv = i
        else:
            piv = k + best
        if piv != k:
            A[[k, piv], :] = A[[piv, k], :]
            A[:, [k, piv]] = A[:, [piv, k]]
            P[:, [k, piv]] = P[:, [piv, k]]
        pk = A[k, k]
        for r in range(k + 1, m):
            if A[r, k] != 0:
                f = A[r, k] / pk
                A[r, :] = A[r, :] - f * A[k, :]
                A[:, r] = A[:, r] - f * A[:, k]
                P[:, r] = P[:, r] - f * P[:, k]
    return P, [A[k, k] for k in range(m)]


# -- bilinear forms ----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class BilinearForm:
    """Nondegenerate symmetric bilinear form given by its Gram matrix."""

    gram: np.ndarray

    def __post_init__(self):
        G = self.gram
        if not isinstance(G, np.ndarray) or (G.dtype != object and G.dtype != float):
            G = np.asarray(G)
            G = exact_array(G) if G.dtype == object or np.issubdtype(G.dtype, np.integer) else float_array(G)
            object.__setattr__(self, "gram", G)
        if G.ndim != 2 or G.shape[0] != G.shape[1]:
            raise DimensionMismatch(f"Gram matrix must be square, got {G.shape}")
        if G.dtype == object:
            if not np.all(G == G.T):
                raise ValueError("Gram matrix is not symmetric")
            if det(G) == 0:
                raise DegenerateForm("Gram matrix is singular")
        else:
            if not np.allclose(G, G.T, atol=1e-12, rtol=1e-12):
                raise ValueError("Gram matrix is not symmetric")
            if G.shape[0] and np.linalg.matrix_rank(G) < G.shape[0]:
                raise DegenerateForm("Gram matrix is singular")

    @classmethod
    def identity(cls, m: int) -> "BilinearForm":
        return cls(identity(m))

    @classmethod
    def diagonal(cls, entries) -> "BilinearForm":
        d = exact_array(entries) if all(not isinstance(e, float) for e in entries) else float_array(entries)
        G = zeros((len(d), len(d)), is_exact(d))
        for i, v in enumerate(d):
            G[i, i] = v
        return cls(G)

    @property
    def dim(self) -> int:
        return self.gram.shape[0]

    @property
    def exact(self) -> bool:
        return self.gram.dtype == object

    @cached_property
    def inverse(self) -> np.ndarray:
        return inverse(self.gram)

    def __call__(self, v, w):
        return np.asarray(v) @ self.gram @ np.asarray(w)

    def to_float(self) -> "BilinearForm":
        return BilinearForm(np.asarray(self.gram, dtype=float))

    def __repr__(self):
        return f"BilinearForm(dim={self.dim}, exact={self.exact})"


def _gram(g) -> np.ndarray:
    return g.gram if isinstance(g, BilinearForm) else np.asarray(g)


def signature(form) -> tuple:
    """Counts ``(p, q)`` of positive and negative directions, decided exactly."""
    _, d = decongruence(_gram(form))
    p = sum(1 for v in d if v > 0)
    return p, len(d) - p


def is_skew_adjoint(T, g, tol: float = 0.0) -> bool:
    """True iff ``g(Tv, w) = -g(v, Tw)``, i.e. ``G T`` is antisymmetric."""
    T = np.asarray(T)
    G = _gram(g)
    if T.ndim != 2 or T.shape[0] != T.shape[1] or T.shape[0] != G.shape[0]:
        raise DimensionMismatch(f"T {T.shape} does not act on a {G.shape[0]}-dim space")
    G, T = _coerce_pair(G, T)
    GT = G @ T
    return allclose(GT.T, -GT, tol)


def contraction_positive(T, g, tol: float = 0.0) -> bool:
    """True iff ``g(v,v) - g(Tv,Tv) > 0`` for all ``v != 0`` (``|T| < 1``)."""
    T = np.asarray(T)
    G = _gram(g)
    if T.shape != G.shape:
        raise DimensionMismatch(f"T {T.shape} does not act on a {G.shape[0]}-dim space")
    if not is_positive_definite(G):
        raise FormNotPositiveDefinite("contraction test needs a positive definite form")
    G, T = _coerce_pair(G, T)
    return is_positive_definite(G - T.T @ G @ T, tol)


class MinimalQuadratic(NamedTuple):
    a1: Scalar
    c: Scalar
    is_quadratic: bool


def minimal_quadratic(rho, tol: float = 0.0) -> MinimalQuadratic:
    """Test whether ``(rho - a1)^2 = -c`` for ``a1 = tr(rho)/m``.

    ``c`` is read from entry (0, 0) of ``-S^2`` with ``S = rho - a1``; the
    full matrix identity is then checked.
    """
    rho = np.asarray(rho)
    m = rho.shape[0]
    if rho.shape != (m, m):
        raise DimensionMismatch(f"rho must be square, got {rho.shape}")
    exact = rho.dtype == object
    if m == 0:
        return MinimalQuadratic(Fraction(0), Fraction(0), True)
    a1 = sum(rho[i, i] for i in range(m)) / m
    S = rho - a1 * identity(m, exact)
    S2 = S @ S
    c = -S2[0, 0]
    return MinimalQuadratic(a1, c, allclose(S2, -c * identity(m, exact), tol))
