"""Algebraic curvature tensors and the models built on them.

A :class:`CurvTensor` keeps one representative per orbit of the symmetries

    A(x,y,z,w) = -A(y,x,z,w) = A(z,w,x,y)

namely index quadruples with ``i < j``, ``k < l`` and ``(i, j) <= (k, l)``.
The first Bianchi identity is *not* implied by that storage and is checked
by :func:`validate_act`.

Operator conventions (all matrices act on column vectors)::

    <J(x) y, z>     = A(y, x, x, z)
    <R(x, y) z, w>  = A(x, y, z, w)
    <rho x, y>      = tr{ z -> R(z,x)y/2 + R(z,y)x/2 }

With these, ``constant_curvature(m, c, g)`` has ``rho = c (m - 1) id``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterator, Optional, Tuple

import numpy as np

from .errors import DimensionMismatch, InvalidTensor, PhiNotComplexStructure
from .scalar_linalg import (
    BilinearForm, Scalar, allclose, block_diag, decongruence, einsum,
    exact_array, identity, is_exact, scale_to_int, to_scalar, zeros,
)

Quad = Tuple[int, int, int, int]

# dense Bianchi / symmetry checks are exhaustive up to this dimension
EXHAUSTIVE_DIM = 8


def canonical_key(i: int, j: int, k: int, l: int) -> Tuple[int, Optional[Quad]]:
    """Map a quadruple to ``(sign, representative)``; ``(0, None)`` if forced zero."""
    if i == j or k == l:
        return 0, None
    sign = 1
    if i > j:
        i, j, sign = j, i, -sign
    if k > l:
        k, l, sign = l, k, -sign
    if (i, j) > (k, l):
        i, j, k, l = k, l, i, j
    return sign, (i, j, k, l)


def canonical_keys(m: int) -> Iterator[Quad]:
    pairs = [(i, j) for i in range(m) for j in range(i + 1, m)]
    for a, (i, j) in enumerate(pairs):
        for k, l in pairs[a:]:
            yield (i, j, k, l)


def orbit(key: Quad) -> Iterator[Tuple[int, Quad]]:
    """The eight signed images of a representative under the storage symmetries."""
    i, j, k, l = key
    for a, b, s1 in ((i, j, 1), (j, i, -1)):
        for c, d, s2 in ((k, l, 1), (l, k, -1)):
            yield s1 * s2, (a, b, c, d)
            yield s1 * s2, (c, d, a, b)


@dataclass(frozen=True, eq=False)
class CurvTensor:
    dim: int
    components: Dict[Quad, Scalar] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for key, value in self.components.items():
            key = tuple(int(x) for x in key)
            sign, canon = canonical_key(*key)
            if canon != key:
                raise ValueError(f"{key} is not a canonical index quadruple")
            if any(not 0 <= x < self.dim for x in key):
                raise DimensionMismatch(f"index {key} out of range for dim {self.dim}")
            value = to_scalar(value)
            if value != 0:
                clean[key] = value
        object.__setattr__(self, "components", clean)

    @classmethod
    def zero(cls, dim: int) -> "CurvTensor":
        return cls(dim, {})

    @classmethod
    def from_dense(cls, arr, tol: float = 0.0) -> "CurvTensor":
        """Read representatives off a dense array after checking the storage symmetries.

        Raises :class:`InvalidTensor` if antisymmetry or pair symmetry fails.
        Bianchi is not checked here.
        """
        arr = np.asarray(arr)
        m = arr.shape[0]
        bad = _storage_violation(arr, tol)
        if bad is not None:
            raise InvalidTensor(*bad)
        comps = {key: arr[key] for key in canonical_keys(m)}
        if not is_exact(arr):
            comps = {k: float(v) for k, v in comps.items() if abs(v) > 0}
        return cls(m, comps)

    @property
    def exact(self) -> bool:
        return all(isinstance(v, Fraction) for v in self.components.values())

    def __getitem__(self, quad) -> Scalar:
        sign, key = canonical_key(*quad)
        if key is None:
            return Fraction(0)
        return sign * self.components.get(key, Fraction(0))

    @cached_property
    def dense(self) -> np.ndarray:
        """Full ``m^4`` array expanded from the representatives."""
        exact = self.exact
        out = zeros((self.dim,) * 4, exact)
        for key, value in self.components.items():
            for sign, quad in orbit(key):
                out[quad] = sign * value
        return out

    def to_float(self) -> "CurvTensor":
        return CurvTensor(self.dim, {k: float(v) for k, v in self.components.items()})

    def __add__(self, other: "CurvTensor") -> "CurvTensor":
        if other.dim != self.dim:
            raise DimensionMismatch("tensor dimensions differ")
        comps = dict(self.components)
        for k, v in other.components.items():
            comps[k] = comps.get(k, Fraction(0)) + v
        return CurvTensor(self.dim, comps)

    def __neg__(self) -> "CurvTensor":
        return CurvTensor(self.dim, {k: -v for k, v in self.components.items()})

    def __sub__(self, other: "CurvTensor") -> "CurvTensor":
        return self + (-other)

    def __mul__(self, c) -> "CurvTensor":
        c = to_scalar(c)
        return CurvTensor(self.dim, {k: c * v for k, v in self.components.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, CurvTensor) and self.dim == other.dim and self.components == other.components

    __hash__ = None

    def __repr__(self):
        return f"CurvTensor(dim={self.dim}, nonzero={len(self.components)})"


def _first_violation(mask: np.ndarray) -> Optional[Quad]:
    idx = np.argwhere(mask)
    return tuple(int(v) for v in idx[0]) if len(idx) else None


def _nonzero_mask(arr, tol: float) -> np.ndarray:
    arr = np.asarray(arr)
    if arr.dtype == object and tol == 0:
        return arr != 0
    return np.abs(np.asarray(arr, dtype=float)) > tol


def _storage_violation(arr, tol: float):
    checks = (
        ("antisymmetry in slots 1,2", arr + np.transpose(arr, (1, 0, 2, 3))),
        ("antisymmetry in slots 3,4", arr + np.transpose(arr, (0, 1, 3, 2))),
        ("pair symmetry", arr - np.transpose(arr, (2, 3, 0, 1))),
    )
    for name, residual in checks:
        quad = _first_violation(_nonzero_mask(residual, tol))
        if quad is not None:
            return name, quad
    return None


def bianchi_residual(arr) -> np.ndarray:
    """``B[i,j,k,l] = A[i,j,k,l] + A[j,k,i,l] + A[k,i,j,l]``."""
    arr = np.asarray(arr)
    return arr + np.transpose(arr, (2, 0, 1, 3)) + np.transpose(arr, (1, 2, 0, 3))


def find_violation(tensor, tol: float = 0.0, sampled: bool = False,
                   samples: int = 4096, rng_seed: int = 0):
    """Return ``(symmetry_name, quadruple)`` for the first failure, else None."""
    arr = tensor.dense if isinstance(tensor, CurvTensor) else np.asarray(tensor)
    m = arr.shape[0] if arr.ndim else 0
    if arr.ndim != 4 or arr.shape != (m,) * 4:
        raise DimensionMismatch(f"expected an m^4 array, got {arr.shape}")
    if m > EXHAUSTIVE_DIM and not sampled:
        raise ValueError(f"dim {m} > {EXHAUSTIVE_DIM}: pass sampled=True for a sampled check")
    if sampled and m > EXHAUSTIVE_DIM:
        rng = np.random.default_rng(rng_seed)
        quads = rng.integers(0, m, size=(samples, 4))
        for i, j, k, l in quads:
            a = arr[i, j, k, l]
            for name, other in (("antisymmetry in slots 1,2", arr[j, i, k, l] + a),
                                ("antisymmetry in slots 3,4", arr[i, j, l, k] + a),
                                ("pair symmetry", arr[k, l, i, j] - a),
                                ("first Bianchi identity", a + arr[j, k, i, l] + arr[k, i, j, l])):
                if abs(other) > tol:
                    return name, (i, j, k, l)
        return None
    bad = _storage_violation(arr, tol)
    if bad is not None:
        return bad
    quad = _first_violation(_nonzero_mask(bianchi_residual(arr), tol))
    if quad is not None:
        return "first Bianchi identity", quad
    return None


def validate_act(tensor, tol: float = 0.0, sampled: bool = False) -> bool:
    """True iff ``tensor`` has every symmetry of a curvature tensor."""
    return find_violation(tensor, tol, sampled) is None


def default_tol(tensor: CurvTensor) -> float:
    if tensor.exact:
        return 0.0
    scale = max((abs(v) for v in tensor.components.values()), default=1.0)
    return 1e-9 * max(1.0, scale)


@dataclass(frozen=True, eq=False)
class Model:
    """A curvature model: inner product plus algebraic curvature tensor."""

    inner: BilinearForm
    tensor: CurvTensor
    tol: Optional[float] = None

    def __post_init__(self):
        if not isinstance(self.inner, BilinearForm):
            object.__setattr__(self, "inner", BilinearForm(self.inner))
        if self.inner.dim != self.tensor.dim:
            raise DimensionMismatch(f"form has dim {self.inner.dim}, tensor has dim {self.tensor.dim}")
        tol = default_tol(self.tensor) if self.tol is None else self.tol
        object.__setattr__(self, "tol", tol)
        bad = find_violation(self.tensor, tol, sampled=self.dim > EXHAUSTIVE_DIM)
        if bad is not None:
            raise InvalidTensor(*bad)

    @property
    def dim(self) -> int:
        return self.inner.dim

    @property
    def exact(self) -> bool:
        return self.inner.exact and self.tensor.exact

    @cached_property
    def gram(self) -> np.ndarray:
        return self.inner.gram if self.exact else np.asarray(self.inner.gram, dtype=float)

    @cached_property
    def gram_inverse(self) -> np.ndarray:
        return self.inner.inverse if self.exact else np.linalg.inv(self.gram)

    @cached_property
    def A(self):
        """Dense tensor; exact models keep it integer-scaled for fast contraction."""
        if self.exact:
            return scale_to_int(self.tensor.dense)
        return np.asarray(self.tensor.dense, dtype=float)

    @cached_property
    def dense(self) -> np.ndarray:
        return self.tensor.dense if self.exact else self.A

    def __repr__(self):
        return f"Model(dim={self.dim}, exact={self.exact}, nonzero={len(self.tensor.components)})"


def _vector(model: Model, x) -> np.ndarray:
    x = np.asarray(x)
    if x.shape != (model.dim,):
        raise DimensionMismatch(f"vector of length {model.dim} expected, got {x.shape}")
    if model.exact and x.dtype != float:
        return exact_array(x)
    return np.asarray(x, dtype=float)


def jacobi(model: Model, x) -> np.ndarray:
    """Matrix of the Jacobi operator ``J(x)`` in the standard basis."""
    x = _vector(model, x)
    B = einsum("yabz,a,b->zy", model.A, x, x)
    return model.gram_inverse @ B


def skew_curv(model: Model, x, y) -> np.ndarray:
    """Matrix of the skew-symmetric curvature operator ``R(x, y)``."""
    x, y = _vector(model, x), _vector(model, y)
    B = einsum("abzw,a,b->wz", model.A, x, y)
    return model.gram_inverse @ B


def _trace_terms(model: Model, basis=None):
    """``C[k,x,y] = A(p_k, e_x, e_y, p_k) / <p_k, p_k>`` over an orthogonal basis."""
    if basis is None:
        P, d = decongruence(model.gram)
    else:
        P, d = basis
    C = einsum("ak,bk,axyb->kxy", P, P, model.A)
    w = [1 / v for v in d]
    return sum(w[k] * C[k] for k in range(len(w)))


def ricci_form(model: Model, basis=None) -> np.ndarray:
    """Symmetric bilinear form ``<rho x, y>`` as a matrix."""
    if model.dim == 0:
        return zeros((0, 0), model.exact)
    C = _trace_terms(model, basis)
    half = Fraction(1, 2) if model.exact else 0.5
    return half * (C + C.T)


def ricci(model: Model, basis=None) -> np.ndarray:
    """Ricci operator; ``basis = (P, d)`` overrides the internal orthogonal basis."""
    if model.dim == 0:
        return zeros((0, 0), model.exact)
    return model.gram_inverse @ ricci_form(model, basis)


def ricci_unsymmetrized(model: Model) -> np.ndarray:
    """Ricci operator from the one-sided trace ``tr{z -> R(z,x)y}``."""
    if model.dim == 0:
        return zeros((0, 0), model.exact)
    return model.gram_inverse @ _trace_terms(model)


def is_einstein(model: Model, tol: float = 0.0) -> Optional[Scalar]:
    """Einstein constant if ``rho = a id`` (within ``tol``), else None."""
    if model.dim == 0:
        return Fraction(0)
    rho = ricci(model)
    a = rho[0, 0]
    if allclose(rho, a * identity(model.dim, is_exact(rho)), tol):
        return a
    return None


def _as_form(g) -> BilinearForm:
    return g if isinstance(g, BilinearForm) else BilinearForm(g)


def constant_curvature(m: int, c, g=None) -> CurvTensor:
    """``A(x,y,z,w) = c (g(x,w) g(y,z) - g(x,z) g(y,w))``."""
    g = BilinearForm.identity(m) if g is None else _as_form(g)
    if g.dim != m:
        raise DimensionMismatch(f"form has dim {g.dim}, expected {m}")
    c = to_scalar(c)
    G = g.gram if isinstance(c, Fraction) else np.asarray(g.gram, dtype=float)
    A = c * (einsum("xw,yz->xyzw", G, G) - einsum("xz,yw->xyzw", G, G))
    return CurvTensor.from_dense(A)


def kaehler_like(phi, g=None) -> CurvTensor:
    """Curvature tensor built from a complex structure ``phi`` skew-adjoint for ``g``.

    With ``f(x, y) = g(phi x, y)`` this is
    ``f(x,w) f(y,z) - f(x,z) f(y,w) - 2 f(x,y) f(z,w)``, which is Einstein
    with constant 3 for every dimension.
    """
    phi = np.asarray(phi)
    phi = exact_array(phi) if phi.dtype != float else phi
    m = phi.shape[0]
    g = BilinearForm.identity(m) if g is None else _as_form(g)
    if phi.shape != (m, m) or g.dim != m:
        raise DimensionMismatch("phi and g disagree in dimension")
    G = g.gram if is_exact(phi) else np.asarray(g.gram, dtype=float)
    tol = 0.0 if is_exact(phi) else 1e-12
    f = phi.T @ G
    if not allclose(f, -f.T, tol):
        raise PhiNotComplexStructure("phi is not skew-adjoint")
    if not allclose(phi @ phi, -identity(m, is_exact(phi)), tol):
        raise PhiNotComplexStructure("phi does not square to -id")
    two = 2 if is_exact(phi) else 2.0
    A = (einsum("xw,yz->xyzw", f, f) - einsum("xz,yw->xyzw", f, f)
         - two * einsum("xy,zw->xyzw", f, f))
    return CurvTensor.from_dense(A)


def standard_complex_structure(m: int) -> np.ndarray:
    """``phi`` with ``phi e_i = e_{i+n}``, ``phi e_{i+n} = -e_i`` for ``m = 2n``."""
    if m % 2:
        raise PhiNotComplexStructure(f"no complex structure in odd dimension {m}")
    n = m // 2
    phi = zeros((m, m))
    for i in range(n):
        phi[n + i, i] = Fraction(1)
        phi[i, n + i] = Fraction(-1)
    return phi


def direct_sum(m1: Model, m2: Model) -> Model:
    """Orthogonal direct sum; tensor components never mix the two blocks."""
    exact = m1.exact and m2.exact
    G1, G2 = m1.gram, m2.gram
    if not exact:
        G1, G2 = np.asarray(G1, dtype=float), np.asarray(G2, dtype=float)
    gram = block_diag(G1, G2)
    shift = m1.dim
    comps = dict(m1.tensor.components)
    for (i, j, k, l), v in m2.tensor.components.items():
        comps[(i + shift, j + shift, k + shift, l + shift)] = v
    tensor = CurvTensor(m1.dim + m2.dim, comps)
    return Model(BilinearForm(gram), tensor if exact else tensor.to_float())


def perturb(model: Model, key: Quad, delta) -> Model:
    """Model with one stored component shifted by ``delta``.

    Only representatives with a repeated index are allowed, since for those
    the Bianchi identity is automatic.
    """
    if len(set(key)) == 4:
        raise ValueError("perturbing a component with four distinct indices breaks Bianchi")
    sign, canon = canonical_key(*key)
    if canon is None:
        raise ValueError(f"{key} is identically zero")
    comps = dict(model.tensor.components)
    comps[canon] = comps.get(canon, Fraction(0)) + sign * to_scalar(delta)
    return Model(model.inner, CurvTensor(model.dim, comps))


def ricci_via_inverse_metric(model: Model) -> np.ndarray:
    """Ricci operator from ``sum_{k,l} G^{kl} A(e_k, x, y, e_l)`` with no diagonalization."""
    Gi = model.gram_inverse
    form = einsum("lk,kxyl->xy", Gi, model.A)
    return Gi @ form
