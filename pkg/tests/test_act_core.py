import itertools
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from jrcommute.act_core import (
    CurvTensor, Model, canonical_key, canonical_keys, constant_curvature, direct_sum,
    find_violation, is_einstein, jacobi, kaehler_like, perturb, ricci,
    ricci_unsymmetrized, ricci_via_inverse_metric, skew_curv, standard_complex_structure,
    validate_act,
)
from jrcommute.errors import DimensionMismatch, InvalidTensor, PhiNotComplexStructure
from jrcommute.scalar_linalg import BilinearForm, decongruence, exact_array, identity, inverse


def gauss_type_dense(phis, coeffs):
    """Sum of c * (phi(x,w) phi(y,z) - phi(x,z) phi(y,w)) over symmetric phi."""
    m = phis[0].shape[0]
    out = np.zeros((m,) * 4, dtype=object)
    out[...] = F(0)
    for phi, c in zip(phis, coeffs):
        out = out + c * (np.einsum("xw,yz->xyzw", phi, phi) - np.einsum("xz,yw->xyzw", phi, phi))
    return out


@st.composite
def random_models(draw, m=4):
    k = draw(st.integers(1, 3))
    phis, coeffs = [], []
    for _ in range(k):
        xs = draw(st.lists(st.integers(-3, 3), min_size=m * m, max_size=m * m))
        P = exact_array(np.array(xs).reshape(m, m))
        phis.append(P + P.T)
        coeffs.append(F(draw(st.integers(-3, 3)), draw(st.integers(1, 3))))
    diag = draw(st.lists(st.sampled_from([1, -1, 2, -3]), min_size=m, max_size=m))
    return Model(BilinearForm.diagonal(diag), CurvTensor.from_dense(gauss_type_dense(phis, coeffs)))


def test_canonical_key_signs():
    assert canonical_key(0, 1, 0, 1) == (1, (0, 1, 0, 1))
    assert canonical_key(1, 0, 0, 1) == (-1, (0, 1, 0, 1))
    assert canonical_key(0, 1, 1, 0) == (-1, (0, 1, 0, 1))
    assert canonical_key(0, 0, 1, 2)[1] is None
    assert len(list(canonical_keys(2))) == 1
    # dim of algebraic curvature tensors is m^2(m^2-1)/12 after Bianchi; stored keys are more
    assert len(list(canonical_keys(4))) >= 20


def test_dense_has_storage_symmetries():
    A = constant_curvature(3, F(2, 3), BilinearForm(exact_array([[2, 1, 0], [1, 2, 0], [0, 0, 1]]))).dense
    assert np.all(A == -A.transpose(1, 0, 2, 3))
    assert np.all(A == -A.transpose(0, 1, 3, 2))
    assert np.all(A == A.transpose(2, 3, 0, 1))
    assert np.all(A + A.transpose(1, 2, 0, 3) + A.transpose(2, 0, 1, 3) == 0)


def test_lone_four_index_component_fails_bianchi():
    t = CurvTensor(4, {(0, 1, 2, 3): F(1)})
    assert not validate_act(t)
    name, quad = find_violation(t)
    assert "Bianchi" in name
    assert sorted(quad) == [0, 1, 2, 3]


def test_from_dense_reports_first_antisymmetry_violation():
    arr = np.zeros((2,) * 4, dtype=object)
    arr[...] = F(0)
    arr[0, 1, 0, 1] = F(1)
    with pytest.raises(InvalidTensor) as info:
        CurvTensor.from_dense(arr)
    assert info.value.quadruple is not None
    assert "(" in str(info.value)


def test_model_rejects_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        Model(BilinearForm.identity(3), CurvTensor.zero(2))


@pytest.mark.parametrize("m, c", [(2, 1), (3, F(-1, 2)), (4, 2), (5, F(3, 7))])
def test_constant_curvature_ricci_sign(m, c):
    model = Model(BilinearForm.identity(m), constant_curvature(m, c))
    assert np.all(ricci(model) == c * (m - 1) * identity(m))
    assert is_einstein(model) == c * (m - 1)
    # sectional-curvature convention: A(e1,e2,e1,e2) = -c
    assert model.tensor[0, 1, 0, 1] == -c


def test_constant_curvature_golden_dimension_four():
    model = Model(BilinearForm.identity(4), constant_curvature(4, 2))
    assert is_einstein(model) == 6


def test_jacobi_matches_closed_form_for_constant_curvature():
    G = exact_array([[2, 1, 0], [1, 3, 1], [0, 1, 4]])
    c = F(5, 3)
    model = Model(BilinearForm(G), constant_curvature(3, c, G))
    x = exact_array([1, F(-1, 2), 2])
    y = exact_array([0, 3, F(1, 5)])
    xx, xy = x @ G @ x, x @ G @ y
    assert np.all(jacobi(model, x) @ y == c * (xx * y - xy * x))


def test_skew_curvature_matches_closed_form():
    G = exact_array([[1, 0, 0], [0, -1, 0], [0, 0, 2]])
    c = F(-2)
    model = Model(BilinearForm(G), constant_curvature(3, c, G))
    x, y, z = exact_array([1, 2, 0]), exact_array([0, 1, 1]), exact_array([3, 0, 1])
    # <R(x,y)z, w> = c(g(x,w)g(y,z) - g(x,z)g(y,w))  =>  R(x,y)z = c(g(y,z) x - g(x,z) y)
    expected = c * ((y @ G @ z) * x - (x @ G @ z) * y)
    assert np.all(skew_curv(model, x, y) @ z == expected)


def test_jacobi_matches_geometry_engine_on_neutral_example():
    from jrcommute.geometry import neutral_example_metric, riemann_model_at
    metric = neutral_example_metric(1)
    point = [F(1), F(-2), F(5), F(1, 3)]
    model = riemann_model_at(metric, point)
    R = metric.curvature
    G = metric.evaluate(point)
    x = exact_array([1, 2, -1, 3])
    B = exact_array([[sum(R[y, a, b, z](point) * x[a] * x[b] for a in range(4) for b in range(4))
                      for y in range(4)] for z in range(4)])
    assert np.all(jacobi(model, x) == inverse(G) @ B)


@settings(max_examples=25, deadline=None)
@given(random_models(), st.lists(st.integers(-3, 3), min_size=8, max_size=8))
def test_operator_symmetries(model, xs):
    G = model.gram
    x, y = exact_array(xs[:4]), exact_array(xs[4:])
    Jx = jacobi(model, x)
    assert np.all(G @ Jx == (G @ Jx).T)
    assert np.all(Jx @ x == 0)
    R = skew_curv(model, x, y)
    assert np.all(G @ R == -(G @ R).T)
    assert np.all(R == -skew_curv(model, y, x))


@settings(max_examples=25, deadline=None)
@given(random_models(), st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_ricci_trace_identities(model, xs):
    rho = ricci(model)
    assert np.all(rho == ricci_via_inverse_metric(model))
    form = model.gram @ rho
    assert np.all(form == form.T)
    x = exact_array(xs)
    assert np.trace(jacobi(model, x)) == x @ form @ x


@settings(max_examples=20, deadline=None)
@given(random_models(), st.lists(st.integers(-2, 2), min_size=16, max_size=16))
def test_ricci_independent_of_orthogonal_basis(model, qs):
    Q = exact_array(np.array(qs).reshape(4, 4)) + 11 * identity(4)
    P0, d = decongruence(Q.T @ model.gram @ Q)
    P = Q @ P0
    assert np.all(ricci(model, (P, d)) == ricci(model))


@settings(max_examples=20, deadline=None)
@given(random_models())
def test_symmetrized_and_one_sided_ricci_agree(model):
    assert np.all(ricci(model) == ricci_unsymmetrized(model))


def test_kaehler_like_example_and_einstein_constant():
    t = kaehler_like(standard_complex_structure(2))
    assert t.components == {(0, 1, 0, 1): F(-3)}
    for m in (2, 4, 6):
        model = Model(BilinearForm.identity(m), kaehler_like(standard_complex_structure(m)))
        assert is_einstein(model) == 3


def test_kaehler_like_rejects_bad_phi():
    with pytest.raises(PhiNotComplexStructure):
        kaehler_like(exact_array([[0, 2], [-2, 0]]))
    with pytest.raises(PhiNotComplexStructure):
        kaehler_like(exact_array([[0, 1], [-1, 0]]), BilinearForm.diagonal([1, 2]))
    with pytest.raises(PhiNotComplexStructure):
        standard_complex_structure(3)


def test_direct_sum_blocks_and_ricci():
    a = Model(BilinearForm.identity(2), constant_curvature(2, 1))
    b = Model(BilinearForm.diagonal([1, -1, 1]), constant_curvature(3, 2, BilinearForm.diagonal([1, -1, 1])))
    s = direct_sum(a, b)
    assert s.dim == 5
    rho = ricci(s)
    assert np.all(rho[:2, :2] == ricci(a)) and np.all(rho[2:, 2:] == ricci(b))
    assert not rho[:2, 2:].any() and not rho[2:, :2].any()
    empty = Model(BilinearForm(exact_array(np.zeros((0, 0), dtype=int))), CurvTensor.zero(0))
    assert direct_sum(a, empty).tensor == a.tensor
    assert ricci(empty).shape == (0, 0)


def test_perturb_keeps_symmetries_and_refuses_distinct_indices():
    base = Model(BilinearForm.identity(4), constant_curvature(4, 1))
    out = perturb(base, (0, 1, 0, 2), F(1, 2))
    assert validate_act(out.tensor)
    with pytest.raises(ValueError):
        perturb(base, (0, 1, 2, 3), 1)


def test_tensor_arithmetic():
    a = constant_curvature(3, 1)
    b = constant_curvature(3, 2)
    assert a + a == b
    assert b - a == a
    assert -a == a * -1
    assert (a - a).components == {}


def test_float_models_validate_with_tolerance():
    a = constant_curvature(3, 0.1)
    model = Model(BilinearForm(np.eye(3)), a)
    assert abs(is_einstein(model, 1e-12) - 0.2) < 1e-12
    dense = np.asarray(a.dense, dtype=float)
    dense[0, 1, 0, 1] += 1e-3
    dense[1, 0, 1, 0] += 1e-3
    with pytest.raises(InvalidTensor):
        CurvTensor.from_dense(dense, 1e-9)


def test_exhaustive_check_needs_sampling_above_threshold():
    big = CurvTensor.zero(9)
    with pytest.raises(ValueError):
        find_violation(big)
    assert find_violation(big, sampled=True) is None


def test_constant_curvature_all_components_brute_force():
    G = exact_array([[1, 0, 0], [0, 2, 1], [0, 1, 3]])
    t = constant_curvature(3, F(1, 2), G)
    for i, j, k, l in itertools.product(range(3), repeat=4):
        expected = F(1, 2) * (G[i, l] * G[j, k] - G[i, k] * G[j, l])
        assert t[i, j, k, l] == expected
