from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings

from jrcommute.act_core import (
    CurvTensor, Model, constant_curvature, direct_sum, jacobi, perturb, ricci,
)
from jrcommute.ansatz import build_model, make_seed
from jrcommute.classify import (
    NotSimpleReason, Variant, classify_simple, commutes_jacobi_sampled, commutes_skew_sampled,
    commutes_slotwise,
)
from jrcommute.scalar_linalg import BilinearForm, exact_array, identity, signature

from test_act_core import random_models


def einstein_block(m, c, diag=None):
    g = BilinearForm.diagonal(diag or [1] * m)
    return Model(g, constant_curvature(m, c, g))


def brute_force_commutes(model, vectors):
    rho = ricci(model)
    return all(np.all(jacobi(model, x) @ rho == rho @ jacobi(model, x)) for x in vectors)


def test_einstein_model():
    cls = classify_simple(einstein_block(3, F(1, 2)))
    assert cls.variant is Variant.EINSTEIN
    assert cls.a1 == 1
    assert cls.to_json() == {"variant": "Einstein", "a1": "1"}


def test_zero_model_is_einstein_with_zero_constant():
    model = Model(BilinearForm.diagonal([1, 1, -1, -1]), CurvTensor.zero(4))
    cls = classify_simple(model)
    assert cls.variant is Variant.EINSTEIN and cls.a1 == 0


def test_two_einstein_blocks_split_real():
    model = direct_sum(einstein_block(2, 1), einstein_block(2, 3))
    assert commutes_slotwise(model)
    cls = classify_simple(model)
    assert cls.variant is Variant.NOT_SIMPLE
    assert cls.reason is NotSimpleReason.REAL_SPLIT
    assert cls.a1 == 2


def test_three_einstein_blocks_not_quadratic():
    model = direct_sum(direct_sum(einstein_block(2, 1), einstein_block(2, 2)), einstein_block(2, 4))
    cls = classify_simple(model)
    assert cls.variant is Variant.NOT_SIMPLE
    assert cls.reason is NotSimpleReason.NOT_QUADRATIC


def test_complexified_seed_is_simple_complex():
    g = BilinearForm.identity(2)
    seed = make_seed(g, constant_curvature(2, 1), constant_curvature(2, 3))
    model = build_model(seed)
    cls = classify_simple(model)
    assert cls.variant is Variant.SIMPLE_COMPLEX
    assert cls.a1 == 2 * seed.a1
    assert cls.a2_squared == 4 * seed.a2 ** 2
    assert abs(cls.a2 - 2 * float(seed.a2)) < 1e-12
    # S = rho - a1 is self-adjoint and squares to -a2^2
    S = cls.S
    G = model.gram
    assert np.all(G @ S == (G @ S).T)
    assert np.all(S @ S == -cls.a2_squared * identity(4))
    assert signature(model.inner) == (2, 2)
    assert np.allclose(cls.J @ cls.J, -np.eye(4), atol=1e-12)


def test_perturbed_model_does_not_commute():
    model = build_model(make_seed(BilinearForm.identity(2), constant_curvature(2, 1),
                                  constant_curvature(2, 2)))
    bad = perturb(model, (0, 2, 0, 2), 1)
    assert not commutes_slotwise(bad)
    assert classify_simple(bad).variant is Variant.NOT_COMMUTING
    assert not commutes_jacobi_sampled(bad)
    assert not commutes_skew_sampled(bad)


def test_slotwise_agrees_with_brute_force_on_mutants(corpus_models):
    from jrcommute.generators import mutants
    rng = np.random.default_rng(5)
    for model in mutants(corpus_models[:6], count=12, min_false=3, rng_seed=2):
        vectors = list(identity(model.dim).T) + [exact_array(rng.integers(-3, 4, model.dim))
                                                 for _ in range(4)]
        # brute force can only refute; when slotwise says True, it must not find a counterexample
        if commutes_slotwise(model):
            assert brute_force_commutes(model, vectors)
        else:
            assert not commutes_jacobi_sampled(model)


@settings(max_examples=25, deadline=None)
@given(random_models())
def test_three_commuting_tests_agree(model):
    a = commutes_slotwise(model)
    assert commutes_jacobi_sampled(model) == a
    assert commutes_skew_sampled(model) == a


def test_float_model_classification():
    g = BilinearForm.identity(2)
    seed = make_seed(g, constant_curvature(2, 0.5), constant_curvature(2, 1.25))
    cls = classify_simple(build_model(seed))
    assert cls.variant is Variant.SIMPLE_COMPLEX
    assert abs(cls.a1 - 1.0) < 1e-12
    assert abs(cls.a2_squared - 4 * 1.25 ** 2) < 1e-9


@pytest.mark.parametrize("variant", list(Variant))
def test_variant_names_are_stable(variant):
    assert variant.value in {"Einstein", "SimpleComplex", "NotSimple", "NotCommuting"}
