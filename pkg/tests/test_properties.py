"""Property tests over structured random algebras."""
import numpy as np
from hypothesis import given, settings, strategies as st

from poissonkit import QQ, LinearMap, TwoProductAlgebra
from poissonkit.algebra import is_associative, is_commutative
from poissonkit.taxonomy import AlgebraTensors, StructureKind as K, check, classify, classify_reports

import pools
from conftest import random_commutative_associative, random_tensor

SC = [K.TAILED_SC_1, K.TAILED_SC_2, K.TAILED_SC_3, K.TAILED_SC_4,
      K.TAILED_SC_5, K.TAILED_SC_6, K.TAILED_SC_7, K.TAILED_SC_8]
LAC = [K.TAILED_LAC_1, K.TAILED_LAC_2, K.TAILED_LAC_3, K.TAILED_LAC_4,
       K.TAILED_LAC_5, K.TAILED_LAC_6]
RAC = [K.TAILED_RAC_1, K.TAILED_RAC_2, K.TAILED_RAC_3, K.TAILED_RAC_4]

seeds = st.integers(0, 2**32 - 1)


@given(seeds)
@settings(max_examples=80, deadline=None)
def test_zero_derivation_reduces_to_tailless(seed):
    rng = np.random.default_rng(seed)
    a = pools.structured_algebra(rng, with_derivation=False).with_derivation(LinearMap.zero(2, pools.F3))
    kinds = classify(a)
    for base, tailed in [(K.SQUARE_CIRCLE, SC), (K.LEFT_ANGLE_CIRCLE, LAC), (K.RIGHT_ANGLE_CIRCLE, RAC)]:
        assert all((k in kinds) == (base in kinds) for k in tailed)


@given(seeds)
@settings(max_examples=120, deadline=None)
def test_definition_implications(seed):
    rng = np.random.default_rng(seed)
    kinds = classify(pools.structured_algebra(rng, with_derivation=True))
    if K.TAILED_SC_5 in kinds:
        assert K.TAILED_SC_3 in kinds
    if K.TAILED_SC_1 in kinds:
        assert K.TAILED_SC_6 in kinds
    if K.TAILED_SC_8 in kinds:
        assert K.TAILED_SC_1 in kinds
    if K.TAILED_SC_4 in kinds:
        assert K.TAILED_SC_3 in kinds


@given(seeds, st.integers(1, 3))
@settings(max_examples=40, deadline=None)
def test_commutative_tail_rewrite(seed, n):
    rng = np.random.default_rng(seed)
    circle = random_commutative_associative(rng, n)
    assert is_commutative(circle) and is_associative(circle)
    t = AlgebraTensors(QQ, circle.coeffs, circle.coeffs, QQ.array(random_tensor(rng, QQ, (n, n))))
    assert (t.word(("y", "Dx", "z")) == t.word(("Dx", "y", "z"))).all()


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_check_is_deterministic(seed):
    rng = np.random.default_rng(seed)
    a = pools.structured_algebra(rng, with_derivation=True)
    assert classify_reports(a) == classify_reports(a)
    fresh = TwoProductAlgebra(a.bracket, a.circle, a.derivation)
    assert [check(k, fresh) for k in SC] == [check(k, a) for k in SC]
