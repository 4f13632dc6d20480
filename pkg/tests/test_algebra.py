import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from poissonkit import (QQ, BilinearOp, DomainError, Element, FieldSpec, InputError, LinearMap, Scalar,
                        TwoProductAlgebra, eval_bilinear, eval_linear)
from poissonkit.algebra import (change_basis, inverse_matrix, is_alternating, is_associative,
                                is_commutative, is_derivation, is_lie, is_right_leibniz,
                                right_angle_jacobian, satisfies_jacobi, square_circle_jacobian,
                                triple_circle)
from poissonkit.taxonomy import classify

from conftest import ad_matrix, m2_commutator, matrix_units, random_algebra, random_tensor

F2 = FieldSpec(2)


def test_basis_and_arithmetic():
    e1, e2 = Element.basis(2, 1), Element.basis(2, 2)
    x = e1.scale(Fraction(1, 2)) + e2.scale(3)
    assert x.format() == ("1/2", "3")
    assert (x - x).is_zero()
    assert -x == Element.of([Fraction(-1, 2), -3])
    with pytest.raises(InputError):
        e1 + Element.basis(3, 1)


def test_shapes_validated():
    with pytest.raises(InputError):
        BilinearOp(QQ, np.zeros((2, 2, 3), dtype=int))
    with pytest.raises(InputError):
        LinearMap(QQ, np.zeros((2, 3), dtype=int))
    with pytest.raises(InputError):
        TwoProductAlgebra(BilinearOp.zero(2), BilinearOp.zero(3))
    with pytest.raises(InputError):
        TwoProductAlgebra(BilinearOp.zero(2), BilinearOp.zero(2, F2))


def test_from_products_is_one_based():
    op = BilinearOp.from_products(2, {(1, 2): {1: 5}})
    assert op.coeff(1, 2, 1) == Scalar.of(5)
    assert op.coeffs[0, 1, 0] == 5
    prod = eval_bilinear(op, Element.basis(2, 1), Element.basis(2, 2))
    assert prod == Element.of([5, 0])


def test_antisymmetric_fills_mirror():
    op = BilinearOp.antisymmetric(2, {(1, 2): {2: 1}}, FieldSpec(3))
    assert op.coeffs[1, 0, 1] == 2


def test_linear_map_column_convention():
    d = LinearMap(QQ, [[0, 1], [0, 0]])
    assert eval_linear(d, Element.basis(2, 2)) == Element.basis(2, 1)
    assert eval_linear(d, Element.basis(2, 1)).is_zero()


def test_nonassociative_witness():
    # e1*e1 = e2, e1*e2 = e1; (e1 e1) e1 - e1 (e1 e1) = e2 e1 - e1 e2 = -e1
    op = BilinearOp.from_products(2, {(1, 1): {2: 1}, (1, 2): {1: 1}})
    res = is_associative(op)
    assert not res
    assert res.name == "circle-associativity"
    assert res.witness == (1, 1, 1)
    assert res.residual == Element.of([-1, 0])


def test_matrix_algebra_is_associative_not_commutative():
    comp = BilinearOp(QQ, matrix_units(2))
    assert is_associative(comp)
    assert not is_commutative(comp)


def test_commutator_is_lie_with_inner_derivations():
    a = m2_commutator()
    assert is_lie(a.bracket)
    assert is_lie(a.bracket).name == "bracket-lie"
    for i in range(4):
        d = LinearMap(QQ, ad_matrix(a.bracket.coeffs, i))
        assert is_derivation(d, a.bracket)
        assert is_derivation(d, a.circle)


def test_non_derivation_detected():
    a = m2_commutator()
    ident = LinearMap.identity(4)
    res = is_derivation(ident, a.circle)
    assert not res and res.witness is not None


def test_lie_failure_names_sub_axiom():
    assert is_lie(BilinearOp.from_products(2, {(1, 1): {2: 1}})).name == "bracket-alternating"
    # antisymmetric but Jacobi fails: [e1,e2]=e3, [e2,e3]=e1, [e1,e3]=e1
    op = BilinearOp.antisymmetric(3, {(1, 2): {3: 1}, (2, 3): {1: 1}, (1, 3): {1: 1}})
    assert is_alternating(op)
    res = is_lie(op)
    assert not res and res.name == "bracket-jacobi"


def test_right_leibniz_not_alternating():
    op = BilinearOp.from_products(2, {(1, 1): {2: 1}})
    assert is_right_leibniz(op)
    assert not is_alternating(op)


def test_char2_antisymmetric_but_not_alternating():
    # [e1,e1] = e1 equals -[e1,e1] in characteristic 2 but is not alternating
    op = BilinearOp.from_products(1, {(1, 1): {1: 1}}, F2)
    c = op.coeffs
    assert (c == (-c.transpose(1, 0, 2)) % 2).all()
    assert not is_alternating(op)


def _elements(p, n):
    for v in itertools.product(range(p), repeat=n):
        yield Element(FieldSpec(p), list(v))


@pytest.mark.parametrize("n", [1, 2])
def test_char2_alternating_exhaustive(n):
    """Basis-level alternating test agrees with [x,x]=0 on every element."""
    elems = list(_elements(2, n))
    for t in itertools.product(range(2), repeat=n**3):
        op = BilinearOp(F2, np.array(t).reshape(n, n, n))
        direct = all(eval_bilinear(op, x, x).is_zero() for x in elems)
        assert bool(is_alternating(op)) == direct


def test_inverse_matrix_singular():
    with pytest.raises(DomainError):
        inverse_matrix(QQ.array([[1, 2], [2, 4]]), QQ)
    m = QQ.array([[1, 2], [3, 4]])
    inv = inverse_matrix(m, QQ)
    assert (m.dot(inv) == QQ.identity(2)).all()


def test_tensor_jacobians_match_element_level(rng):
    """Residual tensors, contracted with random coordinates, equal the
    element-level formulas (multilinearity cross-check)."""
    from poissonkit.taxonomy import AlgebraTensors
    for _ in range(10):
        a = random_algebra(rng, QQ, 3)
        t = AlgebraTensors.of(a)
        x, y, z = (Element(QQ, random_tensor(rng, QQ, (3,))) for _ in range(3))
        for tensor, fn in [(t.square_jacobian, square_circle_jacobian),
                           (t.right_angle_jacobian, right_angle_jacobian),
                           (t.triple, triple_circle)]:
            contracted = np.einsum("a,b,c,abcl->l", x.values, y.values, z.values, tensor)
            assert Element(QQ, contracted) == fn(a, x, y, z)


# -- random Lie brackets ----------------------------------------------------------------

def _bianchi(sym, vec):
    """[e_i, e_j] = eps_ijk S e_k + a_i e_j - a_j e_i; Lie when S a = 0."""
    c = np.zeros((3, 3, 3), dtype=object)
    c.fill(0)
    eps = {(0, 1): 2, (1, 2): 0, (2, 0): 1}
    for (i, j), k in eps.items():
        col = [sym[r][k] for r in range(3)]
        for r in range(3):
            c[i, j, r] += col[r]
            c[j, i, r] -= col[r]
    for i in range(3):
        for j in range(3):
            c[i, j, j] += vec[i]
            c[i, j, i] -= vec[j]
    return c


def _random_lie(rng):
    kind = rng.integers(0, 3)
    if kind == 0:
        a, b = (int(v) for v in rng.integers(-3, 4, 2))
        return BilinearOp.antisymmetric(2, {(1, 2): {1: a, 2: b}})
    if kind == 1:
        s = rng.integers(-2, 3, (3, 3))
        s = s + s.T
        # pick a with S a = 0 when S is singular, else a = 0
        vec = [0, 0, 0]
        if rng.random() < 0.5:
            s[:, 0] = 0
            s[0, :] = 0
            vec = [int(rng.integers(-2, 3)), 0, 0]
        return BilinearOp(QQ, _bianchi(s.tolist(), vec))
    comm = m2_commutator()
    while True:
        p = random_tensor(rng, QQ, (4, 4))
        try:
            return change_basis(comm, p).bracket
        except DomainError:
            continue


def test_lie_implies_right_leibniz_on_random_lie_brackets(rng):
    for _ in range(120):
        op = _random_lie(rng)
        assert is_lie(op), op.coeffs
        assert is_right_leibniz(op)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_alternating_and_right_leibniz_imply_jacobi(seed):
    rng = np.random.default_rng(seed)
    op = BilinearOp(FieldSpec(3), random_tensor(rng, FieldSpec(3), (2, 2, 2)))
    if is_alternating(op) and is_right_leibniz(op):
        assert satisfies_jacobi(op)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=15, deadline=None)
def test_basis_change_preserves_classification(seed):
    rng = np.random.default_rng(seed)
    base = m2_commutator() if seed % 2 else random_algebra(rng, QQ, 2)
    n = base.dim
    d = LinearMap(QQ, ad_matrix(base.bracket.coeffs, int(rng.integers(0, n))))
    a = base.with_derivation(d)
    while True:
        p = random_tensor(rng, QQ, (n, n))
        try:
            b = change_basis(a, p)
            break
        except DomainError:
            continue
    assert classify(a) == classify(b)
