"""Structure-constant algebras with two bilinear products.

Conventions
-----------
* A product on a space with basis ``e_1..e_n`` is a tensor ``c`` with
  ``e_i * e_j = sum_k c[i, j, k] e_k`` (array indices are 0-based).
* A linear map is a matrix in column convention: column ``j`` is the image
  of ``e_j``, so ``D(x) = M @ x``.
* Witnesses in reports use 1-based basis labels, matching ``e_1..e_n``.

Every axiom is checked on basis tuples only; multilinearity makes that
equivalent to checking all elements. ``poissonkit.census.exhaustive_oracle``
verifies this equivalence independently.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Iterable, Mapping, Optional, Tuple

import numpy as np

from .errors import DomainError, InputError
from .scalars import QQ, FieldSpec, Scalar


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Element:
    field: FieldSpec
    values: np.ndarray

    def __post_init__(self):
        vals = self.field.array(self.values)
        if vals.ndim != 1:
            raise InputError("element coordinates must be one-dimensional")
        object.__setattr__(self, "values", _frozen(vals))

    @classmethod
    def of(cls, coords: Iterable, field: FieldSpec = QQ) -> "Element":
        return cls(field, list(coords))

    @classmethod
    def basis(cls, n: int, i: int, field: FieldSpec = QQ) -> "Element":
        """The basis vector ``e_i`` (1-based) of an ``n``-dimensional space."""
        vals = field.zeros(n)
        vals[i - 1] = 1
        return cls(field, vals)

    @classmethod
    def zero(cls, n: int, field: FieldSpec = QQ) -> "Element":
        return cls(field, field.zeros(n))

    @property
    def dim(self) -> int:
        return len(self.values)

    @property
    def coords(self) -> Tuple[Scalar, ...]:
        return tuple(Scalar.of(v, self.field) for v in self.values)

    def is_zero(self) -> bool:
        return bool(self.field.is_zero(self.values).all())

    def _key(self):
        return (self.field, tuple(self.field.raw(v) for v in self.values))

    def __eq__(self, other):
        return isinstance(other, Element) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __add__(self, other: "Element") -> "Element":
        _check_pair(self, other)
        return Element(self.field, self.field.reduce(self.values + other.values))

    def __sub__(self, other: "Element") -> "Element":
        _check_pair(self, other)
        return Element(self.field, self.field.reduce(self.values - other.values))

    def __neg__(self) -> "Element":
        return Element(self.field, self.field.reduce(-self.values))

    def scale(self, s) -> "Element":
        s = self.field.raw(s)
        return Element(self.field, self.field.reduce(self.values * s))

    def format(self) -> Tuple[str, ...]:
        return tuple(self.field.format(v) for v in self.values)

    def __repr__(self):
        return f"Element({', '.join(self.format())}; {self.field})"


def _check_pair(x: Element, y: Element):
    if x.field != y.field:
        raise InputError(f"mixed fields: {x.field} and {y.field}")
    if x.dim != y.dim:
        raise InputError(f"dimension mismatch: {x.dim} vs {y.dim}")


@dataclass(frozen=True, eq=False)
class BilinearOp:
    field: FieldSpec
    coeffs: np.ndarray

    def __post_init__(self):
        c = self.field.array(self.coeffs)
        if c.ndim != 3 or not (c.shape[0] == c.shape[1] == c.shape[2]) or c.shape[0] < 1:
            raise InputError(f"structure constants must have shape (n, n, n), got {c.shape}")
        object.__setattr__(self, "coeffs", _frozen(c))

    @property
    def dim(self) -> int:
        return self.coeffs.shape[0]

    @classmethod
    def zero(cls, n: int, field: FieldSpec = QQ) -> "BilinearOp":
        return cls(field, field.zeros((n, n, n)))

    @classmethod
    def from_products(cls, n: int, table: Mapping[Tuple[int, int], Mapping[int, object]],
                      field: FieldSpec = QQ) -> "BilinearOp":
        """Build from ``{(i, j): {k: c}}`` meaning ``e_i * e_j = sum c e_k`` (1-based)."""
        c = field.zeros((n, n, n))
        for (i, j), image in table.items():
            for k, v in image.items():
                c[i - 1, j - 1, k - 1] = field.raw(v)
        return cls(field, c)

    @classmethod
    def antisymmetric(cls, n: int, table: Mapping[Tuple[int, int], Mapping[int, object]],
                      field: FieldSpec = QQ) -> "BilinearOp":
        """Like ``from_products`` for ``i < j``, filling ``[e_j, e_i] = -[e_i, e_j]``."""
        c = field.zeros((n, n, n))
        for (i, j), image in table.items():
            for k, v in image.items():
                v = field.raw(v)
                c[i - 1, j - 1, k - 1] = v
                c[j - 1, i - 1, k - 1] = field.neg(v)
        return cls(field, c)

    def coeff(self, i: int, j: int, k: int) -> Scalar:
        return Scalar.of(self.coeffs[i - 1, j - 1, k - 1], self.field)

    def __eq__(self, other):
        return (isinstance(other, BilinearOp) and self.field == other.field
                and np.array_equal(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.field, self.coeffs.tobytes() if self.coeffs.dtype != object
                     else tuple(self.coeffs.flat)))


@dataclass(frozen=True, eq=False)
class LinearMap:
    field: FieldSpec
    matrix: np.ndarray

    def __post_init__(self):
        m = self.field.array(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise InputError(f"linear map must be a square matrix, got shape {m.shape}")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def zero(cls, n: int, field: FieldSpec = QQ) -> "LinearMap":
        return cls(field, field.zeros((n, n)))

    @classmethod
    def identity(cls, n: int, field: FieldSpec = QQ) -> "LinearMap":
        return cls(field, field.identity(n))

    def __eq__(self, other):
        return (isinstance(other, LinearMap) and self.field == other.field
                and np.array_equal(self.matrix, other.matrix))

    def __hash__(self):
        return hash((self.field, tuple(self.matrix.flat)))


@dataclass(frozen=True)
class TwoProductAlgebra:
    """A space with a bracket (square or angle), a circle product, and optionally
    a derivation ``D`` and a scalar ``alpha``."""

    bracket: BilinearOp
    circle: BilinearOp
    derivation: Optional[LinearMap] = None
    alpha: Optional[Scalar] = None
    field: FieldSpec = dc_field(default=None)

    def __post_init__(self):
        f = self.field if self.field is not None else self.bracket.field
        object.__setattr__(self, "field", f)
        parts = [self.bracket, self.circle] + ([self.derivation] if self.derivation is not None else [])
        for part in parts:
            if part.field != f:
                raise InputError(f"component over {part.field} in an algebra over {f}")
            if part.dim != self.bracket.dim:
                raise InputError(f"dimension mismatch: {part.dim} vs {self.bracket.dim}")
        if self.alpha is not None:
            alpha = self.alpha if isinstance(self.alpha, Scalar) else Scalar.of(self.alpha, f)
            if alpha.field != f:
                raise InputError(f"alpha over {alpha.field} in an algebra over {f}")
            object.__setattr__(self, "alpha", alpha)

    @property
    def dim(self) -> int:
        return self.bracket.dim

    @classmethod
    def zero(cls, n: int, field: FieldSpec = QQ, with_derivation: bool = True) -> "TwoProductAlgebra":
        return cls(BilinearOp.zero(n, field), BilinearOp.zero(n, field),
                   LinearMap.zero(n, field) if with_derivation else None)

    def with_derivation(self, d: Optional[LinearMap]) -> "TwoProductAlgebra":
        return TwoProductAlgebra(self.bracket, self.circle, d, self.alpha, self.field)

    def with_alpha(self, alpha) -> "TwoProductAlgebra":
        return TwoProductAlgebra(self.bracket, self.circle, self.derivation, alpha, self.field)


# -- element-level evaluation ------------------------------------------------

def _check_op_element(op, x: Element):
    if x.field != op.field:
        raise InputError(f"element over {x.field} used with an operation over {op.field}")
    if x.dim != op.dim:
        raise InputError(f"dimension mismatch: element has dim {x.dim}, operation has dim {op.dim}")


def eval_bilinear(op: BilinearOp, x: Element, y: Element) -> Element:
    _check_op_element(op, x)
    _check_op_element(op, y)
    f = op.field
    partial = f.reduce(np.einsum("i,ijk->jk", x.values, op.coeffs))
    return Element(f, f.reduce(np.einsum("j,jk->k", y.values, partial)))


def eval_linear(d: LinearMap, x: Element) -> Element:
    _check_op_element(d, x)
    return Element(d.field, d.field.reduce(np.einsum("ij,j->i", d.matrix, x.values)))


def triple_circle(a: TwoProductAlgebra, x: Element, y: Element, z: Element) -> Element:
    """``(x o y) o z``; equal to any bracketing when the circle is associative."""
    return eval_bilinear(a.circle, eval_bilinear(a.circle, x, y), z)


def square_circle_jacobian(a: TwoProductAlgebra, x: Element, y: Element, z: Element) -> Element:
    """``[x, y o z] - [x, y] o z - y o [x, z]``."""
    b, c = a.bracket, a.circle
    return (eval_bilinear(b, x, eval_bilinear(c, y, z))
            - eval_bilinear(c, eval_bilinear(b, x, y), z)
            - eval_bilinear(c, y, eval_bilinear(b, x, z)))


def left_angle_jacobian(a: TwoProductAlgebra, x: Element, y: Element, z: Element) -> Element:
    """``<x, y o z> - <x, y> o z - y o <x, z>``; same shape as the square one."""
    return square_circle_jacobian(a, x, y, z)


def right_angle_jacobian(a: TwoProductAlgebra, x: Element, y: Element, z: Element) -> Element:
    """``<x o y, z> - x o <y, z> - <x, z> o y``."""
    b, c = a.bracket, a.circle
    return (eval_bilinear(b, eval_bilinear(c, x, y), z)
            - eval_bilinear(c, x, eval_bilinear(b, y, z))
            - eval_bilinear(c, eval_bilinear(b, x, z), y))


# -- basis tensors -------------------------------------------------------------

def nest_left(outer: np.ndarray, inner: np.ndarray, field: FieldSpec) -> np.ndarray:
    """``T[a, b, c] = outer(inner(e_a, e_b), e_c)``."""
    return field.reduce(np.einsum("abk,kcl->abcl", inner, outer))


def nest_right(outer: np.ndarray, inner: np.ndarray, field: FieldSpec) -> np.ndarray:
    """``T[a, b, c] = outer(e_a, inner(e_b, e_c))``."""
    return field.reduce(np.einsum("bck,akl->abcl", inner, outer))


def associator_tensor(c: np.ndarray, field: FieldSpec) -> np.ndarray:
    return field.reduce(nest_left(c, c, field) - nest_right(c, c, field))


def jacobi_tensor(b: np.ndarray, field: FieldSpec) -> np.ndarray:
    """``[e_a,[e_b,e_c]] + [e_b,[e_c,e_a]] + [e_c,[e_a,e_b]]``."""
    r = nest_right(b, b, field)
    return field.reduce(r + np.einsum("bcal->abcl", r) + np.einsum("cabl->abcl", r))


def right_leibniz_tensor(b: np.ndarray, field: FieldSpec) -> np.ndarray:
    """``<x,<y,z>> - <<x,y>,z> + <<x,z>,y>`` on basis triples."""
    left = nest_left(b, b, field)
    return field.reduce(nest_right(b, b, field) - left + np.einsum("acbl->abcl", left))


def square_jacobian_tensor(b: np.ndarray, c: np.ndarray, field: FieldSpec) -> np.ndarray:
    """``[x, y o z] - [x, y] o z - y o [x, z]`` on basis triples ``(x, y, z)``."""
    y_bxz = np.einsum("bacl->abcl", nest_right(c, b, field))
    return field.reduce(nest_right(b, c, field) - nest_left(c, b, field) - y_bxz)


def right_angle_jacobian_tensor(b: np.ndarray, c: np.ndarray, field: FieldSpec) -> np.ndarray:
    """``<x o y, z> - x o <y, z> - <x, z> o y`` on basis triples."""
    bxz_y = np.einsum("acbl->abcl", nest_left(c, b, field))
    return field.reduce(nest_left(b, c, field) - nest_right(c, b, field) - bxz_y)


def derivation_tensor(m: np.ndarray, p: np.ndarray, field: FieldSpec) -> np.ndarray:
    """``D(e_i * e_j) - D(e_i) * e_j - e_i * D(e_j)`` for each basis pair."""
    return field.reduce(np.einsum("ijk,lk->ijl", p, m)
                        - field.reduce(np.einsum("mi,mjl->ijl", m, p))
                        - field.reduce(np.einsum("mj,iml->ijl", m, p)))


def first_failure(residual: np.ndarray, field: FieldSpec) -> Optional[Tuple[Tuple[int, ...], np.ndarray]]:
    """Lexicographically smallest index (over all but the last axis) with a nonzero
    residual vector, as a 1-based tuple plus that vector; ``None`` if all vanish."""
    bad = ~field.is_zero(residual).all(axis=-1)
    hits = np.argwhere(bad)
    if len(hits) == 0:
        return None
    idx = tuple(int(i) for i in hits[0])
    return tuple(i + 1 for i in idx), residual[idx]


# -- axiom checks ---------------------------------------------------------------

@dataclass(frozen=True)
class AxiomCheck:
    """Outcome of one axiom; truthy iff it holds. ``witness`` is 1-based."""

    name: str
    holds: bool
    witness: Optional[Tuple[int, ...]] = None
    residual: Optional[Element] = None

    def __bool__(self):
        return self.holds


def _verdict(name: str, residual: np.ndarray, field: FieldSpec) -> AxiomCheck:
    hit = first_failure(residual, field)
    if hit is None:
        return AxiomCheck(name, True)
    return AxiomCheck(name, False, hit[0], Element(field, hit[1]))


def alternating_residual(b: np.ndarray, field: FieldSpec) -> np.ndarray:
    """Per basis pair: ``[e_i,e_i]`` on the diagonal, ``[e_i,e_j]+[e_j,e_i]`` above it,
    zero below (those pairs are covered by their mirror)."""
    n = b.shape[0]
    out = field.zeros(b.shape)
    for i in range(n):
        out[i, i] = b[i, i]
        for j in range(i + 1, n):
            out[i, j] = field.reduce(b[i, j] + b[j, i])
    return out


def is_associative(op: BilinearOp) -> AxiomCheck:
    return _verdict("circle-associativity", associator_tensor(op.coeffs, op.field), op.field)


def is_commutative(op: BilinearOp) -> AxiomCheck:
    c = op.coeffs
    return _verdict("commutativity", op.field.reduce(c - c.transpose(1, 0, 2)), op.field)


def is_alternating(op: BilinearOp) -> AxiomCheck:
    return _verdict("bracket-alternating", alternating_residual(op.coeffs, op.field), op.field)


def satisfies_jacobi(op: BilinearOp) -> AxiomCheck:
    return _verdict("bracket-jacobi", jacobi_tensor(op.coeffs, op.field), op.field)


def is_lie(op: BilinearOp) -> AxiomCheck:
    """Alternating plus Jacobi. On failure the check names the sub-axiom that
    failed first (alternating is tested before Jacobi)."""
    alt = is_alternating(op)
    if not alt:
        return alt
    jac = satisfies_jacobi(op)
    if not jac:
        return jac
    return AxiomCheck("bracket-lie", True)


def is_right_leibniz(op: BilinearOp) -> AxiomCheck:
    return _verdict("bracket-right-leibniz", right_leibniz_tensor(op.coeffs, op.field), op.field)


def is_derivation(d: LinearMap, op: BilinearOp, name: str = "derivation") -> AxiomCheck:
    if d.field != op.field or d.dim != op.dim:
        raise InputError("derivation and product must share field and dimension")
    return _verdict(name, derivation_tensor(d.matrix, op.coeffs, op.field), op.field)


# -- change of basis -------------------------------------------------------------

def inverse_matrix(m: np.ndarray, field: FieldSpec) -> np.ndarray:
    """Gauss-Jordan inverse over ``field``; raises DomainError if singular."""
    n = m.shape[0]
    a = [[field.raw(v) for v in row] + [field.one if i == j else field.zero for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise DomainError("matrix is singular")
        a[col], a[pivot] = a[pivot], a[col]
        inv = field.inv(a[col][col])
        a[col] = [field.mul(v, inv) for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                factor = a[r][col]
                a[r] = [field.add(v, field.neg(field.mul(factor, w))) for v, w in zip(a[r], a[col])]
    return field.array([row[n:] for row in a])


def change_basis(a: TwoProductAlgebra, p) -> TwoProductAlgebra:
    """Rewrite ``a`` in the basis whose j-th vector is column j of ``p``."""
    f = a.field
    p = f.array(p)
    q = inverse_matrix(p, f)

    def conj(c):
        t = f.reduce(np.einsum("ia,ijk->ajk", p, c))
        t = f.reduce(np.einsum("jb,ajk->abk", p, t))
        return f.reduce(np.einsum("ck,abk->abc", q, t))

    d = None
    if a.derivation is not None:
        d = LinearMap(f, f.reduce(q.dot(f.reduce(a.derivation.matrix.dot(p)))))
    return TwoProductAlgebra(BilinearOp(f, conj(a.bracket.coeffs)), BilinearOp(f, conj(a.circle.coeffs)),
                             d, a.alpha, f)
