"""The 21 Poisson-type structures as checkable specifications.

Each kind is a bracket axiom (Lie or right Leibniz), an associative circle
product, optionally a derivation ``D`` of both products, and an identity of
the form ``Jacobian(x, y, z) = tail(x, y, z)`` where the tail is a signed sum
of triple circle products with ``D`` (possibly scaled by ``alpha``) applied to
one factor. Some kinds add side conditions on triple products.

Triple products are read with left association ``(u o v) o w``.
"""
from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, List, Optional, Tuple

import numpy as np

from .algebra import (
    Element,
    TwoProductAlgebra,
    alternating_residual,
    associator_tensor,
    derivation_tensor,
    first_failure,
    jacobi_tensor,
    nest_left,
    right_angle_jacobian_tensor,
    right_leibniz_tensor,
    square_jacobian_tensor,
)
from .errors import InputError
from .scalars import FieldSpec, Scalar


class StructureKind(enum.Enum):
    SQUARE_CIRCLE = "square-circle"
    LEFT_ANGLE_CIRCLE = "left-angle-circle"
    RIGHT_ANGLE_CIRCLE = "right-angle-circle"
    TAILED_SC_1 = "tailed-sc-1"
    TAILED_SC_2 = "tailed-sc-2"
    TAILED_SC_3 = "tailed-sc-3"
    TAILED_SC_4 = "tailed-sc-4"
    TAILED_SC_5 = "tailed-sc-5"
    TAILED_SC_6 = "tailed-sc-6"
    TAILED_SC_7 = "tailed-sc-7"
    TAILED_SC_8 = "tailed-sc-8"
    TAILED_LAC_1 = "tailed-lac-1"
    TAILED_LAC_2 = "tailed-lac-2"
    TAILED_LAC_3 = "tailed-lac-3"
    TAILED_LAC_4 = "tailed-lac-4"
    TAILED_LAC_5 = "tailed-lac-5"
    TAILED_LAC_6 = "tailed-lac-6"
    TAILED_RAC_1 = "tailed-rac-1"
    TAILED_RAC_2 = "tailed-rac-2"
    TAILED_RAC_3 = "tailed-rac-3"
    TAILED_RAC_4 = "tailed-rac-4"

    @property
    def index(self) -> int:
        return _KIND_ORDER[self]

    @classmethod
    def from_name(cls, name: str) -> "StructureKind":
        try:
            return cls(name)
        except ValueError:
            valid = ", ".join(k.value for k in cls)
            raise InputError(f"unknown kind {name!r}; valid kinds: {valid}") from None

    def __str__(self):
        return self.value


_KIND_ORDER = {k: i for i, k in enumerate(StructureKind)}
ALL_KINDS: Tuple[StructureKind, ...] = tuple(StructureKind)


class BracketAxiom(enum.Enum):
    LIE = "lie"
    RIGHT_LEIBNIZ = "right-leibniz"


class Jacobian(enum.Enum):
    SQUARE = "J[x,y,*,z]"
    LEFT_ANGLE = "Jl<x,y,*,z>"
    RIGHT_ANGLE = "Jr<x,*,y,z>"


class AlphaMode(enum.Enum):
    NONE = "none"
    ANY = "any-scalar"
    NONZERO = "nonzero-scalar"


@dataclass(frozen=True)
class Term:
    """``sign * u o v o w`` where ``word`` names the three factors in order,
    e.g. ``("y", "Dx", "z")`` is ``y o D(x) o z``."""

    sign: int
    word: Tuple[str, str, str]
    alpha: bool = False

    def describe(self) -> str:
        factors = []
        for f in self.word:
            if f.startswith("D"):
                factors.append(f"(aD)({f[1]})" if self.alpha else f"D({f[1]})")
            else:
                factors.append(f)
        return "*".join(factors)


@dataclass(frozen=True)
class SideCondition:
    """``lhs = rhs`` on all triples; ``rhs is None`` means ``lhs = 0``."""

    lhs: Tuple[str, str, str]
    rhs: Optional[Tuple[str, str, str]] = None

    @property
    def name(self) -> str:
        lhs = Term(1, self.lhs).describe()
        rhs = "0" if self.rhs is None else Term(1, self.rhs).describe()
        return f"side:{lhs}={rhs}"


@dataclass(frozen=True)
class KindSpec:
    kind: StructureKind
    bracket_axiom: BracketAxiom
    jacobian: Jacobian
    needs_derivation: bool
    alpha_mode: AlphaMode
    tail: Tuple[Term, ...]
    side_conditions: Tuple[SideCondition, ...] = ()

    def describe(self) -> str:
        if not self.tail:
            rhs = "0"
        else:
            rhs = ""
            for i, t in enumerate(self.tail):
                sign = "-" if t.sign < 0 else ("+" if i else "")
                rhs += (f" {sign} " if i else sign) + t.describe()
        parts = [f"{self.jacobian.value} = {rhs}"]
        parts += [s.name[len("side:"):] for s in self.side_conditions]
        return "; ".join(parts)


def _w(text: str) -> Tuple[str, str, str]:
    word = tuple(text.split())
    assert len(word) == 3
    return word


# Reusable tails.
_XY_DZ = (Term(1, _w("x y Dz")), Term(-1, _w("y x Dz")))
_DY_ZX = (Term(1, _w("Dy z x")), Term(-1, _w("Dy x z")))
_DY_XZ = (Term(1, _w("Dy x z")), Term(-1, _w("Dy z x")))

_K = StructureKind


def _spec(kind, jac, tail=(), side=(), alpha=AlphaMode.NONE, tailed=True):
    bracket = BracketAxiom.LIE if jac is Jacobian.SQUARE else BracketAxiom.RIGHT_LEIBNIZ
    return KindSpec(kind, bracket, jac, tailed, alpha, tuple(tail), tuple(side))


_SPECS: Dict[StructureKind, KindSpec] = {s.kind: s for s in [
    _spec(_K.SQUARE_CIRCLE, Jacobian.SQUARE, tailed=False),
    _spec(_K.LEFT_ANGLE_CIRCLE, Jacobian.LEFT_ANGLE, tailed=False),
    _spec(_K.RIGHT_ANGLE_CIRCLE, Jacobian.RIGHT_ANGLE, tailed=False),
    _spec(_K.TAILED_SC_1, Jacobian.SQUARE, _XY_DZ),
    _spec(_K.TAILED_SC_2, Jacobian.SQUARE, [Term(1, _w("y Dx z"))]),
    _spec(_K.TAILED_SC_3, Jacobian.SQUARE, _DY_ZX + (Term(1, _w("y Dx z"), alpha=True),),
          alpha=AlphaMode.ANY),
    _spec(_K.TAILED_SC_4, Jacobian.SQUARE, _DY_ZX,
          [SideCondition(_w("x y Dz")), SideCondition(_w("x Dy z"))]),
    _spec(_K.TAILED_SC_5, Jacobian.SQUARE, (Term(1, _w("y Dx z"), alpha=True),) + _DY_ZX,
          alpha=AlphaMode.NONZERO),
    _spec(_K.TAILED_SC_6, Jacobian.SQUARE,
          (Term(1, _w("Dy z x"), alpha=True), Term(-1, _w("Dy x z"), alpha=True)) + _XY_DZ,
          alpha=AlphaMode.ANY),
    _spec(_K.TAILED_SC_7, Jacobian.SQUARE, (Term(1, _w("y Dx z"), alpha=True),) + _XY_DZ,
          alpha=AlphaMode.NONZERO),
    _spec(_K.TAILED_SC_8, Jacobian.SQUARE, _XY_DZ,
          [SideCondition(_w("Dx y z")), SideCondition(_w("x Dy z"))]),
    _spec(_K.TAILED_LAC_1, Jacobian.LEFT_ANGLE, _XY_DZ),
    _spec(_K.TAILED_LAC_2, Jacobian.LEFT_ANGLE, _XY_DZ,
          [SideCondition(_w("x Dy z")), SideCondition(_w("Dx y z"))]),
    _spec(_K.TAILED_LAC_3, Jacobian.LEFT_ANGLE, _DY_XZ),
    _spec(_K.TAILED_LAC_4, Jacobian.LEFT_ANGLE, _DY_XZ,
          [SideCondition(_w("x y Dz"), _w("x Dy z"))]),
    _spec(_K.TAILED_LAC_5, Jacobian.LEFT_ANGLE,
          _XY_DZ + (Term(-1, _w("Dy x z")), Term(1, _w("Dy z x")))),
    _spec(_K.TAILED_LAC_6, Jacobian.LEFT_ANGLE, _XY_DZ,
          [SideCondition(_w("x Dy z"), _w("Dx y z"))]),
    _spec(_K.TAILED_RAC_1, Jacobian.RIGHT_ANGLE, (Term(1, _w("x z Dy")), Term(-1, _w("z x Dy")))),
    _spec(_K.TAILED_RAC_2, Jacobian.RIGHT_ANGLE, (Term(1, _w("x z Dy")), Term(-1, _w("z x Dy"))),
          [SideCondition(_w("x Dy z"), _w("Dx y z"))]),
    _spec(_K.TAILED_RAC_3, Jacobian.RIGHT_ANGLE, (Term(1, _w("Dx y z")), Term(-1, _w("Dx z y")))),
    _spec(_K.TAILED_RAC_4, Jacobian.RIGHT_ANGLE, (Term(1, _w("Dx y z")), Term(-1, _w("Dx z y"))),
          [SideCondition(_w("x y Dz")), SideCondition(_w("x Dy z"))]),
]}

assert len(_SPECS) == len(StructureKind)


def kind_spec(kind: StructureKind) -> KindSpec:
    return _SPECS[kind]


# -- tensors shared by all kinds on one algebra -----------------------------------

_VAR_INDEX = {"x": "a", "y": "b", "z": "c"}
_D_FREE = ("triple", "alternating", "jacobi", "right_leibniz", "associator",
           "square_jacobian", "right_angle_jacobian")


class AlgebraTensors:
    """Lazily computed basis-triple tensors of one algebra.

    Every residual has shape ``(n, n, n, n)``: three basis indices for
    ``(x, y, z)`` and one output coordinate. Products of raw arrays only,
    so the census can feed tensors without building algebra objects.
    """

    def __init__(self, field: FieldSpec, bracket: np.ndarray, circle: np.ndarray,
                 derivation: Optional[np.ndarray] = None):
        self.field = field
        self.bracket = bracket
        self.circle = circle
        self.derivation = derivation
        self._words: Dict[Tuple[str, str, str], np.ndarray] = {}
        self._tails: Dict[Tuple[Term, ...], Tuple[np.ndarray, np.ndarray]] = {}

    @classmethod
    def of(cls, a: TwoProductAlgebra) -> "AlgebraTensors":
        d = a.derivation.matrix if a.derivation is not None else None
        return cls(a.field, a.bracket.coeffs, a.circle.coeffs, d)

    def with_derivation(self, derivation: Optional[np.ndarray]) -> "AlgebraTensors":
        """Same products with another ``D``; tensors not involving ``D`` are shared."""
        t = AlgebraTensors(self.field, self.bracket, self.circle, derivation)
        for name in _D_FREE:
            if name in self.__dict__:
                t.__dict__[name] = self.__dict__[name]
        t._words = {w: v for w, v in self._words.items() if not any(f.startswith("D") for f in w)}
        return t

    @cached_property
    def triple(self):
        return nest_left(self.circle, self.circle, self.field)

    @cached_property
    def alternating(self):
        return alternating_residual(self.bracket, self.field)

    @cached_property
    def jacobi(self):
        return jacobi_tensor(self.bracket, self.field)

    @cached_property
    def right_leibniz(self):
        return right_leibniz_tensor(self.bracket, self.field)

    @cached_property
    def associator(self):
        return associator_tensor(self.circle, self.field)

    @cached_property
    def derivation_of_bracket(self):
        return derivation_tensor(self.derivation, self.bracket, self.field)

    @cached_property
    def derivation_of_circle(self):
        return derivation_tensor(self.derivation, self.circle, self.field)

    @cached_property
    def square_jacobian(self):
        return square_jacobian_tensor(self.bracket, self.circle, self.field)

    @cached_property
    def right_angle_jacobian(self):
        return right_angle_jacobian_tensor(self.bracket, self.circle, self.field)

    def jacobian(self, which: Jacobian):
        # The left angle-circle Jacobian has the square-circle formula.
        if which is Jacobian.RIGHT_ANGLE:
            return self.right_angle_jacobian
        return self.square_jacobian

    def word(self, word: Tuple[str, str, str]) -> np.ndarray:
        """``u o v o w`` on basis triples, ``D`` applied where marked."""
        if word not in self._words:
            subs, d_var = "", None
            for factor in word:
                if factor.startswith("D"):
                    d_var = _VAR_INDEX[factor[1]]
                    subs += "m"
                else:
                    subs += _VAR_INDEX[factor]
            if d_var is None:
                t = np.einsum(f"{subs}l->abcl", self.triple)
            else:
                t = np.einsum(f"{subs}l,m{d_var}->abcl", self.triple, self.derivation)
            self._words[word] = self.field.reduce(t)
        return self._words[word]

    def tail_parts(self, spec: KindSpec):
        """``(fixed, scaled)`` so that ``tail = fixed + alpha * scaled``."""
        if spec.tail not in self._tails:
            self._tails[spec.tail] = self._tail_parts(spec)
        return self._tails[spec.tail]

    def _tail_parts(self, spec: KindSpec):
        f = self.field
        n = self.circle.shape[0]
        fixed, scaled = f.zeros((n,) * 4), f.zeros((n,) * 4)
        for t in spec.tail:
            w = self.word(t.word)
            if t.alpha:
                scaled = scaled + t.sign * w
            else:
                fixed = fixed + t.sign * w
        return f.reduce(fixed), f.reduce(scaled)

    def alpha_system(self, spec: KindSpec):
        """``(base, coeff)`` with identity residual ``base - alpha * coeff``."""
        fixed, scaled = self.tail_parts(spec)
        base = self.field.reduce(self.jacobian(spec.jacobian) - fixed)
        return base, scaled


# -- reports --------------------------------------------------------------------------

@dataclass(frozen=True)
class Failure:
    axiom: str
    witness: Optional[Tuple[int, ...]] = None
    residual: Optional[Element] = None


@dataclass(frozen=True)
class AxiomReport:
    kind: StructureKind
    passed: bool
    alpha_used: Optional[Scalar]
    failures: Tuple[Failure, ...]

    def failure(self, axiom: str) -> Optional[Failure]:
        return next((f for f in self.failures if f.axiom == axiom), None)

    @property
    def failed_axioms(self) -> List[str]:
        return [f.axiom for f in self.failures]


class AlphaStatus(enum.Enum):
    NO_SOLUTION = "no-solution"
    UNIQUE = "unique"
    ALL_SCALARS = "all-scalars"


@dataclass(frozen=True)
class AlphaSolution:
    status: AlphaStatus
    value: Optional[Scalar] = None

    def __str__(self):
        if self.status is AlphaStatus.UNIQUE:
            return f"unique {self.value}"
        return self.status.value


def _failure(name: str, residual: np.ndarray, field: FieldSpec) -> Optional[Failure]:
    hit = first_failure(residual, field)
    if hit is None:
        return None
    return Failure(name, hit[0], Element(field, hit[1]))


def _solve(base: np.ndarray, coeff: np.ndarray, field: FieldSpec):
    """Solve ``base = alpha * coeff`` componentwise; returns (status, raw alpha)."""
    nz = np.argwhere(~field.is_zero(coeff))
    if len(nz) == 0:
        status = AlphaStatus.ALL_SCALARS if field.is_zero(base).all() else AlphaStatus.NO_SOLUTION
        return status, None
    idx = tuple(nz[0])
    alpha = field.compact(field.raw(field.div(base[idx], coeff[idx])))
    if field.is_zero(field.reduce(base - alpha * coeff)).all():
        return AlphaStatus.UNIQUE, alpha
    return AlphaStatus.NO_SOLUTION, alpha


def _resolve_alpha(spec: KindSpec, tensors: AlgebraTensors):
    base, coeff = tensors.alpha_system(spec)
    status, raw = _solve(base, coeff, tensors.field)
    if spec.alpha_mode is AlphaMode.NONZERO and status is AlphaStatus.UNIQUE and raw == 0:
        status = AlphaStatus.NO_SOLUTION
    return status, raw, base, coeff


def solve_alpha(kind: StructureKind, a: TwoProductAlgebra) -> AlphaSolution:
    """Find the scalars ``alpha`` making the identity of ``kind`` hold on ``a``.

    Ignores ``a.alpha`` and the base axioms; only the identity is solved.
    For kinds that demand a nonzero scalar, a unique solution of 0 counts as
    no solution.
    """
    spec = kind_spec(kind)
    if spec.alpha_mode is AlphaMode.NONE:
        raise InputError(f"kind {kind} has no scalar parameter")
    if a.derivation is None:
        raise InputError(f"kind {kind} requires a derivation")
    status, raw, _, _ = _resolve_alpha(spec, AlgebraTensors.of(a))
    if status is AlphaStatus.UNIQUE:
        return AlphaSolution(status, Scalar.of(raw, a.field))
    return AlphaSolution(status)


def base_failures(spec: KindSpec, t: AlgebraTensors) -> List[Failure]:
    """Bracket axiom, circle associativity and (tailed kinds) the derivation rules."""
    f = t.field
    found = []
    if spec.bracket_axiom is BracketAxiom.LIE:
        found.append(_failure("bracket-alternating", t.alternating, f))
        found.append(_failure("bracket-jacobi", t.jacobi, f))
    else:
        found.append(_failure("bracket-right-leibniz", t.right_leibniz, f))
    found.append(_failure("circle-associativity", t.associator, f))
    if spec.needs_derivation:
        found.append(_failure("derivation-bracket", t.derivation_of_bracket, f))
        found.append(_failure("derivation-circle", t.derivation_of_circle, f))
    return [x for x in found if x is not None]


def identity_failures(spec: KindSpec, t: AlgebraTensors, alpha=None):
    """Identity and side conditions. ``alpha`` is a raw user-supplied value or
    ``None`` to solve for it. Returns ``(failures, raw alpha used or None)``."""
    f = t.field
    found = []
    used = None
    if spec.alpha_mode is AlphaMode.NONE:
        fixed, _ = t.tail_parts(spec)
        found.append(_failure("identity", f.reduce(t.jacobian(spec.jacobian) - fixed), f))
    elif alpha is not None:
        used = alpha
        if spec.alpha_mode is AlphaMode.NONZERO and alpha == 0:
            found.append(Failure("alpha-nonzero"))
        base, coeff = t.alpha_system(spec)
        found.append(_failure("identity", f.reduce(base - alpha * coeff), f))
    else:
        status, raw, base, coeff = _resolve_alpha(spec, t)
        if status is AlphaStatus.ALL_SCALARS:
            used = f.one
        elif status is AlphaStatus.UNIQUE:
            used = raw
        elif raw is not None and raw == 0 and spec.alpha_mode is AlphaMode.NONZERO \
                and f.is_zero(f.reduce(base - raw * coeff)).all():
            found.append(Failure("alpha-nonzero"))
        else:
            trial = raw if raw is not None else f.zero
            found.append(_failure("identity", f.reduce(base - trial * coeff), f))
    for side in spec.side_conditions:
        lhs = t.word(side.lhs)
        residual = lhs if side.rhs is None else f.reduce(lhs - t.word(side.rhs))
        found.append(_failure(side.name, residual, f))
    return [x for x in found if x is not None], used


def evaluate(kind: StructureKind, t: AlgebraTensors, alpha=None) -> AxiomReport:
    """Full report from precomputed tensors; ``alpha`` is raw or ``None``."""
    spec = kind_spec(kind)
    found = base_failures(spec, t)
    rest, used = identity_failures(spec, t, alpha)
    found += rest
    used_scalar = Scalar.of(used, t.field) if used is not None else None
    return AxiomReport(kind, not found, used_scalar, tuple(found))


def check(kind: StructureKind, a: TwoProductAlgebra, tensors: Optional[AlgebraTensors] = None) -> AxiomReport:
    """Verify every axiom of ``kind`` on ``a`` and report all failures.

    Raises InputError when a tailed kind is checked without a derivation.
    A user-supplied ``a.alpha`` is used as-is; otherwise alpha is solved for.
    """
    spec = kind_spec(kind)
    if spec.needs_derivation and a.derivation is None:
        raise InputError(f"kind {kind} requires a derivation D")
    alpha = None
    if a.alpha is not None:
        if spec.alpha_mode is AlphaMode.NONE:
            warnings.warn(f"alpha ignored: kind {kind} has no scalar parameter", stacklevel=2)
        else:
            alpha = a.alpha.value
    return evaluate(kind, tensors or AlgebraTensors.of(a), alpha)


def applicable(kind: StructureKind, a: TwoProductAlgebra) -> bool:
    return a.derivation is not None or not kind_spec(kind).needs_derivation


def classify_reports(a: TwoProductAlgebra) -> Dict[StructureKind, Optional[AxiomReport]]:
    """Report per kind in kind order; ``None`` marks a kind that needs a missing D."""
    t = AlgebraTensors.of(a)
    out = {}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for kind in ALL_KINDS:
            out[kind] = check(kind, a, t) if applicable(kind, a) else None
    return out


def classify(a: TwoProductAlgebra) -> FrozenSet[StructureKind]:
    return frozenset(k for k, r in classify_reports(a).items() if r is not None and r.passed)
