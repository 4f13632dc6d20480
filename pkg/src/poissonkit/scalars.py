"""Exact scalars over the rationals and prime fields GF(p).

Two layers live here. ``Scalar`` is the public, immutable value type with
operator overloads. Bulk data (structure constants, residual tensors) is kept
as numpy arrays of *raw* values, whose representation is owned by
``FieldSpec``:

* over Q, raw values are ``fractions.Fraction`` in an ``object`` array, with
  integral entries stored as plain ``int`` (exact, and much faster);
* over GF(p), raw values are residues in ``[0, p)`` in an ``int64`` array
  (``object`` for very large p, where int64 products could overflow).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional, Union

import numpy as np

from .errors import DomainError, InputError

# int64 is safe while a pairwise contraction over <= 64 terms stays below 2**63.
_INT64_PRIME_LIMIT = 2**28

_RATIONAL_RE = re.compile(r"^\s*(-?\d+)(?:\s*/\s*(\d+))?\s*$")
_RESIDUE_RE = re.compile(r"^\s*(\d+)\s*$")


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The ground field: ``FieldSpec(None)`` is Q, ``FieldSpec(p)`` is GF(p)."""

    p: Optional[int] = None

    def __post_init__(self):
        if self.p is not None:
            if isinstance(self.p, bool) or not isinstance(self.p, int):
                raise InputError(f"field characteristic must be an integer, got {self.p!r}")
            if not _is_prime(self.p):
                raise InputError(f"GF(p) requires a prime p, got {self.p}")

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(None)

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls(p)

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        """Parse ``"Q"`` or ``"F<p>"`` (e.g. ``"F3"``)."""
        t = text.strip()
        if t == "Q":
            return cls(None)
        m = re.fullmatch(r"F(\d+)", t)
        if not m:
            raise InputError(f"unknown field {text!r}; expected 'Q' or 'F<p>'")
        return cls(int(m.group(1)))

    @property
    def is_finite(self) -> bool:
        return self.p is not None

    @property
    def order(self) -> Optional[int]:
        return self.p

    @property
    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    @property
    def dtype(self):
        if self.p is not None and self.p < _INT64_PRIME_LIMIT:
            return np.int64
        return object

    def __str__(self) -> str:
        return "Q" if self.p is None else f"F{self.p}"

    # -- raw values -------------------------------------------------------
    def raw(self, value: Any):
        """Canonical raw value for an int, Fraction or Scalar of this field."""
        if isinstance(value, Scalar):
            if value.field != self:
                raise InputError(f"scalar over {value.field} used in {self}")
            return value.value
        if isinstance(value, (bool, np.bool_)):
            value = int(value)
        if isinstance(value, np.integer):
            value = int(value)
        if self.p is None:
            if isinstance(value, (int, Fraction)):
                return Fraction(value)
            raise InputError(f"cannot interpret {value!r} as a rational")
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise DomainError(f"{value} has no image in {self}")
            return value.numerator * pow(value.denominator, -1, self.p) % self.p
        if isinstance(value, int):
            return value % self.p
        raise InputError(f"cannot interpret {value!r} as an element of {self}")

    @property
    def zero(self):
        return Fraction(0) if self.p is None else 0

    @property
    def one(self):
        return Fraction(1) if self.p is None else 1

    def elements(self):
        """All field elements in increasing residue order (finite fields only)."""
        if self.p is None:
            raise InputError("Q has no finite element list")
        return range(self.p)

    # -- arrays -----------------------------------------------------------
    def array(self, values) -> np.ndarray:
        """Convert nested sequences (ints, Fractions, Scalars) to a canonical array."""
        if (self.dtype is not object and isinstance(values, np.ndarray)
                and np.issubdtype(values.dtype, np.integer)):
            return np.mod(values, self.p).astype(self.dtype)
        arr = np.asarray(values, dtype=object)
        out = np.empty(arr.shape, dtype=object)
        for idx, v in np.ndenumerate(arr):
            out[idx] = self.compact(self.raw(v))
        return out.astype(self.dtype) if self.dtype is not object else out

    def compact(self, raw):
        """Array storage form of a raw value: integral rationals become ``int``."""
        if self.p is None and raw.denominator == 1:
            return raw.numerator
        return raw

    def zeros(self, shape) -> np.ndarray:
        if self.dtype is object:
            out = np.empty(shape, dtype=object)
            out.fill(0)
            return out
        return np.zeros(shape, dtype=self.dtype)

    def identity(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = 1
        return out

    def reduce(self, arr):
        """Bring an array produced by ring operations back to canonical form."""
        if self.p is None:
            return arr
        return np.mod(arr, self.p)

    def is_zero(self, arr) -> np.ndarray:
        """Elementwise zero test on canonical arrays."""
        return np.asarray(arr == 0, dtype=bool)

    def div(self, a, b):
        """Raw division ``a / b``; ``b`` must be nonzero."""
        return self.mul(a, self.inv(b))

    def add(self, a, b):
        return a + b if self.p is None else (a + b) % self.p

    def mul(self, a, b):
        return a * b if self.p is None else (a * b) % self.p

    def neg(self, a):
        return -a if self.p is None else (-a) % self.p

    def inv(self, a):
        if a == 0:
            raise DomainError("inverse of zero")
        if self.p is None:
            return 1 / Fraction(a)
        return pow(int(a), -1, self.p)

    def format(self, raw) -> str:
        if self.p is None:
            raw = Fraction(raw)
            return str(raw.numerator) if raw.denominator == 1 else f"{raw.numerator}/{raw.denominator}"
        return str(int(raw))


QQ = FieldSpec(None)


@dataclass(frozen=True)
class Scalar:
    """An exact field element. Construct with ``Scalar.of(value, field)``."""

    field: FieldSpec
    value: Union[Fraction, int]

    @classmethod
    def of(cls, value, field: FieldSpec = QQ) -> "Scalar":
        return cls(field, field.raw(value))

    def _other(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise InputError(f"mixed fields: {self.field} and {other.field}")
            return other
        return Scalar.of(other, self.field)

    def __add__(self, other):
        return field_add(self, self._other(other))

    __radd__ = __add__

    def __sub__(self, other):
        return field_add(self, field_neg(self._other(other)))

    def __rsub__(self, other):
        return field_add(self._other(other), field_neg(self))

    def __mul__(self, other):
        return field_mul(self, self._other(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return field_mul(self, field_inv(self._other(other)))

    def __neg__(self):
        return field_neg(self)

    def __bool__(self):
        return self.value != 0

    def __str__(self):
        return self.field.format(self.value)

    def __repr__(self):
        return f"Scalar({self}, {self.field})"


def _same_field(a: Scalar, b: Scalar) -> FieldSpec:
    if a.field != b.field:
        raise InputError(f"mixed fields: {a.field} and {b.field}")
    return a.field


def field_add(a: Scalar, b: Scalar) -> Scalar:
    f = _same_field(a, b)
    return Scalar(f, f.add(a.value, b.value))


def field_mul(a: Scalar, b: Scalar) -> Scalar:
    f = _same_field(a, b)
    return Scalar(f, f.mul(a.value, b.value))


def field_neg(a: Scalar) -> Scalar:
    return Scalar(a.field, a.field.neg(a.value))


def field_inv(a: Scalar) -> Scalar:
    return Scalar(a.field, a.field.inv(a.value))


def parse_scalar(text: str, field: FieldSpec) -> Scalar:
    """Parse ``[-]digits[/digits]`` over Q or ``digits`` over GF(p)."""
    if not isinstance(text, str):
        raise InputError(f"scalar must be given as a string, got {text!r}")
    if field.p is None:
        m = _RATIONAL_RE.match(text)
        if not m:
            raise InputError(f"malformed rational {text!r}")
        num, den = int(m.group(1)), int(m.group(2) or 1)
        if den == 0:
            raise InputError(f"zero denominator in {text!r}")
        return Scalar(field, Fraction(num, den))
    m = _RESIDUE_RE.match(text)
    if not m:
        raise InputError(f"malformed residue {text!r} for {field}")
    return Scalar(field, int(m.group(1)) % field.p)
