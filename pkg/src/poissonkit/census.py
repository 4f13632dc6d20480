"""Exhaustive census of structure-constant tuples over GF(p), and an
all-elements oracle used to validate the basis-triple checker.

Tuples are enumerated in row-major lexicographic order over the
concatenation ``(bracket.flat, circle.flat, derivation.flat)`` with the first
coordinate most significant, so the tuple with index ``i`` has the base-p
digits of ``i`` as its entries.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

import numpy as np

from .algebra import BilinearOp, LinearMap, TwoProductAlgebra
from .errors import InputError
from .scalars import FieldSpec
from .taxonomy import (
    ALL_KINDS,
    AlgebraTensors,
    AlphaMode,
    BracketAxiom,
    Jacobian,
    StructureKind,
    check,
    identity_failures,
    kind_spec,
)

DEFAULT_CAP = 10**8
ORACLE_LIMIT = 10**6

TAILLESS = (StructureKind.SQUARE_CIRCLE, StructureKind.LEFT_ANGLE_CIRCLE,
            StructureKind.RIGHT_ANGLE_CIRCLE)


@dataclass(frozen=True)
class CensusSpec:
    field: FieldSpec
    dim: int
    with_derivation: bool = False
    kinds: Tuple[StructureKind, ...] = ()
    cap: int = DEFAULT_CAP

    def __post_init__(self):
        if not self.field.is_finite:
            raise InputError("census requires a finite field GF(p)")
        if self.dim < 1:
            raise InputError("census dimension must be positive")
        kinds = self.kinds or (ALL_KINDS if self.with_derivation else TAILLESS)
        kinds = tuple(sorted(set(kinds), key=lambda k: k.index))
        object.__setattr__(self, "kinds", kinds)
        tailed = [k.value for k in kinds if kind_spec(k).needs_derivation]
        if tailed and not self.with_derivation:
            raise InputError(f"kinds {', '.join(tailed)} require --with-derivation")
        if self.total > self.cap:
            raise InputError(f"census of {self.total} tuples exceeds cap {self.cap}")

    @property
    def exponent(self) -> int:
        n = self.dim
        return 2 * n**3 + (n * n if self.with_derivation else 0)

    @property
    def total(self) -> int:
        return self.field.p ** self.exponent


@dataclass(frozen=True)
class CensusWitness:
    index: int
    bracket: Tuple[int, ...]
    circle: Tuple[int, ...]
    derivation: Optional[Tuple[int, ...]]

    def algebra(self, spec: CensusSpec) -> TwoProductAlgebra:
        n, f = spec.dim, spec.field
        d = None if self.derivation is None else LinearMap(f, np.array(self.derivation).reshape(n, n))
        return TwoProductAlgebra(BilinearOp(f, np.array(self.bracket).reshape(n, n, n)),
                                 BilinearOp(f, np.array(self.circle).reshape(n, n, n)), d)


@dataclass(frozen=True)
class CensusResult:
    spec: CensusSpec
    total_enumerated: int
    counts: Dict[StructureKind, int]
    witnesses: Dict[StructureKind, CensusWitness] = dc_field(default_factory=dict)


def _digits(index: int, p: int, length: int) -> Tuple[int, ...]:
    out = []
    for _ in range(length):
        index, r = divmod(index, p)
        out.append(r)
    return tuple(reversed(out))


def _all_tensors(p: int, shape) -> np.ndarray:
    """Every array of ``shape`` over range(p), in lexicographic order."""
    size = int(np.prod(shape))
    flat = np.array(list(itertools.product(range(p), repeat=size)), dtype=np.int64)
    return flat.reshape((p**size,) + tuple(shape))


def decode(spec: CensusSpec, index: int) -> CensusWitness:
    n, p = spec.dim, spec.field.p
    digits = _digits(index, p, spec.exponent)
    n3 = n**3
    d = digits[2 * n3:] if spec.with_derivation else None
    return CensusWitness(index, digits[:n3], digits[n3:2 * n3], d)


class _Chunk:
    """Counts for a contiguous range of bracket indices."""

    def __init__(self, spec: CensusSpec, record: bool = False):
        self.spec = spec
        self.counts = {k: 0 for k in spec.kinds}
        self.first: Dict[StructureKind, int] = {}
        self.verdicts: Optional[Dict[int, set]] = {} if record else None

    def hit(self, kind: StructureKind, index: int, multiplicity: int = 1):
        self.counts[kind] += multiplicity
        if kind not in self.first:
            self.first[kind] = index
        if self.verdicts is not None:
            for i in range(index, index + multiplicity):
                self.verdicts.setdefault(i, set()).add(kind)


def _census_range(spec: CensusSpec, b_lo: int, b_hi: int, record: bool = False):
    f, n, p = spec.field, spec.dim, spec.field.p
    n3, n2 = n**3, n * n
    nc = p**n3
    nd = p**n2 if spec.with_derivation else 1
    circles = _all_tensors(p, (n, n, n))
    brackets = circles
    derivs = _all_tensors(p, (n, n)) if spec.with_derivation else [None]

    tailless = [k for k in spec.kinds if not kind_spec(k).needs_derivation]
    tailed = [k for k in spec.kinds if kind_spec(k).needs_derivation]
    want_lie = any(kind_spec(k).bracket_axiom is BracketAxiom.LIE for k in spec.kinds)
    want_rl = any(kind_spec(k).bracket_axiom is BracketAxiom.RIGHT_LEIBNIZ for k in spec.kinds)

    assoc_idx = [i for i, c in enumerate(circles)
                 if f.is_zero(AlgebraTensors(f, c, c).associator).all()]
    circ_der: Dict[int, List[bool]] = {}
    if spec.with_derivation:
        for ci in assoc_idx:
            t = AlgebraTensors(f, circles[ci], circles[ci])
            circ_der[ci] = [bool(f.is_zero(t.with_derivation(d).derivation_of_circle).all())
                            for d in derivs]

    out = _Chunk(spec, record)
    for bi in range(b_lo, b_hi):
        b = brackets[bi]
        tb = AlgebraTensors(f, b, b)
        lie = want_lie and bool(f.is_zero(tb.alternating).all() and f.is_zero(tb.jacobi).all())
        rl = want_rl and bool(f.is_zero(tb.right_leibniz).all())
        if not (lie or rl):
            continue
        ok_bracket = {BracketAxiom.LIE: lie, BracketAxiom.RIGHT_LEIBNIZ: rl}
        if spec.with_derivation:
            bracket_der = [bool(f.is_zero(tb.with_derivation(d).derivation_of_bracket).all())
                           for d in derivs]
        for ci in assoc_idx:
            base_index = (bi * nc + ci) * nd
            t = AlgebraTensors(f, b, circles[ci])
            for k in tailless:
                s = kind_spec(k)
                if ok_bracket[s.bracket_axiom] and not identity_failures(s, t)[0]:
                    out.hit(k, base_index, nd)
            live = [k for k in tailed if ok_bracket[kind_spec(k).bracket_axiom]]
            if not live:
                continue
            for di, d in enumerate(derivs):
                if not (bracket_der[di] and circ_der[ci][di]):
                    continue
                td = t.with_derivation(d)
                for k in live:
                    if not identity_failures(kind_spec(k), td)[0]:
                        out.hit(k, base_index + di)
    if record:
        return out.verdicts
    return out.counts, out.first


def _partition(total: int, parts: int) -> List[Tuple[int, int]]:
    parts = max(1, min(parts, total))
    step, extra = divmod(total, parts)
    bounds, lo = [], 0
    for i in range(parts):
        hi = lo + step + (1 if i < extra else 0)
        bounds.append((lo, hi))
        lo = hi
    return bounds


def run_census(spec: CensusSpec, workers: int = 1, prune: bool = True) -> CensusResult:
    """Count, per kind, the tuples whose algebra passes ``check``.

    With ``prune`` the base axioms are evaluated once per bracket, circle and
    (bracket or circle, D) pair and only survivors reach the identity checks.
    ``prune=False`` runs the full ``check`` on every tuple (slow; used to
    confirm that pruning leaves counts unchanged).
    """
    if not prune:
        return _census_unpruned(spec)
    nb = spec.field.p ** spec.dim**3
    ranges = _partition(nb, workers)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_census_range, [spec] * len(ranges),
                                   [lo for lo, _ in ranges], [hi for _, hi in ranges]))
    else:
        chunks = [_census_range(spec, lo, hi) for lo, hi in ranges]
    counts = {k: 0 for k in spec.kinds}
    first: Dict[StructureKind, int] = {}
    for chunk_counts, chunk_first in chunks:
        for k, c in chunk_counts.items():
            counts[k] += c
        for k, idx in chunk_first.items():
            first[k] = min(idx, first.get(k, idx))
    witnesses = {k: decode(spec, first[k]) for k in spec.kinds if k in first}
    return CensusResult(spec, spec.total, counts, witnesses)


def census_verdicts(spec: CensusSpec) -> Dict[int, FrozenSet[StructureKind]]:
    """Passed kinds per tuple index, for every tuple passing at least one of
    ``spec.kinds``; tuples absent from the map pass none."""
    hits = _census_range(spec, 0, spec.field.p ** spec.dim**3, record=True)
    return {i: frozenset(v) for i, v in sorted(hits.items())}


def _census_unpruned(spec: CensusSpec) -> CensusResult:
    counts = {k: 0 for k in spec.kinds}
    witnesses: Dict[StructureKind, CensusWitness] = {}
    for index in range(spec.total):
        w = decode(spec, index)
        a = w.algebra(spec)
        t = AlgebraTensors.of(a)
        for k in spec.kinds:
            if check(k, a, t).passed:
                counts[k] += 1
                witnesses.setdefault(k, w)
    return CensusResult(spec, spec.total, counts, witnesses)


def iter_algebras(spec: CensusSpec) -> Iterable[TwoProductAlgebra]:
    """Every algebra of the census in enumeration order."""
    for index in range(spec.total):
        yield decode(spec, index).algebra(spec)


# -- exhaustive oracle --------------------------------------------------------------

class _Tables:
    """Cayley tables of an algebra over GF(p) on all ``p**n`` elements.

    Element ``i`` is the vector whose coordinates are the base-p digits of
    ``i``, most significant first; element 0 is the zero vector.
    """

    def __init__(self, a: TwoProductAlgebra):
        p, n = a.field.p, a.dim
        self.p = p
        self.vecs = np.array(list(itertools.product(range(p), repeat=n)), dtype=np.int64)
        self.weights = p ** np.arange(n - 1, -1, -1, dtype=np.int64)
        v = self.vecs
        self.add = self._index((v[:, None, :] + v[None, :, :]) % p)
        self.neg = self._index((-v) % p)
        self.smul = np.stack([self._index((s * v) % p) for s in range(p)])
        self.bracket = self._product(np.asarray(a.bracket.coeffs, dtype=np.int64))
        self.circle = self._product(np.asarray(a.circle.coeffs, dtype=np.int64))
        self.d = None
        if a.derivation is not None:
            m = np.asarray(a.derivation.matrix, dtype=np.int64)
            self.d = self._index((v @ m.T) % p)

    def _index(self, vecs: np.ndarray) -> np.ndarray:
        return vecs @ self.weights

    def _product(self, c: np.ndarray) -> np.ndarray:
        v, p = self.vecs, self.p
        # e_i * e_j = sum_k c[i,j,k] e_k, expanded on every pair of elements
        out = np.einsum("xi,yj,ijk->xyk", v, v, c) % p
        return self._index(out)

    def sub(self, x, y):
        return self.add[x, self.neg[y]]


def _oracle_word(t: _Tables, word, env, alpha=None):
    vals = []
    for factor in word:
        if factor.startswith("D"):
            v = t.d[env[factor[1]]]
            if alpha is not None:
                v = t.smul[alpha][v]
            vals.append(v)
        else:
            vals.append(env[factor])
    return t.circle[t.circle[vals[0], vals[1]], vals[2]]


def _oracle_jacobian(t: _Tables, which: Jacobian, x, y, z):
    b, c = t.bracket, t.circle
    if which is Jacobian.RIGHT_ANGLE:
        return t.sub(t.sub(b[c[x, y], z], c[x, b[y, z]]), c[b[x, z], y])
    return t.sub(t.sub(b[x, c[y, z]], c[b[x, y], z]), c[y, b[x, z]])


def exhaustive_oracle(a: TwoProductAlgebra, kind: StructureKind) -> bool:
    """Decide ``kind`` on ``a`` by evaluating every axiom on all elements.

    Independent of the basis-triple checker: products come from Cayley tables
    over all ``p**n`` elements, and for kinds with a scalar parameter every
    admissible ``alpha`` in GF(p) is tried.
    """
    f = a.field
    if not f.is_finite:
        raise InputError("the exhaustive oracle needs a finite field")
    if f.p ** (3 * a.dim) > ORACLE_LIMIT:
        raise InputError(f"{f.p}^(3*{a.dim}) element triples exceed the oracle limit")
    spec = kind_spec(kind)
    if spec.needs_derivation and a.derivation is None:
        raise InputError(f"kind {kind} requires a derivation D")
    t = _Tables(a)
    n_el = len(t.vecs)
    x, y, z = (g.ravel() for g in np.meshgrid(*(np.arange(n_el),) * 3, indexing="ij"))
    u, w = (g.ravel() for g in np.meshgrid(np.arange(n_el), np.arange(n_el), indexing="ij"))
    b, c = t.bracket, t.circle

    if spec.bracket_axiom is BracketAxiom.LIE:
        if (b[np.arange(n_el), np.arange(n_el)] != 0).any():
            return False
        jac = t.add[t.add[b[x, b[y, z]], b[y, b[z, x]]], b[z, b[x, y]]]
        if (jac != 0).any():
            return False
    else:
        if (b[x, b[y, z]] != t.sub(b[b[x, y], z], b[b[x, z], y])).any():
            return False
    if (c[c[x, y], z] != c[x, c[y, z]]).any():
        return False
    if spec.needs_derivation:
        d = t.d
        for prod in (b, c):
            if (d[prod[u, w]] != t.add[prod[d[u], w], prod[u, d[w]]]).any():
                return False

    env = {"x": x, "y": y, "z": z}
    for side in spec.side_conditions:
        lhs = _oracle_word(t, side.lhs, env)
        rhs = 0 if side.rhs is None else _oracle_word(t, side.rhs, env)
        if (lhs != rhs).any():
            return False

    jacobian = _oracle_jacobian(t, spec.jacobian, x, y, z)

    def holds(alpha):
        total = np.zeros_like(x)
        for term in spec.tail:
            val = _oracle_word(t, term.word, env, alpha if term.alpha else None)
            total = t.add[total, val] if term.sign > 0 else t.sub(total, val)
        return bool((jacobian == total).all())

    if spec.alpha_mode is AlphaMode.NONE:
        return holds(None)
    if a.alpha is not None:
        alpha = int(a.alpha.value)
        if spec.alpha_mode is AlphaMode.NONZERO and alpha == 0:
            return False
        return holds(alpha)
    candidates = range(1, f.p) if spec.alpha_mode is AlphaMode.NONZERO else range(f.p)
    return any(holds(s) for s in candidates)
