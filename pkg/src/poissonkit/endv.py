"""Candidate algebras inside End(V) built from block subspaces and word templates.

``V`` has basis ``v_1..v_n``; ``W`` is spanned by the first ``m`` of them and
``U`` by the rest. ``pi`` is the coordinate projection onto ``W`` and
``rho = 1 - pi``. A linear map is an ``n x n`` matrix in column convention,
so End(V) splits into four blocks named by (source, target):

    WW: W -> W    UW: U -> W
    WU: W -> U    UU: U -> U

A subspace template frees some blocks; its basis is the elementary matrices
``E_rc`` (``v_c -> v_r``) at free positions, in row-major order of ``(r, c)``.

Operation templates are formulas over words in ``f, g, pi, rho`` such as
``"f*pi*g - g*pi*f"``; derivation templates are words in ``f, pi, rho``.
"""
from __future__ import annotations

import json
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from pathlib import Path
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

import numpy as np

from .algebra import BilinearOp, LinearMap, TwoProductAlgebra
from .errors import InputError
from .scalars import QQ, FieldSpec
from .taxonomy import ALL_KINDS, AlgebraTensors, StructureKind, evaluate

BLOCKS = ("WW", "UW", "WU", "UU")
_LETTERS = {"f": "f", "g": "g", "pi": "pi", "π": "pi", "rho": "rho", "ρ": "rho"}
_TERM_RE = re.compile(r"\s*([+-]?)\s*([^+-]+)")


@dataclass(frozen=True)
class SpaceShape:
    n: int
    m: int

    def __post_init__(self):
        if self.n < 2:
            raise InputError(f"dim V must be at least 2, got {self.n}")
        if not 0 < self.m < self.n:
            raise InputError(f"W must be a proper nonzero subspace: need 0 < {self.m} < {self.n}")

    @property
    def pi(self) -> np.ndarray:
        return np.diag([1] * self.m + [0] * (self.n - self.m))

    def block_of(self, r: int, c: int) -> str:
        """Block containing matrix position (row r, column c), 0-based."""
        src = "W" if c < self.m else "U"
        dst = "W" if r < self.m else "U"
        return src + dst


@dataclass(frozen=True)
class SubspaceTemplate:
    id: str
    blocks: Tuple[str, ...]

    def __post_init__(self):
        blocks = tuple(sorted(set(self.blocks), key=BLOCKS.index)) if all(
            b in BLOCKS for b in self.blocks) else None
        if not blocks:
            raise InputError(f"subspace {self.id!r}: blocks must be a nonempty subset of {BLOCKS}")
        object.__setattr__(self, "blocks", blocks)

    def positions(self, shape: SpaceShape) -> List[Tuple[int, int]]:
        return [(r, c) for r in range(shape.n) for c in range(shape.n)
                if shape.block_of(r, c) in self.blocks]


Word = Tuple[str, ...]


def parse_formula(text: str) -> Tuple[Tuple[Fraction, Word], ...]:
    """Parse ``"f*pi*g - 2*g*f"`` into ``((1, ('f','pi','g')), (-2, ('g','f')))``.

    ``"0"`` is the empty formula.
    """
    src = text.strip()
    if src == "0":
        return ()
    if not src:
        raise InputError("empty formula")
    terms = []
    pos = 0
    while pos < len(src):
        m = _TERM_RE.match(src, pos)
        if not m or (pos > 0 and not m.group(1)):
            raise InputError(f"malformed formula {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        coef = Fraction(sign)
        word = []
        for tok in m.group(2).split("*"):
            tok = tok.strip()
            if tok in _LETTERS:
                word.append(_LETTERS[tok])
            elif re.fullmatch(r"\d+(/\d+)?", tok) and not word:
                coef *= Fraction(tok)
            else:
                raise InputError(f"bad factor {tok!r} in formula {text!r}")
        if not word:
            raise InputError(f"term without letters in formula {text!r}")
        terms.append((coef, tuple(word)))
        pos = m.end()
    return tuple(terms)


def _format_formula(terms) -> str:
    if not terms:
        return "0"
    out = ""
    for coef, word in terms:
        sign = "-" if coef < 0 else "+"
        mag = abs(coef)
        body = "*".join(word) if mag == 1 else f"{mag}*" + "*".join(word)
        out += (f" {sign} " if out else ("-" if sign == "-" else "")) + body
    return out


@dataclass(frozen=True)
class OpTemplate:
    id: str
    formula: str

    def __post_init__(self):
        for _, word in self.terms:
            if word.count("f") != 1 or word.count("g") != 1 or len(word) > 4:
                raise InputError(f"op template {self.id!r}: each word needs f and g once, "
                                 f"length <= 4 (got {'*'.join(word)})")

    @property
    def terms(self):
        return parse_formula(self.formula)


@dataclass(frozen=True)
class DerivationTemplate:
    id: str
    formula: str

    def __post_init__(self):
        for _, word in self.terms:
            if word.count("f") != 1 or "g" in word or len(word) > 4:
                raise InputError(f"derivation template {self.id!r}: each word needs f once "
                                 f"and no g (got {'*'.join(word)})")

    @property
    def terms(self):
        return parse_formula(self.formula)


@dataclass(frozen=True)
class Catalog:
    subspaces: Tuple[SubspaceTemplate, ...]
    brackets: Tuple[OpTemplate, ...]
    circles: Tuple[OpTemplate, ...]
    derivations: Tuple[DerivationTemplate, ...]

    def to_dict(self) -> dict:
        return {
            "subspaces": {s.id: list(s.blocks) for s in self.subspaces},
            "brackets": {t.id: t.formula for t in self.brackets},
            "circles": {t.id: t.formula for t in self.circles},
            "derivations": {t.id: t.formula for t in self.derivations},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Catalog":
        unknown = set(data) - {"subspaces", "brackets", "circles", "derivations"}
        if unknown:
            raise InputError(f"unknown catalog fields: {', '.join(sorted(unknown))}")
        try:
            return cls(
                tuple(SubspaceTemplate(k, tuple(v)) for k, v in data["subspaces"].items()),
                tuple(OpTemplate(k, v) for k, v in data["brackets"].items()),
                tuple(OpTemplate(k, v) for k, v in data["circles"].items()),
                tuple(DerivationTemplate(k, v) for k, v in data["derivations"].items()),
            )
        except KeyError as e:
            raise InputError(f"catalog is missing field {e.args[0]!r}") from None
        except (AttributeError, TypeError):
            raise InputError("catalog sections must map ids to blocks or formulas") from None

    @classmethod
    def load(cls, path: Union[str, Path]) -> "Catalog":
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as e:
            raise InputError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from None
        return cls.from_dict(data)


def default_catalog() -> Catalog:
    return Catalog.from_dict({
        "subspaces": {
            "full": ["WW", "UW", "WU", "UU"],
            "image-in-W": ["WW", "UW"],
            "kills-W": ["UW", "UU"],
            "image-in-W-kills-W": ["UW"],
            "upper-triangular": ["WW", "UW", "UU"],
        },
        "brackets": {
            "commutator": "f*g - g*f",
            "pi-commutator": "f*pi*g - g*pi*f",
            "rho-commutator": "f*rho*g - g*rho*f",
            "zero": "0",
            "angle-pi-left": "f*pi*g - g*f",
            "angle-pi-right": "f*g - g*pi*f",
        },
        "circles": {
            "fg": "f*g",
            "gf": "g*f",
            "f-pi-g": "f*pi*g",
            "f-rho-g": "f*rho*g",
            "pi-f-g": "pi*f*g",
            "f-g-pi": "f*g*pi",
        },
        "derivations": {
            "zero": "0",
            "pi-commutator": "pi*f - f*pi",
            "rho-commutator": "rho*f - f*rho",
            "pi-sandwich": "pi*f*pi",
            "f-pi": "f*pi",
        },
    })


# -- instantiation ----------------------------------------------------------------------

@dataclass(frozen=True)
class ClosedAlgebra:
    algebra: TwoProductAlgebra
    basis: Tuple[Tuple[int, int], ...]


@dataclass(frozen=True)
class NotClosed:
    """``part`` is "bracket", "circle" or "derivation"; ``witness`` is the first
    1-based basis pair (or single index for the derivation) whose image leaves M."""

    part: str
    witness: Tuple[int, ...]


class _Space:
    """Matrix arithmetic for one shape, subspace and field."""

    def __init__(self, shape: SpaceShape, sub: SubspaceTemplate, field: FieldSpec):
        self.shape, self.field = shape, field
        self.positions = sub.positions(shape)
        n = shape.n
        pi = field.array(shape.pi)
        self.letters = {"pi": pi, "rho": field.reduce(field.identity(n) - pi)}
        self.basis = []
        for r, c in self.positions:
            e = field.zeros((n, n))
            e[r, c] = 1
            self.basis.append(e)
        self.outside = np.ones((n, n), dtype=bool)
        for r, c in self.positions:
            self.outside[r, c] = False

    def word(self, word: Word, env) -> np.ndarray:
        f = self.field
        out = None
        for letter in word:
            m = env[letter] if letter in env else self.letters[letter]
            out = m if out is None else f.reduce(out.dot(m))
        return out

    def formula(self, terms, env) -> np.ndarray:
        f = self.field
        n = self.shape.n
        total = f.zeros((n, n))
        for coef, word in terms:
            total = f.reduce(total + f.compact(f.raw(coef)) * self.word(word, env))
        return total

    def coords(self, mat: np.ndarray) -> Optional[np.ndarray]:
        """Coordinates of ``mat`` in the subspace basis, or None if it escapes."""
        if not self.field.is_zero(mat[self.outside]).all():
            return None
        return np.array([mat[r, c] for r, c in self.positions], dtype=mat.dtype)

    def product(self, template: OpTemplate):
        """Structure constants of ``template`` on the subspace, or the first
        1-based basis pair whose image escapes."""
        k = len(self.basis)
        f = self.field
        c = f.zeros((k, k, k))
        terms = template.terms
        for i, ei in enumerate(self.basis):
            for j, ej in enumerate(self.basis):
                coords = self.coords(self.formula(terms, {"f": ei, "g": ej}))
                if coords is None:
                    return None, (i + 1, j + 1)
                c[i, j] = coords
        return c, None

    def linear(self, template: DerivationTemplate):
        k = len(self.basis)
        d = self.field.zeros((k, k))
        terms = template.terms
        for j, ej in enumerate(self.basis):
            coords = self.coords(self.formula(terms, {"f": ej}))
            if coords is None:
                return None, (j + 1,)
            d[:, j] = coords
        return d, None


def instantiate(shape: SpaceShape, sub: SubspaceTemplate, bracket: OpTemplate, circle: OpTemplate,
                deriv: Optional[DerivationTemplate] = None,
                field: FieldSpec = QQ) -> Union[ClosedAlgebra, NotClosed]:
    """Realize the templates on the subspace as structure constants, if closed."""
    space = _Space(shape, sub, field)
    b, wb = space.product(bracket)
    if b is None:
        return NotClosed("bracket", wb)
    c, wc = space.product(circle)
    if c is None:
        return NotClosed("circle", wc)
    d = None
    if deriv is not None:
        d, wd = space.linear(deriv)
        if d is None:
            return NotClosed("derivation", wd)
        d = LinearMap(field, d)
    algebra = TwoProductAlgebra(BilinearOp(field, b), BilinearOp(field, c), d)
    return ClosedAlgebra(algebra, tuple((r + 1, c_ + 1) for r, c_ in space.positions))


def template_matrix(shape: SpaceShape, template: Union[OpTemplate, DerivationTemplate],
                    f_mat, g_mat=None, field: FieldSpec = QQ) -> np.ndarray:
    """Evaluate a template on explicit ``n x n`` matrices (no subspace involved)."""
    full = SubspaceTemplate("full", BLOCKS)
    space = _Space(shape, full, field)
    env = {"f": field.array(f_mat)}
    if g_mat is not None:
        env["g"] = field.array(g_mat)
    return space.formula(template.terms, env)


# -- survey ---------------------------------------------------------------------------------

@dataclass(frozen=True)
class SurveyRow:
    subspace: str
    bracket: str
    circle: str
    derivation: str
    closed: bool
    kinds_passed: FrozenSet[StructureKind] = frozenset()
    escape: Optional[str] = None

    @property
    def key(self):
        return (self.subspace, self.bracket, self.circle, self.derivation)


@dataclass(frozen=True)
class SurveyReport:
    shape: SpaceShape
    field: FieldSpec
    rows: Tuple[SurveyRow, ...]
    catalog: Catalog = dc_field(default_factory=default_catalog)

    @property
    def counts(self) -> Dict[StructureKind, int]:
        out = {k: 0 for k in ALL_KINDS}
        for row in self.rows:
            for k in row.kinds_passed:
                out[k] += 1
        return out

    @property
    def closed_rows(self) -> int:
        return sum(r.closed for r in self.rows)

    @property
    def remark_check(self) -> bool:
        """Every row passing the left angle-circle kind also passes the right one."""
        return all(StructureKind.RIGHT_ANGLE_CIRCLE in r.kinds_passed for r in self.rows
                   if StructureKind.LEFT_ANGLE_CIRCLE in r.kinds_passed)


def _survey_subspace(shape: SpaceShape, sub: SubspaceTemplate, catalog: Catalog,
                     field: FieldSpec) -> List[SurveyRow]:
    space = _Space(shape, sub, field)
    brackets = {t.id: space.product(t) for t in catalog.brackets}
    circles = {t.id: space.product(t) for t in catalog.circles}
    derivs = {t.id: space.linear(t) for t in catalog.derivations}
    rows = []
    for bid in sorted(brackets):
        b, wb = brackets[bid]
        for cid in sorted(circles):
            c, wc = circles[cid]
            base = None
            if b is not None and c is not None:
                base = AlgebraTensors(field, BilinearOp(field, b).coeffs, BilinearOp(field, c).coeffs)
            for did in sorted(derivs):
                d, wd = derivs[did]
                if base is None or d is None:
                    part, w = (("bracket", wb) if b is None else
                               ("circle", wc) if c is None else ("derivation", wd))
                    rows.append(SurveyRow(sub.id, bid, cid, did, False,
                                          escape=f"{part}{list(w)}"))
                    continue
                t = base.with_derivation(LinearMap(field, d).matrix)
                passed = frozenset(k for k in ALL_KINDS if evaluate(k, t).passed)
                rows.append(SurveyRow(sub.id, bid, cid, did, True, passed))
    return rows


def survey(shape: SpaceShape, catalog: Optional[Catalog] = None, field: FieldSpec = QQ,
           workers: int = 1) -> SurveyReport:
    """Instantiate every template combination and classify the closed ones.

    Rows are sorted by (subspace, bracket, circle, derivation) id; the
    result does not depend on ``workers``.
    """
    catalog = catalog or default_catalog()
    subs = sorted(catalog.subspaces, key=lambda s: s.id)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_survey_subspace, [shape] * len(subs), subs,
                                  [catalog] * len(subs), [field] * len(subs)))
    else:
        parts = [_survey_subspace(shape, s, catalog, field) for s in subs]
    rows = sorted((r for part in parts for r in part), key=lambda r: r.key)
    return SurveyReport(shape, field, tuple(rows), catalog)


def compare_shapes(first: SurveyReport, second: SurveyReport) -> dict:
    """Rows closed in both reports, split by whether their verdicts agree.

    Recorded as data only; nothing guarantees agreement across shapes.
    """
    other = {r.key: r for r in second.rows}
    same, differ = [], []
    for row in first.rows:
        twin = other.get(row.key)
        if twin is None or not (row.closed and twin.closed):
            continue
        (same if row.kinds_passed == twin.kinds_passed else differ).append(row.key)
    return {"agree": same, "differ": differ}
