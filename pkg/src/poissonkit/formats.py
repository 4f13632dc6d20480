"""Algebra files and machine-readable reports.

An algebra file is a JSON object::

    {
      "field": "Q",                     # or "F<p>", e.g. "F3"
      "dim": 2,
      "bracket": [[["0", "1"], ...]],   # dim x dim x dim scalar strings, c[i][j][k]
      "circle":  [[["0", "0"], ...]],
      "derivation": [["0", "0"], ...],  # optional, column j = D(e_j)
      "alpha": "1/2"                    # optional
    }

``bracket[i][j][k]`` is the coefficient of ``e_k`` in ``e_i * e_j``. Scalars are
strings so that values such as ``"-3/7"`` stay exact. Unknown keys are rejected.

Reports are JSON with a fixed key order, wrapped in an envelope that records
the tool version and a SHA-256 digest of the input.
"""
from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np

from . import __version__
from .algebra import BilinearOp, Element, LinearMap, TwoProductAlgebra
from .census import CensusResult, CensusSpec, CensusWitness
from .endv import Catalog, SpaceShape, SurveyReport, SurveyRow
from .errors import InputError
from .scalars import FieldSpec, Scalar, parse_scalar
from .taxonomy import AlphaSolution, AlphaStatus, AxiomReport, Failure, StructureKind

ALGEBRA_KEYS = ("field", "dim", "bracket", "circle", "derivation", "alpha")
REQUIRED_KEYS = ("field", "dim", "bracket", "circle")


# -- algebra files ----------------------------------------------------------------------

def _parse_array(data, shape, field: FieldSpec, where: str):
    if len(shape) == 0:
        if not isinstance(data, str):
            raise InputError(f"{where}: expected a scalar string, got {data!r}")
        try:
            return parse_scalar(data, field).value
        except InputError as e:
            raise InputError(f"{where}: {e}") from None
    if not isinstance(data, list) or len(data) != shape[0]:
        got = len(data) if isinstance(data, list) else type(data).__name__
        raise InputError(f"{where}: expected a list of {shape[0]} entries, got {got}")
    return [_parse_array(d, shape[1:], field, f"{where}[{i}]") for i, d in enumerate(data)]


def algebra_from_dict(data: Dict[str, Any]) -> TwoProductAlgebra:
    if not isinstance(data, dict):
        raise InputError("algebra file must contain a JSON object")
    unknown = sorted(set(data) - set(ALGEBRA_KEYS))
    if unknown:
        raise InputError(f"unknown fields: {', '.join(unknown)} (allowed: {', '.join(ALGEBRA_KEYS)})")
    missing = [k for k in REQUIRED_KEYS if k not in data]
    if missing:
        raise InputError(f"missing fields: {', '.join(missing)}")
    if not isinstance(data["field"], str):
        raise InputError("field: expected 'Q' or 'F<p>'")
    field = FieldSpec.parse(data["field"])
    n = data["dim"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise InputError(f"dim: expected a positive integer, got {n!r}")
    bracket = BilinearOp(field, _parse_array(data["bracket"], (n, n, n), field, "bracket"))
    circle = BilinearOp(field, _parse_array(data["circle"], (n, n, n), field, "circle"))
    d = None
    if data.get("derivation") is not None:
        d = LinearMap(field, _parse_array(data["derivation"], (n, n), field, "derivation"))
    alpha = None
    if data.get("alpha") is not None:
        alpha = Scalar(field, _parse_array(data["alpha"], (), field, "alpha"))
    return TwoProductAlgebra(bracket, circle, d, alpha, field)


def _strings(arr: np.ndarray, field: FieldSpec):
    def walk(x):
        return [walk(v) for v in x] if isinstance(x, list) else field.format(x)
    return walk(arr.tolist())


def algebra_to_dict(a: TwoProductAlgebra) -> Dict[str, Any]:
    f = a.field
    out = {"field": str(f), "dim": a.dim,
           "bracket": _strings(a.bracket.coeffs, f),
           "circle": _strings(a.circle.coeffs, f)}
    if a.derivation is not None:
        out["derivation"] = _strings(a.derivation.matrix, f)
    if a.alpha is not None:
        out["alpha"] = str(a.alpha)
    return out


def load_algebra(path: Union[str, Path]) -> TwoProductAlgebra:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from None
    try:
        return algebra_from_dict(data)
    except InputError as e:
        raise InputError(f"{path}: {e}") from None


def dump_algebra(a: TwoProductAlgebra, path: Union[str, Path]):
    Path(path).write_text(dumps(algebra_to_dict(a)))


# -- reports ------------------------------------------------------------------------------

def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def digest_bytes(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def digest_object(obj) -> str:
    return digest_bytes(json.dumps(obj, sort_keys=True, separators=(",", ":")).encode())


def envelope(command: str, input_digest: str, result) -> Dict[str, Any]:
    return {"tool": "poissonkit", "version": __version__, "command": command,
            "input_digest": input_digest, "result": result}


def _element(e: Optional[Element]):
    return None if e is None else list(e.format())


def axiom_report_to_dict(r: AxiomReport, field: FieldSpec) -> Dict[str, Any]:
    return {
        "kind": r.kind.value,
        "field": str(field),
        "passed": r.passed,
        "alpha": None if r.alpha_used is None else str(r.alpha_used),
        "failures": [{"axiom": f.axiom,
                      "witness": None if f.witness is None else list(f.witness),
                      "residual": _element(f.residual)} for f in r.failures],
    }


def axiom_report_from_dict(d: Dict[str, Any]) -> AxiomReport:
    field = FieldSpec.parse(d["field"])
    failures = []
    for f in d["failures"]:
        residual = None
        if f["residual"] is not None:
            residual = Element(field, [parse_scalar(s, field).value for s in f["residual"]])
        witness = None if f["witness"] is None else tuple(f["witness"])
        failures.append(Failure(f["axiom"], witness, residual))
    alpha = None if d["alpha"] is None else parse_scalar(d["alpha"], field)
    return AxiomReport(StructureKind(d["kind"]), d["passed"], alpha, tuple(failures))


def classification_to_dict(reports: Dict[StructureKind, Optional[AxiomReport]],
                           field: FieldSpec) -> Dict[str, Any]:
    status = {}
    for kind, r in reports.items():
        status[kind.value] = "not-applicable" if r is None else ("passed" if r.passed else "failed")
    return {
        "passed": [k for k, s in status.items() if s == "passed"],
        "failed": [k for k, s in status.items() if s == "failed"],
        "not_applicable": [k for k, s in status.items() if s == "not-applicable"],
        "reports": [axiom_report_to_dict(r, field) for r in reports.values() if r is not None],
    }


def alpha_solution_to_dict(kind: StructureKind, s: AlphaSolution) -> Dict[str, Any]:
    return {"kind": kind.value, "status": s.status.value,
            "alpha": None if s.value is None else str(s.value)}


def alpha_solution_from_dict(d: Dict[str, Any], field: FieldSpec) -> AlphaSolution:
    value = None if d["alpha"] is None else parse_scalar(d["alpha"], field)
    return AlphaSolution(AlphaStatus(d["status"]), value)


def census_spec_to_dict(spec: CensusSpec) -> Dict[str, Any]:
    return {"field": str(spec.field), "dim": spec.dim, "with_derivation": spec.with_derivation,
            "kinds": [k.value for k in spec.kinds], "cap": spec.cap}


def census_result_to_dict(r: CensusResult) -> Dict[str, Any]:
    return {
        "spec": census_spec_to_dict(r.spec),
        "total_enumerated": r.total_enumerated,
        "counts": {k.value: c for k, c in r.counts.items()},
        "witnesses": {k.value: {"index": w.index, "bracket": list(w.bracket), "circle": list(w.circle),
                                "derivation": None if w.derivation is None else list(w.derivation)}
                      for k, w in sorted(r.witnesses.items(), key=lambda kv: kv[0].index)},
    }


def census_result_from_dict(d: Dict[str, Any]) -> CensusResult:
    s = d["spec"]
    spec = CensusSpec(FieldSpec.parse(s["field"]), s["dim"], s["with_derivation"],
                      tuple(StructureKind(k) for k in s["kinds"]), s["cap"])
    witnesses = {}
    for k, w in d["witnesses"].items():
        der = None if w["derivation"] is None else tuple(w["derivation"])
        witnesses[StructureKind(k)] = CensusWitness(w["index"], tuple(w["bracket"]),
                                                    tuple(w["circle"]), der)
    counts = {StructureKind(k): c for k, c in d["counts"].items()}
    return CensusResult(spec, d["total_enumerated"], counts, witnesses)


def survey_report_to_dict(r: SurveyReport) -> Dict[str, Any]:
    return {
        "shape": {"n": r.shape.n, "m": r.shape.m},
        "field": str(r.field),
        "catalog": r.catalog.to_dict(),
        "closed_rows": r.closed_rows,
        "counts": {k.value: c for k, c in r.counts.items()},
        "remark_check": r.remark_check,
        "rows": [{"subspace": row.subspace, "bracket": row.bracket, "circle": row.circle,
                  "derivation": row.derivation, "closed": row.closed,
                  "kinds_passed": [k.value for k in sorted(row.kinds_passed, key=lambda k: k.index)],
                  "escape": row.escape} for row in r.rows],
    }


def survey_report_from_dict(d: Dict[str, Any]) -> SurveyReport:
    rows = tuple(SurveyRow(x["subspace"], x["bracket"], x["circle"], x["derivation"], x["closed"],
                           frozenset(StructureKind(k) for k in x["kinds_passed"]), x["escape"])
                 for x in d["rows"])
    return SurveyReport(SpaceShape(d["shape"]["n"], d["shape"]["m"]), FieldSpec.parse(d["field"]),
                        rows, Catalog.from_dict(d["catalog"]))
