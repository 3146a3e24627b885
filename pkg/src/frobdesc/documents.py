"""Serialized tower and report documents.

Tower documents:

    {"p": 2, "q": 2,
     "bottom": {"var": "x", "prime": "x"},
     "levels": [{"n": 1, "gen": "z", "square": "x + t",
                 "step": {"kind": "inert", "witness": "z"}}, ...],
     "genus_hint": 3}            # optional, as is "expected"

Serialization is deterministic (sorted keys), and reports carry the sha256
digest of the canonical spec document for provenance.  Schema violations
raise ``SchemaError`` with a JSON-pointer-style path.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any, Optional

from . import expr as ex
from .errors import SchemaError
from .tower import (
    Certificates,
    INERT,
    LevelRecord,
    RAMIFIED,
    TowerLevel,
    TowerSpec,
    TowerTrace,
)

REPORT_SCHEMA = "tower-report/1"

_TOWER_KEYS = {"p", "q", "bottom", "levels", "genus_hint", "expected"}
_LEVEL_KEYS = {"n", "gen", "square", "step"}
_STEP_KEYS = {"kind", "witness"}
_EXPECTED_KEYS = {"delta_0", "first_rational_level", "degree_0"}


def _need(doc: dict, key: str, path: str) -> Any:
    if key not in doc:
        raise SchemaError(f"{path}/{key}", "missing field")
    return doc[key]


def _as_int(value: Any, path: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise SchemaError(path, f"expected integer, got {value!r}")
    return value


def _as_str(value: Any, path: str) -> str:
    if not isinstance(value, str):
        raise SchemaError(path, f"expected string, got {value!r}")
    return value


def _as_expr(value: Any, path: str) -> str:
    text = _as_str(value, path)
    try:
        ex.parse(text)
    except ex.ParseError as err:
        raise SchemaError(path, f"unparseable expression: {err}") from err
    return text


def document_to_tower(doc: Any) -> TowerSpec:
    if not isinstance(doc, dict):
        raise SchemaError("", "document must be an object")
    extra = set(doc) - _TOWER_KEYS
    if extra:
        raise SchemaError(f"/{sorted(extra)[0]}", "unknown field")
    p = _as_int(_need(doc, "p", ""), "/p")
    if p != 2:
        raise SchemaError("/p", "engine restriction: p must be 2")
    q = _as_int(_need(doc, "q", ""), "/q")
    bottom = _need(doc, "bottom", "")
    if not isinstance(bottom, dict):
        raise SchemaError("/bottom", "expected object")
    if set(bottom) - {"var", "prime"}:
        raise SchemaError("/bottom", "unknown field")
    var = _as_str(_need(bottom, "var", "/bottom"), "/bottom/var")
    prime = _as_str(_need(bottom, "prime", "/bottom"), "/bottom/prime")

    raw_levels = _need(doc, "levels", "")
    if not isinstance(raw_levels, list) or not raw_levels:
        raise SchemaError("/levels", "expected non-empty list")
    levels = []
    for k, raw in enumerate(raw_levels):
        path = f"/levels/{k}"
        if not isinstance(raw, dict):
            raise SchemaError(path, "expected object")
        extra = set(raw) - _LEVEL_KEYS
        if extra:
            raise SchemaError(f"{path}/{sorted(extra)[0]}", "unknown field")
        n = _as_int(_need(raw, "n", path), f"{path}/n")
        gen = _as_str(_need(raw, "gen", path), f"{path}/gen")
        if not gen.isidentifier():
            raise SchemaError(f"{path}/gen", f"not an identifier: {gen!r}")
        square = _as_expr(_need(raw, "square", path), f"{path}/square")
        step = _need(raw, "step", path)
        if not isinstance(step, dict):
            raise SchemaError(f"{path}/step", "expected object")
        extra = set(step) - _STEP_KEYS
        if extra:
            raise SchemaError(f"{path}/step/{sorted(extra)[0]}", "unknown field")
        kind = _as_str(_need(step, "kind", f"{path}/step"), f"{path}/step/kind")
        if kind not in (RAMIFIED, INERT):
            raise SchemaError(f"{path}/step/kind", f"unknown step kind {kind!r}")
        witness = _as_expr(
            _need(step, "witness", f"{path}/step"), f"{path}/step/witness"
        )
        levels.append(TowerLevel(n, gen, square, kind, witness))

    ns = sorted(lv.n for lv in levels)
    if ns != list(range(len(levels))):
        raise SchemaError("/levels", f"levels must be contiguous N-1..0, got {ns}")

    genus_hint = doc.get("genus_hint")
    if genus_hint is not None:
        genus_hint = _as_int(genus_hint, "/genus_hint")
    expected = doc.get("expected")
    if expected is not None:
        if not isinstance(expected, dict):
            raise SchemaError("/expected", "expected object")
        for key, value in expected.items():
            if key not in _EXPECTED_KEYS:
                raise SchemaError(f"/expected/{key}", "unknown field")
            _as_int(value, f"/expected/{key}")

    return TowerSpec(
        q=q,
        bottom_var=var,
        bottom_prime=prime,
        levels=tuple(sorted(levels, key=lambda lv: -lv.n)),
        genus_hint=genus_hint,
        expected=expected,
        p=p,
    )


def tower_to_document(spec: TowerSpec) -> dict:
    doc: dict[str, Any] = {
        "p": spec.p,
        "q": spec.q,
        "bottom": {"var": spec.bottom_var, "prime": spec.bottom_prime},
        "levels": [
            {
                "n": lv.n,
                "gen": lv.gen,
                "square": lv.square,
                "step": {"kind": lv.step_kind, "witness": lv.witness},
            }
            for lv in sorted(spec.levels, key=lambda lv: -lv.n)
        ],
    }
    if spec.genus_hint is not None:
        doc["genus_hint"] = spec.genus_hint
    if spec.expected is not None:
        doc["expected"] = dict(spec.expected)
    return doc


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def digest(doc: dict) -> str:
    canonical = json.dumps(doc, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def save_tower(spec: TowerSpec, path: str | Path) -> None:
    Path(path).write_text(dumps(tower_to_document(spec)))


def load_tower(path: str | Path) -> TowerSpec:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as err:
        raise SchemaError("", f"not valid JSON: {err}") from err
    return document_to_tower(doc)


def load_bundled_tower(name: str) -> TowerSpec:
    from importlib import resources

    payload = resources.files("frobdesc.data").joinpath(f"{name}.tower").read_text()
    return document_to_tower(json.loads(payload))


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


def trace_to_document(trace: TowerTrace, spec: Optional[TowerSpec] = None) -> dict:
    cert = trace.certificates
    doc: dict[str, Any] = {
        "schema": REPORT_SCHEMA,
        "p": trace.p,
        "q": trace.q,
        "depth": trace.depth,
        "levels": [
            {
                "n": r.n,
                "degree": r.degree,
                "m": r.m,
                "rational": r.rational,
                "e": r.e,
                "f": r.f,
                "delta": r.delta,
                "Delta": r.drop,
                "method": r.method,
                "residue": r.residue_repr,
            }
            for r in trace.levels
        ],
        "certificates": {
            "non_decomposed": cert.non_decomposed,
            "gcd_Delta": cert.gcd_drop,
            "first_rational_level": cert.first_rational_level,
            "d_prime": cert.d_prime,
            "bound_level": cert.bound_level,
            "attains_bound": cert.attains_bound,
            "unresolved": cert.unresolved,
            "unresolved_note": cert.unresolved_note,
        },
        "provenance": {
            "p": trace.p,
            "q": trace.q,
            "spec_digest": digest(tower_to_document(spec)) if spec else None,
            "genus_hint": trace.genus_hint,
        },
    }
    return doc


def document_to_trace(doc: dict) -> TowerTrace:
    if doc.get("schema") != REPORT_SCHEMA:
        raise SchemaError("/schema", f"expected {REPORT_SCHEMA!r}")
    levels = tuple(
        LevelRecord(
            n=raw["n"],
            degree=raw["degree"],
            m=raw["m"],
            rational=raw["rational"],
            e=raw["e"],
            f=raw["f"],
            delta=raw["delta"],
            drop=raw["Delta"],
            method=raw["method"],
            residue_repr=raw.get("residue"),
        )
        for raw in doc["levels"]
    )
    cert = doc["certificates"]
    return TowerTrace(
        q=doc["q"],
        p=doc["p"],
        depth=doc["depth"],
        levels=levels,
        certificates=Certificates(
            non_decomposed=cert["non_decomposed"],
            gcd_drop=cert["gcd_Delta"],
            first_rational_level=cert["first_rational_level"],
            d_prime=cert["d_prime"],
            bound_level=cert["bound_level"],
            attains_bound=cert["attains_bound"],
            unresolved=cert["unresolved"],
            unresolved_note=cert.get("unresolved_note"),
        ),
        genus_hint=doc["provenance"].get("genus_hint"),
    )


def save_report(trace: TowerTrace, path: str | Path, spec: Optional[TowerSpec] = None) -> None:
    Path(path).write_text(dumps(trace_to_document(trace, spec)))


def load_report(path: str | Path) -> TowerTrace:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as err:
        raise SchemaError("", f"not valid JSON: {err}") from err
    return document_to_trace(doc)


def render_trace_text(trace: TowerTrace) -> str:
    lines = [
        f"tower over F_{trace.q}(t), depth {trace.depth}",
        f"{'n':>3} {'deg':>4} {'res.field':>12} {'e':>2} {'f':>2} "
        f"{'delta':>6} {'Delta':>6} {'method':>20}",
    ]
    for r in trace.levels:
        res = "K" if r.m == 0 else f"K(t^(1/{1 << r.m}))"
        lines.append(
            f"{r.n:>3} {r.degree:>4} {res:>12} "
            f"{'-' if r.e is None else r.e:>2} {'-' if r.f is None else r.f:>2} "
            f"{'-' if r.delta is None else r.delta:>6} "
            f"{'-' if r.drop is None else r.drop:>6} {r.method:>20}"
        )
    c = trace.certificates
    lines.append(
        f"certificates: non_decomposed={c.non_decomposed} gcd_Delta={c.gcd_drop} "
        f"first_rational_level={c.first_rational_level} bound_level={c.bound_level} "
        f"attains_bound={c.attains_bound} unresolved={c.unresolved}"
    )
    if c.unresolved_note:
        lines.append(f"note: {c.unresolved_note}")
    return "\n".join(lines)
