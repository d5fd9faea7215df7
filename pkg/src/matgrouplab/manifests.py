"""Experiment manifests: parsing, validation, runners, report emission.

A manifest selects one experiment kind and its parameters.  Two file
formats are accepted: a JSON object, or plain text with one `key =
value` per line (values are parsed as JSON when possible, else kept as
strings).  Validation applies per-kind schemas with defaults and
rejects unknown keys.

Reports are deterministic: floats are rounded to 12 significant digits
before JSON serialization with sorted keys, CSV cells use %.12g, and
the only timestamp lives in bundle.json.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

from .congruence import expander_scan, squarefree_range
from .diophantine import (
    apollonian_orbit,
    descartes_value,
    zaremba_forward_denominators,
    zaremba_scan,
)
from .groups import DEFAULT_CAP, GenSet, ball_enumerate, relation_search, walk_charpoly_stats
from .lattices import QuadLattice, component_fingerprint, min_distance_graph
from .matrices import IntMatrix
from .monodromy import (
    HGParams,
    NotIntegralError,
    build_monodromy,
    classify_closure,
    family_catalog,
    known_status,
    monodromy_atlas,
)
from .rotations import RotationGenSet, gamma_generators, integral_rotation_gens, tsigma_gap

__all__ = [
    "SchemaError",
    "KINDS",
    "Manifest",
    "Table",
    "ResultBundle",
    "parse_manifest_text",
    "load_manifest",
    "build_manifest",
    "run_manifest",
    "render_json",
    "table_csv",
    "emit_report",
    "GENS_PRESETS",
    "GRAM_PRESETS",
]

KINDS = (
    "expander",
    "monodromy",
    "cartan",
    "rotation",
    "zaremba",
    "apollonian",
    "walk",
    "ball",
)


class SchemaError(ValueError):
    """Invalid manifest: unknown kind or key, or a value out of range."""


# ---------------------------------------------------------------------------
# Manifest parsing.


def parse_manifest_text(text: str) -> dict:
    """Parse `key = value` lines; `#` starts a comment; values try JSON."""
    out: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SchemaError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if not key:
            raise SchemaError(f"line {lineno}: empty key")
        value = value.strip()
        try:
            out[key] = json.loads(value)
        except json.JSONDecodeError:
            out[key] = value
    return out


def load_manifest(path: str | Path) -> dict:
    """Load a manifest file: JSON when it starts with '{', else key=value."""
    text = Path(path).read_text()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON manifest: {exc}") from exc
        if not isinstance(data, dict):
            raise SchemaError("JSON manifest must be an object")
        return data
    return parse_manifest_text(text)


# ---------------------------------------------------------------------------
# Value converters.  Each returns the normalized value or raises SchemaError.


def _conv_int(key: str, value) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(f"{key} must be an integer, got {value!r}")
    return value


def _conv_pos_int(key: str, value) -> int:
    v = _conv_int(key, value)
    if v < 1:
        raise SchemaError(f"{key} must be >= 1, got {v}")
    return v


def _conv_nonneg_int(key: str, value) -> int:
    v = _conv_int(key, value)
    if v < 0:
        raise SchemaError(f"{key} must be >= 0, got {v}")
    return v


def _conv_bool(key: str, value) -> bool:
    if isinstance(value, bool):
        return value
    if isinstance(value, str) and value.lower() in ("true", "false"):
        return value.lower() == "true"
    raise SchemaError(f"{key} must be true or false, got {value!r}")


def _conv_str(key: str, value) -> str:
    if not isinstance(value, str):
        raise SchemaError(f"{key} must be a string, got {value!r}")
    return value


def _conv_choice(*choices: str):
    def conv(key: str, value):
        v = _conv_str(key, value)
        if v not in choices:
            raise SchemaError(f"{key} must be one of {choices}, got {v!r}")
        return v

    return conv


def _conv_target(key: str, value):
    if value is None:
        return None
    v = _conv_str(key, value)
    if v in ("none", ""):
        return None
    if v != "SL":
        raise SchemaError(f"{key} must be 'SL' or 'none', got {v!r}")
    return v


def _conv_int_list(key: str, value) -> list[int]:
    if isinstance(value, str):
        parts = [p.strip() for p in value.split(",") if p.strip()]
        try:
            value = [int(p) for p in parts]
        except ValueError as exc:
            raise SchemaError(f"{key} must be a list of integers, got {value!r}") from exc
    if not isinstance(value, list) or not value:
        raise SchemaError(f"{key} must be a nonempty list of integers")
    return [_conv_int(key, v) for v in value]


def _conv_fractions(key: str, value) -> list[Fraction]:
    """Exact rationals: integers or 'p/q' strings, never floats."""
    if isinstance(value, str):
        value = [p.strip() for p in value.split(",") if p.strip()]
    if not isinstance(value, list) or not value:
        raise SchemaError(f"{key} must be a nonempty list of rationals")
    out = []
    for v in value:
        if isinstance(v, bool) or isinstance(v, float):
            raise SchemaError(f"{key} entries must be exact: integers or 'p/q' strings")
        try:
            out.append(Fraction(v))
        except (ValueError, ZeroDivisionError, TypeError) as exc:
            raise SchemaError(f"{key} entry {v!r} is not a rational") from exc
    return out


def _square_int_rows(key: str, value) -> list[list[int]]:
    if not isinstance(value, list) or not value:
        raise SchemaError(f"{key} must be a nested list of integer rows")
    n = len(value)
    rows = []
    for row in value:
        if not isinstance(row, list) or len(row) != n:
            raise SchemaError(f"{key} must be a square matrix")
        rows.append([_conv_int(key, x) for x in row])
    return rows


def _dwork4_gens() -> list[IntMatrix]:
    triple = build_monodromy(family_catalog("3.4", 4))
    return [triple.A, triple.B]


GENS_PRESETS: dict[str, object] = {
    "sl2": lambda: [IntMatrix([[1, 2], [0, 1]]), IntMatrix([[1, 0], [2, 1]])],
    "unipotent3": lambda: [
        IntMatrix([[1, 1, 0], [0, 1, 0], [0, 0, 1]]),
        IntMatrix([[1, 0, 0], [0, 1, 1], [0, 0, 1]]),
    ],
    "dwork4": _dwork4_gens,
    "gamma44": lambda: integral_rotation_gens(4, 4),
}

GRAM_PRESETS: dict[str, list[list[int]]] = {
    # Quadratic form behind integer curvature quadruples: ones on the
    # diagonal and -1 off it, signature (3, 1).  It represents no -2
    # (parity obstruction), so its root report is honestly empty.
    "descartes": [
        [1, -1, -1, -1],
        [-1, 1, -1, -1],
        [-1, -1, 1, -1],
        [-1, -1, -1, 1],
    ],
    "lorentz2": [[1, 0], [0, -1]],
    "lorentz3": [[1, 0, 0], [0, 1, 0], [0, 0, -1]],
    # Doubled form: roots (0,0,+-1) at height 1 and (+-2,+-2,+-3) at 3.
    "even_lorentz3": [[2, 0, 0], [0, 2, 0], [0, 0, -2]],
    # Smallest Lorentz form whose root graph has -3 edges, e.g.
    # (1,1,0,2).(1,0,1,2) = -3.
    "lorentz4": [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, -1]],
}


def _conv_gens(key: str, value) -> list[IntMatrix]:
    if isinstance(value, str):
        maker = GENS_PRESETS.get(value)
        if maker is None:
            raise SchemaError(
                f"{key}: unknown preset {value!r}; choices are {sorted(GENS_PRESETS)}"
            )
        return maker()  # type: ignore[operator]
    if not isinstance(value, list) or not value:
        raise SchemaError(f"{key} must be a preset name or a list of integer matrices")
    mats = []
    for m in value:
        try:
            mats.append(IntMatrix(_square_int_rows(key, m)))
        except ValueError as exc:
            raise SchemaError(f"{key}: {exc}") from exc
    return mats


def _conv_gram(key: str, value) -> QuadLattice:
    if isinstance(value, str):
        rows = GRAM_PRESETS.get(value)
        if rows is None:
            raise SchemaError(
                f"{key}: unknown preset {value!r}; choices are {sorted(GRAM_PRESETS)}"
            )
    else:
        rows = _square_int_rows(key, value)
    try:
        return QuadLattice.of(rows)
    except ValueError as exc:
        raise SchemaError(f"{key}: {exc}") from exc


def _conv_family(key: str, value):
    if value is None:
        return None
    # Catalog keys like "3.4" parse as JSON numbers on the command line;
    # fold them back to their string form.
    if isinstance(value, float) and repr(value) in ("3.3", "3.4", "3.6", "3.7"):
        return repr(value)
    return _conv_str(key, value)


def _conv_gram_file(key: str, value) -> QuadLattice | None:
    """Row-major integer Gram matrix from a text file, one row per line."""
    if value is None:
        return None
    path = Path(_conv_str(key, value))
    if not path.is_file():
        raise SchemaError(f"{key}: no such file {path}")
    rows = []
    for line in path.read_text().splitlines():
        line = line.split("#", 1)[0].strip().replace(",", " ")
        if not line:
            continue
        try:
            rows.append([int(tok) for tok in line.split()])
        except ValueError as exc:
            raise SchemaError(f"{key}: non-integer entry in {path}") from exc
    return _conv_gram(key, rows)


def _conv_quadruple(key: str, value) -> tuple[int, int, int, int]:
    vals = _conv_int_list(key, value)
    if len(vals) != 4:
        raise SchemaError(f"{key} must have exactly 4 entries")
    quad = tuple(vals)
    if descartes_value(quad) != 0:
        raise SchemaError(f"{key} does not satisfy the Descartes identity: {quad}")
    return quad  # type: ignore[return-value]


def _conv_orders(key: str, value) -> tuple[int, int]:
    vals = _conv_int_list(key, value)
    if len(vals) != 2 or min(vals) < 1:
        raise SchemaError(f"{key} must be two positive integers, got {value!r}")
    return (vals[0], vals[1])


def _conv_opt_nonneg(key: str, value):
    if value is None or value == "none":
        return None
    return _conv_nonneg_int(key, value)


# ---------------------------------------------------------------------------
# Per-kind schemas and defaults.  Keys in _COMMON are accepted by every
# kind so command-line overrides stay uniform; runners ignore the ones
# they have no use for.

_COMMON = {
    "seed": _conv_int,
    "threads": _conv_pos_int,
    "cap_elements": _conv_pos_int,
}

_COMMON_DEFAULTS = {"seed": 0, "threads": 1, "cap_elements": DEFAULT_CAP}

SCHEMAS: dict[str, dict] = {
    "expander": {
        "gens": _conv_gens,
        "q_min": _conv_pos_int,
        "q_max": _conv_pos_int,
        "squarefree_only": _conv_bool,
        "k": _conv_pos_int,
        "target": _conv_target,
        "dense_check_max": _conv_nonneg_int,
        **_COMMON,
    },
    "monodromy": {
        "family": _conv_family,
        "n": _conv_pos_int,
        "alpha": lambda k, v: v if v is None else _conv_fractions(k, v),
        "beta": lambda k, v: v if v is None else _conv_fractions(k, v),
        "atlas": _conv_bool,
        "n_max": _conv_pos_int,
        **_COMMON,
    },
    "cartan": {
        "gram": _conv_gram,
        "gram_file": _conv_gram_file,
        "height": _conv_nonneg_int,
        "vertex_cap": _conv_pos_int,
        "fingerprints_max": _conv_nonneg_int,
        **_COMMON,
    },
    "rotation": {
        "orders": _conv_orders,
        "l_max": _conv_nonneg_int,
        "integral": _conv_bool,
        **_COMMON,
    },
    "zaremba": {
        "q_max": _conv_pos_int,
        "bound": _conv_pos_int,
        "oracle_max": _conv_nonneg_int,
        **_COMMON,
    },
    "apollonian": {
        "root": _conv_quadruple,
        "bound": _conv_pos_int,
        "order": _conv_choice("fifo", "lifo"),
        **_COMMON,
    },
    "walk": {
        "gens": _conv_gens,
        "lengths": _conv_int_list,
        "trials": _conv_pos_int,
        **_COMMON,
    },
    "ball": {
        "gens": _conv_gens,
        "radius": _conv_nonneg_int,
        "norm_bound": _conv_opt_nonneg,
        "relations_max_len": _conv_nonneg_int,
        **_COMMON,
    },
}

DEFAULTS: dict[str, dict] = {
    "expander": {
        "gens": "sl2",
        "q_min": 3,
        "q_max": 60,
        "squarefree_only": True,
        "k": 6,
        "target": "SL",
        "dense_check_max": 5000,
    },
    "monodromy": {
        "family": None,
        "n": 4,
        "alpha": None,
        "beta": None,
        "atlas": False,
        "n_max": 9,
    },
    "cartan": {
        "gram": "lorentz4",
        "gram_file": None,
        "height": 3,
        "vertex_cap": 20_000,
        "fingerprints_max": 12,
    },
    "rotation": {"orders": [3, 3], "l_max": 12, "integral": False},
    "zaremba": {"q_max": 2000, "bound": 5, "oracle_max": 0},
    "apollonian": {"root": [-1, 2, 2, 3], "bound": 2000, "order": "fifo"},
    "walk": {"gens": "sl2", "lengths": [8, 16], "trials": 200},
    "ball": {"gens": "sl2", "radius": 6, "norm_bound": None, "relations_max_len": 0},
}


@dataclass(frozen=True)
class Manifest:
    kind: str
    params: dict


def build_manifest(raw: dict, overrides: dict | None = None) -> Manifest:
    """Validate a raw mapping into a Manifest, applying defaults.

    `overrides` (typically command-line values) are merged on top of the
    file values before validation.
    """
    data = dict(raw)
    if overrides:
        data.update(overrides)
    kind = data.pop("kind", None)
    if kind is None:
        raise SchemaError("manifest is missing the required key 'kind'")
    if kind not in KINDS:
        raise SchemaError(f"unknown kind {kind!r}; choices are {list(KINDS)}")
    if kind == "cartan" and "gram" in data and "gram_file" in data:
        raise SchemaError("give either gram or gram_file, not both")
    schema = SCHEMAS[kind]
    params = {**_COMMON_DEFAULTS, **DEFAULTS[kind]}
    for key, value in data.items():
        conv = schema.get(key)
        if conv is None:
            raise SchemaError(f"unknown key {key!r} for kind {kind!r}")
        params[key] = conv(key, value)
    # Re-run converters on defaults that are preset names or raw lists.
    for key in ("gens", "gram", "root", "orders"):
        if key in params and key in schema and key not in data:
            params[key] = schema[key](key, params[key])
    _cross_validate(kind, params)
    return Manifest(kind=kind, params=params)


def _cross_validate(kind: str, p: dict) -> None:
    if kind == "expander" and p["q_min"] > p["q_max"]:
        raise SchemaError("q_min must be <= q_max")
    if kind == "monodromy" and not p["atlas"]:
        has_lists = p["alpha"] is not None or p["beta"] is not None
        if p["family"] is None and not (p["alpha"] and p["beta"]):
            raise SchemaError("monodromy needs family, or alpha and beta, or atlas=true")
        if p["family"] is not None and has_lists:
            raise SchemaError("give either family or alpha/beta, not both")
        if has_lists and (p["alpha"] is None or p["beta"] is None):
            raise SchemaError("alpha and beta must be given together")
    if kind == "rotation" and p["integral"] and tuple(p["orders"]) != (4, 4):
        raise SchemaError("integral rotation generators exist only for orders = [4, 4]")


# ---------------------------------------------------------------------------
# Result bundle.


@dataclass(frozen=True)
class Table:
    name: str
    columns: tuple[str, ...]
    rows: tuple[tuple, ...]


@dataclass(frozen=True)
class ResultBundle:
    kind: str
    params: dict  # JSON-safe normalized parameters
    outputs: dict
    tables: tuple[Table, ...]
    status: str  # "ok" or "partial"
    notes: tuple[str, ...] = field(default=())


def _public(value):
    """JSON-safe view of a normalized parameter value."""
    if isinstance(value, IntMatrix):
        return value.to_lists()
    if isinstance(value, QuadLattice):
        return [list(r) for r in value.gram]
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (list, tuple)):
        return [_public(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _public(v) for k, v in value.items()}
    return value


def _public_params(params: dict) -> dict:
    # threads is an execution knob that never changes results; keeping it
    # out of the report makes reruns byte-identical at any thread count.
    return {k: _public(v) for k, v in sorted(params.items()) if k != "threads"}


# ---------------------------------------------------------------------------
# Runners.


def _run_expander(p: dict) -> ResultBundle:
    S = GenSet.from_matrices(p["gens"])
    if p["squarefree_only"]:
        qs = squarefree_range(p["q_min"], p["q_max"])
    else:
        qs = list(range(max(p["q_min"], 2), p["q_max"] + 1))
    report = expander_scan(
        S,
        qs,
        k=p["k"],
        target=p["target"],
        allow_non_squarefree=not p["squarefree_only"],
        cap=p["cap_elements"],
        dense_check_max=p["dense_check_max"],
        seed=p["seed"],
        threads=p["threads"],
    )
    rows = []
    gaps1, gaps2 = [], []
    for r in report.rows:
        if r.spectrum is None:
            rows.append((r.q, None, None, None, None, None, None, None, None, r.error))
            continue
        s = r.spectrum
        if s.one_sided_gap is not None:
            gaps1.append(s.one_sided_gap)
        if s.two_sided_gap is not None:
            gaps2.append(s.two_sided_gap)
        rows.append(
            (
                r.q,
                s.vertex_count,
                s.degree,
                s.closure.order,
                s.closure.onto,
                s.one_sided_gap,
                s.two_sided_gap,
                s.bipartite,
                s.method,
                None,
            )
        )
    table = Table(
        name="spectra",
        columns=(
            "q",
            "vertices",
            "degree",
            "order",
            "onto",
            "one_sided_gap",
            "two_sided_gap",
            "bipartite",
            "method",
            "error",
        ),
        rows=tuple(rows),
    )
    errors = report.errors
    outputs = {
        "n": S.dimension,
        "q_count": len(qs),
        "completed": sum(1 for r in report.rows if r.spectrum is not None),
        "error_count": len(errors),
        "flagged_not_onto": list(report.flagged_not_onto),
        "min_one_sided_gap": min(gaps1) if gaps1 else None,
        "min_two_sided_gap": min(gaps2) if gaps2 else None,
    }
    notes = tuple(f"q={q}: {msg}" for q, msg in errors)
    status = "ok" if not errors else "partial"
    return ResultBundle("expander", _public_params(p), outputs, (table,), status, notes)


def _run_monodromy(p: dict) -> ResultBundle:
    if p["atlas"]:
        records = monodromy_atlas(n_max=p["n_max"])
        rows = []
        closure_counts: dict[str, int] = {}
        for rec in records:
            closure_counts[rec["closure"]] = closure_counts.get(rec["closure"], 0) + 1
            rows.append(
                (
                    rec["source"],
                    rec["n"],
                    " ".join(rec["alpha"]),
                    " ".join(rec["beta"]),
                    rec["closure"],
                    "" if rec["signature"] is None else " ".join(map(str, rec["signature"])),
                    rec["hyperbolic"],
                    rec["known_status"],
                )
            )
        table = Table(
            name="atlas",
            columns=(
                "source",
                "n",
                "alpha",
                "beta",
                "closure",
                "signature",
                "hyperbolic",
                "known_status",
            ),
            rows=tuple(rows),
        )
        outputs = {
            "record_count": len(records),
            "closure_counts": dict(sorted(closure_counts.items())),
            "n_max": p["n_max"],
        }
        return ResultBundle("monodromy", _public_params(p), outputs, (table,), "ok", ())

    status_note: tuple[str, ...] = ()
    if p["family"] is not None:
        try:
            params = family_catalog(p["family"], p["n"])
        except ValueError as exc:
            raise SchemaError(str(exc)) from exc
        status_note = (f"known status: {known_status(p['family'], p['n'])}",)
    else:
        try:
            params = HGParams.of(p["alpha"], p["beta"])
        except ValueError as exc:
            raise SchemaError(str(exc)) from exc
    try:
        triple = build_monodromy(params)
    except NotIntegralError as exc:
        outputs = {
            "integral": False,
            "reason": str(exc),
            "alpha": [str(x) for x in params.alpha],
            "beta": [str(x) for x in params.beta],
        }
        return ResultBundle("monodromy", _public_params(p), outputs, (), "ok", ())
    klass = classify_closure(triple)
    outputs = {
        "integral": True,
        "n": params.n,
        "alpha": [str(x) for x in params.alpha],
        "beta": [str(x) for x in params.beta],
        "A": triple.A.to_lists(),
        "B": triple.B.to_lists(),
        "C": triple.C.to_lists(),
        "closure": klass.to_dict(),
    }
    table = Table(
        name="monodromy",
        columns=("n", "alpha", "beta", "closure", "signature", "hyperbolic"),
        rows=(
            (
                params.n,
                " ".join(str(x) for x in params.alpha),
                " ".join(str(x) for x in params.beta),
                klass.kind,
                "" if klass.signature is None else " ".join(map(str, klass.signature)),
                klass.hyperbolic,
            ),
        ),
    )
    return ResultBundle("monodromy", _public_params(p), outputs, (table,), "ok", status_note)


def _run_cartan(p: dict) -> ResultBundle:
    lattice: QuadLattice = p["gram_file"] if p["gram_file"] is not None else p["gram"]
    graph = min_distance_graph(
        lattice, p["height"], cap=p["cap_elements"], vertex_cap=p["vertex_cap"]
    )
    n = lattice.n
    comp_of = graph.component_of
    root_rows = tuple(
        (i,) + tuple(v) + (comp_of[i],) for i, v in enumerate(graph.vertices)
    )
    roots_table = Table(
        name="roots",
        columns=("index",) + tuple(f"c{i}" for i in range(n)) + ("component",),
        rows=root_rows,
    )
    comp_rows = []
    fingerprints = []
    order = sorted(
        range(len(graph.components)),
        key=lambda ci: (-len(graph.components[ci]), graph.components[ci]),
    )
    for ci in order[: p["fingerprints_max"]]:
        fp = component_fingerprint(graph, ci)
        fingerprints.append(fp)
        degs = fp.degree_sequence
        comp_rows.append(
            (
                ci,
                fp.size,
                fp.diameter,
                degs[-1] if degs else 0,
                degs[0] if degs else 0,
            )
        )
    comp_table = Table(
        name="components",
        columns=("component", "size", "diameter", "degree_min", "degree_max"),
        rows=tuple(comp_rows),
    )
    distinct = {
        (fp.size, fp.degree_sequence, fp.diameter, fp.pair_values) for fp in fingerprints
    }
    outputs = {
        "n": n,
        "height": p["height"],
        "root_count": len(graph.vertices),
        "edge_count": len(graph.edges),
        "component_count": len(graph.components),
        "component_sizes": sorted((len(c) for c in graph.components), reverse=True),
        "distinct_fingerprints": len(distinct),
        "fingerprints": [fp.to_dict() for fp in fingerprints],
    }
    return ResultBundle(
        "cartan", _public_params(p), outputs, (comp_table, roots_table), "ok", ()
    )


def _run_rotation(p: dict) -> ResultBundle:
    m, n = p["orders"]
    if p["integral"]:
        S = RotationGenSet.of(integral_rotation_gens(m, n))
    else:
        S = gamma_generators(m, n)
    table = tsigma_gap(S, p["l_max"])
    rows = tuple(
        (r.l, 2 * r.l + 1, r.lam_max, r.lam_min, r.gap_after) for r in table.rows
    )
    levels = Table(
        name="levels",
        columns=("l", "dim", "lam_max", "lam_min", "gap_after"),
        rows=rows,
    )
    argmax_l = None
    if p["l_max"] >= 1:
        argmax_l = max(
            (r for r in table.rows if r.l >= 1), key=lambda r: (r.lam_max, -r.l)
        ).l
    outputs = {
        "t": table.t,
        "l_max": p["l_max"],
        "two_t": 2 * table.t,
        "gap": table.gap,
        "argmax_level": argmax_l,
    }
    return ResultBundle("rotation", _public_params(p), outputs, (levels,), "ok", ())


def _run_zaremba(p: dict) -> ResultBundle:
    report = zaremba_scan(p["q_max"], p["bound"])
    notes: tuple[str, ...] = ()
    oracle_checked = None
    if p["oracle_max"] > 0:
        lim = min(p["oracle_max"], p["q_max"])
        forward = zaremba_forward_denominators(lim, p["bound"])
        scanned = {r.q for r in report.rows if r.achieved and r.q <= lim}
        if forward != scanned:
            diff = sorted(forward.symmetric_difference(scanned))[:10]
            raise RuntimeError(
                f"zaremba oracle disagrees with the scan near {diff}"
            )
        oracle_checked = lim
        notes = (f"forward oracle agreed up to q = {lim}",)
    table = Table(
        name="denominators",
        columns=("q", "achieved", "witness"),
        rows=tuple((r.q, r.achieved, r.witness) for r in report.rows),
    )
    outputs = report.to_dict()
    outputs["oracle_checked"] = oracle_checked
    return ResultBundle("zaremba", _public_params(p), outputs, (table,), "ok", notes)


def _run_apollonian(p: dict) -> ResultBundle:
    report = apollonian_orbit(p["root"], p["bound"], order=p["order"])
    curv_table = Table(
        name="curvatures",
        columns=("curvature", "containment_count"),
        rows=tuple((c, report.counts[c]) for c in report.curvatures),
    )
    residue_table = Table(
        name="residues",
        columns=("residue_mod_24", "count"),
        rows=tuple(sorted(report.residues_mod_24.items())),
    )
    outputs = report.to_dict()
    outputs["residue_classes"] = sorted(report.residues_mod_24)
    return ResultBundle(
        "apollonian",
        _public_params(p),
        outputs,
        (curv_table, residue_table),
        "ok",
        (),
    )


def _run_walk(p: dict) -> ResultBundle:
    S = GenSet.from_matrices(p["gens"])
    report = walk_charpoly_stats(S, p["lengths"], p["trials"], p["seed"])
    table = Table(
        name="reducibility",
        columns=(
            "length",
            "trials",
            "irreducible",
            "reducible",
            "undetermined",
            "irreducible_fraction",
        ),
        rows=tuple(
            (
                r.length,
                r.trials,
                r.n_irreducible,
                r.n_reducible,
                r.n_undetermined,
                r.irreducible_fraction,
            )
            for r in report.rows
        ),
    )
    certs = Table(
        name="certificates",
        columns=("certificate", "count"),
        rows=tuple(sorted(report.certificates)),
    )
    outputs = {
        "n": S.dimension,
        "seed": report.seed,
        "total_trials": report.total_trials,
        "lengths": list(p["lengths"]),
        "final_irreducible_fraction": report.rows[-1].irreducible_fraction,
        "certificate_kinds": len(report.certificates),
    }
    return ResultBundle("walk", _public_params(p), outputs, (table, certs), "ok", ())


def _run_ball(p: dict) -> ResultBundle:
    S = GenSet.from_matrices(p["gens"])
    report = ball_enumerate(S, p["radius"], p["norm_bound"], cap=p["cap_elements"])
    spheres = [report.counts[0]] + [
        report.counts[i] - report.counts[i - 1] for i in range(1, len(report.counts))
    ]
    growth = Table(
        name="growth",
        columns=("radius", "cumulative", "sphere"),
        rows=tuple((r, report.counts[r], spheres[r]) for r in range(len(report.counts))),
    )
    tables = [growth]
    outputs = {
        "n": S.dimension,
        "degree": S.degree,
        "size": report.size,
        "stabilized": report.stabilized,
        "counts": list(report.counts),
    }
    notes: tuple[str, ...] = ()
    if p["relations_max_len"] >= 1:
        relations = relation_search(S, p["relations_max_len"], cap=p["cap_elements"])
        tables.append(
            Table(
                name="relations",
                columns=("length", "word"),
                rows=tuple((rel.length, rel.text) for rel in relations),
            )
        )
        outputs["relation_count"] = len(relations)
        outputs["shortest_relation"] = relations[0].text if relations else None
        outputs["free_up_to"] = None if relations else p["relations_max_len"]
        if not relations:
            notes = (
                f"no relations of length <= {p['relations_max_len']}: "
                "the generators are free to that depth",
            )
    return ResultBundle(
        "ball", _public_params(p), outputs, tuple(tables), "ok", notes
    )


_RUNNERS = {
    "expander": _run_expander,
    "monodromy": _run_monodromy,
    "cartan": _run_cartan,
    "rotation": _run_rotation,
    "zaremba": _run_zaremba,
    "apollonian": _run_apollonian,
    "walk": _run_walk,
    "ball": _run_ball,
}


def run_manifest(manifest: Manifest) -> ResultBundle:
    return _RUNNERS[manifest.kind](manifest.params)


# ---------------------------------------------------------------------------
# Serialization.


def _round_floats(obj):
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, float):
        return float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def bundle_payload(bundle: ResultBundle) -> dict:
    return {
        "kind": bundle.kind,
        "params": bundle.params,
        "outputs": bundle.outputs,
        "status": bundle.status,
        "notes": list(bundle.notes),
        "tables": {
            t.name: {"columns": list(t.columns), "rows": [list(r) for r in t.rows]}
            for t in bundle.tables
        },
    }


def render_json(bundle: ResultBundle) -> str:
    payload = _round_floats(bundle_payload(bundle))
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return "%.12g" % value
    return str(value)


def table_csv(table: Table) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def emit_report(
    bundle: ResultBundle,
    out_dir: str | Path,
    fmt: str = "both",
    figures: bool = True,
) -> list[Path]:
    """Write report.json, per-table CSVs, figures, and bundle.json.

    Everything except bundle.json (which carries the timestamp) is a
    pure function of the bundle, so reruns are byte-identical.
    """
    if fmt not in ("json", "csv", "both"):
        raise SchemaError(f"format must be json, csv, or both, got {fmt!r}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    if fmt in ("json", "both"):
        path = out / "report.json"
        path.write_text(render_json(bundle))
        written.append(path)
    if fmt in ("csv", "both"):
        for table in bundle.tables:
            path = out / f"{table.name}.csv"
            path.write_text(table_csv(table))
            written.append(path)
    if figures:
        from . import figures as _figures

        written.extend(_figures.render_figures(bundle, out))
    digests = {
        p.name: hashlib.sha256(p.read_bytes()).hexdigest() for p in written
    }
    meta = {
        "kind": bundle.kind,
        "status": bundle.status,
        "created_utc": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "files": digests,
    }
    bundle_path = out / "bundle.json"
    bundle_path.write_text(json.dumps(meta, sort_keys=True, indent=2) + "\n")
    written.append(bundle_path)
    return written
