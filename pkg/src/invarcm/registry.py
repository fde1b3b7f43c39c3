"""Module-definition files and the registry of worked examples.

A definition file is line oriented: `group <name> p=<prime>` names one of the
built-in groups, `module <expr>` gives the construction expression for the
module the variables transform by, and optional `labels`, `weights`,
`matrix` (one column per line, the raw-input convention) and `option`
lines refine it.  `#` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from typing import Sequence

from .algroup import builtin_group
from .cmcheck import CMReport, is_not_cohen_macaulay
from .gmodule import Representation, construct, extract_weights, validate_representation

__all__ = [
    "DefinitionError",
    "ModuleDefinition",
    "ExampleRecord",
    "TIERS",
    "parse_definition",
    "build_representation",
    "definition_text",
    "example_ids",
    "get_example",
    "examples_in_tier",
    "run_example",
    "compare_report",
]

TIERS = ("fast", "medium", "long")


class DefinitionError(ValueError):
    """A malformed definition file; knows the offending line and column."""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class ModuleDefinition:
    """Parsed content of one definition file.

    The module comes either from a construction expression or from raw
    matrix columns; `labels` overrides the constructed variable names and
    is mandatory for raw input.  Prints losslessly via ``to_text``.
    """

    group_name: str
    p: int
    expr: str | None = None
    labels: tuple[str, ...] | None = None
    matrix_columns: tuple[tuple[str, ...], ...] = ()
    weights: tuple[int, ...] | None = None
    dmax: int | None = None
    max_phsop_degree: int | None = None
    use_weights: bool = False

    def to_text(self) -> str:
        out = [f"group {self.group_name} p={self.p}"]
        if self.expr is not None:
            out.append(f"module {self.expr}")
        if self.labels is not None:
            out.append("labels " + ",".join(self.labels))
        for col in self.matrix_columns:
            out.append("matrix " + ", ".join(col))
        if self.weights is not None:
            out.append("weights " + ",".join(str(w) for w in self.weights))
        if self.dmax is not None:
            out.append(f"option dmax={self.dmax}")
        if self.max_phsop_degree is not None:
            out.append(f"option max_phsop_degree={self.max_phsop_degree}")
        if self.use_weights:
            out.append("option use_weights=true")
        return "\n".join(out) + "\n"


_OPTION_KEYS = ("dmax", "max_phsop_degree", "use_weights")


def _column_of(raw: str, token: str) -> int:
    at = raw.find(token)
    return at + 1 if at >= 0 else 1


def parse_definition(text: str) -> ModuleDefinition:
    group_name = None
    p = None
    expr = None
    labels = None
    columns: list[tuple[str, ...]] = []
    weights = None
    options: dict[str, object] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        s = raw.split("#", 1)[0].strip()
        if not s:
            continue
        keyword, _, rest = s.partition(" ")
        rest = rest.strip()
        if keyword == "group":
            if group_name is not None:
                raise DefinitionError("duplicate group line", lineno)
            m = re.fullmatch(r"(\S+)\s+p=(\d+)", rest)
            if not m:
                raise DefinitionError(
                    "expected `group <name> p=<prime>`", lineno, _column_of(raw, rest or keyword)
                )
            group_name, p = m.group(1), int(m.group(2))
        elif keyword == "module":
            if expr is not None:
                raise DefinitionError("duplicate module line", lineno)
            if not rest:
                raise DefinitionError("empty module expression", lineno, _column_of(raw, keyword))
            expr = rest
        elif keyword == "labels":
            if labels is not None:
                raise DefinitionError("duplicate labels line", lineno)
            labels = tuple(t.strip() for t in rest.split(","))
            if not all(labels):
                raise DefinitionError("empty label", lineno, _column_of(raw, rest))
        elif keyword == "matrix":
            col = tuple(t.strip() for t in rest.split(","))
            if not all(col):
                raise DefinitionError("empty matrix entry", lineno, _column_of(raw, rest))
            columns.append(col)
        elif keyword == "weights":
            if weights is not None:
                raise DefinitionError("duplicate weights line", lineno)
            try:
                weights = tuple(int(t.strip()) for t in rest.split(","))
            except ValueError:
                raise DefinitionError("weights must be integers", lineno, _column_of(raw, rest))
        elif keyword == "option":
            m = re.fullmatch(r"(\w+)\s*=\s*(\S+)", rest)
            if not m:
                raise DefinitionError("expected `option <key>=<value>`", lineno, _column_of(raw, rest or keyword))
            key, value = m.group(1), m.group(2)
            if key not in _OPTION_KEYS:
                raise DefinitionError(f"unknown option {key!r}", lineno, _column_of(raw, key))
            if key in options:
                raise DefinitionError(f"duplicate option {key!r}", lineno)
            if key == "use_weights":
                if value not in ("true", "false"):
                    raise DefinitionError("use_weights must be true or false", lineno, _column_of(raw, value))
                options[key] = value == "true"
            else:
                try:
                    options[key] = int(value)
                except ValueError:
                    raise DefinitionError(f"{key} must be an integer", lineno, _column_of(raw, value))
                if options[key] < 0:
                    raise DefinitionError(f"{key} must be nonnegative", lineno, _column_of(raw, value))
        else:
            raise DefinitionError(f"unknown keyword {keyword!r}", lineno, _column_of(raw, keyword))

    if group_name is None or p is None:
        raise DefinitionError("missing group line", 1)
    if expr is None and not columns:
        raise DefinitionError("need a module expression or matrix columns", 1)
    if expr is not None and columns:
        raise DefinitionError("module expression and matrix columns are exclusive", 1)
    if columns:
        if labels is None:
            raise DefinitionError("matrix input needs a labels line", 1)
        n = len(columns)
        if len(labels) != n or any(len(c) != n for c in columns):
            raise DefinitionError("matrix must be square with one label per column", 1)
    return ModuleDefinition(
        group_name=group_name,
        p=p,
        expr=expr,
        labels=labels,
        matrix_columns=tuple(columns),
        weights=weights,
        dmax=options.get("dmax"),
        max_phsop_degree=options.get("max_phsop_degree"),
        use_weights=bool(options.get("use_weights", False)),
    )


def build_representation(defn: ModuleDefinition) -> Representation:
    """Turn a parsed definition into a validated representation."""
    group = builtin_group(defn.group_name, defn.p)
    if defn.expr is not None:
        rep = construct(group, defn.expr)
        if defn.labels is not None:
            if len(defn.labels) != rep.n:
                raise ValueError(
                    f"labels line has {len(defn.labels)} names for a module of dimension {rep.n}"
                )
            rep = Representation(group, rep.n, rep.matrix, defn.labels, rep.weights)
    else:
        n = len(defn.matrix_columns)
        cols = [tuple(group.ring.parse(e) for e in col) for col in defn.matrix_columns]
        mat = tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))
        rep = Representation(group, n, mat, defn.labels, None)
        if group.torus_embed is not None:
            try:
                rep = Representation(group, n, mat, defn.labels, extract_weights(rep))
            except ValueError:
                pass
        report = validate_representation(rep)
        if not report.passed:
            raise ValueError("matrix input is not a representation: " + "; ".join(report.failures))
    if defn.weights is not None:
        if rep.weights is not None and tuple(defn.weights) != tuple(rep.weights):
            raise ValueError(
                f"weights line {defn.weights} contradicts the torus weights {rep.weights}"
            )
        if len(defn.weights) != rep.n:
            raise ValueError("weights line has the wrong length")
        rep = Representation(group, rep.n, rep.matrix, rep.basis_labels, defn.weights)
    return rep


@dataclass(frozen=True)
class ExampleRecord:
    """One registered example with its expected detector outcome.

    ``None`` in an expected field means the source gives no value to
    compare against; present fields must reproduce exactly.
    """

    id: str
    definition: ModuleDefinition
    tier: str
    expected_verdict: bool
    expected_mismatch: int | None
    expected_estimated: int | None
    expected_actual: int | None

    @property
    def dmax(self) -> int:
        assert self.definition.dmax is not None
        return self.definition.dmax


# id -> (tier, verdict, mismatch degree, estimated, actual at that degree)
_EXPECTED: dict[str, tuple[str, bool, int | None, int | None, int | None]] = {
    "demo": ("fast", False, None, None, None),
    "6.02": ("fast", True, 4, 33, 32),
    "6.03": ("medium", True, 4, 95, 94),
    "6.04": ("medium", True, 7, 77, 76),
    "6.05": ("medium", True, 4, 143, 142),
    "6.06": ("medium", True, 7, 193, 192),
    "6.07": ("medium", True, 7, 120, 119),
    "6.08": ("medium", True, 6, 137, 136),
    "6.09": ("medium", True, 4, 60, 59),
    "6.10": ("long", True, 8, 366, 362),
    "6.11": ("medium", True, 7, 17, 16),
    "6.12": ("long", True, None, None, None),
    "6.13": ("medium", True, 9, 70, 69),
    "6.14": ("long", True, 8, 220, 210),
    "6.15": ("fast", True, 3, 45, 44),
    "6.16": ("fast", True, 6, 277, 276),
    "6.17": ("fast", True, 3, 29, 28),
    "6.18": ("fast", True, 6, 211, 210),
    "6.19": ("fast", True, 3, 29, 28),
}

_ORDER = ["demo"] + [f"6.{k:02d}" for k in range(2, 20)]


def definition_text(name: str) -> str:
    """Raw text of a packaged definition file (registry ids and extras)."""
    return (resources.files("invarcm") / "defs" / f"{name}.def").read_text()


def example_ids() -> list[str]:
    return list(_ORDER)


def get_example(example_id: str) -> ExampleRecord:
    if example_id not in _EXPECTED:
        raise KeyError(f"unknown example {example_id!r}")
    tier, verdict, mismatch, est, act = _EXPECTED[example_id]
    defn = parse_definition(definition_text(example_id))
    if defn.dmax is None:
        raise ValueError(f"definition for {example_id} lacks a dmax option")
    return ExampleRecord(example_id, defn, tier, verdict, mismatch, est, act)


def examples_in_tier(tier: str) -> list[ExampleRecord]:
    if tier == "all":
        return [get_example(i) for i in _ORDER]
    if tier not in TIERS:
        raise ValueError(f"unknown tier {tier!r}")
    return [r for r in (get_example(i) for i in _ORDER) if r.tier == tier]


def run_example(record: ExampleRecord, budget: int | None = None) -> CMReport:
    rep = build_representation(record.definition)
    return is_not_cohen_macaulay(
        rep,
        record.dmax,
        use_weights=record.definition.use_weights,
        max_phsop_degree=record.definition.max_phsop_degree,
        budget=budget,
    )


def compare_report(record: ExampleRecord, report: CMReport) -> list[str]:
    """Differences between a run and the record's expectations; empty = pass."""
    bad = []
    if report.verdict != record.expected_verdict:
        bad.append(f"verdict {report.verdict} != {record.expected_verdict}")
    if record.expected_mismatch is not None and report.first_mismatch_degree != record.expected_mismatch:
        bad.append(
            f"mismatch degree {report.first_mismatch_degree} != {record.expected_mismatch}"
        )
    if record.expected_estimated is not None:
        d = record.expected_mismatch
        assert d is not None
        got = report.estimated_dims[d] if d < len(report.estimated_dims) else None
        if got != record.expected_estimated:
            bad.append(f"estimated {got} != {record.expected_estimated} at degree {d}")
    if record.expected_actual is not None:
        d = record.expected_mismatch
        assert d is not None
        got = report.actual_dims[d] if d < len(report.actual_dims) else None
        if got != record.expected_actual:
            bad.append(f"actual {got} != {record.expected_actual} at degree {d}")
    return bad
