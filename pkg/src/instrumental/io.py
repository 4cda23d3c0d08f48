"""JSON and PORTA-style text formats for tables, expressions and polytopes.

Rationals travel as "p/q" strings so that nothing is lost in transit; float
tables (Born probabilities) keep plain JSON numbers.  The text formats cover
the classic polytope-file subset: a vertex file lists one point per line, an
inequality file one constraint per line with 1-based variables x1..xd.
"""

from __future__ import annotations

import csv
import json
import re
from fractions import Fraction
from io import StringIO
from typing import Any

import numpy as np

from .inequalities import LinearExpression
from .polytope import HPolytope, LinearInequality, VPolytope
from .quantum import Observable2, QuantumStrategy, TwoQubitState
from .scenario import Correlation, DeterministicStrategy, Kind, Scenario

__all__ = [
    "fraction_to_str",
    "fraction_from_str",
    "scenario_to_json",
    "scenario_from_json",
    "correlation_to_json",
    "correlation_from_json",
    "load_correlation",
    "save_correlation",
    "deterministic_strategy_to_json",
    "deterministic_strategy_from_json",
    "expression_to_json",
    "expression_from_json",
    "quantum_strategy_to_json",
    "quantum_strategy_from_json",
    "vpolytope_to_json",
    "vpolytope_from_json",
    "hpolytope_to_json",
    "hpolytope_from_json",
    "write_poi",
    "read_poi",
    "write_ieq",
    "read_ieq",
    "format_bounds_table",
    "format_bounds_csv",
]


def fraction_to_str(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def fraction_from_str(s) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise TypeError(f"expected a rational string, got {s!r}")
    return Fraction(s)


def scenario_to_json(s: Scenario) -> dict[str, Any]:
    d: dict[str, Any] = {
        "kind": s.kind.value,
        "nX": s.nX,
        "nY": s.nY,
        "nA": s.nA,
        "nB": s.nB,
    }
    if s.wiring is not None:
        d["wiring"] = [list(row) for row in s.wiring]
    return d


def scenario_from_json(d: dict[str, Any]) -> Scenario:
    kind = Kind(d["kind"])
    wiring = d.get("wiring")
    return Scenario(
        kind,
        int(d["nX"]),
        int(d["nY"]),
        int(d["nA"]),
        int(d["nB"]),
        None if wiring is None else tuple(tuple(int(y) for y in row) for row in wiring),
    )


def correlation_to_json(p: Correlation) -> dict[str, Any]:
    entries: list[Any]
    if p.exact:
        entries = [fraction_to_str(e) for e in p.entries]
    else:
        entries = list(p.entries)
    return {"scenario": scenario_to_json(p.scenario), "entries": entries}


def correlation_from_json(d: dict[str, Any]) -> Correlation:
    s = scenario_from_json(d["scenario"])
    raw = d["entries"]
    if all(isinstance(e, (str, int)) for e in raw):
        entries = tuple(fraction_from_str(e) for e in raw)
    else:
        entries = tuple(float(e) for e in raw)
    return Correlation(s, entries)


def load_correlation(path) -> Correlation:
    with open(path, encoding="utf-8") as fh:
        return correlation_from_json(json.load(fh))


def save_correlation(p: Correlation, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(correlation_to_json(p), fh, indent=2)
        fh.write("\n")


def deterministic_strategy_to_json(d: DeterministicStrategy) -> dict[str, Any]:
    return {
        "scenario": scenario_to_json(d.scenario),
        "alpha": list(d.alpha),
        "beta": list(d.beta),
    }


def deterministic_strategy_from_json(d: dict[str, Any]) -> DeterministicStrategy:
    return DeterministicStrategy(
        scenario_from_json(d["scenario"]),
        tuple(int(a) for a in d["alpha"]),
        tuple(int(b) for b in d["beta"]),
    )


def expression_to_json(e: LinearExpression, label: str | None = None) -> dict[str, Any]:
    d: dict[str, Any] = {
        "scenario": scenario_to_json(e.scenario),
        "coeffs": [fraction_to_str(c) for c in e.coeffs],
        "constant": fraction_to_str(e.constant),
    }
    if label is not None:
        d["label"] = label
    return d


def expression_from_json(d: dict[str, Any]) -> LinearExpression:
    return LinearExpression(
        scenario_from_json(d["scenario"]),
        tuple(fraction_from_str(c) for c in d["coeffs"]),
        fraction_from_str(d.get("constant", "0")),
    )


def quantum_strategy_to_json(q: QuantumStrategy) -> dict[str, Any]:
    rho = q.state.matrix
    if q.state == TwoQubitState.phi_plus():
        state: Any = "phi_plus"
    else:
        state = [[float(z.real), float(z.imag)] for z in rho.flatten()]
    return {
        "state": state,
        "alice": [[o.vx, o.vz] for o in q.alice],
        "bob": [[o.vx, o.vz] for o in q.bob],
    }


def quantum_strategy_from_json(d: dict[str, Any]) -> QuantumStrategy:
    raw = d["state"]
    if raw == "phi_plus":
        state = TwoQubitState.phi_plus()
    else:
        if len(raw) != 16:
            raise ValueError("a general state needs 16 complex entries")
        flat = np.array([complex(re, im) for re, im in raw])
        state = TwoQubitState(flat.reshape(4, 4))
    return QuantumStrategy(
        state,
        tuple(Observable2(vx, vz) for vx, vz in d["alice"]),
        tuple(Observable2(vx, vz) for vx, vz in d["bob"]),
    )


def vpolytope_to_json(v: VPolytope) -> dict[str, Any]:
    return {
        "dim": v.dim,
        "vertices": [[fraction_to_str(c) for c in vert] for vert in v.vertices],
    }


def vpolytope_from_json(d: dict[str, Any]) -> VPolytope:
    return VPolytope(
        int(d["dim"]),
        tuple(
            tuple(fraction_from_str(c) for c in vert) for vert in d["vertices"]
        ),
    )


def hpolytope_to_json(h: HPolytope) -> dict[str, Any]:
    return {
        "dim": h.dim,
        "inequalities": [
            {
                "coeffs": [fraction_to_str(c) for c in q.coeffs],
                "bound": fraction_to_str(q.bound),
            }
            for q in h.inequalities
        ],
        "equalities": [
            {
                "coeffs": [fraction_to_str(c) for c in coeffs],
                "bound": fraction_to_str(rhs),
            }
            for coeffs, rhs in h.equalities
        ],
    }


def hpolytope_from_json(d: dict[str, Any]) -> HPolytope:
    def row(entry):
        return tuple(fraction_from_str(c) for c in entry["coeffs"])

    return HPolytope(
        int(d["dim"]),
        tuple(
            LinearInequality(row(e), fraction_from_str(e["bound"]))
            for e in d["inequalities"]
        ),
        tuple((row(e), fraction_from_str(e["bound"])) for e in d["equalities"]),
    )


_ROW_PREFIX = re.compile(r"^\(\s*\d+\s*\)\s*")
_TERM = re.compile(r"([+-]?\s*(?:\d+(?:/\d+)?)?)\s*x(\d+)")


def write_poi(v: VPolytope) -> str:
    lines = [f"DIM = {v.dim}", "", "CONV_SECTION"]
    for vert in v.vertices:
        lines.append(" ".join(fraction_to_str(c) for c in vert))
    lines.append("END")
    return "\n".join(lines) + "\n"


def read_poi(text: str) -> VPolytope:
    dim: int | None = None
    vertices: list[tuple[Fraction, ...]] = []
    in_section = False
    for raw in text.splitlines():
        line = _ROW_PREFIX.sub("", raw.strip())
        if not line:
            continue
        if line.startswith("DIM"):
            dim = int(line.split("=")[1])
        elif line == "CONV_SECTION":
            in_section = True
        elif line == "END":
            in_section = False
        elif in_section:
            vertices.append(tuple(Fraction(tok) for tok in line.split()))
    if dim is None:
        raise ValueError("missing DIM line")
    if any(len(v) != dim for v in vertices):
        raise ValueError("vertex length does not match DIM")
    return VPolytope(dim, tuple(vertices))


def _ieq_lhs(coeffs) -> str:
    parts = []
    for j, c in enumerate(coeffs):
        if c == 0:
            continue
        sign = "+" if c > 0 else "-"
        mag = abs(c)
        parts.append(f"{sign}{fraction_to_str(mag)}x{j + 1}")
    if not parts:
        raise ValueError("cannot write a constraint with an all-zero left side")
    return " ".join(parts)


def write_ieq(h: HPolytope) -> str:
    lines = [f"DIM = {h.dim}", "", "INEQUALITIES_SECTION"]
    row = 1
    for coeffs, rhs in h.equalities:
        lines.append(f"( {row}) {_ieq_lhs(coeffs)} == {fraction_to_str(rhs)}")
        row += 1
    for q in h.inequalities:
        lines.append(f"( {row}) {_ieq_lhs(q.coeffs)} <= {fraction_to_str(q.bound)}")
        row += 1
    lines.append("END")
    return "\n".join(lines) + "\n"


def _parse_ieq_row(line: str, dim: int):
    for rel in ("<=", ">=", "=="):
        if rel in line:
            lhs_text, rhs_text = line.split(rel)
            break
    else:
        raise ValueError(f"no relation in constraint line: {line!r}")
    rhs = Fraction(rhs_text.strip())
    coeffs = [Fraction(0)] * dim
    matched = 0
    for m in _TERM.finditer(lhs_text):
        raw, var = m.group(1).replace(" ", ""), int(m.group(2))
        if not 1 <= var <= dim:
            raise ValueError(f"variable x{var} out of range for DIM = {dim}")
        if raw in ("", "+"):
            c = Fraction(1)
        elif raw == "-":
            c = Fraction(-1)
        else:
            c = Fraction(raw)
        coeffs[var - 1] += c
        matched += 1
    if matched == 0:
        raise ValueError(f"no terms in constraint line: {line!r}")
    if rel == ">=":
        coeffs = [-c for c in coeffs]
        rhs = -rhs
    return tuple(coeffs), rhs, rel == "=="


def read_ieq(text: str) -> HPolytope:
    dim: int | None = None
    ineqs: list[LinearInequality] = []
    eqs: list[tuple[tuple[Fraction, ...], Fraction]] = []
    in_section = False
    for raw in text.splitlines():
        line = _ROW_PREFIX.sub("", raw.strip())
        if not line:
            continue
        if line.startswith("DIM"):
            dim = int(line.split("=")[1])
        elif line == "INEQUALITIES_SECTION":
            in_section = True
        elif line == "END":
            in_section = False
        elif in_section:
            if dim is None:
                raise ValueError("constraints before DIM line")
            coeffs, rhs, is_eq = _parse_ieq_row(line, dim)
            if is_eq:
                eqs.append((coeffs, rhs))
            else:
                ineqs.append(LinearInequality(coeffs, rhs))
    if dim is None:
        raise ValueError("missing DIM line")
    return HPolytope(dim, tuple(ineqs), tuple(eqs))


def format_bounds_table(rows: list[tuple[str, str, float]]) -> str:
    """Three-column text table: theory, exact form, decimal value."""
    header = ("theory", "exact", "approx")
    body = [(t, e, f"{v:.9f}") for t, e, v in rows]
    widths = [
        max(len(r[i]) for r in [header, *body]) for i in range(3)
    ]
    lines = []
    for r in [header, *body]:
        lines.append("  ".join(col.ljust(w) for col, w in zip(r, widths)).rstrip())
    return "\n".join(lines) + "\n"


def format_bounds_csv(rows: list[tuple[str, str, float]]) -> str:
    buf = StringIO()
    writer = csv.writer(buf)
    writer.writerow(["theory", "exact", "approx"])
    for t, e, v in rows:
        writer.writerow([t, e, repr(v)])
    return buf.getvalue()
