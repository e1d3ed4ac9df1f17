"""Stable on-disk formats.

* Inequality files are JSON objects ``{"m", "R", "alpha", "beta", "annotations"}``
  with rationals written as ``"p/q"`` (or integer) strings.
* Graphs are text: a header ``"n E"`` followed by ``E`` lines ``"i j"``.
* Weight matrices are text: ``n`` lines of ``n`` rationals.
* Reports are JSON with sorted keys; everything except ``timing`` is a
  deterministic function of the inputs.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from typing import Any, Dict, List, Sequence

from .bell import BellInequality, Scenario
from .digraph import DiGraph
from .errors import InputError


def fmt_rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(s) -> Fraction:
    if isinstance(s, bool) or isinstance(s, float):
        raise InputError(f"rationals must be given as integers or 'p/q' strings, got {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise InputError(f"cannot parse {s!r} as a rational")
    t = s.strip()
    if "." in t or "e" in t.lower():
        raise InputError(f"decimal notation is not accepted: {s!r}")
    try:
        return Fraction(t)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"cannot parse {s!r} as a rational") from exc


def to_jsonable(x: Any) -> Any:
    """Recursively render Fractions as strings and tuples as lists."""
    if isinstance(x, Fraction):
        return fmt_rational(x)
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if hasattr(x, "nodes") and hasattr(x, "length"):  # SimpleCycle
        return list(x.nodes)
    if x is not None and not isinstance(x, (str, int, bool)):
        return str(x)
    return x


# ---------------------------------------------------------------- inequalities

def inequality_to_dict(ineq: BellInequality) -> Dict[str, Any]:
    return {
        "m": ineq.scenario.m,
        "R": ineq.scenario.R,
        "alpha": [fmt_rational(a) for a in ineq.alpha],
        "beta": None if ineq.beta is None else fmt_rational(ineq.beta),
        "annotations": dict(sorted(ineq.annotations.items())),
    }


def inequality_from_dict(d: Dict[str, Any]) -> BellInequality:
    if not isinstance(d, dict):
        raise InputError("inequality file must hold a JSON object")
    try:
        m, R, alpha = d["m"], d["R"], d["alpha"]
    except KeyError as exc:
        raise InputError(f"inequality file lacks field {exc.args[0]!r}") from exc
    if not isinstance(m, int) or not isinstance(R, int) or not isinstance(alpha, list):
        raise InputError("fields m, R must be integers and alpha a list")
    beta = d.get("beta")
    ann = d.get("annotations") or {}
    if not isinstance(ann, dict):
        raise InputError("annotations must be a JSON object")
    return BellInequality(Scenario(m, R), tuple(parse_rational(a) for a in alpha),
                          None if beta is None else parse_rational(beta),
                          {str(k): str(v) for k, v in ann.items()})


def dumps_inequality(ineq: BellInequality) -> str:
    return json.dumps(inequality_to_dict(ineq), indent=2, sort_keys=True) + "\n"


def loads_inequality(text: str) -> BellInequality:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"inequality file is not valid JSON: {exc}") from exc
    return inequality_from_dict(d)


def read_inequality(path: str) -> BellInequality:
    try:
        with open(path, encoding="utf-8") as fh:
            return loads_inequality(fh.read())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


# ---------------------------------------------------------------- graphs and matrices

def dumps_graph(g: DiGraph) -> str:
    edges = g.sorted_edges()
    return "".join([f"{g.n} {len(edges)}\n"] + [f"{i} {j}\n" for i, j in edges])


def loads_graph(text: str) -> DiGraph:
    lines = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
    try:
        n, e = (int(x) for x in lines[0])
        edges = [(int(a), int(b)) for a, b in lines[1:]]
    except (ValueError, IndexError) as exc:
        raise InputError("malformed graph text") from exc
    if len(edges) != e:
        raise InputError(f"header announces {e} edges, found {len(edges)}")
    return DiGraph(n, edges)


def dumps_matrix(rows: Sequence[Sequence]) -> str:
    return "".join(" ".join(fmt_rational(x) for x in r) + "\n" for r in rows)


def loads_matrix(text: str) -> List[List[Fraction]]:
    rows = [[parse_rational(x) for x in ln.split()] for ln in text.strip().splitlines() if ln.strip()]
    if any(len(r) != len(rows) for r in rows):
        raise InputError("matrix text must be square")
    return rows


# ---------------------------------------------------------------- reports

def input_hash(*parts: str) -> str:
    h = hashlib.sha256()
    for p in parts:
        h.update(p.encode())
        h.update(b"\0")
    return h.hexdigest()


def make_report(command: List[str], digest: str, result: Dict[str, Any], timing: float) -> Dict[str, Any]:
    return {"command": list(command), "input_hash": digest, "result": to_jsonable(result),
            "timing": f"{timing:.3f}s"}


def dumps_report(report: Dict[str, Any]) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def loads_report(text: str) -> Dict[str, Any]:
    return json.loads(text)
