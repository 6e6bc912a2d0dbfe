"""Text and JSON formats for complexes, moves and move logs.

Facet-list text: ``#`` comment lines, then one facet per line as
space-separated vertex ids.  The canonical writer sorts vertices within a line
and lines lexicographically; a name is written as a leading ``# name:`` line.
"""
from __future__ import annotations

import json
from pathlib import Path

from .complex_core import FacetComplex, build_complex
from .errors import ParseError
from .moves import MoveLog


def parse_facet_list(text: str) -> FacetComplex:
    name = None
    facets = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("name:") and name is None and not facets:
                name = body[5:].strip() or None
            continue
        try:
            facets.append([int(tok) for tok in line.split()])
        except ValueError:
            raise ParseError(f"line {lineno}: expected integers, got {line!r}")
    if not facets:
        raise ParseError("no facets found")
    return build_complex(facets, name=name)


def write_facet_list(C: FacetComplex) -> str:
    lines = [f"# name: {C.name}"] if C.name else []
    lines += [" ".join(str(v) for v in f) for f in C.facets]
    return "\n".join(lines) + "\n"


def complex_to_json(C: FacetComplex) -> str:
    obj = {"facets": [list(f) for f in C.facets]}
    if C.name:
        obj["name"] = C.name
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def complex_from_json(text: str) -> FacetComplex:
    try:
        obj = json.loads(text)
        facets = obj["facets"]
    except (ValueError, KeyError, TypeError) as exc:
        raise ParseError(f"bad complex JSON: {exc}")
    return build_complex(facets, name=obj.get("name"))


def read_complex(path) -> FacetComplex:
    p = Path(path)
    text = p.read_text()
    if p.suffix == ".json" or text.lstrip().startswith("{"):
        C = complex_from_json(text)
    else:
        C = parse_facet_list(text)
    return C if C.name else C.with_name(p.stem)


def write_complex(C: FacetComplex, path, fmt: str = "text") -> None:
    Path(path).write_text(complex_to_json(C) if fmt == "json" else write_facet_list(C))


def write_log(log: MoveLog) -> str:
    return "".join(json.dumps(r, sort_keys=True, separators=(",", ":")) + "\n" for r in log)


def read_log(text: str) -> MoveLog:
    try:
        return MoveLog([json.loads(line) for line in text.splitlines() if line.strip()])
    except ValueError as exc:
        raise ParseError(f"bad log line: {exc}")
