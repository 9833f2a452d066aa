"""Reading and writing facet lists (plain text and JSON)."""
from __future__ import annotations

import json
from pathlib import Path

from .complex import Complex3, ComplexError


class FacetFormatError(ComplexError):
    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        prefix = ""
        if source:
            prefix += f"{source}:"
        if line is not None:
            prefix += f"{line}: "
        elif prefix:
            prefix += " "
        super().__init__(prefix + message)
        self.line = line


def parse_facets(text: str, source: str | None = None) -> Complex3:
    facets = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 4:
            raise FacetFormatError(f"expected 4 labels, got {len(parts)}", lineno, source)
        try:
            labels = [int(p, 10) for p in parts]
        except ValueError:
            raise FacetFormatError(f"non-integer label in {line!r}", lineno, source) from None
        if any(x < 0 for x in labels):
            raise FacetFormatError(f"negative label in {line!r}", lineno, source)
        if len(set(labels)) != 4:
            raise FacetFormatError(f"repeated vertex in {line!r}", lineno, source)
        facets.append(labels)
    if not facets:
        raise FacetFormatError("no facets", None, source)
    return Complex3(facets)


def _find_line(text: str, needle_index: int) -> int:
    return text.count("\n", 0, needle_index) + 1


def parse_json_facets(text: str, source: str | None = None) -> Complex3:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FacetFormatError(exc.msg, exc.lineno, source) from None
    if not isinstance(data, dict) or not isinstance(data.get("facets"), list):
        raise FacetFormatError('expected an object with a "facets" list', 1, source)
    # Locate each facet's line for error messages by scanning the raw text.
    starts = []
    key = text.find('"facets"')
    pos = text.find("[", key) + 1
    depth = 0
    for i in range(pos, len(text)):
        ch = text[i]
        if ch == "[":
            if depth == 0:
                starts.append(i)
            depth += 1
        elif ch == "]":
            if depth == 0:
                break
            depth -= 1
    facets = []
    for k, item in enumerate(data["facets"]):
        lineno = _find_line(text, starts[k]) if k < len(starts) else None
        if (not isinstance(item, list) or len(item) != 4
                or not all(isinstance(x, int) and not isinstance(x, bool) for x in item)):
            raise FacetFormatError(f"facet {k} is not a list of 4 integers", lineno, source)
        if any(x < 0 for x in item):
            raise FacetFormatError(f"facet {k} has a negative label", lineno, source)
        if len(set(item)) != 4:
            raise FacetFormatError(f"facet {k} has a repeated vertex", lineno, source)
        facets.append(item)
    if not facets:
        raise FacetFormatError("no facets", None, source)
    return Complex3(facets)


def format_facets(K: Complex3, header: str | None = None) -> str:
    lines = []
    if header:
        lines.extend("# " + h for h in header.splitlines())
    lines.extend(" ".join(map(str, f)) for f in K.sorted_facets())
    return "\n".join(lines) + "\n"


def format_json_facets(K: Complex3) -> str:
    return json.dumps({"facets": [list(f) for f in K.sorted_facets()]})


def read_complex(path) -> Complex3:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise FacetFormatError(f"cannot read: {exc}", None, str(p)) from None
    if p.suffix == ".json" or text.lstrip().startswith("{"):
        return parse_json_facets(text, str(p))
    return parse_facets(text, str(p))


def write_complex(K: Complex3, path, header: str | None = None) -> None:
    p = Path(path)
    if p.suffix == ".json":
        p.write_text(format_json_facets(K) + "\n", encoding="utf-8")
    else:
        p.write_text(format_facets(K, header), encoding="utf-8")
