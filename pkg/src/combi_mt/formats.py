"""Line-oriented text formats for structures and families.

Structure block::

    structure <name>
    sig rel <Name>/<arity>        # repeated, or several rel items per line
    universe <k>
    rel <Name>: (i1,...,in) (j1,...,jn) ...   # omitted symbol = empty
    end

A family file starts with ``family <name> members <tag1> <tag2> ...`` and
holds one structure block per tag, the block name being the tag.
"""

from __future__ import annotations

import re

from .combine import FamilySpec
from .errors import CombiError, StructureFormatError
from .logic import Signature
from .model import FiniteStructure

_TUPLE_RE = re.compile(r"\(\s*(\d+(?:\s*,\s*\d+)*)?\s*\)")


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _parse_blocks(text: str) -> tuple[list[tuple[str, list[str]]], dict[str, FiniteStructure]]:
    headers = []
    out: dict[str, FiniteStructure] = {}
    current = None
    for lineno, line in _lines(text):
        words = line.split()
        head = words[0]
        if current is None:
            if head == "structure" and len(words) == 2:
                current = {"name": words[1], "sig": [], "size": None, "rels": {}, "line": lineno}
            elif head == "family":
                headers.append((lineno, words))
            else:
                raise StructureFormatError(f"line {lineno}: expected 'structure <name>'")
            continue
        if head == "end":
            out_name = current["name"]
            if out_name in out:
                raise StructureFormatError(f"line {lineno}: duplicate structure name {out_name}")
            out[out_name] = _build(current)
            current = None
        elif head == "sig":
            items = re.findall(r"rel\s+([A-Za-z_][A-Za-z0-9_]*)\s*/\s*(\d+)", line)
            if not items:
                raise StructureFormatError(f"line {lineno}: bad sig line")
            current["sig"].extend((n, int(a)) for n, a in items)
        elif head == "universe":
            if len(words) != 2 or not words[1].isdigit():
                raise StructureFormatError(f"line {lineno}: bad universe line")
            current["size"] = int(words[1])
        elif head == "rel":
            m = re.fullmatch(r"rel\s+([A-Za-z_][A-Za-z0-9_]*)\s*:(.*)", line)
            if not m:
                raise StructureFormatError(f"line {lineno}: bad rel line")
            body = m.group(2)
            tuples = [
                tuple(int(x) for x in g.split(",")) if g else ()
                for g in _TUPLE_RE.findall(body)
            ]
            if _TUPLE_RE.sub("", body).strip():
                raise StructureFormatError(f"line {lineno}: junk in tuple list")
            current["rels"].setdefault(m.group(1), set()).update(tuples)
        else:
            raise StructureFormatError(f"line {lineno}: unknown directive {head!r}")
    if current is not None:
        raise StructureFormatError(f"structure {current['name']} is missing 'end'")
    return headers, out


def _build(block: dict) -> FiniteStructure:
    if block["size"] is None:
        raise StructureFormatError(f"structure {block['name']}: missing universe line")
    try:
        sig = Signature(tuple(block["sig"]))
        return FiniteStructure(sig, block["size"], block["rels"])
    except (ValueError, CombiError) as exc:
        raise StructureFormatError(f"structure {block['name']}: {exc}") from exc


def parse_structures(text: str) -> dict[str, FiniteStructure]:
    headers, out = _parse_blocks(text)
    if headers:
        raise StructureFormatError("family header in a structure file")
    return out


def parse_family(text: str) -> tuple[str, FamilySpec]:
    headers, blocks = _parse_blocks(text)
    if len(headers) != 1:
        raise StructureFormatError("expected exactly one 'family' header")
    lineno, words = headers[0]
    if len(words) < 4 or words[2] != "members":
        raise StructureFormatError(f"line {lineno}: expected 'family <name> members <tags...>'")
    tags = words[3:]
    missing = [t for t in tags if t not in blocks]
    if missing:
        raise StructureFormatError(f"no structure block for members {missing}")
    return words[1], FamilySpec.of((t, blocks[t]) for t in tags)


def render_structure(name: str, A: FiniteStructure) -> str:
    lines = [f"structure {name}"]
    lines.extend(f"sig rel {n}/{a}" for n, a in A.sig)
    lines.append(f"universe {A.size}")
    for n, _ in A.sig:
        rel = sorted(A.interp[n])
        if rel:
            lines.append(f"rel {n}: " + " ".join("(" + ",".join(map(str, t)) + ")" for t in rel))
    lines.append("end")
    return "\n".join(lines) + "\n"


def render_structures(structures: dict[str, FiniteStructure]) -> str:
    return "\n".join(render_structure(n, A) for n, A in structures.items())


def render_family(name: str, fam: FamilySpec) -> str:
    head = f"family {name} members {' '.join(fam.tags)}\n\n"
    return head + "\n".join(render_structure(t, S) for t, S in fam.members)
