"""Quivers with loops, their doubled quivers, and integer dimension vectors.

A quiver is a finite directed graph; loops are allowed.  The doubled quiver
carries, for every declared arrow h, an opposite arrow named ``<id>_bar`` with
source and target swapped; declared arrows have sign +1 and opposites -1.
Vertex and arrow iteration order is declaration order, and every downstream
tie-break refers to that order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass


class QuiverError(ValueError):
    pass


@dataclass(frozen=True)
class DoubledArrow:
    aid: str
    src: str
    tgt: str
    sign: int          # +1 on declared arrows, -1 on opposites
    bar: str           # id of the opposite arrow
    base: str          # id of the underlying declared arrow
    is_loop: bool


class Quiver:
    def __init__(self, vertices, arrows):
        self.vertices = tuple(str(v) for v in vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise QuiverError("duplicate vertex ids")
        vset = set(self.vertices)
        norm = []
        for aid, src, tgt in arrows:
            aid, src, tgt = str(aid), str(src), str(tgt)
            if src not in vset:
                raise QuiverError(f"arrow {aid}: undeclared source {src!r}")
            if tgt not in vset:
                raise QuiverError(f"arrow {aid}: undeclared target {tgt!r}")
            norm.append((aid, src, tgt))
        self.arrows = tuple(norm)
        ids = [a for a, _, _ in norm] + [f"{a}_bar" for a, _, _ in norm]
        if len(set(ids)) != len(ids):
            raise QuiverError("duplicate arrow ids (including generated *_bar names)")
        doubled = []
        for aid, src, tgt in norm:
            doubled.append(DoubledArrow(aid, src, tgt, 1, f"{aid}_bar", aid, src == tgt))
        for aid, src, tgt in norm:
            doubled.append(DoubledArrow(f"{aid}_bar", tgt, src, -1, aid, aid, src == tgt))
        self.doubled = tuple(doubled)
        self._by_id = {d.aid: d for d in doubled}
        self._vindex = {v: i for i, v in enumerate(self.vertices)}

    def arrow(self, aid: str) -> DoubledArrow:
        return self._by_id[aid]

    def vertex_index(self, v: str) -> int:
        return self._vindex[v]

    def loops_at(self, v: str):
        """Declared loop arrows at v (the loop count g of the vertex)."""
        return tuple(a for a, s, t in self.arrows if s == v and t == v)

    @property
    def loop_vertices(self):
        return tuple(v for v in self.vertices if self.loops_at(v))

    def __eq__(self, other):
        return (
            isinstance(other, Quiver)
            and self.vertices == other.vertices
            and self.arrows == other.arrows
        )

    def __hash__(self):
        return hash((self.vertices, self.arrows))

    def __repr__(self):
        return f"Quiver(vertices={list(self.vertices)}, arrows={list(self.arrows)})"


def load_quiver(source) -> Quiver:
    """Build a quiver from a JSON document.

    Expected shape: ``{"vertices": ["0", "1"], "arrows": [{"id": "a",
    "src": "0", "tgt": "1"}]}``.  Loops are arrows with src == tgt.
    """
    if isinstance(source, (str, bytes)):
        try:
            doc = json.loads(source)
        except json.JSONDecodeError as e:
            raise QuiverError(f"malformed quiver document: {e}") from e
    else:
        doc = source
    if not isinstance(doc, dict) or "vertices" not in doc or "arrows" not in doc:
        raise QuiverError("quiver document needs 'vertices' and 'arrows'")
    arrows = []
    for a in doc["arrows"]:
        try:
            arrows.append((a["id"], a["src"], a["tgt"]))
        except (TypeError, KeyError) as e:
            raise QuiverError(f"arrow entry {a!r} needs id/src/tgt") from e
    return Quiver(doc["vertices"], arrows)


class DimVector:
    """Nonnegative integer grading of a quiver's vertex set."""

    __slots__ = ("quiver", "counts")

    def __init__(self, quiver: Quiver, counts):
        counts = tuple(int(c) for c in counts)
        if len(counts) != len(quiver.vertices):
            raise ValueError("dimension vector length mismatch")
        if any(c < 0 for c in counts):
            raise ValueError("dimension vector entries must be nonnegative")
        self.quiver = quiver
        self.counts = counts

    @classmethod
    def of(cls, quiver: Quiver, data) -> "DimVector":
        if isinstance(data, DimVector):
            return data
        if isinstance(data, dict):
            return cls(quiver, [data.get(v, 0) for v in quiver.vertices])
        if isinstance(data, int):
            if len(quiver.vertices) != 1:
                raise ValueError("bare int only valid for one-vertex quivers")
            return cls(quiver, [data])
        return cls(quiver, list(data))

    @classmethod
    def zero(cls, quiver: Quiver) -> "DimVector":
        return cls(quiver, [0] * len(quiver.vertices))

    @classmethod
    def unit(cls, quiver: Quiver, v: str, l: int = 1) -> "DimVector":
        counts = [0] * len(quiver.vertices)
        counts[quiver.vertex_index(v)] = l
        return cls(quiver, counts)

    def __getitem__(self, v: str) -> int:
        return self.counts[self.quiver.vertex_index(v)]

    def __add__(self, other: "DimVector") -> "DimVector":
        self._check(other)
        return DimVector(self.quiver, [a + b for a, b in zip(self.counts, other.counts)])

    def __sub__(self, other: "DimVector") -> "DimVector":
        self._check(other)
        diff = [a - b for a, b in zip(self.counts, other.counts)]
        if any(d < 0 for d in diff):
            raise ValueError(f"difference {self.counts} - {other.counts} is not nonnegative")
        return DimVector(self.quiver, diff)

    def __mul__(self, k: int) -> "DimVector":
        return DimVector(self.quiver, [k * a for a in self.counts])

    __rmul__ = __mul__

    def _check(self, other):
        if self.quiver != other.quiver:
            raise ValueError("dimension vectors live on different quivers")

    @property
    def total(self) -> int:
        return sum(self.counts)

    def support(self):
        return tuple(v for v, c in zip(self.quiver.vertices, self.counts) if c > 0)

    def concentrated(self):
        """(vertex, n) if supported at a single vertex, else None."""
        sup = self.support()
        if len(sup) == 1:
            return sup[0], self[sup[0]]
        return None

    def as_dict(self):
        return {v: c for v, c in zip(self.quiver.vertices, self.counts)}

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.counts)

    def __eq__(self, other):
        return (
            isinstance(other, DimVector)
            and self.quiver == other.quiver
            and self.counts == other.counts
        )

    def __hash__(self):
        return hash((self.quiver, self.counts))

    def __repr__(self):
        return f"DimVector{self.counts}"


def arrow_form(a: DimVector, b: DimVector) -> int:
    """Sum over declared arrows of a at the source times b at the target.

    Not symmetric in general; on a one-vertex quiver with g loops this is
    g * a * b.
    """
    a._check(b)
    return sum(a[s] * b[t] for _, s, t in a.quiver.arrows)


def vertex_form(a: DimVector, b: DimVector) -> int:
    """Graded dot product of two dimension vectors."""
    a._check(b)
    return sum(x * y for x, y in zip(a.counts, b.counts))
