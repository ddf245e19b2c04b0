"""Enumeration and labelling of the irreducible components.

One-vertex pieces are labelled directly: a single point at a loop-free
vertex, partitions (kernel jumps of the nilpotent loop) for one loop, and
compositions (canonical flag type) for two or more loops.  Everything else is
labelled recursively by peeling: pick a vertex where the peeling codimension
is positive, split off the concentrated top block, and label the two halves.
The same component shows up once per peelable vertex; candidates are merged
by a sampled fingerprint that records the whole per-vertex peel tree.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import flags
from .quiver import DimVector, Quiver, arrow_form
from .sampler import SamplerConfig, sample_component


# ---------------------------------------------------------------------------
# tuple combinatorics


def partitions(n: int):
    """Partitions of n as weakly decreasing tuples, lex-descending."""
    if n == 0:
        return [()]
    out = []

    def rec(remaining, maxpart, acc):
        if remaining == 0:
            out.append(tuple(acc))
            return
        for p in range(min(maxpart, remaining), 0, -1):
            acc.append(p)
            rec(remaining - p, p, acc)
            acc.pop()

    rec(n, n, [])
    return out


def compositions(n: int):
    """Compositions of n (ordered tuples of positive parts), first part descending."""
    if n == 0:
        return [()]
    out = []

    def rec(remaining, acc):
        if remaining == 0:
            out.append(tuple(acc))
            return
        for p in range(remaining, 0, -1):
            acc.append(p)
            rec(remaining - p, acc)
            acc.pop()

    rec(n, [])
    return out


def partition_count(n: int) -> int:
    """Independent partition counter (Euler's pentagonal recurrence)."""
    p = [1] + [0] * n
    for m in range(1, n + 1):
        total = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            g2 = k * (3 * k + 1) // 2
            if g1 > m and g2 > m:
                break
            sign = 1 if k % 2 == 1 else -1
            if g1 <= m:
                total += sign * p[m - g1]
            if g2 <= m:
                total += sign * p[m - g2]
            k += 1
        p[m] = total
    return p[n]


def prefix_sums(parts, length) -> tuple:
    acc, out = 0, []
    for i in range(length):
        if i < len(parts):
            acc += parts[i]
        out.append(acc)
    return tuple(out)


def dominated_by(w, wp) -> bool:
    """Partial-sum domination: every prefix sum of w is at most that of wp."""
    n = max(len(w), len(wp))
    return all(a <= b for a, b in zip(prefix_sums(w, n), prefix_sums(wp, n)))


# ---------------------------------------------------------------------------
# labels


@dataclass(frozen=True)
class EmptyLabel:
    quiver: Quiver

    @property
    def alpha(self) -> DimVector:
        return DimVector.zero(self.quiver)

    def key(self) -> str:
        return "0"

    def to_json(self):
        return {"type": "empty"}


@dataclass(frozen=True)
class OneVertexLabel:
    quiver: Quiver
    vertex: str
    parts: tuple
    kind: str  # "point" | "partition" | "composition"

    @property
    def alpha(self) -> DimVector:
        return DimVector.unit(self.quiver, self.vertex, sum(self.parts))

    def key(self) -> str:
        return f"{self.kind}[{','.join(map(str, self.parts))}]@{self.vertex}"

    def to_json(self):
        return {"type": self.kind, "vertex": self.vertex, "parts": list(self.parts)}


@dataclass(frozen=True)
class PeelLabel:
    quiver: Quiver
    vertex: str
    size: int
    inner: OneVertexLabel
    rest: object

    @property
    def alpha(self) -> DimVector:
        return self.rest.alpha + DimVector.unit(self.quiver, self.vertex, self.size)

    def key(self) -> str:
        return f"peel@{self.vertex}:l={self.size};inner={self.inner.key()};rest=({self.rest.key()})"

    def to_json(self):
        return {
            "type": "peel",
            "vertex": self.vertex,
            "size": self.size,
            "inner": self.inner.to_json(),
            "rest": self.rest.to_json(),
        }


def one_vertex_labels(quiver: Quiver, vertex: str, n: int):
    """Component labels for dimension n concentrated at one vertex."""
    if n == 0:
        return [EmptyLabel(quiver)]
    g = len(quiver.loops_at(vertex))
    if g == 0:
        return [OneVertexLabel(quiver, vertex, (n,), "point")]
    if g == 1:
        return [OneVertexLabel(quiver, vertex, w, "partition") for w in partitions(n)]
    return [OneVertexLabel(quiver, vertex, w, "composition") for w in compositions(n)]


def one_vertex_point_label(x) -> OneVertexLabel:
    """Label of the component a concentrated point belongs to."""
    v, n = x.alpha.concentrated()
    loops = x.quiver.loops_at(v)
    if not loops:
        return OneVertexLabel(x.quiver, v, (n,), "point")
    if len(loops) == 1:
        jumps = flags.nilpotent_kernel_jumps(x.field, list(map(list, x.mat(loops[0]))))
        return OneVertexLabel(x.quiver, v, jumps, "partition")
    res = flags.canonical_chain(x)
    if not res.seminilpotent:
        raise ValueError("point is not seminilpotent")
    return OneVertexLabel(x.quiver, v, flags.concentrated_steps(res.steps), "composition")


def component_dimension(label) -> int:
    """Dimension of the component: the arrow form of alpha with itself.

    The recursive peel bookkeeping is recomputed and asserted on the way,
    which is an exact bilinearity identity.
    """
    a = label.alpha
    dim = arrow_form(a, a)
    if isinstance(label, PeelLabel):
        le = DimVector.unit(label.quiver, label.vertex, label.size)
        beta = label.rest.alpha
        recursive = (
            component_dimension(label.rest)
            + component_dimension(label.inner)
            + arrow_form(beta, le)
            + arrow_form(le, beta)
        )
        if recursive != dim:
            raise AssertionError(
                f"dimension bookkeeping broke for {label.key()}: {recursive} != {dim}"
            )
    return dim


# ---------------------------------------------------------------------------
# fingerprints and signatures


def point_signature(x) -> dict:
    return {v: flags.ideal_codim(x, v) for v in x.quiver.vertices}


def point_fingerprint(x) -> tuple:
    """Recursive peel tree of one point; a component invariant at generic points."""
    if x.alpha.is_zero():
        return ("empty",)
    con = x.alpha.concentrated()
    if con is not None:
        lab = one_vertex_point_label(x)
        return ("vertex", lab.vertex, lab.kind, lab.parts)
    sig = point_signature(x)
    branches = []
    for v in x.quiver.vertices:
        if sig[v] == 0:
            continue
        rest_pt, top_pt = flags.peel_point(x, v)
        branches.append(
            (v, sig[v], one_vertex_point_label(top_pt).key(), point_fingerprint(rest_pt))
        )
    return ("peel", x.alpha.counts, tuple(sorted(sig.items())), tuple(branches))


def _exact_signature(label) -> dict:
    """Signatures that need no sampling: empty and concentrated labels."""
    sig = {v: 0 for v in label.quiver.vertices}
    if isinstance(label, OneVertexLabel):
        sig[label.vertex] = sum(label.parts)
    return sig


def label_samples(label, cfg: SamplerConfig, salt="", expect_signature=None):
    return [
        sample_component(label, cfg, salt=f"{salt}|s{k}", expect_signature=expect_signature)
        for k in range(cfg.n_seeds)
    ]


def _label_consensus(label, cfg: SamplerConfig):
    """Fingerprint and signature of a label by sampled consensus.

    Peeling codimensions are upper semicontinuous along degenerations, so the
    generic signature is the pointwise minimum over seeds and the generic
    fingerprint is the one carried by samples attaining that minimum.
    Disagreement in the first round triggers one resampling round with a
    doubled coefficient bound; an unresolved fingerprint is reported.
    """
    if isinstance(label, EmptyLabel):
        return ("empty",), _exact_signature(label), "strong", []
    if isinstance(label, OneVertexLabel):
        fp = ("vertex", label.vertex, label.kind, label.parts)
        return fp, _exact_signature(label), "strong", []
    pairs = []
    for x in label_samples(label, cfg, salt="fp"):
        pairs.append((point_signature(x), point_fingerprint(x)))
    if all(fp == pairs[0][1] for _, fp in pairs):
        return pairs[0][1], pairs[0][0], "strong", []
    wide = SamplerConfig(cfg.seed, cfg.bound * 2, cfg.retries, cfg.n_seeds)
    for x in label_samples(label, wide, salt="fp2"):
        pairs.append((point_signature(x), point_fingerprint(x)))
    minsig = {v: min(s[v] for s, _ in pairs) for v in label.quiver.vertices}
    winners = {fp for s, fp in pairs if s == minsig}
    if len(winners) == 1:
        return winners.pop(), minsig, "weak", []
    warn = f"unresolved fingerprint for {label.key()}: {len(winners)} variants"
    chosen = sorted(winners, key=repr)[0] if winners else pairs[0][1]
    return chosen, minsig, "weak", [warn]


def peel_signature(label, cfg: SamplerConfig):
    """Per-vertex peeling codimensions of a label, by sampled consensus."""
    _, sig, consensus, _ = _label_consensus(label, cfg)
    return sig, consensus


def label_fingerprint(label, cfg: SamplerConfig):
    fp, _, consensus, _ = _label_consensus(label, cfg)
    return fp, consensus


# ---------------------------------------------------------------------------
# the catalog


@dataclass
class CatalogEntry:
    label: object
    dim: int
    signature: dict
    consensus: str
    fingerprint: tuple
    merged_from: list = field(default_factory=list)

    def samples(self, cfg: SamplerConfig, salt=""):
        """Signature-certified samples of this component."""
        return label_samples(self.label, cfg, salt, expect_signature=self.signature)

    def sample(self, cfg: SamplerConfig, salt=""):
        return sample_component(self.label, cfg, salt, expect_signature=self.signature)

    def to_json(self):
        return {
            "alpha": self.label.alpha.as_dict(),
            "label": self.label.to_json(),
            "dim": self.dim,
            "eps": dict(self.signature),
            "consensus": self.consensus,
            "merged_from": list(self.merged_from),
        }


@dataclass
class Catalog:
    quiver: Quiver
    alpha: DimVector
    entries: list
    warnings: list

    def labels(self):
        return [e.label for e in self.entries]

    def to_json(self):
        return {
            "alpha": self.alpha.as_dict(),
            "components": [e.to_json() for e in self.entries],
            "warnings": list(self.warnings),
        }


class DedupInconclusive(RuntimeError):
    pass


def enumerate_components(quiver: Quiver, alpha, cfg: SamplerConfig | None = None) -> Catalog:
    """Catalog of component labels for (quiver, alpha), deduplicated.

    Concentrated dimensions are classified directly.  Otherwise all raw
    (vertex, size, inner, rest) peels with rest peelable nowhere at the
    vertex are generated; candidates naming the same component (one per
    peelable vertex) are merged by fingerprint.  Fingerprint collisions that
    the peel bijection says cannot happen are reported as warnings, never
    silently collapsed.
    """
    cfg = cfg or SamplerConfig()
    alpha = DimVector.of(quiver, alpha)
    return _enumerate(quiver, alpha, cfg, {})


def _enumerate(quiver, alpha, cfg, memo) -> Catalog:
    if alpha.counts in memo:
        return memo[alpha.counts]
    warnings = []
    if alpha.is_zero():
        entries = [_direct_entry(EmptyLabel(quiver))]
    elif alpha.concentrated() is not None:
        v, n = alpha.concentrated()
        entries = [_direct_entry(lab) for lab in one_vertex_labels(quiver, v, n)]
    else:
        table = {}
        order = []
        for v in quiver.vertices:
            for l in range(1, alpha[v] + 1):
                beta = alpha - DimVector.unit(quiver, v, l)
                sub = _enumerate(quiver, beta, cfg, memo)
                warnings.extend(w for w in sub.warnings if w not in warnings)
                for rest_entry in sub.entries:
                    if rest_entry.signature.get(v, 0) != 0:
                        continue
                    for inner in one_vertex_labels(quiver, v, l):
                        if isinstance(inner, EmptyLabel):
                            continue
                        cand = PeelLabel(quiver, v, l, inner, rest_entry.label)
                        fp, sig, cons, warns = _label_consensus(cand, cfg)
                        warnings.extend(warns)
                        if fp not in table:
                            table[fp] = CatalogEntry(
                                cand, component_dimension(cand), sig, cons, fp
                            )
                            order.append(fp)
                        else:
                            entry = table[fp]
                            entry.merged_from.append(cand.key())
                            prev = entry.label
                            if isinstance(prev, PeelLabel) and prev.vertex == cand.vertex:
                                warnings.append(
                                    f"merged (heuristic): {cand.key()} vs {prev.key()}"
                                )
        entries = [table[fp] for fp in order]
    entries.sort(key=lambda e: e.label.key())
    cat = Catalog(quiver, alpha, entries, warnings)
    memo[alpha.counts] = cat
    return cat


def _direct_entry(label) -> CatalogEntry:
    return CatalogEntry(
        label,
        component_dimension(label),
        _exact_signature(label),
        "strong",
        label_fingerprint(label, SamplerConfig())[0],
    )


# ---------------------------------------------------------------------------
# peel graph export


def _graph_edges(label):
    """Outgoing peel edge of a label: (vertex, size, inner key, rest label)."""
    if isinstance(label, PeelLabel):
        return [(label.vertex, label.size, label.inner.key(), label.rest)]
    if isinstance(label, OneVertexLabel) and label.kind != "point" and len(label.parts) >= 2:
        smaller = OneVertexLabel(label.quiver, label.vertex, label.parts[:-1], label.kind)
        inner = OneVertexLabel(label.quiver, label.vertex, (label.parts[-1],), label.kind)
        return [(label.vertex, label.parts[-1], inner.key(), smaller)]
    return []


def export_crystal_graph(catalog: Catalog) -> str:
    """DOT document of the peel structure under the catalogued components.

    Nodes carry dimension vector, component dimension, and the peeling
    signature where it is known exactly or catalogued.
    """
    signatures = {e.label.key(): e.signature for e in catalog.entries}
    nodes = {}
    edges = []
    stack = list(catalog.labels())
    seen = set()
    while stack:
        label = stack.pop()
        k = label.key()
        if k in seen:
            continue
        seen.add(k)
        sig = signatures.get(k)
        if sig is None and isinstance(label, (EmptyLabel, OneVertexLabel)):
            sig = _exact_signature(label)
        info = f"{k}\\nalpha={list(label.alpha.counts)} dim={component_dimension(label)}"
        if sig is not None:
            info += f" eps={[sig[v] for v in label.quiver.vertices]}"
        nodes[k] = info
        for v, l, inner_key, rest in _graph_edges(label):
            edges.append((k, rest.key(), f"({v},{l}) {inner_key}"))
            stack.append(rest)
    lines = ["digraph components {"]
    for k in sorted(nodes):
        lines.append(f'  "{k}" [label="{nodes[k]}"];')
    for a, b, lab in sorted(edges):
        lines.append(f'  "{a}" -> "{b}" [label="{lab}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
