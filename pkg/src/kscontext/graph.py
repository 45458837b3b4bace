"""Orthogonality graphs, maximum-clique contexts, composition and export.

Adjacency is a list of Python ints used as bitsets: bit ``j`` of ``adj[i]`` is set
iff vertices ``i`` and ``j`` are adjacent.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .catalog import VectorSet
from .exact import inner_product

__all__ = [
    "OrthoGraph",
    "build_graph",
    "clique_number",
    "enumerate_contexts",
    "disjoint_union",
    "export_graph",
    "parse_graph_json",
    "bits",
    "popcount",
    "uncovered_vertices",
]


def bits(mask: int) -> Iterable[int]:
    """Indices of set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass
class OrthoGraph:
    n: int
    adj: list[int]
    labels: list[str] | None = None
    meta: dict = field(default_factory=dict)
    _omega: int | None = field(default=None, repr=False)
    _contexts: list[tuple[int, ...]] | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if len(self.adj) != self.n:
            raise ValueError("adjacency length does not match vertex count")
        for i, row in enumerate(self.adj):
            if row >> i & 1:
                raise ValueError(f"self-loop at vertex {i}")
            for j in bits(row):
                if j >= self.n or not self.adj[j] >> i & 1:
                    raise ValueError(f"adjacency not symmetric at ({i}, {j})")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]], **kw) -> "OrthoGraph":
        adj = [0] * n
        for i, j in edges:
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        return cls(n, adj, **kw)

    @classmethod
    def complete(cls, k: int) -> "OrthoGraph":
        full = (1 << k) - 1
        return cls(k, [full ^ (1 << i) for i in range(k)])

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.adj[i] >> j & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in bits(self.adj[i] >> (i + 1) << (i + 1))]

    def degree(self, v: int) -> int:
        return popcount(self.adj[v])

    def is_independent(self, vertices: Iterable[int]) -> bool:
        mask = 0
        for v in vertices:
            mask |= 1 << v
        return all(not (self.adj[v] & mask) for v in bits(mask))

    def is_clique(self, vertices: Sequence[int]) -> bool:
        return all(self.has_edge(a, b) for k, a in enumerate(vertices) for b in vertices[k + 1 :])

    def is_triangle_free(self) -> bool:
        return all(not (self.adj[i] & self.adj[j]) for i, j in self.edges())

    @property
    def omega(self) -> int:
        if self._omega is None:
            self._omega = clique_number(self)
        return self._omega

    @property
    def contexts(self) -> list[tuple[int, ...]]:
        if self._contexts is None:
            self._contexts = enumerate_contexts(self)
        return self._contexts

    def complement(self) -> "OrthoGraph":
        full = (1 << self.n) - 1
        return OrthoGraph(self.n, [full ^ row ^ (1 << i) for i, row in enumerate(self.adj)])


def build_graph(vs: VectorSet) -> OrthoGraph:
    """Vertices are the rays of ``vs``; edges join exactly orthogonal pairs."""
    rays = vs.rays
    n = len(rays)
    adj = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if inner_product(rays[i], rays[j]).is_zero():
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    labels = ["(" + ", ".join(str(x) for x in ray) + ")" for ray in rays]
    return OrthoGraph(n, adj, labels=labels, meta={"source": vs.name, "dimension": vs.dimension})


# ------------------------------------------------------------------ cliques


def _color_bound(g: OrthoGraph, cand: int) -> tuple[list[int], list[int]]:
    """Greedy sequential colouring of ``cand``; returns vertices and their colour numbers
    ordered by non-decreasing colour (Tomita-style)."""
    order: list[int] = []
    colors: list[int] = []
    uncolored = cand
    color = 0
    while uncolored:
        color += 1
        avail = uncolored
        while avail:
            low = avail & -avail
            v = low.bit_length() - 1
            avail &= ~g.adj[v] & ~low
            uncolored ^= low
            order.append(v)
            colors.append(color)
    return order, colors


def _degeneracy_order(g: OrthoGraph) -> list[int]:
    remaining = (1 << g.n) - 1
    deg = {v: g.degree(v) for v in range(g.n)}
    order = []
    while remaining:
        v = min(bits(remaining), key=lambda u: (deg[u], u))
        order.append(v)
        remaining ^= 1 << v
        for u in bits(g.adj[v] & remaining):
            deg[u] -= 1
    return order


def clique_number(g: OrthoGraph) -> int:
    """Maximum clique size by branch and bound with colouring bounds."""
    if g.n == 0:
        return 0
    best = [1]

    def expand(size: int, cand: int) -> None:
        order, colors = _color_bound(g, cand)
        for k in range(len(order) - 1, -1, -1):
            if size + colors[k] <= best[0]:
                return
            v = order[k]
            new = cand & g.adj[v]
            if new:
                expand(size + 1, new)
            elif size + 1 > best[0]:
                best[0] = size + 1
            cand &= ~(1 << v)

    expand(0, (1 << g.n) - 1)
    return best[0]


def max_clique(g: OrthoGraph) -> list[int]:
    """A maximum clique (ties broken towards the lexicographically earliest search path)."""
    if g.n == 0:
        return []
    best: list[list[int]] = [[0]]

    def expand(clique: list[int], cand: int) -> None:
        order, colors = _color_bound(g, cand)
        for k in range(len(order) - 1, -1, -1):
            if len(clique) + colors[k] <= len(best[0]):
                return
            v = order[k]
            clique.append(v)
            new = cand & g.adj[v]
            if new:
                expand(clique, new)
            elif len(clique) > len(best[0]):
                best[0] = list(clique)
            clique.pop()
            cand &= ~(1 << v)

    expand([], (1 << g.n) - 1)
    return sorted(best[0])


def enumerate_contexts(g: OrthoGraph, omega: int | None = None) -> list[tuple[int, ...]]:
    """All cliques of size exactly omega(G), sorted lexicographically."""
    if g.n == 0:
        return []
    w = g.omega if omega is None else omega
    found: list[tuple[int, ...]] = []
    pos = {v: k for k, v in enumerate(_degeneracy_order(g))}
    later = [0] * g.n
    for v in range(g.n):
        for u in bits(g.adj[v]):
            if pos[u] > pos[v]:
                later[v] |= 1 << u

    def extend(clique: list[int], cand: int) -> None:
        need = w - len(clique)
        if need == 0:
            found.append(tuple(sorted(clique)))
            return
        if popcount(cand) < need:
            return
        if need > 1:
            _, colors = _color_bound(g, cand)
            if colors and colors[-1] < need:
                return
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            clique.append(v)
            extend(clique, cand & g.adj[v])
            clique.pop()

    for v in range(g.n):
        extend([v], later[v])
    found.sort()
    return found


def uncovered_vertices(g: OrthoGraph, contexts: Sequence[Sequence[int]] | None = None) -> list[int]:
    """Vertices lying in no context."""
    ctxs = g.contexts if contexts is None else contexts
    covered = set()
    for c in ctxs:
        covered.update(c)
    return [v for v in range(g.n) if v not in covered]


def disjoint_union(g1: OrthoGraph, g2: OrthoGraph) -> OrthoGraph:
    """Vertex-disjoint union; vertices of ``g2`` are shifted by ``g1.n``."""
    shift = g1.n
    adj = list(g1.adj) + [row << shift for row in g2.adj]
    labels = None
    if g1.labels is not None and g2.labels is not None:
        labels = list(g1.labels) + list(g2.labels)
    meta = {"union_of": [g1.meta.get("source"), g2.meta.get("source")]}
    if g1.omega != g2.omega:
        meta["omega_mismatch"] = [g1.omega, g2.omega]
    out = OrthoGraph(g1.n + g2.n, adj, labels=labels, meta=meta)
    out._omega = max(g1.omega, g2.omega)
    if g1.omega == g2.omega:
        out._contexts = sorted(
            list(g1.contexts) + [tuple(v + shift for v in c) for c in g2.contexts]
        )
    return out


def copies(g: OrthoGraph, k: int) -> OrthoGraph:
    """``k``-fold disjoint self-union."""
    out = g
    for _ in range(k - 1):
        out = disjoint_union(out, g)
    return out


# ------------------------------------------------------------------- export


def export_graph(g: OrthoGraph, fmt: str = "json") -> str:
    if fmt == "json":
        payload = {
            "n": g.n,
            "edges": [list(e) for e in g.edges()],
            "omega": g.omega,
            "contexts": [list(c) for c in g.contexts],
        }
        return json.dumps(payload)
    if fmt == "dot":
        lines = ["graph G {"]
        for v in range(g.n):
            if g.labels is not None:
                label = g.labels[v].replace('"', '\\"')
                lines.append(f'  v{v} [label="{v}: {label}"];')
            else:
                lines.append(f"  v{v};")
        for i, j in g.edges():
            lines.append(f"  v{i} -- v{j};")
        lines.append("}")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def parse_graph_json(text: str) -> OrthoGraph:
    data = json.loads(text)
    n = data["n"]
    g = OrthoGraph.from_edges(n, data.get("edges", []))
    if "omega" in data:
        g._omega = int(data["omega"])
    if "contexts" in data:
        ctxs = [tuple(c) for c in data["contexts"]]
        for c in ctxs:
            if len(c) != g._omega or not g.is_clique(c):
                raise ValueError(f"listed context {list(c)} is not a clique of size omega")
        g._contexts = sorted(ctxs)
    return g
