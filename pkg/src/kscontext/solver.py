"""The contextual-valuation figure of merit q_s(G) and its supporting quantities.

A labeling assigns each vertex ZERO, C or ONE. It is valid when every context holds
a C or ONE vertex and no two adjacent vertices are both ONE. ``q_s`` is the least
number of C labels over valid labelings; the transversal is ``T = C-set | ONE-set``
and the independent part is ``A = ONE-set``, so ``q_s = |T| - |A|``.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence

import numpy as np

from .graph import OrthoGraph, bits, max_clique, popcount

__all__ = [
    "Label",
    "SolveResult",
    "LabelingError",
    "validate_labeling",
    "max_independent_set",
    "min_context_transversal",
    "min_vertex_cover",
    "solve_qs_exact",
    "solve_qs_heuristic",
    "brute_force_qs",
    "ks_noncontextually_colorable",
    "triangle_free_bound",
    "TriangleFreeBound",
]


class Label(Enum):
    ZERO = "0"
    C = "C"
    ONE = "1"


class LabelingError(ValueError):
    pass


@dataclass
class SolveResult:
    qs: int
    n: int
    labeling: list[Label]
    optimal: bool
    stats: dict = field(default_factory=dict)

    @property
    def q(self) -> Fraction:
        return Fraction(self.qs, self.n) if self.n else Fraction(0)

    @property
    def transversal(self) -> list[int]:
        return [v for v, lab in enumerate(self.labeling) if lab is not Label.ZERO]

    @property
    def independent_part(self) -> list[int]:
        return [v for v, lab in enumerate(self.labeling) if lab is Label.ONE]

    def to_dict(self) -> dict:
        q = self.q
        return {
            "qs": self.qs,
            "q": f"{q.numerator}/{q.denominator}",
            "n": self.n,
            "labeling": [lab.value for lab in self.labeling],
            "transversal": self.transversal,
            "independent_part": self.independent_part,
            "optimal": self.optimal,
            "stats": dict(self.stats),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SolveResult":
        res = cls(
            qs=int(data["qs"]),
            n=int(data["n"]),
            labeling=[Label(x) for x in data["labeling"]],
            optimal=bool(data["optimal"]),
            stats=dict(data.get("stats", {})),
        )
        if res.q != Fraction(data["q"]):
            raise ValueError("q does not equal qs/n")
        if res.transversal != list(data["transversal"]) or res.independent_part != list(
            data["independent_part"]
        ):
            raise ValueError("certificate sets disagree with the labeling")
        return res


def _masks(contexts: Sequence[Sequence[int]]) -> list[int]:
    out = []
    for c in contexts:
        m = 0
        for v in c:
            m |= 1 << v
        out.append(m)
    return out


def _contexts(g: OrthoGraph, contexts) -> list[tuple[int, ...]]:
    return list(g.contexts if contexts is None else contexts)


# --------------------------------------------------------------- validation


def validate_labeling(
    g: OrthoGraph, contexts: Sequence[Sequence[int]] | None, labeling: Sequence[Label]
) -> tuple[bool, str | None]:
    """Check both validity rules; returns ``(ok, first violation or None)``."""
    if len(labeling) != g.n:
        raise LabelingError(f"labeling has {len(labeling)} entries for {g.n} vertices")
    for ctx in _contexts(g, contexts):
        if all(labeling[v] is Label.ZERO for v in ctx):
            return False, f"context {list(ctx)} has no C or ONE vertex"
    for i, j in g.edges():
        if labeling[i] is Label.ONE and labeling[j] is Label.ONE:
            return False, f"adjacent vertices {i} and {j} are both ONE"
    return True, None


# ------------------------------------------------------- independent sets


def max_independent_set(g: OrthoGraph) -> list[int]:
    """A maximum independent set, found as a maximum clique of the complement."""
    if g.n == 0:
        return []
    return max_clique(g.complement())


def min_vertex_cover(g: OrthoGraph) -> list[int]:
    """Minimum vertex cover by direct branching: a vertex is in the cover, or all its
    neighbours are. Deliberately independent of the clique-based independent-set code."""
    best = [list(range(g.n))]

    def search(live: int, cover: list[int]) -> None:
        # live: vertices still incident to uncovered edges
        if len(cover) >= len(best[0]):
            return
        v, dv = -1, 0
        for u in bits(live):
            d = popcount(g.adj[u] & live)
            if d > dv:
                v, dv = u, d
        if dv == 0:
            best[0] = list(cover)
            return
        # matching lower bound
        rem, m = live, 0
        for u in bits(live):
            if rem >> u & 1:
                nb = g.adj[u] & rem
                if nb:
                    w = nb & -nb
                    rem &= ~(1 << u) & ~w
                    m += 1
        if len(cover) + m >= len(best[0]):
            return
        cover.append(v)
        search(live & ~(1 << v), cover)
        cover.pop()
        nb = g.adj[v] & live
        if len(cover) + popcount(nb) < len(best[0]):
            added = list(bits(nb))
            cover.extend(added)
            rest = live & ~nb & ~(1 << v)
            search(rest, cover)
            del cover[len(cover) - len(added) :]

    search((1 << g.n) - 1, [])
    return sorted(best[0])


# ------------------------------------------------------------ hitting sets


def _packing_bound(unhit: list[int], allowed: int) -> int:
    used = 0
    count = 0
    for m in sorted(unhit, key=lambda m: popcount(m & allowed)):
        a = m & allowed
        if not a & used:
            used |= a
            count += 1
    return count


def _greedy_hitting_set(ctx_masks: list[int], allowed: int) -> list[int] | None:
    unhit = list(ctx_masks)
    chosen: list[int] = []
    while unhit:
        counts: dict[int, int] = {}
        for m in unhit:
            for v in bits(m & allowed):
                counts[v] = counts.get(v, 0) + 1
        if not counts:
            return None
        v = max(counts, key=lambda u: (counts[u], -u))
        chosen.append(v)
        unhit = [m for m in unhit if not m >> v & 1]
    # drop redundant picks
    for v in sorted(chosen, reverse=True):
        rest = 0
        for u in chosen:
            if u != v:
                rest |= 1 << u
        if all(m & rest for m in ctx_masks):
            chosen.remove(v)
    return sorted(chosen)


class _Timeout(Exception):
    pass


def min_context_transversal(
    g: OrthoGraph,
    contexts: Sequence[Sequence[int]] | None = None,
    timeout: float | None = None,
    stats: dict | None = None,
) -> list[int]:
    """Minimum vertex set meeting every context, by branch and bound.

    Branching takes the unhit context with fewest admissible vertices and tries each
    of them as its first chosen hitter. The bound is a greedy packing of pairwise
    disjoint unhit contexts. On timeout the best set found is returned and
    ``stats["optimal"]`` is False.
    """
    ctxs = _masks(_contexts(g, contexts))
    if not ctxs:
        raise ValueError("contexts must be nonempty")
    full = (1 << g.n) - 1
    best = _greedy_hitting_set(ctxs, full)
    assert best is not None
    best_ref = [best]
    nodes = [0]
    deadline = None if timeout is None else time.monotonic() + timeout

    def search(chosen: list[int], hit: int, allowed: int) -> None:
        nodes[0] += 1
        if deadline is not None and nodes[0] & 1023 == 0 and time.monotonic() > deadline:
            raise _Timeout
        unhit = [m for k, m in enumerate(ctxs) if not m & hit]
        if not unhit:
            if len(chosen) < len(best_ref[0]):
                best_ref[0] = sorted(chosen)
            return
        slack = len(best_ref[0]) - len(chosen)
        if _packing_bound(unhit, allowed) >= slack:
            return
        # degree bound: every new vertex hits at most maxdeg unhit contexts
        maxdeg = 0
        for v in bits(allowed):
            d = sum(1 for m in unhit if m >> v & 1)
            if d > maxdeg:
                maxdeg = d
        if maxdeg == 0 or -(-len(unhit) // maxdeg) >= slack:
            return
        target = min(unhit, key=lambda m: (popcount(m & allowed), m))
        cand = target & allowed
        if not cand:
            return
        order = sorted(
            bits(cand), key=lambda v: (-sum(1 for m in unhit if m >> v & 1), v)
        )
        for v in order:
            chosen.append(v)
            search(chosen, hit | (1 << v), allowed & ~(1 << v))
            chosen.pop()
            allowed &= ~(1 << v)

    optimal = True
    try:
        search([], 0, full)
    except _Timeout:
        optimal = False
    if stats is not None:
        stats.update(nodes=nodes[0], optimal=optimal)
    return best_ref[0]


# ------------------------------------------------------------------- q_s


def _labeling_from_sets(n: int, ones: int, cs: int) -> list[Label]:
    return [
        Label.ONE if ones >> v & 1 else Label.C if cs >> v & 1 else Label.ZERO for v in range(n)
    ]


def solve_qs_exact(
    g: OrthoGraph,
    contexts: Sequence[Sequence[int]] | None = None,
    timeout: float = 600.0,
    initial: SolveResult | None = None,
) -> SolveResult:
    """Minimum number of C labels over valid labelings, by branch and bound.

    The root lower bound is ``tau - alpha`` (a transversal has at least tau vertices,
    an independent part at most alpha). Inside the tree, a greedy packing of
    disjoint unhit contexts that contain no vertex still allowed to be ONE bounds the
    number of further C labels.
    """
    t0 = time.monotonic()
    deadline = t0 + timeout
    ctx_list = _contexts(g, contexts)
    if not ctx_list:
        raise ValueError("contexts must be nonempty")
    ctxs = _masks(ctx_list)
    n = g.n
    full = (1 << n) - 1
    adj = g.adj
    stats: dict = {}

    alpha = len(max_independent_set(g))
    tstats: dict = {}
    tau_set = min_context_transversal(g, ctx_list, timeout=max(1.0, timeout / 2), stats=tstats)
    tau_exact = tstats["optimal"]
    tau = len(tau_set)
    if not tau_exact:
        tau = max(_packing_bound(ctxs, full), 1)
    root_lb = max(0, tau - alpha)

    # incumbent: transversal with a greedy independent part
    ones = 0
    blocked = 0
    for v in tau_set:
        if not blocked >> v & 1:
            ones |= 1 << v
            blocked |= adj[v]
    cs = 0
    for v in tau_set:
        if not ones >> v & 1:
            cs |= 1 << v
    best = [popcount(cs), ones, cs]
    if initial is not None and initial.qs < best[0]:
        lab = initial.labeling
        best = [
            initial.qs,
            sum(1 << v for v in range(n) if lab[v] is Label.ONE),
            sum(1 << v for v in range(n) if lab[v] is Label.C),
        ]
    nodes = [0]

    def search(ones: int, cs: int, zeros: int, blocked: int, cost: int) -> None:
        nodes[0] += 1
        if nodes[0] & 1023 == 0 and time.monotonic() > deadline:
            raise _Timeout
        if best[0] <= root_lb:
            return
        hit = ones | cs
        unhit = [m for m in ctxs if not m & hit]
        if not unhit:
            if cost < best[0]:
                best[:] = [cost, ones, cs]
            return
        free = full & ~hit & ~zeros
        can_one = free & ~blocked
        forced = [m for m in unhit if not m & can_one]
        lb = _packing_bound(forced, free) if forced else 0
        if cost + lb >= best[0]:
            return
        target = min(unhit, key=lambda m: (popcount(m & free), popcount(m & can_one), m))
        cand = target & free
        if not cand:
            return
        order = sorted(bits(cand), key=lambda v: (not can_one >> v & 1, v))
        for v in order:
            bit = 1 << v
            if can_one & bit:
                search(ones | bit, cs, zeros, blocked | adj[v], cost)
            if cost + 1 < best[0]:
                search(ones, cs | bit, zeros, blocked, cost + 1)
            zeros |= bit

    optimal = True
    try:
        if best[0] > root_lb:
            search(0, 0, 0, 0, 0)
    except _Timeout:
        optimal = False
    lower = root_lb if not optimal else best[0]
    stats.update(
        nodes=nodes[0],
        millis=int((time.monotonic() - t0) * 1000),
        lower_bound=lower,
        alpha=alpha,
        tau=tau,
        tau_exact=tau_exact,
    )
    return SolveResult(best[0], n, _labeling_from_sets(n, best[1], best[2]), optimal, stats)


def ks_noncontextually_colorable(
    g: OrthoGraph, contexts: Sequence[Sequence[int]] | None = None
) -> bool:
    """True iff some independent set meets every context (so q_s = 0)."""
    ctxs = _masks(_contexts(g, contexts))
    full = (1 << g.n) - 1

    def search(ones: int, zeros: int, blocked: int) -> bool:
        unhit = [m for m in ctxs if not m & ones]
        if not unhit:
            return True
        avail = full & ~zeros & ~blocked
        target = min(unhit, key=lambda m: (popcount(m & avail), m))
        for v in bits(target & avail):
            if search(ones | (1 << v), zeros, blocked | g.adj[v]):
                return True
            zeros |= 1 << v
        return False

    return search(0, 0, 0)


# ----------------------------------------------------------- brute force


def brute_force_qs(g: OrthoGraph, contexts: Sequence[Sequence[int]] | None = None) -> SolveResult:
    """Enumerate all 3^n labelings (n <= 15) and keep the valid one with fewest Cs."""
    n = g.n
    if n > 15:
        raise ValueError(f"brute force limited to n <= 15, got {n}")
    t0 = time.monotonic()
    ctx_list = _contexts(g, contexts)
    edges = g.edges()
    best_cost, best_code = n + 1, -1
    chunk = 3 ** min(n, 10)
    powers = 3 ** np.arange(n, dtype=np.int64)
    total = 3**n
    for start in range(0, total, chunk):
        codes = np.arange(start, min(start + chunk, total), dtype=np.int64)
        digits = (codes[:, None] // powers[None, :]) % 3  # 0 = ZERO, 1 = C, 2 = ONE
        ok = np.ones(len(codes), dtype=bool)
        for ctx in ctx_list:
            ok &= (digits[:, list(ctx)] != 0).any(axis=1)
        for i, j in edges:
            ok &= ~((digits[:, i] == 2) & (digits[:, j] == 2))
        if not ok.any():
            continue
        cost = (digits == 1).sum(axis=1)
        cost = np.where(ok, cost, n + 1)
        k = int(np.argmin(cost))
        if cost[k] < best_cost:
            best_cost, best_code = int(cost[k]), int(codes[k])
    if best_code < 0:
        raise RuntimeError("no valid labeling exists")
    lab = [(Label.ZERO, Label.C, Label.ONE)[(best_code // 3**v) % 3] for v in range(n)]
    return SolveResult(
        best_cost, n, lab, True, {"nodes": total, "millis": int((time.monotonic() - t0) * 1000)}
    )


# ------------------------------------------------------------- heuristic

_UNHIT_PENALTY = 2.0
_CONFLICT_PENALTY = 2.0


def _repair(g: OrthoGraph, ctx_of, ctxs, state: list[int]) -> None:
    """Make ``state`` valid in place: demote conflicting ONEs, then hit every
    unhit context greedily (ONE where allowed, otherwise C)."""
    n = g.n
    for v in range(n):
        if state[v] == 2:
            for u in bits(g.adj[v]):
                if u > v and state[u] == 2:
                    state[u] = 1
    for k, ctx in enumerate(ctxs):
        if any(state[v] for v in ctx):
            continue
        for v in ctx:
            if not any(state[u] == 2 for u in bits(g.adj[v])):
                state[v] = 2
                break
        else:
            v = max(ctx, key=lambda u: (sum(1 for j in ctx_of[u] if not any(state[w] for w in ctxs[j])), -u))
            state[v] = 1


def _prune(g: OrthoGraph, ctx_of, ctxs, state: list[int]) -> None:
    """Drop C labels that no context needs, and upgrade C to ONE where allowed."""
    hitcount = [sum(1 for v in ctx if state[v]) for ctx in ctxs]
    for v in range(g.n):
        if state[v] == 1:
            if all(hitcount[k] >= 2 for k in ctx_of[v]):
                state[v] = 0
                for k in ctx_of[v]:
                    hitcount[k] -= 1
            elif not any(state[u] == 2 for u in bits(g.adj[v])):
                state[v] = 2


def solve_qs_heuristic(
    g: OrthoGraph,
    contexts: Sequence[Sequence[int]] | None = None,
    budget: int = 1_000_000,
    seed: int = 0,
    t_start: float = 1.0,
    t_end: float = 0.2,
    restarts: int = 1,
    target: int | None = None,
) -> SolveResult:
    """Simulated annealing over labelings.

    Moves relabel one vertex. The energy is ``#C + 2 #unhit contexts + 2 #ONE-ONE
    edges``; every state visited with zero penalty is a valid labeling and competes
    for the incumbent. The final incumbent is repaired and pruned greedily, so the
    result is always valid. Deterministic for a given seed.
    """
    t0 = time.monotonic()
    ctxs = [tuple(c) for c in _contexts(g, contexts)]
    n = g.n
    rng = random.Random(seed)
    ctx_of: list[list[int]] = [[] for _ in range(n)]
    for k, ctx in enumerate(ctxs):
        for v in ctx:
            ctx_of[v].append(k)
    nbrs = [list(bits(g.adj[v])) for v in range(n)]

    # greedy start: maximum independent set as ONEs, then repair
    best_state = [0] * n
    for v in max_independent_set(g):
        best_state[v] = 2
    _repair(g, ctx_of, ctxs, best_state)
    _prune(g, ctx_of, ctxs, best_state)
    best_cost = best_state.count(1)

    per_run = max(1, budget // max(1, restarts))
    moves = 0
    for run in range(restarts):
        if target is not None and best_cost <= target:
            break
        state = list(best_state) if run == 0 else [0] * n
        if run:
            _repair(g, ctx_of, ctxs, state)
        hit = [sum(1 for v in ctx if state[v]) for ctx in ctxs]
        onenb = [sum(1 for u in nbrs[v] if state[u] == 2) for v in range(n)]
        n_c = state.count(1)
        n_unhit = sum(1 for h in hit if h == 0)
        n_conf = sum(1 for v in range(n) if state[v] == 2 for u in nbrs[v] if u > v and state[u] == 2)
        energy = n_c + _UNHIT_PENALTY * n_unhit + _CONFLICT_PENALTY * n_conf
        ratio = (t_end / t_start) ** (1.0 / per_run)
        temp = t_start
        for _ in range(per_run):
            moves += 1
            temp *= ratio
            v = rng.randrange(n)
            old = state[v]
            new = (old + rng.randrange(1, 3)) % 3
            d_c = (new == 1) - (old == 1)
            d_unhit = 0
            if old == 0:
                d_unhit = -sum(1 for k in ctx_of[v] if hit[k] == 0)
            elif new == 0:
                d_unhit = sum(1 for k in ctx_of[v] if hit[k] == 1)
            d_conf = onenb[v] * ((new == 2) - (old == 2))
            delta = d_c + _UNHIT_PENALTY * d_unhit + _CONFLICT_PENALTY * d_conf
            if delta > 0 and rng.random() >= math.exp(-delta / temp):
                continue
            state[v] = new
            if (old == 0) != (new == 0):
                step = 1 if old == 0 else -1
                for k in ctx_of[v]:
                    hit[k] += step
            if (old == 2) != (new == 2):
                step = 1 if new == 2 else -1
                for u in nbrs[v]:
                    onenb[u] += step
            n_c += d_c
            n_unhit += d_unhit
            n_conf += d_conf
            energy += delta
            if n_unhit == 0 and n_conf == 0 and n_c < best_cost:
                best_cost = n_c
                best_state = list(state)
                if target is not None and best_cost <= target:
                    break
    _repair(g, ctx_of, ctxs, best_state)
    _prune(g, ctx_of, ctxs, best_state)
    lab = [(Label.ZERO, Label.C, Label.ONE)[s] for s in best_state]
    return SolveResult(
        best_state.count(1),
        n,
        lab,
        False,
        {"nodes": moves, "millis": int((time.monotonic() - t0) * 1000), "seed": seed},
    )


# ------------------------------------------------------- triangle-free case


@dataclass
class TriangleFreeBound:
    raw: int
    bound: int
    alpha: int
    tau: int


def triangle_free_bound(g: OrthoGraph) -> TriangleFreeBound:
    """``n - 2 alpha`` for a triangle-free graph, with the Gallai identity checked.

    The minimum vertex cover is computed by its own search and must equal
    ``n - alpha``; a mismatch raises ``AssertionError``.
    """
    if not g.is_triangle_free():
        raise ValueError("graph contains a triangle")
    alpha = len(max_independent_set(g))
    tau = len(min_vertex_cover(g))
    if tau != g.n - alpha:
        raise AssertionError(f"Gallai identity failed: tau={tau}, n-alpha={g.n - alpha}")
    raw = g.n - 2 * alpha
    return TriangleFreeBound(raw=raw, bound=max(raw, 0), alpha=alpha, tau=tau)
