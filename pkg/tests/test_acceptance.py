"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (the lines appear in the terminal
summary) or directly with ``python3 tests/test_acceptance.py``.
"""

import itertools
import math
import random
import sys
import time
from fractions import Fraction

from kscontext.bounds import argmax_over_d, rank_bound, theorem1_bound, verify_half_corollary
from kscontext.catalog import BUILTIN_NAMES, load_builtin
from kscontext.graph import OrthoGraph, build_graph, copies, enumerate_contexts
from kscontext.montecarlo import (
    McConfig,
    cap_hit_check,
    cap_independence_check,
    cap_labeling,
    make_rng,
    overlap_distribution_test,
    sample_haar_vector,
)
from kscontext.solver import (
    brute_force_qs,
    max_independent_set,
    min_context_transversal,
    min_vertex_cover,
    solve_qs_exact,
    solve_qs_heuristic,
    validate_labeling,
)

E8_SEED = 0
RESULTS: list[str] = []


def _report(number: int, title: str, checks: list[tuple[str, bool]], elapsed: float) -> None:
    failed = [desc for desc, ok in checks if not ok]
    status = "PASS" if not failed else "FAIL"
    detail = "; ".join(failed) if failed else f"{len(checks)} checks"
    line = f"[{status}] criterion {number}: {title} ({detail}, {elapsed:.1f}s)"
    RESULTS.append(line)
    print(line)
    assert not failed, line


def _random_graph(rng: random.Random, n_max: int) -> OrthoGraph:
    n = rng.randint(2, n_max)
    p = rng.uniform(0.2, 0.6)
    return OrthoGraph.from_edges(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < p])


def _random_triangle_free(rng: random.Random, n_max: int) -> OrthoGraph:
    n = rng.randint(4, n_max)
    adj = [0] * n
    edges = []
    target = rng.randint(n // 2, 2 * n)
    pairs = list(itertools.combinations(range(n), 2))
    rng.shuffle(pairs)
    for i, j in pairs:
        if len(edges) >= target:
            break
        if adj[i] & adj[j]:
            continue
        adj[i] |= 1 << j
        adj[j] |= 1 << i
        edges.append((i, j))
    return OrthoGraph.from_edges(n, edges)


def test_criterion_1_table():
    start = time.perf_counter()
    checks = []
    expected = {
        "cabello18": (5, 4, 1, Fraction(1, 18), 10.0),
        "peres_mermin24": (7, 5, 2, Fraction(1, 12), 60.0),
        "peres33": (9, 12, 1, Fraction(1, 33), 600.0),
        "stabilizer2q": (18, 12, 6, Fraction(1, 10), 3600.0),
    }
    for name, (tau, alpha, qs, q, limit) in expected.items():
        t0 = time.perf_counter()
        g = build_graph(load_builtin(name))
        res = solve_qs_exact(g, timeout=limit)
        took = time.perf_counter() - t0
        ok, _ = validate_labeling(g, None, res.labeling)
        checks += [
            (f"{name} tau={res.stats['tau']}", res.stats["tau"] == tau and res.stats["tau_exact"]),
            (f"{name} alpha={res.stats['alpha']}", res.stats["alpha"] == alpha),
            (f"{name} qs={res.qs} optimal={res.optimal}", res.qs == qs and res.optimal),
            (f"{name} q={res.q}", res.q == q),
            (f"{name} certificate", ok),
            (f"{name} runtime {took:.1f}s", took < limit),
        ]
        if name == "stabilizer2q":
            checks.append((f"stabilizer2q contexts={len(g.contexts)}", len(enumerate_contexts(g)) == 105))

    t0 = time.perf_counter()
    g = build_graph(load_builtin("e8"))
    n_ctx = len(enumerate_contexts(g))
    res = solve_qs_heuristic(g, seed=E8_SEED)
    took = time.perf_counter() - t0
    ok, _ = validate_labeling(g, None, res.labeling)
    checks += [
        (f"e8 contexts={n_ctx}", n_ctx == 2025),
        ("e8 certificate", ok),
        (f"e8 |T|={len(res.transversal)}", len(res.transversal) <= 22),
        (f"e8 |A|={len(res.independent_part)}", len(res.independent_part) >= 8),
        (f"e8 qs={res.qs}", res.qs <= 14),
        (f"e8 runtime {took:.1f}s", took < 600),
    ]
    _report(1, "table reproduction", checks, time.perf_counter() - start)


def test_criterion_2_bound_values():
    start = time.perf_counter()
    d_star, value, _ = argmax_over_d(50)
    checks = [
        ("theorem1_bound(9)", theorem1_bound(9) == Fraction(4251920575, 11019960576)),
        (f"argmax d={d_star}", d_star == 9 and value == theorem1_bound(9)),
        ("large-d limit 1/e", abs(float(theorem1_bound(10**4)) - math.exp(-1)) < 1e-3),
    ]
    _report(2, "bound values", checks, time.perf_counter() - start)


def test_criterion_3_rank_consistency():
    start = time.perf_counter()
    mismatch = [d for d in range(2, 65) if abs(float(rank_bound(d, 1)) - float(theorem1_bound(d))) > 1e-12]
    rep = verify_half_corollary(64)
    checks = [
        (f"rank-1 mismatch at {mismatch}", not mismatch),
        ("rank_bound(4, 2) == 0", rank_bound(4, 2) == 0),
        (f"half corollary worst {float(rep.worst_value):.6f} at {rep.worst_at}",
         rep.holds and rep.worst_value < Fraction(1, 2)),
    ]
    _report(3, "rank-bound consistency", checks, time.perf_counter() - start)


def test_criterion_4_oracle_equivalence():
    start = time.perf_counter()
    rng = random.Random(4)
    bad = []
    for k in range(200):
        g = _random_graph(rng, 12)
        exact = solve_qs_exact(g)
        brute = brute_force_qs(g)
        if not (exact.optimal and exact.qs == brute.qs):
            bad.append(f"graph {k}: exact {exact.qs} vs brute {brute.qs}")
        for res in (exact, brute):
            if not validate_labeling(g, None, res.labeling)[0]:
                bad.append(f"graph {k}: invalid certificate")
    elapsed = time.perf_counter() - start
    checks = [(b, False) for b in bad] + [(f"200 graphs in {elapsed:.1f}s", elapsed < 300)]
    _report(4, "oracle equivalence", checks, elapsed)


def test_criterion_5_distribution():
    start = time.perf_counter()
    checks = []
    for d, r in [(2, 1), (3, 1), (4, 2), (8, 2), (9, 1)]:
        for seed in (1, 2, 3):
            rep = overlap_distribution_test(McConfig(d, r, 100_000, seed))
            checks.append((f"KS d={d} r={r} seed={seed} D={rep.statistic:.5f}", rep.passed))
    _report(5, "overlap distribution", checks, time.perf_counter() - start)


def test_criterion_6_geometry():
    start = time.perf_counter()
    checks = []
    for name in BUILTIN_NAMES:
        vs = load_builtin(name)
        rep = cap_hit_check(vs, 10_000, 6)
        checks.append((f"caphit {name} min={rep.min_max_overlap:.4f}",
                       rep.min_max_overlap >= 1 / vs.dimension - 1e-9))
    for d in (2, 4, 8):
        rep = cap_independence_check(d, 100_000, 6)
        checks.append((f"capind d={d} violations={rep.violations}", rep.violations == 0))
    for name in BUILTIN_NAMES:
        vs = load_builtin(name)
        g = build_graph(vs)
        rng = make_rng(6, 1)
        invalid = 0
        for _ in range(100):
            lab = cap_labeling(vs, sample_haar_vector(vs.dimension, rng), 1 / vs.dimension, 0.5)
            invalid += not validate_labeling(g, None, lab)[0]
        checks.append((f"cap labeling {name} invalid={invalid}", invalid == 0))
    _report(6, "geometric checks", checks, time.perf_counter() - start)


def test_criterion_7_structure():
    start = time.perf_counter()
    checks = []
    for name in ("cabello18", "peres_mermin24"):
        g = build_graph(load_builtin(name))
        single = solve_qs_exact(g)
        double = solve_qs_exact(copies(g, 2))
        checks.append((f"additivity {name} {double.qs} vs 2*{single.qs}",
                       double.optimal and double.qs == 2 * single.qs))
    rng = random.Random(7)
    for k in range(50):
        g = _random_triangle_free(rng, 40)
        alpha = len(max_independent_set(g))
        cover = min_vertex_cover(g)
        tau = len(min_context_transversal(g))
        ok = g.is_triangle_free() and tau == g.n - alpha == len(cover)
        checks.append((f"Gallai graph {k}: n={g.n} alpha={alpha} cover={len(cover)} tau={tau}", ok))
    _report(7, "structural properties", checks, time.perf_counter() - start)


if __name__ == "__main__":
    failures = 0
    for fn in [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]:
        try:
            fn()
        except AssertionError:
            failures += 1
    sys.exit(1 if failures else 0)
