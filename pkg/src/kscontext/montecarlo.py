"""Seeded Monte Carlo checks of the geometric and probabilistic facts behind the bounds.

Randomness comes from ``numpy.random.Generator`` over PCG64, seeded with a single
integer. This is the only module that uses floating-point overlaps; values with
``|x| < 1e-9`` are treated as zero and threshold comparisons carry the same slack.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np
from scipy import stats

from .bounds import annulus_proportion, BoundParams, reg_inc_beta_array
from .catalog import VectorSet
from .graph import build_graph
from .solver import Label

__all__ = [
    "McConfig",
    "make_rng",
    "sample_haar_vector",
    "sample_haar_vectors",
    "haar_unitary",
    "overlap_distribution_test",
    "cap_hit_check",
    "cap_independence_check",
    "annulus_capture_experiment",
    "cap_labeling",
    "best_cap_fraction",
    "KS_COEFF",
    "TOL",
]

TOL = 1e-9
KS_COEFF = 1.63  # 1% critical value of the Kolmogorov distribution, scaled by sqrt(N)


@dataclass(frozen=True)
class McConfig:
    d: int
    r: int = 1
    samples: int = 100_000
    seed: int = 0
    t1: float | None = None
    t2: float = 0.5

    def __post_init__(self) -> None:
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.d < 1:
            raise ValueError("d must be >= 1")
        if self.t1 is None:
            object.__setattr__(self, "t1", self.r / self.d)
        if not (0 <= self.t1 <= 1 and 0 <= self.t2 <= 1):
            raise ValueError("thresholds must lie in [0, 1]")


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """PCG64 generator for ``seed``, optionally split into a substream."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, *stream])))


def sample_haar_vectors(d: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` uniformly random unit vectors in C^d, shape ``(count, d)``."""
    if d < 1:
        raise ValueError("d must be >= 1")
    z = rng.standard_normal((count, d)) + 1j * rng.standard_normal((count, d))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def sample_haar_vector(d: int, rng: np.random.Generator) -> np.ndarray:
    return sample_haar_vectors(d, 1, rng)[0]


def haar_unitary(d: int, rng: np.random.Generator, count: int | None = None) -> np.ndarray:
    """Haar-random unitaries from the QR decomposition of complex Ginibre matrices,
    with the phases of R's diagonal moved into Q."""
    shape = (d, d) if count is None else (count, d, d)
    z = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r, axis1=-2, axis2=-1)
    phases = diag / np.abs(diag)
    return q * phases[..., None, :]


def _overlaps(states: np.ndarray, rays: np.ndarray) -> np.ndarray:
    # |<state|ray>|^2 for unit rows; shape (len(states), len(rays))
    return np.abs(states.conj() @ rays.T) ** 2


def _unit_rays(vs: VectorSet) -> np.ndarray:
    return vs.complex_rays()


def _contexts_of(vs: VectorSet, contexts: Sequence[Sequence[int]] | None) -> np.ndarray:
    if contexts is None:
        contexts = build_graph(vs).contexts
    return np.asarray(contexts, dtype=int)


# -------------------------------------------------------------- experiments


@dataclass
class KsReport:
    d: int
    r: int
    samples: int
    seed: int
    statistic: float
    critical: float
    passed: bool

    def to_dict(self) -> dict:
        return asdict(self)


def overlap_distribution_test(cfg: McConfig) -> KsReport:
    """Compare the weight of a Haar-random state on the first ``r`` coordinates with
    the Beta(r, d - r) CDF; passes when the KS statistic is below ``1.63 / sqrt(N)``."""
    if not 1 <= cfg.r < cfg.d:
        raise ValueError("need 1 <= r < d")
    rng = make_rng(cfg.seed)
    psi = sample_haar_vectors(cfg.d, cfg.samples, rng)
    weight = np.sum(np.abs(psi[:, : cfg.r]) ** 2, axis=1)
    ks = stats.kstest(weight, lambda t: reg_inc_beta_array(t, cfg.r, cfg.d - cfg.r))
    critical = KS_COEFF / math.sqrt(cfg.samples)
    return KsReport(cfg.d, cfg.r, cfg.samples, cfg.seed, float(ks.statistic), critical,
                    bool(ks.statistic < critical))


@dataclass
class CapHitReport:
    name: str
    d: int
    trials: int
    seed: int
    min_max_overlap: float
    violations: int
    capture_histogram: dict[int, int] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.violations == 0 and self.min_max_overlap >= 1 / self.d - TOL

    def to_dict(self) -> dict:
        out = asdict(self)
        out["passed"] = self.passed
        return out


def cap_hit_check(
    vs: VectorSet,
    trials: int,
    seed: int,
    contexts: Sequence[Sequence[int]] | None = None,
    batch: int = 256,
) -> CapHitReport:
    """For random centres, the best overlap within each context is at least 1/d.

    Also tallies how many members of each context fall inside the cap
    ``overlap >= 1/d`` (the capture multiplicity), summed over trials.
    """
    rays = _unit_rays(vs)
    ctx = _contexts_of(vs, contexts)
    if ctx.shape[1] != vs.dimension:
        raise ValueError("vector set has no complete basis among its contexts")
    rng = make_rng(seed)
    d = vs.dimension
    worst = math.inf
    violations = 0
    hist = np.zeros(d + 1, dtype=np.int64)
    done = 0
    while done < trials:
        m = min(batch, trials - done)
        psi = sample_haar_vectors(d, m, rng)
        ov = _overlaps(psi, rays)[:, ctx]  # (m, contexts, d)
        best = ov.max(axis=2)
        worst = min(worst, float(best.min()))
        violations += int(np.count_nonzero(best < 1 / d - TOL))
        hist += np.bincount((ov >= 1 / d - TOL).sum(axis=2).ravel(), minlength=d + 1)
        done += m
    return CapHitReport(vs.name, d, trials, seed, worst, violations,
                        {k: int(c) for k, c in enumerate(hist) if c})


@dataclass
class CapIndependenceReport:
    d: int
    trials: int
    seed: int
    violations: int
    max_overlap_sum: float

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> dict:
        out = asdict(self)
        out["passed"] = self.passed
        return out


def cap_independence_check(d: int, trials: int, seed: int) -> CapIndependenceReport:
    """No centre lies strictly within overlap 1/2 of two orthogonal states."""
    if d < 2:
        raise ValueError("d must be >= 2")
    rng = make_rng(seed)
    phi1 = sample_haar_vectors(d, trials, rng)
    raw = sample_haar_vectors(d, trials, rng)
    proj = np.sum(phi1.conj() * raw, axis=1, keepdims=True)
    phi2 = raw - proj * phi1
    phi2 /= np.linalg.norm(phi2, axis=1, keepdims=True)
    psi = sample_haar_vectors(d, trials, rng)
    a = np.abs(np.sum(psi.conj() * phi1, axis=1)) ** 2
    b = np.abs(np.sum(psi.conj() * phi2, axis=1)) ** 2
    violations = int(np.count_nonzero((a > 0.5 + TOL) & (b > 0.5 + TOL)))
    return CapIndependenceReport(d, trials, seed, violations, float(np.max(a + b)))


@dataclass
class AnnulusReport:
    name: str
    d: int
    t1: float
    t2: float
    trials: int
    seed: int
    expected: float
    mean_fraction: float
    std_error: float
    min_fraction: float
    witness_rotation: list[list[float]]

    def to_dict(self) -> dict:
        return asdict(self)


def _matrix_to_pairs(u: np.ndarray) -> list[list[float]]:
    return [[float(x) for z in row for x in (z.real, z.imag)] for row in u]


def annulus_capture_experiment(
    vs: VectorSet, t1: float, t2: float, trials: int, seed: int, batch: int = 512
) -> AnnulusReport:
    """Rotate ``vs`` by Haar-random unitaries and count rays landing in the annulus
    ``t1 <= |<0|g psi>|^2 <= t2``. The mean fraction estimates the annulus volume;
    the minimum is recorded with its rotation."""
    if t1 > t2:
        raise ValueError("t1 exceeds t2")
    rays = _unit_rays(vs)
    d, n = vs.dimension, len(vs)
    rng = make_rng(seed)
    fracs = np.empty(trials)
    best_u, best = None, math.inf
    done = 0
    while done < trials:
        m = min(batch, trials - done)
        us = haar_unitary(d, rng, count=m)
        amp0 = us[:, 0, :] @ rays.T  # first coordinate of each rotated ray
        ov = np.abs(amp0) ** 2
        f = np.count_nonzero((ov >= t1) & (ov <= t2), axis=1) / n
        fracs[done : done + m] = f
        k = int(np.argmin(f))
        if f[k] < best:
            best, best_u = float(f[k]), us[k]
        done += m
    ft1, ft2 = float(t1), float(t2)
    expected = float((1 - ft1) ** (d - 1) - (1 - ft2) ** (d - 1))
    mean = float(fracs.mean())
    se = float(fracs.std(ddof=1) / math.sqrt(trials)) if trials > 1 else math.inf
    assert best <= mean + 1e-12
    return AnnulusReport(vs.name, d, ft1, ft2, trials, seed, expected, mean, se, best,
                         _matrix_to_pairs(best_u))


def cap_labeling(vs: VectorSet, center: np.ndarray, t1: float | None = None, t2: float = 0.5) -> list[Label]:
    """Label rays by their overlap with ``center``: ONE above ``t2``, C inside
    ``[t1, t2]``, ZERO below ``t1`` (defaults ``t1 = 1/d``)."""
    if t1 is None:
        t1 = 1.0 / vs.dimension
    c = np.asarray(center, dtype=complex)
    c = c / np.linalg.norm(c)
    ov = _overlaps(c[None, :], _unit_rays(vs))[0]
    out = []
    for x in ov:
        if x > t2 + TOL:
            out.append(Label.ONE)
        elif x >= t1 - TOL:
            out.append(Label.C)
        else:
            out.append(Label.ZERO)
    return out


def best_cap_fraction(vs: VectorSet, trials: int, seed: int) -> tuple[float, np.ndarray]:
    """Smallest C-fraction of the default cap labeling over random centres."""
    rays = _unit_rays(vs)
    d, n = vs.dimension, len(vs)
    rng = make_rng(seed)
    psi = sample_haar_vectors(d, trials, rng)
    ov = _overlaps(psi, rays)
    counts = np.count_nonzero((ov >= 1 / d - TOL) & (ov <= 0.5 + TOL), axis=1)
    k = int(np.argmin(counts))
    return counts[k] / n, psi[k]


def expected_annulus(d: int, t1, t2) -> float:
    return float(annulus_proportion(BoundParams(d, 1, t1, t2)))
