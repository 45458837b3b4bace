import math

import numpy as np
import pytest
from scipy import stats

from kscontext.bounds import theorem1_bound
from kscontext.catalog import VectorSet, load_builtin
from kscontext.graph import build_graph
from kscontext.montecarlo import (
    McConfig,
    annulus_capture_experiment,
    best_cap_fraction,
    cap_hit_check,
    cap_independence_check,
    cap_labeling,
    haar_unitary,
    make_rng,
    overlap_distribution_test,
    sample_haar_vector,
    sample_haar_vectors,
)
from kscontext.solver import Label, solve_qs_exact, validate_labeling

BASIS3 = VectorSet("basis3", 3, ((1, 0, 0), (0, 1, 0), (0, 0, 1)))


def test_haar_vectors_normalised():
    rng = make_rng(11)
    assert abs(abs(sample_haar_vector(1, rng)[0]) - 1) < 1e-12
    for d in (1, 2, 5, 9):
        v = sample_haar_vectors(d, 50, rng)
        assert np.allclose(np.linalg.norm(v, axis=1), 1, atol=1e-12)


def test_determinism():
    a = sample_haar_vectors(4, 10, make_rng(3))
    b = sample_haar_vectors(4, 10, make_rng(3))
    assert np.array_equal(a, b)
    r1 = overlap_distribution_test(McConfig(4, 2, 1000, 7))
    r2 = overlap_distribution_test(McConfig(4, 2, 1000, 7))
    assert r1 == r2


def test_d2_first_entry_uniform():
    v = sample_haar_vectors(2, 100_000, make_rng(1))
    ks = stats.kstest(np.abs(v[:, 0]) ** 2, "uniform")
    assert ks.statistic < 1.63 / math.sqrt(100_000)


def test_haar_unitary():
    rng = make_rng(2)
    us = haar_unitary(4, rng, count=200)
    eye = np.eye(4)
    assert np.allclose(us @ us.conj().transpose(0, 2, 1), eye, atol=1e-12)
    # |U_11|^2 of a Haar unitary is Beta(1, d-1)
    us = haar_unitary(3, make_rng(4), count=20_000)
    ks = stats.kstest(np.abs(us[:, 0, 0]) ** 2, lambda t: 1 - (1 - t) ** 2)
    assert ks.statistic < 1.63 / math.sqrt(20_000)


@pytest.mark.parametrize("d, r", [(2, 1), (3, 1), (8, 2)])
def test_overlap_distribution(d, r):
    rep = overlap_distribution_test(McConfig(d, r, 100_000, 12))
    assert rep.passed, rep


def test_overlap_distribution_detects_wrong_shape():
    # weight on 2 coordinates of a d=8 state is not Beta(1, 7)
    from kscontext.montecarlo import KS_COEFF
    from kscontext.bounds import reg_inc_beta_array

    psi = sample_haar_vectors(8, 20_000, make_rng(5))
    w = np.sum(np.abs(psi[:, :2]) ** 2, axis=1)
    ks = stats.kstest(w, lambda t: reg_inc_beta_array(t, 1, 7))
    assert ks.statistic > KS_COEFF / math.sqrt(20_000)


def test_cap_hit_basis_and_extremal():
    rep = cap_hit_check(BASIS3, 2000, 1)
    assert rep.passed and rep.min_max_overlap >= 1 / 3 - 1e-9
    center = np.ones(3) / math.sqrt(3)
    lab = cap_labeling(BASIS3, center)
    assert lab == [Label.C] * 3


def test_cap_hit_cabello():
    rep = cap_hit_check(load_builtin("cabello18"), 10_000, 8)
    assert rep.min_max_overlap >= 0.25 - 1e-9
    assert rep.violations == 0
    assert sum(rep.capture_histogram.values()) == 10_000 * 9
    assert 0 not in rep.capture_histogram


def test_cap_independence():
    rep = cap_independence_check(4, 100_000, 3)
    assert rep.violations == 0 and rep.max_overlap_sum <= 1 + 1e-9


def test_cap_independence_center_on_target():
    phi1 = np.array([1, 0, 0, 0], dtype=complex)
    phi2 = np.array([0, 1, 0, 0], dtype=complex)
    ov = [abs(np.vdot(phi1, p)) ** 2 for p in (phi1, phi2)]
    assert ov == [1.0, 0.0]


def test_cap_labeling_basis():
    lab = cap_labeling(BASIS3, np.array([1, 0, 0]))
    assert lab == [Label.ONE, Label.ZERO, Label.ZERO]


@pytest.mark.parametrize("name", ["cabello18", "peres33", "peres_mermin24"])
def test_cap_labeling_valid(name):
    vs = load_builtin(name)
    g = build_graph(vs)
    rng = make_rng(21)
    for _ in range(25):
        lab = cap_labeling(vs, sample_haar_vector(vs.dimension, rng))
        ok, why = validate_labeling(g, None, lab)
        assert ok, why


def test_annulus_mean_matches_volume():
    vs = load_builtin("peres_mermin24")
    rep = annulus_capture_experiment(vs, 0.25, 0.5, 10_000, 4)
    assert rep.expected == pytest.approx(float(theorem1_bound(4)))
    assert abs(rep.mean_fraction - rep.expected) <= 3 * rep.std_error
    assert rep.min_fraction <= rep.mean_fraction
    assert rep.min_fraction <= float(theorem1_bound(4))
    u = np.array([[complex(re, im) for re, im in zip(row[::2], row[1::2])] for row in rep.witness_rotation])
    assert np.allclose(u @ u.conj().T, np.eye(4), atol=1e-10)


def test_annulus_empty_shell():
    rep = annulus_capture_experiment(load_builtin("cabello18"), 0.3, 0.3, 500, 1)
    assert rep.mean_fraction == 0 and rep.expected == 0


def test_best_cap_fraction_above_exact_q():
    for name in ("cabello18", "peres_mermin24", "peres33"):
        vs = load_builtin(name)
        frac, _ = best_cap_fraction(vs, 10_000, 6)
        assert frac >= float(solve_qs_exact(build_graph(vs)).q)


def test_config_validation():
    with pytest.raises(ValueError):
        McConfig(3, 1, 0, 1)
    assert McConfig(8, 2).t1 == 0.25
