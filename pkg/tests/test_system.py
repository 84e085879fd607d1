import math

import numpy as np
import pytest

from capvol import LctSystem, controllability_matrix, diagnose, grammian_finite, grammian_infinite
from capvol.errors import DimensionMismatch, UnstableSystem
from capvol.sampling import random_system, random_well_conditioned


def test_controllability_matrix(diag_system):
    np.testing.assert_array_equal(controllability_matrix(diag_system), [[1, -1], [1, -2]])
    np.testing.assert_array_equal(controllability_matrix(LctSystem([[-4.0]], [2.5])), [[2.5]])
    Pn = controllability_matrix(LctSystem(np.eye(2), [1.0, 0.0]))
    np.testing.assert_array_equal(Pn, [[1, 1], [0, 0]])


def test_system_rejects_multi_input_and_bad_shapes():
    with pytest.raises(DimensionMismatch, match="single-input"):
        LctSystem(np.eye(2), np.ones((2, 2)))
    with pytest.raises(DimensionMismatch):
        LctSystem(np.eye(2), [1.0, 2.0, 3.0])
    with pytest.raises(DimensionMismatch):
        LctSystem(np.ones((2, 3)), [1.0, 2.0])
    with pytest.raises(DimensionMismatch):
        LctSystem(np.eye(2), [1.0, np.inf])


def test_column_input_accepted():
    s = LctSystem(np.eye(2), [[1.0], [2.0]])
    assert s.b.shape == (2,)


def test_diagnose_examples(diag_system):
    d = diagnose(diag_system)
    assert d.controllable and d.rank_Pn == 2
    assert d.spectrum_class == "real-negative-distinct"
    assert len(d.spectrum) == 2

    d = diagnose(LctSystem(np.diag([-1.0, -2.0]), [0.0, 0.0]))
    assert not d.controllable and d.rank_Pn == 0

    d = diagnose(LctSystem([[0.0, 1.0], [-1.0, 0.0]], [0.0, 1.0]))
    assert d.controllable
    assert d.spectrum_class == "unstable-or-marginal"


def test_diagnose_classes(double_root_system):
    assert diagnose(double_root_system).spectrum_class == "real-negative-repeated"
    s = LctSystem([[-1.0, 0.5], [-0.5, -1.0]], [1.0, 0.0])
    assert diagnose(s).spectrum_class == "complex-stable"
    assert diagnose(LctSystem(np.diag([1.0, -2.0]), [1.0, 1.0])).spectrum_class == "unstable-or-marginal"


@pytest.mark.parametrize("seed", range(5))
def test_controllability_invariant_under_similarity(seed):
    rng = np.random.default_rng(seed)
    s = random_system(4, rng)
    W = random_well_conditioned(4, rng)
    assert diagnose(s.transformed(W)).controllable == diagnose(s).controllable
    # an uncontrollable pair stays uncontrollable
    u = LctSystem(np.diag([-1.0, -2.0, -3.0, -4.0]), [1.0, 1.0, 0.0, 1.0])
    assert not diagnose(u).controllable
    assert not diagnose(u.transformed(W)).controllable


def test_grammian_infinite_examples(diag_system):
    np.testing.assert_allclose(grammian_infinite(LctSystem([[-1.0]], [1.0])), [[0.5]])
    np.testing.assert_allclose(grammian_infinite(diag_system), [[1 / 2, 1 / 3], [1 / 3, 1 / 4]])
    with pytest.raises(UnstableSystem):
        grammian_infinite(LctSystem([[0.5]], [1.0]))


@pytest.mark.parametrize("seed", range(3))
def test_grammian_infinite_residual(seed):
    s = random_system(5, np.random.default_rng(seed))
    G = grammian_infinite(s)
    Q = np.outer(s.b, s.b)
    assert np.max(np.abs(s.A @ G + G @ s.A.T + Q)) < 1e-9 * np.max(np.abs(Q))


def test_grammian_finite_scalar():
    G = grammian_finite(LctSystem([[-1.0]], [1.0]), 1.0, steps=200)
    assert G[0, 0] == pytest.approx((1 - math.exp(-2)) / 2, rel=1e-8)


def test_grammian_finite_limits(diag_system):
    G_long = grammian_finite(diag_system, 30.0, steps=3000)
    assert np.max(np.abs(G_long - grammian_infinite(diag_system))) < 1e-6
    G_short = grammian_finite(diag_system, 1e-12, steps=2)
    assert np.max(np.abs(G_short)) < 1e-11


def test_grammian_finite_monotone(diag_system):
    dets = [np.linalg.det(grammian_finite(diag_system, T, 400)) for T in (0.5, 1.0, 2.0, 4.0)]
    assert all(a < b for a, b in zip(dets, dets[1:]))


def test_grammian_finite_validation(diag_system):
    with pytest.raises(ValueError):
        grammian_finite(diag_system, 0.0)
    with pytest.raises(ValueError):
        grammian_finite(diag_system, 1.0, steps=1)
