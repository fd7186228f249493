import math

import numpy as np
import pytest

import conebary


def diag(*vals):
    return np.diag(np.asarray(vals, dtype=float))


def test_thompson_dist_closed_form():
    d = conebary.thompson_dist(np.eye(2), diag(math.e**2, math.exp(-1)))
    assert d == pytest.approx(2.0, abs=1e-10)


def test_geodesic_midpoint_commuting():
    mid = conebary.geodesic(np.eye(2), diag(4.0, 9.0), 0.5)
    assert np.allclose(mid, diag(2.0, 3.0), atol=1e-10)


def test_barycenter_geometric_mean():
    pts = [diag(1.0), diag(8.0), diag(27.0)]
    b = conebary.barycenter(pts)
    assert b[0, 0] == pytest.approx(6.0, abs=1e-8)


def test_karcher_matches_barycenter_on_commuting():
    pts = [diag(1.0, 8.0), diag(8.0, 1.0), diag(27.0, 27.0)]
    b = conebary.barycenter(pts)
    k = conebary.karcher_mean(pts)
    assert np.allclose(b, diag(6.0, 6.0), atol=1e-8)
    assert np.allclose(k, b, atol=1e-8)


def test_tuple_dist_permutation_invariance():
    a = [diag(1.0, 2.0), diag(3.0, 4.0)]
    b = [diag(3.0, 4.0), diag(1.0, 2.0)]
    assert conebary.tuple_dist(a, b) == pytest.approx(0.0, abs=1e-12)


def test_circumcenter_scalar_interval():
    center, radius = conebary.circumcenter([diag(1.0), diag(math.e**4)])
    assert radius == pytest.approx(2.0, abs=1e-4)
    assert center[0, 0] == pytest.approx(math.e**2, rel=1e-3)


def test_solve_amenable_involution():
    a = np.array([[1.0, 1.0], [0.0, -1.0]])
    report = conebary.solve_amenable([a], group="finite")
    aat_sqrt = conebary.geodesic(np.eye(2), a @ a.T, 0.5)
    assert report["converged"]
    assert report["residual"] <= 1e-9
    assert np.allclose(report["fixed_point"], aat_sqrt, atol=1e-9)
    defect, size = conebary.verify_unitariser([a], report["unitariser"])
    assert defect <= 1e-8
    assert size == pytest.approx(report["size_measured"], rel=1e-9)


def test_rep_size_unbounded_flag():
    est = conebary.rep_size([diag(math.e, 1.0)], radius=12)
    assert est["suspected_unbounded"]
    assert not est["plateau"]


def test_not_positive_raises():
    with pytest.raises(conebary.ConebaryError):
        conebary.thompson_dist(np.eye(2), diag(1.0, -1.0))
