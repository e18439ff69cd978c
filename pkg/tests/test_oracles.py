import numpy as np
import pytest
from hypothesis import given, strategies as st

from ramptrack import (
    CostOracle,
    OptimumTrajectory,
    SectorBounds,
    low_discrepancy_samples,
    make_quadratic,
    sector_residual,
    verify_sector_membership,
)

BOUNDS = SectorBounds(0.1, 6.0)


def test_trajectory_is_affine():
    traj = OptimumTrajectory(np.array([1.0, -2.0]), np.array([0.01, 0.02]))
    np.testing.assert_allclose(traj.optimum_at(0), [1.0, -2.0])
    np.testing.assert_allclose(traj.optimum_at(100), [2.0, 0.0])
    # affine: x*(a+b) - x*(a) independent of a
    d1 = traj.optimum_at(17) - traj.optimum_at(7)
    d2 = traj.optimum_at(1017) - traj.optimum_at(1007)
    np.testing.assert_allclose(d1, d2, atol=1e-12)


def test_static_trajectory_has_zero_velocity():
    traj = OptimumTrajectory.static([3.0])
    assert traj.dimension == 1
    np.testing.assert_array_equal(traj.velocity, [0.0])
    np.testing.assert_array_equal(traj.optimum_at(10**6), [3.0])


def test_trajectory_dimension_mismatch_rejected():
    with pytest.raises(ValueError):
        OptimumTrajectory(np.array([1.0, 2.0]), np.array([0.1]))


def test_sector_bounds_validation():
    with pytest.raises(ValueError):
        SectorBounds(0.0, 1.0)
    with pytest.raises(ValueError):
        SectorBounds(-1.0, 1.0)
    with pytest.raises(ValueError):
        SectorBounds(2.0, 1.0)
    with pytest.raises(ValueError):
        SectorBounds(1.0, float("inf"))
    assert SectorBounds(1.0, 1.0).kappa == 1.0
    assert SectorBounds(0.1, 6.0).kappa == pytest.approx(60.0)


def test_quadratic_gradient_on_lower_sector_edge():
    # 1-D curvature exactly m: gradient one unit from the optimum equals m
    # and the sector residual is exactly zero.
    traj = OptimumTrajectory.static([0.0])
    oracle = make_quadratic([BOUNDS.m], traj, declared_bounds=BOUNDS)
    g = oracle.grad(np.array([1.0]), 0)
    np.testing.assert_allclose(g, [BOUNDS.m])
    assert sector_residual(oracle, np.array([1.0]), 0) == pytest.approx(0.0, abs=1e-15)


def test_sector_residual_midpoint_frozen():
    # curvature at the sector midpoint, unit error: residual -(L-m)^2/4
    lam = 0.5 * (BOUNDS.m + BOUNDS.L)
    traj = OptimumTrajectory.static([0.0])
    oracle = make_quadratic([lam], traj, declared_bounds=BOUNDS)
    r = sector_residual(oracle, np.array([1.0]), 0)
    assert r == pytest.approx(-((BOUNDS.L - BOUNDS.m) ** 2) / 4.0, rel=1e-14)
    assert r == pytest.approx(-8.7025, rel=1e-14)


@given(
    lams=st.lists(st.floats(0.1, 6.0), min_size=1, max_size=4),
    coords=st.lists(st.floats(-50.0, 50.0), min_size=4, max_size=4),
    t=st.integers(0, 10**6),
)
def test_quadratic_residual_never_positive(lams, coords, t):
    # (m - lam)(L - lam) <= 0 for lam in [m, L], so the residual cannot be
    # positive for any declared-sector quadratic at any point and time.
    n = len(lams)
    traj = OptimumTrajectory(np.array(coords[:n]) * 0.01, np.array(coords[:n]) * 1e-5)
    oracle = make_quadratic(lams, traj, declared_bounds=BOUNDS)
    x = np.array(coords[:n])
    assert sector_residual(oracle, x, t) <= 1e-9


def test_verify_membership_quadratic_passes():
    traj = OptimumTrajectory(np.array([0.0, 0.0]), np.array([0.01, -0.01]))
    oracle = make_quadratic([0.5, 4.0], traj, declared_bounds=BOUNDS)
    box = (np.array([-5.0, -5.0]), np.array([5.0, 5.0]))
    report = verify_sector_membership(oracle, box, (0, 100), samples=2000)
    assert report.passed
    assert report.worst_residual <= report.tolerance
    assert report.samples == 2000
    assert 0 <= report.worst_t <= 100


def test_verify_membership_refutes_bad_declaration():
    # curvature 8 declared as sector [0.1, 6]: the residual is positive away
    # from the optimum, so sampling must refute membership.  The declaration
    # is not enforced at construction, only checkable after the fact.
    traj = OptimumTrajectory.static([0.0, 0.0])
    oracle = make_quadratic([8.0, 8.0], traj)
    bad = CostOracle(
        dimension=oracle.dimension,
        bounds=BOUNDS,
        trajectory=oracle.trajectory,
        gradient=oracle.gradient,
        hessian=oracle.hessian,
        label="mislabeled",
    )
    box = (np.array([-2.0, -2.0]), np.array([2.0, 2.0]))
    report = verify_sector_membership(bad, box, (0, 10), samples=500)
    assert not report.passed
    assert report.worst_residual > 0


def test_make_quadratic_validation():
    traj = OptimumTrajectory.static([0.0])
    with pytest.raises(ValueError):
        make_quadratic([-1.0], traj)
    with pytest.raises(ValueError):
        make_quadratic([7.0], traj, declared_bounds=BOUNDS)
    with pytest.raises(ValueError):
        make_quadratic([0.05], traj, declared_bounds=BOUNDS)
    traj2 = OptimumTrajectory.static([0.0, 0.0])
    with pytest.raises(ValueError):
        make_quadratic([1.0, 2.0], traj2, rotation=np.array([[1.0, 1.0], [0.0, 1.0]]))
    with pytest.raises(ValueError):
        make_quadratic([1.0, 2.0], traj2, rotation=np.eye(3))


def test_make_quadratic_default_bounds_are_tightest():
    traj = OptimumTrajectory.static([0.0, 0.0, 0.0])
    oracle = make_quadratic([0.7, 2.0, 5.0], traj)
    assert oracle.bounds.m == pytest.approx(0.7)
    assert oracle.bounds.L == pytest.approx(5.0)


def test_make_quadratic_rotation_preserves_spectrum():
    rng = np.random.default_rng(3)
    q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
    traj = OptimumTrajectory.static([1.0, 2.0, 3.0])
    oracle = make_quadratic([0.5, 1.0, 4.0], traj, rotation=q)
    h = oracle.hessian(np.zeros(3), 0)
    np.testing.assert_allclose(h, h.T, atol=1e-15)
    np.testing.assert_allclose(np.linalg.eigvalsh(h), [0.5, 1.0, 4.0], atol=1e-12)
    # gradient is H (x - x*(t))
    x = np.array([2.0, -1.0, 0.5])
    np.testing.assert_allclose(
        oracle.grad(x, 7), h @ (x - traj.optimum_at(7)), atol=1e-12
    )


def test_grad_dimension_mismatch_rejected():
    traj = OptimumTrajectory.static([0.0, 0.0])
    oracle = make_quadratic([1.0, 2.0], traj)
    with pytest.raises(ValueError):
        oracle.grad(np.array([1.0]), 0)
    with pytest.raises(ValueError):
        sector_residual(oracle, np.array([1.0, 2.0, 3.0]), 0)


def test_low_discrepancy_samples_deterministic():
    box = (np.array([-1.0, 0.0]), np.array([1.0, 2.0]))
    xs1, ts1 = low_discrepancy_samples(box, (5, 9), 128)
    xs2, ts2 = low_discrepancy_samples(box, (5, 9), 128)
    np.testing.assert_array_equal(xs1, xs2)
    np.testing.assert_array_equal(ts1, ts2)
    assert xs1.shape == (128, 2)
    assert np.all(xs1 >= box[0]) and np.all(xs1 <= box[1])
    assert ts1.min() >= 5 and ts1.max() <= 9
    # integer times cover the whole window
    assert set(np.unique(ts1)) == {5, 6, 7, 8, 9}


def test_low_discrepancy_samples_validation():
    box = (np.array([0.0]), np.array([1.0]))
    with pytest.raises(ValueError):
        low_discrepancy_samples((np.array([1.0]), np.array([0.0])), (0, 1), 8)
    with pytest.raises(ValueError):
        low_discrepancy_samples(box, (3, 1), 8)
    with pytest.raises(ValueError):
        low_discrepancy_samples(box, (0, 1), 0)
