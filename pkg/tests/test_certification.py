import math
from types import SimpleNamespace

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ramptrack import (
    SectorBounds,
    TrackerParams,
    certify,
    char_poly,
    coefficient_segment,
    design_optimal,
    g0_eval,
    h0_eval,
    jury_membership,
    kappa_bar,
    kappa_max,
    r_rate,
    r_rate_argmax,
    rho_star,
    schur_check,
    segment_in_triangle,
    spectral_radius,
    spr_check,
)
from ramptrack.certification import BOUNDARY, INSIDE, OUTSIDE, CharPolyCoeffs, TriangleRegion

BOUNDS = SectorBounds(0.1, 6.0)
DESIGN = design_optimal(BOUNDS)

# Frozen regression input: certified Schur denominator but SPR fails.
SPR_COUNTEREXAMPLE = TrackerParams(0.571156465048188, 0.503877364426506)


def _max_root_modulus(a1, a2):
    # independent oracle: eigenvalues of the companion matrix
    comp = np.array([[0.0, -a2], [1.0, -a1]])
    return float(np.abs(np.linalg.eigvals(comp)).max())


def test_char_poly_frozen_values():
    c = char_poly(DESIGN.params(), 0.1)
    assert c.a1 == pytest.approx(-2.0 + 0.1 / 3.0, rel=1e-15)
    assert c.a2 == pytest.approx(0.9672131147540984, rel=1e-15)
    assert c.lam == 0.1


def test_char_poly_a1_vanishes_at_upper_edge():
    # alpha = 2/L makes the linear coefficient vanish at lam = L
    c = char_poly(DESIGN.params(), BOUNDS.L)
    assert abs(c.a1) < 5e-16
    assert c.a2 == pytest.approx(-DESIGN.rho_star**2, rel=1e-14)


def test_char_poly_rejects_bad_lam():
    with pytest.raises(ValueError):
        char_poly(DESIGN.params(), 0.0)
    with pytest.raises(ValueError):
        char_poly(DESIGN.params(), -1.0)


def test_spectral_radius_double_root_at_one():
    assert spectral_radius(CharPolyCoeffs(-2.0, 1.0)) == pytest.approx(1.0, abs=1e-15)


def test_spectral_radius_origin():
    assert spectral_radius(CharPolyCoeffs(0.0, 0.0)) == 0.0


@given(a1=st.floats(-4.0, 4.0), a2=st.floats(-4.0, 4.0))
def test_spectral_radius_matches_roots(a1, a2):
    closed = spectral_radius(CharPolyCoeffs(a1, a2))
    brute = _max_root_modulus(a1, a2)
    assert closed == pytest.approx(brute, rel=1e-9, abs=1e-9)


def test_r_rate_design_attained_at_both_endpoints():
    rate, lam_at = r_rate_argmax(DESIGN.params(), BOUNDS)
    assert rate == pytest.approx(DESIGN.rho_star, abs=1e-9)
    r_m = spectral_radius(char_poly(DESIGN.params(), BOUNDS.m))
    r_l = spectral_radius(char_poly(DESIGN.params(), BOUNDS.L))
    assert r_m == pytest.approx(DESIGN.rho_star, abs=1e-12)
    assert r_l == pytest.approx(DESIGN.rho_star, abs=1e-12)
    assert BOUNDS.m <= lam_at <= BOUNDS.L


def test_r_rate_coarse_grid_matches_dense_grid():
    # the ternary refinement must recover from a coarse scan whatever a much
    # denser grid finds, including maxima at real/complex transition kinks
    for params in (
        TrackerParams(0.05, 0.0),
        TrackerParams(0.3, 0.31),
        TrackerParams(0.5, -0.1),
        DESIGN.params(),
    ):
        coarse = r_rate(params, BOUNDS, grid=101)
        dense = r_rate(params, BOUNDS, grid=50001)
        assert coarse == pytest.approx(dense, abs=1e-9)


def test_r_rate_degenerate_sector():
    b = SectorBounds(2.0, 2.0)
    rate, lam_at = r_rate_argmax(TrackerParams(0.3, 0.2), b)
    assert lam_at == 2.0
    assert rate == pytest.approx(spectral_radius(char_poly(TrackerParams(0.3, 0.2), 2.0)))


def test_jury_origin_inside_any_triangle():
    for rho in (0.05, 0.5, 0.9834699358669274, 0.999):
        assert jury_membership(CharPolyCoeffs(0.0, 0.0), TriangleRegion(rho)) == INSIDE


def test_jury_design_endpoints_on_boundary():
    # at the optimal design the segment endpoint at lam = m lies on the top
    # edge a2 = rho^2 and the endpoint at lam = L is the bottom vertex
    region = TriangleRegion(DESIGN.rho_star)
    seg = coefficient_segment(DESIGN.params(), BOUNDS)
    assert jury_membership(seg.e1, region) == BOUNDARY
    assert seg.e1.a2 == pytest.approx(DESIGN.rho_star**2, abs=1e-14)
    assert jury_membership(seg.e2, region) == BOUNDARY
    assert seg.e2.a1 == pytest.approx(0.0, abs=5e-16)
    assert seg.e2.a2 == pytest.approx(-DESIGN.rho_star**2, abs=1e-14)


def test_jury_outside_cases():
    region = TriangleRegion(0.9)
    assert jury_membership(CharPolyCoeffs(0.0, 1.0), region) == OUTSIDE
    assert jury_membership(CharPolyCoeffs(-2.0, 1.0), region) == OUTSIDE
    assert jury_membership(CharPolyCoeffs(0.0, -1.0), region) == OUTSIDE


def test_triangle_region_validation():
    with pytest.raises(ValueError):
        TriangleRegion(0.0)
    with pytest.raises(ValueError):
        TriangleRegion(1.0)
    v = TriangleRegion(0.5).vertices
    assert v == ((-1.0, 0.25), (1.0, 0.25), (0.0, -0.25))


def test_jury_agrees_with_companion_roots_seeded():
    rng = np.random.default_rng(4)
    disagreements = 0
    for _ in range(2000):
        a1 = rng.uniform(-3.0, 3.0)
        a2 = rng.uniform(-2.0, 2.0)
        rho = rng.uniform(0.05, 0.999)
        label = jury_membership(CharPolyCoeffs(a1, a2), TriangleRegion(rho), tol=1e-9)
        mod = _max_root_modulus(a1, a2)
        if mod < rho - 1e-9:
            root_label = INSIDE
        elif mod > rho + 1e-9:
            root_label = OUTSIDE
        else:
            root_label = BOUNDARY
        if label != root_label:
            disagreements += 1
    assert disagreements == 0


def test_segment_in_triangle_design_is_tight():
    params = DESIGN.params()
    assert segment_in_triangle(params, BOUNDS, TriangleRegion(DESIGN.rho_star))
    # any smaller disk excludes the endpoints
    assert not segment_in_triangle(
        params, BOUNDS, TriangleRegion(DESIGN.rho_star * (1.0 - 1e-6))
    )


def _kappa_bar_bisection(params, m, region, hi=1e6, iters=200):
    # independent oracle: largest kappa with the whole segment contained,
    # located by bisection on the containment predicate
    if jury_membership(char_poly(params, m), region) == OUTSIDE:
        return 0.0
    lo = 1.0
    if segment_in_triangle(params, SectorBounds(m, m * hi), region):
        return math.inf
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if segment_in_triangle(params, SectorBounds(m, m * mid), region):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def test_kappa_bar_round_trip_at_design():
    for kappa in (2.0, 10.0, 60.0):
        b = SectorBounds(0.1, 0.1 * kappa)
        d = design_optimal(b)
        got = kappa_bar(d.params(), b.m, TriangleRegion(d.rho_star))
        assert got == pytest.approx(kappa, abs=1e-9)


def test_kappa_bar_matches_bisection_oracle():
    cases = [
        (TrackerParams(0.3, 0.31), 0.1, 0.99),
        (TrackerParams(0.2, 0.18), 0.5, 0.95),
        (TrackerParams(1.0 / 3.0, 2.0 / 6.1), 0.1, 0.9834699358669274),
    ]
    for params, m, rho in cases:
        region = TriangleRegion(rho)
        closed = kappa_bar(params, m, region)
        brute = _kappa_bar_bisection(params, m, region)
        assert closed == pytest.approx(brute, rel=1e-9)


def test_kappa_bar_zero_when_start_outside():
    # gamma = 0 puts the lam = m endpoint at a2 = 1 > rho^2: outside
    params = TrackerParams(0.3, 0.0)
    assert kappa_bar(params, 0.1, TriangleRegion(0.99)) == 0.0


def test_kappa_max_closed_form():
    assert kappa_max(1.0 / math.sqrt(3.0)) == pytest.approx(2.0, rel=1e-15)
    assert kappa_max(1e-8) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(ValueError):
        kappa_max(0.0)
    with pytest.raises(ValueError):
        kappa_max(1.0)


def test_rho_star_validation():
    with pytest.raises(ValueError):
        rho_star(1.0)
    with pytest.raises(ValueError):
        rho_star(0.5)
    assert rho_star(2.0) == pytest.approx(1.0 / math.sqrt(3.0), rel=1e-15)


@given(kappa=st.floats(1.0 + 1e-6, 1e4))
def test_kappa_round_trip_property(kappa):
    assert kappa_max(rho_star(kappa)) == pytest.approx(kappa, rel=1e-12)


def test_design_optimal_frozen():
    assert DESIGN.alpha_star == pytest.approx(1.0 / 3.0, rel=1e-15)
    assert DESIGN.gamma_star == pytest.approx(2.0 / 6.1, rel=1e-15)
    assert DESIGN.rho_star == pytest.approx(math.sqrt(59.0 / 61.0), rel=1e-15)
    with pytest.raises(ValueError):
        design_optimal(SectorBounds(1.0, 1.0))


def test_g0_eval():
    params = TrackerParams(0.4, 0.3)
    assert g0_eval(params, 0.0) == pytest.approx(-0.3)
    with pytest.raises(ValueError):
        g0_eval(params, 1.0)
    z = np.exp(1j * 0.7)
    expected = (0.4 * z - 0.3) / (z - 1.0) ** 2
    assert g0_eval(params, z) == pytest.approx(expected, rel=1e-14)


def test_h0_is_identity_for_degenerate_sector():
    b = SectorBounds(2.0, 2.0)
    params = TrackerParams(0.3, 0.2)
    for omega in (0.1, 1.0, 2.0, np.pi):
        assert h0_eval(params, b, omega) == pytest.approx(1.0, abs=1e-14)


def test_h0_design_matches_contraction_closed_form():
    # at the optimal design H0 reduces to a function of rho* alone
    rho = DESIGN.rho_star
    params = DESIGN.params()
    for omega in np.linspace(0.0, np.pi, 257):
        z = np.exp(1j * omega)
        expected = (z * z - rho * rho) / (
            z * z - (4.0 * rho * rho / (1.0 + rho * rho)) * z + rho * rho
        )
        got = h0_eval(params, BOUNDS, float(omega))
        assert abs(got - expected) <= 1e-12 * max(1.0, abs(expected))


def test_h0_relation_to_g0():
    # H0 = (1 + L G0)/(1 + m G0) away from the pole
    params = TrackerParams(0.37, 0.29)
    for omega in (0.3, 1.1, 2.9):
        z = np.exp(1j * omega)
        g = g0_eval(params, z)
        expected = (1.0 + BOUNDS.L * g) / (1.0 + BOUNDS.m * g)
        assert h0_eval(params, BOUNDS, omega) == pytest.approx(expected, rel=1e-12)


def test_spr_design_margins_positive():
    for kappa in (2.0, 10.0, 60.0):
        b = SectorBounds(0.1, 0.1 * kappa)
        d = design_optimal(b)
        ok, margin = spr_check(d.params(), b)
        assert ok
        assert margin > 0.0


def test_spr_design_margin_frozen_at_kappa_60():
    ok, margin = spr_check(DESIGN.params(), BOUNDS)
    assert ok
    assert margin == pytest.approx(0.008334490901514053, rel=1e-9)


def test_spr_counterexample_frozen():
    assert schur_check(SPR_COUNTEREXAMPLE, BOUNDS.m)
    ok, margin = spr_check(SPR_COUNTEREXAMPLE, BOUNDS)
    assert not ok
    assert margin == pytest.approx(-10.690918610271732, rel=1e-9)
    cert = certify(SPR_COUNTEREXAMPLE, BOUNDS)
    assert not cert.globally_convergent
    assert cert.schur_ok and not cert.spr_ok


def test_degenerate_params_fail_both_checks():
    # alpha = gamma = 0 is outside the params type's domain but the checks
    # only read the two coefficients; the loop polynomial is (z-1)^2, not
    # Schur, and H0 has a unit-circle pole
    degenerate = SimpleNamespace(alpha=0.0, gamma=0.0)
    assert not schur_check(degenerate, BOUNDS.m)
    ok, margin = spr_check(degenerate, BOUNDS)
    assert not ok
    assert margin == float("-inf")


def test_spr_grid_validation():
    with pytest.raises(ValueError):
        spr_check(DESIGN.params(), BOUNDS, grid=32)


def test_certify_design():
    cert = certify(DESIGN.params(), BOUNDS)
    assert cert.globally_convergent
    assert cert.schur_ok and cert.spr_ok
    assert cert.r_rate == pytest.approx(DESIGN.rho_star, abs=1e-9)
    d = cert.to_dict()
    assert d["globally_convergent"] is True
    assert set(d) == {
        "schur_ok",
        "spr_ok",
        "spr_margin",
        "r_rate",
        "globally_convergent",
    }
