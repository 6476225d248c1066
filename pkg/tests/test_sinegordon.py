import numpy as np
import pytest

from susy_immersion.grassmann import GrassmannElement
from susy_immersion.sinegordon import (CASES, SineGordonModel, build_solution, component_residuals,
                                       euler_character, lambda_sweep, run_case, superfield_residual,
                                       weingarten_residual, zcc_max)

X1 = np.linspace(-2, 2, 5)
X2 = np.linspace(1.5, -1.5, 5)


def test_symtafel_curvature_is_constant():
    r = run_case("symtafel", lam=1.0, beta=1.0, grid=7)
    assert np.max(np.abs(np.asarray(r.check("K").computed.body()) - 4)) < 1e-10
    assert r.check("K").passed


def test_bosonic_symmetry_g22_is_exact_zero():
    r = run_case("bosonic-symmetry", lam=1.0, grid=3)
    assert r.check("g22").computed.is_exact_zero()


def test_argument_validation():
    with pytest.raises(ValueError, match="unknown case"):
        run_case("kink")
    with pytest.raises(ValueError):
        run_case("symtafel", grid=1)
    with pytest.raises(ValueError):
        run_case("symtafel", x_range=(1.0, -1.0))
    with pytest.raises(ValueError):
        run_case("symtafel", jet_order=2)
    with pytest.raises(ValueError):
        SineGordonModel(0.0)


@pytest.mark.parametrize("dressing", [False, True, (0.3, -1.1)])
def test_component_equations_hold_for_model_sign(dressing):
    sol = build_solution(0.9, dressing, sign=-1)
    res = component_residuals(sol, X1, X2, sign=-1)
    assert max(res.values()) < 1e-10, res
    assert superfield_residual(sol.jet(X1, X2, 3, 6), -1) < 1e-12


def test_opposite_sign_leaves_a_theta_top_residual():
    res = component_residuals(build_solution(0.9, True, sign=-1), X1, X2, sign=1)
    assert res["phi12"] > 1


def test_zero_curvature_holds_on_solution():
    for lam in (0.5, 2.0):
        phi = build_solution(1.2, True).jet(X1, X2, 3, 6)
        assert zcc_max(SineGordonModel(lam), phi) < 1e-12


def test_euler_character_corners_match_quadrature():
    for a in (0.8, 1.0, 1.7):
        sol = build_solution(a, True)
        e = euler_character(sol, 3.0, quadrature=96)
        assert abs(e["quadrature"] - e["corners"]) < 1e-10


def test_euler_character_vanishes():
    kink = build_solution(1.0)
    # the alternating corner sum removes a constant shift of phi0
    shifted = type(kink)(a=1.3, shift=0.4)
    for L in (10.0, 20.0, 40.0):
        assert abs(euler_character(kink, L)["corners"]) < 1e-12
        assert abs(euler_character(shifted, L)["corners"]) < 1e-12


def test_weingarten_residual():
    z = GrassmannElement.zero(6)
    assert weingarten_residual("bosonic-gauge", z, z).is_exact_zero()
    assert weingarten_residual("fermionic-gauge", z, z).is_exact_zero()
    K = GrassmannElement.scalar(-4.0 + 0j, 6)
    H = GrassmannElement.scalar(2.0 + 0j, 6)
    assert weingarten_residual("fermionic-gauge", K, H).max_abs() == 0
    with pytest.raises(ValueError):
        weingarten_residual("symtafel", z, z)


def test_fermionic_gauge_mean_curvature_squares_to_zero():
    # H is pure soul here, so H^2 vanishes exactly and the relation reduces to K
    geo = run_case("fermionic-gauge", grid=3).geometries["normal"]
    assert np.all(np.asarray(geo.H.body()) == 0)
    assert (geo.H * geo.H).is_exact_zero()


@pytest.mark.parametrize("case", CASES)
def test_every_case_satisfies_the_determining_equation(case):
    r = run_case(case, lam=0.7, beta=0.8, grid=3, a=1.3, dressing=True)
    assert r.residuals["determining"] < 1e-9
    assert r.residuals["zcc"] < 1e-9
    assert r.passed == (not r.failures)


def test_lambda_sweep():
    with pytest.raises(ValueError):
        lambda_sweep("symtafel", [1.0])
    with pytest.raises(ValueError):
        lambda_sweep("fermionic-gauge", [1.0, 2.0])
    fit = lambda_sweep("symtafel", [0.5, 1.0, 2.0], grid=3)
    assert abs(fit["exponent"] - 2) < 1e-9 and fit["spread"] < 1e-9
