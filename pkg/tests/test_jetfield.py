import numpy as np
import pytest

from susy_immersion.errors import CapacityError, JetOrderError
from susy_immersion.grassmann import GrassmannElement, Parity, cos, exp, sin
from susy_immersion.jetfield import (D, J, JetElement, allocate_markers, assemble_superfield, berezin_top,
                                     finite_difference_jet, slots_upto, supersymmetry, symmetry_apply,
                                     translation, used_generators)
from susy_immersion.sinegordon import build_solution, kink_derivatives

N = 6
X1 = np.array([-1.3, -0.2, 0.4, 1.1])
X2 = np.array([0.5, -0.7, 0.3, -1.6])


def poly_jet(c, order=4):
    """Jet of ``exp(c1 x1 + c2 x2)`` at the sample points."""
    v = np.exp(c[0] * X1 + c[1] * X2) + 0j
    return JetElement.from_derivatives({(i, j): c[0] ** i * c[1] ** j * v for i, j in slots_upto(order)}, order, N)


def close(a: JetElement, b: JetElement, tol=1e-12):
    return (a - b).max_abs() <= tol


def test_slots_and_truncation():
    assert sorted(slots_upto(2)) == [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (2, 0)]
    f = poly_jet((0.3, -0.8), 4)
    assert f.truncate(2).order == 2
    assert f.dx(1).order == 3
    with pytest.raises(JetOrderError):
        D(1, f.truncate(0))


def test_leibniz_product_of_exponentials():
    f, g = poly_jet((0.3, -0.8)), poly_jet((-1.1, 0.4))
    assert close(f * g, poly_jet((0.3 - 1.1, -0.8 + 0.4)))


def test_analytic_chain_rule():
    phi = JetElement.from_derivatives(kink_derivatives(X1, X2, 1.3, 3), 3, N)
    s = sin(phi)
    p = {k: phi.slot(k).body() for k in slots_upto(3)}
    want_11 = -np.sin(p[(0, 0)]) * p[(1, 0)] * p[(0, 1)] + np.cos(p[(0, 0)]) * p[(1, 1)]
    assert np.allclose(s.slot((1, 1)).body(), want_11, rtol=1e-13, atol=1e-15)
    assert close(sin(phi) * sin(phi) + cos(phi) * cos(phi), phi.constant_like(1.0 + 0j), 1e-13)
    assert close(exp(phi.scale(1j)) * exp(phi.scale(-1j)), phi.constant_like(1.0 + 0j), 1e-13)


def test_kink_derivatives_against_finite_differences():
    a = 1.3
    exact = kink_derivatives(X1, X2, a, 2)
    fd = finite_difference_jet(lambda x, y: kink_derivatives(x, y, a, 0)[(0, 0)], X1, X2, order=2, h=1e-4)
    for s, v in fd.items():
        assert np.allclose(exact[s], v, rtol=1e-6, atol=1e-6), s


def test_kink_precisions_agree():
    d = kink_derivatives(X1, X2, 0.7, 4, "double")
    e = kink_derivatives(X1, X2, 0.7, 4, "extended")
    for s in d:
        assert np.allclose(d[s], e[s].astype(complex), rtol=1e-14, atol=1e-14)


def test_covariant_derivative_identities_on_solution():
    phi = build_solution(1.3, True).jet(X1, X2, 4, N)
    assert (D(1, D(2, phi)) + D(2, D(1, phi))).max_abs() < 1e-13
    for j in (1, 2):
        assert close(D(j, D(j, phi)), phi.dx(j).scale(-1j).truncate(2), 1e-13)
        for k in (1, 2):
            assert (D(j, J(k, phi)) + J(k, D(j, phi))).max_abs() < 1e-13
    # {J1, J2} = 0 and J_k^2 = i d_k
    assert (J(1, J(2, phi)) + J(2, J(1, phi))).max_abs() < 1e-13
    assert close(J(1, J(1, phi)), phi.dx(1).scale(1j).truncate(2), 1e-13)


def test_superfield_components_and_berezin_top():
    sol = build_solution(1.3, True)
    p0, p1, p2, p12 = sol.components(X1, X2, 2, N)
    phi = assemble_superfield(p0, p1, p2, p12)
    # D1 phi at theta = 0 is phi1; the theta1 theta2 coefficient is phi12
    low = D(1, phi).value
    theta = 0b11
    body_part = GrassmannElement({k: c for k, c in low.terms.items() if not k & theta}, N)
    assert (body_part - p1.value).max_abs() < 1e-15
    assert np.allclose(berezin_top(phi), p12.value.body())


def test_translation_prolongation_is_x_derivative():
    phi = build_solution(1.3, True).jet(X1, X2, 3, N)
    got = symmetry_apply(translation(1), lambda p: sin(p), phi)
    assert close(got, (cos(phi) * phi.dx(1)).truncate(got.order), 1e-13)


def test_supersymmetry_prolongation_and_graded_leibniz():
    phi = build_solution(1.3, False).jet(X1, X2, 3, N)
    omega = supersymmetry(1)
    got = symmetry_apply(omega, lambda p: p, phi)
    assert close(got, J(1, phi), 1e-15)
    # odd derivation: pr(f g) = pr(f) g + (-1)^|f| f pr(g), with f = D2 phi odd and g = phi even
    f_of = lambda p: D(2, p)
    lhs = symmetry_apply(omega, lambda p: D(2, p) * p.truncate(p.order - 1), phi)
    prf = symmetry_apply(omega, f_of, phi)
    prg = symmetry_apply(omega, lambda p: p, phi)
    f = f_of(phi)
    rhs = prf * phi.truncate(prf.order) - f * prg.truncate(f.order)
    assert (lhs - rhs).max_abs() < 1e-13


def test_marker_allocation():
    phi = build_solution(1.3, True).jet(X1, X2, 2, N)
    used = used_generators(phi)
    assert used == 0b111
    assert allocate_markers(N, used, 2) == (4, 5)
    with pytest.raises(CapacityError):
        allocate_markers(4, used, 2)
    small = build_solution(1.3, True).jet(X1, X2, 2, 3)
    with pytest.raises(CapacityError):
        symmetry_apply(supersymmetry(1), lambda p: p, small)


def test_parity_flip_on_supermatrices():
    from susy_immersion.sinegordon import SineGordonModel
    phi = build_solution(1.0, False).jet(X1, X2, 3, N)
    U1, U2 = SineGordonModel(1.0).potentials(phi)
    assert U1.parity is Parity.ODD
    assert D(1, U2).parity is Parity.EVEN
    D(1, U2).value().check_parity(Parity.EVEN)
