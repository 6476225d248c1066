import numpy as np
import pytest

from susy_immersion.errors import DegenerateMetric, DegenerateNormal, ParityError
from susy_immersion.grassmann import GrassmannElement, Parity
from susy_immersion.immersion import (DeformationSpec, Gauge, Sector, Symmetry, SymTafel, build_A, curvatures,
                                      determining_residual, first_fundamental, normal, random_even_frame,
                                      second_fundamental, surface_geometry, umbilic_discriminant)
from susy_immersion.jetfield import D, JetElement, supersymmetry, translation
from susy_immersion.sinegordon import SineGordonModel, build_solution
from susy_immersion.suites import random_supermatrix
from susy_immersion.supermatrix import SuperMatrix

N = 6
X1 = np.array([-0.9, 0.2, 0.7])
X2 = np.array([0.4, -0.3, 1.2])


@pytest.fixture(scope="module")
def phi():
    return build_solution(1.3, True, precision="extended").jet(X1, X2, 3, N)


@pytest.fixture(scope="module")
def model():
    return SineGordonModel(0.8, precision="extended")


def test_deformation_parity_validation():
    S_even = SuperMatrix.identity(2, 1, N)
    xi = GrassmannElement.generator(4, N)
    with pytest.raises(ParityError):
        DeformationSpec(Sector.FERMIONIC, Gauge(S_even))
    with pytest.raises(ParityError):
        DeformationSpec(Sector.FERMIONIC, SymTafel(1.0))
    with pytest.raises(ParityError):
        DeformationSpec(Sector.BOSONIC, SymTafel(xi))
    with pytest.raises(ParityError):
        DeformationSpec(Sector.BOSONIC, Symmetry(supersymmetry(1)))
    with pytest.raises(ParityError):
        DeformationSpec(Sector.FERMIONIC, Symmetry(translation(2)))
    DeformationSpec(Sector.FERMIONIC, SymTafel(xi))
    with pytest.raises(TypeError):
        DeformationSpec(Sector.BOSONIC, "gauge")


def test_degenerate_normal_and_metric():
    z = SuperMatrix.from_scalars(np.zeros((3, 3)), 2, 1, N, Parity.EVEN)
    with pytest.raises(DegenerateNormal):
        normal(Sector.BOSONIC, z, z)
    zero = GrassmannElement.zero(N)
    with pytest.raises(DegenerateMetric):
        curvatures(Sector.BOSONIC, (zero,) * 4, (zero,) * 4)


def test_degenerate_bracket_is_reported_not_raised(phi, model):
    U2 = model.potentials(phi)[1]
    S = U2.scale_right(D(2, phi)).with_parity(Parity.EVEN)
    geo = surface_geometry(DeformationSpec(Sector.BOSONIC, Gauge(S)), model, phi)
    assert geo.N is None and geo.b is None
    assert any(note.startswith("normal:") for note in geo.notes)


@pytest.mark.parametrize("spec", [
    DeformationSpec(Sector.BOSONIC, SymTafel(0.7)),
    DeformationSpec(Sector.BOSONIC, Symmetry(translation(1))),
    DeformationSpec(Sector.FERMIONIC, Symmetry(supersymmetry(2))),
])
def test_deformations_solve_determining_equation(phi, model, spec):
    U1, U2 = model.potentials(phi)
    A1, A2 = build_A(spec, model, phi)
    assert determining_residual(spec.sector, A1, A2, U1, U2) < 1e-12


def test_random_tangent_matrices_fail_determining_equation(phi, model):
    # negative control: the residual is a real test, not an identity
    rng = np.random.default_rng(5)
    U1, U2 = model.potentials(phi)
    A1 = random_supermatrix(rng, N, 1)
    A2 = random_supermatrix(rng, N, 1)
    lift = lambda M: M.map(lambda e: JetElement.constant(e, 3), M.parity)
    assert determining_residual(Sector.BOSONIC, lift(A1), lift(A2), U1, U2) > 1e-2


@pytest.mark.parametrize("block_diagonal", [True, False])
def test_frame_independence(phi, model, block_diagonal):
    spec = DeformationSpec(Sector.BOSONIC, SymTafel(0.7))
    U1, U2 = model.potentials(phi)
    A1, A2 = build_A(spec, model, phi)
    frame = random_even_frame(N, seed=11, block_diagonal=block_diagonal)
    g0 = first_fundamental(spec.sector, A1, A2)
    g1 = first_fundamental(spec.sector, A1, A2, frame=frame)
    Nn = normal(spec.sector, A1, A2, branch=-1)
    b0 = second_fundamental(spec.sector, A1, A2, U1, U2, Nn)
    b1 = second_fundamental(spec.sector, A1, A2, U1, U2, Nn, frame=frame)
    for x, y in zip(g0 + b0, g1 + b1):
        assert (x - y).max_abs() < 1e-12 * max(1.0, x.max_abs())


def test_symtafel_geometry_is_consistent(phi, model):
    geo = surface_geometry(DeformationSpec(Sector.BOSONIC, SymTafel(0.7)), model, phi, branch=-1)
    assert geo.residuals["normal_unit"] < 1e-14
    assert geo.residuals["normal_orthogonal"] < 1e-14
    g11, g12, g21, g22 = geo.g
    assert (g12 + g21).max_abs() < 1e-14
    # bosonic K is (b11 b22 + b12^2) / (g11 g22 + g12^2)
    K, H = curvatures(Sector.BOSONIC, geo.g, geo.b)
    assert (K - geo.K).max_abs() == 0
    assert (umbilic_discriminant(K, H) - (H * H - K)).max_abs() == 0
