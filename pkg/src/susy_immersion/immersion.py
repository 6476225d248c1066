"""Bosonic and fermionic SUSY Fokas-Gel'fand immersions, frame-reduced.

Every geometric quantity is an inner product of supermatrices built from the
potentials ``U_j`` and their deformations ``A_j``.  The Killing form is
invariant under conjugation, so the wavefunction never has to be solved for.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Protocol, Union

import numpy as np

from .errors import DegenerateMetric, DegenerateNormal, ParityError
from .grassmann import GrassmannElement, Parity, inverse, sqrt
from .jetfield import D, SymmetryGenerator, JetElement, symmetry_apply
from .supermatrix import (DEFAULT_ALPHA, SuperMatrix, anticommutator, apply_E, commutator,
                          inverse_even, killing)


class Sector(enum.Enum):
    BOSONIC = "bosonic"
    FERMIONIC = "fermionic"


@dataclass(frozen=True)
class SymTafel:
    beta: Any = 1.0


@dataclass(frozen=True)
class Gauge:
    S: SuperMatrix


@dataclass(frozen=True)
class Symmetry:
    omega: SymmetryGenerator


Variant = Union[SymTafel, Gauge, Symmetry]


@dataclass(frozen=True)
class DeformationSpec:
    sector: Sector
    variant: Variant

    def __post_init__(self):
        want = Parity.EVEN if self.sector is Sector.BOSONIC else Parity.ODD
        v = self.variant
        if isinstance(v, SymTafel):
            # lambda is bosonic, so beta must be even (bosonic) or odd (fermionic)
            got = v.beta.parity() if hasattr(v.beta, "parity") else Parity.EVEN
            if got is not want:
                raise ParityError(f"{self.sector.value} Sym-Tafel needs a {want.name} beta, got {got.name}")
        elif isinstance(v, Gauge):
            if v.S.parity is not want:
                raise ParityError(f"{self.sector.value} gauge needs a {want.name} S, got {v.S.parity}")
        elif isinstance(v, Symmetry):
            if v.omega.parity is not want:
                raise ParityError(f"{self.sector.value} symmetry needs a {want.name} generator")
        else:
            raise TypeError(f"unknown deformation variant {v!r}")


class ZeroCurvatureModel(Protocol):
    def potentials(self, phi: JetElement) -> tuple[SuperMatrix, SuperMatrix]: ...

    def spectral_derivatives(self, phi: JetElement) -> tuple[SuperMatrix, SuperMatrix]: ...


def _times(c, M: SuperMatrix) -> SuperMatrix:
    if isinstance(c, (GrassmannElement, JetElement)):
        z = M.rows[0][0]
        cj = JetElement.constant(c, z.order) if isinstance(z, JetElement) and isinstance(c, GrassmannElement) else c
        return M.scale_left(cj)
    return M.map(lambda e: e.scale(c), M.parity)


def build_A(spec: DeformationSpec, model: ZeroCurvatureModel, phi: JetElement) -> tuple[SuperMatrix, SuperMatrix]:
    """Tangent-vector matrices ``A_1, A_2`` for one deformation, E factors explicit."""
    v = spec.variant
    bos = spec.sector is Sector.BOSONIC
    if isinstance(v, SymTafel):
        dU = model.spectral_derivatives(phi)
        if bos:
            return tuple(_times(v.beta, M) for M in dU)
        return tuple(apply_E(_times(v.beta, M)) for M in dU)
    if isinstance(v, Gauge):
        U = model.potentials(phi)
        S = v.S
        ES = apply_E(S)
        out = []
        for j, Uj in enumerate(U, start=1):
            if bos:
                out.append(apply_E(D(j, S) + commutator(ES, apply_E(Uj))))
            else:
                out.append(-apply_E(D(j, S) - anticommutator(ES, apply_E(Uj))))
        return tuple(out)
    # The [D_j, pr omega] Psi term vanishes because omega is a common symmetry
    # of the zero-curvature condition and the linear problem.
    prU = symmetry_apply(v.omega, lambda p: model.potentials(p), phi)
    if bos:
        return prU
    return tuple(apply_E(M) for M in prU)


def determining_matrix(sector: Sector, A1: SuperMatrix, A2: SuperMatrix,
                       U1: SuperMatrix, U2: SuperMatrix) -> SuperMatrix:
    EA1, EA2, EU1, EU2 = (apply_E(M) for M in (A1, A2, U1, U2))
    lhs = D(1, A2) + D(2, A1)
    if sector is Sector.BOSONIC:
        return lhs - anticommutator(EA1, EU2) - anticommutator(EA2, EU1)
    return lhs + commutator(EA1, EU2) + commutator(EA2, EU1)


def determining_residual(sector: Sector, A1, A2, U1, U2) -> float:
    """Largest coefficient of the infinitesimal zero-curvature condition."""
    return determining_matrix(sector, A1, A2, U1, U2).max_abs()


def _value(M: SuperMatrix) -> SuperMatrix:
    return M.value()


def _conj(M: SuperMatrix, frame) -> SuperMatrix:
    if frame is None:
        return M
    S, Sinv = frame
    return (S @ M @ Sinv).with_parity(M.parity)


def _pairing(M: SuperMatrix, N: SuperMatrix, alpha: float, frame):
    v = killing(_conj(M, frame), _conj(N, frame), alpha)
    if frame is None:
        return v
    # odd blocks of the frame leave rounding-level terms of the wrong degree
    return v.graded_part(M.parity + N.parity)


def first_fundamental(sector: Sector, A1: SuperMatrix, A2: SuperMatrix, alpha: float = DEFAULT_ALPHA,
                      frame=None) -> tuple[Any, Any, Any, Any]:
    """``(g11, g12, g21, g22)``, each index order computed independently."""
    A1, A2 = _value(A1), _value(A2)
    EA = {1: apply_E(A1), 2: apply_E(A2)}
    A = {1: A1, 2: A2}
    k = lambda M, N: _pairing(M, N, alpha, frame)
    if sector is Sector.BOSONIC:
        g11 = k(EA[1], A[1])
        g22 = k(EA[2], A[2])
        g12 = k(EA[1], EA[2])
        g21 = k(EA[2], EA[1])
        return g11, g12, g21, g22
    return k(EA[1], EA[1]), k(EA[1], EA[2]), k(EA[2], EA[1]), k(EA[2], EA[2])


def normal_bracket(sector: Sector, A1: SuperMatrix, A2: SuperMatrix) -> SuperMatrix:
    EA1, EA2 = apply_E(_value(A1)), apply_E(_value(A2))
    if sector is Sector.BOSONIC:
        return anticommutator(EA1, EA2)
    return commutator(EA1, EA2)


def normal(sector: Sector, A1: SuperMatrix, A2: SuperMatrix, alpha: float = DEFAULT_ALPHA,
           inject: SuperMatrix | None = None, branch: int = 1) -> SuperMatrix:
    """Unit normal: the tangent bracket over the square root of its self-product.

    The square root is the principal branch on the body, times ``branch``
    (+1 or -1).  ``inject`` bypasses the construction, which isotropic cases
    need.
    """
    if inject is not None:
        return _value(inject)
    B = normal_bracket(sector, A1, A2)
    nn = killing(B, B, alpha)
    if np.any(np.abs(np.asarray(nn.body())) == 0):
        raise DegenerateNormal("self-product of the tangent bracket has zero body")
    return B.scale_left(inverse(sqrt(nn)).scale(float(branch))).with_parity(B.parity)


def second_fundamental_arguments(sector: Sector, A1, A2, U1, U2) -> dict[tuple[int, int], SuperMatrix]:
    A = {1: A1, 2: A2}
    U = {1: U1, 2: U2}
    out = {}
    for i in (1, 2):
        EAi = apply_E(A[i])
        for j in (1, 2):
            DA = D(j, A[i])
            if sector is Sector.BOSONIC:
                M = DA - anticommutator(EAi, apply_E(U[j]))
            else:
                M = -(DA + commutator(EAi, apply_E(U[j])))
            out[(i, j)] = _value(M)
    return out


def second_fundamental(sector: Sector, A1, A2, U1, U2, N: SuperMatrix, alpha: float = DEFAULT_ALPHA,
                       frame=None) -> tuple[Any, Any, Any, Any]:
    """``(b11, b12, b21, b22)``."""
    args = second_fundamental_arguments(sector, A1, A2, U1, U2)
    N = _value(N)
    b = {ij: _pairing(M, N, alpha, frame) for ij, M in args.items()}
    return b[(1, 1)], b[(1, 2)], b[(2, 1)], b[(2, 2)]


def metric_denominator(sector: Sector, g11, g12, g22):
    if sector is Sector.BOSONIC:
        return g11 * g22 + g12 * g12
    return g11 * g22 - g12 * g12


def curvatures(sector: Sector, g: tuple, b: tuple):
    """Gaussian and mean curvature; raises DegenerateMetric for curve-like metrics."""
    g11, g12, _, g22 = g
    b11, b12, _, b22 = b
    den = metric_denominator(sector, g11, g12, g22)
    if np.any(np.abs(np.asarray(den.body())) == 0):
        raise DegenerateMetric("metric denominator has zero body")
    inv = inverse(den)
    K = (b11 * b22 + b12 * b12) * inv
    if sector is Sector.BOSONIC:
        H = (b11 * g22 + b22 * g11 + (b12 * g12).scale(2.0)) * inv.scale(0.5)
    else:
        H = (b11 * g22 + b22 * g11) * inv.scale(0.5)
    return K, H


def umbilic_discriminant(K, H):
    return H * H - K


@dataclass
class SurfaceGeometry:
    sector: Sector
    A1: SuperMatrix
    A2: SuperMatrix
    g: tuple
    N: SuperMatrix | None
    b: tuple | None
    K: Any = None
    H: Any = None
    normal_injected: bool = False
    residuals: dict[str, float] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def g11(self):
        return self.g[0]

    @property
    def g12(self):
        return self.g[1]

    @property
    def g22(self):
        return self.g[3]


def surface_geometry(spec: DeformationSpec, model: ZeroCurvatureModel, phi: JetElement,
                     alpha: float = DEFAULT_ALPHA, inject_normal: SuperMatrix | None = None,
                     frame=None, branch: int = 1) -> SurfaceGeometry:
    """Run one deformation end to end at the points carried by ``phi``.

    ``frame`` is an optional ``(S, S^-1)`` pair conjugating every inner-product
    argument, used to check that dropping the wavefunction is harmless.
    """
    sector = spec.sector
    U1, U2 = model.potentials(phi)
    A1, A2 = build_A(spec, model, phi)
    geo = SurfaceGeometry(sector, A1.value(), A2.value(), first_fundamental(sector, A1, A2, alpha, frame),
                          None, None)
    geo.residuals["determining"] = determining_residual(sector, A1, A2, U1, U2)
    try:
        N = normal(sector, A1, A2, alpha, inject_normal, branch)
    except DegenerateNormal as exc:
        geo.notes.append(f"normal: {exc}")
        return geo
    geo.N = N
    geo.normal_injected = inject_normal is not None
    if not geo.normal_injected:
        geo.residuals["normal_unit"] = (killing(N, N, alpha) - 1.0).max_abs()
        geo.residuals["normal_orthogonal"] = max(
            killing(apply_E(geo.A1), N, alpha).max_abs(), killing(apply_E(geo.A2), N, alpha).max_abs())
    geo.b = second_fundamental(sector, A1, A2, U1, U2, N, alpha, frame)
    try:
        geo.K, geo.H = curvatures(sector, geo.g, geo.b)
    except DegenerateMetric as exc:
        geo.notes.append(f"curvature: {exc}")
    return geo


def random_even_frame(n: int, p: int = 2, q: int = 1, seed: int = 0, block_diagonal: bool = False,
                      dtype=np.clongdouble):
    """A random invertible even supermatrix and its inverse over ``n`` generators.

    Odd blocks are filled from the odd generators unless ``block_diagonal``.
    Coefficients are stored as ``dtype`` so the frame does not limit the
    precision of extended-precision inputs.
    """
    rng = np.random.default_rng(seed)
    draw = lambda: dtype(complex(rng.normal(), rng.normal()))
    size = p + q
    rows = []
    for i in range(size):
        row = []
        for j in range(size):
            diag = (i < p) == (j < p)
            if diag:
                e = GrassmannElement.scalar(draw() + (2.0 if i == j else 0.0), n)
                for a in range(1, n + 1):
                    for c in range(a + 1, n + 1):
                        e = e + GrassmannElement({(1 << (a - 1)) | (1 << (c - 1)): draw() / 10}, n)
            elif block_diagonal:
                e = GrassmannElement.zero(n)
            else:
                e = GrassmannElement({1 << (a - 1): draw() for a in range(1, n + 1)}, n)
            row.append(e)
        rows.append(row)
    S = SuperMatrix(rows, p, q).check_parity(Parity.EVEN)
    return S, inverse_even(S)
