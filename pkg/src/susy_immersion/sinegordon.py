"""SUSY sine-Gordon model: potentials, a dressed kink, and the five surfaces.

Conventions
-----------
Generators: 1, 2 are theta1, theta2; 3 is the odd constant ``eps`` dressing
the fermionic components; higher generators are left free for symmetry
markers.  The model is ``D2 D1 phi = sign * i sin(phi)``.  The printed
potentials are compatible with ``sign = -1`` (see ``zcc_sign`` below), which
is therefore the default used for geometry.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .grassmann import GrassmannElement, Parity, cos, exp, inverse, sin, sqrt
from .jetfield import (D, J, JetElement, SuperfieldSolution, berezin_top,
                       slots_upto, supersymmetry, translation, zcc_residual)
from .immersion import (DeformationSpec, Gauge, Sector, SurfaceGeometry, Symmetry, SymTafel,
                        surface_geometry)
from .supermatrix import DEFAULT_ALPHA, SuperMatrix, apply_E, killing

EPS = 3
DEFAULT_GENERATORS = 6
ZCC_SIGN = -1

CASES = ("symtafel", "bosonic-gauge", "bosonic-symmetry", "fermionic-gauge", "fermionic-symmetry")


# kink ---------------------------------------------------------------------------------


def _kink_polynomials(order: int) -> list[dict[tuple[int, int], float]]:
    # g(u) = 2 arctan e^u has g' = sech u; derivatives are polynomials in
    # s = sech u and t = tanh u, with s' = -s t and t' = s^2.
    polys: list[dict[tuple[int, int], float]] = [{}, {(1, 0): 1.0}]
    for _ in range(2, order + 1):
        nxt: dict[tuple[int, int], float] = {}
        for (i, j), c in polys[-1].items():
            if i:
                nxt[(i, j + 1)] = nxt.get((i, j + 1), 0.0) - i * c
            if j:
                nxt[(i + 2, j - 1)] = nxt.get((i + 2, j - 1), 0.0) + j * c
        polys.append(nxt)
    return polys


PRECISION = {"double": np.float64, "extended": np.longdouble}


def kink_derivatives(x1, x2, a: float, order: int, precision: str = "double") -> dict[tuple[int, int], np.ndarray]:
    """``d1^i d2^j phi0`` for ``phi0 = 2 arctan exp(a x1 - x2 / a)``."""
    real = PRECISION[precision]
    u = real(a) * np.asarray(x1, real) - np.asarray(x2, real) / real(a)
    s, t = 1.0 / np.cosh(u), np.tanh(u)
    polys = _kink_polynomials(order)
    out = {}
    for i, j in slots_upto(order):
        if i + j == 0:
            v = 2.0 * np.arctan(np.exp(u))
        else:
            v = sum(c * s**p * t**q for (p, q), c in polys[i + j].items())
        out[(i, j)] = real(a) ** i * (-1 / real(a)) ** j * v + 0j
    return out


@dataclass(frozen=True)
class KinkSolution(SuperfieldSolution):
    """Kink in ``phi0`` with an optional exact fermionic dressing.

    With ``eps`` odd and constant, ``phi1 = eps (-i c1 d1 phi0 + i c2 sin phi0)``
    and ``phi2 = sign * eps (-i c1 sin phi0 - i c2 d2 phi0)`` solve the linear
    fermionic equations, and ``phi1 phi2 = 0`` because ``eps^2 = 0``.
    """

    a: float = 1.0
    c1: float = 0.0
    c2: float = 0.0
    sign: int = ZCC_SIGN
    eps: int = EPS
    shift: float = 0.0
    precision: str = "double"

    @property
    def dressed(self) -> bool:
        return bool(self.c1 or self.c2)

    def phi0(self, x1, x2, order: int, n: int) -> JetElement:
        d = kink_derivatives(x1, x2, self.a, order, self.precision)
        d[(0, 0)] = d[(0, 0)] + self.shift
        return JetElement.from_derivatives(d, order, n)

    def components(self, x1, x2, order: int, n: int):
        p0 = self.phi0(x1, x2, order + 1, n)
        s0 = sin(p0).truncate(order)
        zero = s0.zero_like()
        if self.dressed:
            e = JetElement.constant(GrassmannElement.generator(self.eps, n), order)
            p1 = e * (p0.dx(1).scale(-1j * self.c1) + s0.scale(1j * self.c2))
            p2 = e * (s0.scale(-1j * self.c1) + p0.dx(2).scale(-1j * self.c2)).scale(float(self.sign))
        else:
            p1 = p2 = zero
        return p0.truncate(order), p1, p2, s0.scale(self.sign * 1j)


def build_solution(a: float = 1.0, dressing: bool | tuple[float, float] = False,
                   sign: int = ZCC_SIGN, precision: str = "double") -> KinkSolution:
    if dressing is True:
        c1, c2 = 0.5, 0.25
    elif dressing:
        c1, c2 = dressing
    else:
        c1 = c2 = 0.0
    return KinkSolution(a=a, c1=c1, c2=c2, sign=sign, precision=precision)


def component_residuals(sol: SuperfieldSolution, x1, x2, n: int = DEFAULT_GENERATORS,
                        sign: int = 1) -> dict[str, float]:
    """Residuals of the theta-expansion of ``D2 D1 phi = sign * i sin phi``:

    ``phi12 = sign i sin phi0``, ``d1 phi2 = sign cos phi0 phi1``,
    ``d2 phi1 = -sign cos phi0 phi2`` and
    ``d1 d2 phi0 = -sin phi0 cos phi0 + sign i sin phi0 phi1 phi2``.
    """
    p0, p1, p2, p12 = sol.components(x1, x2, 2, n)
    s0, c0 = sin(p0.truncate(0)), cos(p0.truncate(0))
    v = lambda j: j.value
    res = {
        "phi12": (v(p12) - s0.value.scale(sign * 1j)).max_abs(),
        "d1phi2": (v(p2.dx(1)) - (c0 * p1.truncate(0)).value.scale(sign)).max_abs(),
        "d2phi1": (v(p1.dx(2)) + (c0 * p2.truncate(0)).value.scale(sign)).max_abs(),
        "d1d2phi0": (p0.dx(1).dx(2).value + (s0 * c0).value
                     - (s0 * p1.truncate(0) * p2.truncate(0)).value.scale(sign * 1j)).max_abs(),
    }
    return res


def superfield_residual(phi: JetElement, sign: int) -> float:
    """Largest coefficient of ``D2 D1 phi - sign * i sin phi``."""
    return (D(2, D(1, phi)) - sin(phi.truncate(phi.order - 2)).scale(sign * 1j)).max_abs()


# potentials -----------------------------------------------------------------------------


@dataclass(frozen=True)
class SineGordonModel:
    lam: float = 1.0
    alpha: float = DEFAULT_ALPHA
    precision: str = "double"

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError("spectral parameter must be positive")

    def _patterns(self, phi: JetElement):
        r = phi.order - 1
        ep = exp(phi.scale(1j)).truncate(r)
        em = exp(phi.scale(-1j)).truncate(r)
        return ep, em, D(2, phi)

    def potentials(self, phi: JetElement) -> tuple[SuperMatrix, SuperMatrix]:
        """``U1, U2`` as odd supermatrices in gl(2|1)."""
        ep, em, d2 = self._patterns(phi)
        z = ep.zero_like()
        one = ep.constant_like(1.0 + 0j)
        s = np.sqrt(PRECISION[self.precision](self.lam))
        k = 1 / (2 * s)
        U1 = SuperMatrix([[z, z, ep.scale(1j * k)],
                          [z, z, em.scale(-1j * k)],
                          [em.scale(-k), ep.scale(k), z]], 2, 1, Parity.ODD)
        U2 = SuperMatrix([[d2.scale(1j), z, one.scale(-1j * s)],
                          [z, d2.scale(-1j), one.scale(1j * s)],
                          [one.scale(-s), one.scale(s), z]], 2, 1, Parity.ODD)
        return U1, U2

    def spectral_derivatives(self, phi: JetElement) -> tuple[SuperMatrix, SuperMatrix]:
        """Exact lambda-derivatives: ``-U1/(2 lam)`` and the off-diagonal of U2 over ``2 lam``."""
        U1, U2 = self.potentials(phi)
        c = 1 / (2 * PRECISION[self.precision](self.lam))
        dU1 = U1.map(lambda e: e.scale(-c), Parity.ODD)
        z = U2[0, 0].zero_like()
        rows = [[z if (i < 2) == (j < 2) else U2[i, j].scale(c) for j in range(3)]
                for i in range(3)]
        return dU1, SuperMatrix(rows, 2, 1, Parity.ODD)


def build_U(model: SineGordonModel, phi: JetElement):
    U1, U2 = model.potentials(phi)
    dU1, dU2 = model.spectral_derivatives(phi)
    return U1, U2, dU1, dU2


def zcc_max(model: SineGordonModel, phi: JetElement) -> float:
    return zcc_residual(*model.potentials(phi)).max_abs()


# case studies ------------------------------------------------------------------------------

RESIDUAL_TOL = 1e-9
ZERO_TOL = 1e-12

VERIFIED = "verified"
UP_TO_SIGN = "verified-up-to-sign"
NON_REPRODUCIBLE = "non-reproducible"
REPORTED = "reported"


def relative_deviation(computed, expected) -> float:
    """Max over points of ``|computed - expected| / (1 + |expected|)``, coefficientwise."""
    diff = computed - expected
    num = 0.0
    den = 1.0
    for c in diff.terms.values():
        num = np.maximum(num, np.abs(c))
    for c in expected.terms.values():
        den = np.maximum(den, 1.0 + np.abs(c))
    return float(np.max(num / den)) if diff.terms else 0.0


@dataclass
class Check:
    """One computed quantity against its closed form.

    ``provenance`` is ``printed`` for closed forms given as reference
    values for a case, ``derived`` for values re-derived from the definitions,
    ``exact`` for odd squares, which must vanish bit for bit, and ``zero`` for
    other vanishing quantities, held to ``ZERO_TOL`` coefficientwise.
    """

    quantity: str
    computed: Any
    expected: Any = None
    provenance: str = "printed"
    note: str = ""
    verdict: str = ""
    deviation: float = float("nan")
    sign_allowed: bool = False
    asserted: bool = True

    def evaluate(self, tol: float) -> "Check":
        if self.expected is None:
            self.verdict = REPORTED
            return self
        if self.provenance == "exact":
            self.deviation = self.computed.max_abs()
            self.verdict = VERIFIED if self.computed.is_exact_zero() else NON_REPRODUCIBLE
            return self
        if self.provenance == "zero":
            self.deviation = self.computed.max_abs()
            self.verdict = VERIFIED if self.deviation <= ZERO_TOL else NON_REPRODUCIBLE
            return self
        self.deviation = relative_deviation(self.computed, self.expected)
        if self.deviation <= tol:
            self.verdict = VERIFIED
        elif self.sign_allowed and relative_deviation(self.computed, -self.expected) <= tol:
            self.verdict = UP_TO_SIGN
        else:
            self.verdict = NON_REPRODUCIBLE
        return self

    @property
    def passed(self) -> bool:
        """Flags (``asserted=False``) never fail; they only record a verdict."""
        return not self.asserted or self.verdict in (VERIFIED, UP_TO_SIGN, REPORTED)


@dataclass
class CaseReport:
    case: str
    lam: float
    beta: float
    variant: str
    checks: list[Check] = field(default_factory=list)
    geometries: dict[str, SurfaceGeometry] = field(default_factory=dict)
    residuals: dict[str, float] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    x1: Any = None
    x2: Any = None

    def check(self, quantity: str) -> Check:
        for c in self.checks:
            if c.quantity == quantity:
                return c
        raise KeyError(quantity)

    def add(self, *checks: Check) -> None:
        self.checks.extend(checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    @property
    def passed(self) -> bool:
        return not self.failures and all(v < RESIDUAL_TOL for k, v in self.residuals.items()
                                         if k in ("zcc", "determining"))


class Fields:
    """Grassmann values of the superfield expressions the closed forms use."""

    def __init__(self, phi: JetElement):
        self.jet = phi
        v = phi.truncate(0)
        self.n = phi.n
        self.phi = v.value
        self.sin = sin(v).value
        self.cos = cos(v).value
        self.ep = exp(v.scale(1j)).value
        self.em = exp(v.scale(-1j)).value
        self.D1 = D(1, phi).value
        self.D2 = D(2, phi).value
        self.d1 = phi.dx(1).value
        self.d2 = phi.dx(2).value
        self.d1D2 = D(2, phi).dx(1).value
        self.J = {k: J(k, phi).value for k in (1, 2)}
        self.JD2 = {k: J(k, D(2, phi)).value for k in (1, 2)}

    def scalar(self, c) -> GrassmannElement:
        return GrassmannElement.scalar(c, self.n)

    def zero(self) -> GrassmannElement:
        return GrassmannElement.zero(self.n)

    def matrix(self, rows, parity: Parity | None = None) -> SuperMatrix:
        out = [[e if isinstance(e, GrassmannElement) else
                (self.zero() if e == 0 else self.scalar(complex(e))) for e in r] for r in rows]
        return SuperMatrix(out, 2, 1, parity)


def _matrix_checks(name: str, computed: SuperMatrix, expected: SuperMatrix, **kw) -> list[Check]:
    return [Check(f"{name}[{i + 1}{j + 1}]", computed[i, j], expected[i, j], **kw)
            for i in range(3) for j in range(3)]


def _grid(grid: int, x_range: tuple[float, float]):
    x = np.linspace(x_range[0], x_range[1], grid)
    X1, X2 = np.meshgrid(x, x, indexing="ij")
    return X1.ravel(), X2.ravel()


def _scaled(M: SuperMatrix, c) -> SuperMatrix:
    return M.scale_left(c) if isinstance(c, GrassmannElement) else M.map(lambda e: e.scale(c), M.parity)


def _case_symtafel(r: CaseReport, m: SineGordonModel, phi: JetElement, f: Fields, beta: float):
    lam, a = m.lam, m.alpha
    spec = DeformationSpec(Sector.BOSONIC, SymTafel(beta))
    # the principal branch gives diag(1, -1, 0); the reference normal is its negative
    geo = surface_geometry(spec, m, phi, a, branch=-1)
    r.geometries["normal"] = geo
    r.notes.append("normal orientation: square-root branch -1 (principal branch gives the opposite normal)")
    U1 = m.potentials(phi)[0].value()
    P = f.matrix([[0, 0, -1j], [0, 0, 1j], [-1, 1, 0]])
    r.add(*_matrix_checks("A1", geo.A1, _scaled(U1, -beta / (2 * lam))))
    r.add(*_matrix_checks("A2", geo.A2, _scaled(P, beta / (2 * math.sqrt(lam)))))
    g11, g12, g21, g22 = geo.g
    r.add(Check("g11", g11, f.scalar(-1j * beta**2 / (8 * lam**3))),
          Check("g12", g12, f.cos.scale(-1j * beta**2 / (4 * lam**2))),
          Check("g21", g21, f.cos.scale(1j * beta**2 / (4 * lam**2)), note="antisymmetry g21 = -g12"),
          Check("g22", g22, f.scalar(1j * beta**2 / (2 * lam))))
    det = g11 * g22 + g12 * g12
    s2 = f.sin * f.sin
    r.add(Check("det_g", det, s2.scale(beta**2 / (16 * lam)), asserted=False,
                note="printed determinant; inconsistent with the printed g_ij"),
          Check("det_g", det, s2.scale(beta**4 / (16 * lam**4)), provenance="derived",
                note="determinant implied by the printed g_ij"))
    r.add(*_matrix_checks("N", geo.N, f.matrix([[-1, 0, 0], [0, 1, 0], [0, 0, 0]])))
    b11, b12, b21, b22 = geo.b
    cot = f.cos * inverse(f.sin)
    csc2 = inverse(s2)
    r.add(Check("b11", b11, f.zero()),
          Check("b12", b12, f.sin.scale(beta / (2 * lam))),
          Check("b21", b21, f.sin.scale(-beta / (2 * lam)), note="antisymmetry b21 = -b12"),
          Check("b22", b22, f.zero()),
          Check("K", geo.K, f.scalar(4 * lam**2 / beta**2)),
          Check("H", geo.H, cot.scale(-2j * lam / beta)),
          Check("H2-K", geo.H * geo.H - geo.K, csc2.scale(-4 * lam**2 / beta**2)))
    r.residuals.update({f"{k}": v for k, v in geo.residuals.items()})


def _case_bosonic_gauge(r: CaseReport, m: SineGordonModel, phi: JetElement, f: Fields):
    lam, a = m.lam, m.alpha
    U1, U2 = m.potentials(phi)
    D2 = D(2, phi)
    S = U2.scale_right(D2).with_parity(Parity.EVEN)
    spec = DeformationSpec(Sector.BOSONIC, Gauge(S))
    E = f.matrix([[1, 0, 0], [0, 1, 0], [0, 0, -1]], Parity.EVEN)
    probe = surface_geometry(spec, m, phi, a)
    if probe.N is None:
        r.notes.append("tangent bracket is null (zero-body self-product); using the printed normal E")
    geo = surface_geometry(spec, m, phi, a, inject_normal=E)
    r.geometries["E"] = geo
    sl = math.sqrt(lam)
    c, s, D1, d2 = f.cos, f.sin, f.D1, f.D2
    cD = (c * d2)
    A1 = f.matrix([[cD.scale(-1j), (f.ep * d2).scale(1j), s.scale(-sl)],
                   [(f.em * d2).scale(1j), cD.scale(-1j), s.scale(sl)],
                   [s.scale(-1j * sl), s.scale(1j * sl), cD.scale(-2j)]])
    A2 = _scaled(f.matrix([[0, 0, -1j], [0, 0, 1j], [1, -1, 0]]), f.d2.scale(-1j * sl))
    r.add(*_matrix_checks("A1", geo.A1, A1, asserted=False))
    r.add(*_matrix_checks("A2", geo.A2, A2, asserted=False))
    g11, g12, g21, g22 = geo.g
    r.add(Check("g11", g11, (s * s).scale(2j * lam)),
          Check("g12", g12, f.zero()),
          Check("g22", g22, (f.d2 * f.d2).scale(2j * lam)))
    r.add(Check("<N,N>", killing(E, E, a), f.scalar(1.0), asserted=False, note="printed normal E is not unit"))
    b11, b12, b21, b22 = geo.b
    r.add(Check("b11", b11, (s * ((D1 * d2).scale(1j) + c)).scale(2.0), asserted=False),
          Check("b12", b12, (c * f.d2).scale(-2.0)),
          Check("b21", b21, (c * f.d2).scale(2.0), note="antisymmetry b21 = -b12"),
          Check("b22", b22, f.zero()))
    inv_s = inverse(s)
    K_exp = (c * c * inverse(s * s)).scale(-1.0 / lam**2)
    r.add(Check("K", geo.K, K_exp))
    H_printed = ((d2 * D1).scale(1j) - c) * inv_s.scale(1.0 / (2 * lam))
    H_swapped = ((D1 * d2).scale(1j) - c) * inv_s.scale(1.0 / (2 * lam))
    H_from_b = ((D1 * d2) - c.scale(1j)) * inv_s.scale(1.0 / (2 * lam))
    r.add(Check("H", geo.H, H_printed, asserted=False, note="printed ordering D2phi D1phi"),
          Check("H", geo.H, H_swapped, asserted=False, note="ordering D1phi D2phi as in b11"),
          Check("H", geo.H, H_from_b, provenance="derived", asserted=False,
                note="b11 / (2 g11) from the printed b11, g11"))
    for label, H in (("computed H", geo.H), ("printed H", H_printed), ("swapped H", H_swapped)):
        for branch in (1, -1):
            res = weingarten_residual("bosonic-gauge", geo.K, H, branch)
            r.add(Check(f"weingarten[{label}, sqrtK branch {branch:+d}]", res, None))
    r.residuals.update(geo.residuals)


def _case_bosonic_symmetry(r: CaseReport, m: SineGordonModel, phi: JetElement, f: Fields):
    lam, a = m.lam, m.alpha
    spec = DeformationSpec(Sector.BOSONIC, Symmetry(translation(1)))
    geo = surface_geometry(spec, m, phi, a, inject_normal=SuperMatrix.E(2, 1, phi.n))
    r.geometries["E"] = geo
    k = 1.0 / (2.0 * math.sqrt(lam))
    A1 = _scaled(f.matrix([[0, 0, f.ep.scale(-1)], [0, 0, f.em.scale(-1)],
                           [f.em.scale(1j), f.ep.scale(1j), 0]]), f.d1.scale(k))
    A2 = _scaled(f.matrix([[1, 0, 0], [0, -1, 0], [0, 0, 0]]), f.d1D2.scale(1j))
    r.add(*_matrix_checks("A1", geo.A1, A1))
    r.add(*_matrix_checks("A2", geo.A2, A2))
    g11, g12, g21, g22 = geo.g
    r.add(Check("g11", g11, (f.d1 * f.d1).scale(-1j / (2 * lam))),
          Check("g12", g12, f.zero(), provenance="zero"),
          Check("g22", g22, f.zero(), provenance="exact"))
    b11, b12, b21, b22 = geo.b
    r.add(Check("b11[N=E]", b11, f.zero(), provenance="zero"),
          Check("b12[N=E]", b12, f.zero(), provenance="zero"),
          Check("b22[N=E]", b22, (f.d1D2 * f.D2).scale(2.0),
                note="2 (pr omega D2phi) D2phi; odd factors, so its square-like terms cancel"))
    P = f.matrix([[0, 0, f.ep.scale(-1)], [0, 0, f.em], [f.em.scale(-1j), f.ep.scale(1j), 0]], Parity.ODD)
    Niso = _scaled(P, (f.d1 * f.d1).scale(-1j / (2 * lam))).with_parity(Parity.ODD)
    iso = surface_geometry(spec, m, phi, a, inject_normal=Niso)
    r.geometries["isotropic"] = iso
    b11, b12, b21, b22 = iso.b
    root = np.sqrt(2j * lam)
    rescaled = surface_geometry(spec, m, phi, a, inject_normal=_scaled(P, 1 / np.sqrt(2j)).with_parity(Parity.ODD))
    r.add(Check("b11[N=isotropic/sqrt(2i)]", rescaled.b[0], (f.d1 * f.D1).scale(-1.0 / root),
                provenance="derived", asserted=False,
                note="the printed b11 follows if the isotropic normal is scaled by 1/sqrt(2i)"))
    r.add(Check("b11[N=isotropic]", b11, (f.d1 * f.D1).scale(-1.0 / root)),
          Check("b12[N=isotropic]", b12, f.d1D2.scale(math.sqrt(2) / np.sqrt(1j * lam) / 2),
                note="half the printed d1 d2 coefficient"),
          Check("b22[N=isotropic]", b22, None))
    for name, geo_ in (("E", geo), ("isotropic", iso)):
        r.notes.append(f"normal {name}: {'; '.join(geo_.notes) or 'curvatures computed'}")
    r.add(Check("K", iso.K if iso.K is not None else f.zero(), inverse(f.d1 * f.d1).scale(-1.0),
                asserted=False, note="printed value; metric is degenerate, not derivable from the definitions"),
          Check("H", iso.H if iso.H is not None else f.zero(), None, asserted=False,
                note="printed value not derivable from the definitions"))
    r.residuals.update(geo.residuals)


def _case_fermionic_gauge(r: CaseReport, m: SineGordonModel, phi: JetElement, f: Fields):
    lam, a = m.lam, m.alpha
    U1, U2 = m.potentials(phi)
    D2 = D(2, phi)
    sl = math.sqrt(lam)
    one = D2.constant_like(1.0 + 0j)
    z = D2.zero_like()
    S = SuperMatrix([[D2.scale(-1j), z, one.scale(1j * sl)],
                     [z, D2.scale(1j), one.scale(-1j * sl)],
                     [one.scale(-sl), one.scale(sl), z]], 2, 1).check_parity(Parity.ODD)
    spec = DeformationSpec(Sector.FERMIONIC, Gauge(S))
    geo = surface_geometry(spec, m, phi, a)
    r.geometries["normal"] = geo
    c, s, d2 = f.cos, f.sin, f.D2
    q = 1.0 / (2 * sl)
    A1 = f.matrix([[f.em.scale(-1j), f.ep.scale(-1j), (f.ep * d2).scale(q)],
                   [f.em.scale(-1j), f.ep.scale(-1j), (f.em * d2).scale(q)],
                   [(f.em * d2).scale(1j * q), (f.ep * d2).scale(1j * q), c.scale(2j)]])
    A2 = f.matrix([[f.d2, 0, d2.scale(-2 * sl)], [0, f.d2.scale(-1), d2.scale(-2 * sl)], [0, 0, 0]])
    r.add(*_matrix_checks("A1", geo.A1, A1, asserted=False))
    r.add(*_matrix_checks("A2", geo.A2, A2, asserted=False))
    g11, g12, g21, g22 = geo.g
    r.add(Check("g11", g11, f.zero()),
          Check("g12", g12, (s * f.d2).scale(-1j)),
          Check("g22", g22, f.d2 * f.d2))
    inv_d = inverse(f.d2)
    N13 = (d2 * (f.em * inv_d).scale(-1j * sl) - d2 * f.ep.scale(1 / (8 * sl))).scale(2.0)
    N23 = (d2 * (f.ep * inv_d).scale(-1j * sl) + d2 * f.em.scale(1 / (8 * sl))).scale(2.0)
    N = f.matrix([[0, f.ep.scale(1j), N13], [f.em.scale(-1j), 0, N23],
                  [(f.em * d2).scale(-1j / (4 * sl)), (f.ep * d2).scale(1j / (4 * sl)), 0]])
    if geo.N is not None:
        r.add(*_matrix_checks("N", geo.N, N, sign_allowed=True, asserted=False))
    b11, b12, b21, b22 = geo.b if geo.b else (None,) * 4
    ratio = d2 * inv_d
    b11_exp = (f.D1.scale(-1j) - (d2 * c).scale(1j / (2 * lam)) + (ratio * s).scale(1j)
               + (ratio * s * cos(f.phi.scale(2.0))).scale(2j)
               + (ratio * sin(f.phi.scale(2.0)) * c).scale(3j))
    b12_exp = (d2 * (f.scalar(1.0) + cos(f.phi.scale(2.0)) + (s * s).scale(0.5))).scale(-1j)
    if b11 is not None:
        r.add(Check("b11", b11, b11_exp, asserted=False),
              Check("b12", b12, b12_exp, asserted=False),
              Check("b22", b22, f.zero(), provenance="zero"))
    if geo.K is not None:
        r.add(Check("K", geo.K, f.zero(), provenance="exact"))
        inv_s2 = inverse(s * s)
        r.add(Check("H", geo.H, b11 * inv_s2, asserted=False, note="printed H = b11 / sin^2"),
              Check("H", geo.H, (b11 * inv_s2).scale(0.5), provenance="derived", asserted=False,
                    note="mean-curvature formula with the printed g_ij gives b11 / (2 sin^2), a factor 2 apart"),
              Check("weingarten", weingarten_residual("fermionic-gauge", geo.K, geo.H), f.zero(),
                    provenance="zero", asserted=False, note="H^2 + alpha K with K = 0"))
    r.notes.extend(geo.notes)
    r.residuals.update(geo.residuals)


def _case_fermionic_symmetry(r: CaseReport, m: SineGordonModel, phi: JetElement, f: Fields, k: int):
    lam, a = m.lam, m.alpha
    spec = DeformationSpec(Sector.FERMIONIC, Symmetry(supersymmetry(k)))
    N1 = f.matrix([[1, 1, 0], [-1, 1, 0], [0, 0, 1]], Parity.EVEN)
    geo = surface_geometry(spec, m, phi, a, inject_normal=N1)
    r.geometries["N1"] = geo
    q = 1.0 / (2 * math.sqrt(lam))
    Jp, JD2 = f.J[k], f.JD2[k]
    A1 = _scaled(f.matrix([[0, 0, f.ep.scale(-1)], [0, 0, f.em.scale(-1)],
                           [f.em.scale(-1j), f.ep.scale(-1j), 0]]), Jp.scale(q))
    A2 = _scaled(f.matrix([[1, 0, 0], [0, -1, 0], [0, 0, 0]]), JD2.scale(1j))
    r.add(*_matrix_checks(f"A1[J{k}]", geo.A1, A1))
    r.add(*_matrix_checks(f"A2[J{k}]", geo.A2, A2))
    g11, g12, g21, g22 = geo.g
    iso = killing(apply_E(geo.A1), apply_E(geo.A1), a)
    r.add(Check(f"g11[J{k}]", g11, f.zero(), provenance="exact"),
          Check(f"g12[J{k}]", g12, f.zero(), provenance="zero"),
          Check(f"g22[J{k}]", g22, (JD2 * JD2).scale(-1.0)),
          Check(f"<EA1,EA1>[J{k}]", iso, f.zero(), provenance="exact"),
          Check(f"<N1,N1>[J{k}]", killing(N1, N1, a), f.scalar(1.0), asserted=False,
                note="printed normal is not unit"))
    b11, b12, b21, b22 = geo.b
    cos2 = cos(f.phi.scale(2.0))
    r.add(Check(f"b11[J{k},N1]", b11, (Jp * cos2).scale(1 / (2 * lam))),
          Check(f"b12[J{k},N1]", b12, f.zero()),
          Check(f"b22[J{k},N1]", b22, f.zero()))
    root = np.sqrt(2j * lam)
    N2 = _scaled(f.matrix([[0, 0, f.ep], [0, 0, f.em.scale(-1)], [f.em.scale(1j), f.ep.scale(-1j), 0]],
                          Parity.ODD), 1 / np.sqrt(2j)).with_parity(Parity.ODD)
    geo2 = surface_geometry(spec, m, phi, a, inject_normal=N2)
    r.geometries["N2"] = geo2
    b11, b12, b21, b22 = geo2.b
    r.add(Check(f"b11[J{k},N2]", b11, (f.D1 * Jp).scale(-1 / root)),
          Check(f"b12[J{k},N2]", b12, JD2.scale(-1j / root)),
          Check(f"b22[J{k},N2]", b22, f.zero()),
          Check(f"<N2,N2>[J{k}]", killing(N2, N2, a), f.zero(), provenance="zero",
                note="isotropic normal"))
    r.residuals.update(geo.residuals)


def weingarten_residual(case: str, K, H, branch: int = 1, alpha: float = 1.0):
    """Residual of the Weingarten relation claimed for a case.

    bosonic-gauge: ``H^2 - (i/2) sqrt(K) H + 2K`` with ``branch`` times the
    principal square root; fermionic-gauge: ``H^2 + alpha K``.
    """
    if case == "bosonic-gauge":
        # sqrt is only defined off a zero body; an exact zero has the root zero
        root = K if K.is_exact_zero() else sqrt(K).scale(float(branch))
        return H * H - (root * H).scale(0.5j) + K.scale(2.0)
    if case == "fermionic-gauge":
        return H * H + K.scale(alpha)
    raise ValueError(f"no Weingarten relation for case {case!r}")


def run_case(case: str, lam: float = 1.0, beta: float = 1.0, grid: int = 21,
             x_range: tuple[float, float] = (-5.0, 5.0),
             a: float = 1.0, dressing: bool | tuple[float, float] = False, jet_order: int = 3,
             tol: float = 1e-8, sign: int = ZCC_SIGN, n: int = DEFAULT_GENERATORS,
             ks: tuple[int, ...] = (1, 2), alpha: float = DEFAULT_ALPHA,
             precision: str = "extended") -> CaseReport:
    """Run one case study over a square grid and compare with its closed forms."""
    if case not in CASES:
        raise ValueError(f"unknown case {case!r}; expected one of {', '.join(CASES)}")
    if grid < 2:
        raise ValueError("grid needs at least 2 points per axis")
    if jet_order < 3:
        raise ValueError("the case studies need jet order >= 3")
    if not (np.all(np.isfinite(x_range)) and x_range[0] < x_range[1]):
        raise ValueError(f"invalid coordinate range {x_range}")
    x1, x2 = _grid(grid, x_range)
    sol = build_solution(a, dressing, sign, precision)
    phi = sol.jet(x1, x2, jet_order, n)
    model = SineGordonModel(lam, alpha, precision)
    f = Fields(phi)
    r = CaseReport(case, lam, beta, variant=case, x1=x1, x2=x2)
    r.notes.append(f"solution: kink a={a}, dressing=({sol.c1}, {sol.c2}), D2D1phi = {sign:+d} i sin(phi)")
    r.residuals["zcc"] = zcc_max(model, phi)
    if case == "symtafel":
        _case_symtafel(r, model, phi, f, beta)
    elif case == "bosonic-gauge":
        _case_bosonic_gauge(r, model, phi, f)
    elif case == "bosonic-symmetry":
        _case_bosonic_symmetry(r, model, phi, f)
    elif case == "fermionic-gauge":
        _case_fermionic_gauge(r, model, phi, f)
    else:
        for k in ks:
            _case_fermionic_symmetry(r, model, phi, f, k)
    r.residuals["determining"] = max(g.residuals["determining"] for g in r.geometries.values())
    for c in r.checks:
        c.evaluate(tol)
    return r


def euler_character(sol: SuperfieldSolution, half_width: float, quadrature: int = 64,
                    n: int = DEFAULT_GENERATORS) -> dict[str, complex]:
    """Euler-Poincare character over ``[-L, L]^2`` from the Berezin top component.

    The theta1 theta2 coefficient of ``D2 D1 phi`` is ``d1 d2 phi0``; its box
    integral is computed both by Gauss-Legendre quadrature and by the exact
    four-corner telescoping sum, each divided by ``2 pi``.
    """
    L = half_width
    nodes, weights = np.polynomial.legendre.leggauss(quadrature)
    X1, X2 = np.meshgrid(nodes * L, nodes * L, indexing="ij")
    W = np.outer(weights, weights) * L * L
    phi = sol.jet(X1.ravel(), X2.ravel(), 2, n)
    top = berezin_top(D(2, D(1, phi)))
    quad = complex(np.sum(np.asarray(top).reshape(X1.shape) * W))
    c = np.array([L, L, -L, -L]), np.array([L, -L, L, -L])
    p0 = sol.phi0(c[0], c[1], 0, n).value.body()
    corners = complex(p0[0] - p0[1] - p0[2] + p0[3])
    return {"quadrature": quad / (2 * np.pi), "corners": corners / (2 * np.pi)}


def lambda_sweep(case: str, lams, beta: float = 1.0, grid: int = 5,
                 x_range: tuple[float, float] = (-2.0, 2.0), a: float = 1.0) -> dict[str, float]:
    """Fit ``log|K|`` against ``log lambda`` at every grid point; report the exponent spread."""
    if len(lams) < 2:
        raise ValueError("a sweep needs at least two lambda values")
    if case not in ("symtafel", "bosonic-gauge"):
        raise ValueError("lambda sweeps are defined for symtafel and bosonic-gauge")
    logs = []
    for lam in lams:
        r = run_case(case, lam=lam, beta=beta, grid=grid, x_range=x_range, a=a)
        logs.append(np.abs(np.asarray(r.check("K").computed.body())).astype(float))
    K = np.array(logs)
    # points where K vanishes (cot phi = 0 on the kink centre line) carry no scaling information
    keep = np.all(K > 1e-12, axis=0)
    if not keep.any():
        raise ValueError("degenerate fit: K vanishes at every grid point")
    x = np.log(np.asarray(lams, float))
    if np.ptp(x) == 0:
        raise ValueError("degenerate fit: all lambda values equal")
    slopes = np.polyfit(x, np.log(K[:, keep]), 1)[0]
    return {"exponent": float(np.mean(slopes)), "spread": float(np.ptp(slopes))}
