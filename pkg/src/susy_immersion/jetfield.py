"""Superfields over (x1, x2, theta1, theta2) as Grassmann-valued jets.

A :class:`JetElement` stores the Grassmann value of a superfield and its
x-derivatives ``d1^i d2^j`` for ``i + j <= order``.  The odd coordinates
theta1, theta2 are ordinary Grassmann generators 1 and 2, so the covariant
derivatives only need the left generator derivative and a shift of jet slots.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from math import comb
from typing import Any, Callable, Iterator

import numpy as np

from .errors import CapacityError, GeneratorMismatch, JetOrderError
from .grassmann import GrassmannElement, Parity, _is_scalar
from .supermatrix import SuperMatrix, anticommutator, apply_E

THETA = (1, 2)

Slot = tuple[int, int]


def slots_upto(order: int) -> Iterator[Slot]:
    for total in range(order + 1):
        for i in range(total, -1, -1):
            yield (i, total - i)


class JetElement:
    __slots__ = ("slots", "order", "n")

    def __init__(self, slots: dict[Slot, GrassmannElement], order: int, n: int):
        if order < 0:
            raise JetOrderError("jet order exhausted")
        self.order = order
        self.n = n
        self.slots = {s: g for s, g in slots.items() if s[0] + s[1] <= order and not g.is_structurally_zero()}

    @classmethod
    def constant(cls, g: GrassmannElement, order: int) -> "JetElement":
        return cls({(0, 0): g}, order, g.n)

    @classmethod
    def from_derivatives(cls, derivs: dict[Slot, Any], order: int, n: int) -> "JetElement":
        """Scalar-valued jet from ``{(i, j): d1^i d2^j f}`` (complex or arrays)."""
        return cls({s: GrassmannElement.scalar(v, n) for s, v in derivs.items()}, order, n)

    # algebra protocol ----------------------------------------------------------
    @property
    def value(self) -> GrassmannElement:
        return self.slots.get((0, 0), GrassmannElement.zero(self.n))

    def slot(self, s: Slot) -> GrassmannElement:
        if s[0] + s[1] > self.order:
            raise JetOrderError(f"slot {s} beyond jet order {self.order}")
        return self.slots.get(s, GrassmannElement.zero(self.n))

    def body(self):
        return self.value.body()

    def soul(self) -> "JetElement":
        out = dict(self.slots)
        out[(0, 0)] = self.value.soul()
        return JetElement(out, self.order, self.n)

    def constant_like(self, c) -> "JetElement":
        return JetElement({(0, 0): GrassmannElement.scalar(c, self.n)}, self.order, self.n)

    def zero_like(self) -> "JetElement":
        return JetElement({}, self.order, self.n)

    def is_structurally_zero(self) -> bool:
        return not self.slots

    def is_exact_zero(self) -> bool:
        return all(g.is_exact_zero() for g in self.slots.values())

    def parity(self) -> Parity:
        ps = {g.parity() for g in self.slots.values() if not g.is_structurally_zero()}
        if not ps:
            return Parity.EVEN
        return ps.pop() if len(ps) == 1 else Parity.MIXED

    def is_even(self) -> bool:
        return all(g.is_even() for g in self.slots.values())

    def is_odd(self) -> bool:
        return all(g.is_odd() for g in self.slots.values())

    def max_abs(self) -> float:
        return max((g.max_abs() for g in self.slots.values()), default=0.0)

    def truncate(self, order: int) -> "JetElement":
        if order > self.order:
            raise JetOrderError(f"cannot raise jet order {self.order} to {order}")
        return JetElement(self.slots, order, self.n)

    def map_slots(self, fn: Callable[[GrassmannElement], GrassmannElement]) -> "JetElement":
        return JetElement({s: fn(g) for s, g in self.slots.items()}, self.order, self.n)

    # arithmetic -------------------------------------------------------------------
    def _coerce(self, other) -> "JetElement":
        if isinstance(other, JetElement):
            if other.n != self.n:
                raise GeneratorMismatch(f"generator sets differ: {self.n} vs {other.n}")
            return other
        if isinstance(other, GrassmannElement):
            return JetElement.constant(other, self.order)
        if _is_scalar(other):
            return self.constant_like(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        order = min(self.order, other.order)
        out = {s: g for s, g in self.slots.items() if s[0] + s[1] <= order}
        for s, g in other.slots.items():
            if s[0] + s[1] > order:
                continue
            out[s] = out[s] + g if s in out else g
        return JetElement(out, order, self.n)

    __radd__ = __add__

    def __neg__(self):
        return self.map_slots(lambda g: -g)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "JetElement":
        return self.map_slots(lambda g: g.scale(c))

    def __mul__(self, other):
        if _is_scalar(other):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return jet_mul(self, other)

    def __rmul__(self, other):
        if _is_scalar(other):
            return self.scale(other)
        if isinstance(other, GrassmannElement):
            return JetElement.constant(other, self.order) * self
        return NotImplemented

    def __repr__(self) -> str:
        body = ", ".join(f"{s}: {g!r}" for s, g in sorted(self.slots.items()))
        return f"JetElement(order={self.order}, {{{body}}})"

    # calculus -------------------------------------------------------------------------
    def dx(self, k: int) -> "JetElement":
        """Exact partial derivative in x_k; the jet order drops by one."""
        out = {}
        for (i, j), g in self.slots.items():
            if k == 1 and i > 0:
                out[(i - 1, j)] = g
            elif k == 2 and j > 0:
                out[(i, j - 1)] = g
        return JetElement(out, self.order - 1, self.n)

    def dtheta(self, j: int) -> "JetElement":
        return self.map_slots(lambda g: g.derivative(THETA[j - 1]))

    def theta_times(self, j: int) -> "JetElement":
        return self.map_slots(lambda g: g.left_mul_generator(THETA[j - 1]))


def jet_mul(a: JetElement, b: JetElement) -> JetElement:
    """Leibniz product: slot gamma is sum C(gamma, alpha) a_alpha b_(gamma - alpha)."""
    order = min(a.order, b.order)
    out: dict[Slot, GrassmannElement] = {}
    for s in slots_upto(order):
        acc = None
        for i in range(s[0] + 1):
            for j in range(s[1] + 1):
                fa = a.slots.get((i, j))
                if fa is None:
                    continue
                gb = b.slots.get((s[0] - i, s[1] - j))
                if gb is None:
                    continue
                t = fa * gb
                c = comb(s[0], i) * comb(s[1], j)
                if c != 1:
                    t = t.scale(float(c))
                acc = t if acc is None else acc + t
        if acc is not None:
            out[s] = acc
    return JetElement(out, order, a.n)


def jet_add(a: JetElement, b: JetElement) -> JetElement:
    return a + b


def jet_scale(c, a: JetElement) -> JetElement:
    return a.scale(c)


def jet_apply_analytic(f, a: JetElement) -> JetElement:
    # The combined soul (Grassmann soul plus x-slots) is nilpotent under
    # truncation, so the Taylor series of f composes exactly (Faa di Bruno).
    from .grassmann import apply_analytic

    return apply_analytic(f, a)


# covariant derivatives and supersymmetry generators ------------------------------------


def _entrywise(op: Callable, f):
    if isinstance(f, SuperMatrix):
        par = f.parity.flip() if f.parity is not None else None
        return f.map(op, par)
    return op(f)


def D(j: int, f):
    """``D_j = d/dtheta^j - i theta^j d/dx_j``, entrywise on supermatrices."""
    def op(e: JetElement) -> JetElement:
        if e.order < 1:
            raise JetOrderError("D needs jet order >= 1")
        return e.dtheta(j).truncate(e.order - 1) + e.dx(j).theta_times(j).scale(-1j)
    return _entrywise(op, f)


def J(k: int, f):
    """``J_k = d/dtheta^k + i theta^k d/dx_k``, the supersymmetry generators."""
    def op(e: JetElement) -> JetElement:
        if e.order < 1:
            raise JetOrderError("J needs jet order >= 1")
        return e.dtheta(k).truncate(e.order - 1) + e.dx(k).theta_times(k).scale(1j)
    return _entrywise(op, f)


def dx(k: int, f):
    if isinstance(f, SuperMatrix):
        return f.map(lambda e: e.dx(k), f.parity)
    return f.dx(k)


def zcc_residual(U1: SuperMatrix, U2: SuperMatrix) -> SuperMatrix:
    """``D1 U2 + D2 U1 - {E U1, E U2}`` evaluated entrywise."""
    return D(1, U2) + D(2, U1) - anticommutator(apply_E(U1), apply_E(U2))


# symmetry generators ---------------------------------------------------------------------


class SymmetryKind(enum.Enum):
    BOSONIC_TRANSLATION_X1 = "dx1"
    BOSONIC_TRANSLATION_X2 = "dx2"
    FERMIONIC_J1 = "J1"
    FERMIONIC_J2 = "J2"
    CUSTOM = "custom"


@dataclass(frozen=True)
class SymmetryGenerator:
    """A vector field acting on the superfield; ``image(phi)`` is its action on phi."""

    kind: SymmetryKind
    parity: Parity
    image: Callable[[JetElement], JetElement]

    @property
    def markers_needed(self) -> int:
        return 1 if self.parity is Parity.ODD else 2


def translation(k: int = 1) -> SymmetryGenerator:
    kind = SymmetryKind.BOSONIC_TRANSLATION_X1 if k == 1 else SymmetryKind.BOSONIC_TRANSLATION_X2
    return SymmetryGenerator(kind, Parity.EVEN, lambda phi: phi.dx(k))


def supersymmetry(k: int) -> SymmetryGenerator:
    kind = SymmetryKind.FERMIONIC_J1 if k == 1 else SymmetryKind.FERMIONIC_J2
    return SymmetryGenerator(kind, Parity.ODD, lambda phi: J(k, phi))


def used_generators(*objs) -> int:
    mask = 0
    for obj in objs:
        if isinstance(obj, SuperMatrix):
            for r in obj.rows:
                for e in r:
                    mask |= used_generators(e)
        elif isinstance(obj, JetElement):
            for g in obj.slots.values():
                mask |= used_generators(g)
        elif isinstance(obj, GrassmannElement):
            for k in obj.terms:
                mask |= k
    return mask


def allocate_markers(n: int, used_mask: int, count: int) -> tuple[int, ...]:
    """Pick ``count`` generator indices that no input depends on."""
    free = [g for g in range(1, n + 1) if not used_mask >> (g - 1) & 1 and g not in THETA]
    if len(free) < count:
        raise CapacityError(f"need {count} fresh generators, only {len(free)} of {n} free")
    return tuple(free[:count])


def _extract(obj, markers: tuple[int, ...], parity: Parity):
    if isinstance(obj, SuperMatrix):
        par = obj.parity + parity if obj.parity is not None else None
        return obj.map(lambda e: _extract(e, markers, parity), par)
    if isinstance(obj, tuple):
        return tuple(_extract(o, markers, parity) for o in obj)
    out = obj
    for g in markers:
        if isinstance(out, JetElement):
            out = out.map_slots(lambda x, g=g: x.derivative(g))
        else:
            out = out.derivative(g)
    return out


def marker_element(markers: tuple[int, ...], n: int) -> GrassmannElement:
    eta = GrassmannElement.scalar(1.0 + 0j, n)
    for g in markers:
        eta = eta * GrassmannElement.generator(g, n)
    return eta


def symmetry_apply(omega: SymmetryGenerator, build: Callable[[JetElement], Any], phi: JetElement,
                   markers: tuple[int, ...] | None = None):
    """Exact prolonged action of ``omega`` on ``build(phi)``.

    phi is perturbed to ``phi + eta * omega(phi)`` with a nilpotent marker eta
    (one fresh odd generator for fermionic omega, a product of two for bosonic
    omega); since eta^2 = 0 the eta-linear part of ``build`` is exactly the
    prolongation of omega applied to it.
    """
    if markers is None:
        markers = allocate_markers(phi.n, used_generators(phi), omega.markers_needed)
    if len(markers) != omega.markers_needed:
        raise CapacityError(f"{omega.kind.value} needs {omega.markers_needed} marker generators")
    if used_generators(phi) & sum(1 << (g - 1) for g in markers):
        raise CapacityError("marker generators must not occur in the superfield")
    image = omega.image(phi)
    eta = marker_element(markers, phi.n)
    perturbed = phi.truncate(image.order) + JetElement.constant(eta, image.order) * image
    return _extract(build(perturbed), markers, omega.parity)


# superfields ---------------------------------------------------------------------------------


def assemble_superfield(phi0: JetElement, phi1: JetElement, phi2: JetElement,
                        phi12: JetElement) -> JetElement:
    """``phi0 + theta1 phi1 + theta2 phi2 + theta1 theta2 phi12``."""
    return phi0 + phi1.theta_times(1) + phi2.theta_times(2) + phi12.theta_times(2).theta_times(1)


def berezin_top(f: JetElement | GrassmannElement):
    """Coefficient of theta1 theta2 in the value, the Berezin integral over theta."""
    g = f.value if isinstance(f, JetElement) else f
    return g.coefficient((1 << (THETA[0] - 1)) | (1 << (THETA[1] - 1)))


class SuperfieldSolution:
    """Samples the jet of a superfield solution at grid points.

    Subclasses implement :meth:`components`, returning the jets of
    ``phi0, phi1, phi2, phi12``; ``phi1`` and ``phi2`` are odd-valued.
    """

    def components(self, x1, x2, order: int, n: int) -> tuple[JetElement, JetElement, JetElement, JetElement]:
        raise NotImplementedError

    def jet(self, x1, x2, order: int, n: int) -> JetElement:
        return assemble_superfield(*self.components(np.asarray(x1, float), np.asarray(x2, float), order, n))


def finite_difference_jet(f: Callable[[np.ndarray, np.ndarray], Any], x1, x2, order: int = 2,
                          h: float = 1e-5) -> dict[Slot, Any]:
    """Central-difference estimates of ``d1^i d2^j f`` for cross-validation only."""
    x1 = np.asarray(x1, float)
    x2 = np.asarray(x2, float)
    out = {(0, 0): f(x1, x2)}
    if order >= 1:
        out[(1, 0)] = (f(x1 + h, x2) - f(x1 - h, x2)) / (2 * h)
        out[(0, 1)] = (f(x1, x2 + h) - f(x1, x2 - h)) / (2 * h)
    if order >= 2:
        out[(2, 0)] = (f(x1 + h, x2) - 2 * f(x1, x2) + f(x1 - h, x2)) / h**2
        out[(0, 2)] = (f(x1, x2 + h) - 2 * f(x1, x2) + f(x1, x2 - h)) / h**2
        out[(1, 1)] = (f(x1 + h, x2 + h) - f(x1 + h, x2 - h) - f(x1 - h, x2 + h)
                       + f(x1 - h, x2 - h)) / (4 * h * h)
    return out
