"""Complex Grassmann algebra over a finite set of odd generators.

Elements are sparse maps ``bitmask -> coefficient``.  Generator ``xi_k`` (1-based)
is bit ``k-1``; a bitmask names the monomial with its generators in ascending
index order.  Coefficients are complex scalars or numpy arrays of a common
batch shape, which lets one element carry a whole grid of sample points.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Callable, Iterable, Union

import numpy as np

from .errors import GeneratorMismatch, NonInvertible, ParityError

Coefficient = Union[complex, np.ndarray]

DEFAULT_MAX_GENERATORS = 8
DEFAULT_ATOL = 1e-12


class Parity(enum.Enum):
    EVEN = 0
    ODD = 1
    MIXED = 2

    def flip(self) -> "Parity":
        if self is Parity.MIXED:
            return self
        return Parity.ODD if self is Parity.EVEN else Parity.EVEN

    def __add__(self, other: "Parity") -> "Parity":
        if Parity.MIXED in (self, other):
            return Parity.MIXED
        return Parity((self.value + other.value) % 2)


@dataclass(frozen=True)
class GeneratorSet:
    count: int
    max_count: int = DEFAULT_MAX_GENERATORS

    def __post_init__(self):
        if self.count < 0:
            raise ValueError("generator count must be non-negative")
        if self.count > self.max_count:
            raise ValueError(f"{self.count} generators exceed the budget of {self.max_count}")

    def generator(self, k: int) -> "GrassmannElement":
        return GrassmannElement.generator(k, self.count)

    def scalar(self, c: Coefficient) -> "GrassmannElement":
        return GrassmannElement.scalar(c, self.count)


@lru_cache(maxsize=None)
def monomial_sign(a: int, b: int) -> int:
    """Sign of reordering the concatenation ``a b`` into canonical order.

    Counts the transpositions needed: every generator of ``b`` must move past
    each generator of ``a`` with a larger index.
    """
    if a & b:
        return 0
    swaps = 0
    bb = b
    while bb:
        low = bb & -bb
        swaps += bin(a & ~((low << 1) - 1)).count("1")
        bb ^= low
    return -1 if swaps & 1 else 1


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def monomial_id(mask: int) -> str:
    """Sorted generator indices joined by '.', the body is ''."""
    return ".".join(str(k + 1) for k in range(mask.bit_length()) if mask >> k & 1)


def monomial_from_id(ident: str) -> int:
    if not ident:
        return 0
    mask = 0
    for part in ident.split("."):
        mask |= 1 << (int(part) - 1)
    return mask


def _is_scalar(x) -> bool:
    return isinstance(x, (int, float, complex, np.number)) or (
        isinstance(x, np.ndarray) and x.dtype != object
    )


class GrassmannElement:
    __slots__ = ("terms", "n")

    def __init__(self, terms: dict[int, Coefficient] | None = None, n: int = 0):
        self.n = n
        self.terms = dict(terms) if terms else {}
        limit = 1 << n
        for k in self.terms:
            if k >= limit:
                raise GeneratorMismatch(f"monomial {monomial_id(k)} uses generators beyond {n}")

    # construction -------------------------------------------------------
    @classmethod
    def scalar(cls, c: Coefficient, n: int) -> "GrassmannElement":
        return cls({0: c}, n)

    @classmethod
    def zero(cls, n: int) -> "GrassmannElement":
        return cls({}, n)

    @classmethod
    def generator(cls, k: int, n: int) -> "GrassmannElement":
        if not 1 <= k <= n:
            raise GeneratorMismatch(f"generator {k} not in 1..{n}")
        return cls({1 << (k - 1): 1.0 + 0j}, n)

    @classmethod
    def from_monomials(cls, items: Iterable[tuple[Iterable[int], Coefficient]], n: int):
        """Build from ``(generator indices, coeff)`` pairs in any index order."""
        out = cls.zero(n)
        for gens, c in items:
            term = cls.scalar(c, n)
            for g in gens:
                term = term * cls.generator(g, n)
            out = out + term
        return out

    def constant_like(self, c: Coefficient) -> "GrassmannElement":
        return GrassmannElement.scalar(c, self.n)

    def zero_like(self) -> "GrassmannElement":
        return GrassmannElement({}, self.n)

    # inspection -----------------------------------------------------------
    def body(self) -> Coefficient:
        return self.terms.get(0, 0j)

    def soul(self) -> "GrassmannElement":
        return GrassmannElement({k: v for k, v in self.terms.items() if k}, self.n)

    def coefficient(self, mask: int) -> Coefficient:
        return self.terms.get(mask, 0j)

    def parity(self) -> Parity:
        """Parity from the monomial keys; the empty element counts as even."""
        kinds = {popcount(k) & 1 for k in self.terms}
        if len(kinds) > 1:
            return Parity.MIXED
        return Parity.ODD if kinds == {1} else Parity.EVEN

    def is_even(self) -> bool:
        return all(popcount(k) % 2 == 0 for k in self.terms)

    def is_odd(self) -> bool:
        return all(popcount(k) % 2 == 1 for k in self.terms)

    def is_structurally_zero(self) -> bool:
        return not self.terms

    def is_exact_zero(self) -> bool:
        return all(np.all(np.asarray(c) == 0) for c in self.terms.values())

    def max_abs(self) -> float:
        if not self.terms:
            return 0.0
        return float(max(np.max(np.abs(c)) for c in self.terms.values()))

    def allclose(self, other, atol: float = DEFAULT_ATOL) -> bool:
        return (self - other).max_abs() <= atol

    def prune(self, threshold: float = 0.0) -> "GrassmannElement":
        return GrassmannElement(
            {k: c for k, c in self.terms.items() if np.max(np.abs(c)) > threshold}, self.n
        )

    def graded_part(self, parity: "Parity") -> "GrassmannElement":
        """Keep only the monomials of the given degree."""
        want = parity.value
        return GrassmannElement({k: c for k, c in self.terms.items() if popcount(k) % 2 == want}, self.n)

    # arithmetic -------------------------------------------------------------
    def _coerce(self, other) -> "GrassmannElement":
        if isinstance(other, GrassmannElement):
            if other.n != self.n:
                raise GeneratorMismatch(f"generator sets differ: {self.n} vs {other.n}")
            return other
        if _is_scalar(other):
            return GrassmannElement.scalar(other, self.n)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return GrassmannElement(out, self.n)

    __radd__ = __add__

    def __neg__(self):
        return GrassmannElement({k: -c for k, c in self.terms.items()}, self.n)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: Coefficient) -> "GrassmannElement":
        return GrassmannElement({k: c * v for k, v in self.terms.items()}, self.n)

    def __mul__(self, other):
        if _is_scalar(other):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return _product(self, other)

    def __rmul__(self, other):
        if _is_scalar(other):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other):
        if _is_scalar(other):
            return self.scale(1.0 / np.asarray(other) if isinstance(other, np.ndarray) else 1.0 / other)
        return self * inverse(other)

    def __pow__(self, k: int):
        if k < 0:
            return inverse(self) ** (-k)
        out = self.constant_like(1.0 + 0j)
        for _ in range(k):
            out = out * self
        return out

    # odd-variable calculus ----------------------------------------------------
    def derivative(self, g: int) -> "GrassmannElement":
        """Left derivative with respect to generator ``g``."""
        bit = 1 << (g - 1)
        lower = bit - 1
        out = {}
        for k, c in self.terms.items():
            if k & bit:
                out[k ^ bit] = -c if popcount(k & lower) & 1 else c
        return GrassmannElement(out, self.n)

    def left_mul_generator(self, g: int) -> "GrassmannElement":
        bit = 1 << (g - 1)
        lower = bit - 1
        out = {}
        for k, c in self.terms.items():
            if not k & bit:
                out[k | bit] = -c if popcount(k & lower) & 1 else c
        return GrassmannElement(out, self.n)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms, key=lambda m: (popcount(m), m)):
            c = self.terms[k]
            name = "".join(f"ξ{i}" for i in monomial_id(k).split(".")) if k else ""
            if isinstance(c, np.ndarray) and c.ndim:
                cs = f"<array{c.shape}>"
            else:
                cs = f"({complex(c):g})"
            parts.append(f"{cs} {name}".rstrip())
        return " + ".join(parts)


def _product(a: GrassmannElement, b: GrassmannElement) -> GrassmannElement:
    # Contributions are grouped by unordered monomial pair and summed in a
    # canonical order, so x*y == -(y*x) bit-for-bit for odd x, y and odd
    # squares cancel to exact zeros.
    groups: dict[tuple[int, int], list] = {}
    for ka, ca in a.terms.items():
        for kb, cb in b.terms.items():
            if ka & kb:
                continue
            v = ca * cb
            if monomial_sign(ka, kb) < 0:
                v = -v
            if ka <= kb:
                key, slot = (ka, kb), 0
            else:
                key, slot = (kb, ka), 1
            g = groups.get(key)
            if g is None:
                g = groups[key] = [None, None]
            g[slot] = v
    out: dict[int, Coefficient] = {}
    for (lo, hi) in sorted(groups):
        v0, v1 = groups[(lo, hi)]
        v = v0 if v1 is None else (v1 if v0 is None else v0 + v1)
        k = lo | hi
        out[k] = out[k] + v if k in out else v
    return GrassmannElement(out, a.n)


# analytic functions -------------------------------------------------------------


@dataclass(frozen=True)
class Analytic:
    """A scalar function known through its derivatives ``derivative(k, x)``."""

    name: str
    derivative: Callable[[int, Any], Any]
    domain_check: Callable[[Any], None] | None = None

    def __call__(self, x):
        return apply_analytic(self, x)


def _exp_d(k, x):
    return np.exp(x)


def _sin_d(k, x):
    return (np.sin, np.cos, lambda t: -np.sin(t), lambda t: -np.cos(t))[k % 4](x)


def _cos_d(k, x):
    return (np.cos, lambda t: -np.sin(t), lambda t: -np.cos(t), np.sin)[k % 4](x)


def _complex(x):
    # promote to complex without dropping extended precision
    return np.asarray(x) + 0j


def _sqrt_d(k, x):
    x = _complex(x)
    c = 1.0
    for j in range(k):
        c *= 0.5 - j
    return c * np.sqrt(x) / x**k


def _recip_d(k, x):
    x = _complex(x)
    return (-1) ** k * math.factorial(k) / x ** (k + 1)


def _nonzero_body(x):
    if np.any(np.asarray(x) == 0):
        raise NonInvertible("body is zero")


exp = Analytic("exp", _exp_d)
sin = Analytic("sin", _sin_d)
cos = Analytic("cos", _cos_d)
sqrt = Analytic("sqrt", _sqrt_d, _nonzero_body)
reciprocal = Analytic("reciprocal", _recip_d, _nonzero_body)


def _squeeze(c):
    c = _complex(c)
    if c.ndim:
        return c
    return complex(c) if c.dtype == np.complex128 else c[()]


def apply_analytic(f: Analytic, a):
    """Evaluate ``f`` on an even element by its nilpotent Taylor expansion.

    Works for any element type exposing ``body``, ``soul``, ``scale``,
    ``constant_like`` and ``is_structurally_zero`` (Grassmann elements and jets).
    The series stops once a power of the soul vanishes structurally.
    """
    if a.parity() is not Parity.EVEN:
        raise ParityError(f"{f.name} needs an even argument, got {a.parity().name}")
    b = a.body()
    if f.domain_check is not None:
        f.domain_check(b)
    soul = a.soul()
    out = a.constant_like(_squeeze(f.derivative(0, b)))
    power = None
    k = 0
    while True:
        k += 1
        power = soul if power is None else power * soul
        if power.is_structurally_zero():
            break
        out = out + power.scale(_squeeze(f.derivative(k, b)) / math.factorial(k))
    return out


def inverse(a: GrassmannElement) -> GrassmannElement:
    # body first: an odd element has no body, so it is reported as non-invertible
    if np.any(np.asarray(a.body()) == 0):
        raise NonInvertible("element has zero body")
    p = a.parity()
    if p is not Parity.EVEN:
        raise ParityError(f"only even elements are invertible here, got {p.name}")
    return apply_analytic(reciprocal, a)


def product(a: GrassmannElement, b: GrassmannElement) -> GrassmannElement:
    return a * b


def add(a: GrassmannElement, b: GrassmannElement) -> GrassmannElement:
    return a + b


def scale(c: Coefficient, a: GrassmannElement) -> GrassmannElement:
    return a.scale(c)


def parity_of(a: GrassmannElement) -> Parity:
    return a.parity()


def body(a: GrassmannElement) -> Coefficient:
    return a.body()


def soul(a: GrassmannElement) -> GrassmannElement:
    return a.soul()
