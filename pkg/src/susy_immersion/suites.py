"""Self-contained property suites behind ``susy-immersion check``.

Each suite returns a list of :class:`SuiteResult`.  The oracles here do not
reuse the code they check: basis signs come from counting inversions, and
analytic functions are checked against a Taylor series evaluated on the
left-regular matrix representation of the algebra.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grassmann import (GrassmannElement, Parity, apply_analytic, cos, exp, popcount, reciprocal,
                        sin, sqrt)
from .jetfield import D, J, JetElement, slots_upto
from .supermatrix import DEFAULT_ALPHA, SuperMatrix, inverse_even, killing, super_bracket

SUITES = ("algebra", "killing", "operators")


@dataclass
class SuiteResult:
    name: str
    passed: bool
    residual: float
    detail: str = ""

    def line(self) -> str:
        tag = "pass" if self.passed else "FAIL"
        extra = f" ({self.detail})" if self.detail else ""
        return f"{self.name}: {tag} residual={self.residual:.3g}{extra}"


# oracles ---------------------------------------------------------------------------------


def inversion_sign(left: tuple[int, ...], right: tuple[int, ...]) -> int:
    """Sign of sorting the concatenation of two increasing index lists, 0 on a repeat."""
    seq = list(left) + list(right)
    if len(set(seq)) < len(seq):
        return 0
    swaps = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return -1 if swaps % 2 else 1


def _indices(mask: int) -> tuple[int, ...]:
    return tuple(k + 1 for k in range(mask.bit_length()) if mask >> k & 1)


def left_regular(a: GrassmannElement, m: int) -> np.ndarray:
    """Matrix of ``x -> a x`` on the 2^m monomial basis, built from the sign oracle."""
    size = 1 << m
    out = np.zeros((size, size), dtype=complex)
    for u, c in a.terms.items():
        for v in range(size):
            s = inversion_sign(_indices(u), _indices(v))
            if s:
                out[u | v, v] += s * complex(c)
    return out


_TAYLOR = {
    "exp": lambda k, b: np.exp(b),
    "sin": lambda k, b: [np.sin(b), np.cos(b), -np.sin(b), -np.cos(b)][k % 4],
    "cos": lambda k, b: [np.cos(b), -np.sin(b), -np.cos(b), np.sin(b)][k % 4],
    "sqrt": lambda k, b: math.prod(0.5 - i for i in range(k)) * b ** (0.5 - k),
    "reciprocal": lambda k, b: (-1) ** k * math.factorial(k) / b ** (k + 1),
}
_FUNCS = {"exp": exp, "sin": sin, "cos": cos, "sqrt": sqrt, "reciprocal": reciprocal}


def taylor_oracle(name: str, a: GrassmannElement, m: int) -> np.ndarray:
    """Coefficient vector of ``f(a)`` from the nilpotent Taylor series on matrices."""
    L = left_regular(a, m)
    b = complex(a.body())
    N = L - b * np.eye(L.shape[0])
    acc = np.zeros_like(L)
    power = np.eye(L.shape[0], dtype=complex)
    for k in range(m + 1):
        acc += _TAYLOR[name](k, b) / math.factorial(k) * power
        power = power @ N
    return acc[:, 0]


def _vector(a: GrassmannElement, m: int) -> np.ndarray:
    out = np.zeros(1 << m, dtype=complex)
    for k, c in a.terms.items():
        out[k] = complex(c)
    return out


def random_element(rng: np.random.Generator, n: int, parity: int | None = None,
                   body: complex | None = None) -> GrassmannElement:
    terms = {}
    for mask in range(1 << n):
        if parity is not None and popcount(mask) % 2 != parity:
            continue
        terms[mask] = complex(rng.normal(), rng.normal())
    if body is not None:
        terms[0] = body
    return GrassmannElement(terms, n)


def random_supermatrix(rng: np.random.Generator, n: int, degree: int, p: int = 2, q: int = 1) -> SuperMatrix:
    size = p + q
    rows = [[random_element(rng, n, (degree + ((i < p) != (j < p))) % 2) for j in range(size)]
            for i in range(size)]
    return SuperMatrix(rows, p, q).check_parity(Parity(degree))


# suites -----------------------------------------------------------------------------------


def algebra_suite(m: int = 4, trials: int = 20, seed: int = 0) -> list[SuiteResult]:
    worst = 0
    for u in range(1 << m):
        for v in range(1 << m):
            got = GrassmannElement({u: 1.0}, m) * GrassmannElement({v: 1.0}, m)
            s = inversion_sign(_indices(u), _indices(v))
            want = {u | v: s} if s else {}
            diff = {k: complex(got.terms.get(k, 0)) - want.get(k, 0) for k in set(got.terms) | set(want)}
            worst = max([worst] + [abs(d) for d in diff.values()])
    out = [SuiteResult("products", worst == 0, float(worst), f"exhaustive m={m}")]

    rng = np.random.default_rng(seed)
    rel = 0.0
    for _ in range(trials):
        a = random_element(rng, m, Parity.EVEN.value, body=complex(rng.uniform(0.5, 2.0), rng.normal()))
        for name, f in _FUNCS.items():
            got = _vector(apply_analytic(f, a), m)
            want = taylor_oracle(name, a, m)
            rel = max(rel, float(np.max(np.abs(got - want)) / max(1.0, np.max(np.abs(want)))))
    out.append(SuiteResult("analytic", rel < 1e-12, rel, f"{trials} random even elements, Taylor oracle"))

    inv = 0.0
    for _ in range(trials):
        a = random_element(rng, m, Parity.EVEN.value, body=complex(1.0 + rng.uniform(), rng.normal()))
        one = a * apply_analytic(reciprocal, a)
        inv = max(inv, (one - 1.0).max_abs())
    out.append(SuiteResult("inverse", inv < 1e-12, inv))
    return out


def killing_suite(alpha: float = DEFAULT_ALPHA, trials: int = 100, n: int = 4,
                  seed: int = 0) -> list[SuiteResult]:
    rng = np.random.default_rng(seed)
    res = {k: 0.0 for k in ("left linearity", "right linearity", "inner permutation",
                            "outer permutation", "conjugation", "supercommutator")}

    def note(key, a, b):
        scale = max(1.0, a.max_abs(), b.max_abs())
        res[key] = max(res[key], (a - b).max_abs() / scale)

    k = lambda M, N: killing(M, N, alpha)
    for t in range(trials):
        dm, dn, dp = (int(x) for x in rng.integers(0, 2, 3))
        M, N, P = (random_supermatrix(rng, n, d) for d in (dm, dn, dp))
        M2 = random_supermatrix(rng, n, dm)
        N2 = random_supermatrix(rng, n, dn)
        note("left linearity", k(M + M2, N), k(M, N) + k(M2, N))
        note("right linearity", k(M, N + N2), k(M, N) + k(M, N2))
        note("inner permutation", k(M @ N, P), k(M, N @ P))
        note("outer permutation", k(M, N), k(N, M).scale((-1) ** (dm * dn)))
        S = random_supermatrix(rng, n, 0)
        S = (S + SuperMatrix.identity(2, 1, n).map(lambda e: e.scale(3.0))).with_parity(Parity.EVEN)
        Si = inverse_even(S)
        note("conjugation", k(Si @ M @ S, Si @ N @ S), k(M, N))
        N3, P3 = random_supermatrix(rng, n, dm), random_supermatrix(rng, n, dm)
        note("supercommutator", k(M, super_bracket(N3, P3)), k(super_bracket(M, N3), P3))
    out = [SuiteResult(name, v < 1e-12, v, f"{trials} random triples in gl(2|1), {n} generators")
           for name, v in res.items()]
    Nm = SuperMatrix.from_scalars(np.diag([-1.0, 1.0, 0.0]), 2, 1, n, Parity.EVEN)
    nn = k(Nm, Nm)
    dev = abs(complex(nn.body()) - 1.0)
    out.append(SuiteResult("normal normalization", dev < 1e-12, dev,
                           f"<diag(-1,1,0), diag(-1,1,0)> = {complex(nn.body()).real:g} at alpha={alpha:g}"))
    return out


def random_jet(rng: np.random.Generator, order: int, n: int = 4) -> JetElement:
    return JetElement({s: random_element(rng, n) for s in slots_upto(order)}, order, n)


def operators_suite(trials: int = 50, order: int = 4, n: int = 4, seed: int = 0) -> list[SuiteResult]:
    rng = np.random.default_rng(seed)
    res = {"{D1,D2}=0": 0.0, "Dj^2=-i dj": 0.0, "{Dj,Jk}=0": 0.0}
    for _ in range(trials):
        f = random_jet(rng, order, n)
        res["{D1,D2}=0"] = max(res["{D1,D2}=0"], (D(1, D(2, f)) + D(2, D(1, f))).max_abs())
        for j in (1, 2):
            lhs = D(j, D(j, f))
            res["Dj^2=-i dj"] = max(res["Dj^2=-i dj"], (lhs - f.dx(j).scale(-1j).truncate(lhs.order)).max_abs())
            for k in (1, 2):
                res["{Dj,Jk}=0"] = max(res["{Dj,Jk}=0"], (D(j, J(k, f)) + J(k, D(j, f))).max_abs())
    return [SuiteResult(name, v < 1e-10, v, f"{trials} random superfield jets")
            for name, v in res.items()]


def run_suite(name: str, alpha: float = DEFAULT_ALPHA) -> list[SuiteResult]:
    if name == "algebra":
        return algebra_suite()
    if name == "killing":
        return killing_suite(alpha)
    if name == "operators":
        return operators_suite()
    raise ValueError(f"unknown suite {name!r}; expected one of {', '.join(SUITES)}")


__all__ = ["SUITES", "SuiteResult", "algebra_suite", "killing_suite", "operators_suite", "run_suite",
           "inversion_sign", "left_regular", "taylor_oracle", "random_element", "random_supermatrix",
           "random_jet"]
