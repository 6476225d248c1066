"""Square (p+q)x(p+q) supermatrices over the Grassmann algebra.

Entries may be :class:`GrassmannElement` or jet elements; arithmetic only
needs ``+``, ``*``, ``zero_like`` and ``parity``.  The super Killing form,
supertrace and inverse work on Grassmann-valued matrices.
"""
from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from .errors import NonInvertible, ParityError
from .grassmann import DEFAULT_ATOL, GrassmannElement, Parity

DEFAULT_ALPHA = 0.5


class SuperMatrix:
    """Block matrix ``[[A, B], [C, D]]`` with A p x p and D q x q.

    ``parity`` is the declared degree (``Parity.EVEN``/``Parity.ODD``) or
    ``None`` for unchecked temporaries.
    """

    __slots__ = ("rows", "p", "q", "parity")

    def __init__(self, rows: Sequence[Sequence], p: int, q: int, parity: Parity | None = None):
        if p < 1 or q < 0:
            raise ValueError("need p >= 1 and q >= 0")
        size = p + q
        if len(rows) != size or any(len(r) != size for r in rows):
            raise ValueError(f"expected a {size}x{size} array of entries")
        self.rows = tuple(tuple(r) for r in rows)
        self.p, self.q = p, q
        self.parity = parity

    # construction ---------------------------------------------------------
    @classmethod
    def from_scalars(cls, values, p: int, q: int, n: int, parity: Parity | None = None):
        size = p + q
        rows = [[GrassmannElement.scalar(complex(values[i][j]), n) if values[i][j] != 0
                 else GrassmannElement.zero(n) for j in range(size)] for i in range(size)]
        return cls(rows, p, q, parity)

    @classmethod
    def identity(cls, p: int, q: int, n: int) -> "SuperMatrix":
        size = p + q
        return cls.from_scalars(np.eye(size), p, q, n, Parity.EVEN)

    @classmethod
    def E(cls, p: int, q: int, n: int) -> "SuperMatrix":
        """``diag(I_p, -I_q)``."""
        return cls.from_scalars(np.diag([1.0] * p + [-1.0] * q), p, q, n, Parity.EVEN)

    @classmethod
    def zeros_like(cls, M: "SuperMatrix", parity: Parity | None = None) -> "SuperMatrix":
        z = M.rows[0][0].zero_like()
        return cls([[z] * M.size for _ in range(M.size)], M.p, M.q, parity)

    @property
    def size(self) -> int:
        return self.p + self.q

    def block_of(self, i: int, j: int) -> str:
        top, left = i < self.p, j < self.p
        if top and left:
            return "A"
        if top:
            return "B"
        return "C" if left else "D"

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    # parity ---------------------------------------------------------------
    def check_parity(self, expected: Parity) -> "SuperMatrix":
        """Validate blockwise parity and return a copy declaring ``expected``."""
        if expected is Parity.MIXED:
            raise ParityError("a supermatrix cannot be declared mixed")
        for i in range(self.size):
            for j in range(self.size):
                diagonal_block = self.block_of(i, j) in ("A", "D")
                want_even = diagonal_block == (expected is Parity.EVEN)
                e = self.rows[i][j]
                ok = e.is_even() if want_even else e.is_odd()
                if not ok:
                    raise ParityError(
                        f"entry ({i + 1},{j + 1}) in block {self.block_of(i, j)} is "
                        f"{e.parity().name}, {expected.name} matrix needs "
                        f"{'EVEN' if want_even else 'ODD'}"
                    )
        return SuperMatrix(self.rows, self.p, self.q, expected)

    def degree(self) -> int:
        if self.parity not in (Parity.EVEN, Parity.ODD):
            raise ParityError("operation needs a homogeneous supermatrix with declared parity")
        return self.parity.value

    # arithmetic -------------------------------------------------------------
    def _same_shape(self, other: "SuperMatrix"):
        if (self.p, self.q) != (other.p, other.q):
            raise ValueError(f"shape mismatch: ({self.p}|{self.q}) vs ({other.p}|{other.q})")

    def __add__(self, other: "SuperMatrix") -> "SuperMatrix":
        self._same_shape(other)
        rows = [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)]
        par = self.parity if self.parity == other.parity else None
        return SuperMatrix(rows, self.p, self.q, par)

    def __neg__(self) -> "SuperMatrix":
        return SuperMatrix([[-a for a in r] for r in self.rows], self.p, self.q, self.parity)

    def __sub__(self, other: "SuperMatrix") -> "SuperMatrix":
        return self + (-other)

    def __matmul__(self, other: "SuperMatrix") -> "SuperMatrix":
        self._same_shape(other)
        n = self.size
        rows = []
        for i in range(n):
            row = []
            for k in range(n):
                acc = None
                for j in range(n):
                    a, b = self.rows[i][j], other.rows[j][k]
                    if a.is_structurally_zero() or b.is_structurally_zero():
                        continue
                    t = a * b
                    acc = t if acc is None else acc + t
                row.append(self.rows[0][0].zero_like() if acc is None else acc)
            rows.append(row)
        par = None
        if self.parity in (Parity.EVEN, Parity.ODD) and other.parity in (Parity.EVEN, Parity.ODD):
            par = self.parity + other.parity
        return SuperMatrix(rows, self.p, self.q, par)

    def scale_left(self, c) -> "SuperMatrix":
        """Multiply every entry on the left by ``c`` (scalar or algebra element)."""
        rows = [[c * a for a in r] for r in self.rows]
        return SuperMatrix(rows, self.p, self.q, _scaled_parity(c, self.parity))

    def scale_right(self, c) -> "SuperMatrix":
        rows = [[a * c for a in r] for r in self.rows]
        return SuperMatrix(rows, self.p, self.q, _scaled_parity(c, self.parity))

    def map(self, fn: Callable, parity: Parity | None = None) -> "SuperMatrix":
        return SuperMatrix([[fn(a) for a in r] for r in self.rows], self.p, self.q, parity)

    def with_parity(self, parity: Parity | None) -> "SuperMatrix":
        return SuperMatrix(self.rows, self.p, self.q, parity)

    def trace(self):
        acc = self.rows[0][0]
        for i in range(1, self.size):
            acc = acc + self.rows[i][i]
        return acc

    def max_abs(self) -> float:
        return max(e.max_abs() for r in self.rows for e in r)

    def allclose(self, other: "SuperMatrix", atol: float = DEFAULT_ATOL) -> bool:
        return (self - other).max_abs() <= atol

    def is_exact_zero(self) -> bool:
        return all(e.is_exact_zero() for r in self.rows for e in r)

    def value(self) -> "SuperMatrix":
        """Drop jet data, keeping the Grassmann values of every entry."""
        return self.map(lambda e: e.value if hasattr(e, "value") else e, self.parity)

    def __repr__(self) -> str:
        lines = []
        for i, r in enumerate(self.rows):
            if i == self.p:
                lines.append("-" * 20)
            cells = [repr(e) for e in r]
            lines.append(" | ".join(cells[: self.p]) + " || " + " | ".join(cells[self.p:]))
        tag = self.parity.name if self.parity else "UNCHECKED"
        return f"SuperMatrix({self.p}|{self.q}, {tag})\n" + "\n".join(lines)


def _scaled_parity(c, par: Parity | None) -> Parity | None:
    if par is None:
        return None
    if hasattr(c, "parity"):
        cp = c.parity()
        return None if cp is Parity.MIXED else par + cp
    return par


def construct_checked(rows, p: int, q: int, expected: Parity) -> SuperMatrix:
    return SuperMatrix(rows, p, q).check_parity(expected)


def E_like(M: SuperMatrix) -> SuperMatrix:
    z = M.rows[0][0]
    size = M.size
    rows = []
    for i in range(size):
        row = []
        for j in range(size):
            if i == j:
                row.append(z.constant_like(1.0 + 0j if i < M.p else -1.0 + 0j))
            else:
                row.append(z.zero_like())
        rows.append(row)
    return SuperMatrix(rows, M.p, M.q, Parity.EVEN)


def apply_E(M: SuperMatrix) -> SuperMatrix:
    """``E M``: negates the last q rows, exactly as a left product with E."""
    rows = [list(r) if i < M.p else [-a for a in r] for i, r in enumerate(M.rows)]
    return SuperMatrix(rows, M.p, M.q, M.parity)


def matmul(M: SuperMatrix, N: SuperMatrix) -> SuperMatrix:
    return M @ N


def supertrace(M: SuperMatrix):
    """``tr(E^(deg M + 1) M)``: graded trace for even M, plain trace for odd M."""
    d = M.degree()
    acc = M.rows[0][0].zero_like()
    for i in range(M.size):
        e = M.rows[i][i]
        if d == 0 and i >= M.p:
            acc = acc - e
        else:
            acc = acc + e
    return acc


def killing(M: SuperMatrix, N: SuperMatrix, alpha: float = DEFAULT_ALPHA):
    """Super Killing form ``alpha * tr(E^(deg(MN)+1) M N)``."""
    M.degree()
    N.degree()
    return supertrace(M @ N).scale(alpha)


def super_bracket(M: SuperMatrix, N: SuperMatrix) -> SuperMatrix:
    """``MN - (-1)^(deg M deg N) NM``: anticommutator iff both are odd."""
    if M.degree() * N.degree():
        return anticommutator(M, N)
    return commutator(M, N)


def commutator(M: SuperMatrix, N: SuperMatrix) -> SuperMatrix:
    return M @ N - N @ M


def anticommutator(M: SuperMatrix, N: SuperMatrix) -> SuperMatrix:
    return M @ N + N @ M


def _body_array(M: SuperMatrix) -> np.ndarray:
    bodies = [[np.asarray(e.body(), dtype=complex) for e in r] for r in M.rows]
    shape = np.broadcast_shapes(*(b.shape for r in bodies for b in r))
    out = np.empty(shape + (M.size, M.size), dtype=complex)
    for i, r in enumerate(bodies):
        for j, b in enumerate(r):
            out[..., i, j] = b
    return out


def inverse_even(M: SuperMatrix) -> SuperMatrix:
    """Inverse of an even supermatrix via ``(I + B^-1 S)^-1 B^-1``.

    B is the complex body matrix and S the nilpotent soul part, so the Neumann
    series terminates after at most (generator count + 1) terms.
    """
    if M.parity is not Parity.EVEN:
        M = M.check_parity(Parity.EVEN)
    body = _body_array(M)
    if np.any(np.abs(np.linalg.det(body)) == 0):
        raise NonInvertible("body matrix is singular")
    try:
        binv = np.linalg.inv(body)
    except np.linalg.LinAlgError as exc:
        raise NonInvertible(str(exc)) from exc
    n = M.rows[0][0].n
    squeeze = binv.ndim == 2
    Binv = SuperMatrix(
        [[GrassmannElement.scalar(complex(binv[i, j]) if squeeze else binv[..., i, j], n)
          for j in range(M.size)] for i in range(M.size)],
        M.p, M.q, Parity.EVEN,
    )
    soul = M.map(lambda e: e.soul(), Parity.EVEN)
    X = -(Binv @ soul)
    result = Binv
    power = Binv
    for _ in range(n + 1):
        power = X @ power
        if all(e.is_structurally_zero() for r in power.rows for e in r):
            break
        result = result + power
    # one Newton step R + R (I - M R) recovers the precision of M when its
    # entries carry more digits than the double-precision body inverse
    residual = SuperMatrix.identity(M.p, M.q, n) - M @ result
    return (result + result @ residual).with_parity(Parity.EVEN)
