"""Exact matrices: fraction-free rank, modular rank, permanents."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import permutations
from math import gcd, lcm
from typing import Sequence

from gmpy2 import divexact, mpz
from sympy import nextprime

from .algebra import BadPrimeError, PrimeField, as_scalar

__all__ = [
    "ExactMatrix",
    "SizeError",
    "rank_exact",
    "rank_mod_p",
    "det_exact",
    "permanent",
    "random_prime",
    "IncrementalRank",
    "NAIVE_LIMIT",
    "RYSER_LIMIT",
]

NAIVE_LIMIT = 10
RYSER_LIMIT = 24


class SizeError(ValueError):
    pass


class ExactMatrix:
    """Dense row-major matrix of exact scalars (ints or Fractions)."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries):
        entries = tuple(as_scalar(x) for x in entries)
        if len(entries) != rows * cols:
            raise ValueError(f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(entries)}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("ExactMatrix is immutable")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "ExactMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), ncols, [x for r in rows for x in r])

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def tolist(self) -> list[list]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(
            self.cols, self.rows,
            [self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)],
        )

    T = property(transpose)

    def scale(self, c) -> "ExactMatrix":
        return ExactMatrix(self.rows, self.cols, [c * x for x in self.entries])

    def is_skew_symmetric(self) -> bool:
        return self == self.transpose().scale(-1)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"ExactMatrix({self.rows}x{self.cols})"


def _as_rows(M) -> list[list]:
    if isinstance(M, ExactMatrix):
        return M.tolist()
    return [[as_scalar(x) for x in r] for r in M]


def _integer_rows(M) -> list[list[int]]:
    rows = []
    for r in _as_rows(M):
        den = lcm(*(x.denominator for x in r if isinstance(x, Fraction))) if r else 1
        rows.append([mpz(x * den) for x in r])
    return rows


def rank_exact(M) -> int:
    """Rank over Q by Bareiss fraction-free elimination."""
    a = _integer_rows(M)
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    rank, prev = 0, mpz(1)
    for c in range(ncols):
        if rank == nrows:
            break
        pivot = next((i for i in range(rank, nrows) if a[i][c]), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        p_row = a[rank]
        p = p_row[c]
        for i in range(rank + 1, nrows):
            row = a[i]
            f = row[c]
            if f:
                for j in range(c + 1, ncols):
                    row[j] = divexact(p * row[j] - f * p_row[j], prev)
            else:
                for j in range(c + 1, ncols):
                    row[j] = divexact(p * row[j], prev)
            row[c] = 0
        prev = p
        rank += 1
    return rank


def det_exact(M):
    """Determinant of a square matrix over Q (Bareiss)."""
    rows = _as_rows(M)
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("determinant needs a square matrix")
    if n == 0:
        return 1
    scale = 1
    a = []
    for r in rows:
        den = lcm(*(x.denominator for x in r if isinstance(x, Fraction)))
        scale *= den
        a.append([int(x * den) for x in r])
    sign, prev = 1, 1
    for c in range(n - 1):
        pivot = next((i for i in range(c, n) if a[i][c]), None)
        if pivot is None:
            return 0
        if pivot != c:
            a[c], a[pivot] = a[pivot], a[c]
            sign = -sign
        p = a[c][c]
        for i in range(c + 1, n):
            for j in range(c + 1, n):
                a[i][j] = (p * a[i][j] - a[i][c] * a[c][j]) // prev
            a[i][c] = 0
        prev = p
    return as_scalar(Fraction(sign * a[n - 1][n - 1], scale))


def rank_mod_p(M, p: int) -> int:
    """Rank of the entrywise reduction of ``M`` over F_p.

    Raises BadPrimeError when ``p`` divides an entry's denominator.
    """
    field = PrimeField(p)
    a = [[field.reduce(x) for x in r] for r in _as_rows(M)]
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    rank = 0
    for c in range(ncols):
        if rank == nrows:
            break
        pivot = next((i for i in range(rank, nrows) if a[i][c]), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        inv = pow(a[rank][c], -1, p)
        p_row = [x * inv % p for x in a[rank]]
        a[rank] = p_row
        for i in range(rank + 1, nrows):
            f = a[i][c]
            if f:
                row = a[i]
                for j in range(c, ncols):
                    row[j] = (row[j] - f * p_row[j]) % p
        rank += 1
    return rank


def random_prime(rng: random.Random, bits: int = 61) -> int:
    """A prime drawn from ``[2**(bits-1), 2**bits)`` using ``rng``."""
    while True:
        p = nextprime(rng.randrange(2 ** (bits - 1), 2**bits))
        if p < 2**bits:
            return int(p)


def permanent(M, method: str = "ryser"):
    """Permanent ``sum_sigma prod_i M[i][sigma(i)]`` of a square matrix."""
    rows = _as_rows(M)
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("permanent needs a square matrix")
    if method == "naive":
        if n > NAIVE_LIMIT:
            raise SizeError(f"naive permanent limited to size {NAIVE_LIMIT}")
        total = 0
        for sigma in permutations(range(n)):
            term = 1
            for i, j in enumerate(sigma):
                term *= rows[i][j]
                if not term:
                    break
            total += term
        return as_scalar(total)
    if method == "ryser":
        if n > RYSER_LIMIT:
            raise SizeError(f"Ryser permanent limited to size {RYSER_LIMIT}")
        return _ryser(rows)
    raise ValueError(f"unknown permanent method {method!r}")


def _ryser(rows: list[list]):
    n = len(rows)
    if n == 0:
        return 1
    # walk column subsets in Gray-code order, keeping row sums current
    sums = [0] * n
    total = 0
    prev_gray = 0
    for k in range(1, 1 << n):
        gray = k ^ (k >> 1)
        j = (gray ^ prev_gray).bit_length() - 1
        if gray & (1 << j):
            for i in range(n):
                sums[i] += rows[i][j]
        else:
            for i in range(n):
                sums[i] -= rows[i][j]
        prev_gray = gray
        term = 1
        for s in sums:
            term *= s
            if not term:
                break
        if bin(gray).count("1") % 2 == n % 2:
            total += term
        else:
            total -= term
    return as_scalar(total)


class IncrementalRank:
    """Running row-echelon basis; ``add`` reports whether the rank grew.

    ``field="exact"`` keeps primitive integer rows (rank over Q);
    ``field="mod"`` works over F_p.
    """

    def __init__(self, ncols: int, field: str = "exact", p: int | None = None):
        if field not in ("exact", "mod"):
            raise ValueError("field must be 'exact' or 'mod'")
        self.ncols = ncols
        self.field = field
        self.p = p
        if field == "mod" and p is None:
            raise ValueError("modular rank needs a prime")
        self._pf = PrimeField(p) if field == "mod" else None
        self._basis: dict[int, list[int]] = {}

    @property
    def rank(self) -> int:
        return len(self._basis)

    def add(self, row) -> bool:
        if len(row) != self.ncols:
            raise ValueError("row length does not match")
        if self.field == "mod":
            return self._add_mod([self._pf.reduce(x) for x in row])
        return self._add_exact(_integer_rows([row])[0])

    def _add_exact(self, r: list[int]) -> bool:
        for c in range(self.ncols):
            if not r[c]:
                continue
            b = self._basis.get(c)
            if b is None:
                g = 0
                for x in r:
                    g = gcd(g, x)
                self._basis[c] = [x // g for x in r]
                return True
            bc, rc = b[c], r[c]
            r = [bc * x - rc * y for x, y in zip(r, b)]
            g = 0
            for x in r:
                g = gcd(g, x)
            if g > 1:
                r = [x // g for x in r]
        return False

    def _add_mod(self, r: list[int]) -> bool:
        p = self.p
        for c in range(self.ncols):
            if not r[c]:
                continue
            b = self._basis.get(c)
            if b is None:
                inv = pow(r[c], -1, p)
                self._basis[c] = [x * inv % p for x in r]
                return True
            f = r[c]
            r = [(x - f * y) % p for x, y in zip(r, b)]
        return False


__all__ += ["BadPrimeError"]
