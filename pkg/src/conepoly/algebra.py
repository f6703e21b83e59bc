"""Exact scalars and dense multihomogeneous polynomials.

Polynomials are stored densely: one coefficient slot for every monomial of
the declared degree in every variable group.  Monomials within a group are
enumerated in descending lexicographic order, so ``(d, 0, ..., 0)`` comes
first and ``(0, ..., 0, d)`` last.  Several groups are flattened row-major
in group order.
"""

from __future__ import annotations

import os
from fractions import Fraction
from functools import lru_cache
from math import comb
from numbers import Rational
from typing import Iterable, Iterator, Sequence

__all__ = [
    "AlgebraError",
    "InvalidExponentError",
    "StructureError",
    "DegreeError",
    "BadPrimeError",
    "PrimeField",
    "DEFAULT_PRIME",
    "default_prime",
    "as_scalar",
    "num_monomials",
    "monomials",
    "monomial_index",
    "monomial_at",
    "HomogPoly",
    "LinearForm",
    "multiply",
    "directional_derivative",
]

DEFAULT_PRIME = 2**61 - 1
PRIME_ENV_VAR = "CONEPOLY_PRIME"


class AlgebraError(ValueError):
    pass


class InvalidExponentError(AlgebraError):
    pass


class StructureError(AlgebraError):
    pass


class DegreeError(AlgebraError):
    pass


class BadPrimeError(ArithmeticError):
    """A denominator vanishes modulo the chosen prime."""


def as_scalar(x):
    """Coerce ``x`` to an exact scalar (``int`` or ``Fraction``)."""
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if hasattr(x, "__index__"):  # numpy and gmpy2 integers
        return int(x)
    if isinstance(x, Rational):
        return as_scalar(Fraction(int(x.numerator), int(x.denominator)))
    raise TypeError(f"expected an exact rational scalar, got {type(x).__name__}")


class PrimeField:
    """Arithmetic in F_p, elements represented by ints in ``[0, p)``."""

    def __init__(self, p: int):
        if p <= 2 or p % 2 == 0:
            raise ValueError("p must be an odd prime")
        self.p = p

    def __repr__(self):
        return f"PrimeField({self.p})"

    def reduce(self, x) -> int:
        x = as_scalar(x)
        if isinstance(x, int):
            return x % self.p
        den = x.denominator % self.p
        if den == 0:
            raise BadPrimeError(f"{self.p} divides the denominator of {x}")
        return x.numerator * pow(den, -1, self.p) % self.p

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise ZeroDivisionError("zero has no inverse")
        return pow(a, -1, self.p)


def default_prime() -> int:
    """The modulus used for modular rank, honouring ``CONEPOLY_PRIME``."""
    value = os.environ.get(PRIME_ENV_VAR)
    return int(value) if value else DEFAULT_PRIME


# -- monomial enumeration ----------------------------------------------------


def num_monomials(m: int, d: int) -> int:
    if m <= 0 or d < 0:
        return 0
    return comb(d + m - 1, m - 1)


def _generate(m: int, d: int) -> Iterator[tuple[int, ...]]:
    if m == 1:
        yield (d,)
        return
    for first in range(d, -1, -1):
        for rest in _generate(m - 1, d - first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _basis(m: int, d: int) -> tuple[tuple[tuple[int, ...], ...], dict]:
    exps = tuple(_generate(m, d))
    return exps, {e: i for i, e in enumerate(exps)}


def monomials(m: int, d: int) -> tuple[tuple[int, ...], ...]:
    """All exponent vectors of degree ``d`` in ``m`` variables, descending lex."""
    return _basis(m, d)[0]


def monomial_index(e: Sequence[int], m: int, d: int) -> int:
    """Position of ``e`` among the degree-``d`` monomials in ``m`` variables."""
    e = tuple(e)
    if len(e) != m or any(a < 0 for a in e) or sum(e) != d:
        raise InvalidExponentError(f"{e} is not an exponent vector of degree {d} in {m} variables")
    # vectors beating e first at slot k: hockey-stick sum over larger e_k
    index, remaining = 0, d
    for k in range(m - 1):
        index += comb(remaining - e[k] + m - k - 2, m - k - 1)
        remaining -= e[k]
    return index


def monomial_at(index: int, m: int, d: int) -> tuple[int, ...]:
    exps = monomials(m, d)
    if not 0 <= index < len(exps):
        raise InvalidExponentError(f"index {index} out of range for {len(exps)} monomials")
    return exps[index]


@lru_cache(maxsize=None)
def _product_table(m: int, d1: int, d2: int) -> tuple[tuple[int, ...], ...]:
    lookup = _basis(m, d1 + d2)[1]
    right = monomials(m, d2)
    return tuple(
        tuple(lookup[tuple(a + b for a, b in zip(e, f))] for f in right)
        for e in monomials(m, d1)
    )


@lru_cache(maxsize=None)
def _derivative_table(m: int, d: int) -> tuple[tuple[tuple[int, int, int], ...], ...]:
    # per monomial: (variable, exponent, index of the lowered monomial)
    lookup = _basis(m, d - 1)[1]
    table = []
    for e in monomials(m, d):
        row = []
        for k, a in enumerate(e):
            if a:
                lowered = e[:k] + (a - 1,) + e[k + 1:]
                row.append((k, a, lookup[lowered]))
        table.append(tuple(row))
    return tuple(table)


# -- polynomials ---------------------------------------------------------------


def _unflatten(flat: int, sizes: Sequence[int]) -> tuple[int, ...]:
    out = []
    for size in reversed(sizes):
        flat, r = divmod(flat, size)
        out.append(r)
    return tuple(reversed(out))


def _flatten(idx: Sequence[int], sizes: Sequence[int]) -> int:
    flat = 0
    for i, size in zip(idx, sizes):
        flat = flat * size + i
    return flat


class HomogPoly:
    """Polynomial homogeneous of a fixed degree in each of its variable groups.

    Parameters
    ----------
    groups : sequence of (name, nvars)
    degrees : sequence of int, one per group
    coeffs : sequence of exact scalars, length = product of per-group
        monomial counts, flattened row-major in group order.
    """

    __slots__ = ("groups", "degrees", "coeffs")

    def __init__(self, groups, degrees, coeffs):
        groups = tuple((str(name), int(m)) for name, m in groups)
        degrees = tuple(int(d) for d in degrees)
        if len(groups) != len(degrees):
            raise StructureError("one degree per variable group is required")
        if len({name for name, _ in groups}) != len(groups):
            raise StructureError("variable group names must be distinct")
        if any(m < 1 for _, m in groups) or any(d < 0 for d in degrees):
            raise StructureError("groups need at least one variable and nonnegative degree")
        coeffs = tuple(as_scalar(c) for c in coeffs)
        expected = 1
        for (_, m), d in zip(groups, degrees):
            expected *= num_monomials(m, d)
        if len(coeffs) != expected:
            raise StructureError(f"expected {expected} coefficients, got {len(coeffs)}")
        object.__setattr__(self, "groups", groups)
        object.__setattr__(self, "degrees", degrees)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("HomogPoly is immutable")

    # construction

    @classmethod
    def zero(cls, groups, degrees) -> "HomogPoly":
        groups = tuple(groups)
        size = 1
        for (_, m), d in zip(groups, degrees):
            size *= num_monomials(m, d)
        return cls(groups, degrees, [0] * size)

    @classmethod
    def from_terms(cls, groups, degrees, terms) -> "HomogPoly":
        """Build from a mapping ``{(exp_group0, exp_group1, ...): coeff}``.

        For a single group the key may be a bare exponent vector.
        """
        groups = tuple((str(n), int(m)) for n, m in groups)
        degrees = tuple(degrees)
        sizes = [num_monomials(m, d) for (_, m), d in zip(groups, degrees)]
        coeffs = [0] * _prod(sizes)
        for key, c in dict(terms).items():
            if len(groups) == 1 and key and isinstance(key[0], int):
                key = (key,)
            if len(key) != len(groups):
                raise StructureError("term key does not match the variable groups")
            idx = [monomial_index(e, m, d) for e, (_, m), d in zip(key, groups, degrees)]
            coeffs[_flatten(idx, sizes)] += as_scalar(c)
        return cls(groups, degrees, coeffs)

    @classmethod
    def constant(cls, value, groups=(("x", 1),)) -> "HomogPoly":
        groups = tuple(groups)
        return cls(groups, (0,) * len(groups), [value])

    @classmethod
    def linear(cls, coeffs, group: str = "x") -> "HomogPoly":
        coeffs = list(coeffs)
        return cls(((group, len(coeffs)),), (1,), coeffs)

    @classmethod
    def variable(cls, k: int, m: int, group: str = "x") -> "HomogPoly":
        return cls.linear([1 if j == k else 0 for j in range(m)], group)

    # structure

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(num_monomials(m, d) for (_, m), d in zip(self.groups, self.degrees))

    @property
    def degree(self) -> int:
        return sum(self.degrees)

    def group_position(self, group: str) -> int:
        for pos, (name, _) in enumerate(self.groups):
            if name == group:
                return pos
        raise StructureError(f"no variable group named {group!r}")

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def nonzero(self) -> list[tuple[tuple[int, ...], object]]:
        """``(per-group monomial indices, coefficient)`` for nonzero terms."""
        sizes = self.sizes
        return [(_unflatten(f, sizes), c) for f, c in enumerate(self.coeffs) if c]

    def terms(self) -> Iterator[tuple[tuple[tuple[int, ...], ...], object]]:
        """Yield ``(per-group exponent vectors, coefficient)`` for nonzero terms."""
        for idx, c in self.nonzero():
            yield tuple(
                monomials(m, d)[i] for i, (_, m), d in zip(idx, self.groups, self.degrees)
            ), c

    def coefficient(self, *exps) -> object:
        if len(exps) != len(self.groups):
            raise StructureError("one exponent vector per group is required")
        idx = [monomial_index(e, m, d) for e, (_, m), d in zip(exps, self.groups, self.degrees)]
        return self.coeffs[_flatten(idx, self.sizes)]

    def evaluate(self, *points):
        """Value at one point per variable group."""
        if len(points) != len(self.groups):
            raise StructureError("one point per variable group is required")
        points = [tuple(as_scalar(v) for v in p) for p in points]
        for p, (_, m) in zip(points, self.groups):
            if len(p) != m:
                raise StructureError("point dimension does not match the group")
        tables = []
        for p, (_, m), d in zip(points, self.groups, self.degrees):
            tables.append([_monomial_value(e, p) for e in monomials(m, d)])
        total = 0
        for idx, c in self.nonzero():
            term = c
            for table, i in zip(tables, idx):
                term *= table[i]
            total += term
        return as_scalar(total)

    def coefficients_in(self, group: str) -> list["HomogPoly"]:
        """Split into polynomials in ``group`` indexed by monomials of the others.

        Returns the coefficient polynomial of every monomial in the remaining
        groups, in flattened order, including zero ones.
        """
        pos = self.group_position(group)
        keep = self.groups[pos]
        kd = self.degrees[pos]
        sizes = self.sizes
        other_sizes = [s for g, s in enumerate(sizes) if g != pos]
        out = [[0] * sizes[pos] for _ in range(_prod(other_sizes))]
        for idx, c in self.nonzero():
            rest = [i for g, i in enumerate(idx) if g != pos]
            out[_flatten(rest, other_sizes)][idx[pos]] = c
        return [HomogPoly((keep,), (kd,), row) for row in out]

    # arithmetic

    def _check_same(self, other: "HomogPoly") -> None:
        if not isinstance(other, HomogPoly):
            raise TypeError("expected a HomogPoly")
        if self.groups != other.groups or self.degrees != other.degrees:
            raise StructureError("polynomials live in different spaces")

    def __add__(self, other):
        if not isinstance(other, HomogPoly):
            return NotImplemented
        self._check_same(other)
        return HomogPoly(self.groups, self.degrees, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        if not isinstance(other, HomogPoly):
            return NotImplemented
        self._check_same(other)
        return HomogPoly(self.groups, self.degrees, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return HomogPoly(self.groups, self.degrees, [-a for a in self.coeffs])

    def scale(self, c) -> "HomogPoly":
        c = as_scalar(c)
        return HomogPoly(self.groups, self.degrees, [c * a for a in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, HomogPoly):
            return multiply(self, other)
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __rmul__(self, other):
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, HomogPoly):
            return NotImplemented
        return (self.groups, self.degrees, self.coeffs) == (other.groups, other.degrees, other.coeffs)

    def __hash__(self):
        return hash((self.groups, self.degrees, self.coeffs))

    def __repr__(self):
        if self.is_zero():
            body = "0"
        else:
            names = [name for name, _ in self.groups]
            parts = []
            for exps, c in self.terms():
                mono = "*".join(
                    f"{n}{k + 1}" + (f"^{a}" if a > 1 else "")
                    for n, e in zip(names, exps)
                    for k, a in enumerate(e)
                    if a
                )
                parts.append(f"{c}*{mono}" if mono else str(c))
            body = " + ".join(parts)
        return f"HomogPoly({body})"


def _prod(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out *= v
    return out


def _monomial_value(e, p):
    value = 1
    for a, v in zip(e, p):
        if a:
            value *= v**a
    return value


def multiply(f: HomogPoly, g: HomogPoly) -> HomogPoly:
    """Exact product; per-group degrees add."""
    if f.groups != g.groups:
        raise StructureError("cannot multiply polynomials over different variable groups")
    degrees = tuple(a + b for a, b in zip(f.degrees, g.degrees))
    tables = [_product_table(m, a, b) for (_, m), a, b in zip(f.groups, f.degrees, g.degrees)]
    out_sizes = [num_monomials(m, d) for (_, m), d in zip(f.groups, degrees)]
    out = [0] * _prod(out_sizes)
    right = g.nonzero()
    for ia, ca in f.nonzero():
        rows = [t[i] for t, i in zip(tables, ia)]
        for ib, cb in right:
            flat = 0
            for row, j, size in zip(rows, ib, out_sizes):
                flat = flat * size + row[j]
            out[flat] += ca * cb
    return HomogPoly(f.groups, degrees, out)


def directional_derivative(f: HomogPoly, w: Sequence, group: str | None = None) -> HomogPoly:
    """Return ``sum_k w[k] * df/dx_k`` over the variables of ``group``."""
    pos = 0 if group is None else f.group_position(group)
    if group is None and len(f.groups) != 1:
        raise StructureError("group must be named for multi-group polynomials")
    m = f.groups[pos][1]
    w = [as_scalar(v) for v in w]
    if len(w) != m:
        raise StructureError(f"direction has {len(w)} entries, group has {m} variables")
    d = f.degrees[pos]
    if d == 0:
        raise DegreeError("cannot differentiate a polynomial of degree 0 in this group")
    table = _derivative_table(m, d)
    degrees = f.degrees[:pos] + (d - 1,) + f.degrees[pos + 1:]
    out_sizes = [num_monomials(mm, dd) for (_, mm), dd in zip(f.groups, degrees)]
    out = [0] * _prod(out_sizes)
    for idx, c in f.nonzero():
        idx = list(idx)
        for k, a, lowered in table[idx[pos]]:
            if w[k]:
                idx2 = idx[:]
                idx2[pos] = lowered
                out[_flatten(idx2, out_sizes)] += c * a * w[k]
    return HomogPoly(f.groups, degrees, out)


class LinearForm:
    """A linear form in one variable group; may be the zero form."""

    __slots__ = ("coeffs", "group")

    def __init__(self, coeffs, group: str = "x"):
        object.__setattr__(self, "coeffs", tuple(as_scalar(c) for c in coeffs))
        object.__setattr__(self, "group", group)

    def __setattr__(self, name, value):
        raise AttributeError("LinearForm is immutable")

    @property
    def degenerate(self) -> bool:
        return not any(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __call__(self, point):
        if len(point) != len(self.coeffs):
            raise StructureError("point dimension does not match the form")
        return as_scalar(sum(c * as_scalar(v) for c, v in zip(self.coeffs, point)))

    evaluate = __call__

    def as_poly(self) -> HomogPoly:
        return HomogPoly.linear(self.coeffs, self.group)

    def derivative(self, w) -> object:
        """Directional derivative along ``w``, a constant."""
        return self(w)

    def scale(self, c) -> "LinearForm":
        c = as_scalar(c)
        return LinearForm([c * a for a in self.coeffs], self.group)

    def __eq__(self, other):
        if not isinstance(other, LinearForm):
            return NotImplemented
        return self.coeffs == other.coeffs and self.group == other.group

    def __hash__(self):
        return hash((self.coeffs, self.group))

    def __repr__(self):
        flag = ", degenerate" if self.degenerate else ""
        return f"LinearForm({list(self.coeffs)}{flag})"
