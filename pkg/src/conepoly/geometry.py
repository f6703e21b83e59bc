"""Projective points, configurations, codimension-2 planes and their linear forms."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from math import comb

from .algebra import LinearForm, as_scalar, monomials
from .linalg import det_exact, rank_exact

__all__ = [
    "GeometryError",
    "GenericityError",
    "InvalidPlaneError",
    "ProjectivePoint",
    "PointConfiguration",
    "PlaneSpan",
    "moment_points",
    "random_points",
    "random_plane",
    "linear_form_for",
    "evaluation_matrix",
    "is_generic",
    "DEFAULT_BOUND",
    "MAX_ATTEMPTS",
]

DEFAULT_BOUND = 1000
MAX_ATTEMPTS = 100


class GeometryError(ValueError):
    pass


class GenericityError(GeometryError):
    pass


class InvalidPlaneError(GeometryError):
    pass


@dataclass(frozen=True)
class ProjectivePoint:
    """A representative vector of a point in P^n."""

    coords: tuple

    def __post_init__(self):
        coords = tuple(as_scalar(c) for c in self.coords)
        if not coords or not any(coords):
            raise GeometryError("a projective point needs a nonzero coordinate")
        object.__setattr__(self, "coords", coords)

    @property
    def n(self) -> int:
        return len(self.coords) - 1

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, k):
        return self.coords[k]

    def scale(self, c) -> "ProjectivePoint":
        return ProjectivePoint(tuple(as_scalar(c) * x for x in self.coords))

    def proportional_to(self, other: "ProjectivePoint") -> bool:
        return rank_exact([self.coords, other.coords]) < 2


def _as_point(p) -> ProjectivePoint:
    return p if isinstance(p, ProjectivePoint) else ProjectivePoint(tuple(p))


@dataclass(frozen=True)
class PointConfiguration:
    """An ordered set of ``d`` distinct points of P^n."""

    n: int
    points: tuple

    def __post_init__(self):
        points = tuple(_as_point(p) for p in self.points)
        if not points:
            raise GeometryError("a configuration needs at least one point")
        if any(p.n != self.n for p in points):
            raise GeometryError(f"every point needs {self.n + 1} coordinates")
        for i in range(len(points)):
            for j in range(i):
                if points[i].proportional_to(points[j]):
                    raise GeometryError(f"points {j} and {i} coincide in P^{self.n}")
        object.__setattr__(self, "points", points)

    @property
    def d(self) -> int:
        return len(self.points)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, i):
        return self.points[i]

    def rescaled(self, i: int, c) -> "PointConfiguration":
        pts = list(self.points)
        pts[i] = pts[i].scale(c)
        return PointConfiguration(self.n, tuple(pts))

    def to_dict(self) -> dict:
        pts = []
        for p in self.points:
            if any(not isinstance(c, int) for c in p.coords):
                raise GeometryError("only integer configurations serialize to JSON")
            pts.append(list(p.coords))
        return {"n": self.n, "points": pts}

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data: dict) -> "PointConfiguration":
        pts = data["points"]
        for p in pts:
            if any(isinstance(c, bool) or not isinstance(c, int) for c in p):
                raise GeometryError("coordinates must be JSON integers")
        return cls(int(data["n"]), tuple(tuple(p) for p in pts))

    @classmethod
    def from_json(cls, text: str) -> "PointConfiguration":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class PlaneSpan:
    """The (n-2)-plane spanned by ``n - 1`` independent points of P^n."""

    spanning_points: tuple

    def __post_init__(self):
        pts = tuple(_as_point(p) for p in self.spanning_points)
        if not pts:
            raise InvalidPlaneError("a plane needs at least one spanning point")
        if len({p.n for p in pts}) != 1:
            raise InvalidPlaneError("spanning points live in different spaces")
        if len(pts) != pts[0].n - 1:
            raise InvalidPlaneError(f"an (n-2)-plane in P^{pts[0].n} needs {pts[0].n - 1} points")
        if rank_exact([p.coords for p in pts]) != len(pts):
            raise InvalidPlaneError("spanning points are linearly dependent")
        object.__setattr__(self, "spanning_points", pts)

    @property
    def n(self) -> int:
        return self.spanning_points[0].n

    def contains(self, p) -> bool:
        p = _as_point(p)
        rows = [q.coords for q in self.spanning_points] + [p.coords]
        return rank_exact(rows) < len(rows)


def moment_points(d: int, n: int) -> PointConfiguration:
    """Points ``(1, i, i^2, ..., i^n)`` for ``i = 1..d``."""
    if d < 1 or n < 2:
        raise GeometryError("moment_points needs d >= 1 and n >= 2")
    return PointConfiguration(n, tuple(tuple(i**k for k in range(n + 1)) for i in range(1, d + 1)))


def evaluation_matrix(points, degree: int) -> list[list]:
    """Row ``i``: every degree-``degree`` monomial evaluated at point ``i``."""
    points = [tuple(_as_point(p).coords) for p in points]
    m = len(points[0])
    exps = monomials(m, degree)
    rows = []
    for p in points:
        powers = [[1] * (degree + 1) for _ in range(m)]
        for k in range(m):
            for a in range(1, degree + 1):
                powers[k][a] = powers[k][a - 1] * p[k]
        row = []
        for e in exps:
            v = 1
            for k, a in enumerate(e):
                v *= powers[k][a]
            row.append(v)
        rows.append(row)
    return rows


def is_generic(S: PointConfiguration) -> bool:
    """Genericity screen: distinct points imposing independent conditions in degree d."""
    d, n = S.d, S.n
    expected = comb(d + n, n) - d
    return comb(d + n, n) - rank_exact(evaluation_matrix(S.points, d)) == expected


def random_points(d: int, n: int, seed: int = 0, bound: int = DEFAULT_BOUND) -> PointConfiguration:
    """Seeded integer configuration that passes the genericity screen."""
    if d < 1 or n < 2:
        raise GeometryError("random_points needs d >= 1 and n >= 2")
    rng = random.Random(f"points:{seed}:{d}:{n}:{bound}")
    for _ in range(MAX_ATTEMPTS):
        pts = [tuple(rng.randint(-bound, bound) for _ in range(n + 1)) for _ in range(d)]
        try:
            S = PointConfiguration(n, tuple(pts))
        except GeometryError:
            continue
        if is_generic(S):
            return S
    raise GenericityError(
        f"no generic configuration of {d} points in P^{n} after {MAX_ATTEMPTS} draws; increase bound"
    )


def random_plane(n: int, rng: random.Random, bound: int = DEFAULT_BOUND, avoid=()) -> PlaneSpan:
    """Random (n-2)-plane, resampled until independent and missing ``avoid``."""
    for _ in range(MAX_ATTEMPTS):
        pts = tuple(tuple(rng.randint(-bound, bound) for _ in range(n + 1)) for _ in range(n - 1))
        try:
            plane = PlaneSpan(pts)
        except (GeometryError, InvalidPlaneError):
            continue
        if not any(plane.contains(p) for p in avoid):
            return plane
    raise GenericityError(f"could not sample a plane in P^{n} after {MAX_ATTEMPTS} draws")


def linear_form_for(P, plane: PlaneSpan) -> LinearForm:
    """The form ``v -> det[v, P, Q_1, ..., Q_{n-1}]`` (points as columns).

    Coefficients are the cofactors along the ``v`` column.  The form is zero,
    and flagged degenerate, exactly when ``P`` lies on the plane.
    """
    P = _as_point(P)
    if not isinstance(plane, PlaneSpan):
        plane = PlaneSpan(tuple(plane))
    if P.n != plane.n:
        raise GeometryError("point and plane live in different spaces")
    columns = [P.coords] + [q.coords for q in plane.spanning_points]
    size = P.n + 1
    coeffs = []
    for k in range(size):
        minor = [[col[r] for col in columns] for r in range(size) if r != k]
        coeffs.append((-1) ** k * det_exact(minor))
    return LinearForm(coeffs)
