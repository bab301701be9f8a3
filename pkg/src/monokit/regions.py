"""Convex regions of R^n and the sampling grids laid over them.

Boxes carry per-axis open/closed flags so the difference between (0,1) and
[0,1] survives all the way into membership tests and lattice placement.
Infinite bounds are allowed and are treated as open; sampling clips them to a
configured ambient box. Half-spaces and vertex-list polytopes cover the
remaining shapes the calculus needs.
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass

import numpy as np

from . import lp
from .core import INF, as_vector
from .errors import DimensionMismatch, RegionError


class Region:
    """Abstract convex region with membership, support, and sampling hooks."""

    dimension: int

    def contains(self, x) -> bool:
        raise NotImplementedError

    def interior_contains(self, x) -> bool:
        raise NotImplementedError

    def closure(self) -> "Region":
        raise NotImplementedError

    def interior(self) -> "Region":
        raise NotImplementedError

    def is_empty(self) -> bool:
        raise NotImplementedError

    def support(self, direction) -> float:
        """sup of <x, direction> over the region; -inf when empty."""
        raise NotImplementedError

    def distance_inf(self, x) -> float:
        """Chebyshev distance from x to the closure; +inf when empty."""
        raise NotImplementedError

    def bounding_box(self, clip: "Box") -> "Box":
        """A closed finite box containing region-intersect-clip."""
        raise NotImplementedError

    @property
    def algebraically_open(self) -> bool:
        return False

    @property
    def is_closed(self) -> bool:
        return False

    def describe(self) -> str:
        raise NotImplementedError


def _axis_token(lo, hi, lo_open, hi_open):
    lb = "(" if lo_open else "["
    rb = ")" if hi_open else "]"
    return f"{lb}{_fmt(lo)}, {_fmt(hi)}{rb}"


def _fmt(v: float) -> str:
    if v == INF:
        return "inf"
    if v == -INF:
        return "-inf"
    return format(v, ".12g")


@dataclass(frozen=True)
class Box(Region):
    """Product of intervals, each side open, closed, or infinite."""

    lower: tuple[float, ...]
    upper: tuple[float, ...]
    lower_open: tuple[bool, ...]
    upper_open: tuple[bool, ...]

    def __post_init__(self):
        n = len(self.lower)
        if n < 1 or len(self.upper) != n or len(self.lower_open) != n \
                or len(self.upper_open) != n:
            raise RegionError("box axis descriptions disagree in length")
        for lo, hi in zip(self.lower, self.upper):
            if math.isnan(lo) or math.isnan(hi):
                raise RegionError("box bounds must not be nan")
            if lo > hi:
                raise RegionError(f"lower bound {lo} exceeds upper bound {hi}")
        # Infinite bounds are open by construction.
        object.__setattr__(self, "lower_open", tuple(
            o or math.isinf(l) for o, l in zip(self.lower_open, self.lower)))
        object.__setattr__(self, "upper_open", tuple(
            o or math.isinf(u) for o, u in zip(self.upper_open, self.upper)))

    @property
    def dimension(self) -> int:
        return len(self.lower)

    def is_empty(self) -> bool:
        return any(
            lo == hi and (lo_o or hi_o)
            for lo, hi, lo_o, hi_o in zip(
                self.lower, self.upper, self.lower_open, self.upper_open)
        )

    def contains(self, x) -> bool:
        v = as_vector(x)
        if len(v) != self.dimension:
            raise DimensionMismatch("point dimension does not match region")
        for xi, lo, hi, lo_o, hi_o in zip(
                v, self.lower, self.upper, self.lower_open, self.upper_open):
            if lo_o:
                if not xi > lo:
                    return False
            elif not xi >= lo:
                return False
            if hi_o:
                if not xi < hi:
                    return False
            elif not xi <= hi:
                return False
        return True

    def interior_contains(self, x) -> bool:
        v = as_vector(x)
        if len(v) != self.dimension:
            raise DimensionMismatch("point dimension does not match region")
        return all(lo < xi < hi for xi, lo, hi in zip(v, self.lower, self.upper))

    def closure(self) -> "Box":
        return Box(self.lower, self.upper,
                   tuple(math.isinf(l) for l in self.lower),
                   tuple(math.isinf(u) for u in self.upper))

    def interior(self) -> "Box":
        n = self.dimension
        return Box(self.lower, self.upper, (True,) * n, (True,) * n)

    @property
    def algebraically_open(self) -> bool:
        return (not self.is_empty()
                and all(self.lower_open) and all(self.upper_open))

    @property
    def is_closed(self) -> bool:
        return all(o == math.isinf(l) for o, l in zip(self.lower_open, self.lower)) \
            and all(o == math.isinf(u) for o, u in zip(self.upper_open, self.upper))

    @property
    def is_whole_space(self) -> bool:
        return all(l == -INF for l in self.lower) and all(u == INF for u in self.upper)

    def support(self, direction) -> float:
        if self.is_empty():
            return -INF
        d = as_vector(direction)
        if len(d) != self.dimension:
            raise DimensionMismatch("direction dimension does not match region")
        total = 0.0
        for di, lo, hi in zip(d, self.lower, self.upper):
            if di > 0:
                if hi == INF:
                    return INF
                total += di * hi
            elif di < 0:
                if lo == -INF:
                    return INF
                total += di * lo
        return total

    def distance_inf(self, x) -> float:
        if self.is_empty():
            return INF
        v = as_vector(x)
        worst = 0.0
        for xi, lo, hi in zip(v, self.lower, self.upper):
            if xi < lo:
                worst = max(worst, lo - xi)
            elif xi > hi:
                worst = max(worst, xi - hi)
        return worst

    def intersect(self, other: "Box") -> "Box":
        if other.dimension != self.dimension:
            raise DimensionMismatch("box dimensions differ")
        lower, upper, lo_open, hi_open = [], [], [], []
        for i in range(self.dimension):
            if self.lower[i] > other.lower[i]:
                lo, lo_o = self.lower[i], self.lower_open[i]
            elif self.lower[i] < other.lower[i]:
                lo, lo_o = other.lower[i], other.lower_open[i]
            else:
                lo, lo_o = self.lower[i], self.lower_open[i] or other.lower_open[i]
            if self.upper[i] < other.upper[i]:
                hi, hi_o = self.upper[i], self.upper_open[i]
            elif self.upper[i] > other.upper[i]:
                hi, hi_o = other.upper[i], other.upper_open[i]
            else:
                hi, hi_o = self.upper[i], self.upper_open[i] or other.upper_open[i]
            if lo > hi:
                # Normalize the empty intersection to a recognizable empty box.
                lo, hi, lo_o, hi_o = 0.0, 0.0, True, True
            lower.append(lo)
            upper.append(hi)
            lo_open.append(lo_o)
            hi_open.append(hi_o)
        return Box(tuple(lower), tuple(upper), tuple(lo_open), tuple(hi_open))

    def bounding_box(self, clip: "Box") -> "Box":
        return self.closure().intersect(clip.closure())

    def describe(self) -> str:
        return " x ".join(
            _axis_token(lo, hi, lo_o, hi_o)
            for lo, hi, lo_o, hi_o in zip(
                self.lower, self.upper, self.lower_open, self.upper_open))


@dataclass(frozen=True)
class HalfSpace(Region):
    """{x : <normal, x> <= offset}, strict when closed is False."""

    normal: tuple[float, ...]
    offset: float
    closed: bool = True

    def __post_init__(self):
        if all(c == 0.0 for c in self.normal):
            raise RegionError("half-space normal must be nonzero")

    @property
    def dimension(self) -> int:
        return len(self.normal)

    def is_empty(self) -> bool:
        return False

    def _value(self, x) -> float:
        v = as_vector(x)
        if len(v) != self.dimension:
            raise DimensionMismatch("point dimension does not match region")
        return sum(a * b for a, b in zip(self.normal, v))

    def contains(self, x) -> bool:
        val = self._value(x)
        return val <= self.offset if self.closed else val < self.offset

    def interior_contains(self, x) -> bool:
        return self._value(x) < self.offset

    def closure(self) -> "HalfSpace":
        return HalfSpace(self.normal, self.offset, True)

    def interior(self) -> "HalfSpace":
        return HalfSpace(self.normal, self.offset, False)

    @property
    def algebraically_open(self) -> bool:
        return not self.closed

    @property
    def is_closed(self) -> bool:
        return self.closed

    def support(self, direction) -> float:
        d = as_vector(direction)
        if len(d) != self.dimension:
            raise DimensionMismatch("direction dimension does not match region")
        if all(c == 0.0 for c in d):
            return 0.0
        nn = sum(c * c for c in self.normal)
        s = sum(a * b for a, b in zip(d, self.normal)) / nn
        parallel = all(abs(di - s * ni) <= 1e-12 for di, ni in zip(d, self.normal))
        if parallel and s >= -1e-12:
            return s * self.offset
        return INF

    def distance_inf(self, x) -> float:
        excess = self._value(x) - self.offset
        if excess <= 0:
            return 0.0
        return excess / sum(abs(c) for c in self.normal)

    def bounding_box(self, clip: "Box") -> "Box":
        return clip.closure()

    def describe(self) -> str:
        coords = ", ".join(_fmt(c) for c in self.normal)
        op = "<=" if self.closed else "<"
        return f"halfspace ({coords}) {op} {_fmt(self.offset)}"


@dataclass(frozen=True)
class Polytope(Region):
    """Closed convex hull of a finite vertex list."""

    vertices: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        if not self.vertices:
            raise RegionError("polytope needs at least one vertex")
        n = len(self.vertices[0])
        if any(len(v) != n for v in self.vertices):
            raise RegionError("polytope vertices disagree in dimension")

    @property
    def dimension(self) -> int:
        return len(self.vertices[0])

    def is_empty(self) -> bool:
        return False

    def contains(self, x) -> bool:
        v = as_vector(x)
        if len(v) != self.dimension:
            raise DimensionMismatch("point dimension does not match region")
        k = len(self.vertices)
        mat = np.vstack([np.array(self.vertices, dtype=float).T,
                         np.ones((1, k))])
        rhs = np.array(list(v) + [1.0])
        sol = lp.solve(lp.LPProblem(np.zeros(k), mat, rhs))
        return sol.status is lp.LPStatus.OPTIMAL

    def interior_contains(self, x) -> bool:
        # Probe along the axes; adequate at desk scale for n <= 3.
        v = as_vector(x)
        delta = 1e-9
        for i in range(self.dimension):
            for sign in (1.0, -1.0):
                probe = list(v)
                probe[i] += sign * delta
                if not self.contains(tuple(probe)):
                    return False
        return True

    def closure(self) -> "Polytope":
        return self

    def interior(self) -> "Polytope":
        raise RegionError("polytope interiors are probed, not represented")

    @property
    def is_closed(self) -> bool:
        return True

    def support(self, direction) -> float:
        d = as_vector(direction)
        if len(d) != self.dimension:
            raise DimensionMismatch("direction dimension does not match region")
        return max(sum(a * b for a, b in zip(v, d)) for v in self.vertices)

    def distance_inf(self, x) -> float:
        v = as_vector(x)
        k = len(self.vertices)
        n = self.dimension
        # Variables: lambda (k), t, and slacks s+/s- (n each) with
        #   sum(lam_j v_j) + s+ - ... encoded as equalities via splits.
        # min t  s.t.  x_i - sum lam v_i <= t, sum lam v_i - x_i <= t.
        # Rewrite with nonnegative slacks: sum lam v_i + p_i - q_i = x_i,
        # p_i <= t, q_i <= t  ->  p_i + r_i = t with r_i >= 0.
        nv = k + 1 + 4 * n  # lam, t, p, q, rp, rq
        cols = {"lam": 0, "t": k, "p": k + 1, "q": k + 1 + n,
                "rp": k + 1 + 2 * n, "rq": k + 1 + 3 * n}
        rows = []
        rhs = []
        for i in range(n):
            row = np.zeros(nv)
            for j, vert in enumerate(self.vertices):
                row[j] = vert[i]
            row[cols["p"] + i] = 1.0
            row[cols["q"] + i] = -1.0
            rows.append(row)
            rhs.append(v[i])
        row = np.zeros(nv)
        row[:k] = 1.0
        rows.append(row)
        rhs.append(1.0)
        for i in range(n):
            row = np.zeros(nv)
            row[cols["p"] + i] = 1.0
            row[cols["rp"] + i] = 1.0
            row[cols["t"]] = -1.0
            rows.append(row)
            rhs.append(0.0)
            row = np.zeros(nv)
            row[cols["q"] + i] = 1.0
            row[cols["rq"] + i] = 1.0
            row[cols["t"]] = -1.0
            rows.append(row)
            rhs.append(0.0)
        obj = np.zeros(nv)
        obj[cols["t"]] = 1.0
        sol = lp.solve(lp.LPProblem(obj, np.vstack(rows), np.array(rhs)))
        if sol.status is not lp.LPStatus.OPTIMAL:
            return INF
        return max(0.0, sol.value)

    def bounding_box(self, clip: "Box") -> "Box":
        arr = np.array(self.vertices, dtype=float)
        lo = tuple(arr.min(axis=0))
        hi = tuple(arr.max(axis=0))
        n = self.dimension
        raw = Box(lo, hi, (False,) * n, (False,) * n)
        return raw.intersect(clip.closure())

    def describe(self) -> str:
        pts = ", ".join(
            "(" + ", ".join(_fmt(c) for c in v) + ")" for v in self.vertices)
        return f"polytope {{{pts}}}"


@dataclass(frozen=True)
class Intersection(Region):
    """Intersection of two regions kept symbolic; membership is the AND."""

    first: Region
    second: Region

    def __post_init__(self):
        if self.first.dimension != self.second.dimension:
            raise DimensionMismatch("intersected regions disagree in dimension")

    @property
    def dimension(self) -> int:
        return self.first.dimension

    def is_empty(self) -> bool:
        return self.first.is_empty() or self.second.is_empty()

    def contains(self, x) -> bool:
        return self.first.contains(x) and self.second.contains(x)

    def interior_contains(self, x) -> bool:
        return self.first.interior_contains(x) and self.second.interior_contains(x)

    def closure(self) -> "Region":
        return Intersection(self.first.closure(), self.second.closure())

    def interior(self) -> "Region":
        return Intersection(self.first.interior(), self.second.interior())

    @property
    def algebraically_open(self) -> bool:
        return self.first.algebraically_open and self.second.algebraically_open

    @property
    def is_closed(self) -> bool:
        return self.first.is_closed and self.second.is_closed

    def support(self, direction) -> float:
        raise RegionError("support of a symbolic intersection is not closed form")

    def distance_inf(self, x) -> float:
        # Lower bound: the true distance to the intersection can be larger.
        return max(self.first.distance_inf(x), self.second.distance_inf(x))

    def bounding_box(self, clip: "Box") -> "Box":
        return self.first.bounding_box(clip).intersect(
            self.second.bounding_box(clip))

    def describe(self) -> str:
        return f"({self.first.describe()}) & ({self.second.describe()})"


def intersect_regions(a: Region, b: Region) -> Region:
    """Intersection, simplified to a Box whenever both inputs are boxes."""
    if isinstance(a, Box) and isinstance(b, Box):
        return a.intersect(b)
    return Intersection(a, b)


def interval(lo, hi, lo_open=False, hi_open=False) -> Box:
    return Box((float(lo),), (float(hi),), (bool(lo_open),), (bool(hi_open),))


def closed_box(lower, upper) -> Box:
    lo, hi = as_vector(lower), as_vector(upper)
    n = len(lo)
    return Box(lo, hi, (False,) * n, (False,) * n)

def open_box(lower, upper) -> Box:
    lo, hi = as_vector(lower), as_vector(upper)
    n = len(lo)
    return Box(lo, hi, (True,) * n, (True,) * n)


def whole_space(n: int) -> Box:
    return Box((-INF,) * n, (INF,) * n, (True,) * n, (True,) * n)


_AXIS_RE = re.compile(
    r"^\s*([\[(])\s*([^,\s]+)\s*,\s*([^,\s\])]+)\s*([\])])\s*$")


def _parse_bound(text: str) -> float:
    t = text.strip().lower()
    if t in ("inf", "+inf"):
        return INF
    if t == "-inf":
        return -INF
    try:
        return float(t)
    except ValueError as exc:
        raise RegionError(f"bad bound literal {text!r}") from exc


def box_from_literal(text: str) -> Box:
    """Parse interval products like '(0, 1) x [-1, 1]' into a Box.

    Parentheses mark open ends, brackets closed ends; inf/-inf are accepted.
    """
    axes = text.split("x")
    lower, upper, lo_open, hi_open = [], [], [], []
    for axis in axes:
        m = _AXIS_RE.match(axis)
        if not m:
            raise RegionError(f"bad interval literal {axis.strip()!r}")
        lo = _parse_bound(m.group(2))
        hi = _parse_bound(m.group(3))
        lower.append(lo)
        upper.append(hi)
        lo_open.append(m.group(1) == "(")
        hi_open.append(m.group(4) == ")")
    return Box(tuple(lower), tuple(upper), tuple(lo_open), tuple(hi_open))


@dataclass(frozen=True)
class GridSpec:
    """Sampling density for primal lattices and the clipped dual grid.

    resolution is the per-axis point count on primal boxes, dual_bound the
    half-width of the dual clip box [-dual_bound, dual_bound]^n sampled with
    dual_resolution points per axis, and ambient_bound the half-width of the
    box that stands in for unbounded primal directions.
    """

    resolution: int = 41
    dual_bound: float = 10.0
    dual_resolution: int = 41
    ambient_bound: float = 10.0

    def __post_init__(self):
        if self.resolution < 2 or self.dual_resolution < 2:
            raise RegionError("grid resolutions must be at least 2")
        if self.dual_bound <= 0 or self.ambient_bound <= 0:
            raise RegionError("grid bounds must be positive")

    def primal_clip(self, n: int) -> Box:
        return closed_box((-self.ambient_bound,) * n, (self.ambient_bound,) * n)

    def dual_box(self, n: int) -> Box:
        return closed_box((-self.dual_bound,) * n, (self.dual_bound,) * n)

    def dual_lattice(self, n: int) -> list[tuple[float, ...]]:
        return grid_sample(self.dual_box(n), self, resolution=self.dual_resolution)


def _axis_lattice(lo, hi, lo_open, hi_open, k) -> np.ndarray:
    """k uniform samples of one interval, stepped inward from open ends.

    Closed-closed uses the endpoints; each open end shifts the lattice one
    step inside, so an open span is sampled with step span / (k + 1).
    """
    if lo == hi:
        return np.array([lo])
    n_open = int(lo_open) + int(hi_open)
    step = (hi - lo) / (k - 1 + n_open)
    start = lo + step if lo_open else lo
    return start + step * np.arange(k)


def grid_sample(region: Region, spec: GridSpec,
                resolution: int | None = None) -> list[tuple[float, ...]]:
    """Deterministic lattice over a region, lexicographic in the axes.

    Boxes are sampled per axis with the open-end offset rule; unbounded axes
    are clipped to the ambient box first. Other shapes sample their clipped
    bounding box and filter by membership. Every returned point satisfies
    contains().
    """
    k = resolution if resolution is not None else spec.resolution
    n = region.dimension
    if region.is_empty():
        return []
    if isinstance(region, Box):
        box = region.intersect(spec.primal_clip(n))
        if box.is_empty():
            return []
        axes = []
        for i in range(n):
            axes.append(_axis_lattice(box.lower[i], box.upper[i],
                                      box.lower_open[i], box.upper_open[i], k))
        return [tuple(float(c) for c in p) for p in itertools.product(*axes)]
    bbox = region.bounding_box(spec.primal_clip(n))
    if bbox.is_empty():
        return []
    axes = [_axis_lattice(bbox.lower[i], bbox.upper[i], False, False, k)
            for i in range(n)]
    return [tuple(float(c) for c in p) for p in itertools.product(*axes)
            if region.contains(p)]


def normal_cone_contains(region: Region, x, xstar, tol) -> bool:
    """Whether xstar lies in the normal cone of a closed region at x.

    Equivalent to membership of x plus support(region, xstar) <= <x, xstar>
    up to tol.eps_eq; exact for boxes and polytopes where the support is a
    closed form.
    """
    if not region.is_closed:
        raise RegionError("normal cones are taken at points of closed regions")
    if not region.contains(x):
        return False
    xv, sv = as_vector(x), as_vector(xstar)
    sup_val = region.support(sv)
    if sup_val == INF:
        return False
    return sup_val <= sum(a * b for a, b in zip(xv, sv)) + tol.eps_eq


def normal_interval_1d(box: Box, x: float, slack: float = 1e-12):
    """Normal cone of a 1-d closed box as an interval (lo, hi), or None.

    Returns None when x is outside the box. Endpoints may be +-inf.
    """
    if box.dimension != 1:
        raise DimensionMismatch("expected a one dimensional box")
    lo, hi = box.lower[0], box.upper[0]
    if x < lo - slack or x > hi + slack:
        return None
    at_lo = abs(x - lo) <= slack
    at_hi = abs(x - hi) <= slack
    if at_lo and at_hi:
        return (-INF, INF)
    if at_lo:
        return (-INF, 0.0)
    if at_hi:
        return (0.0, INF)
    return (0.0, 0.0)
