"""Operator graphs in Z = R^n x R^n and their pointwise calculus.

Each handle answers the same questions: domain and graph membership, a finite
enumeration of its graph at a declared sampling density, and the restricted
Fitzpatrick value

    phi_{T|V}(z) = sup { z . w - <u, u*> : w = (u, u*) in graph(T), u in V }.

Analytic kinds carry closed forms for phi; phi_is_exact reports whether the
closed form applies for a given window V, and callers fall back to the
enumerated sup (a lower bound) otherwise. The structural zero of the dust
tolerance below guards float noise in boundary comparisons, nothing more.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .core import (INF, PrimalDualPoint, Tolerance, as_vector, coupling,
                   natural_pairing, monotone_gap, supremum)
from .errors import (DimensionMismatch, MonokitError, ValidationError)
from .regions import (Box, GridSpec, Region, box_from_literal,
                      grid_sample, intersect_regions, interval,
                      normal_cone_contains, normal_interval_1d, whole_space)
from .verdicts import Property, Verdict, finish

_DUST = 1e-12

DEFAULT_GRID = GridSpec()


def _window(n: int, V: Region | None) -> Region:
    return whole_space(n) if V is None else V


def _interval_sup(box1d: Box, slope: float) -> float | None:
    """sup of slope * u over a 1-d box; None when the box is empty."""
    if box1d.is_empty():
        return None
    lo, hi = box1d.lower[0], box1d.upper[0]
    if slope > 0:
        return INF if hi == INF else slope * hi
    if slope < 0:
        return INF if lo == -INF else slope * lo
    return 0.0


class OperatorHandle:
    """Common query surface for every operator kind."""

    dimension: int

    @property
    def enumeration_exact(self) -> bool:
        """True when enumerate_graph returns the whole graph, not a sample."""
        return False

    def domain_region(self) -> Region | None:
        """The domain as a region when it has one; None for point clouds."""
        return None

    def domain_contains(self, x, tol: Tolerance) -> bool:
        raise NotImplementedError

    def domain_closure_contains(self, x, tol: Tolerance) -> bool:
        region = self.domain_region()
        if region is None:
            return self.domain_contains(x, tol)
        return region.distance_inf(x) <= tol.delta_dom

    def graph_contains(self, z: PrimalDualPoint, tol: Tolerance) -> bool:
        raise NotImplementedError

    def enumerate_graph(self, V: Region | None,
                        g: GridSpec) -> list[PrimalDualPoint]:
        raise NotImplementedError

    def phi(self, V: Region | None, z: PrimalDualPoint,
            g: GridSpec | None = None) -> float:
        raise NotImplementedError

    def phi_is_exact(self, V: Region | None) -> bool:
        return False

    def _phi_sampled(self, V, z, g) -> float:
        pts = self.enumerate_graph(V, g or DEFAULT_GRID)
        return supremum(natural_pairing(z, w) - coupling(w) for w in pts)

    def describe(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class FiniteGraph(OperatorHandle):
    """An explicit finite set of graph points."""

    points: tuple[PrimalDualPoint, ...]

    def __post_init__(self):
        dims = {p.dimension for p in self.points}
        if len(dims) > 1:
            raise DimensionMismatch("graph points disagree in dimension")
        if len(set(self.points)) != len(self.points):
            raise ValidationError("graph points must be pairwise distinct")

    @property
    def dimension(self) -> int:
        if not self.points:
            raise MonokitError("empty graph has no dimension")
        return self.points[0].dimension

    @property
    def empty(self) -> bool:
        return not self.points

    @property
    def enumeration_exact(self) -> bool:
        return True

    def domain_contains(self, x, tol):
        v = as_vector(x)
        return any(max(abs(a - b) for a, b in zip(v, p.x)) <= tol.delta_dom
                   for p in self.points)

    def domain_closure_contains(self, x, tol):
        return self.domain_contains(x, tol)

    def graph_contains(self, z, tol):
        return any(
            max(abs(a - b) for a, b in zip(z.x + z.xstar, p.x + p.xstar))
            <= tol.delta_dom for p in self.points)

    def enumerate_graph(self, V, g):
        if V is None:
            return list(self.points)
        return [p for p in self.points if V.contains(p.x)]

    def phi(self, V, z, g=None):
        pts = self.enumerate_graph(V, g)
        return supremum(natural_pairing(z, w) - coupling(w) for w in pts)

    def phi_is_exact(self, V):
        return True

    def describe(self) -> str:
        return f"finite graph ({len(self.points)} points)"


@dataclass(frozen=True)
class Flat(OperatorHandle):
    """Graph R x {wstar}: one dual value over a whole primal region."""

    region: Region
    wstar: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "wstar", as_vector(self.wstar))
        if self.region.dimension != len(self.wstar):
            raise DimensionMismatch("region and dual value disagree in dimension")

    @property
    def dimension(self) -> int:
        return self.region.dimension

    def domain_region(self):
        return self.region

    def domain_contains(self, x, tol):
        return self.region.contains(x)

    def graph_contains(self, z, tol):
        if not self.region.contains(z.x):
            return False
        return max(abs(a - b) for a, b in zip(z.xstar, self.wstar)) <= tol.delta_dom

    def enumerate_graph(self, V, g):
        dom = self.region if V is None else intersect_regions(self.region, V)
        return [PrimalDualPoint(x, self.wstar) for x in grid_sample(dom, g)]

    def phi(self, V, z, g=None):
        # sup over u in R and V of <x, w*> + <u, x* - w*>.
        base = self.region
        win = _window(self.dimension, V)
        if isinstance(base, Box) and isinstance(win, Box):
            dom = base.intersect(win)
            shifted = tuple(a - b for a, b in zip(z.xstar, self.wstar))
            sup_val = dom.support(shifted)
            if sup_val == -INF:
                return -INF
            return sum(a * b for a, b in zip(z.x, self.wstar)) + sup_val
        return self._phi_sampled(V, z, g)

    def phi_is_exact(self, V):
        return isinstance(self.region, Box) and (V is None or isinstance(V, Box))

    def describe(self) -> str:
        ws = ", ".join(format(c, ".12g") for c in self.wstar)
        return f"flat {self.region.describe()} with dual ({ws})"


@dataclass(frozen=True)
class NormalConeBox(OperatorHandle):
    """The normal cone operator of a closed finite box."""

    box: Box

    def __post_init__(self):
        if not self.box.is_closed:
            raise ValidationError("normal cones require a closed box")
        if any(math.isinf(b) for b in self.box.lower + self.box.upper):
            raise ValidationError("normal cones require finite bounds")
        if self.box.is_empty():
            raise ValidationError("normal cones require a nonempty box")

    @property
    def dimension(self) -> int:
        return self.box.dimension

    def domain_region(self):
        return self.box

    def domain_contains(self, x, tol):
        return self.box.contains(x)

    def graph_contains(self, z, tol):
        return normal_cone_contains(self.box, z.x, z.xstar, tol)

    def enumerate_graph(self, V, g):
        dom = self.box if V is None else intersect_regions(self.box, V)
        mags = [float(m) for m in
                np.linspace(0.0, g.dual_bound, g.dual_resolution)]
        out: dict[PrimalDualPoint, None] = {}
        for x in grid_sample(dom, g):
            per_axis = []
            for i in range(self.dimension):
                lo, hi = self.box.lower[i], self.box.upper[i]
                opts = {0.0}
                if abs(x[i] - lo) <= _DUST:
                    opts.update(-m for m in mags)
                if abs(x[i] - hi) <= _DUST:
                    opts.update(mags)
                per_axis.append(sorted(opts))
            for combo in itertools.product(*per_axis):
                out.setdefault(
                    PrimalDualPoint(x, tuple(float(c) for c in combo)))
        return list(out)

    def phi(self, V, z, g=None):
        """Exact restricted value by scanning the finitely many faces.

        On the relative interior of a face the cone is constant, so the sup
        splits into a support term over face-intersect-V plus per axis terms
        that are 0 or +inf depending on which side of the pinned bound x sits.
        """
        win = _window(self.dimension, V)
        if not isinstance(win, Box):
            return self._phi_sampled(V, z, g)
        best = -INF
        n = self.dimension
        for tags in itertools.product((0, 1, 2), repeat=n):
            axes_lo, axes_hi, axes_loo, axes_hio = [], [], [], []
            blow = False
            skip = False
            for i, t in enumerate(tags):
                lo, hi = self.box.lower[i], self.box.upper[i]
                if lo == hi:
                    if t != 1:
                        skip = True
                        break
                    axes_lo.append(lo)
                    axes_hi.append(lo)
                    axes_loo.append(False)
                    axes_hio.append(False)
                    if abs(z.x[i] - lo) > _DUST:
                        blow = True
                elif t == 0:
                    axes_lo.append(lo)
                    axes_hi.append(hi)
                    axes_loo.append(True)
                    axes_hio.append(True)
                elif t == 1:
                    axes_lo.append(lo)
                    axes_hi.append(lo)
                    axes_loo.append(False)
                    axes_hio.append(False)
                    if z.x[i] < lo - _DUST:
                        blow = True
                else:
                    axes_lo.append(hi)
                    axes_hi.append(hi)
                    axes_loo.append(False)
                    axes_hio.append(False)
                    if z.x[i] > hi + _DUST:
                        blow = True
            if skip:
                continue
            face = Box(tuple(axes_lo), tuple(axes_hi),
                       tuple(axes_loo), tuple(axes_hio))
            cut = face.intersect(win)
            if cut.is_empty():
                continue
            if blow:
                return INF
            best = max(best, cut.support(z.xstar))
        return best

    def phi_is_exact(self, V):
        return V is None or isinstance(V, Box)

    def describe(self) -> str:
        return f"normal cone of {self.box.describe()}"


@dataclass(frozen=True)
class AbsSubdiff(OperatorHandle):
    """Subdifferential of a|.| on the line: sign duals and a pivot segment."""

    slope: float

    def __post_init__(self):
        if not self.slope > 0:
            raise ValidationError("slope must be positive")

    @property
    def dimension(self) -> int:
        return 1

    def domain_region(self):
        return whole_space(1)

    def domain_contains(self, x, tol):
        return True

    def graph_contains(self, z, tol):
        x, s, a = z.x[0], z.xstar[0], self.slope
        if x > _DUST:
            return abs(s - a) <= tol.delta_dom
        if x < -_DUST:
            return abs(s + a) <= tol.delta_dom
        return -a - tol.delta_dom <= s <= a + tol.delta_dom

    def enumerate_graph(self, V, g):
        a = self.slope
        win = _window(1, V)
        out = []
        for x in grid_sample(win, g):
            xi = x[0]
            if xi > _DUST:
                out.append(PrimalDualPoint(x, (a,)))
            elif xi < -_DUST:
                out.append(PrimalDualPoint(x, (-a,)))
            else:
                duals = {-a, a}
                duals.update(v[0] for v in g.dual_lattice(1) if -a < v[0] < a)
                out.extend(PrimalDualPoint(x, (d,)) for d in sorted(duals))
        return out

    def phi(self, V, z, g=None):
        win = _window(1, V)
        if not isinstance(win, Box):
            return self._phi_sampled(V, z, g)
        a, x, s = self.slope, z.x[0], z.xstar[0]
        cands = []
        pos = _interval_sup(win.intersect(interval(0.0, INF, True, True)), s - a)
        if pos is not None:
            cands.append(INF if pos == INF else a * x + pos)
        neg = _interval_sup(win.intersect(interval(-INF, 0.0, True, True)), s + a)
        if neg is not None:
            cands.append(INF if neg == INF else -a * x + neg)
        if win.contains((0.0,)):
            cands.append(a * abs(x))
        return supremum(cands)

    def phi_is_exact(self, V):
        return V is None or isinstance(V, Box)

    def describe(self) -> str:
        return f"subdifferential of {format(self.slope, '.12g')}|x|"


@dataclass(frozen=True)
class PointComplement(OperatorHandle):
    """Graph {x0} x (dual space minus the origin)."""

    anchor: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "anchor", as_vector(self.anchor))

    @property
    def dimension(self) -> int:
        return len(self.anchor)

    def domain_region(self):
        n = self.dimension
        return Box(self.anchor, self.anchor, (False,) * n, (False,) * n)

    def _at_anchor(self, x) -> bool:
        return max(abs(a - b) for a, b in zip(as_vector(x), self.anchor)) <= _DUST

    def domain_contains(self, x, tol):
        return self._at_anchor(x)

    def graph_contains(self, z, tol):
        # The dual must be nonzero exactly: the origin is the excluded point.
        return self._at_anchor(z.x) and any(c != 0.0 for c in z.xstar)

    def enumerate_graph(self, V, g):
        if V is not None and not V.contains(self.anchor):
            return []
        return [PrimalDualPoint(self.anchor, u) for u in
                g.dual_lattice(self.dimension) if any(c != 0.0 for c in u)]

    def phi(self, V, z, g=None):
        if V is not None and not V.contains(self.anchor):
            return -INF
        if self._at_anchor(z.x):
            return coupling(z)
        return INF

    def phi_is_exact(self, V):
        return True

    def describe(self) -> str:
        a = ", ".join(format(c, ".12g") for c in self.anchor)
        return f"all nonzero duals over ({a})"


@dataclass(frozen=True)
class Linear(OperatorHandle):
    """x maps to M x; requires M + M^T positive semidefinite up to 1e-9."""

    matrix: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValidationError("matrix must be square")
        sym = (m + m.T) / 2.0
        if np.linalg.eigvalsh(sym).min() < -1e-9:
            raise ValidationError(
                "matrix fails monotonicity: M + M^T has a negative eigenvalue")
        object.__setattr__(self, "matrix",
                           tuple(tuple(float(c) for c in row) for row in m))

    @property
    def dimension(self) -> int:
        return len(self.matrix)

    def _m(self) -> np.ndarray:
        return np.array(self.matrix, dtype=float)

    def domain_region(self):
        return whole_space(self.dimension)

    def domain_contains(self, x, tol):
        return True

    def graph_contains(self, z, tol):
        mx = self._m() @ np.array(z.x)
        return float(np.abs(mx - np.array(z.xstar)).max()) <= tol.delta_dom

    def enumerate_graph(self, V, g):
        m = self._m()
        win = _window(self.dimension, V)
        out = []
        for x in grid_sample(win, g):
            mx = m @ np.array(x)
            out.append(PrimalDualPoint(x, tuple(float(c) for c in mx)))
        return out

    def phi(self, V, z, g=None):
        """On the whole space the sup is a quadratic maximization:
        sup_u <M^T x + x*, u> - <u, M u>, solved by (M + M^T) u = M^T x + x*.
        An inconsistent system means the sup runs away to +inf."""
        if not self.phi_is_exact(V):
            return self._phi_sampled(V, z, g)
        m = self._m()
        s = m + m.T
        b = m.T @ np.array(z.x) + np.array(z.xstar)
        u, *_ = np.linalg.lstsq(s, b, rcond=None)
        residual = np.abs(s @ u - b).max() if b.size else 0.0
        scale = max(1.0, float(np.abs(b).max(initial=0.0)))
        if residual > 1e-9 * scale:
            return INF
        return float(0.5 * b @ u)

    def phi_is_exact(self, V):
        return V is None or (isinstance(V, Box) and V.is_whole_space)

    def describe(self) -> str:
        return f"linear map of dimension {self.dimension}"


@dataclass(frozen=True)
class Restriction(OperatorHandle):
    """A base operator viewed through a primal window."""

    base: OperatorHandle
    window: Region

    def __post_init__(self):
        if self.base.dimension != self.window.dimension:
            raise DimensionMismatch("window dimension does not match operator")

    @property
    def dimension(self) -> int:
        return self.base.dimension

    @property
    def enumeration_exact(self) -> bool:
        return self.base.enumeration_exact

    def _inner(self, V: Region | None) -> Region:
        return self.window if V is None else intersect_regions(self.window, V)

    def domain_region(self):
        base = self.base.domain_region()
        if base is None:
            return None
        return intersect_regions(base, self.window)

    def domain_contains(self, x, tol):
        return self.window.contains(x) and self.base.domain_contains(x, tol)

    def domain_closure_contains(self, x, tol):
        region = self.domain_region()
        if region is None:
            return self.window.closure().contains(x) \
                and self.base.domain_closure_contains(x, tol)
        return region.distance_inf(x) <= tol.delta_dom

    def graph_contains(self, z, tol):
        return self.window.contains(z.x) and self.base.graph_contains(z, tol)

    def enumerate_graph(self, V, g):
        return self.base.enumerate_graph(self._inner(V), g)

    def phi(self, V, z, g=None):
        return self.base.phi(self._inner(V), z, g)

    def phi_is_exact(self, V):
        return self.base.phi_is_exact(self._inner(V))

    def describe(self) -> str:
        return f"{self.base.describe()} restricted to {self.window.describe()}"


def _dual_candidates(T: OperatorHandle, x, tol: Tolerance):
    """The dual fiber T(x) as ('points', [...]), ('interval', lo, hi), or None.

    Intervals only arise in dimension one. None means the kind has no cheap
    fiber description and callers should fall back to sampling.
    """
    if isinstance(T, FiniteGraph):
        v = as_vector(x)
        pts = [p.xstar for p in T.points
               if max(abs(a - b) for a, b in zip(v, p.x)) <= tol.delta_dom]
        return ("points", pts)
    if isinstance(T, Flat):
        if T.region.contains(x):
            return ("points", [T.wstar])
        return ("points", [])
    if isinstance(T, Linear):
        mx = T._m() @ np.array(as_vector(x))
        return ("points", [tuple(float(c) for c in mx)])
    if isinstance(T, AbsSubdiff):
        xi = as_vector(x)[0]
        if xi > _DUST:
            return ("points", [(T.slope,)])
        if xi < -_DUST:
            return ("points", [(-T.slope,)])
        return ("interval", -T.slope, T.slope)
    if isinstance(T, NormalConeBox) and T.dimension == 1:
        band = normal_interval_1d(T.box, as_vector(x)[0])
        if band is None:
            return ("points", [])
        return ("interval", band[0], band[1])
    if isinstance(T, Restriction):
        if not T.window.contains(x):
            return ("points", [])
        return _dual_candidates(T.base, x, tol)
    return None


@dataclass(frozen=True)
class SumNormalCone(OperatorHandle):
    """A + (normal cone of a closed box C), enumerated on aligned lattices."""

    summand: OperatorHandle
    box: Box

    def __post_init__(self):
        if self.summand.dimension != self.box.dimension:
            raise DimensionMismatch("summand and box disagree in dimension")
        if not self.box.is_closed or self.box.is_empty():
            raise ValidationError("the constraint set must be a nonempty closed box")

    @property
    def dimension(self) -> int:
        return self.summand.dimension

    def domain_region(self):
        base = self.summand.domain_region()
        if base is None:
            return None
        return intersect_regions(base, self.box)

    def domain_contains(self, x, tol):
        return self.box.contains(x) and self.summand.domain_contains(x, tol)

    def graph_contains(self, z, tol):
        if not self.box.contains(z.x):
            return False
        cands = _dual_candidates(self.summand, z.x, tol)
        if cands is None:
            return self._sampled_membership(z, tol)
        if cands[0] == "points":
            for astar in cands[1]:
                rest = tuple(a - b for a, b in zip(z.xstar, astar))
                if normal_cone_contains(self.box, z.x, rest, tol):
                    return True
            return False
        _, lo, hi = cands
        band = normal_interval_1d(self.box, z.x[0])
        if band is None:
            return False
        s = z.xstar[0]
        # Need some a* in [lo, hi] with s - a* in the cone interval.
        want_lo = band[0] + lo - tol.delta_dom
        want_hi = band[1] + hi + tol.delta_dom
        return want_lo <= s <= want_hi

    def _sampled_membership(self, z, tol):
        pts = self.enumerate_graph(None, DEFAULT_GRID)
        return any(
            max(abs(a - b) for a, b in zip(z.x + z.xstar, p.x + p.xstar))
            <= tol.delta_dom for p in pts)

    def enumerate_graph(self, V, g):
        dom = self.box if V is None else intersect_regions(self.box, V)
        cone = NormalConeBox(self.box)
        mags = [float(m) for m in
                np.linspace(0.0, g.dual_bound, g.dual_resolution)]
        out: dict[PrimalDualPoint, None] = {}
        for w in self.summand.enumerate_graph(dom, g):
            if not self.box.contains(w.x):
                continue
            per_axis = []
            for i in range(self.dimension):
                lo, hi = self.box.lower[i], self.box.upper[i]
                opts = {0.0}
                if abs(w.x[i] - lo) <= _DUST:
                    opts.update(-m for m in mags)
                if abs(w.x[i] - hi) <= _DUST:
                    opts.update(mags)
                per_axis.append(sorted(opts))
            for combo in itertools.product(*per_axis):
                s = tuple(a + b for a, b in zip(w.xstar, combo))
                out.setdefault(PrimalDualPoint(w.x, s))
        return list(out)

    def phi(self, V, z, g=None):
        return self._phi_sampled(V, z, g)

    def describe(self) -> str:
        return (f"{self.summand.describe()} plus normal cone of "
                f"{self.box.describe()}")


@dataclass(frozen=True)
class PairSum(OperatorHandle):
    """Pointwise sum of two operators on primal matches within a radius."""

    first: OperatorHandle
    second: OperatorHandle
    match_tol: float = 1e-6
    empty: bool = False

    def __post_init__(self):
        if self.first.dimension != self.second.dimension:
            raise DimensionMismatch("summands disagree in dimension")

    @property
    def dimension(self) -> int:
        return self.first.dimension

    def domain_region(self):
        ra = self.first.domain_region()
        rb = self.second.domain_region()
        if ra is None or rb is None:
            return None
        return intersect_regions(ra, rb)

    def domain_contains(self, x, tol):
        return self.first.domain_contains(x, tol) \
            and self.second.domain_contains(x, tol)

    def graph_contains(self, z, tol):
        ca = _dual_candidates(self.first, z.x, tol)
        cb = _dual_candidates(self.second, z.x, tol)
        if ca is None or cb is None:
            return self._sampled_membership(z, tol)
        if ca[0] == "interval" and cb[0] == "interval":
            lo = ca[1] + cb[1] - tol.delta_dom
            hi = ca[2] + cb[2] + tol.delta_dom
            return lo <= z.xstar[0] <= hi
        if ca[0] == "interval" or cb[0] == "interval":
            band, pts = (ca, cb[1]) if ca[0] == "interval" else (cb, ca[1])
            for p in pts:
                rest = z.xstar[0] - p[0]
                if band[1] - tol.delta_dom <= rest <= band[2] + tol.delta_dom:
                    return True
            return False
        for pa in ca[1]:
            for pb in cb[1]:
                total = tuple(a + b for a, b in zip(pa, pb))
                if max(abs(a - b) for a, b in zip(z.xstar, total)) \
                        <= tol.delta_dom:
                    return True
        return False

    def _sampled_membership(self, z, tol):
        pts = self.enumerate_graph(None, DEFAULT_GRID)
        return any(
            max(abs(a - b) for a, b in zip(z.x + z.xstar, p.x + p.xstar))
            <= tol.delta_dom for p in pts)

    def _joint_window(self, V: Region | None) -> Region | None:
        """The window cut down to both domains, so the summands sample one
        shared lattice and primal matching is exact rather than accidental."""
        win = V
        for r in (self.first.domain_region(), self.second.domain_region()):
            if r is not None:
                win = r if win is None else intersect_regions(win, r)
        return win

    def enumerate_graph(self, V, g):
        win = self._joint_window(V)
        pa = self.first.enumerate_graph(win, g)
        pb = self.second.enumerate_graph(win, g)
        by_primal: dict[tuple[float, ...], list[PrimalDualPoint]] = {}
        for p in pb:
            by_primal.setdefault(p.x, []).append(p)
        near: list[tuple[float, ...]] = sorted(by_primal)
        out: dict[PrimalDualPoint, None] = {}
        for a in pa:
            matches = by_primal.get(a.x, [])
            if not matches:
                matches = [q for key in near
                           if max(abs(u - v) for u, v in zip(key, a.x))
                           <= self.match_tol
                           for q in by_primal[key]]
            for b in matches:
                s = tuple(u + v for u, v in zip(a.xstar, b.xstar))
                out.setdefault(PrimalDualPoint(a.x, s))
        return list(out)

    def phi(self, V, z, g=None):
        return self._phi_sampled(V, z, g)

    def describe(self) -> str:
        return f"sum of {self.first.describe()} and {self.second.describe()}"


def restrict(T: OperatorHandle, V: Region) -> OperatorHandle:
    """T viewed through the primal window V.

    Finite graphs filter eagerly (an empty result is legal and flagged via
    the handle's empty property); a flat piece over a box shrinks its region;
    everything else wraps in a Restriction. Restricting twice intersects.
    """
    if T.dimension != V.dimension:
        raise DimensionMismatch("window dimension does not match operator")
    if isinstance(T, FiniteGraph):
        return FiniteGraph(tuple(p for p in T.points if V.contains(p.x)))
    if isinstance(T, Flat) and isinstance(T.region, Box) and isinstance(V, Box):
        return Flat(T.region.intersect(V), T.wstar)
    if isinstance(T, Restriction):
        return Restriction(T.base, intersect_regions(T.window, V))
    return Restriction(T, V)


def _pairwise_gap_failures(points, eps):
    """First lexicographic pair with a negative gap, if any."""
    n = len(points)
    if n < 2:
        return []
    xs = np.array([p.x for p in points])
    ss = np.array([p.xstar for p in points])
    cps = (xs * ss).sum(axis=1)
    block = 512
    for i0 in range(0, n, block):
        i1 = min(n, i0 + block)
        cross = xs[i0:i1] @ ss.T + ss[i0:i1] @ xs.T
        gaps = cps[i0:i1, None] + cps[None, :] - cross
        for i in range(i0, i1):
            row = gaps[i - i0]
            bad = np.nonzero(row[i + 1:] < -eps)[0]
            if bad.size:
                j = i + 1 + int(bad[0])
                return [(points[i], points[j])]
    return []


def is_monotone(T: OperatorHandle, tol: Tolerance,
                g: GridSpec | None = None,
                V: Region | None = None) -> Verdict:
    """Pairwise gap check over the enumerated graph; witness pair on failure."""
    g = g or DEFAULT_GRID
    pts = T.enumerate_graph(V, g)
    failures = _pairwise_gap_failures(pts, tol.eps_eq)
    return finish(Property.MONOTONE, failures,
                  approximate=not T.enumeration_exact, grid=g, tol=tol,
                  region_ids=() if V is None else (V.describe(),))


def domain_contains(T: OperatorHandle, x, tol: Tolerance) -> bool:
    return T.domain_contains(x, tol)


def mr_test(T: OperatorHandle, V: Region | None, z: PrimalDualPoint,
            tol: Tolerance, g: GridSpec | None = None) -> bool:
    """Whether z is monotonically related to every graph point of T over V.

    Uses the closed-form phi when exact for this window (phi <= coupling +
    eps_eq); otherwise checks pairwise gaps against the enumerated graph.
    For finite graphs the two routes are algebraically identical.
    """
    if T.phi_is_exact(V):
        return T.phi(V, z, g) <= coupling(z) + tol.eps_eq
    pts = T.enumerate_graph(V, g or DEFAULT_GRID)
    return all(monotone_gap(z, w) >= -tol.eps_eq for w in pts)


def enumerate_range(T: OperatorHandle, g: GridSpec | None = None,
                    V: Region | None = None) -> list[tuple[float, ...]]:
    """Sorted distinct dual parts of the enumerated graph."""
    pts = T.enumerate_graph(V, g or DEFAULT_GRID)
    return sorted({p.xstar for p in pts})


def _as_region(value) -> Region:
    if isinstance(value, Region):
        return value
    if isinstance(value, str):
        return box_from_literal(value)
    raise ValidationError(f"cannot interpret {value!r} as a region")


def build_operator(spec: dict) -> OperatorHandle:
    """Construct a handle from a parsed kind/field mapping."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ValidationError("operator description needs a 'kind' field")
    kind = spec["kind"]
    fields = {k: v for k, v in spec.items() if k != "kind"}

    def take(*names):
        missing = [n for n in names if n not in fields]
        if missing:
            raise ValidationError(
                f"operator kind {kind!r} missing fields: {', '.join(missing)}")
        extra = sorted(set(fields) - set(names))
        if extra:
            raise ValidationError(
                f"operator kind {kind!r} got unknown fields: {', '.join(extra)}")
        return [fields[n] for n in names]

    if kind == "finite_graph":
        (rows,) = take("points")
        pts = []
        for row in rows:
            row = list(row)
            if len(row) % 2 != 0 or not row:
                raise ValidationError(
                    "finite_graph rows are flat [x..., xstar...] lists")
            n = len(row) // 2
            pts.append(PrimalDualPoint(tuple(float(c) for c in row[:n]),
                                       tuple(float(c) for c in row[n:])))
        return FiniteGraph(tuple(pts))
    if kind == "flat":
        region, wstar = take("region", "wstar")
        return Flat(_as_region(region), as_vector(wstar))
    if kind == "normal_cone_box":
        (box,) = take("box")
        region = _as_region(box)
        if not isinstance(region, Box):
            raise ValidationError("normal_cone_box needs a box region")
        return NormalConeBox(region)
    if kind == "abs_subdiff":
        (slope,) = take("slope")
        return AbsSubdiff(float(slope))
    if kind == "point_complement":
        (anchor,) = take("anchor")
        return PointComplement(as_vector(anchor))
    if kind == "linear":
        (matrix,) = take("matrix")
        return Linear(tuple(tuple(float(c) for c in row) for row in matrix))
    if kind == "restriction":
        base, region = take("operator", "region")
        return restrict(build_operator(base), _as_region(region))
    if kind == "sum_normal_cone":
        base, box = take("operator", "box")
        region = _as_region(box)
        if not isinstance(region, Box):
            raise ValidationError("sum_normal_cone needs a box region")
        return SumNormalCone(build_operator(base), region)
    if kind == "pair_sum":
        first, second = take("first", "second")
        return PairSum(build_operator(first), build_operator(second))
    raise ValidationError(f"unknown operator kind {kind!r}")
