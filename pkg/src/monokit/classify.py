"""Grid-scale deciders for localized operator properties.

Each check quantifies over the finite lattice of a primal window times the
clipped dual box and returns a Verdict recording the grid, tolerances, and
the first few counterexamples in scan order. Positive answers are statements
about the grid; they are flagged approximate whenever a consumed value came
from a sampled rather than closed-form source.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .convex import Envelope
from .core import DEFAULT_TOL, PrimalDualPoint, Tolerance, coupling
from .errors import ToleranceError, UnsatisfiedHypothesis
from .fitzpatrick import (coupling_band, is_representative, penot_envelope,
                          scan_grid)
from .operators import (DEFAULT_GRID, OperatorHandle, is_monotone, mr_test)
from .regions import (Box, GridSpec, Region, grid_sample, intersect_regions,
                      whole_space)
from .verdicts import Property, Verdict, finish


def _defaults(g, tol):
    return (g or DEFAULT_GRID), (tol or DEFAULT_TOL)


def _meets_domain(T: OperatorHandle, V: Region, g: GridSpec,
                  tol: Tolerance) -> bool:
    region = T.domain_region()
    if region is not None:
        cut = intersect_regions(region, V)
        if isinstance(cut, Box):
            return not cut.is_empty()
        return bool(grid_sample(cut, g))
    return any(V.contains(p.x) for p in T.enumerate_graph(None, g))


def check_vni(T: OperatorHandle, V: Region, g: GridSpec | None = None,
              tol: Tolerance | None = None) -> Verdict:
    """phi of the restriction stays above coupling - eps_strict on the grid.

    A window that misses the domain yields a vacuous positive: the
    restriction is empty and the check ranges over nothing meaningful.
    """
    g, tol = _defaults(g, tol)
    approx = not T.phi_is_exact(V)
    ids = (V.describe(),)
    if not _meets_domain(T, V, g, tol):
        return Verdict(Property.VNI, True, approximate=approx, grid=g,
                       tol=tol, region_ids=ids, vacuous=True,
                       notes=("window does not meet the domain",))
    failures = [z for z in scan_grid(V, g)
                if T.phi(V, z, g) < coupling(z) - tol.eps_strict]
    return finish(Property.VNI, failures, approximate=approx, grid=g,
                  tol=tol, region_ids=ids)


def check_locates(T: OperatorHandle, V: Region, g: GridSpec | None = None,
                  tol: Tolerance | None = None, *,
                  target: Region | None = None) -> Verdict:
    """Monotonically related grid points over V have primal in the target.

    The target defaults to the operator's domain, tested through its own
    membership rule.
    """
    g, tol = _defaults(g, tol)
    failures = []
    for z in scan_grid(V, g):
        if not mr_test(T, V, z, tol, g):
            continue
        ok = (T.domain_contains(z.x, tol) if target is None
              else target.contains(z.x))
        if not ok:
            failures.append(z)
    return finish(Property.LOCATES, failures,
                  approximate=not T.phi_is_exact(V), grid=g, tol=tol,
                  region_ids=(V.describe(),))


def check_identifies(T: OperatorHandle, V: Region, g: GridSpec | None = None,
                     tol: Tolerance | None = None) -> Verdict:
    """Monotonically related grid points over V already lie in the graph."""
    g, tol = _defaults(g, tol)
    failures = [z for z in scan_grid(V, g)
                if mr_test(T, V, z, tol, g) and not T.graph_contains(z, tol)]
    return finish(Property.IDENTIFIES, failures,
                  approximate=not T.phi_is_exact(V), grid=g, tol=tol,
                  region_ids=(V.describe(),))


def check_v_representable(T: OperatorHandle, V: Region,
                          g: GridSpec | None = None,
                          tol: Tolerance | None = None) -> Verdict:
    """The coupling envelope of the restricted graph traces exactly it.

    Runs the pairwise monotonicity gate first (a non-monotone restriction
    cannot be represented), then matches the [envelope = coupling] band on
    the grid against the graph. An empty restriction is reported false and
    vacuous: its envelope is identically +inf, which represents nothing.
    """
    g, tol = _defaults(g, tol)
    ids = (V.describe(),)
    approx = not T.enumeration_exact
    pts = T.enumerate_graph(V, g)
    if not pts:
        return Verdict(Property.V_REPRESENTABLE, False, approximate=approx,
                       grid=g, tol=tol, region_ids=ids, vacuous=True,
                       notes=("empty restriction",))
    mono = is_monotone(T, tol, g, V=V)
    if not mono.value:
        return Verdict(Property.V_REPRESENTABLE, False,
                       witnesses=mono.witnesses, approximate=approx, grid=g,
                       tol=tol, region_ids=ids,
                       witness_count=mono.witness_count,
                       notes=("restriction is not monotone",))
    env, exact = penot_envelope(T, V, g)
    report = is_representative(env, T, V, g, tol, assume_above_coupling=True)
    return Verdict(Property.V_REPRESENTABLE, report.is_representative,
                   witnesses=report.mismatch_witnesses,
                   approximate=approx or not exact, grid=g, tol=tol,
                   region_ids=ids,
                   witness_count=len(report.mismatch_witnesses))


def check_maximal_on_grid(T: OperatorHandle, ambient: Region | None = None,
                          g: GridSpec | None = None,
                          tol: Tolerance | None = None) -> Verdict:
    """No strictly larger monotone graph fits inside the ambient grid.

    Operationally: the whole ambient window identifies the operator. The
    operator must be monotone to begin with; that gate failing is an error,
    not a false verdict.
    """
    g, tol = _defaults(g, tol)
    mono = is_monotone(T, tol, g)
    if not mono.value:
        raise UnsatisfiedHypothesis("the operator is monotone",
                                    f"witness pair {mono.witnesses[:1]}")
    window = ambient if ambient is not None else whole_space(T.dimension)
    inner = check_identifies(T, window, g, tol)
    return Verdict(Property.MAXIMAL_ON_GRID, inner.value,
                   witnesses=inner.witnesses, approximate=inner.approximate,
                   grid=g, tol=tol, region_ids=inner.region_ids,
                   witness_count=inner.witness_count)


def unique_extension(T: OperatorHandle, V: Region, g: GridSpec | None = None,
                     tol: Tolerance | None = None) -> list[PrimalDualPoint]:
    """Grid trace of [phi = coupling] over V, the one maximal extension there.

    Requires the restriction to be monotone and the window check_vni-positive;
    either failing raises UnsatisfiedHypothesis naming the missing piece.
    Under those gates the equality band must coincide with the sublevel trace
    [phi <= coupling]; a mismatch means the margins cannot separate the two
    sets and is raised rather than silently picking one.
    """
    g, tol = _defaults(g, tol)
    mono = is_monotone(T, tol, g, V=V)
    if not mono.value:
        raise UnsatisfiedHypothesis("the restriction is monotone",
                                    f"witness pair {mono.witnesses[:1]}")
    vni = check_vni(T, V, g, tol)
    if not vni.value:
        raise UnsatisfiedHypothesis(
            "phi stays above coupling on the window",
            f"witness {vni.witnesses[:1]}")
    band, sublevel = [], []
    for z in scan_grid(V, g):
        p = T.phi(V, z, g)
        c = coupling(z)
        if abs(p - c) <= tol.eps_eq:
            band.append(z)
        if p <= c + tol.eps_eq:
            sublevel.append(z)
    if band != sublevel:
        raise ToleranceError(
            "equality band and sublevel trace disagree at these margins")
    return band


def check_condition_c(T: OperatorHandle, V: Region,
                      g: GridSpec | None = None,
                      tol: Tolerance | None = None) -> Verdict:
    """Strictly sub-coupling grid points over V project into the domain
    closure; vacuously true when the strict set is empty."""
    g, tol = _defaults(g, tol)
    strict = [z for z in scan_grid(V, g)
              if T.phi(V, z, g) < coupling(z) - tol.eps_strict]
    failures = [z for z in strict
                if not T.domain_closure_contains(z.x, tol)]
    return finish(Property.CONDITION_C, failures,
                  approximate=not T.phi_is_exact(V), grid=g, tol=tol,
                  region_ids=(V.describe(),), vacuous=not strict)


@dataclass(frozen=True)
class RegionFamily:
    """A finite stand-in for a quantifier over open convex windows."""

    regions: tuple[Region, ...]
    rule: str


def dyadic_open_boxes(ambient: Box, scales: int,
                      T: OperatorHandle | None = None,
                      g: GridSpec | None = None,
                      tol: Tolerance | None = None) -> RegionFamily:
    """Open boxes with corners on dyadic subdivisions of the ambient box.

    All corner pairs at subdivision scales 1..scales, deduplicated, sorted
    by bounds; when an operator is given, only boxes meeting its domain are
    kept.
    """
    g, tol = _defaults(g, tol)
    n = ambient.dimension
    seen: dict[tuple, Box] = {}
    for s in range(1, scales + 1):
        axes_pts = [np.linspace(ambient.lower[i], ambient.upper[i], 2 ** s + 1)
                    for i in range(n)]
        axis_intervals = [
            [(float(pts[a]), float(pts[b]))
             for a in range(len(pts)) for b in range(a + 1, len(pts))]
            for pts in axes_pts]
        for combo in itertools.product(*axis_intervals):
            lo = tuple(c[0] for c in combo)
            hi = tuple(c[1] for c in combo)
            key = tuple(round(v, 12) for v in lo + hi)
            if key not in seen:
                seen[key] = Box(lo, hi, (True,) * n, (True,) * n)
    boxes = [seen[k] for k in sorted(seen)]
    if T is not None:
        boxes = [b for b in boxes if _meets_domain(T, b, g, tol)]
    return RegionFamily(tuple(boxes), f"dyadic-open-boxes-{scales}")


_FAMILY_CHECKS = {
    Property.VNI: check_vni,
    Property.LOCATES: check_locates,
    Property.IDENTIFIES: check_identifies,
    Property.V_REPRESENTABLE: check_v_representable,
    Property.CONDITION_C: check_condition_c,
}


def family_scan(T: OperatorHandle, family: RegionFamily, property: Property,
                g: GridSpec | None = None,
                tol: Tolerance | None = None) -> Verdict:
    """Conjunction of one property check across every family member.

    A VNI scan reports as locally-NI. The low-representability scan inverts
    the quantifier: every grid point of the [envelope = coupling] band must
    admit some family member around its primal on which the representability
    check passes.
    """
    g, tol = _defaults(g, tol)
    if property is Property.LOW_REPRESENTABLE:
        return _low_representable(T, family, g, tol)
    if property not in _FAMILY_CHECKS:
        raise UnsatisfiedHypothesis(
            "a per-window check exists for the scanned property",
            property.value)
    check = _FAMILY_CHECKS[property]
    out_prop = Property.LOCALLY_NI if property is Property.VNI else property
    approx = False
    for region in family.regions:
        v = check(T, region, g, tol)
        approx = approx or v.approximate
        if not v.value:
            return Verdict(out_prop, False, witnesses=v.witnesses,
                           approximate=approx, grid=g, tol=tol,
                           region_ids=(family.rule, region.describe()),
                           witness_count=v.witness_count)
    return Verdict(out_prop, True, approximate=approx, grid=g, tol=tol,
                   region_ids=(family.rule,), vacuous=not family.regions)


def _low_representable(T: OperatorHandle, family: RegionFamily, g: GridSpec,
                       tol: Tolerance) -> Verdict:
    n = T.dimension
    pts = T.enumerate_graph(None, g)
    ids = (family.rule,)
    if not pts:
        return Verdict(Property.LOW_REPRESENTABLE, True, grid=g, tol=tol,
                       region_ids=ids, vacuous=True,
                       notes=("empty graph, empty band",))
    mono = is_monotone(T, tol, g)
    env = Envelope(tuple((w, coupling(w)) for w in pts), n)
    zs = scan_grid(whole_space(n), g)
    band = coupling_band(env, zs, tol, monotone_data=mono.value)
    cache: dict[int, Verdict] = {}
    approx = not T.enumeration_exact
    failures = []
    for z in band:
        found = False
        for idx, region in enumerate(family.regions):
            if not region.contains(z.x):
                continue
            if idx not in cache:
                cache[idx] = check_v_representable(T, region, g, tol)
            approx = approx or cache[idx].approximate
            if cache[idx].value:
                found = True
                break
        if not found:
            failures.append(z)
    return finish(Property.LOW_REPRESENTABLE, failures, approximate=approx,
                  grid=g, tol=tol, region_ids=ids, vacuous=not band)
