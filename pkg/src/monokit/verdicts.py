"""Verdict records produced by every grid-scale decision."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .core import Tolerance
from .regions import GridSpec

WITNESS_CAP = 12


class Property(Enum):
    MONOTONE = "monotone"
    VNI = "vni"
    LOCATES = "locates"
    IDENTIFIES = "identifies"
    V_REPRESENTABLE = "v_representable"
    NI = "ni"
    LOCALLY_NI = "locally_ni"
    MAXIMAL_ON_GRID = "maximal_on_grid"
    CONDITION_C = "condition_c"
    LOW_REPRESENTABLE = "low_representable"


@dataclass(frozen=True)
class Verdict:
    """Outcome of one property check over one sampled grid.

    witnesses hold the first few counterexamples in scan order (lexicographic
    over the grid); witness_count is the full tally. approximate marks that
    some consumed value came from a sampled rather than closed-form source.
    vacuous marks checks whose quantifier ranged over an empty set.
    """

    property: Property
    value: bool
    witnesses: tuple = ()
    approximate: bool = False
    grid: GridSpec | None = None
    tol: Tolerance | None = None
    region_ids: tuple[str, ...] = ()
    vacuous: bool = False
    witness_count: int = 0
    notes: tuple[str, ...] = ()


def format_scalar(v: float) -> str:
    """Fixed 12-significant-digit rendering with inf literals."""
    if v == float("inf"):
        return "inf"
    if v == float("-inf"):
        return "-inf"
    return format(float(v), ".12g")


def format_point(z) -> str:
    """Render a primal-dual point, or a pair of them, deterministically."""
    if isinstance(z, tuple) and len(z) == 2 and hasattr(z[0], "xstar"):
        return f"pair[{format_point(z[0])} | {format_point(z[1])}]"
    xs = ", ".join(format_scalar(c) for c in z.x)
    ss = ", ".join(format_scalar(c) for c in z.xstar)
    return f"({xs} ; {ss})"


def witness_strings(v: Verdict) -> list[str]:
    return [format_point(w) for w in v.witnesses]


def finish(property, failures, *, approximate=False, grid=None, tol=None,
           region_ids=(), vacuous=False, notes=()) -> Verdict:
    """Fold a failure list into a Verdict, trimming witnesses at the cap."""
    failures = list(failures)
    return Verdict(
        property=property,
        value=not failures,
        witnesses=tuple(failures[:WITNESS_CAP]),
        approximate=approximate,
        grid=grid,
        tol=tol,
        region_ids=tuple(region_ids),
        vacuous=vacuous,
        witness_count=len(failures),
        notes=tuple(notes),
    )
