"""
Window-relative properties: locating versus identifying
=======================================================

Whether a graph can be found, and whether it can be pinned down exactly,
depends on the window you look through. Two small operators make the split
visible: a flat piece over an open interval, and the set of all nonzero
duals over a single point. The first is identified by its own interval but
not located through the closure; the second is located through every window
around its point and identified by none of them.
"""

from monokit import (
    DEFAULT_TOL,
    Flat,
    GridSpec,
    PointComplement,
    Property,
    RegionFamily,
    check_identifies,
    check_locates,
    check_vni,
    family_scan,
    interval,
    unique_extension,
)

g = GridSpec(resolution=41, dual_bound=4.0, dual_resolution=41,
             ambient_bound=4.0)


def show(tag, verdict):
    mark = "yes" if verdict.value else "no"
    extra = " (approximate)" if verdict.approximate else ""
    print(f"  {tag}: {mark}{extra}")
    for w in verdict.witnesses[:2]:
        print(f"    witness ({w.x[0]:+.3f}, {w.xstar[0]:+.3f})")


# ---- a flat piece over the open unit interval ----
T = Flat(interval(0.0, 1.0, True, True), (0.0,))
open_win = interval(0.0, 1.0, True, True)
closed_win = interval(0.0, 1.0)

print("flat piece over (0, 1), dual pinned at 0")
show("open window keeps phi above the coupling", check_vni(T, open_win, g))
show("open window locates", check_locates(T, open_win, g))
show("open window identifies", check_identifies(T, open_win, g))

# the closure drags the boundary point (0, 0) into the scan; it relates
# monotonically to the whole graph yet lies outside the domain
show("closed window locates", check_locates(T, closed_win, g))

# identification pins the trace exactly on the enumerated graph
ext = unique_extension(T, open_win, g, DEFAULT_TOL)
print(f"  equality trace through the open window: {len(ext)} points,"
      f" duals all {ext[0].xstar[0]:+.1f}")

# ---- every nonzero dual over one point ----
P = PointComplement((0.0,))
family = RegionFamily(
    (interval(-1.0, 1.0, True, True),
     interval(-0.5, 0.5, True, True),
     interval(-0.25, 0.25, True, True)),
    "shrinking-intervals")

print("\nall nonzero duals over the origin, scanned over a shrinking family")
show("every member locates",
     family_scan(P, family, Property.LOCATES, g, DEFAULT_TOL))
ident = family_scan(P, family, Property.IDENTIFIES, g, DEFAULT_TOL)
show("every member identifies", ident)
print("  the missing point is the origin itself: the graph omits (0, 0)")
