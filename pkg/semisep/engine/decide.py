"""
Separation decisions for a scene.

``generic_separation`` works on the regularised sets (interiors) in a
normal-crossings model of the compactified plane: after a quick accept
for disjoint closures, every wall must pass the shadow or counter-shadow
test in every leaf chart where it is a wall.

``obstruction_list`` works on the original sets in the affine plane: walls
meeting A ∪ B, then points on them (relative boundary points of the
shadows and singular points of the wall) and isolated boundary points
that lie in A ∪ B. A strictly separable pair is one that is generically
separable and passes every entry.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set

from semisep.algebra.cad2 import CellComplex, CellSet
from semisep.algebra.poly import derivative, format_number, sign_at
from semisep.core.observability import logger
from semisep.core.records import ObstructionEntry, Verdict, WallReport
from semisep.engine.scene import Scene
from semisep.geometry.resolve import INF, ROOT_CHARTS, make_normal_crossings, projective_atlas
from semisep.geometry.walls import (
    ChartView,
    arc_side_check,
    chart_views,
    curve_generic_separable,
    separable_in_wall_extension,
    shadow,
    walls_in,
)


# ---------------------------------------------------------------------------
# generic stage
# ---------------------------------------------------------------------------

def _wall_candidates(scene: Scene, roots: Sequence[ChartView]) -> List[str]:
    by_id = {v.chart.id: v for v in roots}
    p0 = by_id["P0"]
    names = walls_in(p0.complex, p0.A, p0.B, names=scene.table)
    p1 = by_id["P1"]
    cx = p1.complex
    at_infinity = (cx.closure(p1.A) | cx.closure(p1.B)) & cx.zero_set(INF)
    if cx.dim(at_infinity) == 1:
        names.append(INF)
    return names


def _merge(reports: Dict[str, WallReport], view: ChartView, name: str) -> None:
    test = separable_in_wall_extension(view.A, view.B, name, view.complex)
    arc = arc_side_check(view.A, view.B, name, view.complex)
    report = reports.get(name)
    if report is None:
        report = reports[name] = WallReport(
            wall=name,
            kind=view.chart.kind_of(name),
            charts=[],
            shadows_separable=True,
            counter_shadows_separable=True,
            verdict=True,
            via="none",
        )
    report.charts.append(view.chart.id)
    report.shadows_separable &= test.shadows_separable
    report.counter_shadows_separable &= test.counter_shadows_separable
    report.verdict &= test.verdict
    if arc is not None:
        report.odd = bool(report.odd) or arc.odd
        report.even = bool(report.even) or arc.even
        agrees = arc.separable == test.verdict
        report.soo_agrees = agrees if report.soo_agrees is None else report.soo_agrees and agrees
        if not agrees:
            logger.warning("Walls", f"arc-side structure disagrees on {name} in {view.chart.id}", {
                "geometric": test.verdict, "arc_side": arc.separable,
            })


def _via(report: WallReport) -> str:
    if report.shadows_separable:
        return "shadows"
    if report.counter_shadows_separable:
        return "counter_shadows"
    return "mixed" if report.verdict else "none"


def generic_separation(scene: Scene, max_blowups: Optional[int] = None) -> Verdict:
    """Decide generic separability of the scene's sets."""
    max_blowups = max_blowups or scene.options.resolved_max_blowups
    atlas = projective_atlas(scene)
    roots = chart_views(scene.A, scene.B, atlas, charts=ROOT_CHARTS)
    if all(not (v.complex.closure(v.A) & v.complex.closure(v.B)) for v in roots):
        logger.info("Decide", f"{scene.name}: closures are disjoint in the compactified plane")
        return Verdict(generic=True, strict=None, quick_accept=True)

    candidates = _wall_candidates(scene, roots)
    logger.debug("Decide", "wall candidates", candidates)
    atlas = make_normal_crossings(atlas, candidates, max_blowups)

    reports: Dict[str, WallReport] = {}
    for view in chart_views(scene.A, scene.B, atlas):
        for name in walls_in(view.complex, view.A, view.B):
            _merge(reports, view, name)
    for report in reports.values():
        report.via = _via(report)

    failing = next((r for r in reports.values() if not r.verdict), None)
    obstruction = None
    if failing is not None:
        obstruction = {"wall": failing.wall, "kind": failing.kind, "stage": 1, "charts": list(failing.charts)}
    verdict = Verdict(
        generic=failing is None,
        strict=None if failing is None else False,
        obstruction=obstruction,
        blowup_log=list(atlas.blowups),
        wall_reports=list(reports.values()),
    )
    logger.info("Decide", f"{scene.name}: generic {'YES' if verdict.generic else 'NO'}", obstruction)
    return verdict


# ---------------------------------------------------------------------------
# strict stage
# ---------------------------------------------------------------------------

def _membership(i: int, a: CellSet, b: CellSet) -> List[str]:
    return [label for label, S in (("A", a), ("B", b)) if i in S]


def _point_entry(cx: CellComplex, i: int, a, b, closure_a, closure_b, parent: Optional[str]) -> ObstructionEntry:
    location = [format_number(c) for c in cx.sample_point(i)]
    return ObstructionEntry(
        kind="point",
        name=f"({', '.join(location)})",
        meets=_membership(i, a, b),
        shadows_separable=not (i in closure_a and i in closure_b),
        parent=parent,
        location=location,
    )


def _singular(cx: CellComplex, name: str, i: int) -> bool:
    p = cx.table[name]
    point = cx.sample_point(i)
    return all(sign_at(derivative(p, g), point) == 0 for g in p.gens)


def _wall_points(cx: CellComplex, name: str, shadows: Sequence[CellSet], union: CellSet) -> List[int]:
    """Points of the wall in A ∪ B that bound a shadow within the wall or are singular on it."""
    zero = cx.zero_set(name)
    out = []
    for q in sorted(zero):
        if cx.cells[q].dim != 0 or q not in union:
            continue
        arcs = [j for j in cx.cofaces(q) if j in zero and cx.cells[j].dim == 1]
        bounding = any(q in P and (not arcs or any(j not in P for j in arcs)) for P in shadows)
        if bounding or _singular(cx, name, q):
            out.append(q)
    return out


def obstruction_list(scene: Scene) -> List[ObstructionEntry]:
    """Walls and points of the original sets' boundaries that meet A ∪ B, with shadow verdicts."""
    cx = scene.complex()
    a, b = cx.cells_of(scene.A), cx.cells_of(scene.B)
    union = a | b
    closure_a, closure_b = cx.closure(a), cx.closure(b)
    entries: List[ObstructionEntry] = []
    seen: Set[int] = set()
    on_walls: Set[int] = set()
    for name in walls_in(cx, a, b):
        zero = cx.zero_set(name)
        on_walls |= zero
        meets = [label for label, S in (("A", a), ("B", b)) if zero & S]
        if not meets:
            continue
        sh_a, sh_b = shadow(a, name, cx), shadow(b, name, cx)
        entries.append(ObstructionEntry("wall", name, meets, curve_generic_separable(sh_a, sh_b)))
        for q in _wall_points(cx, name, (sh_a.cells, sh_b.cells), union):
            if q not in seen:
                seen.add(q)
                entries.append(_point_entry(cx, q, a, b, closure_a, closure_b, parent=name))
    boundary = cx.boundary(a) | cx.boundary(b)
    for q in sorted(boundary):
        if cx.cells[q].dim == 0 and q in union and q not in on_walls and q not in seen:
            entries.append(_point_entry(cx, q, a, b, closure_a, closure_b, parent=None))
    logger.debug("Decide", f"{len(entries)} obstruction-list entries", [e.name for e in entries])
    return entries


@dataclass
class Nullspace:
    """Zariski closure of closure(A) ∩ closure(B): curve components and isolated points."""

    curves: List[str] = field(default_factory=list)
    points: List[List[str]] = field(default_factory=list)
    meets: bool = False


def separation_nullspace(scene: Scene) -> Nullspace:
    cx = scene.complex()
    a, b = cx.cells_of(scene.A), cx.cells_of(scene.B)
    union = a | b
    meeting = cx.closure(a) & cx.closure(b)
    null = Nullspace()
    covered: Set[int] = set()
    for i in sorted(meeting):
        if cx.cells[i].dim != 1 or i in covered:
            continue
        vanishing = [n for n in cx.table if cx.sign(i, n) == 0]
        if vanishing:
            null.curves.append(vanishing[0])
            covered |= cx.zero_set(vanishing[0])
        else:
            col = cx.columns[cx.cells[i].column]
            null.curves.append(f"{cx.projection[0]} = {format_number(col.x)}")
            covered |= set(range(col.first_cell, col.first_cell + col.size))
    isolated = [i for i in sorted(meeting) if cx.cells[i].dim == 0 and i not in covered]
    null.points = [[format_number(c) for c in cx.sample_point(i)] for i in isolated]
    null.meets = bool(covered & union) or any(i in union for i in isolated)
    return null


def decide_separation(scene: Scene, max_blowups: Optional[int] = None) -> Verdict:
    """Generic stage, then the obstruction list on the original sets."""
    verdict = generic_separation(scene, max_blowups)
    if not verdict.generic:
        return verdict
    entries = obstruction_list(scene)
    verdict.obstruction_list = entries
    failing = next((e for e in entries if not e.shadows_separable), None)
    if failing is None:
        verdict.strict = True
    else:
        verdict.strict = False
        verdict.obstruction = {"wall": failing.name, "kind": failing.kind, "stage": 2, "parent": failing.parent}

    null = separation_nullspace(scene)
    verdict.nullspace_meets = null.meets
    if verdict.strict == null.meets:
        logger.warning("Decide", f"{scene.name}: separation nullspace disagrees with the obstruction list", {
            "strict": verdict.strict, "nullspace_curves": null.curves, "nullspace_points": null.points,
        })
    logger.info("Decide", f"{scene.name}: strict {'YES' if verdict.strict else 'NO'}", verdict.obstruction)
    return verdict
