"""
Walls, shadows and counter-shadows on a chart's cell decomposition.

A wall is a curve of a chart along which the boundaries of A and B are
one-dimensional. Its shadows are the traces of closure(A) and closure(B)
on it; its counter-shadows are the shadows of the sets obtained by
trading the parts of A and B lying on the negative side of the wall's
equation. A pair of sets is generically separable in the wall's
Z2-extension exactly when the shadows or the counter-shadows are, and on
a curve that means they overlap in at most finitely many points.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from semisep.algebra import soo
from semisep.algebra.cad2 import CellComplex, CellSet, Region, SAset
from semisep.algebra.poly import sgn
from semisep.core.errors import IncompleteFactorizationError, PreconditionError
from semisep.core.observability import logger
from semisep.geometry.resolve import Chart, ModelAtlas, pullback_set


@dataclass(frozen=True)
class Wall:
    name: str
    kind: str
    pieces: Tuple[Tuple[str, str], ...]
    orientation: int = 1

    @property
    def charts(self) -> List[str]:
        return [chart for chart, _ in self.pieces]


@dataclass(frozen=True, eq=False)
class CurveSubset:
    """Cells of a wall's zero set flagged as belonging to the subset."""

    wall: str
    complex: CellComplex
    cells: CellSet

    def __post_init__(self):
        stray = self.cells - self.complex.zero_set(self.wall)
        if stray:
            raise PreconditionError(f"cells {sorted(stray)} do not lie on {self.wall}")

    @property
    def dim(self) -> int:
        return self.complex.dim(self.cells)

    def __bool__(self) -> bool:
        return bool(self.cells)


@dataclass(frozen=True, eq=False)
class ChartView:
    """A chart's decomposition with the cell sets of A and B in it."""

    chart: Chart
    complex: CellComplex
    A: CellSet
    B: CellSet

    @property
    def boundary(self) -> CellSet:
        return self.complex.boundary(self.A) | self.complex.boundary(self.B)


def chart_views(
    A: SAset,
    B: SAset,
    atlas: ModelAtlas,
    charts: Optional[Iterable[str]] = None,
    regularize: bool = True,
) -> List[ChartView]:
    """Pull A and B back to each chart; with ``regularize`` keep only their interiors."""
    pulled_a = pullback_set(A, atlas, charts)
    pulled_b = pullback_set(B, atlas, charts)
    views = []
    for chart_id in pulled_a:
        cx = atlas.complex(chart_id)
        a, b = cx.cells_of(pulled_a[chart_id]), cx.cells_of(pulled_b[chart_id])
        if regularize:
            a, b = cx.interior(a), cx.interior(b)
        views.append(ChartView(atlas.chart(chart_id), cx, a, b))
    return views


# ---------------------------------------------------------------------------
# walls
# ---------------------------------------------------------------------------

def walls_in(cx: CellComplex, A: Region, B: Region, names: Optional[Iterable[str]] = None) -> List[str]:
    """Table curves whose zero set meets boundary(A) ∪ boundary(B) in dimension 1."""
    boundary = cx.boundary(A) | cx.boundary(B)
    wanted = set(cx.table) if names is None else set(names)
    candidates = [n for n in cx.table if n in wanted]
    found = [n for n in candidates if cx.dim(boundary & cx.zero_set(n)) == 1]
    covered = frozenset().union(*(cx.zero_set(n) for n in cx.table)) if cx.table else frozenset()
    loose = [i for i in boundary if cx.cells[i].dim == 1 and i not in covered]
    if loose:
        raise IncompleteFactorizationError(
            "part of a boundary is not covered by any declared polynomial",
            cells=sorted(loose),
        )
    return found


def walls_of(A: SAset, B: SAset, atlas: ModelAtlas, regularize: bool = True) -> List[Wall]:
    """Walls of (A, B) over the leaf charts of an atlas, one entry per curve."""
    return walls_from_views(chart_views(A, B, atlas, regularize=regularize))


def walls_from_views(views: Sequence[ChartView]) -> List[Wall]:
    pieces: Dict[str, List[Tuple[str, str]]] = {}
    kinds: Dict[str, str] = {}
    for view in views:
        for name in walls_in(view.complex, view.A, view.B):
            pieces.setdefault(name, []).append((view.chart.id, name))
            kinds.setdefault(name, view.chart.kind_of(name))
    return [Wall(name, kinds[name], tuple(p)) for name, p in pieces.items()]


# ---------------------------------------------------------------------------
# shadows
# ---------------------------------------------------------------------------

def shadow(S: Region, wall: str, cx: CellComplex) -> CurveSubset:
    """closure(S) ∩ wall."""
    return CurveSubset(wall, cx, cx.closure(S) & cx.zero_set(wall))


def _side(cx: CellComplex, S: CellSet, wall: str, sign: int) -> CellSet:
    return frozenset(i for i in S if cx.sign(i, wall) == sign)


def counter_shadows(A: Region, B: Region, wall: str, cx: CellComplex, orientation: int = 1) -> Tuple[CurveSubset, CurveSubset]:
    """Shadows of (A ∩ {t>0}) ∪ (B ∩ {t<0}) and (A ∩ {t<0}) ∪ (B ∩ {t>0}) with t = orientation·wall."""
    a, b = cx.cells_of(A), cx.cells_of(B)
    pos, neg = sgn(orientation), -sgn(orientation)
    a_t = _side(cx, a, wall, pos) | _side(cx, b, wall, neg)
    b_t = _side(cx, a, wall, neg) | _side(cx, b, wall, pos)
    return shadow(a_t, wall, cx), shadow(b_t, wall, cx)


def curve_generic_separable(P: CurveSubset, Q: CurveSubset) -> bool:
    """On a curve, generic separability is disjointness up to finitely many points."""
    if P.wall != Q.wall or P.complex is not Q.complex:
        raise PreconditionError("curve subsets on different walls")
    return P.complex.dim(P.cells & Q.cells) <= 0


@dataclass(frozen=True)
class WallTest:
    verdict: bool
    via: str
    shadows_separable: bool
    counter_shadows_separable: bool


def separable_in_wall_extension(A: Region, B: Region, wall: str, cx: CellComplex, orientation: int = 1) -> WallTest:
    shadows_ok = curve_generic_separable(shadow(A, wall, cx), shadow(B, wall, cx))
    counters_ok = curve_generic_separable(*counter_shadows(A, B, wall, cx, orientation))
    via = "shadows" if shadows_ok else "counter_shadows" if counters_ok else "none"
    return WallTest(shadows_ok or counters_ok, via, shadows_ok, counters_ok)


# ---------------------------------------------------------------------------
# finite arc-side structure
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ArcSides:
    space: soo.FinSpace
    A: FrozenSet[soo.SignChar]
    B: FrozenSet[soo.SignChar]


def arc_side_structure(A: Region, B: Region, wall: str, cx: CellComplex, orientation: int = 1) -> Optional[ArcSides]:
    """Orderings of the wall's arcs (signs of the other curves) extended by the side of t.

    An element (s, χ) belongs to A when the two-dimensional cell on side s
    of an arc with character χ lies in A.
    """
    a, b = cx.cells_of(A), cx.cells_of(B)
    others = [n for n in cx.table if n != wall]
    base: List[soo.SignChar] = []
    a_chars, b_chars = set(), set()
    for arc in sorted(cx.zero_set(wall)):
        if cx.cells[arc].dim != 1:
            continue
        char = tuple(cx.sign(arc, n) for n in others)
        if 0 in char:
            continue
        base.append(char)
        for face in cx.cofaces(arc):
            if cx.cells[face].dim != 2:
                continue
            side = sgn(orientation) * cx.sign(face, wall)
            if face in a:
                a_chars.add((side,) + char)
            if face in b:
                b_chars.add((side,) + char)
    if not base:
        return None
    space = soo.extend_z2(soo.FinSpace(tuple(others), tuple(base)))
    return ArcSides(space, frozenset(a_chars), frozenset(b_chars))


@dataclass(frozen=True)
class ArcSideCheck:
    separable: bool
    odd: bool
    even: bool


def arc_side_check(A: Region, B: Region, wall: str, cx: CellComplex, orientation: int = 1) -> Optional[ArcSideCheck]:
    sides = arc_side_structure(A, B, wall, cx, orientation)
    if sides is None:
        return None
    check = soo.extension_check(sides.space, sides.A, sides.B)
    parity = soo.odd_even(sides.space, sides.A, sides.B)
    logger.debug("Walls", f"arc-side structure of {wall}", {
        "elements": len(sides.space), "separable": check.sep_in_extension,
        "odd": parity.odd, "even": parity.even,
    })
    return ArcSideCheck(check.sep_in_extension, parity.odd, parity.even)
