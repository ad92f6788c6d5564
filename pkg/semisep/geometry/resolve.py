"""
Projective compactification and point blow-ups of plane curve configurations.

The plane is covered by three root charts:

* ``P0``: the affine plane itself (scene variables);
* ``P1``: ``u = 1/x, v = y/x``, which sees the line at infinity as ``u = 0``;
* ``P2``: ``s = x/y, w = 1/y``, which adds the remaining point at infinity.

Blowing up a rational point of a chart creates two children, ``B{k}x``
(``p = a + X, q = b + X*Y``) and ``B{k}y`` (``p = a + X*Y, q = b + Y``), in
which the exceptional curve is ``E{k}``. Every chart stores the strict
transform of each curve that is not constant there, and for every scene
polynomial a :class:`SignProduct` over those curves whose sign equals the
sign of the original polynomial at every point off the line at infinity.

Each point of the compactified, blown-up plane is *owned* by exactly one
leaf chart; normal-crossing failures are only reported by the owner so a
point is never blown up twice.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cmp_to_key
from itertools import combinations
from typing import Any, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from sympy import Dummy, Poly, QQ, Rational, Symbol

from semisep.algebra.cad2 import CellComplex, SAset, SignCondition, SignProduct, decompose
from semisep.algebra.poly import (
    AlgebraicInterval,
    as_algebraic,
    compare,
    derivative,
    exact_div,
    format_number,
    homogenize,
    make_poly,
    same_number,
    sign_at,
    solve_plane_system,
)
from semisep.config import Config
from semisep.core.errors import NonTerminationError, PreconditionError, UnsupportedInstanceError
from semisep.core.observability import logger
from semisep.core.records import BlowupRecord

INF = "inf"
ROOT_CHARTS = ("P0", "P1", "P2")

Point = Tuple[AlgebraicInterval, AlgebraicInterval]


def total_name(name: str) -> str:
    """Name under which a scene polynomial's total transform is registered in chart complexes."""
    return f"{name}*"


@dataclass(frozen=True, eq=False)
class Chart:
    id: str
    coords: Tuple[Symbol, Symbol]
    curves: Mapping[str, Poly]
    totals: Mapping[str, SignProduct]
    to_plane: Tuple[Any, Any]
    exceptional: Tuple[str, ...] = ()
    owned: Tuple[Poly, ...] = ()
    infinite: FrozenSet[str] = frozenset()
    parent: Optional[str] = None
    center: Optional[Tuple[Rational, Rational]] = None
    branch: Optional[str] = None
    to_parent: Optional[Tuple[Poly, Poly]] = None
    children: Tuple[str, ...] = ()

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def owns(self, point: Sequence[Any]) -> bool:
        return all(sign_at(o, point) == 0 for o in self.owned)

    def kind_of(self, name: str) -> str:
        if name in self.exceptional:
            return "exceptional"
        if name == INF:
            return "infinity"
        return "curve"

    def wall_curves(self, names: Iterable[str]) -> Dict[str, Poly]:
        """Curves of this chart that take part in the normal-crossing test."""
        wanted = set(names) | set(self.exceptional)
        return {n: c for n, c in self.curves.items() if n in wanted}


class ModelAtlas:
    """Tree of charts; ``blowup`` returns a new atlas and leaves this one untouched."""

    def __init__(
        self,
        gens: Tuple[Symbol, Symbol],
        table: Mapping[str, Poly],
        charts: Mapping[str, Chart],
        blowups: Sequence[BlowupRecord] = (),
        var_order: Optional[str] = None,
        complexes: Optional[Dict[str, CellComplex]] = None,
    ):
        self.gens = gens
        self.table = dict(table)
        self.charts: Dict[str, Chart] = dict(charts)
        self.blowups: List[BlowupRecord] = list(blowups)
        self.var_order = var_order
        self._complexes: Dict[str, CellComplex] = dict(complexes or {})

    def chart(self, chart_id: str) -> Chart:
        try:
            return self.charts[chart_id]
        except KeyError:
            raise PreconditionError(f"unknown chart {chart_id!r}") from None

    @property
    def leaves(self) -> List[Chart]:
        return [c for c in self.charts.values() if c.is_leaf]

    def complex(self, chart_id: str) -> CellComplex:
        """Cached decomposition of a chart's curves with every total transform registered."""
        if chart_id not in self._complexes:
            chart = self.chart(chart_id)
            products = {total_name(name): prod for name, prod in chart.totals.items()}
            self._complexes[chart_id] = decompose(
                chart.curves, products=products, var_order=self.var_order, gens=chart.coords
            )
        return self._complexes[chart_id]

    def describe(self) -> Dict[str, Any]:
        return {
            "charts": list(self.charts),
            "leaves": [c.id for c in self.leaves],
            "blowups": len(self.blowups),
        }


# ---------------------------------------------------------------------------
# root charts
# ---------------------------------------------------------------------------

def _product(strict_name: str, strict: Poly, parity: int) -> Tuple[Optional[Poly], SignProduct]:
    factors = []
    coefficient = Rational(1)
    if strict.is_ground:
        coefficient = Rational(strict.LC())
        strict = None
    else:
        factors.append((strict_name, 1))
    if parity:
        factors.append((INF, 1))
    return strict, SignProduct(tuple(factors), coefficient)


def projective_atlas(scene: Any, var_order: Optional[str] = None) -> ModelAtlas:
    """The three standard charts of the projective plane for a scene (or a polynomial table)."""
    table: Mapping[str, Poly] = scene.table if hasattr(scene, "table") else scene
    if not table:
        raise PreconditionError("no polynomials to compactify")
    if var_order is None and hasattr(scene, "options"):
        var_order = scene.options.var_order
    gx, gy = next(iter(table.values())).gens
    h = Dummy("h")
    u, v = Dummy("u"), Dummy("v")
    s, w = Dummy("s"), Dummy("w")

    p0 = Chart(
        id="P0",
        coords=(gx, gy),
        curves=dict(table),
        totals={name: SignProduct(((name, 1),)) for name in table},
        to_plane=(gx, gy),
    )

    def projective(chart_id, coords, substitution, at_infinity, owned, to_plane):
        curves: Dict[str, Poly] = {}
        totals: Dict[str, SignProduct] = {}
        for name, p in table.items():
            F = homogenize(p, h)
            strict = make_poly(F.as_expr().subs(substitution, simultaneous=True), coords)
            strict, prod = _product(name, strict, p.total_degree() % 2)
            if strict is not None:
                curves[name] = strict
            totals[name] = prod
        curves[INF] = Poly(at_infinity, *coords, domain=QQ)
        return Chart(
            id=chart_id,
            coords=coords,
            curves=curves,
            totals=totals,
            to_plane=to_plane,
            owned=tuple(Poly(o, *coords, domain=QQ) for o in owned),
            infinite=frozenset({INF}),
        )

    p1 = projective("P1", (u, v), {gx: 1, gy: v, h: u}, u, (u,), (1 / u, v / u))
    p2 = projective("P2", (s, w), {gx: s, gy: 1, h: w}, w, (s, w), (s / w, 1 / w))
    complexes = {}
    if hasattr(scene, "complex") and var_order == scene.options.var_order:
        complexes["P0"] = scene.complex().with_products({total_name(n): t for n, t in p0.totals.items()})
    atlas = ModelAtlas((gx, gy), table, {"P0": p0, "P1": p1, "P2": p2}, var_order=var_order, complexes=complexes)
    logger.debug("Resolve", "projective atlas built", atlas.describe())
    return atlas


# ---------------------------------------------------------------------------
# blow-ups
# ---------------------------------------------------------------------------

def _rational_center(center: Sequence[Any]) -> Tuple[Rational, Rational]:
    out = []
    for c in center:
        a = as_algebraic(c)
        if not a.is_rational:
            raise UnsupportedInstanceError(
                f"blow-up centre coordinate {a} is irrational",
                minimal_polynomial=str(a.poly.as_expr()),
            )
        out.append(a.lo)
    return out[0], out[1]


def _order_along(p: Poly, index: int) -> int:
    return min(monom[index] for monom in p.monoms())


def _pull_product(prod: SignProduct, multiplicity: Mapping[str, int], constants: Mapping[str, Rational], exceptional: str) -> SignProduct:
    factors = []
    coefficient = prod.coefficient
    e_power = 0
    for name, e in prod.factors:
        e_power += e * multiplicity[name]
        if name in constants:
            coefficient *= constants[name] ** e
        else:
            factors.append((name, e))
    if e_power:
        factors.append((exceptional, e_power))
    return SignProduct(tuple(factors), coefficient)


def blowup(atlas: ModelAtlas, chart_id: str, center: Sequence[Any]) -> ModelAtlas:
    """Blow up a rational point of a leaf chart."""
    chart = atlas.chart(chart_id)
    if not chart.is_leaf:
        raise PreconditionError(f"chart {chart_id} was already blown up")
    a, b = _rational_center(center)
    k = len(atlas.blowups) + 1
    exceptional = f"E{k}"
    at_infinity = any(sign_at(chart.curves[c], (a, b)) == 0 for c in chart.infinite if c in chart.curves)
    p, q = chart.coords

    children: Dict[str, Chart] = {}
    for branch in ("x", "y"):
        X, Y = Dummy(f"a{k}"), Dummy(f"b{k}")
        if branch == "x":
            sub = {p: a + X, q: b + X * Y}
            e_var, e_index = X, 0
        else:
            sub = {p: a + X * Y, q: b + Y}
            e_var, e_index = Y, 1
        coords = (X, Y)
        e_poly = Poly(e_var, X, Y, domain=QQ)

        curves: Dict[str, Poly] = {}
        multiplicity: Dict[str, int] = {}
        constants: Dict[str, Rational] = {}
        for name, c in chart.curves.items():
            pulled = make_poly(c.as_expr().subs(sub, simultaneous=True), coords)
            m = _order_along(pulled, e_index)
            strict = exact_div(pulled, e_poly ** m) if m else pulled
            multiplicity[name] = m
            if strict.is_ground:
                constants[name] = Rational(strict.LC())
            else:
                curves[name] = strict
        curves[exceptional] = e_poly

        owned = [make_poly(o.as_expr().subs(sub, simultaneous=True), coords) for o in chart.owned]
        if branch == "y":
            owned.append(Poly(X, X, Y, domain=QQ))
        infinite = {n for n in chart.infinite if n in curves}
        if at_infinity:
            infinite.add(exceptional)

        child_id = f"B{k}{branch}"
        children[child_id] = Chart(
            id=child_id,
            coords=coords,
            curves=curves,
            totals={n: _pull_product(prod, multiplicity, constants, exceptional) for n, prod in chart.totals.items()},
            to_plane=tuple(expr.subs(sub, simultaneous=True) for expr in chart.to_plane),
            exceptional=chart.exceptional + (exceptional,),
            owned=tuple(o for o in owned if not o.is_zero),
            infinite=frozenset(infinite),
            parent=chart.id,
            center=(a, b),
            branch=branch,
            to_parent=(Poly(sub[p], X, Y, domain=QQ), Poly(sub[q], X, Y, domain=QQ)),
        )

    charts = dict(atlas.charts)
    charts[chart_id] = replace(chart, children=tuple(children))
    charts.update(children)
    record = BlowupRecord(
        index=k,
        chart=chart_id,
        center=[str(a), str(b)],
        exceptional=exceptional,
        children=list(children),
        at_infinity=at_infinity,
    )
    logger.info("Resolve", f"blew up {chart_id} at ({a}, {b}) -> {exceptional}", record.to_dict())
    return ModelAtlas(atlas.gens, atlas.table, charts, atlas.blowups + [record], atlas.var_order, atlas._complexes)


def replay(atlas: ModelAtlas, log: Iterable[BlowupRecord]) -> ModelAtlas:
    """Re-run a recorded blow-up sequence on a fresh atlas."""
    for record in log:
        atlas = blowup(atlas, record.chart, tuple(Rational(c) for c in record.center))
    return atlas


# ---------------------------------------------------------------------------
# normal crossings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NCFailure:
    chart: str
    point: Point
    curves: Tuple[str, ...]
    reason: str

    @property
    def center(self) -> Tuple[Rational, Rational]:
        return _rational_center(self.point)

    def describe(self) -> Dict[str, Any]:
        return {
            "chart": self.chart,
            "point": [format_number(c) for c in self.point],
            "curves": list(self.curves),
            "reason": self.reason,
        }


def _candidate_points(curves: Mapping[str, Poly]) -> List[Point]:
    found: List[Point] = []

    def add(points):
        for pt in points:
            if not any(same_number(pt[0], o[0]) and same_number(pt[1], o[1]) for o in found):
                found.append(pt)

    for c in curves.values():
        X, Y = c.gens
        add(solve_plane_system([c, derivative(c, X), derivative(c, Y)]))
    for c1, c2 in combinations(curves.values(), 2):
        add(solve_plane_system([c1, c2]))

    def order(p1, p2):
        return compare(p1[0], p2[0]) or compare(p1[1], p2[1])

    return sorted(found, key=cmp_to_key(order))


def _local_failure(curves: Mapping[str, Poly], point: Point) -> Optional[Tuple[Tuple[str, ...], str]]:
    through = [(n, c) for n, c in curves.items() if sign_at(c, point) == 0]
    names = tuple(n for n, _ in through)
    for _, c in through:
        X, Y = c.gens
        if sign_at(derivative(c, X), point) == 0 and sign_at(derivative(c, Y), point) == 0:
            return names, "singular"
    if len(through) >= 3:
        return names, "crowded"
    if len(through) == 2:
        (_, f), (_, g) = through
        X, Y = f.gens
        jacobian = derivative(f, X) * derivative(g, Y) - derivative(f, Y) * derivative(g, X)
        if sign_at(jacobian, point) == 0:
            return names, "tangent"
    return None


def _chart_failures(chart: Chart, names: Iterable[str]) -> List[NCFailure]:
    curves = chart.wall_curves(names)
    failures = []
    for point in _candidate_points(curves):
        if not chart.owns(point):
            continue
        local = _local_failure(curves, point)
        if local is None:
            continue
        _rational_center(point)
        failures.append(NCFailure(chart.id, point, local[0], local[1]))
    return failures


def nc_failures(atlas: ModelAtlas, names: Iterable[str]) -> List[NCFailure]:
    """Owned points of leaf charts where the named curves (plus exceptional curves) fail
    simple normal crossings: a singular curve, three or more curves, or two tangent curves."""
    names = list(names)
    out: List[NCFailure] = []
    for chart in atlas.leaves:
        out.extend(_chart_failures(chart, names))
    return out


def make_normal_crossings(atlas: ModelAtlas, names: Iterable[str], max_rounds: Optional[int] = None) -> ModelAtlas:
    """Blow up failing points, first in chart and coordinate order, until none remain."""
    names = list(names)
    max_rounds = Config.MAX_BLOWUPS if max_rounds is None else max_rounds
    if max_rounds < 1:
        raise PreconditionError("max_rounds must be at least 1")
    cache: Dict[str, List[NCFailure]] = {}
    rounds = 0
    while True:
        failures: List[NCFailure] = []
        for chart in atlas.leaves:
            if chart.id not in cache:
                cache[chart.id] = _chart_failures(chart, names)
            failures.extend(cache[chart.id])
        if not failures:
            logger.info("Resolve", f"normal crossings after {rounds} blow-up(s)", atlas.describe())
            return atlas
        if rounds >= max_rounds:
            raise NonTerminationError(
                f"still {len(failures)} normal-crossing failure(s) after {rounds} blow-ups",
                failures=[f.describe() for f in failures],
            )
        first = failures[0]
        logger.debug("Resolve", "normal-crossing failure", first.describe())
        atlas = blowup(atlas, first.chart, first.center)
        rounds += 1


# ---------------------------------------------------------------------------
# transfer of sets
# ---------------------------------------------------------------------------

def pullback_set(S: SAset, atlas: ModelAtlas, charts: Optional[Iterable[str]] = None) -> Dict[str, SAset]:
    """S rewritten on total transforms, per chart (leaves by default).

    Points at infinity (the line at infinity and exceptional curves over
    points at infinity) are excluded explicitly.
    """
    ids = [c.id for c in atlas.leaves] if charts is None else list(charts)
    mapping = {name: total_name(name) for name in atlas.table}
    out: Dict[str, SAset] = {}
    for chart_id in ids:
        chart = atlas.chart(chart_id)
        guard = [SignCondition(c, "!=") for c in sorted(chart.infinite) if c in chart.curves]
        out[chart_id] = S.rename(mapping).conjoin(guard)
    return out
