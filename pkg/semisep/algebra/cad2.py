"""
Sign-invariant cylindrical decomposition of the plane.

``decompose`` projects a polynomial table onto the first variable (or the
second, when the swapped order is requested), builds a stack of cells over
every projection root and every open interval between them, and relates the
stacks of neighbouring columns by exact root-counting alignment. All set
predicates the decision procedures need (emptiness, dimension, closure,
interior, boundary) are answered on the resulting cells.

Sets are given either as :class:`SAset` formulas over the table's
polynomial names or directly as frozensets of cell indices (the
cell-indicator form every set operation returns).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import AbstractSet, Callable, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx
from sympy import Poly, QQ, Rational, Symbol

from semisep.algebra.poly import (
    AlgebraicInterval,
    as_algebraic,
    compare,
    content_in,
    discriminant,
    exact_div,
    gcd,
    irreducible_factors,
    leading_coefficient_in,
    primitive_part_in,
    rational_above,
    rational_below,
    rational_between,
    real_roots,
    resultant,
    roots_over,
    same_number,
    sgn,
    sign_at,
    sort_numbers,
    squarefree_part,
    univariate,
)
from semisep.config import Config
from semisep.core.errors import ArityError, UnknownPolynomialError
from semisep.core.observability import logger

RELATIONS = (">", ">=", "=", "<=", "<", "!=")

_TESTS: Dict[str, Callable[[int], bool]] = {
    ">": lambda s: s > 0,
    ">=": lambda s: s >= 0,
    "=": lambda s: s == 0,
    "<=": lambda s: s <= 0,
    "<": lambda s: s < 0,
    "!=": lambda s: s != 0,
}


@dataclass(frozen=True)
class SignCondition:
    poly_id: str
    relation: str

    def __post_init__(self):
        if self.relation not in _TESTS:
            raise ValueError(f"unknown relation {self.relation!r}; expected one of {RELATIONS}")

    def holds(self, sign: int) -> bool:
        return _TESTS[self.relation](sign)

    def __str__(self) -> str:
        return f"{self.poly_id} {self.relation} 0"


BasicSet = Tuple[SignCondition, ...]


@dataclass(frozen=True)
class SAset:
    """Finite union of basic sets; no clauses is the empty set."""

    clauses: Tuple[BasicSet, ...] = ()

    @classmethod
    def of(cls, *clauses: Iterable[Tuple[str, str]]) -> "SAset":
        return cls(tuple(tuple(SignCondition(p, r) for p, r in clause) for clause in clauses))

    @classmethod
    def empty(cls) -> "SAset":
        return cls(())

    @classmethod
    def whole(cls) -> "SAset":
        return cls(((),))

    @property
    def poly_ids(self) -> FrozenSet[str]:
        return frozenset(c.poly_id for clause in self.clauses for c in clause)

    def union(self, other: "SAset") -> "SAset":
        return SAset(self.clauses + other.clauses)

    def conjoin(self, extra: Sequence[SignCondition]) -> "SAset":
        return SAset(tuple(clause + tuple(extra) for clause in self.clauses))

    def rename(self, mapping: Mapping[str, str]) -> "SAset":
        return SAset(tuple(
            tuple(SignCondition(mapping.get(c.poly_id, c.poly_id), c.relation) for c in clause)
            for clause in self.clauses
        ))

    def holds(self, sign_of: Callable[[str], int]) -> bool:
        return any(all(c.holds(sign_of(c.poly_id)) for c in clause) for clause in self.clauses)

    def contains(self, signs: Mapping[str, int]) -> bool:
        return self.holds(signs.__getitem__)

    def to_list(self) -> List[List[List[str]]]:
        return [[[c.poly_id, c.relation] for c in clause] for clause in self.clauses]

    @classmethod
    def from_list(cls, data: Sequence[Sequence[Sequence[str]]]) -> "SAset":
        return cls.of(*[[(p, r) for p, r in clause] for clause in data])

    def __str__(self) -> str:
        if not self.clauses:
            return "{}"
        return " | ".join("{" + ", ".join(map(str, clause)) + "}" for clause in self.clauses)


@dataclass(frozen=True)
class SignProduct:
    """Sign of coefficient × Π factor^exponent over base polynomials of a table."""

    factors: Tuple[Tuple[str, int], ...]
    coefficient: Rational = Rational(1)

    def sign(self, sign_of: Callable[[str], int]) -> int:
        s = sgn(self.coefficient)
        for name, exponent in self.factors:
            if exponent <= 0:
                continue
            v = sign_of(name)
            if v == 0:
                return 0
            if exponent % 2:
                s *= v
        return s


CellSet = FrozenSet[int]
Region = Union[SAset, AbstractSet[int]]


@dataclass(frozen=True)
class Column:
    index: int
    section: bool
    x: AlgebraicInterval
    roots: Tuple[AlgebraicInterval, ...]
    first_cell: int
    left: Optional[AlgebraicInterval] = None
    right: Optional[AlgebraicInterval] = None

    @property
    def size(self) -> int:
        return 2 * len(self.roots) + 1

    def cell(self, level: int) -> int:
        return self.first_cell + level


@dataclass(frozen=True)
class Cell:
    index: int
    column: int
    level: int
    dim: int
    sample: Tuple[AlgebraicInterval, AlgebraicInterval]

    @property
    def rational_sample(self) -> Optional[Tuple[Rational, Rational]]:
        if all(c.is_rational for c in self.sample):
            return (self.sample[0].lo, self.sample[1].lo)
        return None


class CellComplex:
    """Cells, their sign vectors and the closure relation of one decomposition."""

    def __init__(
        self,
        gens: Tuple[Symbol, Symbol],
        projection: Tuple[Symbol, Symbol],
        table: Mapping[str, Poly],
        basis: Sequence[Poly],
        columns: Sequence[Column],
        cells: Sequence[Cell],
        signs: Sequence[Mapping[str, int]],
        incidence: nx.DiGraph,
        products: Optional[Mapping[str, SignProduct]] = None,
    ):
        self.gens = gens
        self.projection = projection
        self.table = dict(table)
        self.basis = list(basis)
        self.columns = list(columns)
        self.cells = list(cells)
        self._signs = list(signs)
        self.incidence = incidence
        self.products = dict(products or {})
        for name, prod in self.products.items():
            unknown = [f for f, _ in prod.factors if f not in self.table]
            if unknown:
                raise UnknownPolynomialError(f"product {name} refers to unknown polynomials {unknown}")
        self._closure_of = {i: frozenset(nx.descendants(incidence, i)) | {i} for i in range(len(self.cells))}

    # --- bookkeeping ---------------------------------------------------------

    def __len__(self) -> int:
        return len(self.cells)

    @property
    def swapped(self) -> bool:
        return self.projection != self.gens

    @property
    def projection_roots(self) -> List[AlgebraicInterval]:
        return [c.x for c in self.columns if c.section]

    @property
    def all_cells(self) -> CellSet:
        return frozenset(range(len(self.cells)))

    def with_products(self, extra: Mapping[str, SignProduct]) -> "CellComplex":
        """Same cells with additional derived sign products registered."""
        merged = dict(self.products)
        merged.update(extra)
        clone = CellComplex.__new__(CellComplex)
        clone.__dict__.update(self.__dict__)
        clone.products = merged
        return clone

    def knows(self, poly_id: str) -> bool:
        return poly_id in self.table or poly_id in self.products

    def sign(self, index: int, poly_id: str) -> int:
        base = self._signs[index]
        if poly_id in base:
            return base[poly_id]
        if poly_id in self.products:
            return self.products[poly_id].sign(base.__getitem__)
        raise UnknownPolynomialError(f"unregistered polynomial {poly_id!r}")

    def sign_vector(self, index: int) -> Dict[str, int]:
        out = dict(self._signs[index])
        for name in self.products:
            out[name] = self.sign(index, name)
        return out

    def sample_point(self, index: int) -> Tuple[AlgebraicInterval, AlgebraicInterval]:
        return self.cells[index].sample

    # --- sets ----------------------------------------------------------------

    def cells_of(self, region: Region) -> CellSet:
        if isinstance(region, SAset):
            unknown = [p for p in region.poly_ids if not self.knows(p)]
            if unknown:
                raise UnknownPolynomialError(f"set refers to unregistered polynomials {sorted(unknown)}")
            return frozenset(i for i in range(len(self.cells)) if region.holds(lambda pid, i=i: self.sign(i, pid)))
        return frozenset(region)

    def zero_set(self, poly_id: str) -> CellSet:
        return frozenset(i for i in range(len(self.cells)) if self.sign(i, poly_id) == 0)

    def cells_of_dim(self, d: int) -> CellSet:
        return frozenset(c.index for c in self.cells if c.dim == d)

    def complement(self, region: Region) -> CellSet:
        return self.all_cells - self.cells_of(region)

    def closure(self, region: Region) -> CellSet:
        out = set()
        for i in self.cells_of(region):
            out |= self._closure_of[i]
        return frozenset(out)

    def interior(self, region: Region) -> CellSet:
        return self.complement(self.closure(self.complement(region)))

    def boundary(self, region: Region) -> CellSet:
        return self.closure(region) - self.interior(region)

    def dim(self, region: Region) -> int:
        return max((self.cells[i].dim for i in self.cells_of(region)), default=-1)

    def intersection_dim(self, a: Region, b: Region) -> int:
        return self.dim(self.cells_of(a) & self.cells_of(b))

    def closure_of_cell(self, index: int) -> CellSet:
        return self._closure_of[index]

    def cofaces(self, index: int) -> CellSet:
        """Cells whose closure contains ``index`` (the cell itself included)."""
        return frozenset(nx.ancestors(self.incidence, index)) | {index}

    @cached_property
    def adjacency(self) -> nx.Graph:
        """Symmetric relation: closures of the two cells intersect."""
        graph = nx.Graph()
        graph.add_nodes_from(range(len(self.cells)))
        for i, j in combinations(range(len(self.cells)), 2):
            if self._closure_of[i] & self._closure_of[j]:
                graph.add_edge(i, j)
        return graph

    # --- points --------------------------------------------------------------

    def stack_roots(self, x) -> List[AlgebraicInterval]:
        """Distinct real roots, over the projection coordinate x, of the basis."""
        return _stack(self.basis, as_algebraic(x))

    def locate(self, point: Sequence) -> int:
        """Index of the cell containing a point given in the table's variable order."""
        px, py = (point[1], point[0]) if self.swapped else (point[0], point[1])
        for col in self.columns:
            if col.section:
                if compare(px, col.x) != 0:
                    continue
                roots = col.roots
            else:
                if col.left is not None and compare(px, col.left) <= 0:
                    continue
                if col.right is not None and compare(px, col.right) >= 0:
                    continue
                roots = tuple(self.stack_roots(px))
            level = 0
            for r in roots:
                c = compare(py, r)
                if c == 0:
                    return col.cell(level + 1)
                if c < 0:
                    break
                level += 2
            return col.cell(level)
        raise ValueError(f"point {point} not located")

    def describe(self) -> Dict[str, int]:
        counts = {f"dim{d}": len(self.cells_of_dim(d)) for d in range(3)}
        counts["cells"] = len(self.cells)
        counts["columns"] = len(self.columns)
        return counts


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------

def _stack(basis: Sequence[Poly], x: AlgebraicInterval) -> List[AlgebraicInterval]:
    found: List[AlgebraicInterval] = []
    for f in basis:
        for r in roots_over(f, x):
            if not any(same_number(r, s) for s in found):
                found.append(r)
    return sort_numbers(found)


def _coprime_basis(polys: Sequence[Poly], gy: Symbol) -> Tuple[List[Poly], List[Poly]]:
    """Squarefree, primitive, pairwise coprime family plus the x-contents split off."""
    family: List[Poly] = []
    contents: List[Poly] = []
    for p in polys:
        if p.degree(gy) <= 0:
            contents.append(univariate(p))
            continue
        c = content_in(p, gy)
        if not c.is_ground:
            contents.append(c)
        family.append(squarefree_part(primitive_part_in(p, gy)))
    changed = True
    while changed:
        changed = False
        for i, j in combinations(range(len(family)), 2):
            g = gcd(family[i], family[j])
            if g.is_ground:
                continue
            parts = [g, exact_div(family[i], g), exact_div(family[j], g)]
            family = [f for k, f in enumerate(family) if k not in (i, j)] + [h for h in parts if not h.is_ground]
            changed = True
            break
    return family, contents


class _Decomposer:
    def __init__(self, table: Mapping[str, Poly], gens: Tuple[Symbol, Symbol], projection: Tuple[Symbol, Symbol]):
        self.table = dict(table)
        self.gens = gens
        self.projection = projection
        gx, gy = projection
        projected = [Poly(p.as_expr(), gx, gy, domain=QQ) for p in self.table.values()]
        self.basis, self.contents = _coprime_basis([p for p in projected if not p.is_ground], gy)

    def projection_polys(self) -> List[Poly]:
        gx, gy = self.projection
        out = list(self.contents)
        for f in self.basis:
            out.append(leading_coefficient_in(f, gy))
            if f.degree(gy) >= 2:
                out.append(discriminant(f, gy))
        for f, g in combinations(self.basis, 2):
            out.append(resultant(f, g, gy))
        return out

    def projection_roots(self) -> List[AlgebraicInterval]:
        factors: Dict[str, Poly] = {}
        for q in self.projection_polys():
            if q.is_zero:
                continue
            for fac in irreducible_factors(q):
                factors.setdefault(str(fac.as_expr()), fac)
        return sort_numbers([r for fac in factors.values() for r in real_roots(fac)])

    def _native(self, px: AlgebraicInterval, py: AlgebraicInterval) -> Tuple[AlgebraicInterval, AlgebraicInterval]:
        return (py, px) if self.projection != self.gens else (px, py)

    def build(self, products: Optional[Mapping[str, SignProduct]] = None) -> CellComplex:
        roots = self.projection_roots()
        columns: List[Column] = []
        cells: List[Cell] = []

        def add_column(section: bool, x: AlgebraicInterval, left=None, right=None):
            stack = tuple(_stack(self.basis, x))
            col = Column(len(columns), section, x, stack, len(cells), left, right)
            columns.append(col)
            m = len(stack)
            for level in range(col.size):
                if level % 2:
                    y = stack[(level - 1) // 2]
                    dim = 0 if section else 1
                else:
                    k = level // 2
                    if m == 0:
                        y = as_algebraic(0)
                    elif k == 0:
                        y = as_algebraic(rational_below(stack[0]))
                    elif k == m:
                        y = as_algebraic(rational_above(stack[-1]))
                    else:
                        y = as_algebraic(rational_between(stack[k - 1], stack[k]))
                    dim = 1 if section else 2
                cells.append(Cell(len(cells), col.index, level, dim, self._native(x, y)))

        if not roots:
            add_column(False, as_algebraic(0))
        else:
            add_column(False, as_algebraic(rational_below(roots[0])), None, roots[0])
            for k, r in enumerate(roots):
                add_column(True, r)
                right = roots[k + 1] if k + 1 < len(roots) else None
                sample = rational_between(r, right) if right is not None else rational_above(r)
                add_column(False, as_algebraic(sample), r, right)

        signs = [
            {name: sign_at(p, cell.sample) for name, p in self.table.items()}
            for cell in cells
        ]
        incidence = self._incidence(columns)
        return CellComplex(self.gens, self.projection, self.table, self.basis, columns, cells, signs, incidence, products)

    # --- closure relation ----------------------------------------------------

    def _incidence(self, columns: Sequence[Column]) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(range(columns[-1].first_cell + columns[-1].size))
        for col in columns:
            for level in range(0, col.size, 2):
                for nb in (level - 1, level + 1):
                    if 0 <= nb < col.size:
                        graph.add_edge(col.cell(level), col.cell(nb))
        for col in columns:
            if col.section:
                continue
            for side, sector_side in ((col.index - 1, 1), (col.index + 1, -1)):
                if 0 <= side < len(columns):
                    self._attach(graph, col, columns[side], sector_side)
        return graph

    def _attach(self, graph: nx.DiGraph, sector: Column, section: Column, sector_side: int) -> None:
        limits = self._limits(sector, section, sector_side)
        m = len(section.roots)
        n = len(sector.roots)
        for j, s in enumerate(limits, start=1):
            if 1 <= s <= m:
                graph.add_edge(sector.cell(2 * j - 1), section.cell(2 * s - 1))
        for j in range(n + 1):
            lower = limits[j - 1] if j >= 1 else 0
            upper = limits[j] if j < n else m + 1
            if lower == upper and lower in (0, m + 1):
                continue
            lo_level = 0 if lower == 0 else 2 * lower - 1
            hi_level = 2 * m if upper == m + 1 else 2 * upper - 1
            for level in range(lo_level, hi_level + 1):
                graph.add_edge(sector.cell(2 * j), section.cell(level))

    def _limits(self, sector: Column, section: Column, direction: int) -> List[int]:
        """Strip index (0 = -inf, m+1 = +inf, else the m-th root) each sector curve tends to.

        ``direction`` is +1 when the sector column lies right of the section.
        """
        gx, gy = self.projection
        alpha = section.x
        b = section.roots
        m = len(b)
        if m == 0:
            seps = [Rational(0)]
        else:
            seps = [rational_below(b[0])]
            seps += [rational_between(b[k], b[k + 1]) for k in range(m - 1)]
            seps.append(rational_above(b[-1]))

        bound = sector.right if direction > 0 else sector.left
        for ysep in seps:
            for f in self.basis:
                h = Poly(f.eval(gy, ysep).as_expr(), gx, domain=QQ)
                if h.is_ground:
                    continue
                for rho in real_roots(h):
                    if compare(rho, alpha) * direction > 0 and (bound is None or compare(rho, bound) * direction < 0):
                        bound = rho
        if direction > 0:
            xp = rational_between(alpha, bound) if bound is not None else rational_above(alpha)
        else:
            xp = rational_between(bound, alpha) if bound is not None else rational_below(alpha)

        here = _stack(self.basis, as_algebraic(xp))
        if len(here) != len(sector.roots):
            raise RuntimeError(f"stack size changed inside a column near {alpha}")
        return [sum(1 for ysep in seps if compare(ysep, r) < 0) for r in here]


def _as_table(polys: Union[Mapping[str, Poly], Sequence[Poly]], names: Optional[Sequence[str]] = None) -> Dict[str, Poly]:
    if isinstance(polys, Mapping):
        return dict(polys)
    polys = list(polys)
    names = list(names) if names is not None else [f"p{i}" for i in range(len(polys))]
    if len(names) != len(polys):
        raise ValueError("one name per polynomial")
    return dict(zip(names, polys))


def decompose(
    polys: Union[Mapping[str, Poly], Sequence[Poly]],
    names: Optional[Sequence[str]] = None,
    products: Optional[Mapping[str, SignProduct]] = None,
    var_order: Optional[str] = None,
    gens: Optional[Sequence[Symbol]] = None,
) -> CellComplex:
    """Decompose the plane into cells on which every table polynomial has constant sign."""
    table = _as_table(polys, names)
    if gens is None:
        if not table:
            raise ArityError("an empty table needs explicit variables")
        gens = next(iter(table.values())).gens
    gens = tuple(gens)
    if len(gens) != 2:
        raise ArityError(f"plane decomposition needs two variables, got {gens}")
    for name, p in table.items():
        if p.gens != gens:
            raise ArityError(f"polynomial {name} lives in {p.gens}, expected {gens}")
    if any(p.is_zero for p in table.values()):
        raise ArityError("the zero polynomial has no sign decomposition")
    projection = (gens[1], gens[0]) if Config.swapped_order(var_order) else gens
    cx = _Decomposer(table, gens, projection).build(products)
    logger.debug("CAD", f"decomposed {len(table)} polynomials", cx.describe())
    return cx


# module-level set predicates over a shared decomposition

def dim(S: Region, cx: CellComplex) -> int:
    return cx.dim(S)


def closure(S: Region, cx: CellComplex) -> CellSet:
    return cx.closure(S)


def interior(S: Region, cx: CellComplex) -> CellSet:
    return cx.interior(S)


def boundary(S: Region, cx: CellComplex) -> CellSet:
    return cx.boundary(S)


def intersection_dim(S: Region, T: Region, cx: CellComplex) -> int:
    return cx.intersection_dim(S, T)
