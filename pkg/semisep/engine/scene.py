"""
Validated input of one separation problem.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from itertools import combinations
from typing import Any, Dict, Mapping, Optional, Sequence, Tuple

from sympy import Poly, Rational, Symbol

from semisep.algebra.cad2 import CellComplex, SAset, decompose
from semisep.algebra.poly import gcd, is_squarefree, make_poly
from semisep.config import Config
from semisep.core.errors import DisjointnessError, FactorizationError, UnknownPolynomialError
from semisep.core.observability import logger
from semisep.geometry.resolve import INF

_RESERVED = re.compile(rf"^({INF}|E\d+)$|\*")


@dataclass(frozen=True)
class SceneOptions:
    var_order: Optional[str] = None
    max_blowups: Optional[int] = None
    degree_sweep: Optional[int] = None
    sample_budget: Optional[int] = None

    def merged(self, **overrides: Any) -> "SceneOptions":
        """Options with every non-None override applied."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    @property
    def resolved_max_blowups(self) -> int:
        return self.max_blowups or Config.MAX_BLOWUPS

    @property
    def resolved_degree_sweep(self) -> int:
        return self.degree_sweep or Config.DEGREE_SWEEP

    @property
    def resolved_sample_budget(self) -> int:
        return self.sample_budget or Config.SAMPLE_BUDGET

    def to_dict(self) -> Dict[str, Any]:
        return {k: v for k, v in self.__dict__.items() if v is not None}


@dataclass(frozen=True, eq=False)
class Scene:
    name: str
    variables: Tuple[Symbol, Symbol]
    table: Mapping[str, Poly]
    A: SAset
    B: SAset
    options: SceneOptions = field(default_factory=SceneOptions)

    @property
    def gens(self) -> Tuple[Symbol, Symbol]:
        return self.variables

    def complex(self) -> CellComplex:
        """Shared decomposition of the affine plane by the scene's polynomials."""
        cached = self.__dict__.get("_complex")
        if cached is None:
            cached = decompose(self.table, var_order=self.options.var_order, gens=self.variables)
            object.__setattr__(self, "_complex", cached)
        return cached

    # --- derived scenes --------------------------------------------------

    def with_options(self, **overrides: Any) -> "Scene":
        return replace(self, options=self.options.merged(**overrides))

    def swapped(self) -> "Scene":
        return replace(self, A=self.B, B=self.A)

    def rescaled(self, factors: Mapping[str, Any]) -> "Scene":
        table = {n: p * Rational(factors.get(n, 1)) for n, p in self.table.items()}
        return replace(self, table=table)

    def substituted(self, mapping: Mapping[Symbol, Any]) -> "Scene":
        """Pull the scene back along a change of coordinates given as polynomials in the variables."""
        table = {n: make_poly(p.as_expr().subs(mapping, simultaneous=True), self.variables) for n, p in self.table.items()}
        return replace(self, table=table)


def build_scene(
    name: str,
    variables: Sequence[Symbol],
    table: Mapping[str, Poly],
    A: SAset,
    B: SAset,
    options: Optional[SceneOptions] = None,
    irreducible: Optional[Mapping[str, bool]] = None,
) -> Scene:
    scene = Scene(name, tuple(variables), dict(table), A, B, options or SceneOptions())
    validate_scene(scene, irreducible)
    return scene


def validate_scene(scene: Scene, irreducible: Optional[Mapping[str, bool]] = None) -> None:
    """Reject reserved names, undeclared references, non-squarefree or non-coprime
    polynomials, declared-reducible polynomials, and overlapping sets."""
    for name, p in scene.table.items():
        if _RESERVED.search(name):
            raise UnknownPolynomialError(f"polynomial name {name!r} is reserved", name=name)
        if p.is_ground:
            raise FactorizationError(f"polynomial {name} is constant", name=name)
        if irreducible is not None and not irreducible.get(name, True):
            raise FactorizationError(
                f"polynomial {name} is declared reducible; list its irreducible factors instead", name=name
            )
        if not is_squarefree(p):
            raise FactorizationError(f"polynomial {name} is not squarefree", name=name)
    for (n1, p1), (n2, p2) in combinations(scene.table.items(), 2):
        if not gcd(p1, p2).is_ground:
            raise FactorizationError(f"polynomials {n1} and {n2} share a factor", names=f"{n1},{n2}")

    for label, S in (("A", scene.A), ("B", scene.B)):
        unknown = sorted(S.poly_ids - set(scene.table))
        if unknown:
            raise UnknownPolynomialError(f"set {label} refers to undeclared polynomials {unknown}")

    cx = scene.complex()
    overlap = cx.cells_of(scene.A) & cx.cells_of(scene.B)
    if overlap:
        raise DisjointnessError(f"A and B share {len(overlap)} cell(s)", cells=sorted(overlap))
    logger.debug("Scene", f"scene {scene.name} validated", {"polynomials": list(scene.table), **cx.describe()})

