"""
Sampling oracle: rational samples of A and B and an exact LP search for a
polynomial of bounded degree that separates them.

The oracle only sees finitely many points, so a certificate is evidence of
strict separation and a failed sweep is evidence against it; neither
overrides the structural decision.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import Poly, QQ, Rational, Symbol
from sympy.solvers.simplex import InfeasibleLPError, UnboundedLPError, linprog

from semisep.algebra.cad2 import CellComplex, SAset
from semisep.algebra.poly import AlgebraicInterval, rational_between, sign_at
from semisep.config import Config
from semisep.core.errors import PreconditionError
from semisep.core.observability import logger
from semisep.core.records import DegreeTrial, OracleReport, Verdict

Point = Tuple[Rational, Rational]

_GRID = 64
_IRRATIONAL_TRIES = 4


@dataclass
class SampleCloud:
    points: List[Point] = field(default_factory=list)
    provenance: List[int] = field(default_factory=list)

    def add(self, point: Point, cell: int) -> bool:
        if point in self.points:
            return False
        self.points.append(point)
        self.provenance.append(cell)
        return True

    def __len__(self) -> int:
        return len(self.points)

    def __bool__(self) -> bool:
        return bool(self.points)


def _sign_of(cx: CellComplex, point: Point) -> Callable[[str], int]:
    cache: Dict[str, int] = {}

    def sign_of(name: str) -> int:
        if name not in cache:
            if name in cx.table:
                cache[name] = sign_at(cx.table[name], point)
            else:
                cache[name] = cx.products[name].sign(sign_of)
        return cache[name]

    return sign_of


def _inside(lo: Optional[AlgebraicInterval], hi: Optional[AlgebraicInterval], t: Rational) -> Rational:
    """The rational at fraction t of a closed rational interval strictly inside (lo, hi)."""
    span = Config.SAMPLE_SPAN
    if lo is None and hi is None:
        a, b = Rational(-span), Rational(span)
    elif lo is None:
        b = rational_between(hi.lo - 1, hi)
        a = b - span
    elif hi is None:
        a = rational_between(lo, lo.hi + 1)
        b = a + span
    else:
        m = rational_between(lo, hi)
        a, b = rational_between(lo, m), rational_between(m, hi)
    return a + t * (b - a)


def _random_point(cx: CellComplex, index: int, rng: np.random.Generator) -> Optional[Point]:
    cell = cx.cells[index]
    if cell.dim == 0:
        return None
    col = cx.columns[cell.column]

    def draw() -> Rational:
        return Rational(int(rng.integers(0, _GRID + 1)), _GRID)

    if col.section:
        if not col.x.is_rational:
            return None
        x, roots = col.x.lo, col.roots
    else:
        x = _inside(col.left, col.right, draw())
        roots = tuple(cx.stack_roots(x))
    if cell.level % 2:
        root = roots[(cell.level - 1) // 2]
        if not root.is_rational:
            return None
        y = root.lo
    else:
        k = cell.level // 2
        lo = roots[k - 1] if k > 0 else None
        hi = roots[k] if k < len(roots) else None
        y = _inside(lo, hi, draw())
    return (y, x) if cx.swapped else (x, y)


def sample(S: SAset, cx: CellComplex, budget: Optional[int] = None, seed: Optional[int] = None) -> SampleCloud:
    """Rational points of S, then random fill up to the budget.

    A cell whose stored sample is irrational gets a few random draws instead; a cell
    without rational points (a curve arc like y = sqrt(2)) contributes nothing.
    """
    budget = budget or Config.SAMPLE_BUDGET
    if budget < 1:
        raise PreconditionError("sample budget must be at least 1")
    rng = np.random.default_rng(Config.SAMPLE_SEED if seed is None else seed)
    cloud = SampleCloud()
    cells = sorted(cx.cells_of(S))

    def admit(point: Point, index: int) -> None:
        if not S.holds(_sign_of(cx, point)):
            raise RuntimeError(f"sample {point} of cell {index} fails its set's sign conditions")
        cloud.add(point, index)

    skipped = 0
    for i in cells:
        rs = cx.cells[i].rational_sample
        for _ in range(_IRRATIONAL_TRIES if rs is None else 0):
            rs = _random_point(cx, i, rng)
            if rs is not None:
                break
        if rs is None:
            skipped += 1
            continue
        admit(rs, i)
    if skipped:
        logger.debug("Oracle", f"{skipped} cells have no rational sample")
    top = max((cx.cells[i].dim for i in cells), default=0)
    pool = [i for i in cells if cx.cells[i].dim == top] if top > 0 else []
    attempts = 0
    while pool and len(cloud) < budget and attempts < 4 * budget:
        i = int(rng.choice(pool))
        attempts += 1
        point = _random_point(cx, i, rng)
        if point is not None:
            admit(point, i)
    logger.debug("Oracle", f"sampled {len(cloud)} points from {len(cells)} cells")
    return cloud


# ---------------------------------------------------------------------------
# LP separator
# ---------------------------------------------------------------------------

def monomials(degree: int) -> List[Tuple[int, int]]:
    """Exponent pairs of total degree at most ``degree``, by degree."""
    return [(d - j, j) for d in range(degree + 1) for j in range(d + 1)]


def _row(point: Point, exps: Sequence[Tuple[int, int]]) -> List[Rational]:
    x, y = point
    return [x ** i * y ** j for i, j in exps]


@dataclass(frozen=True)
class SeparatorCertificate:
    poly: Poly
    margin: Rational
    degree: int

    def verify(self, cloud_a: SampleCloud, cloud_b: SampleCloud) -> bool:
        """Exact re-check: f ≥ margin on A samples and f ≤ −margin on B samples."""
        value = lambda p: Rational(self.poly(*p))
        return (
            all(value(p) >= self.margin for p in cloud_a.points)
            and all(value(p) <= -self.margin for p in cloud_b.points)
        )

    def describe(self) -> str:
        return str(self.poly.as_expr())


def lp_separator(
    cloud_a: SampleCloud,
    cloud_b: SampleCloud,
    degree: int,
    gens: Sequence[Symbol],
) -> Optional[SeparatorCertificate]:
    """Polynomial of degree ≤ d with coefficients in [-1, 1] maximising the margin δ on the samples.

    Returns None when the best margin is zero.
    """
    overlap = set(cloud_a.points) & set(cloud_b.points)
    if overlap:
        raise PreconditionError(f"sample clouds share {len(overlap)} point(s)")
    gens = tuple(gens)
    if not cloud_a or not cloud_b:
        sign = 1 if cloud_a or not cloud_b else -1
        return SeparatorCertificate(Poly(sign, *gens, domain=QQ), Rational(1), 0)

    # linprog keeps every variable >= 0, so coefficients are shifted: c = c' - 1 with 0 <= c' <= 2
    exps = monomials(degree)
    n = len(exps)
    rows: List[List[Rational]] = []
    rhs: List[Rational] = []
    for p in cloud_a.points:
        m = _row(p, exps)
        rows.append([-v for v in m] + [1])
        rhs.append(-sum(m))
    for p in cloud_b.points:
        m = _row(p, exps)
        rows.append(m + [1])
        rhs.append(sum(m))
    for k in range(n + 1):
        rows.append([1 if j == k else 0 for j in range(n + 1)])
        rhs.append(2 if k < n else 1)
    objective = [0] * n + [-1]
    try:
        _, solution = linprog(objective, rows, rhs)
    except (InfeasibleLPError, UnboundedLPError):
        return None
    delta = Rational(solution[-1])
    if delta <= 0:
        return None
    gx, gy = gens
    coeffs = [Rational(c) - 1 for c in solution[:n]]
    expr = sum(c * gx ** i * gy ** j for c, (i, j) in zip(coeffs, exps))
    cert = SeparatorCertificate(Poly(expr, *gens, domain=QQ), delta, degree)
    if not cert.verify(cloud_a, cloud_b):
        raise RuntimeError(f"LP solution {cert.describe()} fails the exact re-check")
    return cert


@dataclass
class Sweep:
    trials: List[DegreeTrial] = field(default_factory=list)
    certificate: Optional[SeparatorCertificate] = None

    @property
    def first_feasible(self) -> Optional[int]:
        return next((t.degree for t in self.trials if t.feasible), None)


def degree_sweep(
    cloud_a: SampleCloud,
    cloud_b: SampleCloud,
    d_max: int,
    gens: Sequence[Symbol],
    exhaustive: bool = False,
) -> Sweep:
    """Try degrees 1..d_max in order; stop at the first feasible one unless ``exhaustive``."""
    if d_max < 1:
        raise PreconditionError("degree sweep needs d_max >= 1")
    sweep = Sweep()
    for d in range(1, d_max + 1):
        started = time.perf_counter()
        cert = lp_separator(cloud_a, cloud_b, d, gens)
        sweep.trials.append(DegreeTrial(d, cert is not None, time.perf_counter() - started))
        if cert is not None and sweep.certificate is None:
            sweep.certificate = cert
        if sweep.certificate is not None and cert is None:
            raise RuntimeError(f"separator found at degree {sweep.certificate.degree} but not at {d}")
        if cert is not None and not exhaustive:
            break
    logger.debug("Oracle", "degree sweep", [t.to_dict() for t in sweep.trials])
    return sweep


def cross_check(
    A: SAset,
    B: SAset,
    cx: CellComplex,
    verdict: Optional[Verdict] = None,
    d_max: Optional[int] = None,
    budget: Optional[int] = None,
    seed: Optional[int] = None,
) -> OracleReport:
    """Sample both sets, sweep degrees and compare with the engine's verdict when there is one."""
    d_max = d_max or Config.DEGREE_SWEEP
    cloud_a = sample(A, cx, budget, seed)
    cloud_b = sample(B, cx, budget, None if seed is None else seed + 1)
    sweep = degree_sweep(cloud_a, cloud_b, d_max, cx.gens)
    cert = sweep.certificate
    report = OracleReport(
        samples_a=len(cloud_a),
        samples_b=len(cloud_b),
        trials=sweep.trials,
        first_feasible=sweep.first_feasible,
        certificate=cert.describe() if cert else None,
        margin=str(cert.margin) if cert else None,
    )
    if verdict is not None and verdict.strict is not None:
        report.agreement = verdict.strict == (cert is not None)
        if not report.agreement:
            logger.warning("Oracle", "sample-level result differs from the engine verdict", {
                "strict": verdict.strict, "certificate": report.certificate,
            })
    logger.info("Oracle", f"first feasible degree: {report.first_feasible}", {"certificate": report.certificate})
    return report
