"""
Exact polynomial kernel over the rationals.

Polynomials are sympy ``Poly`` objects over ``QQ``. Real algebraic numbers
are represented by :class:`AlgebraicInterval`, an isolating interval of a
squarefree univariate polynomial. No decision made here ever depends on
floating point: interval arithmetic is only used to *certify* nonzero signs,
and zero is always confirmed exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from itertools import combinations
import threading
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from mpmath import iv
from sympy import CRootOf, Dummy, Poly, QQ, Rational, Symbol, ceiling, floor, minimal_polynomial, sympify
from sympy.polys.polyerrors import CoercionFailed, ExactQuotientFailed, GeneratorsError, PolynomialError

from semisep.config import Config
from semisep.core.errors import ArityError, DegenerateInputError, NonDivisibleError

# generator of free-standing univariate polynomials (minimal polynomials of roots)
ROOT_VAR = Dummy("t")
_MINPOLY_VAR = Dummy("m")
_IV_PREC = 160
_IV_LOCK = threading.Lock()


def sgn(value: Any) -> int:
    if value > 0:
        return 1
    if value < 0:
        return -1
    return 0


def to_rational(value: Any) -> Rational:
    """Coerce ints, fractions, ``"p/q"`` strings and exact roots to a sympy Rational."""
    if isinstance(value, AlgebraicInterval):
        if not value.is_rational:
            raise TypeError(f"{value} is irrational")
        return value.lo
    if isinstance(value, Rational):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(value, int):
        return Rational(value)
    if isinstance(value, Fraction):
        return Rational(value.numerator, value.denominator)
    if isinstance(value, str):
        return Rational(value)
    raise TypeError(f"not an exact rational: {value!r}")


# ---------------------------------------------------------------------------
# construction and ring operations
# ---------------------------------------------------------------------------

def make_poly(expr: Any, gens: Sequence[Symbol]) -> Poly:
    """Build a Poly over QQ in exactly ``gens``."""
    try:
        return Poly(sympify(expr), *gens, domain=QQ)
    except (PolynomialError, GeneratorsError, CoercionFailed) as exc:
        raise ArityError(f"{expr} is not a polynomial over QQ in {tuple(map(str, gens))}") from exc


def _check_context(p: Poly, q: Poly) -> None:
    if p.gens != q.gens:
        raise ArityError(f"variable contexts differ: {p.gens} vs {q.gens}")


def add(p: Poly, q: Poly) -> Poly:
    _check_context(p, q)
    return p + q


def subtract(p: Poly, q: Poly) -> Poly:
    _check_context(p, q)
    return p - q


def multiply(p: Poly, q: Poly) -> Poly:
    _check_context(p, q)
    return p * q


def exact_div(p: Poly, q: Poly) -> Poly:
    """Return r with q·r = p, or raise NonDivisibleError."""
    _check_context(p, q)
    if q.is_zero:
        raise NonDivisibleError("division by the zero polynomial")
    try:
        return p.exquo(q)
    except ExactQuotientFailed as exc:
        raise NonDivisibleError(f"{q.as_expr()} does not divide {p.as_expr()}") from exc


def substitute(p: Poly, mapping: Mapping[Symbol, Any], gens: Optional[Sequence[Symbol]] = None) -> Poly:
    """Simultaneously substitute polynomials for variables of ``p``."""
    unknown = [s for s in mapping if s not in p.gens]
    if unknown:
        raise ArityError(f"cannot substitute {unknown} into a polynomial in {p.gens}")
    values = {s: (v.as_expr() if isinstance(v, Poly) else sympify(v)) for s, v in mapping.items()}
    return make_poly(p.as_expr().subs(values, simultaneous=True), gens or p.gens)


def derivative(p: Poly, var: Symbol) -> Poly:
    if var not in p.gens:
        raise ArityError(f"{var} is not a variable of {p.as_expr()}")
    return p.diff(var)


def homogenize(p: Poly, var: Symbol) -> Poly:
    """Homogenize with a fresh variable appended to the generators."""
    if var in p.gens:
        raise ArityError(f"{var} already occurs in {p.gens}")
    return p.homogenize(var)


def dehomogenize(p: Poly, var: Symbol, gens: Sequence[Symbol]) -> Poly:
    if var not in p.gens:
        raise ArityError(f"{var} is not a variable of {p.as_expr()}")
    return make_poly(p.as_expr().subs(var, 1), gens)


def lift(p: Poly, gens: Sequence[Symbol]) -> Poly:
    """Re-express ``p`` in a larger (or reordered) generator list."""
    return make_poly(p.as_expr(), gens)


def _rebuild(value: Any, gens: Sequence[Symbol]) -> Poly:
    if isinstance(value, Poly):
        return Poly(value.as_expr(), *gens, domain=QQ)
    return Poly(value, *gens, domain=QQ)


# ---------------------------------------------------------------------------
# gcd, squarefree parts, contents, elimination
# ---------------------------------------------------------------------------

def gcd(p: Poly, q: Poly) -> Poly:
    """Monic greatest common divisor; gcd(p, 0) is p made monic."""
    _check_context(p, q)
    g = p.gcd(q)
    return g.monic() if not g.is_zero else g


def squarefree_part(p: Poly) -> Poly:
    if p.is_zero:
        raise DegenerateInputError("squarefree part of the zero polynomial")
    if p.is_ground:
        return Poly(1, *p.gens, domain=QQ)
    return p.sqf_part().monic()


def is_squarefree(p: Poly) -> bool:
    if p.is_ground:
        return not p.is_zero
    return squarefree_part(p).total_degree() == p.total_degree()


def same_up_to_constant(p: Poly, q: Poly) -> bool:
    if p.is_zero or q.is_zero:
        return p.is_zero and q.is_zero
    return p.monic() == q.monic()


def coefficients_in(p: Poly, var: Symbol) -> Dict[int, Poly]:
    """Coefficients of ``p`` as a polynomial in ``var``, keyed by degree."""
    if var not in p.gens or len(p.gens) < 2:
        raise ArityError(f"need a multivariate polynomial containing {var}")
    idx = p.gens.index(var)
    others = tuple(g for g in p.gens if g != var)
    grouped: Dict[int, Dict[Tuple[int, ...], Any]] = {}
    for monom, coeff in p.terms():
        grouped.setdefault(monom[idx], {})[monom[:idx] + monom[idx + 1:]] = coeff
    return {k: Poly.from_dict(d, *others, domain=QQ) for k, d in grouped.items()}


def leading_coefficient_in(p: Poly, var: Symbol) -> Poly:
    coeffs = coefficients_in(p, var)
    return coeffs[max(coeffs)]


def content_in(p: Poly, var: Symbol) -> Poly:
    """Monic gcd of the coefficients of ``p`` viewed as a polynomial in ``var``."""
    coeffs = list(coefficients_in(p, var).values())
    g = coeffs[0]
    for c in coeffs[1:]:
        g = g.gcd(c)
    return g.monic()


def primitive_part_in(p: Poly, var: Symbol) -> Poly:
    return exact_div(p, lift(content_in(p, var), p.gens))


def resultant(p: Poly, q: Poly, var: Symbol) -> Poly:
    """Resultant eliminating ``var``; the result lives in the remaining variables."""
    _check_context(p, q)
    if var not in p.gens or (p.degree(var) <= 0 and q.degree(var) <= 0):
        raise ArityError(f"{var} occurs in neither {p.as_expr()} nor {q.as_expr()}")
    others = tuple(g for g in p.gens if g != var)
    P = Poly(p.as_expr(), var, *others, domain=QQ)
    Q = Poly(q.as_expr(), var, *others, domain=QQ)
    return _rebuild(P.resultant(Q), others or (var,))


def discriminant(p: Poly, var: Symbol) -> Poly:
    if var not in p.gens or p.degree(var) < 2:
        raise ArityError(f"discriminant needs degree >= 2 in {var}")
    others = tuple(g for g in p.gens if g != var)
    P = Poly(p.as_expr(), var, *others, domain=QQ)
    return _rebuild(P.discriminant(), others or (var,))


def univariate(p: Poly) -> Poly:
    """View a polynomial that uses at most one variable as univariate."""
    if len(p.gens) == 1:
        return p
    used = [g for g in p.gens if p.degree(g) > 0]
    if len(used) > 1:
        raise ArityError(f"{p.as_expr()} is not univariate")
    return Poly(p.as_expr(), used[0] if used else p.gens[0], domain=QQ)


def irreducible_factors(p: Poly) -> List[Poly]:
    """Monic irreducible factors of a univariate polynomial over QQ."""
    p = univariate(p)
    if p.is_ground:
        return []
    return [f.monic() for f, _ in p.factor_list()[1]]


# ---------------------------------------------------------------------------
# real algebraic numbers
# ---------------------------------------------------------------------------

def _rebase(p: Poly, gen: Symbol) -> Poly:
    return Poly(univariate(p).all_coeffs(), gen, domain=QQ)


@dataclass(frozen=True)
class AlgebraicInterval:
    """A real root of ``poly`` isolated in [lo, hi]; lo == hi means rational."""

    poly: Poly
    lo: Rational
    hi: Rational

    @classmethod
    def exact(cls, value: Any) -> "AlgebraicInterval":
        r = to_rational(value)
        return cls(Poly(ROOT_VAR - r, ROOT_VAR, domain=QQ), r, r)

    @property
    def is_rational(self) -> bool:
        return self.lo == self.hi

    @property
    def value(self) -> Rational:
        if not self.is_rational:
            raise TypeError(f"{self} is irrational")
        return self.lo

    def refined(self) -> "AlgebraicInterval":
        if self.is_rational:
            return self
        s, t = self.poly.refine_root(self.lo, self.hi, eps=(self.hi - self.lo) / 4)
        s, t = Rational(s), Rational(t)
        for end in (s, t):
            if self.poly.eval(end) == 0:
                return AlgebraicInterval(self.poly, end, end)
        return AlgebraicInterval(self.poly, s, t)

    def narrowed(self, width: Rational) -> "AlgebraicInterval":
        a = self
        while a.hi - a.lo > width:
            a = a.refined()
        return a

    def approx(self, digits: int = 12) -> float:
        a = self.narrowed(Rational(1, 10 ** digits))
        return float((a.lo + a.hi) / 2)

    def root_expr(self):
        """Exact sympy expression (Rational or CRootOf) for this number."""
        if self.is_rational:
            return self.lo
        return CRootOf(self.poly, self.poly.count_roots(None, self.lo))

    def __str__(self) -> str:
        if self.is_rational:
            return str(self.lo)
        return f"root({self.poly.as_expr()}, [{self.lo}, {self.hi}])"


Number = Union[Rational, AlgebraicInterval]


def as_algebraic(value: Any) -> AlgebraicInterval:
    if isinstance(value, AlgebraicInterval):
        return value
    return AlgebraicInterval.exact(value)


def format_number(value: Any) -> str:
    a = as_algebraic(value)
    if a.is_rational:
        return str(a.lo)
    return f"{a.approx(6):.6f}~{a.poly.as_expr().subs(ROOT_VAR, Symbol('t'))}"


def same_number(a: Any, b: Any) -> bool:
    a, b = as_algebraic(a), as_algebraic(b)
    if a.is_rational and b.is_rational:
        return a.lo == b.lo
    if a.is_rational or b.is_rational:
        r, other = (a, b) if a.is_rational else (b, a)
        return other.lo <= r.lo <= other.hi and other.poly.eval(r.lo) == 0
    lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
    if lo > hi:
        return False
    g = a.poly.gcd(_rebase(b.poly, a.poly.gen))
    return g.degree() > 0 and g.count_roots(lo, hi) > 0


def compare(a: Any, b: Any) -> int:
    """Exact comparison of two real algebraic numbers (or rationals)."""
    a, b = as_algebraic(a), as_algebraic(b)
    if a.is_rational and b.is_rational:
        return sgn(a.lo - b.lo)
    if same_number(a, b):
        return 0
    while True:
        if a.hi < b.lo:
            return -1
        if b.hi < a.lo:
            return 1
        a, b = a.refined(), b.refined()


def sort_numbers(values: Sequence[Any]) -> List[Any]:
    return sorted(values, key=cmp_to_key(compare))


def simplest_between(lo: Rational, hi: Rational) -> Rational:
    """A short rational in the open interval (lo, hi)."""
    if lo < 0 < hi:
        return Rational(0)
    n = floor(lo) + 1
    if n < hi:
        return Rational(n) if lo >= 0 else Rational(ceiling(hi) - 1)
    return (lo + hi) / 2


def rational_between(a: Any, b: Any) -> Rational:
    """A rational strictly between a < b."""
    a, b = as_algebraic(a), as_algebraic(b)
    while not a.hi < b.lo:
        if compare(a, b) >= 0:
            raise ValueError(f"{a} is not below {b}")
        a, b = a.refined(), b.refined()
    return simplest_between(a.hi, b.lo)


def rational_below(a: Any, span: int = 1) -> Rational:
    return Rational(floor(as_algebraic(a).lo) - span)


def rational_above(a: Any, span: int = 1) -> Rational:
    return Rational(ceiling(as_algebraic(a).hi) + span)


def isolate_real_roots(p: Poly) -> List[Tuple[AlgebraicInterval, int]]:
    """Distinct real roots with multiplicities, in increasing order.

    Irrational roots carry their monic irreducible factor as defining
    polynomial, so it doubles as the minimal polynomial.
    """
    p = univariate(p)
    if p.is_zero:
        raise DegenerateInputError("the zero polynomial has no isolated roots")
    if p.degree() <= 0:
        return []
    q = _rebase(p, ROOT_VAR)
    factors = [f.monic() for f, _ in q.factor_list()[1]]
    out: List[Tuple[AlgebraicInterval, int]] = []
    for (a, b), mult in q.intervals():
        a, b = Rational(a), Rational(b)
        if a == b:
            out.append((AlgebraicInterval.exact(a), mult))
            continue
        owner = next(f for f in factors if f.count_roots(a, b) > 0)
        if owner.degree() == 1:
            out.append((AlgebraicInterval.exact(-owner.all_coeffs()[1]), mult))
            continue
        out.append((AlgebraicInterval(owner, a, b), mult))
    return sorted(out, key=cmp_to_key(lambda r, s: compare(r[0], s[0])))


def real_roots(p: Poly) -> List[AlgebraicInterval]:
    return [r for r, _ in isolate_real_roots(p)]


# ---------------------------------------------------------------------------
# signs at points
# ---------------------------------------------------------------------------

def _iv_rational(r: Rational):
    return iv.mpf(int(r.p)) / int(r.q)


def _iv_box(a: AlgebraicInterval):
    return iv.mpf([_iv_rational(a.lo).a, _iv_rational(a.hi).b])


def _interval_sign(q: Poly, coords: Sequence[AlgebraicInterval], prec: int = _IV_PREC) -> int:
    """Certified sign of q on a box, or 0 when the box straddles a zero."""
    with _IV_LOCK:
        saved = iv.prec
        iv.prec = prec
        try:
            boxes = [_iv_box(c) for c in coords]
            total = iv.mpf(0)
            for monom, coeff in q.terms():
                term = _iv_rational(Rational(coeff))
                for box, e in zip(boxes, monom):
                    if e:
                        term = term * box ** e
                total = total + term
            lower, upper = total.a, total.b
        finally:
            iv.prec = saved
    if lower > 0:
        return 1
    if upper < 0:
        return -1
    return 0


def _vanishes_exactly(q: Poly, coords: Sequence[AlgebraicInterval]) -> bool:
    expr = q.as_expr().subs({g: c.root_expr() for g, c in zip(q.gens, coords)}, simultaneous=True)
    if expr == 0:
        return True
    return minimal_polynomial(expr, _MINPOLY_VAR) == _MINPOLY_VAR


def _sign_univariate(q: Poly, alpha: AlgebraicInterval) -> int:
    g = q.gcd(_rebase(alpha.poly, q.gen))
    if g.degree() > 0 and g.count_roots(alpha.lo, alpha.hi) > 0:
        return 0
    a = alpha
    while q.count_roots(a.lo, a.hi) > 0:
        a = a.refined()
    return sgn(q.eval(a.lo))


def sign_at(p: Poly, point: Sequence[Any]) -> int:
    """Exact sign of ``p`` at a point with rational or real algebraic coordinates."""
    if len(point) != len(p.gens):
        raise ArityError(f"point of arity {len(point)} for a polynomial in {len(p.gens)} variables")
    coords = [as_algebraic(c) for c in point]
    exact = {g: c.lo for g, c in zip(p.gens, coords) if c.is_rational}
    rest = [(g, c) for g, c in zip(p.gens, coords) if not c.is_rational]
    if not rest:
        return sgn(p(*[c.lo for c in coords]))
    q = p.eval(exact) if exact else p
    q = _rebuild(q, [g for g, _ in rest])
    if q.is_ground:
        return sgn(q.LC())
    if len(rest) == 1:
        return _sign_univariate(univariate(q), rest[0][1])
    boxes = [c for _, c in rest]
    for _ in range(Config.REFINE_ROUNDS):
        s = _interval_sign(q, boxes)
        if s:
            return s
        boxes = [b.refined() for b in boxes]
    if _vanishes_exactly(q, boxes):
        return 0
    prec = _IV_PREC
    while True:
        prec += 32
        boxes = [b.refined() for b in boxes]
        s = _interval_sign(q, boxes, prec)
        if s:
            return s


def evaluate(p: Poly, point: Sequence[Any]) -> Rational:
    """Exact value of ``p`` at a rational point."""
    if len(point) != len(p.gens):
        raise ArityError("point arity does not match")
    return Rational(p(*[to_rational(c) for c in point]))


# ---------------------------------------------------------------------------
# plane-specific helpers
# ---------------------------------------------------------------------------

def roots_over(p: Poly, alpha: Any) -> List[AlgebraicInterval]:
    """Distinct real roots in the second variable of p(alpha, y), sorted."""
    if len(p.gens) != 2:
        raise ArityError("roots_over needs a bivariate polynomial")
    gx, gy = p.gens
    a = as_algebraic(alpha)
    if a.is_rational:
        column = _rebuild(p.eval(gx, a.lo), (gy,))
        if column.is_zero:
            raise DegenerateInputError(f"{p.as_expr()} vanishes on the whole line {gx} = {a.lo}")
        return real_roots(column)
    m = Poly(_rebase(a.poly, gx).as_expr(), gx, gy, domain=QQ)
    norm = resultant(m, p, gx)
    if norm.is_zero:
        raise DegenerateInputError(f"{p.as_expr()} vanishes on the whole line {gx} = {a}")
    found = [b for b in real_roots(norm) if sign_at(p, (a, b)) == 0]
    return sort_numbers(found)


def solve_plane_system(polys: Sequence[Poly]) -> List[Tuple[AlgebraicInterval, AlgebraicInterval]]:
    """Real common zeros of a zero-dimensional system of bivariate polynomials."""
    polys = [p for p in polys if not p.is_zero]
    if not polys:
        raise DegenerateInputError("empty system")
    gx, gy = polys[0].gens
    xs: Optional[Poly] = None

    def meet(acc: Optional[Poly], h: Poly) -> Poly:
        h = _rebuild(h, (gx,))
        return h if acc is None else acc.gcd(h)

    vertical = [p for p in polys if p.degree(gy) <= 0]
    slanted = [p for p in polys if p.degree(gy) > 0]
    for p in vertical:
        xs = meet(xs, p)
    for p, q in combinations(slanted, 2):
        r = resultant(p, q, gy)
        if not r.is_zero:
            xs = meet(xs, r)
    if xs is None or xs.is_zero:
        raise DegenerateInputError("system is not zero-dimensional")
    if xs.is_ground:
        return []
    if not slanted:
        raise DegenerateInputError("system is not zero-dimensional")
    points = []
    for alpha in real_roots(xs):
        base = None
        for p in slanted:
            try:
                base = roots_over(p, alpha)
                break
            except DegenerateInputError:
                continue
        if base is None:
            raise DegenerateInputError("system is not zero-dimensional")
        for beta in base:
            if all(sign_at(p, (alpha, beta)) == 0 for p in polys):
                points.append((alpha, beta))
    return points
