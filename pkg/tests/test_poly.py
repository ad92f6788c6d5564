"""
Tests for exact polynomial arithmetic and real algebraic numbers (semisep/algebra/poly.py)
"""
import os
import sys

import numpy as np
import pytest
from sympy import Rational, symbols

# Add project root to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from semisep.algebra.poly import (
    compare,
    exact_div,
    format_number,
    gcd,
    isolate_real_roots,
    homogenize,
    is_squarefree,
    make_poly,
    real_roots,
    resultant,
    roots_over,
    same_number,
    sign_at,
    solve_plane_system,
    to_rational,
)
from semisep.core.errors import ArityError, DegenerateInputError, NonDivisibleError

x, y, h = symbols("x y h")


def P(expr):
    return make_poly(expr, (x, y))


class TestArithmetic:
    """Ring operations, gcds and elimination."""

    def test_exact_div(self):
        assert exact_div(P(x**2 - y**2), P(x - y)) == P(x + y)

    def test_exact_div_fails(self):
        with pytest.raises(NonDivisibleError):
            exact_div(P(x**2 + 1), P(x - 1))

    def test_context_mismatch(self):
        with pytest.raises(ArityError):
            gcd(P(x), make_poly(x, (x, h)))

    def test_gcd_is_monic(self):
        assert gcd(P(2 * x**2 - 2), P(3 * x - 3)) == P(x - 1)

    def test_squarefree(self):
        assert is_squarefree(P(x**2 + y**2 - 1))
        assert not is_squarefree(P((x - y) ** 2 * (x + 1)))

    def test_resultant_eliminates(self):
        r = resultant(P(x**2 + y**2 - 1), P(x - y), y)
        assert r.gens == (x,)
        assert sorted(real_roots(r), key=lambda a: a.approx())[0].approx() == pytest.approx(-2 ** -0.5)

    def test_homogenize_appends_variable(self):
        F = homogenize(P(x**2 + y - 1), h)
        assert F.gens == (x, y, h)
        assert F.is_homogeneous

    def test_to_rational(self):
        assert to_rational("3/4") == Rational(3, 4)
        with pytest.raises(TypeError):
            to_rational(0.5)


class TestRealNumbers:
    """Isolated real roots, comparisons and exact signs."""

    def test_rational_roots_are_exact(self):
        roots = real_roots(make_poly(x**3 - x, (x,)))
        assert [r.lo for r in roots] == [-1, 0, 1]
        assert all(r.is_rational for r in roots)

    def test_irrational_root(self):
        (neg, pos) = real_roots(make_poly(x**2 - 2, (x,)))
        assert not pos.is_rational
        assert compare(neg, pos) == -1
        assert compare(pos, Rational(3, 2)) == -1
        assert compare(pos, Rational(7, 5)) == 1

    def test_same_number(self):
        a = real_roots(make_poly(x**2 - 2, (x,)))[1]
        b = real_roots(make_poly(x**4 - 4, (x,)))[1]
        assert same_number(a, b)

    def test_sign_at_rational_point(self):
        f = P(x**2 + y**2 - 1)
        assert sign_at(f, (0, 0)) == -1
        assert sign_at(f, (1, 0)) == 0
        assert sign_at(f, ("3/4", 1)) == 1

    def test_sign_at_algebraic_point(self):
        s = real_roots(make_poly(x**2 - Rational(1, 2), (x,)))[1]
        f = P(x**2 + y**2 - 1)
        assert sign_at(f, (s, s)) == 0
        assert sign_at(P(x - y), (s, Rational(7, 10))) == 1

    def test_roots_over_algebraic_column(self):
        s = real_roots(make_poly(x**2 - 2, (x,)))[1]
        roots = roots_over(P(y**2 - x**2), s)
        assert len(roots) == 2
        assert same_number(roots[1], s)

    def test_roots_over_vertical_line(self):
        with pytest.raises(DegenerateInputError):
            roots_over(P(x - 1), 1)

    def test_format_number(self):
        assert format_number(Rational(-1, 2)) == "-1/2"
        s = real_roots(make_poly(x**2 - 2, (x,)))[1]
        assert format_number(s).startswith("1.414214~")


class TestProperties:
    """Randomized and structural checks of the arithmetic kernel."""

    @pytest.mark.parametrize("p,q", [
        (x**2 - y**2, x**2 + 2*x*y + y**2),
        ((x - 1)*(y + 2)*(x + y), (x - 1)*(x - y)),
        (x**3 - x, y),
        (Rational(3, 2)*(x*y - 1)**2, (x*y - 1)*(x + 1)),
    ])
    def test_gcd_divides_both(self, p, q):
        p, q = P(p), P(q)
        g = gcd(p, q)
        for f in (p, q):
            assert exact_div(f, g) * g == f

    def test_sign_at_matches_float_evaluation(self):
        rng = np.random.default_rng(11)
        s = real_roots(make_poly(x**2 - 2, (x,)))[1]
        checked = 0
        for _ in range(40):
            coeffs = rng.integers(-3, 4, size=6)
            monos = [1, x, y, x**2, x*y, y**2]
            f = P(sum(int(c) * m for c, m in zip(coeffs, monos)) + x**3)
            t = Rational(int(rng.integers(-20, 21)), 8)
            value = float(f.as_expr().subs({x: 2**0.5, y: float(t)}))
            if abs(value) < 1e-9:
                continue
            assert sign_at(f, (s, t)) == (1 if value > 0 else -1)
            checked += 1
        assert checked > 30

    def test_odd_multiplicity_roots_change_sign(self):
        p = make_poly((x**2 - 2)**3 * (x - 1) * (x**2 - 3) * (x - 5)**2, (x,))
        roots = isolate_real_roots(p)
        assert sorted(m for _, m in roots) == [1, 1, 1, 2, 3, 3]
        for r, mult in roots:
            if r.is_rational:
                continue
            r = r.narrowed(Rational(1, 100))
            below, above = p.eval(r.lo), p.eval(r.hi)
            assert below != 0 and above != 0
            assert (below * above < 0) == (mult % 2 == 1)
        assert p.eval(Rational(499, 100)) * p.eval(Rational(501, 100)) > 0


class TestPlaneSystems:
    """Common zeros of bivariate systems."""

    def test_line_and_circle(self):
        points = solve_plane_system([P(x**2 + y**2 - 1), P(y)])
        assert [(a.lo, b.lo) for a, b in points] == [(-1, 0), (1, 0)]

    def test_vertical_lines_do_not_meet(self):
        assert solve_plane_system([P(x), P(x - 1)]) == []

    def test_not_zero_dimensional(self):
        with pytest.raises(DegenerateInputError):
            solve_plane_system([P(x * y), P(x)])

    def test_cusp_singular_point(self):
        f = P(y**2 - x**3)
        points = solve_plane_system([f, f.diff(x), f.diff(y)])
        assert [(a.lo, b.lo) for a, b in points] == [(0, 0)]


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
