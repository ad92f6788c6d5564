"""
Randomized tests: split line arrangements, disks cut by a line, and quadrants
against their complements
"""
import os
import sys

import numpy as np
import pytest
from sympy import symbols

# Add project root to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from semisep.algebra.cad2 import SAset
from semisep.algebra.poly import make_poly
from semisep.engine.scene import SceneOptions, build_scene
from semisep.main_engine import SeparationEngine

x, y = symbols("x y")
SEEDS = range(50)
CONIC_SEEDS = range(20)
QUADRANT_SEEDS = range(20)


def _proportional(u, v):
    return all(u[i] * v[j] == u[j] * v[i] for i in range(3) for j in range(i + 1, 3))


def random_lines(rng, count):
    lines = []
    while len(lines) < count:
        a, b = (int(c) for c in rng.integers(-2, 3, size=2))
        c = int(rng.integers(-3, 4))
        if (a, b) == (0, 0) or any(_proportional((a, b, c), u) for u in lines):
            continue
        lines.append((a, b, c))
    return lines


def split_scene(seed):
    """A lies in {l1 > 0}, B in {l1 < 0}; both are cut further by the other lines."""
    rng = np.random.default_rng(seed)
    count = int(rng.integers(2, 4))
    while True:
        lines = random_lines(rng, count)
        table = {f"l{i + 1}": make_poly(a * x + b * y + c, (x, y)) for i, (a, b, c) in enumerate(lines)}
        side = lambda: str(rng.choice([">", "<"]))
        A = SAset.of([("l1", ">"), ("l2", side())])
        B = SAset.of([("l1", "<"), (f"l{count}", side())])
        scene = build_scene(
            f"random-{seed}", (x, y), table, A, B,
            options=SceneOptions(sample_budget=6, degree_sweep=1),
        )
        cx = scene.complex()
        if cx.cells_of(A) and cx.cells_of(B):
            return scene


def disk_scene(seed):
    """A is an open disk, B the part of its outside on one side of a line that is
    not tangent to the circle."""
    rng = np.random.default_rng(seed)
    while True:
        a, b = (int(c) for c in rng.integers(-2, 3, size=2))
        r2 = int(rng.integers(1, 5))
        (la, lb, lc), = random_lines(rng, 1)
        if (la * a + lb * b + lc) ** 2 != r2 * (la ** 2 + lb ** 2):
            break
    table = {
        "q": make_poly((x - a) ** 2 + (y - b) ** 2 - r2, (x, y)),
        "l": make_poly(la * x + lb * y + lc, (x, y)),
    }
    A = SAset.of([("q", "<")])
    B = SAset.of([("q", ">"), ("l", ">")])
    return build_scene(
        f"disk-{seed}", (x, y), table, A, B,
        options=SceneOptions(sample_budget=8, degree_sweep=2),
    )


def quadrant_scene(seed):
    """A is the quadrant {l1 > 0, l2 > 0} of two crossing lines, B the rest of the plane."""
    rng = np.random.default_rng(seed)
    while True:
        (a1, b1, c1), (a2, b2, c2) = random_lines(rng, 2)
        if a1 * b2 != a2 * b1:
            break
    table = {
        "l1": make_poly(a1 * x + b1 * y + c1, (x, y)),
        "l2": make_poly(a2 * x + b2 * y + c2, (x, y)),
    }
    A = SAset.of([("l1", ">"), ("l2", ">")])
    B = SAset.of([("l1", "<")], [("l1", ">"), ("l2", "<")])
    return build_scene(
        f"quadrant-{seed}", (x, y), table, A, B,
        options=SceneOptions(sample_budget=6, degree_sweep=1),
    )


class TestSplitArrangements:
    """A line of the arrangement separates; the engine must find it."""

    @pytest.mark.parametrize("seed", SEEDS)
    def test_strictly_separable(self, seed):
        scene = split_scene(seed)
        report = SeparationEngine(seed=seed).run(scene, "full")
        assert report.error is None
        assert report.verdict.generic is True
        assert report.verdict.strict is True
        assert report.status == 0
        assert report.oracle.first_feasible == 1
        assert report.oracle.agreement is True


class TestDisks:
    """The circle itself separates the disk from any part of its outside."""

    @pytest.mark.parametrize("seed", CONIC_SEEDS)
    def test_strictly_separable(self, seed):
        report = SeparationEngine(seed=seed).run(disk_scene(seed), "full")
        assert report.error is None
        assert report.verdict.strict is True
        assert report.status == 0
        assert report.oracle.first_feasible in (1, 2)
        assert report.oracle.agreement is True


class TestQuadrants:
    """A quadrant and the rest of the plane cannot be separated, even generically."""

    @pytest.mark.parametrize("seed", QUADRANT_SEEDS)
    def test_not_separable(self, seed):
        report = SeparationEngine(seed=seed).run(quadrant_scene(seed), "full")
        assert report.error is None
        assert report.verdict.generic is False
        assert report.verdict.strict is False
        assert report.status == 2


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
