"""
Tests for the generic and strict separation decisions (semisep/engine/decide.py)
"""
import os
import sys

import pytest
from sympy import symbols

# Add project root to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from semisep.algebra.cad2 import SAset
from semisep.algebra.poly import make_poly
from semisep.core.errors import NonTerminationError
from semisep.engine.decide import (
    decide_separation,
    generic_separation,
    obstruction_list,
    separation_nullspace,
)
from semisep.engine.scene import build_scene
from semisep.geometry.resolve import INF
from semisep.tools.scene_parser import load_scene

SCENES = os.path.join(os.path.dirname(__file__), '..', 'scenes')
x, y = symbols("x y")

_verdicts = {}


def scene(name):
    return load_scene(os.path.join(SCENES, f"{name}.json"))


def verdict(name):
    if name not in _verdicts:
        _verdicts[name] = decide_separation(scene(name))
    return _verdicts[name]


def two_disks():
    table = {
        "f": make_poly(x**2 + y**2 - 1, (x, y)),
        "g": make_poly((x - 3)**2 + y**2 - 1, (x, y)),
    }
    return build_scene("two_disks", (x, y), table, SAset.of([("f", "<=")]), SAset.of([("g", "<")]))


class TestGenericStage:
    """Walls in a normal-crossings model of the compactified plane."""

    def test_quick_accept(self):
        v = generic_separation(two_disks())
        assert v.generic and v.quick_accept
        assert v.strict is None
        assert v.blowup_log == [] and v.wall_reports == []

    def test_half_planes_across_a_single_blow_up(self):
        v = verdict("offset_halves")
        assert v.generic
        assert [(b.chart, b.center) for b in v.blowup_log] == [("P2", ["0", "0"])]
        walls = {w.wall: w for w in v.wall_reports}
        assert walls["z"].via == "counter_shadows"
        assert all(w.verdict for w in v.wall_reports)

    def test_blocked_wall(self):
        v = verdict("intro")
        assert not v.generic and v.strict is False
        assert v.obstruction["wall"] == "y"
        assert v.obstruction["stage"] == 1
        assert [b.chart for b in v.blowup_log] == ["P1", "P2"]
        assert v.obstruction_list == []

    def test_obstruction_on_an_exceptional_curve(self):
        v = verdict("at_infinity")
        assert not v.generic
        assert len(v.blowup_log) == 1
        record = v.blowup_log[0]
        assert (record.chart, record.center, record.at_infinity) == ("P2", ["0", "0"], True)
        assert v.obstruction["wall"] == "E1"
        assert v.obstruction["kind"] == "exceptional"
        assert INF not in {w.wall for w in v.wall_reports}

    def test_disk_and_outside(self):
        v = verdict("circle")
        assert v.generic and v.blowup_log == []
        walls = {w.wall: w for w in v.wall_reports}
        assert walls["f"].via == "counter_shadows"
        assert walls[INF].kind == "infinity" and walls[INF].verdict

    def test_lower_dimensional_pieces_are_ignored(self):
        v = verdict("segment_split")
        assert v.generic
        assert [b.chart for b in v.blowup_log] == ["P1"]
        assert "h" not in {w.wall for w in v.wall_reports}

    def test_wall_reports_carry_arc_side_checks(self):
        for w in verdict("intro").wall_reports:
            assert w.soo_agrees is not False

    def test_blowup_guard(self):
        with pytest.raises(NonTerminationError):
            generic_separation(scene("intro"), max_blowups=1)


class TestStrictStage:
    """The obstruction list on the original sets."""

    def test_segments_on_a_shared_wall(self):
        v = verdict("segment_split")
        assert v.strict is False
        assert v.obstruction == {"wall": "y", "kind": "wall", "stage": 2, "parent": None}

    def test_obstruction_list_entries(self):
        entries = obstruction_list(scene("segment_split"))
        assert [e.name for e in entries] == ["y"]
        assert entries[0].meets == ["A", "B"]
        assert not entries[0].shadows_separable

    def test_entries_that_pass(self):
        entries = obstruction_list(scene("offset_halves"))
        assert [e.name for e in entries] == ["ylo", "yhi"]
        assert [e.meets for e in entries] == [["B"], ["A"]]
        assert all(e.shadows_separable for e in entries)
        assert verdict("offset_halves").strict is True

    def test_open_sets_have_no_entries(self):
        assert obstruction_list(scene("circle")) == []
        assert verdict("circle").strict is True

    def test_closed_disk_touching_nothing(self):
        v = decide_separation(two_disks())
        assert v.generic and v.strict is True
        assert v.nullspace_meets is False

    def test_point_entry(self):
        table = {"x": make_poly(x, (x, y)), "y": make_poly(y, (x, y))}
        A = SAset.of([("x", ">="), ("y", ">=")])
        B = SAset.of([("x", "<"), ("y", "<")])
        s = build_scene("corner", (x, y), table, A, B)
        points = [e for e in obstruction_list(s) if e.kind == "point"]
        assert [e.location for e in points] == [["0", "0"]]
        assert points[0].meets == ["A"]
        assert not points[0].shadows_separable
        v = decide_separation(s)
        assert v.generic and v.strict is False
        assert v.obstruction["kind"] == "point"


class TestNullspace:
    """Zariski closure of the common boundary, compared with the list."""

    def test_shared_segment(self):
        null = separation_nullspace(scene("segment_split"))
        assert null.curves == ["y"]
        assert null.meets is True
        assert verdict("segment_split").nullspace_meets is True

    def test_circle(self):
        null = separation_nullspace(scene("circle"))
        assert null.curves == ["f"] and null.points == []
        assert null.meets is False

    def test_isolated_point(self):
        table = {"x": make_poly(x, (x, y)), "y": make_poly(y, (x, y))}
        A = SAset.of([("x", ">"), ("y", ">")])
        B = SAset.of([("x", "<"), ("y", "<")])
        null = separation_nullspace(build_scene("quadrants", (x, y), table, A, B))
        assert null.curves == [] and null.points == [["0", "0"]]
        assert null.meets is False


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
