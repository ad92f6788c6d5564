"""
Tests for scene files and the expression parser (semisep/tools/scene_parser.py)
"""
import json
import os
import shutil
import sys
import tempfile

import pytest
from sympy import Rational, Symbol

# Add project root to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from semisep.algebra.cad2 import SAset
from semisep.core.errors import (
    DisjointnessError,
    ExitStatus,
    FactorizationError,
    SceneSyntaxError,
    UnknownPolynomialError,
)
from semisep.tools.scene_parser import (
    load_scene,
    parse_expression,
    parse_scene,
    scene_from_dict,
    serialize_scene,
    tokenize,
)

X, Y = Symbol("x"), Symbol("y")
VARS = {"x": X, "y": Y}


def document(**overrides):
    doc = {
        "version": 1,
        "name": "strip",
        "variables": ["x", "y"],
        "polynomials": [{"name": "x", "expr": "x"}, {"name": "f", "expr": "2*x - 1"}],
        "A": [["x > 0", "f < 0"]],
        "B": [[["x", "<"]]],
    }
    doc.update(overrides)
    return doc


class TestExpressions:
    """Recursive-descent parsing of polynomial expressions."""

    def test_tokens(self):
        kinds = [t.kind for t in tokenize("3*x^2 - (y)")]
        assert kinds == ["number", "op", "name", "op", "number", "op", "op", "name", "op", "end"]

    def test_precedence(self):
        assert parse_expression("1 + 2*x^2", VARS) == 1 + 2 * X**2
        assert parse_expression("-x**2", VARS) == -X**2
        assert parse_expression("(x - y)^2", VARS) == (X - Y) ** 2

    def test_rational_coefficients(self):
        assert parse_expression("3/4*x", VARS) == Rational(3, 4) * X
        assert parse_expression("x/2 + 1/3", VARS) == X / 2 + Rational(1, 3)

    def test_division_by_a_variable(self):
        with pytest.raises(SceneSyntaxError):
            parse_expression("1/x", VARS)

    def test_division_by_zero(self):
        with pytest.raises(SceneSyntaxError):
            parse_expression("x/0", VARS)

    def test_bad_exponent(self):
        with pytest.raises(SceneSyntaxError):
            parse_expression("x^y", VARS)
        with pytest.raises(SceneSyntaxError):
            parse_expression("x^-1", VARS)

    def test_error_column(self):
        with pytest.raises(SceneSyntaxError) as info:
            parse_expression("x + $", VARS)
        assert info.value.column == 5
        assert info.value.exit_status == ExitStatus.INPUT_ERROR

    def test_unknown_variable(self):
        with pytest.raises(SceneSyntaxError) as info:
            parse_expression("x + z", VARS)
        assert info.value.column == 5

    def test_unbalanced(self):
        with pytest.raises(SceneSyntaxError):
            parse_expression("(x + 1", VARS)
        with pytest.raises(SceneSyntaxError):
            parse_expression("x + 1)", VARS)
        with pytest.raises(SceneSyntaxError):
            parse_expression("   ", VARS)


class TestDocuments:
    """Scene documents."""

    def setup_method(self):
        self.test_dir = tempfile.mkdtemp()

    def teardown_method(self):
        shutil.rmtree(self.test_dir, ignore_errors=True)

    def test_parse(self):
        scene = parse_scene(json.dumps(document()))
        assert scene.name == "strip"
        assert list(scene.table) == ["x", "f"]
        assert scene.A == SAset.of([("x", ">"), ("f", "<")])
        assert scene.B == SAset.of([("x", "<")])

    def test_double_equals(self):
        scene = scene_from_dict(document(B=[["x == 0"]]))
        assert scene.B == SAset.of([("x", "=")])

    def test_options(self):
        scene = scene_from_dict(document(options={"max_blowups": 3, "var_order": "yx"}))
        assert scene.options.max_blowups == 3
        assert scene.complex().swapped

    def test_unknown_option(self):
        with pytest.raises(SceneSyntaxError):
            scene_from_dict(document(options={"colour": "red"}))

    def test_load_uses_the_file_stem(self):
        doc = document()
        del doc["name"]
        path = os.path.join(self.test_dir, "unnamed.json")
        with open(path, "w") as f:
            json.dump(doc, f)
        assert load_scene(path).name == "unnamed"

    def test_serialize_round_trip(self):
        scene = scene_from_dict(document(options={"degree_sweep": 3}))
        again = parse_scene(serialize_scene(scene))
        assert again.table == scene.table
        assert (again.A, again.B) == (scene.A, scene.B)
        assert again.options == scene.options

    def test_bundled_scenes_load(self):
        scenes = os.path.join(os.path.dirname(__file__), '..', 'scenes')
        for name in sorted(os.listdir(scenes)):
            scene = load_scene(os.path.join(scenes, name))
            assert scene.name == name[:-len(".json")]


class TestRejections:
    """Malformed or unsupported scenes."""

    def test_invalid_json(self):
        with pytest.raises(SceneSyntaxError) as info:
            parse_scene('{"version": 1,\n  "name": }')
        assert info.value.line == 2

    @pytest.mark.parametrize("key", ["variables", "polynomials", "A", "B"])
    def test_missing_key(self, key):
        doc = document()
        del doc[key]
        with pytest.raises(SceneSyntaxError):
            scene_from_dict(doc)

    def test_version(self):
        with pytest.raises(SceneSyntaxError):
            scene_from_dict(document(version=2))

    def test_three_variables(self):
        with pytest.raises(SceneSyntaxError):
            scene_from_dict(document(variables=["x", "y", "z"]))

    def test_duplicate_polynomial(self):
        polys = [{"name": "x", "expr": "x"}, {"name": "x", "expr": "x - 1"}]
        with pytest.raises(SceneSyntaxError):
            scene_from_dict(document(polynomials=polys))

    @pytest.mark.parametrize("options", [
        {"var_order": "zz"},
        {"max_blowups": 0},
        {"degree_sweep": "3"},
        {"sample_budget": 2.5},
        {"max_blowups": True},
        {"seed": 1},
    ])
    def test_bad_options(self, options):
        with pytest.raises(SceneSyntaxError):
            scene_from_dict(document(options=options))

    def test_good_options(self):
        scene = scene_from_dict(document(options={"var_order": "yx", "max_blowups": 2}))
        assert scene.options.var_order == "yx"
        assert scene.options.max_blowups == 2

    def test_bad_sign_condition(self):
        with pytest.raises(SceneSyntaxError):
            scene_from_dict(document(A=[["x > 1"]]))
        with pytest.raises(SceneSyntaxError):
            scene_from_dict(document(A=[[["x", "=>"]]]))

    def test_undeclared_polynomial(self):
        with pytest.raises(UnknownPolynomialError):
            scene_from_dict(document(B=[["g < 0"]]))

    def test_reserved_name(self):
        polys = [{"name": "inf", "expr": "x"}]
        with pytest.raises(UnknownPolynomialError):
            scene_from_dict(document(polynomials=polys, A=[["inf > 0"]], B=[["inf < 0"]]))

    def test_overlapping_sets(self):
        with pytest.raises(DisjointnessError):
            scene_from_dict(document(B=[["f < 0"]]))

    def test_not_squarefree(self):
        polys = [{"name": "x", "expr": "x"}, {"name": "f", "expr": "(y - 1)^2"}]
        with pytest.raises(FactorizationError):
            scene_from_dict(document(polynomials=polys))

    def test_shared_factor(self):
        polys = [{"name": "x", "expr": "x"}, {"name": "f", "expr": "x*y - x"}]
        with pytest.raises(FactorizationError):
            scene_from_dict(document(polynomials=polys))

    def test_declared_reducible(self):
        polys = [{"name": "x", "expr": "x"}, {"name": "f", "expr": "2*x - 1", "irreducible": False}]
        with pytest.raises(FactorizationError):
            scene_from_dict(document(polynomials=polys))

    def test_constant_polynomial(self):
        polys = [{"name": "x", "expr": "x"}, {"name": "f", "expr": "3"}]
        with pytest.raises(FactorizationError):
            scene_from_dict(document(polynomials=polys, A=[["x > 0"]]))


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
