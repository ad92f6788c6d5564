"""
Scene files: a JSON document naming two variables, a table of polynomials
given as expression strings, and the sets A and B as unions of basic sets
over named sign conditions.

    {
      "version": 1,
      "name": "unit-squares",
      "variables": ["x", "y"],
      "polynomials": [{"name": "x", "expr": "x"}, {"name": "f", "expr": "2*x - 1"}],
      "A": [[["x", ">"], "f < 0"]],
      "B": [["x < 0"]],
      "options": {"max_blowups": 10}
    }

Expressions use rational literals, the two variables, ``+ - * /``,
``^`` or ``**`` with non-negative integer exponents, and parentheses.
Division is by constants only, so ``"3/4*x"`` writes a rational coefficient.
"""
from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Any, Dict, List, Mapping, NamedTuple, Optional, Tuple, Union

from sympy import Expr, Integer, Symbol

from semisep.algebra.cad2 import RELATIONS, SAset
from semisep.algebra.poly import make_poly
from semisep.config import Config
from semisep.core.errors import SceneSyntaxError
from semisep.engine.scene import Scene, SceneOptions, build_scene

FORMAT_VERSION = 1

_TOKEN = re.compile(r"\s*(?:(?P<number>\d+)|(?P<name>[A-Za-z_]\w*)|(?P<op>\*\*|[-+*/^()]))")
_CLAUSE = re.compile(r"^\s*(?P<name>[A-Za-z_][\w]*)\s*(?P<rel>>=|<=|!=|==|=|>|<)\s*0\s*$")
_OPTIONS = ("var_order", "max_blowups", "degree_sweep", "sample_budget")


class Token(NamedTuple):
    kind: str
    text: str
    offset: int


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN.match(text, pos)
        if match is None:
            offset = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise SceneSyntaxError(f"unexpected character {text[offset]!r}", line=1, column=offset + 1)
        kind = match.lastgroup
        tokens.append(Token(kind, match.group(kind), match.start(kind)))
        pos = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class ExpressionParser:
    """Recursive-descent parser for polynomial expressions over named variables.

    expr  := term (('+' | '-') term)*
    term  := unary (('*' | '/') unary)*
    unary := ('+' | '-') unary | power
    power := atom (('^' | '**') unary)?
    atom  := NUMBER | NAME | '(' expr ')'
    """

    def __init__(self, text: str, variables: Mapping[str, Symbol], where: str = "expression"):
        self.text = text
        self.variables = dict(variables)
        self.where = where
        self.tokens = tokenize(text)
        self.pos = 0

    def error(self, message: str, token: Optional[Token] = None) -> SceneSyntaxError:
        token = token or self.peek()
        return SceneSyntaxError(f"{self.where}: {message}", line=1, column=token.offset + 1, text=self.text)

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def expect(self, text: str) -> Token:
        token = self.peek()
        if token.text != text:
            raise self.error(f"expected {text!r}, found {token.text or 'end of input'!r}")
        return self.advance()

    def parse(self) -> Expr:
        if not self.tokens or self.tokens[0].kind == "end":
            raise SceneSyntaxError(f"{self.where}: empty expression", line=1, column=1)
        value = self.expr()
        if self.peek().kind != "end":
            raise self.error(f"unexpected {self.peek().text!r}")
        return value

    def expr(self) -> Expr:
        value = self.term()
        while self.peek().text in ("+", "-"):
            op = self.advance().text
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> Expr:
        value = self.unary()
        while self.peek().text in ("*", "/"):
            op = self.advance()
            rhs = self.unary()
            if op.text == "*":
                value = value * rhs
            else:
                if not rhs.is_Rational:
                    raise self.error("division by a non-constant", op)
                if rhs == 0:
                    raise self.error("division by zero", op)
                value = value / rhs
        return value

    def unary(self) -> Expr:
        if self.peek().text in ("+", "-"):
            op = self.advance().text
            value = self.unary()
            return -value if op == "-" else value
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek().text in ("^", "**"):
            op = self.advance()
            exponent = self.unary()
            if not (exponent.is_Integer and exponent >= 0):
                raise self.error("exponents must be non-negative integers", op)
            return base ** exponent
        return base

    def atom(self) -> Expr:
        token = self.peek()
        if token.kind == "number":
            self.advance()
            return Integer(token.text)
        if token.kind == "name":
            if token.text not in self.variables:
                raise self.error(f"unknown variable {token.text!r}")
            self.advance()
            return self.variables[token.text]
        if token.text == "(":
            self.advance()
            value = self.expr()
            self.expect(")")
            return value
        raise self.error(f"unexpected {token.text or 'end of input'!r}")


def parse_expression(text: str, variables: Mapping[str, Symbol], where: str = "expression") -> Expr:
    return ExpressionParser(text, variables, where).parse()


# ---------------------------------------------------------------------------
# documents
# ---------------------------------------------------------------------------

def _schema_error(message: str) -> SceneSyntaxError:
    return SceneSyntaxError(message, line=0, column=0)


def _clause_item(item: Any, where: str) -> Tuple[str, str]:
    if isinstance(item, str):
        match = _CLAUSE.match(item)
        if match is None:
            raise _schema_error(f"{where}: cannot read sign condition {item!r}")
        name, rel = match.group("name"), match.group("rel")
    elif isinstance(item, (list, tuple)) and len(item) == 2 and all(isinstance(v, str) for v in item):
        name, rel = item
    else:
        raise _schema_error(f"{where}: a sign condition is a [name, relation] pair or a 'name rel 0' string")
    rel = "=" if rel == "==" else rel
    if rel not in RELATIONS:
        raise _schema_error(f"{where}: unknown relation {rel!r}")
    return name, rel


def _set_of(data: Any, label: str) -> SAset:
    if not isinstance(data, list):
        raise _schema_error(f"{label} must be a list of basic sets")
    clauses = []
    for i, clause in enumerate(data):
        if not isinstance(clause, list):
            raise _schema_error(f"{label}[{i}] must be a list of sign conditions")
        clauses.append([_clause_item(item, f"{label}[{i}]") for item in clause])
    return SAset.of(*clauses)


def _options_of(data: Any) -> SceneOptions:
    if data is None:
        return SceneOptions()
    if not isinstance(data, dict):
        raise _schema_error("options must be an object")
    unknown = sorted(set(data) - set(_OPTIONS))
    if unknown:
        raise _schema_error(f"unknown options {unknown}")
    for key, value in data.items():
        if key == "var_order":
            if value not in Config.VAR_ORDERS:
                raise _schema_error(f"option var_order must be one of {list(Config.VAR_ORDERS)}, got {value!r}")
        elif isinstance(value, bool) or not isinstance(value, int) or value < 1:
            raise _schema_error(f"option {key} must be a positive integer, got {value!r}")
    return SceneOptions(**data)


def scene_from_dict(data: Mapping[str, Any], default_name: str = "scene") -> Scene:
    if not isinstance(data, dict):
        raise _schema_error("a scene is a JSON object")
    version = data.get("version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise _schema_error(f"unsupported scene format version {version!r}")
    for key in ("variables", "polynomials", "A", "B"):
        if key not in data:
            raise _schema_error(f"missing key {key!r}")

    names = data["variables"]
    if not (isinstance(names, list) and len(names) == 2 and all(isinstance(n, str) for n in names)):
        raise _schema_error("variables must list exactly two names")
    if names[0] == names[1] or not all(re.fullmatch(r"[A-Za-z_]\w*", n) for n in names):
        raise _schema_error(f"invalid variable names {names}")
    variables = {n: Symbol(n) for n in names}
    gens = tuple(variables.values())

    table = {}
    irreducible = {}
    for i, entry in enumerate(data["polynomials"]):
        if not isinstance(entry, dict) or "name" not in entry or "expr" not in entry:
            raise _schema_error(f"polynomials[{i}] needs 'name' and 'expr'")
        name = entry["name"]
        if name in table:
            raise _schema_error(f"polynomial {name!r} declared twice")
        expr = parse_expression(str(entry["expr"]), variables, where=f"polynomial {name}")
        table[name] = make_poly(expr, gens)
        irreducible[name] = bool(entry.get("irreducible", True))

    return build_scene(
        str(data.get("name", default_name)),
        gens,
        table,
        _set_of(data["A"], "A"),
        _set_of(data["B"], "B"),
        _options_of(data.get("options")),
        irreducible,
    )


def parse_scene(text: str, default_name: str = "scene") -> Scene:
    """Parse and validate a scene document."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SceneSyntaxError(exc.msg, line=exc.lineno, column=exc.colno) from exc
    return scene_from_dict(data, default_name)


def load_scene(path: Union[str, Path]) -> Scene:
    path = Path(path)
    return parse_scene(path.read_text(encoding="utf-8"), default_name=path.stem)


def scene_to_dict(scene: Scene) -> Dict[str, Any]:
    out: Dict[str, Any] = {
        "version": FORMAT_VERSION,
        "name": scene.name,
        "variables": [str(v) for v in scene.variables],
        "polynomials": [{"name": n, "expr": str(p.as_expr())} for n, p in scene.table.items()],
        "A": scene.A.to_list(),
        "B": scene.B.to_list(),
    }
    options = scene.options.to_dict()
    if options:
        out["options"] = options
    return out


def serialize_scene(scene: Scene) -> str:
    return json.dumps(scene_to_dict(scene), indent=2)
