"""
Finite spaces of orderings as sign-character structures.

An ordering is a :data:`SignChar`, a vector of ±1 indexed by the generator
list of its :class:`FinSpace`. Spaces are built from atoms by sums and
Z2-extensions; the construction tree is kept in ``structure`` and is what
isomorphism checks compare.

Characters multiply componentwise, so a character is a vector over F2 and
every question here (products, fans, separation by a signed product of
generators, saturations) reduces to linear algebra over F2 on small
bitmasks.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Collection, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from semisep.core.errors import ParityError, PreconditionError, StructureError

SignChar = Tuple[int, ...]


def _vector(char: SignChar) -> int:
    """Bit i set when the i-th sign is -1."""
    return sum(1 << i for i, v in enumerate(char) if v < 0)


@dataclass(frozen=True)
class DualElement:
    """Signed product of a selection of generators."""

    exponents: Tuple[int, ...]
    sign: int = 1

    def evaluate(self, char: SignChar) -> int:
        s = self.sign
        for e, v in zip(self.exponents, char):
            if e:
                s *= v
        return s

    def describe(self, generators: Sequence[str]) -> str:
        picked = [g for g, e in zip(generators, self.exponents) if e]
        body = "*".join(picked) if picked else "1"
        return ("+" if self.sign > 0 else "-") + body


@dataclass(frozen=True)
class FinSpace:
    generators: Tuple[str, ...]
    elements: Tuple[SignChar, ...]
    structure: Tuple = ("raw",)

    def __post_init__(self):
        if not self.elements:
            raise StructureError("a space of orderings has at least one element")
        m = len(self.generators)
        for char in self.elements:
            if len(char) != m or any(v not in (1, -1) for v in char):
                raise StructureError(f"{char} is not a sign character on {m} generators")
        object.__setattr__(self, "elements", tuple(sorted(set(self.elements), reverse=True)))

    def __len__(self) -> int:
        return len(self.elements)

    @cached_property
    def index(self) -> Dict[SignChar, int]:
        return {char: i for i, char in enumerate(self.elements)}

    def mask(self, subset: Iterable[SignChar]) -> int:
        out = 0
        for char in subset:
            if char not in self.index:
                raise PreconditionError(f"{char} is not an element of the space")
            out |= 1 << self.index[char]
        return out

    def unmask(self, mask: int) -> FrozenSet[SignChar]:
        return frozenset(c for c, i in self.index.items() if mask >> i & 1)

    @cached_property
    def dual_masks(self) -> List[Tuple[int, DualElement]]:
        """Positive sets of all signed generator products, first witness per set."""
        m = len(self.generators)
        seen: Dict[int, DualElement] = {}
        for sign in (1, -1):
            for bits in range(1 << m):
                dual = DualElement(tuple(bits >> i & 1 for i in range(m)), sign)
                mask = sum(1 << i for i, char in enumerate(self.elements) if dual.evaluate(char) > 0)
                seen.setdefault(mask, dual)
        return list(seen.items())


# ---------------------------------------------------------------------------
# products and fans
# ---------------------------------------------------------------------------

def product(chars: Sequence[SignChar]) -> SignChar:
    if len(chars) % 2 == 0:
        raise ParityError(f"products of {len(chars)} orderings are not orderings")
    if len({len(c) for c in chars}) != 1:
        raise ParityError("characters on different generator lists")
    out = list(chars[0])
    for char in chars[1:]:
        out = [a * b for a, b in zip(out, char)]
    return tuple(out)


def is_fan(chars: Collection[SignChar]) -> bool:
    members = set(chars)
    return all(product([a, b, c]) in members for a in members for b in members for c in members)


def four_fans(X: FinSpace) -> List[Tuple[SignChar, ...]]:
    members = set(X.elements)
    fans = set()
    for a, b, c in combinations(X.elements, 3):
        d = product([a, b, c])
        if d in members and d not in (a, b, c):
            fans.add(frozenset((a, b, c, d)))
    return sorted(tuple(sorted(f, reverse=True)) for f in fans)


def is_subspace(Y: Collection[SignChar], X: FinSpace) -> bool:
    Y = set(Y)
    if not Y <= set(X.elements):
        raise PreconditionError("Y is not contained in X")
    return all(len(Y.intersection(fan)) != 3 for fan in four_fans(X))


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def _labels(m: int) -> Tuple[str, ...]:
    return tuple(f"g{i}" for i in range(m))


def atom() -> FinSpace:
    return FinSpace((), ((),), ("atom",))


def sum_spaces(left: FinSpace, right: FinSpace) -> FinSpace:
    """Disjoint union on g0 ⊎ gens(left) ⊎ gens(right); g0 is +1 on the left copy."""
    m1, m2 = len(left.generators), len(right.generators)
    elements = [(1,) + c + (1,) * m2 for c in left.elements]
    elements += [(-1,) + (1,) * m1 + c for c in right.elements]
    return FinSpace(_labels(1 + m1 + m2), tuple(elements), ("sum", left, right))


def extend_z2(base: FinSpace) -> FinSpace:
    """Product with Z2: a fresh generator t (index 0) taking both signs over each element."""
    elements = [(s,) + c for c in base.elements for s in (1, -1)]
    generators = ("t",) + tuple(f"g{i + 1}" for i in range(len(base.generators)))
    return FinSpace(generators, tuple(elements), ("extension", base, 1))


def involution(char: SignChar) -> SignChar:
    """The character i: flip the sign of the extension generator."""
    return (-char[0],) + char[1:]


def parts(X: FinSpace) -> Tuple[FrozenSet[SignChar], FrozenSet[SignChar]]:
    if X.structure[0] != "sum":
        raise StructureError("not a sum")
    return (frozenset(c for c in X.elements if c[0] > 0), frozenset(c for c in X.elements if c[0] < 0))


def structure_key(X: FinSpace) -> str:
    """Canonical form of the construction tree; equal keys mean isomorphic spaces."""
    kind = X.structure[0]
    if kind == "atom":
        return "a"
    if kind == "extension":
        return f"E({structure_key(X.structure[1])})"
    if kind == "sum":
        summands: List[str] = []
        stack = [X]
        while stack:
            node = stack.pop()
            if node.structure[0] == "sum":
                stack.extend(node.structure[1:3])
            else:
                summands.append(structure_key(node))
        return "S[" + ",".join(sorted(summands)) + "]"
    return "R" + repr(X.elements)


# ---------------------------------------------------------------------------
# separation and saturation
# ---------------------------------------------------------------------------

def _find_separator(X: FinSpace, a: int, b: int) -> Optional[DualElement]:
    if a & b:
        return None
    for mask, dual in X.dual_masks:
        if a & ~mask == 0 and b & mask == 0:
            return dual
    return None


def separable(X: FinSpace, A: Collection[SignChar], B: Collection[SignChar]) -> Optional[DualElement]:
    """A signed generator product that is +1 on A and -1 on B, if there is one."""
    a, b = X.mask(A), X.mask(B)
    if a & b:
        raise PreconditionError("A and B overlap")
    return _find_separator(X, a, b)


def _span(vectors: Iterable[int]) -> Dict[int, int]:
    basis: Dict[int, int] = {}
    for v in vectors:
        while v:
            top = v.bit_length() - 1
            if top not in basis:
                basis[top] = v
                break
            v ^= basis[top]
    return basis


def _in_span(v: int, basis: Dict[int, int]) -> bool:
    while v:
        top = v.bit_length() - 1
        if top not in basis:
            return False
        v ^= basis[top]
    return True


def _saturation_masks(X: FinSpace, a: int, b: int) -> Tuple[int, int]:
    m = len(X.generators)
    odd, tag = 1 << m, 1 << (m + 1)
    vectors = []
    for i, char in enumerate(X.elements):
        if a >> i & 1:
            vectors.append(_vector(char) | odd | tag)
        if b >> i & 1:
            vectors.append(_vector(char) | odd)
    basis = _span(vectors)
    sharp_a = sharp_b = 0
    for i, char in enumerate(X.elements):
        v = _vector(char) | odd
        if _in_span(v | tag, basis):
            sharp_a |= 1 << i
        if _in_span(v, basis):
            sharp_b |= 1 << i
    return sharp_a, sharp_b


def saturate(X: FinSpace, A: Collection[SignChar], B: Collection[SignChar]) -> Tuple[FrozenSet[SignChar], FrozenSet[SignChar]]:
    """Elements of X that are odd-length products of A ∪ B with an odd number of
    factors from A (first set) or from B (second set)."""
    sharp_a, sharp_b = _saturation_masks(X, X.mask(A), X.mask(B))
    return X.unmask(sharp_a), X.unmask(sharp_b)


@dataclass(frozen=True)
class SeparationCheck:
    separable: bool
    sharp_disjoint: bool


def separation_check(X: FinSpace, A: Collection[SignChar], B: Collection[SignChar]) -> SeparationCheck:
    a, b = X.mask(A), X.mask(B)
    if a & b:
        raise PreconditionError("A and B overlap")
    sharp_a, sharp_b = _saturation_masks(X, a, b)
    return SeparationCheck(_find_separator(X, a, b) is not None, not sharp_a & sharp_b)


# ---------------------------------------------------------------------------
# extensions: shadows, counter-shadows, odd and even
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExtensionShadows:
    shadow_A: FrozenSet[SignChar]
    shadow_B: FrozenSet[SignChar]
    counter_A: FrozenSet[SignChar]
    counter_B: FrozenSet[SignChar]


def _require_extension(XZ: FinSpace) -> FinSpace:
    if XZ.structure[0] != "extension":
        raise StructureError("expected a Z2-extension")
    return XZ.structure[1]


def shadows_in_extension(XZ: FinSpace, A: Collection[SignChar], B: Collection[SignChar]) -> ExtensionShadows:
    _require_extension(XZ)
    XZ.mask(A), XZ.mask(B)
    base = lambda chars: frozenset(c[1:] for c in chars)
    return ExtensionShadows(
        shadow_A=base(A),
        shadow_B=base(B),
        counter_A=base([c for c in A if c[0] > 0] + [c for c in B if c[0] < 0]),
        counter_B=base([c for c in A if c[0] < 0] + [c for c in B if c[0] > 0]),
    )


@dataclass(frozen=True)
class ExtensionCheck:
    sep_in_extension: bool
    shadows_sep: bool
    counters_sep: bool


def extension_check(XZ: FinSpace, A: Collection[SignChar], B: Collection[SignChar]) -> ExtensionCheck:
    base = _require_extension(XZ)
    sh = shadows_in_extension(XZ, A, B)
    return ExtensionCheck(
        sep_in_extension=_find_separator(XZ, XZ.mask(A), XZ.mask(B)) is not None,
        shadows_sep=_find_separator(base, base.mask(sh.shadow_A), base.mask(sh.shadow_B)) is not None,
        counters_sep=_find_separator(base, base.mask(sh.counter_A), base.mask(sh.counter_B)) is not None,
    )


@dataclass(frozen=True)
class OddEven:
    odd: bool
    even: bool


def odd_even(XZ: FinSpace, A: Collection[SignChar], B: Collection[SignChar]) -> OddEven:
    _require_extension(XZ)
    sharp_a, sharp_b = saturate(XZ, A, B)
    odd = any(involution(c) in sharp_b for c in sharp_a)
    even = any(involution(c) in sharp_a for c in sharp_a) or any(involution(c) in sharp_b for c in sharp_b)
    return OddEven(odd, even)
