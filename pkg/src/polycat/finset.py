"""Finite sets and total maps, the ground floor of every construction.

Carriers are canonical initial segments 0..n-1. Maps are lookup tables.
Derived carriers (pullbacks, products, exponentials, ...) are renumbered
back to 0..n-1 with their provenance kept next to them, so every element
of a constructed set can be decoded to the data it stands for.

Enumerations that can explode (all maps between two sets, exponential
carriers) honor a configurable global size guard.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import ShapeMismatch, SizeGuardExceeded

DEFAULT_GUARD_LIMIT = 10**6

_guard_limit = DEFAULT_GUARD_LIMIT


def guard_limit() -> int:
    return _guard_limit


def set_guard_limit(limit: int) -> int:
    """Set the global enumeration bound; returns the previous bound."""
    global _guard_limit
    if limit < 0:
        raise ValueError("guard limit must be nonnegative")
    previous = _guard_limit
    _guard_limit = limit
    return previous


def check_guard(size: int, what: str) -> None:
    if size > _guard_limit:
        raise SizeGuardExceeded(
            f"search too large: {what} has size {size}, guard limit is {_guard_limit}"
        )


@dataclass(frozen=True)
class FinSet:
    """A finite set with carrier 0..size-1 and optional display labels."""

    size: int
    labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if self.size < 0:
            raise ShapeMismatch(f"negative size {self.size}")
        if self.labels is not None:
            if len(self.labels) != self.size:
                raise ShapeMismatch("label count does not match size")
            if len(set(self.labels)) != self.size:
                raise ShapeMismatch("labels must be pairwise distinct")

    def __iter__(self):
        return iter(range(self.size))

    def __contains__(self, x: int) -> bool:
        return 0 <= x < self.size

    def label(self, x: int) -> str:
        if x not in self:
            raise ShapeMismatch(f"element {x} not in set of size {self.size}")
        return self.labels[x] if self.labels is not None else str(x)


@dataclass(frozen=True)
class FinMap:
    """A total map between finite sets, stored as a lookup table."""

    dom: FinSet
    cod: FinSet
    table: tuple[int, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.table, tuple):
            object.__setattr__(self, "table", tuple(self.table))
        if len(self.table) != self.dom.size:
            raise ShapeMismatch(
                f"table length {len(self.table)} does not match domain size {self.dom.size}"
            )
        for x, y in enumerate(self.table):
            if y not in self.cod:
                raise ShapeMismatch(f"table entry {x} -> {y} lands outside the codomain")

    def __call__(self, x: int) -> int:
        return self.table[x]

    def then(self, g: "FinMap") -> "FinMap":
        """Diagram-order composition: self first, then g."""
        return compose(g, self)

    def fiber(self, y: int) -> tuple[int, ...]:
        """Preimage of y, in ascending order."""
        if y not in self.cod:
            raise ShapeMismatch(f"element {y} not in codomain of size {self.cod.size}")
        return self.fibers()[y]

    def fibers(self) -> tuple[tuple[int, ...], ...]:
        # cached: maps are immutable and fibers are asked for in hot loops
        cached = getattr(self, "_fibers", None)
        if cached is None:
            out: list[list[int]] = [[] for _ in range(self.cod.size)]
            for x, y in enumerate(self.table):
                out[y].append(x)
            cached = tuple(tuple(f) for f in out)
            object.__setattr__(self, "_fibers", cached)
        return cached

    def is_bijection(self) -> bool:
        return self.dom.size == self.cod.size and len(set(self.table)) == self.dom.size

    def inverse(self) -> "FinMap":
        if not self.is_bijection():
            raise ShapeMismatch("map is not a bijection")
        table = [0] * self.cod.size
        for x, y in enumerate(self.table):
            table[y] = x
        return FinMap(self.cod, self.dom, tuple(table))


def identity(s: FinSet) -> FinMap:
    return FinMap(s, s, tuple(range(s.size)))


def compose(g: FinMap, f: FinMap) -> FinMap:
    """Classical-order composition g after f: x |-> g(f(x))."""
    if f.cod != g.dom:
        raise ShapeMismatch(
            f"cannot compose: middle objects differ ({f.cod.size} vs {g.dom.size})"
        )
    return FinMap(f.dom, g.cod, tuple(g.table[y] for y in f.table))


def constant(dom: FinSet, cod: FinSet, y: int) -> FinMap:
    if y not in cod:
        raise ShapeMismatch(f"constant value {y} outside codomain")
    return FinMap(dom, cod, (y,) * dom.size)


@dataclass(frozen=True)
class Pullback:
    """Pullback of a cospan f: X -> Z <- Y :g.

    Carrier elements are the lexicographically ordered pairs (x, y) with
    f(x) = g(y); `pairs` records that provenance, `left`/`right` are the
    projections.
    """

    carrier: FinSet
    left: FinMap
    right: FinMap
    pairs: tuple[tuple[int, int], ...]

    def __iter__(self):
        # allows unpacking as (carrier, left, right)
        return iter((self.carrier, self.left, self.right))

    def index(self, x: int, y: int) -> int:
        return self.pairs.index((x, y))


def pullback(f: FinMap, g: FinMap) -> Pullback:
    if f.cod != g.cod:
        raise ShapeMismatch("pullback needs a cospan: codomains differ")
    gfibers = g.fibers()
    pairs = tuple(
        (x, y) for x in range(f.dom.size) for y in gfibers[f.table[x]]
    )
    carrier = FinSet(len(pairs))
    left = FinMap(carrier, f.dom, tuple(x for x, _ in pairs))
    right = FinMap(carrier, g.dom, tuple(y for _, y in pairs))
    return Pullback(carrier, left, right, pairs)


@dataclass(frozen=True)
class Equalizer:
    """Equalizer of a parallel pair, with its inclusion map."""

    carrier: FinSet
    include: FinMap
    elements: tuple[int, ...]

    def __iter__(self):
        return iter((self.carrier, self.include))


def equalizer(f: FinMap, g: FinMap) -> Equalizer:
    if f.dom != g.dom or f.cod != g.cod:
        raise ShapeMismatch("equalizer needs a parallel pair")
    elements = tuple(x for x in range(f.dom.size) if f.table[x] == g.table[x])
    carrier = FinSet(len(elements))
    include = FinMap(carrier, f.dom, elements)
    return Equalizer(carrier, include, elements)


@dataclass(frozen=True)
class Product:
    """Binary product with the lexicographic pairing bijection.

    pair(x, y) = x * |right factor| + y, so pairs enumerate with the left
    coordinate most significant.
    """

    carrier: FinSet
    left: FinMap
    right: FinMap
    left_factor: FinSet
    right_factor: FinSet

    def __iter__(self):
        return iter((self.carrier, self.left, self.right))

    def pair(self, x: int, y: int) -> int:
        if x not in self.left_factor or y not in self.right_factor:
            raise ShapeMismatch("pairing outside the factors")
        return x * self.right_factor.size + y

    def unpair(self, k: int) -> tuple[int, int]:
        if k not in self.carrier:
            raise ShapeMismatch("unpair outside the product carrier")
        return divmod(k, self.right_factor.size)


def product(a: FinSet, b: FinSet) -> Product:
    carrier = FinSet(a.size * b.size)
    left = FinMap(carrier, a, tuple(k // b.size for k in range(carrier.size)))
    right = FinMap(carrier, b, tuple(k % b.size for k in range(carrier.size)))
    return Product(carrier, left, right, a, b)


@dataclass(frozen=True)
class Coproduct:
    """Binary coproduct with left-then-right tagging."""

    carrier: FinSet
    inl: FinMap
    inr: FinMap
    left_part: FinSet
    right_part: FinSet

    def __iter__(self):
        return iter((self.carrier, self.inl, self.inr))

    def untag(self, k: int) -> tuple[int, int]:
        """Decode to (tag, element): tag 0 = left part, 1 = right part."""
        if k not in self.carrier:
            raise ShapeMismatch("untag outside the coproduct carrier")
        if k < self.left_part.size:
            return (0, k)
        return (1, k - self.left_part.size)


def coproduct(a: FinSet, b: FinSet) -> Coproduct:
    carrier = FinSet(a.size + b.size)
    inl = FinMap(a, carrier, tuple(range(a.size)))
    inr = FinMap(b, carrier, tuple(a.size + y for y in range(b.size)))
    return Coproduct(carrier, inl, inr, a, b)


def product_coproduct(a: FinSet, b: FinSet) -> tuple[Product, Coproduct]:
    """Both binary (co)limits at once, bijections included."""
    return product(a, b), coproduct(a, b)


def copair(f: FinMap, g: FinMap, cop: Coproduct) -> FinMap:
    """The map out of a coproduct determined by maps out of both parts."""
    if f.dom != cop.left_part or g.dom != cop.right_part or f.cod != g.cod:
        raise ShapeMismatch("copairing legs do not match the coproduct")
    return FinMap(cop.carrier, f.cod, f.table + g.table)


def map_count(a: FinSet, b: FinSet) -> int:
    """Number of total maps a -> b (with 0^0 = 1)."""
    return b.size**a.size


def enumerate_maps(a: FinSet, b: FinSet) -> list[FinMap]:
    """All maps a -> b in lexicographic table order. Guarded."""
    check_guard(map_count(a, b), f"map space {b.size}^{a.size}")
    return [
        FinMap(a, b, table) for table in itertools.product(range(b.size), repeat=a.size)
    ]


def exponential(a: FinSet, b: FinSet) -> FinSet:
    """Carrier for the map space b^a; element k decodes via map_from_index.

    The numbering agrees with enumerate_maps: index k reads as the base-b
    digits of k, most significant digit first.
    """
    check_guard(map_count(a, b), f"exponential {b.size}^{a.size}")
    return FinSet(map_count(a, b))


def map_from_index(a: FinSet, b: FinSet, k: int) -> FinMap:
    if not 0 <= k < map_count(a, b):
        raise ShapeMismatch(f"map index {k} out of range")
    digits = []
    for _ in range(a.size):
        k, r = divmod(k, b.size)
        digits.append(r)
    return FinMap(a, b, tuple(reversed(digits)))


def index_of_map(f: FinMap) -> int:
    k = 0
    for y in f.table:
        k = k * f.cod.size + y
    return k


def tuple_index(choices: tuple[int, ...], radices: tuple[int, ...]) -> int:
    """Rank of a mixed-radix tuple in itertools.product order."""
    assert len(choices) == len(radices)
    k = 0
    for c, r in zip(choices, radices):
        assert 0 <= c < r
        k = k * r + c
    return k
