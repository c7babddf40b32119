"""Seeded random generators for families, diagrams, spans and
simulation cells. Everything takes an explicit random.Random so runs
are reproducible from a seed."""
from __future__ import annotations

import random

from . import fam, poly
from .fam import Family, Span
from .finset import FinMap, FinSet
from .poly import PolyDiagram
from .sim import SimCell, cell_pairs

__all__ = [
    "random_family",
    "random_finmap",
    "random_diagram",
    "random_endo",
    "random_span",
    "random_sim_cell",
]


def random_finmap(rng: random.Random, dom: FinSet, cod: FinSet) -> FinMap:
    assert cod.size > 0 or dom.size == 0
    return FinMap(dom, cod, tuple(rng.randrange(cod.size) for _ in dom))


def random_family(rng: random.Random, base: FinSet,
                  max_fiber: int = 3) -> Family:
    sizes = [rng.randint(0, max_fiber) for _ in base]
    return fam.family_from_fibers(base, sizes)


def random_diagram(rng: random.Random, src: FinSet, tgt: FinSet,
                   max_shapes: int = 3, max_fiber: int = 2) -> PolyDiagram:
    """A random diagram between the given sort sets."""
    assert tgt.size > 0
    n_shapes = rng.randint(1, max_shapes)
    shapes = FinSet(n_shapes)
    fiber_sizes = [rng.randint(0, max_fiber) for _ in shapes]
    dirs = FinSet(sum(fiber_sizes))
    dir_shape_table = []
    for v, n in enumerate(fiber_sizes):
        dir_shape_table.extend([v] * n)
    dir_sort = random_finmap(rng, dirs, src) if src.size > 0 else FinMap(dirs, src, ())
    return PolyDiagram(
        source=src,
        dirs=dirs,
        shapes=shapes,
        target=tgt,
        dir_sort=dir_sort,
        dir_shape=FinMap(dirs, shapes, tuple(dir_shape_table)),
        shape_sort=random_finmap(rng, shapes, tgt),
    )


def random_endo(rng: random.Random, max_sorts: int = 2,
                max_shapes: int = 3, max_fiber: int = 2) -> PolyDiagram:
    sorts = FinSet(rng.randint(1, max_sorts))
    return random_diagram(rng, sorts, sorts, max_shapes, max_fiber)


def random_span(rng: random.Random, left: FinSet, right: FinSet,
                max_states: int = 2) -> Span:
    carrier = FinSet(rng.randint(0, max_states))
    return Span(carrier, random_finmap(rng, carrier, left),
                random_finmap(rng, carrier, right))


def random_sim_cell(rng: random.Random, p1: PolyDiagram, p2: PolyDiagram,
                    max_states: int = 2, attempts: int = 40) -> SimCell | None:
    """A uniformly sampled valid cell over a random span, or None when no
    sampled span admits one."""
    assert p1.is_endo() and p2.is_endo()
    for _ in range(attempts):
        span = random_span(rng, p1.source, p2.source, max_states)
        alpha: dict = {}
        beta: dict = {}
        gamma: dict = {}
        dead = False
        for rho, v in cell_pairs(span, p1):
            choices = p2.shape_sort.fiber(span.right(rho))
            if not choices:
                dead = True
                break
            w = rng.choice(choices)
            alpha[rho, v] = w
            for u in p2.shape_fiber(w):
                options = [
                    (b, g)
                    for g in span.carrier
                    if span.right(g) == p2.dir_sort(u)
                    for b in p1.shape_fiber(v)
                    if p1.dir_sort(b) == span.left(g)
                ]
                if not options:
                    dead = True
                    break
                b, g = rng.choice(options)
                beta[rho, v, u] = b
                gamma[rho, v, u] = g
            if dead:
                break
        if not dead:
            return SimCell(span, p1, p2, alpha, beta, gamma)
    return None
