"""Strong natural transformations between polynomial diagram extensions.

A transformation is represented by a container morphism (DiagMorphism,
defined alongside the diagrams): a forward map on shapes and a backward
table on directions. This module evaluates such morphisms to components,
composes them vertically, counts them exactly, enumerates them, extracts
one from a black-box component assignment by probing generic families,
and verifies naturality squares exhaustively up to a fiber bound.
"""
from __future__ import annotations

import itertools

from . import fam, finset, poly
from .errors import OracleNotNatural, ShapeMismatch, ValidationError
from .fam import FamMorphism, Family
from .finset import FinMap, check_guard
from .poly import DiagIso, DiagMorphism, PolyDiagram, identity_dm
from .report import Report

__all__ = [
    "DiagIso",
    "DiagMorphism",
    "ExtFunctor",
    "ComposedFunctor",
    "identity_dm",
    "eval_dm",
    "compose_dm",
    "count_nat",
    "enumerate_dm",
    "generic_family",
    "generic_element",
    "yoneda_extract",
    "naturality_check",
    "transformation_check",
]


def eval_dm(m: DiagMorphism, x: Family) -> FamMorphism:
    """The component at x: keep the payload, recorded through the backward
    tables, under the forward shape map."""
    if x.base != m.src.source:
        raise ShapeMismatch("family must live over the transformation's source")
    src_ext = poly.eval_extension(m.src, x)
    dst_ext = poly.eval_extension(m.dst, x)
    index = poly.extension_index(m.dst, x)
    positions = [poly._beta_positions(m, v) for v in m.src.shapes]
    table = tuple(
        index[(m.alpha(v), tuple(payload[k] for k in positions[v]))]
        for v, payload in poly.extension_elements(m.src, x)
    )
    return FamMorphism(src_ext, dst_ext, FinMap(src_ext.total, dst_ext.total, table))


def compose_dm(m2: DiagMorphism, m1: DiagMorphism) -> DiagMorphism:
    """Vertical composition: shape maps compose forward, direction tables
    compose backward."""
    if m1.dst != m2.src:
        raise ShapeMismatch("cannot compose: middle diagrams differ")
    alpha, betas = poly._compose_dm_tables(m2, m1)
    return DiagMorphism(m1.src, m2.dst, alpha, betas)


def _beta_choice_lists(p: PolyDiagram, q: PolyDiagram, v: int, w: int) -> list[tuple[int, ...]]:
    """For src shape v and dst shape w: per direction of w (ascending),
    the src directions of v with the matching sort."""
    by_sort: dict[int, list[int]] = {}
    for u1 in p.shape_fiber(v):
        by_sort.setdefault(p.dir_sort(u1), []).append(u1)
    return [tuple(by_sort.get(q.dir_sort(u2), ())) for u2 in q.shape_fiber(w)]


def _alpha_candidates(p: PolyDiagram, q: PolyDiagram) -> list[tuple[int, ...]]:
    if p.source != q.source or p.target != q.target:
        raise ShapeMismatch("transformations need diagrams over the same sorts")
    return [q.shape_sort.fiber(p.shape_sort(v)) for v in p.shapes]


def count_nat(p: PolyDiagram, q: PolyDiagram) -> int:
    """Exact number of strong transformations: sum over sort-compatible
    shape maps of the product, over source shapes and image directions, of
    the matching-direction counts."""
    cand = _alpha_candidates(p, q)
    space = 1
    for c in cand:
        space *= len(c)
    check_guard(space, "shape map search space")
    total = 0
    for combo in itertools.product(*cand):
        prod = 1
        for v in p.shapes:
            for choices in _beta_choice_lists(p, q, v, combo[v]):
                prod *= len(choices)
                if prod == 0:
                    break
            if prod == 0:
                break
        total += prod
    return total


def enumerate_dm(p: PolyDiagram, q: PolyDiagram) -> list[DiagMorphism]:
    """All strong transformations, shape-map major, then backward tables
    in odometer order. Guarded by the exact count."""
    check_guard(count_nat(p, q), "transformation enumeration")
    cand = _alpha_candidates(p, q)
    out: list[DiagMorphism] = []
    for combo in itertools.product(*cand):
        per_shape = [
            list(itertools.product(*_beta_choice_lists(p, q, v, combo[v])))
            for v in p.shapes
        ]
        for betas in itertools.product(*per_shape):
            out.append(
                DiagMorphism(p, q, FinMap(p.shapes, q.shapes, combo), tuple(betas))
            )
    return out


# ---------------------------------------------------------------------------
# generic families and extraction


def generic_family(p: PolyDiagram, v: int) -> tuple[Family, tuple[int, ...]]:
    """The representing family of shape v: its fiber over a source index
    collects v's directions of that sort. Returns the family and the
    direction order, so that order[t] is the direction at total element t."""
    by_sort: dict[int, list[int]] = {i: [] for i in p.source}
    for u in p.shape_fiber(v):
        by_sort[p.dir_sort(u)].append(u)
    sizes = [len(by_sort[i]) for i in p.source]
    y = fam.family_from_fibers(p.source, sizes)
    order = tuple(u for i in p.source for u in by_sort[i])
    return y, order


def generic_element(p: PolyDiagram, v: int) -> int:
    """The index, in the extension at the representing family, of the
    element of shape v whose payload picks each direction itself."""
    y, order = generic_family(p, v)
    t_of = {u: t for t, u in enumerate(order)}
    payload = tuple(t_of[u] for u in p.shape_fiber(v))
    return poly.extension_index(p, y)[(v, payload)]


def yoneda_extract(oracle, p: PolyDiagram, q: PolyDiagram) -> DiagMorphism:
    """Read a container morphism off a black-box component assignment by
    probing it at each representing family on the generic element, then
    verify the round trip on every family with fibers at most 3."""
    if p.source != q.source or p.target != q.target:
        raise ShapeMismatch("transformations need diagrams over the same sorts")
    alpha_table: list[int] = []
    betas: list[tuple[int, ...]] = []
    for v in p.shapes:
        y, order = generic_family(p, v)
        comp = oracle(y)
        expected_src = poly.eval_extension(p, y)
        expected_dst = poly.eval_extension(q, y)
        if comp.src != expected_src or comp.dst != expected_dst:
            raise ValidationError("oracle component has the wrong endpoints")
        image = comp(generic_element(p, v))
        w, payload = poly.extension_elements(q, y)[image]
        alpha_table.append(w)
        betas.append(tuple(order[t] for t in payload))
    try:
        m = DiagMorphism(
            p, q, FinMap(p.shapes, q.shapes, tuple(alpha_table)), tuple(betas)
        )
    except (ValidationError, ShapeMismatch) as exc:
        raise OracleNotNatural("oracle not natural") from exc
    for x in fam.families_up_to(p.source, 3):
        if eval_dm(m, x).map.table != oracle(x).map.table:
            raise OracleNotNatural("oracle not natural")
    return m


# ---------------------------------------------------------------------------
# naturality checking against arbitrary functor pairs


class ExtFunctor:
    """A diagram's extension packaged with its functorial action."""

    def __init__(self, p: PolyDiagram):
        self.src_base = p.source
        self.dst_base = p.target
        self._p = p

    def on_family(self, x: Family) -> Family:
        return poly.eval_extension(self._p, x)

    def on_morphism(self, h: FamMorphism) -> FamMorphism:
        return poly.extension_map(self._p, h)


class ComposedFunctor:
    """outer after inner."""

    def __init__(self, outer, inner):
        if inner.dst_base != outer.src_base:
            raise ShapeMismatch("cannot compose functors: bases differ")
        self.src_base = inner.src_base
        self.dst_base = outer.dst_base
        self._outer = outer
        self._inner = inner

    def on_family(self, x: Family) -> Family:
        return self._outer.on_family(self._inner.on_family(x))

    def on_morphism(self, h: FamMorphism) -> FamMorphism:
        return self._outer.on_morphism(self._inner.on_morphism(h))


def transformation_check(f, g, component, bound: int) -> Report:
    """Exhaustively verify that the component assignment is natural from
    functor f to functor g over every morphism between families with
    fibers at most bound."""
    if f.src_base != g.src_base or f.dst_base != g.dst_base:
        raise ShapeMismatch("functors must be parallel")
    families = list(fam.families_up_to(f.src_base, bound))
    check_guard(len(families) ** 2, "naturality square search")
    comps = [component(x) for x in families]
    squares = 0
    for ix, x in enumerate(families):
        for iy, y in enumerate(families):
            for h in fam.hom_enumerate(x, y):
                lhs = comps[ix].then(g.on_morphism(h))
                rhs = f.on_morphism(h).then(comps[iy])
                squares += 1
                if lhs.map.table != rhs.map.table:
                    line = (
                        f"counterexample: fibers {x.fiber_sizes()} -> "
                        f"{y.fiber_sizes()}, morphism table {h.map.table}"
                    )
                    return Report("naturality squares", False, (line,))
    return Report(
        "naturality squares",
        True,
        (f"{squares} squares commute at fiber bound {bound}",),
    )


def naturality_check(subject, bound: int, p: PolyDiagram | None = None,
                     q: PolyDiagram | None = None) -> Report:
    """Verify naturality of a container morphism, or of a black-box
    component assignment between the extensions of p and q."""
    if isinstance(subject, DiagMorphism):
        p, q = subject.src, subject.dst
        component = lambda x: eval_dm(subject, x)
    else:
        if p is None or q is None:
            raise ValidationError("a black-box subject needs both diagrams")
        component = subject
    return transformation_check(ExtFunctor(p), ExtFunctor(q), component, bound)
