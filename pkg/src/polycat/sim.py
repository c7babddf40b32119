"""Simulations between endo diagrams: spans of state indices with cell
tables, their validation, evaluation to components, composition,
extraction, equivalence, the span-lift adjunction, and the biproduct
structure on sums of diagrams.

A simulation from an endo diagram src (on sorts I1) to an endo diagram
dst (on sorts I2) is a span of finite sets R between I1 and I2 together
with three tables:

  alpha[rho, v]     a dst shape for every state rho and src shape v whose
                    sort matches the state's left end;
  beta[rho, v, u]   a src direction of v for every direction u of the
                    assigned shape (the backward direction choice);
  gamma[rho, v, u]  a successor state for the same entries.

Four equations tie the tables together (checked by validate): the
assigned shape sits over the state's right end; beta stays in v's
direction fiber; beta's sort is the successor's left end; the
successor's right end is u's sort. Evaluation turns a valid cell into a
natural family of morphisms relating the two extensions across the
span's sum lift.
"""
from __future__ import annotations

import itertools
import math

from . import fam, finset, nat, poly
from .errors import OracleNotNatural, ShapeMismatch, ValidationError
from .fam import FamMorphism, Family, Span
from .finset import FinMap, FinSet, check_guard
from .poly import PolyDiagram, au_lift, du_lift
from .report import Report

__all__ = [
    "Span",
    "SimCell",
    "cell_pairs",
    "validate",
    "identity_sim",
    "zero_sim",
    "compose_sim",
    "eval_sim",
    "sim_naturality_check",
    "extract_sim",
    "enumerate_sim",
    "equivalence_check",
    "au_du_adjunction_check",
    "span_family",
    "PlusStructure",
    "plus_structure",
]


def cell_pairs(span: Span, src: PolyDiagram) -> list[tuple[int, int]]:
    """The index set of the shape table: states paired with the src
    shapes whose sort is the state's left end."""
    return [
        (rho, v)
        for rho in span.carrier
        for v in src.shapes
        if src.shape_sort(v) == span.left(rho)
    ]


class SimCell:
    """A simulation cell; construction checks shapes and ranges, the four
    equations are the business of validate()."""

    def __init__(self, span: Span, src: PolyDiagram, dst: PolyDiagram,
                 alpha: dict, beta: dict, gamma: dict):
        assert src.is_endo() and dst.is_endo(), "simulations relate endo diagrams"
        if span.left.cod != src.source or span.right.cod != dst.source:
            raise ShapeMismatch("span legs must land in the two sort sets")
        pairs = cell_pairs(span, src)
        if set(alpha) != set(pairs):
            raise ValidationError("shape table must be indexed by exactly the (state, shape) pairs")
        for key in pairs:
            if alpha[key] not in dst.shapes:
                raise ValidationError(f"shape table value out of range at {key}")
        triples = [
            (rho, v, u) for rho, v in pairs for u in dst.shape_fiber(alpha[rho, v])
        ]
        if set(beta) != set(triples) or set(gamma) != set(triples):
            raise ValidationError(
                "direction and state tables must be indexed by exactly the "
                "(state, shape, direction) triples"
            )
        for key in triples:
            if beta[key] not in src.dirs:
                raise ValidationError(f"direction table value out of range at {key}")
            if gamma[key] not in span.carrier:
                raise ValidationError(f"state table value out of range at {key}")
        self.span = span
        self.src = src
        self.dst = dst
        self.alpha = dict(alpha)
        self.beta = dict(beta)
        self.gamma = dict(gamma)
        self.pairs = pairs
        self.triples = triples

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimCell):
            return NotImplemented
        return (self.span, self.src, self.dst) == (other.span, other.src, other.dst) \
            and self.alpha == other.alpha and self.beta == other.beta \
            and self.gamma == other.gamma

    def __repr__(self) -> str:
        return (f"SimCell(states={self.span.carrier.size}, "
                f"pairs={len(self.pairs)}, triples={len(self.triples)})")

    def require_valid(self) -> None:
        rep = validate(self)
        if not rep.ok:
            raise ValidationError(rep.lines[0])


def validate(c: SimCell) -> Report:
    """Check the four cell equations on every entry; the first violation
    is reported with its coordinates."""
    for rho, v in c.pairs:
        w = c.alpha[rho, v]
        if c.dst.shape_sort(w) != c.span.right(rho):
            return Report("simulation cell equations", False, (
                f"assigned shape sits over the wrong sort at (state {rho}, shape {v}):"
                f" got {c.dst.shape_sort(w)}, the state's right end is {c.span.right(rho)}",))
    for rho, v, u in c.triples:
        b = c.beta[rho, v, u]
        g = c.gamma[rho, v, u]
        if c.src.dir_shape(b) != v:
            return Report("simulation cell equations", False, (
                f"backward direction leaves the shape's fiber at "
                f"(state {rho}, shape {v}, direction {u})",))
        if c.span.right(g) != c.dst.dir_sort(u):
            return Report("simulation cell equations", False, (
                f"successor state's right end disagrees with the direction sort at "
                f"(state {rho}, shape {v}, direction {u})",))
        if c.src.dir_sort(b) != c.span.left(g):
            return Report("simulation cell equations", False, (
                f"backward direction's sort disagrees with the successor state's "
                f"left end at (state {rho}, shape {v}, direction {u})",))
    return Report("simulation cell equations", True,
                  (f"{len(c.pairs)} shape entries and {len(c.triples)} "
                   f"direction entries satisfy all four equations",))


def identity_sim(p: PolyDiagram) -> SimCell:
    """The identity simulation: the diagonal span, every table a copy."""
    assert p.is_endo()
    ident = finset.identity(p.source)
    span = Span(p.source, ident, ident)
    alpha = {(i, v): v for i, v in cell_pairs(span, p)}
    beta = {}
    gamma = {}
    for (i, v), w in alpha.items():
        for u in p.shape_fiber(w):
            beta[i, v, u] = u
            gamma[i, v, u] = p.dir_sort(u)
    return SimCell(span, p, p, alpha, beta, gamma)


def zero_sim(src: PolyDiagram, dst: PolyDiagram) -> SimCell:
    """The empty-span simulation, the zero morphism."""
    empty = FinSet(0)
    span = Span(empty, FinMap(empty, src.source, ()), FinMap(empty, dst.source, ()))
    return SimCell(span, src, dst, {}, {}, {})


def compose_sim(c2: SimCell, c1: SimCell) -> SimCell:
    """Composite simulation over the pullback span: run c1, feed its
    assigned shape to c2, pull directions back through both."""
    if c1.dst != c2.src:
        raise ShapeMismatch("cannot compose: middle diagrams differ")
    c1.require_valid()
    c2.require_valid()
    pb = finset.pullback(c1.span.right, c2.span.left)
    span = Span(pb.carrier, pb.left.then(c1.span.left), pb.right.then(c2.span.right))
    alpha: dict = {}
    beta: dict = {}
    gamma: dict = {}
    pair_index = {pair: t for t, pair in enumerate(pb.pairs)}
    for tau, (rho, sigma) in enumerate(pb.pairs):
        for v in c1.src.shapes:
            if c1.src.shape_sort(v) != span.left(tau):
                continue
            mid = c1.alpha[rho, v]
            w = c2.alpha[sigma, mid]
            alpha[tau, v] = w
            for u in c2.dst.shape_fiber(w):
                b2 = c2.beta[sigma, mid, u]
                g2 = c2.gamma[sigma, mid, u]
                beta[tau, v, u] = c1.beta[rho, v, b2]
                gamma[tau, v, u] = pair_index[(c1.gamma[rho, v, b2], g2)]
    return SimCell(span, c1.src, c2.dst, alpha, beta, gamma)


def eval_sim(c: SimCell, x: Family) -> FamMorphism:
    """The cell's component at x: a morphism from the sum lift of the src
    value to the dst value of the sum lift."""
    if x.base != c.src.source:
        raise ShapeMismatch("family must live over the source sorts")
    c.require_valid()
    au = au_lift(c.span)
    inner = poly.eval_extension(c.src, x)
    dom = poly.eval_extension(au, inner)
    aux = poly.eval_extension(au, x)
    aux_index = poly.extension_index(au, x)
    cod = poly.eval_extension(c.dst, aux)
    cod_index = poly.extension_index(c.dst, aux)
    inner_elems = poly.extension_elements(c.src, x)
    table = []
    for rho, (t,) in poly.extension_elements(au, inner):
        v, h = inner_elems[t]
        w = c.alpha[rho, v]
        fiber1 = c.src.shape_fiber(v)
        payload = tuple(
            aux_index[(c.gamma[rho, v, u], (h[fiber1.index(c.beta[rho, v, u])],))]
            for u in c.dst.shape_fiber(w)
        )
        table.append(cod_index[(w, payload)])
    return FamMorphism(dom, cod, FinMap(dom.total, cod.total, tuple(table)))


def sim_naturality_check(c: SimCell, bound: int) -> Report:
    """Exhaustively verify that the cell's components are natural between
    the two composite functors, up to the fiber bound."""
    au = nat.ExtFunctor(au_lift(c.span))
    f = nat.ComposedFunctor(au, nat.ExtFunctor(c.src))
    g = nat.ComposedFunctor(nat.ExtFunctor(c.dst), au)
    return nat.transformation_check(f, g, lambda x: eval_sim(c, x), bound)


def extract_sim(oracle, span: Span, p1: PolyDiagram, p2: PolyDiagram) -> SimCell:
    """Read the cell tables off a black-box component assignment by
    probing each (state, shape) pair at the shape's representing family,
    then verify the round trip on every family with fibers at most 3."""
    assert p1.is_endo() and p2.is_endo()
    if span.left.cod != p1.source or span.right.cod != p2.source:
        raise ShapeMismatch("span legs must land in the two sort sets")
    au = au_lift(span)
    alpha: dict = {}
    beta: dict = {}
    gamma: dict = {}
    for rho, v in cell_pairs(span, p1):
        y, order = nat.generic_family(p1, v)
        comp = oracle(y)
        inner = poly.eval_extension(p1, y)
        expected_src = poly.eval_extension(au, inner)
        aux = poly.eval_extension(au, y)
        expected_dst = poly.eval_extension(p2, aux)
        if comp.src != expected_src or comp.dst != expected_dst:
            raise ValidationError("oracle component has the wrong endpoints")
        gen = nat.generic_element(p1, v)
        probe = poly.extension_index(au, inner)[(rho, (gen,))]
        w, payload = poly.extension_elements(p2, aux)[comp(probe)]
        alpha[rho, v] = w
        aux_elems = poly.extension_elements(au, y)
        for pos, u in enumerate(p2.shape_fiber(w)):
            g, (t,) = aux_elems[payload[pos]]
            gamma[rho, v, u] = g
            beta[rho, v, u] = order[t]
    try:
        c = SimCell(span, p1, p2, alpha, beta, gamma)
        c.require_valid()
    except (ValidationError, ShapeMismatch) as exc:
        raise OracleNotNatural("oracle not natural") from exc
    for x in fam.families_up_to(p1.source, 3):
        if eval_sim(c, x).map.table != oracle(x).map.table:
            raise OracleNotNatural("oracle not natural")
    return c


def count_sim(p1: PolyDiagram, p2: PolyDiagram, span: Span) -> int:
    """Number of valid cells over the given span, computed arithmetically.

    No guard: the count is a product of per-pair weights and is safe to
    compute even when enumerating the cells themselves would not be.
    """
    assert p1.is_endo() and p2.is_endo()
    total = 1
    for rho, v in cell_pairs(span, p1):
        weight = 0
        for w in p2.shape_sort.fiber(span.right(rho)):
            branch = 1
            for u in p2.shape_fiber(w):
                branch *= sum(
                    1
                    for g in span.carrier
                    if span.right(g) == p2.dir_sort(u)
                    for b in p1.shape_fiber(v)
                    if p1.dir_sort(b) == span.left(g)
                )
            weight += branch
        total *= weight
    return total


def _pair_choices(p1: PolyDiagram, p2: PolyDiagram, span: Span,
                  rho: int, v: int) -> list[tuple[int, dict, dict]]:
    """Every way to fill one (state, shape) pair of a cell: an assigned
    shape of the destination plus full direction/state tables for it.
    The option count is guarded before materializing."""

    def entry_options(u: int) -> list[tuple[int, int]]:
        return [
            (b, g)
            for g in span.carrier
            if span.right(g) == p2.dir_sort(u)
            for b in p1.shape_fiber(v)
            if p1.dir_sort(b) == span.left(g)
        ]

    weight = 0
    for w in p2.shape_sort.fiber(span.right(rho)):
        branch = 1
        for u in p2.shape_fiber(w):
            branch *= len(entry_options(u))
        weight += branch
    check_guard(weight, "cell table options at one (state, shape) pair")
    choices: list[tuple[int, dict, dict]] = []
    for w in p2.shape_sort.fiber(span.right(rho)):
        fiber = p2.shape_fiber(w)
        for assignment in itertools.product(*(entry_options(u) for u in fiber)):
            beta = {(rho, v, u): b for u, (b, _) in zip(fiber, assignment)}
            gamma = {(rho, v, u): g for u, (_, g) in zip(fiber, assignment)}
            choices.append((w, beta, gamma))
    return choices


def random_cell(rng, p1: PolyDiagram, p2: PolyDiagram, span: Span) -> SimCell | None:
    """One random cell over the given span, or None when none exists.

    Each (state, shape) pair is filled independently and uniformly over
    its own options; useful for spot-checking laws on instances whose
    full cell space is too large to enumerate.
    """
    assert p1.is_endo() and p2.is_endo()
    pairs = cell_pairs(span, p1)
    alpha: dict = {}
    beta: dict = {}
    gamma: dict = {}
    for rho, v in pairs:
        choices = _pair_choices(p1, p2, span, rho, v)
        if not choices:
            return None
        w, b, g = rng.choice(choices)
        alpha[rho, v] = w
        beta.update(b)
        gamma.update(g)
    return SimCell(span, p1, p2, alpha, beta, gamma)


def enumerate_sim(p1: PolyDiagram, p2: PolyDiagram, span: Span) -> list[SimCell]:
    """All valid cells over the given span: per (state, shape) pair, a
    choice of assigned shape plus a full direction/state table for it.
    The exact cell count is computed up front and guarded."""
    assert p1.is_endo() and p2.is_endo()
    pairs = cell_pairs(span, p1)
    check_guard(count_sim(p1, p2, span), "cell search space")
    per_pair = [_pair_choices(p1, p2, span, rho, v) for rho, v in pairs]
    out: list[SimCell] = []
    for combo in itertools.product(*per_pair):
        alpha = {pair: w for pair, (w, _, _) in zip(pairs, combo)}
        beta: dict = {}
        gamma: dict = {}
        for _, b, g in combo:
            beta.update(b)
            gamma.update(g)
        out.append(SimCell(span, p1, p2, alpha, beta, gamma))
    return out


def equivalence_check(c: SimCell, c2: SimCell) -> FinMap | None:
    """Search for a span bijection commuting with both legs under which
    the three tables agree; returns it, or None."""
    if c.src != c2.src or c.dst != c2.dst:
        raise ShapeMismatch("equivalent cells need the same endpoint diagrams")
    r, r2 = c.span, c2.span
    if r.carrier.size != r2.carrier.size:
        return None
    check_guard(math.factorial(r.carrier.size), "span isomorphism search")
    by_legs: dict[tuple[int, int], list[int]] = {}
    for rho in r2.carrier:
        by_legs.setdefault((r2.left(rho), r2.right(rho)), []).append(rho)

    def transported_ok(eps: list[int]) -> bool:
        for (rho, v), w in c.alpha.items():
            if c2.alpha[eps[rho], v] != w:
                return False
        for (rho, v, u), b in c.beta.items():
            if c2.beta[eps[rho], v, u] != b:
                return False
            if c2.gamma[eps[rho], v, u] != eps[c.gamma[rho, v, u]]:
                return False
        return True

    used = [False] * r2.carrier.size
    eps: list[int] = []

    def backtrack(rho: int) -> bool:
        if rho == r.carrier.size:
            return transported_ok(eps)
        for cand in by_legs.get((r.left(rho), r.right(rho)), ()):
            if used[cand]:
                continue
            used[cand] = True
            eps.append(cand)
            if backtrack(rho + 1):
                return True
            eps.pop()
            used[cand] = False
        return False

    if backtrack(0):
        return FinMap(r.carrier, r2.carrier, tuple(eps))
    return None


# ---------------------------------------------------------------------------
# the adjunction between the two span lifts


def span_family(r: Span) -> Family:
    """The span's carrier as a family over the product of its ends."""
    prod = finset.product(r.left.cod, r.right.cod)
    table = tuple(prod.pair(r.left(rho), r.right(rho)) for rho in r.carrier)
    return Family(r.carrier, prod.carrier, FinMap(r.carrier, prod.carrier, table))


def au_du_adjunction_check(r: Span, y: Family, z: Family) -> Report:
    """Exhibit the two adjunction bijections of the span lifts:
    morphisms out of the sum lift's value correspond to morphisms into
    the product lift of the reversed span, and to families of maps
    indexed by the span itself. All three hom sets are enumerated, the
    transposes are computed elementwise, and the round trips are checked
    to be identities."""
    if y.base != r.left.cod:
        raise ShapeMismatch("first family must live over the span's left end")
    if z.base != r.right.cod:
        raise ShapeMismatch("second family must live over the span's right end")
    au = au_lift(r)
    du_rev = du_lift(r.reversed())
    au_y = poly.eval_extension(au, y)
    du_z = poly.eval_extension(du_rev, z)
    homs1 = fam.hom_enumerate(au_y, z)
    homs2 = fam.hom_enumerate(y, du_z)
    rf = span_family(r)
    trf = fam.tr_family(y, z)
    homs3 = fam.hom_enumerate(rf, trf)

    closed = 1
    zsizes = z.fiber_sizes()
    ysizes = y.fiber_sizes()
    for rho in r.carrier:
        closed *= zsizes[r.right(rho)] ** ysizes[r.left(rho)]
    counts = (len(homs1), len(homs2), len(homs3))
    lines = [
        f"hom(sum-lift y, z) size {counts[0]}; hom(y, product-lift z) size {counts[1]}; "
        f"hom(span family, map family) size {counts[2]}",
        f"closed product formula gives {closed}",
    ]
    ok = counts[0] == counts[1] == counts[2] == closed

    au_index = poly.extension_index(au, y)
    au_elems = poly.extension_elements(au, y)
    du_index = poly.extension_index(du_rev, z)
    du_elems = poly.extension_elements(du_rev, z)
    tr_elems = fam.tr_elements(y, z)
    tr_index = {elem: k for k, elem in enumerate(tr_elems)}
    yfibs = y.proj.fibers()
    zoff = [0] * z.base.size
    run = 0
    for j, n in enumerate(zsizes):
        zoff[j] = run
        run += n

    def transpose12(m: FamMorphism) -> FamMorphism:
        table = []
        for t in range(y.total.size):
            i1 = y.proj(t)
            section = tuple(
                m(au_index[(rho, (t,))]) for rho in r.left.fiber(i1)
            )
            table.append(du_index[(i1, section)])
        return FamMorphism(y, du_z, FinMap(y.total, du_z.total, tuple(table)))

    def untranspose12(h: FamMorphism) -> FamMorphism:
        table = []
        for rho, (t,) in au_elems:
            _, section = du_elems[h(t)]
            position = r.left.fiber(y.proj(t)).index(rho)
            table.append(section[position])
        return FamMorphism(au_y, z, FinMap(au_y.total, z.total, tuple(table)))

    def transpose13(m: FamMorphism) -> FamMorphism:
        table = []
        for rho in r.carrier:
            i2 = r.right(rho)
            entries = tuple(
                m(au_index[(rho, (t,))]) for t in yfibs[r.left(rho)]
            )
            pair = rf.proj(rho)
            table.append(tr_index[(pair, entries)])
        return FamMorphism(rf, trf, FinMap(rf.total, trf.total, tuple(table)))

    def untranspose13(h: FamMorphism) -> FamMorphism:
        table = []
        for rho, (t,) in au_elems:
            _, entries = tr_elems[h(rho)]
            position = yfibs[r.left(rho)].index(t)
            table.append(entries[position])
        return FamMorphism(au_y, z, FinMap(au_y.total, z.total, tuple(table)))

    round_ok = True
    seen2 = set()
    seen3 = set()
    for m in homs1:
        h2 = transpose12(m)
        h3 = transpose13(m)
        seen2.add(h2.map.table)
        seen3.add(h3.map.table)
        if untranspose12(h2).map.table != m.map.table:
            round_ok = False
            break
        if untranspose13(h3).map.table != m.map.table:
            round_ok = False
            break
    surjective = len(seen2) == len(homs2) and len(seen3) == len(homs3)
    lines.append(f"round trips are identities: {'yes' if round_ok else 'NO'}")
    lines.append(f"transposes are bijections: {'yes' if surjective else 'NO'}")
    return Report("span lift adjunction", bool(ok and round_ok and surjective),
                  tuple(lines))


# ---------------------------------------------------------------------------
# biproduct structure on sums of endo diagrams


class PlusStructure:
    """Injections, projections, pairing and copairing for a sum of endo
    diagrams, all as simulation cells."""

    def __init__(self, p1: PolyDiagram, p2: PolyDiagram):
        assert p1.is_endo() and p2.is_endo()
        self.p1 = p1
        self.p2 = p2
        self.sum = poly.plus(p1, p2)
        n1, n2 = p1.source.size, p2.source.size
        total = self.sum.source
        embed1 = FinMap(p1.source, total, tuple(range(n1)))
        embed2 = FinMap(p2.source, total, tuple(range(n1, n1 + n2)))
        self._shape_shift = p1.shapes.size
        self._dir_shift = p1.dirs.size
        self._sort_shift = n1
        self.inl = self._injection(p1, embed1, left=True)
        self.inr = self._injection(p2, embed2, left=False)
        self.proj1 = self._projection(p1, embed1, left=True)
        self.proj2 = self._projection(p2, embed2, left=False)

    def _injection(self, p: PolyDiagram, embed: FinMap, left: bool) -> SimCell:
        span = Span(p.source, finset.identity(p.source), embed)
        vs = 0 if left else self._shape_shift
        us = 0 if left else self._dir_shift
        alpha = {}
        beta = {}
        gamma = {}
        for i, v in cell_pairs(span, p):
            w = v + vs
            alpha[i, v] = w
            for u in self.sum.shape_fiber(w):
                beta[i, v, u] = u - us
                gamma[i, v, u] = p.dir_sort(u - us)
        return SimCell(span, p, self.sum, alpha, beta, gamma)

    def _projection(self, p: PolyDiagram, embed: FinMap, left: bool) -> SimCell:
        span = Span(p.source, embed, finset.identity(p.source))
        vs = 0 if left else self._shape_shift
        us = 0 if left else self._dir_shift
        alpha = {}
        beta = {}
        gamma = {}
        for rho, w in cell_pairs(span, self.sum):
            # only shapes of the chosen part sit over embedded sorts
            v = w - vs
            alpha[rho, w] = v
            for u in p.shape_fiber(v):
                beta[rho, w, u] = u + us
                gamma[rho, w, u] = p.dir_sort(u)
        return SimCell(span, self.sum, p, alpha, beta, gamma)

    def pair(self, c1: SimCell, c2: SimCell) -> SimCell:
        """The cell into the sum determined by cells into both parts."""
        if c1.src != c2.src:
            raise ShapeMismatch("pairing needs cells out of a common diagram")
        if c1.dst != self.p1 or c2.dst != self.p2:
            raise ShapeMismatch("pairing needs cells into the two parts")
        q = c1.src
        cop = finset.coproduct(c1.span.carrier, c2.span.carrier)
        left = finset.copair(c1.span.left, c2.span.left, cop)
        right = finset.copair(
            c1.span.right.then(FinMap(self.p1.source, self.sum.source,
                                      tuple(range(self.p1.source.size)))),
            c2.span.right.then(FinMap(self.p2.source, self.sum.source,
                                      tuple(range(self._sort_shift,
                                                  self.sum.source.size)))),
            cop,
        )
        span = Span(cop.carrier, left, right)
        shift = c1.span.carrier.size
        alpha = {}
        beta = {}
        gamma = {}
        for rho, v in cell_pairs(span, q):
            if rho < shift:
                w = c1.alpha[rho, v]
                alpha[rho, v] = w
                for u2 in self.p1.shape_fiber(w):
                    beta[rho, v, u2] = c1.beta[rho, v, u2]
                    gamma[rho, v, u2] = c1.gamma[rho, v, u2]
            else:
                w = c2.alpha[rho - shift, v] + self._shape_shift
                alpha[rho, v] = w
                for u2 in self.sum.shape_fiber(w):
                    u = u2 - self._dir_shift
                    beta[rho, v, u2] = c2.beta[rho - shift, v, u]
                    gamma[rho, v, u2] = c2.gamma[rho - shift, v, u] + shift
        return SimCell(span, q, self.sum, alpha, beta, gamma)

    def copair(self, c1: SimCell, c2: SimCell) -> SimCell:
        """The cell out of the sum determined by cells out of both parts."""
        if c1.dst != c2.dst:
            raise ShapeMismatch("copairing needs cells into a common diagram")
        if c1.src != self.p1 or c2.src != self.p2:
            raise ShapeMismatch("copairing needs cells out of the two parts")
        q = c1.dst
        cop = finset.coproduct(c1.span.carrier, c2.span.carrier)
        left = finset.copair(
            c1.span.left.then(FinMap(self.p1.source, self.sum.source,
                                     tuple(range(self.p1.source.size)))),
            c2.span.left.then(FinMap(self.p2.source, self.sum.source,
                                     tuple(range(self._sort_shift,
                                                 self.sum.source.size)))),
            cop,
        )
        right = finset.copair(c1.span.right, c2.span.right, cop)
        span = Span(cop.carrier, left, right)
        shift = c1.span.carrier.size
        alpha = {}
        beta = {}
        gamma = {}
        for rho, w in cell_pairs(span, self.sum):
            if rho < shift:
                v = w  # a left-part shape, unshifted in the sum
                alpha[rho, w] = c1.alpha[rho, v]
                for u in q.shape_fiber(alpha[rho, w]):
                    beta[rho, w, u] = c1.beta[rho, v, u]
                    gamma[rho, w, u] = c1.gamma[rho, v, u]
            else:
                v = w - self._shape_shift
                alpha[rho, w] = c2.alpha[rho - shift, v]
                for u in q.shape_fiber(alpha[rho, w]):
                    beta[rho, w, u] = c2.beta[rho - shift, v, u] + self._dir_shift
                    gamma[rho, w, u] = c2.gamma[rho - shift, v, u] + shift
        return SimCell(span, self.sum, q, alpha, beta, gamma)

    def decompose(self, c: SimCell) -> tuple[SimCell, SimCell]:
        """Split a cell out of the sum by which part each state's left
        end lands in; copairing the parts recovers the cell up to
        equivalence."""
        if c.src != self.sum:
            raise ShapeMismatch("decomposition needs a cell out of the sum")
        c.require_valid()
        out = []
        for part, p, vs, us in (
            (0, self.p1, 0, 0),
            (1, self.p2, self._shape_shift, self._dir_shift),
        ):
            keep = [rho for rho in c.span.carrier
                    if (c.span.left(rho) >= self._sort_shift) == bool(part)]
            renumber = {rho: k for k, rho in enumerate(keep)}
            carrier = FinSet(len(keep))
            left = FinMap(carrier, p.source,
                          tuple(c.span.left(rho) - part * self._sort_shift
                                for rho in keep))
            right = FinMap(carrier, c.dst.source,
                           tuple(c.span.right(rho) for rho in keep))
            span = Span(carrier, left, right)
            alpha = {}
            beta = {}
            gamma = {}
            for rho in keep:
                for w in self.sum.shapes:
                    if self.sum.shape_sort(w) != c.span.left(rho):
                        continue
                    v = w - vs
                    alpha[renumber[rho], v] = c.alpha[rho, w]
                    for u in c.dst.shape_fiber(c.alpha[rho, w]):
                        beta[renumber[rho], v, u] = c.beta[rho, w, u] - us
                        gamma[renumber[rho], v, u] = renumber[c.gamma[rho, w, u]]
            out.append(SimCell(span, p, c.dst, alpha, beta, gamma))
        return out[0], out[1]


def plus_structure(p1: PolyDiagram, p2: PolyDiagram) -> PlusStructure:
    return PlusStructure(p1, p2)
