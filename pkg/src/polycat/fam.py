"""Families of finite sets over a base, and the three reindexing functors.

A family over a base B is a map proj: total -> B; the fiber over b is the
preimage proj^-1(b). Pushing forward along f (dependent sum), pulling back
along f (base change), and taking sections along f (dependent product) are
implemented with explicit canonical carriers:

- base change along f produces the pairs (a, t) with f(a) = proj(t), in
  lexicographic order (delta_pairs records them);
- dependent product along f produces the pairs (b, section), where a
  section picks one fiber element for each point of f^-1(b), sections in
  odometer order (pi_sections records them).

Everything downstream decodes constructed elements through those tables.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

from . import finset
from .errors import ShapeMismatch, ValidationError
from .finset import FinMap, FinSet, check_guard
from .report import Report


@dataclass(frozen=True)
class Family:
    """An indexed family of finite sets, presented as total -> base."""

    total: FinSet
    base: FinSet
    proj: FinMap

    def __post_init__(self) -> None:
        if self.proj.dom != self.total or self.proj.cod != self.base:
            raise ShapeMismatch("projection endpoints do not match total/base")

    def fiber(self, b: int) -> tuple[int, ...]:
        return self.proj.fiber(b)

    def fiber_sizes(self) -> tuple[int, ...]:
        sizes = [0] * self.base.size
        for b in self.proj.table:
            sizes[b] += 1
        return tuple(sizes)


def family_from_fibers(base: FinSet, sizes: tuple[int, ...] | list[int]) -> Family:
    """The block family with the given fiber sizes: elements of the fiber
    over b are numbered contiguously, bases in ascending order."""
    if len(sizes) != base.size:
        raise ShapeMismatch("one fiber size per base point required")
    proj: list[int] = []
    for b, n in enumerate(sizes):
        if n < 0:
            raise ShapeMismatch("fiber sizes must be nonnegative")
        proj.extend([b] * n)
    total = FinSet(len(proj))
    return Family(total, base, FinMap(total, base, tuple(proj)))


def families_up_to(base: FinSet, max_fiber: int) -> Iterator[Family]:
    """All block families over base with every fiber size <= max_fiber,
    in lexicographic order of the size tuple."""
    for sizes in itertools.product(range(max_fiber + 1), repeat=base.size):
        yield family_from_fibers(base, sizes)


@dataclass(frozen=True)
class FamMorphism:
    """A map of families over a common base: a map on totals commuting
    with the projections."""

    src: Family
    dst: Family
    map: FinMap

    def __post_init__(self) -> None:
        if self.src.base != self.dst.base:
            raise ShapeMismatch("family morphism needs a common base")
        if self.map.dom != self.src.total or self.map.cod != self.dst.total:
            raise ShapeMismatch("morphism endpoints do not match the families")
        if finset.compose(self.dst.proj, self.map).table != self.src.proj.table:
            raise ShapeMismatch("morphism does not commute with the projections")

    def __call__(self, t: int) -> int:
        return self.map.table[t]

    def then(self, g: "FamMorphism") -> "FamMorphism":
        if self.dst != g.src:
            raise ShapeMismatch("cannot compose family morphisms: endpoints differ")
        return FamMorphism(self.src, g.dst, self.map.then(g.map))

    def is_iso(self) -> bool:
        return self.map.is_bijection()

    def inverse(self) -> "FamMorphism":
        return FamMorphism(self.dst, self.src, self.map.inverse())


def identity_morphism(x: Family) -> FamMorphism:
    return FamMorphism(x, x, finset.identity(x.total))


@dataclass(frozen=True)
class FamIso:
    """A verified invertible family morphism (both directions stored)."""

    forward: FamMorphism
    backward: FamMorphism

    def __post_init__(self) -> None:
        round1 = self.forward.then(self.backward)
        round2 = self.backward.then(self.forward)
        if round1.map.table != finset.identity(self.forward.src.total).table:
            raise ValidationError("forward;backward is not the identity")
        if round2.map.table != finset.identity(self.backward.src.total).table:
            raise ValidationError("backward;forward is not the identity")


def iso_from_forward(forward: FamMorphism) -> FamIso:
    return FamIso(forward, forward.inverse())


@dataclass(frozen=True)
class Span:
    """Two maps out of a common carrier; the relation-like shape that
    simulation cells and the relational lifts are built on."""

    carrier: FinSet
    left: FinMap
    right: FinMap

    def __post_init__(self) -> None:
        if self.left.dom != self.carrier or self.right.dom != self.carrier:
            raise ShapeMismatch("span legs must share the carrier as domain")

    def reversed(self) -> "Span":
        return Span(self.carrier, self.right, self.left)


# ---------------------------------------------------------------------------
# the three reindexing functors


def sigma(f: FinMap, x: Family) -> Family:
    """Dependent sum along f: keep the total, postcompose the projection."""
    if x.base != f.dom:
        raise ShapeMismatch("dependent sum: family not over the map's domain")
    return Family(x.total, f.cod, x.proj.then(f))


def delta_pairs(f: FinMap, y: Family) -> tuple[tuple[int, int], ...]:
    """Canonical carrier of the base change: pairs (a, t) with
    f(a) = proj(t), lexicographically ordered."""
    if y.base != f.cod:
        raise ShapeMismatch("base change: family not over the map's codomain")
    fibs = y.proj.fibers()
    return tuple((a, t) for a in range(f.dom.size) for t in fibs[f.table[a]])


def delta(f: FinMap, y: Family) -> Family:
    """Base change along f, on the canonical carrier of delta_pairs."""
    pairs = delta_pairs(f, y)
    total = FinSet(len(pairs))
    return Family(total, f.dom, FinMap(total, f.dom, tuple(a for a, _ in pairs)))


def delta_index(f: FinMap, y: Family) -> dict[tuple[int, int], int]:
    return {pair: k for k, pair in enumerate(delta_pairs(f, y))}


def pi_sections(f: FinMap, x: Family) -> tuple[tuple[int, tuple[int, ...]], ...]:
    """Canonical carrier of the dependent product: pairs (b, section).

    A section over b assigns to each point of f^-1(b) (ascending) one
    element of the fiber of x over that point; sections enumerate in
    odometer order, rightmost coordinate fastest. Entries are absolute
    elements of x.total.
    """
    if x.base != f.dom:
        raise ShapeMismatch("dependent product: family not over the map's domain")
    xfibs = x.proj.fibers()
    sizes = x.fiber_sizes()
    count = 0
    for b in range(f.cod.size):
        block = 1
        for a in f.fiber(b):
            block *= sizes[a]
        count += block
    check_guard(count, "dependent product carrier")
    out: list[tuple[int, tuple[int, ...]]] = []
    for b in range(f.cod.size):
        choices = [xfibs[a] for a in f.fiber(b)]
        for section in itertools.product(*choices):
            out.append((b, section))
    return tuple(out)


def pi(f: FinMap, x: Family) -> Family:
    """Dependent product along f, on the canonical carrier of pi_sections."""
    secs = pi_sections(f, x)
    total = FinSet(len(secs))
    return Family(total, f.cod, FinMap(total, f.cod, tuple(b for b, _ in secs)))


def pi_index(f: FinMap, x: Family) -> dict[tuple[int, tuple[int, ...]], int]:
    return {sec: k for k, sec in enumerate(pi_sections(f, x))}


# ---------------------------------------------------------------------------
# hom sets


def hom_count(x: Family, y: Family) -> int:
    if x.base != y.base:
        raise ShapeMismatch("hom needs families over a common base")
    sizes = y.fiber_sizes()
    count = 1
    for b in x.proj.table:
        count *= sizes[b]
    return count


def hom_enumerate(x: Family, y: Family) -> list[FamMorphism]:
    """All family morphisms x -> y, lexicographic in the table whose t-th
    entry ranges over the (ascending) fiber of y over proj(t). Guarded."""
    check_guard(hom_count(x, y), "family hom set")
    yfibs = y.proj.fibers()
    choices = [yfibs[b] for b in x.proj.table]
    out = []
    for table in itertools.product(*choices):
        out.append(FamMorphism(x, y, FinMap(x.total, y.total, table)))
    return out


# ---------------------------------------------------------------------------
# adjunction witnesses


def sigma_transpose(f: FinMap, x: Family, y: Family, m: FamMorphism) -> FamMorphism:
    """Hom(sum_f x, y) -> Hom(x, pullback_f y), t |-> (proj_x(t), m(t))."""
    dfy = delta(f, y)
    index = delta_index(f, y)
    table = tuple(index[(x.proj.table[t], m.map.table[t])] for t in range(x.total.size))
    return FamMorphism(x, dfy, FinMap(x.total, dfy.total, table))


def sigma_untranspose(f: FinMap, x: Family, y: Family, h: FamMorphism) -> FamMorphism:
    pairs = delta_pairs(f, y)
    sfx = sigma(f, x)
    table = tuple(pairs[h.map.table[t]][1] for t in range(x.total.size))
    return FamMorphism(sfx, y, FinMap(sfx.total, y.total, table))


def pi_transpose(f: FinMap, x: Family, y: Family, m: FamMorphism) -> FamMorphism:
    """Hom(pullback_f y, x) -> Hom(y, prod_f x): currying along f."""
    dindex = delta_index(f, y)
    pindex = pi_index(f, x)
    pfx = pi(f, x)
    table = []
    for s in range(y.total.size):
        b = y.proj.table[s]
        section = tuple(m.map.table[dindex[(a, s)]] for a in f.fiber(b))
        table.append(pindex[(b, section)])
    return FamMorphism(y, pfx, FinMap(y.total, pfx.total, tuple(table)))


def pi_untranspose(f: FinMap, x: Family, y: Family, h: FamMorphism) -> FamMorphism:
    pairs = delta_pairs(f, y)
    secs = pi_sections(f, x)
    dfy = delta(f, y)
    table = []
    for k, (a, s) in enumerate(pairs):
        b = f.table[a]
        _, section = secs[h.map.table[s]]
        position = f.fiber(b).index(a)
        table.append(section[position])
    return FamMorphism(dfy, x, FinMap(dfy.total, x.total, tuple(table)))


def adjunction_witness(f: FinMap, x: Family, y: Family) -> Report:
    """Exhibit both adjunction bijections on fully enumerated hom sets:
    Hom(sum_f x, y) = Hom(x, pullback_f y) and
    Hom(pullback_f y, x) = Hom(y, prod_f x), verified by round trips."""
    if x.base != f.dom or y.base != f.cod:
        raise ShapeMismatch("adjunction witness: x must live over dom(f), y over cod(f)")
    lines = []
    ok = True

    sfx, dfy, pfx = sigma(f, x), delta(f, y), pi(f, x)
    left = hom_enumerate(sfx, y)
    right = hom_enumerate(x, dfy)
    lines.append(f"hom(sum_f x, y) size {len(left)}; hom(x, pullback_f y) size {len(right)}")
    ok &= len(left) == len(right)
    seen = set()
    for m in left:
        h = sigma_transpose(f, x, y, m)
        back = sigma_untranspose(f, x, y, h)
        ok &= back.map.table == m.map.table
        seen.add(h.map.table)
    ok &= seen == {h.map.table for h in right}
    lines.append(f"sum/pullback transposes round-trip: {'yes' if ok else 'NO'}")

    left2 = hom_enumerate(dfy, x)
    right2 = hom_enumerate(y, pfx)
    lines.append(
        f"hom(pullback_f y, x) size {len(left2)}; hom(y, prod_f x) size {len(right2)}"
    )
    ok2 = len(left2) == len(right2)
    seen2 = set()
    for m in left2:
        h = pi_transpose(f, x, y, m)
        back = pi_untranspose(f, x, y, h)
        ok2 &= back.map.table == m.map.table
        seen2.add(h.map.table)
    ok2 &= seen2 == {h.map.table for h in right2}
    lines.append(f"pullback/prod transposes round-trip: {'yes' if ok2 else 'NO'}")

    return Report("adjunction witness", bool(ok and ok2), tuple(lines))


# ---------------------------------------------------------------------------
# pullback squares: interchange of reindexing functors


@dataclass(frozen=True)
class PullbackSquare:
    """A commuting square

        P --top--> X
        |          |
      left       right
        v          v
        Y -bottom-> Z

    required to be a pullback (validated on construction)."""

    top: FinMap
    left: FinMap
    bottom: FinMap
    right: FinMap

    def __post_init__(self) -> None:
        if self.top.dom != self.left.dom:
            raise ShapeMismatch("square corner P: top/left domains differ")
        if self.top.cod != self.right.dom or self.left.cod != self.bottom.dom:
            raise ShapeMismatch("square edges do not meet")
        if self.bottom.cod != self.right.cod:
            raise ShapeMismatch("square corner Z: bottom/right codomains differ")
        if self.top.then(self.right).table != self.left.then(self.bottom).table:
            raise ValidationError("square does not commute")
        want = {(x, y) for x in range(self.right.dom.size) for y in range(self.bottom.dom.size)
                if self.right.table[x] == self.bottom.table[y]}
        got = [(self.top.table[p], self.left.table[p]) for p in range(self.top.dom.size)]
        if len(got) != len(set(got)) or set(got) != want:
            raise ValidationError("square is not a pullback")

    def corner_index(self) -> dict[tuple[int, int], int]:
        """(x, y) |-> the unique corner element over it."""
        return {
            (self.top.table[p], self.left.table[p]): p
            for p in range(self.top.dom.size)
        }


def square_from_cospan(f: FinMap, g: FinMap) -> PullbackSquare:
    """The canonical pullback square over the cospan f: X -> Z <- Y :g."""
    pb = finset.pullback(f, g)
    return PullbackSquare(top=pb.left, left=pb.right, bottom=g, right=f)


def _verify_bijection(total: int, images: list[int], target: int) -> bool:
    if total != target:
        return False
    marks = bytearray(target)
    for i in images:
        if marks[i]:
            return False
        marks[i] = 1
    return True


def beck_chevalley_check(square: PullbackSquare, z: Family) -> Report:
    """Build the canonical comparisons across a pullback square and verify
    both are isomorphisms of families over the top-right corner:

      prod_top pullback_left z  =  pullback_right prod_bottom z
      sum_top  pullback_left z  =  pullback_right sum_bottom  z
    """
    if z.base != square.bottom.dom:
        raise ShapeMismatch("family must live over the bottom-left corner")
    top, left, bottom, right = square.top, square.left, square.bottom, square.right
    corner = square.corner_index()
    lines = []

    # sum side: (p, t) |-> (top(p), t)
    lhs_pairs = delta_pairs(left, z)
    rhs_index = delta_index(right, sigma(bottom, z))
    images = [rhs_index[(top.table[p], t)] for p, t in lhs_pairs]
    ok_sum = _verify_bijection(len(lhs_pairs), images, len(rhs_index))
    lines.append(
        f"sum comparison: {len(lhs_pairs)} elements, bijection {'yes' if ok_sum else 'NO'}"
    )

    # product side: (x, section over top^-1(x)) |-> (x, section over bottom^-1(right x))
    dlz = delta(left, z)
    dl_pairs = delta_pairs(left, z)
    lhs_secs = pi_sections(top, dlz)
    pbz = pi(bottom, z)
    p_index = pi_index(bottom, z)
    rhs_index2 = delta_index(right, pbz)
    images2 = []
    for x, phi in lhs_secs:
        zb = right.table[x]
        section = []
        top_fiber = top.fiber(x)
        for y in bottom.fiber(zb):
            p = corner[(x, y)]
            position = top_fiber.index(p)
            section.append(dl_pairs[phi[position]][1])
        s = p_index[(zb, tuple(section))]
        images2.append(rhs_index2[(x, s)])
    ok_prod = _verify_bijection(len(lhs_secs), images2, len(rhs_index2))
    lines.append(
        f"product comparison: {len(lhs_secs)} elements, bijection {'yes' if ok_prod else 'NO'}"
    )
    return Report("pullback-square interchange", bool(ok_sum and ok_prod), tuple(lines))


# ---------------------------------------------------------------------------
# the distributivity square


@dataclass(frozen=True)
class DistributivitySquare:
    """The universal square distributing a dependent product over a
    dependent sum.

    Data for b: C -> B and a: B -> A2: the family of sections u: U -> A2
    (U enumerates pairs (t, section of b over a^-1(t))), the pullback W of
    a and u, its projections, and the evaluation map eps: W -> C sending
    (point of B, section) to the section's value at that point.
    """

    b: FinMap
    a: FinMap
    u: FinMap
    u_sections: tuple[tuple[int, tuple[int, ...]], ...]
    w_pairs: tuple[tuple[int, int], ...]
    a_prime: FinMap
    u_prime: FinMap
    eps: FinMap


def distributivity_square(a: FinMap, b: FinMap) -> DistributivitySquare:
    if b.cod != a.dom:
        raise ShapeMismatch("need composable maps: cod(b) = dom(a)")
    fam_b = Family(b.dom, b.cod, b)
    u_fam = pi(a, fam_b)
    u_secs = pi_sections(a, fam_b)
    pb = finset.pullback(a, u_fam.proj)
    eps_table = []
    for point, s in pb.pairs:
        t, section = u_secs[s]
        position = a.fiber(t).index(point)
        eps_table.append(section[position])
    eps = FinMap(pb.carrier, b.dom, tuple(eps_table))
    return DistributivitySquare(
        b=b,
        a=a,
        u=u_fam.proj,
        u_sections=u_secs,
        w_pairs=pb.pairs,
        a_prime=pb.right,
        u_prime=pb.left,
        eps=eps,
    )


def distributivity_check(a: FinMap, b: FinMap, x: Family) -> Report:
    """Verify, on x over dom(b), the canonical isomorphism

      prod_a (sum_b x)  =  sum_u prod_{a'} (pullback_eps x)

    where u, a', eps come from the distributivity square of (a, b)."""
    if x.base != b.dom:
        raise ShapeMismatch("family must live over dom(b)")
    sq = distributivity_square(a, b)
    lhs_secs = pi_sections(a, sigma(b, x))
    u_index = {sec: k for k, sec in enumerate(sq.u_sections)}
    dex = delta(sq.eps, x)
    dex_index = delta_index(sq.eps, x)
    w_index = {pair: k for k, pair in enumerate(sq.w_pairs)}
    rhs_secs = pi_sections(sq.a_prime, dex)
    rhs_index = {sec: k for k, sec in enumerate(rhs_secs)}

    images = []
    for t, phi in lhs_secs:
        points = a.fiber(t)
        sigma_section = tuple(x.proj.table[val] for val in phi)
        s = u_index[(t, sigma_section)]
        psi = []
        for position, point in enumerate(points):
            w = w_index[(point, s)]
            psi.append(dex_index[(w, phi[position])])
        # a'-fiber over s lists W-elements (point, s) by ascending point,
        # matching the order of `points`
        assert tuple(sq.w_pairs[w][0] for w in sq.a_prime.fiber(s)) == points
        images.append(rhs_index[(s, tuple(psi))])
    ok = _verify_bijection(len(lhs_secs), images, len(rhs_secs))
    lines = (
        f"section family size {len(sq.u_sections)}",
        f"both sides have {len(lhs_secs)} elements: "
        f"{'yes' if len(lhs_secs) == len(rhs_secs) else 'NO'}",
        f"canonical comparison bijective: {'yes' if ok else 'NO'}",
    )
    return Report("distributivity square", ok, lines)


# ---------------------------------------------------------------------------
# pointwise external constructions


def box(x: Family, y: Family) -> Family:
    """External product: the family over base1 x base2 whose fiber over a
    pair is the product of the fibers. Elements are the pairs (t1, t2),
    encoded as t1 * |total2| + t2."""
    prod_base = finset.product(x.base, y.base)
    n2 = y.total.size
    total = FinSet(x.total.size * n2)
    table = tuple(
        prod_base.pair(x.proj.table[k // n2], y.proj.table[k % n2])
        for k in range(total.size)
    )
    return Family(total, prod_base.carrier, FinMap(total, prod_base.carrier, table))


def box_pair(y: Family, t1: int, t2: int) -> int:
    return t1 * y.total.size + t2


def box_unpair(y: Family, k: int) -> tuple[int, int]:
    return divmod(k, y.total.size)


def box_morphism(h1: FamMorphism, h2: FamMorphism) -> FamMorphism:
    """External product of two family morphisms."""
    src = box(h1.src, h2.src)
    dst = box(h1.dst, h2.dst)
    n2 = h2.src.total.size
    table = tuple(
        box_pair(h2.dst, h1.map.table[k // n2], h2.map.table[k % n2])
        for k in range(src.total.size)
    )
    return FamMorphism(src, dst, FinMap(src.total, dst.total, table))


def family_sum(x: Family, y: Family) -> Family:
    """Disjoint union over the coproduct of the bases (left part first)."""
    cop_base = finset.coproduct(x.base, y.base)
    cop_total = finset.coproduct(x.total, y.total)
    proj = finset.copair(x.proj.then(cop_base.inl), y.proj.then(cop_base.inr), cop_total)
    return Family(cop_total.carrier, cop_base.carrier, proj)


def copower(a: FinSet, x: Family) -> Family:
    """Fiberwise product with a constant set: fiber over i becomes
    a x (fiber over i). Elements are pairs (j, t), j major."""
    total = FinSet(a.size * x.total.size)
    table = tuple(x.proj.table[k % x.total.size] for k in range(total.size))
    return Family(total, x.base, FinMap(total, x.base, table))


def tr_family(y: Family, z: Family) -> Family:
    """The two-variable hom family: over the product of the bases, the
    fiber over (i2, i3) is the full map space fiber(i2) -> fiber(i3).
    Use tr_elements for the decoding. Guarded."""
    elems = tr_elements(y, z)
    prod_base = finset.product(y.base, z.base)
    total = FinSet(len(elems))
    table = tuple(pair for pair, _ in elems)
    return Family(total, prod_base.carrier, FinMap(total, prod_base.carrier, table))


def tr_elements(y: Family, z: Family) -> tuple[tuple[int, tuple[int, ...]], ...]:
    """Pairs (base pair index, table): the table lists an absolute
    z-element for each element of the y-fiber (ascending), tables in
    lexicographic order."""
    prod_base = finset.product(y.base, z.base)
    count = 0
    ysizes, zsizes = y.fiber_sizes(), z.fiber_sizes()
    for i2 in range(y.base.size):
        for i3 in range(z.base.size):
            count += zsizes[i3] ** ysizes[i2]
    check_guard(count, "two-variable hom family")
    out: list[tuple[int, tuple[int, ...]]] = []
    for i2 in range(y.base.size):
        yfib = y.fiber(i2)
        for i3 in range(z.base.size):
            zfib = z.fiber(i3)
            for table in itertools.product(zfib, repeat=len(yfib)):
                out.append((prod_base.pair(i2, i3), table))
    return tuple(out)
