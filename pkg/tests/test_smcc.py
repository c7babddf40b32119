"""Tests for the tensor's comparison map and universal property, the
currying adjunction, the coend oracle, the truncated exponential
identity, and double dualization."""
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polycat import fam, nat, poly, randgen, smcc
from polycat.errors import (
    OracleNotNatural,
    ShapeMismatch,
    SizeGuardExceeded,
    ValidationError,
)
from polycat.finset import FinMap, FinSet

ss = poly.single_sorted


def fams(n, sizes):
    return fam.family_from_fibers(FinSet(n), sizes)


def fmap(a, b, table):
    return FinMap(FinSet(a), FinSet(b), tuple(table))


# ---------------------------------------------------------------------------
# the comparison map


def test_epsilon_single_direction_shapes_is_iso():
    x = fams(1, [2])
    y = fams(1, [2])
    e = smcc.epsilon(ss((1,)), ss((1,)), x, y)
    assert e.src.total.size == 4
    assert e.dst.total.size == 4
    assert e.is_iso()


def test_epsilon_frozen_table():
    # first operand X, second 1 + X, |x| = 2, |y| = 1: the two pairs with
    # the constant right shape collapse
    e = smcc.epsilon(ss((1,)), ss((0, 1)), fams(1, [2]), fams(1, [1]))
    assert e.map.table == (0, 1, 0, 2)


def test_epsilon_collapses_at_constant_operand():
    # X (x) 1 has an empty direction fiber, so the payload forgets x
    e = smcc.epsilon(ss((1,)), ss((0,)), fams(1, [2]), fams(1, [1]))
    assert e.map.table == (0, 0)
    assert not e.is_iso()


def test_epsilon_injective_but_not_surjective_on_squares():
    # value pairs hit only the rectangular payloads of X^2 (x) X^2
    e = smcc.epsilon(ss((2,)), ss((2,)), fams(1, [2]), fams(1, [2]))
    assert e.src.total.size == 16
    assert e.dst.total.size == 256
    assert len(set(e.map.table)) == 16


def test_epsilon_empty_right_family():
    e = smcc.epsilon(ss((1,)), ss((1,)), fams(1, [2]), fams(1, [0]))
    assert e.src.total.size == 0
    assert e.dst.total.size == 0


def test_epsilon_base_mismatch():
    with pytest.raises(ShapeMismatch):
        smcc.epsilon(ss((1,)), ss((1,)), fams(2, [1, 1]), fams(1, [1]))


def test_epsilon_natural_at_bound_two():
    rep = smcc.epsilon_naturality_check(ss((1, 0)), ss((2,)), 2)
    assert rep.ok
    assert "121 squares" in rep.lines[0]


def test_epsilon_naturality_multi_sorted():
    src = FinSet(2)
    p1 = poly.PolyDiagram(src, FinSet(2), FinSet(2), src,
                          fmap(2, 2, (1, 0)), fmap(2, 2, (0, 1)),
                          fmap(2, 2, (0, 1)))
    rep = smcc.epsilon_naturality_check(p1, ss((1,)), 1)
    assert rep.ok


# ---------------------------------------------------------------------------
# the mediating transformation


def _eps_oracle(p1, p2):
    return lambda x, y: smcc.epsilon(p1, p2, x, y)


def test_theta_of_epsilon_is_identity():
    p1, p2 = ss((1, 0)), ss((2,))
    tens = poly.tensor(p1, p2)
    r = fam.box(fams(1, [2]), fams(1, [1]))
    med = smcc.theta(_eps_oracle(p1, p2), p1, p2, tens, r)
    assert med.map.table == fam.identity_morphism(
        poly.eval_extension(tens, r)).map.table


def test_theta_check_on_epsilon():
    p1, p2 = ss((1, 0)), ss((2,))
    rep = smcc.theta_check(p1, p2, poly.tensor(p1, p2), _eps_oracle(p1, p2),
                           candidate_limit=50)
    assert rep.ok
    assert "1 of 5 candidate transformations" in rep.lines[1]


def test_theta_recovers_container_morphism():
    # rho built from a known container morphism factors back through it
    p1, p2 = ss((1,)), ss((2,))
    tens = poly.tensor(p1, p2)
    target = ss((1, 1))
    members = nat.enumerate_dm(tens, target)
    assert len(members) == 4
    m = members[2]

    def rho(x, y):
        bx = fam.box(x, y)
        return smcc.epsilon(p1, p2, x, y).then(nat.eval_dm(m, bx))

    for sizes in ([1], [2], [3]):
        r = fam.box(fams(1, sizes), fams(1, [2]))
        med = smcc.theta(rho, p1, p2, target, r)
        assert med.map.table == nat.eval_dm(m, r).map.table


def test_theta_check_uniqueness_for_derived_rho():
    p1, p2 = ss((1,)), ss((2,))
    tens = poly.tensor(p1, p2)
    target = ss((1, 1))
    m = nat.enumerate_dm(tens, target)[0]

    def rho(x, y):
        return smcc.epsilon(p1, p2, x, y).then(nat.eval_dm(m, fam.box(x, y)))

    rep = smcc.theta_check(p1, p2, target, rho, candidate_limit=8)
    assert rep.ok
    assert "1 of 4 candidate transformations" in rep.lines[1]


def test_theta_rejects_unnatural_oracle():
    p1 = p2 = ss((1,))
    tens = poly.tensor(p1, p2)

    def rho(x, y):
        e = smcc.epsilon(p1, p2, x, y)
        t = list(e.map.table)
        if x.total.size == 2 and len(t) >= 2:
            # swap two elements only at this size
            t[0], t[1] = t[1], t[0]
            e = fam.FamMorphism(e.src, e.dst, FinMap(e.map.dom, e.map.cod,
                                                     tuple(t)))
        return e

    with pytest.raises(OracleNotNatural, match="rho not natural"):
        smcc.theta(rho, p1, p2, tens, fam.box(fams(1, [2]), fams(1, [1])))


def test_theta_rejects_wrong_endpoints():
    # the generic probe of X^2 has two elements, so an identity oracle
    # cannot have the comparison endpoints
    p1, p2 = ss((2,)), ss((1,))
    tens = poly.tensor(p1, p2)

    def rho(x, y):
        return fam.identity_morphism(x)

    with pytest.raises(ValidationError):
        smcc.theta(rho, p1, p2, tens, fam.box(fams(1, [1]), fams(1, [1])),
                   check_naturality=False)


def test_theta_family_base_mismatch():
    p1 = p2 = ss((1,))
    with pytest.raises(ShapeMismatch):
        smcc.theta(_eps_oracle(p1, p2), p1, p2, poly.tensor(p1, p2),
                   fams(2, [1, 1]))


# ---------------------------------------------------------------------------
# the currying adjunction


def test_adjunction_identity_case():
    rep = smcc.adjunction_count_check(ss((1,)), ss((1,)), ss((1,)))
    assert rep.ok
    assert "transformations out of the tensor: 1" in rep.lines[0]


def test_adjunction_frozen_four():
    # out of X (x) X^2 there are 4 transformations to 2X, and the internal
    # hom [X^2, 2X] is 4X, receiving 4 from X
    rep = smcc.adjunction_count_check(ss((1,)), ss((2,)), ss((1, 1)))
    assert rep.ok
    assert "transformations out of the tensor: 4; into the internal hom: 4" \
        == rep.lines[0]
    assert "currying round trips on 4 + 4 members: yes" in rep.lines[1]
    hom = poly.hom_single_sorted(ss((2,)), ss((1, 1)))
    assert poly.notation(hom) == "4X"


def test_adjunction_with_constants():
    rep = smcc.adjunction_count_check(ss((2,)), ss((1,)), ss((1, 0)))
    assert rep.ok
    assert "transformations out of the tensor: 3" in rep.lines[0]


def test_curry_round_trip_explicit():
    p1, p2, p3 = ss((2,)), ss((1, 0)), ss((1, 1))
    tens = poly.tensor(p1, p2)
    for m in nat.enumerate_dm(tens, p3):
        c = smcc.curry_dm(m, p1, p2, p3)
        assert c.src == p1
        assert c.dst == poly.hom_single_sorted(p2, p3)
        assert smcc.uncurry_dm(c, p1, p2, p3) == m


def test_uncurry_round_trip_explicit():
    p1, p2, p3 = ss((1, 1)), ss((1,)), ss((2,))
    hom = poly.hom_single_sorted(p2, p3)
    for m in nat.enumerate_dm(p1, hom):
        u = smcc.uncurry_dm(m, p1, p2, p3)
        assert u.src == poly.tensor(p1, p2)
        assert u.dst == p3
        assert smcc.curry_dm(u, p1, p2, p3) == m


def test_curry_rejects_wrong_endpoints():
    # X (x) X coincides with X on the nose, so mismatch the codomain
    p1, p2 = ss((1,)), ss((1,))
    m = poly.identity_dm(p1)
    with pytest.raises(ShapeMismatch):
        smcc.curry_dm(m, p1, p2, ss((2,)))
    with pytest.raises(ShapeMismatch):
        smcc.uncurry_dm(m, p1, p2, ss((2,)))


def test_adjunction_random_grid():
    rng = random.Random(20260819)
    one = FinSet(1)
    agreed = 0
    for _ in range(60):
        p1 = randgen.random_diagram(rng, one, one, max_shapes=2, max_fiber=2)
        p2 = randgen.random_diagram(rng, one, one, max_shapes=2, max_fiber=2)
        p3 = randgen.random_diagram(rng, one, one, max_shapes=2, max_fiber=2)
        try:
            rep = smcc.adjunction_count_check(p1, p2, p3)
        except SizeGuardExceeded:
            continue
        assert rep.ok, (poly.notation(p1), poly.notation(p2),
                        poly.notation(p3), rep.lines)
        agreed += 1
    assert agreed >= 40


def test_adjunction_large_counts_skip_round_trip():
    rep = smcc.adjunction_count_check(ss((2, 2)), ss((2, 2)), ss((2, 2)),
                                      roundtrip_limit=16)
    assert rep.ok
    assert "bijection not enumerated" in rep.lines[-1]


# ---------------------------------------------------------------------------
# the coend oracle


def test_rectangles_decode_tensor_elements():
    rects = smcc.rectangle_decomposition(ss((1,)), ss((2,)), fams(1, [2]))
    assert len(rects) == 4
    assert all(r.left_size == 1 and r.right_size == 2 for r in rects)
    assert [r.pairing for r in rects] == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_day_oracle_exact_two_classes():
    rep = smcc.day_coend_oracle(ss((1,)), ss((1,)), fams(1, [2]), 2)
    assert rep.ok
    assert "mode: exact union-find over all tuples" in rep.lines
    assert "equivalence classes: 2; extension elements: 2" in rep.lines


def test_day_oracle_exact_constant_operand():
    # a constant left operand leaves one class per shape pair
    rep = smcc.day_coend_oracle(ss((0,)), ss((1,)), fams(1, [2]), 1)
    assert rep.ok
    assert "equivalence classes: 1; extension elements: 1" in rep.lines


def test_day_oracle_empty_family():
    rep = smcc.day_coend_oracle(ss((1,)), ss((1,)), fams(1, [0]), 1)
    assert rep.ok
    assert "equivalence classes: 0; extension elements: 0" in rep.lines


def test_day_oracle_exact_asymmetric():
    rep = smcc.day_coend_oracle(ss((1,)), ss((2,)), fams(1, [1]), 2)
    assert rep.ok
    assert "equivalence classes: 1; extension elements: 1" in rep.lines


def test_day_oracle_sampled_mode_large_case():
    rep = smcc.day_coend_oracle(ss((2, 1)), ss((2, 0)), fams(1, [2]), 4)
    assert rep.ok
    assert "mode: factorization with sampled relation checks" in rep.lines
    assert any("canonical rectangles: 22" in l for l in rep.lines)


def test_day_oracle_sampled_deterministic():
    a = smcc.day_coend_oracle(ss((2, 2)), ss((2, 2)), fams(1, [2]), 4)
    b = smcc.day_coend_oracle(ss((2, 2)), ss((2, 2)), fams(1, [2]), 4)
    assert a.ok and a.lines == b.lines
    c = smcc.day_coend_oracle(ss((2, 2)), ss((2, 2)), fams(1, [2]), 4, seed=7)
    assert c.ok


def test_day_oracle_skeleton_too_small():
    with pytest.raises(ValidationError, match="skeleton"):
        smcc.day_coend_oracle(ss((2,)), ss((1,)), fams(1, [1]), 1)


def test_day_oracle_single_sorted_only():
    src = FinSet(2)
    p = poly.PolyDiagram(src, FinSet(0), FinSet(1), src,
                         FinMap(FinSet(0), src, ()),
                         FinMap(FinSet(0), FinSet(1), ()),
                         fmap(1, 2, (0,)))
    with pytest.raises(ValidationError):
        smcc.day_coend_oracle(p, ss((1,)), fams(1, [1]), 1)


def test_day_oracle_wrong_base():
    with pytest.raises(ShapeMismatch):
        smcc.day_coend_oracle(ss((1,)), ss((1,)), fams(2, [1, 1]), 1)


@settings(max_examples=20, deadline=None)
@given(d1=st.integers(0, 2), d2=st.integers(0, 2), n=st.integers(0, 2))
def test_day_oracle_exact_matches_monomials(d1, d2, n):
    # X^d1 (x) X^d2 evaluated at an n-element set has n^(d1*d2) elements
    rep = smcc.day_coend_oracle(ss((d1,)), ss((d2,)), fams(1, [n]),
                                max(d1, d2, 1))
    assert rep.ok
    assert f"extension elements: {n ** (d1 * d2)}" in " ".join(rep.lines)


# ---------------------------------------------------------------------------
# the truncated exponential identity


def test_bang_extension_depth_zero():
    rep = smcc.bang_extension_check(ss((2,)), fams(1, [2]), 0)
    assert rep.ok
    assert "(1,) vs (1,)" in rep.lines[0]


def test_bang_extension_frozen_identity_functor():
    rep = smcc.bang_extension_check(ss((1,)), fams(1, [2]), 2)
    assert rep.ok
    assert "(1, 2, 4) vs (1, 2, 4)" in rep.lines[0]


def test_bang_extension_two_shapes_singleton_family():
    # both pipelines count 4 at the doubleton multiset: the four length-2
    # shape lists
    rep = smcc.bang_extension_check(ss((1, 1)), fams(1, [1]), 2)
    assert rep.ok
    assert "(1, 2, 4) vs (1, 2, 4)" in rep.lines[0]


def test_bang_extension_two_sorted_endo():
    src = FinSet(2)
    p = poly.PolyDiagram(src, FinSet(2), FinSet(2), src,
                         fmap(2, 2, (1, 0)), fmap(2, 2, (0, 1)),
                         fmap(2, 2, (0, 1)))
    rep = smcc.bang_extension_check(p, fams(2, [2, 1]), 2)
    assert rep.ok
    assert "(1, 1, 2, 1, 4, 4) vs (1, 1, 2, 1, 4, 4)" in rep.lines[0]


def test_bang_extension_mixed_arity_and_empty_family():
    # X + 1 at the empty family: the diagram side counts empty-fiber
    # shape lists, which the naive product-of-values reading misses
    rep = smcc.bang_extension_check(ss((1, 0)), fams(1, [0]), 2)
    assert rep.ok
    assert "(1, 1, 3) vs (1, 1, 3)" in rep.lines[0]
    rep = smcc.bang_extension_check(ss((1, 0)), fams(1, [2]), 2)
    assert rep.ok
    assert "(1, 3, 7) vs (1, 3, 7)" in rep.lines[0]


def test_bang_extension_square_functor():
    # X^2 at |x| = 2, depth 2: the doubleton-multiset block is the Day
    # square with 4 directions, giving 4^4 payloads, not (2^2)^2
    rep = smcc.bang_extension_check(ss((2,)), fams(1, [2]), 2)
    assert rep.ok
    assert "(1, 4, 256) vs (1, 4, 256)" in rep.lines[0]


def test_bang_extension_small_grid():
    rng = random.Random(5)
    one = FinSet(1)
    for _ in range(12):
        p = randgen.random_diagram(rng, one, one, max_shapes=2, max_fiber=2)
        x = randgen.random_family(rng, one, max_fiber=2)
        for k in range(3):
            rep = smcc.bang_extension_check(p, x, k)
            assert rep.ok, (poly.notation(p), x.fiber_sizes(), k, rep.lines)


def test_bang_extension_arithmetic_mode_on_huge_carrier():
    # 2X^2 at |x| = 2, depth 3: 134 million elements at the triple
    # multiset, equal on both sides, never materialized
    rep = smcc.bang_extension_check(ss((2, 2)), fams(1, [2]), 3)
    assert rep.ok
    assert "(1, 8, 1024, 134217728) vs (1, 8, 1024, 134217728)" in rep.lines[0]
    assert "compared arithmetically only" in rep.lines[1]


def test_bang_extension_rejects_non_endo():
    r = fam.Span(FinSet(2), fmap(2, 1, (0, 0)), fmap(2, 2, (0, 1)))
    p = poly.au_lift(r)
    with pytest.raises(ValidationError):
        smcc.bang_extension_check(p, fams(1, [1]), 1)


def test_bang_extension_wrong_base():
    with pytest.raises(ShapeMismatch):
        smcc.bang_extension_check(ss((1,)), fams(2, [1, 1]), 1)


# ---------------------------------------------------------------------------
# double dualization


def test_double_dual_identity_functor():
    rep = smcc.double_dual_report(1, 1)
    assert rep.ok
    assert rep.lines[-1] == "X vs X : ISO"


def test_double_dual_frozen_counterexample():
    rep = smcc.double_dual_report(2, 2)
    assert rep.ok
    assert rep.lines[0] == "diagram: 2X^2"
    assert rep.lines[-1] == "2X^2 vs 16X^4 : NOT ISO"


def test_double_dual_degenerate_isos():
    rep = smcc.double_dual_report(2, 1)
    assert rep.ok
    assert rep.lines[-1] == "2X vs 2X : ISO"
    rep = smcc.double_dual_report(1, 2)
    assert rep.ok
    assert rep.lines[-1] == "X^2 vs X^2 : ISO"


def test_double_dual_empty_sum():
    rep = smcc.double_dual_report(0, 0)
    assert rep.ok
    assert " : ISO" in rep.lines[-1]


def test_double_dual_rejects_negative():
    with pytest.raises(ValidationError):
        smcc.double_dual_report(-1, 2)
