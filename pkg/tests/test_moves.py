import random

import pytest
from hypothesis import given, strategies as st

from fthreehalves.anatomy import HUMANOID, SERPENT, classify, humanoid_from_parts, is_in_family, stickbug
from fthreehalves.errors import LegsAsymmetric, LegsSymmetric, LegsTooShort, NothingToSwap, NotBalanced, PatternMismatch
from fthreehalves.moves import (
    RULE_GROUPS,
    CaretPath,
    bottom_row,
    leg_asym_serpent,
    leg_cut_conjugator,
    lower_hip,
    make_legs_asymmetric,
    move_2332,
    permute_bottom_carets,
    product_map,
    rule,
    rule_table,
    torsos,
    verify_rules,
)
from fthreehalves.plmap import compose
from fthreehalves.treepair import TreePair, balance, boundaries, depth, parse_tree, random_member, reduce

T = parse_tree


def test_move_2332_round_trip_and_boundaries():
    t = T("(2 (3 * * *) (3 * * *))")
    down = move_2332(t, CaretPath(()), "down")
    assert down == T("(3 (2 * *) (2 * *) (2 * *))")
    assert [str(b) for b in boundaries(down)] == [str(b) for b in boundaries(t)]
    assert sorted(str(b) for b in boundaries(t)) == ["1/2", "1/3", "1/6", "2/3", "5/6"]
    assert move_2332(down, (), "up") == t
    with pytest.raises(PatternMismatch):
        move_2332(t, (), "up")


def test_move_2332_keeps_the_element():
    p = TreePair(T("(3 * (2 (3 * * *) (3 * * *)) *)"), T("(2 (2 (3 * * *) (3 * * *)) (2 * *))"))
    q = TreePair(move_2332(p.domain, (1,), "down"), move_2332(p.range, (0,), "down"), check=False)
    assert q.to_plmap() == p.to_plmap()


SWAP_RESULT = TreePair(
    T("(3 (3 (2 * *) (3 * * *) (3 * * *)) (2 (2 * *) (2 * *)) (2 (2 * *) (2 * *)))"),
    T("(2 (3 (3 * * *) (2 * *) (3 * * *)) (3 (3 * * *) (2 * *) (3 * * *)))"),
)
SWAP_FACTOR = TreePair(T("(3 (3 * * (3 * * *)) (2 (2 * *) *) (2 * *))"), T("(3 (3 * * (2 * *)) (2 (3 * * *) *) (2 * *))"))
SWAP_REST = TreePair(
    T("(3 (3 (2 * *) (3 * * *) (2 * *)) (2 (3 * * *) (2 * *)) (2 (2 * *) (2 * *)))"),
    SWAP_RESULT.range,
)


def test_permute_bottom_carets_worked_example():
    factor, rest = permute_bottom_carets(SWAP_RESULT, "domain", 2)
    assert factor == reduce(SWAP_FACTOR)
    assert rest == SWAP_REST
    assert compose(factor.to_plmap(), rest.to_plmap()) == SWAP_RESULT.to_plmap()
    assert classify(factor).kind == HUMANOID or is_in_family(classify(factor), HUMANOID)


def test_permute_bottom_carets_errors():
    with pytest.raises(NothingToSwap):
        permute_bottom_carets(SWAP_RESULT, "domain", 3)
    with pytest.raises(NotBalanced):
        bottom_row(T("(2 (3 * * *) *)"))


@st.composite
def balanced_pairs(draw):
    rng = random.Random(draw(st.integers(0, 10**9)))
    while True:
        p = balance(random_member(rng, max_depth=3))
        for side in ("domain", "range"):
            t = getattr(p, side)
            rows = bottom_row(t)
            ar = [len(_at(t, c)) for c in rows]
            spots = [i for i in range(len(ar) - 1) if ar[i] != ar[i + 1]]
            if spots:
                return p, side, rng.choice(spots)


def _at(t, path):
    for s in path:
        t = t[s]
    return t


@given(balanced_pairs())
def test_permute_bottom_carets_factorizes(args):
    p, side, i = args
    factor, rest = permute_bottom_carets(p, side, i)
    assert is_in_family(classify(factor), HUMANOID)
    parts = (factor, rest) if side == "domain" else (rest, factor)
    assert compose(parts[0].to_plmap(), parts[1].to_plmap()) == p.to_plmap()


HIP_H = TreePair(
    T("(2 (3 * (3 * * (3 (3 * * (2 * (3 * * (3 * * *)))) (2 (2 (3 (2 * *) * *) *) *) *)) *) *)"),
    T("(2 (3 * (3 * * (3 (3 * * (2 * (3 * * (2 * *)))) (2 (2 (3 (3 * * *) * *) *) *) *)) *) *)"),
)
HIP_C = TreePair(T("(2 (3 * (3 * * (3 (2 * *) (3 * * *) *)) *) *)"), T("(2 (3 * (3 * * (3 (3 * * *) (2 * *) *)) *) *)"))
HIP_LOWERED = TreePair(
    T("(2 (3 * (3 * * (3 * (3 (2 * (3 * * (3 * * *))) (2 (3 (2 * *) * *) *) *) *)) *) *)"),
    T("(2 (3 * (3 * * (3 * (3 (2 * (3 * * (2 * *))) (2 (3 (3 * * *) * *) *) *) *)) *) *)"),
)
ASYM_S = TreePair(T("(2 (3 * (3 * * (3 * (3 (2 (3 * * *) (2 * *)) * *) *)) *) *)"), T("(2 (3 * (3 * * (3 * (3 (2 (2 * *) (3 * * *)) * *) *)) *) *)"))
ASYM_RESULT = TreePair(
    T("(2 (3 * (3 * * (3 * (3 (2 * (2 * (3 * * *))) (2 (3 (2 * *) * *) *) *) *)) *) *)"),
    T("(2 (3 * (3 * * (3 * (3 (2 * (2 * (2 * *))) (2 (3 (3 * * *) * *) *) *) *)) *) *)"),
)


def test_lower_hip_worked_example():
    c, h2 = lower_hip(HIP_H)
    assert c == HIP_C == leg_cut_conjugator(HIP_H)
    assert reduce(h2) == HIP_LOWERED
    assert depth(c.domain) < HIP_H.depth()
    a, b = classify(HIP_H), classify(h2)
    assert len(b.hip) > len(a.hip) and b.leg_length < a.leg_length


def test_make_legs_asymmetric_worked_example():
    s, h2 = make_legs_asymmetric(HIP_LOWERED)
    assert reduce(s) == ASYM_S
    assert classify(s).family == SERPENT
    assert reduce(h2) == ASYM_RESULT
    a, b = classify(HIP_LOWERED), classify(h2)
    assert a.symmetric and not b.symmetric
    assert (b.leg_length, h2.depth()) == (a.leg_length, HIP_LOWERED.depth())


def test_leg_move_errors():
    sym = humanoid_from_parts((), (), 3, 0, (2, 3), (2, 3))
    with pytest.raises(LegsSymmetric):
        leg_cut_conjugator(sym)
    with pytest.raises(LegsAsymmetric):
        leg_asym_serpent(humanoid_from_parts((), (), 3, 0, (2, 3), (3, 3)))
    with pytest.raises(LegsTooShort):
        leg_asym_serpent(humanoid_from_parts((), (), 3, 0, (2,), (2,)))


@st.composite
def legged(draw, symmetric):
    legs = draw(st.integers(1 if not symmetric else 2, 3))
    left = tuple(draw(st.sampled_from((2, 3))) for _ in range(legs))
    right = left if symmetric else tuple(draw(st.sampled_from((2, 3))) for _ in range(legs))
    if not symmetric and left == right:
        right = right[:-1] + (5 - right[-1],)
    hip = draw(st.sampled_from((2, 3)))
    child = draw(st.integers(0, hip - 2))
    ar = tuple(draw(st.sampled_from((2, 3))) for _ in range(draw(st.integers(0, 2))))
    steps = tuple(draw(st.integers(0, a - 1)) for a in ar)
    feet = draw(st.sampled_from([(3, 2), (2, 3)]))
    return humanoid_from_parts(ar, steps, hip, child, left, right, feet)


@given(legged(symmetric=False))
def test_lower_hip_shrinks(h):
    c, h2 = lower_hip(h)
    assert compose(compose(c.inverse().to_plmap(), h2.to_plmap()), c.to_plmap()) == h.to_plmap()
    a, b = classify(h), classify(h2)
    assert is_in_family(b, HUMANOID)
    assert (h2.depth(), b.leg_length) < (h.depth(), a.leg_length) or b.leg_length < a.leg_length
    assert depth(reduce(c).domain) < h.depth()


@given(legged(symmetric=True))
def test_asymmetric_legs_keep_size(h):
    s, h2 = make_legs_asymmetric(h)
    assert is_in_family(classify(s), SERPENT)
    assert compose(compose(s.inverse().to_plmap(), h2.to_plmap()), s.to_plmap()) == h.to_plmap()
    a, b = classify(h), classify(h2)
    assert not b.symmetric and b.leg_length == a.leg_length and reduce(h2).depth() == reduce(h).depth()


def test_rule_groups_and_lookup():
    assert RULE_GROUPS == (
        "legged_humanoids",
        "serpent_hip",
        "centipede_2caret",
        "middle_conjugations",
        "mixed_conjugations",
        "last_centipedes",
    )
    assert [r.name for r in rule_table("serpent_hip")] == ["two_caret_hip"]
    with pytest.raises(ValueError):
        rule_table("nope")


def test_two_caret_hip_rule():
    lhs, rhs = rule("serpent_hip", "two_caret_hip").instantiate()
    assert lhs.domain == T("(2 (3 * * *) (2 * *))") and lhs.range == T("(2 (2 * *) (3 * * *))")
    assert len(rhs) == 2
    for p, e in rhs:
        a = classify(p)
        assert a.family is not None and a.hip_arity == 3 and e == 1
    assert product_map(rhs) == lhs.to_plmap()


def test_quasi_stick_bug_rule():
    lhs, rhs = rule("last_centipedes", "quasi_left").instantiate(n=1)
    l1, l = stickbug(1, "left"), stickbug(0, "left")
    assert list(rhs) == [(l1, -1), (l, -1), (l1, 1), (l, 1)]
    a = classify(lhs)
    assert a.hip == (0,) and a.foot_children == (1, 2)
    assert product_map(rhs) == lhs.to_plmap()


def test_rules_under_small_torsos():
    report = verify_rules(max_torso_depth=1)
    assert len(report) == 17
    assert all(err is None and count > 0 for *_, count, err in report)
    assert len(list(torsos(1))) == 1 + 2 + 3
