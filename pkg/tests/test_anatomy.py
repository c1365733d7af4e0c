import random

import pytest
from hypothesis import given, strategies as st

from fthreehalves.anatomy import (
    CENTIPEDE,
    HUMANOID,
    INVERSE,
    OTHER,
    SERPENT,
    STICKBUG,
    classify,
    flipped,
    humanoid_from_parts,
    is_in_family,
    make_humanoid,
    primed_stickbug,
    shift_middle,
    stickbug,
)
from fthreehalves.errors import DepthMismatch
from fthreehalves.exactnum import SixAdic
from fthreehalves.plmap import stickbug_map, support
from fthreehalves.treepair import TreePair, identity_pair, is_member, leaf_depths, multiply, parse_pair, parse_tree, random_member, random_tree, reduce

L_PAIR = parse_pair("(pair (3 (3 * * *) (2 * *) *) (3 (2 * *) (3 * * *) *))")


def test_generators_are_stick_bugs():
    a = classify(stickbug(0, "left"))
    assert (a.kind, a.stickbug_side, a.stickbug_n) == (STICKBUG, "left", 0)
    assert stickbug(0, "left") == L_PAIR
    b = classify(stickbug(0, "right"))
    assert (b.kind, b.stickbug_side, b.stickbug_n) == (STICKBUG, "right", 0)


def test_identity_is_other():
    assert classify(identity_pair()).kind == OTHER
    assert classify(TreePair(parse_tree("(2 * *)"), parse_tree("(2 * *)"))).kind == OTHER


@pytest.mark.parametrize("n", range(5))
@pytest.mark.parametrize("side", ["left", "right"])
def test_stick_bugs(n, side):
    p = stickbug(n, side)
    a = classify(p)
    assert (a.kind, a.stickbug_side, a.stickbug_n) == (STICKBUG, side, n)
    assert p.to_plmap() == stickbug_map(n, side)
    assert is_member(p)
    inv = classify(p.inverse())
    assert inv.kind == INVERSE and inv.family == STICKBUG and inv.inverse
    assert flipped(a) == inv


def test_stick_bug_breakpoints():
    f = stickbug(1, "left").to_plmap()
    S = SixAdic
    assert f.breakpoints() == [(S(2, 27), S(1, 9)), (S(1, 9), S(4, 27)), (S(2, 9), S(2, 9))]


@pytest.mark.parametrize("n", range(4))
def test_primed_stick_bugs_live_in_the_middle(n):
    for side in ("left", "right"):
        assert support(primed_stickbug(n, side).to_plmap()).within(SixAdic(1, 3), SixAdic(2, 3))


def test_minimal_humanoid_is_serpent_at_root():
    a = classify(make_humanoid(parse_tree("(3 * * *)"), 0, "23"))
    assert is_in_family(a, SERPENT) and a.kind == INVERSE and a.hip == ()
    assert a.family == STICKBUG  # this one is l⁻¹
    b = classify(make_humanoid(parse_tree("(2 * *)"), 0, "32"))
    assert b.kind == SERPENT and b.hip_arity == 2


def test_depth_mismatch():
    with pytest.raises(DepthMismatch):
        make_humanoid(parse_tree("(2 (2 * *) *)"), 1)
    with pytest.raises(IndexError):
        make_humanoid(parse_tree("(2 * *)"), 1)


def test_family_order():
    a = classify(stickbug(2, "left"))
    assert all(is_in_family(a, f) for f in (STICKBUG, CENTIPEDE, SERPENT, HUMANOID))
    h = classify(humanoid_from_parts((2,), (1,), 3, 0, (2,), (3,)))
    assert h.kind == HUMANOID and h.leg_length == 1 and not h.symmetric
    assert not is_in_family(h, SERPENT)


def test_parts_from_humanoid_constructor():
    h = humanoid_from_parts((3, 2), (1, 0), 2, 0, (3, 2), (3, 2), feet=(2, 3))
    a = classify(h)
    assert a.kind == INVERSE and a.family == HUMANOID
    assert a.torso_arities == (3, 2) and a.hip == (1, 0) and a.hip_arity == 2
    assert a.leg_arities == ((3, 2), (3, 2)) and a.symmetric


def test_anatomy_json():
    j = classify(stickbug(2, "right")).to_json()
    assert j["kind"] == STICKBUG and j["stickbug_side"] == "right" and j["stickbug_n"] == 2
    assert classify(identity_pair()).to_json() == {"kind": OTHER}


@st.composite
def humanoid_inputs(draw):
    rng = random.Random(draw(st.integers(0, 10**9)))
    while True:
        t = random_tree(rng, 4, 0.6)
        ds = leaf_depths(t)
        spots = [i for i in range(len(ds) - 1) if ds[i] == ds[i + 1]]
        if spots:
            return t, rng.choice(spots), rng.choice(["23", "32"])


@given(humanoid_inputs())
def test_constructed_humanoids_classify(args):
    t, i, o = args
    h = make_humanoid(t, i, o)
    assert is_member(h) and not h.to_plmap().is_identity()
    a = classify(h)
    assert a.family is not None and (a.kind == INVERSE) == (o == "23")
    assert classify(reduce(h)) == a


@st.composite
def pairs(draw):
    return random_member(random.Random(draw(st.integers(0, 10**9))), max_depth=3)


@given(pairs(), pairs())
def test_shift_is_a_homomorphism(p, q):
    lhs = shift_middle(multiply(p, q)).to_plmap()
    rhs = multiply(shift_middle(p), shift_middle(q)).to_plmap()
    assert lhs == rhs
    f = shift_middle(p).to_plmap()
    assert support(f).within(SixAdic(1, 3), SixAdic(2, 3))


def test_shift_of_identity():
    assert shift_middle(identity_pair()).to_plmap().is_identity()
