"""Humanoids, serpents, centipedes and stick bugs.

A humanoid is built from a tree ``T`` and two consecutive leaves of ``T`` at
equal depth: the domain hangs a 3-caret and a 2-caret from those leaves and
the range hangs them the other way round.  After cancelling the carets the
two trees share, what is left is the path from the root to the *hip* (the
lowest caret of ``T`` above both leaves), the *legs* running from the hip
down to each leaf and the two *feet*.

The families nest: a serpent has no legs, a centipede is a serpent built
only from 3-carets, and a stick bug is a centipede whose path runs down the
leftmost (or rightmost) stem with its feet on the two extreme stems of the
hip.  Diagrams whose domain feet read (2, 3) instead of (3, 2) are the
inverses of family members and are reported as such.
"""

from dataclasses import dataclass, field, replace

from .errors import DepthMismatch
from .treepair import (
    LEAF,
    TreePair,
    _bottom_carets,
    _collapse,
    _graft,
    _tree_along,
    leaf_count,
    leaf_depths,
    leaf_paths,
    reduce,
    subtree_at,
    tree_to_sexpr,
)

__all__ = [
    "Anatomy",
    "HUMANOID",
    "SERPENT",
    "CENTIPEDE",
    "STICKBUG",
    "INVERSE",
    "OTHER",
    "classify",
    "make_humanoid",
    "humanoid_from_parts",
    "stickbug",
    "primed_stickbug",
    "shift_middle",
]

HUMANOID = "Humanoid"
SERPENT = "Serpent"
CENTIPEDE = "Centipede"
STICKBUG = "StickBug"
INVERSE = "InverseOfFamily"
OTHER = "Other"

# most specific first
_RANK = {STICKBUG: 0, CENTIPEDE: 1, SERPENT: 2, HUMANOID: 3}

_FOOT = {2: (LEAF, LEAF), 3: (LEAF, LEAF, LEAF)}


@dataclass(frozen=True)
class Anatomy:
    """Where the parts of a family diagram sit.

    Paths are child-index tuples from the root.  ``torso`` lists the carets
    above the hip as ``(path, arity)`` from the top down, and each entry of
    ``legs`` lists the carets from just below the hip down to the foot.
    ``feet`` gives the domain arities of the two feet, so ``(3, 2)`` is the
    family orientation and ``(2, 3)`` the inverse one.
    """

    kind: str
    family: str | None = None
    tree: tuple | None = field(default=None, repr=False)
    hip: tuple = ()
    hip_arity: int | None = None
    torso: tuple = ()
    legs: tuple = ((), ())
    feet: tuple | None = None
    foot_leaf_index: int | None = None
    stickbug_side: str | None = None
    stickbug_n: int | None = None

    @property
    def inverse(self):
        return self.kind == INVERSE

    @property
    def foot_children(self):
        """Child indices of the hip holding the left and right leg (or foot)."""
        paths = leaf_paths(self.tree)
        k = len(self.hip)
        return paths[self.foot_leaf_index][k], paths[self.foot_leaf_index + 1][k]

    @property
    def leg_arities(self):
        return tuple(a for _, a in self.legs[0]), tuple(a for _, a in self.legs[1])

    @property
    def leg_length(self):
        return len(self.legs[0])

    @property
    def symmetric(self):
        left, right = self.leg_arities
        return left == right

    @property
    def torso_arities(self):
        return tuple(a for _, a in self.torso)

    def to_json(self):
        out = {"kind": self.kind}
        if self.kind == OTHER:
            return out
        out.update(
            family=self.family,
            inverse=self.inverse,
            tree=tree_to_sexpr(self.tree),
            hip=list(self.hip),
            hip_arity=self.hip_arity,
            torso=[[list(p), a] for p, a in self.torso],
            legs=[[[list(p), a] for p, a in leg] for leg in self.legs],
            feet=list(self.feet),
            foot_leaf_index=self.foot_leaf_index,
        )
        if self.stickbug_side is not None:
            out["stickbug_side"] = self.stickbug_side
            out["stickbug_n"] = self.stickbug_n
        return out


def _with_feet(t, i, a, b):
    fill = [LEAF] * leaf_count(t)
    fill[i], fill[i + 1] = _FOOT[a], _FOOT[b]
    return _graft(t, fill)


def _describe(t, i, feet):
    paths = leaf_paths(t)
    a, b = paths[i], paths[i + 1]
    k = 0
    while a[k] == b[k]:
        k += 1
    hip = a[:k]
    hip_arity = len(subtree_at(t, hip))
    torso = tuple((hip[:m], len(subtree_at(t, hip[:m]))) for m in range(k))
    legs = tuple(
        tuple((p[:m], len(subtree_at(t, p[:m]))) for m in range(k + 1, len(p))) for p in (a, b)
    )
    if legs[0]:
        family = HUMANOID
    elif hip_arity == 3 and all(ar == 3 for _, ar in torso):
        family = CENTIPEDE
    else:
        family = SERPENT
    side = n = None
    if family == CENTIPEDE:
        kids = (a[k], b[k])
        if kids == (0, 1) and all(s == 0 for s in hip):
            side = "left"
        elif kids == (1, 2) and all(s == 2 for s in hip):
            side = "right"
        if side:
            family, n = STICKBUG, k
    return Anatomy(
        kind=family if feet == (3, 2) else INVERSE,
        family=family,
        tree=t,
        hip=hip,
        hip_arity=hip_arity,
        torso=torso,
        legs=legs,
        feet=feet,
        foot_leaf_index=i,
        stickbug_side=side,
        stickbug_n=n,
    )


def _find_feet(d, r):
    bottoms = _bottom_carets(d)
    for (i, a), path in sorted(bottoms.items()):
        b = 5 - a
        nxt = bottoms.get((i + a, b))
        if nxt is None or len(path) != len(nxt):
            continue
        t = _collapse(d, {path, nxt})
        if _with_feet(t, i, b, a) == r:
            return t, i, (a, b)
    return None


def classify(p):
    """Tag ``p`` with its most specific family and locate its parts.

    The diagram is reduced first.  Anything that is not a humanoid or the
    inverse of one (the identity included) is tagged ``Other``.
    """
    p = reduce(p)
    if p.domain == p.range:
        return Anatomy(OTHER)
    found = _find_feet(p.domain, p.range)
    if found is None:
        return Anatomy(OTHER)
    return _describe(*found)


def make_humanoid(t, leaf_index, orientation="32"):
    """Hang a 3-caret and a 2-caret from leaves ``leaf_index`` and ``leaf_index + 1`` of ``t``.

    ``orientation`` gives the domain arities, left foot first; the range gets
    them swapped.
    """
    depths = leaf_depths(t)
    if not 0 <= leaf_index < len(depths) - 1:
        raise IndexError(f"no consecutive leaves {leaf_index}, {leaf_index + 1} in the tree")
    if depths[leaf_index] != depths[leaf_index + 1]:
        raise DepthMismatch(
            f"leaves {leaf_index} and {leaf_index + 1} sit at depths "
            f"{depths[leaf_index]} and {depths[leaf_index + 1]}"
        )
    a, b = {"32": (3, 2), "23": (2, 3)}[str(orientation)]
    return TreePair(_with_feet(t, leaf_index, a, b), _with_feet(t, leaf_index, b, a), check=False)


def humanoid_from_parts(arities, steps, hip_arity, child, left_leg, right_leg, feet=(3, 2)):
    """Reduced humanoid from its torso, hip and leg arities.

    The torso is the path ``steps`` through carets of the given ``arities``;
    the legs hang from hip children ``child`` and ``child + 1`` and list
    their caret arities from the hip downwards.
    """
    def leg(arity_seq, foot, leftwards):
        node = _FOOT[foot]
        for a in reversed(arity_seq):
            kids = [LEAF] * a
            kids[a - 1 if leftwards else 0] = node
            node = tuple(kids)
        return node

    a, b = feet
    hip_d = [LEAF] * hip_arity
    hip_r = [LEAF] * hip_arity
    hip_d[child], hip_d[child + 1] = leg(left_leg, a, True), leg(right_leg, b, False)
    hip_r[child], hip_r[child + 1] = leg(left_leg, b, True), leg(right_leg, a, False)
    return TreePair(
        _tree_along(list(arities), tuple(steps), tuple(hip_d)),
        _tree_along(list(arities), tuple(steps), tuple(hip_r)),
        check=False,
    )


def stickbug(n, side="left"):
    """The stick bug with ``n`` torso carets on the given side."""
    if n < 0:
        raise ValueError("stick bug index must be non-negative")
    if side == "left":
        return humanoid_from_parts([3] * n, [0] * n, 3, 0, (), ())
    if side == "right":
        return humanoid_from_parts([3] * n, [2] * n, 3, 1, (), ())
    raise ValueError(f"side must be 'left' or 'right', not {side!r}")


def shift_middle(p):
    """Hang both trees from the middle stem of a new root 3-caret."""
    return TreePair((LEAF, p.domain, LEAF), (LEAF, p.range, LEAF), check=False)


def primed_stickbug(n, side="left"):
    return shift_middle(stickbug(n, side))


def family_of(a):
    """The family tag regardless of orientation (``None`` for ``Other``)."""
    return None if a.kind == OTHER else a.family


def is_in_family(a, family):
    """True iff ``a`` (or its inverse) belongs to ``family`` or a subfamily of it."""
    f = family_of(a)
    return f is not None and _RANK[f] <= _RANK[family]


def flipped(a):
    """Anatomy of the inverse diagram."""
    if a.kind == OTHER:
        return a
    feet = a.feet[::-1]
    return replace(a, feet=feet, kind=a.family if feet == (3, 2) else INVERSE)
