"""Element-preserving rewrites of diagrams and the conjugators used to simplify humanoids.

Everything here either leaves the element unchanged (``move_2332``) or comes
with an exact identity between elements.  The rewrite rules of
:func:`rule_table` are stated for a hip sitting at the root and are hung
under an arbitrary torso when used; every instance is multiplied out and
compared with its left-hand side before it is handed to a caller.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Callable

from .anatomy import INVERSE, OTHER, classify, humanoid_from_parts, stickbug
from .anatomy import _with_feet
from .errors import (
    LegsAsymmetric,
    LegsSymmetric,
    LegsTooShort,
    NotBalanced,
    NotHumanoid,
    NothingToSwap,
    PatternMismatch,
    SchemaCheckFailed,
)
from .plmap import compose, identity
from .treepair import (
    LEAF,
    TreePair,
    hang_along,
    leaf_depths,
    leaf_paths,
    multiply,
    reduce,
    replace_at,
    subtree_at,
)

__all__ = [
    "CaretPath",
    "Rule",
    "RULE_GROUPS",
    "move_2332",
    "regroup",
    "bottom_row",
    "swap_carets",
    "permute_bottom_carets",
    "leg_cut_conjugator",
    "lower_hip",
    "leg_asym_serpent",
    "make_legs_asymmetric",
    "rule_table",
    "all_rules",
    "torsos",
    "verify_rules",
    "signed_factor",
    "product_map",
]


@dataclass(frozen=True)
class CaretPath:
    """Child indices leading from the root to a caret."""

    steps: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))

    def node(self, t):
        n = t
        for i in self.steps:
            if not n or i >= len(n):
                raise PatternMismatch(f"path {self.steps} leaves the tree")
            n = n[i]
        return n

    def child(self, i):
        return CaretPath(self.steps + (i,))

    def __len__(self):
        return len(self.steps)


def _steps(at):
    return at.steps if isinstance(at, CaretPath) else tuple(at)


def regroup(node):
    """Re-split a caret whose children all share one arity.

    A 2-caret over two 3-carets becomes a 3-caret over three 2-carets and
    vice versa; the grandchildren are kept in order, so the leaf intervals do
    not change.
    """
    k, j = len(node), len(node[0])
    g = [x for c in node for x in c]
    return tuple(tuple(g[i * k : (i + 1) * k]) for i in range(j))


def move_2332(t, at, dir="down"):
    """Trade a 2-caret over two 3-carets for a 3-caret over three 2-carets (``down``) or back (``up``)."""
    path = _steps(at)
    node = CaretPath(path).node(t)
    if dir == "down":
        ok = len(node) == 2 and all(len(c) == 3 for c in node)
    elif dir == "up":
        ok = len(node) == 3 and all(len(c) == 2 for c in node)
    else:
        raise ValueError(f"dir must be 'down' or 'up', not {dir!r}")
    if not ok:
        want = "2-caret over two 3-carets" if dir == "down" else "3-caret over three 2-carets"
        raise PatternMismatch(f"node at {path} is not a {want}")
    return replace_at(t, path, regroup(node))


# -- swapping bottom carets ----------------------------------------------------


def bottom_row(t):
    """Paths of the carets sitting just above the leaves of a balanced tree, left to right."""
    ds = leaf_depths(t)
    if any(d != ds[0] for d in ds):
        raise NotBalanced("leaves are not all at the same depth")
    d = ds[0]
    out, seen = [], set()
    for p in leaf_paths(t):
        c = p[: d - 1]
        if len(p) == d and c not in seen:
            seen.add(c)
            out.append(c)
    return out


def swap_carets(t, u, v):
    """Exchange the arities of two adjacent carets whose children are leaves."""
    a, b = len(subtree_at(t, u)), len(subtree_at(t, v))
    return replace_at(replace_at(t, u, (LEAF,) * b), v, (LEAF,) * a)


def permute_bottom_carets(p, side, index):
    """Split off a humanoid that swaps bottom-row carets ``index`` and ``index + 1``.

    Returns ``(factor, rest)`` where ``rest`` has the two carets exchanged in
    the chosen tree.  For ``side='domain'`` the element is ``factor·rest``;
    for ``side='range'`` it is ``rest·factor``.
    """
    if side not in ("domain", "range"):
        raise ValueError(f"side must be 'domain' or 'range', not {side!r}")
    t = p.domain if side == "domain" else p.range
    row = bottom_row(t)
    if not 0 <= index < len(row) - 1:
        raise IndexError(f"bottom row has {len(row)} carets; no pair at {index}")
    u, v = row[index], row[index + 1]
    if len(subtree_at(t, u)) == len(subtree_at(t, v)):
        raise NothingToSwap(f"carets {index} and {index + 1} have the same arity")
    swapped = swap_carets(t, u, v)
    if side == "domain":
        return reduce(TreePair(t, swapped, check=False)), TreePair(swapped, p.range, check=False)
    return reduce(TreePair(swapped, t, check=False)), TreePair(p.domain, swapped, check=False)


# -- conjugators for the leg surgery ------------------------------------------------


def _humanoid_anatomy(h):
    a = classify(h)
    if a.kind == OTHER or a.family is None:
        raise NotHumanoid("diagram is not a humanoid or the inverse of one")
    return a


def leg_cut_conjugator(h):
    """Humanoid that moves the hip of ``h`` down to the first uneven leg level.

    The legs of ``h`` are cut at the first level where their carets differ;
    the range of the conjugator is the cut tree carrying those two leg carets
    as feet, the domain carries them interchanged.  Conjugating ``h`` by it
    (``c·h·c⁻¹``) gives a humanoid with a lower hip and shorter legs.
    """
    a = _humanoid_anatomy(h)
    left, right = a.leg_arities
    diff = [k for k in range(len(left)) if left[k] != right[k]]
    if not diff:
        raise LegsSymmetric("legs are symmetric")
    j = diff[0]
    lp, rp = a.legs[0][j][0], a.legs[1][j][0]
    t = replace_at(replace_at(a.tree, lp, LEAF), rp, LEAF)
    i = leaf_paths(t).index(lp)
    return TreePair(_with_feet(t, i, right[j], left[j]), _with_feet(t, i, left[j], right[j]), check=False)


def lower_hip(h):
    """``(c, h2)`` with ``h = c⁻¹·h2·c`` and ``h2`` a humanoid with a lower hip."""
    c = leg_cut_conjugator(h)
    return c, multiply(multiply(c, h), c.inverse())


def leg_asym_serpent(h):
    """Serpent whose conjugation flips the type of the last left-leg caret of ``h``.

    Let ``A`` be the last caret of the left leg and ``B`` the caret it hangs
    from.  Cutting ``A`` off and placing a caret of the other type just left
    of it under ``B`` gives the range of the serpent (hip ``B``); the domain
    has the two interchanged.  ``s·h·s⁻¹`` keeps depth and leg length but
    makes the legs asymmetric.
    """
    a = _humanoid_anatomy(h)
    if a.leg_length < 2:
        raise LegsTooShort("legs need at least two carets")
    if not a.symmetric:
        raise LegsAsymmetric("legs are already asymmetric")
    path_a, arity_a = a.legs[0][-1]
    t = replace_at(a.tree, path_a, LEAF)
    i = leaf_paths(t).index(path_a) - 1
    other = 5 - arity_a
    return TreePair(_with_feet(t, i, arity_a, other), _with_feet(t, i, other, arity_a), check=False)


def make_legs_asymmetric(h):
    """``(s, h2)`` with ``h = s⁻¹·h2·s`` and ``h2`` having asymmetric legs."""
    s = leg_asym_serpent(h)
    return s, multiply(multiply(s, h), s.inverse())


# -- rewrite rules -----------------------------------------------------------------

RULE_GROUPS = (
    "legged_humanoids",
    "serpent_hip",
    "centipede_2caret",
    "middle_conjugations",
    "mixed_conjugations",
    "last_centipedes",
)

_LEFT, _MID, _RIGHT = 0, 1, 2


def signed_factor(pair):
    """``(pair, +1)`` for family orientation, ``(inverse, -1)`` for the inverse form."""
    return (pair.inverse(), -1) if classify(pair).kind == INVERSE else (pair, 1)


def product_map(factors):
    """Exact map of a list of ``(pair, ±1)`` factors, first factor applied first."""
    out = identity()
    for pair, e in factors:
        f = pair.to_plmap()
        out = compose(out, f if e == 1 else f.inverse())
    return out


def _serp(hip, child, feet=(3, 2)):
    return humanoid_from_parts((), (), hip, child, (), (), feet)


def _legged(hip, child, leg):
    return humanoid_from_parts((), (), hip, child, (leg,), (leg,))


def _under(p, arity, step):
    return hang_along(p, (arity,), (step,))


def _cent(g, steps):
    """``l`` or ``r`` (uppercase: inverse) hung along a path of 3-carets."""
    base = stickbug(0, "left" if g.lower() == "l" else "right")
    p = hang_along(base, (3,) * len(steps), steps)
    return (p, 1) if g.islower() else (p, -1)


def _pos(p):
    return (p, 1)


def _neg(p):
    return (p, -1)


_S2 = _serp(2, 0)
_L0 = stickbug(0, "left")
_R0 = stickbug(0, "right")


def _legged_rules():
    s2 = _S2
    return [
        ("legs22_hip3_left", lambda: (_legged(3, 0, 2), [_pos(_under(_serp(3, 1), 2, 0))])),
        ("legs22_hip3_right", lambda: (_legged(3, 1, 2), [_pos(_under(_serp(3, 0), 2, 1))])),
        ("legs33_hip2", lambda: (_legged(2, 0, 3), [_pos(_under(s2, 3, 1))])),
        (
            "legs22_hip2",
            lambda: (
                _legged(2, 0, 2),
                [_pos(s2), _neg(_under(s2, 2, 1)), _neg(s2), _neg(_under(s2, 2, 0)), _pos(s2)],
            ),
        ),
        ("legs33_hip3_left", lambda: (_legged(3, 0, 3), [_pos(s2), _neg(_L0), _neg(_R0), _neg(_under(s2, 3, 1))])),
        ("legs33_hip3_right", lambda: (_legged(3, 1, 3), [_neg(_under(s2, 3, 1)), _neg(_L0), _neg(_R0), _pos(s2)])),
    ]


def _hip_rules():
    return [("two_caret_hip", lambda: (_S2, [_pos(_L0), _pos(_R0)]))]


def _two_caret_rules():
    return [
        ("hip_left_feet_left", lambda: (_under(_L0, 2, 0), [_pos(_under(_S2, 3, 0))])),
        ("hip_right_feet_right", lambda: (_under(_R0, 2, 1), [_pos(_under(_S2, 3, 2))])),
        ("hip_left_feet_right", lambda: (_under(_R0, 2, 0), [_neg(_S2), _pos(_under(_R0, 3, 0)), _pos(_S2)])),
        ("hip_right_feet_left", lambda: (_under(_L0, 2, 1), [_pos(_S2), _pos(_under(_L0, 3, 2)), _neg(_S2)])),
    ]


def _inv_letter(g):
    return g.swapcase()


def _middle_rules():
    def down_left(x="l", rest=()):
        rest = tuple(rest)
        lhs = _cent(x, (_MID, _LEFT) + rest)
        rhs = [_cent("r", ()), _cent("l", ()), _cent(x, (_MID, _MID) + rest), _cent("L", ()), _cent("R", ())]
        return lhs, rhs

    def down_right(x="l", rest=()):
        rest = tuple(rest)
        lhs = _cent(x, (_MID, _RIGHT) + rest)
        rhs = [_cent("L", ()), _cent("R", ()), _cent(x, (_MID, _MID) + rest), _cent("r", ()), _cent("l", ())]
        return lhs, rhs

    return [("middle_then_left", down_left), ("middle_then_right", down_right)]


def _mixed_rules():
    def left_right(x="l", rest=()):
        rest = tuple(rest)
        return _cent(x, (_LEFT, _RIGHT) + rest), [_cent("l", ()), _cent(x, (_MID, _LEFT) + rest), _cent("L", ())]

    def right_left(x="l", rest=()):
        rest = tuple(rest)
        return _cent(x, (_RIGHT, _LEFT) + rest), [_cent("R", ()), _cent(x, (_MID, _RIGHT) + rest), _cent("r", ())]

    return [("left_then_right", left_right), ("right_then_left", right_left)]


def _last_rules():
    def right_feet_on_left_chain(n=1):
        if n < 1:
            raise ValueError("needs n >= 1")
        ln = stickbug(n, "left")
        return _cent("r", (_LEFT,) * n)[0], [_neg(ln), _neg(_L0), _pos(ln), _pos(_L0)]

    def left_feet_on_right_chain(n=1):
        if n < 1:
            raise ValueError("needs n >= 1")
        rn = stickbug(n, "right")
        return _cent("l", (_RIGHT,) * n)[0], [_pos(_R0), _pos(rn), _neg(_R0), _neg(rn)]

    return [("quasi_left", right_feet_on_left_chain), ("quasi_right", left_feet_on_right_chain)]


def _unwrap(lhs):
    if isinstance(lhs, tuple) and len(lhs) == 2 and isinstance(lhs[0], TreePair):
        return lhs[0] if lhs[1] == 1 else lhs[0].inverse()
    return lhs


@dataclass(frozen=True)
class Rule:
    """An identity ``lhs = product of rhs`` between elements, stated at the root.

    ``build(**params)`` returns the root instance; :meth:`instantiate` hangs
    it under a torso (a path with its caret arities) and checks it exactly.
    """

    name: str
    group: str
    build: Callable = field(repr=False)
    sample_params: tuple = field(default=((),), repr=False)

    def instantiate(self, arities=(), steps=(), **params):
        return _instance(self, tuple(arities), tuple(steps), tuple(sorted(params.items())))

    @property
    def lhs(self):
        return self.instantiate()[0]

    @property
    def rhs(self):
        return self.instantiate()[1]

    def __iter__(self):
        return iter(self.instantiate())


@lru_cache(maxsize=1 << 16)
def _instance(rule, arities, steps, params):
    lhs, rhs = rule.build(**dict(params))
    lhs = _unwrap(lhs)
    if arities:
        lhs = hang_along(lhs, arities, steps)
        rhs = [(hang_along(p, arities, steps), e) for p, e in rhs]
    if product_map(rhs) != lhs.to_plmap():
        raise SchemaCheckFailed(f"rule {rule.group}/{rule.name} fails at torso {steps} with {dict(params)}")
    return lhs, tuple(rhs)


def _samples_conj():
    out = []
    for x in ("l", "r", "L", "R"):
        for rest in ((), (0,), (1,), (2,), (2, 0)):
            out.append((("x", x), ("rest", rest)))
    return tuple(out)


@lru_cache(maxsize=None)
def _table():
    conj = _samples_conj()
    quasi = tuple(((("n", n),)) for n in (1, 2, 3))
    groups = {
        "legged_humanoids": [(n, b, ((),)) for n, b in _legged_rules()],
        "serpent_hip": [(n, b, ((),)) for n, b in _hip_rules()],
        "centipede_2caret": [(n, b, ((),)) for n, b in _two_caret_rules()],
        "middle_conjugations": [(n, b, conj) for n, b in _middle_rules()],
        "mixed_conjugations": [(n, b, conj) for n, b in _mixed_rules()],
        "last_centipedes": [(n, b, quasi) for n, b in _last_rules()],
    }
    return {g: tuple(Rule(n, g, b, s) for n, b, s in rules) for g, rules in groups.items()}


def rule_table(which):
    """The rules of one group (see ``RULE_GROUPS``)."""
    try:
        return _table()[which]
    except KeyError:
        raise ValueError(f"unknown rule group {which!r}; expected one of {RULE_GROUPS}") from None


def all_rules():
    return [r for g in RULE_GROUPS for r in rule_table(g)]


def rule(group, name):
    for r in rule_table(group):
        if r.name == name:
            return r
    raise KeyError(f"{group}/{name}")


def torsos(max_depth):
    """Every torso path of at most ``max_depth`` carets, as ``(arities, steps)``."""
    for k in range(max_depth + 1):
        for arities in product((2, 3), repeat=k):
            for steps in product(*[range(a) for a in arities]):
                yield arities, steps


def verify_rules(max_torso_depth=3, groups=RULE_GROUPS):
    """Instantiate every rule with its sample parameters under every small torso.

    Returns ``[(group, name, instances checked, failure message or None)]``.
    """
    report = []
    shapes = list(torsos(max_torso_depth))
    for g in groups:
        for r in rule_table(g):
            count, err = 0, None
            try:
                for params in r.sample_params:
                    for arities, steps in shapes:
                        _instance.__wrapped__(r, arities, steps, tuple(params))
                        count += 1
            except SchemaCheckFailed as exc:
                err = str(exc)
            report.append((g, r.name, count, err))
    return report
