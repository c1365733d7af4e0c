"""Rewrite any element of F(3/2) as a word in ``l`` and ``r``.

The pipeline runs through four stages, each writing the factors of the
previous stage in a smaller generating family:

1. :func:`to_humanoids` swaps carets in the bottom rows of the two trees
   until they agree, peeling off one humanoid per swap.
2. :func:`humanoid_to_serpents` shortens legs by conjugation and finishes
   one-caret legs with the legged rules.
3. :func:`serpent_to_centipedes` removes 2-carets from the hip and torso.
4. :func:`centipede_to_stickbugs` straightens the torso path of a
   centipede until only the stick bugs (and two near misses written in
   terms of them) remain.

Stick bugs are finally spelled out by :func:`stickbug_to_word`.

Factor counts grow exponentially with depth, so factor lists are kept as
shared products (a DAG): a node is a single factor, an ordered product of
signed sub-nodes, or a sub-node hung from a position in the tree.  Every
distinct node is built once; checks evaluate each distinct node once.
"""

from dataclasses import dataclass, field
from functools import lru_cache
import sys

from .anatomy import (
    CENTIPEDE,
    HUMANOID,
    SERPENT,
    STICKBUG,
    classify,
    humanoid_from_parts,
    is_in_family,
    shift_middle,
    stickbug,
)
from .errors import BudgetExceeded, NotCentipede, NotHumanoid, NotMember, NotSerpent
from .exactnum import SixAdic
from .moves import lower_hip, make_legs_asymmetric, regroup, rule, signed_factor
from .plmap import PLMap, compose, generator, identity, invert as invert_map, member_violation, stickbug_map, support
from .treepair import (
    LEAF,
    TreePair,
    balance,
    from_plmap,
    hang_along,
    is_member as pair_is_member,
    leaf_depths,
    leaf_paths,
    reduce,
    replace_at,
    subtree_at,
)
from .words import Word, evaluate, free_reduce, relations, substitute

__all__ = [
    "FactorList",
    "Measure",
    "Audit",
    "to_humanoids",
    "humanoid_to_serpents",
    "serpent_to_centipedes",
    "centipede_to_stickbugs",
    "stickbug_to_word",
    "find_support_shift",
    "support_shift_conjugate",
    "decompose",
    "as_pair",
]

STAGES = (HUMANOID, SERPENT, CENTIPEDE, STICKBUG)


# -- shared factor products -------------------------------------------------------


class Node:
    """One vertex of a factor DAG; see the module docstring."""

    __slots__ = ("kind", "pair", "tag", "items", "arities", "steps", "child", "_count")

    def __init__(self, kind, pair=None, tag=None, items=(), arities=(), steps=(), child=None):
        self.kind = kind
        self.pair, self.tag = pair, tag
        self.items = tuple(items)
        self.arities, self.steps, self.child = tuple(arities), tuple(steps), child
        self._count = None

    def count(self):
        """Number of factors once fully expanded."""
        if self._count is None:
            if self.kind == "leaf":
                self._count = 1
            elif self.kind == "hang":
                self._count = self.child.count()
            else:
                self._count = sum(n.count() for n, _ in self.items)
        return self._count


def leaf(pair, tag):
    return Node("leaf", pair=pair, tag=tag)


def seq(items):
    items = [(n, e) for n, e in items if n.kind != "seq" or n.items]
    if len(items) == 1 and items[0][1] == 1:
        return items[0][0]
    return Node("seq", items=items)


def hung(arities, steps, node):
    if not arities:
        return node
    if node.kind == "hang":
        return Node("hang", arities=tuple(arities) + node.arities, steps=tuple(steps) + node.steps, child=node.child)
    if node.kind == "seq" and not node.items:
        return node
    return Node("hang", arities=arities, steps=steps, child=node)


EMPTY = Node("seq")


def signed_leaf(pair, tag):
    p, e = signed_factor(pair)
    n = leaf(p, tag)
    return n if e == 1 else seq([(n, -1)])


def _walk_leaves(root):
    """Distinct ``(leaf node, arities, steps)`` reachable from ``root``."""
    seen, out = set(), []
    stack = [(root, (), ())]
    while stack:
        n, ar, st = stack.pop()
        key = (id(n), ar, st)
        if key in seen:
            continue
        seen.add(key)
        if n.kind == "leaf":
            out.append((n, ar, st))
        elif n.kind == "hang":
            stack.append((n.child, ar + n.arities, st + n.steps))
        else:
            for c, _ in n.items:
                stack.append((c, ar, st))
    return out


def _materialize(n, ar, st):
    return hang_along(n.pair, ar, st) if ar else n.pair


def map_leaves(root, fn):
    """Replace every leaf (placed at its position) by the node ``fn(pair, tag)``."""
    memo = {}

    def go(n, ar, st):
        key = (id(n), ar, st)
        got = memo.get(key)
        if got is not None:
            return got
        if n.kind == "leaf":
            out = fn(_materialize(n, ar, st), n.tag)
        elif n.kind == "hang":
            out = go(n.child, ar + n.arities, st + n.steps)
        else:
            out = seq([(go(c, ar, st), e) for c, e in n.items])
        memo[key] = out
        return out

    return go(root, (), ())


def _node_map(root):
    memo = {}

    def go(n, ar, st):
        key = (id(n), ar, st)
        got = memo.get(key)
        if got is not None:
            return got
        if n.kind == "leaf":
            out = _materialize(n, ar, st).to_plmap()
        elif n.kind == "hang":
            out = go(n.child, ar + n.arities, st + n.steps)
        else:
            out = identity()
            for c, e in n.items:
                f = go(c, ar, st)
                out = compose(out, f if e == 1 else invert_map(f))
        memo[key] = out
        return out

    return go(root, (), ())


@dataclass
class FactorList:
    """An ordered product of signed factors, all from one generating family.

    ``factors`` expands the product (which can be enormous); ``distinct``
    lists each different factor once, and :meth:`product_map` evaluates the
    product exactly without expanding it.
    """

    stage: str
    root: Node = field(repr=False)

    def __len__(self):
        return self.root.count()

    @property
    def count(self):
        return self.root.count()

    def __iter__(self):
        """Yield ``(pair, ±1, tag)`` in product order."""
        stack = [(self.root, (), (), 1)]
        while stack:
            n, ar, st, e = stack.pop()
            if n.kind == "leaf":
                yield _materialize(n, ar, st), e, n.tag
            elif n.kind == "hang":
                stack.append((n.child, ar + n.arities, st + n.steps, e))
            else:
                items = n.items if e == -1 else reversed(n.items)
                for c, s in items:
                    stack.append((c, ar, st, e * s))

    @property
    def factors(self):
        return [(p, e) for p, e, _ in self]

    def distinct(self):
        """Each distinct factor (placed in its tree) once, with its provenance tag."""
        out = {}
        for n, ar, st in _walk_leaves(self.root):
            p = _materialize(n, ar, st)
            out.setdefault(p, n.tag)
        return out

    def product_map(self):
        return _node_map(self.root)

    def verify(self, element):
        """Raise ``AssertionError`` unless the product is ``element`` and every factor is in the family."""
        target = element.to_plmap() if isinstance(element, TreePair) else element
        if self.product_map() != target:
            raise AssertionError(f"{self.stage} factors do not multiply back to the element")
        for p, tag in self.distinct().items():
            a = classify(p)
            if not is_in_family(a, self.stage):
                raise AssertionError(f"factor {p} ({tag}) is not in the {self.stage} family: {a.kind}")
        return True

    def summary(self):
        d = self.distinct()
        tags = {}
        for tag in d.values():
            tags[tag] = tags.get(tag, 0) + 1
        return {"stage": self.stage, "factors": self.count, "distinct": len(d), "distinct_by_step": tags}


@dataclass(frozen=True, order=True)
class Measure:
    """Lexicographic progress measure of one stage; ``rest`` breaks remaining ties."""

    depth: int = 0
    leg_length: int = 0
    torso_2carets: int = 0
    branch_gap: int = 0
    rest: tuple = ()


def _descends(child, parent, where):
    if not child < parent:
        raise AssertionError(f"{where}: measure {child} does not drop below {parent}")


def as_pair(x):
    """Tree pair of a member given as a pair, a map or a word; raises NotMember otherwise."""
    if isinstance(x, Word):
        x = evaluate(x)
    if isinstance(x, PLMap):
        why = member_violation(x)
        if why:
            raise NotMember(why.split(": ", 1)[1], criterion="slope group")
        return from_plmap(x)
    if isinstance(x, TreePair):
        if not pair_is_member(x):
            raise NotMember("the two trees have different leaf depth sequences", criterion="leaf-depth")
        return x
    raise TypeError(f"cannot read an element from {type(x).__name__}")


# -- stage 1: humanoids --------------------------------------------------------------


def _full(k, h):
    t = LEAF
    for _ in range(h):
        t = (t,) * k
    return t


def _graft_at(t, fill):
    counter = [0]

    def walk(n):
        if not n:
            k = counter[0]
            counter[0] += 1
            return fill.get(k, n)
        return tuple(walk(c) for c in n)

    return walk(t)


def _row_carets(t, paths, start, end):
    out, k = [], start
    while k < end:
        parent = paths[k][:-1]
        out.append(parent)
        k += len(subtree_at(t, parent))
    return out


def _lca(paths):
    p = paths[0]
    for q in paths[1:]:
        i = 0
        while i < min(len(p), len(q)) and p[i] == q[i]:
            i += 1
        p = p[:i]
    return p


def _ancestor_with_arity(t, path, arity, d):
    path = path[: min(len(path), d - 2)]
    for k in range(len(path), -1, -1):
        if len(subtree_at(t, path[:k])) == arity:
            return path[:k]
    return None


def _anchors(t, path, arity, d, run):
    """Carets of ``arity`` that can be driven: ancestors of ``path`` first, then carets below it.

    Carets below must hang over at least one leaf of ``run`` (a leaf index
    range), so regrouping them changes that run and no other.
    """
    up = _ancestor_with_arity(t, path, arity, d)
    if up is not None:
        yield up
    stack, below = [(subtree_at(t, path), path)], []
    while stack:
        n, at = stack.pop()
        if not n or len(at) > d - 2:
            continue
        if len(n) == arity and at != up and any(run[0] <= i < run[1] for i in _region(t, at, 2, d)[1]):
            below.append(at)
        stack.extend((c, at + (i,)) for i, c in enumerate(n))
    yield from sorted(below, key=lambda a: (len(a), a))


def _drivable(t, anchor, d, arity):
    """Whether the padded region under ``anchor`` has enough bottom carets of the other kind."""
    want = 5 - arity
    k = want
    hd = leaf_depths(t)
    _, idx = _region(t, anchor, k, d)
    t = _graft_at(t, {i: _full(k, d - hd[i]) for i in idx if hd[i] < d})
    cars = _run_carets(t, anchor, d)
    return sum(1 for c in cars if len(subtree_at(t, c)) == want) >= arity


def _run_carets(t, anchor, d):
    """Bottom carets over the run of depth-``d`` leaves that contains the region under ``anchor``."""
    paths, depths = leaf_paths(t), leaf_depths(t)
    idx = [i for i, p in enumerate(paths) if p[: len(anchor)] == anchor]
    s, e = idx[0], idx[-1] + 1
    while s > 0 and depths[s - 1] == d:
        s -= 1
    while e < len(depths) and depths[e] == d:
        e += 1
    return _row_carets(t, paths, s, e)


def _region(t, anchor, k, d):
    paths, depths = leaf_paths(t), leaf_depths(t)
    idx = [i for i, p in enumerate(paths) if p[: len(anchor)] == anchor]
    return sum(k ** (d - depths[i]) for i in idx), idx


class _Swapper:
    """Swaps adjacent bottom carets of one tree and records the humanoid each swap costs."""

    def __init__(self, side, out):
        self.side, self.out = side, out

    def swap(self, t, u, v):
        k = 0
        while u[k] == v[k]:
            k += 1
        hip = u[:k]
        torso = []
        node = t
        for s in hip:
            torso.append(len(node))
            node = node[s]
        hip_arity = len(node)
        left = tuple(len(subtree_at(t, u[:m])) for m in range(k + 1, len(u)))
        right = tuple(len(subtree_at(t, v[:m])) for m in range(k + 1, len(v)))
        a, b = len(subtree_at(t, u)), len(subtree_at(t, v))
        # domain swap: (before, after); range swap: (after, before)
        feet = (a, b) if self.side == "domain" else (b, a)
        self.out.append(_humanoid_leaf(tuple(torso), hip, hip_arity, u[k], left, right, feet))
        return replace_at(replace_at(t, u, (LEAF,) * b), v, (LEAF,) * a)


@lru_cache(maxsize=1 << 16)
def _basic_humanoid(hip_arity, child, left, right):
    return humanoid_from_parts((), (), hip_arity, child, left, right)


@lru_cache(maxsize=1 << 18)
def _humanoid_leaf(torso, hip, hip_arity, child, left, right, feet):
    base = leaf(_basic_humanoid(hip_arity, child, left, right), "humanoid:caret swap")
    node = hung(torso, hip, base)
    return node if feet == (3, 2) else seq([(node, -1)])


def _bubble(t, cars, ar, src, dst, sw):
    step = 1 if src < dst else -1
    q = src
    while q != dst:
        a, b = (q, q + 1) if step == 1 else (q - 1, q)
        t = sw.swap(t, cars[a], cars[b])
        ar[a], ar[b] = ar[b], ar[a]
        q += step
    return t


def _transform(t, cars, ar, target, sw):
    """Reorder the bottom carets ``cars`` (arities ``ar``) into the arity sequence ``target``."""
    ar = list(ar)
    for pos in range(len(ar)):
        if ar[pos] != target[pos]:
            q = pos
            while ar[q] != target[pos]:
                q += 1
            t = _bubble(t, cars, ar, q, pos, sw)
    return t


def _drive(t, anchor, d, arity, sw):
    """Turn one caret of ``arity`` under ``anchor`` into the other kind at the row above the leaves.

    The bottommost such caret is pushed down by 2332 moves; the bottom carets
    of the surrounding run are then permuted so it sits over carets it can be
    regrouped with.  The
    regrouping changes that tree's bottom caret count by one.
    """
    while True:
        best = None
        stack = [(subtree_at(t, anchor), anchor)]
        while stack:
            n, path = stack.pop()
            if len(path) > d - 2 or not n:
                continue
            if len(n) == arity and (best is None or (-len(path), path) < (-len(best), best)):
                best = path
            for i, c in enumerate(n):
                stack.append((c, path + (i,)))
        if len(best) == d - 2:
            break
        t = replace_at(t, best, regroup(subtree_at(t, best)))
    cars = _run_carets(t, anchor, d)
    ar = [len(subtree_at(t, c)) for c in cars]
    want = 5 - arity
    t0 = cars.index(best + (0,))
    block = range(t0, t0 + arity)
    target = list(ar)
    need = sum(1 for i in block if ar[i] != want)
    spare = sorted((q for q in range(len(ar)) if ar[q] == want and q not in block), key=lambda q: abs(q - t0))
    if len(spare) < need:
        raise AssertionError("not enough bottom carets of the needed kind")
    for i in block:
        target[i] = want
    for q in spare[:need]:
        target[q] = 5 - want
    t = _transform(t, cars, ar, target, sw)
    return replace_at(t, best, regroup(subtree_at(t, best)))


def _strip(t, d):
    def walk(n, level):
        if not n:
            return n
        if level == d - 1:
            return LEAF
        return tuple(walk(c, level + 1) for c in n)

    return walk(t, 0)


def _runs(depths, d):
    out, i, n = [], 0, len(depths)
    while i < n:
        if depths[i] == d:
            j = i
            while j < n and depths[j] == d:
                j += 1
            out.append((i, j))
            i = j
        else:
            i += 1
    return out


def _humanoid_factors(p, method):
    dom, rng = p.domain, p.range
    lefts, rights = [], []
    left_sw, right_sw = _Swapper("domain", lefts), _Swapper("range", rights)
    last = None
    while dom != rng:
        depths = leaf_depths(dom)
        d = max(depths)
        runs = _runs(depths, d)
        pd, pr = leaf_paths(dom), leaf_paths(rng)
        rows = [(s, e, _row_carets(dom, pd, s, e), _row_carets(rng, pr, s, e)) for s, e in runs]
        gap = sum(abs(len(cd) - len(cr)) for _, _, cd, cr in rows)
        m = Measure(depth=d, branch_gap=gap)
        if last is not None:
            _descends(m, last, "humanoid stage")
        last = m
        bad = next((r for r in rows if len(r[2]) != len(r[3])), None)
        if bad is None:
            for s, e, cd, cr in rows:
                ad = [len(subtree_at(dom, c)) for c in cd]
                target = [len(subtree_at(rng, c)) for c in cr]
                dom = _transform(dom, cd, ad, target, left_sw)
            dom, rng = _strip(dom, d), _strip(rng, d)
            continue
        s, e, cd, cr = bad
        # the tree with fewer carets in the run gains one, or the other loses one
        few_is_dom = len(cd) < len(cr)
        few, many = (dom, rng) if few_is_dom else (rng, dom)
        c_few, c_many = (cd, cr) if few_is_dom else (cr, cd)
        options = []
        anchor = next((a for a in _anchors(few, _lca(c_few), 2, d, (s, e)) if _drivable(few, a, d, 2)), None)
        if anchor is not None:
            options.append((_region(few, anchor, 3, d)[0], "gain", anchor))
        if method == "local":
            anchor = next((a for a in _anchors(many, _lca(c_many), 3, d, (s, e)) if _drivable(many, a, d, 3)), None)
            if anchor is not None:
                options.append((_region(many, anchor, 2, d)[0], "lose", anchor))
        if not options:
            raise AssertionError("no caret available to close the branch gap")
        _, kind, anchor = min(options)
        host = few if kind == "gain" else many
        k = 3 if kind == "gain" else 2
        _, idx = _region(host, anchor, k, d)
        hd = leaf_depths(host)
        fill = {i: _full(k, d - hd[i]) for i in idx if hd[i] < d}
        dom, rng = _graft_at(dom, fill), _graft_at(rng, fill)
        on_dom = (kind == "gain") == few_is_dom
        if on_dom:
            dom = _drive(dom, anchor, d, 2 if kind == "gain" else 3, left_sw)
        else:
            rng = _drive(rng, anchor, d, 2 if kind == "gain" else 3, right_sw)
    return seq([(n, 1) for n in lefts] + [(n, 1) for n in reversed(rights)])


def to_humanoids(p, method="local"):
    """Factor ``p`` into humanoids.

    Caret swaps in the bottom rows of the two trees are performed until the
    trees agree; each swap is a humanoid factor.  When the two trees have
    different numbers of bottom carets over a stretch of deepest leaves, a
    2-caret is pushed down with 2332 moves and regrouped to close the gap.
    ``method='balanced'`` first pads the whole diagram to one depth and only
    ever adds carets to the tree with fewer; ``'local'`` pads just the
    region being fixed and may instead remove a caret from the other tree.
    """
    p = as_pair(p)
    if method not in ("local", "balanced"):
        raise ValueError(f"unknown method {method!r}")
    p = reduce(p)
    if p.domain == p.range:
        return FactorList(HUMANOID, EMPTY)
    if is_in_family(classify(p), HUMANOID):
        return FactorList(HUMANOID, signed_leaf(p, "humanoid:input"))
    if method == "balanced":
        p = balance(p)
    return FactorList(HUMANOID, _humanoid_factors(p, method))


# -- stage 2: serpents ---------------------------------------------------------------


def _anatomy_or(p, family, error):
    a = classify(p)
    if not is_in_family(a, family):
        raise error(f"not a {family.lower()} (classified as {a.kind})")
    return a


def _split_torso(p, a):
    """``(arities, steps, root version)`` for a family diagram with its hip moved to the root."""
    if not a.hip:
        return (), (), p
    n_d, n_r = subtree_at(p.domain, a.hip), subtree_at(p.range, a.hip)
    return a.torso_arities, a.hip, TreePair(n_d, n_r, check=False)


_LEGGED = {
    (3, 0, 2): "legs22_hip3_left",
    (3, 1, 2): "legs22_hip3_right",
    (2, 0, 3): "legs33_hip2",
    (2, 0, 2): "legs22_hip2",
    (3, 0, 3): "legs33_hip3_left",
    (3, 1, 3): "legs33_hip3_right",
}


def _humanoid_measure(a, p):
    return Measure(depth=p.depth(), leg_length=a.leg_length, rest=(int(a.symmetric),))


class _SerpentStage:
    def __init__(self):
        self.memo = {}

    def node(self, h, tag=None):
        a = _anatomy_or(h, HUMANOID, NotHumanoid)
        if a.inverse:
            return seq([(self.node(h.inverse()), -1)])
        ar, st, root = _split_torso(h, a)
        return hung(ar, st, self.root_node(reduce(root)))

    def root_node(self, h):
        got = self.memo.get(h)
        if got is not None:
            return got
        a = classify(h)
        here = _humanoid_measure(a, h)
        if a.leg_length == 0:
            out = leaf(h, "serpent:input")
        elif not a.symmetric:
            c, h2 = lower_hip(h)
            for x in (c, h2):
                _descends(_humanoid_measure(classify(x), x), here, "serpent stage (lower hip)")
            cn = self.node(c)
            out = seq([(cn, -1), (self.node(h2), 1), (cn, 1)])
        elif a.leg_length >= 2:
            s, h2 = make_legs_asymmetric(h)
            _descends(_humanoid_measure(classify(h2), h2), here, "serpent stage (asymmetric legs)")
            sn = signed_leaf(s, "serpent:leg asymmetry conjugator")
            out = seq([(sn, -1), (self.node(h2), 1), (sn, 1)])
        else:
            name = _LEGGED[(a.hip_arity, a.foot_children[0], a.leg_arities[0][0])]
            _, rhs = rule("legged_humanoids", name).instantiate()
            out = seq([(leaf(p, f"serpent:legged_humanoids/{name}"), e) for p, e in rhs])
        self.memo[h] = out
        return out


def humanoid_to_serpents(h):
    """Write a humanoid (or the inverse of one) as a product of serpents."""
    return FactorList(SERPENT, _SerpentStage().node(reduce(h)))


# -- stage 3: centipedes ------------------------------------------------------------


def _serpent_measure(a):
    twos = [m for m, ar in enumerate(a.torso_arities) if ar == 2]
    dist = len(a.torso) - max(twos) if twos else 0
    return Measure(torso_2carets=len(twos), rest=(int(a.hip_arity == 2), dist))


_TWO_ABOVE = {
    (0, 0): "hip_left_feet_left",
    (1, 1): "hip_right_feet_right",
    (0, 1): "hip_left_feet_right",
    (1, 0): "hip_right_feet_left",
}


class _CentipedeStage:
    def __init__(self):
        self.memo = {}

    def node(self, s):
        s = reduce(s)
        a = _anatomy_or(s, SERPENT, NotSerpent)
        if a.family == HUMANOID:
            raise NotSerpent("diagram has legs")
        if a.inverse:
            return seq([(self.node(s.inverse()), -1)])
        got = self.memo.get(s)
        if got is not None:
            return got
        out = self._build(s, a)
        self.memo[s] = out
        return out

    def _recurse(self, parts, here, tag):
        items = []
        for p, e in parts:
            b = classify(p)
            if is_in_family(b, CENTIPEDE):
                items.append((leaf(p, tag), e) if not b.inverse else (leaf(p.inverse(), tag), -e))
                continue
            _descends(_serpent_measure(b), here, "centipede stage")
            items.append((self.node(p), e))
        return seq(items)

    def _build(self, s, a):
        if is_in_family(a, CENTIPEDE):
            return leaf(s, "centipede:input")
        here = _serpent_measure(a)
        ar, st = a.torso_arities, a.hip
        if a.hip_arity == 2:
            _, rhs = rule("serpent_hip", "two_caret_hip").instantiate(ar, st)
            return self._recurse(rhs, here, "centipede:serpent_hip/two_caret_hip")
        m = max(i for i, x in enumerate(ar) if x == 2)
        if m == len(ar) - 1:
            key = (st[-1], a.foot_children[0])
            name = _TWO_ABOVE[key]
            _, rhs = rule("centipede_2caret", name).instantiate(ar[:m], st[:m])
            return self._recurse(rhs, here, f"centipede:centipede_2caret/{name}")
        # push the 2-caret one level down: fill its free stem, then regroup
        at = st[:m]
        free = 1 - st[m]
        pair = s
        for fix in (lambda t: replace_at(t, at + (free,), (LEAF, LEAF, LEAF)),):
            pair = TreePair(fix(pair.domain), fix(pair.range), check=False)
        pair = TreePair(
            replace_at(pair.domain, at, regroup(subtree_at(pair.domain, at))),
            replace_at(pair.range, at, regroup(subtree_at(pair.range, at))),
            check=False,
        )
        pair = reduce(pair)
        b = classify(pair)
        _descends(_serpent_measure(b), here, "centipede stage (2332 move)")
        return self.node(pair)


def serpent_to_centipedes(s):
    """Write a serpent (or the inverse of one) as a product of centipedes."""
    return FactorList(CENTIPEDE, _CentipedeStage().node(s))


# -- stage 4: stick bugs -----------------------------------------------------------------

_L, _M, _R = 0, 1, 2


def _centipede_key(p):
    """``(generator letter, path, sign)`` of a centipede diagram."""
    a = classify(p)
    if not is_in_family(a, CENTIPEDE):
        raise NotCentipede(f"not a centipede (classified as {a.kind})")
    g = "l" if a.foot_children[0] == 0 else "r"
    return g, a.hip, -1 if a.inverse else 1


def _centipede_pair(g, path):
    return hang_along(stickbug(0, "left" if g == "l" else "right"), (3,) * len(path), path)


@lru_cache(maxsize=None)
def _shift_letters():
    a, b = relations()
    return {"l": list(a.word), "r": list(b.word)}


class _StickBugStage:
    def __init__(self):
        self.memo = {}
        self.checked = set()

    def node(self, g, path):
        key = (g, path)
        got = self.memo.get(key)
        if got is not None:
            return got
        out = self._build(g, path)
        self.memo[key] = out
        return out

    def _measure(self, path):
        if _M in path:
            i = path.index(_M)
            return Measure(depth=len(path), rest=(0, sum(1 for s in path[i + 1 :] if s != _M)))
        return Measure(depth=len(path), rest=(1, 0))

    def _parts(self, rhs, here, tag):
        items = []
        for p, e in rhs:
            a = classify(p)
            if a.family == STICKBUG:
                items.append((leaf(p, tag), e) if not a.inverse else (leaf(p.inverse(), tag), -e))
                continue
            g, path, s = _centipede_key(p)
            _descends(self._measure(path), here, "stick bug stage")
            items.append((self.node(g, path), e * s))
        return seq(items)

    def _build(self, g, path):
        n = len(path)
        here = self._measure(path)
        if not path:
            return leaf(stickbug(0, "left" if g == "l" else "right"), "stickbug:input")
        if all(s == _L for s in path) or all(s == _R for s in path):
            side = "left" if path[0] == _L else "right"
            if (g == "l") == (side == "left"):
                return leaf(stickbug(n, side), "stickbug:input")
            name = "quasi_left" if side == "left" else "quasi_right"
            _, rhs = rule("last_centipedes", name).instantiate(n=n)
            return self._parts(rhs, here, f"stickbug:last_centipedes/{name}")
        if _M in path:
            i = path.index(_M)
            later = [j for j in range(i + 1, n) if path[j] != _M]
            if later:
                j = later[0]
                name = "middle_then_left" if path[j] == _L else "middle_then_right"
                _, rhs = rule("middle_conjugations", name).instantiate(
                    (3,) * (j - 1), path[: j - 1], x=g, rest=path[j + 1 :]
                )
                return self._parts(rhs, here, f"stickbug:middle_conjugations/{name}")
            # a middle-hung hip: unfold one level through the shift relation
            up = path[:-1]
            parts = [(_centipede_pair(x, up), e) for x, e in _shift_letters()[g]]
            self._check_shift(g, path, parts)
            return self._parts(parts, here, "stickbug:shift relation")
        j = next(k for k in range(1, n) if path[k] != path[k - 1])
        name = "left_then_right" if path[j - 1] == _L else "right_then_left"
        _, rhs = rule("mixed_conjugations", name).instantiate(
            (3,) * (j - 1), path[: j - 1], x=g, rest=path[j + 1 :]
        )
        return self._parts(rhs, here, f"stickbug:mixed_conjugations/{name}")

    def _check_shift(self, g, path, parts):
        f = identity()
        for p, e in parts:
            m = p.to_plmap()
            f = compose(f, m if e == 1 else invert_map(m))
        if f != _centipede_pair(g, path).to_plmap():
            raise AssertionError(f"shift relation fails for {g} at {path}")


def centipede_to_stickbugs(c, stage=None):
    """Write a centipede (or the inverse of one) as a product of stick bugs."""
    stage = stage or _StickBugStage()
    g, path, s = _centipede_key(reduce(c))
    n = stage.node(g, path)
    return FactorList(STICKBUG, n if s == 1 else seq([(n, -1)]))


# -- stick bugs as words --------------------------------------------------------------


def _unshift_map(f):
    third = SixAdic(1, 3)
    pts = [(third, third)] + [(x, y) for x, y in f.points if third < x < 2 * third] + [(2 * third, 2 * third)]
    return PLMap([(3 * x - 1, 3 * y - 1) for x, y in pts])


def support_shift_conjugate(n, k, side="left"):
    """The element whose support must fit in the middle third.

    For the left side this is ``l^-k · (l⁻¹·l_n) · l^k``; the right side is
    its mirror image, built from ``r`` and ``r_n`` the same way.
    """
    if side == "left":
        l = generator("l")
        return (l ** (-k)) * invert_map(l) * stickbug_map(n, "left") * (l**k)
    r = generator("r")
    return (r**k) * r * invert_map(stickbug_map(n, "right")) * (r ** (-k))


def find_support_shift(n, side="left", cap=None):
    """Smallest ``k`` putting :func:`support_shift_conjugate` inside [1/3, 2/3]."""
    if n < 1:
        raise ValueError("needs n >= 1")
    cap = 64 * (n + 2) if cap is None else cap
    lo, hi = SixAdic(1, 3), SixAdic(2, 3)
    for k in range(cap + 1):
        if support(support_shift_conjugate(n, k, side)).within(lo, hi):
            return k
    raise BudgetExceeded(f"no k <= {cap} for n={n}")


def _letters_word(node):
    """Word of a factor DAG whose leaves are all ``l`` or ``r``."""
    memo = {}

    def go(n, ar, st):
        key = (id(n), ar, st)
        got = memo.get(key)
        if got is not None:
            return got
        if n.kind == "leaf":
            a = classify(_materialize(n, ar, st))
            if a.family != STICKBUG or a.stickbug_n != 0:
                raise AssertionError(f"expected a generator, got {a.kind} {a.stickbug_n}")
            out = Word.letter("l" if a.stickbug_side == "left" else "r", -1 if a.inverse else 1)
        elif n.kind == "hang":
            out = go(n.child, ar + n.arities, st + n.steps)
        else:
            out = Word()
            for c, e in n.items:
                w = go(c, ar, st)
                out = out * (w if e == 1 else ~w)
        memo[key] = out
        return out

    return go(node, (), ())


def _shifted_word(fl, stage):
    """Word for the image of ``fl``'s product under the middle-third shift."""
    memo = {}

    def fn(pair, tag):
        got = memo.get(pair)
        if got is None:
            g, path, s = _centipede_key(shift_middle(pair))
            n = stage.node(g, path)
            got = memo[pair] = n if s == 1 else seq([(n, -1)])
        return got

    return _letters_word(map_leaves(fl.root, fn))


@lru_cache(maxsize=None)
def _left_word_by_shift(n):
    k = find_support_shift(n, "left")
    g = support_shift_conjugate(n, k, "left")
    core = _unshift_map(g)
    parts = _pipeline(from_plmap(core))
    middle = _shifted_word(parts[-1], _StickBugStage())
    l = Word("l")
    w = free_reduce(l ** (k + 1) * middle * l ** (-k))
    if evaluate(w) != stickbug_map(n, "left"):
        raise AssertionError(f"support-shift word for l_{n} does not evaluate correctly")
    return w


@lru_cache(maxsize=None)
def _left_word(n):
    if n == 0:
        return Word("l")
    if n == 1:
        return _left_word_by_shift(1)
    # hanging from the left third is a homomorphism: l ↦ l_1, r ↦ that hang of r
    w1 = _left_word_by_shift(1)
    images = {"l": w1, "r": ~w1 * Word("L") * w1 * Word("l")}
    return free_reduce(substitute(_left_word(n - 1), images))


def _mirror(w):
    return substitute(w, {"l": Word("R"), "r": Word("L")})


def stickbug_to_word(n, side="left", exponent=1, method="substitution"):
    """A word in ``l`` and ``r`` for the stick bug ``l_n`` or ``r_n`` (to the power ±1).

    ``method='support-shift'`` conjugates ``l_n`` by a power of ``l`` until
    the leftover lives in the middle third, pulls it back, decomposes it and
    pushes the factors forward again.  ``'substitution'`` (the default) does
    that once for ``l_1`` and obtains ``l_n`` by repeatedly hanging from the
    left third, which is a substitution on words.  Right stick bugs are the
    mirror images of left ones.
    """
    if n < 0:
        raise ValueError("stick bug index must be non-negative")
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', not {side!r}")
    if method == "support-shift":
        w = Word("l") if n == 0 else _left_word_by_shift(n)
    elif method == "substitution":
        w = _left_word(n)
    else:
        raise ValueError(f"unknown method {method!r}")
    if side == "right":
        w = free_reduce(~_mirror(w))
    return w if exponent == 1 else ~w


# -- the whole pipeline -------------------------------------------------------------------


def _pipeline(p, method="local"):
    hum = to_humanoids(p, method)
    serp_stage, cent_stage, stick_stage = _SerpentStage(), _CentipedeStage(), _StickBugStage()
    serp = FactorList(SERPENT, map_leaves(hum.root, lambda q, t: serp_stage.node(q)))
    cent = FactorList(CENTIPEDE, map_leaves(serp.root, lambda q, t: cent_stage.node(q)))

    def to_stick(q, t):
        g, path, s = _centipede_key(q)
        n = stick_stage.node(g, path)
        return n if s == 1 else seq([(n, -1)])

    stick = FactorList(STICKBUG, map_leaves(cent.root, to_stick))
    return hum, serp, cent, stick


@dataclass
class Audit:
    """Factor lists of every stage plus the results of their checks."""

    element: TreePair
    stages: list
    word: Word
    checks: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "element": self.element.to_json(),
            "stages": [fl.summary() for fl in self.stages],
            "word_length": self.word.length,
            "checks": self.checks,
        }


def _word_of(stick):
    memo = {}

    def go(n):
        got = memo.get(id(n))
        if got is not None:
            return got
        if n.kind == "leaf":
            a = classify(n.pair)
            out = stickbug_to_word(a.stickbug_n, a.stickbug_side, -1 if a.inverse else 1)
        elif n.kind == "hang":
            raise AssertionError("stick bug factors are never hung")
        else:
            out = Word()
            for c, e in n.items:
                w = go(c)
                out = out * (w if e == 1 else ~w)
        memo[id(n)] = out
        return out

    return go(stick.root)


def decompose(x, *, audit=False, check=False, method="local"):
    """A freely reduced word in ``l`` and ``r`` equal to ``x``.

    ``x`` may be a tree pair, a map or a word.  With ``check=True`` every
    stage is verified (exact product, family membership) and the final word
    is evaluated; ``audit=True`` returns ``(word, Audit)``.
    """
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 20_000))
    try:
        p = reduce(as_pair(x))
        stages = _pipeline(p, method)
        word = free_reduce(_word_of(stages[-1]))
        checks = {}
        if check:
            target = p.to_plmap()
            for fl in stages:
                fl.verify(target)
                checks[fl.stage] = True
            ok = evaluate(word) == target
            checks["word"] = ok
            if not ok:
                raise AssertionError("word does not evaluate to the element")
    finally:
        sys.setrecursionlimit(limit)
    if audit:
        return word, Audit(p, list(stages), word, checks)
    return word
