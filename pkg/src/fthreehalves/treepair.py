"""Tree-pair diagrams built from 2-carets and 3-carets.

Trees are plain nested tuples: ``()`` is a leaf, a 2-tuple is a 2-caret and
a 3-tuple is a 3-caret, so trees are immutable, hashable and cheap to
compare.  The leaves of a tree subdivide [0, 1] into standard intervals
``[a / (2^n 3^m), (a + 1) / (2^n 3^m)]``; a :class:`TreePair` sends the i-th
domain leaf affinely onto the i-th range leaf.

>>> t = parse_tree("(2 (3 * * *) *)")
>>> [str(b) for b in boundaries(t)]
['1/6', '1/3', '1/2']
"""

from dataclasses import dataclass
from functools import lru_cache

from .errors import CannotBalance, InvalidTreePair, NotBalanced, NotRepresentable, ParseError
from .exactnum import ONE, ZERO, SixAdic, valuations
from .plmap import PLMap, invert as _invert_map

__all__ = [
    "LEAF",
    "TreePair",
    "DepthStats",
    "caret",
    "leaf_count",
    "leaf_depths",
    "leaf_intervals",
    "boundaries",
    "depth",
    "to_plmap",
    "from_plmap",
    "refine_to_contain",
    "multiply",
    "invert",
    "reduce",
    "balance",
    "depth_stats",
    "is_member",
    "parse_tree",
    "parse_pair",
    "tree_to_sexpr",
    "subtree_at",
    "replace_at",
    "leaf_paths",
    "interval_path",
    "hang",
    "hang_along",
    "identity_pair",
    "random_tree",
    "random_member",
]

LEAF = ()


def caret(arity, *children):
    """A caret of the given arity; missing children default to leaves."""
    if arity not in (2, 3):
        raise InvalidTreePair(f"carets have arity 2 or 3, not {arity}")
    kids = tuple(children) + (LEAF,) * (arity - len(children))
    if len(kids) != arity:
        raise InvalidTreePair("too many children for caret")
    return kids


def _check_tree(t):
    stack = [t]
    while stack:
        n = stack.pop()
        if not isinstance(n, tuple) or len(n) not in (0, 2, 3):
            raise InvalidTreePair(f"not a tree node: {n!r}")
        stack.extend(n)


# -- leaf geometry -----------------------------------------------------------


def leaf_count(t):
    if not t:
        return 1
    return sum(leaf_count(c) for c in t)


def leaf_depths(t):
    out = []

    def walk(n, d):
        if not n:
            out.append(d)
        else:
            for c in n:
                walk(c, d + 1)

    walk(t, 0)
    return out


def depth(t):
    if not t:
        return 0
    return 1 + max(depth(c) for c in t)


def leaf_intervals(t):
    """In-order ``(left, width, depth)`` for every leaf of ``t``."""
    out = []

    def walk(n, left, width, d):
        if not n:
            out.append((left, width, d))
            return
        w = width / len(n) if len(n) == 2 else width * SixAdic._raw(1, 3)
        for i, c in enumerate(n):
            walk(c, left + w * i, w, d + 1)

    walk(t, ZERO, ONE, 0)
    return out


def boundaries(t):
    """Interior leaf endpoints of ``t``, sorted."""
    return [left for left, _, _ in leaf_intervals(t)[1:]]


def leaf_paths(t):
    """Child-index paths from the root to every leaf, in order."""
    out = []

    def walk(n, path):
        if not n:
            out.append(path)
        else:
            for i, c in enumerate(n):
                walk(c, path + (i,))

    walk(t, ())
    return out


def subtree_at(t, path):
    for i in path:
        if i >= len(t):
            raise InvalidTreePair(f"path {path} leaves the tree")
        t = t[i]
    return t


def replace_at(t, path, new):
    if not path:
        return new
    i = path[0]
    if i >= len(t):
        raise InvalidTreePair(f"path {path} leaves the tree")
    return t[:i] + (replace_at(t[i], path[1:], new),) + t[i + 1 :]


def interval_path(left, width):
    """Arity sequence and child path reaching the standard interval ``[left, left+width]``.

    Binary subdivisions are taken first whenever possible.
    """
    left, width = SixAdic(left), SixAdic(width)
    ratio = ONE / width
    if ratio.den != 1:
        raise NotRepresentable(f"{width} is not the width of a standard interval")
    n = ratio.num
    pos = left / width
    if pos.den != 1 or not (0 <= pos.num < n):
        raise NotRepresentable(f"[{left}, {left + width}] is not a standard interval")
    m = pos.num
    arities, path = [], []
    while n > 1:
        k = 2 if n % 2 == 0 else 3
        n //= k
        arities.append(k)
        path.append(m // n)
        m %= n
    return arities, tuple(path)


def _tree_along(arities, path, payload):
    """Tree following ``path`` with ``payload`` at its end and leaves elsewhere."""
    if not arities:
        return payload
    kids = [LEAF] * arities[0]
    kids[path[0]] = _tree_along(arities[1:], path[1:], payload)
    return tuple(kids)


# -- text form ---------------------------------------------------------------


def tree_to_sexpr(t):
    if not t:
        return "*"
    return "(" + str(len(t)) + " " + " ".join(tree_to_sexpr(c) for c in t) + ")"


def _tokenize(text):
    toks = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "()*":
            toks.append((c, i))
            i += 1
        else:
            j = i
            while j < len(text) and not text[j].isspace() and text[j] not in "()*":
                j += 1
            toks.append((text[i:j], i))
            i = j
    return toks


def _parse_node(toks, pos):
    if pos >= len(toks):
        raise ParseError("unexpected end of tree expression", None)
    tok, off = toks[pos]
    if tok == "*":
        return LEAF, pos + 1
    if tok != "(":
        raise ParseError(f"unexpected token {tok!r}", off)
    if pos + 1 >= len(toks):
        raise ParseError("unexpected end of tree expression", off)
    head, hoff = toks[pos + 1]
    if head not in ("2", "3"):
        raise ParseError(f"expected caret arity 2 or 3, got {head!r}", hoff)
    k = int(head)
    pos += 2
    kids = []
    for _ in range(k):
        child, pos = _parse_node(toks, pos)
        kids.append(child)
    if pos >= len(toks) or toks[pos][0] != ")":
        off = toks[pos][1] if pos < len(toks) else None
        raise ParseError(f"expected ')' closing a {k}-caret", off)
    return tuple(kids), pos + 1


def parse_tree(text):
    toks = _tokenize(text)
    t, pos = _parse_node(toks, 0)
    if pos != len(toks):
        raise ParseError("trailing input after tree", toks[pos][1])
    return t


def parse_pair(text):
    toks = _tokenize(text)
    if len(toks) < 2 or toks[0][0] != "(" or toks[1][0] != "pair":
        raise ParseError("a pair looks like (pair DOMAIN RANGE)", 0)
    d, pos = _parse_node(toks, 2)
    r, pos = _parse_node(toks, pos)
    if pos >= len(toks) or toks[pos][0] != ")":
        raise ParseError("expected ')' closing the pair", toks[pos][1] if pos < len(toks) else None)
    if pos + 1 != len(toks):
        raise ParseError("trailing input after pair", toks[pos + 1][1])
    return TreePair(d, r)


def _tree_to_json(t):
    if not t:
        return "*"
    return [len(t)] + [_tree_to_json(c) for c in t]


def _tree_from_json(obj):
    if obj == "*" or obj is None:
        return LEAF
    if isinstance(obj, list) and obj and obj[0] in (2, 3) and len(obj) == obj[0] + 1:
        return tuple(_tree_from_json(c) for c in obj[1:])
    raise InvalidTreePair(f"malformed tree JSON: {obj!r}")


# -- pairs -------------------------------------------------------------------


class TreePair:
    """A tree-pair diagram; leaf i of ``domain`` maps affinely onto leaf i of ``range``."""

    __slots__ = ("domain", "range", "_plmap")

    def __init__(self, domain, range, *, check=True):
        if check:
            _check_tree(domain)
            _check_tree(range)
            if leaf_count(domain) != leaf_count(range):
                raise InvalidTreePair(
                    f"leaf counts differ: {leaf_count(domain)} vs {leaf_count(range)}"
                )
        self.domain = domain
        self.range = range
        self._plmap = None

    def to_plmap(self):
        if self._plmap is None:
            self._plmap = to_plmap(self)
        return self._plmap

    def __mul__(self, other):
        if not isinstance(other, TreePair):
            return NotImplemented
        return multiply(self, other)

    def __invert__(self):
        return invert(self)

    def inverse(self):
        return invert(self)

    def __pow__(self, k):
        base = self if k >= 0 else invert(self)
        out = identity_pair()
        for _ in range(abs(k)):
            out = multiply(out, base)
        return out

    def __eq__(self, other):
        if not isinstance(other, TreePair):
            return NotImplemented
        return self.domain == other.domain and self.range == other.range

    def __hash__(self):
        return hash((self.domain, self.range))

    def same_element(self, other):
        return self.to_plmap() == other.to_plmap()

    def is_identity(self):
        return self.to_plmap().is_identity()

    def depth(self):
        return max(depth(self.domain), depth(self.range))

    def leaf_count(self):
        return leaf_count(self.domain)

    def __repr__(self):
        return f"TreePair({tree_to_sexpr(self.domain)!r}, {tree_to_sexpr(self.range)!r})"

    def to_sexpr(self):
        return f"(pair {tree_to_sexpr(self.domain)} {tree_to_sexpr(self.range)})"

    def to_json(self):
        return {"domain": _tree_to_json(self.domain), "range": _tree_to_json(self.range)}

    @classmethod
    def from_json(cls, obj):
        try:
            return cls(_tree_from_json(obj["domain"]), _tree_from_json(obj["range"]))
        except (KeyError, TypeError) as exc:
            raise InvalidTreePair(f"malformed pair JSON: {exc}") from exc


def identity_pair():
    return TreePair(LEAF, LEAF, check=False)


def to_plmap(p):
    """The PL map sending each domain leaf affinely onto the matching range leaf."""
    d = leaf_intervals(p.domain)
    r = leaf_intervals(p.range)
    if len(d) != len(r):
        raise InvalidTreePair("leaf counts differ")
    pts = [(a[0], b[0]) for a, b in zip(d, r)]
    pts.append((ONE, ONE))
    return PLMap._trusted(pts)


def invert(p):
    return TreePair(p.range, p.domain, check=False)


# -- refinement --------------------------------------------------------------


def _split_arity(rel):
    # rel = u / (2^a 3^b) in lowest terms; binary first
    return 2 if rel.den % 2 == 0 else 3


def refine_to_contain(t, cuts):
    """Extend ``t`` until every cut is a leaf boundary.

    A leaf containing a missing cut is split by a 2-caret when the cut's
    relative position has an even denominator and by a 3-caret otherwise.
    """
    cuts = sorted(set(SixAdic(c) for c in cuts))

    def walk(n, left, width, cs):
        if not cs:
            return n
        if not n:
            rel = (cs[0] - left) / width
            n = (LEAF,) * _split_arity(rel)
        k = len(n)
        w = width / k if k == 2 else width * SixAdic._raw(1, 3)
        kids = []
        j = 0
        for i, c in enumerate(n):
            lo = left + w * i
            hi = lo + w
            mine = []
            while j < len(cs) and cs[j] < hi:
                if cs[j] > lo:
                    mine.append(cs[j])
                j += 1
            if j < len(cs) and cs[j] == hi:
                j += 1
            kids.append(walk(c, lo, w, mine))
        return tuple(kids)

    inside = [c for c in cuts if 0 < c < 1]
    if len(inside) != len(cuts):
        raise ValueError("cuts must lie strictly inside (0, 1)")
    return walk(t, ZERO, ONE, inside)


class _Node:
    __slots__ = ("left", "width", "kids")

    def __init__(self, left, width):
        self.left = left
        self.width = width
        self.kids = None

    def freeze(self):
        if self.kids is None:
            return LEAF
        return tuple(k.freeze() for k in self.kids)


def _thaw(t, left, width, leaves):
    node = _Node(left, width)
    if t:
        k = len(t)
        w = width / k if k == 2 else width * SixAdic._raw(1, 3)
        node.kids = [_thaw(c, left + w * i, w, leaves) for i, c in enumerate(t)]
    else:
        leaves.append(node)
    return node


def _slope_ok(f):
    for s in f.slopes():
        for n in (s.numerator, s.denominator):
            while n % 2 == 0:
                n //= 2
            while n % 3 == 0:
                n //= 3
            if n != 1:
                return False
    return True


def _standardize(rec):
    """Subdivide a domain leaf until its image is a standard interval."""
    node, y, s = rec
    iw = node.width * s
    if iw.num == 1 and (y / iw).den == 1:
        return [rec]
    if iw.num % 2 == 0:
        k = 2
    elif iw.num % 3 == 0:
        k = 3
    elif iw.num == 1:
        k = _split_arity(y / iw)
    else:
        raise NotRepresentable(f"image width {iw} is not reachable by subdivision")
    w = node.width / k
    node.kids = [_Node(node.left + w * i, w) for i in range(k)]
    out = []
    for i, kid in enumerate(node.kids):
        out.extend(_standardize([kid, y + s * w * i, s]))
    return out


class _GiveUp(Exception):
    pass


def from_plmap(f, max_depth=None):
    """A reduced tree pair representing ``f``.

    The domain is first refined so each leaf sits inside one linear piece;
    the range tree is then grown top-down, and whenever one of its split
    points falls strictly inside the image of a domain leaf, that leaf is
    subdivided so the split point becomes an image boundary.  If that greedy
    search runs long, the pair is found instead by alternately refining each
    tree at the images of the other's boundaries.
    """
    if not _slope_ok(f):
        raise NotRepresentable("slopes must be ratios of 2,3-smooth integers")
    if f.is_identity():
        return identity_pair()
    try:
        return _greedy_pair(f, max_depth)
    except _GiveUp:
        return _alternating_pair(f)


def _alternating_pair(f):
    g = _invert_map(f)
    dom = refine_to_contain(LEAF, f.xs[1:-1])
    rng = LEAF
    for _ in range(10_000):
        rng = refine_to_contain(rng, [f(x) for x in boundaries(dom)])
        nxt = refine_to_contain(dom, [g(y) for y in boundaries(rng)])
        if nxt == dom:
            return reduce(TreePair(dom, rng, check=False))
        dom = nxt
    raise NotRepresentable("boundary refinement did not stabilise")


def _greedy_pair(f, max_depth):
    leaves = []
    root = _thaw(refine_to_contain(LEAF, f.xs[1:-1]), ZERO, ONE, leaves)
    pts = f.points
    # each record: [node, image left, slope]
    recs = []
    j = 0
    for node in leaves:
        while pts[j + 1][0] <= node.left:
            j += 1
        (x0, y0), (x1, y1) = pts[j], pts[j + 1]
        s = (y1 - y0) / (x1 - x0)
        recs.append([node, y0 + s * (node.left - x0), s])
    recs = [r for rec in recs for r in _standardize(rec)]
    if max_depth is None:
        max_depth = 8 * (depth(root.freeze()) + 8)
    budget = [200 * len(recs) + 2000]

    def img_width(rec):
        return rec[0].width * rec[2]

    def split_cost(rec, point):
        rel = (point - rec[1]) / img_width(rec)
        v2, v3 = valuations(rel)
        return max(v2, 0) + max(v3, 0)

    def locate(rs, point):
        for i, rec in enumerate(rs):
            lo = rec[1]
            hi = lo + img_width(rec)
            if lo < point < hi:
                return i
            if point <= lo:
                return None
        return None

    def refine_at(rs, i, point):
        rec = rs[i]
        node, ylo, s = rec
        cut = node.left + (point - ylo) / s
        sub = refine_to_contain(LEAF, [(cut - node.left) / node.width])
        new_leaves = []
        built = _thaw(sub, node.left, node.width, new_leaves)
        node.kids = built.kids
        rs[i : i + 1] = [[leaf, ylo + s * (leaf.left - node.left), s] for leaf in new_leaves]

    def build(jl, jw, rs, level):
        if len(rs) == 1:
            return LEAF
        if level > max_depth:
            raise NotRepresentable("range tree did not close up; map has no tree-pair diagram")
        budget[0] -= 1
        if budget[0] < 0:
            raise _GiveUp
        # fewest forced subdivisions first, then most children already matched
        best = None
        for k in (2, 3):
            w = jw / k
            cost = 0
            exact = 0
            for m in range(1, k):
                i = locate(rs, jl + w * m)
                if i is not None:
                    cost += split_cost(rs[i], jl + w * m)
            bad = 0
            for rec in rs:
                lo = rec[1]
                m = min(int(((lo - jl) / w).to_fraction()), k - 1)
                cw = img_width(rec)
                if lo + cw <= jl + w * (m + 1):
                    ratio, offset = w / cw, (lo - jl - w * m) / cw
                    bad += ratio.den != 1 or offset.den != 1
                    exact += ratio == 1
            score = (bad, cost, -exact)
            if best is None or score < best[0]:
                best = (score, k)
        k = best[1]
        w = jw / k
        for m in range(1, k):
            point = jl + w * m
            i = locate(rs, point)
            if i is not None:
                refine_at(rs, i, point)
        kids = []
        pos = 0
        for m in range(k):
            hi = jl + w * (m + 1)
            start = pos
            while pos < len(rs) and rs[pos][1] < hi:
                pos += 1
            kids.append(build(jl + w * m, w, rs[start:pos], level + 1))
        return tuple(kids)

    rng = build(ZERO, ONE, recs, 0)
    return reduce(TreePair(root.freeze(), rng, check=False))


# -- reduction and balancing -------------------------------------------------


def _bottom_carets(t):
    """Map ``(first leaf index, arity) -> path`` for carets whose children are all leaves."""
    out = {}
    idx = 0

    def walk(n, path):
        nonlocal idx
        if not n:
            idx += 1
            return
        if all(not c for c in n):
            out[(idx, len(n))] = path
            idx += len(n)
            return
        for i, c in enumerate(n):
            walk(c, path + (i,))

    walk(t, ())
    return out


def _collapse(t, paths):
    if () in paths:
        return LEAF
    if not t:
        return t
    kids = []
    for i, c in enumerate(t):
        sub = {p[1:] for p in paths if p and p[0] == i}
        kids.append(_collapse(c, sub) if sub else c)
    return tuple(kids)


def reduce(p):
    """Cancel carets that sit over the same leaves with the same arity in both trees."""
    d, r = p.domain, p.range
    while True:
        bd, br = _bottom_carets(d), _bottom_carets(r)
        common = bd.keys() & br.keys()
        if not common:
            break
        d = _collapse(d, {bd[k] for k in common})
        r = _collapse(r, {br[k] for k in common})
    out = TreePair(d, r, check=False)
    out._plmap = p._plmap
    return out


def _full_binary(k):
    if k == 0:
        return LEAF
    c = _full_binary(k - 1)
    return (c, c)


def _graft(t, fillers):
    """Replace the leaves of ``t`` in order by ``fillers``."""
    it = iter(fillers)

    def walk(n):
        if not n:
            return next(it)
        return tuple(walk(c) for c in n)

    return walk(t)


def balance(p, filler=None):
    """Pad both trees identically so every leaf sits at the maximum depth.

    ``filler(index, missing)`` returns the subtree hung from leaf ``index``
    (of height exactly ``missing`` on every branch); complete binary trees by
    default.
    """
    dd, rd = leaf_depths(p.domain), leaf_depths(p.range)
    if dd != rd:
        raise CannotBalance("leaf depth sequences differ, so the element is not in F(3/2)")
    top = max(dd)
    pads = []
    for i, d in enumerate(dd):
        sub = filler(i, top - d) if filler else _full_binary(top - d)
        if any(x != top - d for x in leaf_depths(sub)):
            raise CannotBalance(f"filler for leaf {i} does not have uniform height {top - d}")
        pads.append(sub)
    out = TreePair(_graft(p.domain, pads), _graft(p.range, pads), check=False)
    out._plmap = p._plmap
    return out


@dataclass(frozen=True)
class DepthStats:
    n2: int
    n3: int
    b: int
    leaves: int
    depth: int


def depth_stats(t):
    """Bottom-row statistics of a balanced tree.

    With ``b`` carets in the last row and ``leaves`` leaves, the counts obey
    ``n2 = 3b - leaves`` and ``n3 = leaves - 2b``.
    """
    ds = leaf_depths(t)
    d = ds[0]
    if any(x != d for x in ds):
        raise NotBalanced("leaves are not all at the same depth")
    n2 = n3 = 0

    def walk(n, level):
        nonlocal n2, n3
        if not n:
            return
        if level == d - 1:
            if len(n) == 2:
                n2 += 1
            else:
                n3 += 1
            return
        for c in n:
            walk(c, level + 1)

    walk(t, 0)
    return DepthStats(n2=n2, n3=n3, b=n2 + n3, leaves=len(ds), depth=d)


def is_member(p):
    """True iff the leaf depth sequences of the two trees agree."""
    return leaf_depths(p.domain) == leaf_depths(p.range)


def _force(t, k):
    """Rewrite the top of ``t`` so its root has arity ``k``, same partition or finer."""
    if not t:
        return (LEAF,) * k
    if len(t) == k:
        return t
    j = len(t)
    grand = [g for c in t for g in _force(c, k)]
    return tuple(tuple(grand[i * j : (i + 1) * j]) for i in range(k))


def _common(a, b):
    # smallest of the two candidate common refinements at each level
    if not a:
        return b
    if not b:
        return a
    if len(a) == len(b):
        return tuple(_common(x, y) for x, y in zip(a, b))
    c1 = _common(_force(a, len(b)), b)
    c2 = _common(a, _force(b, len(a)))
    return c1 if leaf_count(c1) <= leaf_count(c2) else c2


def _tree_for(lefts, left, width):
    """A tree whose leaves start exactly at ``lefts`` inside the given interval."""
    if len(lefts) == 1:
        return LEAF
    have = set(lefts)
    for k in (2, 3):
        w = width / k if k == 2 else width * SixAdic._raw(1, 3)
        if not all(left + w * i in have for i in range(1, k)):
            continue
        kids = []
        j = 0
        for i in range(k):
            hi = left + w * (i + 1)
            start = j
            while j < len(lefts) and lefts[j] < hi:
                j += 1
            sub = _tree_for(lefts[start:j], left + w * i, w)
            if sub is None:
                break
            kids.append(sub)
        else:
            return tuple(kids)
    return None


def _subtrees_inside(t, fine):
    """For each leaf of ``t``, the subtree cutting it the way ``fine`` does."""
    cuts = [a for a, _, _ in leaf_intervals(fine)]
    out = []
    j = 0
    for left, width, _ in leaf_intervals(t):
        hi = left + width
        start = j
        while j < len(cuts) and cuts[j] < hi:
            j += 1
        sub = _tree_for(cuts[start:j], left, width)
        if sub is None:
            raise InvalidTreePair("refinement is not compatible with the tree")
        out.append(sub)
    return out


def multiply(p, q):
    """The product ``p·q`` (apply ``p`` first), as a reduced diagram.

    The range of ``p`` and the domain of ``q`` are brought to a common
    refinement; the matching subdivisions are then grafted onto the outer
    trees.
    """
    c = _common(p.range, q.domain)
    dom = _graft(p.domain, _subtrees_inside(p.range, c))
    rng = _graft(q.range, _subtrees_inside(q.domain, c))
    return reduce(TreePair(dom, rng, check=False))


def hang(p, left, width):
    """Embed ``p`` in the standard interval ``[left, left + width]``.

    Both trees are hung from the leaf reaching that interval, which gives the
    conjugate of the element into the interval, identity outside.
    """
    arities, path = interval_path(left, width)
    return TreePair(
        _tree_along(arities, path, p.domain),
        _tree_along(arities, path, p.range),
        check=False,
    )


def hang_along(p, arities, steps):
    """Hang ``p`` from the node reached by ``steps`` through carets of the given arities."""
    return TreePair(
        _tree_along(list(arities), tuple(steps), p.domain),
        _tree_along(list(arities), tuple(steps), p.range),
        check=False,
    )


# -- random members ------------------------------------------------------------


def random_tree(rng, max_depth, grow=0.5):
    """A random tree: each leaf above ``max_depth`` splits with probability ``grow`` (root always)."""

    def build(level):
        if level >= max_depth or (level > 0 and rng.random() >= grow):
            return LEAF
        return tuple(build(level + 1) for _ in range(rng.choice((2, 3))))

    return build(0)


def _trees_with_depths(seq):
    """Sampler for trees whose leaf depth sequence is ``seq`` (counts by dynamic programming)."""
    n = len(seq)

    @lru_cache(maxsize=None)
    def ways(i, j, level):
        if j - i == 1 and seq[i] == level:
            return 1
        if j - i < 2 or min(seq[i:j]) <= level:
            return 0
        total = 0
        for m in range(i + 1, j):
            left = ways(i, m, level + 1)
            if left:
                total += left * ways(m, j, level + 1)
                for q in range(m + 1, j):
                    total += left * ways(m, q, level + 1) * ways(q, j, level + 1)
        return total

    def draw(rng, i=0, j=n, level=0):
        if j - i == 1 and seq[i] == level:
            return LEAF
        pick = rng.randrange(ways(i, j, level))
        for m in range(i + 1, j):
            left = ways(i, m, level + 1)
            if not left:
                continue
            w = left * ways(m, j, level + 1)
            if pick < w:
                return (draw(rng, i, m, level + 1), draw(rng, m, j, level + 1))
            pick -= w
            for q in range(m + 1, j):
                w = left * ways(m, q, level + 1) * ways(q, j, level + 1)
                if pick < w:
                    return (draw(rng, i, m, level + 1), draw(rng, m, q, level + 1), draw(rng, q, j, level + 1))
                pick -= w
        raise AssertionError("sampler ran out of choices")

    return ways, draw


def random_member(rng, max_depth=4, grow=0.5):
    """A random tree pair of F(3/2) with both trees of depth at most ``max_depth``.

    The domain is drawn by :func:`random_tree`; the range is drawn uniformly
    among the trees with the same leaf depth sequence, so the pair always
    passes the leaf-depth test.
    """
    d = random_tree(rng, max_depth, grow)
    _, draw = _trees_with_depths(tuple(leaf_depths(d)))
    return TreePair(d, draw(rng), check=False)
