"""Words in the generators ``l`` and ``r``.

A word is read left to right and acts on [0, 1] in that order, so the word
``a1 a2 ... an`` is the map ``x ↦ an(... a1(x) ...)``.  In text form a
lowercase letter is a generator and the uppercase letter its inverse, so
``"rL"`` is ``r`` followed by ``l⁻¹``.

Words produced by the decomposition pipeline can be astronomically long, so
they are stored as straight-line programs: a node is either a single letter
or the concatenation of two nodes.  Shared subwords are stored once, and
length, first/last letter and a polynomial hash are cached on every node.
Free reduction works directly on that representation.  Cancellation between
two reduced words is located by comparing hashes of suffixes against hashes
of inverted prefixes (binary search on the cancellation length), so the cost
depends on the depth of the program rather than on the length of the word.
Hash equality is trusted there; callers that need certainty evaluate the
result, which is exact.
"""

from dataclasses import dataclass
import json

from .errors import ParseError
from .plmap import compose, generator, identity

__all__ = [
    "Word",
    "RelationPair",
    "parse",
    "free_reduce",
    "evaluate",
    "commutator",
    "substitute",
    "relations",
    "relation_words",
    "cache_maps",
    "REL_A_TEXT",
    "REL_B_TEXT",
]

_MOD = (1 << 61) - 1
_BASE = 0x5DEECE66D
_CODES = {("l", 1): 1, ("r", 1): 2, ("l", -1): 3, ("r", -1): 4}
_TEXT = {("l", 1): "l", ("r", 1): "r", ("l", -1): "L", ("r", -1): "R"}
_FROM_TEXT = {v: k for k, v in _TEXT.items()}


def _pow(e):
    return pow(_BASE, e % (_MOD - 1), _MOD)


class _Node:
    __slots__ = ("left", "right", "letter", "length", "hash", "first", "last", "depth", "_inv", "_red", "_map")

    def __init__(self, left=None, right=None, letter=None):
        self.left, self.right, self.letter = left, right, letter
        self._inv = self._red = self._map = None
        if letter is not None:
            self.length = 1
            self.hash = _CODES[letter]
            self.first = self.last = letter
            self.depth = 0
        else:
            self.length = left.length + right.length
            self.hash = (left.hash * _pow(right.length) + right.hash) % _MOD
            self.first, self.last = left.first, right.last
            self.depth = 1 + max(left.depth, right.depth)


_LETTERS = {k: _Node(letter=k) for k in _CODES}
for _k, _n in _LETTERS.items():
    _n._inv = _LETTERS[(_k[0], -_k[1])]
    _n._red = _n


def _cat(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return _Node(a, b)


def _cat_all(nodes):
    """Balanced concatenation of a list of nodes (``None`` entries skipped)."""
    nodes = [n for n in nodes if n is not None]
    if not nodes:
        return None
    while len(nodes) > 1:
        nodes = [_cat(nodes[i], nodes[i + 1]) if i + 1 < len(nodes) else nodes[i] for i in range(0, len(nodes), 2)]
    return nodes[0]


def _postorder(root, attr):
    """Nodes below ``root`` lacking the cached attribute, children before parents."""
    out, stack, seen = [], [(root, False)], set()
    while stack:
        n, done = stack.pop()
        if done:
            out.append(n)
            continue
        if id(n) in seen or (attr and getattr(n, attr) is not None):
            continue
        seen.add(id(n))
        stack.append((n, True))
        if n.letter is None:
            stack.append((n.right, False))
            stack.append((n.left, False))
    return out


def _inv(node):
    if node is None:
        return None
    if node._inv is None:
        for n in _postorder(node, "_inv"):
            n._inv = _Node(n.right._inv, n.left._inv)
            n._inv._inv = n
    return node._inv


def _prefix(node, k):
    if k <= 0:
        return None
    lefts = []
    while k < node.length:
        if k <= node.left.length:
            node = node.left
        else:
            lefts.append(node.left)
            k -= node.left.length
            node = node.right
    out = node
    for piece in reversed(lefts):
        out = _cat(piece, out)
    return out


def _suffix(node, k):
    if k <= 0:
        return None
    rights = []
    while k < node.length:
        if k <= node.right.length:
            node = node.right
        else:
            rights.append(node.right)
            k -= node.right.length
            node = node.left
    out = node
    for piece in reversed(rights):
        out = _cat(out, piece)
    return out


def _hash_suffix(node, k):
    h, scale = 0, 0
    # accumulate right pieces as we descend
    while k < node.length:
        if k <= node.right.length:
            node = node.right
        else:
            h = (node.right.hash * _pow(scale) + h) % _MOD if scale else node.right.hash
            scale += node.right.length
            k -= node.right.length
            node = node.left
    return (node.hash * _pow(scale) + h) % _MOD if scale else node.hash


def _cancel_length(u, v):
    """Length of the longest suffix of ``u`` that is the inverse of a prefix of ``v``."""
    if u is None or v is None:
        return 0
    g, e = v.first
    if u.last != (g, -e):
        return 0
    iv = _inv(v)
    lo, hi = 1, min(u.length, v.length)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if _hash_suffix(u, mid) == _hash_suffix(iv, mid):
            lo = mid
        else:
            hi = mid - 1
    return lo


def _reduced_cat(u, v):
    k = _cancel_length(u, v)
    if k == 0:
        return _cat(u, v)
    return _cat(_prefix(u, u.length - k), _suffix(v, v.length - k))


def _reduce(node):
    if node is None:
        return None
    if node._red is None:
        for n in _postorder(node, "_red"):
            a, b = _red_of(n.left), _red_of(n.right)
            if a is n.left and b is n.right and not _cancel_length(a, b):
                n._red = n
                continue
            r = _reduced_cat(a, b)
            n._red = r if r is not None else _EMPTY_MARK
    return None if node._red is _EMPTY_MARK else node._red


_EMPTY_MARK = object()


def _red_of(n):
    return None if n._red is _EMPTY_MARK else n._red


def _letters(node):
    if node is None:
        return
    stack = [node]
    while stack:
        n = stack.pop()
        if n.letter is not None:
            yield n.letter
        else:
            stack.append(n.right)
            stack.append(n.left)


def _parse_letters(text):
    out = []
    for pos, ch in enumerate(text):
        if ch.isspace():
            continue
        if ch not in _FROM_TEXT:
            raise ParseError(f"unexpected character {ch!r} in word", pos)
        out.append(_FROM_TEXT[ch])
    return out


def _normalize_letter(item):
    gen, exp = item
    if gen not in ("l", "r") or exp not in (1, -1):
        raise ValueError(f"not a generator letter: {item!r}")
    return gen, exp


class Word:
    """An element of the free group on ``l`` and ``r``, kept as shared subwords.

    Build one from text (``Word("lrLR")``) or from ``(generator, ±1)`` pairs.
    Products concatenate without reducing; use :func:`free_reduce`.
    """

    __slots__ = ("node",)

    def __init__(self, letters=()):
        if isinstance(letters, Word):
            self.node = letters.node
            return
        if isinstance(letters, str):
            items = _parse_letters(letters)
        else:
            items = [_normalize_letter(x) for x in letters]
        self.node = _cat_all([_LETTERS[x] for x in items])

    @classmethod
    def _of(cls, node):
        w = object.__new__(cls)
        w.node = node
        return w

    @classmethod
    def letter(cls, gen, exp=1):
        return cls._of(_LETTERS[_normalize_letter((gen, exp))])

    @property
    def length(self):
        """Number of letters; may exceed what ``len()`` can report."""
        return 0 if self.node is None else self.node.length

    def __len__(self):
        return self.length

    def __bool__(self):
        return self.node is not None

    def __iter__(self):
        return _letters(self.node)

    @property
    def letters(self):
        return list(self)

    @property
    def program_size(self):
        """Number of distinct nodes in the straight-line program."""
        if self.node is None:
            return 0
        seen, stack = set(), [self.node]
        while stack:
            n = stack.pop()
            if id(n) in seen:
                continue
            seen.add(id(n))
            if n.letter is None:
                stack.extend((n.left, n.right))
        return len(seen)

    def __mul__(self, other):
        if not isinstance(other, Word):
            return NotImplemented
        return Word._of(_cat(self.node, other.node))

    def __invert__(self):
        return Word._of(_inv(self.node))

    def inverse(self):
        return ~self

    def __pow__(self, k):
        base = self if k >= 0 else ~self
        out, k = Word(), abs(k)
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def is_reduced(self):
        return _reduce(self.node) is self.node

    def __eq__(self, other):
        if isinstance(other, str):
            other = Word(other)
        if not isinstance(other, Word):
            return NotImplemented
        if self.length != other.length:
            return False
        if self.length == 0:
            return True
        if self.node.hash != other.node.hash:
            return False
        if self.length <= 1 << 16:
            return list(self) == list(other)
        return True

    def __hash__(self):
        return hash((self.length, 0 if self.node is None else self.node.hash))

    def __str__(self):
        return "".join(_TEXT[x] for x in self)

    def __repr__(self):
        if self.length > 80:
            return f"Word(<{self.length} letters>)"
        return f"Word({str(self)!r})"

    def to_json(self):
        return [[g, e] for g, e in self]

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            obj = json.loads(obj)
        try:
            return cls([(g, int(e)) for g, e in obj])
        except (TypeError, ValueError) as exc:
            raise ParseError(f"malformed word JSON: {exc}") from exc

    def to_program(self):
        """Compact JSON for long words: ``{"program": [...], "length": n}``.

        Entries are a letter ``[gen, ±1]`` or ``[i, j]``, the concatenation of
        earlier entries ``i`` and ``j``; the last entry is the whole word.
        """
        if self.node is None:
            return {"program": [], "length": 0}
        index, rows = {}, []
        for n in _postorder(self.node, None):
            if n.letter is not None:
                rows.append(list(n.letter))
            else:
                rows.append([index[id(n.left)], index[id(n.right)]])
            index[id(n)] = len(rows) - 1
        return {"program": rows, "length": self.length}

    @classmethod
    def from_program(cls, obj):
        try:
            nodes = []
            for row in obj["program"]:
                a, b = row
                if isinstance(a, str):
                    nodes.append(_LETTERS[_normalize_letter((a, int(b)))])
                else:
                    if not (0 <= a < len(nodes) and 0 <= b < len(nodes)):
                        raise ValueError(f"entry {len(nodes)} refers forward")
                    nodes.append(_cat(nodes[a], nodes[b]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed word program: {exc}") from exc
        return cls._of(nodes[-1] if nodes else None)


def parse(text):
    """Parse the ``l r L R`` text syntax (whitespace ignored)."""
    return Word(text)


def free_reduce(w):
    """Cancel adjacent inverse letters until none remain."""
    return Word._of(_reduce(Word(w).node))


def evaluate(w):
    """The map of ``w`` read left to right (first letter applied first)."""
    node = Word(w).node
    if node is None:
        return identity()
    cache = {}
    for n in _postorder(node, "_map"):
        if n.letter is not None:
            g, e = n.letter
            cache[id(n)] = generator(g) if e == 1 else generator(g).inverse()
        else:
            a = n.left._map if n.left._map is not None else cache[id(n.left)]
            b = n.right._map if n.right._map is not None else cache[id(n.right)]
            cache[id(n)] = compose(a, b)
    return node._map if node._map is not None else cache[id(node)]


def cache_maps(w):
    """Evaluate ``w`` and remember the map of every subword on the program itself."""
    node = Word(w).node
    if node is None:
        return identity()
    for n in _postorder(node, "_map"):
        if n.letter is not None:
            g, e = n.letter
            n._map = generator(g) if e == 1 else generator(g).inverse()
        else:
            n._map = compose(n.left._map, n.right._map)
    return node._map


def commutator(a, b):
    """``a⁻¹ b⁻¹ a b``; this bracket reproduces the two 20-letter relation words."""
    a, b = Word(a), Word(b)
    return ~a * ~b * a * b


def substitute(w, images):
    """Apply the homomorphism sending generator ``g`` to ``images[g]``.

    Shared subwords are mapped once, so iterating a substitution keeps the
    program small even when the words grow geometrically.
    """
    node = Word(w).node
    if node is None:
        return Word()
    img = {}
    for g in ("l", "r"):
        x = Word(images.get(g, Word.letter(g))).node
        img[(g, 1)] = x
        img[(g, -1)] = _inv(x)
    memo = {}
    stack = [(node, False)]
    while stack:
        n, done = stack.pop()
        if id(n) in memo:
            continue
        if n.letter is not None:
            memo[id(n)] = img[n.letter]
        elif done:
            memo[id(n)] = _cat(memo[id(n.left)], memo[id(n.right)])
        else:
            stack.append((n, True))
            stack.append((n.right, False))
            stack.append((n.left, False))
    return Word._of(memo[id(node)])


# -- the two relation words -------------------------------------------------

REL_A_TEXT = "RLRlrLRlrLRLrlRLrlrl"
REL_B_TEXT = "rlrlRLrlRLRlrLRlrLRL"


@dataclass(frozen=True)
class RelationPair:
    """A 20-letter word together with the diagram it equals."""

    name: str
    word: Word
    pair: object

    def holds(self):
        return evaluate(self.word) == self.pair.to_plmap()


def relation_words():
    """Both relation words assembled from their bracket forms."""
    l, r = Word("l"), Word("r")
    a = commutator(commutator(r, l) ** 2 * r, l)
    b = commutator(~r, commutator(~l, ~r) ** 2 * ~l)
    return free_reduce(a), free_reduce(b)


def relations():
    """``(REL_A, REL_B)``: the words for ``l`` and ``r`` hung from the middle third."""
    from .anatomy import primed_stickbug

    return (
        RelationPair("REL_A", Word(REL_A_TEXT), primed_stickbug(0, "left")),
        RelationPair("REL_B", Word(REL_B_TEXT), primed_stickbug(0, "right")),
    )
