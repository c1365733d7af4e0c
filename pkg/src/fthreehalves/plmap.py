"""Piecewise-linear homeomorphisms of [0, 1] with breakpoints in Z[1/6].

A :class:`PLMap` is stored as its list of breakpoints ``(x, y)`` starting at
``(0, 0)`` and ending at ``(1, 1)``, with collinear interior points removed.
That makes the representation canonical, so two maps are equal exactly when
their point lists are equal.

Products follow the right-action convention used throughout the package:
``f * g`` (or ``compose(f, g)``) applies ``f`` first, then ``g``.
"""

from bisect import bisect_left
from fractions import Fraction

from .errors import InvalidMap, OutOfDomain
from .exactnum import ONE, ZERO, SixAdic

__all__ = [
    "PLMap",
    "IntervalSet",
    "identity",
    "evaluate",
    "compose",
    "invert",
    "support",
    "is_member",
    "member_violation",
    "generator",
    "stickbug_map",
    "hang_map",
    "mirror",
]


def _six(v):
    return v if isinstance(v, SixAdic) else SixAdic(v)


def _canonical(points):
    out = [points[0]]
    for p in points[1:]:
        if len(out) >= 2:
            (x0, y0), (x1, y1) = out[-2], out[-1]
            if (y1 - y0) * (p[0] - x1) == (p[1] - y1) * (x1 - x0):
                out[-1] = p
                continue
        out.append(p)
    return tuple(out)


class PLMap:
    """Canonical orientation-preserving PL homeomorphism of [0, 1]."""

    __slots__ = ("points", "_xs", "_key")

    def __init__(self, points, *, check=True):
        pts = [(_six(x), _six(y)) for x, y in points]
        if check:
            if len(pts) < 2 or pts[0] != (ZERO, ZERO) or pts[-1] != (ONE, ONE):
                raise InvalidMap("a map must start at (0,0) and end at (1,1)")
            for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
                if not (x0 < x1 and y0 < y1):
                    raise InvalidMap("breakpoints must be strictly increasing in x and y")
        self.points = _canonical(pts)
        self._xs = None
        self._key = None

    @classmethod
    def _trusted(cls, points):
        self = object.__new__(cls)
        self.points = _canonical(points)
        self._xs = None
        self._key = None
        return self

    # -- basic queries ------------------------------------------------------

    @property
    def xs(self):
        if self._xs is None:
            self._xs = [p[0] for p in self.points]
        return self._xs

    def breakpoints(self):
        """Interior breakpoints as ``(x, y)`` pairs."""
        return list(self.points[1:-1])

    def segments(self):
        """Yield ``(x0, x1, y0, y1)`` for every linear piece."""
        pts = self.points
        for i in range(len(pts) - 1):
            yield pts[i][0], pts[i + 1][0], pts[i][1], pts[i + 1][1]

    def slopes(self):
        return [
            Fraction((y1 - y0).to_fraction() / (x1 - x0).to_fraction())
            for x0, x1, y0, y1 in self.segments()
        ]

    def is_identity(self):
        return len(self.points) == 2

    def __call__(self, x):
        return evaluate(self, x)

    # -- group structure ----------------------------------------------------

    def __mul__(self, other):
        if not isinstance(other, PLMap):
            return NotImplemented
        return compose(self, other)

    def __invert__(self):
        return invert(self)

    def inverse(self):
        return invert(self)

    def __pow__(self, k):
        if k < 0:
            return invert(self) ** (-k)
        result, base = identity(), self
        while k:
            if k & 1:
                result = compose(result, base)
            base = compose(base, base)
            k >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, PLMap):
            return NotImplemented
        return self.points == other.points

    def __hash__(self):
        return hash(self.points)

    def key(self):
        """Deterministic byte serialization; equal maps give equal keys."""
        if self._key is None:
            parts = []
            for x, y in self.points[1:-1]:
                for v in (x, y):
                    for n in (v.num, v.den):
                        b = n.to_bytes((n.bit_length() + 8) // 8, "big", signed=True)
                        parts.append(len(b).to_bytes(2, "big"))
                        parts.append(b)
            self._key = b"".join(parts)
        return self._key

    # -- text / json --------------------------------------------------------

    def __repr__(self):
        inner = ", ".join(f"({x}, {y})" for x, y in self.points)
        return f"PLMap([{inner}])"

    def to_json(self):
        return {"points": [[x.to_json(), y.to_json()] for x, y in self.points]}

    @classmethod
    def from_json(cls, obj):
        try:
            pts = obj["points"]
            return cls([(SixAdic.from_json(x), SixAdic.from_json(y)) for x, y in pts])
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InvalidMap):
                raise
            raise InvalidMap(f"malformed map JSON: {exc}") from exc

    def pretty(self):
        rows = []
        for x0, x1, y0, y1 in self.segments():
            slope = (y1 - y0).to_fraction() / (x1 - x0).to_fraction()
            rows.append(f"[{x0}, {x1}] → [{y0}, {y1}] @ {slope}")
        return "\n".join(rows)


def identity():
    return _IDENTITY


_IDENTITY = PLMap._trusted(((ZERO, ZERO), (ONE, ONE)))


def evaluate(f, x):
    """Image of ``x`` under ``f``, exactly."""
    x = _six(x)
    if x < 0 or x > 1:
        raise OutOfDomain(f"{x} is outside [0, 1]")
    pts = f.points
    i = bisect_left(f.xs, x)
    if pts[i][0] == x:
        return pts[i][1]
    (x0, y0), (x1, y1) = pts[i - 1], pts[i]
    return y0 + (y1 - y0) * (x - x0) / (x1 - x0)


def _inverse_at(f, y):
    pts = f.points
    ys = [p[1] for p in pts]
    i = bisect_left(ys, y)
    if ys[i] == y:
        return pts[i][0]
    (x0, y0), (x1, y1) = pts[i - 1], pts[i]
    return x0 + (x1 - x0) * (y - y0) / (y1 - y0)


def compose(f, g):
    """The product ``f·g``: first ``f``, then ``g``, i.e. ``x ↦ g(f(x))``."""
    if f.is_identity():
        return g
    if g.is_identity():
        return f
    fp, gp = f.points, g.points
    out = [(ZERO, ZERO)]
    j = 1
    # walk f's segments; inside each, pick up g's breakpoints in the image range
    for i in range(1, len(fp)):
        x0, y0 = fp[i - 1]
        x1, y1 = fp[i]
        while gp[j][0] < y1:
            u, v = gp[j]
            out.append((x0 + (x1 - x0) * (u - y0) / (y1 - y0), v))
            j += 1
        # y1 now lies on g's segment ending at gp[j]
        u0, v0 = gp[j - 1]
        u1, v1 = gp[j]
        if u1 == y1:
            out.append((x1, v1))
            j += 1
        else:
            out.append((x1, v0 + (v1 - v0) * (y1 - u0) / (u1 - u0)))
    return PLMap._trusted(out)


def invert(f):
    return PLMap._trusted([(y, x) for x, y in f.points])


class IntervalSet:
    """Finite sorted union of disjoint closed intervals."""

    __slots__ = ("intervals",)

    def __init__(self, intervals=()):
        ivs = sorted((_six(a), _six(b)) for a, b in intervals)
        merged = []
        for a, b in ivs:
            if a > b:
                raise ValueError(f"empty interval [{a}, {b}]")
            if merged and a <= merged[-1][1]:
                if b > merged[-1][1]:
                    merged[-1] = (merged[-1][0], b)
            else:
                merged.append((a, b))
        self.intervals = tuple(merged)

    def is_empty(self):
        return not self.intervals

    def __bool__(self):
        return bool(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    def __len__(self):
        return len(self.intervals)

    def __eq__(self, other):
        if isinstance(other, IntervalSet):
            return self.intervals == other.intervals
        return NotImplemented

    def __hash__(self):
        return hash(self.intervals)

    def __repr__(self):
        return "IntervalSet([" + ", ".join(f"[{a}, {b}]" for a, b in self.intervals) + "])"

    def hull(self):
        if not self.intervals:
            return None
        return self.intervals[0][0], self.intervals[-1][1]

    def union(self, other):
        return IntervalSet(self.intervals + tuple(other))

    def contains_point(self, x):
        return any(a <= x <= b for a, b in self.intervals)

    def within(self, a, b):
        """True iff the whole set lies inside the closed interval [a, b]."""
        return all(a <= lo and hi <= b for lo, hi in self.intervals)

    def issubset(self, other):
        return all(any(c <= a and b <= d for c, d in other.intervals) for a, b in self.intervals)

    def to_json(self):
        return [[a.to_json(), b.to_json()] for a, b in self.intervals]


def support(f):
    """Closure of ``{t : f(t) != t}`` as exact closed intervals."""
    ivs = []
    for x0, x1, y0, y1 in f.segments():
        if x0 == y0 and x1 == y1:
            continue
        if ivs and ivs[-1][1] == x0:
            ivs[-1] = (ivs[-1][0], x1)
        else:
            ivs.append((x0, x1))
    out = IntervalSet.__new__(IntervalSet)
    out.intervals = tuple(ivs)
    return out


def _power_of_three_halves(q):
    p, d = q.numerator, q.denominator
    if p == d:
        return True
    if p > d:
        p, d = d, p  # now p/d = (2/3)^k
    k = 0
    while d % 3 == 0:
        d //= 3
        k += 1
    return d == 1 and p == 1 << k


def member_violation(f):
    """Name of the first F(3/2) rule ``f`` breaks, or ``None`` if it is a member."""
    for s in f.slopes():
        if not _power_of_three_halves(s):
            return f"slope group: slope {s} is not a power of 3/2"
    return None


def is_member(f):
    """True iff every slope of ``f`` is an integer power of 3/2."""
    return member_violation(f) is None


def hang_map(f, a, w):
    """Conjugate ``f`` into the interval ``[a, a + w]``; identity elsewhere."""
    a, w = _six(a), _six(w)
    pts = [(ZERO, ZERO)]
    for x, y in f.points:
        p = (a + w * x, a + w * y)
        if p != pts[-1]:
            pts.append(p)
    if pts[-1] != (ONE, ONE):
        pts.append((ONE, ONE))
    return PLMap._trusted(pts)


def mirror(f):
    """Conjugate of ``f`` by the reflection ``t ↦ 1 - t``."""
    return PLMap._trusted([(1 - x, 1 - y) for x, y in reversed(f.points)])


_L_POINTS = ((0, 1), (0, 1)), ((2, 9), (1, 3)), ((1, 3), (4, 9)), ((2, 3), (2, 3)), ((1, 1), (1, 1))
_R_POINTS = ((0, 1), (0, 1)), ((1, 3), (1, 3)), ((5, 9), (2, 3)), ((2, 3), (7, 9)), ((1, 1), (1, 1))


def _from_pairs(pairs):
    return PLMap([(SixAdic(*x), SixAdic(*y)) for x, y in pairs])


_GENERATORS = {"l": _from_pairs(_L_POINTS), "r": _from_pairs(_R_POINTS)}


def generator(which):
    """The generator ``l`` or ``r`` as an analytic map."""
    try:
        return _GENERATORS[which]
    except KeyError:
        raise ValueError(f"unknown generator {which!r}; expected 'l' or 'r'") from None


def stickbug_map(n, side="left"):
    """The stick bug ``l_n`` (``side='left'``) or ``r_n`` (``side='right'``).

    ``l_n`` is ``l`` squeezed into ``[0, 3^-n]`` and ``r_n`` is ``r`` squeezed
    into ``[1 - 3^-n, 1]``.  Reflecting ``l_n`` through ``t ↦ 1 - t`` gives
    the inverse of ``r_n``.
    """
    if n < 0:
        raise ValueError("stick bug index must be non-negative")
    w = SixAdic(1, 3**n)
    if side == "left":
        return hang_map(_GENERATORS["l"], ZERO, w)
    if side == "right":
        return hang_map(_GENERATORS["r"], 1 - w, w)
    raise ValueError(f"side must be 'left' or 'right', not {side!r}")
