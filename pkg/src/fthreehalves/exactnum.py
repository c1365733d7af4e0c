"""Exact arithmetic in Z[1/6], the rationals whose denominators are 2,3-smooth.

Every breakpoint coordinate and every slope handled by the package is a
:class:`SixAdic`.  Values are immutable, always stored in lowest terms with a
positive denominator, and the constructor refuses anything whose denominator
has a prime factor other than 2 or 3.

>>> SixAdic(4, 6)
SixAdic(2, 3)
>>> SixAdic(1, 2) + SixAdic(1, 3)
SixAdic(5, 6)
>>> valuations(SixAdic(1, 12))
(2, 1)
"""

from fractions import Fraction
from math import gcd
import numbers

from .errors import NotSixAdic, ZeroDenominator, ZeroInput

__all__ = ["SixAdic", "make", "valuations", "is_smooth", "parse", "ZERO", "ONE"]


def _strip(n, p):
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return n, k


def is_smooth(n):
    """True iff the positive integer ``n`` is of the form 2^a 3^b."""
    if n <= 0:
        return False
    n >>= (n & -n).bit_length() - 1
    while n % 3 == 0:
        n //= 3
    return n == 1


class SixAdic:
    """An element of Z[1/6] stored as a reduced fraction ``num/den``."""

    __slots__ = ("num", "den")

    def __new__(cls, num=0, den=1):
        if isinstance(num, SixAdic) and den == 1:
            return num
        if isinstance(num, Fraction) or isinstance(den, Fraction):
            q = Fraction(num) / Fraction(den)
            num, den = q.numerator, q.denominator
        elif not (isinstance(num, numbers.Integral) and isinstance(den, numbers.Integral)):
            raise TypeError(f"SixAdic needs integer parts, got {num!r}/{den!r}")
        num, den = int(num), int(den)
        if den == 0:
            raise ZeroDenominator(f"zero denominator in {num}/0")
        if den < 0:
            num, den = -num, -den
        g = gcd(num, den)
        if g != 1:
            num //= g
            den //= g
        if not is_smooth(den):
            raise NotSixAdic(f"{num}/{den} is not in Z[1/6]")
        return cls._raw(num, den)

    @classmethod
    def _raw(cls, num, den):
        # caller guarantees lowest terms, den > 0, den smooth
        self = object.__new__(cls)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        return self

    def __setattr__(self, name, value):
        raise AttributeError("SixAdic is immutable")

    def __reduce__(self):
        return (SixAdic, (self.num, self.den))

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, SixAdic):
            if self.den == other.den:
                n, d = self.num + other.num, self.den
            else:
                n, d = self.num * other.den + other.num * self.den, self.den * other.den
        elif isinstance(other, int):
            return SixAdic._raw(self.num + other * self.den, self.den)
        else:
            return NotImplemented
        g = gcd(n, d)
        if g == 1:
            return SixAdic._raw(n, d)
        return SixAdic._raw(n // g, d // g)

    __radd__ = __add__

    def __neg__(self):
        return SixAdic._raw(-self.num, self.den)

    def __pos__(self):
        return self

    def __abs__(self):
        return self if self.num >= 0 else -self

    def __sub__(self, other):
        if isinstance(other, SixAdic):
            return self + SixAdic._raw(-other.num, other.den)
        if isinstance(other, int):
            return SixAdic._raw(self.num - other * self.den, self.den)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, int):
            return SixAdic._raw(other * self.den - self.num, self.den)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, SixAdic):
            on, od = other.num, other.den
        elif isinstance(other, int):
            on, od = other, 1
        else:
            return NotImplemented
        g1 = gcd(self.num, od)
        g2 = gcd(on, self.den)
        n = (self.num // g1) * (on // g2)
        d = (self.den // g2) * (od // g1)
        if d < 0:
            n, d = -n, -d
        return SixAdic._raw(n, d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, int):
            other = SixAdic._raw(other, 1)
        elif not isinstance(other, SixAdic):
            return NotImplemented
        if other.num == 0:
            raise ZeroDenominator(f"division of {self} by zero")
        # the reciprocal may leave the ring; the product is re-checked
        n = self.num * other.den
        d = self.den * other.num
        return SixAdic(n, d)

    def __rtruediv__(self, other):
        if isinstance(other, int):
            return SixAdic._raw(other, 1) / self
        return NotImplemented

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k >= 0:
            return SixAdic._raw(self.num**k, self.den**k)
        if self.num == 0:
            raise ZeroDenominator("zero to a negative power")
        return SixAdic(self.den ** (-k), self.num ** (-k))

    # -- comparison ---------------------------------------------------------

    def _cmp_pair(self, other):
        if isinstance(other, SixAdic):
            return self.num * other.den, other.num * self.den
        if isinstance(other, int):
            return self.num, other * self.den
        if isinstance(other, Fraction):
            return self.num * other.denominator, other.numerator * self.den
        return None

    def __eq__(self, other):
        if isinstance(other, SixAdic):
            return self.num == other.num and self.den == other.den
        if isinstance(other, int):
            return self.den == 1 and self.num == other
        if isinstance(other, Fraction):
            return self.num == other.numerator and self.den == other.denominator
        return NotImplemented

    def __hash__(self):
        # consistent with int and Fraction hashing
        if self.den == 1:
            return hash(self.num)
        return hash(Fraction(self.num, self.den))

    def __lt__(self, other):
        p = self._cmp_pair(other)
        return NotImplemented if p is None else p[0] < p[1]

    def __le__(self, other):
        p = self._cmp_pair(other)
        return NotImplemented if p is None else p[0] <= p[1]

    def __gt__(self, other):
        p = self._cmp_pair(other)
        return NotImplemented if p is None else p[0] > p[1]

    def __ge__(self, other):
        p = self._cmp_pair(other)
        return NotImplemented if p is None else p[0] >= p[1]

    def __bool__(self):
        return self.num != 0

    # -- conversions --------------------------------------------------------

    def __float__(self):
        return self.num / self.den

    def to_fraction(self):
        return Fraction(self.num, self.den)

    def __repr__(self):
        return f"SixAdic({self.num}, {self.den})"

    def __str__(self):
        return str(self.num) if self.den == 1 else f"{self.num}/{self.den}"

    def to_json(self):
        return [str(self.num), str(self.den)]

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, (list, tuple)) and len(obj) == 2:
            return cls(int(obj[0]), int(obj[1]))
        if isinstance(obj, str):
            return parse(obj)
        if isinstance(obj, int):
            return cls(obj)
        raise ValueError(f"cannot decode SixAdic from {obj!r}")


ZERO = SixAdic._raw(0, 1)
ONE = SixAdic._raw(1, 1)


def make(num, den=1):
    """Checked constructor; same as ``SixAdic(num, den)``."""
    return SixAdic(num, den)


def parse(text):
    """Parse ``"num/den"`` or ``"num"``."""
    text = text.strip()
    if "/" in text:
        a, b = text.split("/", 1)
        return SixAdic(int(a), int(b))
    return SixAdic(int(text))


def valuations(a):
    """Return ``(v2, v3)`` with ``a = u * 2**-v2 * 3**-v3`` and ``u`` coprime to 6.

    Exponents are negative when the numerator carries factors of 2 or 3.
    """
    a = SixAdic(a)
    if a.num == 0:
        raise ZeroInput("valuations of zero")
    _, d2 = _strip(a.den, 2)
    _, d3 = _strip(a.den, 3)
    _, n2 = _strip(abs(a.num), 2)
    _, n3 = _strip(abs(a.num), 3)
    return d2 - n2, d3 - n3
