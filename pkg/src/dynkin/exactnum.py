"""Exact arithmetic in the real field Q(sqrt2, sqrt3).

Rationals are plain :class:`fractions.Fraction` values.  Elements of the
quadratic field are :class:`QF` instances ``a + b*sqrt2 + c*sqrt3 + d*sqrt6``
with rational coordinates.  Internally a QF stores four integer numerators
over one positive common denominator, which keeps products cheap.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from numbers import Rational as _RationalABC

Rational = Fraction

NEGATIVE, ZERO, POSITIVE = -1, 0, 1


def _gcd4(a: int, b: int, c: int, d: int, e: int) -> int:
    return gcd(gcd(gcd(a, b), gcd(c, d)), e)


@lru_cache(maxsize=64)
def _root_floors(bits: int) -> tuple[int, int, int]:
    # floor(sqrt(n) * 2**bits) for n = 2, 3, 6
    scale = 1 << (2 * bits)
    return isqrt(2 * scale), isqrt(3 * scale), isqrt(6 * scale)


def _term_bounds(coef: int, root_floor: int) -> tuple[int, int]:
    # coef * sqrt(n) lies in [coef*floor, coef*(floor+1)] (scaled), swapped when coef < 0
    if coef >= 0:
        return coef * root_floor, coef * (root_floor + 1)
    return coef * (root_floor + 1), coef * root_floor


def _sign_of_ints(a: int, b: int, c: int, d: int) -> int:
    if b == 0 and c == 0 and d == 0:
        return (a > 0) - (a < 0)
    if a == 0 and b == 0 and c == 0 and d == 0:
        return ZERO
    bits = 32 + max(abs(a).bit_length(), abs(b).bit_length(),
                    abs(c).bit_length(), abs(d).bit_length())
    while True:
        f2, f3, f6 = _root_floors(bits)
        base = a << bits
        lo2, hi2 = _term_bounds(b, f2)
        lo3, hi3 = _term_bounds(c, f3)
        lo6, hi6 = _term_bounds(d, f6)
        lo = base + lo2 + lo3 + lo6
        hi = base + hi2 + hi3 + hi6
        if lo > 0:
            return POSITIVE
        if hi < 0:
            return NEGATIVE
        bits *= 2


class QF:
    """An element ``a + b*sqrt2 + c*sqrt3 + d*sqrt6`` of Q(sqrt2, sqrt3).

    Values are immutable and hashable.  Ints and Fractions mix freely in
    arithmetic and comparisons.

    >>> (1 + QF.sqrt(2)) * (1 - QF.sqrt(2))
    QF(-1)
    >>> QF.sqrt(2) * QF.sqrt(3) == QF.sqrt(6)
    True
    """

    __slots__ = ("_n", "_den", "_hash")

    def __init__(self, a=0, b=0, c=0, d=0):
        if type(a) is int and type(b) is int and type(c) is int and type(d) is int:
            self._set((a, b, c, d), 1)
            return
        coords = [Fraction(x) for x in (a, b, c, d)]
        den = 1
        for x in coords:
            den = den * x.denominator // gcd(den, x.denominator)
        nums = tuple(int(x * den) for x in coords)
        self._set(nums, den)

    def _set(self, nums: tuple[int, int, int, int], den: int) -> None:
        if den == 1:
            self._n = nums
            self._den = 1
            self._hash = None
            return
        if den < 0:
            nums = tuple(-x for x in nums)
            den = -den
        g = _gcd4(*nums, den)
        if g > 1:
            nums = tuple(x // g for x in nums)
            den //= g
        self._n = nums
        self._den = den
        self._hash = None

    @classmethod
    def _raw(cls, a: int, b: int, c: int, d: int, den: int) -> QF:
        obj = cls.__new__(cls)
        obj._set((a, b, c, d), den)
        return obj

    @classmethod
    def sqrt(cls, n: int) -> QF:
        """The literal ``sqrt(n)`` for n in {0, 1, 2, 3, 6} (not a general root)."""
        table = {0: (0, 0, 0, 0), 1: (1, 0, 0, 0), 2: (0, 1, 0, 0),
                 3: (0, 0, 1, 0), 6: (0, 0, 0, 1)}
        if n not in table:
            raise ValueError(f"sqrt({n}) is not a basis literal of Q(sqrt2, sqrt3)")
        return cls._raw(*table[n], 1)

    @classmethod
    def coerce(cls, x) -> QF:
        if isinstance(x, QF):
            return x
        if isinstance(x, int):
            return cls._raw(x, 0, 0, 0, 1)
        if isinstance(x, _RationalABC):
            return cls._raw(int(x.numerator), 0, 0, 0, int(x.denominator))
        raise TypeError(f"cannot convert {type(x).__name__} to QF")

    # coordinates

    @property
    def a(self) -> Fraction:
        return Fraction(self._n[0], self._den)

    @property
    def b(self) -> Fraction:
        return Fraction(self._n[1], self._den)

    @property
    def c(self) -> Fraction:
        return Fraction(self._n[2], self._den)

    @property
    def d(self) -> Fraction:
        return Fraction(self._n[3], self._den)

    @property
    def coords(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return self.a, self.b, self.c, self.d

    def is_rational(self) -> bool:
        return self._n[1] == 0 and self._n[2] == 0 and self._n[3] == 0

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        return Fraction(self._n[0], self._den)

    # arithmetic

    def __add__(self, other):
        try:
            o = QF.coerce(other)
        except TypeError:
            return NotImplemented
        (a1, b1, c1, d1), e1 = self._n, self._den
        (a2, b2, c2, d2), e2 = o._n, o._den
        if e1 == e2:
            return QF._raw(a1 + a2, b1 + b2, c1 + c2, d1 + d2, e1)
        return QF._raw(a1 * e2 + a2 * e1, b1 * e2 + b2 * e1,
                       c1 * e2 + c2 * e1, d1 * e2 + d2 * e1, e1 * e2)

    __radd__ = __add__

    def __neg__(self):
        a, b, c, d = self._n
        return QF._raw(-a, -b, -c, -d, self._den)

    def __pos__(self):
        return self

    def __sub__(self, other):
        try:
            o = QF.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        try:
            o = QF.coerce(other)
        except TypeError:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        try:
            o = QF.coerce(other)
        except TypeError:
            return NotImplemented
        a1, b1, c1, d1 = self._n
        a2, b2, c2, d2 = o._n
        den = self._den * o._den
        if b2 == 0 and c2 == 0 and d2 == 0:
            return QF._raw(a1 * a2, b1 * a2, c1 * a2, d1 * a2, den)
        if b1 == 0 and c1 == 0 and d1 == 0:
            return QF._raw(a1 * a2, a1 * b2, a1 * c2, a1 * d2, den)
        return QF._raw(
            a1 * a2 + 2 * b1 * b2 + 3 * c1 * c2 + 6 * d1 * d2,
            a1 * b2 + b1 * a2 + 3 * (c1 * d2 + d1 * c2),
            a1 * c2 + c1 * a2 + 2 * (b1 * d2 + d1 * b2),
            a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2,
            den,
        )

    __rmul__ = __mul__

    def _conjugate(self, flip2: bool, flip3: bool) -> QF:
        a, b, c, d = self._n
        if flip2:
            b = -b
        if flip3:
            c = -c
        if flip2 != flip3:
            d = -d
        return QF._raw(a, b, c, d, self._den)

    def inverse(self) -> QF:
        a, b, c, d = self._n
        if b == 0 and c == 0 and d == 0:
            if a == 0:
                raise ZeroDivisionError("QF division by zero")
            return QF._raw(self._den, 0, 0, 0, a)
        if self.is_zero():
            raise ZeroDivisionError("QF division by zero")
        # product of the three nontrivial Galois conjugates; times self it is the norm
        p = self._conjugate(True, False) * self._conjugate(False, True) * self._conjugate(True, True)
        norm = self * p
        return p * QF._raw(norm._den, 0, 0, 0, norm._n[0])

    def __truediv__(self, other):
        try:
            o = QF.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        try:
            o = QF.coerce(other)
        except TypeError:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = QF._raw(1, 0, 0, 0, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # sign and comparisons

    def is_zero(self) -> bool:
        return not any(self._n)

    def sign(self) -> int:
        return _sign_of_ints(*self._n)

    def __eq__(self, other):
        if other is self:
            return True
        try:
            o = QF.coerce(other)
        except TypeError:
            return NotImplemented
        return self._n == o._n and self._den == o._den

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(Fraction(self._n[0], self._den))
            else:
                self._hash = hash((self._n, self._den))
        return self._hash

    def _cmp(self, other) -> int:
        return (self - QF.coerce(other)).sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __bool__(self):
        return not self.is_zero()

    def __float__(self):
        a, b, c, d = self.coords
        return float(a) + float(b) * 2 ** 0.5 + float(c) * 3 ** 0.5 + float(d) * 6 ** 0.5

    # text

    def to_json(self) -> list[str]:
        return [str(x) for x in self.coords]

    @classmethod
    def from_json(cls, data) -> QF:
        if len(data) != 4:
            raise ValueError("QF needs exactly four rational coordinates")
        return cls(*(Fraction(x) for x in data))

    def __repr__(self):
        parts = [str(x) for x in self.coords]
        while len(parts) > 1 and parts[-1] == "0":
            parts.pop()
        return f"QF({', '.join(parts)})"

    def __str__(self):
        out = []
        for coef, name in zip(self.coords, ("", "√2", "√3", "√6")):
            if coef == 0:
                continue
            mag = abs(coef)
            if name and mag == 1:
                body = name
            elif name:
                body = f"{mag}{name}" if mag.denominator == 1 else f"({mag}){name}"
            else:
                body = str(mag)
            if not out:
                out.append(body if coef > 0 else f"-{body}")
            else:
                out.append(f" + {body}" if coef > 0 else f" - {body}")
        return "".join(out) or "0"


def qf_arith(x, y, op: str) -> QF:
    """Apply ``op`` in {'add', 'sub', 'mul', 'div'} to two field elements."""
    x, y = QF.coerce(x), QF.coerce(y)
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown operation {op!r}")


def qf_sign(x) -> int:
    """Exact sign of a field element: -1, 0 or 1."""
    return QF.coerce(x).sign()


def rational_str(q) -> str:
    return str(Fraction(q))


def parse_rational(text: str) -> Fraction:
    return Fraction(text)


# named constants used by the node transformations
SQRT2 = QF.sqrt(2)
SQRT3 = QF.sqrt(3)
SQRT_HALF = QF(0, Fraction(1, 2))


def sqrt_multiplicity(m) -> QF:
    """sqrt(m) for a line multiplicity m in {0, 1/2, 1, 2, 3}."""
    m = Fraction(m)
    if m == Fraction(1, 2):
        return SQRT_HALF
    if m.denominator != 1:
        raise ValueError(f"unsupported multiplicity {m}")
    return QF.sqrt(int(m))
