"""Exact scalar arithmetic: rationals plus the extension ring Q(i, sqrt2).

Every computation in this package is exact.  The charged-fermion core works
over plain ``Fraction``; the neutral-fermion operations need i and 1/sqrt(2),
which live in :class:`QISqrt2` -- a 4-dimensional module over Q with formal
basis {1, i, sqrt2, i*sqrt2}.  Since 1/sqrt2 = sqrt2/2 the ring is closed
under every division we perform, and values collapse back to ``Fraction`` as
soon as the non-rational components cancel.
"""

from __future__ import annotations

from fractions import Fraction

Rational = Fraction


def rat(x) -> Fraction:
    """Coerce an int, Fraction or 'p/q' string to an exact Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


class QISqrt2:
    """a + b*i + c*sqrt2 + d*i*sqrt2 with rational components."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a=0, b=0, c=0, d=0):
        object.__setattr__(self, "a", rat(a))
        object.__setattr__(self, "b", rat(b))
        object.__setattr__(self, "c", rat(c))
        object.__setattr__(self, "d", rat(d))

    def __setattr__(self, name, value):
        raise AttributeError("QISqrt2 values are immutable")

    @classmethod
    def coerce(cls, x) -> "QISqrt2":
        if isinstance(x, QISqrt2):
            return x
        return cls(rat(x))

    def is_rational(self) -> bool:
        return self.b == 0 and self.c == 0 and self.d == 0

    def simplify(self):
        """Return a plain Fraction when possible, else self."""
        return self.a if self.is_rational() else self

    def __add__(self, other):
        o = QISqrt2.coerce(other)
        return QISqrt2(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    __radd__ = __add__

    def __neg__(self):
        return QISqrt2(-self.a, -self.b, -self.c, -self.d)

    def __sub__(self, other):
        return self + (-QISqrt2.coerce(other))

    def __rsub__(self, other):
        return QISqrt2.coerce(other) + (-self)

    def __mul__(self, other):
        o = QISqrt2.coerce(other)
        a1, b1, c1, d1 = self.a, self.b, self.c, self.d
        a2, b2, c2, d2 = o.a, o.b, o.c, o.d
        # i^2 = -1, sqrt2^2 = 2, (i*sqrt2)^2 = -2
        return QISqrt2(
            a1 * a2 - b1 * b2 + 2 * c1 * c2 - 2 * d1 * d2,
            a1 * b2 + b1 * a2 + 2 * c1 * d2 + 2 * d1 * c2,
            a1 * c2 + c1 * a2 - b1 * d2 - d1 * b2,
            a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2,
        )

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.a == other
        if isinstance(other, QISqrt2):
            return (self.a, self.b, self.c, self.d) == (other.a, other.b, other.c, other.d)
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(self.a)
        return hash((self.a, self.b, self.c, self.d))

    def __bool__(self):
        return any((self.a, self.b, self.c, self.d))

    def __repr__(self):
        parts = []
        for coeff, sym in ((self.a, ""), (self.b, "i"), (self.c, "s2"), (self.d, "i*s2")):
            if coeff:
                parts.append(f"{coeff}{'*' + sym if sym else ''}")
        return " + ".join(parts) if parts else "0"


I_UNIT = QISqrt2(0, 1, 0, 0)
SQRT2 = QISqrt2(0, 0, 1, 0)
INV_SQRT2 = QISqrt2(0, 0, Fraction(1, 2), 0)  # 1/sqrt2 = sqrt2/2


def collapse(x):
    """Collapse QISqrt2 scalars that are secretly rational."""
    if isinstance(x, QISqrt2):
        return x.simplify()
    return x


def parity_sign(n: int) -> int:
    """(-1)^n as an exact int for any integer n (negative exponents too)."""
    return -1 if n % 2 else 1
