"""Exact scalar arithmetic.

Three kinds of coefficient domains are supported:

* the rationals (arbitrary precision, always in lowest terms),
* prime fields of characteristic p not in {2, 3},
* two-dimensional quadratic algebras  k[x]/(x^2 - lam)  over one of the
  previous two, with conjugation a + b*sqrt(lam) -> a - b*sqrt(lam) and
  norm N(z) = z * conj(z).

A ``Field`` instance doubles as the descriptor of its domain and as an
element factory: ``F(v)`` coerces ``v`` and returns a ``FieldElement``.
Internally every operation works on raw values (``Fraction``, ``int`` in
``[0, p)``, or a pair of raws) which are canonical, so ``==`` on raws is
exact equality.  All values are immutable.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Optional, Union

from .errors import DivisionByNonInvertible

Scalarish = Union[int, str, Fraction, "FieldElement", tuple]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class Field:
    """Base class: exact arithmetic on raw values plus element factory."""

    characteristic: int = 0

    # -- raw-value arithmetic -------------------------------------------
    def add(self, x, y):
        raise NotImplementedError

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def mul(self, x, y):
        raise NotImplementedError

    def neg(self, x):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def div(self, x, y):
        return self.mul(x, self.inv(y))

    def is_zero(self, x) -> bool:
        return x == self.zero

    def coerce(self, v):
        """Raw value from a python object (int, Fraction, str, element)."""
        raise NotImplementedError

    def sqrt(self, x):
        """Canonical square root of a raw value, or None.

        Only defined for the base fields (rationals and prime fields);
        quadratic algebras override to raise.
        """
        raise NotImplementedError

    def random(self, rng: random.Random):
        raise NotImplementedError

    # -- element factory ------------------------------------------------
    def __call__(self, v) -> "FieldElement":
        return FieldElement(self, self.coerce(v))

    def element_zero(self) -> "FieldElement":
        return FieldElement(self, self.zero)

    def element_one(self) -> "FieldElement":
        return FieldElement(self, self.one)

    # -- JSON scalar encoding -------------------------------------------
    def to_json(self, x):
        raise NotImplementedError

    def from_json(self, obj):
        raise NotImplementedError


class RationalField(Field):
    """The field of rational numbers; raw values are ``Fraction``."""

    characteristic = 0

    def __init__(self):
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def add(self, x, y):
        return x + y

    def sub(self, x, y):
        return x - y

    def mul(self, x, y):
        return x * y

    def neg(self, x):
        return -x

    def inv(self, x):
        if x == 0:
            raise DivisionByNonInvertible("division by zero in Q")
        return 1 / x

    def div(self, x, y):
        if y == 0:
            raise DivisionByNonInvertible("division by zero in Q")
        return x / y

    def coerce(self, v):
        if isinstance(v, FieldElement):
            if v.field is not self and not isinstance(v.field, RationalField):
                raise TypeError(f"cannot coerce element of {v.field} to Q")
            return v.raw
        return Fraction(v)

    def sqrt(self, x) -> Optional[Fraction]:
        if x < 0:
            return None
        if x == 0:
            return Fraction(0)
        rn = math.isqrt(x.numerator)
        rd = math.isqrt(x.denominator)
        if rn * rn == x.numerator and rd * rd == x.denominator:
            return Fraction(rn, rd)
        return None

    def random(self, rng: random.Random):
        # Small integers keep downstream exact computations cheap.
        return Fraction(rng.randint(-9, 9))

    def to_json(self, x):
        return f"{x.numerator}/{x.denominator}"

    def from_json(self, obj):
        if isinstance(obj, str):
            return Fraction(obj)
        if isinstance(obj, int):
            return Fraction(obj)
        raise ValueError(f"bad rational encoding: {obj!r}")

    def __repr__(self):
        return "Q"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")


class PrimeField(Field):
    """The prime field F_p, p prime and not 2 or 3; raws are ints in [0, p)."""

    def __init__(self, p: int):
        if not _is_prime(p) or p in (2, 3):
            raise ValueError(f"modulus must be a prime other than 2 and 3, got {p}")
        self.p = p
        self.characteristic = p
        self.zero = 0
        self.one = 1 % p

    def add(self, x, y):
        return (x + y) % self.p

    def sub(self, x, y):
        return (x - y) % self.p

    def mul(self, x, y):
        return (x * y) % self.p

    def neg(self, x):
        return (-x) % self.p

    def inv(self, x):
        if x % self.p == 0:
            raise DivisionByNonInvertible(f"division by zero in F_{self.p}")
        return pow(x, self.p - 2, self.p)

    def coerce(self, v):
        if isinstance(v, FieldElement):
            if v.field != self:
                raise TypeError(f"cannot coerce element of {v.field} to {self}")
            return v.raw
        if isinstance(v, Fraction):
            return self.div(v.numerator % self.p, v.denominator % self.p)
        if isinstance(v, str):
            return self.coerce(Fraction(v))
        return int(v) % self.p

    def is_square_raw(self, x: int) -> bool:
        x %= self.p
        return x == 0 or pow(x, (self.p - 1) // 2, self.p) == 1

    def sqrt(self, x) -> Optional[int]:
        p = self.p
        x %= p
        if x == 0:
            return 0
        if pow(x, (p - 1) // 2, p) != 1:
            return None
        if p % 4 == 3:
            r = pow(x, (p + 1) // 4, p)
        else:
            r = self._tonelli_shanks(x)
        return min(r, p - r)

    def _tonelli_shanks(self, n: int) -> int:
        p = self.p
        q, s = p - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        z = 2
        while pow(z, (p - 1) // 2, p) != p - 1:
            z += 1
        m, c, t, r = s, pow(z, q, p), pow(n, q, p), pow(n, (q + 1) // 2, p)
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = (t2 * t2) % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            m, c = i, (b * b) % p
            t = (t * c) % p
            r = (r * b) % p
        return r

    def random(self, rng: random.Random):
        return rng.randrange(self.p)

    def to_json(self, x):
        return {"mod": self.p, "val": x}

    def from_json(self, obj):
        if isinstance(obj, dict) and obj.get("mod") == self.p:
            return int(obj["val"]) % self.p
        if isinstance(obj, int):
            return obj % self.p
        raise ValueError(f"bad F_{self.p} encoding: {obj!r}")

    def __repr__(self):
        return f"F{self.p}"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))


class QuadraticAlgebra(Field):
    """The algebra k[x]/(x^2 - lam) over a base field k, lam != 0.

    Raw values are pairs ``(a, b)`` of base raws meaning a + b*sqrt(lam).
    When lam is a square in k the algebra is split and has zero divisors;
    the same pair representation is used in both cases.
    """

    def __init__(self, base: Field, lam):
        if isinstance(base, QuadraticAlgebra):
            raise ValueError("base of a quadratic algebra must be Q or F_p")
        lam_raw = base.coerce(lam)
        if base.is_zero(lam_raw):
            raise ValueError("lam must be nonzero")
        self.base = base
        self.lam = lam_raw
        self.characteristic = base.characteristic
        self.zero = (base.zero, base.zero)
        self.one = (base.one, base.zero)

    @property
    def sqrt_lam(self):
        """The class of x, i.e. sqrt(lam) as a raw value."""
        return (self.base.zero, self.base.one)

    def is_split(self) -> bool:
        return self.base.sqrt(self.lam) is not None

    def add(self, x, y):
        b = self.base
        return (b.add(x[0], y[0]), b.add(x[1], y[1]))

    def sub(self, x, y):
        b = self.base
        return (b.sub(x[0], y[0]), b.sub(x[1], y[1]))

    def mul(self, x, y):
        b = self.base
        a1, b1 = x
        a2, b2 = y
        re = b.add(b.mul(a1, a2), b.mul(self.lam, b.mul(b1, b2)))
        im = b.add(b.mul(a1, b2), b.mul(b1, a2))
        return (re, im)

    def neg(self, x):
        b = self.base
        return (b.neg(x[0]), b.neg(x[1]))

    def conj(self, x):
        return (x[0], self.base.neg(x[1]))

    def norm(self, x):
        """N(z) = z * conj(z), a base-field raw value."""
        b = self.base
        return b.sub(b.mul(x[0], x[0]), b.mul(self.lam, b.mul(x[1], x[1])))

    def inv(self, x):
        n = self.norm(x)
        if self.base.is_zero(n):
            raise DivisionByNonInvertible(
                f"{x} has zero norm in {self} and is not invertible"
            )
        ninv = self.base.inv(n)
        c = self.conj(x)
        return (self.base.mul(c[0], ninv), self.base.mul(c[1], ninv))

    def is_invertible(self, x) -> bool:
        return not self.base.is_zero(self.norm(x))

    def coerce(self, v):
        if isinstance(v, FieldElement):
            if v.field == self:
                return v.raw
            if v.field == self.base:
                return (v.raw, self.base.zero)
            raise TypeError(f"cannot coerce element of {v.field} to {self}")
        if isinstance(v, tuple) and len(v) == 2:
            return (self.base.coerce(v[0]), self.base.coerce(v[1]))
        return (self.base.coerce(v), self.base.zero)

    def sqrt(self, x):
        raise NotImplementedError("square roots are only taken in base fields")

    def random(self, rng: random.Random):
        return (self.base.random(rng), self.base.random(rng))

    # Conversion to/from the idempotent basis of the split algebra,
    # A_lam ~ k x k via z = u*e+ + v*e- with e+- = (1 -+ sqrt(lam)/r)/2
    # ... here with r a square root of lam.  Used by tests only.
    def to_split_pair(self, x):
        r = self.base.sqrt(self.lam)
        if r is None:
            raise ValueError("algebra is not split")
        b = self.base
        return (b.add(x[0], b.mul(r, x[1])), b.sub(x[0], b.mul(r, x[1])))

    def from_split_pair(self, uv):
        r = self.base.sqrt(self.lam)
        if r is None:
            raise ValueError("algebra is not split")
        b = self.base
        u, v = uv
        two = b.add(b.one, b.one)
        return (b.div(b.add(u, v), two), b.div(b.sub(u, v), b.mul(two, r)))

    def to_json(self, x):
        return {
            "lambda": self.base.to_json(self.lam),
            "re": self.base.to_json(x[0]),
            "im": self.base.to_json(x[1]),
        }

    def from_json(self, obj):
        if isinstance(obj, dict) and "re" in obj:
            return (self.base.from_json(obj["re"]), self.base.from_json(obj["im"]))
        return (self.base.from_json(obj), self.base.zero)

    def __repr__(self):
        return f"A[{self.lam}]({self.base})"

    def __eq__(self, other):
        return (
            isinstance(other, QuadraticAlgebra)
            and other.base == self.base
            and other.lam == self.lam
        )

    def __hash__(self):
        return hash(("A", self.base, self.lam))


class FieldElement:
    """Immutable scalar: a field together with a canonical raw value."""

    __slots__ = ("field", "raw")

    def __init__(self, field: Field, raw):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "raw", raw)

    def __setattr__(self, *a):
        raise AttributeError("FieldElement is immutable")

    def _rhs(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise TypeError(f"mixed fields: {self.field} and {other.field}")
            return other.raw
        return self.field.coerce(other)

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.raw, self._rhs(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.raw, self._rhs(other)))

    def __rsub__(self, other):
        return FieldElement(self.field, self.field.sub(self._rhs(other), self.raw))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.raw, self._rhs(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.field, self.field.div(self.raw, self._rhs(other)))

    def __rtruediv__(self, other):
        return FieldElement(self.field, self.field.div(self._rhs(other), self.raw))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.raw))

    def __pow__(self, n: int):
        if n < 0:
            return (self.element_inverse()) ** (-n)
        r = self.field.one
        b = self.raw
        while n:
            if n & 1:
                r = self.field.mul(r, b)
            b = self.field.mul(b, b)
            n >>= 1
        return FieldElement(self.field, r)

    def element_inverse(self):
        return FieldElement(self.field, self.field.inv(self.raw))

    def __eq__(self, other):
        try:
            return self.raw == self._rhs(other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash((self.field, self.raw))

    def __bool__(self):
        return not self.field.is_zero(self.raw)

    def __repr__(self):
        return f"{self.raw!r} in {self.field!r}"


# ---------------------------------------------------------------------------
# square detection, conjugation, norm (public operations)
# ---------------------------------------------------------------------------

def is_square(x: FieldElement) -> Optional[FieldElement]:
    """Canonical square root r with r*r == x, or None.

    Over Q the nonnegative root; over F_p the root with smallest
    nonnegative representative.  Only defined in base fields.
    """
    if isinstance(x.field, QuadraticAlgebra):
        raise TypeError("is_square applies to base-field scalars")
    r = x.field.sqrt(x.raw)
    return None if r is None else FieldElement(x.field, r)


def conj(z: FieldElement) -> FieldElement:
    if not isinstance(z.field, QuadraticAlgebra):
        raise TypeError("conj applies to quadratic-algebra scalars")
    return FieldElement(z.field, z.field.conj(z.raw))


def norm(z: FieldElement) -> FieldElement:
    """N(z) = z * conj(z), valued in the base field."""
    if not isinstance(z.field, QuadraticAlgebra):
        raise TypeError("norm applies to quadratic-algebra scalars")
    return FieldElement(z.field.base, z.field.norm(z.raw))


def same_square_class(x: FieldElement, y: FieldElement) -> bool:
    """True iff x and y are nonzero and x/y is a square in the base field.

    Two quadratic algebras over k are isomorphic iff their parameters lie
    in the same square class, so this is the isomorphism test for them.
    """
    f = x.field
    if isinstance(f, QuadraticAlgebra):
        raise TypeError("square classes live in base fields")
    if f.is_zero(x.raw) or f.is_zero(y.raw):
        return False
    return f.sqrt(f.div(x.raw, y.raw)) is not None


def square_class_representative(x: FieldElement) -> FieldElement:
    """A canonical representative of the square class of a nonzero x.

    Over Q: the squarefree integer sign(x) * rad(num * den).  Over F_p:
    1 for residues, the smallest nonresidue otherwise.
    """
    f = x.field
    if f.is_zero(x.raw):
        raise ValueError("zero has no square class")
    if isinstance(f, RationalField):
        n = x.raw.numerator * x.raw.denominator
        sign = -1 if n < 0 else 1
        n = abs(n)
        sqfree = 1
        d = 2
        while d * d <= n:
            if n % d == 0:
                e = 0
                while n % d == 0:
                    n //= d
                    e += 1
                if e % 2:
                    sqfree *= d
            d += 1
        sqfree *= n
        return FieldElement(f, Fraction(sign * sqfree))
    if isinstance(f, PrimeField):
        if f.is_square_raw(x.raw):
            return f.element_one()
        nr = 2
        while f.is_square_raw(nr):
            nr += 1
        return FieldElement(f, nr)
    raise TypeError("square classes live in base fields")


# Convenience descriptors / constructors -----------------------------------

QQ = RationalField()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def quadratic_algebra(base: Field, lam) -> QuadraticAlgebra:
    return QuadraticAlgebra(base, lam)


def field_from_json(obj) -> Field:
    """Decode a field descriptor: "Q", {"mod": p} or {"lambda", "base"}."""
    if obj == "Q":
        return QQ
    if isinstance(obj, dict):
        if "base" in obj:
            base = field_from_json(obj["base"])
            return QuadraticAlgebra(base, base.from_json(obj["lambda"]))
        if "mod" in obj:
            return PrimeField(int(obj["mod"]))
    raise ValueError(f"bad field descriptor: {obj!r}")


def field_to_json(f: Field):
    if isinstance(f, RationalField):
        return "Q"
    if isinstance(f, PrimeField):
        return {"mod": f.p}
    if isinstance(f, QuadraticAlgebra):
        return {"base": field_to_json(f.base), "lambda": f.base.to_json(f.lam)}
    raise TypeError(f"unknown field {f!r}")


def parse_field(spec: str) -> Field:
    """Parse a command-line field spec: "Q" or "Fp:<p>" (e.g. "Fp:7", "F7")."""
    s = spec.strip()
    if s in ("Q", "QQ", "q"):
        return QQ
    if s.lower().startswith("fp:"):
        return PrimeField(int(s[3:]))
    if s[0] in "fF" and s[1:].isdigit():
        return PrimeField(int(s[1:]))
    raise ValueError(f"cannot parse field spec {spec!r}")
