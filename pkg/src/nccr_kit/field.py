"""Exact base fields: the rationals (backed by gmpy2) and prime fields."""

from fractions import Fraction

from gmpy2 import mpq


class Field:
    """Base field descriptor.

    Elements are plain Python values so that the hot loops of the
    Groebner engine can use native arithmetic: ``mpq`` for QQ and ``int``
    residues in ``[0, p)`` for GF(p).  ``p`` is ``None`` in characteristic 0.
    """

    p = None
    name = "?"

    def __call__(self, value):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def add(self, a, b):
        return self(a + b)

    def sub(self, a, b):
        return self(a - b)

    def mul(self, a, b):
        return self(a * b)

    def neg(self, a):
        return self(-a)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def to_str(self, a):
        return str(a)

    def __eq__(self, other):
        return type(self) is type(other) and self.p == other.p

    def __hash__(self):
        return hash((type(self).__name__, self.p))

    def __repr__(self):
        return self.name


class RationalField(Field):
    name = "QQ"

    def __call__(self, value):
        if isinstance(value, str):
            value = Fraction(value)
        if isinstance(value, Fraction):
            return mpq(value.numerator, value.denominator)
        return mpq(value)

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / mpq(a)

    def to_str(self, a):
        a = mpq(a)
        if a.denominator == 1:
            return str(a.numerator)
        return "%d/%d" % (a.numerator, a.denominator)


class PrimeField(Field):
    def __init__(self, p):
        p = int(p)
        if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
            raise ValueError("modulus %d is not prime" % p)
        self.p = p
        self.name = "GF(%d)" % p

    def __call__(self, value):
        if isinstance(value, str):
            value = Fraction(value)
        if isinstance(value, (Fraction, type(mpq(0)))):
            num, den = int(value.numerator), int(value.denominator)
            if den % self.p == 0:
                raise ZeroDivisionError("denominator divisible by %d" % self.p)
            return num * pow(den, -1, self.p) % self.p
        return int(value) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(int(a), -1, self.p)


QQ = RationalField()


def GF(p):
    return PrimeField(p)


def field_from_spec(text):
    """Parse ``qq``/``QQ`` or ``fp:P``/``Fp P`` into a field."""
    t = text.strip()
    if t.lower() == "qq":
        return QQ
    for prefix in ("fp:", "Fp:", "fp ", "Fp ", "GF:"):
        if t.startswith(prefix):
            return GF(int(t[len(prefix):]))
    raise ValueError("unknown field %r" % text)
