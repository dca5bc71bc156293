"""Weighted-graded polynomial rings, monomial orders and polynomials.

Exponent vectors are tuples of ints.  A polynomial stores its terms in a
dict ``{exponents: coefficient}``; ``terms()`` yields them in strictly
descending order under the ring's monomial order.
"""

import re
from fractions import Fraction

from .field import QQ


class MonomialOrder:
    """A monomial order given by a sort key on exponent tuples.

    ``kind`` is one of ``wgrevlex`` (weighted degree, then reverse lex; the
    default), ``grevlex`` (standard degree, then reverse lex), ``lex``, or
    ``elim`` (block order: ``wgrevlex`` on the first ``block`` variables,
    then ``wgrevlex`` on the rest; eliminates the first block).
    """

    KINDS = ("wgrevlex", "grevlex", "lex", "elim")

    def __init__(self, kind, weights, block=None):
        if kind not in self.KINDS:
            raise ValueError("unknown monomial order %r" % kind)
        if kind == "elim" and not block:
            raise ValueError("elimination order needs a block size")
        self.kind = kind
        self.weights = tuple(weights)
        self.block = block
        self._cache = {}
        self.key = self._make_key()

    def _make_key(self):
        w = self.weights
        cache = self._cache
        kind = self.kind
        if kind == "lex":
            return tuple

        def wrev(e, w):
            return (sum(a * b for a, b in zip(e, w)),) + tuple(-a for a in reversed(e))

        if kind == "wgrevlex":
            def key(e):
                k = cache.get(e)
                if k is None:
                    k = cache[e] = wrev(e, w)
                return k
        elif kind == "grevlex":
            def key(e):
                k = cache.get(e)
                if k is None:
                    k = cache[e] = (sum(e),) + tuple(-a for a in reversed(e))
                return k
        else:
            b = self.block

            def key(e):
                k = cache.get(e)
                if k is None:
                    k = cache[e] = wrev(e[:b], w[:b]) + wrev(e[b:], w[b:])
                return k
        return key

    def __eq__(self, other):
        return (isinstance(other, MonomialOrder) and self.kind == other.kind
                and self.weights == other.weights and self.block == other.block)

    def __hash__(self):
        return hash((self.kind, self.weights, self.block))

    def __repr__(self):
        return "MonomialOrder(%r)" % self.kind


class GradedPolyRing:
    """k[x_1..x_n] with a positive integer weight per variable."""

    def __init__(self, names, weights=None, field=QQ, order="wgrevlex"):
        names = tuple(names)
        if weights is None:
            weights = (1,) * len(names)
        weights = tuple(int(w) for w in weights)
        if len(set(names)) != len(names):
            raise ValueError("variable names must be distinct")
        if len(weights) != len(names):
            raise ValueError("one weight per variable")
        if any(w < 1 for w in weights):
            raise ValueError("weights must be >= 1")
        self.names = names
        self.weights = weights
        self.field = field
        self.nvars = len(names)
        self.order = order if isinstance(order, MonomialOrder) else MonomialOrder(order, weights)
        self.zero_exp = (0,) * self.nvars

    def weighted_degree(self, e):
        if len(e) != self.nvars:
            raise ValueError("exponent length %d does not match %d variables" % (len(e), self.nvars))
        return sum(a * b for a, b in zip(e, self.weights))

    def gens(self):
        return [self.var(i) for i in range(self.nvars)]

    def var(self, i):
        if isinstance(i, str):
            i = self.names.index(i)
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): self.field.one})

    def const(self, c):
        c = self.field(c)
        return Polynomial(self, {self.zero_exp: c} if c != 0 else {})

    def zero(self):
        return Polynomial(self, {})

    def one(self):
        return self.const(1)

    def parse(self, text):
        return parse_poly(text, self)

    def with_field(self, field):
        return GradedPolyRing(self.names, self.weights, field, self.order.kind)

    def __eq__(self, other):
        return (isinstance(other, GradedPolyRing) and self.names == other.names
                and self.weights == other.weights and self.field == other.field)

    def __hash__(self):
        return hash((self.names, self.weights, self.field))

    def __repr__(self):
        return "GradedPolyRing(%s; weights=%s; %s)" % (",".join(self.names), self.weights, self.field)


class Monomial:
    __slots__ = ("exps", "degree")

    def __init__(self, exps, ring):
        self.exps = tuple(exps)
        self.degree = ring.weighted_degree(self.exps)

    def __repr__(self):
        return "Monomial(%s, deg=%d)" % (self.exps, self.degree)


def weighted_degree(m, ring):
    exps = m.exps if isinstance(m, Monomial) else tuple(m)
    return ring.weighted_degree(exps)


class RingMismatch(ValueError):
    pass


class Polynomial:
    __slots__ = ("ring", "coeffs")

    def __init__(self, ring, coeffs):
        self.ring = ring
        self.coeffs = {e: c for e, c in coeffs.items() if c != 0}

    # -- arithmetic -------------------------------------------------------
    def _check(self, other):
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatch("polynomials from different rings")
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._check(other)
        K = self.ring.field
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = K(out.get(e, 0) + c)
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        K = self.ring.field
        return Polynomial(self.ring, {e: K(-c) for e, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        K = self.ring.field
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Polynomial(self.ring, {e: K(c) for e, c in out.items()})

    __rmul__ = __mul__

    def __pow__(self, k):
        result = self.ring.one()
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            other = self.ring.const(other)
        return self.ring == other.ring and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    # -- structure --------------------------------------------------------
    def is_zero(self):
        return not self.coeffs

    def terms(self):
        key = self.ring.order.key
        return sorted(self.coeffs.items(), key=lambda t: key(t[0]), reverse=True)

    def lead(self):
        if not self.coeffs:
            return None
        key = self.ring.order.key
        e = max(self.coeffs, key=key)
        return e, self.coeffs[e]

    def degrees(self):
        return {self.ring.weighted_degree(e) for e in self.coeffs}

    def is_homogeneous(self):
        return len(self.degrees()) <= 1

    def degree(self):
        """Weighted degree if homogeneous, else None (zero has degree None)."""
        d = self.degrees()
        return d.pop() if len(d) == 1 else None

    def __str__(self):
        return format_poly(self.coeffs, self.ring)

    def __repr__(self):
        return "Polynomial(%s)" % self


def format_monomial(e, names):
    parts = []
    for name, a in zip(names, e):
        if a == 1:
            parts.append(name)
        elif a > 1:
            parts.append("%s^%d" % (name, a))
    return "*".join(parts)


def format_poly(coeffs, ring):
    if not coeffs:
        return "0"
    key = ring.order.key
    K = ring.field
    out = []
    for e in sorted(coeffs, key=key, reverse=True):
        c = coeffs[e]
        s = K.to_str(c)
        neg = s.startswith("-")
        if neg:
            s = s[1:]
        mono = format_monomial(e, ring.names)
        if mono:
            body = mono if s == "1" else "%s*%s" % (s, mono)
        else:
            body = s
        if not out:
            out.append("-" + body if neg else body)
        else:
            out.append(("- " if neg else "+ ") + body)
    return " ".join(out)


class PolySyntaxError(ValueError):
    def __init__(self, message, position=None):
        self.position = position
        super().__init__(message if position is None else "%s (at column %d)" % (message, position + 1))


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*^()]))")


def _tokenize(text):
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise PolySyntaxError("unexpected character %r" % text[pos], pos)
        start = m.start(m.lastindex)
        if m.group(1):
            out.append(("num", m.group(1), start))
        elif m.group(2):
            out.append(("var", m.group(2), start))
        else:
            op = "^" if m.group(3) == "**" else m.group(3)
            out.append(("op", op, start))
        pos = m.end()
    return out


def parse_poly(text, ring):
    """Parse ``coef*var^e*var^e +- ...`` (parentheses also accepted)."""
    toks = _tokenize(text)
    i = 0

    def peek():
        return toks[i] if i < len(toks) else (None, None, len(text))

    def take():
        nonlocal i
        t = peek()
        i += 1
        return t

    def expr():
        kind, val, pos = peek()
        sign = 1
        if kind == "op" and val in "+-":
            take()
            sign = -1 if val == "-" else 1
        result = term() * sign
        while True:
            kind, val, pos = peek()
            if kind == "op" and val in "+-":
                take()
                t = term()
                result = result + t if val == "+" else result - t
            else:
                return result

    def term():
        result = factor()
        while True:
            kind, val, pos = peek()
            if kind == "op" and val == "*":
                take()
                result = result * factor()
            else:
                return result

    def factor():
        base = atom()
        kind, val, pos = peek()
        if kind == "op" and val == "^":
            take()
            kind, val, pos = take()
            if kind != "num" or "/" in val:
                raise PolySyntaxError("exponent must be a non-negative integer", pos)
            base = base ** int(val)
        return base

    def atom():
        kind, val, pos = take()
        if kind == "num":
            return ring.const(Fraction(val))
        if kind == "var":
            if val not in ring.names:
                raise PolySyntaxError("unknown variable %r" % val, pos)
            return ring.var(val)
        if kind == "op" and val == "(":
            inner = expr()
            k2, v2, p2 = take()
            if v2 != ")":
                raise PolySyntaxError("expected ')'", p2)
            return inner
        if kind == "op" and val == "-":
            return -factor()
        raise PolySyntaxError("unexpected %s" % ("end of input" if kind is None else repr(val)), pos)

    if not toks:
        raise PolySyntaxError("empty polynomial", 0)
    result = expr()
    if i != len(toks):
        raise PolySyntaxError("unexpected %r" % toks[i][1], toks[i][2])
    return result
