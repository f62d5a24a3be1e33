"""Exact scalar fields: the rationals, prime fields GF(p) and Q(t).

Rationals are plain :class:`fractions.Fraction` values.  Prime-field
elements and rational functions in ``t`` are small immutable value types
defined here.  A *field* object (``QQ``, ``PrimeField(p)``, ``QQt``) is
chosen once per computation and converts raw input into its elements.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Sequence, Union

import gmpy2

Rational = Fraction

#: 62-bit primes used for modular dimension counts; the second one is the
#: independent cross-check.
DEFAULT_PRIMES = (4611686018427387847, 4611686018427387817)


class ScalarKindMismatch(TypeError):
    """Arithmetic between scalars of different kinds (or moduli)."""


class PoleAtPoint(ZeroDivisionError):
    """A rational function was evaluated at a root of its denominator."""


def parse_rational(text: Union[str, int, Fraction]) -> Fraction:
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    return Fraction(str(text).strip())


def format_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# GF(p)
# ---------------------------------------------------------------------------


class PrimeFieldElement:
    __slots__ = ("residue", "modulus")

    def __init__(self, residue: int, modulus: int):
        self.residue = residue % modulus
        self.modulus = modulus

    def _coerce(self, other) -> int:
        if isinstance(other, PrimeFieldElement):
            if other.modulus != self.modulus:
                raise ScalarKindMismatch(
                    f"GF({self.modulus}) vs GF({other.modulus})")
            return other.residue
        if isinstance(other, int):
            return other % self.modulus
        if isinstance(other, Fraction):
            num = other.numerator % self.modulus
            den = other.denominator % self.modulus
            if den == 0:
                raise ZeroDivisionError(f"{other} has no image mod {self.modulus}")
            return num * pow(den, -1, self.modulus) % self.modulus
        raise ScalarKindMismatch(f"cannot mix GF(p) with {type(other).__name__}")

    def _new(self, r: int) -> "PrimeFieldElement":
        return PrimeFieldElement(r, self.modulus)

    def __add__(self, other):
        return self._new(self.residue + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self._new(self.residue - self._coerce(other))

    def __rsub__(self, other):
        return self._new(self._coerce(other) - self.residue)

    def __mul__(self, other):
        return self._new(self.residue * self._coerce(other))

    __rmul__ = __mul__

    def __neg__(self):
        return self._new(-self.residue)

    def inverse(self) -> "PrimeFieldElement":
        if self.residue == 0:
            raise ZeroDivisionError("inverse of 0 in GF(p)")
        return self._new(pow(self.residue, -1, self.modulus))

    def __truediv__(self, other):
        d = self._coerce(other)
        if d == 0:
            raise ZeroDivisionError("division by 0 in GF(p)")
        return self._new(self.residue * pow(d, -1, self.modulus))

    def __rtruediv__(self, other):
        return self._new(self._coerce(other)) / self

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return self._new(pow(self.residue, k, self.modulus))

    def __eq__(self, other):
        try:
            return self.residue == self._coerce(other)
        except (ScalarKindMismatch, ZeroDivisionError):
            return NotImplemented

    def __hash__(self):
        return hash((self.residue, self.modulus))

    def __bool__(self):
        return self.residue != 0

    def __int__(self):
        return self.residue

    def __repr__(self):
        return f"{self.residue} mod {self.modulus}"

    __str__ = __repr__


# ---------------------------------------------------------------------------
# Dense polynomials over Q and rational functions in t
# ---------------------------------------------------------------------------

Coeffs = tuple  # tuple[Fraction, ...], lowest degree first, no trailing zeros


def _strip(c: Sequence[Fraction]) -> Coeffs:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _padd(a: Coeffs, b: Coeffs) -> Coeffs:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] += x
    return _strip(out)


def _pneg(a: Coeffs) -> Coeffs:
    return tuple(-x for x in a)


def _pmul(a: Coeffs, b: Coeffs) -> Coeffs:
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _strip(out)


def _pscale(a: Coeffs, c: Fraction) -> Coeffs:
    if c == 0:
        return ()
    return tuple(x * c for x in a)


def _pdivmod(a: Coeffs, b: Coeffs) -> tuple[Coeffs, Coeffs]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a)
    db = len(b) - 1
    lead_inv = 1 / Fraction(b[-1])
    if len(rem) <= db:
        return (), tuple(rem)
    quo = [Fraction(0)] * (len(rem) - db)
    for k in range(len(rem) - 1, db - 1, -1):
        c = rem[k] * lead_inv
        if c:
            quo[k - db] = c
            for j, y in enumerate(b):
                rem[k - db + j] -= c * y
    return _strip(quo), _strip(rem[:db])


def _pmonic(a: Coeffs) -> Coeffs:
    if not a or a[-1] == 1:
        return a
    return _pscale(a, 1 / Fraction(a[-1]))


def _pgcd(a: Coeffs, b: Coeffs) -> Coeffs:
    while b:
        a, b = b, _pdivmod(a, b)[1]
    return _pmonic(a)


def _peval(a: Coeffs, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


def _pformat(a: Coeffs, var: str = "t") -> str:
    if not a:
        return "0"
    parts = []
    for k in range(len(a) - 1, -1, -1):
        c = a[k]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = -c if c < 0 else c
        if k == 0:
            body = str(mag)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        parts.append((sign, body))
    head_sign, head = parts[0]
    out = ("-" if head_sign == "-" else "") + head
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


class RationalFunction:
    """An element of Q(t) kept as num/den with den monic and gcd 1."""

    __slots__ = ("num", "den")

    def __init__(self, num: Iterable = (), den: Iterable = (1,), *, _normalized=False):
        num = _strip([Fraction(x) for x in num])
        den = _strip([Fraction(x) for x in den])
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not _normalized:
            if not num:
                den = (Fraction(1),)
            elif len(den) > 1:
                g = _pgcd(num, den)
                if len(g) > 1:
                    num = _pdivmod(num, g)[0]
                    den = _pdivmod(den, g)[0]
            lead = den[-1]
            if lead != 1:
                num = _pscale(num, 1 / lead)
                den = _pscale(den, 1 / lead)
        self.num = num
        self.den = den

    @classmethod
    def t(cls) -> "RationalFunction":
        return cls((0, 1))

    @classmethod
    def constant(cls, c) -> "RationalFunction":
        return cls((Fraction(c),))

    @staticmethod
    def _lift(other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, (int, Fraction)):
            return RationalFunction((other,))
        raise ScalarKindMismatch(f"cannot mix Q(t) with {type(other).__name__}")

    def is_polynomial(self) -> bool:
        return len(self.den) == 1

    def __add__(self, other):
        o = self._lift(other)
        if self.den == o.den:
            return RationalFunction(_padd(self.num, o.num), self.den)
        return RationalFunction(
            _padd(_pmul(self.num, o.den), _pmul(o.num, self.den)),
            _pmul(self.den, o.den))

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(_pneg(self.num), self.den, _normalized=True)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        if not self.num or not o.num:
            return RationalFunction()
        if self.is_polynomial() and o.is_polynomial():
            return RationalFunction(_pmul(self.num, o.num), (1,), _normalized=True)
        return RationalFunction(_pmul(self.num, o.num), _pmul(self.den, o.den))

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if not self.num:
            raise ZeroDivisionError("inverse of zero rational function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = RationalFunction((1,))
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        try:
            o = self._lift(other)
        except ScalarKindMismatch:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return bool(self.num)

    def evaluate(self, t0) -> Fraction:
        t0 = Fraction(t0)
        d = _peval(self.den, t0)
        if d == 0:
            raise PoleAtPoint(f"{self} has a pole at t = {t0}")
        return _peval(self.num, t0) / d

    def __str__(self):
        if self.is_polynomial():
            return _pformat(self.num)
        return f"({_pformat(self.num)})/({_pformat(self.den)})"

    def __repr__(self):
        return f"RationalFunction({self})"


def evaluate(f: RationalFunction, t0) -> Fraction:
    """Specialise ``f`` at the rational point ``t0``."""
    return f.evaluate(t0)


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|(t)|(\^)|([-+*/()]))")


def _parse_poly_expr(text: str) -> RationalFunction:
    # Recursive descent over + - * / ^ ( ) with integer/rational literals and t.
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse {text!r} at {pos}")
        tokens.append(m.group(m.lastindex))
        pos = m.end()
    tokens.append(None)
    i = 0

    def peek():
        return tokens[i]

    def take():
        nonlocal i
        tok = tokens[i]
        i += 1
        return tok

    def atom():
        tok = take()
        if tok == "(":
            val = expr()
            if take() != ")":
                raise ValueError("unbalanced parentheses")
            return val
        if tok == "t":
            return RationalFunction.t()
        if tok == "-":
            return -power()
        if tok is not None and tok[0].isdigit():
            return RationalFunction.constant(Fraction(tok))
        raise ValueError(f"unexpected token {tok!r}")

    def power():
        base = atom()
        if peek() == "^":
            take()
            exp_tok = take()
            sign = 1
            if exp_tok == "-":
                sign, exp_tok = -1, take()
            base = base ** (sign * int(exp_tok))
        return base

    def term():
        val = power()
        while peek() in ("*", "/"):
            op = take()
            rhs = power()
            val = val * rhs if op == "*" else val / rhs
        return val

    def expr():
        val = term()
        while peek() in ("+", "-"):
            op = take()
            rhs = term()
            val = val + rhs if op == "+" else val - rhs
        return val

    result = expr()
    if peek() is not None:
        raise ValueError(f"trailing input in {text!r}")
    return result


# ---------------------------------------------------------------------------
# Field objects
# ---------------------------------------------------------------------------


class RationalField:
    kind = "rational"
    characteristic = 0

    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, x) -> Fraction:
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, str):
            return parse_rational(x)
        raise ScalarKindMismatch(f"{type(x).__name__} is not a rational")

    def format(self, x: Fraction) -> str:
        return format_rational(x)

    parse = __call__

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


class PrimeField:
    kind = "gfp"

    def __init__(self, p: int):
        if p < 2 or not gmpy2.is_prime(p, 30):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.zero = PrimeFieldElement(0, p)
        self.one = PrimeFieldElement(1, p)

    def __call__(self, x) -> PrimeFieldElement:
        if isinstance(x, PrimeFieldElement):
            if x.modulus != self.p:
                raise ScalarKindMismatch(f"GF({x.modulus}) element in GF({self.p})")
            return x
        if isinstance(x, str):
            return self.parse(x)
        return PrimeFieldElement(self.one._coerce(x), self.p)

    def parse(self, text: str) -> PrimeFieldElement:
        m = re.fullmatch(r"\s*(-?\d+)\s*mod\s*(\d+)\s*", text)
        if m:
            if int(m.group(2)) != self.p:
                raise ScalarKindMismatch(f"modulus {m.group(2)} != {self.p}")
            return PrimeFieldElement(int(m.group(1)), self.p)
        return self(parse_rational(text))

    def format(self, x: PrimeFieldElement) -> str:
        return f"{x.residue} mod {self.p}"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"GF({self.p})"


class RationalFunctionField:
    kind = "rational_function"
    characteristic = 0

    zero = RationalFunction()
    one = RationalFunction((1,))

    def __call__(self, x) -> RationalFunction:
        if isinstance(x, str):
            return self.parse(x)
        return RationalFunction._lift(x)

    def parse(self, text: str) -> RationalFunction:
        return _parse_poly_expr(text)

    def format(self, x: RationalFunction) -> str:
        return str(x)

    def gen(self) -> RationalFunction:
        return RationalFunction.t()

    def __eq__(self, other):
        return isinstance(other, RationalFunctionField)

    def __hash__(self):
        return hash("QQ(t)")

    def __repr__(self):
        return "QQ(t)"


QQ = RationalField()
QQt = RationalFunctionField()

Field = Union[RationalField, PrimeField, RationalFunctionField]


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_of(x) -> Field:
    """The field a scalar naturally lives in (ints and Fractions -> QQ)."""
    if isinstance(x, PrimeFieldElement):
        return PrimeField(x.modulus)
    if isinstance(x, RationalFunction):
        return QQt
    if isinstance(x, (int, Fraction)):
        return QQ
    raise ScalarKindMismatch(f"not a scalar: {x!r}")


def field_from_name(name: str, p: int | None = None) -> Field:
    name = name.lower()
    if name in ("q", "qq", "rational"):
        return QQ
    if name in ("gfp", "gf", "prime"):
        return PrimeField(p or DEFAULT_PRIMES[0])
    if name in ("qt", "q(t)", "rational_function"):
        return QQt
    raise ValueError(f"unknown field {name!r}")
