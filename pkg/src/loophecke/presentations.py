"""Words in the loop braid generators and the relation sets built on them.

Generators are ``sigma_i`` (braid exchange), ``rho_i`` (symmetric
exchange) and the formal inverse ``sigma_inv_i``; as text they are written
``s1``, ``r1`` and ``s1^-1``.  Relation labels are stable identifiers that
reports cite, e.g. ``mixed2_1`` or ``quad_s_2``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping

SIGMA, RHO, SIGMA_INV = "sigma", "rho", "sigma_inv"
_KIND_ORDER = {SIGMA: 0, RHO: 1, SIGMA_INV: 2}


class IndexOutOfRange(ValueError):
    pass


@dataclass(frozen=True, order=False)
class Generator:
    kind: str
    index: int

    def __post_init__(self):
        if self.kind not in _KIND_ORDER:
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.index < 1:
            raise IndexOutOfRange(f"generator index {self.index} < 1")

    def sort_key(self) -> tuple[int, int]:
        # sigma_1 < rho_1 < sigma_2 < rho_2 < ...
        return (self.index, _KIND_ORDER[self.kind])

    def shifted(self, k: int) -> "Generator":
        return Generator(self.kind, self.index + k)

    def __str__(self):
        if self.kind == SIGMA:
            return f"s{self.index}"
        if self.kind == RHO:
            return f"r{self.index}"
        return f"s{self.index}^-1"

    __repr__ = __str__

    @classmethod
    def parse(cls, text: str) -> "Generator":
        m = re.fullmatch(r"([sr])(\d+)(\^-1)?", text.strip())
        if not m:
            raise ValueError(f"bad generator {text!r}")
        letter, idx, inv = m.groups()
        if letter == "r":
            if inv:
                raise ValueError("rho is an involution; write r<i> instead of its inverse")
            return cls(RHO, int(idx))
        return cls(SIGMA_INV if inv else SIGMA, int(idx))


def sigma(i: int) -> Generator:
    return Generator(SIGMA, i)


def rho(i: int) -> Generator:
    return Generator(RHO, i)


def sigma_inv(i: int) -> Generator:
    return Generator(SIGMA_INV, i)


def generators(n: int, inverses: bool = False) -> list[Generator]:
    """Generators of rank n in the order sigma_1, rho_1, sigma_2, ..."""
    out = []
    for i in range(1, n):
        out += [sigma(i), rho(i)]
        if inverses:
            out.append(sigma_inv(i))
    return out


@dataclass(frozen=True)
class Word:
    letters: tuple = ()
    rank: int = field(default=0, compare=False)

    def __post_init__(self):
        letters = tuple(self.letters)
        object.__setattr__(self, "letters", letters)
        need = max((g.index for g in letters), default=0) + 1
        if self.rank == 0:
            object.__setattr__(self, "rank", max(need, 1))
        elif self.rank < need:
            raise IndexOutOfRange(f"word {self} needs rank >= {need}, got {self.rank}")

    @classmethod
    def parse(cls, text: str, rank: int = 0) -> "Word":
        text = text.strip()
        if text in ("", "1"):
            return cls((), rank)
        return cls(tuple(Generator.parse(tok) for tok in text.split()), rank)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters, max(self.rank, other.rank))

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __str__(self):
        return " ".join(map(str, self.letters)) if self.letters else "1"

    def __repr__(self):
        return f"Word({self})"

    def max_index(self) -> int:
        return max((g.index for g in self.letters), default=0)

    def with_rank(self, n: int) -> "Word":
        return Word(self.letters, n)


def _word_key(w: Word):
    return (len(w), [g.sort_key() for g in w.letters])


class AlgebraElement:
    """Finite linear combination of words; coefficients are any scalars."""

    __slots__ = ("terms", "rank")

    def __init__(self, terms: Mapping[Word, object] | None = None, rank: int = 0):
        clean = {}
        for w, c in (terms or {}).items():
            if c:
                clean[w] = c
        self.terms = clean
        self.rank = max([rank, 1] + [w.rank for w in clean])

    @classmethod
    def word(cls, w: Word | str, coeff=1, rank: int = 0) -> "AlgebraElement":
        if isinstance(w, str):
            w = Word.parse(w, rank)
        return cls({w: coeff}, rank)

    @classmethod
    def one(cls, rank: int = 1) -> "AlgebraElement":
        return cls({Word((), rank): 1}, rank)

    @classmethod
    def gen(cls, g: Generator, rank: int = 0) -> "AlgebraElement":
        return cls({Word((g,), rank): 1}, rank)

    @classmethod
    def scalar(cls, c, rank: int = 1) -> "AlgebraElement":
        return cls({Word((), rank): c}, rank)

    @staticmethod
    def _lift(x, rank: int) -> "AlgebraElement":
        if isinstance(x, AlgebraElement):
            return x
        if isinstance(x, Word):
            return AlgebraElement({x: 1})
        if isinstance(x, Generator):
            return AlgebraElement.gen(x)
        return AlgebraElement.scalar(x, rank)

    def __add__(self, other):
        o = self._lift(other, self.rank)
        terms = dict(self.terms)
        for w, c in o.terms.items():
            terms[w] = terms[w] + c if w in terms else c
        return AlgebraElement(terms, max(self.rank, o.rank))

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement({w: -c for w, c in self.terms.items()}, self.rank)

    def __sub__(self, other):
        return self + (-self._lift(other, self.rank))

    def __rsub__(self, other):
        return self._lift(other, self.rank) - self

    def __mul__(self, other):
        if not isinstance(other, (AlgebraElement, Word, Generator)):
            return AlgebraElement({w: c * other for w, c in self.terms.items()}, self.rank)
        o = self._lift(other, self.rank)
        terms: dict = {}
        for u, a in self.terms.items():
            for v, b in o.terms.items():
                w = u * v
                terms[w] = terms[w] + a * b if w in terms else a * b
        return AlgebraElement(terms, max(self.rank, o.rank))

    def __rmul__(self, c):
        if isinstance(c, (Word, Generator)):
            return self._lift(c, self.rank) * self
        return AlgebraElement({w: c * x for w, x in self.terms.items()}, self.rank)

    def __pow__(self, k: int):
        out = AlgebraElement.one(self.rank)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            other = self._lift(other, self.rank)
        return (self - other).is_zero()

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.terms

    def max_index(self) -> int:
        return max((w.max_index() for w in self.terms), default=0)

    def map_coefficients(self, fn) -> "AlgebraElement":
        return AlgebraElement({w: fn(c) for w, c in self.terms.items()}, self.rank)

    def sorted_terms(self) -> list[tuple[Word, object]]:
        return sorted(self.terms.items(), key=lambda wc: _word_key(wc[0]))

    def to_json(self, fmt=str) -> dict:
        return {"terms": [{"word": str(w), "coeff": fmt(c)} for w, c in self.sorted_terms()]}

    @classmethod
    def from_json(cls, data: dict, parse, rank: int = 0) -> "AlgebraElement":
        return cls({Word.parse(t["word"], rank): parse(t["coeff"]) for t in data["terms"]}, rank)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.sorted_terms():
            parts.append(f"({c})*{w}" if w.letters else f"({c})")
        return " + ".join(parts)

    __repr__ = __str__


def element(text: str, rank: int = 0, coeff=1) -> AlgebraElement:
    """Shorthand: ``element("s1 r2")`` is the single word s1 r2."""
    return AlgebraElement.word(Word.parse(text, rank), coeff, rank)


@dataclass(frozen=True)
class Relation:
    lhs: AlgebraElement
    rhs: AlgebraElement
    label: str

    def relator(self) -> AlgebraElement:
        return self.lhs - self.rhs

    def __str__(self):
        return f"{self.label}: {self.lhs} = {self.rhs}"


def _w(*gens: Generator, rank: int) -> AlgebraElement:
    return AlgebraElement.word(Word(tuple(gens), rank), 1, rank)


def _rel(lhs, rhs, label) -> Relation:
    return Relation(lhs, rhs, label)


def loop_braid_relations(n: int) -> list[Relation]:
    """The group relations: braid relations for sigma and rho, rho^2 = 1,
    the two mixed relations and all distant commutators."""
    s, r = sigma, rho
    rels = []
    for i in range(1, n):
        rels.append(_rel(_w(r(i), r(i), rank=n), AlgebraElement.one(n), f"rho_sq_{i}"))
    for i in range(1, n - 1):
        rels.append(_rel(_w(s(i), s(i + 1), s(i), rank=n), _w(s(i + 1), s(i), s(i + 1), rank=n),
                         f"braid_s_{i}"))
        rels.append(_rel(_w(r(i), r(i + 1), r(i), rank=n), _w(r(i + 1), r(i), r(i + 1), rank=n),
                         f"braid_r_{i}"))
        rels.append(_rel(_w(r(i), r(i + 1), s(i), rank=n), _w(s(i + 1), r(i), r(i + 1), rank=n),
                         f"mixed1_{i}"))
        rels.append(_rel(_w(r(i), s(i + 1), s(i), rank=n), _w(s(i + 1), s(i), r(i + 1), rank=n),
                         f"mixed2_{i}"))
    for i in range(1, n):
        for j in range(i + 2, n):
            rels.append(_rel(_w(s(i), s(j), rank=n), _w(s(j), s(i), rank=n), f"distant_s_{i}_{j}"))
            rels.append(_rel(_w(r(i), r(j), rank=n), _w(r(j), r(i), rank=n), f"distant_r_{i}_{j}"))
    for i in range(1, n):
        for j in range(1, n):
            if abs(i - j) > 1:
                rels.append(_rel(_w(s(i), r(j), rank=n), _w(r(j), s(i), rank=n),
                                 f"distant_sr_{i}_{j}"))
    return rels


def quadratic_relations(n: int, t, omit_r1i: bool = False, omit_r1ii: bool = False) -> list[Relation]:
    """The local relations: sigma^2 = (1-t) sigma + t, rho sigma = -t rho +
    sigma + t, sigma rho = -sigma + rho + 1."""
    rels = []
    for i in range(1, n):
        one = AlgebraElement.one(n)
        s = AlgebraElement.gen(sigma(i), n)
        r = AlgebraElement.gen(rho(i), n)
        rels.append(_rel(s * s, s * (1 - t) + one * t, f"quad_s_{i}"))
        if not omit_r1i:
            rels.append(_rel(r * s, r * (-t) + s + one * t, f"r1i_{i}"))
        if not omit_r1ii:
            rels.append(_rel(s * r, -s + r + one, f"r1ii_{i}"))
    return rels


def lh_relations(n: int, t, omit_r1i: bool = False, omit_r1ii: bool = False) -> list[Relation]:
    return loop_braid_relations(n) + quadratic_relations(n, t, omit_r1i, omit_r1ii)


def braid_relations(n: int) -> list[Relation]:
    """The Artin relations in the sigma letters alone."""
    return [r for r in loop_braid_relations(n) if r.label.startswith(("braid_s", "distant_s_"))]


def mixed1_reversed_relations(n: int) -> list[Relation]:
    """sigma_i rho_{i+1} rho_i = rho_{i+1} rho_i sigma_{i+1} (implied by Q_n)."""
    s, r = sigma, rho
    return [_rel(_w(s(i), r(i + 1), r(i), rank=n), _w(r(i + 1), r(i), s(i + 1), rank=n),
                 f"mixed1_rev_{i}") for i in range(1, n - 1)]


def mixed2_reversed_relations(n: int) -> list[Relation]:
    """The word-reversal of the second mixed relation.  It is *not* a
    consequence of Q_n; used as a designed negative check."""
    s, r = sigma, rho
    return [_rel(_w(s(i), s(i + 1), r(i), rank=n), _w(r(i + 1), s(i), s(i + 1), rank=n),
                 f"mixed2_rev_{i}") for i in range(1, n - 1)]


def rho_sigma_rho_relations(n: int) -> list[Relation]:
    """rho_{i+1} sigma_i rho_{i+1} = rho_i sigma_{i+1} rho_i."""
    s, r = sigma, rho
    return [_rel(_w(r(i + 1), s(i), r(i + 1), rank=n), _w(r(i), s(i + 1), r(i), rank=n),
                 f"rsr_{i}") for i in range(1, n - 1)]


def derived_lh_relations(n: int, t) -> list[Relation]:
    """Translates of the two derived rules M1 and M2 of LH_n."""
    rels = []
    for i in range(1, n - 1):
        def g(text):
            return Word.parse(text, n)

        def e(text, c=1):
            return AlgebraElement.word(translate(g(text), i - 1), c, n)

        m1_lhs = e("s2 r1 s2")
        m1_rhs = e("s1 r2 r1") + e("r1 s2 s1") - e("r1 s2 r1")
        rels.append(_rel(m1_lhs, m1_rhs, f"M1_{i}"))
        m2_lhs = e("r2 s1 s2")
        m2_rhs = (e("s1 r2 r1") + e("r1 s2 r1", t) - e("r1 r2 r1", t) + e("s2 s1")
                  - e("s2 r1") - e("r2 s1", t) + e("r2 r1", t))
        rels.append(_rel(m2_lhs, m2_rhs, f"M2_{i}"))
    return rels


def translate(x, k: int, rank: int | None = None):
    """Shift every generator index by k (Word, AlgebraElement, Relation)."""
    if isinstance(x, Word):
        if any(g.index + k < 1 for g in x.letters):
            raise IndexOutOfRange(f"cannot shift {x} by {k}")
        letters = tuple(g.shifted(k) for g in x.letters)
        target = rank if rank is not None else max(x.rank + k, 1)
        if letters and max(g.index for g in letters) >= target:
            raise IndexOutOfRange(f"{x} shifted by {k} does not fit rank {target}")
        return Word(letters, target)
    if isinstance(x, AlgebraElement):
        target = rank if rank is not None else max(x.rank + k, 1)
        return AlgebraElement({translate(w, k, target): c for w, c in x.terms.items()}, target)
    if isinstance(x, Relation):
        return Relation(translate(x.lhs, k, rank), translate(x.rhs, k, rank), f"{x.label}+{k}")
    raise TypeError(f"cannot translate {type(x).__name__}")


def flip_indices(x, n: int):
    """Apply the index symmetry i -> n - i."""
    if isinstance(x, Word):
        return Word(tuple(Generator(g.kind, n - g.index) for g in x.letters), n)
    if isinstance(x, AlgebraElement):
        return AlgebraElement({flip_indices(w, n): c for w, c in x.terms.items()}, n)
    if isinstance(x, Relation):
        return Relation(flip_indices(x.lhs, n), flip_indices(x.rhs, n), f"flip({x.label})")
    raise TypeError(f"cannot flip {type(x).__name__}")


def eliminate_inverses(x: AlgebraElement, t) -> AlgebraElement:
    """Rewrite sigma_i^-1 as (sigma_i - (1 - t)) / t, valid once sigma_i^2 =
    (1-t) sigma_i + t holds and t is invertible."""
    if not t:
        raise ZeroDivisionError("sigma^-1 elimination needs t invertible")
    out = AlgebraElement({}, x.rank)
    for w, c in x.terms.items():
        acc = AlgebraElement.scalar(c, x.rank)
        for g in w.letters:
            if g.kind == SIGMA_INV:
                s = AlgebraElement.gen(sigma(g.index), x.rank)
                factor = (s - (1 - t)) * (1 / t)
            else:
                factor = AlgebraElement.gen(g, x.rank)
            acc = acc * factor
        out = out + acc
    return out


def parse_element(text: str, rank: int = 0, parse_coeff=None) -> AlgebraElement:
    """Parse sums like ``"s1 r2 - 2 r1 + 1"`` or ``"(s1 - r1)(s2 - r2)"``.

    Products of parenthesised factors are expanded; coefficients are
    integers or ``a/b`` unless ``parse_coeff`` is given.
    """
    from fractions import Fraction

    parse_coeff = parse_coeff or Fraction
    tokens = re.findall(r"s\d+\^-1|[sr]\d+|\d+(?:/\d+)?|[-+()*]", text)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take():
        nonlocal pos
        pos += 1
        return tokens[pos - 1]

    def factor():
        tok = peek()
        if tok == "(":
            take()
            val = expr()
            if take() != ")":
                raise ValueError("unbalanced parentheses")
            return val
        if tok is None:
            raise ValueError(f"unexpected end of {text!r}")
        take()
        if tok[0].isdigit():
            return AlgebraElement.scalar(parse_coeff(tok), max(rank, 1))
        return AlgebraElement.gen(Generator.parse(tok), rank)

    def term():
        val = factor()
        while peek() not in (None, "+", "-", ")"):
            if peek() == "*":
                take()
            val = val * factor()
        return val

    def expr():
        sign = 1
        if peek() in ("+", "-"):
            sign = -1 if take() == "-" else 1
        val = term() * sign
        while peek() in ("+", "-"):
            op = take()
            rhs = term()
            val = val + rhs if op == "+" else val - rhs
        return val

    out = expr()
    if pos != len(tokens):
        raise ValueError(f"trailing input in {text!r}")
    return AlgebraElement(out.terms, max(out.rank, rank))
