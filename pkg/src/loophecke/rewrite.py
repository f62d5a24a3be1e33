"""Noncommutative rewriting over the free algebra on sigma_i, rho_i.

Internally a word is a ``bytes`` object of letter codes (sigma_i -> 2(i-1),
rho_i -> 2(i-1)+1), so the degree-lexicographic order is simply
``(len(w), w)``.  Polynomials are dicts word -> coefficient.  Coefficients
are ``Fraction`` over Q or plain ints modulo p over GF(p).

Completion is the Buchberger/Mora procedure for two-sided ideals: overlap
ambiguities between rule leads are resolved in order of overlap length and
every nonzero residue becomes a new rule.  Leads are kept interreduced, so
inclusion ambiguities never survive.
"""

from __future__ import annotations

import hashlib
import heapq
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence

from .presentations import (
    RHO, SIGMA, SIGMA_INV, AlgebraElement, Generator, Relation, Word,
    eliminate_inverses, lh_relations,
)
from .scalars import DEFAULT_PRIMES, PrimeFieldElement, format_rational, parse_rational

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))

COMPLETE = "complete"
TRUNCATED = "truncated"


class DegreeBudgetExceeded(RuntimeError):
    """Raised when a caller demands a complete system but completion hit the budget."""

    def __init__(self, msg, system=None):
        super().__init__(msg)
        self.system = system


class NotComplete(RuntimeError):
    pass


# ---------------------------------------------------------------- words


def encode_letter(g: Generator) -> int:
    if g.kind == SIGMA_INV:
        raise ValueError("eliminate sigma inverses before rewriting")
    return 2 * (g.index - 1) + (1 if g.kind == RHO else 0)


def decode_letter(c: int) -> Generator:
    return Generator(RHO if c & 1 else SIGMA, c // 2 + 1)


def encode_word(w: Word) -> bytes:
    return bytes(encode_letter(g) for g in w.letters)


def decode_word(b: bytes, rank: int = 0) -> Word:
    return Word(tuple(decode_letter(c) for c in b), rank)


def _key(w: bytes):
    return (len(w), w)


def term_order_compare(u: Word, v: Word) -> int:
    """Degree-lexicographic comparison with sigma_1 < rho_1 < sigma_2 < ...

    Returns -1, 0 or 1.
    """
    a, b = _key(encode_word(u)), _key(encode_word(v))
    return (a > b) - (a < b)


# ---------------------------------------------------------------- coefficients


class _Coeffs:
    """Arithmetic on internal coefficients: Fraction (p is None) or int mod p."""

    def __init__(self, p: int | None = None):
        self.p = p

    def conv(self, c):
        if self.p is None:
            if isinstance(c, PrimeFieldElement):
                raise TypeError("prime-field coefficient in a rational system")
            return Fraction(c)
        if isinstance(c, PrimeFieldElement):
            if c.modulus != self.p:
                raise TypeError("modulus mismatch")
            return c.residue
        c = Fraction(c)
        return c.numerator * pow(c.denominator, -1, self.p) % self.p

    def out(self, c):
        return c if self.p is None else PrimeFieldElement(c, self.p)

    def inv(self, c):
        return 1 / c if self.p is None else pow(c, -1, self.p)

    def fmt(self, c) -> str:
        return format_rational(c) if self.p is None else str(c)

    def parse(self, s: str):
        return parse_rational(s) if self.p is None else int(s) % self.p


def _axpy(dst: dict, src: dict, c, p, prefix: bytes = b"", suffix: bytes = b""):
    """dst += c * prefix * src * suffix, dropping zeros."""
    for w, a in src.items():
        if prefix or suffix:
            w = prefix + w + suffix
        v = dst.get(w, 0) + c * a
        if p is not None:
            v %= p
        if v:
            dst[w] = v
        else:
            dst.pop(w, None)


# ---------------------------------------------------------------- rules


@dataclass(frozen=True)
class RewriteRule:
    lead: Word
    tail: AlgebraElement

    def __str__(self):
        return f"{self.lead} -> {self.tail}"


@dataclass
class _Rule:
    lead: bytes
    tail: dict
    rid: int


class RewriteSystem:
    """Oriented rules lead -> tail plus a memoised normal form."""

    def __init__(self, n: int, t, p: int | None = None):
        self.n = n
        self.t = t
        self.coeffs = _Coeffs(p)
        self.rules: dict[bytes, _Rule] = {}
        self._lengths: list[int] = []
        self._memo: dict[bytes, dict] = {}
        self.complete_up_to = 0
        self.status = TRUNCATED
        self.label = ""

    @property
    def p(self):
        return self.coeffs.p

    # -- rule bookkeeping

    def _add_rule(self, rule: _Rule):
        self.rules[rule.lead] = rule
        self._refresh()

    def _drop_rule(self, lead: bytes):
        del self.rules[lead]
        self._refresh()

    def _refresh(self):
        self._lengths = sorted({len(k) for k in self.rules})
        self._memo.clear()

    # -- normal forms

    def _match_suffix(self, w: bytes):
        for L in self._lengths:
            if L > len(w):
                break
            r = self.rules.get(w[len(w) - L:])
            if r is not None:
                return r
        return None

    def nf_word(self, w: bytes) -> dict:
        got = self._memo.get(w)
        if got is not None:
            return got
        if not w:
            res = {w: 1}
        else:
            p = self.p
            res = {}
            head = self.nf_word(w[:-1])
            x = w[-1:]
            for u, c in head.items():
                ux = u + x
                r = self._match_suffix(ux)
                if r is None:
                    v = res.get(ux, 0) + c
                    if p is not None:
                        v %= p
                    if v:
                        res[ux] = v
                    else:
                        res.pop(ux, None)
                    continue
                a = ux[: len(ux) - len(r.lead)]
                for m, d in r.tail.items():
                    _axpy(res, self.nf_word(a + m), c * d, p)
        self._memo[w] = res
        return res

    def nf_poly(self, f: dict) -> dict:
        out: dict = {}
        for w, c in f.items():
            _axpy(out, self.nf_word(w), c, self.p)
        return out

    def is_irreducible(self, w: bytes) -> bool:
        return all(self._match_suffix(w[:k]) is None for k in range(1, len(w) + 1))

    # -- conversion

    def poly(self, x: AlgebraElement) -> dict:
        if any(g.kind == SIGMA_INV for w in x.terms for g in w.letters):
            x = eliminate_inverses(x, self.t)
        if x.max_index() >= self.n:
            raise ValueError(f"element of rank {x.max_index() + 1} exceeds system rank {self.n}")
        out: dict = {}
        for w, c in x.terms.items():
            _axpy(out, {encode_word(w): self.coeffs.conv(c)}, 1, self.p)
        return out

    def element(self, f: dict) -> AlgebraElement:
        return AlgebraElement({decode_word(w, self.n): self.coeffs.out(c) for w, c in f.items()},
                              self.n)

    def normal_form(self, x: AlgebraElement) -> AlgebraElement:
        return self.element(self.nf_poly(self.poly(x)))

    def reduce_randomly(self, x: AlgebraElement, rng: random.Random) -> AlgebraElement:
        """Reduce by rewriting a random redex at each step (no memo)."""
        f = self.poly(x)
        p = self.p
        while True:
            redexes = []
            for w in f:
                for i in range(len(w)):
                    for L in self._lengths:
                        if i + L <= len(w) and w[i:i + L] in self.rules:
                            redexes.append((w, i, L))
            if not redexes:
                return self.element(f)
            w, i, L = rng.choice(redexes)
            c = f.pop(w)
            _axpy(f, self.rules[w[i:i + L]].tail, c, p, w[:i], w[i + L:])

    def rule_list(self) -> list[RewriteRule]:
        return [RewriteRule(decode_word(r.lead, self.n), self.element(r.tail))
                for r in sorted(self.rules.values(), key=lambda r: _key(r.lead))]

    # -- serialisation

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "t": format_rational(Fraction(self.t)) if self.p is None else str(self.coeffs.conv(self.t)),
            "p": self.p,
            "status": self.status,
            "complete_up_to": self.complete_up_to,
            "rules": [
                {"lead": str(decode_word(r.lead, self.n)),
                 "tail": [[str(decode_word(w, self.n)), self.coeffs.fmt(c)]
                          for w, c in sorted(r.tail.items(), key=lambda wc: _key(wc[0]))]}
                for r in sorted(self.rules.values(), key=lambda r: _key(r.lead))
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "RewriteSystem":
        p = data.get("p")
        t = parse_rational(data["t"]) if p is None else int(data["t"])
        sys_ = cls(data["n"], t, p)
        for i, r in enumerate(data["rules"]):
            lead = encode_word(Word.parse(r["lead"], data["n"]))
            tail = {encode_word(Word.parse(w, data["n"])): sys_.coeffs.parse(c) for w, c in r["tail"]}
            sys_.rules[lead] = _Rule(lead, tail, i)
        sys_._refresh()
        sys_.status = data["status"]
        sys_.complete_up_to = data["complete_up_to"]
        return sys_


# ---------------------------------------------------------------- completion


def _leading(f: dict) -> bytes:
    return max(f, key=_key)


def _overlaps(a: _Rule, b: _Rule):
    """Proper overlaps: a suffix of a.lead equals a prefix of b.lead."""
    la, lb = a.lead, b.lead
    for k in range(1, min(len(la), len(lb))):
        if la[len(la) - k:] == lb[:k]:
            yield k, la + lb[k:]


class _Completion:
    def __init__(self, system: RewriteSystem, max_degree: int):
        self.sys = system
        self.max_degree = max_degree
        self.pairs: list = []
        self.seq = 0
        self.next_id = 0
        self.truncated = False

    def _queue_pairs(self, new: _Rule):
        for other in list(self.sys.rules.values()):
            for a, b in ((new, other), (other, new)) if other is not new else ((new, new),):
                for k, w in _overlaps(a, b):
                    self.seq += 1
                    heapq.heappush(self.pairs, (len(w), self.seq, a.rid, b.rid, a.lead, b.lead, k))

    def add(self, f: dict):
        s = self.sys
        p = s.p
        stack = [f]
        while stack:
            g = s.nf_poly(stack.pop())
            if not g:
                continue
            lead = _leading(g)
            c = g.pop(lead)
            ci = s.coeffs.inv(c)
            tail = {}
            for w, a in g.items():
                v = -a * ci
                if p is not None:
                    v %= p
                tail[w] = v
            for old in [r for r in s.rules.values() if lead in r.lead]:
                s._drop_rule(old.lead)
                relator = dict(old.tail)
                for w in relator:
                    relator[w] = -relator[w] % p if p is not None else -relator[w]
                relator[old.lead] = 1
                stack.append(relator)
            rule = _Rule(lead, tail, self.next_id)
            self.next_id += 1
            s._add_rule(rule)
            self._queue_pairs(rule)

    def _alive(self, lead: bytes, rid: int) -> bool:
        r = self.sys.rules.get(lead)
        return r is not None and r.rid == rid

    def run(self):
        s = self.sys
        p = s.p
        while self.pairs:
            deg, _, ra, rb, la, lb, k = heapq.heappop(self.pairs)
            if not (self._alive(la, ra) and self._alive(lb, rb)):
                continue
            if deg > self.max_degree:
                self.truncated = True
                continue
            a, b = s.rules[la], s.rules[lb]
            # a.lead = A B, b.lead = B C, overlap A B C
            A, C = la[: len(la) - k], lb[k:]
            spoly: dict = {}
            _axpy(spoly, a.tail, 1, p, b"", C)
            _axpy(spoly, b.tail, -1 if p is None else p - 1, p, A, b"")
            self.add(spoly)


def _interreduce_tails(system: RewriteSystem):
    for r in list(system.rules.values()):
        del system.rules[r.lead]
        system._refresh()
        r.tail = system.nf_poly(r.tail)
        system.rules[r.lead] = r
        system._refresh()


def _complete_direct(polys, n, t, max_degree, p) -> tuple[RewriteSystem, bool]:
    system = RewriteSystem(n, t, p)
    run = _Completion(system, max_degree)
    for f in polys:
        g: dict = {}
        _axpy(g, {w: system.coeffs.conv(c) for w, c in f.items()}, 1, p)
        run.add(g)
    run.run()
    _interreduce_tails(system)
    return system, run.truncated


def rational_reconstruction(a: int, m: int) -> Fraction | None:
    """Smallest-height fraction r/s with r = a*s mod m, |r|, s <= sqrt(m/2)."""
    bound = isqrt(m // 2)
    r0, r1, s0, s1 = m, a % m, 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    f = Fraction(r1, s1)
    return f if (f.numerator - a * f.denominator) % m == 0 else None


def _lift(modsys: RewriteSystem, t) -> RewriteSystem | None:
    lifted = RewriteSystem(modsys.n, t, None)
    for r in modsys.rules.values():
        tail = {}
        for w, c in r.tail.items():
            q = rational_reconstruction(c, modsys.p)
            if q is None:
                return None
            tail[w] = q
        lifted.rules[r.lead] = _Rule(r.lead, tail, r.rid)
    lifted._refresh()
    return lifted


def overlap_residues(system: RewriteSystem, max_degree: int | None = None):
    """Yield (overlap word, residue) for every overlap that fails to resolve."""
    rules = sorted(system.rules.values(), key=lambda r: _key(r.lead))
    p = system.p
    for a in rules:
        for b in rules:
            for k, w in _overlaps(a, b):
                if max_degree is not None and len(w) > max_degree:
                    continue
                spoly: dict = {}
                _axpy(spoly, a.tail, 1, p, b"", b.lead[k:])
                _axpy(spoly, b.tail, -1 if p is None else p - 1, p, a.lead[: len(a.lead) - k], b"")
                res = system.nf_poly(spoly)
                if res:
                    yield w, res


def _verified(system: RewriteSystem, polys, max_degree: int) -> bool:
    if any(system.nf_poly(f) for f in polys):
        return False
    return next(overlap_residues(system, max_degree), None) is None


def _complete_polys(polys: list[dict], n: int, t, max_degree: int, p: int | None,
                    modular: bool) -> tuple[RewriteSystem, bool]:
    if p is None and modular:
        for prime in DEFAULT_PRIMES:
            modsys, truncated = _complete_direct(polys, n, t, max_degree, prime)
            lifted = _lift(modsys, t)
            if lifted is not None and _verified(lifted, polys, max_degree):
                return lifted, truncated
    return _complete_direct(polys, n, t, max_degree, p)


def complete(relations: Sequence[Relation], n: int, t, max_degree: int | None = None,
             p: int | None = None, strict: bool = False, modular: bool = True) -> RewriteSystem:
    """Complete the two-sided ideal generated by ``relations``.

    Overlaps longer than ``max_degree`` (default 2n + 4) are skipped and the
    result is flagged ``truncated``; with ``strict=True`` that raises
    DegreeBudgetExceeded instead (the truncated system rides on the error).

    Over Q (``p=None``) intermediate coefficients can grow to thousands of
    digits even when the final rules are tiny, so by default the completion
    runs modulo a 62-bit prime, the final rules are lifted by rational
    reconstruction and the lift is re-checked over Q: every input relation
    must reduce to 0 and every overlap within the budget must resolve.  If
    that check fails for both default primes the direct Q completion runs.
    """
    max_degree = 2 * n + 4 if max_degree is None else max_degree
    probe = RewriteSystem(n, t, None)
    polys = [probe.poly(rel.relator()) for rel in relations]
    system, truncated = _complete_polys(polys, n, t, max_degree, p, modular)
    system.complete_up_to = max_degree
    system.status = TRUNCATED if truncated else COMPLETE
    if strict and truncated:
        raise DegreeBudgetExceeded(f"completion needs overlaps beyond degree {max_degree}", system)
    return system


def relation_hash(relations: Sequence[Relation]) -> str:
    text = "\n".join(sorted(f"{r.label}|{r.lhs}|{r.rhs}" for r in relations))
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def lh_system(n: int, t, max_degree: int | None = None, p: int | None = None,
              omit_r1i: bool = False, omit_r1ii: bool = False, strict: bool = False) -> RewriteSystem:
    """Completed rewriting system for LH_n at the specialisation t."""
    rels = lh_relations(n, Fraction(t) if p is None else t, omit_r1i, omit_r1ii)
    return complete(rels, n, t, max_degree, p, strict)


# ---------------------------------------------------------------- bases


def _irreducible_levels(system: RewriteSystem, max_len: int | None = None):
    letters = [bytes([c]) for c in range(2 * (system.n - 1))]
    level = [b""]
    levels = [level]
    while level:
        if max_len is not None and len(levels) > max_len:
            return levels, False
        nxt = []
        for u in level:
            for x in letters:
                w = u + x
                if system._match_suffix(w) is None:
                    nxt.append(w)
        level = nxt
        if level:
            levels.append(level)
    return levels, True


def enumerate_basis(system: RewriteSystem) -> tuple[int, list[Word]]:
    """Irreducible words, by breadth-first search until an empty level."""
    if system.status != COMPLETE:
        raise NotComplete("basis enumeration needs a complete system")
    levels, _ = _irreducible_levels(system)
    words = [decode_word(w, system.n) for lvl in levels for w in lvl]
    return len(words), words


def basis_size_by_degree(system: RewriteSystem) -> list[int]:
    levels, _ = _irreducible_levels(system)
    return [len(lvl) for lvl in levels]


def _rule_polys(system: RewriteSystem) -> list[dict]:
    out = []
    for r in sorted(system.rules.values(), key=lambda r: _key(r.lead)):
        f = {w: (-c if system.p is None else -c % system.p) for w, c in r.tail.items()}
        f[r.lead] = 1
        out.append(f)
    return out


def quotient_system(system: RewriteSystem, extra: Iterable[AlgebraElement],
                    max_degree: int | None = None, strict: bool = True) -> RewriteSystem:
    """Re-complete ``system`` with the extra relators added."""
    if system.status != COMPLETE:
        raise NotComplete("quotient experiments start from a complete system")
    budget = system.complete_up_to if max_degree is None else max_degree
    polys = _rule_polys(system) + [system.poly(x) for x in extra]
    new, truncated = _complete_polys(polys, system.n, system.t, budget, system.p, True)
    new.status = TRUNCATED if truncated else COMPLETE
    new.complete_up_to = budget
    if truncated and strict:
        raise DegreeBudgetExceeded(f"quotient completion exceeded degree {budget}", new)
    return new


def quotient_experiment(system: RewriteSystem, extra: Iterable[AlgebraElement],
                        max_degree: int | None = None, strict: bool = True) -> int:
    """Dimension of the quotient by the extra relators (re-completed)."""
    return enumerate_basis(quotient_system(system, extra, max_degree, strict))[0]


def regular_representation(system: RewriteSystem):
    """Left-multiplication matrices on the normal-form basis."""
    from .linalg import Matrix
    from .reps import GeneratorAssignment
    from .scalars import GF, QQ

    dim, words = enumerate_basis(system)
    enc = [encode_word(w) for w in words]
    index = {w: i for i, w in enumerate(enc)}
    field = QQ if system.p is None else GF(system.p)
    images = {}
    for code in range(2 * (system.n - 1)):
        rows = [[0] * dim for _ in range(dim)]
        for j, w in enumerate(enc):
            for u, c in system.nf_word(bytes([code]) + w).items():
                rows[index[u]][j] = c
        images[decode_letter(code)] = Matrix(field, rows)
    return GeneratorAssignment(system.n, dim, images, system.t, name="regular")


def structure_constants(system: RewriteSystem):
    """Basis words and, for each ordered pair (i, j), the normal form of
    w_i * w_j as a sparse dict index -> coefficient."""
    dim, words = enumerate_basis(system)
    enc = [encode_word(w) for w in words]
    index = {w: i for i, w in enumerate(enc)}
    table = {}
    for i, u in enumerate(enc):
        for j, v in enumerate(enc):
            table[i, j] = {index[w]: c for w, c in system.nf_word(u + v).items()}
    return enc, table


def trace_form_ssdim(system: RewriteSystem) -> tuple[int, int]:
    """(dim, ssdim) of the abstract algebra via the regular trace form.

    tr(L_u L_v) = sum_w c_w tr(L_w) with u v = sum_w c_w w, and
    tr(L_w) = sum_j [coefficient of w_j in w w_j].  Valid in characteristic 0.
    """
    from .linalg import Matrix
    from .scalars import GF, QQ

    enc, table = structure_constants(system)
    dim = len(enc)
    trace = [sum(table[w, j].get(j, 0) for j in range(dim)) for w in range(dim)]
    field = QQ if system.p is None else GF(system.p)
    gram = [[sum(c * trace[w] for w, c in table[i, j].items()) for j in range(dim)]
            for i in range(dim)]
    rank = Matrix(field, gram).rank()
    return dim, rank


def variant_relations_experiment(n: int, t, drop: str | None = None, max_degree: int | None = None,
                                 max_len: int | None = None) -> dict:
    """Complete with R1i or R1ii dropped; the outcome is a value, never an error.

    Returns ``{"status": "finite", "dim": d, ...}`` or
    ``{"status": "budget-exceeded", "levels": [...]}`` where ``levels`` are
    the irreducible-word counts per length up to the budget.
    """
    if drop not in (None, "r1i", "r1ii"):
        raise ValueError(f"unknown relation family {drop!r}")
    budget = 2 * n + 4 if max_degree is None else max_degree
    system = lh_system(n, t, budget, omit_r1i=drop == "r1i", omit_r1ii=drop == "r1ii")
    levels, terminated = _irreducible_levels(system, max_len if max_len is not None else budget)
    sizes = [len(lvl) for lvl in levels]
    if system.status == COMPLETE and terminated:
        return {"status": "finite", "dim": sum(sizes), "levels": sizes}
    return {"status": "budget-exceeded", "levels": sizes, "confluence_status": system.status}
