"""Symmetric-group and Hecke symmetrizers, hook idempotents and Psi maps.

Permutations compose right to left: ``(g * h)(x) = g(h(x))``.  A reduced
word comes from bubble sort: each swap of adjacent positions j, j+1 is right
multiplication by s_j, so sorting g with swaps j_1, ..., j_k gives
g = s_{j_k} ... s_{j_1}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import factorial
from typing import Iterable, Sequence

from .presentations import AlgebraElement, Word, parse_element, rho, sigma


class NonInvertibleT(ZeroDivisionError):
    pass


class DegenerateScaling(ArithmeticError):
    pass


@dataclass(frozen=True)
class Permutation:
    images: tuple  # one-line notation, values 1..m

    def __post_init__(self):
        imgs = tuple(self.images)
        object.__setattr__(self, "images", imgs)
        if sorted(imgs) != list(range(1, len(imgs) + 1)):
            raise ValueError(f"{imgs} is not a permutation of 1..{len(imgs)}")

    @classmethod
    def identity(cls, m: int) -> "Permutation":
        return cls(tuple(range(1, m + 1)))

    @classmethod
    def transposition(cls, m: int, a: int, b: int) -> "Permutation":
        imgs = list(range(1, m + 1))
        imgs[a - 1], imgs[b - 1] = b, a
        return cls(tuple(imgs))

    @property
    def m(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return Permutation(tuple(self.images[x - 1] for x in other.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.m
        for i, v in enumerate(self.images, 1):
            inv[v - 1] = i
        return Permutation(tuple(inv))

    def length(self) -> int:
        """Coxeter length = number of inversions."""
        a = self.images
        return sum(1 for i in range(len(a)) for j in range(i + 1, len(a)) if a[i] > a[j])

    coxeter_length = length

    def sign(self) -> int:
        return -1 if self.length() % 2 else 1

    def reduced_word(self) -> list[int]:
        """Indices j with self = s_{j_1} s_{j_2} ... (left to right)."""
        a = list(self.images)
        swaps = []
        changed = True
        while changed:
            changed = False
            for j in range(len(a) - 1):
                if a[j] > a[j + 1]:
                    a[j], a[j + 1] = a[j + 1], a[j]
                    swaps.append(j + 1)
                    changed = True
        return swaps[::-1]

    def word(self, kind: str = "rho") -> Word:
        make = rho if kind == "rho" else sigma
        return Word(tuple(make(j) for j in self.reduced_word()), max(self.m, 1))


def all_permutations(m: int) -> list[Permutation]:
    return [Permutation(p) for p in permutations(range(1, m + 1))]


def subgroup_on(points: Sequence[int], m: int) -> list[Permutation]:
    """All permutations of ``points`` fixing everything else in 1..m."""
    out = []
    for img in permutations(points):
        a = list(range(1, m + 1))
        for src, dst in zip(points, img):
            a[src - 1] = dst
        out.append(Permutation(tuple(a)))
    return out


# ---------------------------------------------------------------- group algebra


class GroupAlgebraElement(dict):
    """Element of Q[S_m] as a dict Permutation -> Fraction."""

    def __mul__(self, other):
        if not isinstance(other, GroupAlgebraElement):
            return GroupAlgebraElement({g: c * other for g, c in self.items() if c * other})
        out = GroupAlgebraElement()
        for g, a in self.items():
            for h, b in other.items():
                k = g * h
                v = out.get(k, 0) + a * b
                if v:
                    out[k] = v
                else:
                    out.pop(k, None)
        return out

    __rmul__ = lambda self, c: self * c

    def __sub__(self, other):
        out = GroupAlgebraElement(self)
        for g, c in other.items():
            v = out.get(g, 0) - c
            if v:
                out[g] = v
            else:
                out.pop(g, None)
        return out

    def to_element(self, kind: str = "rho", rank: int = 0) -> AlgebraElement:
        terms: dict = {}
        for g, c in self.items():
            w = g.word(kind)
            w = Word(w.letters, max(rank, w.rank))
            terms[w] = terms.get(w, 0) + c
        return AlgebraElement(terms, rank)


def symmetrizer(group: Iterable[Permutation], signed: bool = False) -> GroupAlgebraElement:
    return GroupAlgebraElement({g: Fraction(g.sign() if signed else 1) for g in group})


# ---------------------------------------------------------------- partitions


@dataclass(frozen=True)
class HookPartition:
    n: int
    arm: int  # lambda = (n - arm, 1^arm)

    def __post_init__(self):
        if self.n < 1 or not 0 <= self.arm <= self.n - 1:
            raise ValueError(f"no hook (n={self.n}, arm={self.arm})")

    @property
    def parts(self) -> tuple[int, ...]:
        return (self.n - self.arm,) + (1,) * self.arm

    def label(self) -> int:
        """Charge-style label n - 2i - 1 of the irreducible."""
        return self.n - 2 * self.arm - 1

    def __str__(self):
        return ",".join(map(str, self.parts))


def hooks(n: int) -> list[HookPartition]:
    """Hooks in the order (n), (n-1, 1), ..., (1^n)."""
    return [HookPartition(n, i) for i in range(n)]


def standard_tableau_count(parts: Sequence[int]) -> int:
    """Number of standard Young tableaux (hook length formula)."""
    n = sum(parts)
    cols = [sum(1 for p in parts if p > j) for j in range(parts[0])] if parts else []
    prod = 1
    for i, p in enumerate(parts):
        for j in range(p):
            prod *= (p - j - 1) + (cols[j] - i - 1) + 1
    return factorial(n) // prod


def row_reading_tableau(parts: Sequence[int]) -> list[list[int]]:
    rows, k = [], 1
    for p in parts:
        rows.append(list(range(k, k + p)))
        k += p
    return rows


def young_unscaled(parts: Sequence[int]) -> GroupAlgebraElement:
    """R * C for the row-reading tableau: row symmetrizer times column
    antisymmetrizer."""
    m = sum(parts)
    tab = row_reading_tableau(parts)
    R = GroupAlgebraElement({Permutation.identity(m): Fraction(1)})
    for row in tab:
        if len(row) > 1:
            R = R * symmetrizer(subgroup_on(row, m))
    C = GroupAlgebraElement({Permutation.identity(m): Fraction(1)})
    for j in range(len(tab[0])):
        col = [r[j] for r in tab if len(r) > j]
        if len(col) > 1:
            C = C * symmetrizer(subgroup_on(col, m), signed=True)
    return R * C


def quasi_idempotency_scalar(x: GroupAlgebraElement) -> Fraction:
    """kappa with x^2 = kappa x (raises if x^2 is not a multiple of x)."""
    sq = x * x
    g, c = next(iter(x.items()))
    kappa = sq.get(g, Fraction(0)) / c
    if sq - x * kappa:
        raise DegenerateScaling("element is not quasi-idempotent")
    return kappa


def young_idempotent(parts: Sequence[int], kind: str = "rho", rank: int = 0) -> AlgebraElement:
    """Primitive idempotent c * R * C of Q[S_m] pushed to rho-words; c = 1/kappa."""
    x = young_unscaled(parts)
    kappa = quasi_idempotency_scalar(x)
    if kappa == 0:
        raise DegenerateScaling(f"kappa = 0 for partition {tuple(parts)}")
    return (x * (1 / kappa)).to_element(kind, rank or sum(parts))


def hook_idempotent(lam: HookPartition, rank: int = 0) -> AlgebraElement:
    return young_idempotent(lam.parts, rank=rank or lam.n)


def young_symmetrizer(m: int, sign: int = 1, rank: int = 0) -> AlgebraElement:
    """Y_+ (sign = 1) or Y_- (sign = -1), unnormalised, in rho letters."""
    return symmetrizer(all_permutations(m), signed=sign < 0).to_element("rho", rank or m)


def hecke_symmetrizer(m: int, sign: int, t, rank: int = 0) -> AlgebraElement:
    """X_+ = sum t^{-len g} T_g and X_- = sum (-1)^{len g} T_g in sigma letters."""
    if not t:
        raise NonInvertibleT("Hecke symmetrizer needs t invertible")
    base = (1 / Fraction(t) if isinstance(t, int) else 1 / t) if sign > 0 else -1
    terms: dict = {}
    for g in all_permutations(m):
        w = g.word("sigma")
        w = Word(w.letters, max(rank or m, w.rank))
        terms[w] = terms.get(w, 0) + base ** g.length()
    return AlgebraElement(terms, rank or m)


def e22_element(rank: int = 4) -> AlgebraElement:
    """(r1+1)(r3+1) r2 (r1-1)(r3-1) r2 (r1+1)(r3+1): a multiple of the (2,2)
    idempotent (it equals R C R for the row-reading tableau up to sign)."""
    return parse_element("(r1 + 1)(r3 + 1) r2 (r1 - 1)(r3 - 1) r2 (r1 + 1)(r3 + 1)", rank)


def e220_element(rank: int = 4) -> AlgebraElement:
    """(r1+1)(r3+1) r2 (r1-1)(r3-1)."""
    return parse_element("(r1 + 1)(r3 + 1) r2 (r1 - 1)(r3 - 1)", rank)


def psi_apply(e: AlgebraElement, target):
    """Push ``e`` into a representation (-> Matrix) or a rewriting system
    (-> normal form)."""
    from .reps import GeneratorAssignment, RankMismatch
    from .rewrite import RewriteSystem

    rank = target.n
    if e.max_index() >= rank:
        raise RankMismatch(f"element needs rank {e.max_index() + 1}, target has {rank}")
    if isinstance(target, GeneratorAssignment):
        return target.evaluate(e)
    if isinstance(target, RewriteSystem):
        return target.normal_form(e)
    raise TypeError(f"cannot apply Psi into {type(target).__name__}")
