"""Explicit matrix representations of the loop braid group and its quotients.

Tensor conventions: on (C^2)^{(x) n} the basis index is
``sum_i (x_i - 1) 2^{i-1}`` for a letter word x_1 ... x_n over {1, 2}, so
letter 1 is the fastest-varying factor.  On two letters that is the order
11, 21, 12, 22 used by the 4x4 blocks below.  With this convention the
generator acting on letters i, i+1 is ``I_{2^{n-i-1}} (x) block (x) I_{2^{i-1}}``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .linalg import Matrix, direct_sum, kronecker
from .presentations import (
    RHO, SIGMA_INV, AlgebraElement, Generator, Relation, Word, rho, sigma,
)
from .scalars import QQ, QQt, RationalFunction, field_of


class NonInvertibleTau(ZeroDivisionError):
    pass


class RankMismatch(ValueError):
    pass


@dataclass
class GeneratorAssignment:
    """Images of sigma_i and rho_i (i < n) as dim x dim matrices."""

    n: int
    dim: int
    images: Mapping[Generator, Matrix]
    t: object = None
    name: str = ""
    _inverses: dict = field(default_factory=dict, repr=False)

    @property
    def field(self):
        if self.images:
            return next(iter(self.images.values())).field
        return field_of(self.t) if self.t is not None else QQ

    def image(self, g: Generator) -> Matrix:
        if g.kind == SIGMA_INV:
            inv = self._inverses.get(g.index)
            if inv is None:
                inv = self._inverses[g.index] = self.images[sigma(g.index)].inverse()
            return inv
        try:
            return self.images[g]
        except KeyError:
            raise RankMismatch(f"{g} is not a generator of rank {self.n}") from None

    def word(self, w: Word) -> Matrix:
        out = Matrix.identity(self.field, self.dim)
        for g in w.letters:
            out = out @ self.image(g)
        return out

    def evaluate(self, x: AlgebraElement | Word | Generator) -> Matrix:
        if isinstance(x, Generator):
            return self.image(x)
        if isinstance(x, Word):
            return self.word(x)
        if x.max_index() >= self.n:
            raise RankMismatch(f"element uses index {x.max_index()} but rank is {self.n}")
        out = Matrix.zeros(self.field, self.dim)
        for w, c in x.sorted_terms():
            out = out + self.word(w).scale(c)
        return out

    def generators(self) -> list[Generator]:
        return sorted(self.images, key=Generator.sort_key)


def _field_for(t):
    return field_of(t)


def _scalar(t):
    if isinstance(t, str):
        return QQt.parse(t) if "t" in t else QQ.parse(t)
    if isinstance(t, int):
        return Fraction(t)
    return t


def burau_block(t) -> list[list]:
    return [[1 - t, t], [1, 0]]


def burau_gb(n: int, t) -> GeneratorAssignment:
    """Burau representation extended to the loop braid group (rho_i is the
    transposition block)."""
    t = _scalar(t)
    f = _field_for(t)
    imgs = {}
    for i in range(1, n):
        pre = Matrix.identity(f, i - 1)
        post = Matrix.identity(f, n - i - 1)
        imgs[sigma(i)] = direct_sum(pre, Matrix(f, burau_block(t)), post)
        imgs[rho(i)] = direct_sum(pre, Matrix(f, [[0, 1], [1, 0]]), post)
    return GeneratorAssignment(n, n, imgs, t, "burau_gb")


def _block4(t, corner) -> list[list]:
    return [[1, 0, 0, 0],
            [0, 1 - t, t, 0],
            [0, 1, 0, 0],
            [0, 0, 0, corner]]


def m_block(t) -> Matrix:
    """M_t(sigma): diag-block(1, [[1-t, t], [1, 0]], 1)."""
    t = _scalar(t)
    return Matrix(_field_for(t), _block4(t, 1))


def m_prime_block(t) -> Matrix:
    """M'_t(sigma): diag-block(1, [[1-t, t], [1, 0]], -t)."""
    t = _scalar(t)
    return Matrix(_field_for(t), _block4(t, -t))


def swap_block(field=QQ) -> Matrix:
    return Matrix(field, _block4(1, 1))


def place(block: Matrix, i: int, n: int) -> Matrix:
    """Act by a 4x4 block on letters i, i+1 of (C^2)^{(x) n}."""
    f = block.field
    return kronecker(kronecker(Matrix.identity(f, 2 ** (n - i - 1)), block),
                     Matrix.identity(f, 2 ** (i - 1)))


def _tensor_rep(n: int, t, sblock: Matrix, rblock: Matrix, name: str) -> GeneratorAssignment:
    imgs = {}
    for i in range(1, n):
        imgs[sigma(i)] = place(sblock, i, n)
        imgs[rho(i)] = place(rblock, i, n)
    return GeneratorAssignment(n, 2 ** n, imgs, t, name)


def fe_rep(n: int, t) -> GeneratorAssignment:
    """The 2^n-dimensional tensor representation: sigma -> M'_t, rho -> M'_1."""
    t = _scalar(t)
    f = _field_for(t)
    one = f.one
    return _tensor_rep(n, t, m_prime_block(t), m_prime_block(one), "fe")


def naive_fm_rep(n: int, t) -> GeneratorAssignment:
    """sigma -> M_t, rho -> plain transposition: breaks the mixed relations."""
    t = _scalar(t)
    return _tensor_rep(n, t, m_block(t), swap_block(_field_for(t)), "naive_fm")


def tl_yb_matrix(tau) -> Matrix:
    """diag-block(1, [[1 - tau^4, -tau^2], [-tau^2, 0]], 1)."""
    tau = _scalar(tau)
    if not tau:
        raise NonInvertibleTau("tau must be invertible")
    return Matrix(_field_for(tau), [[1, 0, 0, 0],
                                    [0, 1 - tau ** 4, -tau ** 2, 0],
                                    [0, -tau ** 2, 0, 0],
                                    [0, 0, 0, 1]])


def tl_yb_rep(n: int, tau) -> GeneratorAssignment:
    """Braid-group-only representation sigma_i -> TL/Yang-Baxter block."""
    tau = _scalar(tau)
    blk = tl_yb_matrix(tau)
    imgs = {sigma(i): place(blk, i, n) for i in range(1, n)}
    return GeneratorAssignment(n, 2 ** n, imgs, tau ** 4, "tl_yb")


# ---------------------------------------------------------------- checking


@dataclass
class VerificationReport:
    rep: str
    n: int
    t: object
    results: dict  # label -> bool

    @property
    def all_pass(self) -> bool:
        return all(self.results.values())

    def failures(self) -> list[str]:
        return [k for k, v in self.results.items() if not v]

    def to_json(self) -> dict:
        return {"rep": self.rep, "n": self.n, "t": str(self.t),
                "relations": {k: ("pass" if v else "fail") for k, v in self.results.items()},
                "all_pass": self.all_pass}


def relation_holds(rep: GeneratorAssignment, rel: Relation) -> bool:
    return (rep.evaluate(rel.lhs) - rep.evaluate(rel.rhs)).is_zero()


def verify_assignment(rep: GeneratorAssignment, relations: Sequence[Relation]) -> VerificationReport:
    """Evaluate lhs - rhs exactly for every relation."""
    results = {}
    for rel in relations:
        if max(rel.lhs.max_index(), rel.rhs.max_index()) >= rep.n:
            raise RankMismatch(f"relation {rel.label} exceeds rank {rep.n}")
        results[rel.label] = relation_holds(rep, rel)
    return VerificationReport(rep.name, rep.n, rep.t, results)


def mixed_parameter_check(t, s) -> tuple[bool, bool]:
    """The tts and tss identities for M'_t / M'_s on three tensor factors.

    These are plain Kronecker identities with X(m) = m (x) 1_2 and
    Y(m) = 1_2 (x) m, independent of how letters map to factors.
    """
    t, s = _scalar(t), _scalar(s)
    ft, fs = field_of(t), field_of(s)
    if ft != fs:
        # promote the rational one into Q(t)
        t, s = QQt(t), QQt(s)
    Mt, Ms = m_prime_block(t), m_prime_block(s)
    I2 = Matrix.identity(Mt.field, 2)
    X = lambda m: kronecker(m, I2)
    Y = lambda m: kronecker(I2, m)
    tts = X(Mt) @ Y(Mt) @ X(Ms) == Y(Ms) @ X(Mt) @ Y(Mt)
    tss = X(Mt) @ Y(Ms) @ X(Ms) == Y(Ms) @ X(Ms) @ Y(Mt)
    return tts, tss


# ---------------------------------------------------------------- charge


def letters_of(index: int, n: int) -> tuple[int, ...]:
    """Letter word x_1..x_n over {1, 2} of a tensor basis index."""
    return tuple(((index >> i) & 1) + 1 for i in range(n))


def charge(index: int, n: int) -> int:
    x = letters_of(index, n)
    return x.count(1) - x.count(2)


def charge_order(n: int) -> list[int]:
    """Basis indices sorted by decreasing charge, then by letter word
    (111, 112, 121, 211, 122, ... for n = 3)."""
    return sorted(range(2 ** n), key=lambda k: (-charge(k, n), letters_of(k, n)))


def charge_blocks(n: int) -> list[list[int]]:
    """Index sets of each fixed-charge subspace, charge n first."""
    blocks: dict = {}
    for k in charge_order(n):
        blocks.setdefault(charge(k, n), []).append(k)
    return [blocks[c] for c in sorted(blocks, reverse=True)]


def permute_basis(m: Matrix, order: Sequence[int]) -> Matrix:
    return m.submatrix(order, order)


def chi_block(t) -> Matrix:
    """Image of (sigma - rho)/(1 - t) on two letters."""
    t = _scalar(t)
    if t == 1:
        from .spanclosure import ForbiddenParameter
        raise ForbiddenParameter("chi needs t != 1")
    return (m_prime_block(t) - m_prime_block(_field_for(t).one)).scale(1 / (1 - t))


def chi_diagonalizer(n: int = 2, field=QQ) -> Matrix:
    """Change of basis B with B^-1 chi_1 B = projection onto first letter 2.

    On two letters B = diag-block(1, [[1, 1], [0, 1]], 1); the conjugated
    chi_1 is diag(0, 1, 0, 1) in the order 11, 21, 12, 22.
    """
    blk = Matrix(field, [[1, 0, 0, 0], [0, 1, 1, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    return place(blk, 1, n)


def first_letter_projector(n: int = 2, field=QQ) -> Matrix:
    return kronecker(Matrix.identity(field, 2 ** (n - 1)), Matrix.diagonal(field, [0, 1]))


# ---------------------------------------------------------------- Burau / Alexander


def reduced_burau(n: int, t) -> GeneratorAssignment:
    """Action of burau_gb on zero-sum row vectors, basis v_i = e_i - e_{i+1}.

    A zero-sum row u has coordinates c_j = u_1 + ... + u_j, so row i of the
    reduced matrix is the prefix sums of v_i B.
    """
    t = _scalar(t)
    full = burau_gb(n, t)
    f = _field_for(t)
    imgs = {}
    for g, B in full.images.items():
        rows = B.tolist()
        red = []
        for i in range(n - 1):
            v = [rows[i][k] - rows[i + 1][k] for k in range(n)]
            acc, coords = f.zero, []
            for j in range(n - 1):
                acc = acc + v[j]
                coords.append(acc)
            red.append(coords)
        imgs[g] = Matrix(f, red)
    return GeneratorAssignment(n, n - 1, imgs, t, "reduced_burau")


def _normalize_unit(p: RationalFunction) -> RationalFunction:
    """Representative of p up to +-t^k: no t-power factor, positive constant."""
    num, den = list(p.num), list(p.den)
    if not num:
        return p
    # den divides a power of t when the result is a Laurent polynomial
    while num and num[0] == 0:
        num.pop(0)
    while len(den) > 1 and den[0] == 0:
        den.pop(0)
    q = RationalFunction(num, den)
    if q.num and q.num[0] < 0:
        q = -q
    return q


def alexander_polynomial(braid: Word | str, n: int | None = None) -> RationalFunction:
    """det(rho_bar(b) - I) / (1 + t + ... + t^{n-1}), normalised."""
    if isinstance(braid, str):
        braid = Word.parse(braid, n or 0)
    n = n or braid.rank
    if any(g.kind == RHO for g in braid.letters):
        raise ValueError("Alexander polynomial needs a braid word in sigma letters")
    if n < 2:
        return RationalFunction.constant(1)
    t = RationalFunction.t()
    rep = reduced_burau(n, t)
    m = rep.word(braid) - Matrix.identity(QQt, n - 1)
    denom = sum((t ** k for k in range(n)), RationalFunction())
    return _normalize_unit(m.det() / denom)


def random_rationals(rng: random.Random, k: int, avoid=(0, 1, -1)) -> list[Fraction]:
    out = []
    while len(out) < k:
        x = Fraction(rng.randint(-30, 30), rng.randint(1, 12))
        if x not in avoid and x not in out:
            out.append(x)
    return out
