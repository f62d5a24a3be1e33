"""The matrix algebra generated by a representation, and its structure.

Generator images are block diagonal (for fe_rep the blocks are the charge
sectors), so every element of the generated algebra is stored as its list
of diagonal blocks and flattened to a compressed vector of length
sum(block_size^2).  Spans are computed with flint over Q or GF(p).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from .linalg import Matrix, flint_matrix, flint_rref_pivots, from_flint_scalar, to_flint_scalar
from .presentations import AlgebraElement, Generator, Word, rho, sigma
from .reps import GeneratorAssignment, charge_order, fe_rep
from .scalars import DEFAULT_PRIMES, GF, PrimeField, RationalField


class ForbiddenParameter(ValueError):
    pass


class CharacteristicNotZero(ValueError):
    pass


class PrimeDisagreement(RuntimeError):
    pass


CHUNK = 1024


# ---------------------------------------------------------------- block storage


def detect_blocks(rep: GeneratorAssignment, order: Sequence[int] | None = None) -> list[list[int]]:
    """Connected components of the generators' combined nonzero pattern."""
    dim = rep.dim
    parent = list(range(dim))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for m in rep.images.values():
        for i, row in enumerate(m.tolist()):
            for j, x in enumerate(row):
                if x and i != j:
                    a, b = find(i), find(j)
                    if a != b:
                        parent[a] = b
    order = list(range(dim)) if order is None else list(order)
    pos = {k: i for i, k in enumerate(order)}
    comps: dict = {}
    for k in order:
        comps.setdefault(find(k), []).append(k)
    return sorted(comps.values(), key=lambda c: pos[c[0]])


class BlockSpace:
    """Arithmetic on block-diagonal matrices with fixed diagonal blocks."""

    def __init__(self, fld, blocks: list[list[int]]):
        if not isinstance(fld, (RationalField, PrimeField)):
            raise TypeError("closure runs over Q or GF(p); specialise t first")
        self.field = fld
        self.blocks = blocks
        self.sizes = [len(b) for b in blocks]
        self.ambient = sum(s * s for s in self.sizes)
        self.dim = sum(self.sizes)

    def _mat(self, rows, cols, flat):
        return flint_matrix(self.field, rows, cols, flat)

    def from_matrix(self, m: Matrix) -> list:
        full = m.tolist()
        out = []
        seen = set()
        for b in self.blocks:
            flat = [to_flint_scalar(self.field, full[i][j]) for i in b for j in b]
            out.append(self._mat(len(b), len(b), flat))
            seen.update(b)
        # off-block entries must vanish
        where = {k: bi for bi, b in enumerate(self.blocks) for k in b}
        for i, row in enumerate(full):
            for j, x in enumerate(row):
                if x and where[i] != where[j]:
                    raise ValueError("matrix is not block diagonal for this decomposition")
        return out

    def to_matrix(self, x: list) -> Matrix:
        full = [[0] * self.dim for _ in range(self.dim)]
        for b, m in zip(self.blocks, x):
            for a, i in enumerate(b):
                for c, j in enumerate(b):
                    full[i][j] = from_flint_scalar(self.field, m[a, c])
        return Matrix(self.field, full)

    def identity(self) -> list:
        return [self._mat(s, s, [1 if i == j else 0 for i in range(s) for j in range(s)])
                for s in self.sizes]

    def zero(self) -> list:
        return [self._mat(s, s, []) for s in self.sizes]

    @staticmethod
    def mul(x: list, y: list) -> list:
        return [a * b for a, b in zip(x, y)]

    @staticmethod
    def add(x: list, y: list) -> list:
        return [a + b for a, b in zip(x, y)]

    def scale(self, x: list, c) -> list:
        c = to_flint_scalar(self.field, c)
        return [a * c for a in x]

    @staticmethod
    def vec(x: list) -> list:
        out = []
        for m in x:
            if m.nrows():
                out.extend(m.entries())
        return out

    def unvec(self, v: Sequence) -> list:
        out, k = [], 0
        for s in self.sizes:
            out.append(self._mat(s, s, list(v[k:k + s * s])))
            k += s * s
        return out

    def transpose_vec(self, x: list) -> list:
        return self.vec([m.transpose() for m in x])

    def is_zero(self, x: list) -> bool:
        return all(m == self._mat(m.nrows(), m.ncols(), []) for m in x)

    def combo(self, basis: list, coeffs: Sequence) -> list:
        acc = self.zero()
        for b, c in zip(basis, coeffs):
            if c:
                acc = self.add(acc, self.scale(b, c))
        return acc

    def rank(self, elems: Sequence[list]) -> int:
        if not elems:
            return 0
        flat = [x for e in elems for x in self.vec(e)]
        return self._mat(len(elems), self.ambient, flat).rank()


def _new_independent(space: BlockSpace, base_rows: list, cands: list) -> list[int]:
    """Indices of candidates independent of base_rows (and of earlier
    candidates), by greedy column pivots."""
    if not cands:
        return []
    cols = base_rows + cands
    m = space._mat(len(cols), space.ambient, [x for v in cols for x in v]).transpose()
    _, pivots = flint_rref_pivots(m)
    nb = len(base_rows)
    return [p - nb for p in pivots if p >= nb]


def span_closure(space: BlockSpace, seeds: list, gens: list[tuple[object, list]],
                 seed_words: list | None = None, chunk: int = CHUNK):
    """Smallest subspace containing ``seeds`` and closed under right
    multiplication by ``gens``.  Returns (basis elements, witness labels).

    Insertion order is deterministic: frontier element index, then generator
    order.
    """
    basis, vecs, words = [], [], []
    seed_words = seed_words or [("seed", i) for i in range(len(seeds))]
    keep = _new_independent(space, [], [space.vec(s) for s in seeds])
    for i in keep:
        basis.append(seeds[i])
        vecs.append(space.vec(seeds[i]))
        words.append(seed_words[i])
    frontier = list(range(len(basis)))
    while frontier:
        new_frontier = []
        pending = [(j, g) for j in frontier for g in range(len(gens))]
        for start in range(0, len(pending), chunk):
            part = pending[start:start + chunk]
            prods = [space.mul(basis[j], gens[g][1]) for j, g in part]
            cvecs = [space.vec(p) for p in prods]
            for k in _new_independent(space, vecs, cvecs):
                j, g = part[k]
                basis.append(prods[k])
                vecs.append(cvecs[k])
                words.append((words[j], gens[g][0]))
                new_frontier.append(len(basis) - 1)
        frontier = new_frontier
    return basis, words


def _flatten_word(w) -> Word:
    letters = []
    while isinstance(w, tuple) and len(w) == 2 and isinstance(w[1], Generator):
        letters.append(w[1])
        w = w[0]
    return Word(tuple(reversed(letters)))


# ---------------------------------------------------------------- closed algebra


@dataclass
class ClosedAlgebra:
    rep: GeneratorAssignment
    space: BlockSpace
    elements: list  # block-diagonal basis elements
    word_witnesses: list  # one Word per basis element
    _vec_matrix: object = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return len(self.elements)

    @property
    def field(self):
        return self.space.field

    @property
    def n(self) -> int:
        return self.rep.n

    def gens(self) -> list[tuple[Generator, list]]:
        return [(g, self.space.from_matrix(self.rep.images[g])) for g in self.rep.generators()]

    def vectors(self) -> list[list]:
        return [self.space.vec(e) for e in self.elements]

    @property
    def basis(self):
        """The span as a linalg.SpanBasis over compressed coordinates."""
        from .linalg import SpanBasis
        rows = [[from_flint_scalar(self.field, x) for x in v] for v in self.vectors()]
        return SpanBasis.from_vectors(self.field, self.space.ambient, rows)

    def element(self, x) -> list:
        """Block form of an AlgebraElement / Word / Matrix."""
        if isinstance(x, Matrix):
            return self.space.from_matrix(x)
        return self.space.from_matrix(self.rep.evaluate(x))

    def contains(self, x: list) -> bool:
        return not _new_independent(self.space, self.vectors(), [self.space.vec(x)])

    def span_dim(self, elems: Sequence[list]) -> int:
        return self.space.rank(list(elems))

    def to_matrix(self, i: int) -> Matrix:
        return self.space.to_matrix(self.elements[i])


def reduce_rep(rep: GeneratorAssignment, p: int) -> GeneratorAssignment:
    """Reduce a rational representation modulo p."""
    F = GF(p)
    imgs = {g: m.map_entries(F, F) for g, m in rep.images.items()}
    t = F(rep.t) if rep.t is not None else None
    return GeneratorAssignment(rep.n, rep.dim, imgs, t, rep.name)


def close(rep: GeneratorAssignment, order: Sequence[int] | None = None,
          chunk: int = CHUNK) -> ClosedAlgebra:
    """Linear closure of the identity under right multiplication by every
    generator image."""
    if order is None and rep.name in ("fe", "naive_fm") and rep.dim == 2 ** rep.n:
        order = charge_order(rep.n)
    space = BlockSpace(rep.field, detect_blocks(rep, order))
    gens = [(g, space.from_matrix(rep.images[g])) for g in rep.generators()]
    elems, raw = span_closure(space, [space.identity()], gens, [()], chunk)
    return ClosedAlgebra(rep, space, elems, [_flatten_word(w) for w in raw])


def sp_dimension(n: int, t, primes: Sequence[int] = DEFAULT_PRIMES) -> int:
    """dim SP_n by closure over GF(p) at two primes; they must agree."""
    rep = fe_rep(n, Fraction(t))
    dims = [close(reduce_rep(rep, p)).dim for p in primes]
    if len(set(dims)) != 1:
        raise PrimeDisagreement(f"closure dimensions differ across primes: {dims}")
    return dims[0]


def fixpoint_holds(alg: ClosedAlgebra) -> bool:
    """One extra full pass (left and right by every generator) adds nothing."""
    vecs = alg.vectors()
    sp = alg.space
    cands = []
    for _, g in alg.gens():
        for e in alg.elements:
            cands.append(sp.vec(sp.mul(e, g)))
            cands.append(sp.vec(sp.mul(g, e)))
    for start in range(0, len(cands), CHUNK):
        if _new_independent(sp, vecs, cands[start:start + CHUNK]):
            return False
    return True


# ---------------------------------------------------------------- chi calculus


def _t_is_one(t) -> bool:
    try:
        return t == 1
    except TypeError:
        return False


def chi_element(i: int, t, rank: int = 0) -> AlgebraElement:
    """(sigma_i - rho_i) / (1 - t)."""
    if _t_is_one(t):
        raise ForbiddenParameter("chi_i needs t != 1")
    rank = rank or i + 1
    x = AlgebraElement.gen(sigma(i), rank) - AlgebraElement.gen(rho(i), rank)
    return x * (1 / (1 - (Fraction(t) if isinstance(t, int) else t)))


def chi_chain(X: Sequence[int], t=None, rank: int = 0) -> AlgebraElement:
    """(sigma_{x_1} - rho_{x_1}) ... (sigma_{x_k} - rho_{x_k}), unnormalised."""
    if t is not None and _t_is_one(t):
        raise ForbiddenParameter("chi chains are only used for t != 1")
    rank = rank or max(X, default=0) + 1
    out = AlgebraElement.one(rank)
    for x in X:
        out = out * (AlgebraElement.gen(sigma(x), rank) - AlgebraElement.gen(rho(x), rank))
    return out


def chi_chain_minus(m: int, rank: int = 0) -> AlgebraElement:
    """(sigma_m - rho_m) ... (sigma_1 - rho_1), the non-increasing chain."""
    return chi_chain(list(range(m, 0, -1)), rank=rank)


def is_non_increasing(X: Sequence[int]) -> bool:
    return all(a >= b for a, b in zip(X, X[1:]))


def localisation_checks(alg: ClosedAlgebra, sub_dim: int | None = None) -> dict:
    """dim(chi_1 A chi_1) against dim SP_{n-1}, and dim(A chi_1 A) = dim A - 1."""
    t = alg.rep.t
    if _t_is_one(t):
        raise ForbiddenParameter("localisation needs t != 1")
    n = alg.n
    sp = alg.space
    chi = alg.element(chi_element(1, t, n))
    corner = alg.span_dim([sp.mul(sp.mul(chi, a), chi) for a in alg.elements])
    left = [sp.mul(a, chi) for a in alg.elements]
    ideal, _ = span_closure(sp, left, alg.gens())
    if sub_dim is None:
        sub_dim = close(fe_rep(n - 1, t)).dim if n > 2 else 1
    return {
        "chi_idempotent": sp.is_zero([a - b for a, b in zip(sp.mul(chi, chi), chi)]),
        "corner_dim": corner,
        "expected_corner_dim": sub_dim,
        "ideal_dim": len(ideal),
        "expected_ideal_dim": alg.dim - 1,
        "corner_ok": corner == sub_dim,
        "ideal_ok": len(ideal) == alg.dim - 1,
    }


# ---------------------------------------------------------------- expectations


def pascal_expectations(n: int) -> dict:
    """Closed forms for SP_n / LH_n comparison."""
    mone = [[1 if (i == j or i == j + 1) else 0 for j in range(n)] for i in range(n)]
    irreps = [comb(n - 1, i) for i in range(n)]
    return {
        "dim": comb(2 * n - 1, n - 1),
        "ssdim": comb(2 * n - 2, n - 1),
        "block_dims": [comb(n, k) for k in range(n + 1)],
        "cartan": mone,
        "irrep_dims": irreps,
        "lh_dim_t_minus_1": (4 ** (n - 1) + comb(2 * n - 2, n - 1)) // 2,
        "sp_dim_t_1": comb(2 * n - 2, n - 1),
        "block_matrix": [[irreps[i] * mone[i][j] * irreps[j] for j in range(n)] for i in range(n)],
    }


# ---------------------------------------------------------------- structure


@dataclass
class StructureReport:
    n: int
    t: object
    field_kind: str
    dim: int
    radical_dim: int
    ss_dim: int
    block_dims: list
    block_algebra_dims: list
    cartan: list
    irrep_dims: list
    block_matrix: list
    checks: dict

    def to_json(self) -> dict:
        return {
            "n": self.n, "t": str(self.t), "field": self.field_kind,
            "dim": self.dim, "radical_dim": self.radical_dim, "ss_dim": self.ss_dim,
            "block_dims": self.block_dims, "block_algebra_dims": self.block_algebra_dims,
            "cartan": self.cartan, "irrep_dims": self.irrep_dims,
            "block_matrix": self.block_matrix,
            "checks": {k: ("pass" if v else "fail") for k, v in self.checks.items()},
        }


def radical_elements(alg: ClosedAlgebra) -> list:
    """Basis of the trace-form radical as block elements (char 0 only)."""
    if alg.field.characteristic != 0:
        raise CharacteristicNotZero("the trace-form radical needs characteristic 0")
    sp = alg.space
    V = sp._mat(alg.dim, sp.ambient, [x for e in alg.elements for x in sp.vec(e)])
    W = sp._mat(alg.dim, sp.ambient, [x for e in alg.elements for x in sp.transpose_vec(e)])
    gram = V * W.transpose()
    null = Matrix.from_flint(alg.field, gram).nullspace()
    return [sp.combo(alg.elements, v) for v in null]


def corner_dim(alg: ClosedAlgebra, left: list, right: list, elems: list | None = None) -> int:
    sp = alg.space
    elems = alg.elements if elems is None else elems
    return alg.span_dim([sp.mul(sp.mul(left, a), right) for a in elems])


def structure(alg: ClosedAlgebra) -> StructureReport:
    from .symgroup import hook_idempotent, hooks

    if alg.field.characteristic != 0:
        raise CharacteristicNotZero("structure reports need Q coefficients")
    n, sp = alg.n, alg.space
    rad = radical_elements(alg)
    ss_dim = alg.dim - len(rad)
    idem = [alg.element(hook_idempotent(h, n)) for h in hooks(n)]
    # cartan[i][j] = dim Hom(P_j, P_i) = dim e_j A e_i
    cartan = [[corner_dim(alg, idem[j], idem[i]) for j in range(n)] for i in range(n)]
    irreps = []
    for e in idem:
        Ae = alg.span_dim([sp.mul(a, e) for a in alg.elements])
        Je = alg.span_dim([sp.mul(r, e) for r in rad])
        irreps.append(Ae - Je)
    block_matrix = [[irreps[i] * cartan[i][j] * irreps[j] for j in range(n)] for i in range(n)]
    block_alg = []
    for bi in range(len(sp.blocks)):
        vs = [alg.elements[k][bi] for k in range(alg.dim)]
        flat = [x for m in vs for x in m.entries()] if sp.sizes[bi] else []
        block_alg.append(sp._mat(len(vs), sp.sizes[bi] ** 2, flat).rank() if flat else 0)
    exp = pascal_expectations(n)
    rad_sq_zero = all(sp.is_zero(sp.mul(a, b)) for a in rad for b in rad)
    checks = {
        "dim_matches_pascal": alg.dim == exp["dim"],
        "ssdim_matches_pascal": ss_dim == exp["ssdim"],
        "block_dims_binomial": sp.sizes == exp["block_dims"],
        "cartan_is_Mone": cartan == exp["cartan"],
        "irrep_dims_binomial": irreps == exp["irrep_dims"],
        "radical_square_zero": rad_sq_zero,
        "ssdim_is_diagonal_sum": ss_dim == sum(block_matrix[i][i] for i in range(n)),
        "dim_is_block_matrix_sum": alg.dim == sum(map(sum, block_matrix)),
    }
    return StructureReport(n, alg.rep.t, alg.field.kind, alg.dim, len(rad), ss_dim,
                           list(sp.sizes), block_alg, cartan, irreps, block_matrix, checks)
