import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from loophecke.linalg import Matrix
from loophecke.presentations import (
    AlgebraElement, Word, flip_indices, lh_relations, parse_element, rho, sigma,
)
from loophecke.reps import GeneratorAssignment, verify_assignment
from loophecke.rewrite import (
    COMPLETE, DegreeBudgetExceeded, NotComplete, RewriteSystem, basis_size_by_degree, complete,
    enumerate_basis, lh_system, overlap_residues, quotient_experiment, rational_reconstruction,
    regular_representation, term_order_compare, trace_form_ssdim, variant_relations_experiment,
)
from loophecke.scalars import QQ
from loophecke.spanclosure import chi_chain, close
from loophecke.symgroup import e22_element, e220_element

T2 = Fraction(2)


@pytest.fixture(scope="module")
def lh3():
    return lh_system(3, T2)


def test_deglex_order():
    a, b, c = Word.parse("s1 r1", 2), Word.parse("r1 s1", 2), Word.parse("s1", 2)
    assert term_order_compare(c, a) < 0
    assert term_order_compare(a, b) < 0
    assert term_order_compare(a, a) == 0


@pytest.mark.parametrize("t, dims", [
    (Fraction(7, 5), [1, 3, 10, 35]),
    (Fraction(-1), [1, 3, 11, 42]),
    (Fraction(1), [1, 3, 15, 114]),
    (Fraction(0), [1, 3, 10, 35]),
])
def test_lh_dims(t, dims):
    assert [enumerate_basis(lh_system(n, t))[0] for n in range(1, 5)] == dims


def test_modular_completion_matches_rational():
    p = 1_000_003
    assert enumerate_basis(lh_system(3, 2, p=p))[0] == 10
    direct = complete(lh_relations(3, T2), 3, T2, modular=False)
    assert enumerate_basis(direct)[0] == 10


def test_overlaps_resolve(lh3):
    assert lh3.status == COMPLETE
    assert not list(overlap_residues(lh3))


def _random_element(rng, n, length=5, terms=3):
    gens = [sigma(i) for i in range(1, n)] + [rho(i) for i in range(1, n)]
    x = AlgebraElement({}, n)
    for _ in range(terms):
        w = Word(tuple(rng.choice(gens) for _ in range(rng.randint(0, length))), n)
        x = x + AlgebraElement.word(w, Fraction(rng.randint(-3, 3), rng.randint(1, 3)), n)
    return x


@settings(max_examples=25, derandomize=True, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_church_rosser(seed):
    system = _SYS3
    rng = random.Random(seed)
    x = _random_element(rng, 3)
    nf = system.normal_form(x)
    assert system.reduce_randomly(x, random.Random(seed + 1)) == nf
    assert system.reduce_randomly(x, random.Random(seed + 2)) == nf
    assert system.normal_form(nf) == nf


_SYS3 = lh_system(3, T2)


@settings(max_examples=15, derandomize=True, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_normal_form_is_multiplicative(seed):
    rng = random.Random(seed)
    x, y = _random_element(rng, 3, 3, 2), _random_element(rng, 3, 3, 2)
    S = _SYS3
    assert S.normal_form(S.normal_form(x) * S.normal_form(y)) == S.normal_form(x * y)


@pytest.mark.parametrize("n, t", [(2, T2), (3, T2), (3, Fraction(-1)), (3, Fraction(1)), (4, T2)])
def test_two_route_dimension(n, t):
    system = lh_system(n, t)
    reg = regular_representation(system)
    assert verify_assignment(reg, lh_relations(n, t)).all_pass
    assert close(reg).dim == enumerate_basis(system)[0]


def test_serialisation_round_trip(lh3):
    again = RewriteSystem.from_json(lh3.to_json())
    x = parse_element("r2 s1 r2 s1 r1", 3)
    assert again.normal_form(x) == lh3.normal_form(x)
    assert again.to_json() == lh3.to_json()


def test_strict_budget_raises():
    with pytest.raises(DegreeBudgetExceeded) as err:
        lh_system(3, T2, max_degree=3, strict=True)
    with pytest.raises(NotComplete):
        enumerate_basis(err.value.system)


def test_rational_reconstruction():
    m = 1_000_003
    for q in (Fraction(3, 7), Fraction(-22, 5), Fraction(0)):
        a = q.numerator * pow(q.denominator, -1, m) % m
        assert rational_reconstruction(a, m) == q


def test_quotient_by_s1_minus_r1():
    for n in (2, 3, 4):
        system = lh_system(n, T2)
        assert quotient_experiment(system, [parse_element("s1 - r1", n)]) == 1


def test_length_two_chi_quotients():
    assert quotient_experiment(lh_system(3, T2), [chi_chain((2, 1), rank=3)]) == 7
    assert quotient_experiment(lh_system(4, T2), [chi_chain((2, 1), rank=4)]) == 13


def test_increasing_chain_collapses():
    # regression value: the increasing-index chain kills everything
    assert quotient_experiment(lh_system(4, T2), [chi_chain((1, 2, 3), rank=4)]) == 1


@pytest.mark.parametrize("n, ss", [(2, 2), (3, 6), (4, 24)])
def test_t_one_semisimple_quotient(n, ss):
    assert trace_form_ssdim(lh_system(n, Fraction(1))) == (
        enumerate_basis(lh_system(n, Fraction(1)))[0], ss)


def test_generic_ssdim():
    assert trace_form_ssdim(lh_system(3, T2))[1] == 6
    assert trace_form_ssdim(lh_system(4, Fraction(-1)))[1] == 20


@pytest.mark.parametrize("t", [T2, Fraction(-1), Fraction(0)])
def test_e22_zero_in_lh4(t):
    S = lh_system(4, t)
    assert S.normal_form(e22_element()).is_zero()
    assert S.normal_form(e220_element()).is_zero()


def test_e22_nonzero_in_lh4_at_one():
    S = lh_system(4, Fraction(1))
    assert not S.normal_form(e22_element()).is_zero()
    assert not S.normal_form(e220_element()).is_zero()


def _ppp(t):
    return parse_element(
        f"r1 r2 r1 + 1 - r2 - ({(-t - 1) / (t - 1)})(-r1 + r2 r1 - r1 r2)"
        f" - ({2 / (t - 1)})(-s1 + s2 r1 - r1 s2)", 3)


@pytest.mark.parametrize("t", [Fraction(3), Fraction(7, 5)])
def test_ppp_identity(t):
    S = lh_system(3, t)
    x = _ppp(t)
    assert S.normal_form(flip_indices(x, 3)).is_zero()
    assert not S.normal_form(x).is_zero()


def test_sigma_absorbs_symmetrizers_in_lh():
    from loophecke.symgroup import young_symmetrizer
    for n in (2, 3, 4):
        S = lh_system(n, Fraction(7, 5))
        Yp, Ym = young_symmetrizer(n, 1), young_symmetrizer(n, -1)
        for i in range(1, n):
            s = AlgebraElement.gen(sigma(i), n)
            assert S.normal_form(s * Yp - Yp).is_zero()
            assert S.normal_form(Ym * s + Ym * Fraction(7, 5)).is_zero()


# ---------------------------------------------------------------- variant relations


def test_drop_r1i_n2_matches_hand_built_rep():
    res = variant_relations_experiment(2, T2, "r1i")
    assert res["status"] == "finite" and res["dim"] == 4
    # left-regular action on (1, s, r, rs), worked out by hand from
    # r r = 1, s s = 2 - s, s r = 1 - s + r
    Ls = Matrix(QQ, [[0, 2, 1, -2], [1, -1, -1, 2], [0, 0, 1, 0], [0, 0, 0, 1]])
    Lr = Matrix(QQ, [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]])
    rep = GeneratorAssignment(2, 4, {sigma(1): Ls, rho(1): Lr}, T2, "hand")
    assert verify_assignment(rep, lh_relations(2, T2, omit_r1i=True)).all_pass
    assert close(rep).dim == 4


def test_drop_r1i_regression():
    assert [variant_relations_experiment(n, T2, "r1i")["dim"] for n in (3, 4)] == [11, 36]


def test_drop_r1ii_small_cases():
    assert variant_relations_experiment(2, Fraction(0), "r1ii") == {
        "status": "finite", "dim": 4, "levels": [1, 2, 1]}
    res = variant_relations_experiment(3, Fraction(0), "r1ii")
    assert res["status"] == "budget-exceeded"
    assert res["levels"][:8] == [1, 4, 10, 14, 15, 13, 12, 12]


def test_basis_sizes(lh3):
    assert basis_size_by_degree(lh3) == [1, 4, 5]
