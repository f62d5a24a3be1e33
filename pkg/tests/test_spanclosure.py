from fractions import Fraction
from math import comb

import pytest

from loophecke.reps import fe_rep
from loophecke.spanclosure import (
    CharacteristicNotZero, ForbiddenParameter, chi_chain, chi_element, close, fixpoint_holds,
    is_non_increasing, localisation_checks, pascal_expectations, radical_elements, reduce_rep,
    sp_dimension, structure,
)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_sp_dims_and_fixpoint(n):
    alg = close(fe_rep(n, Fraction(2)))
    assert alg.dim == comb(2 * n - 1, n - 1)
    assert fixpoint_holds(alg)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_structure_checks(n):
    rep = structure(close(fe_rep(n, Fraction(2))))
    assert all(rep.checks.values()), rep.checks
    assert rep.cartan == pascal_expectations(n)["cartan"]
    assert rep.ss_dim == comb(2 * n - 2, n - 1)


def test_block_algebra_dims():
    assert structure(close(fe_rep(3, Fraction(2)))).block_algebra_dims == [1, 7, 7, 1]


@pytest.mark.parametrize("t", [Fraction(0), Fraction(-1), Fraction(7, 5)])
def test_parameter_independence(t):
    assert [close(fe_rep(n, t)).dim for n in range(1, 5)] == [1, 3, 10, 35]


def test_t_equals_one_is_smaller():
    assert [close(fe_rep(n, Fraction(1))).dim for n in range(1, 5)] == [1, 2, 6, 20]


def test_modular_and_rational_agree():
    assert sp_dimension(4, Fraction(2)) == close(fe_rep(4, Fraction(2))).dim
    assert close(reduce_rep(fe_rep(3, Fraction(7, 5)), 101)).dim == 10


def test_radical_needs_characteristic_zero():
    alg = close(reduce_rep(fe_rep(2, Fraction(2)), 101))
    with pytest.raises(CharacteristicNotZero):
        radical_elements(alg)


def test_chi_forbidden_at_one():
    with pytest.raises(ForbiddenParameter):
        chi_element(1, Fraction(1), 2)


@pytest.mark.parametrize("X, ok", [((2, 1), True), ((2, 2, 1), True), ((1, 1), True), ((2,), True),
                                   ((1, 2), False), ((1, 2, 2), False)])
def test_chi_chain_quasi_idempotency(X, ok):
    t = Fraction(2)
    rep = fe_rep(3, t)
    x = rep.evaluate(chi_chain(X, rank=3))
    assert is_non_increasing(X) == ok
    assert (x @ x == x.scale((1 - t) ** len(X))) == ok


@pytest.mark.parametrize("n, corner, ideal", [(3, 3, 9), (4, 10, 34)])
def test_localisation(n, corner, ideal):
    res = localisation_checks(close(fe_rep(n, Fraction(2))))
    assert res["chi_idempotent"]
    assert (res["corner_dim"], res["ideal_dim"]) == (corner, ideal)
    assert res["corner_ok"] and res["ideal_ok"]


def test_pascal_expectations_small():
    e = pascal_expectations(3)
    assert e["dim"] == 10 and e["ssdim"] == 6 and e["irrep_dims"] == [1, 2, 1]
    assert sum(map(sum, e["block_matrix"])) == e["dim"]
    assert [pascal_expectations(n)["lh_dim_t_minus_1"] for n in range(1, 8)] == [
        1, 3, 11, 42, 163, 638, 2510]
