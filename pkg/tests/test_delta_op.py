from fractions import Fraction

import pytest

from permorb.delta_op import (
    conjugation_holds,
    conjugation_residual,
    delta_apply,
    delta_inverse_apply,
    round_trip,
    translation_identity_residual,
)
from permorb.fock import FockVector, basis_upto, omega, state, vacuum

F = Fraction


def test_delta_on_vacuum():
    d = delta_apply(2, vacuum())
    assert d.pairs() == [(F(0), vacuum())]
    di = delta_inverse_apply(2, vacuum())
    assert di.pairs() == [(F(0), vacuum())]


@pytest.mark.parametrize("k", [2, 3])
def test_delta_on_highest_weight(k):
    u = state(1)
    d = delta_apply(k, u)
    assert d.pairs() == [(F(1, k) - 1, u.scale(F(1, k)))]
    di = delta_inverse_apply(k, u)
    assert di.pairs() == [(1 - F(1, k), u.scale(k))]


def test_delta_on_omega_k2():
    # (1/4) z^-1 omega + (1/32) z^-2 |0>
    d = delta_apply(2, omega())
    got = dict(d.pairs())
    assert got[F(-1)] == omega().scale(F(1, 4))
    assert got[F(-2)] == vacuum().scale(F(1, 32))
    assert len(got) == 2


def test_delta_on_omega_k3():
    # (1/9) z^(-4/3) omega + (1/27) z^-2 |0>
    d = delta_apply(3, omega())
    got = dict(d.pairs())
    assert got[F(-4, 3)] == omega().scale(F(1, 9))
    assert got[F(-2)] == vacuum().scale(F(1, 27))
    assert len(got) == 2


@pytest.mark.parametrize("k", [2, 3])
def test_round_trip_exact(k):
    for part in basis_upto(4):
        u = FockVector.basis(part)
        assert round_trip(k, u) == {F(0): u}
    assert round_trip(k, omega()) == {F(0): omega()}


def test_expansion_exponent_forms():
    d = delta_apply(2, state(2, 1))  # weight 3
    for i, _ in d.terms:
        assert d.exponent(i) == (F(1, 2) - 1) * 3 - F(i, 2)
    di = delta_inverse_apply(2, state(2, 1))
    for i, _ in di.terms:
        assert di.exponent(i) == (3 - i) - F(3, 2)


def test_expansion_weights():
    d = delta_apply(3, state(3))
    for i, v in d.terms:
        assert v.weight() == 3 - i


def test_json_dump():
    d = delta_apply(2, omega())
    j = d.to_json()
    assert j[0]["i"] == 0
    assert j[0]["exponent"] == "-1/1"


@pytest.mark.parametrize("k", [2, 3])
def test_translation_identity(k):
    for part in basis_upto(4):
        u = FockVector.basis(part)
        assert translation_identity_residual(k, u) == {}
        assert translation_identity_residual(k, u, inverse=True) == {}


@pytest.mark.parametrize("k", [2, 3])
def test_conjugation_on_vacuum(k):
    res, box = conjugation_residual(k, vacuum(), state(1), 3)
    assert res.is_zero_on(box)


@pytest.mark.parametrize("k", [2, 3])
def test_conjugation_generator(k):
    assert conjugation_holds(k, state(1), 3, 3)


@pytest.mark.parametrize("k", [2, 3])
def test_conjugation_omega(k):
    assert conjugation_holds(k, omega(), 3, 2)
