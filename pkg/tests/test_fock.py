from fractions import Fraction

import pytest

from permorb.fock import (
    FockVector,
    ModeMatrix,
    basis_upto,
    heisenberg_mode,
    max_nonzero_mode,
    omega,
    partitions_of,
    state,
    vacuum,
    vertex_mode,
    virasoro_mode,
    weight_of,
)
from permorb.series import binom

F = Fraction


def test_partitions_revlex():
    assert partitions_of(4) == ((4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1))
    assert len(partitions_of(6)) == 11
    assert partitions_of(0) == ((),)


def test_basis_counts():
    # 1 + 1 + 2 + 3 + 5 + 7 + 11
    assert len(basis_upto(6)) == 30


def test_heisenberg_action():
    v = state(1)
    assert heisenberg_mode(1, v) == vacuum()
    assert heisenberg_mode(-2, vacuum()) == state(2)
    assert heisenberg_mode(2, state(1, 1)) == FockVector.zero()
    # multiplicity bookkeeping: a(1) on a(-1)^2 |0> = 2 a(-1)|0>
    assert heisenberg_mode(1, state(1, 1)) == state(1).scale(2)


@pytest.mark.parametrize("m", range(-3, 4))
@pytest.mark.parametrize("n", range(-3, 4))
def test_heisenberg_commutator(m, n):
    for p in basis_upto(6):
        v = FockVector.basis(p)
        lhs = heisenberg_mode(m, heisenberg_mode(n, v)) \
            - heisenberg_mode(n, heisenberg_mode(m, v))
        expect = v.scale(m) if m + n == 0 else FockVector.zero()
        assert lhs == expect


def test_virasoro_weight_grading():
    for p in basis_upto(5):
        v = FockVector.basis(p)
        assert virasoro_mode(0, v) == v.scale(weight_of(p))


def test_virasoro_highest_weight():
    assert virasoro_mode(1, state(1)) == FockVector.zero()
    assert virasoro_mode(2, state(1)) == FockVector.zero()


def test_virasoro_central_term_on_omega():
    # L(2) omega = (c/2)|0> with c = 1
    assert virasoro_mode(2, omega()) == vacuum().scale(F(1, 2))


@pytest.mark.parametrize("m", range(-3, 4))
@pytest.mark.parametrize("n", range(-3, 4))
def test_virasoro_relations_c1(m, n):
    for p in basis_upto(6):
        v = FockVector.basis(p)
        lhs = virasoro_mode(m, virasoro_mode(n, v)) \
            - virasoro_mode(n, virasoro_mode(m, v))
        expect = virasoro_mode(m + n, v).scale(m - n)
        if m + n == 0:
            expect = expect + v.scale(F(m ** 3 - m, 12))
        assert lhs == expect


def test_vertex_mode_vacuum_is_identity():
    for p in basis_upto(4):
        v = FockVector.basis(p)
        assert vertex_mode(vacuum(), -1, v) == v
        assert vertex_mode(vacuum(), 0, v) == FockVector.zero()
        assert vertex_mode(vacuum(), -2, v) == FockVector.zero()


def test_vertex_mode_generator_is_oscillator():
    gen = state(1)
    for p in basis_upto(4):
        v = FockVector.basis(p)
        for m in range(-4, 5):
            expect = heisenberg_mode(m, v) if m != 0 else FockVector.zero()
            assert vertex_mode(gen, m, v) == expect


def test_vertex_mode_omega_is_virasoro():
    for p in basis_upto(5):
        v = FockVector.basis(p)
        for m in range(-3, 4):
            assert vertex_mode(omega(), m + 1, v) == virasoro_mode(m, v)


def test_vertex_mode_translation_derivative():
    # (L(-1)u)_m = -m u_(m-1)
    for upart in basis_upto(3):
        u = FockVector.basis(upart)
        lu = virasoro_mode(-1, u)
        for p in basis_upto(3):
            v = FockVector.basis(p)
            for m in range(-3, 4):
                assert vertex_mode(lu, m, v) == vertex_mode(u, m - 1, v).scale(-m)


def test_vertex_mode_grading():
    for upart in basis_upto(3):
        u = FockVector.basis(upart)
        wu = weight_of(upart)
        for p in basis_upto(3):
            v = FockVector.basis(p)
            for m in range(-3, 4):
                img = vertex_mode(u, m, v)
                if img:
                    assert img.weight() == weight_of(p) + wu - m - 1


def test_commutator_formula():
    # [u_m, v_n] = sum_i C(m, i) (u_i v)_(m+n-i)
    us = [p for p in basis_upto(3)]
    for upart in us:
        u = FockVector.basis(upart)
        for vpart in us:
            v = FockVector.basis(vpart)
            for m in range(-2, 3):
                for n in range(-2, 3):
                    for wpart in basis_upto(4):
                        w = FockVector.basis(wpart)
                        lhs = vertex_mode(u, m, vertex_mode(v, n, w)) \
                            - vertex_mode(v, n, vertex_mode(u, m, w))
                        rhs = FockVector.zero()
                        for i in range(0, max_nonzero_mode(u, v) + 1):
                            uiv = vertex_mode(u, i, v)
                            if uiv:
                                rhs = rhs + vertex_mode(uiv, m + n - i, w).scale(binom(m, i))
                        assert lhs == rhs


def test_mode_matrix_roundtrip():
    mat = ModeMatrix.from_operator(lambda v: virasoro_mode(0, v), 3, label="L0")
    v = state(2, 1)
    assert mat.apply(v) == v.scale(3)
    j = mat.to_json()
    assert j["basis"][0] == "vac"
    assert all(e["row"] == e["col"] for e in j["entries"])
