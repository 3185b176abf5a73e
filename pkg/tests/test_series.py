from fractions import Fraction

import pytest

from permorb.series import (
    FormalSeries,
    WindowError,
    binom,
    binomial_expand,
    delta_sum,
    multiply,
    one_plus_pow,
    residue,
    subst_root_of_unity,
)

F = Fraction


def test_binomial_expand_linear():
    s = binomial_expand(1, 1, 3)
    assert s.coeff((F(1), F(0))) == 1
    assert s.coeff((F(0), F(1))) == 1
    assert s.coeff((F(-1), F(2))) == 0
    assert s.coeff((F(-2), F(3))) == 0


def test_binomial_expand_sqrt_inverse():
    s = binomial_expand(F(-1, 2), 1, 2, ram_main=2)
    assert s.coeff((F(-1, 2), F(0))) == 1
    assert s.coeff((F(-3, 2), F(1))) == F(-1, 2)
    assert s.coeff((F(-5, 2), F(2))) == F(3, 8)


def _compositional_inverse_of_f(k, x_order):
    """Order-by-order inverse of f(x) = (z^(1/k)/k)(1+x)^k - z^(1/k)/k.

    Independent oracle: builds g with f(g(x)) = x by solving for one
    x-degree at a time, using only series multiplication.
    """
    vars_, ram = ("x", "z"), (1, k)
    f_terms = {(F(m), F(1, k)): binom(k, m) / k for m in range(1, k + 1)}
    # g starts with z^(-1/k) x; refine degree by degree
    g = FormalSeries.exact(vars_, ram, {(F(1), F(-1, k)): F(1)})
    x_mono = FormalSeries.monomial(vars_, ram, (F(1), F(0)))
    for deg in range(2, x_order + 1):
        fg = FormalSeries.zero(vars_, ram)
        for (m, ze), c in f_terms.items():
            p = FormalSeries.one(vars_, ram)
            for _ in range(int(m)):
                p = p * g
            fg = fg + p.shift((F(0), ze)).scale(c)
        err = fg - x_mono
        # error coefficient at x^deg, times z^(-1/k), corrects g
        corr = {}
        for e, c in err.terms.items():
            if e[0] == deg:
                corr[(F(deg), e[1] - F(1, k))] = -c
        g = g + FormalSeries.exact(vars_, ram, corr)
    return g


@pytest.mark.parametrize("k", [2, 3])
def test_binomial_matches_compositional_inverse(k):
    # (1 + k z^(-1/k) x)^(1/k) - 1 is the compositional inverse of f
    g = _compositional_inverse_of_f(k, 3)
    for m in range(1, 4):
        expect = binom(F(1, k), m) * k ** m
        assert g.coeff((F(m), F(-m, k))) == expect
    if k == 2:
        # frozen closed-form values for the first three terms
        assert g.coeff((F(1), F(-1, 2))) == 1
        assert g.coeff((F(2), F(-1))) == F(-1, 2)
        assert g.coeff((F(3), F(-3, 2))) == F(1, 2)


def test_subst_root_of_unity_half_integer():
    s = FormalSeries.exact(("z",), (2,), {(F(1, 2),): F(1), (F(1),): F(3)})
    t = subst_root_of_unity(s, 1)
    assert t.coeff((F(1, 2),)) == -1
    assert t.coeff((F(1),)) == 3


def test_subst_root_of_unity_identity():
    s = FormalSeries.exact(("z",), (4,), {(F(m, 4),): F(m + 1) for m in range(-3, 4)})
    assert subst_root_of_unity(s, 0).terms == s.terms


def test_subst_root_of_unity_order_three_cycles():
    terms = {(F(m, 3),): F(2 * m + 5) for m in range(-4, 6)}
    s = FormalSeries.exact(("z",), (3,), terms)
    t = s
    for _ in range(3):
        t = subst_root_of_unity(t, 1)
    assert t.terms == s.terms


def test_residue_basic():
    s = FormalSeries.exact(("z",), (2,), {(F(-1),): F(1)})
    assert residue(s) == 1
    s2 = FormalSeries.exact(("z",), (2,), {(F(-1, 2),): F(7)})
    assert residue(s2) == 0


def test_residue_of_binomial():
    s = binomial_expand(-1, 1, 5)
    at_z0_zero = s.coeff_of("z0", 0)
    assert at_z0_zero.residue("z") == 1


def test_residue_window_violation():
    s = binomial_expand(F(-1, 2), 1, 3)  # z0 known only up to 3
    with pytest.raises(WindowError):
        s.coeff((F(-1, 2) - 9, F(9)))


def test_multiply_identity_and_roots():
    one = FormalSeries.one(("z",), (2,))
    s = FormalSeries.exact(("z",), (2,), {(F(1, 2),): F(2), (F(-1),): F(5)})
    assert multiply(one, s).terms == s.terms
    root = FormalSeries.monomial(("z",), (2,), (F(1, 2),))
    assert multiply(root, root).terms == {(F(1),): 1}


def test_multiply_truncated_sqrt_squares():
    n = 6
    a = one_plus_pow(F(1, 2), n)
    prod = a * a
    lin = one_plus_pow(1, n)
    assert prod.equals_on(lin, {"z": (0, n)})


def test_multiply_associative_commutative():
    a = one_plus_pow(F(1, 2), 5)
    b = one_plus_pow(F(-1, 3), 5)
    c = FormalSeries.exact(("z",), (1,), {(F(0),): F(1), (F(2),): F(-3)})
    box = {"z": (0, 3)}
    assert (a * b).equals_on(b * a, box)
    assert ((a * b) * c).equals_on(a * (b * c), box)


def test_window_narrowing_on_product():
    a = one_plus_pow(F(1, 2), 4)
    prod = a * a
    with pytest.raises(WindowError):
        prod.coeff((F(5),))


def test_pow_int_inverse():
    # (1 + z)^(-1) through the generic inverse
    s = FormalSeries.exact(("z",), (1,), {(F(0),): F(1), (F(1),): F(1)})
    inv = s.pow_int(-1, "z", 6)
    for m in range(7):
        assert inv.coeff((F(m),)) == (-1) ** m
    with pytest.raises(WindowError):
        inv.coeff((F(7),))


DELTA_VARS = ("z1", "z0", "z2")
BOX4 = {"z1": (-4, 4), "z0": (-4, 4), "z2": (-4, 4)}


def _ds(k, main, sign, sec, den, shift, step, alternate=False):
    ram = tuple(k if v != "z0" else 1 for v in DELTA_VARS)
    return delta_sum(DELTA_VARS, ram, main, sign, sec, den, shift, step,
                     BOX4, alternate=alternate)


@pytest.mark.parametrize("k", [2, 3])
def test_delta_kernel_transport(k):
    # z2^-1 ((z1-z0)/z2)^(-p/k) d((z1-z0)/z2) = z1^-1 ((z2+z0)/z1)^(p/k) d((z2+z0)/z1)
    for p in range(k):
        lhs = _ds(k, "z1", -1, "z0", "z2", F(-p, k), 1)
        rhs = _ds(k, "z2", 1, "z0", "z1", F(p, k), 1)
        assert lhs.equals_on(rhs, BOX4)


@pytest.mark.parametrize("k", [2, 3])
def test_delta_component_sum(k):
    # summing the k fractional components reproduces the k-th root kernel
    total = None
    for p in range(k):
        term = _ds(k, "z1", -1, "z0", "z2", F(p, k), 1)
        total = term if total is None else total + term
    rhs = _ds(k, "z1", -1, "z0", "z2", 0, F(1, k))
    assert total.equals_on(rhs, BOX4)


@pytest.mark.parametrize("k", [2, 3])
def test_delta_root_kernel_flip(k):
    lhs = _ds(k, "z1", -1, "z0", "z2", 0, F(1, k))
    rhs = _ds(k, "z2", 1, "z0", "z1", 0, F(1, k))
    assert lhs.equals_on(rhs, BOX4)


def test_delta_three_term_relation():
    a = _ds(1, "z1", -1, "z2", "z0", 0, 1)
    b = _ds(1, "z2", -1, "z1", "z0", 0, 1, alternate=True)
    c = _ds(1, "z1", -1, "z0", "z2", 0, 1)
    assert (a - b).equals_on(c, BOX4)


@pytest.mark.parametrize("k", [2, 3])
@pytest.mark.parametrize("n", range(-4, 5))
def test_root_substitution_lemma(k, n):
    # (z1^(1/k) - x)^n at x = z1^(1/k) - (z1-z0)^(1/k) equals (z1-z0)^(n/k)
    order = 6
    root_order = 6 - n + 4 * k + 2
    outer = binomial_expand(n, -1, order, var_main="z1", var_sec="x",
                            ram_main=k, main_scale=F(1, k))
    root = binomial_expand(1, -1, root_order, var_main="z1", var_sec="z0",
                           ram_main=k, main_scale=F(1, k))
    x_repl = FormalSeries.monomial(("z1", "z0"), (k, 1), (F(1, k), F(0))) - root
    subbed = outer.subst_var_series("x", x_repl, order)
    expect = binomial_expand(n, -1, 4, var_main="z1", var_sec="z0",
                             ram_main=k, main_scale=F(1, k))
    box = {"z0": (0, 4), "z1": (F(n - 4, k), F(n, k))}
    assert subbed.equals_on(expect, box)
