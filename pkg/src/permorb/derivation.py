"""Derivation calculus on Q[x, 1/x] with exact fractional z-weights.

Everything here happens in two formal variables: x (integer exponents)
and z (exponents with denominator k).  The central objects are

* the coefficients a_1, a_2, ... making exp(-sum a_j x^(j+1) d/dx) send
  x to (1/k)(1+x)^k - 1/k,
* the polynomial f and its compositional inverse,
* the conjugation series Theta_j extracted from f(f^{-1}(x) + z^(-1/k)y),
* the substitution operator sending x to z((1+z^(-1/k)x)^k - 1) and its
  inverse, together with their derivative identities.

Exponentials of derivations are evaluated degreewise: applying
x^(j+1) d/dx raises x-degree by j >= 1, so at any truncation order the
series terminates on its own.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .series import FormalSeries, NEG_INF, POS_INF, WindowError, binom, binomial_expand

F = Fraction

XZ = ("x", "z")


def xz_vars(k: int):
    return XZ, (1, k)


def _xz(k: int, terms) -> FormalSeries:
    return FormalSeries.exact(XZ, (1, k), terms)


def _xz_mono(k: int, xdeg, zexp, coeff=F(1)) -> FormalSeries:
    return FormalSeries.monomial(XZ, (1, k), (F(xdeg), F(zexp)), coeff)


@dataclass(frozen=True)
class DerivCoeffs:
    """The solved derivation coefficients a_1..a_J for a given k."""
    k: int
    coeffs: tuple

    def __getitem__(self, j: int) -> Fraction:
        if j < 1:
            raise IndexError("coefficients are indexed from 1")
        return self.coeffs[j - 1] if j <= len(self.coeffs) else F(0)

    def to_json(self):
        return [{"j": j + 1, "value": f"{c.numerator}/{c.denominator}"
                 if c.denominator != 1 else str(c.numerator)}
                for j, c in enumerate(self.coeffs)]


def exp_derivation_apply(alpha, n: int, order: int, k: int = 1) -> FormalSeries:
    """exp(-sum_j alpha_j x^(j+1) d/dx) . x^n truncated at x-degree n+order.

    ``alpha`` is a sequence whose j-th entry (1-based) is either a scalar
    or a pair (scalar, z_exponent) standing for the monomial weight
    alpha_j z^e; the latter form realizes the z-weighted operators.
    """
    weights = []
    for j, a in enumerate(alpha, start=1):
        if isinstance(a, tuple):
            c, e = a
        else:
            c, e = a, F(0)
        if c:
            weights.append((j, F(c), F(e)))
    xmax = n + order
    out = _xz_mono(k, n, 0)
    cur = out
    r = 0
    while cur.terms:
        r += 1
        d = FormalSeries.zero(XZ, (1, k))
        dcur = cur.deriv("x")
        for j, c, e in weights:
            d = d + dcur.shift((F(j + 1), e)).scale(-c)
        d = d.restrict_known("x", NEG_INF, F(xmax))
        cur = d.scale(F(1, r))
        out = out + cur
        if r > max(xmax - n, 0) + 1 and cur.terms:
            raise WindowError("derivation exponential failed to terminate")
    return out.restrict_known("x", NEG_INF, F(xmax))


def _target_poly(k: int, xmax: int) -> FormalSeries:
    """(1/k)(1+x)^k - 1/k as an exact polynomial."""
    return _xz(k, {(F(m), F(0)): binom(k, m) / k for m in range(1, k + 1)
                   if m <= xmax})


def solve_a_coeffs(k: int, depth: int) -> DerivCoeffs:
    """Solve a_1..a_depth order by order from the defining expansion.

    At stage j the coefficient of x^(j+1) depends on a_j linearly with
    unit coefficient, so forward substitution is exact.
    """
    if k < 1 or depth < 1:
        raise ValueError("k and depth must be positive")
    target = _target_poly(k, depth + 1)
    coeffs = []
    for j in range(1, depth + 1):
        cur = exp_derivation_apply(coeffs, 1, j, k=k)
        got = cur.coeff((F(j + 1), F(0)))
        want = target.coeff((F(j + 1), F(0))) if j + 1 <= k else F(0)
        coeffs.append(got - want)
    return DerivCoeffs(k, tuple(coeffs))


def a_closed_form(k: int, j: int) -> Fraction:
    """The two printed closed forms; defined only for j in {1, 2}."""
    if j == 1:
        return F(1 - k, 2)
    if j == 2:
        return F(k * k - 1, 12)
    raise ValueError("closed forms available for j = 1, 2 only")


def f_series(k: int) -> FormalSeries:
    """f(x) = (z^(1/k)/k)(1+x)^k - z^(1/k)/k; exact polynomial."""
    return _xz(k, {(F(m), F(1, k)): binom(k, m) / k for m in range(1, k + 1)})


def f_inverse_series(k: int, order: int) -> FormalSeries:
    """(1 + k z^(-1/k) x)^(1/k) - 1 through x-degree `order`."""
    terms = {(F(m), F(-m, k)): binom(F(1, k), m) * k ** m
             for m in range(1, order + 1)}
    supp = ((F(1), POS_INF), (NEG_INF, F(-1, k)))
    # dropped terms all carry x-degree above `order`; the x window fences
    # them off, so z remains fully known
    known = ((NEG_INF, F(order)), (NEG_INF, POS_INF))
    return FormalSeries(XZ, (1, k), terms, supp, known)


def compose_x(outer: FormalSeries, inner: FormalSeries, order: int) -> FormalSeries:
    """outer(x -> inner), for inner with positive x-valuation."""
    return outer.subst_var_series("x", inner, order)


# -- Theta extraction ---------------------------------------------------

def _ypoly_mul(P, Q, ymax, k):
    out = {}
    for da, ca in P.items():
        for db, cb in Q.items():
            d = da + db
            if d > ymax:
                continue
            prod = ca * cb
            out[d] = out[d] + prod if d in out else prod
    return out


def _ypoly_exp_derivation(thetas, ymax, k):
    """exp(sum_j thetas[j-1] y^(j+1) d/dy) . y truncated at y-degree ymax.

    Coefficients are series in (x, z); the y-degree raises by at least
    one per application, so the loop terminates.
    """
    one = FormalSeries.one(XZ, (1, k))
    out = {1: one}
    cur = {1: one}
    r = 0
    while cur:
        r += 1
        nxt = {}
        for deg, c in cur.items():
            for j, th in enumerate(thetas, start=1):
                nd = deg + j
                if nd > ymax:
                    continue
                add = th.scale(F(deg)) * c
                nxt[nd] = nxt[nd] + add if nd in nxt else add
        cur = {d: c.scale(F(1, r)) for d, c in nxt.items() if c.terms}
        for d, c in cur.items():
            out[d] = out[d] + c if d in out else c
        if r > ymax:
            break
    return out


def _eval_at_conjugation_point(s: FormalSeries, k: int, order: int) -> FormalSeries:
    """Substitute x = (1/k) z^(1/k - 1) z0, landing in variables (z, z0)."""
    repl = FormalSeries.monomial(("z", "z0"), (k, 1),
                                 (F(1, k) - 1, F(1)), F(1, k))
    return s.subst_var_series("x", repl, order)


def theta_series(k: int, j: int, order: int, check: bool = True) -> FormalSeries:
    """The evaluated conjugation series in the variables (z, z0).

    For j >= 1 this is Theta_j at the distinguished point
    x = (1/k) z^(1/k-1) z0, which must equal -a_j (z + z0)^(-j/k); for
    j = 0 it is exp(Theta_0) = z^(1/k-1) (z + z0)^(-1/k+1).  With
    ``check`` set, the closed form is verified on the guaranteed window
    before returning.
    """
    if j < 0 or order < 0:
        raise ValueError("need j >= 0 and order >= 0")
    X = order + 2  # x-truncation; becomes the z0-order bound
    a = solve_a_coeffs(k, max(j, 2)).coeffs
    fi = f_inverse_series(k, X)
    ymax = j + 1 if j >= 1 else 2
    # w = f^{-1}(x) + z^(-1/k) y as a polynomial in y
    w = {0: fi, 1: _xz_mono(k, 0, F(-1, k))}
    # R = f(w) - x
    fw = {}
    wpow = {0: FormalSeries.one(XZ, (1, k))}
    for i in range(1, k + 1):
        wpow = _ypoly_mul(wpow, w, ymax, k)
        c = binom(k, i) / k
        for d, s in wpow.items():
            term = s.scale(c).shift((F(0), F(1, k)))
            fw[d] = fw[d] + term if d in fw else term
    R = dict(fw)
    R[0] = R[0] - _xz_mono(k, 1, 0)
    r1 = R[1]
    if j == 0:
        out = _eval_at_conjugation_point(r1, k, X)
        if check:
            expect = binomial_expand(F(k - 1, k), 1, order, ram_main=k) \
                .shift((F(1, k) - 1, F(0)))
            box = {"z0": (0, order), "z": (F(-order), F(0))}
            if not out.equals_on(expect, box):
                raise WindowError("conjugation scale factor mismatch")
        return out
    r1_inv = r1.pow_int(-1, "x", X)
    thetas = []
    for m in range(1, j + 1):
        e = _ypoly_exp_derivation(thetas, m + 1, k)
        s_next = R[m + 1] * r1_inv if m + 1 in R else FormalSeries.zero(XZ, (1, k))
        already = e.get(m + 1, FormalSeries.zero(XZ, (1, k)))
        thetas.append(s_next - already)
    out = _eval_at_conjugation_point(thetas[-1], k, X)
    if check:
        aj = a[j - 1]
        expect = binomial_expand(F(-j, k), 1, order, ram_main=k).scale(-aj)
        box = {"z0": (0, order), "z": (F(-j, k) - order, F(-j, k))}
        if not out.equals_on(expect, box):
            raise WindowError("conjugation series mismatch at index %d" % j)
    return out


# -- the x-space substitution operator ----------------------------------

def delta_x_generator(k: int) -> FormalSeries:
    """Image of x: z((1 + z^(-1/k) x)^k - 1), an exact polynomial."""
    return _xz(k, {(F(m), 1 - F(m, k)): binom(k, m) for m in range(1, k + 1)})


def delta_x_inverse_generator(k: int, order: int) -> FormalSeries:
    """Image of x under the inverse: z^(1/k)((1 + z^(-1) x)^(1/k) - 1)."""
    terms = {(F(m), F(1, k) - m): binom(F(1, k), m) for m in range(1, order + 1)}
    supp = ((F(1), POS_INF), (NEG_INF, F(1, k) - 1))
    known = ((NEG_INF, F(order)), (NEG_INF, POS_INF))
    return FormalSeries(XZ, (1, k), terms, supp, known)


def delta_k_x_apply(k: int, n: int, order: int) -> FormalSeries:
    """The substitution operator on x^n, truncated at x-order `order`.

    Multiplicativity reduces the action on x^n to the n-th power of the
    action on x.
    """
    return delta_x_generator(k).pow_int(n, "x", order)


def delta_k_x_inverse_apply(k: int, n: int, order: int) -> FormalSeries:
    return delta_x_inverse_generator(k, order + abs(n) + 1).pow_int(n, "x", order)


def delta_x_via_operators(k: int, n: int, order: int) -> FormalSeries:
    """Oracle route: the three factors applied separately to x^n.

    Applies the scaling operators first (x^n is an eigenvector), then
    the exponential of the weighted derivation sum.
    """
    a = solve_a_coeffs(k, order + abs(n) + 1)
    alpha = [(aj, F(-j, k)) for j, aj in enumerate(a.coeffs, start=1)]
    scaled = exp_derivation_apply(alpha, n, order - min(n, 0) + 1, k=k)
    # k^(L) z^((-1/k+1) L) with L = x d/dx contributed k^n z^((1-1/k)n)
    return scaled.shift((F(0), (1 - F(1, k)) * n)).scale(F(k) ** n) \
        .restrict_known("x", NEG_INF, F(n + order))


def x_identity_residual(k: int, n: int, order: int, inverse: bool = False) -> FormalSeries:
    """Residual of the derivative identity for the substitution operator.

    Forward form: -D d/dx + (1/k) z^(1/k-1) d/dx D - d/dz D on x^n.
    Inverse form: -D' d/dx + k z^(-1/k+1) d/dx D' - k z^(-1/k+1) d/dz D'.
    Identically zero within the returned window.
    """
    pad = order + abs(n) + 4
    if not inverse:
        dxn = delta_k_x_apply(k, n, pad)
        dxn1 = delta_k_x_apply(k, n - 1, pad)
        lhs = dxn1.scale(F(-n)) \
            + dxn.deriv("x").shift((F(0), F(1, k) - 1)).scale(F(1, k))
        rhs = dxn.deriv("z")
    else:
        dxn = delta_k_x_inverse_apply(k, n, pad)
        dxn1 = delta_k_x_inverse_apply(k, n - 1, pad)
        lhs = dxn1.scale(F(-n)) \
            + dxn.deriv("x").shift((F(0), 1 - F(1, k))).scale(F(k))
        rhs = dxn.deriv("z").shift((F(0), 1 - F(1, k))).scale(F(k))
    return lhs - rhs
