"""The grading-twisting operator on Fock space vectors and its inverse.

For a homogeneous vector u of weight p the operator acts as

    exp( sum_{j>=1} a_j z^(-j/k) L(j) ) k^(-L(0)) z^((1/k - 1) L(0)) u,

which is a finite sum: L(j) lowers weight by j, so only monomials of
total degree at most p survive.  The result is stored symbolically as a
list of vectors u(i), one per total degree i, with exact exponent
(1/k - 1) p - i/k; no truncation is involved.  The inverse operator
composes the same factors the other way around with negated
coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .derivation import solve_a_coeffs
from .fock import FockVector, basis_upto, max_nonzero_mode, vertex_mode, virasoro_mode
from .series import NEG_INF, POS_INF, FormalSeries, binomial_expand

F = Fraction


@dataclass(frozen=True)
class DeltaExpansion:
    """Finite expansion: terms[i] is the weight p-i vector at exponent
    (1/k-1)p - i/k (forward) or (p-i) - p/k (inverse)."""
    k: int
    weight: int
    inverse: bool
    terms: tuple  # of (i, FockVector)

    def exponent(self, i: int) -> Fraction:
        if self.inverse:
            return (self.weight - i) - F(self.weight, self.k)
        return (F(1, self.k) - 1) * self.weight - F(i, self.k)

    def pairs(self):
        """(exponent, vector) pairs."""
        return [(self.exponent(i), v) for i, v in self.terms]

    def leading(self) -> FockVector:
        for i, v in self.terms:
            if i == 0:
                return v
        return FockVector.zero()

    def to_json(self):
        out = []
        for i, v in self.terms:
            e = self.exponent(i)
            out.append({"i": i, "exponent": f"{e.numerator}/{e.denominator}",
                        "vector": v.to_json()})
        return out


def _exp_upper_virasoro(coeffs: dict, u: FockVector) -> dict:
    """exp(sum_j coeffs[j] L(j)) u, keyed by total weight drop.

    Iterates w_r = X(w_(r-1))/r for X the coefficient-weighted sum of
    raising modes; terminates because each step lowers weight.
    """
    p = u.max_weight()
    out = {0: u}
    frontier = {0: u}
    r = 0
    while frontier:
        r += 1
        nxt = {}
        for i, vec in frontier.items():
            for j, cj in coeffs.items():
                ni = i + j
                if ni > p or not cj:
                    continue
                img = virasoro_mode(j, vec)
                if img:
                    prev = nxt.get(ni)
                    add = img.scale(cj)
                    nxt[ni] = add if prev is None else prev + add
        frontier = {i: v.scale(F(1, r)) for i, v in nxt.items() if v}
        for i, v in frontier.items():
            prev = out.get(i)
            out[i] = v if prev is None else prev + v
    return out


def _require_homogeneous(u: FockVector):
    if not u.is_homogeneous():
        raise ValueError("operator defined on homogeneous vectors only")


@lru_cache(maxsize=None)
def _delta_basis(k: int, part: tuple, inverse: bool) -> DeltaExpansion:
    u = FockVector.basis(part)
    p = u.weight()
    a = solve_a_coeffs(k, p).coeffs if p >= 1 else ()
    if not inverse:
        base = u.scale(F(1, k ** p))
        coeffs = {j: aj for j, aj in enumerate(a, start=1)}
        parts = _exp_upper_virasoro(coeffs, base)
        terms = tuple((i, v) for i, v in sorted(parts.items()) if v)
    else:
        coeffs = {j: -aj for j, aj in enumerate(a, start=1)}
        parts = _exp_upper_virasoro(coeffs, u)
        terms = tuple((i, v.scale(F(k) ** (p - i)))
                      for i, v in sorted(parts.items()) if v)
    return DeltaExpansion(k, p, inverse, terms)


def delta_apply(k: int, u: FockVector, depth=None) -> DeltaExpansion:
    """Expansion of the twisting operator on a homogeneous vector."""
    _require_homogeneous(u)
    p = u.weight()
    acc = {}
    for part, c in u.terms.items():
        for i, v in _delta_basis(k, part, False).terms:
            if depth is not None and i > depth:
                continue
            prev = acc.get(i)
            add = v.scale(c)
            acc[i] = add if prev is None else prev + add
    return DeltaExpansion(k, p, False,
                          tuple((i, v) for i, v in sorted(acc.items()) if v))


def delta_inverse_apply(k: int, u: FockVector, depth=None) -> DeltaExpansion:
    _require_homogeneous(u)
    p = u.weight()
    acc = {}
    for part, c in u.terms.items():
        for i, v in _delta_basis(k, part, True).terms:
            if depth is not None and i > depth:
                continue
            prev = acc.get(i)
            add = v.scale(c)
            acc[i] = add if prev is None else prev + add
    return DeltaExpansion(k, p, True,
                          tuple((i, v) for i, v in sorted(acc.items()) if v))


def round_trip(k: int, u: FockVector) -> dict:
    """Compose the expansion with the inverse expansion; collects the
    coefficient of each exponent.  Equals {0: u} when exact."""
    _require_homogeneous(u)
    out = {}
    for e1, v1 in delta_apply(k, u).pairs():
        for h, piece in v1.components().items():
            for e2, v2 in delta_inverse_apply(k, piece).pairs():
                e = e1 + e2
                prev = out.get(e)
                out[e] = v2 if prev is None else prev + v2
    return {e: v for e, v in out.items() if v}


def translation_identity_residual(k: int, u: FockVector, inverse=False) -> dict:
    """Residual of the compatibility between the operator and L(-1).

    Forward: D L(-1) u - (1/k) z^(1/k-1) L(-1) D u - d/dz D u.
    Inverse: D' L(-1) u - k z^(1-1/k) L(-1) D' u - k z^(1-1/k) d/dz D' u.
    Returned as exponent -> vector; empty when the identity holds.
    """
    _require_homogeneous(u)
    lu = virasoro_mode(-1, u)
    out = {}

    def add(e, v):
        if not v:
            return
        prev = out.get(e)
        out[e] = v if prev is None else prev + v

    if not inverse:
        if lu:
            for e, v in delta_apply(k, lu).pairs():
                add(e, v)
        for e, v in delta_apply(k, u).pairs():
            add(e + F(1, k) - 1, virasoro_mode(-1, v).scale(F(-1, k)))
            add(e - 1, v.scale(-e))
    else:
        if lu:
            for e, v in delta_inverse_apply(k, lu).pairs():
                add(e, v)
        for e, v in delta_inverse_apply(k, u).pairs():
            add(e + 1 - F(1, k), virasoro_mode(-1, v).scale(-k))
            add(e - F(1, k), v.scale(-k * e))
    return {e: v for e, v in out.items() if v}


ZZ0 = ("z", "z0")


def _vec_series(k: int, terms: dict, z0_hi) -> FormalSeries:
    """Vector-coefficient series in (z, z0), exact in z, known z0 <= z0_hi."""
    supp = ((NEG_INF, POS_INF), (NEG_INF, POS_INF))
    known = ((NEG_INF, POS_INF), (NEG_INF, z0_hi))
    return FormalSeries(ZZ0, (k, 1), terms, supp, known)


def conjugation_lhs(k: int, u: FockVector, w: FockVector, z0_order: int) -> FormalSeries:
    """D(z) Y(u, z0) D(z)^(-1) w as a vector-valued series in (z, z0)."""
    _require_homogeneous(u)
    _require_homogeneous(w)
    terms = {}
    for ea, va in delta_inverse_apply(k, w).pairs():
        for h, piece in va.components().items():
            for n in range(-z0_order - 1, max_nonzero_mode(u, piece) + 1):
                y = vertex_mode(u, n, piece)
                if not y:
                    continue
                for eb, vb in delta_apply(k, y).pairs():
                    key = (ea + eb, F(-n - 1))
                    prev = terms.get(key)
                    terms[key] = vb if prev is None else prev + vb
    return _vec_series(k, terms, F(z0_order))


def conjugation_rhs(k: int, u: FockVector, w: FockVector, z0_order: int) -> FormalSeries:
    """Y(D(z + z0) u, (z + z0)^(1/k) - z^(1/k)) w, same variables."""
    _require_homogeneous(u)
    _require_homogeneous(w)
    pad = z0_order + u.max_weight() + w.max_weight() + 2
    x = binomial_expand(F(1, k), 1, pad, ram_main=k) \
        - FormalSeries.monomial(ZZ0, (k, 1), (F(1, k), F(0)))
    xpows = {}
    out = FormalSeries.zero(ZZ0, (k, 1))
    for ei, ui in delta_apply(k, u).pairs():
        kernel = binomial_expand(ei, 1, pad, ram_main=k)
        acc = FormalSeries.zero(ZZ0, (k, 1))
        for h, piece in ui.components().items():
            for n in range(-z0_order - 1, max_nonzero_mode(piece, w) + 1):
                y = vertex_mode(piece, n, w)
                if not y:
                    continue
                e = -n - 1
                if e not in xpows:
                    xpows[e] = x.pow_int(e, "z0", pad)
                acc = acc + xpows[e] * FormalSeries.exact(ZZ0, (k, 1),
                                                          {(F(0), F(0)): y})
        out = out + kernel * acc
    return out


def conjugation_residual(k: int, u: FockVector, w: FockVector, z0_order: int):
    """Difference of the two sides plus the comparison box they certify.

    The box hulls every stored exponent of either side (so cancellation
    cannot hide a discrepancy) up to the requested z0 order.
    """
    lhs = conjugation_lhs(k, u, w, z0_order)
    rhs = conjugation_rhs(k, u, w, z0_order)
    zs = [e[0] for s in (lhs, rhs) for e in s.terms]
    z0s = [e[1] for s in (lhs, rhs) for e in s.terms]
    box = {"z": (min(zs, default=F(0)), max(zs, default=F(0))),
           "z0": (min(z0s, default=F(0)), F(z0_order))}
    return lhs - rhs, box


def conjugation_holds(k: int, u: FockVector, weight_cap: int, z0_order: int) -> bool:
    for wpart in basis_upto(weight_cap):
        w = FockVector.basis(wpart)
        res, box = conjugation_residual(k, u, w, z0_order)
        if not res.is_zero_on(box):
            return False
    return True
