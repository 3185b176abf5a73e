"""Sparse formal Laurent series in several variables with fractional exponents.

A ``FormalSeries`` stores a finite coefficient map from exponent tuples
(exact ``Fraction`` values) to scalars, together with two interval claims
per variable:

* a support interval: the untruncated object has no terms outside it;
* a known interval: inside it the stored coefficients are complete.

Truncated expansions keep both honest, and arithmetic narrows the known
intervals pessimistically, so reading a coefficient can either return an
exact value or raise ``WindowError``; a silent wrong zero is impossible.
Coefficients are duck typed: rationals, cyclotomic scalars, and Fock
space vectors all work (vector-valued series are never multiplied
together).
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial, inf, lcm

from .scalars import scalar_to_json

NEG_INF = -inf
POS_INF = inf


class WindowError(Exception):
    """A coefficient outside the guaranteed window was requested."""


def _badd(a, b):
    """Add two window bounds, treating infinities as absorbing."""
    if a in (NEG_INF, POS_INF):
        if b == -a:
            raise WindowError("undefined bound arithmetic (inf - inf)")
        return a
    if b in (NEG_INF, POS_INF):
        return b
    return a + b


def binom(r, m: int) -> Fraction:
    """Generalized binomial coefficient C(r, m) for integer m >= 0."""
    if m < 0:
        return Fraction(0)
    out = Fraction(1)
    r = Fraction(r)
    for i in range(m):
        out *= r - i
    return out / factorial(m)


def frange(lo: Fraction, hi: Fraction, step: Fraction):
    """Exact arithmetic progression lo, lo+step, ... not exceeding hi."""
    v = Fraction(lo)
    step = Fraction(step)
    while v <= hi:
        yield v
        v += step


class FormalSeries:
    __slots__ = ("vars", "ram", "terms", "supp", "known")

    def __init__(self, vars, ram, terms, supp, known):
        self.vars = tuple(vars)
        self.ram = tuple(ram)
        self.terms = {}
        for exps, c in terms.items():
            if not c:
                continue
            e = tuple(Fraction(x) for x in exps)
            if self._inside(e, known):
                self.terms[e] = c
        self.supp = tuple((lo, hi) for lo, hi in supp)
        self.known = tuple((lo, hi) for lo, hi in known)

    @staticmethod
    def _inside(exps, box):
        return all(lo <= e <= hi for e, (lo, hi) in zip(exps, box))

    # -- constructors ----------------------------------------------------

    @classmethod
    def exact(cls, vars, ram, terms):
        """A fully known series (a finite Laurent polynomial)."""
        n = len(tuple(vars))
        keys = [tuple(Fraction(x) for x in e) for e, c in terms.items() if c]
        if keys:
            supp = tuple((min(e[i] for e in keys), max(e[i] for e in keys))
                         for i in range(n))
        else:
            # empty support: the inverted interval is absorbing under
            # hulls and sums, so zero never widens window claims
            supp = tuple((POS_INF, NEG_INF) for _ in range(n))
        known = tuple((NEG_INF, POS_INF) for _ in range(n))
        return cls(vars, ram, terms, supp, known)

    @classmethod
    def zero(cls, vars, ram):
        return cls.exact(vars, ram, {})

    @classmethod
    def monomial(cls, vars, ram, exps, coeff=Fraction(1)):
        return cls.exact(vars, ram, {tuple(exps): coeff})

    @classmethod
    def one(cls, vars, ram):
        return cls.monomial(vars, ram, (0,) * len(tuple(vars)))

    # -- bookkeeping ------------------------------------------------------

    def index(self, var: str) -> int:
        return self.vars.index(var)

    def _check_compatible(self, other: "FormalSeries"):
        if self.vars != other.vars:
            raise WindowError(f"variable mismatch: {self.vars} vs {other.vars}")

    def _merge_ram(self, other):
        return tuple(lcm(a, b) for a, b in zip(self.ram, other.ram))

    def with_known(self, known):
        return FormalSeries(self.vars, self.ram, self.terms, self.supp, known)

    def restrict_known(self, var: str, lo, hi):
        i = self.index(var)
        known = list(self.known)
        known[i] = (max(known[i][0], lo), min(known[i][1], hi))
        return self.with_known(known)

    # -- linear structure -------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, FormalSeries):
            return NotImplemented
        self._check_compatible(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e)
            terms[e] = c if s is None else s + c
        supp = tuple((min(a[0], b[0]), max(a[1], b[1]))
                     for a, b in zip(self.supp, other.supp))
        known = tuple((max(a[0], b[0]), min(a[1], b[1]))
                      for a, b in zip(self.known, other.known))
        return FormalSeries(self.vars, self._merge_ram(other), terms, supp, known)

    def __neg__(self):
        return FormalSeries(self.vars, self.ram,
                            {e: -c for e, c in self.terms.items()},
                            self.supp, self.known)

    def __sub__(self, other):
        if not isinstance(other, FormalSeries):
            return NotImplemented
        return self + (-other)

    def scale(self, scalar):
        if not scalar:
            return FormalSeries(self.vars, self.ram, {}, self.supp, self.known)
        return FormalSeries(self.vars, self.ram,
                            {e: scalar * c for e, c in self.terms.items()},
                            self.supp, self.known)

    def shift(self, exps):
        """Multiply by the monomial with the given exponent tuple."""
        d = tuple(Fraction(x) for x in exps)
        terms = {tuple(a + b for a, b in zip(e, d)): c for e, c in self.terms.items()}
        supp = tuple((_badd(lo, x), _badd(hi, x)) for (lo, hi), x in zip(self.supp, d))
        known = tuple((_badd(lo, x), _badd(hi, x)) for (lo, hi), x in zip(self.known, d))
        return FormalSeries(self.vars, self.ram, terms, supp, known)

    # -- multiplication -----------------------------------------------------

    def __mul__(self, other):
        if not isinstance(other, FormalSeries):
            return NotImplemented
        self._check_compatible(other)
        supp, known = [], []
        for (aslo, ashi), (aklo, akhi), (bslo, bshi), (bklo, bkhi) in zip(
                self.supp, self.known, other.supp, other.known):
            supp.append((_badd(aslo, bslo), _badd(ashi, bshi)))
            # an unknown region of one factor poisons the targets reachable
            # by pairing it with the other factor's support
            los, his = [], []
            if aklo > aslo:
                los.append(_badd(aklo, bshi))
            if bklo > bslo:
                los.append(_badd(bklo, ashi))
            if akhi < ashi:
                his.append(_badd(akhi, bslo))
            if bkhi < bshi:
                his.append(_badd(bkhi, aslo))
            known.append((max(los, default=NEG_INF), min(his, default=POS_INF)))
        terms = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                c = ca * cb
                s = terms.get(e)
                terms[e] = c if s is None else s + c
        return FormalSeries(self.vars, self._merge_ram(other), terms, supp, known)

    def pow_int(self, n: int, var: str, order: int) -> "FormalSeries":
        """self**n for integer n, truncated at order `order` in `var`.

        Negative powers require a unique minimal term in `var` with a
        rational coefficient; the inverse is then a geometric series in
        the remainder, and the known window is capped at the first
        exponent the truncation may have dropped.
        """
        if n >= 0:
            out = FormalSeries.one(self.vars, self.ram)
            for _ in range(n):
                out = out * self
            return out
        i = self.index(var)
        if not self.terms:
            raise WindowError("cannot invert the zero series")
        val = min(e[i] for e in self.terms)
        lead = [(e, c) for e, c in self.terms.items() if e[i] == val]
        if len(lead) != 1:
            raise WindowError(f"leading term in {var} is not a monomial")
        e0, c0 = lead[0]
        if not isinstance(c0, (int, Fraction)):
            raise WindowError("non-rational leading coefficient")
        c0 = Fraction(c0)
        u = (self.shift(tuple(-x for x in e0)).scale(1 / c0)
             - FormalSeries.one(self.vars, self.ram)).tighten()
        v_u = min((e[i] for e in u.terms), default=None)
        if v_u is not None and v_u <= 0:
            raise WindowError(f"leading term in {var} is not dominant")
        out = FormalSeries.zero(self.vars, self.ram)
        upow = FormalSeries.one(self.vars, self.ram)
        for m in range(order + 1):
            out = out + upow.scale(binom(n, m))
            if m < order and v_u is not None:
                upow = upow * u
        out = out.scale(c0 ** n).shift(tuple(x * n for x in e0))
        if v_u is not None:
            first_dropped = e0[i] * n + (order + 1) * v_u
            out = out.restrict_known(var, NEG_INF,
                                     first_dropped - Fraction(1, self.ram[i]))
        return out

    # -- calculus ------------------------------------------------------------

    def deriv(self, var: str) -> "FormalSeries":
        i = self.index(var)
        terms = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            ne = list(e)
            ne[i] = e[i] - 1
            terms[tuple(ne)] = e[i] * c
        shift1 = lambda pair: (_badd(pair[0], -1), _badd(pair[1], -1))
        supp = tuple(shift1(p) if j == i else p for j, p in enumerate(self.supp))
        known = tuple(shift1(p) if j == i else p for j, p in enumerate(self.known))
        return FormalSeries(self.vars, self.ram, terms, supp, known)

    def coeff(self, exps):
        e = tuple(Fraction(x) for x in exps)
        if not self._inside(e, self.known):
            raise WindowError(f"exponent {e} outside known window {self.known}")
        return self.terms.get(e, Fraction(0))

    def coeff_of(self, var: str, exp) -> "FormalSeries":
        """The coefficient of var**exp as a series in the other variables."""
        i = self.index(var)
        exp = Fraction(exp)
        if not self.known[i][0] <= exp <= self.known[i][1]:
            raise WindowError(f"{var}^{exp} outside known window")
        rest = [j for j in range(len(self.vars)) if j != i]
        terms = {}
        for e, c in self.terms.items():
            if e[i] == exp:
                terms[tuple(e[j] for j in rest)] = c
        return FormalSeries(tuple(self.vars[j] for j in rest),
                            tuple(self.ram[j] for j in rest),
                            terms,
                            tuple(self.supp[j] for j in rest),
                            tuple(self.known[j] for j in rest))

    def residue(self, var: str):
        """Coefficient of var**(-1); a scalar when no variables remain."""
        out = self.coeff_of(var, Fraction(-1))
        if not out.vars:
            return out.terms.get((), Fraction(0))
        return out

    def subst_root_of_unity(self, var: str, j: int) -> "FormalSeries":
        """Substitute z^(1/k) -> eta^(-j) z^(1/k) with eta = e^(-2 pi i/k).

        A term c z^(m/k) becomes eta^(-j m) c z^(m/k); windows unchanged.
        """
        from .scalars import eta_power
        i = self.index(var)
        k = self.ram[i]
        terms = {}
        for e, c in self.terms.items():
            m = e[i] * k
            if m.denominator != 1:
                raise WindowError("exponent not in declared ramification")
            terms[e] = eta_power(k, -j * int(m)) * c
        return FormalSeries(self.vars, self.ram, terms, self.supp, self.known)

    # -- structure -------------------------------------------------------------

    def embed(self, vars, ram) -> "FormalSeries":
        """View in a larger variable set; new variables get exponent zero."""
        vars = tuple(vars)
        pos = {v: i for i, v in enumerate(self.vars)}
        terms = {}
        for e, c in self.terms.items():
            terms[tuple(e[pos[v]] if v in pos else Fraction(0) for v in vars)] = c
        supp, known = [], []
        for v in vars:
            if v in pos:
                supp.append(self.supp[pos[v]])
                known.append(self.known[pos[v]])
            else:
                supp.append((Fraction(0), Fraction(0)))
                known.append((NEG_INF, POS_INF))
        return FormalSeries(vars, ram, terms, supp, known)

    def _valuation(self, i):
        """Certified lower bound on exponents of variable i, or None."""
        slo = self.supp[i][0]
        klo, khi = self.known[i]
        if klo > slo:
            return slo if slo != NEG_INF else None
        vt = min((e[i] for e in self.terms), default=None)
        if vt is None:
            return khi if khi != POS_INF else None
        return vt

    def tighten(self) -> "FormalSeries":
        """Shrink support claims to the certified hull of stored terms.

        Sound on each side where the known window reaches the support
        claim: coefficients between the claim and the first stored term
        are then certified zeros.
        """
        supp = []
        for i in range(len(self.vars)):
            slo, shi = self.supp[i]
            klo, khi = self.known[i]
            if klo <= slo:
                slo = min((e[i] for e in self.terms), default=POS_INF)
            if khi >= shi:
                shi = max((e[i] for e in self.terms), default=NEG_INF)
            supp.append((slo, shi))
        return FormalSeries(self.vars, self.ram, self.terms, supp, self.known)

    def subst_var_series(self, var: str, repl: "FormalSeries", order: int) -> "FormalSeries":
        """Substitute a series for `var`; exponents of `var` must be integers.

        `order` bounds the truncation used for negative powers of `repl`.
        If self is truncated, its unknown region must consist exactly of
        the terms with `var` exponent above the known window (as produced
        by binomial_expand); the result window is capped accordingly in
        every variable where `repl` has positive valuation.
        """
        i = self.index(var)
        x_hi = self.known[i][1]
        rest_vars = tuple(v for j, v in enumerate(self.vars) if j != i)
        rest_ram = tuple(self.ram[j] for j in range(len(self.vars)) if j != i)
        out = FormalSeries.zero(repl.vars, repl.ram)
        by_exp = {}
        for e, c in self.terms.items():
            if e[i].denominator != 1:
                raise WindowError("substitution requires integer exponents")
            by_exp.setdefault(int(e[i]), []).append((e, c))
        for n, entries in sorted(by_exp.items()):
            if n >= 0:
                p = FormalSeries.one(repl.vars, repl.ram)
                for _ in range(n):
                    p = p * repl
            else:
                p = repl.pow_int(n, repl.vars[0], order)
            for e, c in entries:
                rest = {tuple(e[j] for j in range(len(e)) if j != i): c}
                mono = FormalSeries.exact(rest_vars, rest_ram, rest)
                out = out + mono.embed(repl.vars, repl.ram) * p
        if x_hi != POS_INF:
            # dropped tail terms carry var-degree > x_hi, hence exponent
            # above x_hi * valuation in every positive-valuation variable
            capped = False
            for j, v in enumerate(repl.vars):
                val = repl._valuation(j)
                if val is not None and val > 0:
                    out = out.restrict_known(v, NEG_INF, x_hi * val)
                    capped = True
            if not capped:
                raise WindowError("cannot bound substitution tail")
        return out

    # -- comparisons -------------------------------------------------------------

    def known_box_contains(self, box) -> bool:
        for v, (lo, hi) in box.items():
            klo, khi = self.known[self.index(v)]
            if not (klo <= lo and hi <= khi):
                return False
        return True

    def nonzero_terms_in(self, box):
        out = {}
        for e, c in self.terms.items():
            ok = True
            for v, (lo, hi) in box.items():
                if not lo <= e[self.index(v)] <= hi:
                    ok = False
                    break
            if ok and c:
                out[e] = c
        return out

    def is_zero_on(self, box) -> bool:
        if not self.known_box_contains(box):
            raise WindowError(f"known window does not cover box {box}")
        return not self.nonzero_terms_in(box)

    def equals_on(self, other: "FormalSeries", box) -> bool:
        diff = self - other.embed(self.vars, self.ram) if self.vars != other.vars else self - other
        return diff.is_zero_on(box)

    # -- output --------------------------------------------------------------------

    def sorted_terms(self):
        return sorted(self.terms.items())

    def to_json(self):
        def bound(x):
            if x == NEG_INF:
                return "-inf"
            if x == POS_INF:
                return "inf"
            return scalar_to_json(x)
        return {
            "variables": list(self.vars),
            "ramification": list(self.ram),
            "window": [[bound(lo), bound(hi)] for lo, hi in self.known],
            "terms": [{"exponent": [scalar_to_json(x) for x in e],
                       "coeff": scalar_to_json(c)}
                      for e, c in self.sorted_terms()],
        }

    def __repr__(self):
        inner = " + ".join(
            f"({c})*" + "*".join(f"{v}^{x}" for v, x in zip(self.vars, e))
            for e, c in self.sorted_terms()[:8])
        more = "" if len(self.terms) <= 8 else f" ... ({len(self.terms)} terms)"
        return f"<series {inner or '0'}{more}>"


# -- stock constructions -------------------------------------------------------


def binomial_expand(r, sign: int, order: int, var_main="z", var_sec="z0",
                    ram_main=1, ram_sec=1, main_scale=1) -> FormalSeries:
    """(main +- sec)^r as sum_m C(r,m) (+-1)^m main^(r-m) sec^m, m <= order.

    Expanded in nonnegative integer powers of the second variable; the
    known windows record exactly what the truncation guarantees.  With
    ``main_scale`` = 1/k the main variable is read as a k-th root, i.e.
    the term exponents become (r-m)/k.
    """
    r = Fraction(r)
    scale = Fraction(main_scale)
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    terms = {}
    for m in range(order + 1):
        terms[((r - m) * scale, Fraction(m))] = binom(r, m) * (sign ** m)
    if r.denominator == 1 and 0 <= r <= order:
        # the expansion is an exact polynomial
        return FormalSeries.exact((var_main, var_sec), (ram_main, ram_sec), terms)
    # every dropped term has sec exponent above `order`, so the sec window
    # alone fences off the truncation and main stays fully known
    supp = ((NEG_INF, r * scale), (Fraction(0), POS_INF))
    known = ((NEG_INF, POS_INF), (NEG_INF, Fraction(order)))
    return FormalSeries((var_main, var_sec), (ram_main, ram_sec), terms, supp, known)


def one_plus_pow(r, order: int, var="z", ram=1) -> FormalSeries:
    """(1 + var)^r truncated at var^order."""
    r = Fraction(r)
    terms = {(Fraction(m),): binom(r, m) for m in range(order + 1)}
    if r.denominator == 1 and 0 <= r <= order:
        return FormalSeries.exact((var,), (ram,), terms)
    supp = ((Fraction(0), POS_INF),)
    known = ((NEG_INF, Fraction(order)),)
    return FormalSeries((var,), (ram,), terms, supp, known)


def multiply(a: FormalSeries, b: FormalSeries) -> FormalSeries:
    return a * b


def residue(s: FormalSeries, var=None):
    if var is None:
        if len(s.vars) != 1:
            raise WindowError("residue needs a variable name for multivariate series")
        var = s.vars[0]
    return s.residue(var)


def subst_root_of_unity(s: FormalSeries, j: int, var=None) -> FormalSeries:
    if var is None:
        if len(s.vars) != 1:
            raise WindowError("substitution needs a variable name")
        var = s.vars[0]
    return s.subst_root_of_unity(var, j)


def delta_sum(vars, ram, main: str, sign: int, sec: str, den: str,
              shift, step, box, alternate=False) -> FormalSeries:
    """The series sum_n (main +- sec)^n den^(-n-1) over n in shift + step*Z.

    This is the coefficient-level expansion of a formal delta function
    kernel; only coefficients inside `box` (a dict var -> (lo, hi)) are
    materialized and the known window equals the box.  With
    ``alternate=True`` each summand carries an extra factor (-1)^n (used
    for denominators of the form -den; requires integer n).
    """
    vars = tuple(vars)
    iden = vars.index(den)
    isec = vars.index(sec)
    imain = vars.index(main)
    shift = Fraction(shift)
    step = Fraction(step)
    dlo, dhi = box[den]
    slo, shi = box[sec]
    mlo, mhi = box[main]
    terms = {}
    # den exponent is -n-1, so n runs over the part of shift + step*Z
    # with n >= -dhi-1; ceil to the first coset element in range
    q = Fraction(-dhi - 1 - shift, 1) / step
    n = shift + step * (-((-q) // 1))
    while -n - 1 >= dlo:
        dexp = -n - 1
        m_lo = max(0, int(slo) if Fraction(slo).denominator == 1 else int(slo) + 1)
        for m in range(m_lo, int(shi) + 1):
            mexp = n - m
            if not mlo <= mexp <= mhi:
                continue
            c = binom(n, m) * (sign ** m)
            if alternate:
                if n.denominator != 1:
                    raise WindowError("alternating delta sum needs integer powers")
                c *= (-1) ** int(n)
            if c:
                e = [Fraction(0)] * len(vars)
                e[iden] = dexp
                e[isec] = Fraction(m)
                e[imain] = mexp
                key = tuple(e)
                terms[key] = terms.get(key, Fraction(0)) + c
        n += step
    supp = []
    known = []
    for i, v in enumerate(vars):
        if i == isec:
            supp.append((Fraction(0), POS_INF))
        else:
            supp.append((NEG_INF, POS_INF))
        known.append(box[v])
    return FormalSeries(vars, ram, terms, supp, known)
