"""The rank-1 free boson Fock space with exact oscillator arithmetic.

Basis states are partitions: (n1, n2, ...) weakly decreasing stands for
a(-n1) a(-n2) ... acting on the vacuum.  The oscillators obey
[a(m), a(n)] = m delta(m+n), a(0) acts as zero, and the Virasoro field
is the usual normal-ordered quadratic expression with central charge 1.
Graded pieces are finite (dim of weight n is the partition number p(n)),
so every mode acts exactly; no coefficient is ever approximated.

Vertex operator modes for arbitrary states are computed from the
normal-ordered product of derivative fields, one factor per part of the
indexing partition.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .scalars import scalar_to_json
from .series import binom

F = Fraction

Partition = tuple  # weakly decreasing tuple of positive ints


@lru_cache(maxsize=None)
def partitions_of(n: int) -> tuple:
    """All partitions of n in reverse lexicographic order."""
    if n < 0:
        return ()
    if n == 0:
        return ((),)
    out = []

    def rec(remaining, maxpart, prefix):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        for p in range(min(maxpart, remaining), 0, -1):
            prefix.append(p)
            rec(remaining - p, p, prefix)
            prefix.pop()

    rec(n, n, [])
    return tuple(out)


def basis_upto(cap: int):
    """All partitions of weight 0..cap, ordered by (weight, revlex)."""
    out = []
    for n in range(cap + 1):
        out.extend(partitions_of(n))
    return out


def weight_of(part: Partition) -> int:
    return sum(part)


class FockVector:
    """A finite rational (or cyclotomic) combination of basis states."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for p, c in terms.items():
                if c:
                    self.terms[tuple(p)] = c

    @classmethod
    def basis(cls, part, coeff=F(1)) -> "FockVector":
        return cls({tuple(sorted(part, reverse=True)): coeff})

    @classmethod
    def zero(cls) -> "FockVector":
        return cls()

    def __add__(self, other):
        out = dict(self.terms)
        for p, c in other.terms.items():
            s = out.get(p)
            out[p] = c if s is None else s + c
        return FockVector(out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "FockVector":
        if not c:
            return FockVector()
        return FockVector({p: c * x for p, x in self.terms.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def __mul__(self, c):
        if isinstance(c, FockVector):
            raise TypeError("Fock vectors do not multiply")
        return self.scale(c)

    def __eq__(self, other):
        if isinstance(other, FockVector):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __bool__(self):
        return bool(self.terms)

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items(),
                                 key=lambda kv: (kv[0],))))

    def key(self):
        return tuple(sorted(self.terms.items(), key=lambda kv: (kv[0],)))

    def is_homogeneous(self):
        ws = {weight_of(p) for p in self.terms}
        return len(ws) <= 1

    def weight(self) -> int:
        """Weight of a homogeneous vector (0 for the zero vector)."""
        ws = {weight_of(p) for p in self.terms}
        if len(ws) > 1:
            raise ValueError("vector is not homogeneous")
        return ws.pop() if ws else 0

    def max_weight(self) -> int:
        return max((weight_of(p) for p in self.terms), default=0)

    def components(self):
        """Split into homogeneous pieces, keyed by weight."""
        out = {}
        for p, c in self.terms.items():
            w = weight_of(p)
            out.setdefault(w, {})[p] = c
        return {w: FockVector(t) for w, t in sorted(out.items())}

    def to_json(self):
        return {" ".join(map(str, p)) or "vac": scalar_to_json(c)
                for p, c in sorted(self.terms.items())}

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for p, c in sorted(self.terms.items()):
            name = "".join(f"a(-{n})" for n in p) + "|0>" if p else "|0>"
            bits.append(f"({c})*{name}")
        return " + ".join(bits)


VACUUM = FockVector.basis(())


def vacuum() -> FockVector:
    return VACUUM


def omega() -> FockVector:
    """The conformal vector (1/2) a(-1)^2 |0>."""
    return FockVector.basis((1, 1), F(1, 2))


def state(*parts) -> FockVector:
    return FockVector.basis(parts)


def _alpha_basis(n: int, part: Partition):
    """a(n) on a basis state; returns (coefficient, partition) or None."""
    if n == 0:
        return None
    if n < 0:
        new = tuple(sorted(part + (-n,), reverse=True))
        return (F(1), new)
    if n not in part:
        return None
    mult = part.count(n)
    lst = list(part)
    lst.remove(n)
    return (F(n * mult), tuple(lst))


def heisenberg_mode(n: int, v: FockVector) -> FockVector:
    """Apply the oscillator a(n)."""
    out = {}
    for p, c in v.terms.items():
        hit = _alpha_basis(n, p)
        if hit is None:
            continue
        coeff, np_ = hit
        s = out.get(np_)
        add = c * coeff
        out[np_] = add if s is None else s + add
    return FockVector(out)


def virasoro_mode(n: int, v: FockVector) -> FockVector:
    """L(n) = (1/2) sum over a+b=n of :a(a) a(b): with central charge 1."""
    out = FockVector.zero()
    for p, c in v.terms.items():
        w = weight_of(p)
        bound = w + abs(n) + 1
        acc = FockVector.zero()
        base = FockVector.basis(p)
        for a in range(-bound, bound + 1):
            b = n - a
            if a == 0 or b == 0 or abs(b) > bound:
                continue
            # normal order: annihilators (positive index) act first
            first, second = (a, b) if a >= b else (b, a)
            step = heisenberg_mode(first, base)
            if not step:
                continue
            acc = acc + heisenberg_mode(second, step)
        out = out + acc.scale(c * F(1, 2))
    return out


def _field_coeff(n: int, m: int) -> Fraction:
    """Coefficient of a(m) z^(-m-n) in (1/(n-1)!) d^(n-1)/dz^(n-1) a(z)."""
    return (-1) ** (n - 1) * binom(m + n - 1, n - 1)


@lru_cache(maxsize=None)
def _vertex_basis(upart: Partition, m2: Fraction, vpart: Partition):
    """Mode of the basis field for `upart` at index m2 on basis state vpart.

    The field is the normal-ordered product of one derivative field per
    part; the mode picks oscillator tuples (m_1..m_r) with
    sum(m_i) = m2 + 1 - wt(u), annihilators applied before creators.
    """
    r = len(upart)
    wt_u = sum(upart)
    wt_v = sum(vpart)
    if r == 0:
        return FockVector.basis(vpart) if m2 == -1 else FockVector.zero()
    total = m2 + 1 - wt_u
    if Fraction(total).denominator != 1:
        return FockVector.zero()
    total = int(total)
    w_out = wt_v + wt_u - int(m2) - 1
    if w_out < 0:
        return FockVector.zero()
    hi = wt_v  # largest useful annihilator index
    lo = total - (r - 1) * hi
    out = FockVector.zero()

    def rec(i, rem, chosen):
        nonlocal out
        if i == r:
            if rem != 0:
                return
            coeff = F(1)
            for n_i, m_i in zip(upart, chosen):
                coeff *= _field_coeff(n_i, m_i)
                if not coeff:
                    return
            vec = FockVector.basis(vpart)
            for m_i in sorted(chosen, reverse=True):  # annihilators first
                vec = heisenberg_mode(m_i, vec)
                if not vec:
                    return
            out = out + vec.scale(coeff)
            return
        left = r - i - 1
        for m_i in range(max(lo, rem - left * hi), min(hi, rem - left * lo) + 1):
            if m_i == 0:
                continue
            rec(i + 1, rem - m_i, chosen + (m_i,))

    rec(0, total, ())
    return out


def vertex_mode(u: FockVector, m, v: FockVector) -> FockVector:
    """The untwisted mode u_m acting on v, extended bilinearly."""
    m = Fraction(m)
    out = FockVector.zero()
    for up, uc in u.terms.items():
        for vp, vc in v.terms.items():
            contrib = _vertex_basis(up, m, vp)
            if contrib:
                out = out + contrib.scale(uc * vc)
    return out


def max_nonzero_mode(u: FockVector, v: FockVector) -> int:
    """Largest integer n with u_n v possibly nonzero, by weight count."""
    return u.max_weight() + v.max_weight() - 1


class ModeMatrix:
    """Exact action of one operator on the basis of weight <= cap.

    Stores the full image vector per source basis state; images may
    extend beyond the cap, keeping compositions exact.
    """

    def __init__(self, cap: int, action: dict, label=""):
        self.cap = cap
        self.action = action  # Partition -> FockVector
        self.label = label

    @classmethod
    def from_operator(cls, op, cap: int, label="") -> "ModeMatrix":
        return cls(cap, {p: op(FockVector.basis(p)) for p in basis_upto(cap)},
                   label=label)

    def apply(self, v: FockVector) -> FockVector:
        out = FockVector.zero()
        for p, c in v.terms.items():
            if p not in self.action:
                raise KeyError(f"state of weight {weight_of(p)} beyond cap {self.cap}")
            out = out + self.action[p].scale(c)
        return out

    def compose(self, other: "ModeMatrix", label="") -> "ModeMatrix":
        """self after other, defined where other's images stay in self's cap."""
        return ModeMatrix(other.cap,
                          {p: self.apply(img) for p, img in other.action.items()},
                          label=label)

    def __add__(self, other):
        return ModeMatrix(min(self.cap, other.cap),
                          {p: self.action[p] + other.action[p]
                           for p in basis_upto(min(self.cap, other.cap))})

    def __sub__(self, other):
        return ModeMatrix(min(self.cap, other.cap),
                          {p: self.action[p] - other.action[p]
                           for p in basis_upto(min(self.cap, other.cap))})

    def scale(self, c) -> "ModeMatrix":
        return ModeMatrix(self.cap, {p: v.scale(c) for p, v in self.action.items()},
                          label=self.label)

    def commutator(self, other: "ModeMatrix") -> "ModeMatrix":
        cap = min(self.cap, other.cap)
        out = {}
        for p in basis_upto(cap):
            out[p] = self.apply(other.action[p]) - other.apply(self.action[p])
        return ModeMatrix(cap, out)

    def is_zero(self) -> bool:
        return all(not v for v in self.action.values())

    def __eq__(self, other):
        if not isinstance(other, ModeMatrix):
            return NotImplemented
        cap = min(self.cap, other.cap)
        return all(self.action[p] == other.action[p] for p in basis_upto(cap))

    def to_json(self):
        basis = basis_upto(self.cap)
        index = {p: i for i, p in enumerate(basis)}
        entries = []
        for p in basis:
            col = index[p]
            for q, c in sorted(self.action[p].terms.items()):
                entries.append({"row": index.get(q, f"beyond-cap:{' '.join(map(str, q))}"),
                                "col": col, "value": scalar_to_json(c)})
        return {"label": self.label, "cap": self.cap,
                "basis": [" ".join(map(str, p)) or "vac" for p in basis],
                "entries": entries}
