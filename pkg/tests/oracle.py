"""Brute-force reference exterior algebra for cross-checking the engine.

Deliberately naive: forms are dicts from sorted generator tuples to
Gaussian rationals stored as (Fraction, Fraction) pairs. Generator j-1 is
e^j and n+j-1 is ē^j, so a sorted tuple is already e^I ∧ ē^J. Nothing here
imports hermlab; the text converters at the bottom bridge to the engine.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import factorial

import sympy


class Q:
    """Gaussian rational re + i·im."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    def __add__(self, o):
        o = _q(o)
        return Q(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return Q(-self.re, -self.im)

    def __sub__(self, o):
        return self + (-_q(o))

    def __mul__(self, o):
        o = _q(o)
        return Q(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = _q(o)
        d = o.re * o.re + o.im * o.im
        return self * Q(o.re / d, -o.im / d)

    def conj(self):
        return Q(self.re, -self.im)

    def __eq__(self, o):
        o = _q(o)
        return self.re == o.re and self.im == o.im

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"Q({self.re}, {self.im})"


def _q(x) -> Q:
    return x if isinstance(x, Q) else Q(x)


I = Q(0, 1)


def _sort_sign(gens):
    """Sign of the permutation sorting ``gens``; 0 on a repeat."""
    gens = list(gens)
    if len(set(gens)) != len(gens):
        return 0, ()
    sign = 1
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            if gens[i] > gens[j]:
                sign = -sign
    return sign, tuple(sorted(gens))


def add_to(out: dict, mono, c):
    if not c:
        return
    v = out.get(mono, Q()) + c
    if v:
        out[mono] = v
    else:
        out.pop(mono, None)


def wedge(u: dict, v: dict) -> dict:
    out: dict = {}
    for a, x in u.items():
        for b, y in v.items():
            s, m = _sort_sign(a + b)
            if s:
                add_to(out, m, x * y * s)
    return out


def plus(*forms) -> dict:
    out: dict = {}
    for f in forms:
        for m, c in f.items():
            add_to(out, m, c)
    return out


def scale(u: dict, c) -> dict:
    return {m: x * c for m, x in u.items() if x * c}


class Algebra:
    def __init__(self, n: int):
        self.n = n
        self.gens = list(range(2 * n))
        self.basis = [m for k in range(2 * n + 1) for m in combinations(self.gens, k)]

    def hol(self, j):
        return {(j - 1,): Q(1)}

    def anti(self, j):
        return {(self.n + j - 1,): Q(1)}

    def bidegree(self, mono):
        p = sum(1 for g in mono if g < self.n)
        return p, len(mono) - p

    def conj(self, u: dict) -> dict:
        n = self.n
        out: dict = {}
        for m, c in u.items():
            s, mm = _sort_sign([g + n if g < n else g - n for g in m])
            add_to(out, mm, c.conj() * s)
        return out

    def top(self):
        return tuple(self.gens)


class LieTable:
    """d on generators, extended by the graded Leibniz rule."""

    def __init__(self, alg: Algebra, d_hol: dict):
        self.alg = alg
        self.table = {}
        for j in range(1, alg.n + 1):
            dj = d_hol.get(j, {})
            self.table[j - 1] = dj
            self.table[alg.n + j - 1] = alg.conj(dj)

    def d(self, u: dict) -> dict:
        out: dict = {}
        for m, c in u.items():
            for pos, g in enumerate(m):
                left = {m[:pos]: Q(1)}
                right = {m[pos + 1:]: Q(1)}
                term = wedge(wedge(left, self.table[g]), right)
                for mm, x in term.items():
                    add_to(out, mm, x * c * (-1) ** pos)
        return out

    def del_(self, u: dict) -> dict:
        out: dict = {}
        for m, c in u.items():
            p = self.alg.bidegree(m)[0]
            for mm, x in self.d({m: c}).items():
                if self.alg.bidegree(mm)[0] == p + 1:
                    add_to(out, mm, x)
        return out

    def delbar(self, u: dict) -> dict:
        return plus(self.d(u), scale(self.del_(u), -1))


class DiagMetric:
    """ω = i Σ a_j e^j ∧ ē^j with |e^j|² = 1/a_j; monomials are orthogonal."""

    def __init__(self, alg: Algebra, a):
        self.alg = alg
        self.a = [Fraction(x) for x in a]
        n = alg.n
        self.omega = {}
        for j in range(1, n + 1):
            add_to(self.omega, (j - 1, n + j - 1), I * self.a[j - 1])

    def weight(self, mono) -> Fraction:
        w = Fraction(1)
        for g in mono:
            w /= self.a[g % self.alg.n]
        return w

    def inner(self, u: dict, v: dict) -> Q:
        s = Q()
        for m, c in u.items():
            if m in v:
                s = s + c * v[m].conj() * self.weight(m)
        return s

    def raw_power(self, r: int) -> dict:
        out = {(): Q(1)}
        for _ in range(r):
            out = wedge(out, self.omega)
        return out

    def power(self, r: int) -> dict:
        return scale(self.raw_power(r), Fraction(1, factorial(r)))

    def L(self, u: dict, r: int = 1) -> dict:
        return wedge(self.raw_power(r), u)

    def Lambda(self, v: dict) -> dict:
        """Pointwise adjoint of L via the orthogonal-monomial weights."""
        out: dict = {}
        for m in self.alg.basis:
            image = self.L({m: Q(1)})
            s = Q()
            for mm, x in image.items():
                if mm in v:
                    s = s + v[mm] * x.conj() * self.weight(mm)
            add_to(out, m, s / self.weight(m))
        return out


def integrate(alg: Algebra, u: dict) -> Q:
    """Normalised so the identity-metric ω_n integrates to 1."""
    ref = DiagMetric(alg, [1] * alg.n).power(alg.n)[alg.top()]
    return u.get(alg.top(), Q()) / ref


def hodge_star(metric: DiagMetric, w: dict) -> dict:
    """Solve ∫ u ∧ ⋆w = ⟨u, w̄⟩ ∫ vol on every basis monomial u."""
    alg = metric.alg
    vol_top = metric.power(alg.n)[alg.top()]
    wbar = alg.conj(w)
    out: dict = {}
    for u in alg.basis:
        c = metric.inner({u: Q(1)}, wbar)
        if not c:
            continue
        comp = tuple(g for g in alg.gens if g not in u)
        s, _ = _sort_sign(u + comp)
        add_to(out, comp, c * vol_top * s)
    return out


def rank_of(columns, rows) -> int:
    """Exact rank of the matrix whose columns are forms, rows the listed monomials."""
    if not columns or not rows:
        return 0
    def entry(c: Q):
        return sympy.Rational(c.re.numerator, c.re.denominator) + sympy.I * sympy.Rational(c.im.numerator, c.im.denominator)

    return sympy.Matrix([[entry(col.get(r, Q())) for col in columns] for r in rows]).rank()


def betti(alg: Algebra, table: LieTable, k: int) -> int:
    def block(deg):
        return [m for m in alg.basis if len(m) == deg]

    src, tgt = block(k), block(k + 1)
    d_k = rank_of([table.d({m: Q(1)}) for m in src], tgt) if k < 2 * alg.n else 0
    d_km1 = rank_of([table.d({m: Q(1)}) for m in block(k - 1)], src) if k > 0 else 0
    return len(src) - d_k - d_km1


def two_form(alg: Algebra, coeff, hol, anti=()) -> dict:
    gens = [j - 1 for j in hol] + [alg.n + j - 1 for j in anti]
    s, m = _sort_sign(gens)
    return {m: Q(coeff) * s} if s else {}


# converters to and from the engine's textual serialisation


def to_text(alg: Algebra, u: dict) -> str:
    lines = []
    for m, c in u.items():
        hol = ",".join(str(g + 1) for g in m if g < alg.n)
        anti = ",".join(str(g - alg.n + 1) for g in m if g >= alg.n)
        lines.append(f"{hol}|{anti} : {c.re},{c.im}")
    return "\n".join(lines)


def from_text(alg: Algebra, text: str) -> dict:
    out: dict = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        label, _, value = line.partition(":")
        left, _, right = label.strip().partition("|")
        gens = [int(x) - 1 for x in left.split(",") if x.strip()] + [alg.n + int(x) - 1 for x in right.split(",") if x.strip()]
        re, im = value.strip().split(",")
        add_to(out, tuple(gens), Q(Fraction(re), Fraction(im)))
    return out


def random_form(alg: Algebra, rng, degree=None, density=0.5) -> dict:
    out: dict = {}
    for m in alg.basis:
        if degree is not None and len(m) != degree:
            continue
        if rng.random() < density:
            add_to(out, m, Q(Fraction(rng.randint(-5, 5), rng.randint(1, 4)), Fraction(rng.randint(-5, 5), rng.randint(1, 4))))
    return out


IWASAWA = {3: {(0, 1): Q(-1)}}
SL2C = {1: {(1, 2): Q(-1)}, 2: {(0, 2): Q(1)}, 3: {(0, 1): Q(-1)}}
KODAIRA = {2: {(0, 2): Q(1)}}


def _block(alg: Algebra, p: int, q: int):
    return [m for m in alg.basis if alg.bidegree(m) == (p, q)]


def _kernel_dim(alg: Algebra, maps, src) -> int:
    """dim of the common kernel of ``maps`` restricted to the monomials ``src``."""
    if not src:
        return 0
    images = []
    for m in src:
        col: dict = {}
        for tag, fn in enumerate(maps):
            for mm, c in fn({m: Q(1)}).items():
                col[(tag, mm)] = c
        images.append(col)
    rows = sorted({key for col in images for key in col})
    return len(src) - rank_of(images, rows)


def _image_rank(alg: Algebra, pieces, tgt) -> int:
    cols = [fn({m: Q(1)}) for fn, src in pieces for m in src]
    return rank_of(cols, tgt)


def dimension(alg: Algebra, table: LieTable, flavor: str, p: int, q: int) -> int:
    """Dolbeault, Bott-Chern or Aeppli dimension by rank-nullity."""
    n = alg.n
    d, db = table.del_, table.delbar
    ddb = lambda u: d(db(u))
    src = _block(alg, p, q)

    def blk(a, b):
        return _block(alg, a, b) if 0 <= a <= n and 0 <= b <= n else []

    if flavor == "DOL":
        return _kernel_dim(alg, [db], src) - _image_rank(alg, [(db, blk(p, q - 1))], src)
    if flavor == "BC":
        return _kernel_dim(alg, [d, db], src) - _image_rank(alg, [(ddb, blk(p - 1, q - 1))], src)
    if flavor == "A":
        return _kernel_dim(alg, [ddb], src) - _image_rank(alg, [(d, blk(p - 1, q)), (db, blk(p, q - 1))], src)
    raise ValueError(flavor)
