"""Bigraded exterior algebra over C^n with a fixed coframe e^1..e^n.

A basis element ``e^I ∧ ē^J`` is stored with the holomorphic indices first.
Basis elements are numbered in the canonical order ``(p+q, p, I, J)`` and all
multiplication signs are read off precomputed tables, one per dimension.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Tuple

from .scalars import (
    EXACT,
    FLOAT,
    FOURIER,
    FourierSum,
    GaussianRational,
    I_UNIT,
    ONE,
    RingMismatch,
    detect_ring,
    lift,
    magnitude,
    normalize,
    parse_scalar,
    ring_of,
    scalar_text,
)


class DimensionMismatch(ValueError):
    """Forms of different complex dimension were combined."""


class DegreeError(ValueError):
    """An operation received a form of the wrong degree."""


class BasisElement(NamedTuple):
    hol: Tuple[int, ...]
    antihol: Tuple[int, ...]

    @property
    def p(self) -> int:
        return len(self.hol)

    @property
    def q(self) -> int:
        return len(self.antihol)

    @property
    def degree(self) -> int:
        return len(self.hol) + len(self.antihol)

    def __str__(self):
        return ",".join(map(str, self.hol)) + "|" + ",".join(map(str, self.antihol))

    @classmethod
    def parse(cls, text: str) -> "BasisElement":
        left, sep, right = text.strip().partition("|")
        if not sep:
            raise ValueError(f"basis label {text!r} lacks '|'")
        hol = tuple(int(a) for a in left.split(",") if a.strip())
        anti = tuple(int(a) for a in right.split(",") if a.strip())
        return cls(hol, anti)


def _mask(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << (i - 1)
    return m


def _bits(mask: int) -> Tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def _merge_parity(left: int, right: int) -> int:
    """Parity of transpositions needed to sort the concatenation left+right."""
    parity = 0
    r = right
    while r:
        low = r & -r
        # elements of left greater than this element of right
        parity ^= bin(left & ~((low << 1) - 1)).count("1") & 1
        r ^= low
    return parity


class ExteriorAlgebra:
    """Basis tables for Λ^{•,•}(C^n)^*: ordering, wedge signs, conjugation."""

    def __init__(self, n: int):
        if not 1 <= n <= 4:
            raise ValueError("complex dimension must be between 1 and 4")
        self.n = n
        elems = []
        for p in range(n + 1):
            for q in range(n + 1):
                for hol in combinations(range(1, n + 1), p):
                    for anti in combinations(range(1, n + 1), q):
                        elems.append(BasisElement(hol, anti))
        elems.sort(key=lambda b: (b.degree, b.p, b.hol, b.antihol))
        self.basis: List[BasisElement] = elems
        self.dim = len(elems)
        self.masks = [(_mask(b.hol), _mask(b.antihol)) for b in elems]
        self.index: Dict[Tuple[int, int], int] = {m: i for i, m in enumerate(self.masks)}
        self.label_index: Dict[BasisElement, int] = {b: i for i, b in enumerate(elems)}
        self.degree = [b.degree for b in elems]
        self.bidegree = [(b.p, b.q) for b in elems]
        self.by_degree: Dict[int, List[int]] = {}
        self.by_bidegree: Dict[Tuple[int, int], List[int]] = {}
        for i, b in enumerate(elems):
            self.by_degree.setdefault(b.degree, []).append(i)
            self.by_bidegree.setdefault((b.p, b.q), []).append(i)
        full = (1 << n) - 1
        self.top = self.index[(full, full)]
        self.unit = self.index[(0, 0)]
        # wedge table packed as sign * (target + 1), 0 when the product vanishes
        table = []
        for (i1, j1) in self.masks:
            row = []
            for (i2, j2) in self.masks:
                if i1 & i2 or j1 & j2:
                    row.append(0)
                    continue
                parity = (bin(j1).count("1") * bin(i2).count("1")) & 1
                parity ^= _merge_parity(i1, i2) ^ _merge_parity(j1, j2)
                target = self.index[(i1 | i2, j1 | j2)] + 1
                row.append(-target if parity else target)
            table.append(row)
        self.wedge_table = table
        # conjugation: conj(e^I ∧ ē^J) = (-1)^{|I||J|} e^J ∧ ē^I
        self.conj = []
        for (im, jm) in self.masks:
            sign = -1 if (bin(im).count("1") * bin(jm).count("1")) & 1 else 1
            self.conj.append((sign, self.index[(jm, im)]))
        # complement c(b) with e_b ∧ e_c(b) = sign * top
        self.complement = []
        for i, (im, jm) in enumerate(self.masks):
            c = self.index[(full ^ im, full ^ jm)]
            packed = table[i][c]
            self.complement.append((1 if packed > 0 else -1, c))
        # top coefficient of the product of (i e^j ∧ ē^j), j = 1..n
        prod = {self.unit: ONE}
        for j in range(1, n + 1):
            factor = self.index[(1 << (j - 1), 1 << (j - 1))]
            nxt = {}
            for b, c in prod.items():
                packed = table[b][factor]
                nxt[abs(packed) - 1] = c * I_UNIT * (1 if packed > 0 else -1)
            prod = nxt
        self.sigma: GaussianRational = prod[self.top]

    def lookup(self, key) -> int:
        if isinstance(key, int):
            if not 0 <= key < self.dim:
                raise IndexError(key)
            return key
        if isinstance(key, str):
            key = BasisElement.parse(key)
        if isinstance(key, tuple) and not isinstance(key, BasisElement):
            key = BasisElement(tuple(key[0]), tuple(key[1]))
        idx = self.label_index.get(BasisElement(tuple(sorted(key.hol)), tuple(sorted(key.antihol))))
        if idx is None or len(set(key.hol)) != len(key.hol) or len(set(key.antihol)) != len(key.antihol):
            raise ValueError(f"{key} is not a basis element for n={self.n}")
        if tuple(sorted(key.hol)) != tuple(key.hol) or tuple(sorted(key.antihol)) != tuple(key.antihol):
            raise ValueError(f"{key}: indices must be strictly increasing")
        return idx


@lru_cache(maxsize=None)
def exterior_algebra(n: int) -> ExteriorAlgebra:
    return ExteriorAlgebra(n)


def accumulate(out: dict, idx: int, value) -> None:
    """Add ``value`` into ``out[idx]`` keeping the map free of zeros."""
    if not value:
        return
    cur = out.get(idx)
    if cur is None:
        out[idx] = value
    else:
        s = cur + value
        if s:
            out[idx] = s
        else:
            del out[idx]


def wedge_data(alg: ExteriorAlgebra, left: Mapping[int, object], right: Mapping[int, object]) -> dict:
    table = alg.wedge_table
    out: dict = {}
    for i, a in left.items():
        row = table[i]
        for j, b in right.items():
            packed = row[j]
            if packed:
                prod = a * b
                if packed > 0:
                    accumulate(out, packed - 1, prod)
                else:
                    accumulate(out, -packed - 1, -prod)
    return out


class Form:
    """A sparse differential form with coefficients in one ring."""

    __slots__ = ("alg", "ring", "data")

    def __init__(self, n: int, coeffs: Optional[Mapping] = None, ring: Optional[str] = None):
        alg = exterior_algebra(n)
        data: dict = {}
        seen = None
        for key, value in (coeffs or {}).items():
            value = normalize(value)
            r = ring_of(value)
            if seen is None:
                seen = r
            elif r != seen:
                raise RingMismatch("all coefficients of a form must share one ring")
            accumulate(data, alg.lookup(key), value)
        if ring is not None and seen is not None and seen != ring:
            raise RingMismatch(f"coefficients are {seen}, form declared {ring}")
        self.alg = alg
        self.ring = ring or seen or EXACT
        self.data = data

    @classmethod
    def from_data(cls, alg: ExteriorAlgebra, ring: str, data: dict) -> "Form":
        f = object.__new__(cls)
        f.alg = alg
        f.ring = ring
        f.data = data
        return f

    @classmethod
    def zero(cls, n: int, ring: str = EXACT) -> "Form":
        return cls.from_data(exterior_algebra(n), ring, {})

    @classmethod
    def one(cls, n: int, ring: str = EXACT) -> "Form":
        alg = exterior_algebra(n)
        return cls.from_data(alg, ring, {alg.unit: lift(ONE, ring) if ring != FOURIER else FourierSum.constant(1, n)})

    @property
    def n(self) -> int:
        return self.alg.n

    @property
    def coeffs(self) -> Dict[BasisElement, object]:
        return {self.alg.basis[i]: self.data[i] for i in sorted(self.data)}

    def items(self):
        return [(i, self.data[i]) for i in sorted(self.data)]

    # bookkeeping
    def degrees(self) -> List[int]:
        return sorted({self.alg.degree[i] for i in self.data})

    def bidegrees(self) -> List[Tuple[int, int]]:
        return sorted({self.alg.bidegree[i] for i in self.data})

    @property
    def degree(self) -> Optional[int]:
        """Pure degree, ``None`` for the zero form; DegreeError if mixed."""
        degs = self.degrees()
        if not degs:
            return None
        if len(degs) > 1:
            raise DegreeError(f"form has mixed degrees {degs}")
        return degs[0]

    def part(self, k: int) -> "Form":
        deg = self.alg.degree
        return Form.from_data(self.alg, self.ring, {i: c for i, c in self.data.items() if deg[i] == k})

    def component(self, p: int, q: int) -> "Form":
        bideg = self.alg.bidegree
        return Form.from_data(self.alg, self.ring, {i: c for i, c in self.data.items() if bideg[i] == (p, q)})

    def coefficient(self, key):
        return self.data.get(self.alg.lookup(key), lift(0, self.ring) if self.ring != FOURIER else FourierSum())

    # arithmetic
    def _same(self, other: "Form") -> None:
        if not isinstance(other, Form):
            raise TypeError(f"expected a Form, got {type(other).__name__}")
        if other.alg is not self.alg:
            raise DimensionMismatch(f"n={self.n} versus n={other.n}")
        if other.ring != self.ring and other.data and self.data:
            raise RingMismatch(f"{self.ring} form combined with {other.ring} form")

    def _ring_with(self, other: "Form") -> str:
        if not self.data:
            return other.ring
        return self.ring

    def __add__(self, other: "Form") -> "Form":
        self._same(other)
        out = dict(self.data)
        for i, c in other.data.items():
            accumulate(out, i, c)
        return Form.from_data(self.alg, self._ring_with(other), out)

    def __sub__(self, other: "Form") -> "Form":
        self._same(other)
        out = dict(self.data)
        for i, c in other.data.items():
            accumulate(out, i, -c)
        return Form.from_data(self.alg, self._ring_with(other), out)

    def __neg__(self) -> "Form":
        return Form.from_data(self.alg, self.ring, {i: -c for i, c in self.data.items()})

    def scale(self, c) -> "Form":
        c = normalize(c)
        if self.ring == EXACT and ring_of(c) != EXACT:
            raise RingMismatch("exact form scaled by a non-exact scalar")
        if self.ring == FLOAT and ring_of(c) == EXACT:
            raise RingMismatch("float form scaled by an exact scalar; promote explicitly")
        out = {}
        for i, v in self.data.items():
            accumulate(out, i, v * c)
        return Form.from_data(self.alg, self.ring, out)

    def __mul__(self, c) -> "Form":
        if isinstance(c, Form):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def wedge(self, other: "Form") -> "Form":
        self._same(other)
        return Form.from_data(self.alg, self._ring_with(other), wedge_data(self.alg, self.data, other.data))

    def conjugate(self) -> "Form":
        conj_table = self.alg.conj
        out = {}
        for i, c in self.data.items():
            sign, j = conj_table[i]
            cc = c.conjugate()
            out[j] = cc if sign > 0 else -cc
        return Form.from_data(self.alg, self.ring, out)

    def is_real(self) -> bool:
        return self.conjugate() == self

    def is_zero(self) -> bool:
        return not self.data

    def __bool__(self):
        return bool(self.data)

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        return self.alg is other.alg and self.data == other.data and (self.ring == other.ring or not self.data)

    __hash__ = None

    def max_abs(self) -> float:
        return max((magnitude(c) for c in self.data.values()), default=0.0)

    def map_coefficients(self, fn, ring: Optional[str] = None) -> "Form":
        out = {}
        for i, c in self.data.items():
            v = fn(c)
            if v:
                out[i] = v
        return Form.from_data(self.alg, ring or self.ring, out)

    def to_float(self) -> "Form":
        """Explicit promotion exact -> float."""
        if self.ring == FLOAT:
            return self
        if self.ring != EXACT:
            raise RingMismatch("only exact forms promote to float")
        return self.map_coefficients(complex, FLOAT)

    def to_fourier(self) -> "Form":
        """Explicit promotion of a constant form to Fourier coefficients."""
        if self.ring == FOURIER:
            return self
        n = self.n
        return self.map_coefficients(lambda c: FourierSum.constant(complex(c), n), FOURIER)

    # text format
    def serialize(self) -> str:
        basis = self.alg.basis
        return "\n".join(f"{basis[i]} : {scalar_text(c)}" for i, c in self.items())

    @classmethod
    def parse(cls, text: str, n: int, ring: Optional[str] = None) -> "Form":
        lines = [ln for ln in text.replace(";", "\n").splitlines() if ln.strip()]
        if ring is None:
            ring = EXACT
            for ln in lines:
                r = detect_ring(ln.partition(":")[2])
                if r == FOURIER or (r == FLOAT and ring == EXACT):
                    ring = r
        alg = exterior_algebra(n)
        data: dict = {}
        for ln in lines:
            label, sep, value = ln.partition(":")
            if not sep:
                raise ValueError(f"malformed form line {ln!r}")
            accumulate(data, alg.lookup(BasisElement.parse(label)), parse_scalar(value, ring))
        return cls.from_data(alg, ring, data)

    def __repr__(self):
        if not self.data:
            return f"Form(n={self.n}, 0)"
        return f"Form(n={self.n}, {self.serialize()!r})"


def wedge(u: Form, v: Form) -> Form:
    return u.wedge(v)


def conjugate(u: Form) -> Form:
    return u.conjugate()


def component(u: Form, p: int, q: int) -> Form:
    if not (0 <= p <= u.n and 0 <= q <= u.n):
        raise DegreeError(f"bidegree ({p},{q}) outside 0..{u.n}")
    return u.component(p, q)


def basis_form(n: int, hol=(), antihol=(), coeff=1) -> Form:
    """The monomial ``coeff * e^hol ∧ ē^antihol`` (indices sorted with sign)."""
    alg = exterior_algebra(n)
    data = {alg.unit: normalize(coeff)}
    ring = ring_of(data[alg.unit])
    for i in hol:
        data = wedge_data(alg, data, {alg.index[(1 << (i - 1), 0)]: lift(1, ring)})
    for j in antihol:
        data = wedge_data(alg, data, {alg.index[(0, 1 << (j - 1))]: lift(1, ring)})
    return Form.from_data(alg, ring, data)


def e(n: int, j: int) -> Form:
    return basis_form(n, (j,), ())


def ebar(n: int, j: int) -> Form:
    return basis_form(n, (), (j,))


__all__ = [
    "BasisElement",
    "DegreeError",
    "DimensionMismatch",
    "ExteriorAlgebra",
    "Form",
    "accumulate",
    "basis_form",
    "component",
    "conjugate",
    "e",
    "ebar",
    "exterior_algebra",
    "wedge",
    "wedge_data",
    "EXACT",
    "FLOAT",
    "FOURIER",
]
