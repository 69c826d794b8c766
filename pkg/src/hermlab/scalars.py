"""Coefficient rings: exact Gaussian rationals, complex floats and Fourier sums.

Three rings are supported and they never mix implicitly:

* ``exact``   -- :class:`GaussianRational`, backed by ``gmpy2.mpq``
* ``float``   -- Python ``complex``
* ``fourier`` -- :class:`FourierSum`, a finite trigonometric polynomial with
  complex-float coefficients

Python ints are accepted wherever an exact scalar is expected.  Promotion from
exact to float is always explicit (:func:`to_complex`).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Tuple, Union

from gmpy2 import mpq

EXACT = "exact"
FLOAT = "float"
FOURIER = "fourier"
RINGS = (EXACT, FLOAT, FOURIER)


class RingMismatch(TypeError):
    """Raised when scalars from two different coefficient rings are combined."""


class DivisionByZero(ZeroDivisionError):
    """Raised when inverting an exact or float zero."""


def _to_mpq(value) -> mpq:
    if isinstance(value, (int, Fraction)) or type(value).__name__ == "mpq":
        return mpq(value)
    if isinstance(value, str):
        return mpq(value.strip())
    if type(value).__name__ == "mpz":
        return mpq(value)
    raise RingMismatch(f"cannot build an exact rational from {value!r}")


_new = object.__new__


class GaussianRational:
    """An element ``re + i*im`` of Q(i) with exact arithmetic."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _to_mpq(re)
        self.im = _to_mpq(im)

    # fast internal constructor; arguments must already be mpq
    @staticmethod
    def _mk(re, im) -> "GaussianRational":
        g = _new(GaussianRational)
        g.re = re
        g.im = im
        return g

    @classmethod
    def parse(cls, text: str) -> "GaussianRational":
        """Parse ``"re,im"`` or a lone rational such as ``"3/7"``."""
        parts = text.split(",")
        if len(parts) == 1:
            return cls(parts[0], 0)
        if len(parts) == 2:
            return cls(parts[0], parts[1])
        raise ValueError(f"malformed Gaussian rational {text!r}")

    # coercion
    @staticmethod
    def _coerce(other):
        if type(other) is GaussianRational:
            return other
        if isinstance(other, int) or type(other).__name__ in ("mpq", "mpz") or isinstance(other, Fraction):
            return GaussianRational._mk(mpq(other), _ZQ)
        if isinstance(other, (float, complex, FourierSum)):
            raise RingMismatch(f"exact scalar combined with {type(other).__name__}")
        return None

    def __add__(self, other):
        o = other if type(other) is GaussianRational else self._coerce(other)
        if o is None:
            return NotImplemented
        return _mk(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = other if type(other) is GaussianRational else self._coerce(other)
        if o is None:
            return NotImplemented
        return _mk(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return _mk(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = other if type(other) is GaussianRational else self._coerce(other)
        if o is None:
            return NotImplemented
        a, b, c, d = self.re, self.im, o.re, o.im
        if not b and not d:
            return _mk(a * c, _ZQ)
        return _mk(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        den = self.re * self.re + self.im * self.im
        if not den:
            raise DivisionByZero("inverse of exact zero")
        return _mk(self.re / den, -self.im / den)

    def __truediv__(self, other):
        o = other if type(other) is GaussianRational else self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __neg__(self):
        return _mk(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        base = self if exponent >= 0 else self.inverse()
        result = ONE
        for _ in range(abs(exponent)):
            result = result * base
        return result

    def conjugate(self) -> "GaussianRational":
        return _mk(self.re, -self.im)

    def norm2(self) -> mpq:
        """Squared modulus, an exact non-negative rational."""
        return self.re * self.re + self.im * self.im

    def is_real(self) -> bool:
        return not self.im

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if type(other) is GaussianRational:
            return self.re == other.re and self.im == other.im
        if isinstance(other, int) or isinstance(other, Fraction) or type(other).__name__ == "mpq":
            return not self.im and self.re == other
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __abs__(self) -> float:
        return abs(complex(self))

    def text(self) -> str:
        """Canonical ``re,im`` text used by form serialization."""
        return f"{_rat_text(self.re)},{_rat_text(self.im)}"

    def __repr__(self):
        return f"GaussianRational({_rat_text(self.re)!r}, {_rat_text(self.im)!r})"

    def __str__(self):
        if not self.im:
            return _rat_text(self.re)
        if not self.re:
            return f"{_rat_text(self.im)}i"
        sign = "+" if self.im > 0 else "-"
        return f"{_rat_text(self.re)}{sign}{_rat_text(abs(self.im))}i"


_mk = GaussianRational._mk
_ZQ = mpq(0)
ZERO = GaussianRational(0, 0)
ONE = GaussianRational(1, 0)
I_UNIT = GaussianRational(0, 1)


def _rat_text(q: mpq) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def gr(value) -> GaussianRational:
    """Build a Gaussian rational from an int, rational, string or pair."""
    if type(value) is GaussianRational:
        return value
    if isinstance(value, tuple):
        return GaussianRational(*value)
    if isinstance(value, str):
        return GaussianRational.parse(value)
    return GaussianRational(value, 0)


Frequency = Tuple[int, ...]


class FourierSum:
    """Finite sum ``sum_k c_k exp(2 pi i <k, x>)`` over frequencies k in Z^(2n).

    A frequency vector is ordered ``(kx_1..kx_n, ky_1..ky_n)`` where
    ``z_j = x_j + i y_j``.  Coefficients are Python complex numbers.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Dict[Frequency, complex] | None = None):
        clean = {}
        if terms:
            for freq, value in terms.items():
                if isinstance(value, GaussianRational):
                    raise RingMismatch("FourierSum coefficients are complex floats")
                value = complex(value)
                if value:
                    clean[tuple(int(k) for k in freq)] = value
        self.terms = clean

    @staticmethod
    def _raw(terms: Dict[Frequency, complex]) -> "FourierSum":
        f = _new(FourierSum)
        f.terms = terms
        return f

    @classmethod
    def constant(cls, value: complex, n: int) -> "FourierSum":
        return cls({(0,) * (2 * n): value})

    def support(self) -> Iterable[Frequency]:
        return self.terms.keys()

    def constant_term(self, n: int) -> complex:
        return self.terms.get((0,) * (2 * n), 0j)

    def __bool__(self):
        return bool(self.terms)

    def _check(self, other):
        if isinstance(other, GaussianRational):
            raise RingMismatch("FourierSum combined with an exact scalar")

    def __add__(self, other):
        if type(other) is FourierSum:
            out = dict(self.terms)
            for k, v in other.terms.items():
                s = out.get(k, 0j) + v
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
            return FourierSum._raw(out)
        self._check(other)
        if isinstance(other, int) and other == 0:
            return self
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return FourierSum._raw({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        if type(other) is FourierSum:
            return self + (-other)
        self._check(other)
        return NotImplemented

    def __mul__(self, other):
        if type(other) is FourierSum:
            out: Dict[Frequency, complex] = {}
            for k1, v1 in self.terms.items():
                for k2, v2 in other.terms.items():
                    k = tuple(a + b for a, b in zip(k1, k2))
                    out[k] = out.get(k, 0j) + v1 * v2
            return FourierSum._raw({k: v for k, v in out.items() if v})
        self._check(other)
        if isinstance(other, (int, float, complex)):
            if not other:
                return FourierSum._raw({})
            return FourierSum._raw({k: v * other for k, v in self.terms.items()})
        return NotImplemented

    __rmul__ = __mul__

    def conjugate(self) -> "FourierSum":
        return FourierSum._raw({tuple(-a for a in k): v.conjugate() for k, v in self.terms.items()})

    def max_abs(self) -> float:
        return max((abs(v) for v in self.terms.values()), default=0.0)

    def __eq__(self, other):
        if type(other) is FourierSum:
            return self.terms == other.terms
        return NotImplemented

    __hash__ = None

    def text(self) -> str:
        items = sorted(self.terms.items())
        return " ".join(
            "[" + ",".join(str(a) for a in k) + "]=" + _float_text(v) for k, v in items
        )

    @classmethod
    def parse(cls, text: str) -> "FourierSum":
        terms = {}
        for chunk in text.split():
            head, _, value = chunk.partition("=")
            freq = tuple(int(a) for a in head.strip("[]").split(","))
            terms[freq] = _parse_float_pair(value)
        return cls(terms)

    def __repr__(self):
        return f"FourierSum({self.terms!r})"


def _float_text(value: complex) -> str:
    return f"{float(value.real)!r},{float(value.imag)!r}"


def _parse_float_pair(text: str) -> complex:
    re_text, _, im_text = text.partition(",")
    return complex(float(re_text), float(im_text or "0"))


Scalar = Union[GaussianRational, complex, FourierSum]


def ring_of(value) -> str:
    """Coefficient ring tag of a scalar."""
    if type(value) is GaussianRational or isinstance(value, int):
        return EXACT
    if isinstance(value, (complex, float)):
        return FLOAT
    if type(value) is FourierSum:
        return FOURIER
    raise RingMismatch(f"not a scalar: {value!r}")


def normalize(value):
    """Turn ints into Gaussian rationals and floats into complex numbers."""
    if isinstance(value, bool):
        raise RingMismatch("booleans are not scalars")
    if isinstance(value, int) or isinstance(value, Fraction) or type(value).__name__ == "mpq":
        return GaussianRational._mk(mpq(value), _ZQ)
    if isinstance(value, float):
        return complex(value)
    return value


def lift(value, ring: str):
    """Map a constant (exact or float) into the scalar action of ``ring``.

    Exact constants stay exact in the exact ring; in the float and Fourier rings
    they act as complex numbers.
    """
    if ring == EXACT:
        if type(value) is GaussianRational:
            return value
        if isinstance(value, int):
            return GaussianRational(value)
        raise RingMismatch(f"cannot use {value!r} as an exact constant")
    if type(value) is GaussianRational:
        return complex(value)
    if isinstance(value, (int, float, complex)):
        return complex(value)
    raise RingMismatch(f"cannot use {value!r} as a constant in ring {ring}")


def to_complex(value) -> complex:
    """Explicit promotion of an exact or float scalar to ``complex``."""
    if type(value) is FourierSum:
        raise RingMismatch("FourierSum is not a constant")
    return complex(value)


def conj(value):
    if isinstance(value, (int, float)):
        return value
    return value.conjugate()


def magnitude(value) -> float:
    """Largest absolute coefficient, used for residual reporting."""
    if type(value) is FourierSum:
        return value.max_abs()
    return abs(complex(value))


def scalar_text(value) -> str:
    if type(value) is GaussianRational:
        return value.text()
    if type(value) is FourierSum:
        return value.text()
    return _float_text(complex(value))


def parse_scalar(text: str, ring: str):
    text = text.strip()
    if ring == EXACT:
        return GaussianRational.parse(text)
    if ring == FLOAT:
        return _parse_float_pair(text)
    return FourierSum.parse(text)


def detect_ring(text: str) -> str:
    if "[" in text:
        return FOURIER
    if any(ch in text for ch in ".eEn"):
        return FLOAT
    return EXACT
