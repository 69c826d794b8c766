"""Finite-dimensional models of compact complex manifolds.

``LieModel`` is the complex of left-invariant forms of a Lie group with a
left-invariant complex structure, given by the differentials of the coframe.
``TorusModel`` is the flat torus C^n / (Z^n + iZ^n) with Fourier-truncated
coefficients.  Both expose ``d``, ``del_``, ``delbar`` and ``integrate``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .forms import BasisElement, DegreeError, Form, accumulate, basis_form, exterior_algebra, wedge_data
from .scalars import (
    EXACT,
    FLOAT,
    FOURIER,
    ONE,
    ZERO,
    FourierSum,
    GaussianRational,
    gr,
    lift,
)


class ModelMismatch(ValueError):
    """A form does not belong to the model (dimension, ring or support)."""


class ManifestError(ValueError):
    """A model manifest could not be parsed."""


@dataclass
class ValidationReport:
    model: str
    ok: bool
    checks: List[Tuple[str, bool]] = field(default_factory=list)
    failure: Optional[Dict[str, str]] = None

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "ok": self.ok,
            "checks": [{"name": n, "passed": p} for n, p in self.checks],
            "failure": self.failure,
        }


def _gen_index(alg, k: int, bar: bool) -> int:
    return alg.index[(0, 1 << (k - 1))] if bar else alg.index[(1 << (k - 1), 0)]


def _gen_label(k: int, bar: bool) -> str:
    return f"ebar{k}" if bar else f"e{k}"


class LieModel:
    """Invariant complex of a Lie algebra with integrable complex structure."""

    kind = "lie"

    def __init__(
        self,
        name: str,
        n: int,
        differentials: Mapping[int, Form],
        volume=1,
        metrics: Optional[Mapping[str, object]] = None,
        antiholomorphic: Optional[Mapping[int, Form]] = None,
        ring: str = EXACT,
        default_metrics: Optional[Sequence[str]] = None,
    ):
        self.name = name
        self.n = n
        self.alg = exterior_algebra(n)
        self.ring = ring
        zero = Form.zero(n, ring)
        self.d_hol: Dict[int, Form] = {}
        self.d_anti: Dict[int, Form] = {}
        for k in range(1, n + 1):
            f = differentials.get(k, zero)
            if f.n != n:
                raise ManifestError(f"differential of e{k} has dimension {f.n}, expected {n}")
            self.d_hol[k] = f
            if antiholomorphic and k in antiholomorphic:
                self.d_anti[k] = antiholomorphic[k]
            else:
                self.d_anti[k] = f.conjugate()
        self.volume = lift(volume, ring) if ring == EXACT else complex(volume)
        self.metric_specs: Dict[str, object] = dict(metrics or {})
        self.default_metrics = list(default_metrics) if default_metrics is not None else list(self.metric_specs)
        self._tables = None
        self._cache: dict = {}

    # differentials on basis elements
    def _build_tables(self):
        alg = self.alg
        gens = {}
        for k in range(1, self.n + 1):
            gens[_gen_index(alg, k, False)] = self.d_hol[k].data
            gens[_gen_index(alg, k, True)] = self.d_anti[k].data
        one = lift(ONE, self.ring)
        d_cols: List[dict] = [dict() for _ in range(alg.dim)]
        for idx in range(alg.dim):
            im, jm = alg.masks[idx]
            if not im and not jm:
                continue
            if im:
                low = im & -im
                first = alg.index[(low, 0)]
                rest = alg.index[(im ^ low, jm)]
            else:
                low = jm & -jm
                first = alg.index[(0, low)]
                rest = alg.index[(0, jm ^ low)]
            out = wedge_data(alg, gens[first], {rest: one})
            tail = wedge_data(alg, {first: one}, d_cols[rest])
            for i, c in tail.items():
                accumulate(out, i, -c)
            d_cols[idx] = out
        del_cols, delbar_cols = [], []
        for idx in range(alg.dim):
            p, q = alg.bidegree[idx]
            col = d_cols[idx]
            del_cols.append({i: c for i, c in col.items() if alg.bidegree[i] == (p + 1, q)})
            delbar_cols.append({i: c for i, c in col.items() if alg.bidegree[i] == (p, q + 1)})
        self._tables = (d_cols, del_cols, delbar_cols)

    @property
    def d_columns(self) -> List[dict]:
        if self._tables is None:
            self._build_tables()
        return self._tables[0]

    @property
    def del_columns(self) -> List[dict]:
        if self._tables is None:
            self._build_tables()
        return self._tables[1]

    @property
    def delbar_columns(self) -> List[dict]:
        if self._tables is None:
            self._build_tables()
        return self._tables[2]

    def check_form(self, u: Form) -> None:
        if not isinstance(u, Form):
            raise ModelMismatch(f"expected a Form, got {type(u).__name__}")
        if u.n != self.n:
            raise ModelMismatch(f"form has n={u.n}, model {self.name} has n={self.n}")
        if u.data and u.ring != self.ring:
            raise ModelMismatch(f"form ring {u.ring} differs from model ring {self.ring}")

    def _apply(self, cols: List[dict], u: Form) -> Form:
        self.check_form(u)
        out: dict = {}
        for j, c in u.data.items():
            for i, a in cols[j].items():
                accumulate(out, i, a * c)
        return Form.from_data(self.alg, self.ring, out)

    def d(self, u: Form) -> Form:
        return self._apply(self.d_columns, u)

    def del_(self, u: Form) -> Form:
        return self._apply(self.del_columns, u)

    def delbar(self, u: Form) -> Form:
        return self._apply(self.delbar_columns, u)

    def generator(self, k: int, bar: bool = False) -> Form:
        return Form.from_data(self.alg, self.ring, {_gen_index(self.alg, k, bar): lift(ONE, self.ring)})

    def integrate(self, u: Form):
        self.check_form(u)
        degs = u.degrees()
        if degs and degs != [2 * self.n]:
            raise DegreeError(f"integrate needs a {2 * self.n}-form, got degrees {degs}")
        top = u.data.get(self.alg.top)
        if top is None:
            return lift(ZERO, self.ring)
        return top / lift(self.alg.sigma, self.ring) * self.volume

    def as_float(self) -> "LieModel":
        """The same structure constants over complex floats."""
        if self.ring == FLOAT:
            return self
        key = ("as_float",)
        if key not in self._cache:
            self._cache[key] = LieModel(
                self.name,
                self.n,
                {k: f.to_float() for k, f in self.d_hol.items()},
                volume=complex(self.volume),
                metrics=self.metric_specs,
                antiholomorphic={k: f.to_float() for k, f in self.d_anti.items()},
                ring=FLOAT,
                default_metrics=self.default_metrics,
            )
        return self._cache[key]

    def change_coframe(self, frame: "CoframeChange") -> "LieModel":
        """The same Lie algebra written in the coframe ``f = P e``."""
        new_d = {}
        for l in range(1, self.n + 1):
            acc = Form.zero(self.n, self.ring)
            for j in range(1, self.n + 1):
                c = frame.P[l - 1][j - 1]
                if c:
                    acc = acc + self.d_hol[j].scale(c)
            new_d[l] = frame.forward(acc)
        return LieModel(f"{self.name}[frame]", self.n, new_d, volume=self.volume, ring=self.ring)

    def key(self) -> tuple:
        return (self.name, self.n, tuple((k, f.serialize()) for k, f in sorted(self.d_hol.items())))

    def __repr__(self):
        return f"LieModel({self.name!r}, n={self.n})"


def validate_model(model) -> ValidationReport:
    """Check every structural invariant; never raises."""
    if isinstance(model, TorusModel):
        return model.validate()
    try:
        return _validate_lie(model)
    except Exception as exc:  # malformed input is reported, not raised
        return ValidationReport(getattr(model, "name", "?"), False, [("construction", False)], {"check": "construction", "detail": str(exc)})


def _validate_lie(m: LieModel) -> ValidationReport:
    checks: List[Tuple[str, bool]] = []
    alg = m.alg
    gens = [(k, bar) for k in range(1, m.n + 1) for bar in (False, True)]

    def fail(name, witness, detail=""):
        checks.append((name, False))
        return ValidationReport(m.name, False, checks, {"check": name, "generator": witness, "detail": detail})

    def gen_form(k, bar):
        return m.generator(k, bar)

    def gen_d(k, bar):
        return m.d_anti[k] if bar else m.d_hol[k]

    for k, bar in gens:
        f = gen_d(k, bar)
        if f.degrees() not in ([], [2]):
            return fail("degree", _gen_label(k, bar), f"differential has degrees {f.degrees()}")
    checks.append(("degree", True))

    for k in range(1, m.n + 1):
        if m.d_anti[k] != m.d_hol[k].conjugate():
            return fail("conjugation", _gen_label(k, True), "d(conj e) differs from conj(d e)")
    checks.append(("conjugation", True))

    for k, bar in gens:
        bad = (2, 0) if bar else (0, 2)
        if gen_d(k, bar).component(*bad):
            return fail("integrability", _gen_label(k, bar), f"differential has a {bad} part")
    checks.append(("integrability", True))

    for k, bar in gens:
        if m.d(gen_d(k, bar)):
            return fail("d_squared", _gen_label(k, bar), "d(d x) = " + m.d(gen_d(k, bar)).serialize().replace("\n", "; "))
    checks.append(("d_squared", True))

    for name, fn in (
        ("del_squared", lambda x: m.del_(m.del_(x))),
        ("delbar_squared", lambda x: m.delbar(m.delbar(x))),
        ("del_delbar_anticommute", lambda x: m.del_(m.delbar(x)) + m.delbar(m.del_(x))),
    ):
        for k, bar in gens:
            if fn(gen_form(k, bar)):
                return fail(name, _gen_label(k, bar))
        checks.append((name, True))

    for idx in range(alg.dim):
        b = Form.from_data(alg, m.ring, {idx: lift(ONE, m.ring)})
        if m.d(b.conjugate()) != m.d(b).conjugate():
            return fail("conjugation_all", str(alg.basis[idx]))
    checks.append(("conjugation_all", True))

    for idx in alg.by_degree[2 * m.n - 1]:
        b = Form.from_data(alg, m.ring, {idx: lift(ONE, m.ring)})
        if m.integrate(m.d(b)):
            return fail("stokes", str(alg.basis[idx]), "integral of an exact top form is nonzero (algebra not unimodular)")
    checks.append(("stokes", True))
    return ValidationReport(m.name, True, checks, None)


class CoframeChange:
    """Exact linear change of coframe ``f^l = sum_j P[l][j] e^j``.

    ``forward`` rewrites a form given in the e-coframe in terms of f, and
    ``backward`` is its inverse.  Both are algebra automorphisms commuting with
    conjugation.
    """

    def __init__(self, n: int, P: Sequence[Sequence[GaussianRational]]):
        from .linalg import solve

        self.n = n
        self.P = [[gr(x) for x in row] for row in P]
        cols = []
        for j in range(n):
            rhs = [ONE if i == j else ZERO for i in range(n)]
            res = solve(self.P, n, rhs)
            if not res.ok:
                raise ValueError("coframe change is singular")
            cols.append(res.solution)
        # Q = P^{-1}; cols[j] is column j of Q
        self.Q = [[cols[j][i] for j in range(n)] for i in range(n)]
        self.alg = exterior_algebra(n)
        self._fwd = self._substitution(self.Q)
        self._bwd = self._substitution(self.P)

    def _substitution(self, M) -> List[dict]:
        """Images of basis elements under e^j -> sum_l M[j][l] f^l."""
        alg = self.alg
        n = self.n
        hol_img = {}
        anti_img = {}
        for j in range(1, n + 1):
            hol_img[j] = {alg.index[(1 << (l - 1), 0)]: M[j - 1][l - 1] for l in range(1, n + 1) if M[j - 1][l - 1]}
            anti_img[j] = {alg.index[(0, 1 << (l - 1))]: M[j - 1][l - 1].conjugate() for l in range(1, n + 1) if M[j - 1][l - 1]}
        images = []
        for b in alg.basis:
            data = {alg.unit: ONE}
            for j in b.hol:
                data = wedge_data(alg, data, hol_img[j])
            for j in b.antihol:
                data = wedge_data(alg, data, anti_img[j])
            images.append(data)
        return images

    @staticmethod
    def _run(table: List[dict], u: Form) -> Form:
        out: dict = {}
        for j, c in u.data.items():
            for i, a in table[j].items():
                accumulate(out, i, (a if u.ring == EXACT else complex(a)) * c)
        return Form.from_data(u.alg, u.ring, out)

    def forward(self, u: Form) -> Form:
        return self._run(self._fwd, u)

    def backward(self, u: Form) -> Form:
        return self._run(self._bwd, u)

    @property
    def forward_columns(self) -> List[dict]:
        return self._fwd

    @property
    def backward_columns(self) -> List[dict]:
        return self._bwd


# ---------------------------------------------------------------- Fourier torus


class TorusModel:
    """Flat torus with coordinates z_j = x_j + i y_j, x, y in R/Z, coframe dz_j.

    A frequency ``k = (kx_1..kx_n, ky_1..ky_n)`` labels exp(2 pi i (kx.x + ky.y)).
    """

    kind = "fourier"
    ring = FOURIER

    def __init__(self, name: str = "ftorus2", n: int = 2, cutoff: int = 2, metrics=None, default_metrics=None):
        self.name = name
        self.n = n
        self.cutoff = cutoff
        self.alg = exterior_algebra(n)
        self.volume = 1.0
        self.metric_specs: Dict[str, object] = dict(metrics or {})
        self.default_metrics = list(default_metrics) if default_metrics is not None else list(self.metric_specs)
        self._cache: dict = {}

    def frequencies(self) -> List[Tuple[int, ...]]:
        rng = range(-self.cutoff, self.cutoff + 1)
        return [tuple(k) for k in product(rng, repeat=2 * self.n)]

    def del_factor(self, freq, j: int) -> complex:
        kx, ky = freq[j - 1], freq[self.n + j - 1]
        return math.pi * 1j * complex(kx, -ky)

    def delbar_factor(self, freq, j: int) -> complex:
        kx, ky = freq[j - 1], freq[self.n + j - 1]
        return math.pi * 1j * complex(kx, ky)

    def _check_shape(self, u: Form) -> None:
        if not isinstance(u, Form):
            raise ModelMismatch(f"expected a Form, got {type(u).__name__}")
        if u.n != self.n:
            raise ModelMismatch(f"form has n={u.n}, model {self.name} has n={self.n}")
        if u.data and u.ring != FOURIER:
            raise ModelMismatch("torus forms need Fourier coefficients; promote with to_fourier()")

    def check_form(self, u: Form) -> None:
        self._check_shape(u)
        for c in u.data.values():
            for k in c.support():
                if max(abs(a) for a in k) > self.cutoff:
                    raise ModelMismatch(f"frequency {k} exceeds cutoff {self.cutoff}")

    def _derive(self, u: Form, factor, bar: bool) -> Form:
        self.check_form(u)
        alg = self.alg
        table = alg.wedge_table
        out: dict = {}
        for j in range(1, self.n + 1):
            g = alg.index[(0, 1 << (j - 1))] if bar else alg.index[(1 << (j - 1), 0)]
            row = table[g]
            for idx, c in u.data.items():
                packed = row[idx]
                if not packed:
                    continue
                terms = {}
                for k, v in c.terms.items():
                    w = factor(k, j) * v
                    if w:
                        terms[k] = w
                if not terms:
                    continue
                val = FourierSum._raw(terms)
                if packed > 0:
                    accumulate(out, packed - 1, val)
                else:
                    accumulate(out, -packed - 1, -val)
        return Form.from_data(alg, FOURIER, out)

    def del_(self, u: Form) -> Form:
        return self._derive(u, self.del_factor, False)

    def delbar(self, u: Form) -> Form:
        return self._derive(u, self.delbar_factor, True)

    def d(self, u: Form) -> Form:
        return self.del_(u) + self.delbar(u)

    def integrate(self, u: Form) -> complex:
        # products of in-range forms may exceed the cutoff; only the constant term matters
        self._check_shape(u)
        degs = u.degrees()
        if degs and degs != [2 * self.n]:
            raise DegreeError(f"integrate needs a {2 * self.n}-form, got degrees {degs}")
        top = u.data.get(self.alg.top)
        if top is None:
            return 0j
        return top.constant_term(self.n) / complex(self.alg.sigma) * self.volume

    def validate(self) -> ValidationReport:
        checks = []
        rng = np.random.default_rng(0)
        n = self.n
        ok = True
        # d^2 = 0, del^2 = 0, delbar^2 = 0, anticommutation on random 1-forms
        for trial in range(5):
            u = random_fourier_form(self, rng, degree=1, terms=3)
            for name, val in (
                ("d_squared", self.d(self.d(u))),
                ("del_squared", self.del_(self.del_(u))),
                ("delbar_squared", self.delbar(self.delbar(u))),
                ("del_delbar_anticommute", self.del_(self.delbar(u)) + self.delbar(self.del_(u))),
            ):
                if val.max_abs() > 1e-9 * max(1.0, u.max_abs()) * (2 * math.pi * self.cutoff) ** 2:
                    ok = False
                    checks.append((name, False))
                    return ValidationReport(self.name, False, checks, {"check": name, "generator": "random 1-form"})
        checks.extend((c, True) for c in ("d_squared", "del_squared", "delbar_squared", "del_delbar_anticommute"))
        u = random_fourier_form(self, rng, degree=2 * n - 1, terms=3)
        stokes = abs(self.integrate(self.d(u)))
        checks.append(("stokes", stokes < 1e-12))
        ok = ok and stokes < 1e-12
        return ValidationReport(self.name, ok, checks, None if ok else {"check": "stokes", "generator": "random form"})

    def key(self) -> tuple:
        return (self.name, self.n, self.cutoff)

    def __repr__(self):
        return f"TorusModel({self.name!r}, n={self.n}, cutoff={self.cutoff})"


def random_fourier_form(model: TorusModel, rng, degree=None, bidegree=None, terms: int = 3) -> Form:
    """Random form whose coefficients are short Fourier sums within the cutoff."""
    alg = model.alg
    if bidegree is not None:
        idxs = alg.by_bidegree[tuple(bidegree)]
    elif degree is not None:
        idxs = alg.by_degree[degree]
    else:
        idxs = range(alg.dim)
    freqs = model.frequencies()
    data = {}
    for idx in idxs:
        t = {}
        for _ in range(terms):
            k = freqs[int(rng.integers(len(freqs)))]
            t[k] = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        data[idx] = FourierSum(t)
    return Form.from_data(alg, FOURIER, {i: c for i, c in data.items() if c})


def evaluate_fourier(f: FourierSum, n: int, points: np.ndarray) -> np.ndarray:
    """Evaluate at an array of points of shape (..., 2n) ordered (x, y)."""
    out = np.zeros(points.shape[:-1], dtype=complex)
    for k, v in f.terms.items():
        out += v * np.exp(2j * math.pi * (points @ np.array(k, dtype=float)))
    return out


def _central_weights(m: int) -> List[float]:
    # first-derivative central difference weights of order 2m
    fact = math.factorial
    return [(-1) ** (j + 1) * fact(m) ** 2 / (j * fact(m - j) * fact(m + j)) for j in range(1, m + 1)]


def finite_difference_delbar(model: TorusModel, f: FourierSum, j: int, grid: int = 32, order: int = 12, base=None) -> float:
    """Max deviation between spectral ∂/∂z̄_j f and a periodic finite difference.

    Samples f on a grid x grid lattice in the (x_j, y_j) plane with the other
    coordinates fixed at ``base`` and applies a central stencil of the given
    even order in each direction.
    """
    n = model.n
    base = np.zeros(2 * n) if base is None else np.asarray(base, dtype=float)
    h = 1.0 / grid
    s = np.arange(grid) * h
    X, Y = np.meshgrid(s, s, indexing="ij")
    pts = np.broadcast_to(base, X.shape + (2 * n,)).copy()
    pts[..., j - 1] = X
    pts[..., n + j - 1] = Y
    values = evaluate_fourier(f, n, pts)
    weights = _central_weights(order // 2)
    fx = np.zeros_like(values)
    fy = np.zeros_like(values)
    for step, w in enumerate(weights, start=1):
        fx += w * (np.roll(values, -step, axis=0) - np.roll(values, step, axis=0))
        fy += w * (np.roll(values, -step, axis=1) - np.roll(values, step, axis=1))
    fd = 0.5 * (fx / h + 1j * fy / h)
    alg = model.alg
    zero_form = Form.from_data(alg, FOURIER, {alg.unit: f})
    spectral = model.delbar(zero_form).data.get(alg.index[(0, 1 << (j - 1))], FourierSum())
    exact = evaluate_fourier(spectral, n, pts)
    return float(np.max(np.abs(fd - exact)))


# ---------------------------------------------------------------- catalog


def _two_form(n: int, terms: Sequence[Tuple[object, Tuple[int, ...], Tuple[int, ...]]]) -> Form:
    acc = Form.zero(n)
    for coeff, hol, anti in terms:
        acc = acc + basis_form(n, hol, anti, gr(coeff))
    return acc


def _diag(*entries) -> dict:
    return {"diag": [str(e) for e in entries]}


CATALOG_NAMES = ("torus2", "torus3", "iwasawa", "sl2c", "ftorus2")


def catalog_model(name: str):
    """Built-in models; each call returns the same cached instance."""
    if name not in _CATALOG_CACHE:
        _CATALOG_CACHE[name] = _build_catalog(name)
    return _CATALOG_CACHE[name]


_CATALOG_CACHE: dict = {}


def _build_catalog(name: str):
    if name == "torus2":
        return LieModel("torus2", 2, {}, metrics={"standard": _diag(1, 1), "diag-2-3": _diag(2, 3), "diag-1/2-5/3": _diag("1/2", "5/3")})
    if name == "torus3":
        return LieModel(
            "torus3", 3, {}, metrics={"standard": _diag(1, 1, 1), "diag-1-2-3": _diag(1, 2, 3), "diag-2-1/3-3/2": _diag(2, "1/3", "3/2")}
        )
    if name == "iwasawa":
        return LieModel(
            "iwasawa",
            3,
            {3: _two_form(3, [(-1, (1, 2), ())])},
            metrics={
                "standard": _diag(1, 1, 1),
                "diag-1-2-3": _diag(1, 2, 3),
                "diag-1/2-3-5/3": _diag("1/2", 3, "5/3"),
                "offdiag-1-3": {"hermitian": [["1", "0", "1/2"], ["0", "1", "0"], ["1/2", "0", "1"]]},
            },
            default_metrics=["standard", "diag-1-2-3", "diag-1/2-3-5/3"],
        )
    if name == "sl2c":
        return LieModel(
            "sl2c",
            3,
            {
                1: _two_form(3, [(-1, (2, 3), ())]),
                2: _two_form(3, [(1, (1, 3), ())]),
                3: _two_form(3, [(-1, (1, 2), ())]),
            },
            metrics={"standard": _diag(1, 1, 1), "diag-1-2-3": _diag(1, 2, 3), "diag-2-1/2-1": _diag(2, "1/2", 1)},
        )
    if name == "ftorus2":
        return TorusModel("ftorus2", 2, 2, metrics={"standard": _diag(1, 1), "diag-2-3": _diag(2, 3), "diag-1/2-5/3": _diag("1/2", "5/3")})
    raise KeyError(f"unknown catalog model {name!r}")


def non_jacobi_fixture() -> LieModel:
    """A structure table violating d^2 = 0, for validation tests."""
    return LieModel("non-jacobi", 3, {3: _two_form(3, [(1, (1, 2), ())]), 1: _two_form(3, [(1, (1, 3), ())])})


def non_unimodular_fixture() -> LieModel:
    """de^1 = e^1 ∧ e^2: Jacobi holds but the top-degree Stokes identity fails."""
    return LieModel("non-unimodular", 2, {1: _two_form(2, [(1, (1, 2), ())])})


def kodaira_fixture() -> LieModel:
    """Kodaira-Thurston surface, de^2 = e^1 ∧ ē^1: non-Kähler, hence not balanced for n = 2."""
    return LieModel(
        "kodaira",
        2,
        {2: _two_form(2, [(1, (1,), (1,))])},
        metrics={"standard": _diag(1, 1), "diag-2-3": _diag(2, 3)},
    )


def _parse_coeff(value) -> GaussianRational:
    if isinstance(value, bool):
        raise ManifestError("boolean coefficient")
    if isinstance(value, int):
        return gr(value)
    if isinstance(value, str):
        return GaussianRational.parse(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return GaussianRational(str(value[0]), str(value[1]))
    raise ManifestError(f"unsupported coefficient {value!r}; use an int or 're,im' string")


def model_from_manifest(data: Mapping) -> LieModel:
    """Build a LieModel from manifest data (already decoded JSON)."""
    try:
        name = str(data.get("name", "manifest"))
        n = int(data["n"])
        exterior_algebra(n)
        hol, anti = {}, {}
        for key, terms in (data.get("d") or {}).items():
            bar = key.startswith("ebar")
            k = int(key[4:] if bar else key.lstrip("e"))
            if not 1 <= k <= n:
                raise ManifestError(f"generator {key} outside 1..{n}")
            acc = Form.zero(n)
            for coeff, label in terms:
                b = BasisElement.parse(label)
                acc = acc + basis_form(n, b.hol, b.antihol, _parse_coeff(coeff))
            (anti if bar else hol)[k] = acc
        metrics = data.get("metrics") or {}
        volume = _parse_coeff(data.get("volume", 1))
        default = data.get("default_metrics")
        return LieModel(name, n, hol, volume=volume, metrics=metrics, antiholomorphic=anti or None, default_metrics=default)
    except ManifestError:
        raise
    except (KeyError, ValueError, TypeError) as exc:
        raise ManifestError(f"malformed manifest: {exc}") from exc


def load_manifest(source: Union[str, Path, Mapping]) -> LieModel:
    if isinstance(source, Mapping):
        return model_from_manifest(source)
    try:
        text = Path(source).read_text()
    except OSError as exc:
        raise ManifestError(f"cannot read manifest {source}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ManifestError(f"manifest {source} is not valid JSON: {exc}") from exc
    return model_from_manifest(data)


def resolve_model(name_or_path: str):
    """A catalog name, or a path to a JSON manifest (files win over the catalog)."""
    p = Path(name_or_path)
    if p.suffix == ".json" or p.exists():
        return load_manifest(p)
    return catalog_model(name_or_path)


def model_d(model, u: Form) -> Form:
    return model.d(u)


def model_del(model, u: Form) -> Form:
    return model.del_(u)


def model_delbar(model, u: Form) -> Form:
    return model.delbar(u)


def integrate(model, u: Form):
    return model.integrate(u)
