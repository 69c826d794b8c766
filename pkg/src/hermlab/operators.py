"""Composite operators on a (model, metric) pair, each available two ways.

Route A works on forms directly: adjoints come from Hodge-star formulas such as
``d_h^⋆ = -h̄ ⋆ d_{1/h̄} ⋆`` and ``(β∧)^⋆ v = ±⋆(β̄ ∧ ⋆v)``.
Route B works with cached matrices: adjoints are Gram adjoints
``A^*_{ji} = conj(A_{ij}) G_i / G_j`` of the matrix of the operator, and
composites are matrix products.  On a compact model the two must agree.

Lie models use sparse matrices over the model ring.  The Fourier torus uses a
dense block per frequency, since every operator here preserves frequency.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import hermitian as herm
from .forms import Form, accumulate, wedge_data
from .linalg import float_nullspace, nullspace, orthogonalize, to_numpy
from .models import LieModel, ModelMismatch, TorusModel
from .scalars import EXACT, FLOAT, FOURIER, I_UNIT, ONE, ZERO, FourierSum, GaussianRational, RingMismatch, lift, normalize


class ZeroH(ValueError):
    """The twisting parameter h of d_h must be nonzero."""


KINDS = (
    "d",
    "del",
    "delbar",
    "d_h",
    "d_star",
    "del_star",
    "delbar_star",
    "d_h_star",
    "tau",
    "tau_star",
    "laplacian_d",
    "laplacian_del",
    "laplacian_delbar",
    "laplacian_h",
    "laplacian_tau",
    "laplacian_tau_prime",
)
TWISTED = {"d_h", "d_h_star", "laplacian_h"}
ADJOINT_OF = {
    "d": "d_star",
    "del": "del_star",
    "delbar": "delbar_star",
    "d_h": "d_h_star",
    "tau": "tau_star",
    "d_star": "d",
    "del_star": "del",
    "delbar_star": "delbar",
    "d_h_star": "d_h",
    "tau_star": "tau",
}


# ---------------------------------------------------------------- sparse matrices


class SparseOp:
    """Linear map on the full form space, stored column-wise."""

    __slots__ = ("alg", "ring", "cols")

    def __init__(self, alg, ring: str, cols: List[dict]):
        self.alg = alg
        self.ring = ring
        self.cols = cols

    @classmethod
    def from_rows(cls, alg, ring, rows: List[List[Tuple[int, object]]]) -> "SparseOp":
        return cls(alg, ring, [{i: c for i, c in col} for col in rows])

    @classmethod
    def zero(cls, alg, ring) -> "SparseOp":
        return cls(alg, ring, [dict() for _ in range(alg.dim)])

    def apply(self, u: Form) -> Form:
        cols = self.cols
        out: dict = {}
        for j, c in u.data.items():
            for i, a in cols[j].items():
                accumulate(out, i, a * c)
        return Form.from_data(self.alg, u.ring, out)

    def __matmul__(self, other: "SparseOp") -> "SparseOp":
        cols = self.cols
        new = []
        for col in other.cols:
            out: dict = {}
            for k, b in col.items():
                for i, a in cols[k].items():
                    accumulate(out, i, a * b)
            new.append(out)
        return SparseOp(self.alg, self.ring, new)

    def __add__(self, other: "SparseOp") -> "SparseOp":
        new = []
        for c1, c2 in zip(self.cols, other.cols):
            out = dict(c1)
            for i, a in c2.items():
                accumulate(out, i, a)
            new.append(out)
        return SparseOp(self.alg, self.ring, new)

    def __neg__(self) -> "SparseOp":
        return SparseOp(self.alg, self.ring, [{i: -a for i, a in c.items()} for c in self.cols])

    def __sub__(self, other: "SparseOp") -> "SparseOp":
        return self + (-other)

    def scale(self, c) -> "SparseOp":
        if not c:
            return SparseOp.zero(self.alg, self.ring)
        return SparseOp(self.alg, self.ring, [{i: a * c for i, a in col.items()} for col in self.cols])

    def adjoint(self, gram: Sequence) -> "SparseOp":
        new: List[dict] = [dict() for _ in range(self.alg.dim)]
        for j, col in enumerate(self.cols):
            gj = gram[j]
            for i, a in col.items():
                new[i][j] = a.conjugate() * gram[i] / gj
        return SparseOp(self.alg, self.ring, new)

    def is_zero(self) -> bool:
        return not any(self.cols)

    def __eq__(self, other):
        if not isinstance(other, SparseOp):
            return NotImplemented
        return self.cols == other.cols

    __hash__ = None

    def entry(self, i: int, j: int):
        return self.cols[j].get(i, lift(ZERO, self.ring))

    def dense(self, rows: Sequence[int], cols: Sequence[int]) -> List[List]:
        zero = lift(ZERO, self.ring)
        return [[self.cols[j].get(i, zero) for j in cols] for i in rows]


def commutator(a, b):
    return a @ b - b @ a


def anticommutator(a, b):
    return a @ b + b @ a


# ---------------------------------------------------------------- frequency blocks


class BlockOp:
    """Operator on Fourier forms, given by one dense block per frequency."""

    __slots__ = ("alg", "fn", "memo")

    def __init__(self, alg, fn: Callable[[tuple], np.ndarray]):
        self.alg = alg
        self.fn = fn
        self.memo: Dict[tuple, np.ndarray] = {}

    def block(self, k: tuple) -> np.ndarray:
        m = self.memo.get(k)
        if m is None:
            m = self.fn(k)
            self.memo[k] = m
        return m

    @classmethod
    def constant(cls, alg, matrix: np.ndarray) -> "BlockOp":
        return cls(alg, lambda k: matrix)

    def apply(self, u: Form) -> Form:
        freqs = set()
        for c in u.data.values():
            freqs.update(c.terms.keys())
        dim = self.alg.dim
        acc: Dict[int, Dict[tuple, complex]] = {}
        for k in freqs:
            vec = np.zeros(dim, dtype=complex)
            for i, c in u.data.items():
                v = c.terms.get(k)
                if v is not None:
                    vec[i] = v
            out = self.block(k) @ vec
            for i in np.nonzero(out)[0]:
                acc.setdefault(int(i), {})[k] = complex(out[i])
        data = {i: FourierSum._raw(t) for i, t in acc.items() if t}
        return Form.from_data(self.alg, FOURIER, data)

    def __matmul__(self, other: "BlockOp") -> "BlockOp":
        return BlockOp(self.alg, lambda k: self.block(k) @ other.block(k))

    def __add__(self, other: "BlockOp") -> "BlockOp":
        return BlockOp(self.alg, lambda k: self.block(k) + other.block(k))

    def __neg__(self) -> "BlockOp":
        return BlockOp(self.alg, lambda k: -self.block(k))

    def __sub__(self, other: "BlockOp") -> "BlockOp":
        return BlockOp(self.alg, lambda k: self.block(k) - other.block(k))

    def scale(self, c) -> "BlockOp":
        c = complex(c)
        return BlockOp(self.alg, lambda k: c * self.block(k))

    def adjoint(self, gram: Sequence) -> "BlockOp":
        g = np.array([complex(x).real for x in gram])
        return BlockOp(self.alg, lambda k: (self.block(k).conj().T * g[None, :]) / g[:, None])


def differential_block(model: TorusModel, which: str, freq: tuple) -> np.ndarray:
    """Dense matrix of d, ∂ or ∂̄ on forms whose coefficients are e^{2πi<k,x>}."""
    alg = model.alg
    table = alg.wedge_table
    m = np.zeros((alg.dim, alg.dim), dtype=complex)
    for j in range(1, model.n + 1):
        for bar in (False, True):
            if which == "del" and bar or which == "delbar" and not bar:
                continue
            f = model.delbar_factor(freq, j) if bar else model.del_factor(freq, j)
            if not f:
                continue
            g = alg.index[(0, 1 << (j - 1))] if bar else alg.index[(1 << (j - 1), 0)]
            row = table[g]
            for b in range(alg.dim):
                packed = row[b]
                if packed > 0:
                    m[packed - 1, b] += f
                elif packed < 0:
                    m[-packed - 1, b] -= f
    return m


# ---------------------------------------------------------------- geometry


class Geometry:
    """Operators attached to one (model, diagonal metric) pair.

    Use :func:`geometry` to obtain instances; it also handles matrix metrics.
    """

    def __init__(self, model, metric: "herm.Metric"):
        if metric.n != model.n:
            raise herm.MetricMismatch(f"metric has n={metric.n}, model has n={model.n}")
        if not metric.is_diagonal:
            raise herm.MetricMismatch("Geometry needs a diagonal metric; use geometry()")
        if model.ring == EXACT and metric.ring != EXACT:
            raise RingMismatch("float metric on an exact model; promote the model with as_float()")
        self.model = model
        self.metric = metric
        self.n = model.n
        self.alg = model.alg
        self.ring = model.ring
        self.blocks = isinstance(model, TorusModel)
        self.tables = metric.tables(self.ring)
        vol_int = metric.determinant()
        if self.blocks:
            vol_int = complex(vol_int) * model.volume
        else:
            vol_int = lift(vol_int, self.ring) * model.volume
        self.volume_integral = vol_int
        self.gram = [g * vol_int for g in self.tables.norm]
        if self.blocks:
            zero = Form.zero(self.n, FLOAT)
            self.del_omega = zero
            self.delbar_omega = zero
        else:
            w = herm.constant_form(metric.omega(), self.ring)
            self.del_omega = model.del_(w)
            self.delbar_omega = model.delbar(w)
        self._mats: dict = {}

    # scalars
    def scalar(self, h):
        h = normalize(h)
        if self.ring == EXACT:
            if not isinstance(h, GaussianRational):
                raise RingMismatch("exact geometry needs an exact h")
        else:
            h = complex(h)
        if not h:
            raise ZeroH("h must be nonzero")
        return h

    def _lift(self, c):
        return lift(c, self.ring) if self.ring != FOURIER else complex(c)

    def check(self, u: Form) -> None:
        self.model.check_form(u)

    # pointwise route-A pieces
    def star(self, u: Form) -> Form:
        return herm.hodge_star(self.metric, u)

    def L(self, u: Form, r: int = 1) -> Form:
        return herm.lefschetz_L(self.metric, u, r)

    def Lam(self, u: Form) -> Form:
        return herm.lambda_adj(self.metric, u)

    def wedge_const(self, beta: Form, u: Form) -> Form:
        """β ∧ u for a constant-coefficient β (exact or float)."""
        data = {i: self._lift(c) for i, c in beta.data.items()}
        return Form.from_data(self.alg, u.ring, wedge_data(self.alg, data, u.data))

    def wedge_const_adjoint(self, beta: Form, v: Form) -> Form:
        """(β∧)^⋆ v = (-1)^{pk+k} ⋆(β̄ ∧ ⋆v) on the k-form part of the output."""
        p = beta.degree
        if p is None:
            return Form.zero(self.n, v.ring)
        bbar = beta.conjugate()
        out = Form.zero(self.n, v.ring)
        for m in v.degrees():
            k = m - p
            if k < 0:
                continue
            w = self.star(self.wedge_const(bbar, self.star(v.part(m))))
            out = out + (-w if (p * k + k) % 2 else w)
        return out

    def omega_power(self, r: int) -> Form:
        return self.metric.omega_power(r)

    # differentials
    def d(self, u: Form) -> Form:
        return self.model.d(u)

    def del_(self, u: Form) -> Form:
        return self.model.del_(u)

    def delbar(self, u: Form) -> Form:
        return self.model.delbar(u)

    def d_h(self, h, u: Form) -> Form:
        h = self.scalar(h)
        return self.model.del_(u).scale(h) + self.model.delbar(u)

    # route A adjoints
    def d_star_a(self, u: Form) -> Form:
        return -self.star(self.d(self.star(u)))

    def del_star_a(self, u: Form) -> Form:
        return -self.star(self.delbar(self.star(u)))

    def delbar_star_a(self, u: Form) -> Form:
        return -self.star(self.del_(self.star(u)))

    def d_h_star_a(self, h, u: Form) -> Form:
        h = self.scalar(h)
        hb = h.conjugate()
        inv = 1 / hb
        return -(self.star(self.d_h(inv, self.star(u))).scale(hb))

    def tau_a(self, u: Form) -> Form:
        b = self.del_omega
        return self.Lam(self.wedge_const(b, u)) - self.wedge_const(b, self.Lam(u))

    def tau_bar_a(self, u: Form) -> Form:
        b = self.delbar_omega
        return self.Lam(self.wedge_const(b, u)) - self.wedge_const(b, self.Lam(u))

    def tau_star_a(self, u: Form) -> Form:
        b = self.del_omega
        return self.wedge_const_adjoint(b, self.L(u)) - self.L(self.wedge_const_adjoint(b, u))

    def tau_bar_star_a(self, u: Form) -> Form:
        b = self.delbar_omega
        return self.wedge_const_adjoint(b, self.L(u)) - self.L(self.wedge_const_adjoint(b, u))

    def route_a(self, kind: str, u: Form, h=None) -> Form:
        """Apply ``kind`` using form arithmetic and star formulas only."""
        self.check(u)
        if kind == "d":
            return self.d(u)
        if kind == "del":
            return self.del_(u)
        if kind == "delbar":
            return self.delbar(u)
        if kind == "d_h":
            return self.d_h(h, u)
        if kind == "d_star":
            return self.d_star_a(u)
        if kind == "del_star":
            return self.del_star_a(u)
        if kind == "delbar_star":
            return self.delbar_star_a(u)
        if kind == "d_h_star":
            return self.d_h_star_a(h, u)
        if kind == "tau":
            return self.tau_a(u)
        if kind == "tau_star":
            return self.tau_star_a(u)
        if kind == "tau_bar":
            return self.tau_bar_a(u)
        if kind == "tau_bar_star":
            return self.tau_bar_star_a(u)
        if kind == "laplacian_d":
            return self.d(self.d_star_a(u)) + self.d_star_a(self.d(u))
        if kind == "laplacian_del":
            return self.del_(self.del_star_a(u)) + self.del_star_a(self.del_(u))
        if kind == "laplacian_delbar":
            return self.delbar(self.delbar_star_a(u)) + self.delbar_star_a(self.delbar(u))
        if kind == "laplacian_h":
            return self.d_h(h, self.d_h_star_a(h, u)) + self.d_h_star_a(h, self.d_h(h, u))
        if kind == "laplacian_tau":
            fwd = lambda x: self.d(x) + self.tau_a(x)
            bwd = lambda x: self.d_star_a(x) + self.tau_star_a(x)
            return fwd(bwd(u)) + bwd(fwd(u))
        if kind == "laplacian_tau_prime":
            fwd = lambda x: self.del_(x) + self.tau_a(x)
            bwd = lambda x: self.del_star_a(x) + self.tau_star_a(x)
            return fwd(bwd(u)) + bwd(fwd(u))
        raise ValueError(f"unknown operator kind {kind!r}")

    # route B matrices
    def _const_matrix(self, rows_fn) -> object:
        """Matrix of a frequency-independent map given per basis column."""
        alg = self.alg
        if self.blocks:
            m = np.zeros((alg.dim, alg.dim), dtype=complex)
            for j in range(alg.dim):
                for i, a in rows_fn(j):
                    m[i, j] += complex(a)
            return BlockOp.constant(alg, m)
        return SparseOp(alg, self.ring, [{i: a for i, a in rows_fn(j)} for j in range(alg.dim)])

    def _diff_matrix(self, which: str):
        alg = self.alg
        model = self.model
        if not self.blocks:
            cols = {"d": model.d_columns, "del": model.del_columns, "delbar": model.delbar_columns}[which]
            return SparseOp(alg, self.ring, [dict(c) for c in cols])
        return BlockOp(alg, lambda k: differential_block(model, which, k))

    def wedge_matrix(self, beta: Form):
        data = {i: self._lift(c) for i, c in beta.data.items()}
        alg = self.alg

        def rows(j):
            return list(wedge_data(alg, data, {j: self._lift(ONE)}).items())

        return self._const_matrix(rows)

    def matrix(self, kind: str, h=None):
        """Route-B matrix of an operator kind (cached per kind and h)."""
        if kind in TWISTED:
            h = self.scalar(h)
            key = (kind, h)
        else:
            key = (kind,)
        mat = self._mats.get(key)
        if mat is not None:
            return mat
        mat = self._build(kind, h)
        self._mats[key] = mat
        return mat

    def _build(self, kind: str, h):
        M = self.matrix
        if kind in ("d", "del", "delbar"):
            return self._diff_matrix(kind)
        if kind == "L":
            return self._const_matrix(lambda j: self.tables.L[j])
        if kind == "Lambda":
            return M("L").adjoint(self.gram)
        if kind == "d_h":
            return M("del").scale(h) + M("delbar")
        if kind == "d_h_star":
            return M("d_h", h).adjoint(self.gram)
        if kind in ("d_star", "del_star", "delbar_star", "tau_star", "tau_bar_star"):
            return M(kind[: -len("_star")]).adjoint(self.gram)
        if kind == "tau":
            W = self.wedge_matrix(self.del_omega)
            return commutator(M("Lambda"), W)
        if kind == "tau_bar":
            W = self.wedge_matrix(self.delbar_omega)
            return commutator(M("Lambda"), W)
        if kind == "laplacian_d":
            return anticommutator(M("d"), M("d_star"))
        if kind == "laplacian_del":
            return anticommutator(M("del"), M("del_star"))
        if kind == "laplacian_delbar":
            return anticommutator(M("delbar"), M("delbar_star"))
        if kind == "laplacian_h":
            return anticommutator(M("d_h", h), M("d_h_star", h))
        if kind == "laplacian_tau":
            fwd = M("d") + M("tau")
            return anticommutator(fwd, fwd.adjoint(self.gram))
        if kind == "laplacian_tau_prime":
            fwd = M("del") + M("tau")
            return anticommutator(fwd, fwd.adjoint(self.gram))
        if kind == "ddbar":
            return M("del") @ M("delbar")
        if kind == "ddbar_star":
            return M("ddbar").adjoint(self.gram)
        raise ValueError(f"unknown operator kind {kind!r}")

    def route_b(self, kind: str, u: Form, h=None) -> Form:
        self.check(u)
        return self.matrix(kind, h).apply(u)

    # inner products
    def l2(self, u: Form, v: Form):
        """⟨⟨u, v⟩⟩ from the Gram weights (route B)."""
        gram = self.gram
        if self.blocks:
            total = 0j
            for i, a in u.data.items():
                b = v.data.get(i)
                if b is None:
                    continue
                s = 0j
                for k, x in a.terms.items():
                    y = b.terms.get(k)
                    if y is not None:
                        s += x * y.conjugate()
                total += s * gram[i]
            return total
        total = lift(ZERO, self.ring)
        for i, a in u.data.items():
            b = v.data.get(i)
            if b is not None:
                total = total + a * b.conjugate() * gram[i]
        return total

    def l2_density(self, u: Form, v: Form):
        """⟨⟨u, v⟩⟩ as the integral of the pointwise inner product (route A)."""
        return herm.l2_inner(self.model, self.metric, u, v)


class FramedGeometry:
    """Geometry for a matrix metric, computed in the adapted coframe.

    Every form argument is moved to the coframe where the metric is diagonal,
    the inner geometry does the work, and form results are moved back.
    """

    def __init__(self, model: LieModel, metric: "herm.Metric"):
        self.model = model
        self.metric = metric
        self.frame = metric.frame
        self.inner = Geometry(model.change_coframe(self.frame), metric.reduced)
        self.n = model.n
        self.alg = model.alg
        self.ring = model.ring
        self.blocks = False
        fr = self.frame
        ring = self.ring
        self._fwd = SparseOp(self.alg, ring, [{i: lift(a, ring) for i, a in c.items()} for c in fr.forward_columns])
        self._bwd = SparseOp(self.alg, ring, [{i: lift(a, ring) for i, a in c.items()} for c in fr.backward_columns])
        self.del_omega = model.del_(herm.constant_form(metric.omega(), ring))
        self.delbar_omega = model.delbar(herm.constant_form(metric.omega(), ring))
        self._mats: dict = {}

    def check(self, u: Form) -> None:
        self.model.check_form(u)

    def scalar(self, h):
        return self.inner.scalar(h)

    def matrix(self, kind: str, h=None):
        key = (kind, self.scalar(h) if kind in TWISTED else None)
        if key not in self._mats:
            self._mats[key] = self._bwd @ self.inner.matrix(kind, h) @ self._fwd
        return self._mats[key]

    def __getattr__(self, name):
        target = getattr(self.inner, name)
        if not callable(target):
            return target
        fwd, bwd = self.frame.forward, self.frame.backward

        def wrapped(*args, **kwargs):
            args = [fwd(a) if isinstance(a, Form) else a for a in args]
            res = target(*args, **kwargs)
            return bwd(res) if isinstance(res, Form) else res

        return wrapped

    def route_b(self, kind: str, u: Form, h=None) -> Form:
        self.check(u)
        return self.matrix(kind, h).apply(u)

    def wedge_const(self, beta: Form, u: Form) -> Form:
        return Form.from_data(self.alg, u.ring, wedge_data(self.alg, {i: lift(c, self.ring) for i, c in beta.data.items()}, u.data))

    def d(self, u):
        return self.model.d(u)

    def del_(self, u):
        return self.model.del_(u)

    def delbar(self, u):
        return self.model.delbar(u)

    def d_h(self, h, u):
        h = self.scalar(h)
        return self.model.del_(u).scale(h) + self.model.delbar(u)


def geometry(model, metric):
    """Cached operator context for (model, metric)."""
    cache = model._cache.setdefault("geometry", {})
    key = metric.key()
    g = cache.get(key)
    if g is None:
        g = Geometry(model, metric) if metric.is_diagonal else FramedGeometry(model, metric)
        cache[key] = g
    return g


# ---------------------------------------------------------------- public handles


@dataclass(frozen=True)
class OperatorHandle:
    kind: str
    model: object
    metric: object
    h: object = None


def operator(kind: str, model, metric, h=None) -> OperatorHandle:
    if kind not in KINDS:
        raise ValueError(f"unknown operator kind {kind!r}; expected one of {', '.join(KINDS)}")
    if kind in TWISTED:
        if h is None:
            raise ZeroH(f"{kind} needs a nonzero h")
        geometry(model, metric).scalar(h)
    return OperatorHandle(kind, model, metric, h)


def apply(opr: OperatorHandle, u: Form) -> Form:
    """Apply an operator; differentials act directly, the rest via matrices."""
    g = geometry(opr.model, opr.metric)
    g.check(u)
    if opr.kind == "d_h":
        return g.d_h(opr.h, u)
    if opr.kind in ("d", "del", "delbar"):
        return {"d": g.d, "del": g.del_, "delbar": g.delbar}[opr.kind](u)
    return g.route_b(opr.kind, u, opr.h)


def adjoint_apply(opr: OperatorHandle, u: Form, route: str = "A") -> Form:
    """Apply the L² adjoint of ``opr``: route "A" (star formulas) or "B" (Gram)."""
    g = geometry(opr.model, opr.metric)
    kind = opr.kind
    if kind.startswith("laplacian"):
        target = kind
    else:
        target = ADJOINT_OF[kind]
    if route == "A":
        return g.route_a(target, u, opr.h)
    if route == "B":
        return g.matrix(kind, opr.h).adjoint(_gram(g)).apply(u)
    raise ValueError("route must be 'A' or 'B'")


def _gram(g):
    if isinstance(g, FramedGeometry):
        raise herm.MetricMismatch("Gram adjoint in the original coframe needs a diagonal metric; use route A")
    return g.gram


def laplacian_apply(kind: str, model, metric, u: Form, h=None, route: str = "B") -> Form:
    if not kind.startswith("laplacian"):
        kind = "laplacian_" + kind
    if kind not in KINDS:
        raise ValueError(f"unknown Laplacian {kind!r}")
    g = geometry(model, metric)
    if route == "A":
        return g.route_a(kind, u, h)
    return g.route_b(kind, u, h)


# ---------------------------------------------------------------- matrix identities


@dataclass
class MatrixIdentityReport:
    name: str
    passed: bool
    residuals: Dict[str, float] = field(default_factory=dict)
    details: List[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "residuals": dict(sorted(self.residuals.items())), "details": self.details}


def _columns_by_route_a(g, fn, idxs: Sequence[int]) -> Dict[int, Form]:
    out = {}
    one = lift(ONE, g.ring)
    for j in idxs:
        out[j] = fn(Form.from_data(g.alg, g.ring, {j: one}))
    return out


def hermitian_commutation_check(model, metric) -> MatrixIdentityReport:
    """i[Λ,∂̄] = ∂^⋆+τ^⋆ and its three conjugate/adjoint variants, per bidegree.

    Left sides are products of route-B matrices; right sides are route-A
    operators applied to every basis element of the bidegree.
    """
    g = geometry(model, metric)
    if g.blocks:
        raise ModelMismatch("matrix identity check is available for Lie models")
    iu = lift(I_UNIT, g.ring)
    M = g.matrix
    lam = M("Lambda")
    Lm = M("L")
    variants = [
        ("i[Λ,∂̄] = ∂*+τ*", commutator(lam, M("delbar")).scale(iu), lambda x: g.del_star_a(x) + g.tau_star_a(x)),
        ("-i[Λ,∂] = ∂̄*+τ̄*", commutator(lam, M("del")).scale(-iu), lambda x: g.delbar_star_a(x) + g.tau_bar_star_a(x)),
        ("i[L,∂̄*] = ∂+τ", commutator(Lm, M("delbar_star")).scale(iu), lambda x: g.del_(x) + g.tau_a(x)),
        ("-i[L,∂*] = ∂̄+τ̄", commutator(Lm, M("del_star")).scale(-iu), lambda x: g.delbar(x) + g.tau_bar_a(x)),
    ]
    residuals = {}
    details = []
    ok = True
    for name, lhs, rhs in variants:
        for (p, q), idxs in sorted(g.alg.by_bidegree.items()):
            worst = 0.0
            cols = _columns_by_route_a(g, rhs, idxs)
            for j in idxs:
                one = lift(ONE, g.ring)
                diff = lhs.apply(Form.from_data(g.alg, g.ring, {j: one})) - cols[j]
                r = diff.max_abs()
                if r > worst:
                    worst = r
            residuals[f"{name} ({p},{q})"] = worst
            if worst != 0:
                ok = False
                details.append(f"{name} fails on bidegree ({p},{q}) with residual {worst}")
    return MatrixIdentityReport("hermitian commutation relations", ok, residuals, details)


# ---------------------------------------------------------------- harmonic spaces


HARMONIC_KINDS = ("d", "del", "delbar", "h", "tau", "tau_prime", "BC", "A")


def _block_indices(alg, degree=None, bidegree=None) -> List[int]:
    if bidegree is not None:
        return list(alg.by_bidegree.get(tuple(bidegree), []))
    return list(alg.by_degree.get(degree, []))


def _stacked_conditions(g, kind: str, h=None) -> List:
    if kind == "BC":
        return [g.matrix("del"), g.matrix("delbar"), g.matrix("ddbar_star")]
    if kind == "A":
        return [g.matrix("ddbar"), g.matrix("del_star"), g.matrix("delbar_star")]
    lap = {"d": "laplacian_d", "del": "laplacian_del", "delbar": "laplacian_delbar", "h": "laplacian_h", "tau": "laplacian_tau", "tau_prime": "laplacian_tau_prime"}
    if kind not in lap:
        raise ValueError(f"unknown harmonic kind {kind!r}; expected one of {', '.join(HARMONIC_KINDS)}")
    return [g.matrix(lap[kind], h)]


def kernel_in_block(g, ops: Sequence, cols: Sequence[int], tol: float = 1e-9) -> List[Form]:
    """Basis of {u supported on cols : A u = 0 for every A in ops}."""
    alg = g.alg
    if not cols:
        return []
    if g.ring == EXACT:
        rows = []
        for A in ops:
            dense = A.dense(range(alg.dim), cols)
            rows.extend(r for r in dense if any(r))
        vecs = nullspace(rows, len(cols))
        return [Form.from_data(alg, EXACT, {cols[i]: x for i, x in enumerate(v) if x}) for v in vecs]
    mats = [to_numpy(A.dense(range(alg.dim), cols), alg.dim, len(cols)) for A in ops]
    basis = float_nullspace(np.vstack(mats), tol)
    out = []
    for c in range(basis.shape[1]):
        v = basis[:, c]
        out.append(Form.from_data(alg, FLOAT, {cols[i]: complex(x) for i, x in enumerate(v) if x != 0}))
    return out


def harmonic_space(model, metric, kind: str, degree: Optional[int] = None, bidegree=None, h=None, tol: float = 1e-9) -> List[Form]:
    """Orthogonal (not normalised) basis of the harmonic forms of one (bi)degree.

    Laplacian kinds use the kernel of the Laplacian matrix; BC and A use the
    intersections ker∂ ∩ ker∂̄ ∩ ker(∂∂̄)^⋆ and ker∂∂̄ ∩ ker∂^⋆ ∩ ker∂̄^⋆.
    """
    g = geometry(model, metric)
    if kind == "h" and h is None:
        raise ZeroH("h-twisted harmonic space needs h")
    if g.blocks:
        return _torus_harmonic(g, kind, degree, bidegree, h, tol)
    cols = _block_indices(g.alg, degree, bidegree)
    if isinstance(g, FramedGeometry):
        inner_forms = harmonic_space(g.inner.model, g.inner.metric, kind, degree, bidegree, h, tol)
        return [g.frame.backward(f) for f in inner_forms]
    forms = kernel_in_block(g, _stacked_conditions(g, kind, h), cols, tol)
    if g.ring == EXACT:
        vecs = [[f.data.get(c, ZERO) for c in cols] for f in forms]
        weights = [g.gram[c] for c in cols]
        ortho = orthogonalize(vecs, weights)
        return [Form.from_data(g.alg, EXACT, {cols[i]: x for i, x in enumerate(v) if x}) for v in ortho]
    return forms


def _torus_harmonic(g: Geometry, kind, degree, bidegree, h, tol) -> List[Form]:
    alg = g.alg
    cols = _block_indices(alg, degree, bidegree)
    ops = _stacked_conditions(g, kind, h)
    out = []
    for k in g.model.frequencies():
        mats = [A.block(k)[:, cols] for A in ops]
        basis = float_nullspace(np.vstack(mats), tol)
        for c in range(basis.shape[1]):
            v = basis[:, c]
            data = {cols[i]: FourierSum({k: complex(x)}) for i, x in enumerate(v) if abs(x) > 0}
            out.append(Form.from_data(alg, FOURIER, {i: f for i, f in data.items() if f}))
    return out


# ---------------------------------------------------------------- export


def export_matrix_csv(model, metric, kind: str, h=None, degree: Optional[int] = None, stream=None) -> str:
    """Write the route-B matrix of ``kind`` as CSV (row label, column label, re, im)."""
    g = geometry(model, metric)
    if g.blocks:
        raise ModelMismatch("CSV export is available for Lie models")
    mat = g.matrix(kind, h)
    alg = g.alg
    cols = range(alg.dim) if degree is None else alg.by_degree[degree]
    buf = stream or io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["row", "column", "re", "im"])
    for j in cols:
        for i in sorted(mat.cols[j]):
            a = mat.cols[j][i]
            if g.ring == EXACT:
                re, im = a.text().split(",")
            else:
                re, im = repr(complex(a).real), repr(complex(a).imag)
            writer.writerow([str(alg.basis[i]), str(alg.basis[j]), re, im])
    return buf.getvalue() if stream is None else ""
