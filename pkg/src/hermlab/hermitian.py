"""Metrics and the pointwise Hermitian machinery: ω, ω_r, ⟨,⟩, ⋆, L, Λ.

A metric is either diagonal, ``ω = i Σ a_j e^j ∧ ē^j`` (the fast path, with
a_j exact rationals or floats), or a Hermitian matrix ``ω = i Σ H_jk e^j ∧ ē^k``.
Matrix metrics are reduced to the diagonal case by an exact unit-triangular
change of coframe (``H = L D L^*``), so every computation stays in Q(i).

The pointwise inner product makes e^1..e^n orthonormal for the identity metric
and is conjugate-linear in the second slot.  The Hodge star is the C-linear
operator with ``u ∧ ⋆conj(v) = ⟨u, v⟩ ω_n``.
"""

from __future__ import annotations

from math import comb, factorial
from typing import Dict, List, Optional, Sequence

from gmpy2 import mpq

from .forms import DegreeError, Form, accumulate, exterior_algebra, wedge_data
from .models import CoframeChange
from .scalars import EXACT, FLOAT, FOURIER, I_UNIT, ONE, ZERO, GaussianRational, RingMismatch, gr, lift


class MetricMismatch(ValueError):
    """A form and a metric disagree on dimension, or a metric is invalid."""


class RangeError(ValueError):
    """An index such as the power r in ω_r is out of range."""


class EngineInconsistency(RuntimeError):
    """Two independent computations of the same quantity disagree."""


def _metric_scalar(x):
    if isinstance(x, float):
        if not x > 0:
            raise MetricMismatch("metric entries must be positive")
        return x
    g = gr(x)
    if g.im or g.re <= 0:
        raise MetricMismatch(f"diagonal metric entry {g} is not a positive rational")
    return g


class Metric:
    """A Hermitian metric with constant coefficients in the model coframe."""

    def __init__(self, n: int, diagonal: Optional[Sequence] = None, hermitian: Optional[Sequence[Sequence]] = None, name: str = ""):
        self.n = n
        self.name = name
        self.alg = exterior_algebra(n)
        self._frame = None
        self._reduced = None
        if hermitian is not None:
            H = [[gr(x) for x in row] for row in hermitian]
            if len(H) != n or any(len(r) != n for r in H):
                raise MetricMismatch("Hermitian matrix has the wrong shape")
            for i in range(n):
                for j in range(n):
                    if H[i][j] != H[j][i].conjugate():
                        raise MetricMismatch("matrix is not Hermitian")
            if all(not H[i][j] for i in range(n) for j in range(n) if i != j):
                diagonal = [H[i][i] for i in range(n)]
                hermitian = None
            else:
                self.hermitian = H
                self.diagonal = None
                lower, dvals = _ldl(H)
                if any(dv.re <= 0 for dv in dvals):
                    raise MetricMismatch("Hermitian matrix is not positive definite")
                # f = L^T e makes the metric diagonal with entries dvals
                P = [[lower[j][l] for j in range(n)] for l in range(n)]
                self._frame = CoframeChange(n, P)
                self._reduced = Metric(n, diagonal=dvals, name=f"{name}[diag]")
                self.ring = EXACT
        if hermitian is None:
            if diagonal is None:
                diagonal = [1] * n
            if len(diagonal) != n:
                raise MetricMismatch(f"expected {n} diagonal entries")
            self.diagonal = tuple(_metric_scalar(x) for x in diagonal)
            self.hermitian = None
            self.ring = FLOAT if any(isinstance(x, float) for x in self.diagonal) else EXACT
            if self.ring == FLOAT:
                self.diagonal = tuple(float(x) if isinstance(x, float) else float(x.re) for x in self.diagonal)
        self._powers: Dict[int, Form] = {}
        self._tables: Dict[str, "_Tables"] = {}

    # construction helpers
    @classmethod
    def identity(cls, n: int) -> "Metric":
        return cls(n, [1] * n, name="standard")

    @property
    def is_diagonal(self) -> bool:
        return self.hermitian is None

    @property
    def frame(self) -> Optional[CoframeChange]:
        return self._frame

    @property
    def reduced(self) -> "Metric":
        """Diagonal metric in the adapted coframe (self when already diagonal)."""
        return self if self.is_diagonal else self._reduced

    def key(self) -> tuple:
        if self.is_diagonal:
            return ("diag", tuple(str(x) for x in self.diagonal))
        return ("herm", tuple(tuple(x.text() for x in row) for row in self.hermitian))

    def matrix(self) -> List[List]:
        n = self.n
        if self.is_diagonal:
            zero = 0.0 if self.ring == FLOAT else ZERO
            return [[self.diagonal[i] if i == j else zero for j in range(n)] for i in range(n)]
        return [list(r) for r in self.hermitian]

    def scaled(self, c) -> "Metric":
        """The metric c·ω for a positive constant c (float c gives a float metric)."""
        if isinstance(c, float):
            if not self.is_diagonal:
                raise MetricMismatch("float scaling is available for diagonal metrics only")
            return Metric(self.n, [float(complex(a).real) * c for a in self.diagonal], name=f"{self.name}*{c}")
        c = gr(c)
        if self.is_diagonal:
            return Metric(self.n, [a * c for a in self.diagonal], name=f"{self.name}*{c}")
        return Metric(self.n, hermitian=[[x * c for x in row] for row in self.hermitian], name=f"{self.name}*{c}")

    # forms attached to the metric
    def omega(self) -> Form:
        if 1 not in self._powers:
            data = {}
            alg = self.alg
            for j in range(1, self.n + 1):
                for k in range(1, self.n + 1):
                    h = self._entry(j, k)
                    if h:
                        accumulate(data, alg.index[(1 << (j - 1), 1 << (k - 1))], h * lift(I_UNIT, self.ring))
            self._powers[1] = Form.from_data(alg, self.ring, data)
        return self._powers[1]

    def _entry(self, j: int, k: int):
        if self.is_diagonal:
            return self.diagonal[j - 1] if j == k else 0
        return self.hermitian[j - 1][k - 1]

    def omega_raw_power(self, r: int) -> Form:
        """ω^r (no factorial)."""
        key = -r
        if key not in self._powers:
            if r == 0:
                self._powers[key] = Form.one(self.n, self.ring)
            else:
                self._powers[key] = self.omega_raw_power(r - 1).wedge(self.omega())
        return self._powers[key]

    def omega_power(self, r: int) -> Form:
        """ω_r = ω^r / r!."""
        if not 0 <= r <= self.n:
            raise RangeError(f"omega_power needs 0 <= r <= {self.n}, got {r}")
        if r not in self._powers:
            self._powers[r] = self.omega_raw_power(r).scale(lift(GaussianRational(mpq(1, factorial(r))), self.ring))
        return self._powers[r]

    def determinant(self):
        m = self.reduced
        d = lift(ONE, m.ring)
        for a in m.diagonal:
            d = d * a
        return d

    def tables(self, ring: str) -> "_Tables":
        if not self.is_diagonal:
            raise MetricMismatch("pointwise tables exist for diagonal metrics only")
        if ring not in self._tables:
            self._tables[ring] = _Tables(self, ring)
        return self._tables[ring]

    def __repr__(self):
        if self.is_diagonal:
            return f"Metric(n={self.n}, diag={[str(a) for a in self.diagonal]})"
        return f"Metric(n={self.n}, hermitian)"


def _ldl(H):
    """Exact H = L D L^* with L unit lower triangular."""
    n = len(H)
    L = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    D = [ZERO] * n
    for j in range(n):
        s = H[j][j]
        for k in range(j):
            s = s - L[j][k] * L[j][k].conjugate() * D[k]
        D[j] = s
        if not s:
            return L, D
        for i in range(j + 1, n):
            t = H[i][j]
            for k in range(j):
                t = t - L[i][k] * L[j][k].conjugate() * D[k]
            L[i][j] = t / s
    return L, D


class _Tables:
    """Per-basis data of a diagonal metric, with constants lifted into ``ring``.

    norm[b]   pointwise |e_b|^2
    star[b]   (target, coefficient) with ⋆e_b = coefficient * e_target
    L[b]      list of (target, coefficient) for ω ∧ e_b
    Lam[b]    list of (target, coefficient) for Λ e_b
    """

    def __init__(self, metric: Metric, ring: str):
        alg = metric.alg
        n = metric.n
        inv = [lift(ONE, metric.ring) / a if metric.ring == EXACT else 1.0 / a for a in metric.diagonal]
        vol = lift(alg.sigma, metric.ring)
        for a in metric.diagonal:
            vol = vol * a
        norm = []
        for (im, jm) in alg.masks:
            g = lift(ONE, metric.ring)
            for j in range(n):
                if im >> j & 1:
                    g = g * inv[j]
                if jm >> j & 1:
                    g = g * inv[j]
            norm.append(g)
        star = []
        for y in range(alg.dim):
            s_b, b = alg.conj[y]
            w_b, c = alg.complement[b]
            coef = norm[b] * vol * (s_b * w_b)
            star.append((c, lift(coef, ring)))
        omega = metric.omega().data
        L = []
        for b in range(alg.dim):
            out = wedge_data(alg, omega, {b: lift(ONE, metric.ring)})
            L.append([(i, lift(c, ring)) for i, c in sorted(out.items())])
        Lam: List[List] = [[] for _ in range(alg.dim)]
        for b in range(alg.dim):
            out = wedge_data(alg, omega, {b: lift(ONE, metric.ring)})
            # Λ e_c = Σ_b conj(L[c][b]) |e_c|^2 / |e_b|^2 e_b
            for c, val in out.items():
                Lam[c].append((b, lift(val.conjugate() * norm[c] / norm[b], ring)))
        for lst in Lam:
            lst.sort(key=lambda t: t[0])
        self.norm = [lift(g, ring) for g in norm]
        self.norm_exact = norm
        self.star = star
        self.L = L
        self.Lam = Lam
        self.volume_coefficient = vol


def _check(metric: Metric, u: Form) -> None:
    if u.n != metric.n:
        raise MetricMismatch(f"form has n={u.n}, metric has n={metric.n}")


def _apply_rows(rows, u: Form) -> Form:
    out: dict = {}
    for j, c in u.data.items():
        for i, a in rows[j]:
            accumulate(out, i, a * c)
    return Form.from_data(u.alg, u.ring, out)


def _via_frame(metric: Metric, fn, u: Form) -> Form:
    frame = metric.frame
    return frame.backward(fn(metric.reduced, frame.forward(u)))


def omega_power(metric: Metric, r: int) -> Form:
    return metric.omega_power(r)


def constant_form(form: Form, ring: str) -> Form:
    """A constant-coefficient form moved into ``ring`` (exact/float/Fourier)."""
    if ring == form.ring or not form.data:
        return Form.from_data(form.alg, ring, dict(form.data)) if ring == form.ring else Form.zero(form.n, ring)
    if ring == FLOAT:
        if form.ring != EXACT:
            raise RingMismatch("cannot move a Fourier form to the float ring")
        return form.to_float()
    if ring == FOURIER:
        return form.to_fourier()
    raise RingMismatch(f"cannot move a {form.ring} form into the exact ring")


def inner(metric: Metric, u: Form, v: Form):
    """Pointwise ⟨u, v⟩ (a scalar of the forms' ring; a function for Fourier forms)."""
    _check(metric, u)
    _check(metric, v)
    if u.data and v.data and u.ring != v.ring:
        raise RingMismatch("inner product of forms from different rings")
    ring = u.ring if u.data else v.ring
    if not metric.is_diagonal:
        fr = metric.frame
        return inner(metric.reduced, fr.forward(u), fr.forward(v))
    norm = metric.tables(ring).norm
    total = None
    for i, a in u.data.items():
        b = v.data.get(i)
        if b is not None:
            t = a * b.conjugate() * norm[i]
            total = t if total is None else total + t
    if total is None:
        from .scalars import FourierSum

        return FourierSum() if ring == FOURIER else lift(ZERO, ring)
    return total


def pointwise_norm2(metric: Metric, u: Form):
    return inner(metric, u, u)


def volume_form(metric: Metric, ring: Optional[str] = None) -> Form:
    w = metric.omega_power(metric.n)
    return constant_form(w, ring or metric.ring)


def l2_inner(model, metric: Metric, u: Form, v: Form):
    """⟨⟨u, v⟩⟩ = ∫ ⟨u, v⟩ ω_n."""
    density = inner(metric, u, v)
    ring = u.ring if u.data else v.ring
    vol = volume_form(metric, ring)
    if ring == FOURIER:
        if not density:
            return 0j
        return model.integrate(Form.from_data(vol.alg, FOURIER, {vol.alg.top: vol.data[vol.alg.top] * density}))
    top = vol.data[vol.alg.top]
    return model.integrate(Form.from_data(vol.alg, ring, {vol.alg.top: top * density} if density else {}))


def l2_inner_via_star(model, metric: Metric, u: Form, v: Form):
    """⟨⟨u, v⟩⟩ computed as Σ_k ∫ u_k ∧ ⋆conj(v_k)."""
    total = None
    for k in sorted(set(u.degrees()) & set(v.degrees())):
        w = u.part(k).wedge(hodge_star(metric, v.part(k).conjugate()))
        val = model.integrate(w)
        total = val if total is None else total + val
    if total is None:
        return lift(ZERO, u.ring) if u.ring != FOURIER else 0j
    return total


def hodge_star(metric: Metric, u: Form) -> Form:
    _check(metric, u)
    if not metric.is_diagonal:
        return _via_frame(metric, hodge_star, u)
    star = metric.tables(u.ring).star
    out = {}
    for i, c in u.data.items():
        j, a = star[i]
        out[j] = a * c
    return Form.from_data(u.alg, u.ring, out)


def star_inverse(metric: Metric, u: Form) -> Form:
    """⋆^{-1} = (-1)^k ⋆ on k-forms."""
    out = Form.zero(u.n, u.ring)
    for k in u.degrees():
        s = hodge_star(metric, u.part(k))
        out = out + (-s if k % 2 else s)
    return out


def lefschetz_L(metric: Metric, u: Form, r: int = 1) -> Form:
    """L^r u = ω^r ∧ u."""
    _check(metric, u)
    if r < 0:
        raise RangeError("r must be non-negative")
    if not metric.is_diagonal:
        return _via_frame(metric, lambda m, x: lefschetz_L(m, x, r), u)
    rows = metric.tables(u.ring).L
    for _ in range(r):
        u = _apply_rows(rows, u)
    return u


def lambda_adj(metric: Metric, u: Form) -> Form:
    """Λ, the pointwise adjoint of L."""
    _check(metric, u)
    if not metric.is_diagonal:
        return _via_frame(metric, lambda_adj, u)
    return _apply_rows(metric.tables(u.ring).Lam, u)


def is_primitive(metric: Metric, u: Form) -> bool:
    """ω_{n-k+1} ∧ u = 0, cross-checked against Λu = 0."""
    k = u.degree
    if k is None:
        return True
    if k > metric.n:
        raise DegreeError(f"primitivity is defined for degree <= n, got {k}")
    if k == 0:
        by_wedge = True  # ω_{n+1} = 0
    else:
        w = constant_form(metric.omega_power(metric.n - k + 1), u.ring)
        by_wedge = not w.wedge(u)
    by_lambda = not lambda_adj(metric, u)
    if by_wedge != by_lambda:
        raise EngineInconsistency("wedge and Λ primitivity tests disagree")
    return by_wedge


def lefschetz_decompose(metric: Metric, u: Form) -> List[Form]:
    """Primitive pieces (u_0, ..., u_l) with u = Σ_s ω^s ∧ u_s."""
    k = u.degree
    if k is None:
        return [u]
    n = metric.n
    if k > n:
        raise DegreeError(f"Lefschetz decomposition is implemented for degree <= n, got {k}")
    top = k // 2
    pieces: List[Optional[Form]] = [None] * (top + 1)
    rest = u
    for s in range(top, -1, -1):
        if s == 0:
            pieces[0] = rest
            break
        kp = k - 2 * s
        x = rest
        for _ in range(s):
            x = lambda_adj(metric, x)
        const = 1
        for r in range(1, s + 1):
            const *= r * (n - kp - r + 1)
        factor = GaussianRational(mpq(1, const))
        piece = x.scale(factor if u.ring == EXACT else complex(factor))
        pieces[s] = piece
        if piece:
            rest = rest - lefschetz_L(metric, piece, s)
    return pieces


def primitive_part(metric: Metric, u: Form) -> Form:
    return lefschetz_decompose(metric, u)[0]


def metric_from_spec(n: int, spec, name: str = "") -> Metric:
    """Metric from a manifest entry: a list of diagonal entries, or a dict
    with ``diag`` or ``hermitian`` (nested rows or a flat row-major list)."""
    if isinstance(spec, Metric):
        return spec
    if isinstance(spec, (list, tuple)):
        return Metric(n, [gr(x) for x in spec], name=name)
    if isinstance(spec, dict):
        if "diag" in spec:
            return Metric(n, [gr(x) for x in spec["diag"]], name=name)
        if "hermitian" in spec:
            rows = spec["hermitian"]
            if rows and not isinstance(rows[0], (list, tuple)):
                if len(rows) != n * n:
                    raise MetricMismatch("flat Hermitian entry list must have n^2 entries")
                rows = [rows[i * n:(i + 1) * n] for i in range(n)]
            return Metric(n, hermitian=[[gr(x) for x in row] for row in rows], name=name)
    raise MetricMismatch(f"unrecognised metric specification {spec!r}")


def model_metric(model, name: str) -> Metric:
    """The named metric of a model (cached on the model)."""
    cache = model._cache.setdefault("metrics", {})
    if name not in cache:
        if name not in model.metric_specs:
            raise KeyError(f"model {model.name} has no metric {name!r}")
        cache[name] = metric_from_spec(model.n, model.metric_specs[name], name)
    return cache[name]


def appendix_constant(n: int, k: int, r: int, s: int) -> int:
    """C_{n,k,r,s} = (r+s)! (n-k+s)! / (s! (n-k-r+s)!)."""
    return factorial(r + s) * factorial(n - k + s) // (factorial(s) * factorial(n - k - r + s))


def primitive_norm_constant(n: int, k: int, r: int) -> int:
    """(r!)^2 C(n-k, r): |ω^r ∧ φ|^2 / |φ|^2 for primitive k-forms φ."""
    return factorial(r) ** 2 * comb(n - k, r)
