"""Randomized verification harness for the Hermitian identities I1–I23.

Each case draws random forms (small Gaussian rationals on Lie models,
short Fourier sums on the torus) and evaluates both sides through different
code paths: operator matrices and Gram adjoints on one side, form arithmetic
and star formulas on the other.  Exact models must agree with zero residual.
"""

from __future__ import annotations

import json
import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import balanced as bal
from . import hermitian as herm
from .forms import Form
from .linalg import float_rank, nullspace, rank
from .models import ManifestError, TorusModel, finite_difference_delbar, random_fourier_form, resolve_model, validate_model
from .operators import geometry, harmonic_space
from .scalars import EXACT, FOURIER, I_UNIT, ONE, ZERO, GaussianRational, gr

DEFAULT_TOLERANCE = 1e-9
FD_TOLERANCE = 1e-6
H_GRID = ("1", "-1", "0,1", "2", "1,1")


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------- trial context


class Failure(Exception):
    """Raised inside a trial to record a failing sub-assertion."""

    def __init__(self, label: str, residual: float, witness: Optional[Form] = None):
        super().__init__(label)
        self.label = label
        self.residual = residual
        self.witness = witness


class Context:
    """Per (model, metric) state shared by all trials of a case."""

    def __init__(self, model, metric, tolerance: float, h_values: Sequence):
        self.model = model
        self.metric = metric
        self.g = geometry(model, metric)
        self.n = model.n
        self.alg = model.alg
        self.torus = isinstance(model, TorusModel)
        self.exact = model.ring == EXACT and not self.torus
        self.ring = FOURIER if self.torus else model.ring
        self.tol = tolerance
        self.h_values = [gr(h) if self.exact else complex(gr(h)) for h in h_values]
        self.i = I_UNIT if self.exact else 1j
        self._memo: dict = {}
        self.max_residual = 0.0
        self.notes: Dict[str, object] = {}

    # scalars
    def c(self, x):
        if self.exact:
            return gr(x) if not isinstance(x, GaussianRational) else x
        return complex(x)

    def abs2(self, h):
        if self.exact:
            return GaussianRational(h.norm2())
        return abs(h) ** 2

    def conj(self, h):
        return h.conjugate()

    def h_for(self, trial: int):
        return self.h_values[trial % len(self.h_values)]

    def dual_h(self, h):
        """-1/h̄."""
        return -(ONE / h.conjugate()) if self.exact else -1 / h.conjugate()

    # forms
    def const(self, form: Form) -> Form:
        return herm.constant_form(form, self.ring)

    def wpow(self, r: int) -> Form:
        """ω_r = ω^r / r! in the working ring (1 for r = 0)."""
        key = ("wpow", r)
        if key not in self._memo:
            self._memo[key] = self.const(self.metric.omega_power(r)) if r >= 0 else Form.zero(self.n, self.ring)
        return self._memo[key]

    def wraw(self, r: int) -> Form:
        key = ("wraw", r)
        if key not in self._memo:
            self._memo[key] = self.const(self.metric.omega_raw_power(r))
        return self._memo[key]

    def L(self, r: int, u: Form) -> Form:
        return self.g.wedge_const(self.metric.omega_power(r), u)

    def memo(self, key, fn):
        if key not in self._memo:
            self._memo[key] = fn()
        return self._memo[key]

    # comparisons
    def check_equal(self, label: str, lhs, rhs) -> None:
        if isinstance(lhs, Form):
            diff = lhs - rhs
            size = diff.max_abs()
            scale = max(1.0, lhs.max_abs(), rhs.max_abs())
            zero = not diff
        else:
            diff = lhs - rhs
            size = abs(complex(diff))
            scale = max(1.0, abs(complex(lhs)), abs(complex(rhs)))
            zero = not diff
        if self.exact:
            if not zero:
                raise Failure(label, size, diff if isinstance(diff, Form) else None)
            return
        res = size / scale
        self.max_residual = max(self.max_residual, res)
        if res > self.tol:
            raise Failure(label, res, diff if isinstance(diff, Form) else None)

    def check_true(self, label: str, ok: bool, residual: float = 1.0, witness: Optional[Form] = None) -> None:
        if not ok:
            raise Failure(label, residual, witness)

    def real(self, label: str, x):
        """Real part of a scalar that must be real (exactly, or to tolerance)."""
        if self.exact:
            if x.im:
                raise Failure(label + ":not-real", abs(complex(x)))
            return x.re
        c = complex(x)
        if abs(c.imag) > self.tol * max(1.0, abs(c)):
            raise Failure(label + ":not-real", abs(c.imag))
        return c.real


# ---------------------------------------------------------------- random inputs


_NUMERATORS = list(range(-7, 8))
_DENOMINATORS = list(range(1, 8))


def random_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.choice(_NUMERATORS), rng.choice(_DENOMINATORS))


def random_gaussian(rng: random.Random, nonzero: bool = False) -> GaussianRational:
    while True:
        z = GaussianRational(random_rational(rng), random_rational(rng))
        if z or not nonzero:
            return z


def random_exact_form(alg, rng: random.Random, idxs: Sequence[int], density: float = 0.6) -> Form:
    data = {}
    for i in idxs:
        if rng.random() < density:
            z = random_gaussian(rng)
            if z:
                data[i] = z
    if not data and idxs:
        data[rng.choice(list(idxs))] = random_gaussian(rng, nonzero=True)
    return Form.from_data(alg, EXACT, data)


def random_form(ctx: Context, rng: random.Random, degree=None, bidegree=None) -> Form:
    alg = ctx.alg
    if ctx.torus:
        nrng = np.random.default_rng(rng.getrandbits(64))
        return random_fourier_form(ctx.model, nrng, degree=degree, bidegree=bidegree, terms=3)
    if bidegree is not None:
        idxs = alg.by_bidegree.get(tuple(bidegree), [])
    elif degree is not None:
        idxs = alg.by_degree.get(degree, [])
    else:
        idxs = list(range(alg.dim))
    return random_exact_form(alg, rng, idxs)


def random_combination(ctx: Context, rng: random.Random, forms: Sequence[Form]) -> Form:
    out = Form.zero(ctx.n, ctx.ring if not ctx.torus else forms[0].ring if forms else FOURIER)
    for f in forms:
        c = random_gaussian(rng) if ctx.exact else complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        out = out + f.scale(c if f.ring == EXACT else complex(c))
    return out


def random_positive_rational(rng: random.Random) -> GaussianRational:
    return GaussianRational(Fraction(rng.randint(1, 7), rng.randint(1, 7)))


# ---------------------------------------------------------------- case catalog


@dataclass(frozen=True)
class IdentityCase:
    id: str
    anchor: str
    needs_balanced: bool = False
    needs_degenerate: bool = False
    needs_torus: bool = False
    lie_only: bool = False
    run: Optional[Callable] = field(default=None, compare=False, repr=False)


def _skip_reason(case: IdentityCase, ctx: Context) -> Optional[str]:
    if case.needs_torus and not ctx.torus:
        return "needs nonconstant functions (Fourier torus model)"
    if case.lie_only and ctx.torus:
        return "class-level or pointwise constant-coefficient computation; runs on Lie models"
    if case.needs_balanced or case.needs_degenerate:
        if ctx.torus:
            flags = bal.MetricClassification(True, True, True, False)
        else:
            flags = bal.classify_metric(ctx.model, ctx.metric)
        if case.needs_balanced and not flags.balanced:
            return "metric is not balanced"
        if case.needs_degenerate and not flags.degenerate_balanced:
            return "no degenerate-balanced witness (ω_{n-1} is not d-exact)"
    return None


def _i1(ctx: Context, rng, trial):
    g, n = ctx.g, ctx.n
    u = random_form(ctx, rng, degree=1)
    u10, u01 = u.component(1, 0), u.component(0, 1)
    lhs = g.route_b("d_star", ctx.L(n - 1, u))
    i = ctx.i
    prim = lambda x: herm.primitive_part(ctx.metric, x)
    rhs = (g.del_(u10) - g.delbar(u01)).scale(i).wedge(ctx.wpow(n - 2))
    rhs = rhs + (prim(g.del_(u01)) - prim(g.delbar(u10))).scale(i).wedge(ctx.wpow(n - 2))
    lam = g.Lam(g.delbar(u10)) - g.Lam(g.del_(u01))
    rhs = rhs + ctx.L(n - 1, lam.scale(i * ctx.c(Fraction(1, n))))
    ctx.check_equal("d_star(w_{n-1} u)", lhs, rhs)


def _closed_pure_one_forms(ctx: Context) -> List[Form]:
    def build():
        alg = ctx.alg
        if ctx.torus:
            return [Form.from_data(alg, FOURIER, {j: ctx.const(Form.from_data(alg, EXACT, {j: ONE})).data[j]}) for j in alg.by_degree[1]]
        out = []
        for bideg in ((1, 0), (0, 1)):
            cols = alg.by_bidegree[bideg]
            rows = alg.by_degree[2]
            images = [ctx.model.d(Form.from_data(alg, EXACT, {j: ONE})) for j in cols]
            mat = [[img.data.get(r, ZERO) for img in images] for r in rows]
            for v in nullspace([r for r in mat if any(r)], len(cols)):
                out.append(Form.from_data(alg, EXACT, {cols[k]: x for k, x in enumerate(v) if x}))
        return out

    return ctx.memo("closed-pure-1", build)


def _i2(ctx: Context, rng, trial):
    g, n = ctx.g, ctx.n
    basis = _closed_pure_one_forms(ctx)
    if not basis:
        ctx.notes["closed_pure_one_forms"] = 0
        return
    u = random_combination(ctx, rng, basis)
    wu = ctx.L(n - 1, u)
    zero = Form.zero(n, wu.ring)
    ctx.check_equal("d_star(w_{n-1} u) = 0", g.route_b("d_star", wu), zero)
    ctx.check_equal("laplacian(w_{n-1} u) = 0", g.route_b("laplacian_d", wu), zero)


def _i3(ctx: Context, rng, trial):
    g, n = ctx.g, ctx.n
    h = ctx.h_for(trial)
    phi = random_form(ctx, rng, degree=rng.randint(0, 2 * n))
    L = lambda x: ctx.L(n - 1, x)
    lhs = g.route_b("laplacian_h", L(phi), h) - L(g.route_b("laplacian_h", phi, h))
    star = lambda x: g.d_h_star_a(h, x)
    comm = lambda x: star(L(x)) - L(star(x))
    rhs = comm(g.d_h(h, phi)) + g.d_h(h, comm(phi))
    ctx.check_equal("jacobi", lhs, rhs)


def _i4(ctx: Context, rng, trial):
    g, n = ctx.g, ctx.n
    h = ctx.h_for(trial)
    alpha = random_form(ctx, rng, bidegree=(1, 1))
    lhs = g.route_b("d_h_star", ctx.L(n - 1, alpha), h)
    coeff = -ctx.i * ctx.conj(h)
    rhs = ctx.L(n - 1, g.d_h(ctx.dual_h(h), herm.lambda_adj(ctx.metric, alpha))).scale(coeff)
    ctx.check_equal("d_h_star(w_{n-1} alpha)", lhs, rhs)


def _i5(ctx: Context, rng, trial):
    g, n = ctx.g, ctx.n
    h = ctx.h_for(trial)
    k = ctx.dual_h(h)
    phi = random_form(ctx, rng, degree=1)
    L = lambda x: ctx.L(n - 1, x)
    BH = lambda x: g.route_b("d_h_star", x, h)
    lhs = g.route_b("laplacian_h", L(phi), h) - L(g.route_b("laplacian_h", phi, h))
    hh = ctx.abs2(h)
    core = g.d_h(k, g.d_h_star_a(k, phi)).scale(hh) - g.d_h_star_a(h, g.d_h(h, phi))
    first = L(core)
    dh_w = g.d_h(h, ctx.wpow(n - 2))
    second = g.d_h(k, phi).wedge(dh_w).scale(-ctx.i * ctx.conj(h))
    third = g.del_(g.delbar(phi)).wedge(ctx.wpow(n - 2)).scale(-ctx.i * (hh + ctx.c(1)))
    ctx.check_equal("first-term", BH(L(g.d_h(h, phi))) - L(BH(g.d_h(h, phi))), first)
    ctx.check_equal("second-term", g.d_h(h, BH(L(phi)) - L(BH(phi))), second + third)
    ctx.check_equal("commutation-defect", lhs, first + second + third)


def _i6(ctx: Context, rng, trial):
    g, n = ctx.g, ctx.n
    h = ctx.h_for(trial)
    k = ctx.dual_h(h)
    phi = random_form(ctx, rng, degree=1)
    psi = ctx.L(n - 1, phi)
    lhs = g.l2(g.route_b("laplacian_h", psi, h), psi)
    rhs = g.l2_density(g.route_a("laplacian_h", phi, k), phi) * ctx.abs2(h)
    ctx.check_equal("integrated-defect", lhs, rhs)


def _gamma(ctx: Context) -> Form:
    def build():
        c = bal.classify_metric(ctx.model, ctx.metric)
        return c.degenerate_witness

    return ctx.memo("gamma", build)


def _sup_norm2(ctx: Context, form: Form):
    return herm.pointwise_norm2(ctx.metric, form)


def _i7(ctx: Context, rng, trial):
    g, n = ctx.g, ctx.n
    gamma = _gamma(ctx)
    ctx.check_equal("d gamma = w_{n-1}", g.d(gamma), ctx.wpow(n - 1))
    G2 = ctx.memo("gamma-sup2", lambda: ctx.real("sup", _sup_norm2(ctx, gamma)))
    bideg = (n, n - 1) if rng.random() < 0.5 else (n - 1, n)
    psi = random_form(ctx, rng, bidegree=bideg)
    energy = ctx.real("energy", g.l2(g.route_b("laplacian_d", psi), psi))
    norm2 = ctx.real("norm", g.l2(psi, psi))
    lhs = 4 * G2 * energy
    ctx.check_true("lower-bound", lhs >= norm2, float(norm2 - lhs), psi)


def _twisted_gamma(ctx: Context, gamma: Form, h) -> Form:
    n = ctx.n
    pieces = {(n, n - 3): h, (n - 1, n - 2): ctx.c(1), (n - 2, n - 1): ctx.c(1) / h, (n - 3, n): ctx.c(1) / (h * h)}
    out = Form.zero(n, gamma.ring)
    for (p, q), f in pieces.items():
        if p < 0 or q < 0:
            continue
        out = out + gamma.component(p, q).scale(f)
    return out


def _i8(ctx: Context, rng, trial):
    g, n = ctx.g, ctx.n
    h = ctx.h_for(trial)
    k = ctx.dual_h(h)
    gamma = _gamma(ctx)
    gk = _twisted_gamma(ctx, gamma, k)
    ctx.check_equal("d_k gamma_k = w_{n-1}", g.d_h(k, gk), ctx.wpow(n - 1))
    G2 = ctx.real("sup", _sup_norm2(ctx, gk))
    hh = ctx.abs2(h)
    C2 = max(ctx.c(1).re, (ctx.c(1) / hh).re)
    psi = random_form(ctx, rng, degree=2 * n - 1)
    a = ctx.real("a", g.l2(g.route_b("laplacian_h", psi, h), psi))
    b = ctx.real("b", g.l2(g.route_b("laplacian_h", psi, k), psi))
    norm2 = ctx.real("norm", g.l2(psi, psi))
    # ||psi||^2 <= C^2 G^2 (a + b + 2 sqrt(ab)), decided without square roots
    y = norm2 / (C2 * G2) - a - b
    ok = y <= 0 or y * y <= 4 * a * b
    ctx.notes["gamma_norm"] = "pointwise sup norm (L-infinity)"
    ctx.check_true("twisted-bound", ok, float(y), psi)


def _i9(ctx: Context, rng, trial):
    g, n = ctx.g, ctx.n
    h = ctx.h_for(trial)
    alpha = random_form(ctx, rng, degree=2)
    L = lambda x: ctx.L(n - 1, x)
    lhs = g.route_b("laplacian_h", L(alpha), h) - L(g.route_b("laplacian_h", alpha, h))
    lam = herm.lambda_adj(ctx.metric, alpha)
    hh = ctx.abs2(h)
    rhs = L(g.del_(g.delbar(lam))).scale(-(hh + ctx.c(1)) * ctx.i) - L(g.route_a("laplacian_h", alpha, h))
    ctx.check_equal("two-form-defect", lhs, rhs)


def _i10(ctx: Context, rng, trial):
    g, n = ctx.g, ctx.n
    h = ctx.h_for(trial)
    alpha = random_form(ctx, rng, degree=2)
    psi = ctx.L(n - 1, alpha)
    lhs = g.l2(g.route_b("laplacian_h", psi, h), psi)
    f = herm.lambda_adj(ctx.metric, alpha)
    df = g.delbar(f)
    rhs = g.l2_density(df, df) * (ctx.abs2(h) + ctx.c(1))
    ctx.check_equal("two-form-integrated", lhs, rhs)


def _i11(ctx: Context, rng, trial):
    g = ctx.g
    f = random_form(ctx, rng, degree=0)
    lap = g.route_b("Lambda", g.del_(g.delbar(f)).scale(ctx.i))
    lhs = g.l2(lap, f)
    df = g.delbar(f)
    rhs = -g.l2_density(df, df)
    ctx.check_equal("laplacian-pairing", lhs, rhs)
    coeff = f.data.get(ctx.alg.unit)
    if coeff is not None:
        j = rng.randint(1, ctx.n)
        base = [rng.random() for _ in range(2 * ctx.n)]
        err = finite_difference_delbar(ctx.model, coeff, j, base=base)
        ctx.max_residual = max(ctx.max_residual, 0.0)
        ctx.notes["finite_difference_max"] = max(ctx.notes.get("finite_difference_max", 0.0), err)
        ctx.check_true("finite-difference-delbar", err <= FD_TOLERANCE, err)


def _tau_harmonic(ctx: Context) -> List[Form]:
    return ctx.memo("tau-11", lambda: harmonic_space(ctx.model, ctx.metric, "tau", bidegree=(1, 1), tol=ctx.tol))


def _i12(ctx: Context, rng, trial):
    n = ctx.n
    basis = _tau_harmonic(ctx)
    ctx.notes["tau_harmonic_11_dim"] = len(basis)
    if not basis:
        return
    alpha = random_combination(ctx, rng, basis)
    lam = herm.lambda_adj(ctx.metric, alpha)
    unit = ctx.alg.unit
    top = ctx.alg.top
    c = lam.data.get(unit)
    if ctx.torus:
        nonconst = 0.0
        if c is not None:
            nonconst = max((abs(v) for k, v in c.terms.items() if any(k)), default=0.0)
        ctx.check_true("lambda-constant", nonconst <= ctx.tol, nonconst, alpha)
        c = c.constant_term(n) if c is not None else 0j
        wedge = alpha.wedge(ctx.wpow(n - 1)).data.get(top)
        wtop = complex(ctx.metric.omega_power(n).data[top])
        ratio = (wedge.constant_term(n) if wedge is not None else 0j) / wtop
        ctx.check_equal("T-map", c, ratio)
        return
    c = c if c is not None else ZERO
    wedge = alpha.wedge(ctx.wpow(n - 1)).data.get(top, ZERO)
    ctx.check_equal("T-map", c, wedge / ctx.wpow(n).data[top])


def _commutation_sides(ctx: Context, u: Form):
    g = ctx.g
    B = lambda kind, x: g.route_b(kind, x)
    i = ctx.i
    return [
        ("i[Lambda, delbar]", (B("Lambda", g.delbar(u)) - g.delbar(B("Lambda", u))).scale(i), g.del_star_a(u) + g.tau_star_a(u)),
        ("-i[Lambda, del]", (B("Lambda", g.del_(u)) - g.del_(B("Lambda", u))).scale(-i), g.delbar_star_a(u) + g.tau_bar_star_a(u)),
        ("i[L, delbar_star]", (B("L", B("delbar_star", u)) - B("delbar_star", B("L", u))).scale(i), g.del_(u) + g.tau_a(u)),
        ("-i[L, del_star]", (B("L", B("del_star", u)) - B("del_star", B("L", u))).scale(-i), g.delbar(u) + g.tau_bar_a(u)),
    ]


def _i13(ctx: Context, rng, trial):
    u = random_form(ctx, rng, degree=rng.randint(0, 2 * ctx.n))
    for label, lhs, rhs in _commutation_sides(ctx, u):
        ctx.check_equal(label, lhs, rhs)


def _i14(ctx: Context, rng, trial):
    g = ctx.g
    u = random_form(ctx, rng, degree=rng.randint(0, 2 * ctx.n))
    lhs = g.route_b("laplacian_tau", u)
    rhs = g.route_a("laplacian_tau_prime", u) + g.route_a("laplacian_delbar", u)
    ctx.check_equal("tau-laplacian-split", lhs, rhs)


def _random_primitive(ctx: Context, rng, k: int, bidegree=None) -> Form:
    u = random_form(ctx, rng, degree=None if bidegree else k, bidegree=bidegree)
    return herm.primitive_part(ctx.metric, u)


def _i15(ctx: Context, rng, trial):
    n = ctx.n
    k = rng.randint(0, n)
    r = rng.randint(0, n - k)
    p1, p2 = _random_primitive(ctx, rng, k), _random_primitive(ctx, rng, k)
    w = ctx.wraw(r)
    lhs = herm.inner(ctx.metric, w.wedge(p1), w.wedge(p2))
    rhs = herm.inner(ctx.metric, p1, p2) * ctx.c(herm.primitive_norm_constant(n, k, r))
    ctx.check_equal(f"lefschetz-norm(n={n},k={k},r={r})", lhs, rhs)


def _i16(ctx: Context, rng, trial):
    n = ctx.n
    k = rng.randint(2, n) if n >= 2 else 0
    if k < 2:
        return
    s = rng.randint(1, k // 2)
    r = rng.randint(0, n - k)
    v = _random_primitive(ctx, rng, k)
    u = random_form(ctx, rng, degree=k - 2 * s)
    lhs = herm.inner(ctx.metric, ctx.wraw(r + s).wedge(u), ctx.wraw(r).wedge(v))
    ctx.check_equal(f"orthogonality(k={k},r={r},s={s})", lhs, ctx.c(0))


def _i17(ctx: Context, rng, trial):
    n = ctx.n
    k = rng.randint(0, n)
    r = rng.randint(0, n - k)
    phi1 = random_form(ctx, rng, degree=k)
    pieces1 = herm.lefschetz_decompose(ctx.metric, phi1)
    rebuilt = Form.zero(n, phi1.ring)
    for s, piece in enumerate(pieces1):
        rebuilt = rebuilt + ctx.wraw(s).wedge(piece)
    ctx.check_equal("reassembly", rebuilt, phi1)
    phi2 = random_form(ctx, rng, degree=k)
    pieces2 = herm.lefschetz_decompose(ctx.metric, phi2)
    w = ctx.wraw(r)
    inner = lambda a, b: herm.inner(ctx.metric, a, b)
    lhs = inner(w.wedge(phi1), w.wedge(phi2))
    rhs = ctx.c(0)
    for s, (a, b) in enumerate(zip(pieces1, pieces2)):
        const = math.factorial(r + s) ** 2 * math.comb(n - k + 2 * s, r + s)
        rhs = rhs + inner(a, b) * ctx.c(const)
    ctx.check_equal("expansion", lhs, rhs)
    consts = [herm.appendix_constant(n, k, r, s) for s in range(k // 2 + 1)]
    A, B = min(consts), max(consts)
    top = ctx.real("norm-top", inner(w.wedge(phi1), w.wedge(phi1)))
    base = ctx.real("norm", inner(phi1, phi1))
    ctx.check_true("sandwich-lower", A * base <= top, float(A * base - top), phi1)
    ctx.check_true("sandwich-upper", top <= B * base, float(top - B * base), phi1)
    # products whose primitive pairings are all non-negative
    phi3 = Form.zero(n, phi1.ring)
    for s, piece in enumerate(pieces1):
        phi3 = phi3 + ctx.wraw(s).wedge(piece.scale(random_positive_rational(rng)))
    prod_top = ctx.real("product-top", inner(w.wedge(phi1), w.wedge(phi3)))
    prod = ctx.real("product", inner(phi1, phi3))
    ctx.check_true("product-lower", A * prod <= prod_top, float(A * prod - prod_top), phi3)
    ctx.check_true("product-upper", prod_top <= B * prod, float(prod_top - B * prod), phi3)


def _i18(ctx: Context, rng, trial):
    n = ctx.n
    k = rng.randint(0, n)
    p = rng.randint(0, k)
    q = k - p
    v = _random_primitive(ctx, rng, k, bidegree=(p, q))
    sign = -1 if (k * (k + 1) // 2) % 2 else 1
    ipow = I_UNIT ** ((p - q) % 4)
    rhs = ctx.wpow(n - k).wedge(v).scale(ipow * sign)
    ctx.check_equal(f"star-primitive({p},{q})", herm.hodge_star(ctx.metric, v), rhs)


def _i19(ctx: Context, rng, trial):
    hyp = ctx.memo("ddbar", lambda: bal.ddbar_hypothesis_check(ctx.model))
    ctx.notes["ddbar_hypothesis"] = hyp.holds
    if not hyp.holds:
        ctx.notes["isomorphism_claim"] = "not applicable: hypothesis fails"
        return
    rep = bal.hard_lefschetz_map(ctx.model, ctx.metric, audit_trials=1, seed=rng.getrandbits(32))
    ctx.check_true("audit", rep.audit_passed)
    ctx.check_true("isomorphism", rep.injective and rep.surjective and rep.domain_dim == rep.target_dim, float(rep.domain_dim - rep.rank))


def _i20(ctx: Context, rng, trial):
    metric = ctx.metric.scaled(random_positive_rational(rng)) if trial else ctx.metric
    flags = bal.classify_metric(ctx.model, metric)
    if flags.balanced:
        r = bal.exact_power_matches_codimension(ctx.model, metric, "DR-H2")
        ctx.check_true("de-rham-codimension", r["consistent"])
    if flags.gauduchon:
        r = bal.exact_power_matches_codimension(ctx.model, metric, "BC-11")
        ctx.check_true("bott-chern-codimension", r["consistent"])


def _i21(ctx: Context, rng, trial):
    model, metric, g = ctx.model, ctx.metric, ctx.g
    flags = bal.classify_metric(model, metric)
    if flags.balanced and not flags.degenerate_balanced:
        hp = ctx.memo("hp-dr", lambda: bal.primitive_hyperplane(model, metric, "DR-H2"))
        wh = ctx.memo("wh-dr", lambda: bal.omega_harmonic(model, metric, "DR-H2")[0])
        coords = _random_kernel_vector(rng, hp)
        beta = hp.space.class_from_coordinates(coords).representative
        alpha = bal.primitive_representative(model, metric, beta)
        ctx.check_equal("representative-primitive", ctx.L(model.n - 1, alpha), Form.zero(ctx.n, EXACT))
        ctx.check_equal("orthogonal-primitive-rep", g.l2(wh, alpha), ZERO)
        shifted = beta + model.d(random_form(ctx, rng, degree=1))
        ctx.check_equal("orthogonal-closed-rep", g.l2(wh, shifted), ZERO)
    if flags.gauduchon and not flags.aeppli_exact_power:
        hp = ctx.memo("hp-bc", lambda: bal.primitive_hyperplane(model, metric, "BC-11"))
        wh = ctx.memo("wh-bc", lambda: bal.omega_harmonic(model, metric, "BC-11")[0])
        coords = _random_kernel_vector(rng, hp)
        alpha = hp.space.class_from_coordinates(coords).representative
        alpha = alpha + model.del_(model.delbar(random_form(ctx, rng, degree=0)))
        ctx.check_equal("orthogonal-bc-rep", g.l2(wh, alpha), ZERO)


def _random_kernel_vector(rng, hp) -> list:
    weights = [random_gaussian(rng) for _ in hp.kernel]
    return [sum((w * v[i] for w, v in zip(weights, hp.kernel)), ZERO) for i in range(hp.space.dimension)]


def _i22(ctx: Context, rng, trial):
    g, n = ctx.g, ctx.n
    h = ctx.h_for(trial)
    k = ctx.dual_h(h)

    def spaces():
        ones = harmonic_space(ctx.model, ctx.metric, "h", degree=1, h=k, tol=ctx.tol)
        tops = harmonic_space(ctx.model, ctx.metric, "h", degree=2 * n - 1, h=h, tol=ctx.tol)
        return ones, tops

    ones, tops = ctx.memo(("bijection-spaces", str(h)), spaces)
    images = [ctx.L(n - 1, phi) for phi in ones]
    for img in images:
        ctx.check_equal("image-harmonic", g.route_b("laplacian_h", img, h), Form.zero(n, img.ring))
    ctx.check_true("dimension", len(ones) == len(tops), float(abs(len(ones) - len(tops))))
    if images:
        r = _rank_of_forms(ctx, images)
        ctx.check_true("injective", r == len(ones), float(len(ones) - r))
    if ones:
        phi = random_combination(ctx, rng, ones)
        ctx.check_equal("random-image-harmonic", g.route_b("laplacian_h", ctx.L(n - 1, phi), h), Form.zero(n, phi.ring))


def _rank_of_forms(ctx: Context, forms: List[Form]) -> int:
    if ctx.exact:
        idx = sorted({i for f in forms for i in f.data})
        rows = [[f.data.get(i, ZERO) for f in forms] for i in idx]
        return rank(rows, len(forms))
    if ctx.torus:
        keys = sorted({(i, fr) for f in forms for i, c in f.data.items() for fr in c.terms})
        mat = np.array([[f.data[i].terms.get(fr, 0j) if i in f.data else 0j for f in forms] for i, fr in keys])
    else:
        idx = sorted({i for f in forms for i in f.data})
        mat = np.array([[complex(f.data.get(i, 0)) for f in forms] for i in idx])
    return float_rank(mat, ctx.tol) if mat.size else 0


def _i23(ctx: Context, rng, trial):
    basis = _tau_harmonic(ctx)
    cert = ctx.memo("psd-cert", lambda: bal.psd_kernel_certificate(ctx.model, ctx.metric, basis))
    ctx.notes["psd_method"] = cert["method"]
    ctx.notes["tau_harmonic_11_dim"] = len(basis)
    ctx.check_true("only-zero", cert["only_zero"])
    if basis:
        alpha = random_combination(ctx, rng, basis)
        if alpha:
            ctx.check_true("random-not-semipositive", not bal.semipositive_11(alpha), witness=alpha)


CASES: Dict[str, IdentityCase] = {
    c.id: c
    for c in [
        IdentityCase("I1", "d-star of omega_{n-1} wedge a 1-form", run=_i1),
        IdentityCase("I2", "closed pure-type 1-forms give harmonic (2n-1)-forms", needs_balanced=True, run=_i2),
        IdentityCase("I3", "Jacobi form of the twisted commutator", needs_balanced=True, run=_i3),
        IdentityCase("I4", "twisted adjoint on omega_{n-1} wedge (1,1)", run=_i4),
        IdentityCase("I5", "commutation defect on 1-forms", needs_balanced=True, run=_i5),
        IdentityCase("I6", "integrated defect on 1-forms", needs_balanced=True, run=_i6),
        IdentityCase("I7", "Laplacian lower bound on pure-type (2n-1)-forms", needs_balanced=True, needs_degenerate=True, run=_i7),
        IdentityCase("I8", "twisted lower bound on (2n-1)-forms", needs_balanced=True, needs_degenerate=True, run=_i8),
        IdentityCase("I9", "commutation defect on 2-forms", needs_balanced=True, run=_i9),
        IdentityCase("I10", "integrated defect on 2-forms", needs_balanced=True, run=_i10),
        IdentityCase("I11", "Laplacian pairing on functions", needs_balanced=True, needs_torus=True, run=_i11),
        IdentityCase("I12", "trace of tau-harmonic (1,1)-forms is constant", needs_balanced=True, run=_i12),
        IdentityCase("I13", "Hermitian commutation relations", run=_i13),
        IdentityCase("I14", "tau-Laplacian splitting", run=_i14),
        IdentityCase("I15", "norm of omega^r on primitive forms", lie_only=True, run=_i15),
        IdentityCase("I16", "orthogonality of Lefschetz pieces", lie_only=True, run=_i16),
        IdentityCase("I17", "Lefschetz expansion and sandwich bounds", lie_only=True, run=_i17),
        IdentityCase("I18", "star on primitive forms", lie_only=True, run=_i18),
        IdentityCase("I19", "hard Lefschetz in degree 1", needs_balanced=True, lie_only=True, run=_i19),
        IdentityCase("I20", "codimension versus exactness of omega_{n-1}", lie_only=True, run=_i20),
        IdentityCase("I21", "omega_h orthogonal to primitive classes", lie_only=True, run=_i21),
        IdentityCase("I22", "Lefschetz bijection between twisted harmonic spaces", needs_balanced=True, run=_i22),
        IdentityCase("I23", "no semi-positive tau-harmonic (1,1)-forms", needs_balanced=True, needs_degenerate=True, run=_i23),
    ]
}
CASE_IDS = tuple(CASES)


# ---------------------------------------------------------------- reports


@dataclass
class IdentityReport:
    case: str
    model: str
    metric: str
    seed: int
    trials: int
    failures: int = 0
    max_residual: float = 0.0
    status: str = "pass"
    skip_reason: Optional[str] = None
    exact: bool = True
    first_failure: Optional[dict] = None
    notes: Dict[str, object] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "case": self.case,
            "model": self.model,
            "metric": self.metric,
            "seed": self.seed,
            "trials": self.trials,
            "failures": self.failures,
            "max_residual": self.max_residual,
            "status": self.status,
            "skip_reason": self.skip_reason,
            "exact": self.exact,
            "first_failure": self.first_failure,
            "notes": {k: self.notes[k] for k in sorted(self.notes)},
        }


def trial_rng(seed: int, case: str, model: str, metric: str, trial: int) -> random.Random:
    return random.Random(f"{seed}:{case}:{model}:{metric}:{trial}")


def run_case(case, model, metric, trials: int, seed: int = 0, tolerance: float = DEFAULT_TOLERANCE, h_values: Optional[Sequence] = None) -> IdentityReport:
    """Run ``trials`` random trials of one case on one (model, metric) pair."""
    if isinstance(case, str):
        if case not in CASES:
            raise ConfigError(f"unknown identity case {case!r}")
        case = CASES[case]
    metric_name = metric.name or str(metric.key())
    hv = list(h_values) if h_values is not None else h_grid(seed)
    ctx = Context(model, metric, tolerance, hv)
    report = IdentityReport(case.id, model.name, metric_name, seed, trials, exact=ctx.exact)
    if trials <= 0:
        report.status = "skip"
        report.skip_reason = "no trials"
        return report
    reason = _skip_reason(case, ctx)
    if reason:
        report.status = "skip"
        report.skip_reason = reason
        return report
    for t in range(trials):
        rng = trial_rng(seed, case.id, model.name, metric_name, t)
        try:
            case.run(ctx, rng, t)
        except Failure as exc:
            report.failures += 1
            report.max_residual = max(report.max_residual, float(exc.residual))
            if report.first_failure is None:
                report.first_failure = {
                    "trial": t,
                    "assertion": exc.label,
                    "residual": float(exc.residual),
                    "witness": exc.witness.serialize() if exc.witness is not None else None,
                }
    report.max_residual = max(report.max_residual, ctx.max_residual) if not ctx.exact else report.max_residual
    report.notes = dict(ctx.notes)
    report.status = "fail" if report.failures else "pass"
    return report


def h_grid(seed: int) -> List[str]:
    """The fixed h values plus three seeded random nonzero Gaussian rationals."""
    rng = random.Random(f"{seed}:h-grid")
    extra = [random_gaussian(rng, nonzero=True).text() for _ in range(3)]
    return list(H_GRID) + extra


# ---------------------------------------------------------------- suites


@dataclass
class SuiteConfig:
    cases: Sequence[str] = CASE_IDS
    models: Sequence[str] = ("torus2", "torus3", "iwasawa", "sl2c", "ftorus2")
    metrics: Optional[Dict[str, Sequence[str]]] = None
    trials: int = 100
    seed: int = 0
    tolerance: float = DEFAULT_TOLERANCE
    threads: int = 1

    @classmethod
    def from_dict(cls, data: dict) -> "SuiteConfig":
        known = {"cases", "models", "metrics", "trials", "seed", "tolerance", "threads"}
        extra = set(data) - known
        if extra:
            raise ConfigError(f"unknown configuration keys: {', '.join(sorted(extra))}")
        return cls(**data)


@dataclass
class SuiteReport:
    config: dict
    validation: Dict[str, dict]
    reports: List[IdentityReport]

    @property
    def passed(self) -> bool:
        return all(v["ok"] for v in self.validation.values()) and all(r.status != "fail" for r in self.reports)

    def summary(self) -> dict:
        per_case: Dict[str, dict] = {}
        for r in self.reports:
            s = per_case.setdefault(r.case, {"pass": 0, "fail": 0, "skip": 0, "max_residual": 0.0})
            s[r.status] += 1
            s["max_residual"] = max(s["max_residual"], r.max_residual)
        return {
            "passed": self.passed,
            "failures": sum(r.failures for r in self.reports),
            "invalid_models": sorted(k for k, v in self.validation.items() if not v["ok"]),
            "cases": {k: per_case[k] for k in sorted(per_case, key=_case_order)},
        }

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "validation": {k: self.validation[k] for k in sorted(self.validation)},
            "summary": self.summary(),
            "reports": [r.to_dict() for r in self.reports],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def _case_order(cid: str) -> int:
    return int(cid[1:]) if cid[1:].isdigit() else 10**6


def _resolve_models(names: Sequence[str]):
    out = []
    for name in names:
        try:
            out.append(resolve_model(name))
        except KeyError as exc:
            raise ConfigError(f"unknown model {name!r}") from exc
        except FileNotFoundError as exc:
            raise ConfigError(f"model manifest not found: {name}") from exc
        except ManifestError as exc:
            raise ConfigError(f"bad manifest {name}: {exc}") from exc
    return out


def run_suite(config) -> SuiteReport:
    """Run the case × model × metric grid; results are independent of ``threads``."""
    if isinstance(config, dict):
        config = SuiteConfig.from_dict(config)
    for cid in config.cases:
        if cid not in CASES:
            raise ConfigError(f"unknown identity case {cid!r}")
    models = _resolve_models(config.models)
    validation = {}
    jobs: List[Tuple[str, object, object]] = []
    for model in models:
        rep = validate_model(model)
        validation[model.name] = rep.to_dict()
        if not rep.ok:
            continue
        names = (config.metrics or {}).get(model.name) or model.default_metrics
        for mname in names:
            try:
                metric = herm.model_metric(model, mname)
            except KeyError as exc:
                raise ConfigError(str(exc)) from exc
            for cid in config.cases:
                jobs.append((cid, model, metric))
    hv = h_grid(config.seed)

    def work(job):
        cid, model, metric = job
        return run_case(cid, model, metric, config.trials, config.seed, config.tolerance, hv)

    if config.threads > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            reports = list(pool.map(work, jobs))
    else:
        reports = [work(j) for j in jobs]
    reports.sort(key=lambda r: (_case_order(r.case), r.model, r.metric))
    cfg = {
        "cases": list(config.cases),
        "models": list(config.models),
        "metrics": {k: list(v) for k, v in sorted((config.metrics or {}).items())},
        "trials": config.trials,
        "seed": config.seed,
        "tolerance": config.tolerance,
        "h_grid": hv,
    }
    return SuiteReport(cfg, validation, reports)
