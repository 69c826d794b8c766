"""Balanced and Gauduchon metrics: classification, class-level Lefschetz maps,
primitive hyperplanes in degree 2 and the λ-coefficient decomposition.

Everything on exact models is computed in Gaussian rationals and compared
with ``==``.  The few float paths (irrational scalings for n = 3, the Fourier
torus) use an explicit tolerance and say so in their reports.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import hermitian as herm
from .cohomology import (
    TOL,
    ClosednessViolation,
    CohomologySpace,
    compute_space,
    harmonic_projection,
    is_exact,
    _columns,
    _dense,
    _project,
)
from .forms import DegreeError, Form
from .linalg import nullspace, rank, solve, solve_least_norm
from .models import ModelMismatch, TorusModel
from .operators import geometry, harmonic_space
from .scalars import EXACT, FLOAT, I_UNIT, ONE, ZERO, GaussianRational, lift


class NotBalanced(ValueError):
    pass


class MetricFlagViolation(ValueError):
    pass


class NotPrimitiveClass(ValueError):
    pass


class DegenerateClassError(ValueError):
    pass


class NonRealClass(ValueError):
    pass


class NotDegenerateBalanced(ValueError):
    pass


def _exact_model(model) -> bool:
    return model.ring == EXACT and not isinstance(model, TorusModel)


def _const(model, form: Form) -> Form:
    return herm.constant_form(form, model.ring)


def _is_zero(model, f: Form) -> bool:
    if _exact_model(model):
        return not f
    return f.max_abs() <= TOL


# ---------------------------------------------------------------- classification


@dataclass
class MetricClassification:
    kahler: bool
    balanced: bool
    gauduchon: bool
    degenerate_balanced: bool
    degenerate_witness: Optional[Form] = None
    degenerate_certificate: Optional[dict] = None
    aeppli_exact_power: bool = False
    aeppli_witness: Optional[tuple] = None
    aeppli_certificate: Optional[dict] = None

    def to_dict(self) -> dict:
        out = {
            "kahler": self.kahler,
            "balanced": self.balanced,
            "gauduchon": self.gauduchon,
            "degenerate_balanced": self.degenerate_balanced,
            "aeppli_exact_power": self.aeppli_exact_power,
        }
        if self.degenerate_witness is not None:
            out["degenerate_witness"] = self.degenerate_witness.serialize()
        if self.degenerate_certificate is not None:
            out["degenerate_certificate"] = _cert_text(self.degenerate_certificate)
        if self.aeppli_witness is not None:
            out["aeppli_witness"] = [w.serialize() for w in self.aeppli_witness]
        if self.aeppli_certificate is not None:
            out["aeppli_certificate"] = _cert_text(self.aeppli_certificate)
        return out


def _cert_text(cert: dict) -> dict:
    return {k: (v.text() if isinstance(v, GaussianRational) else repr(complex(v))) for k, v in sorted(cert.items())}


def classify_metric(model, metric) -> MetricClassification:
    """Kähler, balanced, Gauduchon and degenerate-balanced flags from exact tests."""
    cache = model._cache.setdefault("classification", {})
    key = metric.key()
    if key in cache:
        return cache[key]
    n = model.n
    w = _const(model, metric.omega())
    wn1 = _const(model, metric.omega_power(n - 1))
    kahler = _is_zero(model, model.d(w))
    balanced = _is_zero(model, model.d(wn1))
    gauduchon = _is_zero(model, model.del_(model.delbar(wn1)))
    result = MetricClassification(kahler, balanced, gauduchon, False)
    if balanced:
        ex = is_exact(model, wn1, "d")
        result.degenerate_balanced = ex.exact
        result.degenerate_witness = ex.witness if ex.exact else None
        result.degenerate_certificate = ex.certificate
    if gauduchon:
        ex = is_exact(model, wn1, "del_plus_delbar")
        result.aeppli_exact_power = ex.exact
        result.aeppli_witness = ex.witness if ex.exact else None
        result.aeppli_certificate = ex.certificate
    cache[key] = result
    return result


def require_balanced(model, metric) -> MetricClassification:
    c = classify_metric(model, metric)
    if not c.balanced:
        raise NotBalanced(f"metric {metric.name or metric.key()} is not balanced on {model.name}")
    return c


# ---------------------------------------------------------------- hard Lefschetz


@dataclass
class HardLefschetzReport:
    matrix: List[List]
    rank: int
    domain_dim: int
    target_dim: int
    injective: bool
    surjective: bool
    audit_passed: bool
    audit_trials: int

    def to_dict(self) -> dict:
        return {
            "matrix": [[_scalar_text(x) for x in row] for row in self.matrix],
            "rank": self.rank,
            "domain_dim": self.domain_dim,
            "target_dim": self.target_dim,
            "injective": self.injective,
            "surjective": self.surjective,
            "audit_passed": self.audit_passed,
            "audit_trials": self.audit_trials,
        }


def _scalar_text(x) -> str:
    if isinstance(x, GaussianRational):
        return x.text()
    c = complex(x)
    return f"{c.real!r},{c.imag!r}"


def _random_exact_form(model, degree: int, rng: random.Random) -> Form:
    """d of a random (degree-1)-form with small Gaussian-rational coefficients."""
    if degree <= 0:
        return Form.zero(model.n, model.ring)
    alg = model.alg
    data = {}
    for i in alg.by_degree[degree - 1]:
        data[i] = GaussianRational(rng.randint(-3, 3), rng.randint(-3, 3))
    eta = Form.from_data(alg, EXACT, {i: c for i, c in data.items() if c})
    return model.d(eta)


def _lefschetz_matrix(model, wn1: Form, h1: CohomologySpace, h_top: CohomologySpace, reps: Sequence[Form]) -> List[List]:
    cols = [h_top.coordinates(wn1.wedge(b)) for b in reps]
    return [[cols[j][i] for j in range(len(reps))] for i in range(h_top.dimension)]


def hard_lefschetz_map(model, metric, audit_trials: int = 5, seed: int = 0) -> HardLefschetzReport:
    """Matrix of {ω_{n-1}} ∧ · : H^1 → H^{2n-1} in the computed bases.

    The audit recomputes the matrix with every representative (and ω_{n-1}
    itself) shifted by random exact forms; the matrices must be identical.
    """
    if not _exact_model(model):
        raise ModelMismatch("class-level Lefschetz maps are computed on exact Lie models")
    require_balanced(model, metric)
    n = model.n
    wn1 = metric.omega_power(n - 1)
    h1 = compute_space(model, "DR", 1)
    htop = compute_space(model, "DR", 2 * n - 1)
    mat = _lefschetz_matrix(model, wn1, h1, htop, h1.basis)
    rng = random.Random(f"hard-lefschetz:{seed}:{model.name}:{metric.key()}")
    audit = True
    for _ in range(audit_trials):
        reps = [b + _random_exact_form(model, 1, rng) for b in h1.basis]
        shifted = wn1 + _random_exact_form(model, 2 * n - 2, rng)
        if _lefschetz_matrix(model, shifted, h1, htop, reps) != mat:
            audit = False
    r = rank([list(row) for row in mat], h1.dimension) if mat and h1.dimension else 0
    return HardLefschetzReport(mat, r, h1.dimension, htop.dimension, r == h1.dimension, r == htop.dimension, audit, audit_trials)


# ---------------------------------------------------------------- ∂∂̄ hypothesis


@dataclass
class DdbarHypothesisReport:
    holds: bool
    closed_del_exact_dim: int
    witness: Optional[Form] = None
    preimage: Optional[Form] = None
    certificate: Optional[dict] = None

    def to_dict(self) -> dict:
        out = {"holds": self.holds, "closed_del_exact_dim": self.closed_del_exact_dim}
        if self.witness is not None:
            out["witness"] = self.witness.serialize()
            out["preimage"] = self.preimage.serialize()
            out["certificate"] = _cert_text(self.certificate)
        return out


def ddbar_hypothesis_check(model) -> DdbarHypothesisReport:
    """Every d-closed (1,1)-form in Im ∂ is in Im ∂∂̄; otherwise a witness v = ∂w."""
    if isinstance(model, TorusModel):
        return _ddbar_numeric(model)
    if model.ring != EXACT:
        raise ModelMismatch("the ∂∂̄ hypothesis check needs an exact or Fourier model")
    alg = model.alg
    src = alg.by_bidegree[(0, 1)]
    rows11 = alg.by_bidegree[(1, 1)]
    rows3 = alg.by_degree[3]
    delcols = _columns(model, "del")
    # w ↦ d∂w on (0,1)-forms, then V = ∂(ker)
    dd = []
    for j in src:
        v = model.d(Form.from_data(alg, EXACT, dict(delcols[j])))
        dd.append(v)
    mat = [[dd[c].data.get(i, ZERO) for c in range(len(src))] for i in rows3]
    kern = nullspace([r for r in mat if any(r)], len(src))
    vs = []
    for vec in kern:
        w = Form.from_data(alg, EXACT, {src[i]: x for i, x in enumerate(vec) if x})
        v = model.del_(w)
        if v:
            vs.append((w, v))
    image_src = alg.by_bidegree[(0, 0)]
    ddbar = _columns(model, "ddbar")
    amat = _dense(ddbar, rows11, image_src)
    for w, v in vs:
        res = solve(amat, len(image_src), [v.data.get(i, ZERO) for i in rows11])
        if not res.ok:
            cert = {str(alg.basis[rows11[i]]): y for i, y in enumerate(res.certificate) if y}
            return DdbarHypothesisReport(False, len(vs), v, w, cert)
    return DdbarHypothesisReport(True, len(vs))


def _ddbar_numeric(model: TorusModel) -> DdbarHypothesisReport:
    from .operators import differential_block

    alg = model.alg
    src = alg.by_bidegree[(0, 1)]
    rows11 = alg.by_bidegree[(1, 1)]
    rows3 = alg.by_degree[3]
    f0 = alg.by_bidegree[(0, 0)]
    total = 0
    for k in model.frequencies():
        dl = differential_block(model, "del", k)
        db = differential_block(model, "delbar", k)
        d = dl + db
        dd = (d @ dl)[np.ix_(rows3, src)]
        if dd.size:
            _, s, vh = np.linalg.svd(dd)
            kern = vh[int(np.sum(s > TOL)):].conj().T
        else:
            kern = np.eye(len(src))
        v = dl[np.ix_(rows11, src)] @ kern
        img = (dl @ db)[np.ix_(rows11, f0)]
        rv = int(np.sum(np.linalg.svd(v, compute_uv=False) > TOL)) if v.size else 0
        total += rv
        both = np.hstack([img, v])
        r_img = int(np.sum(np.linalg.svd(img, compute_uv=False) > TOL))
        r_both = int(np.sum(np.linalg.svd(both, compute_uv=False) > TOL))
        if r_both > r_img:
            return DdbarHypothesisReport(False, total)
    return DdbarHypothesisReport(True, total)


# ---------------------------------------------------------------- primitive hyperplanes


HYPERPLANE_FLAVORS = ("DR-H2", "BC-11")


@dataclass
class PrimitiveHyperplane:
    """Kernel of the class map {ω_{n-1}} ∧ · (or [ω_{n-1}]_A ∧ ·) in degree 2."""

    space: CohomologySpace
    functional: List
    kernel: List[List]
    codimension: int
    flavor: str

    def contains(self, coords: Sequence) -> bool:
        s = sum((a * b for a, b in zip(self.functional, coords)), lift(ZERO, EXACT) if self.exact else 0j)
        return not s if self.exact else abs(s) <= TOL

    @property
    def exact(self) -> bool:
        return _exact_model(self.space.model)

    @property
    def dimension(self) -> int:
        return len(self.kernel)

    def to_dict(self) -> dict:
        return {
            "flavor": self.flavor,
            "ambient_dim": self.space.dimension,
            "dimension": self.dimension,
            "codimension": self.codimension,
            "functional": [_scalar_text(x) for x in self.functional],
        }


def _space_for(model, flavor: str) -> CohomologySpace:
    if flavor == "DR-H2":
        return compute_space(model, "DR", 2)
    if flavor == "BC-11":
        return compute_space(model, "BC", (1, 1))
    raise ValueError(f"unknown hyperplane flavor {flavor!r}; expected one of {', '.join(HYPERPLANE_FLAVORS)}")


def class_functional(model, wn1: Form, space: CohomologySpace) -> List:
    """b ↦ ∫ ω_{n-1} ∧ b on the basis of ``space``."""
    return [model.integrate(wn1.wedge(b)) for b in space.basis]


def primitive_hyperplane(model, metric, flavor: str = "DR-H2") -> PrimitiveHyperplane:
    if not _exact_model(model):
        raise ModelMismatch("primitive hyperplanes are computed on exact Lie models")
    c = classify_metric(model, metric)
    if flavor == "DR-H2" and not c.balanced:
        raise MetricFlagViolation("the De Rham primitive hyperplane needs a balanced metric")
    if flavor == "BC-11" and not c.gauduchon:
        raise MetricFlagViolation("the Bott-Chern primitive hyperplane needs a Gauduchon metric")
    space = _space_for(model, flavor)
    wn1 = metric.omega_power(model.n - 1)
    row = class_functional(model, wn1, space)
    kernel = nullspace([row] if any(row) else [], space.dimension)
    codim = 1 if any(row) else 0
    return PrimitiveHyperplane(space, row, kernel, codim, flavor)


def exact_power_matches_codimension(model, metric, flavor: str = "DR-H2") -> Dict[str, object]:
    """Codimension 0 exactly when ω_{n-1} is d-exact (resp. in Im ∂ + Im ∂̄)."""
    hp = primitive_hyperplane(model, metric, flavor)
    c = classify_metric(model, metric)
    exact = c.degenerate_balanced if flavor == "DR-H2" else c.aeppli_exact_power
    cert = c.degenerate_certificate if flavor == "DR-H2" else c.aeppli_certificate
    cert_ok = True
    if not exact:
        # the certificate must vanish on the image and pair nontrivially with ω_{n-1}
        cert_ok = cert is not None and _certificate_valid(model, metric, cert, flavor)
    return {"codimension": hp.codimension, "power_exact": exact, "consistent": (hp.codimension == 0) == exact and cert_ok}


def _certificate_valid(model, metric, cert: dict, flavor: str) -> bool:
    alg = model.alg
    y = {alg.lookup(k): v for k, v in cert.items()}
    n = model.n
    wn1 = metric.omega_power(n - 1)
    pairing_u = sum((wn1.data.get(i, ZERO) * v for i, v in y.items()), ZERO)
    if not pairing_u:
        return False
    pieces = ["d"] if flavor == "DR-H2" else ["del", "delbar"]
    for which in pieces:
        cols = _columns(model, which)
        for j in alg.by_degree[2 * n - 3]:
            if sum((cols[j].get(i, ZERO) * v for i, v in y.items()), ZERO):
                return False
    return True


def primitive_representative(model, metric, beta: Form) -> Form:
    """A closed primitive form α with {α} = {β}, for β in the primitive hyperplane.

    Solves dΓ = ω_{n-1}∧β, writes Γ = ω_{n-1}∧u and returns α = β - du.
    """
    if not _exact_model(model):
        raise ModelMismatch("primitive representatives are computed on exact Lie models")
    require_balanced(model, metric)
    if model.d(beta):
        raise ClosednessViolation("β must be d-closed")
    n = model.n
    alg = model.alg
    wn1 = metric.omega_power(n - 1)
    target = wn1.wedge(beta)
    top = alg.by_degree[2 * n]
    src = alg.by_degree[2 * n - 1]
    mat = _dense(_columns(model, "d"), top, src)
    res = solve_least_norm(mat, len(src), [target.data.get(i, ZERO) for i in top])
    if not res.ok:
        raise NotPrimitiveClass("the class of β is not in the primitive hyperplane")
    gamma = Form.from_data(alg, EXACT, {src[i]: x for i, x in enumerate(res.solution) if x})
    ones = alg.by_degree[1]
    lmat = []
    images = [wn1.wedge(Form.from_data(alg, EXACT, {j: ONE})) for j in ones]
    for i in src:
        lmat.append([img.data.get(i, ZERO) for img in images])
    sol = solve(lmat, len(ones), [gamma.data.get(i, ZERO) for i in src])
    if not sol.ok:
        raise herm.EngineInconsistency("ω_{n-1} ∧ · is not onto (2n-1)-forms")
    u = Form.from_data(alg, EXACT, {ones[i]: x for i, x in enumerate(sol.solution) if x})
    return beta - model.d(u)


# ---------------------------------------------------------------- λ decomposition


@dataclass
class LefschetzH2Decomposition:
    flavor: str
    prim_coordinates: List
    lam: object
    lam_integral: object
    omega_h: Form
    omega_h_coordinates: List
    routes_agree: bool
    background: Optional[str] = None
    omega_exact_component_zero: bool = True

    def to_dict(self) -> dict:
        return {
            "flavor": self.flavor,
            "lambda": _scalar_text(self.lam),
            "lambda_integral": _scalar_text(self.lam_integral),
            "routes_agree": self.routes_agree,
            "prim_coordinates": [_scalar_text(x) for x in self.prim_coordinates],
            "omega_h": self.omega_h.serialize(),
            "omega_h_coordinates": [_scalar_text(x) for x in self.omega_h_coordinates],
            "background": self.background,
            "omega_exact_component_zero": self.omega_exact_component_zero,
        }


def omega_harmonic(model, metric, flavor: str = "DR-H2", background=None):
    """ω_h: harmonic part of ω, w.r.t. ``metric`` or the background metric ρ.

    Returns (ω_h, whether the Im d (resp. Im ∂∂̄) component of ω vanishes).
    """
    w = metric.omega()
    rho = background if background is not None else metric
    if background is None:
        proj = "d_star" if flavor == "DR-H2" else "BC_star"
        return harmonic_projection(model, metric, w, proj).harmonic, True
    g = geometry(model, rho)
    if flavor == "DR-H2":
        hb = harmonic_space(model, rho, "d", degree=2)
    else:
        hb = harmonic_space(model, rho, "BC", bidegree=(1, 1))
    wh = _project(g, w, hb)
    rest = w - wh
    coclosed = not g.route_b("d_star" if flavor == "DR-H2" else "ddbar_star", rest)
    return wh, coclosed


def lefschetz_h2_decompose(model, metric, beta: Form, flavor: str = "DR-H2", background=None) -> LefschetzH2Decomposition:
    """Write {β} = prim + λ {ω_h}; λ from a coordinate solve and from the integral formula."""
    hp = primitive_hyperplane(model, metric, flavor)
    space = hp.space
    wh, coclosed = omega_harmonic(model, metric, flavor, background)
    wcoords = space.coordinates(wh)
    if not any(wcoords):
        raise DegenerateClassError("the class of ω_h is zero")
    coords = space.coordinates(beta)
    # coordinate route: coords = K x + λ w with K the hyperplane basis
    cols = list(hp.kernel) + [wcoords]
    mat = [[cols[j][i] for j in range(len(cols))] for i in range(space.dimension)]
    res = solve(mat, len(cols), coords)
    if not res.ok:
        raise DegenerateClassError("{ω_h} lies in the primitive hyperplane")
    lam = res.solution[-1]
    prim = [c - lam * w for c, w in zip(coords, wcoords)]
    wn1 = metric.omega_power(model.n - 1)
    num = model.integrate(wn1.wedge(beta))
    if background is None:
        den = geometry(model, metric).l2(wh, wh)
    else:
        den = model.integrate(wn1.wedge(wh))
    lam_int = num / den
    return LefschetzH2Decomposition(
        flavor, prim, lam, lam_int, wh, wcoords, lam == lam_int, background.name if background is not None else None, coclosed
    )


def sign_partition(model, metric, beta: Form, flavor: str = "DR-H2") -> str:
    """"+", "prim" or "-" according to the sign of λ for a real class."""
    space = _space_for(model, flavor)
    diff = beta - beta.conjugate()
    if any(space.coordinates(diff)):
        raise NonRealClass("the class is not fixed by conjugation")
    dec = lefschetz_h2_decompose(model, metric, beta, flavor)
    lam = dec.lam
    if lam.im:
        raise herm.EngineInconsistency("λ of a real class has a nonzero imaginary part")
    if lam.re > 0:
        return "+"
    if lam.re < 0:
        return "-"
    return "prim"


# ---------------------------------------------------------------- rays and scaling


@dataclass
class ScalingReport:
    c: object
    t: object
    same_hyperplane: bool
    power_ratio: object
    harmonic_ratio: object
    harmonic_proportional: bool
    ratio_positive: bool
    exact: bool
    residual: float = 0.0

    @property
    def passed(self) -> bool:
        return self.same_hyperplane and self.harmonic_proportional and self.ratio_positive

    def to_dict(self) -> dict:
        return {
            "c": str(self.c),
            "t": _scalar_text(self.t),
            "same_hyperplane": self.same_hyperplane,
            "power_ratio": _scalar_text(self.power_ratio),
            "harmonic_ratio": _scalar_text(self.harmonic_ratio),
            "harmonic_proportional": self.harmonic_proportional,
            "ratio_positive": self.ratio_positive,
            "exact": self.exact,
            "residual": self.residual,
            "passed": self.passed,
        }


def _proportional_rows(a: Sequence, b: Sequence, exact: bool) -> bool:
    """Whether the two functionals have the same kernel."""
    if exact:
        return rank([list(a), list(b)], len(a)) == rank([list(a)], len(a)) == rank([list(b)], len(b))
    m = np.array([[complex(x) for x in a], [complex(x) for x in b]])
    r = lambda x: int(np.sum(np.linalg.svd(x, compute_uv=False) > TOL)) if x.size else 0
    return r(m) == r(m[:1]) == r(m[1:])


def scaling_check(model, gamma, c: int) -> ScalingReport:
    """ω = c^{1/(n-1)} γ: same primitive hyperplane and ω_h = a γ_h with a > 0.

    When c^{1/(n-1)} is irrational the scaled metric is a float metric on the
    float copy of the model; comparisons then use the module tolerance.
    """
    if not _exact_model(model):
        raise ModelMismatch("scaling checks run on exact Lie models")
    require_balanced(model, gamma)
    n = model.n
    root = c ** (1.0 / (n - 1))
    exact_root = round(root)
    exact = abs(exact_root ** (n - 1) - c) == 0 and gamma.is_diagonal
    gh, _ = omega_harmonic(model, gamma)
    space = compute_space(model, "DR", 2)
    row_g = class_functional(model, gamma.omega_power(n - 1), space)
    if exact:
        omega = gamma.scaled(exact_root)
        require_balanced(model, omega)
        oh, _ = omega_harmonic(model, omega)
        row_o = class_functional(model, omega.omega_power(n - 1), space)
        same = _proportional_rows(row_o, row_g, True)
        power_ratio = _ratio_exact(omega.omega_power(n - 1), gamma.omega_power(n - 1))
        a = _ratio_exact(oh, gh)
        prop = a is not None and oh == gh.scale(a)
        pos = a is not None and not a.im and a.re > 0
        return ScalingReport(c, GaussianRational(exact_root), same, power_ratio, a, prop, pos, True)
    if not gamma.is_diagonal:
        raise herm.MetricMismatch("irrational scaling is available for diagonal metrics only")
    fmodel = model.as_float()
    omega = gamma.scaled(float(root))
    fo = herm.constant_form(omega.omega_power(n - 1), FLOAT)
    row_o = [fmodel.integrate(fo.wedge(b.to_float())) for b in space.basis]
    same = _proportional_rows(row_o, row_g, False)
    power_ratio = _ratio_float(fo, gamma.omega_power(n - 1).to_float())
    oh = harmonic_projection(fmodel, omega, herm.constant_form(omega.omega(), FLOAT), "d_star").harmonic
    ghf = gh.to_float()
    a = _ratio_float(oh, ghf)
    resid = (oh - ghf.scale(a)).max_abs() / max(1.0, oh.max_abs())
    prop = resid <= TOL
    pos = abs(a.imag) <= TOL and a.real > 0
    return ScalingReport(c, root, same, power_ratio, a, prop, pos, False, resid)


def _ratio_exact(u: Form, v: Form):
    for i, b in v.data.items():
        a = u.data.get(i)
        if a is None:
            return None
        return a / b
    return None


def _ratio_float(u: Form, v: Form) -> complex:
    num = sum((complex(u.data.get(i, 0)) * complex(b).conjugate() for i, b in v.data.items()), 0j)
    den = sum((abs(complex(b)) ** 2 for b in v.data.values()), 0.0)
    return num / den


def ray_check(model, omega, gamma) -> Dict[str, bool]:
    """Same primitive hyperplane exactly when {ω_{n-1}} = c{γ_{n-1}} with c > 0."""
    require_balanced(model, omega)
    require_balanced(model, gamma)
    n = model.n
    space = compute_space(model, "DR", 2)
    ro = class_functional(model, omega.omega_power(n - 1), space)
    rg = class_functional(model, gamma.omega_power(n - 1), space)
    same = _proportional_rows(ro, rg, True)
    top = compute_space(model, "DR", 2 * n - 2)
    co = top.coordinates(omega.omega_power(n - 1))
    cg = top.coordinates(gamma.omega_power(n - 1))
    ratio = None
    proportional = False
    for a, b in zip(co, cg):
        if b:
            ratio = a / b
            break
    if ratio is not None:
        proportional = all(x == ratio * y for x, y in zip(co, cg)) and not ratio.im and ratio.re > 0
    elif not any(co):
        proportional = True
    return {"same_hyperplane": same, "classes_proportional": proportional, "consistent": same == proportional or (not any(ro) and not any(rg))}


# ---------------------------------------------------------------- pseudo-effective sample test


def semipositive_11(form: Form) -> bool:
    """Whether a constant (1,1)-form i Σ a_{jk} e^j∧ē^k has a PSD matrix (a_{jk}).

    Uses all principal minors, which is exact for Hermitian matrices.
    """
    n = form.n
    alg = form.alg
    if any(alg.bidegree[i] != (1, 1) for i in form.data):
        raise DegreeError("semi-positivity is tested on (1,1)-forms")
    a = [[ZERO] * n for _ in range(n)]
    minus_i = GaussianRational(0, -1)
    for i, c in form.data.items():
        hol, anti = alg.masks[i]
        j = hol.bit_length() - 1
        k = anti.bit_length() - 1
        a[j][k] = c * minus_i
    for j in range(n):
        for k in range(n):
            if a[j][k] != a[k][j].conjugate():
                return False
    for size in range(1, n + 1):
        for idx in combinations(range(n), size):
            sub = [[a[r][s] for s in idx] for r in idx]
            det = _det(sub)
            if det.im or det.re < 0:
                return False
    return True


def _det(m: List[List]) -> GaussianRational:
    m = [list(r) for r in m]
    size = len(m)
    det = ONE
    for c in range(size):
        p = next((r for r in range(c, size) if m[r][c]), None)
        if p is None:
            return ZERO
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det = det * m[c][c]
        inv = m[c][c].inverse()
        for r in range(c + 1, size):
            f = m[r][c] * inv
            if f:
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return det


@dataclass
class PsefReport:
    passed: bool
    lambdas: Dict[str, object]
    failing_metrics: List[str]

    def to_dict(self) -> dict:
        return {"passed": self.passed, "lambdas": {k: _scalar_text(v) for k, v in sorted(self.lambdas.items())}, "failing_metrics": self.failing_metrics}


def psef_sample_test(model, t_form: Form, metrics: Sequence) -> PsefReport:
    """λ_ω([T]_BC) ≥ 0 for every sampled Gauduchon metric (a necessary condition only)."""
    lambdas = {}
    failing = []
    for m in metrics:
        if not classify_metric(model, m).gauduchon:
            raise MetricFlagViolation(f"metric {m.name} is not Gauduchon")
        dec = lefschetz_h2_decompose(model, m, t_form, "BC-11")
        name = m.name or str(m.key())
        lambdas[name] = dec.lam
        if dec.lam.im or dec.lam.re < 0:
            failing.append(name)
    return PsefReport(not failing, lambdas, failing)


# ---------------------------------------------------------------- vanishing on degenerate balanced


@dataclass
class VanishingReport:
    skipped: bool
    reason: str = ""
    checks: Dict[str, bool] = field(default_factory=dict)
    details: Dict[str, object] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.skipped or all(self.checks.values())

    def to_dict(self) -> dict:
        return {"skipped": self.skipped, "reason": self.reason, "checks": dict(sorted(self.checks.items())), "details": dict(sorted(self.details.items()))}


def tau_harmonic_11(model, metric) -> List[Form]:
    return harmonic_space(model, metric, "tau", bidegree=(1, 1))


def psd_kernel_certificate(model, metric, forms: List[Form]) -> Dict[str, object]:
    """Decide whether span(forms) contains a nonzero semi-positive (1,1)-form.

    A PSD form with Λα = 0 vanishes, so Λ ≡ 0 on the span certifies that only
    0 is semi-positive.  A one-dimensional span is decided directly.
    """
    lam = [herm.lambda_adj(metric, f) for f in forms]
    if all(not x for x in lam):
        return {"only_zero": True, "method": "trace-vanishes", "dimension": len(forms)}
    if len(forms) == 1:
        f = forms[0]
        pos = semipositive_11(f) or semipositive_11(-f)
        rot = semipositive_11(f.scale(I_UNIT)) or semipositive_11(f.scale(-I_UNIT))
        return {"only_zero": not (pos or rot), "method": "single-generator", "dimension": 1}
    return {"only_zero": False, "method": "undecided", "dimension": len(forms)}


def vanishing_checks_deg_bal(model, metric) -> VanishingReport:
    c = classify_metric(model, metric)
    if not c.degenerate_balanced:
        return VanishingReport(True, "not degenerate balanced")
    checks: Dict[str, bool] = {}
    details: Dict[str, object] = {}
    bc10 = compute_space(model, "BC", (1, 0)).dimension
    bc01 = compute_space(model, "BC", (0, 1)).dimension
    checks["bc_10_01_vanish"] = bc10 == 0 and bc01 == 0
    details["bc_10"] = bc10
    details["bc_01"] = bc01
    hyp = ddbar_hypothesis_check(model)
    details["ddbar_hypothesis"] = hyp.holds
    b1_rank = compute_space(model, "DR", 1).dimension
    b1_harm = len(harmonic_space(model, metric, "d", degree=1))
    details["b1_rank_nullity"] = b1_rank
    details["b1_harmonic"] = b1_harm
    checks["b1_routes_agree"] = b1_rank == b1_harm
    if hyp.holds:
        checks["b1_vanishes"] = b1_rank == 0
    alg = model.alg
    for bideg in ((1, 0), (0, 1)):
        cols = alg.by_bidegree[bideg]
        rows = alg.by_degree[2]
        mat = _dense(_columns(model, "d"), rows, cols)
        kdim = len(nullspace([r for r in mat if any(r)], len(cols)))
        checks[f"closed_{bideg[0]}{bideg[1]}_forms_vanish"] = kdim == 0
    harm = tau_harmonic_11(model, metric)
    cert = psd_kernel_certificate(model, metric, harm)
    details["tau_harmonic_11_dim"] = len(harm)
    details["psd_method"] = cert["method"]
    checks["psd_tau_harmonic_only_zero"] = cert["only_zero"]
    return VanishingReport(False, "", checks, details)
