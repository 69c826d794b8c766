"""De Rham, Dolbeault, Bott-Chern and Aeppli cohomology of a model.

For Lie models these are the cohomologies of the invariant complex, which need
not equal the cohomology of the underlying compact quotient in general (they
agree for nilmanifolds with rational structure and for the semisimple models
in the catalog, but nothing here checks that).

Exact models are handled with rational linear algebra.  Float and Fourier
models use SVD ranks with an absolute tolerance, one frequency at a time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .forms import DegreeError, Form
from .linalg import complement_basis, independent_columns, nullspace, solve, solve_least_norm, transpose
from .models import LieModel, TorusModel
from .operators import differential_block, geometry, harmonic_space
from .scalars import EXACT, FLOAT, FOURIER, ZERO, FourierSum, GaussianRational, lift

FLAVORS = ("DR", "DOL", "BC", "A")
EXACTNESS = ("d", "del", "delbar", "deldelbar", "del_plus_delbar")
PROJECTIONS = ("d", "d_star", "BC", "A", "BC_star")
TOL = 1e-9


class ClosednessViolation(ValueError):
    """The form does not satisfy the kernel condition the operation needs."""


Degree = Union[int, Tuple[int, int]]


# ---------------------------------------------------------------- operator columns


def _columns(model: LieModel, which: str) -> List[dict]:
    cache = model._cache.setdefault("cohomology_columns", {})
    if which in cache:
        return cache[which]
    if which == "ddbar":
        dl, db = model.del_columns, model.delbar_columns
        cols = []
        for col in db:
            out: dict = {}
            for k, b in col.items():
                for i, a in dl[k].items():
                    v = out.get(i, ZERO) + a * b
                    if v:
                        out[i] = v
                    else:
                        out.pop(i, None)
            cols.append(out)
    else:
        cols = {"d": model.d_columns, "del": model.del_columns, "delbar": model.delbar_columns}[which]
    cache[which] = cols
    return cols


def _dense(cols: List[dict], rows: Sequence[int], sources: Sequence[int]) -> List[List]:
    return [[cols[j].get(i, ZERO) for j in sources] for i in rows]


def _vectors(cols: List[dict], rows: Sequence[int], sources: Sequence[int]) -> List[List]:
    """Images of the source basis elements, as coordinate vectors over rows."""
    return [[cols[j].get(i, ZERO) for i in rows] for j in sources]


def _block(alg, degree: Degree) -> List[int]:
    if isinstance(degree, tuple):
        return list(alg.by_bidegree.get(degree, []))
    return list(alg.by_degree.get(degree, []))


def _shift(degree: Degree, dp: int, dq: int = 0) -> Degree:
    if isinstance(degree, tuple):
        return (degree[0] + dp, degree[1] + dq)
    return degree + dp + dq


def _flavor_maps(flavor: str, degree: Degree):
    """(kernel conditions, image pieces) as lists of (operator, source degree)."""
    if flavor == "DR":
        return [("d", degree)], [("d", _shift(degree, -1))]
    p, q = degree
    if flavor == "DOL":
        return [("delbar", degree)], [("delbar", (p, q - 1))]
    if flavor == "BC":
        return [("del", degree), ("delbar", degree)], [("ddbar", (p - 1, q - 1))]
    if flavor == "A":
        return [("ddbar", degree)], [("del", (p - 1, q)), ("delbar", (p, q - 1))]
    raise ValueError(f"unknown cohomology flavor {flavor!r}; expected one of {', '.join(FLAVORS)}")


def _target_rows(alg, which: str, degree: Degree) -> List[int]:
    if isinstance(degree, tuple):
        p, q = degree
        dp, dq = {"d": (1, 0), "del": (1, 0), "delbar": (0, 1), "ddbar": (1, 1)}[which]
        if which == "d":
            return list(alg.by_degree.get(p + q + 1, []))
        return list(alg.by_bidegree.get((p + dp, q + dq), []))
    return list(alg.by_degree.get(degree + (2 if which == "ddbar" else 1), []))


# ---------------------------------------------------------------- spaces


@dataclass
class CohomologySpace:
    """A cohomology group as representatives independent modulo the image."""

    model: object
    flavor: str
    degree: Degree
    rows: List[int]
    basis: List[Form]
    kernel_dim: int
    image_dim: int
    image: List[List] = field(default_factory=list, repr=False)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def label(self) -> str:
        if isinstance(self.degree, tuple):
            return f"{self.flavor}({self.degree[0]},{self.degree[1]})"
        return f"{self.flavor}({self.degree})"

    def _vector(self, u: Form) -> List:
        return [u.data.get(i, ZERO) for i in self.rows]

    def contains_closed(self, u: Form) -> bool:
        """Whether u lies in the kernel for this flavor (and in this block)."""
        model = self.model
        block = set(self.rows)
        if any(i not in block for i in u.data):
            return False
        conds, _ = _flavor_maps(self.flavor, self.degree)
        for which, _deg in conds:
            if which == "ddbar":
                if model.del_(model.delbar(u)):
                    return False
            elif {"d": model.d, "del": model.del_, "delbar": model.delbar}[which](u):
                return False
        return True

    def coordinates(self, u: Form) -> List:
        """Coordinates of the class of u in ``basis``."""
        if self.model.ring != EXACT:
            return _numeric_coordinates(self, u)
        if not self.contains_closed(u):
            raise ClosednessViolation(f"form is not in the kernel for {self.label}")
        cols = [self._vector(b) for b in self.basis] + self.image
        rows = transpose(cols, len(cols), len(self.rows)) if cols else [[] for _ in self.rows]
        res = solve(rows, len(cols), self._vector(u))
        if not res.ok:
            raise ClosednessViolation(f"form is not in the kernel for {self.label}")
        return res.solution[: self.dimension]

    def class_of(self, u: Form) -> "CohomologyClass":
        return CohomologyClass(self, self.coordinates(u), u)

    def class_from_coordinates(self, coords: Sequence) -> "CohomologyClass":
        rep = Form.zero(self.model.n, self.model.ring)
        for c, b in zip(coords, self.basis):
            if c:
                rep = rep + b.scale(c)
        return CohomologyClass(self, list(coords), rep)

    def in_image(self, u: Form) -> bool:
        coords = self.coordinates(u)
        return not any(coords) if self.model.ring == EXACT else max((abs(c) for c in coords), default=0.0) <= TOL

    def to_dict(self) -> dict:
        return {
            "flavor": self.flavor,
            "degree": list(self.degree) if isinstance(self.degree, tuple) else self.degree,
            "dimension": self.dimension,
            "kernel_dim": self.kernel_dim,
            "image_dim": self.image_dim,
            "basis": [b.serialize() for b in self.basis],
        }


@dataclass
class CohomologyClass:
    space: CohomologySpace
    coordinates: List
    representative: Form

    def is_zero(self) -> bool:
        if self.space.model.ring == EXACT:
            return not any(self.coordinates)
        return max((abs(c) for c in self.coordinates), default=0.0) <= TOL

    def __add__(self, other: "CohomologyClass") -> "CohomologyClass":
        coords = [a + b for a, b in zip(self.coordinates, other.coordinates)]
        return CohomologyClass(self.space, coords, self.representative + other.representative)

    def scale(self, c) -> "CohomologyClass":
        return CohomologyClass(self.space, [a * c for a in self.coordinates], self.representative.scale(c))


def compute_space(model, flavor: str, degree: Degree) -> CohomologySpace:
    """Cohomology group of one flavor in one degree (DR) or bidegree (others)."""
    if flavor not in FLAVORS:
        raise ValueError(f"unknown cohomology flavor {flavor!r}; expected one of {', '.join(FLAVORS)}")
    if flavor == "DR" and isinstance(degree, tuple):
        raise DegreeError("de Rham cohomology takes a total degree")
    if flavor != "DR":
        if not isinstance(degree, tuple):
            raise DegreeError(f"{flavor} cohomology takes a bidegree (p, q)")
        degree = (int(degree[0]), int(degree[1]))
    cache = model._cache.setdefault("cohomology", {})
    key = (flavor, degree)
    if key not in cache:
        if isinstance(model, TorusModel) or model.ring != EXACT:
            cache[key] = _numeric_space(model, flavor, degree)
        else:
            cache[key] = _exact_space(model, flavor, degree)
    return cache[key]


def _exact_space(model: LieModel, flavor: str, degree: Degree) -> CohomologySpace:
    alg = model.alg
    rows = _block(alg, degree)
    conds, images = _flavor_maps(flavor, degree)
    if not rows:
        return CohomologySpace(model, flavor, degree, rows, [], 0, 0, [])
    kernel_rows: List[List] = []
    for which, deg in conds:
        target = _target_rows(alg, which, deg)
        kernel_rows.extend(_dense(_columns(model, which), target, rows))
    kernel = nullspace([r for r in kernel_rows if any(r)], len(rows))
    spanning: List[List] = []
    for which, deg in images:
        spanning.extend(v for v in _vectors(_columns(model, which), rows, _block(alg, deg)) if any(v))
    image = [spanning[i] for i in independent_columns(spanning, len(rows))] if spanning else []
    picks = complement_basis(image, kernel, len(rows))
    basis = [Form.from_data(alg, EXACT, {rows[i]: x for i, x in enumerate(kernel[j]) if x}) for j in picks]
    return CohomologySpace(model, flavor, degree, rows, basis, len(kernel), len(image), image)


# ---------------------------------------------------------------- numeric path


def _blocks(model, which: str) -> List[Tuple[object, np.ndarray]]:
    """(frequency, dense matrix) pairs; Lie models have the single key None."""
    if isinstance(model, TorusModel):
        freqs = model.frequencies()
        if which == "ddbar":
            return [(k, differential_block(model, "del", k) @ differential_block(model, "delbar", k)) for k in freqs]
        return [(k, differential_block(model, which, k)) for k in freqs]
    dim = model.alg.dim
    cols = _columns(model, which)
    m = np.zeros((dim, dim), dtype=complex)
    for j, col in enumerate(cols):
        for i, a in col.items():
            m[i, j] = complex(a)
    return [(None, m)]


def _numeric_space(model, flavor: str, degree: Degree) -> CohomologySpace:
    alg = model.alg
    rows = _block(alg, degree)
    conds, images = _flavor_maps(flavor, degree)
    ring = FOURIER if isinstance(model, TorusModel) else FLOAT
    if not rows:
        return CohomologySpace(model, flavor, degree, rows, [], 0, 0, [])
    per_freq: Dict[object, Dict[str, np.ndarray]] = {}
    for which in {w for w, _ in conds} | {w for w, _ in images}:
        for k, m in _blocks(model, which):
            per_freq.setdefault(k, {})[which] = m
    basis: List[Form] = []
    kernel_total = image_total = 0
    zero_freq = None if ring == FLOAT else tuple([0] * (2 * model.n))
    for k, mats in per_freq.items():
        kmat = np.vstack([mats[w][np.ix_(_target_rows(alg, w, deg), rows)] for w, deg in conds])
        s = np.linalg.svd(kmat, compute_uv=False) if kmat.size else np.zeros(0)
        kdim = len(rows) - int(np.sum(s > TOL))
        pieces = [mats[w][np.ix_(rows, _block(alg, deg))] for w, deg in images if _block(alg, deg)]
        img = np.hstack(pieces) if pieces else np.zeros((len(rows), 0))
        idim = int(np.sum(np.linalg.svd(img, compute_uv=False) > TOL)) if img.size else 0
        kernel_total += kdim
        image_total += idim
        if k == zero_freq and kdim > idim:
            _, _, vh = np.linalg.svd(kmat) if kmat.size else (None, None, np.eye(len(rows)))
            kern = vh[len(rows) - kdim:].conj().T if kmat.size else np.eye(len(rows))
            if idim:
                u, _, _ = np.linalg.svd(img)
                q = u[:, :idim]
                kern = kern - q @ (q.conj().T @ kern)
            u2, s2, _ = np.linalg.svd(kern)
            reps = u2[:, : int(np.sum(s2 > TOL))]
            for c in range(reps.shape[1]):
                v = reps[:, c]
                if ring == FOURIER:
                    data = {rows[i]: FourierSum({k: complex(x)}) for i, x in enumerate(v) if abs(x) > TOL}
                else:
                    data = {rows[i]: complex(x) for i, x in enumerate(v) if abs(x) > TOL}
                basis.append(Form.from_data(alg, ring, data))
    return CohomologySpace(model, flavor, degree, rows, basis, kernel_total, image_total, [])


def _numeric_coordinates(space: CohomologySpace, u: Form) -> List[complex]:
    """Least-squares coordinates of the constant part of u (float and Fourier models)."""
    n = space.model.n

    def vec(f: Form):
        out = np.zeros(len(space.rows), dtype=complex)
        for i, r in enumerate(space.rows):
            c = f.data.get(r)
            if c is None:
                continue
            out[i] = c.constant_term(n) if isinstance(c, FourierSum) else complex(c)
        return out

    if not space.basis:
        return []
    a = np.column_stack([vec(b) for b in space.basis])
    x, *_ = np.linalg.lstsq(a, vec(u), rcond=None)
    return [complex(c) for c in x]


# ---------------------------------------------------------------- exactness


@dataclass
class ExactnessResult:
    """Either a witness (Γ, or the pair for ∂+∂̄) or a certifying functional.

    The certificate maps basis labels to coefficients of a functional that
    vanishes on the image and is nonzero on u.
    """

    exact: bool
    witness: Optional[object]
    certificate: Optional[Dict[str, object]]
    residual: float = 0.0

    def to_dict(self) -> dict:
        w = self.witness
        if isinstance(w, tuple):
            w = [x.serialize() for x in w]
        elif isinstance(w, Form):
            w = w.serialize()
        cert = None
        if self.certificate is not None:
            cert = {k: (v.text() if isinstance(v, GaussianRational) else repr(complex(v))) for k, v in sorted(self.certificate.items())}
        return {"exact": self.exact, "witness": w, "certificate": cert, "residual": self.residual}


def is_exact(model, u: Form, flavor: str = "d") -> ExactnessResult:
    """Solve op(x) = u with least-norm x, or certify that no solution exists."""
    if flavor not in EXACTNESS:
        raise ValueError(f"unknown exactness flavor {flavor!r}; expected one of {', '.join(EXACTNESS)}")
    model.check_form(u)
    k = u.degree
    if k is None:
        return ExactnessResult(True, Form.zero(model.n, model.ring) if flavor != "del_plus_delbar" else (Form.zero(model.n, model.ring),) * 2, None)
    alg = model.alg
    rows = list(alg.by_degree.get(k, []))
    drop = 2 if flavor == "deldelbar" else 1
    sources = list(alg.by_degree.get(k - drop, []))
    pieces = {"d": ["d"], "del": ["del"], "delbar": ["delbar"], "deldelbar": ["ddbar"], "del_plus_delbar": ["del", "delbar"]}[flavor]
    if isinstance(model, TorusModel) or model.ring != EXACT:
        return _numeric_exact(model, u, pieces, rows, sources)
    mat: List[List] = [[] for _ in rows]
    for which in pieces:
        block = _dense(_columns(model, which), rows, sources)
        for r, row in zip(mat, block):
            r.extend(row)
    rhs = [u.data.get(i, ZERO) for i in rows]
    res = solve_least_norm(mat, len(pieces) * len(sources), rhs)
    if not res.ok:
        cert = {str(alg.basis[rows[i]]): y for i, y in enumerate(res.certificate) if y}
        return ExactnessResult(False, None, cert)
    x = res.solution
    forms = []
    for p in range(len(pieces)):
        chunk = x[p * len(sources):(p + 1) * len(sources)]
        forms.append(Form.from_data(alg, EXACT, {sources[i]: c for i, c in enumerate(chunk) if c}))
    return ExactnessResult(True, forms[0] if len(forms) == 1 else tuple(forms), None)


def _numeric_exact(model, u: Form, pieces, rows, sources) -> ExactnessResult:
    alg = model.alg
    torus = isinstance(model, TorusModel)
    freqs = set()
    if torus:
        for c in u.data.values():
            freqs.update(c.terms)
    else:
        freqs = {None}
    mats: Dict[str, Dict[object, np.ndarray]] = {}
    for which in pieces:
        if torus:
            mats[which] = {k: (differential_block(model, "del", k) @ differential_block(model, "delbar", k)) if which == "ddbar" else differential_block(model, which, k) for k in freqs}
        else:
            mats[which] = dict(_blocks(model, which))
    sols: List[Dict[int, Dict]] = [dict() for _ in pieces]
    worst = 0.0
    for k in freqs:
        a = np.hstack([mats[w][k][np.ix_(rows, sources)] for w in pieces]) if sources else np.zeros((len(rows), 0))
        b = np.zeros(len(rows), dtype=complex)
        for i, r in enumerate(rows):
            c = u.data.get(r)
            if c is not None:
                b[i] = c.terms.get(k, 0) if torus else complex(c)
        if a.shape[1]:
            x, *_ = np.linalg.lstsq(a, b, rcond=None)
            res = float(np.linalg.norm(a @ x - b))
        else:
            x, res = np.zeros(0), float(np.linalg.norm(b))
        worst = max(worst, res / max(1.0, float(np.linalg.norm(b))))
        for p in range(len(pieces)):
            for i, s in enumerate(sources):
                v = x[p * len(sources) + i]
                if abs(v) > TOL:
                    sols[p].setdefault(s, {})[k] = complex(v)
    if worst > TOL:
        return ExactnessResult(False, None, None, worst)
    forms = []
    for sol in sols:
        if torus:
            forms.append(Form.from_data(alg, FOURIER, {s: FourierSum(t) for s, t in sol.items()}))
        else:
            forms.append(Form.from_data(alg, FLOAT, {s: t[None] for s, t in sol.items()}))
    return ExactnessResult(True, forms[0] if len(forms) == 1 else tuple(forms), None, worst)


# ---------------------------------------------------------------- pairings


def pairing(a: CohomologyClass, b: CohomologyClass):
    """∫ a ∧ b on representatives; bilinear, no conjugation."""
    model = a.space.model
    top = 2 * model.n
    da, db = a.representative.degree, b.representative.degree
    if da is None or db is None:
        return lift(ZERO, model.ring) if model.ring == EXACT else 0j
    if da + db != top:
        raise DegreeError(f"pairing needs complementary degrees, got {da} and {db}")
    return model.integrate(a.representative.wedge(b.representative))


def pairing_matrix(space_a: CohomologySpace, space_b: CohomologySpace) -> List[List]:
    model = space_a.model
    return [[model.integrate(x.wedge(y)) for y in space_b.basis] for x in space_a.basis]


# ---------------------------------------------------------------- harmonic projections


@dataclass
class HarmonicDecomposition:
    """u = harmonic + exact_part, with exact_part = op(witness)."""

    harmonic: Form
    exact_part: Form
    witness: object


def _project(g, u: Form, hbasis: List[Form]) -> Form:
    out = Form.zero(u.n, u.ring)
    for h in hbasis:
        nh = g.l2(h, h)
        c = g.l2(u, h) / nh
        if c:
            out = out + h.scale(c)
    return out


def harmonic_projection(model, metric, u: Form, flavor: str = "d") -> HarmonicDecomposition:
    """Orthogonal split of u into its harmonic part and an exact/coexact part.

    flavor "d": du = 0, u = u_h + dΓ.      "d_star": d^⋆u = 0, u = u_h + d^⋆η.
    flavor "BC": ∂u = ∂̄u = 0, u = u_h + ∂∂̄ξ.  "A": ∂∂̄u = 0, u = u_h + ∂a + ∂̄b.
    flavor "BC_star": (∂∂̄)^⋆u = 0, u = u_h + ∂^⋆a + ∂̄^⋆b.
    """
    if flavor not in PROJECTIONS:
        raise ValueError(f"unknown projection flavor {flavor!r}; expected one of {', '.join(PROJECTIONS)}")
    g = geometry(model, metric)
    g.check(u)
    k = u.degree
    if k is None:
        z = Form.zero(model.n, model.ring)
        return HarmonicDecomposition(z, z, z)
    exact_ring = model.ring == EXACT

    def vanishes(f: Form) -> bool:
        return not f if exact_ring else f.max_abs() <= TOL * max(1.0, u.max_abs())

    if flavor == "d":
        ok = vanishes(model.d(u))
    elif flavor == "d_star":
        ok = vanishes(g.route_b("d_star", u))
    elif flavor == "BC":
        ok = vanishes(model.del_(u)) and vanishes(model.delbar(u))
    elif flavor == "A":
        ok = vanishes(model.del_(model.delbar(u)))
    else:
        ok = vanishes(g.route_b("ddbar_star", u))
    if not ok:
        raise ClosednessViolation(f"form does not satisfy the kernel condition for {flavor!r} projection")

    if flavor in ("d", "d_star"):
        hbasis = harmonic_space(model, metric, "d", degree=k)
    else:
        bideg = u.bidegrees()
        if len(bideg) != 1:
            raise DegreeError("Bott-Chern and Aeppli projections need a pure-type form")
        hbasis = harmonic_space(model, metric, "BC" if flavor in ("BC", "BC_star") else "A", bidegree=bideg[0])
    harm = _project(g, u, hbasis)
    rest = u - harm
    if flavor == "d":
        res = is_exact(model, rest, "d")
        witness = res.witness
        ok = res.exact
    elif flavor == "BC":
        res = is_exact(model, rest, "deldelbar")
        witness = res.witness
        ok = res.exact
    elif flavor == "A":
        res = is_exact(model, rest, "del_plus_delbar")
        witness = res.witness
        ok = res.exact
    else:
        witness, ok = _coexact_witness(g, rest, flavor)
    if not ok:
        raise ClosednessViolation("the non-harmonic part is not in the expected image")
    return HarmonicDecomposition(harm, rest, witness)


def _coexact_witness(g, rest: Form, flavor: str):
    """Least-norm preimage of ``rest`` under d^⋆ (or the pair ∂^⋆, ∂̄^⋆)."""
    model = g.model
    alg = g.alg
    k = rest.degree
    if k is None:
        z = Form.zero(model.n, model.ring)
        return (z if flavor == "d_star" else (z, z)), True
    rows = list(alg.by_degree.get(k, []))
    sources = list(alg.by_degree.get(k + 1, []))
    kinds = ["d_star"] if flavor == "d_star" else ["del_star", "delbar_star"]
    mats = [g.matrix(kind) for kind in kinds]
    if model.ring == EXACT:
        mat: List[List] = [[] for _ in rows]
        for m in mats:
            for r, row in zip(mat, m.dense(rows, sources)):
                r.extend(row)
        res = solve_least_norm(mat, len(kinds) * len(sources), [rest.data.get(i, ZERO) for i in rows])
        if not res.ok:
            return None, False
        x = res.solution
        forms = [
            Form.from_data(alg, EXACT, {sources[i]: c for i, c in enumerate(x[p * len(sources):(p + 1) * len(sources)]) if c})
            for p in range(len(kinds))
        ]
        return (forms[0] if len(forms) == 1 else tuple(forms)), True
    a = np.hstack([np.array([[complex(v) for v in row] for row in m.dense(rows, sources)]) for m in mats])
    b = np.array([complex(rest.data.get(i, 0)) for i in rows])
    x, *_ = np.linalg.lstsq(a, b, rcond=None)
    ok = float(np.linalg.norm(a @ x - b)) <= TOL * max(1.0, float(np.linalg.norm(b)))
    forms = [
        Form.from_data(alg, FLOAT, {sources[i]: complex(c) for i, c in enumerate(x[p * len(sources):(p + 1) * len(sources)]) if abs(c) > TOL})
        for p in range(len(kinds))
    ]
    return (forms[0] if len(forms) == 1 else tuple(forms)), ok


# ---------------------------------------------------------------- tables


def dimension_table(model, flavors: Sequence[str] = FLAVORS) -> Dict[str, Dict[str, int]]:
    """Dimensions keyed by flavor, then by "k" or "p,q"."""
    n = model.n
    table: Dict[str, Dict[str, int]] = {}
    for flavor in flavors:
        row: Dict[str, int] = {}
        if flavor == "DR":
            for k in range(2 * n + 1):
                row[str(k)] = compute_space(model, "DR", k).dimension if model.ring == EXACT and not isinstance(model, TorusModel) else _numeric_dim(model, "DR", k)
        else:
            for p in range(n + 1):
                for q in range(n + 1):
                    if model.ring == EXACT and not isinstance(model, TorusModel):
                        row[f"{p},{q}"] = compute_space(model, flavor, (p, q)).dimension
                    else:
                        row[f"{p},{q}"] = _numeric_dim(model, flavor, (p, q))
        table[flavor] = row
    return table


def _numeric_dim(model, flavor, degree) -> int:
    s = compute_space(model, flavor, degree)
    return s.kernel_dim - s.image_dim


def betti_numbers(model) -> List[int]:
    return [compute_space(model, "DR", k).dimension if model.ring == EXACT else _numeric_dim(model, "DR", k) for k in range(2 * model.n + 1)]
