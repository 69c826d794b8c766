import random
from math import comb, factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracle
from hermlab import hermitian as herm
from hermlab.forms import DegreeError, Form, basis_form, e, ebar, exterior_algebra
from hermlab.models import catalog_model
from hermlab.scalars import gr
from strategies import forms

IU = gr("0,1")
DIAGS = {2: [["1", "1"], ["2", "3"], ["1/2", "5/3"]], 3: [["1", "1", "1"], ["1", "2", "3"], ["2", "1/3", "3/2"]]}


def metric(diag):
    return herm.Metric(len(diag), [gr(x) for x in diag])


def as_form(alg, f):
    return Form.parse(oracle.to_text(alg, f), alg.n, "exact")


# ω and its powers


def test_omega_n_integrates_to_one_for_identity():
    m = catalog_model("torus2")
    assert m.integrate(herm.omega_power(metric(["1", "1"]), 2)) == gr(1)


def test_omega_zero_is_the_constant_one():
    assert herm.omega_power(metric(["2", "3"]), 0) == Form.one(2)


def test_volume_of_diag_1_2_3():
    """Oracle: direct expansion of ω^3/3! gives a1·a2·a3 = 6."""
    alg = oracle.Algebra(3)
    expected = oracle.integrate(alg, oracle.DiagMetric(alg, [1, 2, 3]).power(3))
    assert expected == oracle.Q(6)
    assert catalog_model("torus3").integrate(herm.omega_power(metric(["1", "2", "3"]), 3)) == gr(6)


def test_omega_power_range():
    with pytest.raises(herm.RangeError):
        herm.omega_power(metric(["1", "1"]), 3)


@pytest.mark.parametrize("diag", DIAGS[3])
def test_omega_powers_match_direct_expansion(diag):
    alg = oracle.Algebra(3)
    om = oracle.DiagMetric(alg, diag)
    g = metric(diag)
    for r in range(4):
        assert oracle.from_text(alg, herm.omega_power(g, r).serialize()) == om.power(r)


# inner products


def test_coframe_is_orthonormal_for_identity():
    g = metric(["1", "1", "1"])
    assert herm.inner(g, e(3, 1), e(3, 1)) == gr(1)
    assert herm.inner(g, basis_form(3, (1,), (2,)), basis_form(3, (2,), (1,))) == gr(0)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_norm_of_omega_is_n(n):
    alg = oracle.Algebra(n)
    om = oracle.DiagMetric(alg, [1] * n)
    assert om.inner(om.omega, om.omega) == oracle.Q(n)
    g = metric(["1"] * n)
    assert herm.inner(g, g.omega(), g.omega()) == gr(n)


@pytest.mark.parametrize("diag", DIAGS[3])
def test_inner_matches_oracle(diag):
    alg = oracle.Algebra(3)
    om = oracle.DiagMetric(alg, diag)
    g = metric(diag)
    rng = random.Random(2)
    for _ in range(40):
        u, v = oracle.random_form(alg, rng, density=0.2), oracle.random_form(alg, rng, density=0.2)
        got = herm.inner(g, as_form(alg, u), as_form(alg, v))
        ref = om.inner(u, v)
        assert (got.re, got.im) == (ref.re, ref.im)


@given(forms(3), forms(3), st.sampled_from(DIAGS[3]))
def test_inner_is_hermitian_and_positive(u, v, diag):
    g = metric(diag)
    assert herm.inner(g, u, v) == herm.inner(g, v, u).conjugate()
    n2 = herm.inner(g, u, u)
    assert n2.im == 0 and n2.re >= 0
    assert (n2.re == 0) == u.is_zero()


@given(forms(3), forms(3), st.sampled_from(DIAGS[3]))
def test_l2_inner_two_routes_agree(u, v, diag):
    g = metric(diag)
    m = catalog_model("iwasawa")
    assert herm.l2_inner(m, g, u, v) == herm.l2_inner_via_star(m, g, u, v)


# Hodge star


def test_star_of_one_and_volume():
    g = metric(["2", "3"])
    assert herm.hodge_star(g, Form.one(2)) == herm.omega_power(g, 2)
    assert herm.hodge_star(g, herm.omega_power(g, 2)) == Form.one(2)


@pytest.mark.parametrize("diag", DIAGS[3])
def test_star_on_10_forms(diag):
    """⋆u^{1,0} = -i ω_{n-1} ∧ u^{1,0}."""
    g = metric(diag)
    for j in (1, 2, 3):
        u = e(3, j).scale(gr("2,-1"))
        assert herm.hodge_star(g, u) == herm.omega_power(g, 2).wedge(u).scale(-IU)


@pytest.mark.parametrize("diag", DIAGS[3])
def test_star_matches_pairing_oracle(diag):
    alg = oracle.Algebra(3)
    om = oracle.DiagMetric(alg, diag)
    g = metric(diag)
    rng = random.Random(9)
    for _ in range(40):
        u = oracle.random_form(alg, rng, density=0.2)
        assert oracle.from_text(alg, herm.hodge_star(g, as_form(alg, u)).serialize()) == oracle.hodge_star(om, u)


@given(forms(3), st.sampled_from(DIAGS[3]))
def test_star_squared_is_sign(u, diag):
    g = metric(diag)
    for k in range(7):
        part = u.part(k)
        assert herm.hodge_star(g, herm.hodge_star(g, part)) == part.scale(gr((-1) ** k))


@given(forms(3), forms(3))
def test_star_pairing_relation(u, v):
    g = metric(["1", "2", "3"])
    m = catalog_model("torus3")
    for k in range(7):
        a, b = u.part(k), v.part(k)
        lhs = m.integrate(a.wedge(herm.hodge_star(g, b.conjugate())))
        assert lhs == herm.l2_inner(m, g, a, b)


# L and Λ


@pytest.mark.parametrize("n", [2, 3, 4])
def test_lambda_of_omega_is_n(n):
    g = metric(["1"] * n)
    assert herm.lambda_adj(g, g.omega()) == Form.one(n).scale(gr(n))


def test_off_diagonal_11_form_is_primitive():
    g = metric(["1", "1"])
    assert herm.lambda_adj(g, basis_form(2, (1,), (2,))).is_zero()


@pytest.mark.parametrize("diag", DIAGS[3])
def test_lambda_matches_oracle_adjoint(diag):
    alg = oracle.Algebra(3)
    om = oracle.DiagMetric(alg, diag)
    g = metric(diag)
    rng = random.Random(4)
    for _ in range(30):
        u = oracle.random_form(alg, rng, density=0.2)
        assert oracle.from_text(alg, herm.lambda_adj(g, as_form(alg, u)).serialize()) == om.Lambda(u)


@given(forms(3), forms(3), st.sampled_from(DIAGS[3]))
def test_L_lambda_adjointness(u, v, diag):
    g = metric(diag)
    assert herm.inner(g, herm.lefschetz_L(g, u), v) == herm.inner(g, u, herm.lambda_adj(g, v))


@given(forms(3), st.sampled_from(DIAGS[3]), st.integers(1, 3))
def test_commutator_of_L_power_with_lambda(u, diag, r):
    """[L^r, Λ] = r(k - n + r - 1) L^{r-1} on k-forms."""
    g = metric(diag)
    for k in range(7):
        a = u.part(k)
        lhs = herm.lefschetz_L(g, herm.lambda_adj(g, a), r) - herm.lambda_adj(g, herm.lefschetz_L(g, a, r))
        rhs = herm.lefschetz_L(g, a, r - 1).scale(gr(r * (k - 3 + r - 1)))
        assert lhs == rhs


# primitivity and Lefschetz decomposition


def test_one_forms_are_primitive():
    g = metric(["2", "1/3", "3/2"])
    for j in (1, 2, 3):
        assert herm.is_primitive(g, e(3, j)) and herm.is_primitive(g, ebar(3, j))


def test_omega_is_not_primitive():
    g = metric(["1", "1"])
    assert not herm.is_primitive(g, g.omega())


def test_trace_free_diagonal_11_form_is_primitive():
    u = basis_form(2, (1,), (1,)) - basis_form(2, (2,), (2,))
    assert herm.is_primitive(metric(["1", "1"]), u)


def test_is_primitive_rejects_high_degree():
    with pytest.raises(DegreeError):
        herm.is_primitive(metric(["1", "1"]), basis_form(2, (1, 2), (1,)))


@given(forms(3, bidegree=(1, 1)).filter(lambda f: not f.is_zero()), st.sampled_from(DIAGS[3]))
def test_11_decomposition_formula(alpha, diag):
    g = metric(diag)
    pieces = herm.lefschetz_decompose(g, alpha)
    lam = herm.lambda_adj(g, alpha).coefficient(exterior_algebra(3).basis[0])
    assert pieces[1] == Form.one(3).scale(lam * gr("1/3"))
    assert pieces[0] == alpha - g.omega().scale(lam * gr("1/3"))


def test_primitive_input_decomposes_trivially():
    g = metric(["1", "2", "3"])
    u = basis_form(3, (1,), (2,)) + basis_form(3, (1, 3), ())
    pieces = herm.lefschetz_decompose(g, u)
    assert pieces[0] == u and all(p.is_zero() for p in pieces[1:])


@given(forms(3, max_terms=10), st.sampled_from(DIAGS[3]))
def test_decomposition_reassembles_with_primitive_pieces(u, diag):
    g = metric(diag)
    for k in range(4):
        a = u.part(k)
        pieces = herm.lefschetz_decompose(g, a)
        total = Form.zero(3)
        for s, piece in enumerate(pieces):
            assert herm.is_primitive(g, piece)
            total = total + g.omega_raw_power(s).wedge(piece)
        assert total == a


@given(forms(3, max_terms=10), st.sampled_from(DIAGS[3]))
def test_star_formula_on_primitive_forms(u, diag):
    """⋆v = (-1)^{k(k+1)/2} i^{p-q} ω_{n-p-q} ∧ v for primitive v."""
    g = metric(diag)
    for p in range(4):
        for q in range(4 - p):
            v = herm.lefschetz_decompose(g, u.component(p, q))[0] if p + q else u.component(0, 0)
            k = p + q
            factor = gr((-1) ** (k * (k + 1) // 2)) * _ipow(p - q)
            assert herm.hodge_star(g, v) == herm.omega_power(g, 3 - k).wedge(v).scale(factor)


def _ipow(m):
    out = gr(1)
    for _ in range(m % 4):
        out = out * IU
    return out


@pytest.mark.parametrize("n", [2, 3, 4])
def test_pointwise_lefschetz_maps_are_injective_and_bijective_in_the_middle(n):
    from hermlab.linalg import rank

    alg = exterior_algebra(n)
    g = metric(["1"] * n)
    for k in range(n + 1):
        cols = alg.by_degree[k]
        for r in range(n - k + 1):
            images = [g.omega_raw_power(r).wedge(Form.from_data(alg, "exact", {j: gr(1)})) for j in cols]
            target = alg.by_degree[k + 2 * r]
            rows = [[img.data.get(i, gr(0)) for img in images] for i in target]
            rk = rank(rows, len(cols))
            assert rk == len(cols)
            if r == n - k:
                assert len(target) == len(cols)


# appendix constants


def test_appendix_constant_examples():
    assert herm.primitive_norm_constant(3, 1, 2) == 4
    assert (herm.appendix_constant(3, 2, 1, 0), herm.appendix_constant(3, 2, 1, 1)) == (1, 4)


def test_appendix_constants_match_the_closed_form():
    for n in range(1, 5):
        for k in range(n + 1):
            for r in range(n - k + 1):
                assert herm.primitive_norm_constant(n, k, r) == factorial(r) ** 2 * comb(n - k, r)
                for s in range(k // 2 + 1):
                    c = factorial(r + s) * factorial(n - k + s) // (factorial(s) * factorial(n - k - r + s))
                    assert herm.appendix_constant(n, k, r, s) == c


# non-diagonal metrics


def test_hermitian_metric_reduces_exactly():
    m = catalog_model("iwasawa")
    g = herm.model_metric(m, "offdiag-1-3")
    assert not g.is_diagonal
    assert g.omega().is_real()
    u = e(3, 1) + basis_form(3, (3,), (1,), gr("1,2"))
    v = ebar(3, 3) + basis_form(3, (1,), (3,))
    assert herm.inner(g, herm.lefschetz_L(g, u), v) == herm.inner(g, u, herm.lambda_adj(g, v))
    assert herm.hodge_star(g, herm.hodge_star(g, u)) == -u.part(1) + u.part(2)


def test_hermitian_metric_rejects_non_hermitian_input():
    with pytest.raises(herm.MetricMismatch):
        herm.Metric(2, hermitian=[["1", "1"], ["0", "1"]])
