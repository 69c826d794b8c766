import random

import pytest

import oracle
from hermlab import balanced as bal
from hermlab import hermitian as herm
from hermlab.forms import Form, basis_form
from hermlab.models import ModelMismatch, catalog_model, kodaira_fixture, non_unimodular_fixture
from hermlab.scalars import gr

IU = gr("0,1")
TORUS_METRICS = ["standard", "diag-2-3", "diag-1/2-5/3"]
IWASAWA_METRICS = ["standard", "diag-1-2-3", "diag-1/2-3-5/3"]


def mm(model, metric):
    m = catalog_model(model) if isinstance(model, str) else model
    return m, herm.model_metric(m, metric)


def i_ebar(n, j, k=None, c="1"):
    """i·c·e^j ∧ ē^k."""
    return basis_form(n, (j,), (k or j,), gr(c) * IU)


# classification


@pytest.mark.parametrize("metric", TORUS_METRICS)
def test_torus_metrics_are_kahler(metric):
    flags = bal.classify_metric(*mm("torus2", metric))
    assert (flags.kahler, flags.balanced, flags.gauduchon, flags.degenerate_balanced) == (True, True, True, False)


@pytest.mark.parametrize("metric", IWASAWA_METRICS + ["offdiag-1-3"])
def test_iwasawa_metrics_are_balanced_not_kahler(metric):
    flags = bal.classify_metric(*mm("iwasawa", metric))
    assert not flags.kahler and flags.balanced and not flags.degenerate_balanced


def test_every_invariant_22_form_on_iwasawa_is_closed():
    """Why no invariant metric on the Iwasawa model can fail to be balanced."""
    m = catalog_model("iwasawa")
    for idx in m.alg.by_bidegree[(2, 2)]:
        assert m.d(Form.from_data(m.alg, "exact", {idx: gr(1)})).is_zero()


def test_kodaira_is_gauduchon_but_not_balanced():
    m = kodaira_fixture()
    alg = oracle.Algebra(2)
    table = oracle.LieTable(alg, oracle.KODAIRA)
    for name in m.metric_specs:
        g = herm.model_metric(m, name)
        om = oracle.DiagMetric(alg, [x for x in g.key()[1]])
        flags = bal.classify_metric(m, g)
        assert flags.balanced == (not table.d(om.omega))
        assert flags.gauduchon == (not table.del_(table.delbar(om.omega)))
        assert (flags.kahler, flags.balanced, flags.gauduchon) == (False, False, True)


@pytest.mark.parametrize("metric", ["standard", "diag-1-2-3", "diag-2-1/2-1"])
def test_sl2c_metrics_are_degenerate_balanced(metric):
    m, g = mm("sl2c", metric)
    flags = bal.classify_metric(m, g)
    assert flags.balanced and flags.degenerate_balanced
    assert m.d(flags.degenerate_witness) == g.omega_power(2)


@pytest.mark.parametrize("model", ["torus2", "torus3", "iwasawa", "sl2c"])
def test_classification_implications(model):
    m = catalog_model(model)
    for name in m.metric_specs:
        f = bal.classify_metric(m, herm.model_metric(m, name))
        assert not f.kahler or f.balanced
        assert not f.balanced or f.gauduchon
        assert not f.degenerate_balanced or f.balanced


def test_require_balanced_raises():
    with pytest.raises(bal.NotBalanced):
        bal.require_balanced(*mm(kodaira_fixture(), "standard"))


# Hard Lefschetz on H^1


def _lefschetz_rank_oracle(model_table, n, diag, reps):
    alg = oracle.Algebra(n)
    table = oracle.LieTable(alg, model_table)
    assert all(not table.d(a) for a in reps)
    om = oracle.DiagMetric(alg, diag)
    w = om.power(n - 1)
    rows = [oracle.integrate(alg, oracle.wedge(oracle.wedge(w, a), b)) for a in reps for b in reps]
    cols = [{(i,): rows[i * len(reps) + j] for i in range(len(reps))} for j in range(len(reps))]
    return oracle.rank_of(cols, [(i,) for i in range(len(reps))])


@pytest.mark.parametrize("metric", TORUS_METRICS)
def test_torus2_hard_lefschetz_is_an_isomorphism(metric):
    rep = bal.hard_lefschetz_map(*mm("torus2", metric))
    assert (rep.rank, rep.domain_dim, rep.target_dim) == (4, 4, 4)
    assert rep.injective and rep.surjective and rep.audit_passed


def test_hard_lefschetz_rank_matches_poincare_pairing_oracle():
    """rank of {ω_{n-1}}∧· on H^1 = rank of (a, b) ↦ ∫ ω_{n-1}∧a∧b on closed 1-forms."""
    alg3 = oracle.Algebra(3)
    closed = [alg3.hol(1), alg3.hol(2), alg3.anti(1), alg3.anti(2)]
    for metric, diag in (("standard", [1, 1, 1]), ("diag-1-2-3", [1, 2, 3])):
        expected = _lefschetz_rank_oracle(oracle.IWASAWA, 3, diag, closed)
        assert bal.hard_lefschetz_map(*mm("iwasawa", metric)).rank == expected == 4


def test_sl2c_hard_lefschetz_has_zero_domain():
    rep = bal.hard_lefschetz_map(*mm("sl2c", "standard"))
    assert rep.domain_dim == 0 and rep.rank == 0


def test_hard_lefschetz_needs_balanced():
    with pytest.raises(bal.NotBalanced):
        bal.hard_lefschetz_map(*mm(kodaira_fixture(), "standard"))


def test_hard_lefschetz_rejects_fourier_model():
    with pytest.raises(ModelMismatch):
        bal.hard_lefschetz_map(*mm("ftorus2", "standard"))


def test_lefschetz_audit_is_stable_across_seeds():
    m, g = mm("iwasawa", "diag-1/2-3-5/3")
    ref = bal.hard_lefschetz_map(m, g, audit_trials=3, seed=0)
    for seed in (1, 2):
        rep = bal.hard_lefschetz_map(m, g, audit_trials=3, seed=seed)
        assert rep.matrix == ref.matrix and rep.audit_passed


# ddbar hypothesis


def _closed_del_exact_dim(table_dict, n):
    alg = oracle.Algebra(n)
    table = oracle.LieTable(alg, table_dict)
    src = [m for m in alg.basis if alg.bidegree(m) == (0, 1)]
    images = [table.del_({m: oracle.Q(1)}) for m in src]
    tgt11 = [m for m in alg.basis if alg.bidegree(m) == (1, 1)]
    tgt3 = [m for m in alg.basis if len(m) == 3]
    span = oracle.rank_of(images, tgt11)
    return span - oracle.rank_of([table.d(v) for v in images], tgt3)


@pytest.mark.parametrize("model,table", [("iwasawa", oracle.IWASAWA), ("sl2c", oracle.SL2C)])
def test_ddbar_hypothesis_subspace_dimension(model, table):
    rep = bal.ddbar_hypothesis_check(catalog_model(model))
    assert rep.closed_del_exact_dim == _closed_del_exact_dim(table, 3)
    assert rep.holds


def test_ddbar_hypothesis_on_tori():
    assert bal.ddbar_hypothesis_check(catalog_model("torus2")).holds
    assert bal.ddbar_hypothesis_check(catalog_model("ftorus2")).holds


def test_ddbar_hypothesis_fails_on_kodaira_with_witness():
    """∂ē² = ... on Kodaira: e^1∧ē^1 is closed, ∂-exact, and not ∂∂̄-exact."""
    m = kodaira_fixture()
    rep = bal.ddbar_hypothesis_check(m)
    if rep.holds:
        pytest.fail("expected a witness on the Kodaira fixture")
    v = rep.witness
    assert m.d(v).is_zero()
    assert m.del_(rep.preimage) == v


# primitive hyperplanes


def test_torus2_hyperplane_dimension():
    hp = bal.primitive_hyperplane(*mm("torus2", "standard"))
    assert (hp.space.dimension, hp.dimension, hp.codimension) == (6, 5, 1)


@pytest.mark.parametrize("metric", IWASAWA_METRICS)
def test_iwasawa_hyperplane_codimension_one(metric):
    m, g = mm("iwasawa", metric)
    for flavor in bal.HYPERPLANE_FLAVORS:
        hp = bal.primitive_hyperplane(m, g, flavor)
        assert hp.codimension == 1
        assert bal.exact_power_matches_codimension(m, g, flavor)["consistent"]


def test_degenerate_case_has_full_hyperplane():
    m, g = mm("sl2c", "diag-1-2-3")
    hp = bal.primitive_hyperplane(m, g)
    assert hp.codimension == 0 and hp.dimension == hp.space.dimension
    rep = bal.exact_power_matches_codimension(m, g)
    assert rep["power_exact"] and rep["consistent"]


def test_hyperplane_needs_the_metric_flag():
    with pytest.raises(bal.MetricFlagViolation):
        bal.primitive_hyperplane(*mm(kodaira_fixture(), "standard"), "DR-H2")
    hp = bal.primitive_hyperplane(*mm(kodaira_fixture(), "standard"), "BC-11")
    assert hp.codimension == 1


def test_scaled_metric_has_the_same_hyperplane():
    m, g = mm("torus3", "diag-1-2-3")
    h1 = bal.primitive_hyperplane(m, g)
    h2 = bal.primitive_hyperplane(m, g.scaled(gr(3)))
    for vec in h1.kernel:
        assert h2.contains(vec)
    assert h1.dimension == h2.dimension


def test_non_proportional_torus_metrics_have_different_hyperplanes():
    m = catalog_model("torus2")
    a, b = herm.model_metric(m, "standard"), herm.model_metric(m, "diag-2-3")
    assert any(not bal.primitive_hyperplane(m, b).contains(v) for v in bal.primitive_hyperplane(m, a).kernel)
    ray = bal.ray_check(m, a, b)
    assert ray == {"same_hyperplane": False, "classes_proportional": False, "consistent": True}


def test_ray_check_on_proportional_metrics():
    m, g = mm("iwasawa", "diag-1-2-3")
    ray = bal.ray_check(m, g, g.scaled(gr(4)))
    assert ray["same_hyperplane"] and ray["classes_proportional"] and ray["consistent"]
    assert bal.ray_check(m, g, g)["classes_proportional"]


# primitive representatives and decompositions


def test_primitive_representative_leaves_primitive_input_alone():
    m, g = mm("torus2", "standard")
    beta = basis_form(2, (1, 2), ())
    assert bal.primitive_representative(m, g, beta) == beta
    assert herm.is_primitive(g, beta)


@pytest.mark.parametrize("metric", IWASAWA_METRICS)
def test_primitive_representative_on_random_hyperplane_classes(metric):
    m, g = mm("iwasawa", metric)
    hp = bal.primitive_hyperplane(m, g)
    space = hp.space
    rng = random.Random(1)
    wn1 = g.omega_power(2)
    wh, _ = bal.omega_harmonic(m, g)
    for _ in range(10):
        weights = [gr(rng.randint(-3, 3)) for _ in hp.kernel]
        coords = [sum((vec[i] * w for vec, w in zip(hp.kernel, weights)), gr(0)) for i in range(space.dimension)]
        beta = space.class_from_coordinates(coords).representative
        beta = beta + m.d(basis_form(3, (3,), (), gr(rng.randint(-2, 2))))
        alpha = bal.primitive_representative(m, g, beta)
        assert wn1.wedge(alpha).is_zero()
        assert space.coordinates(alpha) == space.coordinates(beta)
        assert herm.l2_inner(m, g, wh, alpha) == gr(0)


def test_primitive_representative_rejects_non_primitive_class():
    m, g = mm("torus2", "standard")
    with pytest.raises(bal.NotPrimitiveClass):
        bal.primitive_representative(m, g, g.omega())


def test_torus_lambda_of_omega_is_one():
    """Oracle: λ = ∫ ω_1 ∧ ω / ||ω||² = 2 / 2."""
    alg = oracle.Algebra(2)
    om = oracle.DiagMetric(alg, [1, 1])
    num = oracle.integrate(alg, oracle.wedge(om.power(1), om.omega))
    den = om.inner(om.omega, om.omega) * oracle.integrate(alg, om.power(2))
    assert num / den == oracle.Q(1)
    m, g = mm("torus2", "standard")
    d = bal.lefschetz_h2_decompose(m, g, g.omega())
    assert d.lam == gr(1) and d.lam_integral == gr(1) and not any(d.prim_coordinates)


@pytest.mark.parametrize("model,metric", [("torus2", m) for m in TORUS_METRICS] + [("iwasawa", m) for m in IWASAWA_METRICS])
def test_decomposition_of_omega_h_and_basis_classes(model, metric):
    m, g = mm(model, metric)
    for flavor in bal.HYPERPLANE_FLAVORS:
        wh, _ = bal.omega_harmonic(m, g, flavor)
        d = bal.lefschetz_h2_decompose(m, g, wh, flavor)
        assert d.lam == gr(1) and not any(d.prim_coordinates)
        hp = bal.primitive_hyperplane(m, g, flavor)
        for rep in hp.space.basis:
            d = bal.lefschetz_h2_decompose(m, g, rep, flavor)
            assert d.routes_agree
            rebuilt = [p + d.lam * w for p, w in zip(d.prim_coordinates, d.omega_h_coordinates)]
            assert rebuilt == hp.space.coordinates(rep)
            assert hp.contains(d.prim_coordinates)


def test_background_metric_variant():
    m, g = mm("iwasawa", "diag-1-2-3")
    rho = herm.model_metric(m, "standard")
    beta = i_ebar(3, 1) + i_ebar(3, 2, c="5")
    d = bal.lefschetz_h2_decompose(m, g, beta, "DR-H2", background=rho)
    assert d.background == "standard"
    hp = bal.primitive_hyperplane(m, g)
    assert hp.contains(d.prim_coordinates)
    rebuilt = [p + d.lam * w for p, w in zip(d.prim_coordinates, d.omega_h_coordinates)]
    assert rebuilt == hp.space.coordinates(beta)


def test_sign_partition_cells():
    m, g = mm("torus2", "diag-2-3")
    wh, _ = bal.omega_harmonic(m, g)
    assert bal.sign_partition(m, g, wh) == "+"
    assert bal.sign_partition(m, g, -wh) == "-"
    prim = i_ebar(2, 1, c="2") - i_ebar(2, 2, c="3")
    assert bal.sign_partition(m, g, prim) == "prim"
    with pytest.raises(bal.NonRealClass):
        bal.sign_partition(m, g, basis_form(2, (1,), (1,)))


def test_sign_partition_is_exhaustive_on_a_grid():
    m, g = mm("iwasawa", "diag-1-2-3")
    wn1 = g.omega_power(2)
    cells = {}
    for a in range(-2, 3):
        for b in range(-2, 3):
            beta = i_ebar(3, 1, c=str(a)) + i_ebar(3, 2, c=str(b))
            cell = bal.sign_partition(m, g, beta)
            sign = m.integrate(wn1.wedge(beta))
            assert sign.im == 0
            expected = "+" if sign.re > 0 else "-" if sign.re < 0 else "prim"
            assert cell == expected
            cells[cell] = cells.get(cell, 0) + 1
    assert set(cells) == {"+", "-", "prim"}


@pytest.mark.parametrize("model,metric,c", [("torus2", "diag-2-3", 2), ("torus2", "standard", 3), ("iwasawa", "diag-1-2-3", 2), ("iwasawa", "standard", 3), ("iwasawa", "diag-1/2-3-5/3", 4)])
def test_scaling_reports(model, metric, c):
    rep = bal.scaling_check(*mm(model, metric), c)
    assert rep.passed, rep.to_dict()
    assert rep.exact == (model == "torus2" or c == 4)


# pseudo-effective samples and semi-positivity


def test_semipositivity_test():
    assert bal.semipositive_11(i_ebar(2, 1))
    assert not bal.semipositive_11(i_ebar(2, 1) - i_ebar(2, 2))
    psd = i_ebar(2, 1) + i_ebar(2, 2) + i_ebar(2, 1, 2) + i_ebar(2, 2, 1)
    assert bal.semipositive_11(psd)
    assert not bal.semipositive_11(psd + i_ebar(2, 1, 2))


def test_psef_semipositive_class_passes():
    m = catalog_model("torus2")
    metrics = [herm.model_metric(m, k) for k in TORUS_METRICS]
    assert bal.psef_sample_test(m, i_ebar(2, 1), metrics).passed


def test_psef_negative_harmonic_class_fails_at_its_metric():
    m = catalog_model("torus2")
    metrics = [herm.model_metric(m, k) for k in TORUS_METRICS]
    target = metrics[1]
    wh, _ = bal.omega_harmonic(m, target, "BC-11")
    rep = bal.psef_sample_test(m, -wh, metrics)
    assert not rep.passed and target.name in rep.failing_metrics


def test_psef_verdict_matches_explicit_integrals():
    """T = i e1ē1 - K i e2ē2 on torus2: λ has the sign of ∫ T ∧ ω_1 = a2 - K a1."""
    m = catalog_model("torus2")
    alg = oracle.Algebra(2)
    for K in ("1/4", "1", "3"):
        T = i_ebar(2, 1) - i_ebar(2, 2, c=K)
        To = oracle.from_text(alg, T.serialize())
        metrics = [herm.model_metric(m, k) for k in TORUS_METRICS]
        expected = all(
            oracle.integrate(alg, oracle.wedge(To, oracle.DiagMetric(alg, g.key()[1]).power(1))).re >= 0 for g in metrics
        )
        assert bal.psef_sample_test(m, T, metrics).passed == expected


def test_psef_needs_gauduchon_metrics():
    """Invariant metrics on unimodular models are always Gauduchon; the non-unimodular table is the only source of a violation."""
    m = non_unimodular_fixture()
    g = herm.Metric(2, [gr(1), gr(1)])
    assert not bal.classify_metric(m, g).gauduchon
    with pytest.raises(bal.MetricFlagViolation):
        bal.psef_sample_test(m, i_ebar(2, 1), [g])


# vanishing on degenerate balanced models


@pytest.mark.parametrize("metric", ["standard", "diag-1-2-3", "diag-2-1/2-1"])
def test_sl2c_vanishing_checks(metric):
    rep = bal.vanishing_checks_deg_bal(*mm("sl2c", metric))
    assert not rep.skipped
    assert all(rep.checks.values()), rep.checks


def test_vanishing_checks_skip_on_torus():
    rep = bal.vanishing_checks_deg_bal(*mm("torus2", "standard"))
    assert rep.skipped and rep.reason == "not degenerate balanced"


def test_psd_certificate_on_sl2c():
    m, g = mm("sl2c", "standard")
    forms = bal.tau_harmonic_11(m, g)
    cert = bal.psd_kernel_certificate(m, g, forms)
    assert cert["only_zero"]
