import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracle
from hermlab import hermitian as herm
from hermlab.forms import DimensionMismatch, Form, basis_form, e, ebar, exterior_algebra
from hermlab.scalars import DivisionByZero, FourierSum, GaussianRational, RingMismatch, gr, lift
from strategies import forms, gaussian, nonzero_gaussian


# scalars


def test_one_plus_i_times_conjugate_is_two():
    assert gr("1,1") * gr("1,-1") == gr(2)


def test_conjugation_is_an_involution_on_a_sample():
    z = GaussianRational(Fraction(3, 7), Fraction(2, 5))
    assert z.conjugate().conjugate() == z


def test_fourier_product_adds_frequencies():
    f = FourierSum({(1, 0, 0, 0): 2.0})
    g = FourierSum({(0, -1, 2, 0): 3j})
    assert (f * g).terms == {(1, -1, 2, 0): 6j}


def test_fourier_conjugate_negates_frequencies():
    f = FourierSum({(1, 2, 0, -1): 1 + 2j})
    assert f.conjugate().terms == {(-1, -2, 0, 1): 1 - 2j}


def test_division_by_zero_is_reported():
    with pytest.raises(DivisionByZero):
        gr(1) / gr(0)


def test_mixed_rings_are_rejected():
    with pytest.raises(RingMismatch):
        FourierSum({(0, 0): gr(1)})
    with pytest.raises(RingMismatch):
        gr(1) + FourierSum.constant(1.0, 1)


@given(gaussian, gaussian, gaussian)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a + (-a) == gr(0)


@given(nonzero_gaussian)
def test_inverse(a):
    assert a * a.inverse() == gr(1)


@given(gaussian, gaussian)
def test_conjugation_is_multiplicative(a, b):
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    assert a.conjugate().conjugate() == a


def test_text_round_trip():
    for z in (gr("3/7,-2/5"), gr(0), gr("0,1"), gr("-4")):
        assert GaussianRational.parse(z.text()) == z


# basis and wedge


def test_basis_order_is_degree_then_p_then_indices():
    alg = exterior_algebra(2)
    labels = [str(b) for b in alg.basis]
    assert labels[:5] == ["|", "|1", "|2", "1|", "2|"]
    assert labels[-1] == "1,2|1,2"
    keys = [(b.degree, b.p, b.hol, b.antihol) for b in alg.basis]
    assert keys == sorted(keys)


def test_repeated_generator_wedges_to_zero():
    assert e(3, 1).wedge(e(3, 1)).is_zero()


def test_odd_forms_anticommute():
    a, b = e(2, 1), ebar(2, 1)
    assert a.wedge(b) == -(b.wedge(a))


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        e(2, 1).wedge(e(3, 1))


@given(forms(3), forms(3))
def test_graded_commutativity(u, v):
    for p in range(7):
        for q in range(7):
            a, b = u.part(p), v.part(q)
            sign = -1 if (p * q) % 2 else 1
            assert a.wedge(b) == b.wedge(a).scale(gr(sign))


@given(forms(3, degree=1), forms(3, degree=3))
def test_odd_square_vanishes(u, w):
    assert u.wedge(u).is_zero()
    assert w.wedge(w).is_zero()


def test_wedge_matches_direct_expansion_on_random_triples():
    """200 random triples, n = 3: engine wedge vs the brute-force oracle."""
    rng = random.Random(11)
    alg = oracle.Algebra(3)
    for _ in range(200):
        u, v, w = (oracle.random_form(alg, rng, density=0.15) for _ in range(3))
        U, V, W = (Form.parse(oracle.to_text(alg, f), 3, "exact") for f in (u, v, w))
        assert oracle.from_text(alg, U.wedge(V).wedge(W).serialize()) == oracle.wedge(oracle.wedge(u, v), w)
        assert U.wedge(V).wedge(W) == U.wedge(V.wedge(W))


# conjugation and components


def test_i_e1_ebar1_is_real():
    f = basis_form(2, (1,), (1,), gr("0,1"))
    assert f.conjugate() == f
    assert f.is_real()


def test_conjugate_swaps_indices_with_sign():
    assert basis_form(2, (1,), (2,)).conjugate() == basis_form(2, (2,), (1,), gr(-1))


def test_metric_forms_are_real():
    for diag in (["1", "1", "1"], ["1/2", "3", "5/3"]):
        assert herm.Metric(3, [gr(x) for x in diag]).omega().is_real()


@given(forms(3))
def test_conjugate_involution_and_type_swap(u):
    assert u.conjugate().conjugate() == u
    for p in range(4):
        for q in range(4):
            assert u.component(p, q).conjugate() == u.conjugate().component(q, p)


def test_component_projection():
    f = e(2, 1) + ebar(2, 1)
    assert f.component(1, 0) == e(2, 1)
    assert f.component(2, 2).is_zero()


@given(forms(3, degree=2))
def test_components_reassemble(u):
    total = Form.zero(3)
    for p in range(3):
        total = total + u.component(p, 2 - p)
    assert total == u


@given(forms(3))
def test_serialization_round_trip_is_byte_identical(u):
    text = u.serialize()
    assert Form.parse(text, 3).serialize() == text


@given(forms(2), st.sampled_from(["1", "0,1", "-2/3,1/2"]))
def test_scaling_is_linear(u, c):
    c = gr(c)
    assert (u + u).scale(c) == u.scale(c) + u.scale(c)
    assert u.scale(c).scale(c.inverse()) == u


def test_float_lift_is_explicit():
    assert lift(gr("1/2,1"), "float") == complex(0.5, 1)
