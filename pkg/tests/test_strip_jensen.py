import math
import warnings
from pathlib import Path

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from convexity.specfun import DomainError
from convexity.strip_jensen import (
    HALF_PI,
    ConditioningWarning,
    InsufficientSignalError,
    SingularityError,
    TestFunction,
    J_closed,
    J_integral,
    deterministic_corpus,
    dump_corpus,
    format_record,
    lemma_lhs,
    lemma_rhs,
    load_corpus,
    log_abs_elementary,
    parse_record,
    random_corpus,
    verify_lemma,
    weierstrass_tail_decay,
    weierstrass_tail_integral,
)

mpmath.mp.dps = 50

DATA = Path(__file__).resolve().parents[1] / "data"


def mp_J(rho):
    return float(mpmath.log(abs(mpmath.cot(mpmath.mpc(rho) / 2))))


# ---------------------------------------------------------------- J


def test_J_at_point_three():
    assert J_closed(0.3) == pytest.approx(mp_J(0.3), abs=1e-13)
    assert J_closed(0.3) == pytest.approx(1.88958, abs=1e-5)


@pytest.mark.parametrize("rho", [0.3 + 0.4j, -1.2 + 2j, 1.5 - 0.01j, 0.001j, -0.7 - 30j])
def test_J_matches_high_precision_cot(rho):
    assert J_closed(rho) == pytest.approx(mp_J(rho), rel=1e-12, abs=1e-300)


def test_J_outside_and_singular():
    assert J_closed(2.0) == 0.0
    assert J_closed(-HALF_PI + 0j) == 0.0
    with pytest.raises(SingularityError):
        J_closed(0)


def test_J_decays_in_imaginary_direction():
    vals = [J_closed(0.4 + 1j * b) for b in (5, 10, 20)]
    assert vals[0] > vals[1] > vals[2] > 0
    # J ~ 2 cos(a) e^{-b}
    assert vals[2] == pytest.approx(2 * math.cos(0.4) * math.exp(-20), rel=1e-6)


@given(st.floats(-1.5, 1.5), st.floats(-8, 8))
def test_J_symmetries(a, b):
    if abs(complex(a, b)) < 1e-3:
        return
    rho = complex(a, b)
    v = J_closed(rho)
    assert v >= 0
    assert J_closed(-rho) == pytest.approx(v, rel=1e-12)
    assert J_closed(rho.conjugate()) == pytest.approx(v, rel=1e-12)


def test_J_integral_examples():
    assert J_integral(HALF_PI, 1.0) == 0.0
    # b = 0: 2 int_a^{pi/2} dx/(2 sin x) = -log tan(a/2)
    assert J_integral(0.3, 0.0) == pytest.approx(-math.log(math.tan(0.15)), abs=1e-12)
    with pytest.raises(DomainError):
        J_integral(2.0, 0.0)
    with pytest.raises(SingularityError):
        J_integral(0.0, 0.0)


def test_J_integral_agrees_with_closed_form_on_grid():
    worst = 0.0
    for a in np.linspace(-1.5, 1.5, 20):
        for b in np.linspace(-3, 3, 20):
            worst = max(worst, abs(J_integral(a, b) - J_closed(complex(a, b))))
    assert worst <= 1e-10


# -------------------------------------------------------- elementary factors


@pytest.mark.parametrize("order", [0, 1, 2, 3])
@pytest.mark.parametrize("w", [1e-6 + 2e-6j, 0.3 - 0.2j, 0.49, 0.7 + 0.1j, -2.0 + 3j])
def test_log_abs_elementary_against_mpmath(order, w):
    W = mpmath.mpc(w)
    ref = mpmath.log(abs(1 - W)) + mpmath.re(sum(W**j / j for j in range(1, order + 1)))
    got = float(log_abs_elementary(w, order))
    assert got == pytest.approx(float(ref), rel=1e-11, abs=1e-300)


# ---------------------------------------------------------------- lemma sides


def test_constant_function():
    f = TestFunction((), (math.log(2.0),))
    assert lemma_lhs(f).value == pytest.approx(math.log(2.0), abs=1e-12)
    assert lemma_rhs(f) == pytest.approx(math.log(2.0), abs=1e-15)


def test_exponential_has_zero_lhs():
    assert abs(lemma_lhs(TestFunction((), (0.0, 1.0))).value) < 1e-12


def test_zero_outside_strip():
    f = TestFunction(((math.pi, 1),))
    assert abs(lemma_lhs(f).value) < 1e-8
    assert lemma_rhs(f) == 0.0


def test_exp_quadratic():
    rep = verify_lemma(TestFunction((), (0.0, -1.0, 3.0)))
    assert rep.residual <= 1e-9 and rep.passed


def test_single_zero_inside():
    f = TestFunction(((0.3, 1),))
    rep = verify_lemma(f)
    assert rep.rhs == pytest.approx(J_closed(0.3))
    assert rep.residual <= 1e-8
    assert rep.contributions == [J_closed(0.3)]


def test_multiplicity_matches_square():
    simple = TestFunction(((0.5 + 0.8j, 1),), (0.1,))
    double = TestFunction(((0.5 + 0.8j, 2),), (0.2,))
    sq = simple * simple
    assert lemma_lhs(double).value == pytest.approx(lemma_lhs(sq).value, abs=1e-12)
    assert lemma_lhs(double).value == pytest.approx(2 * lemma_lhs(simple).value, abs=1e-11)
    assert lemma_rhs(double) == pytest.approx(2 * lemma_rhs(simple), abs=1e-14)


zero_st = st.tuples(
    st.complex_numbers(max_magnitude=4, allow_nan=False, allow_infinity=False).filter(
        lambda z: abs(z) > 0.05 and abs(abs(z.real) - HALF_PI) > 0.15
    ),
    st.integers(1, 3),
)
fn_st = st.builds(
    TestFunction,
    st.lists(zero_st, max_size=4).map(tuple),
    st.lists(st.complex_numbers(max_magnitude=0.5, allow_nan=False), max_size=3).map(tuple),
    st.just(1),
)


@settings(max_examples=25, deadline=None)
@given(fn_st, fn_st)
def test_lhs_is_additive(f, g):
    lhs_fg = lemma_lhs(f * g).value
    assert lhs_fg == pytest.approx(lemma_lhs(f).value + lemma_lhs(g).value, abs=1e-9)
    assert lemma_rhs(f * g) == pytest.approx(lemma_rhs(f) + lemma_rhs(g), abs=1e-12)


@settings(max_examples=25, deadline=None)
@given(fn_st)
def test_identity_holds_for_generated_functions(f):
    assert verify_lemma(f).residual <= 1e-8


def test_random_corpus_functions():
    worst = max(verify_lemma(f).residual for f in random_corpus(11, 10))
    assert worst <= 1e-8


def test_invalid_test_functions():
    with pytest.raises(SingularityError):
        TestFunction(((0j, 1),))
    with pytest.raises(DomainError):
        TestFunction(((HALF_PI + 1j, 1),))
    with pytest.raises(DomainError):
        TestFunction(((-HALF_PI, 1),))
    with pytest.raises(ValueError):
        TestFunction(((1.0, 0),))
    with pytest.raises(ValueError):
        TestFunction(((1.0, 1),), (), 1) * TestFunction(((1.0, 1),))


def test_near_edge_zero_warns_but_holds():
    f = TestFunction(((HALF_PI - 0.02 + 0.3j, 1),))
    with pytest.warns(ConditioningWarning):
        res = lemma_lhs(f)
    assert abs(res.value - lemma_rhs(f)) <= 1e-8
    rep = verify_lemma(f)
    assert rep.warnings


def test_no_warning_for_small_but_regular_values():
    f = TestFunction((), (-50.0, 0.0, -3.0))
    with warnings.catch_warnings():
        warnings.simplefilter("error", ConditioningWarning)
        assert verify_lemma(f).residual <= 1e-8


def test_envelope_bounds_edge_integrand():
    for f in deterministic_corpus() + random_corpus(3, 20):
        env = f.edge_envelope()
        t = np.linspace(-40, 40, 801)
        for edge in (HALF_PI, -HALF_PI):
            assert np.all(np.abs(f.log_abs(edge + 1j * t)) <= env(t) * (1 + 1e-12))


# ------------------------------------------------------- Weierstrass tails


@pytest.mark.parametrize("order", [1, 2, 3])
def test_weierstrass_tail_decays_at_least_like_order_plus_one(order):
    slope = weierstrass_tail_decay(order, [5.0, 10.0, 20.0, 40.0])
    assert slope <= -(order + 1) + 0.1


def test_weierstrass_tail_vanishes_at_infinity():
    vals = [weierstrass_tail_integral(2, r).value for r in (10.0, 100.0, 1000.0)]
    assert vals[0] > vals[1] > vals[2]
    assert vals[2] < 1e-6


def test_weierstrass_tail_reports_lost_signal():
    with pytest.raises(InsufficientSignalError):
        weierstrass_tail_decay(3, [1e4, 1e5, 1e6, 1e7])


def test_weierstrass_tail_validates_radii():
    with pytest.raises(ValueError):
        weierstrass_tail_decay(1, [5.0, 10.0, 20.0])
    with pytest.raises(ValueError):
        weierstrass_tail_decay(1, [5.0, 6.0, 7.0, 8.0])
    with pytest.raises(ValueError):
        weierstrass_tail_decay(0, [5.0, 10.0, 20.0, 40.0])


# ---------------------------------------------------------------- corpus I/O


def test_record_format_example():
    f = TestFunction(((0.3 + 0.4j, 2),), (0.5, 0.25j), 1)
    assert format_record(f) == "0.3,0.4,2|0.5,0.25j|1"
    assert parse_record(format_record(f)) == f


@pytest.mark.parametrize("corpus", [deterministic_corpus(), random_corpus(7), random_corpus(2024, 30)])
def test_corpus_round_trip_is_bit_exact(corpus):
    text = dump_corpus(corpus)
    back = load_corpus(text)
    assert back == corpus
    assert dump_corpus(back) == text


def test_shipped_corpus_matches_generator():
    assert load_corpus((DATA / "lemma_corpus.txt").read_text()) == deterministic_corpus()


def test_malformed_record():
    with pytest.raises(ValueError):
        parse_record("0.3,0.4,1|1.0")
