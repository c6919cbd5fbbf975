from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.polys.domains import QQ, QQ_I

from cotlar.coxeter import named_system, validate_system
from cotlar.errors import WordTooLong
from cotlar.multipliers import constant_symbol, mw_symbol, verify_cotlar
from cotlar.ncalgebra import (
    GroupAlgebraElement as GA,
    abs2,
    apply_multiplier,
    conditional_expectation,
    cotlar_residual,
    ga_adjoint,
    ga_mul,
    lp_norm_even,
    plancherel_trace,
    random_element,
    ratio_report,
    trace_power,
    violation_witness,
)

DINF = named_system("dinf")
AT = named_system("a2tilde")
A2 = named_system("a2")
Z2 = validate_system([[1]], ["s"])


def elements(group, radius=2, max_size=4):
    ball = group.ball(radius)
    coeff = st.tuples(st.integers(-3, 3), st.integers(-3, 3)).map(lambda p: complex(*p))
    return st.dictionaries(st.sampled_from(ball), coeff, max_size=max_size).map(lambda d: GA(group, d))


def test_delta_product():
    g, h = DINF.word("st"), DINF.word("t")
    assert ga_mul(GA.delta(DINF, g), GA.delta(DINF, h)) == GA.delta(DINF, DINF.multiply(g, h))


def test_square_in_z2():
    f = GA(Z2, {(): 1, (0,): 1})
    assert ga_mul(f, f) == GA(Z2, {(): 2, (0,): 2})


def test_no_zero_coefficients():
    f = GA(DINF, {(): 1, (0,): 0})
    assert len(f) == 1
    assert len(f - f) == 0


def test_adjoint_examples():
    g = DINF.word("st")
    assert ga_adjoint(GA.delta(DINF, g)) == GA.delta(DINF, DINF.invert(g))
    a = GA(DINF, {g: 2 + 1j})
    assert ga_adjoint(a) == GA(DINF, {DINF.invert(g): 2 - 1j})


def test_trace_examples():
    assert plancherel_trace(GA.delta(DINF, ())) == QQ_I(1, 0)
    assert plancherel_trace(GA.delta(DINF, (0,))) == QQ_I(0, 0)


def test_exact_coefficients():
    f = GA(DINF, {(): Fraction(1, 3), (0,): 0.5j})
    assert f[()] == QQ_I(QQ(1, 3), 0)
    assert f[(0,)] == QQ_I(0, QQ(1, 2))


@settings(max_examples=40, deadline=None)
@given(a=elements(DINF), b=elements(DINF), c=elements(DINF))
def test_algebra_laws(a, b, c):
    assert ga_mul(a, b + c) == ga_mul(a, b) + ga_mul(a, c)
    assert ga_mul(ga_mul(a, b), c) == ga_mul(a, ga_mul(b, c))
    assert ga_adjoint(ga_mul(a, b)) == ga_mul(ga_adjoint(b), ga_adjoint(a))
    assert ga_adjoint(ga_adjoint(a)) == a
    assert plancherel_trace(ga_mul(a, b)) == plancherel_trace(ga_mul(b, a))
    assert plancherel_trace(ga_mul(ga_adjoint(a), a)) == QQ_I(sum(abs2(x) for x in a.coefficients.values()), 0)


@settings(max_examples=30, deadline=None)
@given(a=elements(A2, 3), b=elements(A2, 3))
def test_multiplier_is_diagonal(a, b):
    m1, m2 = mw_symbol(A2, 0), mw_symbol(A2, 1)
    assert apply_multiplier(m1, a + b) == apply_multiplier(m1, a) + apply_multiplier(m1, b)
    assert apply_multiplier(m1, apply_multiplier(m2, a)) == apply_multiplier(m2, apply_multiplier(m1, a))
    assert apply_multiplier(constant_symbol(1), a) == a
    for g in a.support:
        assert apply_multiplier(m1, GA.delta(A2, g)) == GA.delta(A2, g, m1(g))


@settings(max_examples=30, deadline=None)
@given(a=elements(DINF, 3, 6), x=elements(DINF, 0, 1), y=elements(DINF, 0, 1))
def test_conditional_expectation(a, x, y):
    member = lambda g: g == ()
    E = lambda z: conditional_expectation(member, z)
    assert E(E(a)) == E(a)
    assert plancherel_trace(E(a)) == plancherel_trace(a)
    assert E(ga_mul(ga_mul(x, a), y)) == ga_mul(ga_mul(x, E(a)), y)


def test_expectation_extremes():
    f = GA(DINF, {(): 1, (0,): 2})
    assert conditional_expectation(lambda g: True, f) == f
    assert len(conditional_expectation(lambda g: False, f)) == 0


def test_residual_of_delta_e():
    for s in range(3):
        r = cotlar_residual(mw_symbol(AT, s), lambda g: g == (), GA.delta(AT, ()))
        assert r.is_zero


def test_residual_dinf_example():
    f = GA(DINF, {(): 1, (0,): 2, DINF.word("st"): 1j})
    r = cotlar_residual(mw_symbol(DINF, 0), lambda g: g == (), f)
    assert r.is_zero and r.residual_sup_squared == 0
    assert r.to_json()["residual_sup"] == "0 (exact)"


def test_residual_a2tilde_violation():
    m = mw_symbol(AT, 0)
    rep = verify_cotlar(AT, m, lambda g: g == (), 3)
    g, h, _ = rep.violations[0]
    r = cotlar_residual(m, lambda x: x == (), violation_witness(AT, g, h))
    assert not r.is_zero and r.residual_sup > 0


def test_symbol_cotlar_implies_operator_cotlar():
    m = mw_symbol(DINF, 1)
    rng = np.random.default_rng(11)
    for _ in range(20):
        f = random_element(DINF, 2, rng, exact=True)
        assert cotlar_residual(m, lambda g: g == (), f).is_zero


def test_residual_cap():
    f = GA(DINF.with_max_word_len(6), {DINF.word("stst"): 1})
    with pytest.raises(WordTooLong):
        cotlar_residual(mw_symbol(DINF, 0), lambda g: g == (), f)


def test_lp_examples():
    for k in (1, 2, 3):
        assert lp_norm_even(GA.delta(DINF, DINF.word("st")), k) == pytest.approx(1.0)
    f = GA(Z2, {(): 1, (0,): 1})
    assert trace_power(f, 2) == QQ_I(8, 0)
    assert lp_norm_even(f, 2) == pytest.approx(8 ** 0.25)
    g = GA(DINF, {(): 3, (0,): 4j})
    assert lp_norm_even(g, 1) == pytest.approx(5.0)


def test_lp_matches_dense_matrices():
    # independent route on S3: left-regular matrices and numpy eigenvalues
    ball = A2.ball(3)
    idx = {g: i for i, g in enumerate(ball)}

    def lam(f):
        M = np.zeros((6, 6), dtype=complex)
        for g, c in f.coefficients.items():
            for h in ball:
                M[idx[A2.multiply(g, h)], idx[h]] += complex(float(c.x), float(c.y))
        return M

    rng = np.random.default_rng(5)
    for _ in range(5):
        f = random_element(A2, 3, rng, exact=True)
        M = lam(f)
        sv = np.linalg.svd(M, compute_uv=False)
        for k in (1, 2, 3):
            # normalised trace on the regular representation equals tau
            dense = (np.sum(sv ** (2 * k)) / 6) ** (1 / (2 * k))
            assert lp_norm_even(f, k) == pytest.approx(dense)


@settings(max_examples=20, deadline=None)
@given(f=elements(DINF, 2, 4), g=st.sampled_from(DINF.ball(2)))
def test_lp_left_translation_invariant(f, g):
    shifted = ga_mul(GA.delta(DINF, g), f)
    assert trace_power(shifted, 2) == trace_power(f, 2)


def test_ratio_constant_symbol():
    rep = ratio_report(DINF, constant_symbol(1), 2, 2, 20, seed=3)
    assert rep.max_ratio == pytest.approx(1.0) and rep.min_ratio == pytest.approx(1.0)


def test_ratio_eigenvector():
    m = mw_symbol(DINF, 0)
    for g in DINF.ball(2):
        f = GA.delta(DINF, g, exact=False)
        ratio = lp_norm_even(apply_multiplier(m, f), 2) / lp_norm_even(f, 2)
        assert ratio == pytest.approx(1.0)


def test_ratio_deterministic():
    m = mw_symbol(DINF, 0)
    a = ratio_report(DINF, m, 2, 3, 50, seed=9).to_json()
    b = ratio_report(DINF, m, 2, 3, 50, seed=9).to_json()
    assert a == b
    assert a["reference_shape"] == pytest.approx((16 / 3) ** np.log2(1 + np.sqrt(2)))
