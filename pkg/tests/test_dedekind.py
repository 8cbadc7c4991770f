import math
import random
from fractions import Fraction

import pytest

from elliptic_dedekind import (
    ExcludedRingError,
    GenerationError,
    Mat2,
    NotUnimodularError,
    PreconditionError,
    SumContext,
    ZeroDivisorError,
    d_norm,
    d_sum,
    gen_sl2_triple,
    i_map,
    three_term_closed_form,
    phi,
    three_term_residual,
)
from elliptic_dedekind.verification import random_unimodular_word

SQRT2 = math.sqrt(2.0)

# Regression anchors over Z + Z*sqrt(-2), frozen from this implementation's own
# brute-force coset-summation run (they agree with small exact rationals, as
# the normalized values should).
DNORM_ANCHORS = [
    ((1, 0), (0, 1), Fraction(8, 9)),
    ((1, 1), (2, 1), Fraction(-2, 3)),
    ((4, 1), (1, 1), Fraction(15, 11)),
]


def random_elem(rng, order, max_norm=60, bound=8):
    while True:
        e = order.element(rng.randint(-bound, bound), rng.randint(-bound, bound))
        if 0 < e.norm() <= max_norm:
            return e


# --- I map -------------------------------------------------------------------


def test_i_map_examples():
    assert i_map(3.0) == 0.0
    assert i_map(3 + 2j) == 4j
    rng = random.Random(20)
    for _ in range(50):
        z = complex(rng.uniform(-5, 5), rng.uniform(-5, 5))
        assert abs(i_map(z) + i_map(z.conjugate())) == 0.0
        assert i_map(z).real == 0.0


# --- d_sum --------------------------------------------------------------------


def test_d_sum_zero_modulus(ctx_m8):
    with pytest.raises(ZeroDivisorError):
        d_sum(ctx_m8.order.one(), ctx_m8.order.zero(), ctx_m8)


def test_d_sum_shift_invariance(ctx_m8):
    rng = random.Random(21)
    order = ctx_m8.order
    for _ in range(8):
        h = random_elem(rng, order, 40)
        k = random_elem(rng, order, 40)
        m = order.element(rng.randint(-2, 2), rng.randint(-2, 2))
        v0 = d_sum(h, k, ctx_m8)
        v1 = d_sum(h + k * m, k, ctx_m8)
        assert abs(v1 - v0) < 1e-8 * (1 + abs(v0))


def test_d_sum_oddness(ctx_m8):
    rng = random.Random(22)
    order = ctx_m8.order
    for _ in range(8):
        h = random_elem(rng, order, 40)
        k = random_elem(rng, order, 40)
        assert abs(d_sum(-h, k, ctx_m8) + d_sum(h, k, ctx_m8)) < 1e-8


def test_d_sum_inverse_congruence(ctx_m8):
    # D(a1, c) = D(a2, c) whenever a1*a2 = 1 (mod c)
    from elliptic_dedekind import egcd_order

    rng = random.Random(23)
    order = ctx_m8.order
    checked = 0
    while checked < 50:
        a1 = random_elem(rng, order, 40)
        c = random_elem(rng, order, 40)
        g, x, y = egcd_order(a1, c)
        if not g.is_unit():
            continue
        a2 = x * g.conjugate()
        if (a1 * a2 - order.one()).exact_div(c) is None:
            continue
        v1 = d_sum(a1, c, ctx_m8)
        v2 = d_sum(a2, c, ctx_m8)
        assert abs(v1 - v2) < 1e-8 * (1 + abs(v1))
        checked += 1


def test_d_sum_threads_deterministic(ctx_m8):
    order = ctx_m8.order
    h = order.element(3, 1)
    k = order.element(7, 2)
    serial = d_sum(h, k, ctx_m8, threads=1)
    threaded = d_sum(h, k, ctx_m8, threads=4)
    assert serial == threaded  # bitwise identical reduction order


# --- d_norm --------------------------------------------------------------------


def test_d_norm_excluded_ring(ctx_gauss):
    with pytest.raises(ExcludedRingError):
        d_norm(ctx_gauss.order.element(1), ctx_gauss.order.element(2), ctx_gauss)


def test_d_norm_frozen_anchors(ctx_m8):
    order = ctx_m8.order
    for (hu, hv), (ku, kv), expected in DNORM_ANCHORS:
        val = d_norm(order.element(hu, hv), order.element(ku, kv), ctx_m8)
        assert abs(val - float(expected)) < 1e-8


def test_d_norm_scale_invariance(order_m8):
    rng = random.Random(24)
    base = SumContext(order_m8)
    h = order_m8.element(1, 1)
    k = order_m8.element(2, 1)
    v0 = d_norm(h, k, base)
    for _ in range(5):
        c = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        if abs(c) < 0.4:
            continue
        scaled = base.scaled(c)
        assert abs(d_norm(h, k, scaled) - v0) < 1e-8


# --- phi ---------------------------------------------------------------------------


def test_phi_identity(ctx_m8):
    assert phi(Mat2.identity(ctx_m8.order), ctx_m8) == 0.0


def test_phi_rejects_non_unimodular(ctx_m8):
    order = ctx_m8.order
    bad = Mat2(order.element(2), order.zero(), order.zero(), order.element(2))
    with pytest.raises(NotUnimodularError):
        phi(bad, ctx_m8)


def test_phi_upper_triangular(ctx_m8):
    order = ctx_m8.order
    e2 = ctx_m8.lattice.e2_zero()
    # rational-integer b: I(b) = 0
    upper = Mat2(order.one(), order.element(5), order.zero(), order.one())
    assert abs(phi(upper, ctx_m8)) < 1e-12
    # b = sqrt(d): Phi = 2*E2(0)*sqrt(d)
    from elliptic_dedekind import sqrt_discriminant

    rd = sqrt_discriminant(order)
    upper2 = Mat2(order.one(), rd, order.zero(), order.one())
    expected = 2.0 * e2 * rd.embed()
    assert abs(phi(upper2, ctx_m8) - expected) < 1e-10 * (1 + abs(expected))


def test_phi_trivial_on_gaussian_and_eisenstein(ctx_gauss, ctx_eisenstein):
    for ctx, seed in ((ctx_gauss, 25), (ctx_eisenstein, 26)):
        rng = random.Random(seed)
        for _ in range(20):
            w = random_unimodular_word(rng, ctx.order)
            assert abs(phi(w, ctx)) < 1e-7


# --- three-term relation --------------------------------------------------------------


def test_three_term_inverse_pair(ctx_m8):
    rng = random.Random(27)
    for _ in range(10):
        w = random_unimodular_word(rng, ctx_m8.order)
        res = three_term_residual(Mat2.identity(ctx_m8.order), w, w.inverse(), ctx_m8)
        assert abs(res) < 1e-7


def test_three_term_random_words(ctx_m8):
    rng = random.Random(28)
    for _ in range(15):
        w2 = random_unimodular_word(rng, ctx_m8.order)
        w3 = random_unimodular_word(rng, ctx_m8.order)
        w1 = w2 @ w3
        if w1.max_entry_norm() > 20000:
            continue
        res = three_term_residual(w1, w2, w3, ctx_m8)
        scale = 1 + abs(phi(w1, ctx_m8)) + abs(phi(w2, ctx_m8)) + abs(phi(w3, ctx_m8))
        assert abs(res) <= 1e-7 * scale


def test_three_term_with_identity_factor(ctx_m8):
    rng = random.Random(32)
    ident = Mat2.identity(ctx_m8.order)
    for _ in range(5):
        w = random_unimodular_word(rng, ctx_m8.order)
        assert abs(three_term_residual(w, w, ident, ctx_m8)) < 1e-7


def test_three_term_precondition(ctx_m8):
    order = ctx_m8.order
    ident = Mat2.identity(order)
    shifted = Mat2(order.one(), order.element(1), order.zero(), order.one())
    with pytest.raises(PreconditionError):
        three_term_residual(shifted, ident, ident, ctx_m8)


# --- lemma closed form ------------------------------------------------------------------


def test_lemma_zero_denominators(ctx_m8):
    order = ctx_m8.order
    with pytest.raises(ZeroDivisorError):
        three_term_closed_form(order.zero(), order.one(), ctx_m8)
    with pytest.raises(ZeroDivisorError):
        three_term_closed_form(order.one(), order.zero(), ctx_m8)


def test_lemma_equality_on_generated_triples(ctx_m8):
    produced = 0
    seed = 0
    while produced < 8:
        seed += 1
        try:
            m1, m2, m3 = gen_sl2_triple(seed, ctx_m8, max_c3_norm=300)
        except GenerationError:
            continue
        lhs = d_sum(m3.a, m3.c, ctx_m8)
        rhs = three_term_closed_form(m1.c, m3.c, ctx_m8)
        assert abs(lhs - rhs) <= 1e-6 * (1 + abs(rhs))
        produced += 1


def test_lemma_sign_flip_in_c3(ctx_m8):
    # I flips the sign of the 2/c3 term only under c3 -> -c3 with c fixed.
    order = ctx_m8.order
    c = order.element(3, 1)
    c3 = order.element(2, 1)
    e2 = ctx_m8.lattice.e2_zero()
    plus = three_term_closed_form(c, c3, ctx_m8)
    minus = three_term_closed_form(c, -c3, ctx_m8)
    cc, c3c = c.embed(), c3.embed()
    expected = e2 * i_map(-2.0 / c3c - c3c / (cc * cc))
    assert abs(minus - expected) < 1e-12


def test_lemma_purely_imaginary_doubling(ctx_m8):
    # For purely imaginary w the map I doubles it; the closed form inherits that.
    order = ctx_m8.order
    from elliptic_dedekind import sqrt_discriminant

    rd = sqrt_discriminant(order)  # embeds to i*sqrt(8)
    c = order.element(3)
    c3 = 2 * rd
    w = 2.0 / c3.embed() + c3.embed() / c.embed() ** 2
    assert abs(w.real) < 1e-14
    val = three_term_closed_form(c, c3, ctx_m8)
    assert abs(val - ctx_m8.lattice.e2_zero() * 2.0 * w) < 1e-12


# --- triple generator -----------------------------------------------------------------------


def test_gen_sl2_triple_invariants(ctx_m8):
    order = ctx_m8.order
    one = order.one()
    for seed in range(1, 12):
        try:
            m1, m2, m3 = gen_sl2_triple(seed, ctx_m8, max_c3_norm=300)
        except GenerationError:
            continue
        assert m1.det() == one and m2.det() == one and m3.det() == one
        assert m1.c == m2.c and not m1.c.is_zero()
        assert m2 @ m3 == m1
        assert m3.c == m1.c * (m2.a - m1.a)
        assert m1.a != m2.a
        assert (m1.a * m2.a - one).exact_div(m1.c) is not None
        assert 0 < m3.c.norm() <= 300


def test_mat2_inverse_and_product(ctx_m8):
    rng = random.Random(29)
    for _ in range(20):
        w = random_unimodular_word(rng, ctx_m8.order)
        assert w @ w.inverse() == Mat2.identity(ctx_m8.order)
