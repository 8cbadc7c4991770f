import math
import random

import pytest

from elliptic_dedekind import (
    DegenerateLatticeError,
    Lattice,
    PoleError,
    PrecisionPolicy,
    QuadOrder,
    area,
    e1,
    e2_zero,
    j_invariant,
    weierstrass_zeta,
)
from elliptic_dedekind.oracles import e2_hecke_limit, weierstrass_zeta_direct

SQRT2 = math.sqrt(2.0)
RHO = complex(-0.5, math.sqrt(3.0) / 2.0)

# Regression anchor from this implementation's own q-series run, cross-checked
# against the direct Hecke-limit oracle to 1e-4.
S2_SQRT2 = 1.0574989111915336


def rand_points(seed, n, spread=1.4):
    rng = random.Random(seed)
    return [complex(rng.uniform(-spread, spread), rng.uniform(-spread, spread)) for _ in range(n)]


# --- construction / area ------------------------------------------------------


def test_area_examples():
    assert abs(area(Lattice(1.0, 1j)) - 1.0) < 1e-15
    assert abs(area(Lattice(1.0, 1j * SQRT2)) - SQRT2) < 1e-15


def test_area_scaling():
    rng = random.Random(7)
    base = Lattice(1.0, 1j * SQRT2)
    for _ in range(20):
        c = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        if abs(c) < 0.1:
            continue
        assert abs(area(base.scaled(c)) - abs(c) ** 2 * area(base)) < 1e-12 * abs(c) ** 2


def test_degenerate_and_misoriented_bases():
    with pytest.raises(DegenerateLatticeError):
        Lattice(1.0, 2.0)
    with pytest.raises(DegenerateLatticeError):
        Lattice(1.0, -1j)  # negatively oriented


def test_precision_policy_validation():
    with pytest.raises(ValueError):
        PrecisionPolicy(zeta_radius=2)
    with pytest.raises(ValueError):
        PrecisionPolicy(q_terms=4)
    with pytest.raises(ValueError):
        PrecisionPolicy(tol=0.0)


# --- weierstrass zeta ---------------------------------------------------------


def test_zeta_oddness():
    lat = Lattice(1.0, 1j * SQRT2)
    for z in rand_points(8, 50):
        assert abs(lat.weierstrass_zeta(z) + lat.weierstrass_zeta(-z)) < 1e-10


def test_zeta_pole_error():
    lat = Lattice(1.0, 1j * SQRT2)
    with pytest.raises(PoleError):
        weierstrass_zeta(0.0, lat)
    with pytest.raises(PoleError):
        weierstrass_zeta(2 + 3j * SQRT2, lat)


def test_legendre_relation():
    for om2 in (1j * SQRT2, complex(0.5, 0.5 * math.sqrt(7)), complex(0.3, 1.9)):
        lat = Lattice(1.0, om2)
        eta1, eta2 = lat.quasi_periods()
        assert abs(eta1 * lat.omega2 - eta2 * lat.omega1 - 2j * math.pi) < 1e-8


def test_zeta_quasi_periodicity():
    lat = Lattice(1.0, 1j * SQRT2)
    eta1, eta2 = lat.quasi_periods()
    z = 0.31 + 0.4j
    base = lat.weierstrass_zeta(z)
    assert abs(lat.weierstrass_zeta(z + lat.omega1) - base - eta1) < 1e-10
    assert abs(lat.weierstrass_zeta(z + lat.omega2) - base - eta2) < 1e-10


def test_zeta_homogeneity():
    lat = Lattice(1.0, 1j * SQRT2)
    rng = random.Random(9)
    for _ in range(20):
        c = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        if abs(c) < 0.3:
            continue
        z = complex(rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4)) + 0.13 + 0.07j
        lhs = lat.scaled(c).weierstrass_zeta(c * z)
        rhs = lat.weierstrass_zeta(z) / c
        assert abs(lhs - rhs) < 1e-8 * (1 + abs(rhs))


def test_zeta_against_direct_sum():
    lat = Lattice(1.0, 1j * SQRT2)
    for z in (0.31 + 0.27j, -0.21 + 0.55j):
        direct = weierstrass_zeta_direct(z, lat, radius_shells=200)
        assert abs(lat.weierstrass_zeta(z) - direct) < 5e-4


# --- E2(0) ----------------------------------------------------------------------


def test_e2_zero_vanishes_for_square_and_hexagonal():
    assert abs(e2_zero(Lattice(1.0, 1j))) < 1e-10
    assert abs(e2_zero(Lattice(1.0, RHO))) < 1e-10


def test_e2_zero_sqrt2_regression():
    val = e2_zero(Lattice(1.0, 1j * SQRT2))
    assert abs(val.imag) < 1e-12
    assert abs(val.real - S2_SQRT2) < 1e-8


def test_e2_zero_hecke_oracle():
    for om2 in (1j * SQRT2, 1j * math.sqrt(5.0)):
        lat = Lattice(1.0, om2)
        assert abs(lat.e2_zero() - e2_hecke_limit(lat)) < 1e-4


def test_e2_homogeneity():
    lat = Lattice(1.0, 1j * SQRT2)
    rng = random.Random(10)
    for _ in range(20):
        c = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        if abs(c) < 0.3:
            continue
        assert abs(lat.scaled(c).e2_zero() * c * c - lat.e2_zero()) < 1e-8 * abs(lat.e2_zero())


# --- E1 ----------------------------------------------------------------------------


def test_e1_half_period_zero():
    for om2 in (1j * SQRT2, complex(0.5, 0.5 * math.sqrt(7))):
        lat = Lattice(1.0, om2)
        assert abs(e1(lat.omega1 / 2.0, lat)) < 1e-9
        assert abs(e1(lat.omega2 / 2.0, lat)) < 1e-9


def test_e1_periodicity():
    lat = Lattice(1.0, 1j * SQRT2)
    rng = random.Random(11)
    worst = 0.0
    for z in rand_points(12, 100):
        m, n = rng.randint(-3, 3), rng.randint(-3, 3)
        v0 = lat.e1(z)
        v1 = lat.e1(z + m * lat.omega1 + n * lat.omega2)
        worst = max(worst, abs(v1 - v0) / (1 + abs(v0)))
    assert worst < 1e-8


def test_e1_oddness():
    lat = Lattice(1.0, 1j * SQRT2)
    for z in rand_points(13, 100):
        assert abs(lat.e1(z) + lat.e1(-z)) < 1e-9


def test_e1_lattice_points_are_zero():
    lat = Lattice(1.0, 1j * SQRT2)
    assert lat.e1(0.0) == 0.0
    assert lat.e1(3 - 2j * SQRT2) == 0.0


def test_e1_homogeneity():
    lat = Lattice(1.0, 1j * SQRT2)
    rng = random.Random(14)
    for _ in range(20):
        c = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        if abs(c) < 0.3:
            continue
        z = 0.23 + 0.31j
        assert abs(lat.scaled(c).e1(c * z) - lat.e1(z) / c) < 1e-8


# --- j invariant ----------------------------------------------------------------------


def test_j_square_lattice():
    j = j_invariant(Lattice(1.0, 1j))
    assert abs(j - 1728.0) < 1e-6 * 1728.0


def test_j_hexagonal_lattice():
    assert abs(j_invariant(Lattice(1.0, RHO))) < 1e-6


def test_j_real_for_conjugation_symmetric_bases():
    rng = random.Random(15)
    for _ in range(15):
        y = rng.uniform(0.35, 3.0)
        for om2 in (1j * y, complex(0.5, y / 2.0)):
            j = j_invariant(Lattice(1.0, om2))
            assert abs(j.imag) < 1e-8


def test_j_from_order_lattice_real():
    j = j_invariant(Lattice.from_order(QuadOrder(-8)))
    assert abs(j.imag) < 1e-8
