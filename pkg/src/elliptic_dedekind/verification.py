"""Runnable invariant suites shared by the CLI `verify` command and the tests.

Each suite returns a list of CheckResult records; a check passes when its
residual is at or below its tolerance.  All randomness is seeded, so repeated
runs are identical.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .cosets import CosetSystem
from .dedekind import Mat2, SumContext, d_sum, gen_sl2_triple, three_term_closed_form, phi
from .errors import GenerationError
from .lattice import Lattice
from .oracles import e2_hecke_limit, weierstrass_zeta_direct
from .ring import OrderElem, QuadOrder

__all__ = [
    "CheckResult",
    "random_unimodular_word",
    "run_phi_suite",
    "run_lemma_suite",
    "run_e1_suite",
    "run_cosets_suite",
    "run_suite",
    "SUITE_NAMES",
]

SUITE_NAMES = ("phi", "lemma", "e1", "cosets", "all")


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    tolerance: float
    passed: bool
    info: str = ""


def _check(name: str, residual: float, tolerance: float, info: str = "") -> CheckResult:
    residual = float(residual)
    return CheckResult(name, residual, tolerance, residual <= tolerance, info)


def random_unimodular_word(
    rng: random.Random,
    order: QuadOrder,
    factors: int = 6,
    coord_bound: int = 1,
    norm_cap: int = 50,
) -> Mat2:
    """Product of elementary matrices with every entry norm <= norm_cap."""
    one, zero = order.one(), order.zero()
    for _ in range(400):
        word = Mat2.identity(order)
        upper = rng.random() < 0.5
        ok = True
        for _ in range(factors):
            u = rng.randint(-coord_bound, coord_bound)
            v = rng.randint(-coord_bound, coord_bound)
            if u == 0 and v == 0:
                u = 1
            elem = order.element(u, v)
            factor = Mat2(one, elem, zero, one) if upper else Mat2(one, zero, elem, one)
            word = word @ factor
            upper = not upper
            if word.max_entry_norm() > norm_cap:
                ok = False
                break
        if ok:
            return word
    raise GenerationError("could not generate a norm-bounded unimodular word")


def _random_elem(rng: random.Random, order: QuadOrder, max_norm: int, coord_bound: int = 12) -> OrderElem:
    while True:
        e = order.element(rng.randint(-coord_bound, coord_bound), rng.randint(-coord_bound, coord_bound))
        if 0 < e.norm() <= max_norm:
            return e


def run_phi_suite(
    order: QuadOrder,
    n_pairs: int = 50,
    seed: int = 12345,
    tol: float = 1e-7,
    word_norm_cap: int = 50,
    product_norm_cap: int = 20000,
) -> list[CheckResult]:
    """Homomorphism residuals |Phi(W1 W2) - Phi(W1) - Phi(W2)| on random words.

    For the rings with vanishing E2(0) (discriminants -3, -4) the suite also
    checks that Phi itself is numerically trivial.
    """
    ctx = SumContext(order)
    rng = random.Random(seed)
    results = []
    excluded = order.discriminant in (-3, -4)
    if excluded:
        results.append(_check("phi-e2-vanishes", abs(ctx.lattice.e2_zero()), 1e-10))
    for i in range(n_pairs):
        while True:
            w1 = random_unimodular_word(rng, order, norm_cap=word_norm_cap)
            w2 = random_unimodular_word(rng, order, norm_cap=word_norm_cap)
            prod = w1 @ w2
            if prod.max_entry_norm() <= product_norm_cap:
                break
        p1, p2, p12 = phi(w1, ctx), phi(w2, ctx), phi(prod, ctx)
        scale = 1.0 + abs(p1) + abs(p2) + abs(p12)
        results.append(_check(f"phi-homomorphism-{i:02d}", abs(p12 - p1 - p2) / scale, tol))
        if excluded:
            results.append(_check(f"phi-trivial-{i:02d}", max(abs(p1), abs(p2), abs(p12)), tol))
    return results


def run_lemma_suite(
    order: QuadOrder | None = None,
    n_triples: int = 20,
    seed: int = 12345,
    max_c3_norm: int = 300,
    tol: float = 1e-6,
) -> list[CheckResult]:
    """Closed form vs. brute-force coset summation on generated triples."""
    order = order if order is not None else QuadOrder(-8)
    ctx = SumContext(order)
    results = []
    produced = 0
    attempt = 0
    while produced < n_triples and attempt < 40 * n_triples:
        attempt += 1
        try:
            m1, m2, m3 = gen_sl2_triple(seed + attempt, ctx, max_c3_norm=max_c3_norm)
        except GenerationError:
            continue
        rhs = three_term_closed_form(m1.c, m3.c, ctx)
        lhs = d_sum(m3.a, m3.c, ctx)
        residual = abs(lhs - rhs) / (1.0 + abs(rhs))
        results.append(
            _check(
                f"lemma-triple-{produced:02d}",
                residual,
                tol,
                info=f"norm(c3)={m3.c.norm()}",
            )
        )
        produced += 1
    if produced < n_triples:
        results.append(_check("lemma-generation", float(n_triples - produced), 0.0, info="triples missing"))
    return results


def _random_points(rng: random.Random, n: int, spread: float = 1.5):
    return [complex(rng.uniform(-spread, spread), rng.uniform(-spread, spread)) for _ in range(n)]


def run_e1_suite(order: QuadOrder | None = None, seed: int = 12345, n_points: int = 100) -> list[CheckResult]:
    """Analytic-layer residuals: periodicity, oddness, quasi-periods, oracles, j."""
    order = order if order is not None else QuadOrder(-8)
    lattice = Lattice.from_order(order)
    rng = random.Random(seed)
    results = []

    # E1 periodicity over random (z, small omega).
    worst = 0.0
    for z in _random_points(rng, n_points):
        m, n = rng.randint(-3, 3), rng.randint(-3, 3)
        omega = m * lattice.omega1 + n * lattice.omega2
        v0 = lattice.e1(z)
        v1 = lattice.e1(z + omega)
        worst = max(worst, abs(v1 - v0) / (1.0 + abs(v0)))
    results.append(_check("e1-periodicity", worst, 1e-8))

    # E1 oddness.
    worst = 0.0
    for z in _random_points(rng, n_points):
        worst = max(worst, abs(lattice.e1(z) + lattice.e1(-z)))
    results.append(_check("e1-oddness", worst, 1e-9))

    # E1 zero at a half period.
    results.append(_check("e1-half-period-zero", abs(lattice.e1(lattice.omega1 / 2.0)), 1e-9))

    # Legendre relation for the original basis.
    eta1, eta2 = lattice.quasi_periods()
    legendre = abs(eta1 * lattice.omega2 - eta2 * lattice.omega1 - 2j * math.pi)
    results.append(_check("legendre-relation", legendre, 1e-8))

    # Quasi-periods against the closed expression s2*w + (pi/A)*conj(w).
    s2 = lattice.e2_zero()
    a = lattice.area()
    for label, w, eta in (("omega1", lattice.omega1, eta1), ("omega2", lattice.omega2, eta2)):
        residual = abs(eta - (s2 * w + (math.pi / a) * w.conjugate()))
        results.append(_check(f"quasi-period-{label}", residual, 1e-8))

    # E2 homogeneity under scaling.
    c = complex(1.3, 0.7)
    scaled = lattice.scaled(c)
    results.append(
        _check(
            "e2-homogeneity",
            abs(scaled.e2_zero() * c * c - s2) / max(abs(s2), 1e-30),
            1e-8,
        )
    )

    # zeta cross-check against the direct truncated sum.
    z0 = 0.31 + 0.27j
    direct = weierstrass_zeta_direct(z0, lattice, radius_shells=200)
    results.append(_check("zeta-direct-crosscheck", abs(lattice.weierstrass_zeta(z0) - direct), 5e-4))

    # Hecke-limit oracle for E2(0) on Z+Z*sqrt(-2) and Z+Z*sqrt(-5).
    for dk, label in ((-8, "sqrt2"), (-20, "sqrt5")):
        lat = Lattice(1.0, 1j * math.sqrt(-dk / 4.0))
        oracle = e2_hecke_limit(lat)
        results.append(_check(f"e2-hecke-{label}", abs(lat.e2_zero() - oracle), 1e-4))

    # j anchors.
    j_gauss = Lattice(1.0, 1j).j_invariant()
    results.append(_check("j-gauss-1728", abs(j_gauss - 1728.0) / 1728.0, 1e-6))
    j_eis = Lattice(1.0, complex(-0.5, math.sqrt(3) / 2.0)).j_invariant()
    results.append(_check("j-eisenstein-0", abs(j_eis), 1e-6))

    # Reality of j for conjugation-symmetric bases.
    worst = 0.0
    for _ in range(10):
        y = rng.uniform(0.4, 3.0)
        for basis2 in (1j * y, complex(0.5, y / 2.0)):
            jv = Lattice(1.0, basis2).j_invariant()
            worst = max(worst, abs(jv.imag))
    results.append(_check("j-reality-symmetric-bases", worst, 1e-8))
    return results


def run_cosets_suite(
    orders: tuple[QuadOrder, ...] | None = None,
    n_samples: int = 50,
    max_norm: int = 200,
    seed: int = 12345,
) -> list[CheckResult]:
    """Counts, pairwise inequivalence, and completeness of coset transversals."""
    if orders is None:
        orders = (QuadOrder(-8), QuadOrder(-7), QuadOrder(-4, 3))
    rng = random.Random(seed)
    results = []
    for order in orders:
        lattice = Lattice.from_order(order)
        count_fail = 0
        inequiv_fail = 0
        complete_fail = 0
        for _ in range(n_samples):
            k = _random_elem(rng, order, max_norm)
            system = CosetSystem(k, lattice)
            coords = system.coords()
            if len(coords) != k.norm():
                count_fail += 1
            for i in range(len(coords)):
                for j in range(i + 1, len(coords)):
                    delta = (int(coords[i, 0] - coords[j, 0]), int(coords[i, 1] - coords[j, 1]))
                    if system.in_sublattice(delta):
                        inequiv_fail += 1
            for _ in range(min(k.norm(), 40)):
                pt = (rng.randint(-100, 100), rng.randint(-100, 100))
                red = system.reduce_coords(pt)
                in_box = 0 <= red[0] < system.h11 and 0 <= red[1] < system.h22
                back = (pt[0] - red[0], pt[1] - red[1])
                if not in_box or not system.in_sublattice(back):
                    complete_fail += 1
        tag = f"d{order.d_k}f{order.f}"
        results.append(_check(f"coset-count-{tag}", float(count_fail), 0.0))
        results.append(_check(f"coset-inequivalence-{tag}", float(inequiv_fail), 0.0))
        results.append(_check(f"coset-completeness-{tag}", float(complete_fail), 0.0))
    return results


def run_suite(name: str, order: QuadOrder | None = None, seed: int = 12345) -> list[CheckResult]:
    """Dispatch by suite name; `all` concatenates every suite."""
    order = order if order is not None else QuadOrder(-8)
    if name == "phi":
        return run_phi_suite(order, seed=seed)
    if name == "lemma":
        return run_lemma_suite(order, seed=seed)
    if name == "e1":
        return run_e1_suite(order, seed=seed)
    if name == "cosets":
        return run_cosets_suite(seed=seed)
    if name == "all":
        out = []
        for sub in ("phi", "lemma", "e1", "cosets"):
            out.extend(run_suite(sub, order, seed=seed))
        return out
    raise ValueError(f"unknown suite {name!r}; choose from {SUITE_NAMES}")
