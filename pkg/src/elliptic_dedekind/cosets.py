"""Exact enumeration of coset representatives of L/kL.

The multiplication-by-k matrix on the basis (omega1, omega2) is recovered as
an exact integer matrix, its column Hermite normal form [[h11, h12], [0, h22]]
is computed over Z, and the box {a*omega1 + b*omega2 : 0 <= a < h11,
0 <= b < h22} is a complete transversal of L/kL with exactly
h11*h22 = |det| = norm(k) members.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotAMultiplierError, ZeroDivisorError
from .lattice import Lattice
from .ring import OrderElem, egcd

__all__ = ["MultMatrix", "mult_matrix", "CosetSystem", "coset_reps"]


@dataclass(frozen=True)
class MultMatrix:
    """Integer matrix of multiplication-by-k in the basis (omega1, omega2)."""

    a11: int
    a12: int
    a21: int
    a22: int

    @property
    def det(self) -> int:
        return self.a11 * self.a22 - self.a12 * self.a21


def mult_matrix(k: OrderElem, lattice: Lattice) -> MultMatrix:
    """Exact matrix M with (k*omega1, k*omega2) = (omega1, omega2) @ M.

    Columns are recovered by solving the 2x2 real system and rounding; a
    coordinate residual >= 1e-6 means k does not multiply the lattice into
    itself.
    """
    if k.is_zero():
        raise ZeroDivisorError("k must be nonzero")
    kc = k.embed()
    w1, w2 = lattice.omega1, lattice.omega2
    a = lattice.area()
    cols = []
    for wj in (w1, w2):
        target = kc * wj
        x = -(target * w2.conjugate()).imag / a
        y = (target * w1.conjugate()).imag / a
        xi, yi = round(x), round(y)
        if abs(x - xi) >= 1e-6 or abs(y - yi) >= 1e-6:
            raise NotAMultiplierError(
                f"{k!r} is not a multiplier of this lattice (residual {max(abs(x - xi), abs(y - yi)):.2e})"
            )
        cols.append((int(xi), int(yi)))
    m = MultMatrix(cols[0][0], cols[1][0], cols[0][1], cols[1][1])
    if m.det != k.norm():
        raise NotAMultiplierError(f"determinant {m.det} does not match norm {k.norm()}")
    return m


def _column_hnf(m: MultMatrix) -> tuple[int, int, int]:
    """Upper-triangular column HNF (h11, h12, h22) of m, h11, h22 > 0."""
    g, x, y = egcd(m.a21, m.a22)
    # Unimodular column transform sending the bottom row to (0, g).
    u00, u01 = m.a22 // g, x
    u10, u11 = -m.a21 // g, y
    h11 = m.a11 * u00 + m.a12 * u10
    h12 = m.a11 * u01 + m.a12 * u11
    h22 = m.a21 * u01 + m.a22 * u11
    if h11 < 0:
        h11 = -h11
    h12 %= h11
    return h11, h12, h22


class CosetSystem:
    """Representatives of L/kL in box coordinates, with exact reduction."""

    def __init__(self, k: OrderElem, lattice: Lattice):
        if k.is_zero():
            raise ZeroDivisorError("cosets of 0*L are not defined")
        self.k = k
        self.lattice = lattice
        self.mult = mult_matrix(k, lattice)
        self.h11, self.h12, self.h22 = _column_hnf(self.mult)
        self.size = self.h11 * self.h22

    def coords(self) -> np.ndarray:
        """Integer (a, b) pairs of the box transversal, row-major in a then b."""
        a = np.arange(self.h11, dtype=np.int64)
        b = np.arange(self.h22, dtype=np.int64)
        out = np.empty((self.size, 2), dtype=np.int64)
        out[:, 0] = np.repeat(a, self.h22)
        out[:, 1] = np.tile(b, self.h11)
        return out

    def reps(self) -> np.ndarray:
        """Complex representatives a*omega1 + b*omega2 in coords() order."""
        ab = self.coords()
        return ab[:, 0] * self.lattice.omega1 + ab[:, 1] * self.lattice.omega2

    def reduce_coords(self, ab: tuple[int, int]) -> tuple[int, int]:
        """Box representative of an arbitrary lattice point, exactly."""
        x, y = int(ab[0]), int(ab[1])
        q2 = y // self.h22
        x -= q2 * self.h12
        y -= q2 * self.h22
        x -= (x // self.h11) * self.h11
        return x, y

    def in_sublattice(self, delta: tuple[int, int]) -> bool:
        """Exact test whether dx*omega1 + dy*omega2 lies in kL."""
        dx, dy = int(delta[0]), int(delta[1])
        m = self.mult
        det = m.det
        s = m.a22 * dx - m.a12 * dy
        t = -m.a21 * dx + m.a11 * dy
        return s % det == 0 and t % det == 0


def coset_reps(k: OrderElem, lattice: Lattice) -> np.ndarray:
    """The norm(k) coset representatives of L/kL as complex points."""
    return CosetSystem(k, lattice).reps()
