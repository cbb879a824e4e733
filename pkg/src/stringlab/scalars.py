"""Exact scalars: arbitrary-precision rationals and cyclotomic field elements.

Rationals are `fractions.Fraction` (re-exported as `Rat`).  Cyclotomic numbers
are represented on the power basis {zeta_n^j : 0 <= j < phi(n)} reduced modulo
the n-th cyclotomic polynomial, with Fraction coordinates.  The embedding is
always zeta_n -> exp(2*pi*i/n).

The default field used by the symbolic core is Q(zeta_12), which contains
omega = zeta_3, i = zeta_12^3 and sqrt(3) = 2*zeta_12 - zeta_12^3.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from math import gcd

Rat = Fraction


def euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _polydiv_exact(num, den):
    """Exact division of integer polynomials (lists, index = degree)."""
    num = list(num)
    q = [0] * (len(num) - len(den) + 1)
    for k in range(len(q) - 1, -1, -1):
        c = num[k + len(den) - 1]
        assert c % den[-1] == 0
        q[k] = c // den[-1]
        for j, d in enumerate(den):
            num[k + j] -= q[k] * d
    assert all(c == 0 for c in num)
    return q


_CYCLO_POLY_CACHE: dict[int, list[int]] = {1: [-1, 1]}


def cyclotomic_polynomial(n: int) -> list[int]:
    """Integer coefficients of Phi_n, ascending degree."""
    if n not in _CYCLO_POLY_CACHE:
        num = [0] * (n + 1)
        num[0], num[n] = -1, 1
        for d in range(1, n):
            if n % d == 0:
                num = _polydiv_exact(num, cyclotomic_polynomial(d))
        _CYCLO_POLY_CACHE[n] = num
    return _CYCLO_POLY_CACHE[n]


class _Tables:
    """Per-conductor reduction data: zeta^k on the power basis for k < 2*phi."""

    def __init__(self, n: int):
        self.n = n
        self.phi = euler_phi(n)
        poly = cyclotomic_polynomial(n)
        # zeta^phi = -sum_{j<phi} poly[j] * zeta^j  (poly is monic)
        rows = [[Fraction(1) if i == k else Fraction(0) for i in range(self.phi)]
                for k in range(self.phi)]
        top = [Fraction(-poly[j]) for j in range(self.phi)]
        rows.append(list(top))
        for _ in range(self.phi - 1):
            prev = rows[-1]
            nxt = [Fraction(0)] + prev[:-1]
            for j in range(self.phi):
                nxt[j] += prev[-1] * top[j]
            rows.append(nxt)
        self.power = rows  # zeta^k for 0 <= k <= 2*phi - 1


_TABLES: dict[int, _Tables] = {}


def _tables(n: int) -> _Tables:
    if n not in _TABLES:
        _TABLES[n] = _Tables(n)
    return _TABLES[n]


class Cyclo:
    """An element of Q(zeta_n) on the reduced power basis."""

    __slots__ = ("n", "coords")

    def __init__(self, n: int, coords):
        if n < 1:
            raise ValueError("conductor must be >= 1")
        t = _tables(n)
        coords = list(coords)
        if len(coords) != t.phi:
            raise ValueError(f"need {t.phi} coordinates for conductor {n}")
        self.n = n
        self.coords = tuple(Fraction(c) for c in coords)

    # -- constructors -------------------------------------------------------

    @staticmethod
    def from_rational(x, n: int = 1) -> "Cyclo":
        t = _tables(n)
        coords = [Fraction(x)] + [Fraction(0)] * (t.phi - 1)
        return Cyclo(n, coords)

    @staticmethod
    def zeta(n: int, j: int = 1) -> "Cyclo":
        """zeta_n^j, reduced."""
        t = _tables(n)
        j %= n
        acc = [Fraction(0)] * t.phi
        acc[0] = Fraction(1)
        # multiply by zeta j times via the power table (j < n, cheap)
        out = Cyclo(n, acc)
        g = Cyclo(n, t.power[1]) if t.phi > 1 else Cyclo(n, [Fraction(1)])
        if t.phi == 1:
            # Q(zeta_1) = Q(zeta_2) = Q
            val = Fraction(1) if n == 1 or j % n == 0 else Fraction(-1) ** j
            return Cyclo(n, [val])
        for _ in range(j):
            out = out * g
        return out

    # -- coercion -----------------------------------------------------------

    def to_conductor(self, m: int) -> "Cyclo":
        """Embed into Q(zeta_m); requires n | m."""
        if m == self.n:
            return self
        if m % self.n != 0:
            raise ValueError(f"cannot embed conductor {self.n} into {m}")
        k = m // self.n
        z = Cyclo.zeta(m, k)
        out = Cyclo.from_rational(0, m)
        for c in reversed(self.coords):
            out = out * z + Cyclo.from_rational(c, m)
        return out

    def _pair(self, other):
        if isinstance(other, Cyclo):
            if other.n == self.n:
                return self, other
            m = self.n * other.n // gcd(self.n, other.n)
            return self.to_conductor(m), other.to_conductor(m)
        if isinstance(other, (int, Fraction)):
            return self, Cyclo.from_rational(other, self.n)
        return self, NotImplemented

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        a, b = self._pair(other)
        if b is NotImplemented:
            return NotImplemented
        return Cyclo(a.n, [x + y for x, y in zip(a.coords, b.coords)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclo(self.n, [-c for c in self.coords])

    def __sub__(self, other):
        a, b = self._pair(other)
        if b is NotImplemented:
            return NotImplemented
        return Cyclo(a.n, [x - y for x, y in zip(a.coords, b.coords)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._pair(other)
        if b is NotImplemented:
            return NotImplemented
        t = _tables(a.n)
        phi = t.phi
        conv = [Fraction(0)] * (2 * phi - 1)
        for i, x in enumerate(a.coords):
            if x:
                for j, y in enumerate(b.coords):
                    if y:
                        conv[i + j] += x * y
        out = list(conv[:phi])
        for k in range(phi, 2 * phi - 1):
            c = conv[k]
            if c:
                row = t.power[k]
                for j in range(phi):
                    if row[j]:
                        out[j] += c * row[j]
        return Cyclo(a.n, out)

    __rmul__ = __mul__

    def inv(self) -> "Cyclo":
        """Multiplicative inverse; raises ZeroDivisionError on zero."""
        if self.is_zero():
            raise ZeroDivisionError("inversion of zero cyclotomic element")
        t = _tables(self.n)
        phi = t.phi
        # solve (mult-by-self matrix) x = e_0
        cols = []
        for j in range(phi):
            basis = [Fraction(0)] * phi
            basis[j] = Fraction(1)
            cols.append((self * Cyclo(self.n, basis)).coords)
        # Gaussian elimination on the phi x phi system
        mat = [[cols[j][i] for j in range(phi)] + [Fraction(1 if i == 0 else 0)]
               for i in range(phi)]
        for col in range(phi):
            piv = next(r for r in range(col, phi) if mat[r][col] != 0)
            mat[col], mat[piv] = mat[piv], mat[col]
            pv = mat[col][col]
            mat[col] = [v / pv for v in mat[col]]
            for r in range(phi):
                if r != col and mat[r][col]:
                    f = mat[r][col]
                    mat[r] = [v - f * w for v, w in zip(mat[r], mat[col])]
        return Cyclo(self.n, [mat[i][phi] for i in range(phi)])

    def __truediv__(self, other):
        a, b = self._pair(other)
        if b is NotImplemented:
            return NotImplemented
        return a * b.inv()

    def __rtruediv__(self, other):
        return self.inv() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        out = Cyclo.from_rational(1, self.n)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- predicates / conversions -------------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coords[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coords[0]

    def conjugate(self) -> "Cyclo":
        """Complex conjugate (zeta -> zeta^{n-1})."""
        z = Cyclo.zeta(self.n, self.n - 1)
        out = Cyclo.from_rational(0, self.n)
        for c in reversed(self.coords):
            out = out * z + Cyclo.from_rational(c, self.n)
        return out

    def eval_complex(self) -> complex:
        z = cmath.exp(2j * cmath.pi / self.n)
        return sum(complex(c) * z ** j for j, c in enumerate(self.coords))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coords[0] == other
        if not isinstance(other, Cyclo):
            return NotImplemented
        a, b = self._pair(other)
        return a.coords == b.coords

    def __hash__(self):
        if self.is_rational():
            return hash(self.coords[0])
        return hash((self.n, self.coords))

    def __repr__(self):
        return f"Cyclo({self.n}, {list(self.coords)})"

    def __str__(self):
        if self.is_rational():
            return str(self.coords[0])
        return "[" + ",".join(str(c) for c in self.coords) + f"]@zeta{self.n}"

    @staticmethod
    def parse(text: str) -> "Cyclo":
        text = text.strip()
        if "@zeta" in text:
            vec, cond = text.split("@zeta")
            coords = [Fraction(c) for c in vec.strip("[]").split(",")]
            return Cyclo(int(cond), coords)
        return Cyclo.from_rational(Fraction(text))


# -- the constants of the (3,4) problem, conductor 12 ------------------------

CONDUCTOR = 12


def zeta12(j: int = 1) -> Cyclo:
    return Cyclo.zeta(12, j)


def omega() -> Cyclo:
    """Principal cube root of unity, zeta_12^4."""
    return Cyclo.zeta(12, 4)


def iunit() -> Cyclo:
    """The imaginary unit, zeta_12^3."""
    return Cyclo.zeta(12, 3)


def sqrt3() -> Cyclo:
    """sqrt(3) = zeta_12 + zeta_12^{-1}, real and positive in the embedding."""
    return Cyclo.zeta(12, 1) + Cyclo.zeta(12, 11)


def cyclo_make(n: int, j: int) -> Cyclo:
    """zeta_n^j (spec-level constructor name)."""
    return Cyclo.zeta(n, j)
