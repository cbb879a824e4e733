import cmath
import random
from fractions import Fraction

import pytest

from stringlab.scalars import Cyclo, cyclo_make, euler_phi, iunit, omega, sqrt3


def test_zeta3_minimal_polynomial():
    w = cyclo_make(3, 1)
    assert w * w + w + 1 == 0


def test_zeta12_cubed_is_i():
    i = cyclo_make(12, 3)
    assert i * i == -1


def test_sqrt3_numeric():
    s = cyclo_make(12, 1) + cyclo_make(12, 11)
    assert abs(s.eval_complex() - 2 * cmath.cos(cmath.pi / 6)) < 1e-12
    assert s.eval_complex().real > 0


def test_numeric_embedding():
    for n, j in [(3, 1), (12, 5), (7, 2), (42, 11), (1, 0), (2, 1)]:
        z = cyclo_make(n, j)
        assert abs(z.eval_complex() - cmath.exp(2j * cmath.pi * j / n)) < 1e-12


def test_omega_products():
    w = omega()
    assert w * (w * w) == 1
    assert w + w * w == -1


def test_i_over_sqrt3_squared():
    x = iunit() / sqrt3()
    assert x * x == Fraction(-1, 3)
    # in the power basis: i/sqrt(3) = (2*zeta^2 - 1)/3
    assert x == (2 * cyclo_make(12, 2) - 1) * Fraction(1, 3)


def test_inverse_and_division():
    rng = random.Random(7)
    for _ in range(25):
        coords = [Fraction(rng.randint(-4, 4), rng.randint(1, 4)) for _ in range(4)]
        x = Cyclo(12, coords)
        if x.is_zero():
            continue
        assert x * x.inv() == 1


def test_inversion_of_zero_rejected():
    with pytest.raises(ZeroDivisionError):
        Cyclo.from_rational(0, 12).inv()


def test_conductor_zero_rejected():
    with pytest.raises(ValueError):
        Cyclo(0, [])


def test_field_axioms_randomized():
    rng = random.Random(11)
    def rand():
        return Cyclo(12, [Fraction(rng.randint(-3, 3), rng.randint(1, 3))
                          for _ in range(4)])
    for _ in range(30):
        a, b, c = rand(), rand(), rand()
        assert (a + b) * c == a * c + b * c
        assert (a * b) * c == a * (b * c)
        assert a * b == b * a


def test_rational_roundtrip():
    x = Cyclo.from_rational(Fraction(-7, 3), 12)
    assert x.is_rational() and x.to_rational() == Fraction(-7, 3)


def test_mixed_conductor_arithmetic():
    w = cyclo_make(3, 1)       # conductor 3
    i = cyclo_make(4, 1)       # conductor 4
    prod = w * i               # lives in Q(zeta_12)
    assert abs(prod.eval_complex()
               - cmath.exp(2j * cmath.pi / 3) * 1j) < 1e-12


def test_conjugate():
    z = cyclo_make(12, 1)
    assert z * z.conjugate() == 1
    s = sqrt3()
    assert s.conjugate() == s


def test_serialization_roundtrip():
    x = Cyclo(12, [Fraction(1, 2), Fraction(-3), Fraction(0), Fraction(5, 7)])
    assert Cyclo.parse(str(x)) == x
    r = Cyclo.from_rational(Fraction(22, 7), 12)
    assert str(r) == "22/7"


def test_euler_phi():
    assert [euler_phi(n) for n in (1, 2, 3, 4, 12, 42)] == [1, 1, 2, 2, 4, 12]


def test_general_conductor_42():
    b = cyclo_make(42, 1)
    assert abs(b.eval_complex() - cmath.exp(1j * cmath.pi / 21)) < 1e-12
    assert b ** 42 == 1
    assert b ** 21 == -1
