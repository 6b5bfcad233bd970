import random
from fractions import Fraction

import pytest

from mflef.scalars import Scalar
from mflef.polyring import PolyRing
from mflef.groebner import GradedModulePresentation
from mflef.hilbert import (
    UniPoly,
    chi_polynomial,
    chi_stabilization_consistency,
    hilbert_function,
    multiplicity_data,
    verify_even_multiplicity_divisibility,
)

R1 = PolyRing(("x",))
R2 = PolyRing(("x", "y"))
R3 = PolyRing(("x", "y", "z"))
x = R1.var("x")
x2, y2 = R2.var("x"), R2.var("y")


def residue_field(ring):
    gens = [ring.var(i) for i in range(ring.nvars)]
    return GradedModulePresentation(ring, [0], [gens])


def test_chi_examples():
    # M = k over two variables: Koszul resolution gives (1-t)^2
    pres = residue_field(R2)
    assert chi_polynomial(pres) == UniPoly([1, -2, 1])

    # free module
    pres = GradedModulePresentation(R2, [0], [])
    assert chi_polynomial(pres) == UniPoly([1])

    # R/(w) with deg w = d: 1 - t^d
    w = x2**2 + y2**2
    pres = GradedModulePresentation.cyclic(R2, [w])
    assert chi_polynomial(pres) == UniPoly([1, 0, -1])


def test_chi_equals_hilbert_series_times_power():
    # chi(t) = H_M(t) (1-t)^n, checked as a power-series identity in low degrees
    rng = random.Random(19)
    cases = [
        residue_field(R2),
        GradedModulePresentation.cyclic(R2, [x2**2, x2 * y2]),
        GradedModulePresentation.cyclic(R2, [x2**3 + y2**3]),
        GradedModulePresentation(R2, [0, 1], [[x2, R2.zero()], [R2.zero(), y2**2]]),
    ]
    for pres in cases:
        chi = chi_polynomial(pres)
        bound = chi.degree() + 4
        series = [hilbert_function(pres, d) for d in range(bound + 1)]
        # multiply the series by (1-t)^n and compare coefficients with chi
        n = pres.ring.nvars
        signs = UniPoly.one_minus_t() ** n
        for d in range(bound - n):
            acc = Fraction(0)
            for j, c in enumerate(signs.coeffs):
                if 0 <= d - j <= bound:
                    acc += c * series[d - j]
            expected = chi.coeffs[d] if d < len(chi.coeffs) else Fraction(0)
            assert acc == expected, (d, acc, expected)


def test_multiplicity_examples():
    # chi = 1 - t^2, n = 2: d = 1, e = 1 + t
    data = multiplicity_data(UniPoly([1, 0, -1]), 2)
    assert data.krull_dim == 1 and data.multiplicity == UniPoly([1, 1])

    data = multiplicity_data(UniPoly([1, -2, 1]), 2)
    assert data.krull_dim == 0 and data.multiplicity == UniPoly([1])

    data = multiplicity_data(UniPoly([1]), 2)
    assert data.krull_dim == 2 and data.multiplicity == UniPoly([1])


def test_chi_identity_random_monomial_ideals():
    rng = random.Random(29)
    for _ in range(6):
        gens = []
        for _ in range(rng.randint(1, 4)):
            a, b = rng.randint(0, 3), rng.randint(0, 3)
            if a == b == 0:
                continue
            gens.append(R2.monomial((a, b)))
        if not gens:
            continue
        pres = GradedModulePresentation.cyclic(R2, gens)
        chi = chi_polynomial(pres)
        data = multiplicity_data(chi, 2)
        rebuilt = data.multiplicity * (UniPoly.one_minus_t() ** (2 - data.krull_dim))
        assert rebuilt == chi
        assert data.multiplicity(1) != 0


def test_even_multiplicity_divisibility_examples():
    w = x2**2 + y2**2
    # M = R/(w): e = 1 + t, e(-1) = 0, pass
    rep = verify_even_multiplicity_divisibility(GradedModulePresentation.cyclic(R2, [w]), w)
    assert rep.passed and rep.e_at_minus_one == 0

    # M = R/(x - zeta_4 y): a line on the quadric; e(-1) = 1, bound 2^0
    i = Scalar.zeta(4)
    line = x2 - y2 * i
    rep = verify_even_multiplicity_divisibility(
        GradedModulePresentation.cyclic(R2, [line]), w
    )
    assert rep.passed and rep.e_at_minus_one == 1 and rep.required_power == 0

    # odd-degree potential is rejected
    with pytest.raises(ValueError):
        verify_even_multiplicity_divisibility(
            GradedModulePresentation.cyclic(R1, [x]), x**3
        )


def test_even_multiplicity_family():
    # the R/(w) family over 1..3 variables, even degrees
    cases = [
        (R1, x**2), (R1, x**4),
        (R2, x2**2 + y2**2), (R2, x2**4 + y2**4),
        (R3, R3.var("x") ** 2 + R3.var("y") ** 2 + R3.var("z") ** 2),
    ]
    for ring, w in cases:
        rep = verify_even_multiplicity_divisibility(GradedModulePresentation.cyclic(ring, [w]), w)
        assert rep.passed


def test_chi_stabilization_examples():
    # M = R/(x), w = x^2: chi(-1) = 2 = str(diag(1,-1))
    rep = chi_stabilization_consistency(GradedModulePresentation.cyclic(R1, [x]), x**2)
    assert rep.equal and rep.lhs == 2

    # M = R/(w): contractible stabilization, 0 = 0
    w = x2**2 + y2**2
    rep = chi_stabilization_consistency(GradedModulePresentation.cyclic(R2, [w]), w)
    assert rep.equal and rep.lhs.is_zero()

    # M = k over two variables, w = x^2 + y^2: 4 = 4
    rep = chi_stabilization_consistency(residue_field(R2), w)
    assert rep.equal and rep.lhs == 4
