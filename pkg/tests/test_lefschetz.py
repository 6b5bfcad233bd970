import math
import random
from fractions import Fraction

import pytest

from mflef.scalars import RootOfUnity, Scalar
from mflef.polyring import PolyRing
from mflef.mfcore import (
    MatrixFactorization,
    MFMorphism,
    koszul_mf,
    odd_rank11_generator,
    pullback,
    tensor_mf,
    tensor_morphisms,
)
from mflef.lefschetz import (
    boundary_bulk,
    divisibility_check,
    lhs_hlf,
    lunts_check,
    rhs_hlf,
    tilde_beta,
    trace_identity_check,
    verify_hlf,
    verify_isolated,
    zero_fixed_locus_check,
)

R1 = PolyRing(("x",))
x = R1.var("x")
R2 = PolyRing(("x", "y"))
x2, y2 = R2.var("x"), R2.var("y")


def kfac(var, a, d):
    R = PolyRing((var,))
    return koszul_mf([R.var(var) ** (d - a)], [R.var(var) ** a], gradings=[Fraction(a, d)])


def a1_data():
    mf = MatrixFactorization(x**2, [[x]], [[x]])
    t = [RootOfUnity(2, 1)]
    tgt = pullback(t, mf)
    alpha = MFMorphism.diagonal(mf, tgt, [1, -1])
    beta = MFMorphism.diagonal(tgt, mf, [1, -1])
    return mf, t, alpha, beta


def a2_data():
    mf = MatrixFactorization(x**3, [[x]], [[x**2]])
    t = [RootOfUnity(3, 1)]
    tgt = pullback(t, mf)
    alpha = MFMorphism.diagonal(mf, tgt, [Scalar.one(), Scalar.zeta(3)])
    beta = MFMorphism.diagonal(tgt, mf, [Scalar.one(), Scalar.zeta(3, 2)])
    return mf, t, alpha, beta


def test_boundary_bulk_isolated_fixed_point():
    # all coordinates moving: the class is str(alpha|_0) in H(w_t) = k
    mf, t, alpha, _ = a1_data()
    tau = boundary_bulk(mf, t, alpha)
    assert tau.space.milnor.nvars == 0
    assert tau.class_poly.constant_term() == 2
    assert tau.parity == 0


def test_boundary_bulk_identity_kernel_xy():
    # w = xy, t = id, E = koszul {x; y}, alpha = id: class 1 dx^dy
    x2, y2 = R2.var("x"), R2.var("y")
    mf = koszul_mf([x2], [y2])
    tau = boundary_bulk(mf, [RootOfUnity(1, 0)] * 2, MFMorphism.identity(mf))
    assert tau.class_poly == tau.space.milnor.ring.one()
    assert tau.parity == 0


def test_boundary_bulk_odd_composite_vanishes():
    # even alpha with an odd number of fixed coordinates: zero class
    fx, fy = kfac("x", 1, 3), kfac("y", 1, 3)
    A = tensor_mf(fx, fy)
    t = [RootOfUnity(3, 1), RootOfUnity(1, 0)]
    u = MFMorphism.diagonal(fx, pullback([RootOfUnity(3, 1)], fx), [Scalar.one(), Scalar.zeta(3, 2)])
    alpha = tensor_morphisms(u, MFMorphism.identity(fy), source=A, target=pullback(t, A))
    tau = boundary_bulk(A, t, alpha)
    assert tau.is_zero() and tau.parity == 1


def test_tilde_beta():
    mf, t, alpha, beta = a2_data()
    tb = tilde_beta(t, beta)
    assert tb.source is beta.target
    assert tb.is_closed()
    # constants are substitution-invariant
    assert tb.matrix == beta.matrix
    # t = id returns beta itself (as matrices)
    ident = [RootOfUnity(1, 0)]
    mf_id = MatrixFactorization(x**3, [[x]], [[x**2]])
    b = MFMorphism.identity(mf_id)
    assert tilde_beta(ident, b).matrix == b.matrix
    # tilde twice recovers beta's matrix
    tb2 = tilde_beta([r.inverse() for r in t], tb)
    assert tb2.matrix == beta.matrix


def test_verify_hlf_a1():
    mf, t, alpha, beta = a1_data()
    rep = verify_hlf(mf, mf, t, alpha, beta, case="A1")
    assert rep.equal and rep.lhs == 2


def test_verify_hlf_a2():
    mf, t, alpha, beta = a2_data()
    rep = verify_hlf(mf, mf, t, alpha, beta, case="A2")
    assert rep.equal
    assert rep.lhs == 1 - Scalar.zeta(3, 2)


def test_verify_hlf_cubic_tensor_even_and_odd():
    # w = x^3 + y^3, t = (zeta_3, 1), A = B built by tensor_mf
    fx, fy = kfac("x", 1, 3), kfac("y", 1, 3)
    A = tensor_mf(fx, fy)
    t = [RootOfUnity(3, 1), RootOfUnity(1, 0)]
    tgt = pullback(t, A)
    u = MFMorphism.diagonal(fx, pullback([RootOfUnity(3, 1)], fx), [Scalar.one(), Scalar.zeta(3, 2)])
    # natural even alpha with beta = alpha^{-1}: both sides vanish (odd fixed locus)
    alpha_even = tensor_morphisms(u, MFMorphism.identity(fy), source=A, target=tgt)
    rep = verify_hlf(A, A, t, alpha_even, alpha_even.inverse(), case="cubic-even")
    assert rep.equal and rep.lhs.is_zero() and rep.rhs.is_zero()
    # odd alpha and beta: the pairing runs through nonzero classes in H(y^3),
    # which are all proportional to y, so the value is again exactly zero
    alpha_odd = tensor_morphisms(u, odd_rank11_generator(fy), source=A, target=tgt)
    beta_odd = tensor_morphisms(u.inverse(), odd_rank11_generator(fy), source=tgt, target=A)
    from mflef.lefschetz import boundary_bulk as bb

    assert not bb(A, t, alpha_odd).is_zero()
    rep = verify_hlf(A, A, t, alpha_odd, beta_odd, case="cubic-odd")
    assert rep.equal


def test_verify_hlf_nonzero_through_full_pairing():
    # w = x^3 + y^2, t = (zeta_3, 1): odd twists pair nontrivially on H(y^2)
    fx, fy = kfac("x", 1, 3), kfac("y", 1, 2)
    A = tensor_mf(fx, fy)
    t = [RootOfUnity(3, 1), RootOfUnity(1, 0)]
    tgt = pullback(t, A)
    u = MFMorphism.diagonal(fx, pullback([RootOfUnity(3, 1)], fx), [Scalar.one(), Scalar.zeta(3, 2)])
    alpha = tensor_morphisms(u, odd_rank11_generator(fy), source=A, target=tgt)
    rep = verify_hlf(A, A, t, alpha, alpha.inverse(), case="x3y2-odd")
    assert rep.equal and not rep.lhs.is_zero()
    assert rep.lhs == 4 + 2 * Scalar.zeta(3)


def test_verify_isolated_examples():
    mf, t, alpha, beta = a1_data()
    rep = verify_isolated(mf, mf, t, alpha, beta, case="A1")
    assert rep.equal and rep.rhs == 2  # 2*2/2

    mf, t, alpha, beta = a2_data()
    rep = verify_isolated(mf, mf, t, alpha, beta, case="A2")
    assert rep.equal and rep.rhs == 1 - Scalar.zeta(3, 2)


def test_verify_isolated_contractible():
    # (w, 1) is contractible: any equivariant alpha has str(alpha|_0) = 0
    w = x**2
    mf = MatrixFactorization(w, [[R1.one()]], [[w]])
    t = [RootOfUnity(2, 1)]
    tgt = pullback(t, mf)
    alpha = MFMorphism.diagonal(mf, tgt, [1, 1])
    assert alpha.is_closed()
    beta = MFMorphism.diagonal(tgt, mf, [1, 1])
    rep = verify_isolated(mf, mf, t, alpha, beta, case="contractible")
    assert rep.equal and rep.lhs.is_zero() and rep.rhs.is_zero()


def test_verify_isolated_rejects_fixed_directions():
    fx, fy = kfac("x", 1, 3), kfac("y", 1, 3)
    A = tensor_mf(fx, fy)
    t = [RootOfUnity(3, 1), RootOfUnity(1, 0)]
    ident = MFMorphism.identity(A)
    with pytest.raises(ValueError):
        verify_isolated(A, A, t, ident, ident)


def test_lunts_examples():
    assert lunts_check(x**2, [RootOfUnity(2, 1)]).equal
    rep = lunts_check(x**3, [RootOfUnity(3, 1)])
    assert rep.equal and rep.lhs == 1
    x2, y2 = R2.var("x"), R2.var("y")
    rep = lunts_check(x2**3 + y2**3, [RootOfUnity(3, 1), RootOfUnity(1, 0)])
    assert rep.equal and rep.lhs == -2


def test_lunts_identity_symmetry():
    # t = identity: both sides are (-1)^n mu(w)
    x2, y2 = R2.var("x"), R2.var("y")
    rep = lunts_check(x2**3 + y2**3, [RootOfUnity(1, 0), RootOfUnity(1, 0)])
    assert rep.equal and rep.lhs == 4


def test_zero_fixed_locus_examples():
    # t = id with n = 1 odd: chi(Hom(A, B)) = 0
    mf = MatrixFactorization(x**3, [[x]], [[x**2]])
    ident = MFMorphism.identity(mf)
    rep = zero_fixed_locus_check(mf, mf, [RootOfUnity(1, 0)], ident, ident, case="chi-odd-n")
    assert rep.equal

    # w = x^3 + y^3, t = (zeta_3, 1): n - k = 1 odd
    fx, fy = kfac("x", 1, 3), kfac("y", 1, 3)
    A = tensor_mf(fx, fy)
    t = [RootOfUnity(3, 1), RootOfUnity(1, 0)]
    u = MFMorphism.diagonal(fx, pullback([RootOfUnity(3, 1)], fx), [Scalar.one(), Scalar.zeta(3, 2)])
    alpha = tensor_morphisms(u, MFMorphism.identity(fy), source=A, target=pullback(t, A))
    rep = zero_fixed_locus_check(A, A, t, alpha, alpha.inverse(), case="cubic")
    assert rep.equal

    with pytest.raises(ValueError):
        zero_fixed_locus_check(mf, mf, [RootOfUnity(3, 1)], ident, ident)


def test_trace_identity_examples():
    mf, t, alpha, _ = a1_data()
    rep = trace_identity_check(mf, t, alpha, case="A1")
    assert rep.equal and rep.lhs == 4

    mf, t, alpha, _ = a2_data()
    rep = trace_identity_check(mf, t, alpha, case="A2")
    assert rep.equal and rep.lhs == 3  # (1-z)(1-z^2) = 3

    # contractible factorization: 0 = 0
    w = x**2
    mf = MatrixFactorization(w, [[R1.one()]], [[w]])
    tgt = pullback([RootOfUnity(2, 1)], mf)
    alpha = MFMorphism.diagonal(mf, tgt, [1, 1])
    rep = trace_identity_check(mf, [RootOfUnity(2, 1)], alpha, case="contractible")
    assert rep.equal and rep.lhs.is_zero()


def test_trace_identity_koszul_quadric():
    x2, y2 = R2.var("x"), R2.var("y")
    K = koszul_mf([x2, y2], [x2, y2])
    t = [RootOfUnity(2, 1), RootOfUnity(2, 1)]
    tgt = pullback(t, K)
    # parity involution (-1)^{|S|}: evens ({}, {1,2}) get +1, odds get -1
    alpha = MFMorphism.diagonal(K, tgt, [1, 1, -1, -1])
    assert alpha.is_closed()
    rep = trace_identity_check(K, t, alpha, case="quadric")
    assert rep.equal and rep.lhs == 16


def _sign_action_alpha(K, n):
    t = [RootOfUnity(2, 1)] * n
    tgt = pullback(t, K)
    signs = []
    subsets_even = [s for s in range(1 << n) if bin(s).count("1") % 2 == 0]
    subsets_odd = [s for s in range(1 << n) if bin(s).count("1") % 2 == 1]
    for s in subsets_even + subsets_odd:
        signs.append((-1) ** bin(s).count("1"))
    return t, MFMorphism.diagonal(K, tgt, signs)


def test_divisibility_examples():
    # Koszul of x^2+y^2, p = 2, sign action: a = 4, v = 2 >= 1
    x2, y2 = R2.var("x"), R2.var("y")
    K = koszul_mf([x2, y2], [x2, y2])
    t, alpha = _sign_action_alpha(K, 2)
    rep = divisibility_check(K, t, alpha, 2, case="n2")
    assert rep.passed and rep.value == 4 and rep.valuation == 2 and rep.bound == 1

    R3 = PolyRing(("x", "y", "z"))
    vs = [R3.var(v) for v in ("x", "y", "z")]
    K3 = koszul_mf(vs, vs)
    t, alpha = _sign_action_alpha(K3, 3)
    rep = divisibility_check(K3, t, alpha, 2, case="n3")
    assert rep.passed and rep.value == 8 and rep.valuation == 3 and rep.bound == 2

    # contractible: a = 0, v = inf, pass
    w = x**2
    mf = MatrixFactorization(w, [[R1.one()]], [[w]])
    tgt = pullback([RootOfUnity(2, 1)], mf)
    alpha = MFMorphism.diagonal(mf, tgt, [1, 1])
    rep = divisibility_check(mf, [RootOfUnity(2, 1)], alpha, 2, case="contractible")
    assert rep.passed and rep.valuation == math.inf


def test_divisibility_rejects_non_equivariant():
    x2, y2 = R2.var("x"), R2.var("y")
    K = koszul_mf([x2, y2], [x2, y2])
    t = [RootOfUnity(2, 1)] * 2
    tgt = pullback(t, K)
    bad = MFMorphism.diagonal(K, tgt, [1, 1, -1, 2])
    with pytest.raises(ValueError):
        divisibility_check(K, t, bad, 2)


def test_boundary_bulk_linear_and_kills_coboundaries():
    rng = random.Random(41)
    mf, t, alpha, _ = a2_data()
    tau = boundary_bulk(mf, t, alpha)
    for _ in range(10):
        psi = MFMorphism.from_blocks(
            mf,
            pullback(t, mf),
            1,
            [[R1.monomial((rng.randint(0, 2),), rng.randint(-3, 3))]],
            [[R1.monomial((rng.randint(0, 2),), rng.randint(-3, 3))]],
        )
        perturbed = alpha + psi.differential()
        assert perturbed.is_closed()
        tau2 = boundary_bulk(mf, t, perturbed)
        assert tau2.class_poly == tau.class_poly
    # scalar linearity
    c = Scalar.from_rational(Fraction(7, 2))
    assert boundary_bulk(mf, t, alpha.scale(c)).class_poly == tau.class_poly * c


def test_lhs_hlf_homotopy_invariance():
    rng = random.Random(43)
    mf, t, alpha, beta = a2_data()
    base = lhs_hlf(mf, mf, t, alpha, beta)
    for _ in range(5):
        psi = MFMorphism.from_blocks(
            mf,
            pullback(t, mf),
            1,
            [[R1.monomial((rng.randint(0, 2),), rng.randint(-3, 3))]],
            [[R1.monomial((rng.randint(0, 2),), rng.randint(-3, 3))]],
        )
        assert lhs_hlf(mf, mf, t, alpha + psi.differential(), beta) == base


def test_variable_order_invariance():
    # same data declared with the two variable orders gives identical verdicts
    values = []
    for names, exps in ((("x", "y"), (1, 0)), (("y", "x"), (0, 1))):
        R = PolyRing(names)
        a, b = R.var("x"), R.var("y")
        fx = koszul_mf([a**2], [a])
        fy = koszul_mf([b**2], [b])
        A = tensor_mf(fx, fy)
        t = [RootOfUnity(3, 1), RootOfUnity(1, 0)] if names[0] == "x" else [
            RootOfUnity(1, 0), RootOfUnity(3, 1)
        ]
        u = MFMorphism.diagonal(fx, pullback(t, fx), [Scalar.one(), Scalar.zeta(3, 2)])
        alpha = tensor_morphisms(u, odd_rank11_generator(fy), source=A, target=pullback(t, A))
        beta = tensor_morphisms(u.inverse(), odd_rank11_generator(fy), source=pullback(t, A), target=A)
        lhs = lhs_hlf(A, A, t, alpha, beta)
        rhs = rhs_hlf(A, A, t, alpha, beta)
        assert lhs == rhs
        values.append(lhs)
    assert values[0] == values[1]


def test_engine_both_cross_checks():
    fx = kfac("x", 1, 3)
    t = [RootOfUnity(3, 1)]
    u = MFMorphism.diagonal(fx, pullback(t, fx), [Scalar.one(), Scalar.zeta(3, 2)])
    rep = verify_hlf(fx, fx, t, u, u.inverse(), engine="both", case="A2-both")
    assert rep.equal


def test_hrr_special_case_spinor():
    # t = id, alpha = beta = id: the verified identity is chi(Hom(A, B)) =
    # <ch A, ch B> computed through boundary_bulk + canonical_pairing
    i = Scalar.zeta(4)
    S = MatrixFactorization(x2**2 + y2**2, [[x2 + y2 * i]], [[x2 - y2 * i]])
    ident = MFMorphism.identity(S)
    t_id = [RootOfUnity(1, 0)] * 2
    rep = verify_hlf(S, S, t_id, ident, ident, case="hrr-spinor")
    assert rep.equal and rep.lhs == 1  # the spinor object is exceptional

    K = koszul_mf([x2, y2], [x2, y2])
    idk = MFMorphism.identity(K)
    rep = verify_hlf(K, K, t_id, idk, idk, case="hrr-koszul")
    assert rep.equal and rep.lhs.is_zero()  # ch of the full Koszul object vanishes

    rep = verify_hlf(S, K, t_id, ident, idk, case="hrr-cross")
    assert rep.equal


def test_isolated_agrees_with_hlf():
    for data in (a1_data(), a2_data()):
        mf, t, alpha, beta = data
        full = verify_hlf(mf, mf, t, alpha, beta)
        closed = verify_isolated(mf, mf, t, alpha, beta)
        assert full.equal and closed.equal
        assert full.lhs == closed.lhs and full.rhs == closed.rhs


def test_verify_hlf_nonzero_pairing_larger_milnor_algebra():
    # w = x^3 + y^4, t = (zeta_3, 1): the boundary-bulk classes land on the
    # middle basis element y of the mu = 3 algebra of y^4, and <y, y> = 1/4
    fx, fy = kfac("x", 1, 3), koszul_mf(
        [PolyRing(("y",)).var("y") ** 2], [PolyRing(("y",)).var("y") ** 2],
        gradings=[Fraction(1, 2)],
    )
    A = tensor_mf(fx, fy)
    t = [RootOfUnity(3, 1), RootOfUnity(1, 0)]
    u = MFMorphism.diagonal(fx, pullback([RootOfUnity(3, 1)], fx),
                            [Scalar.one(), Scalar.zeta(3, 2)])
    eta = odd_rank11_generator(fy)
    alpha = tensor_morphisms(u, eta, source=A, target=pullback(t, A))
    beta = tensor_morphisms(u.inverse(), eta, source=pullback(t, A), target=A)
    tau = boundary_bulk(A, t, alpha)
    assert tau.space.milnor.milnor_number == 3
    assert not tau.is_zero()
    rep = verify_hlf(A, A, t, alpha, beta, case="x3y4-odd")
    assert rep.equal and rep.lhs == -8 - 4 * Scalar.zeta(3)
