"""Walk through the isolated-fixed-point trace formula on one-variable cases.

For w = x^d with the symmetry t = zeta_d^j (t != 1, so the origin is an
isolated fixed point), the supertrace of the twisted endomorphism on the
cohomology of the endomorphism complex of (x^a, x^{d-a}) equals

    str(alpha|_0) str(beta|_0) / (1 - t),

and both sides are computed here by completely different routes.
"""

from mflef import (
    MatrixFactorization, MFMorphism, PolyRing, RootOfUnity, Scalar,
    cohomology, hom_complex, pullback, verify_isolated, verify_hlf,
)

ring = PolyRing(("x",))
x = ring.var("x")

d, a, j = 5, 2, 1
w = x**d
A = MatrixFactorization(w, [[x**a]], [[x ** (d - a)]])
print(f"w = {w},  A = (x^{a}, x^{d-a}),  ranks {A.r0},{A.r1}")

t = [RootOfUnity(d, j)]
alpha = MFMorphism.diagonal(A, pullback(t, A), [Scalar.one(), Scalar.zeta(d, j * a)])
beta = alpha.inverse()
print("equivariant structure closed:", alpha.is_closed())

basis = cohomology(hom_complex(A, A))
print("End(A) cohomology dimensions (even, odd):", basis.dims)

report = verify_isolated(A, A, t, alpha, beta, case=f"x^{d}, t = zeta_{d}")
print(report)

# the same value through the boundary-bulk classes and the residue pairing
report = verify_hlf(A, A, t, alpha, beta, case="full machinery")
print(report)
