"""The sign-action divisibility bound and its Hilbert-series shadow.

For the sum of n squares with the sign symmetry, the origin supertrace of the
Z/2-equivariant structure on the Koszul factorization is 2^n, divisible by
2^(ceil(n/2)).  Stabilizing a graded module M over R/(w) produces such an
equivariant factorization with supertrace chi_M(-1), which ties the bound to
the multiplicity polynomial e_M(t).
"""

from mflef import (
    GradedModulePresentation, MFMorphism, PolyRing, RootOfUnity,
    chi_polynomial, chi_stabilization_consistency, divisibility_check,
    koszul_mf, multiplicity_data, pullback, stabilize_module,
    supertrace_at_origin, verify_even_multiplicity_divisibility,
)

n = 3
ring = PolyRing(tuple(f"x{i}" for i in range(n)))
gens = [ring.var(i) for i in range(n)]
w = ring.zero()
for g in gens:
    w = w + g * g
K = koszul_mf(gens, gens)
t = [RootOfUnity(2, 1)] * n
signs = [(-1) ** bin(s).count("1")
         for s in sorted(range(1 << n), key=lambda s: bin(s).count("1") % 2)]
alpha = MFMorphism.diagonal(K, pullback(t, K), signs)
print(divisibility_check(K, t, alpha, 2, case=f"sum of {n} squares"))

# the residue field k as a module over R/(w): stabilization and chi
pres = GradedModulePresentation(ring, [0], [gens])
chi = chi_polynomial(pres)
data = multiplicity_data(chi, n)
print(f"chi_k(t) = {chi},  d = {data.krull_dim},  e = {data.multiplicity}")
mf, equiv = stabilize_module(pres, w)
print(f"stabilization ranks ({mf.r0},{mf.r1}), str((-1)*|0) = {supertrace_at_origin(equiv)}")
print(chi_stabilization_consistency(pres, w, case="k over R/(w)"))

# e_M(-1) divisibility over the quadric
ring2 = PolyRing(("x", "y"))
w2 = ring2.var("x") ** 2 + ring2.var("y") ** 2
pres2 = GradedModulePresentation.cyclic(ring2, [w2])
print(verify_even_multiplicity_divisibility(pres2, w2, case="R/(w) itself"))
