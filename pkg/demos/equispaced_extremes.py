"""Full grids are the extreme case.

For an M x M grid the spectrum has a closed form in floor(N/M) and ceil(N/M),
so sigma_min / N^{d/2} tends to 1 only as N/M approaches an integer from above.
This is also the reason no separation-only lower bound can beat
(floor(Nq)/Nq)^{d/2}.
"""
from vandal import bounds as bd
from vandal.torus import gen_equispaced
from vandal.vandermonde import VandermondeSpec, spectrum

D = 2
for m, n in [(4, 8), (4, 9), (4, 11), (5, 11), (11, 98)]:
    res = spectrum(VandermondeSpec(gen_equispaced(m, D), n))
    lo, hi = bd.equispaced_exact(n, m, D)
    print(f"M={m:2d} N={n:3d} Nq={n / m:6.3f}  sigma_min/N={res.sigma_min / n:.4f} (closed form {lo / n:.4f})"
          f"  sigma_max/N={res.sigma_max / n:.4f} (closed form {hi / n:.4f})")

# The last row has qN = 8.909 > 4d with N even, so the kernel-based bound claims
# sigma_min > 0.9 N.  The grid attains 0.898 N, which contradicts that claim.
head, zeta = bd.kernel_bound(98, 1 / 11, D)
print(f"kernel bound claims {head.bound_value / 98:.4f} N and {zeta.bound_value / 98:.4f} N")
