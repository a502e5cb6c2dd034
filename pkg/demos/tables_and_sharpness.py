"""Dimension dependence of the bounds.

Prints the separation constants and normalized bounds for small orders r and
dimensions d, then the normalized equispaced ceiling at Nq = 4.5 to show how
quickly every uniform lower bound must decay with d.
"""
from vandal import bounds as bd

tab = bd.table2()
print("r\\d   condition (rounded up)     normalized bound (rounded down)")
for i, r in enumerate((1, 2, 3)):
    print(f"{r}     {tab.conditions[i].tolist()}   {tab.bounds[i].tolist()}")

n = 900
print("\nd   ceiling at Nq=4.5   small_r[r=1]   ingham")
for d in range(1, 9):
    q = 4.5 / n
    ceiling = bd.sharpness_upper(n, q, d) / n ** (d / 2)
    small = bd.small_r_bound(n, q, d, 1)
    ing = bd.ingham_bound(n, q, d)
    fmt = lambda rep: f"{rep.normalized_value:.4f}" if rep.applicable else "n/a"
    print(f"{d:<3d} {ceiling:.4f}              {fmt(small):<14} {fmt(ing)}")
