"""Two independent routes to a characteristic polynomial.

    python demos/arrangements.py
"""
from rootstretch.arrangements import (
    RationalArrangement,
    char_poly_finite_field,
    char_poly_mobius,
    count_points,
    prime_bound,
    region_count,
)

arr = RationalArrangement(3, [(1, -1, 0), (0, 1, -1), (1, 0, -1), (1, 1, 1)])
print(f"{len(arr)} hyperplanes in Q^3, minor bound {prime_bound(arr)}")
for p in (5, 7, 11, 13):
    print(f"  complement over F_{p}: {count_points(arr, p)} points")
mob = char_poly_mobius(arr)
ff = char_poly_finite_field(arr)
print(f"Möbius:       chi(q) = {mob}")
print(f"finite field: chi(q) = {ff}")
print(f"regions: {region_count(mob)}")
