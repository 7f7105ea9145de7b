"""What happens to a cover at the elastic vertex when both roots are stretched.

Uses the star with three leaves on the left and two on the right.

    python demos/covers.py
"""
from rootstretch.diagram import star
from rootstretch.roots import _reflect, interval
from rootstretch.stretch import classify_cover, stretch_root, stretched, verify_stretched_cover

G, data = star(3, 2)
px = G.index("x")

for root in [(1, 1, 1, 4, 1, 1), (1, 1, 1, 5, 3, 3)]:
    tri = classify_cover(G, root, data)
    lower = _reflect(G, root, px)
    print(f"{root} covers {lower}: case {tri.case} (S_L={tri.S_L}, S_R={tri.S_R}, b={tri.b}, b'={tri.b_prime})")
    for n in range(1, 4):
        chk = verify_stretched_cover(G, root, data, n)
        state = "comparable" if chk.comparable else "incomparable"
        print(f"  n={n}: {state}, depth difference {chk.depth_delta}")

root = (1, 1, 1, 4, 1, 1)
H = stretched(G, data, 3)
iv = interval(H, stretch_root(G, _reflect(G, root, px), data, 3), stretch_root(G, root, data, 3))
print(f"\ninterval between the stretched pair at n=3 has {len(iv)} roots; path values:")
print("  " + " ".join(sorted(("".join(map(str, r[px:px + 4])) for r in iv), reverse=True)))
