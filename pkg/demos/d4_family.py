"""The D_n family as stretches of the D_4 highest root.

Walks through depth growth, the class graph and its downset polynomial, and
the stable characteristic polynomial with its shard counts.

    python demos/d4_family.py
"""
from rootstretch.arrangements import region_count
from rootstretch.classes import build_class_graph, downset_polynomial, n_zero
from rootstretch.roots import depth, downset
from rootstretch.shards import fracture_charpoly, stable_charpoly
from rootstretch.stretch import depth_growth_rate, stretch_root, stretched
from rootstretch.verify import load_fixture

fx = load_fixture("D_4")
G, data, top = fx.diagram, fx.data, fx.roots["highest"]

t = depth_growth_rate(G, top, data)
print(f"depth grows by t = {t} per stretch")
for n in range(4):
    H = stretched(G, data, n)
    print(f"  D_{4 + n}: highest root {stretch_root(G, top, data, n)}  depth {depth(H, stretch_root(G, top, data, n))}")

P = build_class_graph(G, top, data)
p = downset_polynomial(P)
print(f"\nclass graph: {len(P.nodes)} classes, n0 = {n_zero(P)}, p(n) = {p}")
for n in range(p.threshold, p.threshold + 3):
    H = stretched(G, data, n)
    print(f"  n={n}: p(n) = {p(n)}, |downset| = {len(downset(H, stretch_root(G, top, data, n)))}")

sc = stable_charpoly(G, top, data)
print(f"\nfractures stabilise with r = {sc.form.r}, e = {sc.e}; {sc.form.s} fixed and {sc.t} moving families")
prev = None
for n in range(sc.e, sc.e + 5):
    direct = region_count(fracture_charpoly(G, top, data, n))
    ratio = f"  ratio {direct / prev:.4f}" if prev else ""
    print(f"  n={n}: shards {sc.shards(n)} (direct {direct}){ratio}")
    prev = direct
print(f"the ratios approach t + 1 = {t + 1} from above: the count is 486*3^(n-3) - 32*2^(n-3)")
