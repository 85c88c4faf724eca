"""Walk through a certified exchange on two disjoint spanning trees of K4."""
from mxl.exchange import ExchangeInstance, brute_force_exchange, exchange_bound, find_exchange
from mxl.matroid import GraphicMatroid

k4 = GraphicMatroid.complete(4)
print("edges:", dict(enumerate(k4.edges)))

A, B = {0, 3, 5}, {1, 2, 4}
X, Y = {0, 3}, {1}
inst = ExchangeInstance(k4, A, B, X, Y)

pair = find_exchange(inst)
print(f"U = {sorted(pair.U)}, V = {sorted(pair.V)}")
print("A - U + V:", sorted((A - pair.U) | pair.V), "basis:", pair.swap_a_basis)
print("B + U - V:", sorted((B | pair.U) - pair.V), "basis:", pair.swap_b_basis)
print("size bound r(X + Y + (A & B)) - |A & B| =", exchange_bound(k4, A, B, X, Y))

feasible = brute_force_exchange(inst)
print(f"{len(feasible)} feasible pairs by enumeration; smallest size {feasible[0].size}")
