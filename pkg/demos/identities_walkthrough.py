"""Expand both sides of the exchanged-determinant identities on one rational matrix."""
import random

from mxl.algebra import GF, QQ, random_matrix
from mxl.pluecker import CharacteristicViolation, MuTable, verify_main_gp, verify_ultra_gp

rng = random.Random(1)
M = random_matrix(QQ, 3, 6, rng)
A, B = [0, 1, 2], [3, 4, 5]
print("M =", [[str(x) for x in row] for row in M.rows])

t = MuTable(M, A, B)
print("mu(empty, empty) = det M[A] det M[B] =", t.base)

rep = verify_main_gp(M, A, B, [0, 1], [3], t)
print("main identity, X={0,1}, Y={3}: coefficients", rep.coefficients, "residual", rep.residual)

for p in (1, 2):
    rep = verify_ultra_gp(M, A, B, [0, 1], [3], p, t)
    print(f"|U & X| = {p}: coefficients", {u: str(c) for u, c in rep.coefficients.items()}, "residual", rep.residual)

# over GF(2) the p = 1 coefficients divide by binom(2, 1) = 2
M2 = random_matrix(GF(2), 3, 6, rng)
try:
    verify_ultra_gp(M2, A, B, [0, 1], [3], 1)
except CharacteristicViolation as exc:
    print("GF(2):", exc, "| cleared residual:", exc.report.residual)
