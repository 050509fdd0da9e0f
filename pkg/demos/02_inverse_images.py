#!/usr/bin/env python3
"""Walkthrough: exact preimage enumeration for multiplicative functions.

Any n with f(n) = m factors into prime-power blocks whose f-values multiply
to m, so every block value divides m.  Walking candidate primes largest
first, one block per prime, enumerates the full solution set without any
search bound guesswork.
"""

from totient_lab import eval_f, inverse_f, multiplicity

print("phi-preimages of small targets:")
for m in (1, 2, 4, 6, 8, 12, 220):
    pre = inverse_f("phi", m)
    print(f"  phi^-1({m}) = {list(pre.members)}   A({m}) = {len(pre)}")

print("\nodd targets above 1 are never hit:")
for m in (3, 5, 7, 9, 11):
    assert multiplicity("phi", m) == 0
print("  A(3) = A(5) = A(7) = A(9) = A(11) = 0")

print("\nevery member re-evaluates to the target (self-check):")
for n in inverse_f("phi", 88):
    assert eval_f("phi", n) == 88
print("  phi(n) = 88 for all six members of phi^-1(88)")

print("\nthe same engine drives the divisor-sum and unitary variants:")
print(f"  sigma^-1(3)  = {list(inverse_f('sigma', 3).members)}  (multiplicity 1 occurs here)")
print(f"  sigma^-1(12) = {list(inverse_f('sigma', 12).members)}")
print(f"  psi^-1(12)   = {list(inverse_f('psi', 12).members)}")
print(f"  phi*^-1(8)   = {list(inverse_f('phi_star', 8).members)}")
print(f"  sigma*^-1(10)= {list(inverse_f('sigma_star', 10).members)}")
print(f"  shifted(-1): f^-1(8) = {list(inverse_f('shifted(-1)', 8).members)}")
