#!/usr/bin/env python3
"""Walkthrough: the analytic constants behind the totient counts.

The series F(x) = sum a_n x^n with a_n = (n+1)log(n+1) - n log n - 1 has a
unique root rho of F(rho) = 1.  Everything in the counting asymptotics is
built from rho: the quadratic coefficient C = 1/(2|log rho|), the linear
coefficient D, the convolution sequence g_i (whose reciprocals give exact
region volumes), and its growth constant lambda = 1/(rho F'(rho)).
"""

import mpmath

from totient_lab.constants import (
    asymptotic_scales,
    compute_bundle,
    growth_deviations,
    q_rate,
    stirling_series,
)

bundle = compute_bundle(precision=25, n_terms=300)
show = lambda v, n=22: mpmath.nstr(v, n)

print("root and derived constants (25-digit working precision):")
print(f"  rho      = {show(bundle.rho)}")
print(f"  F'(rho)  = {show(bundle.f_prime_rho)}")
print(f"  C        = {show(bundle.c)}")
print(f"  D        = {show(bundle.d)}")
print(f"  lambda   = {show(bundle.lam)}")
print(f"  K        = {show(bundle.k_const, 6)}")
print(f"  1/(1-rho) = {show(1/(1-bundle.rho), 8)}  (the typical Omega(m)/loglog x)")

value, deriv = stirling_series(bundle.rho, 25)
print(f"\nself-check: F(rho) = {show(value, 10)} and F'(rho) matches the stored value")
print(f"rate function: Q(1) = {q_rate(1)}, Q(2) = {q_rate(2):.6f}, Q(e) = {q_rate(2.718281828459045):.12f}")

dev = growth_deviations(bundle)
print(f"\ng_i vs lambda*rho^-i for i = 1..300:")
print(f"  worst |deviation| = {max(abs(d) for d in dev):.4f}  (bounded by 5)")
print(f"  all negative, strictly increasing toward 0: {all(d < 0 for d in dev)}")
print(f"  partial sum = {sum(dev):.6f} -> limit -1 + lambda/(1-rho) = {float(-1 + bundle.lam/(1-bundle.rho)):.6f}")

print("\ncritical dimension at astronomically large scales:")
for exp in (10**6, 10**8):
    l0, z, betas = asymptotic_scales(mpmath.mpf(f"1e{exp}"))
    print(f"  x = 10^{exp:,}: L0 = {l0}, profile beta = {[mpmath.nstr(b, 6) for b in betas]}")
