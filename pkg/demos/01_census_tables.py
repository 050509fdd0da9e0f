#!/usr/bin/env python3
"""Walkthrough: exact censuses of totient multiplicities.

A(m) counts the n with phi(n) = m.  Sweeping n = 1..n_max with a segmented
sieve and tallying phi(n) gives the exact table of A(m) for every m <= x:
from it we read off V(x) (how many totients there are), the split of V by
multiplicity, and the smallest value m_k attaining each multiplicity k.

With --full the sweep runs at x = 10^7 (about 10-20 s); the default 10^6
takes around a second.
"""

import argparse
import time

from totient_lab import build_census, multiplicity_table, query_counts

parser = argparse.ArgumentParser()
parser.add_argument("--full", action="store_true", help="run at x = 10^7")
x = 10**7 if parser.parse_args().full else 10**6

t = time.time()
census = build_census("phi", x)
print(f"census at x = {x:,}: swept n up to {census.n_max:,} in {time.time() - t:.1f}s")
print(f"  the ceiling is chosen so phi(n) > x is *proven* for every n > n_max\n")

v = census.value_count()
print(f"V({x:,}) = {v:,} totients")
print(f"{'k':>3}  {'V_k':>9}  {'V_k/V':>9}")
for k in range(1, 8):
    _, vk, ratio = query_counts(census, k)
    print(f"{k:>3}  {vk:>9,}  {ratio:>9.6f}")
print("  (k = 1 stays at zero: no totient below x has a unique preimage)\n")

table = multiplicity_table(census, 20)
print("smallest m with multiplicity exactly k:")
for k in range(2, 21):
    print(f"  m_{k:<3} = {table[k]:,}")

print("\nsanity: conservation against the sweep itself")
print(f"  sum of all A(m) = {census.total_preimages():,} preimages n <= n_max with phi(n) <= x")
