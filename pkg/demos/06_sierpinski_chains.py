#!/usr/bin/env python3
"""Walkthrough: manufacturing any multiplicity, two at a time.

If A(m) = k, m = 1 (mod 3), and a prime p satisfies p > 2m+1 with 2p+1 and
2mp+1 prime but dp+1 composite for every other divisor d of 2m, then
A(2mp) = k+2: the preimages of 2mp are exactly (2p+1) times the preimages
of m, plus 2mp+1 and 2(2mp+1).  Scanning a residue class built to make the
dp+1 composite by construction finds such p quickly, and the conclusion is
confirmed by exhaustive enumeration before anything is returned.
"""

import time

from totient_lab.sierpinski import chain_to, extend, seed_witness, verify_witness

w4 = seed_witness(4)
print(f"seed: A(4) = {w4.k}, preimages {list(w4.preimages.members)}")

w6 = extend(w4)
print(f"\nextend with p = {w6.provenance.prime}: A({w6.m}) = {w6.k}")
print(f"  preimages {list(w6.preimages.members)}")
print(f"  (89 and 178 are the two new ones; the rest are 23x the preimages of 4)")
print(f"  re-verified recursively: {verify_witness(w6)}")

t = time.time()
w10 = chain_to(10, [w4])
print(f"\nchaining 4 -> 6 -> 8 -> 10 in {time.time() - t:.1f}s:")
w = w10
while w is not None:
    tag = f"p = {w.provenance.prime}" if w.provenance.prime else "seed"
    print(f"  A(m) = {w.k:>2} at m with {len(str(w.m))} digits  ({tag})")
    w = w.provenance.parent
print(f"  deepest witness verified: {verify_witness(w10)}")

t = time.time()
w7 = chain_to(7, [seed_witness(220)])
print(f"\nodd multiplicities start from A(220) = 5: chained to A = 7 in {time.time() - t:.1f}s")
print(f"  m has {len(str(w7.m))} digits, verified: {verify_witness(w7)}")
