import dataclasses

import pytest

from totient_lab.errors import NotFoundError, PreconditionFailed
from totient_lab.inverse import inverse_f
from totient_lab.sierpinski import (
    MultiplicityWitness,
    chain_to,
    extend,
    extension_conditions,
    seed_witness,
    verify_witness,
)


def test_seed_witnesses():
    w = seed_witness(1)
    assert (w.k, w.preimages.members) == (2, (1, 2))
    assert verify_witness(w)
    assert seed_witness(2).k == 3
    assert seed_witness(220).k == 5
    with pytest.raises(PreconditionFailed):
        seed_witness(3)  # nontotient


def test_worked_example_m4():
    w4 = seed_witness(4)
    assert w4.k == 4
    w6 = extend(w4)
    assert w6.provenance.prime == 11
    assert w6.m == 88
    assert w6.preimages.members == (89, 115, 178, 184, 230, 276)
    assert verify_witness(w6)


def test_extension_conditions_on_example():
    from totient_lab.arith import factorize

    four = factorize(4)
    assert extension_conditions(four, 11) is None
    assert extension_conditions(four, 7) is not None  # 7 <= 2m+1 = 9
    assert extension_conditions(four, 13) is not None  # 2p+1 = 27 composite
    assert extension_conditions(four, 23) is not None  # 2mp+1 = 185 = 5*37 composite


def test_extend_rejects_bad_m():
    with pytest.raises(PreconditionFailed):
        extend(seed_witness(1))  # m = 1 is excluded by design
    with pytest.raises(PreconditionFailed):
        extend(seed_witness(2))  # 2 = 2 (mod 3)
    with pytest.raises(PreconditionFailed):
        extend(seed_witness(12))  # 12 = 0 (mod 3)


def test_extension_parity_and_congruence():
    w4 = seed_witness(4)
    w6 = extend(w4)
    assert w6.k == w4.k + 2
    assert w6.m % 3 == 1  # propagates: p = 2 (mod 3), m = 1 (mod 3)
    assert w6.provenance.prime % 3 == 2


def test_chain_to_direct_seed_hit():
    seeds = [seed_witness(m) for m in (1, 2, 4, 220)]
    assert chain_to(4, seeds).m == 4
    assert chain_to(5, seeds).m == 220
    assert chain_to(3, seeds).m == 2
    with pytest.raises(PreconditionFailed):
        chain_to(1, seeds)


def test_chain_to_eight():
    w8 = chain_to(8, [seed_witness(4)])
    assert w8.k == 8
    assert w8.chain_depth() == 2
    assert verify_witness(w8)
    assert len(inverse_f("phi", w8.m, w8.m_factored)) == 8


@pytest.mark.slow
def test_chain_to_nine():
    w9 = chain_to(9, [seed_witness(220)])
    assert w9.k == 9
    assert w9.chain_depth() == 2
    assert verify_witness(w9)


def test_chain_requires_matching_parity():
    with pytest.raises(NotFoundError):
        chain_to(7, [seed_witness(4)])  # only an even seed available


def test_verify_rejects_tampering():
    w6 = extend(seed_witness(4))
    fewer = dataclasses.replace(
        w6, preimages=type(w6.preimages)(w6.m, "phi", w6.preimages.members[:-1])
    )
    assert not verify_witness(fewer)
    wrong_k = dataclasses.replace(w6, k=7)
    assert not verify_witness(wrong_k)
    bad_prime = dataclasses.replace(
        w6, provenance=dataclasses.replace(w6.provenance, prime=13)
    )
    assert not verify_witness(bad_prime)
