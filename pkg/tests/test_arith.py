import math
import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from totient_lab.arith import (
    FactoredInteger,
    eval_f,
    factorize,
    get_function,
    is_probable_prime,
    is_prime,
    llbs_certify,
    next_prime,
    omega_window,
    phi,
    shifted,
    spf_table,
    verify_certificate,
    explain_certificate,
)
from totient_lab.errors import CertificationFailed, UnsupportedFunction


def test_factorize_basics():
    assert factorize(1).factors == ()
    assert factorize(12).factors == ((2, 2), (3, 1))
    assert factorize(9922560).value == 9922560
    # trial-division oracle
    n, fac = 9922560, dict(factorize(9922560).factors)
    for p, e in fac.items():
        assert n % p**e == 0 and n % p ** (e + 1) != 0


def test_factorize_uses_sieve_hint():
    spf = spf_table(10**4)
    for n in (1, 2, 97, 360, 9973, 9999):
        assert factorize(n, spf).factors == factorize(n).factors


def test_factorize_large_semiprime():
    p, q = 1000003, 1000033
    fac = factorize(p * q)
    assert fac.factors == ((p, 1), (q, 1))


def test_factored_integer_invariants():
    with pytest.raises(ValueError):
        FactoredInteger(12, ((3, 1), (2, 2)))  # unsorted
    with pytest.raises(ValueError):
        FactoredInteger(12, ((2, 1), (3, 1)))  # wrong product
    f = factorize(360)
    assert f.num_prime_factors == 6
    assert f.num_distinct_primes == 3
    assert f.largest_prime == 5
    assert f.squarefree_kernel == 30
    assert f.multiply((7, 1)).value == 2520


def test_eval_f_examples():
    assert eval_f("phi", 1) == 1
    assert phi(97) == 96
    assert eval_f("sigma", 4) == 7
    assert eval_f("psi", 4) == 6
    assert eval_f("phi_star", 8) == 7
    assert eval_f("sigma_star", 8) == 9
    assert eval_f(shifted(1), 8) == 27  # (2+1)^3


def test_shifted_plateau():
    f = shifted(-1)
    # below the plateau edge p0 = 3, the rule uses (p0 - 1)^k
    assert f.prime_power(2, 3) == 8
    assert f.prime_power(3, 2) == 4
    assert eval_f(f, 6) == 2 * 2


def test_get_function_errors():
    with pytest.raises(UnsupportedFunction):
        get_function("mobius")
    with pytest.raises(UnsupportedFunction):
        get_function("shifted(0)")
    assert get_function("shifted(-2)").prime_power(7, 1) == 5


def test_phi_against_sieve(phi_table_1e5):
    for n in range(1, 10**5 + 1, 97):
        assert phi(n) == int(phi_table_1e5[n])


def test_gauss_identity():
    # sum over d|n of phi(d) = n cross-validates factorize and eval_f
    for n in range(1, 2001):
        assert sum(phi(d) for d in factorize(n).divisors()) == n


def test_omega_window_examples():
    twelve = factorize(12)
    assert omega_window(twelve, 1, 3) == 3
    assert omega_window(twelve, 2, 3) == 1
    with pytest.raises(ValueError):
        omega_window(twelve, 3, 3)
    rng = random.Random(7)
    for _ in range(50):
        n = rng.randrange(1, 10**4)
        fac = factorize(n)
        assert omega_window(fac, 0, n) == fac.num_prime_factors


@given(st.integers(2, 10**6))
@settings(max_examples=200, deadline=None)
def test_eval_f_multiplicative(n):
    fac = factorize(n)
    for f_id in ("phi", "sigma", "psi", "phi_star", "sigma_star"):
        spec = get_function(f_id)
        direct = eval_f(spec, fac)
        split = 1
        for p, e in fac.factors:
            split *= spec.prime_power(p, e)
        assert direct == split


def test_probable_prime_examples():
    assert is_probable_prime(79)
    assert not is_probable_prime(1807)  # 13 * 139
    assert is_probable_prime(2**64 + 13) == sympy.isprime(2**64 + 13)


def test_probable_prime_exact_to_1e6():
    sieve = spf_table(10**6)
    for n in range(2, 10**6, 337):
        assert is_probable_prime(n) == (int(sieve[n]) == n)
    for n in range(999000, 10**6):
        assert is_probable_prime(n) == (int(sieve[n]) == n)


def test_deterministic_primality_spot():
    for n in (2, 3, 25326001, 3215031751, 2152302898747, 3474749660383):
        assert is_prime(n) == sympy.isprime(n)


def test_llbs_certify_examples():
    cert = llbs_certify(79, factorize(78))
    assert verify_certificate(cert)
    assert {q for q, _ in cert.witnesses} == {2, 3, 13}

    cert7 = llbs_certify(7, factorize(6))
    assert verify_certificate(cert7)
    # a = 3 works for q = 2: 3^3 = 27 = 6 != 1 (mod 7)
    assert dict(cert7.witnesses)[2] == 3

    with pytest.raises(CertificationFailed):
        llbs_certify(91, factorize(90))


def test_verify_certificate_rejects_tampering():
    cert = llbs_certify(79, factorize(78))
    missing = type(cert)(cert.n, cert.factor_list, cert.witnesses[1:])
    assert not verify_certificate(missing)
    assert "no witness" in explain_certificate(missing)
    forged = type(cert)(cert.n, cert.factor_list, ((2, 79 * 5),) + cert.witnesses[1:])
    assert not verify_certificate(forged)
    bad_factors = type(cert)(cert.n, ((2, 1), (39, 1)), cert.witnesses)
    assert not verify_certificate(bad_factors)


def test_llbs_random_primes():
    rng = random.Random(2024)
    done = 0
    while done < 25:
        # primes p with smooth-ish p-1 so the factorization is easy
        k = rng.randrange(10**6, 10**8)
        n = 2 * 3 * k + 1
        if not is_probable_prime(n):
            continue
        cert = llbs_certify(n, factorize(n - 1))
        assert verify_certificate(cert)
        done += 1


def test_next_prime():
    assert next_prime(1) == 2
    assert next_prime(2) == 3
    assert next_prime(10**6) == 1000003
