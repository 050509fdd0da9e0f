import math

import numpy as np
import pytest

from totient_lab.arith import factorize
from totient_lab.errors import DimensionMismatch, DomainError
from totient_lab.simplex import (
    SimplexSpec,
    exact_unboxed_volume,
    lower_envelope_xi,
    membership,
    membership_matrix,
    monte_carlo_volume,
    monte_carlo_volume_box,
    sample_members,
    series_coeffs,
    unboxed_volume,
    unit_spec,
    upper_envelope_xi,
    vertices,
    x_vector,
)


def test_membership_examples():
    assert membership(unit_spec(1), [0.5])  # S_1 = [0, 1]
    assert membership(unit_spec(1), [1.0])
    assert not membership(unit_spec(1), [1.1])
    for dim in (1, 2, 5, 9):
        assert membership(unit_spec(dim), [0.0] * dim)  # the origin always
    assert not membership(unit_spec(3), [0.1, 0.5, 0.05])  # violates (I_1)


def test_membership_dimension_guard():
    with pytest.raises(DimensionMismatch):
        membership(unit_spec(3), [0.1, 0.2])
    with pytest.raises(DimensionMismatch):
        SimplexSpec(3, (1.0, 1.0))
    with pytest.raises(DomainError):
        SimplexSpec(2, (1.0, 0.0))


def test_starred_drops_box():
    point = [1.2, 0.3]  # x_1 > 1
    assert not membership(unit_spec(2), point)
    assert membership(unit_spec(2, starred=True), point)


def test_x_vector_examples():
    assert x_vector(factorize(97), 10**6, 1)[0] == 0.0  # primes have q_1 = 1
    xv = x_vector(factorize(30), 10**6, 3)
    assert xv[0] == pytest.approx(math.log(math.log(3)) / math.log(math.log(10**6)), abs=1e-12)
    assert xv[1] == 0.0 and xv[2] == 0.0  # q_2 = 2 contributes 0, q_3 = 1
    big = factorize(2 * 3 * 5 * 7 * 11 * 13)
    coords = x_vector(big, 10**9, 5)
    assert all(coords[i] >= coords[i + 1] for i in range(4))
    with pytest.raises(DomainError):
        x_vector(factorize(30), 10.0, 2)


def test_exact_volume_formula(bundle):
    assert float(exact_unboxed_volume(1)) == pytest.approx(1.0, abs=1e-20)
    want2 = 1 / (2 * float(bundle.g[1]) * float(bundle.g_star[2]))
    assert float(exact_unboxed_volume(2)) == pytest.approx(want2, rel=1e-12)
    with pytest.raises(DomainError):
        exact_unboxed_volume(0)


def test_vertex_volume_matches_closed_form():
    for dim in (2, 3, 5, 8, 12, 20):
        det_vol = unboxed_volume(unit_spec(dim, starred=True))
        closed = float(exact_unboxed_volume(dim))
        assert det_vol == pytest.approx(closed, rel=1e-10)


def test_simplex_centroid_is_interior():
    for dim in (2, 4, 7):
        spec = unit_spec(dim, starred=True)
        verts = vertices(spec)
        centroid = verts.mean(axis=0) * (dim / (dim + 1.0)) * 0.999
        assert membership(spec, centroid)


def test_volume_scaling_trend(bundle):
    # consecutive ratio ~ rho^(L+2) F'(rho)/(L+1): the exponent follows the
    # closed-form shape rho^(L(L+3)/2) (F'(rho))^L / L!
    rho, fp = float(bundle.rho), float(bundle.f_prime_rho)
    v10, v11 = float(exact_unboxed_volume(10)), float(exact_unboxed_volume(11))
    assert v11 / v10 == pytest.approx(rho**12 * fp / 11, rel=0.05)


def test_monte_carlo_unit_dim1():
    est, err = monte_carlo_volume_box(unit_spec(1), 10**4, seed=5)
    assert (est, err) == (1.0, 0.0)  # every ordered-box point is a member


def test_monte_carlo_determinism():
    spec = unit_spec(5)
    assert monte_carlo_volume(spec, 10**5, seed=42) == monte_carlo_volume(spec, 10**5, seed=42)
    a = monte_carlo_volume(spec, 10**5, seed=42)
    b = monte_carlo_volume(spec, 10**5, seed=43)
    assert a != b


def test_estimators_agree():
    for dim in (2, 4, 5):
        spec = unit_spec(dim)
        e1, s1 = monte_carlo_volume_box(spec, 3 * 10**5, seed=17)
        e2, s2 = monte_carlo_volume(spec, 3 * 10**5, seed=17)
        assert abs(e1 - e2) < 5 * math.hypot(s1, s2)


def test_containment_and_band():
    for dim in (4, 6):
        est, err = monte_carlo_volume(unit_spec(dim), 10**6, seed=99)
        exact = float(exact_unboxed_volume(dim))
        assert est <= exact + 3 * err
        assert est >= 0.35 * exact


def test_sampled_points_obey_xz_bounds(bundle):
    dim = 6
    g = [float(v) for v in bundle.g]
    rho = float(bundle.rho)
    pts = sample_members(unit_spec(dim, starred=True), 3000, seed=11)
    aug = np.hstack([np.ones((len(pts), 1)), pts])  # x_0 = 1
    for i in range(dim + 1):
        for j in range(i, dim + 1):
            assert (aug[:, i] >= g[j - i] * aug[:, j] - 1e-9).all()
    xi = upper_envelope_xi(dim)
    pts2 = sample_members(SimplexSpec(dim, xi), 2000, seed=12)
    aug2 = np.hstack([np.ones((len(pts2), 1)), pts2])
    for i in range(dim + 1):
        for j in range(i + 1, dim + 1):
            cap = 4.771 * np.prod(xi[i:j]) * rho ** (j - i)
            assert (aug2[:, j] <= cap * aug2[:, i] + 1e-9).all()


def test_xi_ordering_trend():
    # T_L <= T_L(xi) for xi >= 1, within Monte Carlo noise
    dim = 5
    base, err_b = monte_carlo_volume(unit_spec(dim), 10**6, seed=7)
    wide, err_w = monte_carlo_volume(SimplexSpec(dim, tuple(1.2 for _ in range(dim))), 10**6, seed=7)
    assert base <= wide + 3 * math.hypot(err_b, err_w)


def test_envelope_presets():
    up = upper_envelope_xi(6)
    assert all(v > 1 for v in up)
    assert up[5] == pytest.approx(1 + math.exp(-1 / 40) / 10000, rel=1e-12)
    low = lower_envelope_xi(6)
    assert all(0 < v < 1 for v in low)
    assert low[5] == pytest.approx(1 - 1 / 10, rel=1e-12)
    assert len(series_coeffs(6)) == 6
