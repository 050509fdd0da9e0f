"""The fundamental simplex: the region of R^L cut out by

    (I_0)      a_1 x_1 + a_2 x_2 + ... + a_L x_L <= xi_0
    (I_i)      a_1 x_{i+1} + ... + a_{L-i} x_L   <= xi_i x_i   (1 <= i <= L-2)
    (I_{L-1})  0 <= x_L <= xi_{L-1} x_{L-1}

optionally intersected with the ordered box 0 <= x_L <= ... <= x_1 <= 1.
The unboxed volume has the closed form 1/(L! g_1...g_{L-1} g_L*); the boxed
volume is estimated by seeded Monte Carlo over the ordered box.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np

from .arith import FactoredInteger
from .constants import DEFAULT_PRECISION, compute_bundle
from .errors import DimensionMismatch, DomainError

E_TO_E = math.exp(math.e)


@dataclass(frozen=True)
class SimplexSpec:
    """Dimension, slack vector xi_0..xi_{L-1}, and whether the ordered-box
    constraints 0 <= x_L <= ... <= x_1 <= 1 are dropped (starred)."""

    dim: int
    xi: tuple[float, ...]
    starred: bool = False

    def __post_init__(self):
        if self.dim < 1:
            raise DomainError("dimension must be >= 1")
        if len(self.xi) != self.dim:
            raise DimensionMismatch(f"need {self.dim} xi values, got {len(self.xi)}")
        if any(v <= 0 for v in self.xi):
            raise DomainError("xi values must be positive")


def unit_spec(dim: int, starred: bool = False) -> SimplexSpec:
    """xi = (1, ..., 1): the fundamental simplex itself."""
    return SimplexSpec(dim, (1.0,) * dim, starred)


def upper_envelope_xi(dim: int, critical_dim: int | None = None) -> tuple[float, ...]:
    """xi_i = 1 + e^{-(L0-i)/40}/10000: the slightly-enlarged family used when
    bounding the value count from above."""
    l0 = dim if critical_dim is None else critical_dim
    return tuple(1.0 + math.exp(-(l0 - i) / 40.0) / 10000.0 for i in range(dim))


def lower_envelope_xi(dim: int, critical_dim: int | None = None) -> tuple[float, ...]:
    """xi_i = 1 - 1/(10 (L0-i)^3): the slightly-shrunk family used when
    producing values from below."""
    l0 = dim if critical_dim is None else critical_dim
    if l0 < dim:
        raise DomainError("critical_dim must be >= dim")
    return tuple(1.0 - 1.0 / (10.0 * (l0 - i) ** 3) for i in range(dim))


@lru_cache(maxsize=4)
def series_coeffs(count: int, precision: int = DEFAULT_PRECISION) -> np.ndarray:
    """a_1..a_count as float64 for the sampling hot loop."""
    bundle = compute_bundle(precision, max(count, 16))
    arr = np.array([float(v) for v in bundle.a[:count]])
    arr.flags.writeable = False
    return arr


def membership_matrix(spec: SimplexSpec, points: np.ndarray) -> np.ndarray:
    """Boolean inclusion mask for an (n, L) array of points."""
    if points.ndim != 2 or points.shape[1] != spec.dim:
        raise DimensionMismatch(f"points must be (n, {spec.dim})")
    dim = spec.dim
    a = series_coeffs(dim)
    xi = np.asarray(spec.xi)
    ok = points @ a <= xi[0]
    for i in range(1, dim - 1):
        lhs = points[:, i:] @ a[: dim - i]
        ok &= lhs <= xi[i] * points[:, i - 1]
    if dim >= 2:
        ok &= points[:, dim - 1] >= 0
        ok &= points[:, dim - 1] <= xi[dim - 1] * points[:, dim - 2]
    else:
        ok &= points[:, 0] >= 0
    if not spec.starred:
        ok &= points[:, 0] <= 1
        for i in range(dim - 1):
            ok &= points[:, i + 1] <= points[:, i]
    return ok


def membership(spec: SimplexSpec, point) -> bool:
    """True iff the point satisfies every inequality of the spec."""
    arr = np.asarray(point, dtype=float)
    if arr.ndim != 1 or arr.size != spec.dim:
        raise DimensionMismatch(f"point must have length {spec.dim}")
    return bool(membership_matrix(spec, arr[None, :])[0])


def x_vector(n: FactoredInteger, x_scale: float, dim: int) -> np.ndarray:
    """Simplex coordinates of n at scale x: x_i = max(0, loglog q_i)/loglog x
    for 1 <= i <= dim, where q_i is the (i+1)-st largest prime factor of n
    with multiplicity (q_i = 1 past the end contributes 0)."""
    if x_scale <= E_TO_E:
        raise DomainError("scale must exceed e^e so loglog(scale) > 1")
    denom = math.log(math.log(x_scale))
    primes = n.primes_desc()
    out = np.zeros(dim)
    for i in range(1, dim + 1):
        if i < len(primes):
            q = primes[i]
            if q > math.e:  # loglog(q) > 0; smaller primes contribute 0
                out[i - 1] = math.log(math.log(q)) / denom
    return out


def exact_unboxed_volume(dim: int, precision: int = DEFAULT_PRECISION):
    """The closed-form volume 1/(L! (g_1 ... g_{L-1}) g_L*) as an mpf.

    Exact for the unboxed region when L >= 2; at L = 1 the formula gives 1,
    the volume of the boxed variant (the identity g_1* = 1 makes it so).
    """
    if not 1 <= dim <= 300:
        raise DomainError("dimension must be in 1..300")
    bundle = compute_bundle(precision, max(dim, 16))
    with mpmath.mp.workdps(precision + int(0.2656 * dim) + 20):
        denom = mpmath.factorial(dim) * bundle.g_star[dim]
        for i in range(1, dim):
            denom *= bundle.g[i]
        return 1 / denom


def _block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(block,)))


def vertices(spec: SimplexSpec) -> np.ndarray:
    """The L nonzero vertices of the unboxed region, one per row.

    Every inequality except (I_0) is homogeneous, so the region is the cone
    they cut, truncated by (I_0): a simplex on the origin and the L points
    where all homogeneous walls but one are tight and (I_0) is tight.
    """
    dim = spec.dim
    a = series_coeffs(dim)
    xi = spec.xi
    if dim == 1:
        return np.array([[xi[0] / a[0]]])
    walls = np.zeros((dim, dim))
    for i in range(1, dim - 1):  # (I_i): sum a_j x_{i+j} - xi_i x_i <= 0
        walls[i - 1, i - 1] = -xi[i]
        walls[i - 1, i:] = a[: dim - i]
    walls[dim - 2, dim - 2] = -xi[dim - 1]  # x_L <= xi_{L-1} x_{L-1}
    walls[dim - 2, dim - 1] = 1.0
    walls[dim - 1, dim - 1] = -1.0  # -x_L <= 0
    out = np.empty((dim, dim))
    rhs = np.zeros(dim)
    rhs[dim - 1] = xi[0]
    for i in range(dim):
        system = np.vstack([np.delete(walls, i, axis=0), a])
        out[i] = np.linalg.solve(system, rhs)
    return out


def unboxed_volume(spec: SimplexSpec) -> float:
    """Geometric volume of the unboxed region, |det(vertices)|/L!.

    Agrees with exact_unboxed_volume for xi = 1 and L >= 2, and works for
    arbitrary positive xi."""
    _, logdet = np.linalg.slogdet(vertices(spec))
    return math.exp(logdet - math.lgamma(spec.dim + 1))


def monte_carlo_volume(
    spec: SimplexSpec,
    samples: int,
    seed: int,
    block_size: int = 1 << 20,
) -> tuple[float, float]:
    """(estimate, standard_error) for the volume of the spec's region.

    Points are drawn uniformly inside the exact unboxed simplex (Dirichlet
    weights over its vertices), and the estimate is the accepted fraction
    times the simplex's determinant volume.  For boxed specs the acceptance
    fraction is exactly the box-restriction ratio, which stays near 1/2 at
    every dimension; rejection from an enclosing box would produce zero
    accepted points beyond L ~ 8 at any feasible sample count.

    Blocks use per-block derived seeds: the result depends only on
    (samples, seed, block_size), not on scheduling.
    """
    if samples < 1:
        raise DomainError("need at least one sample")
    dim = spec.dim
    verts = vertices(spec)
    anchor = unboxed_volume(spec)
    accepted = 0
    done = 0
    block = 0
    while done < samples:
        count = min(block_size, samples - done)
        pts = _simplex_points(verts, count, _block_rng(seed, block))
        accepted += int(membership_matrix(spec, pts).sum())
        done += count
        block += 1
    frac = accepted / samples
    stderr = anchor * math.sqrt(frac * (1.0 - frac) / samples)
    return frac * anchor, stderr


def _simplex_points(verts: np.ndarray, count: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform points of the simplex conv({0} + rows of verts)."""
    w = rng.standard_exponential((count, verts.shape[0] + 1))
    w /= w.sum(axis=1, keepdims=True)
    return w[:, 1:] @ verts


def monte_carlo_volume_box(
    spec: SimplexSpec,
    samples: int,
    seed: int,
    block_size: int = 1 << 20,
) -> tuple[float, float]:
    """Ordered-box rejection estimator: (estimate, standard_error).

    Samples the box {0 <= x_L <= ... <= x_1 <= 1} (volume 1/L!) by sorting
    uniforms and scales the acceptance ratio by 1/L!.  A useful independent
    cross-check of the closed-form volume at small L, but the acceptance
    probability decays like T_L * L!, so it is hopeless past L ~ 8.
    """
    if samples < 1:
        raise DomainError("need at least one sample")
    dim = spec.dim
    accepted = 0
    done = 0
    block = 0
    while done < samples:
        count = min(block_size, samples - done)
        rng = _block_rng(seed, block)
        pts = rng.random((count, dim))
        pts[:, ::-1].sort(axis=1)  # descending per row
        accepted += int(membership_matrix(spec, pts).sum())
        done += count
        block += 1
    frac = accepted / samples
    scale = 1.0 / math.factorial(dim)
    stderr = math.sqrt(frac * (1.0 - frac) / samples) * scale
    return frac * scale, stderr


def sample_members(
    spec: SimplexSpec,
    count: int,
    seed: int,
    max_draw: int = 10**9,
) -> np.ndarray:
    """`count` accepted points of the spec, deterministically seeded.

    Draws uniform points of the unboxed simplex and keeps the ones passing
    the full membership test (all of them for starred specs, up to float
    fuzz; about half for boxed specs).
    """
    verts = vertices(spec)
    out = []
    have = 0
    block = 0
    drawn = 0
    while have < count:
        if drawn >= max_draw:
            raise DomainError("acceptance rate too low for requested sample count")
        pts = _simplex_points(verts, 1 << 16, _block_rng(seed, block))
        keep = pts[membership_matrix(spec, pts)]
        out.append(keep)
        have += len(keep)
        drawn += 1 << 16
        block += 1
    return np.concatenate(out)[:count]
