"""High-precision evaluation of the analytic constants behind the totient
counting asymptotics.

The generating series is F(x) = sum a_n x^n with
a_n = (n+1)log(n+1) - n log n - 1 (the increments of Stirling's log-factorial
approximation, so a_n ~ log n).  Everything else derives from its unique
root rho of F(rho) = 1: the quadratic coefficient C = 1/(2|log rho|), the
linear coefficient D, the convolution sequence g_i, and the growth constant
lambda = 1/(rho F'(rho)).

All iterated logarithms are natural logs applied repeatedly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
from mpmath import mp, mpf

from .errors import DomainError

DEFAULT_PRECISION = 50
MAX_PRECISION = 200


def series_coefficient(n: int) -> mpf:
    """a_n = (n+1)log(n+1) - n log n - 1; positive and ~ log n."""
    n = mpf(n)
    return (n + 1) * mpmath.log(n + 1) - n * mpmath.log(n) - 1


def stirling_series(x, precision: int = DEFAULT_PRECISION):
    """(F(x), F'(x)) with the truncation error certified below 10^-(precision+2).

    Uses a_n <= log(n+1) and log(n+1) <= log(N+2) + (n-N-1)/(N+2) for n > N
    to bound the tails of both series in closed form, doubling N until the
    bounds are small enough.
    """
    if not 0 <= x < 1:
        raise DomainError(f"series converges only on [0, 1), got {x}")
    eps = mpf(10) ** (-(precision + 2))
    with mp.workdps(precision + 15):
        x = mpf(x)
        if x == 0:
            return mpf(0), series_coefficient(1)
        n_terms = 32
        while True:
            n = mpf(n_terms)
            log_edge = mpmath.log(n + 2)
            one_minus = 1 - x
            tail_f = x ** (n + 1) * (log_edge / one_minus + x / ((n + 2) * one_minus**2))
            geo1 = x**n * ((n + 1) * one_minus + x) / one_minus**2
            geo2 = x**n * (x * (1 + x) / one_minus**3 + (n + 1) * x / one_minus**2)
            tail_fp = log_edge * geo1 + geo2 / (n + 2)
            if tail_f < eps and tail_fp < eps:
                break
            n_terms *= 2
        value = mpf(0)
        deriv = mpf(0)
        xn = mpf(1)  # x^(n-1)
        for n in range(1, n_terms + 1):
            a = series_coefficient(n)
            deriv += n * a * xn
            xn *= x
            value += a * xn
        return value, deriv


@lru_cache(maxsize=16)
def _rho_cached(precision: int) -> tuple[mpf, mpf]:
    """(rho, F'(rho)) where F(rho) = 1, by bisection then Newton."""
    with mp.workdps(precision + 15):
        lo, hi = mpf("0.5"), mpf("0.6")
        for _ in range(20):
            mid = (lo + hi) / 2
            if stirling_series(mid, precision)[0] < 1:
                lo = mid
            else:
                hi = mid
        r = (lo + hi) / 2
        target = mpf(10) ** (-(precision + 5))
        for _ in range(60):
            val, der = stirling_series(r, precision + 10)
            step = (val - 1) / der
            r -= step
            if abs(step) < target:
                break
        return +r, +stirling_series(r, precision + 10)[1]


def compute_rho(precision: int = DEFAULT_PRECISION) -> mpf:
    """The root of F(rho) = 1, 0.542598586098471021959..."""
    if precision > MAX_PRECISION:
        raise DomainError(f"precision capped at {MAX_PRECISION}")
    return _rho_cached(precision)[0]


def q_rate(lam: float) -> float:
    """The large-deviation rate Q(lam) = lam*log(lam) - lam + 1 (lam > 0)."""
    if lam <= 0:
        raise DomainError("q_rate needs a positive argument")
    return lam * math.log(lam) - lam + 1


@dataclass(frozen=True)
class ConstantsBundle:
    """High-precision constants plus the convolution sequences g, g*, lambda_i.

    g_0 = 1 and g_i = sum_{j<=i} a_j g_{i-j}; g_i* = g_i + (1-a_1) g_{i-1};
    lambda_i = rho^i g_i -> lambda = 1/(rho F'(rho)).  K is the constant
    lambda/(1-lambda) + log(1-lambda) = 0.0873... used in tail estimates.
    """

    precision: int
    rho: mpf
    f_prime_rho: mpf
    c: mpf
    d: mpf
    lam: mpf
    k_const: mpf
    a: tuple[mpf, ...]
    g: tuple[mpf, ...]
    g_star: tuple[mpf, ...]
    lambda_i: tuple[mpf, ...]

    @property
    def n_terms(self) -> int:
        return len(self.g) - 1

    def as_decimal_dict(self) -> dict:
        """JSON-safe rendering with decimal strings at the bundle precision."""
        s = lambda v: mpmath.nstr(v, self.precision, strip_zeros=False)
        return {
            "precision": self.precision,
            "rho": s(self.rho),
            "f_prime_rho": s(self.f_prime_rho),
            "c": s(self.c),
            "d": s(self.d),
            "lambda": s(self.lam),
            "k_const": s(self.k_const),
            "n_terms": self.n_terms,
            "a": [s(v) for v in self.a],
            "g": [s(v) for v in self.g],
            "g_star": [s(v) for v in self.g_star],
            "lambda_i": [s(v) for v in self.lambda_i],
        }


def g_sequences(n_terms: int, precision: int = DEFAULT_PRECISION):
    """(g, g_star, lambda_i, lam): the convolution recurrence to index n_terms.

    g_i grows like lambda * rho^-i, so rho and the whole recurrence are
    carried at precision + n_terms*log10(1/rho) digits: that keeps the
    *absolute* error of g_i - lambda*rho^-i below 10^-precision even when
    g_i itself is astronomically large.
    """
    if n_terms > 10**4:
        raise DomainError("n_terms capped at 10^4")
    growth_digits = int(n_terms * 0.2656) + 20
    internal = precision + growth_digits
    rho, f_prime = _rho_cached(internal)
    with mp.workdps(internal):
        a = [mpf(0)] + [series_coefficient(j) for j in range(1, n_terms + 1)]
        g = [mpf(1)]
        for i in range(1, n_terms + 1):
            g.append(mpmath.fsum(a[j] * g[i - j] for j in range(1, i + 1)))
        g_star = [mpf(1)] + [g[i] + (1 - a[1]) * g[i - 1] for i in range(1, n_terms + 1)]
        lam = 1 / (rho * f_prime)
        lambda_i = [rho**i * g[i] for i in range(n_terms + 1)]
        return tuple(+v for v in g), tuple(+v for v in g_star), tuple(+v for v in lambda_i), +lam


@lru_cache(maxsize=8)
def compute_bundle(precision: int = DEFAULT_PRECISION, n_terms: int = 300) -> ConstantsBundle:
    """All constants and sequences at the requested precision."""
    if precision > MAX_PRECISION:
        raise DomainError(f"precision capped at {MAX_PRECISION}")
    with mp.workdps(precision + 15):
        rho, fp = _rho_cached(precision)
        c = 1 / (2 * abs(mpmath.log(rho)))
        d = 2 * c * (1 + mpmath.log(fp) - mpmath.log(2 * c)) - mpf(3) / 2
        g, g_star, lambda_i, lam = g_sequences(n_terms, precision)
        k_const = lam / (1 - lam) + mpmath.log(1 - lam)
        a = tuple(series_coefficient(j) for j in range(1, n_terms + 1))
        return ConstantsBundle(
            precision=precision,
            rho=+rho,
            f_prime_rho=+fp,
            c=+c,
            d=+d,
            lam=+lam,
            k_const=+k_const,
            a=a,
            g=g,
            g_star=g_star,
            lambda_i=lambda_i,
        )


def growth_deviations(bundle: ConstantsBundle) -> list[float]:
    """g_i - lambda * rho^-i for 1 <= i <= n_terms, as floats.

    Computed at enough digits that the absolute error is negligible even
    where g_i is huge; the values are small (bounded by 5), negative, and
    increasing toward 0.
    """
    n = bundle.n_terms
    internal = bundle.precision + int(n * 0.2656) + 20
    rho, f_prime = _rho_cached(internal)
    with mp.workdps(internal):
        lam = 1 / (rho * f_prime)
        return [float(bundle.g[i] - lam * rho ** (-i)) for i in range(1, n + 1)]


def asymptotic_scales(x, precision: int = DEFAULT_PRECISION):
    """(L0, Z(x), betas) at scale x.

    L0 = floor(2C(log_3 x - log_4 x)) is the critical dimension,
    Z(x) = exp{C(log_3 x - log_4 x)^2 + D log_3 x - (D + 1/2 - 2C) log_4 x}
    the value-count scale, and beta_i = rho^i (1 - i/L0) for 0 <= i < L0.
    x may be any mpmath-convertible value, including ones like mpf('1e1000000').
    """
    bundle = compute_bundle(precision)
    with mp.workdps(precision + 15):
        x = mpf(x)
        if x <= mpmath.exp(mpmath.e):
            raise DomainError("x too small: log_4 x is undefined")
        l2 = mpmath.log(mpmath.log(x))
        l3 = mpmath.log(l2)
        l4 = mpmath.log(l3)
        spread = l3 - l4
        l0 = int(mpmath.floor(2 * bundle.c * spread))
        if l0 <= 0:  # unreachable for real x (the spread is always >= 1)
            raise DomainError("critical dimension vanished")
        z = mpmath.exp(
            bundle.c * spread**2
            + bundle.d * l3
            - (bundle.d + mpf(1) / 2 - 2 * bundle.c) * l4
        )
        betas = tuple(+(bundle.rho**i * (1 - mpf(i) / l0)) for i in range(l0))
        return l0, +z, betas
