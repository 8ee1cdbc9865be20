"""Scalar special-function kernel.

Gamma-family helpers, Pochhammer symbols, associated Laguerre polynomials,
terminating Kummer functions and a generalized hypergeometric series summer.

Every ratio of gamma functions is formed in log space with the sign carried
separately, so that quantities such as ``(gamma)_n / n!`` stay finite well
past ``n = 170``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from scipy.special import zetac as _zetac

from .errors import DivergenceError, DomainError, NonConvergenceError, PoleError, RangeError

__all__ = [
    "EvalConfig",
    "PfqParams",
    "SeriesEstimate",
    "pochhammer",
    "log_pochhammer",
    "log_gamma",
    "gamma_ratio",
    "digamma",
    "laguerre",
    "kummer_terminating",
    "kummer_iter",
    "pfq",
    "two_f_zero_terminating",
]

_LOG_MAX = math.log(1.7976931348623157e308)
_EPS = 2.0**-52


@dataclass(frozen=True)
class EvalConfig:
    """Tolerances and truncation limits for series and quadrature evaluation."""

    rel_tol: float = 1e-12
    abs_tol: float = 1e-300
    max_terms: int = 10**6
    consecutive_small: int = 3

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise DomainError(f"rel_tol must be positive, got {self.rel_tol}")
        if not self.abs_tol > 0:
            raise DomainError(f"abs_tol must be positive, got {self.abs_tol}")
        if self.max_terms < 1:
            raise DomainError(f"max_terms must be >= 1, got {self.max_terms}")
        if self.consecutive_small < 1:
            raise DomainError(f"consecutive_small must be >= 1, got {self.consecutive_small}")

    def tolerance(self, scale: float) -> float:
        return self.rel_tol * abs(scale) + self.abs_tol


@dataclass(frozen=True)
class SeriesEstimate:
    """A numerical value together with how much to trust it."""

    value: float | complex
    error_estimate: float
    terms_used: int
    converged: bool


@dataclass(frozen=True)
class PfqParams:
    """Parameters ``(a_1..a_p; b_1..b_q; z)`` of a generalized hypergeometric series."""

    upper: tuple = field(default_factory=tuple)
    lower: tuple = field(default_factory=tuple)
    argument: float | complex = 0.0

    def __post_init__(self):
        object.__setattr__(self, "upper", tuple(float(a) for a in self.upper))
        object.__setattr__(self, "lower", tuple(float(b) for b in self.lower))

    def termination(self) -> int | None:
        """Index of the last non-zero term, or None if the series does not terminate."""
        stops = [int(-a) for a in self.upper if _is_nonpositive_int(a)]
        return min(stops) if stops else None

    def first_pole(self) -> int | None:
        """Smallest k for which a lower Pochhammer (b)_k vanishes, or None."""
        poles = [int(-b) + 1 for b in self.lower if _is_nonpositive_int(b)]
        return min(poles) if poles else None


def _is_nonpositive_int(a: float) -> bool:
    return a <= 0 and a == math.floor(a)


# --------------------------------------------------------------------------
# gamma family


# ln Gamma(1+e) = -g e + sum_{k>=2} (-1)^k zeta(k)/k e^k and
# ln Gamma(2+e) = (1-g) e + sum_{k>=2} (-1)^k (zeta(k)-1)/k e^k, g = Euler's constant
_LG_K = range(2, 64)
_LG_A1 = tuple((-1) ** k * (1.0 + _zetac(k)) / k for k in _LG_K)
_LG_A2 = tuple((-1) ** k * _zetac(k) / k for k in _LG_K)
# leading coefficients as unevaluated hi + lo pairs
_LG_C1 = (-0.5772156649015329, 4.942915152430645e-18)
_LG_C2 = (0.42278433509846713, 4.942915152430645e-18)


def _split(a: float) -> tuple[float, float]:
    t = 134217729.0 * a
    hi = t - (t - a)
    return hi, a - hi


def _two_prod(a: float, b: float) -> tuple[float, float]:
    """p + e == a * b exactly (Dekker)."""
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _log_gamma_taylor(e: float, lead: tuple[float, float], coeffs: tuple) -> float:
    # the leading and quadratic parts cancel near the minimum of ln Gamma,
    # so they are formed with error-free products
    h = 0.0
    for c in reversed(coeffs):
        h = h * e + c
    p, pe = _two_prod(e, lead[0])
    q, qe = _two_prod(e, e)
    r, re = _two_prod(q, h)
    s = p + r
    bb = s - p
    se = (p - (s - bb)) + (r - bb)
    return s + (se + pe + re + qe * h + e * lead[1])


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0.

    Taylor series about 1 and 2 on [0.5, 2.5] (with the cancelling leading
    terms in compensated arithmetic), downward recurrence into that interval
    up to x = 12, and the C library ``lgamma`` beyond. About 1.6 ulp worst
    case on [0.5, 10^6], including next to the zeros at 1 and 2 where
    ``lgamma`` alone loses most of its relative accuracy.
    """
    if not x > 0:
        raise DomainError(f"log_gamma requires x > 0, got {x}")
    if x > 12.0:
        return math.lgamma(x)
    if x < 0.5:
        return _log_gamma_taylor(x, _LG_C1, _LG_A1) - math.log(x)
    if x < 1.4:
        return _log_gamma_taylor(x - 1.0, _LG_C1, _LG_A1)
    if x <= 2.5:
        return _log_gamma_taylor(x - 2.0, _LG_C2, _LG_A2)
    k = math.floor(x - 1.5)
    z = x - k
    return math.fsum([math.log(x - j) for j in range(1, k + 1)]
                     + [_log_gamma_taylor(z - 2.0, _LG_C2, _LG_A2)])


def _log_abs_gamma(x: float) -> tuple[float, int]:
    """(ln|Gamma(x)|, sign Gamma(x)) for any real x that is not a pole."""
    if _is_nonpositive_int(x):
        raise PoleError(f"Gamma has a pole at {x}")
    if x > 0:
        return log_gamma(x), 1
    # for x in (-k, -k+1) the sign is (-1)^k
    return math.lgamma(x), (-1 if math.ceil(-x) % 2 else 1)


def log_pochhammer(a: float, n: int) -> tuple[float, int]:
    """Return ``(ln|(a)_n|, sign)``; sign is 0 when ``(a)_n`` vanishes."""
    if n < 0:
        raise DomainError(f"pochhammer requires n >= 0, got {n}")
    if n == 0:
        return 0.0, 1
    if _is_nonpositive_int(a):
        if n > -a:
            return -math.inf, 0
        # (a)_n = (-1)^n (|a|)!/(|a|-n)!, all factors non-zero
        m = int(-a)
        return math.lgamma(m + 1) - math.lgamma(m - n + 1), (-1) ** n
    if _is_nonpositive_int(a + n):
        # Gamma(a+n) has a pole but a is not one: a is a non-integer, impossible
        raise PoleError(f"(a)_n undefined for a={a}, n={n}")
    la, sa = _log_abs_gamma(a + n)
    lb, sb = _log_abs_gamma(a)
    return la - lb, sa * sb


def pochhammer(a: float, n: int) -> float:
    """Rising factorial (a)_n = a(a+1)...(a+n-1), with (a)_0 = 1.

    Small cases are a plain product; when the product leaves the double range
    it is recomputed from log-gamma values with the sign tracked separately.

    Raises
    ------
    RangeError
        If |(a)_n| exceeds the largest double even in log space.
    """
    if n < 0:
        raise DomainError(f"pochhammer requires n >= 0, got {n}")
    if n <= 170:
        p = 1.0
        for k in range(n):
            p *= a + k
        if math.isfinite(p) and (p != 0.0 or _is_nonpositive_int(a) and n > -a):
            return p
    logv, sign = log_pochhammer(a, n)
    if sign == 0:
        return 0.0
    if logv > _LOG_MAX:
        raise RangeError(f"(a)_n overflows for a={a}, n={n} (log={logv:.6g})")
    return sign * math.exp(logv)


def gamma_ratio(a: float, b: float) -> float:
    """Gamma(a) / Gamma(b) formed in log space."""
    la, sa = _log_abs_gamma(a)
    lb, sb = _log_abs_gamma(b)
    d = la - lb
    if d > _LOG_MAX:
        raise RangeError(f"Gamma({a})/Gamma({b}) overflows")
    return sa * sb * math.exp(d)


# Bernoulli-number coefficients B_{2k}/(2k) of the digamma asymptotic series
_DIGAMMA_ASYM = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
)
_DIGAMMA_SHIFT = 8.0


def digamma(x: float) -> float:
    """psi(x) = d/dx ln Gamma(x) for x > 0.

    Upward recurrence psi(x) = psi(x+1) - 1/x until x >= 8, then the
    asymptotic expansion ln x - 1/(2x) - sum B_2k / (2k x^2k) through x^-14.
    """
    if not x > 0:
        raise DomainError(f"digamma requires x > 0, got {x}")
    shift = []
    while x < _DIGAMMA_SHIFT:
        shift.append(1.0 / x)
        x += 1.0
    inv2 = 1.0 / (x * x)
    series = 0.0
    for c in reversed(_DIGAMMA_ASYM):
        series = series * inv2 + c
    series *= inv2
    return (math.log(x) - 0.5 / x - series) - math.fsum(shift)


# --------------------------------------------------------------------------
# Laguerre / Kummer


def laguerre(n: int, a: float, y: float) -> float:
    """Associated Laguerre polynomial L_n^(a)(y) by forward three-term recurrence."""
    if n < 0:
        raise DomainError(f"laguerre requires n >= 0, got {n}")
    if n == 0:
        return 1.0
    prev, cur = 1.0, 1.0 + a - y
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + a - y) * cur - (k + a) * prev) / (k + 1)
    return cur


def _check_kummer_gamma(n: int, gamma: float) -> None:
    if _is_nonpositive_int(gamma) and -gamma <= n - 1:
        raise PoleError(f"(gamma)_k vanishes for some k <= {n} at gamma={gamma}")


def kummer_iter(gamma: float, y: float) -> Iterator[float]:
    """Yield 1F1(-n; gamma; y) for n = 0, 1, 2, ...

    This is the Laguerre recurrence rescaled by n!/(gamma)_n,
    (gamma+n) F_{n+1} = (2n + gamma - y) F_n - n F_{n-1},
    so no factorial ratio is ever formed.
    """
    prev = 1.0
    yield prev
    if gamma == 0.0:
        raise PoleError("1F1(-n; 0; y) is undefined for n >= 1")
    cur = 1.0 - y / gamma
    n = 1
    while True:
        yield cur
        den = gamma + n
        if den == 0.0:
            raise PoleError(f"1F1(-n; {gamma}; y) is undefined for n > {n}")
        prev, cur = cur, ((2 * n + gamma - y) * cur - n * prev) / den
        n += 1


def kummer_terminating(n: int, gamma: float, y: float) -> float:
    """Terminating confluent hypergeometric function 1F1(-n; gamma; y).

    Equal to n!/(gamma)_n L_n^(gamma-1)(y). Evaluated through the (rescaled)
    Laguerre recurrence rather than the alternating defining sum, which loses
    all significance once y is large.
    """
    if n < 0:
        raise DomainError(f"kummer_terminating requires n >= 0, got {n}")
    _check_kummer_gamma(n, gamma)
    if y == 0:
        return 1.0
    for k, value in enumerate(kummer_iter(gamma, y)):
        if k == n:
            return value
    raise AssertionError("unreachable")


# --------------------------------------------------------------------------
# generalized hypergeometric series


def pfq(params: PfqParams, config: EvalConfig = EvalConfig()) -> SeriesEstimate:
    """Sum pFq(upper; lower; z) term by term.

    Terminating series (some upper parameter a non-positive integer -n) are
    summed exactly through k = n. Otherwise the sum runs until
    ``config.consecutive_small`` successive terms are below
    ``rel_tol*|S| + abs_tol`` and the estimated tail is below the same bound.
    ``z`` may be complex; parameters are real.

    Raises
    ------
    PoleError
        A lower parameter is a non-positive integer reached before termination.
    DivergenceError
        Non-terminating with |z| > 1, or |z| = 1 outside the z = 1 convergent case.
    NonConvergenceError
        ``max_terms`` exhausted; the partial result rides on the exception.
    """
    upper, lower, z = params.upper, params.lower, params.argument
    stop = params.termination()
    pole = params.first_pole()
    if pole is not None and (stop is None or stop >= pole):
        raise PoleError(f"lower parameter pole at term {pole} in pFq{params}")

    if stop is not None:
        term = 1.0
        total = 1.0
        mag = 1.0
        for k in range(stop):
            r = z / (k + 1)
            for a in upper:
                r *= a + k
            for b in lower:
                r /= b + k
            term *= r
            total += term
            mag += abs(term)
        err = 4 * _EPS * mag * max(stop, 1) ** 0.5
        return SeriesEstimate(total, err, stop + 1, err <= config.tolerance(total))

    az = abs(z)
    excess = sum(lower) - sum(upper)
    if az > 1:
        raise DivergenceError(f"non-terminating pFq diverges for |z|={az} > 1")
    if az == 1:
        if z != 1:
            raise DivergenceError("pFq on |z| = 1 with z != 1 is not supported")
        if len(upper) == len(lower) + 1 and not excess > 0:
            raise DivergenceError(f"pFq at z = 1 needs sum(lower) - sum(upper) > 0, got {excess}")

    term = 1.0
    total = 1.0
    small = 0
    ratio = 0.0
    k = 0
    while k < config.max_terms:
        r = z / (k + 1)
        for a in upper:
            r *= a + k
        for b in lower:
            r /= b + k
        term *= r
        total += term
        k += 1
        ratio = abs(r)
        tol = config.tolerance(total)
        if abs(term) <= tol:
            small += 1
        else:
            small = 0
        if small >= config.consecutive_small:
            tail = _tail_estimate(abs(term), ratio, k, az, excess)
            if tail <= tol or term == 0:
                return SeriesEstimate(total, tail, k + 1, True)
    tail = _tail_estimate(abs(term), ratio, k, az, excess)
    est = SeriesEstimate(total, tail, k + 1, False)
    raise NonConvergenceError(f"pFq{params} did not converge in {config.max_terms} terms", est)


def _tail_estimate(last: float, ratio: float, k: int, az: float, excess: float) -> float:
    if az == 1:
        # terms decay like k^(-1-excess); the remaining tail is ~ last * k / excess
        return last * k / excess if excess > 0 else math.inf
    if ratio < 1:
        return last * ratio / (1 - ratio)
    return last * k


def two_f_zero_terminating(k: int, a: float, z: float) -> float:
    """Polynomial 2F0(-k, a; -; z) = sum_{l<=k} (-k)_l (a)_l z^l / l!."""
    if k < 0:
        raise DomainError(f"two_f_zero_terminating requires k >= 0, got {k}")
    term = 1.0
    total = 1.0
    for l in range(k):
        term *= (l - k) * (a + l) * z / (l + 1)
        total += term
    return total


def pfq_value(upper: Sequence[float], lower: Sequence[float], z, config: EvalConfig = EvalConfig()):
    """Shorthand for ``pfq(PfqParams(upper, lower, z), config).value``."""
    return pfq(PfqParams(tuple(upper), tuple(lower), z), config).value
