"""Generalized spiked harmonic oscillator H = -d^2/dx^2 + B x^2 + A/x^2 + lambda/x^alpha.

Basis functions and energies of the exactly solvable lambda = 0 part,
matrix elements of x^-alpha and of H in that basis, and the first-order
wavefunction correction assembled from the closed-form sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import integrate

from .errors import DomainError, PoleError
from .hyperfun import EvalConfig, PfqParams, kummer_terminating, log_gamma, log_pochhammer, pfq
from .sums import SumQuery, closed_sum, contour_sum

__all__ = [
    "OscillatorModel",
    "gamma_of",
    "energy",
    "basis_psi",
    "matrix_element_x_alpha",
    "hamiltonian_element",
    "h0n",
    "first_order_correction",
    "first_order_term",
    "overlap_quadrature",
    "matrix_element_quadrature_oracle",
]

POLE_MARGIN = 1e-8


def gamma_of(A: float) -> float:
    """gamma = 1 + sqrt(1 + 4A)/2."""
    if not A >= 0:
        raise DomainError(f"A must be non-negative, got {A}")
    return 1.0 + 0.5 * math.sqrt(1.0 + 4.0 * A)


@dataclass(frozen=True)
class OscillatorModel:
    A: float = 0.0
    B: float = 1.0
    lam: float = 1.0
    alpha: float = 2.0

    def __post_init__(self):
        if not self.A >= 0:
            raise DomainError(f"A must be non-negative, got {self.A}")
        if not self.B > 0:
            raise DomainError(f"B must be positive, got {self.B}")
        if not self.lam >= 0:
            raise DomainError(f"lambda must be non-negative, got {self.lam}")
        if not self.alpha > 0:
            raise DomainError(f"alpha must be positive, got {self.alpha}")
        g = self.gamma
        gap = g - self.alpha / 2
        if abs(gap - round(gap)) < POLE_MARGIN and round(gap) <= 0:
            raise PoleError(f"Gamma(gamma - alpha/2) has a pole: gamma - alpha/2 = {gap}")
        if not self.alpha < 2 * g:
            raise DomainError(f"need alpha < 2 gamma = {2 * g}, got alpha={self.alpha}")

    @property
    def gamma(self) -> float:
        return gamma_of(self.A)

    @classmethod
    def from_gamma(cls, gamma: float, B: float = 1.0, lam: float = 1.0, alpha: float = 2.0):
        """Model whose centrifugal coupling gives the requested gamma >= 3/2."""
        if not gamma >= 1.5:
            raise DomainError(f"gamma = 1 + sqrt(1+4A)/2 >= 3/2, got {gamma}")
        root = 2.0 * (gamma - 1.0)
        return cls(A=(root * root - 1.0) / 4.0, B=B, lam=lam, alpha=alpha)


def _check_index(n: int) -> None:
    if n < 0 or int(n) != n:
        raise DomainError(f"basis index must be a non-negative integer, got {n}")


def energy(n: int, model: OscillatorModel) -> float:
    """E_n = 2 sqrt(B) (2n + gamma)."""
    _check_index(n)
    return 2.0 * math.sqrt(model.B) * (2 * n + model.gamma)


def _log_norm(n: int, model: OscillatorModel) -> float:
    # ln sqrt(2 B^(gamma/2) Gamma(n+gamma) / (n! Gamma(gamma)^2))
    g = model.gamma
    return 0.5 * (math.log(2.0) + 0.5 * g * math.log(model.B) + log_gamma(n + g)
                  - log_gamma(n + 1) - 2.0 * log_gamma(g))


def basis_psi(n: int, model: OscillatorModel, x: float) -> float:
    """Unperturbed eigenfunction psi_n(x), sign convention (-1)^n."""
    _check_index(n)
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}")
    g = model.gamma
    sb = math.sqrt(model.B)
    log_mag = _log_norm(n, model) + (g - 0.5) * math.log(x) - 0.5 * sb * x * x
    return (-1) ** n * math.exp(log_mag) * kummer_terminating(n, g, sb * x * x)


def _hyp3f2_degenerate(m: int, n: int, gamma: float, s: int) -> float:
    """3F2(-m, gamma-s, 1-s; gamma, 1-n-s; 1) for integer s = alpha/2 >= 1.

    Both 1-s and 1-n-s are non-positive integers. Shifting alpha by a small
    epsilon moves them together, so each term is the limit in which the zero
    factors of numerator and denominator cancel in pairs.
    """
    total = 1.0
    prod = 1.0
    zeros = 0
    for k in range(m):
        prod *= (k - m) * (gamma - s + k) / ((gamma + k) * (k + 1))
        num, den = 1 - s + k, 1 - n - s + k
        if num == 0:
            zeros += 1
        else:
            prod *= num
        if den == 0:
            zeros -= 1
        else:
            prod /= den
        if zeros < 0:
            raise PoleError(f"3F2 lower parameter pole at term {k + 1} (m={m}, n={n}, alpha/2={s})")
        if zeros == 0:
            total += prod
    return total


def _x_alpha_hyp(m: int, n: int, model: OscillatorModel) -> float:
    g, a = model.gamma, model.alpha / 2
    if a == math.floor(a):
        return _hyp3f2_degenerate(m, n, g, int(a))
    params = PfqParams((-m, g - a, 1 - a), (g, 1 - n - a), 1.0)
    return pfq(params, EvalConfig()).value


def matrix_element_x_alpha(m: int, n: int, model: OscillatorModel) -> float:
    """<m| x^-alpha |n> from the terminating 3F2 closed form.

    (-1)^(n+m) B^(alpha/4) (alpha/2)_n/(gamma)_n Gamma(gamma-alpha/2)/Gamma(gamma)
    sqrt((gamma)_n (gamma)_m / (n! m!)) 3F2(-m, gamma-alpha/2, 1-alpha/2; gamma, 1-n-alpha/2; 1).
    The prefactor is formed in log space.
    """
    _check_index(m)
    _check_index(n)
    g, a = model.gamma, model.alpha / 2
    lp_an, s_an = log_pochhammer(a, n)
    lp_gn, _ = log_pochhammer(g, n)
    lp_gm, _ = log_pochhammer(g, m)
    log_pref = (lp_an - lp_gn + log_gamma(g - a) - log_gamma(g)
                + 0.5 * (lp_gn + lp_gm - log_gamma(n + 1) - log_gamma(m + 1))
                + 0.5 * a * math.log(model.B))
    sign = (-1) ** (n + m) * s_an
    return sign * math.exp(log_pref) * _x_alpha_hyp(m, n, model)


def hamiltonian_element(m: int, n: int, model: OscillatorModel) -> float:
    """H_mn = E_n delta_mn + lambda <m| x^-alpha |n>."""
    diag = energy(n, model) if m == n else 0.0
    if model.lam == 0:
        return diag
    return diag + model.lam * matrix_element_x_alpha(m, n, model)


def h0n(n: int, model: OscillatorModel) -> float:
    """H_0n = lambda (-1)^n B^(alpha/4) sqrt((gamma)_n/n!) Gamma(gamma-alpha/2)/Gamma(gamma) (alpha/2)_n/(gamma)_n."""
    _check_index(n)
    if n < 1:
        raise DomainError("h0n is defined for n >= 1")
    g, a = model.gamma, model.alpha / 2
    lp_gn, _ = log_pochhammer(g, n)
    lp_an, s_an = log_pochhammer(a, n)
    log_mag = (0.5 * a * math.log(model.B) + 0.5 * (lp_gn - log_gamma(n + 1))
               + log_gamma(g - a) - log_gamma(g) + lp_an - lp_gn)
    return model.lam * (-1) ** n * s_an * math.exp(log_mag)


def _series_factor(model: OscillatorModel, x: float, contour: bool) -> float:
    # the 1F1 argument is sqrt(B) x^2, i.e. the sums are taken at x_eff = B^(1/4) x
    x_eff = model.B ** 0.25 * x
    a = model.alpha
    even = a == math.floor(a) and int(a) % 2 == 0
    if even and not contour:
        return closed_sum(a, model.gamma, x_eff)[0]
    est = contour_sum(SumQuery(a, model.gamma, x_eff))
    return est.value


def first_order_correction(model: OscillatorModel, x: float, contour: bool = False) -> float:
    """First-order correction psi_0^(1)(x) to the ground state (per unit lambda).

    -B^(alpha/2 + gamma/4 - 1/2)/(2 sqrt 2) Gamma(gamma-alpha/2)/(Gamma(gamma) sqrt(Gamma(gamma)))
    x^(gamma-1/2) e^(-sqrt(B) x^2/2) S(alpha, gamma, B^(1/4) x).

    Even alpha uses the closed forms; ``contour=True`` (required for other
    alpha) evaluates S by contour quadrature. The B power is kept exactly as
    in the closed-form prefactor; it disagrees with the direct perturbation sum
    (see ``first_order_term``) unless B = 1.
    """
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}")
    g, a = model.gamma, model.alpha / 2
    log_pref = ((a + 0.25 * g - 0.5) * math.log(model.B) - math.log(2.0 * math.sqrt(2.0))
                + log_gamma(g - a) - 1.5 * log_gamma(g)
                + (g - 0.5) * math.log(x) - 0.5 * math.sqrt(model.B) * x * x)
    return -math.exp(log_pref) * _series_factor(model, x, contour)


def first_order_term(n: int, model: OscillatorModel, x: float) -> float:
    """n-th term H_0n/(E_0 - E_n) psi_n(x) of the Rayleigh-Schroedinger sum, per unit lambda."""
    unit = OscillatorModel(model.A, model.B, 1.0, model.alpha)
    return h0n(n, unit) / (energy(0, unit) - energy(n, unit)) * basis_psi(n, unit, x)


def overlap_quadrature(m: int, n: int, model: OscillatorModel, power: float) -> float:
    """Adaptive quadrature of integral_0^inf psi_m(x) x^-power psi_n(x) dx.

    Substituting s = sqrt(B) x^2 leaves s^(gamma-1-power/2) e^-s times two
    Kummer polynomials; the algebraic endpoint factor is handled by QUADPACK's
    'alg' weight on [0, S] and the rest by a semi-infinite rule.
    """
    _check_index(m)
    _check_index(n)
    g, a = model.gamma, power / 2
    expo = g - 1 - a
    if not expo > -1:
        raise DomainError("integrand is not integrable at the origin")

    def smooth(s):
        return math.exp(-s) * kummer_terminating(m, g, s) * kummer_terminating(n, g, s)

    log_pref = (_log_norm(m, model) + _log_norm(n, model) - math.log(2.0)
                - 0.5 * (g - a) * math.log(model.B))
    # absolute floor of ~1e-14 in the final, normalised units
    floor = 1e-14 * math.exp(-log_pref)
    split = 4.0 * (m + n) + 20.0
    head, _ = integrate.quad(smooth, 0.0, split, weight="alg", wvar=(expo, 0.0),
                             epsabs=floor, epsrel=1e-12, limit=400)
    tail, _ = integrate.quad(lambda s: s**expo * smooth(s), split, math.inf,
                             epsabs=floor, epsrel=1e-12, limit=400)
    return (-1) ** (m + n) * math.exp(log_pref) * (head + tail)


def matrix_element_quadrature_oracle(m: int, n: int, model: OscillatorModel) -> float:
    """<m| x^-alpha |n> by direct quadrature, independent of the 3F2 closed form."""
    return overlap_quadrature(m, n, model, model.alpha)
