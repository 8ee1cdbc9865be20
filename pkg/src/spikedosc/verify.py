"""Named identity suite: every invariant of the library as an executable check.

Each identity produces (value, reference[, scale]) pairs over a seeded grid
and is judged on either the absolute or the relative deviation.
"""

from __future__ import annotations

import json
import math
import os
import zlib
from dataclasses import asdict, dataclass
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from . import hyperfun as hf
from . import oscillator as osc
from . import sums
from .errors import DomainError, NonConvergenceError, SpikedOscError
from .hyperfun import EvalConfig, pfq_value

__all__ = [
    "DEFAULT_SEED",
    "VerificationReport",
    "Identity",
    "IDENTITIES",
    "resolve_seed",
    "run_identity",
    "run_suite",
]

DEFAULT_SEED = 20240917
SEED_ENV = "SPIKEDOSC_SEED"

Pair = tuple  # (value, reference) or (value, reference, scale)


@dataclass(frozen=True)
class VerificationReport:
    identity_name: str
    grid_points: int
    max_abs_dev: float
    max_rel_dev: float
    tolerance: float
    passed: bool
    mode: str
    seed: int
    module: str
    error: str | None = None

    def to_json(self) -> str:
        d = asdict(self)
        if d["error"] is None:
            del d["error"]
        return json.dumps(d, sort_keys=False)


@dataclass(frozen=True)
class Context:
    rng: np.random.Generator
    max_terms: int


@dataclass(frozen=True)
class Identity:
    name: str
    module: str
    mode: str  # "abs" or "rel"
    tolerance: float
    description: str
    run: Callable[[Context], list]


IDENTITIES: dict[str, Identity] = {}


def identity(name: str, module: str, mode: str, tolerance: float):
    def register(fn):
        IDENTITIES[name] = Identity(name, module, mode, tolerance, (fn.__doc__ or "").strip(), fn)
        return fn
    return register


def resolve_seed(seed: int | None = None) -> int:
    if seed is not None:
        return int(seed)
    env = os.environ.get(SEED_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise DomainError(f"{SEED_ENV} must be an integer, got {env!r}") from None
    return DEFAULT_SEED


def _deviations(pairs: Sequence[Pair]) -> tuple[float, float]:
    max_abs = max_rel = 0.0
    for p in pairs:
        value, ref = float(p[0]), float(p[1])
        scale = abs(p[2]) if len(p) > 2 else abs(ref)
        d = abs(value - ref)
        if not math.isfinite(d):
            return math.inf, math.inf
        rel = d / scale if scale > 0 else d
        max_abs, max_rel = max(max_abs, d), max(max_rel, rel)
    return max_abs, max_rel


def run_identity(ident: Identity, seed: int, tolerance: float | None = None,
                 max_terms: int | None = None) -> VerificationReport:
    tol = ident.tolerance if tolerance is None else tolerance
    # per-identity stream so results do not depend on which others run
    rng = np.random.default_rng([seed, zlib.crc32(ident.name.encode())])
    ctx = Context(rng, EvalConfig().max_terms if max_terms is None else max_terms)
    try:
        pairs = ident.run(ctx)
    except (SpikedOscError, ArithmeticError, ValueError) as exc:
        return VerificationReport(ident.name, 0, math.inf, math.inf, tol, False, ident.mode,
                                  seed, ident.module, f"{type(exc).__name__}: {exc}")
    max_abs, max_rel = _deviations(pairs)
    dev = max_rel if ident.mode == "rel" else max_abs
    return VerificationReport(ident.name, len(pairs), float(max_abs), float(max_rel), tol, bool(dev <= tol),
                              ident.mode, seed, ident.module)


def run_suite(only: Iterable[str] | None = None, seed: int | None = None,
              tolerances: Mapping[str, float] | None = None,
              max_terms: int | None = None) -> list[VerificationReport]:
    """Run the named identities (all by default) in registry order."""
    tolerances = dict(tolerances or {})
    names = list(IDENTITIES) if only is None else list(only)
    unknown = [n for n in list(names) + list(tolerances) if n not in IDENTITIES]
    if unknown:
        raise DomainError(f"unknown identity name(s): {', '.join(sorted(set(unknown)))}")
    s = resolve_seed(seed)
    return [run_identity(IDENTITIES[n], s, tolerances.get(n), max_terms) for n in names]


def _partial_value(q: sums.SumQuery, max_terms: int) -> float:
    # an unsettled estimate is still a usable number; the identity judges it
    try:
        return sums.partial_sum(q, EvalConfig(max_terms=max_terms)).value
    except NonConvergenceError as exc:
        if exc.estimate is None:
            raise
        return exc.estimate.value


# --------------------------------------------------------------------------
# hyperfun


@identity("pochhammer-recurrence", "hyperfun", "rel", 1e-14)
def _pochhammer_recurrence(ctx: Context) -> list:
    """(a)_{n+1} = a (a+1)_n for n <= 30 on a random grid."""
    out = []
    for a in ctx.rng.uniform(-10, 10, 40):
        for n in range(31):
            out.append((hf.pochhammer(a, n + 1), a * hf.pochhammer(a + 1, n)))
    return out


@identity("laguerre-kummer-bridge", "hyperfun", "rel", 1e-10)
def _laguerre_kummer_bridge(ctx: Context) -> list:
    """1F1(-n; gamma; y) (gamma)_n / n! = L_n^(gamma-1)(y) for n <= 25, y in [0.01, 25]."""
    out = []
    for g in (1.5, 2.5, 4.0):
        for y in np.exp(ctx.rng.uniform(math.log(0.01), math.log(25.0), 40)):
            for n in range(26):
                lhs = hf.kummer_terminating(n, g, y) * hf.pochhammer(g, n) / math.factorial(n)
                out.append((lhs, hf.laguerre(n, g - 1, y)))
    return out


@identity("f21-log", "hyperfun", "rel", 1e-12)
def _f21_log(ctx: Context) -> list:
    """2F1(1, 1; 2; z) = -ln(1 - z)/z on (-1, 1)."""
    zs = ctx.rng.uniform(-0.99, 0.99, 200)
    zs = zs[np.abs(zs) > 1e-6]
    cfg = EvalConfig(rel_tol=1e-15)
    return [(pfq_value((1.0, 1.0), (2.0,), z, cfg), -math.log1p(-z) / z) for z in zs]


@identity("pfaff-transform", "hyperfun", "rel", 1e-10)
def _pfaff(ctx: Context) -> list:
    """2F1(a, b; c; z) = (1-z)^-a 2F1(a, c-b; c; z/(z-1)) with both sides convergent."""
    out = []
    for _ in range(200):
        a, b = ctx.rng.uniform(-3, 3, 2)
        c = ctx.rng.uniform(0.5, 4)
        z = ctx.rng.uniform(-0.5, 0.4)
        lhs = pfq_value((a, b), (c,), z)
        rhs = (1 - z) ** (-a) * pfq_value((a, c - b), (c,), z / (z - 1))
        out.append((lhs, rhs))
    return out


def _away_from_one(rng: np.random.Generator, lo: float, hi: float) -> float:
    while True:
        v = rng.uniform(lo, hi)
        if abs(v - 1) > 0.2:
            return v


@identity("luke-reduction", "hyperfun", "rel", 1e-10)
def _luke(ctx: Context) -> list:
    """z 3F2(a, b, 1; c, 2; z) = (c-1)/((a-1)(b-1)) [2F1(a-1, b-1; c-1; z) - 1] on |z| <= 0.8."""
    out = []
    for _ in range(200):
        a = _away_from_one(ctx.rng, -2.5, 3.5)
        b = _away_from_one(ctx.rng, -2.5, 3.5)
        c = ctx.rng.uniform(1.2, 5)
        z = ctx.rng.uniform(-0.8, 0.8)
        lhs = z * pfq_value((a, b, 1.0), (c, 2.0), z)
        rhs = (c - 1) / ((a - 1) * (b - 1)) * (pfq_value((a - 1, b - 1), (c - 1,), z) - 1)
        out.append((lhs, rhs))
    return out


@identity("digamma-recurrence", "hyperfun", "abs", 1e-13)
def _digamma_recurrence(ctx: Context) -> list:
    """psi(x+1) - psi(x) = 1/x on [0.1, 50]."""
    return [(hf.digamma(x + 1) - hf.digamma(x), 1 / x) for x in ctx.rng.uniform(0.1, 50, 200)]


# --------------------------------------------------------------------------
# sums


def _closed_grid(ctx: Context, m: int, count: int) -> list:
    gs = ctx.rng.uniform(m + 2, m + 8, count)
    gs[gs == m + 2] = m + 8
    xs = np.exp(ctx.rng.uniform(math.log(0.2), math.log(10.0), count))
    return list(zip(gs, xs))


@identity("lemma4-vs-alpha8", "sums", "rel", 1e-11)
def _specialization(ctx: Context) -> list:
    """The general finite formula reduces to the hand-coded alpha = 4, 6, 8 sums at m = 0, 1, 2."""
    hand = {0: sums.closed_sum_alpha4, 1: sums.closed_sum_alpha6, 2: sums.closed_sum_alpha8}
    out = []
    for m, fn in hand.items():
        for g, x in _closed_grid(ctx, m, 70):
            v = sums.closed_sum_general(m, g, x)
            ref = fn(g, x)
            out.append((v, ref, max(abs(ref), 1.0)))
    return out


@identity("lemma4-dual-form", "sums", "rel", 1e-11)
def _dual_form(ctx: Context) -> list:
    """The 2F0 and Laguerre shapes of the general finite formula agree for m <= 6."""
    out = []
    for _ in range(200):
        m = int(ctx.rng.integers(0, 7))
        (g, x), = _closed_grid(ctx, m, 1)
        v = sums.closed_sum_general_laguerre(m, g, x)
        ref = sums.closed_sum_general(m, g, x)
        out.append((v, ref, max(abs(ref), 1.0)))
    return out


@identity("lemma1-partial", "sums", "abs", 1e-3)
def _lemma1_partial(ctx: Context) -> list:
    """Cesaro partial sums of the alpha = 2 series reproduce psi(gamma) - ln x^2."""
    out = []
    for g in (0.5, 1.5, 3.0):
        for x in (0.5, 1.0, 2.0):
            out.append((_partial_value(sums.SumQuery(2.0, g, x), ctx.max_terms),
                        sums.closed_sum_alpha2(g, x)))
    return out


_TRIANGLE = [(a, a / 2 + 1.5, x) for a in (2.0, 4.0, 6.0, 8.0) for x in (0.5, 1.0, 2.0)]


@identity("oracle-triangle-partial", "sums", "abs", 1e-3)
def _triangle_partial(ctx: Context) -> list:
    """Closed forms against Cesaro partial sums for even alpha, gamma = alpha/2 + 3/2."""
    return [(_partial_value(sums.SumQuery(a, g, x), ctx.max_terms), sums.closed_sum(a, g, x)[0])
            for a, g, x in _TRIANGLE]


@identity("oracle-triangle-contour", "sums", "abs", 1e-5)
def _triangle_contour(ctx: Context) -> list:
    """Closed forms against contour quadrature for even alpha, gamma = alpha/2 + 3/2."""
    return [(sums.contour_sum(sums.SumQuery(a, g, x)).value, sums.closed_sum(a, g, x)[0])
            for a, g, x in _TRIANGLE]


@identity("decomposition-split", "sums", "rel", 1e-13)
def _decomposition(ctx: Context) -> list:
    """(2)_n = (1+n)(1)_n and (3)_n = (n^2+3n+2)(1)_n/2 split the alpha = 4, 6 partial sums termwise."""
    out = []
    n = np.arange(1, 301, dtype=float)
    for _ in range(20):
        g = ctx.rng.uniform(0.5, 6)
        x = ctx.rng.uniform(0.2, 3)
        it = hf.kummer_iter(g, x * x)
        next(it)
        f = np.array([next(it) for _ in range(len(n))])
        for coeff, split in (
            (sums.target_coefficients(4.0)(n.astype(int)), [(1 / n), np.ones_like(n)]),
            (sums.target_coefficients(6.0)(n.astype(int)), [n / 2, 1.5 * np.ones_like(n), 1 / n]),
        ):
            whole = np.cumsum(coeff * f)
            parts = sum(np.cumsum(c * f) for c in split)
            scale = np.cumsum(np.abs(coeff * f))
            out.extend(zip(parts, whole, scale))
    return out


_WEAK_CASES = ((2.0, 0.5), (4.0, 1.5), (6.0, 2.5))


@identity("weak-validity", "sums", "abs", 1e-3)
def _weak_validity(ctx: Context) -> list:
    """Closed forms stay correct below the lemma hypothesis, down to the relaxed thresholds."""
    out = []
    for a, g in _WEAK_CASES:
        q0 = sums.SumQuery(a, g, 1.0)
        if q0.verdict.strict or not q0.verdict.weak:
            raise DomainError(f"({a}, {g}) is not a weak-only case")
        for x in (0.5, 1.0, 2.0):
            out.append((_partial_value(sums.SumQuery(a, g, x), ctx.max_terms),
                        sums.closed_sum(a, g, x)[0]))
    return out


@identity("divergence-sentinel", "sums", "abs", 0.0)
def _divergence(ctx: Context) -> list:
    """x <= 0 is rejected; at x = 1e-3 the closed form and the partial sums both exceed 10."""
    out = []
    for x in (0.0, -1.0):
        try:
            sums.SumQuery(2.0, 1.5, x)
            rejected = 0.0
        except DomainError:
            rejected = 1.0
        out.append((rejected, 1.0))
    for a in (2.0, 4.0, 6.0, 8.0):
        g = a / 2 + 1.5
        closed = sums.closed_sum(a, g, 1e-3)[0]
        partial = _partial_value(sums.SumQuery(a, g, 1e-3), ctx.max_terms)
        out.append((min(closed, 10.0), 10.0))
        out.append((min(partial, 10.0), 10.0))
    return out


@identity("buchholz-kummer-sum", "sums", "abs", 1e-3)
def _buchholz_kummer(ctx: Context) -> list:
    """sum 1F1(-n; gamma; x^2) = (gamma-1)/x^2 - 1 against direct summation."""
    out = []
    for g in (2.5, 3.5):
        for x in (1.0, 2.0):
            est = sums.kummer_partial_sum(lambda i: np.ones(len(i)), g, x,
                                          EvalConfig(max_terms=ctx.max_terms))
            out.append((est.value, sums.kummer_sum(g, x)))
            out.append((sums.buchholz_sum(-1.0, g, x), sums.kummer_sum(g, x)))
    return out


@identity("buchholz-moment-sum", "sums", "abs", 1e-3)
def _buchholz_moment(ctx: Context) -> list:
    """sum n 1F1(-n; gamma; x^2) = (gamma-1)(gamma-2)/x^4 - (gamma-1)/x^2 against direct summation."""
    out = []
    for g in (2.5, 3.5):
        for x in (1.0, 2.0):
            est = sums.kummer_partial_sum(lambda i: i.astype(float), g, x,
                                          EvalConfig(max_terms=ctx.max_terms))
            out.append((est.value, sums.kummer_moment_sum(g, x)))
    return out


@identity("toscano-bridge", "sums", "abs", 1e-9)
def _toscano_bridge(ctx: Context) -> list:
    """The Laguerre-weighted series times Gamma(gamma) equals the alpha = 2 series, sum by sum."""
    out = []
    for g in (0.5, 1.5, 2.5, 4.0):
        for y in (0.25, 1.0, 2.0, 4.0):
            x = math.sqrt(y)
            scale = math.gamma(g)
            lag = sums.toscano_partial_sum(g, y).value * scale
            kum = sums.partial_sum(sums.SumQuery(2.0, g, x)).value
            out.append((lag, kum))
            out.append((sums.toscano_sum(g, y) * scale, sums.closed_sum_alpha2(g, x)))
    return out


@identity("toscano-direct", "sums", "abs", 1e-3)
def _toscano_direct(ctx: Context) -> list:
    """Toscano's closed value against direct Laguerre summation."""
    out = []
    for g, y in ((2.5, 2.0), (1.5, 1.0), (3.0, 0.5)):
        out.append((sums.toscano_partial_sum(g, y, EvalConfig(max_terms=ctx.max_terms)).value,
                    sums.toscano_sum(g, y)))
    return out


@identity("reciprocal-gamma-contour", "sums", "abs", 1e-6)
def _reciprocal_gamma(ctx: Context) -> list:
    """Contour integrals of t^-gamma and t^-gamma ln t give 1/Gamma and psi/Gamma."""
    out = []
    for g in (2.0, 3.0, 4.0):
        inv = 1 / math.gamma(g)
        out.append((sums.reciprocal_gamma_contour(g), inv))
        out.append((sums.log_weighted_contour(g), hf.digamma(g) * inv))
    return out


@identity("lemma2-pfaff-limit", "sums", "rel", 1e-10)
def _lemma2(ctx: Context) -> list:
    """z 3F2(a, 1, 1; c, 2; z) equals its transformed form in z/(z-1)."""
    out = []
    for _ in range(100):
        a = _away_from_one(ctx.rng, -3, 4)
        c = _away_from_one(ctx.rng, 1.5, 5)
        z = ctx.rng.uniform(-0.9, 0.45)
        lhs = z * pfq_value((a, 1.0, 1.0), (c, 2.0), z)
        out.append((sums.pfaff_limit_rhs(a, c, z), lhs))
    return out


@identity("inner-series-transform", "sums", "rel", 1e-10)
def _inner_transform(ctx: Context) -> list:
    """The contour's inner series obeys its z -> z/(z-1) transformation for any alpha."""
    out = []
    for _ in range(100):
        alpha = ctx.rng.uniform(0.2, 9)
        z = ctx.rng.uniform(-0.9, 0.45)
        lhs = sums.inner_series(z, alpha).real
        rhs = alpha / 2 * sums.pfaff_limit_rhs(1 + alpha / 2, 2.0, z)
        out.append((lhs, rhs))
    return out


@identity("lemma3-contour", "sums", "rel", 1e-8)
def _lemma3(ctx: Context) -> list:
    """The terminating contour form reproduces the finite formula for alpha = 4 + 2m."""
    out = []
    for m in (0, 1, 2):
        for _ in range(3):
            g = ctx.rng.uniform(m + 2.2, m + 6)
            x = math.exp(ctx.rng.uniform(math.log(0.5), math.log(2.0)))
            ref = sums.closed_sum_general(m, g, x)
            out.append((sums.lemma3_contour(m, g, x), ref, max(abs(ref), 1.0)))
    return out


@identity("contour-vs-partial-odd", "sums", "abs", 1e-4)
def _contour_odd(ctx: Context) -> list:
    """For odd alpha (no closed form) contour quadrature and partial sums agree."""
    out = []
    for a, g in ((1.0, 1.5), (3.0, 2.5), (5.0, 4.0)):
        for x in (0.5, 1.0):
            q = sums.SumQuery(a, g, x)
            out.append((sums.contour_sum(q).value, _partial_value(q, ctx.max_terms)))
    return out


# --------------------------------------------------------------------------
# oscillator

_MODEL_GRID = [(a, g, b) for a in (1.0, 2.0, 3.0, 4.0) for g in (2.5, 3.5) for b in (1.0, 0.6)]


@identity("matrix-symmetry", "oscillator", "abs", 1e-10)
def _matrix_symmetry(ctx: Context) -> list:
    """<m|x^-alpha|n> = <n|x^-alpha|m> for m, n <= 6 although the 3F2 form is asymmetric."""
    out = []
    for a, g, b in _MODEL_GRID:
        model = osc.OscillatorModel.from_gamma(g, B=b, alpha=a)
        for m in range(7):
            for n in range(m + 1, 7):
                out.append((osc.matrix_element_x_alpha(m, n, model),
                            osc.matrix_element_x_alpha(n, m, model)))
    return out


@identity("matrix-quadrature", "oscillator", "rel", 1e-7)
def _matrix_quadrature(ctx: Context) -> list:
    """The 3F2 matrix elements match direct quadrature for m, n <= 4."""
    out = []
    for a, g, b in _MODEL_GRID:
        model = osc.OscillatorModel.from_gamma(g, B=b, alpha=a)
        for m in range(5):
            for n in range(5):
                ref = osc.matrix_element_quadrature_oracle(m, n, model)
                out.append((osc.matrix_element_x_alpha(m, n, model), ref, max(abs(ref), 1e-3)))
    return out


@identity("h0n-consistency", "oscillator", "rel", 1e-12)
def _h0n(ctx: Context) -> list:
    """H_0n = H(0, n) - E_n delta_0n for n >= 1."""
    out = []
    for _ in range(30):
        g = ctx.rng.uniform(1.5, 5)
        a = ctx.rng.uniform(0.2, 2 * g - 0.2)
        model = osc.OscillatorModel.from_gamma(g, B=ctx.rng.uniform(0.3, 3),
                                               lam=ctx.rng.uniform(0.1, 2), alpha=a)
        for n in range(1, 11):
            out.append((osc.h0n(n, model), osc.hamiltonian_element(0, n, model)))
    return out


@identity("basis-orthonormality", "oscillator", "abs", 1e-8)
def _orthonormality(ctx: Context) -> list:
    """<psi_m|psi_n> = delta_mn under quadrature for m, n <= 5."""
    out = []
    for g, b in ((1.5, 1.0), (2.5, 0.6), (3.7, 2.0)):
        model = osc.OscillatorModel.from_gamma(g, B=b)
        for m in range(6):
            for n in range(m, 6):
                out.append((osc.overlap_quadrature(m, n, model, 0.0), float(m == n)))
    return out


def _log_form(x: float, gamma: float) -> float:
    return (x ** (gamma - 0.5) * math.exp(-x * x / 2) * (math.log(x) - hf.digamma(gamma) / 2)
            / (math.sqrt(2.0) * (gamma - 1) * math.sqrt(math.gamma(gamma))))


@identity("first-order-chain", "oscillator", "abs", 1e-12)
def _first_order_chain(ctx: Context) -> list:
    """The assembled correction at A=0, B=1, alpha=2 equals its logarithmic form and the endpoint value at x=1."""
    model = osc.OscillatorModel(A=0.0, B=1.0, lam=1.0, alpha=2.0)
    out = [(osc.first_order_correction(model, x), _log_form(x, 1.5))
           for x in np.exp(ctx.rng.uniform(math.log(1e-4), math.log(5.0), 60))]
    endpoint = 2 * math.pi ** -0.25 * math.exp(-0.5) * (-0.5 * hf.digamma(1.5))
    out.append((osc.first_order_correction(model, 1.0), endpoint))
    return out


@identity("origin-limit", "oscillator", "abs", 0.0)
def _origin_limit(ctx: Context) -> list:
    """|psi_0^(1)| decreases monotonically towards the origin below x = 1e-2."""
    model = osc.OscillatorModel(A=0.0, B=1.0, lam=1.0, alpha=2.0)
    xs = np.sort(np.exp(ctx.rng.uniform(math.log(1e-12), math.log(1e-2), 200)))
    mags = [abs(osc.first_order_correction(model, x)) for x in xs]
    # each pair is (increase towards the origin, 0)
    return [(max(0.0, lo - hi), 0.0) for lo, hi in zip(mags, mags[1:])]
