"""Numerical evaluation of the scalar functions g_k, g_+- behind the K-group
flat sections of an even quadric Q_{2N}, and of their limits as z -> 0.

Both functions are Meijer G-functions.  We evaluate them two ways:

* residue series: term d is C * Coeff_{s^{2N}} [B(s) R_d(s) e^{(s-d) LX}],
  where B collects the Gamma factors regular at s = 0, R_d is the rational
  factor produced by shifting Gamma(s - d) back to Gamma(s), and LX is a
  branch of log(z^{2N}/4) plus a phase;
* Mellin-Barnes quadrature along a vertical line.

Differentiation (z d_z)^p acts on e^{(s-d) LX} as multiplication by
(2N(s - d))^p, which gives the derivative tower in closed form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath

from qqh import series
from qqh.charclasses import loggamma_coefficients
from qqh.cohring import QuadricSpace


class SeriesNotConverged(RuntimeError):
    pass


class PoleOnPath(ValueError):
    pass


class DivergentSequence(RuntimeError):
    pass


@dataclass(frozen=True)
class PrecisionConfig:
    bits: int = 256
    d_max: int = 4000
    quad_height: float | None = None  # None: chosen from the decay rate
    quad_pieces: int = 16
    extrapolation_depth: int = 5
    guard_bits: int = 64


@dataclass(frozen=True)
class Evaluation:
    value: object
    error: float
    terms: int
    bits: int

    def valid(self, tol: float) -> bool:
        return self.error < tol


# ---------------------------------------------------------------- log Gamma

@lru_cache(maxsize=None)
def loggamma_taylor(a: Fraction, order: int, precision: int = 256) -> tuple:
    """Taylor coefficients of log Gamma(a + s) at s = 0 for a in {1, 1/2}."""
    a = Fraction(a)
    if order > 64:
        raise ValueError("order above 64 is not supported")
    if a == 1:
        return loggamma_coefficients(order, precision)
    if a != Fraction(1, 2):
        raise ValueError(f"unsupported base point {a}")
    with mpmath.workprec(precision):
        out = [mpmath.log(mpmath.sqrt(mpmath.pi))]
        if order >= 1:
            out.append(-mpmath.euler - 2 * mpmath.log(2))
        # psi^{(m)}(1/2) = (-1)^{m+1} m! (2^{m+1} - 1) zeta(m+1)
        for j in range(2, order + 1):
            out.append((-1) ** j * (2 ** j - 1) * mpmath.zeta(j) / j)
    return tuple(out[: order + 1])


def _exp_series(logs: list, order: int) -> list:
    const = logs[0]
    tail = [mpmath.mpf(0)] + list(logs[1:order + 1])
    e = series.exp(tail, order)
    e[0] = mpmath.mpf(1)
    return [mpmath.exp(const) * c for c in e]


# ---------------------------------------------------------------- residue series

def _kernel(N: int, kind: str, bits: int) -> tuple:
    """(constant C, Taylor series of B(s), sign per step) for g_k or g_pm."""
    order = 2 * N
    L1 = loggamma_taylor(Fraction(1), order, bits)
    Lh = loggamma_taylor(Fraction(1, 2), order, bits)
    with mpmath.workprec(bits):
        if kind == "k":
            logs = [(2 * N + 1) * a - b for a, b in zip(L1, Lh)]
            C = 2 * mpmath.sqrt(mpmath.pi)
            sign = 1
        else:
            # Gamma(1/2 - s): flip odd coefficients
            logs = [(2 * N + 1) * a + (b if j % 2 == 0 else -b) for j, (a, b) in enumerate(zip(L1, Lh))]
            C = mpmath.mpf(2) ** N / mpmath.sqrt(mpmath.pi)
            sign = -1
        return C, _exp_series(logs, order), sign


def _log_x(N: int, kind: str, k: int, log_z):
    """Branch of log of the residue-series variable."""
    base = 2 * N * log_z - mpmath.log(4)
    if kind == "k":
        return base + 2j * k * mpmath.pi
    return base - 1j * mpmath.pi


def _working_bits(N: int, abs_z, cfg: PrecisionConfig) -> int:
    T = 2 * N * 4 ** (1 / (2 * N))
    loss = 2 * T / float(abs_z) * math.log2(math.e)
    return max(cfg.bits, int(loss) + cfg.guard_bits + 64)


def _residue_sum(N: int, kind: str, k: int, log_z, powers: tuple, cfg: PrecisionConfig,
                 bits: int) -> list[Evaluation]:
    order = 2 * N
    with mpmath.workprec(bits):
        log_z = mpmath.mpmathify(log_z)
        C, B, sign = _kernel(N, kind, bits)
        LX = _log_x(N, kind, k, log_z)
        BE = series.mul(B, [LX ** j / mpmath.factorial(j) for j in range(order + 1)], order)
        R = [mpmath.mpf(1)] + [mpmath.mpf(0)] * order
        sums = [mpmath.mpc(0)] * len(powers)
        absum = [mpmath.mpf(0)] * len(powers)
        last = [mpmath.inf] * len(powers)
        prev_mag = mpmath.inf
        tiny = mpmath.mpf(2) ** (-bits + 8)
        d = 0
        while True:
            if d:
                R = series.mul(R, [mpmath.mpf(1) / 2 - d, mpmath.mpf(1)], order)
                R = series.div(R, series.power([mpmath.mpf(-d), mpmath.mpf(1)], 2 * N + 1, order), order)
            base = C * (sign ** d) * mpmath.exp(-d * LX)
            RB = series.mul(R, BE, order)
            mag = mpmath.mpf(0)
            for idx, p in enumerate(powers):
                # Coeff_{s^{2N}} of RB * (2N (s - d))^p
                poly = series.power([mpmath.mpf(-2 * N * d), mpmath.mpf(2 * N)], p, order) if p else [1]
                coeff = sum(RB[order - j] * c for j, c in enumerate(poly) if j <= order)
                term = base * coeff
                sums[idx] += term
                absum[idx] += abs(term)
                last[idx] = abs(term)
                mag = max(mag, abs(term))
            scale = max(max(absum), mpmath.mpf(1) * tiny)
            if d > 2 and mag < prev_mag and mag < tiny * scale:
                break
            prev_mag = mag
            d += 1
            if d > cfg.d_max:
                raise SeriesNotConverged(f"residue series for g_{kind} not converged within {cfg.d_max} terms")
        out = []
        for idx in range(len(powers)):
            err = float(absum[idx] * mpmath.mpf(2) ** (-bits + 4) + last[idx])
            out.append(Evaluation(sums[idx], err, d + 1, bits))
        return out


def _check_precision(evals: list[Evaluation], bits: int, guard: int) -> bool:
    """Reject results whose cancellation ate into the guard bits."""
    for e in evals:
        if e.value == 0:
            continue
        if e.error and e.error > abs(e.value) * 2.0 ** (-guard):
            return False
    return True


def _evaluate(N: int, kind: str, k: int, z, log_z, powers: tuple, cfg: PrecisionConfig) -> list[Evaluation]:
    z = mpmath.mpmathify(z)
    if z == 0:
        raise ValueError("z must be non-zero")
    if log_z is None:
        log_z = mpmath.log(z)
    bits = _working_bits(N, abs(z), cfg)
    for _ in range(4):
        ev = _residue_sum(N, kind, k, log_z, powers, cfg, bits)
        if _check_precision(ev, bits, cfg.guard_bits):
            return ev
        bits *= 2
    raise SeriesNotConverged(f"cancellation not controlled at {bits // 2} bits; result rejected")


def g_k_eval(N: int, k: int, z, cfg: PrecisionConfig = PrecisionConfig(), log_z=None) -> Evaluation:
    """g_k(z) = int Gamma-hat Ch(O(k)) cup P(1/z) on Q_{2N}.

    ``log_z`` picks the branch on the universal cover; default is principal.
    """
    return _evaluate(N, "k", k, z, log_z, (0,), cfg)[0]


def g_pm_eval(N: int, z, cfg: PrecisionConfig = PrecisionConfig(), log_z=None) -> Evaluation:
    """g_+(z) = g_-(z) on Q_{2N} (the p-parts of S_+- pair to zero with P)."""
    return _evaluate(N, "pm", 0, z, log_z, (0,), cfg)[0]


def derivative_tower(N: int, which, z, p_max: int | None = None,
                     cfg: PrecisionConfig = PrecisionConfig(), log_z=None) -> list[Evaluation]:
    """[(z d_z)^p g(z) for p = 0..p_max]; ``which`` is an int k or the string 'pm'."""
    p_max = 2 * N if p_max is None else p_max
    if p_max > 2 * N:
        raise ValueError("tower order above 2N is not needed")
    kind, k = ("pm", 0) if which == "pm" else ("k", int(which))
    return _evaluate(N, kind, k, z, log_z, tuple(range(p_max + 1)), cfg)


# ---------------------------------------------------------------- Mellin-Barnes

@dataclass(frozen=True)
class MBIntegrand:
    """Gamma(-s)^{2N+1} / Gamma(1/2 - s) (kind 'k') or
    Gamma(-s)^{2N+1} Gamma(1/2 + s) (kind 'pm'), times e^{s LY}."""

    N: int
    kind: str
    k: int = 0

    def constant(self):
        if self.kind == "k":
            return 2 * mpmath.sqrt(mpmath.pi)
        return mpmath.mpf(2) ** self.N / mpmath.sqrt(mpmath.pi)

    def log_y(self, log_z):
        base = mpmath.log(4) - 2 * self.N * log_z
        if self.kind == "k":
            return base - 2j * self.k * mpmath.pi
        return base + 1j * mpmath.pi

    def __call__(self, s, LY):
        g = mpmath.gamma(-s) ** (2 * self.N + 1)
        if self.kind == "k":
            g = g * mpmath.rgamma(mpmath.mpf(1) / 2 - s)
        else:
            g = g * mpmath.gamma(mpmath.mpf(1) / 2 + s)
        return g * mpmath.exp(s * LY)

    def decay_rate(self, LY) -> float:
        """Exponential decay rate of |integrand| in |Im s|."""
        gam = (2 * self.N + 1) * math.pi / 2 + (-math.pi / 2 if self.kind == "k" else math.pi / 2)
        return gam - abs(float(mpmath.im(LY)))

    def check_path(self, c) -> None:
        c = Fraction(c).limit_denominator(10 ** 12) if not isinstance(c, Fraction) else c
        if c >= 0 and c.denominator == 1:
            raise PoleOnPath(f"line Re s = {c} passes through a pole of Gamma(-s)")
        if c >= 0:
            raise PoleOnPath("poles of Gamma(-s) must lie right of the path")
        if self.kind == "pm" and c <= Fraction(-1, 2):
            raise PoleOnPath("poles of Gamma(1/2 + s) must lie left of the path")


def mellin_barnes_quadrature(integrand: MBIntegrand, c, z, cfg: PrecisionConfig = PrecisionConfig(),
                             log_z=None) -> Evaluation:
    """C/(2 pi i) int_{c - i oo}^{c + i oo} integrand ds along Re s = c."""
    integrand.check_path(c)
    bits = cfg.bits
    with mpmath.workprec(bits):
        z = mpmath.mpmathify(z)
        log_z = mpmath.log(z) if log_z is None else mpmath.mpmathify(log_z)
        LY = integrand.log_y(log_z)
        rate = integrand.decay_rate(LY)
        if rate <= 0:
            raise SeriesNotConverged("integrand does not decay along a vertical line for this z")
        H = cfg.quad_height or (bits * math.log(2) + 40) / rate
        cm = mpmath.mpf(c)
        f = lambda y: integrand(cm + 1j * y, LY)
        nodes = [-H + 2 * H * j / cfg.quad_pieces for j in range(cfg.quad_pieces + 1)]
        val, qerr = mpmath.quad(f, nodes, error=True, maxdegree=10)
        tail = abs(f(H)) + abs(f(-H))
        val = integrand.constant() * val / (2 * mpmath.pi)
        err = float(integrand.constant() * (qerr + tail / rate) / (2 * mpmath.pi))
        return Evaluation(val, err, 0, bits)


def integrand_profile(integrand: MBIntegrand, c, z, heights) -> list:
    """|integrand| at c +- iH for each H, used to check Stirling decay."""
    log_z = mpmath.log(mpmath.mpmathify(z))
    LY = integrand.log_y(log_z)
    return [float(max(abs(integrand(c + 1j * H, LY)), abs(integrand(c - 1j * H, LY)))) for H in heights]


# ---------------------------------------------------------------- limits

@dataclass(frozen=True)
class RaySample:
    theta: float
    radii: tuple
    values: tuple

    def __post_init__(self):
        r = list(self.radii)
        if any(b >= a for a, b in zip(r, r[1:])):
            raise ValueError("radii must be strictly decreasing")
        if len(r) != len(self.values):
            raise ValueError("one value per radius")


@dataclass(frozen=True)
class LimitFit:
    limit: complex
    error: float

    def to_json(self) -> dict:
        return {"re": float(mpmath.re(self.limit)), "im": float(mpmath.im(self.limit)), "err": self.error}


def _neville_at_zero(xs, ys):
    if all(y == ys[0] for y in ys):
        return ys[0]  # exact, avoids rounding in the tableau
    P = list(ys)
    n = len(xs)
    for m in range(1, n):
        for i in range(n - m):
            P[i] = (xs[i + m] * P[i] - xs[i] * P[i + 1]) / (xs[i + m] - xs[i])
    return P[0]


def asymptotic_limit_fit(samples: RaySample, u=0, max_error: float | None = None) -> LimitFit:
    """Multiply by e^{u/z} and extrapolate polynomially in |z| to |z| = 0.

    The error estimate is the change when the largest radius is dropped.
    """
    if len(samples.radii) < 4:
        raise ValueError("need at least four samples")
    xs = [mpmath.mpf(r) for r in samples.radii]
    ys = []
    for r, v in zip(samples.radii, samples.values):
        z = mpmath.mpf(r) * mpmath.expj(samples.theta)
        ys.append(mpmath.mpmathify(v) * (mpmath.exp(u / z) if u else 1))
    full = _neville_at_zero(xs, ys)
    short = _neville_at_zero(xs[1:], ys[1:])
    err = float(abs(full - short))
    if max_error is not None and err > max_error:
        raise DivergentSequence(f"extrapolation unstable: estimate {err:.3g}")
    return LimitFit(full, err)


DEFAULT_RADII = (0.4, 0.3, 0.25, 0.2, 0.15, 0.1)


def T_value(N: int):
    return 2 * N * mpmath.power(4, mpmath.mpf(1) / (2 * N))


def _ray_values(N: int, which, theta, radii, cfg: PrecisionConfig) -> list:
    out = []
    for r in radii:
        r = mpmath.mpf(r)
        z = r * mpmath.expj(theta)
        log_z = mpmath.log(r) + 1j * mpmath.mpf(theta)
        out.append((z, derivative_tower(N, which, z, 2 * N, cfg, log_z)))
    return out


def normalized_g_samples(N: int, which, theta, radii=DEFAULT_RADII,
                         cfg: PrecisionConfig = PrecisionConfig()) -> RaySample:
    """g(z)/(2 pi z)^N along the ray arg z = theta."""
    vals = []
    for r in radii:
        r = mpmath.mpf(r)
        log_z = mpmath.log(r) + 1j * mpmath.mpf(theta)
        z = mpmath.exp(log_z)
        ev = g_pm_eval(N, z, cfg, log_z) if which == "pm" else g_k_eval(N, int(which), z, cfg, log_z)
        vals.append(ev.value / mpmath.exp(N * (mpmath.log(2 * mpmath.pi) + log_z)))
    return RaySample(float(theta), tuple(float(r) for r in radii), tuple(vals))


@dataclass
class FlatLimitReport:
    bundle: str
    theta: float
    target: list
    fitted: list
    errors: list
    tol: float
    samples: list = field(default_factory=list)

    @property
    def distances(self) -> list:
        return [float(abs(mpmath.mpmathify(a) - mpmath.mpmathify(b))) for a, b in zip(self.fitted, self.target)]

    @property
    def passes(self) -> bool:
        return all(d < self.tol for d in self.distances) and all(e < self.tol for e in self.errors)

    def failures(self) -> list:
        return [(i, d) for i, d in enumerate(self.distances) if d >= self.tol]

    def to_json(self) -> dict:
        c = lambda x: [float(mpmath.re(x)), float(mpmath.im(x))]
        return {"bundle": self.bundle, "ray_phase_over_pi": self.theta / math.pi,
                "samples": self.samples,
                "fitted": [c(x) for x in self.fitted], "target": [c(x) for x in self.target],
                "distances": self.distances, "pass": self.passes}


def flat_section_components(N: int, which, z, log_z, tower, prim) -> list:
    """Coordinates (h^0..h^{2N}, p) of Z^K(V)(z) from (z d_z)^p g."""
    n = 2 * N
    norm = mpmath.exp(N * (mpmath.log(2 * mpmath.pi) + log_z))
    g = tower[0].value
    amb = [mpmath.mpc(0)] * (n + 1)
    for p in range(n + 1):
        amb[n - p] += z ** p / 2 / norm * tower[p].value / mpmath.mpf(n) ** p
    amb[0] -= g / norm
    return amb + [mpmath.mpmathify(prim)]


def flat_section_limit_check(X: QuadricSpace, bundle: str, radii=DEFAULT_RADII,
                             cfg: PrecisionConfig = PrecisionConfig(), tol: float = 1e-3,
                             theta: float | None = None) -> FlatLimitReport:
    """Extrapolate e^{u/z} Z^K(V)(z) along the ray of the limit formula and
    compare with the normalized idempotent."""
    from qqh.quantum import idempotent_basis

    if not X.even:
        raise ValueError("flat-section limits are checked on even quadrics")
    N = X.N
    spectral = idempotent_basis(X)
    idx = spectral.labels.index(bundle)
    kind, val = spectral.kinds[idx]
    if kind == "pm":
        which, ray, u, prim = "pm", math.pi / (2 * N), 0, mpmath.mpf(val) / 2
    else:
        which, ray, prim = val, -val * math.pi / N, 0
        u = T_value(N) * mpmath.expj(-val * mpmath.pi / N)
    theta = ray if theta is None else float(theta)
    target = spectral.idempotent(idx, 30).coords(X)
    rows = []
    samples = []
    with mpmath.workprec(cfg.bits):
        for z, tower in _ray_values(N, which, theta, radii, cfg):
            log_z = mpmath.log(abs(z)) + 1j * mpmath.mpf(theta)
            comps = flat_section_components(N, which, z, log_z, tower, prim)
            rows.append(comps)
            samples.append({"abs_z": float(abs(z)),
                            "value_re": float(mpmath.re(comps[0])), "value_im": float(mpmath.im(comps[0])),
                            "err": max(t.error for t in tower)})
        fitted, errs = [], []
        for j in range(len(target)):
            fit = asymptotic_limit_fit(RaySample(theta, tuple(float(r) for r in radii),
                                                 tuple(row[j] for row in rows)), u)
            fitted.append(fit.limit)
            errs.append(fit.error)
    return FlatLimitReport(bundle, theta, target, fitted, errs, tol, samples)
