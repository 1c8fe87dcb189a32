"""Levy process models: triplet (sigma2, nu, drift) with jump-measure families.

The jump measure nu is described by a family object exposing three radial
summaries used throughout the package, all with the truncation cutoff at 1:

* ``nu_bar(u)``       -- tail mass nu(R \\ (-u, u)),
* ``sigma_bar_sq(u)`` -- truncated second moment of x on (-u, u),
* ``varpi(u)``        -- first moment of x on (-1, 1) \\ (-u, u).

Families also expose ``log_nu_bar(ell)`` = log nu_bar(exp(-ell)), stable for
ell far beyond the underflow range of u itself; the improper-integral engine
works on that log scale.

Closed forms are used wherever the family admits them; the remaining
evaluations are proper (non-singular) one-dimensional quadratures.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import quad
from scipy.special import ndtr

from .errors import CapabilityError, DomainError, ModelValidationError

_QUAD_OPTS = {"epsabs": 1e-13, "epsrel": 1e-12, "limit": 200}


def _phi(z: float) -> float:
    return math.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi)


def _Phi(z: float) -> float:
    return float(ndtr(z))


class VariationClass(Enum):
    FINITE = "FiniteVariation"
    INFINITE = "InfiniteVariation"


# ---------------------------------------------------------------------------
# jump size distributions for the compound Poisson family
# ---------------------------------------------------------------------------


class JumpDist:
    """Jump-size law of a compound Poisson measure; truncated moments exact."""

    tag = ""

    def tail_prob(self, u: float) -> float:
        """P(|Y| >= u)."""
        raise NotImplementedError

    def trunc_second(self, u: float) -> float:
        """E[Y^2 1{|Y| < u}]."""
        raise NotImplementedError

    def trunc_first(self, a: float, b: float) -> float:
        """E[Y 1{a <= |Y| < b}]."""
        raise NotImplementedError

    def abs_moment_below_one(self, p: float) -> float:
        """E[|Y|^p 1{|Y| < 1}]."""
        raise NotImplementedError

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        raise NotImplementedError

    def params(self) -> dict:
        raise NotImplementedError


class NormalJumps(JumpDist):
    tag = "normal"

    def __init__(self, mu: float, sd: float):
        if not (sd > 0 and math.isfinite(sd) and math.isfinite(mu)):
            raise ModelValidationError("normal jumps need finite mu and sd > 0")
        self.mu = float(mu)
        self.sd = float(sd)

    def _moments_between(self, a: float, b: float) -> tuple[float, float, float]:
        # (P, E[Y 1], E[Y^2 1]) on {a < Y < b}, standard truncated-normal forms
        mu, sd = self.mu, self.sd
        al, be = (a - mu) / sd, (b - mu) / sd
        prob = _Phi(be) - _Phi(al)
        pa, pb = _phi(al), _phi(be)
        m1 = mu * prob + sd * (pa - pb)
        m2 = (mu * mu + sd * sd) * prob + sd * sd * (al * pa - be * pb) + 2 * mu * sd * (pa - pb)
        return prob, m1, m2

    def tail_prob(self, u: float) -> float:
        return 1.0 - self._moments_between(-u, u)[0]

    def trunc_second(self, u: float) -> float:
        return self._moments_between(-u, u)[2]

    def trunc_first(self, a: float, b: float) -> float:
        return self._moments_between(-b, b)[1] - self._moments_between(-a, a)[1]

    def abs_moment_below_one(self, p: float) -> float:
        val, _ = quad(lambda y: abs(y) ** p * _phi((y - self.mu) / self.sd) / self.sd,
                      -1.0, 1.0, **_QUAD_OPTS)
        return val

    def sample(self, rng, size):
        return rng.normal(self.mu, self.sd, size)

    def params(self):
        return {"dist": "normal", "mu": self.mu, "sd": self.sd}


class UniformJumps(JumpDist):
    tag = "uniform"

    def __init__(self, lo: float, hi: float):
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise ModelValidationError("uniform jumps need finite lo < hi")
        self.lo = float(lo)
        self.hi = float(hi)

    def _moment_between(self, a: float, b: float, k: int) -> float:
        a, b = max(a, self.lo), min(b, self.hi)
        if a >= b:
            return 0.0
        return (b ** (k + 1) - a ** (k + 1)) / ((k + 1) * (self.hi - self.lo))

    def tail_prob(self, u: float) -> float:
        return 1.0 - self._moment_between(-u, u, 0)

    def trunc_second(self, u: float) -> float:
        return self._moment_between(-u, u, 2)

    def trunc_first(self, a: float, b: float) -> float:
        return self._moment_between(-b, b, 1) - self._moment_between(-a, a, 1)

    def abs_moment_below_one(self, p: float) -> float:
        val, _ = quad(lambda y: abs(y) ** p / (self.hi - self.lo),
                      max(self.lo, -1.0), min(self.hi, 1.0), **_QUAD_OPTS)
        return max(val, 0.0)

    def sample(self, rng, size):
        return rng.uniform(self.lo, self.hi, size)

    def params(self):
        return {"dist": "uniform", "lo": self.lo, "hi": self.hi}


class FixedJumps(JumpDist):
    tag = "fixed"

    def __init__(self, value: float):
        if not (math.isfinite(value) and value != 0.0):
            raise ModelValidationError("fixed jumps need a finite nonzero value")
        self.value = float(value)

    def tail_prob(self, u: float) -> float:
        return 1.0 if abs(self.value) >= u else 0.0

    def trunc_second(self, u: float) -> float:
        return self.value ** 2 if abs(self.value) < u else 0.0

    def trunc_first(self, a: float, b: float) -> float:
        return self.value if a <= abs(self.value) < b else 0.0

    def abs_moment_below_one(self, p: float) -> float:
        return abs(self.value) ** p if abs(self.value) < 1 else 0.0

    def sample(self, rng, size):
        return np.full(size, self.value)

    def params(self):
        return {"dist": "fixed", "value": self.value}


def _jump_dist_from_dict(d: dict) -> JumpDist:
    kind = d.get("dist")
    if kind == "normal":
        return NormalJumps(d["mu"], d["sd"])
    if kind == "uniform":
        return UniformJumps(d["lo"], d["hi"])
    if kind == "fixed":
        return FixedJumps(d["value"])
    raise ModelValidationError(f"unknown jump distribution {kind!r}")


# ---------------------------------------------------------------------------
# measure families
# ---------------------------------------------------------------------------


class Measure:
    """Base class for jump-measure families.

    ``nu_bar``/``sigma_bar_sq``/``varpi`` accept any u > 0 (values for u > 1
    extend the tail naturally); the module-level wrappers enforce the
    documented (0, 1] domain of the public operations.
    """

    family = ""
    #: largest |x| carrying mass, used for integrand breakpoint hints
    support_radius: float = math.inf

    def nu_bar(self, u: float) -> float:
        raise NotImplementedError

    def sigma_bar_sq(self, u: float) -> float:
        raise NotImplementedError

    def varpi(self, u: float) -> float:
        raise NotImplementedError

    def log_nu_bar(self, ell: float) -> float:
        """log nu_bar(exp(-ell)); overridden where the plain form overflows."""
        v = self.nu_bar(math.exp(-ell)) if ell < 700 else math.inf
        return math.log(v) if v > 0 else -math.inf

    def sigma_bar_sq_of_log(self, ell: float) -> float:
        """sigma_bar_sq(exp(-ell)), stable for large ell."""
        return self.sigma_bar_sq(math.exp(-ell)) if ell < 700 else self.sigma_bar_sq_limit()

    def sigma_bar_sq_limit(self) -> float:
        """Limit of sigma_bar_sq(u) as u -> 0 (always 0 for true measures)."""
        return 0.0

    def total_mass(self) -> float:
        """nu(R); infinity for infinite-activity families."""
        raise NotImplementedError

    def bg_index(self) -> float:
        """Blumenthal-Getoor index inf{p > 0 : J_p < inf}."""
        raise NotImplementedError

    def jp_direct(self, p: float) -> tuple[str, float | None]:
        """Direct evaluation of J_p = int_{(-1,1)} |x|^p nu(dx).

        Returns ("finite", value) or ("infinite", None); this is the route
        independent of the tail-form integral.
        """
        raise NotImplementedError

    def params(self) -> dict:
        raise NotImplementedError

    def to_dict(self) -> dict:
        d = {"family": self.family}
        d.update(self.params())
        return d


class ZeroMeasure(Measure):
    """No jumps."""

    family = "Zero"
    support_radius = 0.0

    def nu_bar(self, u):
        return 0.0

    def sigma_bar_sq(self, u):
        return 0.0

    def varpi(self, u):
        return 0.0

    def total_mass(self):
        return 0.0

    def bg_index(self):
        return 0.0

    def jp_direct(self, p):
        return ("finite", 0.0)

    def params(self):
        return {}


class TruncatedStableMeasure(Measure):
    """Density (c_plus 1{x>0} + c_minus 1{x<0}) |x|^{-1-alpha} on |x| < 1."""

    family = "TruncatedStable"
    support_radius = 1.0

    def __init__(self, alpha: float, c_plus: float, c_minus: float):
        if not (0.0 < alpha < 2.0):
            raise ModelValidationError("TruncatedStable needs alpha in (0, 2)")
        if c_plus < 0 or c_minus < 0 or c_plus + c_minus == 0:
            raise ModelValidationError("TruncatedStable needs c_plus, c_minus >= 0, not both 0")
        self.alpha = float(alpha)
        self.c_plus = float(c_plus)
        self.c_minus = float(c_minus)

    @property
    def _c(self) -> float:
        return self.c_plus + self.c_minus

    def nu_bar(self, u):
        if u >= 1.0:
            return 0.0
        return self._c * (u ** -self.alpha - 1.0) / self.alpha

    def log_nu_bar(self, ell):
        if ell <= 0.0:
            return -math.inf
        # log( c/alpha * (e^{alpha ell} - 1) ), stable for large ell
        return math.log(self._c / self.alpha) + self.alpha * ell + math.log1p(-math.exp(-self.alpha * ell))

    def sigma_bar_sq(self, u):
        u = min(u, 1.0)
        return self._c * u ** (2.0 - self.alpha) / (2.0 - self.alpha)

    def varpi(self, u):
        if u >= 1.0:
            return 0.0
        d = self.c_plus - self.c_minus
        if d == 0.0:
            return 0.0
        if self.alpha == 1.0:
            return d * math.log(1.0 / u)
        return d * (1.0 - u ** (1.0 - self.alpha)) / (1.0 - self.alpha)

    def total_mass(self):
        return math.inf

    def bg_index(self):
        return self.alpha

    def jp_direct(self, p):
        if p > self.alpha:
            return ("finite", self._c / (p - self.alpha))
        return ("infinite", None)

    def params(self):
        return {"alpha": self.alpha, "c_plus": self.c_plus, "c_minus": self.c_minus}


class LogTemperedStableMeasure(Measure):
    """Density x^{-1-beta} (log 1/x)^{-kappa} on (0, e^{-1}), positive jumps.

    J_beta = 1/(kappa-1) for kappa > 1; kappa <= 1 is accepted but flagged
    (J_beta infinite), which exercises the critical-moment-infinite branch.
    """

    family = "LogTemperedStable"

    def __init__(self, beta: float, kappa: float):
        if not (1.0 < beta < 2.0):
            raise ModelValidationError("LogTemperedStable needs beta in (1, 2)")
        if not kappa > 0:
            raise ModelValidationError("LogTemperedStable needs kappa > 0")
        self.beta = float(beta)
        self.kappa = float(kappa)
        self.support_radius = math.exp(-1.0)
        #: kappa <= 1 makes J_beta infinite; accepted but flagged
        self.critical_moment_finite = kappa > 1.0

    def _tail_core(self, ell: float) -> float:
        # nu_bar(e^{-ell}) = e^{beta ell} * int_0^{ell-1} e^{-beta v} (ell-v)^{-kappa} dv
        if ell <= 1.0:
            return 0.0
        val, _ = quad(lambda v: math.exp(-self.beta * v) * (ell - v) ** -self.kappa,
                      0.0, ell - 1.0, **_QUAD_OPTS)
        return val

    def nu_bar(self, u):
        if u >= self.support_radius:
            return 0.0
        ell = -math.log(u)
        core = self._tail_core(ell)
        if self.beta * ell > 700:
            return math.inf
        return math.exp(self.beta * ell) * core

    def log_nu_bar(self, ell):
        if ell <= 1.0:
            return -math.inf
        core = self._tail_core(ell)
        return self.beta * ell + math.log(core)

    def sigma_bar_sq(self, u):
        ell = max(-math.log(min(u, self.support_radius)), 1.0)
        val, _ = quad(lambda w: math.exp(-(2.0 - self.beta) * w) * w ** -self.kappa,
                      ell, math.inf, **_QUAD_OPTS)
        return val

    def varpi(self, u):
        if u >= self.support_radius:
            return 0.0
        ell = -math.log(u)
        # int_1^ell e^{(beta-1) w} w^{-kappa} dw, factored to avoid overflow
        a = self.beta - 1.0
        core, _ = quad(lambda v: math.exp(-a * v) * (ell - v) ** -self.kappa,
                       0.0, ell - 1.0, **_QUAD_OPTS)
        if a * ell > 700:
            return math.inf
        return math.exp(a * ell) * core

    def total_mass(self):
        return math.inf

    def bg_index(self):
        return self.beta

    def jp_direct(self, p):
        if p > self.beta:
            val, _ = quad(lambda w: math.exp(-(p - self.beta) * w) * w ** -self.kappa,
                          1.0, math.inf, **_QUAD_OPTS)
            return ("finite", val)
        if p == self.beta and self.kappa > 1.0:
            return ("finite", 1.0 / (self.kappa - 1.0))
        return ("infinite", None)

    def params(self):
        return {"beta": self.beta, "kappa": self.kappa}


class IteratedLogMeasure(Measure):
    """Density (1/2) x^{-3} (log 1/x)^{-1} (log log 1/x)^{-2} on (0, e^{-e}).

    The boundary case with BG index exactly 2: the truncated second moment is
    sigma_bar_sq(u) = 1/(2 log log(1/u)), decaying only at iterated-log speed.
    Serialized under the family tag "Example15".
    """

    family = "Example15"

    def __init__(self):
        self.support_radius = math.exp(-math.e)

    def sigma_bar_sq(self, u):
        if u >= self.support_radius:
            return 0.5
        return 0.5 / math.log(math.log(1.0 / u))

    def sigma_bar_sq_of_log(self, ell):
        if ell <= math.e:
            return 0.5
        return 0.5 / math.log(ell)

    def _tail_core(self, ell: float) -> float:
        # nu_bar(e^{-ell}) = e^{2 ell} * (1/2) int_0^{ell-e} e^{-2v} g(ell-v) dv,
        # g(w) = w^{-1} (log w)^{-2}
        if ell <= math.e:
            return 0.0
        val, _ = quad(
            lambda v: math.exp(-2.0 * v) / ((ell - v) * math.log(ell - v) ** 2),
            0.0, ell - math.e, **_QUAD_OPTS)
        return 0.5 * val

    def nu_bar(self, u):
        if u >= self.support_radius:
            return 0.0
        ell = -math.log(u)
        core = self._tail_core(ell)
        if 2.0 * ell > 700:
            return math.inf
        return math.exp(2.0 * ell) * core

    def log_nu_bar(self, ell):
        if ell <= math.e:
            return -math.inf
        return 2.0 * ell + math.log(self._tail_core(ell))

    def varpi(self, u):
        if u >= self.support_radius:
            return 0.0
        ell = -math.log(u)
        core, _ = quad(
            lambda v: math.exp(-v) / ((ell - v) * math.log(ell - v) ** 2),
            0.0, ell - math.e, **_QUAD_OPTS)
        if ell > 700:
            return math.inf
        return 0.5 * math.exp(ell) * core

    def total_mass(self):
        return math.inf

    def bg_index(self):
        return 2.0

    def jp_direct(self, p):
        if p == 2.0:
            return ("finite", 0.5)
        if p > 2.0:
            val, _ = quad(
                lambda w: math.exp(-(p - 2.0) * w) / (w * math.log(w) ** 2),
                math.e, math.inf, **_QUAD_OPTS)
            return ("finite", 0.5 * val)
        return ("infinite", None)

    def params(self):
        return {}


class CompoundPoissonMeasure(Measure):
    """Finite-activity measure rate * law(Y), Y from a tagged jump distribution."""

    family = "CompoundPoisson"

    def __init__(self, rate: float, jumps: JumpDist):
        if not (rate > 0 and math.isfinite(rate)):
            raise ModelValidationError("CompoundPoisson needs rate > 0")
        self.rate = float(rate)
        self.jumps = jumps
        if isinstance(jumps, FixedJumps):
            self.support_radius = abs(jumps.value)

    def nu_bar(self, u):
        return self.rate * self.jumps.tail_prob(u)

    def sigma_bar_sq(self, u):
        return self.rate * self.jumps.trunc_second(min(u, math.inf))

    def varpi(self, u):
        if u >= 1.0:
            return 0.0
        return self.rate * self.jumps.trunc_first(u, 1.0)

    def total_mass(self):
        return self.rate

    def bg_index(self):
        return 0.0

    def jp_direct(self, p):
        return ("finite", self.rate * self.jumps.abs_moment_below_one(p))

    def params(self):
        return {"rate": self.rate, "jumps": self.jumps.params()}


class TabulatedTailMeasure(Measure):
    """Tail function given on a grid, log-log interpolated.

    Below the smallest grid point the lowest segment's log-log slope is
    extended; above the largest it is held constant.  The first moment
    ``varpi`` is identically 0: a tail function does not determine the sign
    split, and the symmetric convention is adopted.

    The bottom slope must exceed -2, otherwise the extended measure has an
    infinite truncated second moment and the spec is rejected.
    """

    family = "TabulatedTail"
    #: slope band within which the extrapolated BG index snaps to 1 or 2
    SNAP_BAND = 0.02

    def __init__(self, u: Sequence[float], nu_bar_values: Sequence[float]):
        us = np.asarray(u, dtype=float)
        vs = np.asarray(nu_bar_values, dtype=float)
        if us.ndim != 1 or us.shape != vs.shape or us.size < 2:
            raise ModelValidationError("TabulatedTail needs matching 1-d grids, >= 2 points")
        if not (np.all(np.diff(us) > 0) and us[0] > 0 and us[-1] <= 1.0):
            raise ModelValidationError("TabulatedTail grid must be strictly increasing in (0, 1]")
        if not (np.all(vs > 0) and np.all(np.diff(vs) <= 0)):
            raise ModelValidationError("TabulatedTail values must be positive and non-increasing")
        self.us = us
        self.vs = vs
        self.log_u = np.log(us)
        self.log_v = np.log(vs)
        self.slopes = np.diff(self.log_v) / np.diff(self.log_u)
        if self.slopes[0] <= -2.0:
            raise ModelValidationError(
                "bottom slope <= -2 gives an infinite truncated second moment")
        self.support_radius = 1.0
        self._cum_y_nu = self._cumulative_y_nu()

    # -- interpolation ------------------------------------------------------

    def _log_interp(self, log_u: float) -> float:
        if log_u <= self.log_u[0]:
            return self.log_v[0] + self.slopes[0] * (log_u - self.log_u[0])
        if log_u >= self.log_u[-1]:
            return self.log_v[-1]
        i = int(np.searchsorted(self.log_u, log_u) - 1)
        return self.log_v[i] + self.slopes[i] * (log_u - self.log_u[i])

    def nu_bar(self, u):
        return math.exp(self._log_interp(math.log(u)))

    def log_nu_bar(self, ell):
        return self._log_interp(-ell)

    # -- truncated moments via the Fubini identity --------------------------

    @staticmethod
    def _seg_y_power(c: float, s: float, a: float, b: float, p: float) -> float:
        # int_a^b y^{p-1} * c * y^s dy  (c y^s is the local tail value)
        q = p + s
        if abs(q) < 1e-14:
            return c * math.log(b / a)
        return c * (b ** q - a ** q) / q

    def _cumulative_y_nu(self) -> np.ndarray:
        """A_i = int_0^{u_i} y nu_bar(y) dy at grid nodes."""
        out = np.empty(self.us.size)
        # bottom piece: c0 * y^{s0} from 0 to u_0; s0 > -2 so the limit at 0 vanishes
        c0 = self.vs[0] * self.us[0] ** -self.slopes[0]
        out[0] = c0 * self.us[0] ** (2.0 + self.slopes[0]) / (2.0 + self.slopes[0])
        for i in range(self.us.size - 1):
            ci = self.vs[i] * self.us[i] ** -self.slopes[i]
            out[i + 1] = out[i] + self._seg_y_power(
                ci, self.slopes[i], self.us[i], self.us[i + 1], 2.0)
        return out

    def _int_y_nu(self, u: float) -> float:
        """int_0^u y nu_bar(y) dy."""
        if u <= self.us[0]:
            c0 = self.vs[0] * self.us[0] ** -self.slopes[0]
            return c0 * u ** (2.0 + self.slopes[0]) / (2.0 + self.slopes[0])
        if u >= self.us[-1]:
            return self._cum_y_nu[-1] + 0.5 * self.vs[-1] * (u * u - self.us[-1] ** 2)
        i = int(np.searchsorted(self.us, u) - 1)
        ci = self.vs[i] * self.us[i] ** -self.slopes[i]
        return self._cum_y_nu[i] + self._seg_y_power(ci, self.slopes[i], self.us[i], u, 2.0)

    def sigma_bar_sq(self, u):
        val = 2.0 * self._int_y_nu(u) - u * u * self.nu_bar(u)
        return max(val, 0.0)

    def varpi(self, u):
        return 0.0

    def total_mass(self):
        return math.inf if self.slopes[0] < 0 else float(self.vs[0])

    # -- BG index by slope extrapolation -------------------------------------

    def bg_index_with_band(self) -> tuple[float, float]:
        """Asymptotic power index extrapolated from deep grid slopes.

        Local log-log slopes s_i are fit against 1/log(1/u) at segment
        midpoints; the intercept (the 1/log -> 0 limit) estimates -beta.
        The band is the fit residual scale; the estimate snaps to 1 or 2
        inside max(band, SNAP_BAND) and is clipped to [0, 2].
        """
        m = min(self.slopes.size, 6)
        s = self.slopes[:m]
        mids = 0.5 * (self.log_u[:m] + self.log_u[1 : m + 1])
        inv_ell = 1.0 / np.maximum(-mids, 1e-9)
        if m == 1:
            raw, band = -float(s[0]), 0.0
        else:
            coef = np.polyfit(inv_ell, s, 1)
            resid = s - np.polyval(coef, inv_ell)
            raw = -float(coef[1])
            band = 3.0 * float(np.max(np.abs(resid))) if m > 2 else \
                abs(float(s[0] - s[-1]))
        snap = max(band, self.SNAP_BAND)
        for target in (1.0, 2.0):
            if abs(raw - target) <= snap:
                return target, band
        return min(max(raw, 0.0), 2.0), band

    def bg_index(self):
        return self.bg_index_with_band()[0]

    def jp_direct(self, p):
        """Piecewise-closed-form moment integral p * int u^{p-1} (nu_bar - nu_bar(1-)) du."""
        if p + self.slopes[0] <= 0:
            return ("infinite", None)
        d = self.nu_bar(1.0)
        c0 = self.vs[0] * self.us[0] ** -self.slopes[0]
        total = c0 * p * self.us[0] ** (p + self.slopes[0]) / (p + self.slopes[0])
        for i in range(self.us.size - 1):
            ci = self.vs[i] * self.us[i] ** -self.slopes[i]
            total += p * self._seg_y_power(ci, self.slopes[i], self.us[i], self.us[i + 1], p)
        if self.us[-1] < 1.0:
            total += self.vs[-1] * (1.0 - self.us[-1] ** p)
        return ("finite", total - d)

    def params(self):
        return {"u": self.us.tolist(), "nu_bar": self.vs.tolist()}


class SyntheticMeasure(Measure):
    """Measure defined by direct callables; for fixtures and tests only.

    Not part of the JSON model schema: some branch fixtures (constant
    truncated variance, reference-function constructions) are not realizable
    by any genuine tail function, so they are injected here as callables.
    """

    family = "Synthetic"

    def __init__(
        self,
        nu_bar: Callable[[float], float],
        sigma_bar_sq: Callable[[float], float],
        varpi: Callable[[float], float] | None = None,
        total_mass: float = math.inf,
        bg: float = 2.0,
        label: str = "synthetic",
    ):
        self._nu_bar = nu_bar
        self._sigma = sigma_bar_sq
        self._varpi = varpi or (lambda u: 0.0)
        self._mass = total_mass
        self._bg = bg
        self.label = label

    def nu_bar(self, u):
        return self._nu_bar(u)

    def sigma_bar_sq(self, u):
        return self._sigma(u)

    def sigma_bar_sq_of_log(self, ell):
        return self._sigma(math.exp(-min(ell, 700.0)))

    def varpi(self, u):
        return self._varpi(u)

    def total_mass(self):
        return self._mass

    def bg_index(self):
        return self._bg

    def jp_direct(self, p):
        raise CapabilityError("synthetic measures have no moment closed form")

    def params(self):
        raise CapabilityError("synthetic measures are not serializable")


# ---------------------------------------------------------------------------
# the model object and public operations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LevyModel:
    """Triplet (sigma2, measure, drift) with cutoff function 1_{|x|<1}."""

    sigma2: float
    drift: float
    measure: Measure

    def __post_init__(self):
        if not (math.isfinite(self.sigma2) and self.sigma2 >= 0.0):
            raise ModelValidationError("sigma2 must be finite and >= 0")
        if not math.isfinite(self.drift):
            raise ModelValidationError("drift must be finite")

    def to_dict(self) -> dict:
        return {"sigma2": self.sigma2, "drift": self.drift,
                "measure": self.measure.to_dict()}


def _check_u(u: float) -> float:
    if not (0.0 < u <= 1.0):
        raise DomainError(f"u must lie in (0, 1], got {u}")
    return float(u)


def nu_bar(model: LevyModel, u: float) -> float:
    """Tail mass nu(R \\ (-u, u)) for u in (0, 1]."""
    return model.measure.nu_bar(_check_u(u))


def sigma_bar_sq(model: LevyModel, u: float) -> float:
    """Truncated second moment int_{(-u,u)} x^2 nu(dx) for u in (0, 1]."""
    return model.measure.sigma_bar_sq(_check_u(u))


def varpi(model: LevyModel, u: float) -> float:
    """Truncated first moment int_{(-1,1) \\ (-u,u)} x nu(dx) for u in (0, 1]."""
    return model.measure.varpi(_check_u(u))


def bg_index(model: LevyModel) -> float:
    """Blumenthal-Getoor index of the jump measure."""
    return model.measure.bg_index()


def variation_class(model: LevyModel) -> VariationClass:
    """Infinite variation iff sigma2 > 0 or J_1 = inf."""
    if model.sigma2 > 0:
        return VariationClass.INFINITE
    status, _ = model.measure.jp_direct(1.0)
    return VariationClass.INFINITE if status == "infinite" else VariationClass.FINITE


def is_compound_poisson_with_drift(model: LevyModel) -> bool:
    """True iff sigma2 = 0 and the jump measure is finite."""
    return model.sigma2 == 0.0 and model.measure.total_mass() < math.inf


# ---------------------------------------------------------------------------
# JSON (de)serialization; field names are part of the CLI contract
# ---------------------------------------------------------------------------

_FAMILIES = {
    "Zero": lambda d: ZeroMeasure(),
    "TruncatedStable": lambda d: TruncatedStableMeasure(d["alpha"], d["c_plus"], d["c_minus"]),
    "LogTemperedStable": lambda d: LogTemperedStableMeasure(d["beta"], d["kappa"]),
    "Example15": lambda d: IteratedLogMeasure(),
    "CompoundPoisson": lambda d: CompoundPoissonMeasure(d["rate"], _jump_dist_from_dict(d["jumps"])),
    "TabulatedTail": lambda d: TabulatedTailMeasure(d["u"], d["nu_bar"]),
}


def model_from_dict(d: dict) -> LevyModel:
    try:
        fam = d["measure"]["family"]
        builder = _FAMILIES[fam]
    except KeyError as exc:
        raise ModelValidationError(f"missing or unknown field: {exc}") from exc
    return LevyModel(sigma2=float(d["sigma2"]), drift=float(d["drift"]),
                     measure=builder(d["measure"]))


def load_model(path: str) -> LevyModel:
    with open(path) as fh:
        return model_from_dict(json.load(fh))


def dump_model(model: LevyModel, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(model.to_dict(), fh, indent=2)
        fh.write("\n")
