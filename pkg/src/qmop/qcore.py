"""Arbitrary-precision primitives on the geometric lattice {q^k}: truncated
Pochhammer products, lattice sums, weight families, and the meromorphic
scalar functions h and g used by the higher-level modules."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from mpmath import mp


# ---------------------------------------------------------------------------
# error types


class QLatticeError(Exception):
    """Base class for numerical-contract violations."""


class NonDecayingSummand(QLatticeError):
    """Lattice-sum terms stopped decreasing before reaching the tail tolerance."""


class SingularSystem(QLatticeError):
    """Moment system is numerically singular."""


class LatticeProximity(QLatticeError):
    """Evaluation point lies too close to a lattice node q^k."""


class PoleProximity(QLatticeError):
    """Evaluation point lies too close to a pole."""


class IntegerAlpha(QLatticeError):
    """Exponent must not be an integer for this operation."""


class ZeroArgument(QLatticeError):
    """Argument must be nonzero."""


class MissingSample(QLatticeError):
    """Tabulated weight has no sample at a required lattice index."""


class DivergentMoment(QLatticeError):
    """Weight exponent <= -1, so lattice moments do not converge."""


class DegenerateParams(QLatticeError):
    """Exponent pair differs by an integer and the paired system degenerates."""


class BranchAmbiguity(QLatticeError):
    """Half-integer powers are ambiguous on the negative real axis."""


class ConstraintViolation(QLatticeError):
    """Input violates a structural admissibility constraint."""


class NoConvergence(QLatticeError):
    """Iteration exhausted its budget before meeting its stopping rule."""


class PrecisionExhausted(QLatticeError):
    """Requested accuracy is unreachable at the configured precision."""


# ---------------------------------------------------------------------------
# configuration


def to_mp(x):
    """Convert to an mpmath number, routing floats through their decimal repr."""
    if isinstance(x, (mp.mpf, mp.mpc)):
        return x
    if isinstance(x, complex):
        return mp.mpc(mp.mpf(str(x.real)), mp.mpf(str(x.imag)))
    if isinstance(x, (int, str)):
        return mp.mpf(x)
    return mp.mpf(str(x))


def digits_for(n: int, q) -> int:
    """Decimal digits sufficient for degree-n work at base q."""
    return math.ceil(3.5 * n * n * math.log10(1.0 / float(q))) + 60


@dataclass(frozen=True)
class PrecisionConfig:
    """Working-precision policy: target decimal digits, guard digits for
    linear algebra, and the truncation tolerance 10^tail_exp for infinite
    products and lattice sums (default tail_exp = 10 - digits)."""

    digits: int = 60
    guard: int = 40
    tail_exp: Optional[int] = None

    @property
    def tail_tol(self):
        e = self.tail_exp if self.tail_exp is not None else 10 - self.digits
        return mp.power(10, e)


def config_for(n: int, q, guard: int = 40) -> PrecisionConfig:
    """PrecisionConfig using the degree-based digit policy."""
    return PrecisionConfig(digits=digits_for(n, q), guard=guard)


def solve_allowance(total_degree: int, q) -> int:
    """Digits consumed between a degree-N moment solve and the values built
    from it: the moment system's condition number and the normalization
    constants it feeds both scale like q^{-c N^2}, so the truncated moments
    must be that much deeper than the requested accuracy."""
    L = math.log10(1.0 / float(q))
    return math.ceil(0.7 * total_degree * total_degree * L) + 20


def deepened(cfg: PrecisionConfig, total_degree: int, q) -> PrecisionConfig:
    """Copy of cfg with the degree-dependent solve allowance added, used
    internally so a caller-requested accuracy survives the moment solve."""
    return PrecisionConfig(digits=cfg.digits + solve_allowance(total_degree, q),
                           guard=cfg.guard, tail_exp=cfg.tail_exp)


def _near_integer(x, tol=1e-9) -> bool:
    return abs(float(x) - round(float(x))) < tol


@dataclass(frozen=True)
class Params:
    """Lattice base q in (0,1) and the two weight exponents alpha, beta.

    The exponent difference must not be an integer, otherwise the paired
    moment system is degenerate."""

    q: object
    alpha: object
    beta: object

    def __post_init__(self):
        qf = float(to_mp(self.q))
        if not 0.0 < qf < 1.0:
            raise ConstraintViolation("q must lie strictly inside (0, 1)")
        if _near_integer(float(to_mp(self.alpha)) - float(to_mp(self.beta))):
            raise DegenerateParams("alpha - beta must not be an integer")

    def as_mp(self):
        """(q, alpha, beta) as mpmath values at the active precision."""
        return to_mp(self.q), to_mp(self.alpha), to_mp(self.beta)


# ---------------------------------------------------------------------------
# weight families


LITTLE_Q_JACOBI = "little_q_jacobi"
ZETA_FAMILY = "zeta_family"
LATTICE_SAMPLES = "lattice_samples"


@dataclass(frozen=True)
class WeightSpec:
    """Lattice weight x^exponent * omega(x) on {q^k : k >= 0}.

    kind selects omega: the base Pochhammer factor (qx;q)_inf, the ratio
    (qx;q)_inf/(q^{zeta+1}x;q)_inf, or tabulated omega samples per index k."""

    kind: str
    exponent: object
    zeta: object = None
    samples: Optional[tuple] = None

    @classmethod
    def little_q_jacobi(cls, exponent):
        """Base weight x^exponent * (qx;q)_inf."""
        return cls(kind=LITTLE_Q_JACOBI, exponent=exponent)

    @classmethod
    def zeta_family(cls, exponent, zeta):
        """Deformed weight x^exponent * (qx;q)_inf/(q^{zeta+1}x;q)_inf, zeta >= 0."""
        if float(to_mp(zeta)) < 0:
            raise ConstraintViolation("zeta must be >= 0")
        return cls(kind=ZETA_FAMILY, exponent=exponent, zeta=zeta)

    @classmethod
    def lattice_samples(cls, exponent, samples):
        """Weight with omega given by explicit samples omega(q^k) = samples[k]."""
        return cls(kind=LATTICE_SAMPLES, exponent=exponent,
                   samples=tuple(float(s) for s in samples))


# ---------------------------------------------------------------------------
# Pochhammer products


def qpoch_finite(a, q, n: int):
    """Finite product (a;q)_n = prod_{j<n} (1 - a q^j)."""
    a = to_mp(a)
    q = to_mp(q)
    prod = mp.one
    aq = a
    for _ in range(int(n)):
        prod *= (1 - aq)
        aq *= q
    return prod


def qpoch_infinite(a, q, tail_tol):
    """(a;q)_inf truncated once |a q^j| < tail_tol, with a first-order tail
    correction; relative error is below ~10*tail_tol."""
    a = to_mp(a)
    q = to_mp(q)
    tail_tol = to_mp(tail_tol)
    if a == 0:
        return mp.one
    prod = mp.one
    aq = a
    j = 0
    while abs(aq) >= tail_tol:
        prod *= (1 - aq)
        aq *= q
        j += 1
        if j > 10_000_000:
            raise NoConvergence("qpoch_infinite truncation did not terminate")
    return prod * mp.exp(-aq / (1 - q))


# ---------------------------------------------------------------------------
# lattice summation


def jackson_integral(f: Callable, q, tail_tol, kmax: int = 1_000_000):
    """Sum_{k>=0} f(q^k) q^k, truncated when |f(q^k) q^k| < tail_tol.

    Raises NonDecayingSummand if, beyond a burn-in, the summand magnitude
    fails to decrease over 10 consecutive indices."""
    q = to_mp(q)
    tail_tol = to_mp(tail_tol)
    burn_in = max(40, int(5.0 / (1.0 - float(q))))
    total = mp.zero
    x = mp.one
    prev = None
    streak = 0
    for k in range(kmax):
        term = f(x) * x
        total += term
        m = abs(term)
        if m < tail_tol and k > 5:
            return total
        if prev is not None and m >= prev and k > burn_in:
            streak += 1
            if streak >= 10:
                raise NonDecayingSummand(
                    "summand stopped decreasing at k=%d (|term|=%s)" % (k, m))
        else:
            streak = 0
        prev = m
        x *= q
    raise NoConvergence("jackson_integral exhausted kmax=%d" % kmax)


# ---------------------------------------------------------------------------
# weight evaluation


def truncation_index(w: WeightSpec, p: Params, cfg: PrecisionConfig) -> int:
    """Smallest K with q^{K(exponent+1)} below the tail tolerance, plus margin."""
    e = float(to_mp(w.exponent))
    if e <= -1.0:
        raise DivergentMoment("weight exponent must exceed -1")
    q = float(to_mp(p.q))
    tail_digits = cfg.digits - 10 if cfg.tail_exp is None else -cfg.tail_exp
    K = int(tail_digits / ((e + 1.0) * math.log10(1.0 / q))) + 20
    return K


def weight_eval(w: WeightSpec, k: int, p: Params, cfg: PrecisionConfig):
    """Weight value w(q^k) at a single lattice index k >= 0."""
    if k < 0:
        raise ConstraintViolation("lattice index must be >= 0")
    with mp.workdps(cfg.digits):
        q, _, _ = p.as_mp()
        e = to_mp(w.exponent)
        tol = cfg.tail_tol
        xe = q ** (k * e)
        if w.kind == LITTLE_Q_JACOBI:
            return xe * qpoch_infinite(q ** (k + 1), q, tol)
        if w.kind == ZETA_FAMILY:
            zeta = to_mp(w.zeta)
            num = qpoch_infinite(q ** (k + 1), q, tol)
            den = qpoch_infinite(q ** (zeta + 1 + k), q, tol)
            return xe * num / den
        if w.kind == LATTICE_SAMPLES:
            if w.samples is None or k >= len(w.samples):
                raise MissingSample("no omega sample at lattice index %d" % k)
            return xe * to_mp(w.samples[k])
        raise ConstraintViolation("unknown weight kind %r" % w.kind)


def weight_table(w: WeightSpec, p: Params, cfg: PrecisionConfig, kmax: int):
    """Values [w(q^k) for k < kmax] via running Pochhammer recurrences."""
    with mp.workdps(cfg.digits + cfg.guard):
        q, _, _ = p.as_mp()
        e = to_mp(w.exponent)
        tol = cfg.tail_tol
        qq_inf = qpoch_infinite(q, q, tol)
        qqk = mp.one          # (q;q)_k
        qe = q ** e
        xe = mp.one           # q^{k e}
        out = []
        if w.kind == LITTLE_Q_JACOBI:
            for k in range(kmax):
                out.append(xe * qq_inf / qqk)
                qqk *= (1 - q ** (k + 1))
                xe *= qe
            return out
        if w.kind == ZETA_FAMILY:
            zeta = to_mp(w.zeta)
            zden_inf = qpoch_infinite(q ** (zeta + 1), q, tol)
            zk = mp.one       # (q^{zeta+1};q)_k
            for k in range(kmax):
                out.append(xe * (qq_inf / qqk) * zk / zden_inf)
                qqk *= (1 - q ** (k + 1))
                zk *= (1 - q ** (zeta + 1 + k))
                xe *= qe
            return out
        if w.kind == LATTICE_SAMPLES:
            if w.samples is None or kmax > len(w.samples):
                raise MissingSample(
                    "need %d omega samples, have %d" % (kmax, len(w.samples or ())))
            for k in range(kmax):
                out.append(xe * to_mp(w.samples[k]))
                xe *= qe
            return out
        raise ConstraintViolation("unknown weight kind %r" % w.kind)


# ---------------------------------------------------------------------------
# meromorphic scalar functions


def _nearest_lattice_gap(z, q):
    """Relative distance from z to the nearest point of {q^k : k in Z}."""
    az = abs(z)
    if az == 0:
        return mp.inf
    k = int(mp.nint(mp.log(az) / mp.log(q)))
    best = mp.inf
    for kk in (k - 1, k, k + 1):
        d = abs(z - q ** kk) / q ** kk
        if d < best:
            best = d
    return best


def h_eval(z, alpha, p: Params, cfg: PrecisionConfig):
    """Meromorphic interpolant with h(qz) = q^alpha h(z), simple poles on
    {q^k : k in Z}, and unit residue at z = 1.

    alpha must be a non-integer real; z must be nonzero and away from the
    pole lattice."""
    if _near_integer(alpha):
        raise IntegerAlpha("alpha must not be an integer")
    with mp.workdps(cfg.digits):
        z = to_mp(z)
        if z == 0:
            raise ZeroArgument("h is evaluated away from z = 0")
        q, _, _ = p.as_mp()
        al = to_mp(alpha)
        if _nearest_lattice_gap(z, q) < mp.power(10, -(cfg.digits // 2)):
            raise PoleProximity("z is too close to the pole lattice q^k")
        tol = cfg.tail_tol
        kappa = (qpoch_infinite(q, q, tol) ** 2
                 / (qpoch_infinite(q ** (1 - al), q, tol)
                    * qpoch_infinite(q ** al, q, tol)))
        num = (qpoch_infinite(q ** (1 - al) * z, q, tol)
               * qpoch_infinite(q ** al / z, q, tol))
        den = (qpoch_infinite(q * z, q, tol)
               * qpoch_infinite(1 / z, q, tol))
        return kappa * num / den


def g_eval(t, p: Params, cfg: PrecisionConfig):
    """Entire-lattice product g(t) = (qt;q)_inf (1/t;q)_inf with zeros on
    {q^k : k in Z}; satisfies g(qt) = -(qt)^{-1} g(t)."""
    with mp.workdps(cfg.digits):
        t = to_mp(t)
        if t == 0:
            raise ZeroArgument("g is evaluated away from t = 0")
        q, _, _ = p.as_mp()
        tol = cfg.tail_tol
        return qpoch_infinite(q * t, q, tol) * qpoch_infinite(1 / t, q, tol)
