"""Moment systems, paired-orthogonality polynomials on the stepline, their
normalization constants, the associated 3x3 solution matrix, and the
stepline four-term recurrence."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from mpmath import mp

from .qcore import (ConstraintViolation, DivergentMoment, LatticeProximity,
                    Params, PrecisionConfig, SingularSystem, WeightSpec,
                    deepened, to_mp, truncation_index, weight_table)

_TABLE_CACHE = {}
_MOMENT_CACHE = {}
_POLY_CACHE = {}


@dataclass(frozen=True)
class Polynomial:
    """Monic polynomial in ascending coefficient order, tagged with the
    (n, m) orthogonality multi-index."""

    coeffs: tuple
    multi_index: tuple

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        s = mp.zero
        x = to_mp(x)
        for c in reversed(self.coeffs):
            s = s * x + c
        return s


@dataclass(frozen=True)
class GammaNorms:
    """The three nonzero normalization integrals at index n: the two
    sub-diagonal ones and the diagonal first-weight one."""

    n: int
    gamma1_lower: object   # integral of P_{n-1,n} x^{n-1} w1
    gamma2_lower: object   # integral of P_{n,n-1} x^{n-1} w2
    gamma1_diag: object    # integral of P_{n,n}   x^n     w1


@dataclass(frozen=True)
class YMatrix:
    """3x3 solution matrix at a point z off the lattice: polynomial column
    plus the two weighted Cauchy-transform columns, rows normalized so the
    determinant is 1."""

    n: int
    z: object
    matrix: object
    digits: int = 60

    def det(self):
        with mp.workdps(self.digits):
            return mp.det(self.matrix)


@dataclass(frozen=True)
class RecurrenceCoeffs:
    """Coefficients of x Q_k = Q_{k+1} + b Q_k + c Q_{k-1} + d Q_{k-2} on the
    stepline, with the residual left after coefficient matching."""

    k: int
    b: object
    c: object
    d: object
    residual: object


def _default_weights(p: Params, w1, w2):
    if w1 is None:
        w1 = WeightSpec.little_q_jacobi(p.alpha)
    if w2 is None:
        w2 = WeightSpec.little_q_jacobi(p.beta)
    return w1, w2


def _tables(w: WeightSpec, p: Params, cfg: PrecisionConfig,
            kmax: Optional[int] = None):
    """Cached lattice tables (w(q^k), q^k) at working precision."""
    if kmax is None:
        kmax = truncation_index(w, p, cfg)
    key = (w, p, cfg, kmax)
    if key not in _TABLE_CACHE:
        with mp.workdps(cfg.digits + cfg.guard):
            wtab = weight_table(w, p, cfg, kmax)
            q, _, _ = p.as_mp()
            qpow = [mp.one]
            for _ in range(kmax - 1):
                qpow.append(qpow[-1] * q)
        _TABLE_CACHE[key] = (wtab, qpow)
    return _TABLE_CACHE[key]


def _deep_cfg(p: Params, cfg: PrecisionConfig, N: int, *weights):
    """Solve-allowance deepening of cfg for a degree-N system, capped at the
    depth any finite sample list among the weights can support (admissibility
    pins deep samples near 1, so the cap costs accuracy only past the point
    where the data runs out); never below the caller's own request."""
    d = deepened(cfg, N, p.q)
    caps = []
    for w in weights:
        if w.samples is not None:
            e = float(to_mp(w.exponent))
            L = math.log10(1.0 / float(to_mp(p.q)))
            caps.append(int((len(w.samples) - 20) * (e + 1.0) * L) + 10)
    if caps and min(caps) < d.digits:
        d = PrecisionConfig(digits=max(cfg.digits, min(caps)),
                            guard=cfg.guard, tail_exp=cfg.tail_exp)
    return d


def moment(w: WeightSpec, j: int, p: Params, cfg: PrecisionConfig):
    """Lattice moment m_j = sum_k q^{k(j+1)} w(q^k), cached per weight."""
    key = (w, p, cfg)
    cache = _MOMENT_CACHE.setdefault(key, {})
    if j not in cache:
        wtab, qpow = _tables(w, p, cfg)
        with mp.workdps(cfg.digits + cfg.guard):
            tol = cfg.tail_tol
            s = mp.zero
            for k in range(len(wtab)):
                t = qpow[k] ** (j + 1) * wtab[k]
                s += t
                if abs(t) < tol and k > 5:
                    break
            cache[j] = s
    return cache[j]


def moments(w: WeightSpec, count: int, p: Params, cfg: PrecisionConfig):
    """The first `count` lattice moments of the weight."""
    return [moment(w, j, p, cfg) for j in range(count)]


def solve_pair(n: int, m: int, p: Params, cfg: PrecisionConfig,
               w1: Optional[WeightSpec] = None,
               w2: Optional[WeightSpec] = None) -> Polynomial:
    """Monic degree-(n+m) polynomial killing the first n moments against w1
    and the first m against w2; requires |n - m| <= 1."""
    if n < 0 or m < 0 or abs(n - m) > 1:
        raise ConstraintViolation("multi-index must be on the stepline")
    w1, w2 = _default_weights(p, w1, w2)
    key = (n, m, w1, w2, p, cfg)
    if key in _POLY_CACHE:
        return _POLY_CACHE[key]
    N = n + m
    dcfg = _deep_cfg(p, cfg, N, w1, w2)
    with mp.workdps(dcfg.digits + dcfg.guard):
        if N == 0:
            poly = Polynomial((mp.one,), (0, 0))
        else:
            A = mp.matrix(N, N)
            b = mp.matrix(N, 1)
            rows = [(w1, k) for k in range(n)] + [(w2, k) for k in range(m)]
            for i, (w, k) in enumerate(rows):
                for j in range(N):
                    A[i, j] = moment(w, j + k, p, dcfg)
                b[i] = -moment(w, N + k, p, dcfg)
            try:
                c = mp.lu_solve(A, b)
            except (ZeroDivisionError, ValueError) as exc:
                raise SingularSystem(
                    "moment system for index (%d, %d) is singular" % (n, m)
                ) from exc
            poly = Polynomial(tuple(c[i] for i in range(N)) + (mp.one,), (n, m))
    _POLY_CACHE[key] = poly
    return poly


def orthogonality_residual(poly: Polynomial, w: WeightSpec, j: int,
                           p: Params, cfg: PrecisionConfig):
    """Relative size of the lattice integral of poly * x^j * w, scaled by the
    largest single moment contribution."""
    with mp.workdps(cfg.digits + cfg.guard):
        total = mp.zero
        scale = mp.zero
        for i, ci in enumerate(poly.coeffs):
            t = ci * moment(w, i + j, p, cfg)
            total += t
            scale = max(scale, abs(t))
        return abs(total) / scale


def gamma_norms(n: int, p: Params, cfg: PrecisionConfig,
                w1: Optional[WeightSpec] = None,
                w2: Optional[WeightSpec] = None) -> GammaNorms:
    """The three normalization integrals at index n >= 1."""
    if n < 1:
        raise ConstraintViolation("gamma norms need n >= 1")
    w1, w2 = _default_weights(p, w1, w2)
    p_lower1 = solve_pair(n - 1, n, p, cfg, w1, w2)
    p_lower2 = solve_pair(n, n - 1, p, cfg, w1, w2)
    p_diag = solve_pair(n, n, p, cfg, w1, w2)
    dcfg = _deep_cfg(p, cfg, 2 * n, w1, w2)
    with mp.workdps(dcfg.digits + dcfg.guard):
        g1l = mp.zero
        for i, ci in enumerate(p_lower1.coeffs):
            g1l += ci * moment(w1, i + n - 1, p, dcfg)
        g2l = mp.zero
        for i, ci in enumerate(p_lower2.coeffs):
            g2l += ci * moment(w2, i + n - 1, p, dcfg)
        g1d = mp.zero
        for i, ci in enumerate(p_diag.coeffs):
            g1d += ci * moment(w1, i + n, p, dcfg)
    return GammaNorms(n=n, gamma1_lower=g1l, gamma2_lower=g2l, gamma1_diag=g1d)


def _lattice_gap(z, q):
    """Relative distance from z to the nearest lattice node q^k, k >= 0."""
    az = abs(z)
    if az == 0:
        return abs(z - mp.one)
    k = int(mp.nint(mp.log(az) / mp.log(q)))
    best = mp.inf
    for kk in (max(0, k - 1), max(0, k), k + 1):
        d = abs(z - q ** kk) / q ** kk
        if d < best:
            best = d
    return best


def cauchy_transform(poly: Polynomial, w: WeightSpec, z, p: Params,
                     cfg: PrecisionConfig):
    """Weighted lattice Cauchy transform sum_k poly(q^k) w(q^k) q^k / (z - q^k).

    At z = 0 the Jackson factor cancels against the pole, so the summand
    decays with the bare weight exponent; the table is lengthened to match
    (and a non-positive exponent leaves no decay at all)."""
    dcfg = _deep_cfg(p, cfg, poly.degree, w)
    kmax = None
    if to_mp(z) == 0:
        e = float(to_mp(w.exponent))
        if e <= 0:
            raise DivergentMoment(
                "the transform at the origin needs a positive exponent")
        qf = float(to_mp(p.q))
        kmax = int((dcfg.digits - 10) / (e * math.log10(1.0 / qf))) + 20
    wtab, qpow = _tables(w, p, dcfg, kmax)
    with mp.workdps(dcfg.digits + dcfg.guard):
        z = to_mp(z)
        q, _, _ = p.as_mp()
        # proximity is judged against the caller's requested digits
        if z != 0 and _lattice_gap(z, q) < mp.power(10, -(cfg.digits // 2)):
            raise LatticeProximity("z is too close to the summation lattice")
        tol = dcfg.tail_tol
        s = mp.zero
        for k in range(len(wtab)):
            t = poly(qpow[k]) * wtab[k] * qpow[k] / (z - qpow[k])
            s += t
            if abs(t) < tol and k > 5:
                break
        return s


def y_eval(n: int, z, p: Params, cfg: PrecisionConfig,
           w1: Optional[WeightSpec] = None,
           w2: Optional[WeightSpec] = None) -> YMatrix:
    """The 3x3 solution matrix at z: first column the three stepline
    polynomials (rows 2 and 3 normalized by their gamma norms), remaining
    columns their lattice Cauchy transforms against the two weights."""
    if n < 1:
        raise ConstraintViolation("y_eval needs n >= 1")
    w1, w2 = _default_weights(p, w1, w2)
    gn = gamma_norms(n, p, cfg, w1, w2)
    with mp.workdps(cfg.digits + cfg.guard):
        rows = [(solve_pair(n, n, p, cfg, w1, w2), mp.one),
                (solve_pair(n - 1, n, p, cfg, w1, w2), 1 / gn.gamma1_lower),
                (solve_pair(n, n - 1, p, cfg, w1, w2), 1 / gn.gamma2_lower)]
        z = to_mp(z)
        M = mp.matrix(3, 3)
        for i, (poly, scale) in enumerate(rows):
            M[i, 0] = scale * poly(z)
            M[i, 1] = scale * cauchy_transform(poly, w1, z, p, cfg)
            M[i, 2] = scale * cauchy_transform(poly, w2, z, p, cfg)
    return YMatrix(n=n, z=z, matrix=M,
                   digits=cfg.digits + cfg.guard)


def _padded_sub(a, b, coef):
    """a - coef*b with ascending-coefficient lists of unequal length."""
    L = max(len(a), len(b))
    out = []
    for i in range(L):
        ai = a[i] if i < len(a) else mp.zero
        bi = b[i] if i < len(b) else mp.zero
        out.append(ai - coef * bi)
    return out


def stepline_recurrence(kmax: int, p: Params, cfg: PrecisionConfig,
                        w1: Optional[WeightSpec] = None,
                        w2: Optional[WeightSpec] = None):
    """Four-term recurrence coefficients along the stepline for k = 2..kmax,
    by triangular coefficient matching; the residual is the largest leftover
    coefficient after subtracting all four terms."""
    def steppoly(k):
        s, r = divmod(k, 2)
        return solve_pair(s + r, s, p, cfg, w1, w2)

    out = []
    with mp.workdps(cfg.digits + cfg.guard):
        for k in range(2, kmax + 1):
            Qk = list(steppoly(k).coeffs)
            xQ = [mp.zero] + Qk
            r = _padded_sub(xQ, list(steppoly(k + 1).coeffs), mp.one)
            bk = r[k]
            r = _padded_sub(r, list(steppoly(k).coeffs), bk)
            ck = r[k - 1]
            r = _padded_sub(r, list(steppoly(k - 1).coeffs), ck)
            dk = r[k - 2]
            r = _padded_sub(r, list(steppoly(k - 2).coeffs), dk)
            resid = max(abs(x) for x in r)
            out.append(RecurrenceCoeffs(k=k, b=bk, c=ck, d=dk, residual=resid))
    return out
