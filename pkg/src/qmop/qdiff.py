"""Difference-equation structure: the one-step 3x3 matrix in the spectral
variable, its closed-form entries, scalar third-order residuals for the
matrix rows, the Frobenius-type series solution around the origin, and the
third-order relation satisfied by the normalized Cauchy column."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from mpmath import mp

from .mop import cauchy_transform, gamma_norms, solve_pair, y_eval
from .qcore import (ConstraintViolation, NoConvergence, Params,
                    PrecisionConfig, WeightSpec, qpoch_infinite, to_mp)


@dataclass(frozen=True)
class LaxMatrix:
    """One-step 3x3 matrix D with Y(z/q) = D(z) Y(z) / (pointwise factors),
    evaluated at a point z."""

    n: int
    z: object
    matrix: object


@dataclass(frozen=True)
class LaxClosedForm:
    """Closed-form structure of the one-step matrix: affine (1,1) entry with
    the given slope, constant off-diagonal products, fixed diagonal tail, and
    the spectrum at z = 0."""

    n: int
    mu1: object          # constant part of entry (1,1)
    mu24: object         # product of entries (1,2) and (2,1)
    mu35: object         # product of entries (1,3) and (3,1)
    diag2: object        # entry (2,2)
    diag3: object        # entry (3,3)
    slope: object        # z-slope of entry (1,1)
    eigenvalues: tuple   # spectrum of D at z = 0


def dn_from_y(n: int, z, p: Params, cfg: PrecisionConfig,
              w1: Optional[WeightSpec] = None,
              w2: Optional[WeightSpec] = None) -> LaxMatrix:
    """One-step matrix extracted from the solution matrix:
    D(z) = Y(z/q) diag(1-z, q^alpha, q^beta) Y(z)^{-1}."""
    with mp.workdps(cfg.digits + cfg.guard):
        z = to_mp(z)
        q, al, be = p.as_mp()
        Yz = y_eval(n, z, p, cfg, w1, w2).matrix
        Yqz = y_eval(n, z / q, p, cfg, w1, w2).matrix
        J = mp.matrix(3, 3)
        J[0, 0] = 1 - z
        J[1, 1] = q ** al
        J[2, 2] = q ** be
        D = Yqz * J * (Yz ** -1)
    return LaxMatrix(n=n, z=z, matrix=D)


def dn_at_zero(n: int, p: Params, cfg: PrecisionConfig,
               z0="0.37", z1="0.59") -> LaxMatrix:
    """One-step matrix at z = 0 by affine two-point extrapolation, since every
    entry is affine in z and direct evaluation near 0 sits on the lattice tail."""
    with mp.workdps(cfg.digits + cfg.guard):
        z0 = to_mp(z0)
        z1 = to_mp(z1)
        Da = dn_from_y(n, z0, p, cfg).matrix
        Db = dn_from_y(n, z1, p, cfg).matrix
        D0 = mp.matrix(3, 3)
        for i in range(3):
            for j in range(3):
                D0[i, j] = (z1 * Da[i, j] - z0 * Db[i, j]) / (z1 - z0)
    return LaxMatrix(n=n, z=mp.zero, matrix=D0)


def dn_closed_form(n: int, p: Params, cfg: PrecisionConfig) -> LaxClosedForm:
    """Closed-form entries and invariants of the one-step matrix."""
    with mp.workdps(cfg.digits + cfg.guard):
        q, al, be = p.as_mp()
        qa = q ** al
        qb = q ** be
        mu1 = 1 + qa + qb - q ** (al + n) - q ** (be + n)
        mu24 = (q ** (al - n) * (q ** n - 1) * (q ** (al + n) - 1)
                * (q ** (al + n) - qb) / (qb - qa))
        mu35 = (q ** (be - n) * (q ** n - 1) * (q ** (be + n) - 1)
                * (q ** (be + n) - qa) / (qa - qb))
        return LaxClosedForm(n=n, mu1=mu1, mu24=mu24, mu35=mu35,
                             diag2=q ** (n + al), diag3=q ** (n + be),
                             slope=-q ** (-2 * n),
                             eigenvalues=(mp.one, qa, qb))


_ROW_POLY = {"Y11": (0, 0), "Y21": (-1, 0), "Y31": (0, -1)}


def scalar_residual(which: str, n: int, t, p: Params, cfg: PrecisionConfig):
    """Normalized residual of the third-order scalar relation satisfied by
    f(t) = R(t q^{2n}) (q^{2n+1} t; q)_inf, where R is the polynomial in the
    matrix row named by `which` (one of Y11, Y21, Y31)."""
    if which not in _ROW_POLY:
        raise ConstraintViolation("row must be one of Y11, Y21, Y31")
    dn, dm = _ROW_POLY[which]
    poly = solve_pair(n + dn, n + dm, p, cfg)
    with mp.workdps(cfg.digits + cfg.guard):
        t = to_mp(t)
        q, al, be = p.as_mp()
        qa = q ** al
        qb = q ** be
        qab = q ** (al + be)
        tol = cfg.tail_tol

        def f(tv):
            return poly(tv * q ** (2 * n)) * qpoch_infinite(
                q ** (2 * n + 1) * tv, q, tol)

        if which == "Y11":
            b1 = 1 + qa + qb - q * t
            b2 = -(qa + qb + qab) + (qa + qb) * q ** (n + 2) * t
        elif which == "Y21":
            b1 = 1 + qa + qb - q ** 2 * t
            b2 = -(qa + qb + qab) + (qa + qb * q) * q ** (n + 2) * t
        else:
            b1 = 1 + qa + qb - q ** 2 * t
            b2 = -(qa + qb + qab) + (qa * q + qb) * q ** (n + 2) * t
        b3 = qab - q ** (3 + al + be + 2 * n) * t
        terms = (f(t), b1 * f(q * t), b2 * f(q ** 2 * t), b3 * f(q ** 3 * t))
        resid = terms[0] - terms[1] - terms[2] - terms[3]
        return abs(resid) / max(abs(x) for x in terms)


@dataclass(frozen=True)
class SeriesSolution:
    """Power-series solution around the origin, at index n or its n -> inf
    limit (n=None); coefficients follow a three-factor ratio recurrence and
    evaluation is precision-adaptive in the argument size."""

    n: Optional[int]
    params: Params
    cfg: PrecisionConfig

    def coefficients(self, count: int):
        """First `count` series coefficients at the active precision."""
        q, al, be = self.params.as_mp()
        out = [mp.one]
        for k in range(1, count):
            num = -q ** k
            if self.n is not None:
                num *= (1 - q ** (self.n + al + k)) * (1 - q ** (self.n + be + k))
            den = (1 - q ** k) * (1 - q ** (al + k)) * (1 - q ** (be + k))
            out.append(out[-1] * num / den)
        return out

    def _dps_for_depth(self, depth: float) -> int:
        # At t ~ q^{-m} the summand envelope peaks near q^{-m^2/2} while the
        # sum itself decays like q^{+m^2/4}, so ~(3/4) m^2 log10(1/q) digits
        # cancel between the largest term and the returned value.
        extra = int(0.75 * depth * (depth + 1)
                    * math.log10(1.0 / float(to_mp(self.params.q)))) + 30
        return self.cfg.digits + extra

    def _sum(self, tv, dps: int):
        q, al, be = self.params.as_mp()
        thresh = mp.power(10, 5 - dps)
        c = mp.one
        tp = mp.one
        s = mp.one
        for k in range(1, 200000):
            num = -q ** k
            if self.n is not None:
                num *= (1 - q ** (self.n + al + k)) * (1 - q ** (self.n + be + k))
            c = c * num / ((1 - q ** k) * (1 - q ** (al + k)) * (1 - q ** (be + k)))
            tp = tp * tv
            term = c * tp
            s += term
            if abs(term) < thresh and k > 10:
                return s
        raise NoConvergence("series evaluation did not truncate")

    def eval(self, t):
        """Series value at t, regenerating coefficients at a precision raised
        by the cancellation depth (the series nearly vanishes at large
        lattice arguments q^{-m}).

        The argument keeps only the precision it was built with; for exact
        lattice powers use eval_at_power, which forms q^k after raising the
        working precision."""
        qf = float(to_mp(self.params.q))
        tf = float(abs(to_mp(t)))
        depth = max(0.0, math.log(max(tf, 1e-300)) / math.log(1.0 / qf))
        dps = self._dps_for_depth(depth)
        with mp.workdps(dps):
            return self._sum(to_mp(t), dps)

    def eval_at_power(self, k: int):
        """Series value at the exact lattice point q^k (k may be negative);
        the power is computed inside the raised working precision, which is
        what deep near-vanishing arguments need."""
        dps = self._dps_for_depth(max(0.0, float(-k)))
        with mp.workdps(dps):
            q, _, _ = self.params.as_mp()
            return self._sum(q ** k, dps)


def u_series(n: Optional[int], p: Params, cfg: PrecisionConfig) -> SeriesSolution:
    """Series solution at index n, or its limit version for n=None."""
    if n is not None and n < 0:
        raise ConstraintViolation("series index must be >= 0 or None")
    return SeriesSolution(n=n, params=p, cfg=cfg)


def normalized_cauchy(n: int, z, p: Params, cfg: PrecisionConfig):
    """u(z) = z^n C[P_{n,n} w1](z) / gamma1_diag, the normalized first-weight
    Cauchy column entry."""
    poly = solve_pair(n, n, p, cfg)
    gn = gamma_norms(n, p, cfg)
    w1 = WeightSpec.little_q_jacobi(p.alpha)
    with mp.workdps(cfg.digits + cfg.guard):
        z = to_mp(z)
        return z ** n * cauchy_transform(poly, w1, z, p, cfg) / gn.gamma1_diag


def cauchy_column_residual(n: int, z, p: Params, cfg: PrecisionConfig):
    """Normalized residual of the third-order relation satisfied by the
    normalized Cauchy column u at the point z."""
    with mp.workdps(cfg.digits + cfg.guard):
        z = to_mp(z)
        q, al, be = p.as_mp()
        qa = q ** al
        qb = q ** be
        u0 = normalized_cauchy(n, z, p, cfg)
        u1 = normalized_cauchy(n, q * z, p, cfg)
        u2 = normalized_cauchy(n, q ** 2 * z, p, cfg)
        u3 = normalized_cauchy(n, q ** 3 * z, p, cfg)
        lhs = q ** (2 * al - be) * q ** (3 * n) * u0
        r1 = q ** (al - be) * (q ** (2 * n) * (1 + qa + qb) - q * z) * u1
        r2 = q ** al * (-q ** n * (1 / qa + 1 / qb + 1)
                        + (1 / qa + 1 / qb) * q ** 2 * z) * u2
        r3 = (1 - q ** 3 * z) * u3
        terms = (lhs, r1, r2, r3)
        return abs(lhs - r1 - r2 - r3) / max(abs(x) for x in terms)
