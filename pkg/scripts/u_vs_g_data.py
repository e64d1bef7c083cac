"""Tabulate the limit series against the entire-product factor on a geometric
t-grid (the data behind the u/g overlay plot), CSV."""

import argparse

from mpmath import mp

from qmop import Params, PrecisionConfig, g_eval, u_series
from qmop.mop import _lattice_gap


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q", default="0.7")
    ap.add_argument("--alpha", default="0.4")
    ap.add_argument("--beta", default="0.6")
    ap.add_argument("--tmin", default="0.05")
    ap.add_argument("--tmax", default="20")
    ap.add_argument("--points", type=int, default=120)
    ap.add_argument("--digits", type=int, default=60)
    args = ap.parse_args()

    p = Params(q=args.q, alpha=args.alpha, beta=args.beta)
    cfg = PrecisionConfig(digits=args.digits, guard=40)
    ser = u_series(None, p, cfg)
    print("t,u,g,ratio")
    with mp.workdps(cfg.digits + cfg.guard):
        q, _, _ = p.as_mp()
        lo, hi = mp.mpf(args.tmin), mp.mpf(args.tmax)
        step = (hi / lo) ** (mp.one / (args.points - 1))
        t = lo
        for _ in range(args.points):
            if _lattice_gap(t, q) >= mp.mpf("1e-8"):
                u = ser.eval(t)
                g = g_eval(t, p, cfg)
                with mp.workdps(30):
                    print("%s,%s,%s,%s" % (mp.nstr(t, 10), mp.nstr(u, 10),
                                           mp.nstr(g, 10), mp.nstr(u / g, 10)))
            t *= step


if __name__ == "__main__":
    main()
