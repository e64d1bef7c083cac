"""Scan the ray-limit constant over n and print its stabilization, CSV."""

import argparse

from mpmath import mp

from qmop import Params, PrecisionConfig, omega1


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q", default="0.7")
    ap.add_argument("--alpha", default="0.4")
    ap.add_argument("--beta", default="0.6")
    ap.add_argument("--nmax", type=int, default=32)
    ap.add_argument("--step", type=int, default=4)
    ap.add_argument("--digits", type=int, default=80)
    args = ap.parse_args()

    p = Params(q=args.q, alpha=args.alpha, beta=args.beta)
    cfg = PrecisionConfig(digits=args.digits, guard=40)
    print("n,omega,diff_prev")
    prev = None
    with mp.workdps(30):
        for n in range(args.step, args.nmax + 1, args.step):
            v = omega1(n, p, cfg)
            d = "" if prev is None else mp.nstr(abs(v - prev), 6)
            print("%d,%s,%s" % (n, mp.nstr(v, 15), d))
            prev = v
        vinf = omega1(None, p, cfg)
        print("inf,%s,%s" % (mp.nstr(vinf, 15), mp.nstr(abs(vinf - prev), 6)))


if __name__ == "__main__":
    main()
