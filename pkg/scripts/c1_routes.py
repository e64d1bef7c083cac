"""Compare the two routes to the diagonal norm-scaling constant: sequence
extrapolation against the direct formula at several points."""

import argparse

from mpmath import mp

from qmop import Params, c1_crosscheck, config_for, gamma_scaling


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q", default="0.7")
    ap.add_argument("--alpha", default="0.4")
    ap.add_argument("--beta", default="0.6")
    ap.add_argument("--nmax", type=int, default=12)
    ap.add_argument("--z", nargs="+", default=["0.5", "0.3"])
    args = ap.parse_args()

    p = Params(q=args.q, alpha=args.alpha, beta=args.beta)
    cfg = config_for(args.nmax, args.q)
    est = gamma_scaling(args.nmax, "C1", p, cfg)
    with mp.workdps(30):
        print("route A (sequence to n=%d, extrapolated): %s"
              % (args.nmax, mp.nstr(est.extrapolated, 10)))
        print("z,route_b,rel_gap")
        for zs in args.z:
            b = c1_crosscheck(args.nmax, zs, p, cfg)
            print("%s,%s,%s"
                  % (zs, mp.nstr(b, 10),
                     mp.nstr(abs(est.extrapolated - b) / abs(b), 4)))


if __name__ == "__main__":
    main()
