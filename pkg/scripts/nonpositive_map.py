"""Chirped spectrum whose rescaled decoherence exceeds one: a non-positive dephasing map.

Sweeps the ratio |kappa(0)| / max|kappa| and reports how long |D| stays above
1.1 and the most negative Choi eigenvalue.
"""
import argparse

import numpy as np

from dephasim.channel import choi_eigenvalues
from dephasim.freq import chirped_gaussian, forward_kappa, scaled_decoherence


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--peak", type=float, default=0.8)
    ap.add_argument("--pixels", type=int, default=4096)
    ap.add_argument("--window", type=float, default=4.0)
    ap.add_argument("--csv", help="write d,abs_D,min_choi for kappa0 = 0.6")
    args = ap.parse_args()

    sigma = 1 / (2 * np.pi * args.peak ** 2)  # unit-width bump
    d = np.linspace(0, args.window, 401)
    print(f"{'kappa0':>8}{'max|D|':>10}{'frac>=1.1':>11}{'min eig':>10}")
    for k0 in (0.75, 0.7, 0.6, 0.5, 0.4):
        dist = chirped_gaussian(args.pixels, sigma, peak=args.peak, kappa0=k0)
        D = scaled_decoherence(forward_kappa(dist, d)).kappa
        eig = np.array([choi_eigenvalues(complex(v))[0] for v in D])
        print(f"{k0:>8.2f}{np.abs(D).max():>10.3f}{np.mean(np.abs(D) >= 1.1):>11.1%}{eig.min():>10.3f}")
        if args.csv and k0 == 0.6:
            np.savetxt(args.csv, np.column_stack([d, np.abs(D), eig]), delimiter=",",
                       header="d,abs_D,min_choi", comments="", fmt="%.10g")


if __name__ == "__main__":
    main()
