"""Compare flat and smooth Cesaro windows on the even-alpha series.

For each (gamma, x) the script sums the series to N terms, averages the last
quarter of the partial sums with window powers 0 (flat) and 8 (sin^8 bump),
and prints the error against the closed form as CSV. The window only pays
off when the terms decay slowly, e.g. alpha = 8 with gamma just above 4.

    python3 scripts/cesaro_window_study.py --alpha 8 --gamma 4.5 --gamma 5.5 --n 4096 --n 65536
"""

import csv
import sys

import click
import numpy as np

from spikedosc.accel import cesaro_window_mean
from spikedosc.hyperfun import kummer_iter
from spikedosc.sums import closed_sum, target_coefficients


def partial_sums(alpha, gamma, x, n):
    it = kummer_iter(gamma, x * x)
    next(it)  # n = 0 term is not part of the series
    f = np.fromiter((next(it) for _ in range(n)), float, n)
    return np.cumsum(target_coefficients(alpha)(np.arange(1, n + 1)) * f)


@click.command()
@click.option("--alpha", type=float, default=2.0, show_default=True)
@click.option("--gamma", "gammas", type=float, multiple=True, default=(0.5, 1.5, 3.0), show_default=True)
@click.option("--x", "xs", type=float, multiple=True, default=(0.5, 1.0, 2.0), show_default=True)
@click.option("--n", "ns", type=int, multiple=True, default=(4096, 65536), show_default=True)
def main(alpha, gammas, xs, ns):
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["alpha", "gamma", "x", "terms", "raw_error", "flat_error", "smooth_error"])
    for g in gammas:
        for x in xs:
            exact = closed_sum(alpha, g, x)[0]
            for n in ns:
                ps = partial_sums(alpha, g, x, n)
                out.writerow([alpha, g, x, n] + [f"{abs(v - exact):.3e}" for v in
                                          (ps[-1], cesaro_window_mean(ps, power=0),
                                           cesaro_window_mean(ps))])


if __name__ == "__main__":
    main()
