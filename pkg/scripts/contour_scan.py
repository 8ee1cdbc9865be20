"""Scan contour quadrature against the even-alpha closed forms.

Prints, per (alpha, x, c), the contour value, its error estimate and the
deviation from the closed form, with gamma = alpha/2 + offset.

    python3 scripts/contour_scan.py --alpha 2 --alpha 6 --c 1 --c 3
"""

import csv
import sys
import time

import click
import numpy as np

from spikedosc.errors import SpikedOscError
from spikedosc.sums import SumQuery, closed_sum, contour_sum


@click.command()
@click.option("--alpha", "alphas", type=float, multiple=True, default=(2.0, 4.0, 6.0, 8.0), show_default=True)
@click.option("--offset", type=float, default=1.5, show_default=True, help="gamma - alpha/2")
@click.option("--c", "cs", type=float, multiple=True, help="Abscissae to try (default max(1, x^2)).")
@click.option("--x-min", type=float, default=0.25, show_default=True)
@click.option("--x-max", type=float, default=3.0, show_default=True)
@click.option("--x-steps", type=int, default=12, show_default=True)
def main(alphas, offset, cs, x_min, x_max, x_steps):
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["alpha", "gamma", "x", "c", "contour", "error_estimate", "deviation", "seconds", "error"])
    for alpha in alphas:
        g = alpha / 2 + offset
        for x in np.linspace(x_min, x_max, x_steps):
            closed = closed_sum(alpha, g, x)[0]
            for c in cs or (max(1.0, x * x),):
                t0 = time.perf_counter()
                try:
                    est = contour_sum(SumQuery(alpha, g, x), c)
                except SpikedOscError as exc:
                    out.writerow([alpha, g, f"{x:.6g}", c, "", "", "", "", str(exc)])
                    continue
                out.writerow([alpha, g, f"{x:.6g}", c, f"{est.value:.17g}", f"{est.error_estimate:.2e}",
                              f"{abs(est.value - closed):.2e}", f"{time.perf_counter() - t0:.3f}", ""])


if __name__ == "__main__":
    main()
