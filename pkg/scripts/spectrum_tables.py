"""Oracle spectra of the CES potentials next to their exact level lists.

    python3 scripts/spectrum_tables.py [--L 12] [--N 4001]
"""
import argparse

import numpy as np

from susyqes.ces import SolvableBase, ces_model, example1_model, example2_model, exact_spectrum
from susyqes.oracle import Grid, solve


def table(title, model, levels, grid):
    exact = exact_spectrum(model, levels - 1)
    res = solve(model.V_minus, grid, m=levels, refine=True)
    print(f"\n{title}  (eps = {model.eps:g})")
    print(f"{'n':>3} {'oracle':>14} {'exact':>10} {'|diff|':>10} {'E(h/2)-E(h)':>12}")
    for n, e in enumerate(res.eigenvalues):
        ref = exact.levels[n] if n < len(exact.levels) else None
        diff = "" if ref is None else f"{abs(e - ref):10.2e}"
        ref_s = "-" if ref is None else f"{ref:10.4f}"
        print(f"{n:>3} {e:14.8f} {ref_s:>10} {diff:>10} {res.convergence[n]:12.2e}")
    if exact.continuum is not None:
        print(f"    continuum threshold {exact.continuum:g}; chain-derived levels: {exact.derived_by_chain}")


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--L", type=float, default=12.0)
    p.add_argument("--N", type=int, default=4001)
    args = p.parse_args()
    grid = Grid(args.L, args.N)
    for k in (1, 2):
        table(f"phi = P_{2 * k + 1}", example1_model(k), 6, grid)
    table("phi = P_5 / P_2", example2_model(2, 1), 5, grid)
    for alpha in (2.5, 3.3):
        for k in (1, 3, 5):
            model = ces_model(SolvableBase("rosen-morse", alpha), k)
            n_bound = len(exact_spectrum(model, 11).levels)
            table(f"Rosen-Morse alpha = {alpha}, k = {k}", model, n_bound, grid)


if __name__ == "__main__":
    np.set_printoptions(precision=6)
    main()
