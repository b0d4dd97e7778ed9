"""Draw probability of the percolation game against board height.

    python3 scripts/draw_decay.py --heights 1 2 5 10 20 50 100 --trials 2000 > draws.csv
"""

import argparse
import sys

from hardcore_pca import __version__
from hardcore_pca.core import validate_noise
from hardcore_pca.game import draw_csv, draw_probability


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--eps0", default="1/10")
    ap.add_argument("--eps1", default="1/10")
    ap.add_argument("--width", type=int, default=512)
    ap.add_argument("--trials", type=int, default=2000)
    ap.add_argument("--heights", type=int, nargs="+", default=[1, 2, 5, 10, 20, 50, 100])
    ap.add_argument("--seed", type=int, default=9)
    a = ap.parse_args(argv)
    p = validate_noise(a.eps0, a.eps1)
    ests = [draw_probability(a.width, h, p, a.n, a.trials, a.seed) for h in a.heights]
    sys.stdout.write(draw_csv(ests, f"artifact {__version__}\n{vars(a)}"))


if __name__ == "__main__":
    main()
