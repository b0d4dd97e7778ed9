"""?-density over time for several noise levels and n, as one long CSV.

    python3 scripts/density_decay.py --n 2 3 --eps 1/10,1/10 1/4,1/10 --width 4096 --steps 2000 > decay.csv
"""

import argparse
import csv
import sys

from hardcore_pca import __version__
from hardcore_pca.core import SeedSpec, validate_noise
from hardcore_pca.pca import PcaSpec, all_question, density_run


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[2, 3])
    ap.add_argument("--eps", nargs="+", default=["1/10,1/10", "1/4,1/10", "1/10,1/4"], help="eps0,eps1 pairs")
    ap.add_argument("--width", type=int, default=4096)
    ap.add_argument("--steps", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--every", type=int, default=10, help="keep every k-th time step")
    a = ap.parse_args(argv)
    print(f"# artifact {__version__}\n# {vars(a)}")
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["n", "eps0", "eps1", "t", "density_question", "density_one"])
    for n in a.n:
        for pair in a.eps:
            p = validate_noise(*pair.split(","))
            d = density_run(PcaSpec(n, p), a.width, a.steps, all_question(a.width), SeedSpec(a.seed))
            for t in range(0, a.steps + 1, a.every):
                w.writerow([n, p.eps0, p.eps1, t, repr(float(d[t, 0])), repr(float(d[t, 1]))])


if __name__ == "__main__":
    main()
