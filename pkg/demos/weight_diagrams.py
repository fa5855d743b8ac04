"""Write a DOT weight diagram for every module config in configs/.

Usage: python demos/weight_diagrams.py [OUTDIR]
Render with e.g. ``neato -n -Tsvg OUTDIR/rank2_two_rows.dot``.
"""

import glob
import os
import sys

from tgwa.cli import main as tgwa

HERE = os.path.dirname(os.path.abspath(__file__))


def main():
    outdir = sys.argv[1] if len(sys.argv) > 1 else "diagrams"
    os.makedirs(outdir, exist_ok=True)
    for path in sorted(glob.glob(os.path.join(HERE, os.pardir, "configs", "*.toml"))):
        name = os.path.splitext(os.path.basename(path))[0]
        out = os.path.join(outdir, name + ".dot")
        code = tgwa(["diagram", "--config", path, "--out", out])
        print("%-16s exit %d -> %s" % (name, code, out))


if __name__ == "__main__":
    main()
