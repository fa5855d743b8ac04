"""Build and verify one module per example instance of the rank-two families.

Usage: python demos/classification_tour.py [--window B]
"""

import argparse

from tgwa.qwa import classify_case, example_instances
from tgwa.verify import verify_module


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--window", type=int, default=3, help="window for infinite supports")
    args = parser.parse_args()
    print("%-3s %-20s %-34s %-8s %s" % ("#", "family", "instance", "dim", "verified"))
    for i, inst in enumerate(example_instances()):
        assert classify_case(inst.point, inst.env) == inst.case
        m = inst.build()
        window = None if m.finite else args.window
        report = verify_module(m, window, breaks=False)
        dim = str(m.dim) if m.finite else "inf"
        status = "ok" if report.ok else "FAILED"
        if m.finite and report.simplicity is not None:
            status += ", simple" if report.simplicity.simple else ", not simple"
        print("%-3d %-20s %-34s %-8s %s" % (i, inst.case, inst.note or "-", dim, status))


if __name__ == "__main__":
    main()
