"""Tabulate depth by Betti numbers against depth via the canonical module."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from nccr_kit.modules import depth_via_canonical  # noqa: E402
from test_acceptance import module_corpus  # noqa: E402


def main():
    rows = module_corpus()
    width = max(len(n) for n, _ in rows)
    agree = 0
    for name, X in rows:
        a, b = X.depth(), depth_via_canonical(X)
        agree += a == b
        print("%-*s  gens=%-3d depth=%-4s canonical=%-4s %s" % (width, name, X.rank, a, b,
                                                              "ok" if a == b else "MISMATCH"))
    print("%d/%d agree" % (agree, len(rows)))


if __name__ == "__main__":
    main()
