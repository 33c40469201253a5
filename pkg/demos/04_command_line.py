"""
The histarith command line
==========================

Build two histograms from CSV files, divide them, query the result and
export a curve table.
"""

import tempfile
from pathlib import Path

import numpy as np

from histarith.cli import main

work = Path(tempfile.mkdtemp())
rng = np.random.default_rng(3)
for name, (lo, hi) in {"x": (1.0, 2.0), "y": (3.0, 6.0)}.items():
    values = rng.uniform(lo, hi, 500).tolist()
    (work / f"{name}.csv").write_text("value\n" + "\n".join(map(repr, values)) + "\n")


def run(*argv):
    argv = [str(a) for a in argv]
    print("$ histarith", " ".join(argv))
    code = main(argv)
    print(f"(exit {code})")


run("build", "--input", work / "x.csv", "--output", work / "x.json")
run("build", "--input", work / "y.csv", "--output", work / "y.json")

# div is Y/X: --y is the numerator
run("op", "--op", "div", "--x", work / "x.json", "--y", work / "y.json", "--output", work / "q.json")
run("eval", "--dist", work / "q.json", "--at", 3.0, "--what", "cdf")
run("eval", "--dist", work / "q.json", "--what", "mean")
run("quality", "--hist", work / "x.json", "--sample", work / "x.csv")
run("oracle", "--op", "div", "--x-sample", work / "x.csv", "--y-sample", work / "y.csv", "--mc", 100000, "--seed", 4)
run("curve", "--dist", work / "q.json", "--points", 64, "--output", work / "q.tsv")
print((work / "q.tsv").read_text().splitlines()[:4])
