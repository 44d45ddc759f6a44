"""
Driving the command line tool
=============================

The same pipeline through ``noisy-support``: simulate, estimate, query and
measure. ``main`` takes the argument list the shell would pass.
"""

import tempfile
from pathlib import Path

from noisy_support.cli import main

work = Path(tempfile.mkdtemp())
body = work / "body.txt"
body.write_text("ball 0 0 1\n")
main(["simulate", "--body", str(body), "--n", "20000", "--sigma2", "0.01", "--seed", "4",
      "--out", str(work / "cloud.csv")])
main(["estimate", "--in", str(work / "cloud.csv"), "--sigma2", "0.01", "--out", str(work / "est.csv")])
main(["member", "--est", str(work / "est.csv"), "--point", "0.5,0.5"])
main(["hausdorff", "--est", str(work / "est.csv"), "--body", str(body), "--delta", "0.01"])
main(["endpoint1d", "--n", "1000,100000", "--trials", "3", "--seed", "4", "--out", str(work / "curve.csv")])
print((work / "curve.csv").read_text())
