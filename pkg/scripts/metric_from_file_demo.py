#!/usr/bin/env python3
"""Classify a metric loaded from a description file.  With no argument a
temporary file reproducing the built-in regular charged black hole is
written and classified, demonstrating the file format."""

import sys
import tempfile

from curvkit import cli

DEMO = """\
dim 4
coords t r theta phi
params M e
range r 1.5 3
range theta 0.3 2.8
g[0][0] = -(1 - 2*M*r^2/(e^2+r^2)^(3/2))
g[1][1] = 1/(1 - 2*M*r^2/(e^2+r^2)^(3/2))
g[2][2] = r^2
g[3][3] = r^2*sin(theta)^2
"""


def main():
    if len(sys.argv) > 1:
        path = sys.argv[1]
        return cli.run(["classify", "--metric", path, "--format", "markdown"])
    with tempfile.NamedTemporaryFile("w", suffix=".metric",
                                     delete=False) as fh:
        fh.write(DEMO)
        path = fh.name
    print(f"classifying demo metric file {path}")
    return cli.run(["classify", "--metric", path, "--format", "markdown",
                    "--param", "M=1", "--param", "e=0.5"])


if __name__ == "__main__":
    sys.exit(main())
