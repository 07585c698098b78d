"""Console entry point.

BLAS pools are pinned to one thread before numpy ever loads: emitted numbers
must not depend on reduction order, so task-level parallelism is owned
exclusively by the --threads flag.  Importing the package root is
side-effect-free, which keeps the pinning effective under both the installed
script and ``python -m``.
"""

import os
import sys


def main() -> None:
    for var in ("OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS",
                "OMP_NUM_THREADS", "NUMEXPR_NUM_THREADS",
                "VECLIB_MAXIMUM_THREADS"):
        os.environ[var] = "1"
    from .cli import run
    sys.exit(run())


if __name__ == "__main__":
    main()
