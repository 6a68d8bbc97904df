#!/usr/bin/env python3
"""Run the full hypothesis check over every group file in a directory.

Prints each report and a one-line summary per (file, geodesic) pair.
Exit code is the worst verdict encountered (0 affirmative, 1 negative,
2 inconclusive, 3 error), matching the CLI contract.
"""

import argparse
import sys
from pathlib import Path

from hyptube.cli import EXIT_ERROR, parse_group_file, run


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("directory", nargs="?", default="groups")
    ap.add_argument("--max-word-length", type=int, default=4)
    ap.add_argument("--cutoff", type=float, default=4.0)
    ap.add_argument("--format", choices=("text", "json"), default="text")
    args = ap.parse_args()

    worst = 0
    files = sorted(Path(args.directory).glob("*.grp"))
    if not files:
        print(f"no .grp files under {args.directory!r}", file=sys.stderr)
        return EXIT_ERROR
    for path in files:
        try:
            gf = parse_group_file(path.read_text())
        except ValueError as exc:
            print(f"{path}: parse error: {exc}", file=sys.stderr)
            worst = max(worst, EXIT_ERROR)
            continue
        for gname in gf.geodesics:
            print(f"=== {path} :: {gname} ===")
            code = run(
                [
                    "check",
                    str(path),
                    gname,
                    "--max-word-length",
                    str(args.max_word_length),
                    "--cutoff",
                    str(args.cutoff),
                    "--format",
                    args.format,
                ]
            )
            print(f"--- exit code {code}\n")
            worst = max(worst, code)
    return worst


if __name__ == "__main__":
    raise SystemExit(main())
