"""Replay the generated-code scenario on the synthetic three-release project.

Writes the releases and a manifest, runs the ``history`` command and prints
the score cards, key versions and the packages behind half of each release's
technical debt.

    python scripts/generated_code_history.py --out runs/generated
"""

import argparse
import sys
from pathlib import Path

from oomaint.cli import main as oomaint_main
from oomaint.synthetic import write_history


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="runs/generated-code", help="working directory")
    parser.add_argument("--states", type=int, default=12, help="size of the generated lexer")
    parser.add_argument("--jobs", type=int, default=1)
    args = parser.parse_args(argv)

    root = Path(args.out)
    manifest = write_history(root / "sources", generated_states=args.states)
    report_dir = root / "report"
    code = oomaint_main(["history", "--manifest", str(manifest), "--out", str(report_dir), "--jobs", str(args.jobs)])
    if code != 0:
        return code

    print((report_dir / "scorecards.csv").read_text(), end="")
    keys = (report_dir / "key_versions.txt").read_text().split()
    print(f"\nkey versions: {', '.join(keys) or '-'}")
    for cov in sorted((report_dir / "coverage").glob("*.csv")):
        rows = cov.read_text().splitlines()[1:]
        print(f"{cov.stem}: 50% of debt in {', '.join(r.split(',')[0] for r in rows)}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
