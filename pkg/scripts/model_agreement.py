"""Class-level agreement between MI, ARiSA and technical debt on one source tree.

Prints the Spearman matrix and the classes each model ranks worst, which is
the quickest way to see where the three models disagree.

    python scripts/model_agreement.py path/to/src --top 5
"""

import argparse
import sys

from oomaint.evolution import CLASS_MODELS, cross_model_class_correlation
from oomaint.pipeline import AnalysisError, analyze_snapshot, class_model_columns, load_snapshot


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("source", help="source directory or facts file")
    parser.add_argument("--top", type=int, default=5)
    args = parser.parse_args(argv)

    try:
        snapshot, _ = load_snapshot(args.source)
        analysis = analyze_snapshot(snapshot)
    except AnalysisError as exc:
        print(exc, file=sys.stderr)
        return 2
    mi, arisa, td = class_model_columns(analysis)
    try:
        matrix = cross_model_class_correlation(mi, arisa, td)
    except ValueError as exc:
        print(exc, file=sys.stderr)
        return 2

    print("spearman  " + "  ".join(f"{m:>7}" for m in CLASS_MODELS))
    for name, row in zip(CLASS_MODELS, matrix):
        print(f"{name:<8}  " + "  ".join("     NA" if v is None else f"{v:7.3f}" for v in row))

    # low MI is bad; high ARiSA and high debt are bad
    worst = {
        "mi": sorted((v, c) for c, v in mi.items() if v == v),
        "arisa": sorted(((-v, c) for c, v in arisa.items())),
        "sqale": sorted(((-v, c) for c, v in td.items() if v > 0)),
    }
    for model, ranked in worst.items():
        print(f"\nworst by {model}: " + ", ".join(c for _, c in ranked[: args.top]))
    return 0


if __name__ == "__main__":
    sys.exit(main())
