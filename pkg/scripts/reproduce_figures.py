"""Default sweep plus the sign-pattern report, written under one output stem.

    python3 scripts/reproduce_figures.py [output_stem]
"""

import sys
from pathlib import Path

from eephase import report
from eephase.sweep import SweepConfig, run_sweep, write_output


def main(stem="results/figures"):
    config = SweepConfig(output_path=stem, jobs=4)
    records = run_sweep(config)
    write_output(records, "csv", stem)
    rep = report.build_report(config)
    stem = Path(stem)
    stem.with_name(stem.name + "_figure_report.json").write_text(report.dumps(rep))
    text = report.format_report(rep)
    stem.with_name(stem.name + "_figure_report.txt").write_text(text)
    print(text)


if __name__ == "__main__":
    main(*sys.argv[1:])
