"""Walk the normal-form tables and compare every row with the computed section type.

The printed a=0 entries of family 2 disagree with the computation; the table
below shows both so the discrepancy is visible.

Run: python demos/02_catalog_tour.py   (about 30 seconds)
"""

import sys

from qutrit_sing import run_catalog

report = run_catalog(seeds=(0, 1))
sys.stdout.write(report.to_markdown())
failed = report.failures()
print(f"\n{len(report.rows) - len(failed)} of {len(report.rows)} (row, regime) pairs agree.")
for row in failed:
    seen = sorted({s.observed for s in row.samples})
    print(f"  {row.form_id} [{row.regime}]: table says {row.expected}, computed {', '.join(seen)}")
