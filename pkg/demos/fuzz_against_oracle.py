"""Differential testing of the three engines against the brute-force semantics.

Run:  python demos/fuzz_against_oracle.py [count]
"""
import io
import sys

from dimres.oracle.fuzz import run_fuzz
from dimres.oracle.generate import GenParams

count = int(sys.argv[1]) if len(sys.argv) > 1 else 50
report = run_fuzz(GenParams(seed=0), count)
print(report.summary())

manifest = io.StringIO()
report.write_manifest(manifest)
print("\nfirst manifest rows:")
for line in manifest.getvalue().splitlines()[:4]:
    cols = line.split("\t")
    print("  " + " | ".join(cols[:1] + cols[2:]))
