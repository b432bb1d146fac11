"""
Collapse check on the bundled manifest
======================================

Runs circuit -> Tseitin CNF -> restriction -> window -> profile merge -> rank
for each family and prints a small table against ceil(sqrt(n)).
"""

from spdp.pipeline import run_manifest

runs = run_manifest("table1_scaled")
head = f"{'family':<22}{'n':>6}{'live':>6}{'P':>4}{'rank':>7}{'thr':>5}  pass"
print(head)
print("-" * len(head))
for r in runs:
    mark = "yes" if r.passed else "no"
    print(f"{r.family:<22}{r.n:>6}{r.live_vars:>6}{r.profiles:>4}{r.gamma:>7}{r.threshold:>5}  {mark}")

# stage-level detail for the first row
first = runs[0]
for name, info in first.stages.items():
    print(f"{name:>10}: {info}")
