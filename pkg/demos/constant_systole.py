"""Covers of growing degree that keep the same shortest element x^3."""

from sysgirth.pipelines import pipeline_constant_systole

report = pipeline_constant_systole(3, 6, [150, 300, 600], seed=0, method="planting")
for size, info in report.intermediates.items():
    print(size, info["witness"], "second cycle", info["second_cycle_length"],
          "host girth", info["host_girth"])
print("translation length of the witness", report.bounds["witness_translation_length"])
print("failed checks:", report.failures() or "none")
