"""
Calibrating the suppression threshold
=====================================

Double compression occasionally flips the sign of a small DC
coefficient.  The calibration sweep compresses every corpus image at
each first-stage quality, re-compresses at each second-stage quality,
and records the largest first-stage |DC| seen at a strict sign flip.
Suppressing everything up to one past that magnitude makes the matcher
immune to every flip the sweep observed.
"""
import dcsign as dc
from dcsign.calibrate import calibrate_threshold, format_report, format_report_kv

grid = (70, 75, 80, 85, 90, 95)
corpus = [img for _, img in dc.synthetic_corpus(12, 128, 128, seed=3, color=True)]
print(f"corpus: {len(corpus)} color images 128x128; grid {grid} x {grid}")

report = calibrate_threshold(corpus, grid, grid)
print()
print(format_report(report))
print()
print("machine-readable block:")
print(format_report_kv(report))

# Narrower re-compression grids can only see fewer flips.
narrow = calibrate_threshold(corpus, (85, 95), (80, 85))
print(f"\nnarrow grid (85,95)x(80,85): recommended_th={narrow.recommended_th} "
      f"(full grid gave {report.recommended_th})")
assert narrow.recommended_th <= report.recommended_th

# Sufficiency check: with the recommended threshold, every corpus image
# still matches its own double-compressed versions.
th = report.recommended_th
misses = 0
for img in corpus[:4]:
    for qf1 in (85, 95):
        coeff = dc.pixels_to_coefficients(img, qf1)
        feature = dc.extract_feature(coeff, th, image_id="x")
        stream = dc.encode_file(coeff)
        for qf2 in (71, 80):
            query = dc.decode_file(dc.recompress(stream, qf2))
            misses += not dc.match_feature(feature, query).matched
print(f"\nself-matches missed at th={th}: {misses}")
assert misses == 0
