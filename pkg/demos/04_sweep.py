"""A small seeded sweep of the cumulative mean; the full-size run is ``integrable-pcf sweep``."""

from integrable_pcf import SweepConfig, run_sweep

cfg = SweepConfig.from_dict({"phi": [1, 0, 0], "samples": 20, "N_grid": [50, 100, 200, 400], "seed": 7})
records, summary = run_sweep(cfg)
for row in summary["per_N"]:
    print(f"N={row['N']:4d}  variance {row['variance']:.3e}  median |dev| {row['median_abs_dev']:.4f}")
print("log-log slope of the variance:", round(summary["slope_vs_N"], 3))
