"""Recover a convergence-rate exponent from a desk-scale sweep.

The headline claim behind the schedules is a power law: excess risk decays
like N to a known negative exponent.  Sweep N over octaves at fixed epsilon,
aggregate trials by the median, fit a line through the log-log points, and
compare the slope against the theoretical exponent.

This is the downsized version of the full experiment (fewer octaves, fewer
trials), so expect the slope to land near the target rather than on it.
"""

import tempfile
from pathlib import Path

from labeldp.harness import (
    DistributionSpec,
    ExperimentConfig,
    aggregate_points,
    fit_rate,
    run_experiment,
    theoretical_exponent,
    write_fit_summary,
    write_plot_data,
    write_records,
)

TASK = "cls-local"
BETA, GAMMA, D = 1.0, 1.0, 1


def main():
    cfg = ExperimentConfig(
        task=TASK,
        dist=DistributionSpec(family="smooth", dim=D, beta=BETA, seed=7, num_classes=2),
        N_grid=tuple(2**j for j in range(10, 16)),
        eps_grid=(1.0,),
        trials=8,
        master_seed=2,
    )
    print(f"task {TASK}: N in {cfg.N_grid}, eps = {cfg.eps_grid[0]}, {cfg.trials} trials per point")
    records = run_experiment(cfg, threads=4)

    expected = theoretical_exponent(TASK, "N", BETA, D, gamma=GAMMA)
    fit = fit_rate(records, "N", expected_exponent=expected)
    points = aggregate_points(records, "N")

    print(f"{'ln N':>8} {'ln median risk':>16}")
    for x, y in points:
        print(f"{x:>8.3f} {y:>16.4f}")
    print(f"fitted slope        {fit.slope:+.4f} (std error {fit.slope_std_error:.4f})")
    print(f"theoretical slope   {expected:+.4f}")

    with tempfile.TemporaryDirectory() as tmp:
        out = Path(tmp)
        write_records(records, out / "records.csv")
        write_plot_data(points, out / "plot_data.txt")
        write_fit_summary(fit, "median", points.shape[0], out / "fit_summary.txt")
        print("\nartifacts a plotting tool would consume (fit_summary.txt):")
        for line in (out / "fit_summary.txt").read_text(encoding="utf-8").splitlines():
            print(f"  {line}")
    print("\nthe same flow is available from the shell:")
    print("  labeldp run --config sweep.toml --out out/")
    print("  labeldp fit --in out/records.csv --abscissa N --beta 1 --gamma 1 --dim 1")


if __name__ == "__main__":
    main()
