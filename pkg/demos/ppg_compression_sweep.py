#!/usr/bin/env python3
"""Map compression quality over the bundled pulse recordings.

For every (decomposition level, threshold) cell the sweep reports the mean
trace distance and the compression-ratio statistics across recordings,
flagging cells whose mean CR falls in the regime where the sparse loader
beats dense encoding without giving up reconstruction quality.  The tau=0
column is lossless by construction and acts as a sanity check.
"""

from __future__ import annotations

import sys
from pathlib import Path

from hqsp.pipeline import DEFAULT_PPG_DIR, sweep_ppg, write_sweep_csv


def main() -> None:
    dataset = Path(sys.argv[1]) if len(sys.argv) > 1 else DEFAULT_PPG_DIR
    cells = sweep_ppg(
        levels=range(10, 15),
        taus=(0.0, 0.002, 0.0041, 0.008),
        dataset_dir=dataset,
    )

    print(f"{'L':>3} {'tau':>7} {'mean TD':>8} {'mean CR':>9} {'std':>6}  regime")
    for c in cells:
        flag = "valid" if c.in_valid_regime else ""
        print(
            f"{c.levels:3d} {c.tau:7.4f} {c.mean_td:8.4f} "
            f"{c.mean_cr:9.1f} {c.std_cr:6.1f}  {flag}"
        )

    out = Path("ppg_sweep.csv")
    write_sweep_csv(cells, out)
    print(f"\nwrote {len(cells)} cells to {out}")


if __name__ == "__main__":
    main()
