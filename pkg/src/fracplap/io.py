"""CSV / JSON persistence for snapshots, profiles, weights and reports.

Numbers are written with 17 significant digits so that every file
round-trips to the exact float64 values.
"""

import csv
import json
from pathlib import Path

import numpy as np

FMT = "%.17g"


def write_snapshot_csv(path, x, u):
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "u"])
        for xi, ui in zip(x, u):
            w.writerow([FMT % xi, FMT % ui])


def read_snapshot_csv(path):
    with Path(path).open(newline="") as fh:
        rows = list(csv.reader(fh))
    if rows[0] != ["x", "u"]:
        raise ValueError(f"unexpected snapshot header {rows[0]!r} in {path}")
    data = np.array([[float(a), float(b)] for a, b in rows[1:]])
    return data[:, 0], data[:, 1]


def write_profile_csv(path, x, F):
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "F"])
        for xi, fi in zip(x, F):
            w.writerow([FMT % xi, FMT % fi])


def write_weights_csv(out_dir, kw):
    out_dir = Path(out_dir)
    np.savetxt(out_dir / "pair_weights.csv", kw.W, fmt=FMT, delimiter=",")
    np.savetxt(out_dir / "tail_weights.csv", kw.T, fmt=FMT, delimiter=",")


def _jsonable(x):
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def write_json(path, obj):
    with Path(path).open("w") as fh:
        json.dump(_jsonable(obj), fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_json(path):
    with Path(path).open() as fh:
        return json.load(fh)


def trajectory_summary(traj, config=None):
    """JSON-ready run summary: times, norms, mass and per-step reports."""
    out = {
        "times": list(traj.times),
        "mass": list(traj.mass()),
        "l1": list(traj.norms(1)),
        "l2": list(traj.norms(2)),
        "linf": list(traj.norms(np.inf)),
        "steps": [
            {
                "mass": r.mass,
                "l1": r.l1,
                "l2": r.l2,
                "linf": r.linf,
                "iterations": r.iterations,
                "residual": r.residual,
                "mass_loss_rate": r.mass_loss_rate,
            }
            for r in traj.per_step
        ],
    }
    if config is not None:
        out["config"] = config
    return out
