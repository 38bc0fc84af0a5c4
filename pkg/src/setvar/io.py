"""CSV and JSON-lines readers/writers for sampled paths."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .convex import Interval, body_from_json, body_to_json
from .variation import SampledPath, SetValuedSampledPath


def fmt(x: float) -> str:
    """Shortest text that keeps 17 significant digits."""
    return format(float(x), ".17g")


def write_path_csv(path: SampledPath, dest) -> None:
    """Write ``t,v1[,v2,v3]`` rows to a file name or an open text stream."""
    if hasattr(dest, "write"):
        _path_rows(path, dest)
        return
    with open(dest, "w", newline="") as fh:
        _path_rows(path, fh)


def _path_rows(path: SampledPath, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["t"] + [f"v{k + 1}" for k in range(path.dim)])
    for t, row in zip(path.grid, path.values):
        w.writerow([fmt(t)] + [fmt(v) for v in row])


def _read_rows(src) -> tuple[list[str], np.ndarray]:
    with open(src, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ValueError(f"{src}: empty file")
    header = [h.strip() for h in rows[0]]
    data = np.array([[float(x) for x in r] for r in rows[1:] if r], dtype=float)
    return header, data.reshape(-1, len(header))


def read_path_csv(src) -> SampledPath:
    header, data = _read_rows(src)
    if header[0] != "t" or len(header) < 2:
        raise ValueError(f"{src}: expected header t,v1[,v2,v3], got {','.join(header)}")
    return SampledPath(data[:, 0], data[:, 1:])


def write_interval_csv(path: SetValuedSampledPath, dest) -> None:
    with open(dest, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "lo", "hi"])
        for t, B in zip(path.grid, path.bodies):
            w.writerow([fmt(t), fmt(B.lo), fmt(B.hi)])


def read_interval_csv(src) -> SetValuedSampledPath:
    header, data = _read_rows(src)
    if header != ["t", "lo", "hi"]:
        raise ValueError(f"{src}: expected header t,lo,hi, got {','.join(header)}")
    return SetValuedSampledPath.from_intervals(data[:, 0], data[:, 1], data[:, 2])


def write_body_jsonl(path: SetValuedSampledPath, dest) -> None:
    """One JSON object per node: {"t": ..., "body": {...}}."""
    with open(dest, "w") as fh:
        for t, B in zip(path.grid, path.bodies):
            fh.write(json.dumps({"t": float(t), "body": body_to_json(B)}) + "\n")


def read_body_jsonl(src) -> SetValuedSampledPath:
    grid, bodies = [], []
    with open(src) as fh:
        for line in fh:
            if line.strip():
                obj = json.loads(line)
                grid.append(float(obj["t"]))
                bodies.append(body_from_json(obj["body"]))
    return SetValuedSampledPath(np.array(grid), tuple(bodies))


def read_set_path(src) -> SetValuedSampledPath:
    """Interval CSV or body JSON lines, chosen by file suffix."""
    if Path(src).suffix in (".jsonl", ".json"):
        return read_body_jsonl(src)
    return read_interval_csv(src)


def write_set_path(path: SetValuedSampledPath, dest) -> None:
    if all(isinstance(B, Interval) for B in path.bodies) and Path(dest).suffix == ".csv":
        write_interval_csv(path, dest)
    else:
        write_body_jsonl(path, dest)
