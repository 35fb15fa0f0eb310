"""Persistence: binary trajectories, CSV tables and run manifests.

Binary trajectory layout (little-endian)::

    offset  type      field
    0       4 bytes   magic  b"MFOU"
    4       uint32    version (1)
    8       uint64    n_points
    16      float64   dt
    24      float64   hurst
    32      float64   gamma_sq
    40      uint64    seed
    48      uint64    traj_index
    56      float64[n_points] values

CSV files use fixed column names (see the ``*_COLUMNS`` constants).
"""

from __future__ import annotations

import csv
import hashlib
import json
import struct
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .config import SampledPath, SimConfig

MAGIC = b"MFOU"
VERSION = 1
HEADER = struct.Struct("<4sIQdddQQ")

MOMENT_COLUMNS = ("tau", "order", "value", "n_samples")
FLATNESS_COLUMNS = ("tau", "F")
HISTOGRAM_COLUMNS = ("scale", "bin_left", "bin_right", "count", "density")
PATH_COLUMNS = ("index", "time", "value")

MANIFEST_NAME = "manifest.json"


@dataclass(frozen=True)
class TrajectoryHeader:
    n_points: int
    dt: float
    hurst: float
    gamma_sq: float
    seed: int
    traj_index: int
    version: int = VERSION


def trajectory_filename(traj_index: int) -> str:
    return f"traj_{traj_index:05d}.bin"


def encode_trajectory(path: SampledPath, config: SimConfig, traj_index: int) -> bytes:
    head = HEADER.pack(MAGIC, VERSION, len(path.values), path.dt, config.hurst,
                       config.gamma_sq, config.seed, traj_index)
    return head + np.ascontiguousarray(path.values, dtype="<f8").tobytes()


def write_trajectory(file: str | Path, path: SampledPath, config: SimConfig, traj_index: int) -> str:
    """Write one trajectory and return the sha256 of the file contents."""
    data = encode_trajectory(path, config, traj_index)
    Path(file).write_bytes(data)
    return hashlib.sha256(data).hexdigest()


def read_trajectory(file: str | Path) -> tuple[TrajectoryHeader, np.ndarray]:
    data = Path(file).read_bytes()
    if len(data) < HEADER.size:
        raise ValueError(f"{file}: truncated header")
    magic, version, n, dt, h, g2, seed, idx = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise ValueError(f"{file}: bad magic {magic!r}")
    if version != VERSION:
        raise ValueError(f"{file}: unsupported version {version}")
    if len(data) != HEADER.size + 8 * n:
        raise ValueError(f"{file}: expected {n} values, file size {len(data)} does not match")
    values = np.frombuffer(data, dtype="<f8", offset=HEADER.size).astype(np.float64)
    return TrajectoryHeader(n, dt, h, g2, seed, idx, version), values


def sha256_file(file: str | Path) -> str:
    return hashlib.sha256(Path(file).read_bytes()).hexdigest()


# CSV ------------------------------------------------------------------------------

def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def _write_rows(file: str | Path, columns, rows) -> None:
    with open(file, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def read_csv(file: str | Path) -> tuple[list[str], list[list[str]]]:
    with open(file, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def write_moments_csv(file, table) -> None:
    rows = ((tau, n, table.s_n[n][j], table.n_samples_per_scale[j])
            for n in table.orders for j, tau in enumerate(table.scales))
    _write_rows(file, MOMENT_COLUMNS, rows)


def write_flatness_csv(file, table) -> None:
    if table.flatness is None:
        raise ValueError("table has no flatness (orders 2 and 4 are required)")
    _write_rows(file, FLATNESS_COLUMNS, zip(table.scales, table.flatness))


def write_histograms_csv(file, hist) -> None:
    dens = hist.density
    rows = ((tau, hist.edges[b], hist.edges[b + 1], hist.counts[j, b], dens[j, b])
            for j, tau in enumerate(hist.scales) for b in range(hist.counts.shape[1]))
    _write_rows(file, HISTOGRAM_COLUMNS, rows)


def write_path_csv(file, path: SampledPath) -> None:
    t = np.arange(len(path.values)) * path.dt
    _write_rows(file, PATH_COLUMNS, zip(range(len(path.values)), t, path.values))


# manifest -------------------------------------------------------------------------

def write_json(file: str | Path, obj) -> None:
    """Deterministic JSON (sorted keys, fixed indentation, trailing newline)."""
    Path(file).write_text(json.dumps(obj, sort_keys=True, indent=2, allow_nan=True) + "\n")


def write_manifest(out_dir: str | Path, config: SimConfig, files: dict, summary: dict) -> Path:
    """``files`` maps file names (relative to ``out_dir``) to sha256 hashes."""
    doc = {"format": "mfou-trajectories", "version": VERSION, "config": asdict(config),
           "files": dict(sorted(files.items())), "summary": summary}
    target = Path(out_dir) / MANIFEST_NAME
    write_json(target, doc)
    return target


def read_manifest(out_dir: str | Path) -> dict:
    return json.loads((Path(out_dir) / MANIFEST_NAME).read_text())


def check_manifest(out_dir: str | Path) -> list[str]:
    """Names of files whose current hash differs from the manifest (or are missing)."""
    out_dir = Path(out_dir)
    bad = []
    for name, digest in read_manifest(out_dir)["files"].items():
        f = out_dir / name
        if not f.exists() or sha256_file(f) != digest:
            bad.append(name)
    return bad
