"""
Command-line round trip
=======================

Drive the ``mfou`` command from Python: synthesize a small ensemble to
disk, analyze it, and evaluate the theory for the same parameters.
The same steps work from a shell (``mfou synth ...``).
"""

import tempfile
from pathlib import Path

from mfou import io
from mfou.cli import main

with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    cfg = tmp / "small.cfg"
    cfg.write_text("n_points=131072\nt_large=0.03125\nhurst=0.5\ngamma_sq=0.04\nn_traj=4\n")

    main(["synth", "--config", str(cfg), "--out", str(tmp / "paths")])
    print("manifest intact:", io.check_manifest(tmp / "paths") == [])

    main(["analyze", str(tmp / "paths"), "--out", str(tmp / "stats"), "--orders", "2,4"])
    cols, rows = io.read_csv(tmp / "stats" / "flatness.csv")
    print(cols, *rows[4:8], sep="\n  ")

    main(["theory", "--config", str(cfg), "--out", str(tmp / "theory")])
    print("theory outputs:", sorted(p.name for p in (tmp / "theory").iterdir()))
