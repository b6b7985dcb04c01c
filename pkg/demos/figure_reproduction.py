"""Reproduce a full error-rate figure through the command-line runner.

The bundled presets pair a constellation with an SNR grid, curve
selection, and trial budget.  This script runs the smallest one at a
reduced budget, then prints the wide-format CSV and points at the SVG.

The shipped budgets are desk-scale: a preset finishes in seconds and
resolves error rates down to roughly 1e-4.  Publication-depth curves
(error rates near 1e-5 and below at the high-SNR end) need 1e8+ trials
per point -- hours of compute; pass a larger ``--max-trials`` for that.
Thread count never changes the output bytes, only the wall time.
"""

import tempfile
from pathlib import Path

from latticesep.cli import main, preset_names

print("bundled presets:", ", ".join(preset_names()))

with tempfile.TemporaryDirectory() as tmp:
    status = main(
        [
            "run",
            "--figure",
            "a2-4pam",
            "--seed",
            "7",
            "--max-trials",
            "50000",
            "--out",
            tmp,
            "--plot",
            "--threads",
            "2",
        ]
    )
    print("\nexit status:", status)

    wide = Path(tmp) / "a2-4pam-curves.csv"
    lines = wide.read_text().splitlines()
    print(f"\n{wide.name}: {len(lines) - 1} grid points")
    print(lines[0])
    for line in lines[1:25:6]:
        print(line)

    svg = Path(tmp) / "a2-4pam.svg"
    print(f"\n{svg.name}: {svg.stat().st_size} bytes of standalone SVG")
