"""Corpus run reporting: delimited results plus summary figures.

A corpus run produces one row per test case.  The rows go to a CSV
file; alongside it, a couple of matplotlib figures summarize verdict
counts and runtime distribution for a quick visual sanity check.
"""

from __future__ import annotations

import csv
from dataclasses import asdict, dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


@dataclass
class CaseResult:
    index: int
    program: str
    init: str
    check: str
    verdict: str
    depth: int
    seconds: float


FIELDS = ["index", "program", "init", "check", "verdict", "depth", "seconds"]


def write_csv(rows: list[CaseResult], path: Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=FIELDS)
        writer.writeheader()
        for row in rows:
            writer.writerow(asdict(row))


def write_figures(rows: list[CaseResult], outdir: Path) -> list[Path]:
    """Render summary figures into outdir; returns the files written."""
    outdir.mkdir(parents=True, exist_ok=True)
    written = []

    checks = sorted({r.check for r in rows})
    verdicts = ["holds", "fails", "unknown"]
    fig, ax = plt.subplots(figsize=(7, 4))
    width = 0.25
    for i, verdict in enumerate(verdicts):
        counts = [
            sum(1 for r in rows if r.check == c and r.verdict == verdict)
            for c in checks
        ]
        ax.bar([x + i * width for x in range(len(checks))], counts, width, label=verdict)
    ax.set_xticks([x + width for x in range(len(checks))])
    ax.set_xticklabels(checks, rotation=20, ha="right")
    ax.set_ylabel("cases")
    ax.set_title("verdicts by check")
    ax.legend()
    fig.tight_layout()
    p = outdir / "verdicts.png"
    fig.savefig(p)
    plt.close(fig)
    written.append(p)

    fig, ax = plt.subplots(figsize=(7, 4))
    ax.hist([r.seconds * 1000 for r in rows], bins=40)
    ax.set_xlabel("case runtime (ms)")
    ax.set_ylabel("cases")
    ax.set_title("runtime distribution")
    fig.tight_layout()
    p = outdir / "runtimes.png"
    fig.savefig(p)
    plt.close(fig)
    written.append(p)

    return written
