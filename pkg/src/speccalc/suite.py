"""Deterministic suite execution and report emission.

Checks run in a small thread pool; each owns an RNG stream derived from the
suite seed and the check name, so results do not depend on scheduling.  The
report is assembled in configuration order and serializes to JSON that is
byte-identical across runs except for the ``stamp`` section (timestamp,
environment, wall clocks)."""

from __future__ import annotations

import csv
import datetime
import hashlib
import json
import platform
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from .config import SuiteConfig
from .errors import SpecCalcError
from .harness import VerificationReport

SCHEMA_VERSION = 1


def check_rng(seed: int, name: str) -> np.random.Generator:
    digest = hashlib.sha256(f"{seed}:{name}".encode()).digest()
    return np.random.default_rng(int.from_bytes(digest[:8], "little"))


@dataclass
class SuiteReport:
    seed: int
    checks: Tuple[dict, ...]
    passed: bool
    stamp: dict = field(default_factory=dict)

    def to_json_dict(self):
        return {
            "schema": SCHEMA_VERSION,
            "seed": self.seed,
            "pass": self.passed,
            "checks": list(self.checks),
            "stamp": self.stamp,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, indent=2)


def _run_one(descriptor, seed, quad):
    rng = check_rng(seed, descriptor.name)
    started = time.perf_counter()
    record = {"name": descriptor.name, "kind": descriptor.kind}
    try:
        report = descriptor.runner(rng, quad)
        if isinstance(report, VerificationReport):
            record.update(report.to_json_dict())
        else:
            record["pass"] = bool(report)
    except SpecCalcError as exc:
        record["pass"] = False
        record["error"] = f"{type(exc).__name__}: {exc}"
    return record, time.perf_counter() - started


def run_suite(config: SuiteConfig, kinds: Optional[Sequence[str]] = None,
              max_workers: int = 4) -> SuiteReport:
    """Execute every check (optionally filtered by kind).  Exit-status
    contract for callers: zero iff the report passes."""
    selected = [c for c in config.checks
                if kinds is None or c.kind in kinds]
    if not selected:
        from .errors import ConfigError
        raise ConfigError("no checks matched the requested kinds")
    records = [None] * len(selected)
    clocks = {}
    with ThreadPoolExecutor(max_workers=min(max_workers,
                                            len(selected))) as pool:
        futures = [pool.submit(_run_one, c, config.seed, config.quad)
                   for c in selected]
        for i, fut in enumerate(futures):
            record, elapsed = fut.result()
            records[i] = record
            clocks[selected[i].name] = round(elapsed, 6)
    passed = all(r.get("pass", False) for r in records)
    stamp = {
        "timestamp": datetime.datetime.now(datetime.timezone.utc)
        .isoformat(),
        "python": sys.version.split()[0],
        "numpy": np.__version__,
        "platform": platform.platform(),
        "wall_clock_s": clocks,
    }
    return SuiteReport(config.seed, tuple(records), passed, stamp)


def emit_report_json(report: SuiteReport, path: str):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(report.to_json())
        fh.write("\n")


def emit_convergence_csv(report: SuiteReport, path: str):
    """Per-check convergence series: one row per (n or truncation depth,
    residual), ascending, under the header check,n_or_T0,residual."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["check", "n_or_T0", "residual"])
        for record in report.checks:
            series = record.get("series") or []
            for point in series:
                if isinstance(point, (list, tuple)) and len(point) == 2:
                    writer.writerow([record["name"], point[0], point[1]])
