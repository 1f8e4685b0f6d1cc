"""Per-cell build metrics."""

import json
import logging
import sys
from collections import Counter
from datetime import datetime
from pathlib import Path
from typing import Dict, List, Optional, TextIO, Union

from .config import PathConfig


class BuildMetrics:
    """Records how each (n, k) cell was built and how long it took."""

    def __init__(self):
        self.cells: List[Dict] = []
        self.base_cases: List[Dict] = []

    def record_cell(
        self,
        n: int,
        k: int,
        part: str,
        cycle_length: int,
        path_count: int,
        seconds: float,
    ):
        """Add one built cell."""
        self.cells.append(
            {
                "n": n,
                "k": k,
                "part": part,
                "cycle_length": cycle_length,
                "path_count": path_count,
                "seconds": round(seconds, 4),
            }
        )

    def record_base_case(self, k: int, source: str, seconds: float):
        """Add one middle-levels cycle supplied by a provider."""
        self.base_cases.append({"k": k, "source": source, "seconds": round(seconds, 4)})

    def calculate_metrics(self) -> Dict:
        """Summary over all recorded cells."""
        if not self.cells:
            return {}

        parts = Counter(c["part"] for c in self.cells)
        total = sum(c["seconds"] for c in self.cells)
        slowest = max(self.cells, key=lambda c: c["seconds"])
        return {
            "cells": len(self.cells),
            "parts": dict(sorted(parts.items())),
            "total_seconds": round(total, 4),
            "slowest_cell": {"n": slowest["n"], "k": slowest["k"], "seconds": slowest["seconds"]},
            "largest_cycle": max(c["cycle_length"] for c in self.cells),
            "base_cases": list(self.base_cases),
            "recorded_at": datetime.now().isoformat(),
        }

    def save_summary(self, summary_file: Optional[Union[str, Path]] = None) -> Dict:
        """Write the summary and per-cell records as JSON."""
        if summary_file is None:
            summary_file = PathConfig().metrics_file
        if not self.cells:
            logging.warning("No build metrics to save")
            return {}

        metrics = self.calculate_metrics()
        with open(summary_file, "w") as f:
            json.dump({"summary": metrics, "cells": self.cells}, f, indent=2)
        logging.info(f"Build metrics saved to {summary_file}")
        return metrics

    def print_summary(self, stream: TextIO = sys.stderr):
        """Print a short summary; stderr by default so stdout stays output-only."""
        metrics = self.calculate_metrics()
        if not metrics:
            return

        print("=" * 50, file=stream)
        print("BUILD SUMMARY", file=stream)
        print("=" * 50, file=stream)
        print(f"Cells built: {metrics['cells']}", file=stream)
        print(f"Total build time: {metrics['total_seconds']}s", file=stream)
        for part, count in metrics["parts"].items():
            print(f"  part {part}: {count}", file=stream)
        print("=" * 50, file=stream)
