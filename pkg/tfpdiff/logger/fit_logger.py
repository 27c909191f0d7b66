"""
Logger for calibration runs.

Writes one JSON-lines file per run: a metadata record, then one record per
Levenberg-Marquardt trial step and one per finished fit.
"""

import json
import os
import uuid
from datetime import datetime
from typing import Any

from tfpdiff.core.types import FitResult, RunMetadata, _serialize_value


class FitLogger:
    """Logger that writes fit progress to a JSON-lines file."""

    def __init__(self, log_dir: str, file_name: str = "tfpdiff"):
        self.log_dir = log_dir
        os.makedirs(log_dir, exist_ok=True)

        timestamp = datetime.now().strftime("%Y-%m-%d_%H-%M-%S")
        run_id = str(uuid.uuid4())[:8]
        self.log_file_path = os.path.join(log_dir, f"{file_name}_{timestamp}_{run_id}.jsonl")

        self._iteration_count = 0
        self._fit_count = 0
        self._metadata_logged = False
        self._current: dict[str, Any] = {}

    def _write(self, entry: dict[str, Any]) -> None:
        with open(self.log_file_path, "a") as f:
            json.dump(entry, f)
            f.write("\n")

    def log_metadata(self, metadata: RunMetadata):
        """Log run metadata as the first entry in the file."""
        if self._metadata_logged:
            return
        self._write({"type": "metadata", "timestamp": datetime.now().isoformat(), **metadata.to_dict()})
        self._metadata_logged = True

    def log_fit_start(self, country: str | None, model: str):
        """Tag the following iteration records with the fit they belong to."""
        self._current = {"country": country, "model": model}

    def log_iteration(
        self,
        iteration: int,
        ssr: float,
        damping: float,
        params: dict[str, float],
        accepted: bool,
    ):
        """Log one trial step. Rejected steps share the iteration number of the next accepted one."""
        self._iteration_count += 1
        self._write(
            {
                "type": "iteration",
                "timestamp": datetime.now().isoformat(),
                **self._current,
                "iteration": iteration,
                "ssr": _serialize_value(ssr) if ssr != float("inf") else None,
                "damping": damping,
                "params": _serialize_value(params),
                "accepted": accepted,
            }
        )

    def log_fit(self, fit: FitResult):
        self._fit_count += 1
        self._write({"type": "fit", "timestamp": datetime.now().isoformat(), **fit.to_dict()})
        self._current = {}

    @property
    def iteration_count(self) -> int:
        return self._iteration_count

    @property
    def fit_count(self) -> int:
        return self._fit_count
