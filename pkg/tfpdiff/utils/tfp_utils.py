import math
import os
import shutil
import tempfile
from collections.abc import Mapping

import numpy as np

from tfpdiff.errors import DomainError


def _backup(path: str) -> str | None:
    """Hard-link (or copy) an existing target next to itself; None when there is no target."""
    if not os.path.exists(path):
        return None
    fd, backup = tempfile.mkstemp(dir=os.path.dirname(os.path.abspath(path)), prefix=".tfpdiff-", suffix=".bak")
    os.close(fd)
    os.unlink(backup)
    try:
        os.link(path, backup)
    except OSError:
        shutil.copy2(path, backup)
    return backup


def atomic_write_all(outputs: Mapping[str, bytes]) -> None:
    """
    Stage every output in a temporary file next to its target, then rename them
    all into place. Nothing is renamed unless every file was staged. If a rename
    fails, targets already replaced are restored from backups (or removed when
    they did not exist before) and the error is re-raised.
    """
    staged: list[tuple[str, str]] = []
    backups: dict[str, str | None] = {}
    replaced: list[str] = []
    try:
        for path, data in outputs.items():
            directory = os.path.dirname(os.path.abspath(path))
            fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".tfpdiff-", suffix=".tmp")
            staged.append((tmp_path, path))
            with os.fdopen(fd, "wb") as f:
                f.write(data)
        for _, path in staged:
            backups[path] = _backup(path)
        try:
            while staged:
                tmp_path, path = staged[0]
                os.replace(tmp_path, path)
                replaced.append(path)
                staged.pop(0)
        except OSError:
            for path in reversed(replaced):
                backup = backups[path]
                if backup is None:
                    os.unlink(path)
                else:
                    os.replace(backup, path)
                    backups[path] = None
            raise
    finally:
        for tmp_path, _ in staged:
            if os.path.exists(tmp_path):
                os.unlink(tmp_path)
        for backup in backups.values():
            if backup is not None and os.path.exists(backup):
                os.unlink(backup)


def atomic_write(path: str, data: bytes) -> None:
    atomic_write_all({path: data})


def _number(text: str, what: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise DomainError(f"{what} {text!r} is not a number", component="cli") from None
    if not math.isfinite(value):
        raise DomainError(f"{what} must be finite, got {text!r}", component="cli")
    return value


def parse_grid(text: str) -> np.ndarray:
    """'start:end:step' -> start, start+step, ..., end (end included when hit)."""
    parts = text.split(":")
    if len(parts) != 3:
        raise DomainError(f"grid must look like start:end:step, got {text!r}", component="cli")
    start, end, step = (_number(p, "grid bound") for p in parts)
    if step <= 0 or end < start:
        raise DomainError(f"grid needs step > 0 and end >= start, got {text!r}", component="cli")
    count = math.floor((end - start) / step + 1e-9) + 1
    return start + step * np.arange(count)


def parse_years(text: str) -> list[int]:
    """'2030,2050' or '1995:2024' (inclusive range)."""
    try:
        if ":" in text:
            first, last = (int(p) for p in text.split(":"))
            years = list(range(first, last + 1))
        else:
            years = [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise DomainError(f"cannot read years from {text!r}", component="cli") from None
    if not years:
        raise DomainError(f"no years in {text!r}", component="cli")
    return years


def parse_countries(text: str) -> list[str]:
    countries = [c.strip() for c in text.split(",") if c.strip()]
    if len(set(countries)) != len(countries):
        raise DomainError(f"duplicate country in {text!r}", component="cli")
    return countries
