"""Bundled example data: the Channing House retirement-community records.

462 residents (97 men, 365 women) with age in months at entry to the
community and at death, departure, or end of follow-up; ``event`` is 1 for an
observed death. Five raw records are structurally unusable for truncation
analysis: four residents whose recorded entry and exit ages are equal and one
whose exit age precedes the entry age. The bundled file keeps all 462 rows
exactly as distributed; the loader's default policy drops the five invalid
rows (with a warning), which is the convention under which the published
analyses of these data are reproduced to three decimals by this package.
"""

from __future__ import annotations

import csv
import hashlib
import warnings
from importlib import resources

from .data import Dataset
from .errors import ParseError, ValidationError

#: checksum of the bundled file, to distinguish data drift from code changes
CHANNING_SHA256 = "28840d6e753d4166849ce86e538318dfa3f55d4daf8cf4b54964dd471bfe072b"

_GROUPS = {"men": ("Male",), "women": ("Female",), "both": ("Male", "Female")}


def _channing_path():
    return resources.files("qitest").joinpath("data/channing.csv")


def channing_raw_rows() -> list[dict]:
    """All 462 bundled records as dicts, unvalidated."""
    path = _channing_path()
    payload = path.read_bytes()
    digest = hashlib.sha256(payload).hexdigest()
    if digest != CHANNING_SHA256:
        warnings.warn(
            f"bundled channing.csv checksum {digest} differs from the recorded "
            f"{CHANNING_SHA256}; results may not match the published analysis",
            stacklevel=2,
        )
    try:
        rows = list(csv.DictReader(payload.decode("utf-8").splitlines()))
    except csv.Error as exc:
        raise ParseError(f"bundled channing.csv is unreadable: {exc}") from exc
    return rows


def load_channing(group: str = "both", policy: str = "drop") -> Dataset:
    """Channing House data as a validated dataset.

    ``group`` selects ``"men"``, ``"women"`` or ``"both"``. ``policy``
    controls rows violating entry < exit: ``"drop"`` removes them with a
    warning (default; reproduces the published analyses), ``"strict"``
    raises a ValidationError naming the rows.
    """
    group = group.strip().lower()
    if group not in _GROUPS:
        raise ValueError(f"group must be one of {sorted(_GROUPS)}, got {group!r}")
    if policy not in ("drop", "strict"):
        raise ValueError(f"policy must be 'drop' or 'strict', got {policy!r}")
    wanted = _GROUPS[group]
    entry, exit_, event, bad_rows = [], [], [], []
    for i, row in enumerate(channing_raw_rows()):
        if row["sex"] not in wanted:
            continue
        e = float(row["entry_age_months"])
        x = float(row["exit_age_months"])
        if not e < x:
            bad_rows.append(i)
            continue
        entry.append(e)
        exit_.append(x)
        event.append(int(row["event"]))
    if bad_rows:
        if policy == "strict":
            raise ValidationError(f"entry < exit violated at bundled row(s) {bad_rows}")
        warnings.warn(
            f"dropped {len(bad_rows)} record(s) violating entry < exit "
            f"(bundled rows {bad_rows})",
            stacklevel=2,
        )
    return Dataset(entry, exit_, event)
