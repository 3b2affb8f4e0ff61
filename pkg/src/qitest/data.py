"""Core data container for left-truncated (optionally right-censored) samples."""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, NamedTuple

import numpy as np

from .errors import ValidationError
from .kernels import rank_transform


class Observation(NamedTuple):
    """One subject: entry (truncation) time, observed exit time, event flag.

    ``event`` is 1 when the exit is an observed failure and 0 when censored.
    """

    entry: float
    exit: float
    event: int = 1


class Dataset:
    """Immutable column store of observations with lazily cached ranks.

    Every subject must satisfy entry < exit (the truncation condition); the
    constructor enforces this. Rank transforms of the entry and exit columns
    are computed at most once per instance, since the rank kernel needs them
    for every pair.
    """

    def __init__(self, entry, exit, event=None):
        entry = np.asarray(entry, dtype=float)
        exit = np.asarray(exit, dtype=float)
        if event is None:
            event = np.ones(entry.shape, dtype=np.int8)
        else:
            event = np.asarray(event).astype(np.int8)
        if entry.ndim != 1 or entry.shape != exit.shape or entry.shape != event.shape:
            raise ValidationError("entry, exit and event must be 1-d arrays of equal length")
        if entry.size == 0:
            raise ValidationError("dataset must contain at least one observation")
        bad = np.flatnonzero(~(entry < exit))
        if bad.size:
            raise ValidationError(
                f"entry < exit violated at row(s) {bad[:10].tolist()}"
                + ("..." if bad.size > 10 else "")
            )
        if not np.isin(event, (0, 1)).all():
            raise ValidationError("event flags must be 0 or 1")
        for a in (entry, exit, event):
            a.flags.writeable = False
        self.entry = entry
        self.exit = exit
        self.event = event

    @classmethod
    def from_observations(cls, observations: Iterable[Observation]) -> "Dataset":
        rows = [Observation(*o) for o in observations]
        if not rows:
            raise ValidationError("dataset must contain at least one observation")
        return cls([o.entry for o in rows], [o.exit for o in rows], [o.event for o in rows])

    @property
    def n(self) -> int:
        return self.entry.size

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, i: int) -> Observation:
        return Observation(float(self.entry[i]), float(self.exit[i]), int(self.event[i]))

    def __iter__(self):
        for i in range(self.n):
            yield self[i]

    @cached_property
    def entry_ranks(self) -> np.ndarray:
        """Scaled midranks of the entry times."""
        return rank_transform(self.entry)

    @cached_property
    def exit_ranks(self) -> np.ndarray:
        """Scaled midranks of the observed exit times."""
        return rank_transform(self.exit)

    @property
    def n_events(self) -> int:
        return int(self.event.sum())

    @property
    def censored_fraction(self) -> float:
        return 1.0 - self.n_events / self.n

    def tie_counts(self) -> tuple[int, int]:
        """(surplus tied entries, surplus tied exits): n minus distinct values."""
        return (self.n - np.unique(self.entry).size, self.n - np.unique(self.exit).size)

    def __repr__(self):
        return f"Dataset(n={self.n}, events={self.n_events})"
