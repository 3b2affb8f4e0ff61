"""Comparable-pair indicators for truncated and truncated-censored samples.

Two subjects are comparable when their observation windows overlap:

* truncation only:   max(entry_1, entry_2) < min(exit_1, exit_2)
* with censoring:    the windows overlap AND the smaller exit is an observed
                     failure (both are failures, or the earlier exit has
                     event = 1).

Inequalities are strict, so boundary contact and empty windows never form a
comparable pair; with tied exits only double failures qualify.
"""

from __future__ import annotations

import numpy as np

from .data import Dataset, Observation


def omega_indicator(a: Observation, b: Observation) -> int:
    """1 iff the two observation windows strictly overlap (truncation-only rule)."""
    return int(max(a.entry, b.entry) < min(a.exit, b.exit))


def lambda_indicator(a: Observation, b: Observation) -> int:
    """1 iff the windows overlap and the earlier exit is an observed failure."""
    if not max(a.entry, b.entry) < min(a.exit, b.exit):
        return 0
    if a.event and b.event:
        return 1
    if a.event and b.exit > a.exit:
        return 1
    if b.event and a.exit > b.exit:
        return 1
    return 0


def omega_matrix(data: Dataset) -> np.ndarray:
    """Boolean n-by-n matrix of pairwise window overlap; diagonal is False."""
    lo = np.maximum.outer(data.entry, data.entry)
    hi = np.minimum.outer(data.exit, data.exit)
    out = lo < hi
    np.fill_diagonal(out, False)
    return out


def lambda_matrix(data: Dataset) -> np.ndarray:
    """Boolean n-by-n censoring-aware comparability matrix; diagonal is False."""
    out = omega_matrix(data)
    d = data.event
    sgn = np.sign(np.subtract.outer(data.exit, data.exit))
    both = np.outer(d, d) == 1
    # earlier exit is a failure: d_i = 1 and exit_j > exit_i, or symmetric
    first = (d[:, None] * (-sgn)) == 1
    second = (d[None, :] * sgn) == 1
    out &= both | first | second
    return out


def comparable_matrix(data: Dataset, censored_mode: bool) -> np.ndarray:
    return lambda_matrix(data) if censored_mode else omega_matrix(data)


def count_comparable(data: Dataset, censored_mode: bool = False) -> int:
    """Number of unordered comparable pairs (at most n(n-1)/2)."""
    return int(comparable_matrix(data, censored_mode).sum()) // 2
