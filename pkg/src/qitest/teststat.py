"""The family of quasi-independence test statistics and their chi-square test.

A test in the family is indexed by two skew-symmetric kernels: one applied to
entry times, one to exit times. The statistic is the average of the kernel
pair products over comparable pairs; its null variance is estimated from
pair-product row sums in O(n^2) work, and the squared standardized statistic
is referred to a chi-square distribution with one degree of freedom.

All pairwise accumulations are single-pass numpy reductions over arrays of
fixed shape, so results are bit-reproducible for a given dataset.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .comparability import comparable_matrix
from .data import Dataset
from .errors import DegenerateDataset, DegenerateVariance
from .kernels import Kernel, pair_matrix

#: The five kernel pairs studied throughout: (entry kernel, exit kernel).
STANDARD_PAIRS = (
    (Kernel.SIGN, Kernel.SIGN),
    (Kernel.LINEAR, Kernel.SIGN),
    (Kernel.LINEAR, Kernel.LINEAR),
    (Kernel.RANK, Kernel.SIGN),
    (Kernel.RANK, Kernel.RANK),
)


@dataclass(frozen=True)
class TestResult:
    """Full output of one quasi-independence test."""

    kappa_hat: float
    n: int
    n_comparable: int
    pr_hat: float
    phi_hat: float
    chi_square: float
    p_value: float
    g_kernel: Kernel
    h_kernel: Kernel
    censored_mode: bool
    assumption_3b_required: bool

    def to_dict(self) -> dict:
        d = asdict(self)
        d["g_kernel"] = self.g_kernel.value
        d["h_kernel"] = self.h_kernel.value
        return d


def _entry_matrix(data: Dataset, kind: Kernel) -> np.ndarray:
    ranks = data.entry_ranks if kind is Kernel.RANK else None
    return pair_matrix(kind, data.entry, ranks)


def _exit_matrix(data: Dataset, kind: Kernel) -> np.ndarray:
    ranks = data.exit_ranks if kind is Kernel.RANK else None
    return pair_matrix(kind, data.exit, ranks)


def pair_products(data: Dataset, g, h, censored_mode: bool = False) -> np.ndarray:
    """Symmetric n-by-n matrix g(L_i,L_j) h(T_i,T_j) I(comparable); zero diagonal."""
    g = Kernel.parse(g)
    h = Kernel.parse(h)
    mask = comparable_matrix(data, censored_mode)
    a = _entry_matrix(data, g) * _exit_matrix(data, h)
    a[~mask] = 0.0
    return a


def u_numerator(data: Dataset, g, h, censored_mode: bool = False) -> float:
    """Sum over unordered comparable pairs of the kernel pair products."""
    if data.n < 2:
        raise DegenerateDataset("need at least two observations")
    return float(pair_products(data, g, h, censored_mode).sum()) / 2.0


def kappa_hat(data: Dataset, g, h, censored_mode: bool = False) -> float:
    """Comparable-pair average of the kernel pair products."""
    if data.n < 2:
        raise DegenerateDataset("need at least two observations")
    a = pair_products(data, g, h, censored_mode)
    count = int(np.count_nonzero(comparable_matrix(data, censored_mode))) // 2
    if count == 0:
        raise DegenerateDataset("no comparable pairs; the statistic is undefined")
    return float(a.sum()) / 2.0 / count


def _phi_from_products(a: np.ndarray) -> float:
    """Ordered-triple average of a_ij a_ik via row sums (O(n^2) work).

    For each hub i, the sum of a_ij a_ik over j != k (both != i) equals
    (row sum)^2 minus the row sum of squares; averaging over the
    n(n-1)(n-2) ordered triples gives the plug-in variance piece.
    """
    n = a.shape[0]
    row = a.sum(axis=1)
    row_sq = (a * a).sum(axis=1)
    total = float(np.sum(row * row - row_sq))
    return total / (n * (n - 1) * (n - 2))


def phi_hat_fast(data: Dataset, g, h, censored_mode: bool = False) -> float:
    """Plug-in variance piece via the row-sum identity (O(n^2))."""
    if data.n < 3:
        raise DegenerateDataset("variance estimation needs at least three observations")
    return _phi_from_products(pair_products(data, g, h, censored_mode))


def phi_hat_bruteforce(data: Dataset, g, h, censored_mode: bool = False) -> float:
    """Direct enumeration of a_ij a_ik over ordered triples (testing oracle).

    Materializes the full triple product tensor and masks the excluded index
    patterns, so it shares no algebra with the row-sum path. O(n^3) memory;
    intended for small n.
    """
    if data.n < 3:
        raise DegenerateDataset("variance estimation needs at least three observations")
    a = pair_products(data, g, h, censored_mode)
    n = a.shape[0]
    t = a[:, :, None] * a[:, None, :]  # t[i, j, k] = a_ij a_ik
    idx = np.arange(n)
    t[idx, idx, :] = 0.0  # j == i
    t[idx, :, idx] = 0.0  # k == i
    t[:, idx, idx] = 0.0  # j == k
    return float(t.sum()) / (n * (n - 1) * (n - 2))


def chi2_sf1(x: float) -> float:
    """Upper-tail probability of the chi-square law with one degree of freedom.

    Uses the complementary error function identity; absolute accuracy is far
    below 1e-10 over the whole range.
    """
    if x < 0:
        raise ValueError("chi-square statistic must be nonnegative")
    return math.erfc(math.sqrt(x / 2.0))


def chi_square_test(kappa: float, phi: float, pr: float, n: int) -> tuple[float, float]:
    """Standardized chi-square statistic and p-value.

    statistic = n * kappa^2 * pr^2 / (4 * phi), referred to chi-square(1).
    """
    if pr <= 0:
        raise DegenerateVariance("comparable-pair probability estimate is zero")
    if phi <= 0:
        raise DegenerateVariance("plug-in variance piece is non-positive")
    stat = n * kappa * kappa * pr * pr / (4.0 * phi)
    return stat, chi2_sf1(stat)


def quasi_independence_test(data: Dataset, g, h, censored_mode: bool = False) -> TestResult:
    """Run one test of the family end to end."""
    g = Kernel.parse(g)
    h = Kernel.parse(h)
    if data.n < 3:
        raise DegenerateDataset("the chi-square test needs at least three observations")
    a = pair_products(data, g, h, censored_mode)
    count = int(np.count_nonzero(comparable_matrix(data, censored_mode))) // 2
    if count == 0:
        raise DegenerateDataset("no comparable pairs; the statistic is undefined")
    kappa = float(a.sum()) / 2.0 / count
    phi = _phi_from_products(a)
    pr = count / (data.n * (data.n - 1) / 2.0)
    stat, p = chi_square_test(kappa, phi, pr, data.n)
    return TestResult(
        kappa_hat=kappa,
        n=data.n,
        n_comparable=count,
        pr_hat=pr,
        phi_hat=phi,
        chi_square=stat,
        p_value=p,
        g_kernel=g,
        h_kernel=h,
        censored_mode=bool(censored_mode),
        assumption_3b_required=bool(censored_mode) and h is not Kernel.SIGN,
    )


def run_test_grid(data: Dataset, pairs=STANDARD_PAIRS, censored_mode: bool = False) -> dict:
    """Run several kernel pairs on one dataset, sharing the pairwise setup.

    Returns {(g, h): TestResult}. Raises the same errors as the single-pair
    entry point; a DegenerateVariance in one cell does not abort the others,
    the offending cell maps to the exception instance instead.
    """
    if data.n < 3:
        raise DegenerateDataset("the chi-square test needs at least three observations")
    mask = comparable_matrix(data, censored_mode)
    count = int(np.count_nonzero(mask)) // 2
    if count == 0:
        raise DegenerateDataset("no comparable pairs; the statistic is undefined")
    pr = count / (data.n * (data.n - 1) / 2.0)
    pairs = [(Kernel.parse(g), Kernel.parse(h)) for g, h in pairs]
    ent = {k: _entry_matrix(data, k) for k in {g for g, _ in pairs}}
    ext = {k: _exit_matrix(data, k) for k in {h for _, h in pairs}}
    out = {}
    for g, h in pairs:
        a = ent[g] * ext[h]
        a[~mask] = 0.0
        kappa = float(a.sum()) / 2.0 / count
        phi = _phi_from_products(a)
        try:
            stat, p = chi_square_test(kappa, phi, pr, data.n)
        except DegenerateVariance as exc:
            out[(g, h)] = exc
            continue
        out[(g, h)] = TestResult(
            kappa_hat=kappa,
            n=data.n,
            n_comparable=count,
            pr_hat=pr,
            phi_hat=phi,
            chi_square=stat,
            p_value=p,
            g_kernel=g,
            h_kernel=h,
            censored_mode=bool(censored_mode),
            assumption_3b_required=bool(censored_mode) and h is not Kernel.SIGN,
        )
    return out


def reverse_roles(data: Dataset) -> Dataset:
    """Swap the roles of failure and censoring: flip every event flag.

    Running a sign-exit-kernel test on the reversed data probes association
    between entry and censoring times, the standard diagnostic before
    trusting tests whose exit kernel is not the sign function.
    """
    return Dataset(data.entry, data.exit, 1 - data.event)
