"""Exhaustive oracles for the three equations and the two membership lemmas.

All searches are exact big-integer scans.  Every solution object re-checks
its defining equation on construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .repdigits import BlockPattern, block_count, concat_value, decompose_blocks, is_repdigit, repdigit_value
from .sequences import assoc_pell, assoc_pell_upto


@dataclass(frozen=True, order=True)
class Eq3Solution:
    """q_n - q_m = d (10^k - 1) / 9."""

    n: int
    m: int
    d: int
    k: int

    def __post_init__(self):
        if not (self.n > self.m >= 0 and 1 <= self.d <= 9 and self.k >= 1):
            raise ValueError(f"out of range: {self}")
        if assoc_pell(self.n) - assoc_pell(self.m) != repdigit_value(self.d, self.k):
            raise ValueError(f"not a solution: {self}")

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.n, self.m, self.d, self.k)


@dataclass(frozen=True)
class Eq4Solution:
    """q_n is the concatenation of three repdigit blocks."""

    n: int
    pattern: BlockPattern

    def __post_init__(self):
        if len(self.pattern) != 3:
            raise ValueError("Eq. 4 solutions have exactly three blocks")
        if assoc_pell(self.n) != concat_value(self.pattern):
            raise ValueError(f"not a solution: {self}")

    @property
    def value(self) -> int:
        return assoc_pell(self.n)


@dataclass(frozen=True, order=True)
class Eq5Solution:
    """q_k = d1 (10^n - 1)/9 - d2 (10^m - 1)/9.

    ``degenerate`` marks n == m, which the equation itself excludes.
    """

    k: int
    n: int
    m: int
    d1: int
    d2: int
    degenerate: bool = False

    def __post_init__(self):
        if not (1 <= self.d1 <= 9 and 1 <= self.d2 <= 9 and self.m >= 1 and self.n >= self.m):
            raise ValueError(f"out of range: {self}")
        if self.degenerate != (self.n == self.m):
            raise ValueError("degenerate flag must equal n == m")
        if not self.degenerate and self.n < 2:
            raise ValueError("strict solutions need n >= 2")
        if assoc_pell(self.k) != repdigit_value(self.d1, self.n) - repdigit_value(self.d2, self.m):
            raise ValueError(f"not a solution: {self}")

    @property
    def value(self) -> int:
        return assoc_pell(self.k)


@dataclass
class Eq5Search:
    k_max: int
    n_max: int
    solutions: list[Eq5Solution] = field(default_factory=list)
    degenerate: list[Eq5Solution] = field(default_factory=list)

    @property
    def values(self) -> list[int]:
        """Distinct q_k over strict and degenerate representations."""
        return sorted({s.value for s in self.solutions} | {s.value for s in self.degenerate})

    @property
    def strict_values(self) -> list[int]:
        return sorted({s.value for s in self.solutions})


def solve_eq3(n_max: int) -> list[Eq3Solution]:
    """All (n, m, d, k) with n <= n_max and q_n - q_m a repdigit."""
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    q = assoc_pell_upto(n_max)
    out = []
    for n in range(1, n_max + 1):
        for m in range(n):
            diff = q[n] - q[m]
            if diff > 0 and is_repdigit(diff):
                s = str(diff)
                out.append(Eq3Solution(n, m, int(s[0]), len(s)))
    return sorted(out)


def solve_eq4(n_max: int) -> list[Eq4Solution]:
    """All q_n, n <= n_max, whose maximal-run decomposition has three blocks."""
    if n_max < 3:
        raise ValueError("n_max must be >= 3")
    out = []
    for n, v in enumerate(assoc_pell_upto(n_max)):
        if block_count(v) == 3:
            out.append(Eq4Solution(n, decompose_blocks(v)))
    return out


def solve_eq5(k_max: int, n_max: int | None = None) -> Eq5Search:
    """All ways to write q_k (k <= k_max) as a difference of two repdigits.

    Lengths run up to ``n_max`` (default ``k_max + 5``, the size bound that
    q_k < alpha^(k+1) forces on the longer repdigit).
    """
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    n_max = k_max + 5 if n_max is None else n_max
    by_value: dict[int, list[int]] = {}
    for k, v in enumerate(assoc_pell_upto(max(k_max, 1))):
        if k <= k_max:
            by_value.setdefault(v, []).append(k)
    result = Eq5Search(k_max, n_max)
    reps = {(d, L): repdigit_value(d, L) for d in range(1, 10) for L in range(1, n_max + 1)}
    top = max(by_value)
    for n in range(1, n_max + 1):
        for m in range(1, n + 1):
            for d1 in range(1, 10):
                a = reps[d1, n]
                for d2 in range(1, 10):
                    v = a - reps[d2, m]
                    if v <= 0 or v > top:
                        continue
                    for k in by_value.get(v, ()):
                        sol = Eq5Solution(k, n, m, d1, d2, degenerate=(n == m))
                        (result.degenerate if n == m else result.solutions).append(sol)
    result.solutions.sort()
    result.degenerate.sort()
    return result


def repdigit_members(n_max: int) -> list[int]:
    """Distinct q_n (n <= n_max) that are repdigits."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    return sorted({v for v in assoc_pell_upto(n_max) if is_repdigit(v)})


def two_block_members(n_max: int) -> list[int]:
    """Distinct q_n (n <= n_max) made of exactly two maximal runs."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    return sorted({v for v in assoc_pell_upto(n_max) if block_count(v) == 2})
