"""Associated Pell numbers q_0 = q_1 = 1, q_{n+1} = 2 q_n + q_{n-1}."""

from __future__ import annotations

import threading
from dataclasses import dataclass

from .realnum import CReal, Const, Expr, Log, Sqrt


class AssocPellSeq:
    """Memoized associated Pell numbers.

    The cache only grows, under a lock, so concurrent readers always see a
    consistent prefix of the sequence.
    """

    def __init__(self):
        self._cache: list[int] = [1, 1]
        self._lock = threading.Lock()

    def __getitem__(self, n: int) -> int:
        if n < 0:
            raise IndexError("associated Pell numbers are indexed from 0")
        cache = self._cache
        if n < len(cache):
            return cache[n]
        with self._lock:
            cache = self._cache
            while len(cache) <= n:
                cache.append(2 * cache[-1] + cache[-2])
            return cache[n]

    def upto(self, n: int) -> list[int]:
        """``[q_0, ..., q_n]``."""
        self[n]
        return self._cache[: n + 1]

    def __len__(self) -> int:
        return len(self._cache)


_SEQ = AssocPellSeq()


def assoc_pell(n: int) -> int:
    """Exact q_n."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return _SEQ[n]


def assoc_pell_upto(n: int) -> list[int]:
    return list(_SEQ.upto(n))


@dataclass(frozen=True)
class QuadraticConstants:
    """Roots of x^2 - 2x - 1 as expressions; enclose them at any precision."""

    alpha: Expr
    beta: Expr
    log_alpha: Expr

    def at(self, prec: int) -> tuple[CReal, CReal, CReal]:
        return self.alpha.enclose(prec), self.beta.enclose(prec), self.log_alpha.enclose(prec)


def _build_constants() -> QuadraticConstants:
    r2 = Sqrt(Const(2))
    alpha = Const(1) + r2
    return QuadraticConstants(alpha=alpha, beta=Const(1) - r2, log_alpha=Log(alpha))


CONSTANTS = _build_constants()
ALPHA = CONSTANTS.alpha
BETA = CONSTANTS.beta
LOG_ALPHA = CONSTANTS.log_alpha
LOG_10 = Log(Const(10))


def binet_envelope(n: int, prec: int = 64) -> tuple[CReal, CReal]:
    """Enclosures of alpha^(n-1) and alpha^(n+1); these bracket 2*q_n for n >= 1."""
    if n < 1:
        raise ValueError("the growth envelope holds for n >= 1")
    alpha = ALPHA.enclose(prec)
    return alpha ** (n - 1), alpha ** (n + 1)


def binet_value(n: int, prec: int) -> CReal:
    """Enclosure of (alpha^n + beta^n) / 2, which equals q_n."""
    alpha, beta, _ = CONSTANTS.at(prec)
    return (alpha ** n + beta ** n) / 2
