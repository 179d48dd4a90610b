"""Repdigits and concatenations of repdigit blocks (base 10)."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import groupby


def repdigit_value(d: int, k: int) -> int:
    """d * (10^k - 1) / 9, the k-digit number with every digit equal to d."""
    if not 0 <= d <= 9:
        raise ValueError(f"digit must be in 0..9, got {d}")
    if k < 1:
        raise ValueError(f"length must be >= 1, got {k}")
    return d * (10 ** k - 1) // 9


def is_repdigit(n: int) -> bool:
    s = str(n)
    return n > 0 and s == s[0] * len(s)


@dataclass(frozen=True)
class Repdigit:
    digit: int
    length: int

    def __post_init__(self):
        repdigit_value(self.digit, self.length)

    @property
    def value(self) -> int:
        return repdigit_value(self.digit, self.length)


@dataclass(frozen=True)
class BlockPattern:
    """Runs ``(digit, run_length)`` read left to right.

    A pattern built by :func:`decompose_blocks` is canonical: adjacent
    blocks carry distinct digits.  Pass ``canonical=False`` to allow equal
    neighbours (e.g. ``33`` written as two blocks of ``3``).
    """

    blocks: tuple[tuple[int, int], ...]
    canonical: bool = True

    def __post_init__(self):
        blocks = tuple((int(d), int(m)) for d, m in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        if not blocks:
            raise ValueError("a block pattern needs at least one block")
        for d, m in blocks:
            if not 0 <= d <= 9 or m < 1:
                raise ValueError(f"invalid block ({d}, {m})")
        if blocks[0][0] == 0:
            raise ValueError("the leading digit must be non-zero")
        if self.canonical and any(a[0] == b[0] for a, b in zip(blocks, blocks[1:])):
            raise ValueError("adjacent blocks share a digit; pass canonical=False to allow it")

    def __len__(self) -> int:
        return len(self.blocks)

    @property
    def digits(self) -> tuple[int, ...]:
        return tuple(d for d, _ in self.blocks)

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(m for _, m in self.blocks)

    def __str__(self) -> str:
        return " ".join(f"{d}x{m}" for d, m in self.blocks)


def _concat_by_digits(p: BlockPattern) -> int:
    return int("".join(str(d) * m for d, m in p.blocks))


def _concat_three_closed_form(p: BlockPattern) -> int:
    (d1, m1), (d2, m2), (d3, m3) = p.blocks
    nine_q = (
        d1 * 10 ** (m1 + m2 + m3)
        - (d1 - d2) * 10 ** (m2 + m3)
        - (d2 - d3) * 10 ** m3
        - d3
    )
    q, r = divmod(nine_q, 9)
    assert r == 0
    return q


def concat_value(p: BlockPattern) -> int:
    """Integer whose decimal digits are the runs of ``p``.

    Three-block patterns are also evaluated through the closed form
    (d1 10^(m1+m2+m3) - (d1-d2) 10^(m2+m3) - (d2-d3) 10^m3 - d3) / 9 and the
    two results are checked against each other.
    """
    value = _concat_by_digits(p)
    if len(p) == 3:
        closed = _concat_three_closed_form(p)
        if closed != value:  # pragma: no cover - would be an arithmetic bug
            raise AssertionError(f"closed form {closed} disagrees with digit string {value}")
    return value


def decompose_blocks(n: int) -> BlockPattern:
    """Maximal equal-digit runs of the decimal expansion of ``n >= 1``."""
    if n < 1:
        raise ValueError("only positive integers have a block decomposition")
    return BlockPattern(tuple((int(d), len(list(run))) for d, run in groupby(str(n))))


def block_count(n: int) -> int:
    """Number of maximal runs in the decimal expansion of ``n``."""
    s = str(n)
    return 1 + sum(1 for a, b in zip(s, s[1:]) if a != b)
