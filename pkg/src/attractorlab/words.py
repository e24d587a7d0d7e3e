"""Freely reduced words over a finite generator alphabet.

A letter is a pair ``(index, sign)`` with ``sign`` in ``{+1, -1}``;
a word is a tuple of letters with no adjacent cancelling pair.  Words
are ordered by length, then lexicographically with ``g_i`` before
``g_i^-1`` and lower indices first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .errors import BudgetExceeded

Letter = tuple[int, int]

DEFAULT_WORD_CAP = 10**7


def free_reduce(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    """Cancel adjacent inverse pairs until no more remain."""
    out: list[Letter] = []
    for idx, sign in letters:
        if sign not in (1, -1):
            raise ValueError(f"letter sign must be +1 or -1, got {sign}")
        if idx < 0:
            raise ValueError(f"letter index must be nonnegative, got {idx}")
        if out and out[-1][0] == idx and out[-1][1] == -sign:
            out.pop()
        else:
            out.append((idx, sign))
    return tuple(out)


def letter_key(letter: Letter) -> tuple[int, int]:
    idx, sign = letter
    return (idx, 0 if sign == 1 else 1)


def word_key(letters: Sequence[Letter]) -> tuple:
    return (len(letters), tuple(letter_key(l) for l in letters))


@dataclass(frozen=True, order=False)
class Word:
    """A freely reduced word; the empty word is the group identity."""

    letters: tuple[Letter, ...] = field(default_factory=tuple)

    def __post_init__(self):
        letters = tuple((int(i), int(s)) for i, s in self.letters)
        if letters != free_reduce(letters):
            raise ValueError("Word letters must be freely reduced; "
                             "use Word.reduced() to build from raw letters")
        object.__setattr__(self, "letters", letters)

    @classmethod
    def reduced(cls, letters: Iterable[Letter]) -> "Word":
        return cls(free_reduce(letters))

    @classmethod
    def identity(cls) -> "Word":
        return cls(())

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def inverse(self) -> "Word":
        return Word(tuple((i, -s) for i, s in reversed(self.letters)))

    def concat(self, other: "Word") -> "Word":
        return Word.reduced(self.letters + other.letters)

    def key(self) -> tuple:
        return word_key(self.letters)

    def render(self, names: Sequence[str] | None = None) -> str:
        """Human-readable form, e.g. ``a0*a1^-1``; the empty word is ``e``."""
        if not self.letters:
            return "e"
        parts = []
        for idx, sign in self.letters:
            name = names[idx] if names is not None else f"g{idx + 1}"
            parts.append(name if sign == 1 else f"{name}^-1")
        return "*".join(parts)

    def __repr__(self) -> str:
        return f"Word({self.render()})"


def alphabet(rank: int) -> list[Letter]:
    """All 2*rank letters in canonical order."""
    letters: list[Letter] = []
    for i in range(rank):
        letters.append((i, 1))
        letters.append((i, -1))
    return letters


def ball_size(rank: int, max_len: int) -> int:
    """Number of freely reduced words of length <= max_len: the closed-form
    1 + sum_k 2r(2r-1)^(k-1)."""
    r2 = 2 * rank
    total = 1
    term = r2
    for _ in range(1, max_len + 1):
        total += term
        term *= r2 - 1
    return total


def iter_reduced_words(rank: int, max_len: int) -> Iterator[tuple[Letter, ...]]:
    """Yield all freely reduced letter tuples of length <= max_len, in
    length-then-lexicographic order."""
    if rank < 1:
        raise ValueError("rank must be >= 1")
    if max_len < 0:
        raise ValueError("max_len must be >= 0")
    letters = alphabet(rank)
    level: list[tuple[Letter, ...]] = [()]
    yield ()
    for _ in range(max_len):
        nxt: list[tuple[Letter, ...]] = []
        for word in level:
            for letter in letters:
                if word and word[-1][0] == letter[0] and word[-1][1] == -letter[1]:
                    continue
                child = word + (letter,)
                nxt.append(child)
                yield child
        level = nxt


def enumerate_reduced_words(rank: int, max_len: int,
                            cap: int = DEFAULT_WORD_CAP) -> list[Word]:
    """All freely reduced words of length <= max_len, each exactly once.

    Raises BudgetExceeded if the closed-form count exceeds ``cap``.
    """
    count = ball_size(rank, max_len)
    if count > cap:
        raise BudgetExceeded(
            f"word ball of rank {rank}, length {max_len} has {count} words "
            f"(cap {cap})")
    return [Word(w) for w in iter_reduced_words(rank, max_len)]
