"""Sequence combinatorics over the alphabet [n] = {0, ..., n-1}.

Words are plain tuples of ints. A :class:`Code` is an immutable set of
equal-length words tagged with its alphabet size.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

Word = tuple[int, ...]

MAX_CANONICAL_ALPHABET = 8


class ArityError(ValueError):
    """Raised when a word is longer than the word it should embed into."""


def check_word(w: Iterable[int], n: int, length: int | None = None) -> Word:
    w = tuple(int(s) for s in w)
    if length is not None and len(w) != length:
        raise ValueError(f"word {w} has length {len(w)}, expected {length}")
    for s in w:
        if not 0 <= s < n:
            raise ValueError(f"symbol {s} of word {w} outside [0, {n})")
    return w


def encode(w: Word, n: int) -> int:
    """Pack a word into an int in base ``n``, first symbol most significant.

    Numeric order of packed words equals lexicographic order of the words.
    """
    v = 0
    for s in w:
        v = v * n + s
    return v


def decode(v: int, n: int, length: int) -> Word:
    out = [0] * length
    for i in range(length - 1, -1, -1):
        v, out[i] = divmod(v, n)
    return tuple(out)


def all_words(n: int, length: int) -> Iterator[Word]:
    """All words of the given length in lexicographic order."""
    return itertools.product(range(n), repeat=length)


@dataclass(frozen=True)
class Code:
    """A set of length-``r`` words over ``[n]``."""

    n: int
    r: int
    words: frozenset[Word] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 1 or self.r < 1:
            raise ValueError("alphabet size and word length must be positive")
        ws = frozenset(check_word(w, self.n, self.r) for w in self.words)
        object.__setattr__(self, "words", ws)

    @classmethod
    def full(cls, n: int, r: int) -> Code:
        return cls(n, r, frozenset(all_words(n, r)))

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self) -> Iterator[Word]:
        return iter(sorted(self.words))

    def __contains__(self, w) -> bool:
        return tuple(w) in self.words

    @property
    def density(self) -> Fraction:
        return Fraction(len(self.words), self.n**self.r)

    def sorted_words(self) -> list[Word]:
        return sorted(self.words)

    def with_words(self, words: Iterable[Word]) -> Code:
        return Code(self.n, self.r, frozenset(words))


def is_subsequence(x: Word, a: Word) -> bool:
    """True iff ``x`` is obtained from ``a`` by deleting symbols.

    Greedy left-to-right matching, O(len(a)).
    """
    if len(x) > len(a):
        raise ArityError(f"cannot embed a length-{len(x)} word into a length-{len(a)} word")
    i = 0
    for s in a:
        if i < len(x) and x[i] == s:
            i += 1
    return i == len(x)


def deletion_ball(a: Word, r: int) -> set[Word]:
    """The distinct length-``r`` subsequences of ``a``."""
    if not 1 <= r <= len(a):
        raise ValueError(f"need 1 <= r <= {len(a)}, got r={r}")
    a = tuple(a)
    return {tuple(a[i] for i in idx) for idx in itertools.combinations(range(len(a)), r)}


def insertion_ball(x: Word, n: int) -> set[Word]:
    """All words of length ``len(x)+1`` over ``[n]`` containing ``x``.

    Has exactly ``(r+1)(n-1)+1`` elements for ``r = len(x)``.
    """
    x = check_word(x, n)
    return {x[:i] + (s,) + x[i:] for i in range(len(x) + 1) for s in range(n)}


def coordinate_orbit(w: Word) -> set[Word]:
    return set(itertools.permutations(w))


def symmetrize(c: Code) -> Code:
    """Symmetric closure: the smallest superset closed under coordinate permutations."""
    out: set[Word] = set()
    for w in c.words:
        if w not in out:
            out |= coordinate_orbit(w)
    return c.with_words(out)


def is_symmetric(c: Code) -> bool:
    return all(coordinate_orbit(w) <= c.words for w in c.words)


def symmetry_group(n: int, reversal: bool = True) -> list[tuple[tuple[int, ...], bool]]:
    """Elements ``(symbol permutation, reverse?)`` of the code symmetry group."""
    perms = list(itertools.permutations(range(n)))
    flips = (False, True) if reversal else (False,)
    return [(p, f) for f in flips for p in perms]


def apply_symmetry(w: Word, perm: tuple[int, ...], reverse: bool) -> Word:
    w = tuple(perm[s] for s in w)
    return w[::-1] if reverse else w


def canonical_form(c: Code, reversal: bool = True) -> Code:
    """Lexicographically least image of ``c`` under symbol renaming (and reversal).

    Codes are compared as sorted word lists. Brute force over the group, so
    only alphabets up to :data:`MAX_CANONICAL_ALPHABET` are accepted.
    """
    return c.with_words(canonical_key(c, reversal))


def canonical_key(c: Code, reversal: bool = True) -> tuple[Word, ...]:
    if c.n > MAX_CANONICAL_ALPHABET:
        raise ValueError(f"canonical_form is brute force; alphabet size {c.n} > {MAX_CANONICAL_ALPHABET}")
    best = None
    for perm, rev in symmetry_group(c.n, reversal):
        key = tuple(sorted(apply_symmetry(w, perm, rev) for w in c.words))
        if best is None or key < best:
            best = key
    return best


def is_injective(w: Word) -> bool:
    return len(set(w)) == len(w)
