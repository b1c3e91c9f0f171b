"""Incidence tables, coverage verification and the greedy baseline.

One :class:`CoverInstance` serves both problems: in ``sequence`` mode the
candidates are all words of ``[n]^r`` and the targets all words of ``[n]^k``;
in ``turan`` mode candidates are ``r``-subsets and targets ``k``-subsets of
``[n]``. Incidence is stored as Python ints used as bitsets.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import comb
from typing import Iterable, Iterator, Union

from .words import Code, all_words, deletion_ball, encode, symmetry_group, apply_symmetry

Subset = tuple[int, ...]

DEFAULT_MAX_INCIDENCE_BITS = 2**32


class ResourceLimitError(RuntimeError):
    """The requested instance exceeds the incidence-size guard."""


@dataclass(frozen=True)
class TuranSystem:
    """A family of ``r``-subsets of ``[n]``, each stored as an increasing tuple."""

    n: int
    r: int
    sets: frozenset[Subset] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 1 or self.r < 1:
            raise ValueError("n and r must be positive")
        clean = set()
        for s in self.sets:
            s = tuple(sorted(int(v) for v in s))
            if len(s) != self.r or len(set(s)) != self.r:
                raise ValueError(f"{s} is not an {self.r}-subset")
            if s[0] < 0 or s[-1] >= self.n:
                raise ValueError(f"{s} not contained in [0, {self.n})")
            clean.add(s)
        object.__setattr__(self, "sets", frozenset(clean))

    def __len__(self) -> int:
        return len(self.sets)

    def __iter__(self) -> Iterator[Subset]:
        return iter(sorted(self.sets))

    def __contains__(self, s) -> bool:
        return tuple(sorted(s)) in self.sets

    @property
    def density(self) -> Fraction:
        return Fraction(len(self.sets), comb(self.n, self.r))

    def sorted_sets(self) -> list[Subset]:
        return sorted(self.sets)


@dataclass(frozen=True)
class VerifyResult:
    covered: bool
    witness: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.covered


def verify_cover(c: Code, k: int) -> VerifyResult:
    """Check that ``c`` covers every word of ``[n]^k``.

    On failure the lexicographically least uncovered word is the witness.
    """
    if k <= c.r:
        raise ValueError(f"need k > r, got k={k}, r={c.r}")
    words = c.words
    for a in all_words(c.n, k):
        if not any(x in words for x in deletion_ball(a, c.r)):
            return VerifyResult(False, a)
    return VerifyResult(True)


def verify_turan(t: TuranSystem, k: int) -> VerifyResult:
    """Check that every ``k``-subset of ``[n]`` contains a member of ``t``."""
    if k <= t.r:
        raise ValueError(f"need k > r, got k={k}, r={t.r}")
    sets = t.sets
    for ks in itertools.combinations(range(t.n), k):
        if not any(s in sets for s in itertools.combinations(ks, t.r)):
            return VerifyResult(False, ks)
    return VerifyResult(True)


Solution = Union[Code, TuranSystem]


@dataclass(frozen=True, eq=False)
class CoverInstance:
    """Bipartite incidence between candidates and the targets they cover.

    ``cand_masks[i]`` is the bitset of targets covered by candidate ``i``;
    ``target_masks[j]`` the bitset of candidates covering target ``j``.
    Candidates and targets are indexed in lexicographic order.
    """

    n: int
    k: int
    r: int
    mode: str
    candidates: tuple[tuple[int, ...], ...]
    targets: tuple[tuple[int, ...], ...]
    cand_masks: tuple[int, ...]
    target_masks: tuple[int, ...]

    @property
    def full_mask(self) -> int:
        return (1 << len(self.targets)) - 1

    @cached_property
    def max_degree(self) -> int:
        return max((m.bit_count() for m in self.cand_masks), default=0)

    @cached_property
    def candidate_index(self) -> dict[tuple[int, ...], int]:
        return {c: i for i, c in enumerate(self.candidates)}

    def to_solution(self, indices: Iterable[int]) -> Solution:
        items = frozenset(self.candidates[i] for i in indices)
        if self.mode == "sequence":
            return Code(self.n, self.r, items)
        return TuranSystem(self.n, self.r, items)

    def indices_of(self, solution: Solution) -> list[int]:
        items = solution.words if isinstance(solution, Code) else solution.sets
        return sorted(self.candidate_index[x] for x in items)

    def verify(self, solution: Solution) -> VerifyResult:
        if self.mode == "sequence":
            return verify_cover(solution, self.k)
        return verify_turan(solution, self.k)

    def symmetry_permutations(self, reversal: bool = True) -> list[tuple[int, ...]]:
        """The symmetry group as permutations of candidate indices.

        Sequence mode uses symbol renamings (plus reversal when requested),
        Turán mode uses all permutations of ``[n]``.
        """
        idx = self.candidate_index
        out = []
        if self.mode == "sequence":
            group = symmetry_group(self.n, reversal)
            for perm, rev in group:
                out.append(tuple(idx[apply_symmetry(c, perm, rev)] for c in self.candidates))
        else:
            for perm in itertools.permutations(range(self.n)):
                out.append(tuple(idx[tuple(sorted(perm[v] for v in c))] for c in self.candidates))
        return out


def build_incidence(n: int, k: int, r: int, mode: str = "sequence",
                    max_bits: int = DEFAULT_MAX_INCIDENCE_BITS) -> CoverInstance:
    if not 1 <= r < k:
        raise ValueError(f"need 1 <= r < k, got r={r}, k={k}")
    if n < 1:
        raise ValueError("alphabet size must be positive")
    if mode == "sequence":
        n_cand, n_targ = n**r, n**k
    elif mode == "turan":
        n_cand, n_targ = comb(n, r), comb(n, k)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if n_cand * n_targ > max_bits:
        raise ResourceLimitError(
            f"instance needs {n_cand * n_targ} incidence bits, guard is {max_bits}")

    cand_masks = [0] * n_cand
    target_masks = []
    if mode == "sequence":
        candidates = tuple(all_words(n, r))
        targets = tuple(all_words(n, k))
        for j, a in enumerate(targets):
            tm = 0
            for x in deletion_ball(a, r):
                i = encode(x, n)
                cand_masks[i] |= 1 << j
                tm |= 1 << i
            target_masks.append(tm)
    else:
        candidates = tuple(itertools.combinations(range(n), r))
        targets = tuple(itertools.combinations(range(n), k))
        index = {c: i for i, c in enumerate(candidates)}
        for j, ks in enumerate(targets):
            tm = 0
            for s in itertools.combinations(ks, r):
                i = index[s]
                cand_masks[i] |= 1 << j
                tm |= 1 << i
            target_masks.append(tm)
    return CoverInstance(n, k, r, mode, candidates, targets, tuple(cand_masks), tuple(target_masks))


def greedy_indices(instance: CoverInstance, start: Iterable[int] = ()) -> list[int]:
    chosen = list(start)
    covered = 0
    for i in chosen:
        covered |= instance.cand_masks[i]
    full = instance.full_mask
    while covered != full:
        best, best_gain = -1, 0
        for i, m in enumerate(instance.cand_masks):
            g = (m & ~covered).bit_count()
            if g > best_gain:
                best, best_gain = i, g
        if best < 0:
            raise ValueError("instance is infeasible")
        chosen.append(best)
        covered |= instance.cand_masks[best]
    return sorted(chosen)


def greedy_cover(instance: CoverInstance) -> Solution:
    """Repeatedly take the candidate covering most uncovered targets.

    Ties go to the least candidate index, so the result is deterministic.
    """
    return instance.to_solution(greedy_indices(instance))
