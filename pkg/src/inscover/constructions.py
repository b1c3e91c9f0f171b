"""Explicit codes and Turán systems, and the maps between them."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial, perm
from typing import NamedTuple

from .cover import TuranSystem, verify_cover, verify_turan
from .words import Code, all_words, is_injective, is_symmetric


class ConstructionError(ValueError):
    """Input rejected by a construction; ``witness`` shows why when available."""

    def __init__(self, msg, witness=None):
        super().__init__(msg if witness is None else f"{msg} (witness {witness})")
        self.witness = witness


@dataclass(frozen=True)
class SymbolMap:
    """A function from ``[source_size]`` to ``[target_size]`` stored as a table."""

    source_size: int
    target_size: int
    table: tuple[int, ...]

    def __post_init__(self):
        table = tuple(int(v) for v in self.table)
        if len(table) != self.source_size:
            raise ValueError(f"table has {len(table)} entries, expected {self.source_size}")
        if any(not 0 <= v < self.target_size for v in table):
            raise ValueError(f"table entries must lie in [0, {self.target_size})")
        object.__setattr__(self, "table", table)

    @classmethod
    def mod(cls, m: int, n: int) -> SymbolMap:
        return cls(m, n, tuple(y % n for y in range(m)))

    def __call__(self, s: int) -> int:
        return self.table[s]

    def fibres(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.target_size)]
        for y, x in enumerate(self.table):
            out[x].append(y)
        return out


def preimage_code(c: Code, f: SymbolMap) -> Code:
    """All words over ``[m]`` whose coordinatewise image under ``f`` lies in ``c``."""
    if f.target_size != c.n:
        raise ValueError(f"map lands in [{f.target_size}] but the code is over [{c.n}]")
    fib = f.fibres()
    words = set()
    for x in c.words:
        words.update(itertools.product(*(fib[s] for s in x)))
    return Code(f.source_size, c.r, frozenset(words))


def mod_lift(c: Code, m: int) -> Code:
    """Preimage of ``c`` under ``y -> y mod n``; covers ``[m]^k`` whenever ``c`` covers ``[n]^k``."""
    if m < c.n:
        raise ValueError(f"cannot lift to a smaller alphabet ({m} < {c.n})")
    return preimage_code(c, SymbolMap.mod(m, c.n))


class RandomLift(NamedTuple):
    code: Code
    symbol_map: SymbolMap


def random_lift(c: Code, n: int, seed: int) -> RandomLift:
    """Preimage of ``c`` under a uniformly random map ``[n] -> [N]``."""
    if n < 1:
        raise ValueError("alphabet size must be positive")
    rng = random.Random(seed)
    f = SymbolMap(n, c.n, tuple(rng.randrange(c.n) for _ in range(n)))
    return RandomLift(preimage_code(c, f), f)


def expected_lift_size(c: Code, n: int) -> Fraction:
    """Exact expected size of :func:`random_lift` over all maps ``[n] -> [N]``.

    A word of ``[n]^r`` whose symbols fall into ``d`` distinct values is mapped
    to a uniform word of ``[N]^d`` (read back through the word's equality pattern).
    """
    total = Fraction(0)
    cache: dict[tuple[int, ...], Fraction] = {}
    for w in all_words(n, c.r):
        first: dict[int, int] = {}
        pattern = tuple(first.setdefault(s, len(first)) for s in w)
        p = cache.get(pattern)
        if p is None:
            d = len(first)
            hits = sum(1 for v in all_words(c.n, d) if tuple(v[i] for i in pattern) in c.words)
            p = cache[pattern] = Fraction(hits, c.n**d)
        total += p
    return total


def random_lift_upper(c: Code, n: int) -> Fraction:
    """Bound on the expected lift size: injective words hit with probability density(c)."""
    inj = perm(n, c.r)
    return inj * c.density + (n**c.r - inj)


def turan_to_code(t: TuranSystem, k: int) -> Code:
    """All orderings of the sets of ``t`` plus every non-injective word of ``[n]^r``."""
    check = verify_turan(t, k)
    if not check:
        raise ConstructionError("not a Turán system", check.witness)
    words = set()
    for s in t.sets:
        words.update(itertools.permutations(s))
    words.update(w for w in all_words(t.n, t.r) if not is_injective(w))
    return Code(t.n, t.r, frozenset(words))


def code_to_turan(c: Code, k: int) -> TuranSystem:
    """Supports of the injective words of a symmetric covering code.

    Every ``k``-subset, listed in increasing order, is an injective word of
    ``[n]^k``; it is covered by an injective codeword whose support lies in it.
    """
    if c.n < k:
        raise ConstructionError(f"need n >= k, got n={c.n}, k={k}")
    if not is_symmetric(c):
        raise ConstructionError("code is not symmetric")
    check = verify_cover(c, k)
    if not check:
        raise ConstructionError("code does not cover", check.witness)
    return TuranSystem(c.n, c.r, frozenset(tuple(sorted(w)) for w in c.words if is_injective(w)))


def code_from_turan_size_bound(t: TuranSystem) -> int:
    return len(t) * factorial(t.r) + (t.n**t.r - perm(t.n, t.r))


def half_cube_code(n: int) -> Code:
    """Pairs with both symbols in the low half or both in the high half.

    The low half is ``{0, ..., ceil(n/2)-1}``. Any three symbols put two in the
    same half, so the code covers ``[n]^3``.
    """
    if n < 1:
        raise ValueError("alphabet size must be positive")
    h = (n + 1) // 2
    lo, hi = range(h), range(h, n)
    words = set(itertools.product(lo, lo)) | set(itertools.product(hi, hi))
    return Code(n, 2, frozenset(words))


def mantel_system(n: int) -> TuranSystem:
    """Edges inside the parts ``{0, ..., floor(n/2)-1}`` and ``{floor(n/2), ..., n-1}``."""
    if n < 3:
        raise ValueError("need n >= 3")
    h = n // 2
    edges = list(itertools.combinations(range(h), 2)) + list(itertools.combinations(range(h, n), 2))
    return TuranSystem(n, 2, frozenset(edges))


def turan43_parts(n: int) -> list[list[int]]:
    return [list(range(i, n, 3)) for i in range(3)]


def turan43_system(n: int) -> TuranSystem:
    """Triples inside one part, or with two points in part i and one in part i+1 (mod 3).

    Symbol ``s`` goes to part ``s mod 3``. For ``n = 3`` there are no
    4-subsets and the single triple is returned.
    """
    if n == 3:
        return TuranSystem(3, 3, frozenset({(0, 1, 2)}))
    if n < 3:
        raise ValueError("need n >= 3")
    parts = turan43_parts(n)
    triples = set()
    for i in range(3):
        triples.update(itertools.combinations(parts[i], 3))
        for pair in itertools.combinations(parts[i], 2):
            for v in parts[(i + 1) % 3]:
                triples.add(tuple(sorted(pair + (v,))))
    return TuranSystem(n, 3, frozenset(triples))


def turan43_size(n: int) -> int:
    """Size of :func:`turan43_system` from the part sizes alone."""
    if n == 3:
        return 1
    sizes = [len(p) for p in turan43_parts(n)]
    return sum(comb(sizes[i], 3) + comb(sizes[i], 2) * sizes[(i + 1) % 3] for i in range(3))
