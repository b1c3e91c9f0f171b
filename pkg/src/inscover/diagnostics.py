"""Exact checks of the counting inequalities behind the density lower bounds.

Everything here is rational arithmetic over the uniform measure on
``[n]^(r+1)`` (or over an explicit weighted ground set), so every comparison
is exact.

For a code ``C`` in ``[n]^r`` and a position ``i`` of a word of length
``r+1``, ``C_i`` is the set of words whose deletion at position ``i`` lands in
``C``. Positions are 0-based throughout.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .words import Code, Word, all_words


class InequalityViolation(AssertionError):
    """An inequality that should hold failed; carries the offending input."""

    def __init__(self, msg, case=None):
        super().__init__(f"{msg}: {case!r}" if case is not None else msg)
        self.case = case


class NotCoveringError(ValueError):
    def __init__(self, witness: Word):
        super().__init__(f"code does not cover; uncovered word {witness}")
        self.witness = witness


@dataclass(frozen=True)
class InequalityResult:
    holds: bool
    lhs: Fraction
    rhs: Fraction

    def __bool__(self) -> bool:
        return self.holds

    @property
    def slack(self) -> Fraction:
        return self.rhs - self.lhs


# --- weighted set systems ----------------------------------------------------

@dataclass(frozen=True)
class WeightedSetSystem:
    """Sets over ``range(ground_size)`` with a probability weight per element."""

    ground_size: int
    weights: tuple[Fraction, ...]
    sets: tuple[frozenset[int], ...]

    def __post_init__(self):
        ws = tuple(Fraction(w) for w in self.weights)
        if len(ws) != self.ground_size:
            raise ValueError("one weight per ground element required")
        if any(w < 0 for w in ws) or sum(ws) != 1:
            raise ValueError("weights must be a probability distribution")
        sets = tuple(frozenset(s) for s in self.sets)
        for s in sets:
            if any(not 0 <= x < self.ground_size for x in s):
                raise ValueError("set element outside the ground set")
        object.__setattr__(self, "weights", ws)
        object.__setattr__(self, "sets", sets)

    @classmethod
    def uniform(cls, ground_size: int, sets: Iterable[Iterable[int]]) -> WeightedSetSystem:
        return cls(ground_size, (Fraction(1, ground_size),) * ground_size, tuple(frozenset(s) for s in sets))

    def measure(self, elems: Iterable[int]) -> Fraction:
        return sum((self.weights[x] for x in elems), Fraction(0))

    def multiplicity(self) -> list[int]:
        mult = [0] * self.ground_size
        for s in self.sets:
            for x in s:
                mult[x] += 1
        return mult


def validate_tree(k: int, edges: Sequence[tuple[int, int]]) -> None:
    """Raise ValueError unless ``edges`` form a spanning tree on ``range(k)``."""
    if len(edges) != k - 1:
        raise ValueError(f"a spanning tree on {k} vertices has {k - 1} edges, got {len(edges)}")
    parent = list(range(k))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for a, b in edges:
        if not (0 <= a < k and 0 <= b < k) or a == b:
            raise ValueError(f"bad edge {(a, b)}")
        ra, rb = find(a), find(b)
        if ra == rb:
            raise ValueError(f"edge {(a, b)} closes a cycle")
        parent[ra] = rb


def bonferroni_check(system: WeightedSetSystem, tree_edges: Sequence[tuple[int, int]]) -> InequalityResult:
    """measure(union) <= sum of measures - sum over tree edges of pairwise intersections."""
    validate_tree(len(system.sets), tree_edges)
    sets = system.sets
    union = frozenset().union(*sets)
    lhs = system.measure(union)
    rhs = sum((system.measure(s) for s in sets), Fraction(0))
    rhs -= sum((system.measure(sets[a] & sets[b]) for a, b in tree_edges), Fraction(0))
    return InequalityResult(lhs <= rhs, lhs, rhs)


def residue_complement(system: WeightedSetSystem, center: int) -> frozenset[int]:
    """Elements in at least two but not all sets, and outside set ``center``."""
    k = len(system.sets)
    mult = system.multiplicity()
    inside = system.sets[center]
    return frozenset(x for x in range(system.ground_size) if 2 <= mult[x] < k and x not in inside)


def star_bonferroni_check(system: WeightedSetSystem, center: int) -> InequalityResult:
    """The tree inequality for the star at ``center``, strengthened by the residue outside it."""
    k = len(system.sets)
    if not 0 <= center < k:
        raise ValueError(f"center {center} out of range")
    edges = [(center, i) for i in range(k) if i != center]
    base = bonferroni_check(system, edges)
    r_j = system.measure(residue_complement(system, center))
    return InequalityResult(base.lhs <= base.rhs - r_j, base.lhs, base.rhs - r_j)


def random_tree(k: int, rng: random.Random) -> list[tuple[int, int]]:
    """Uniform random labelled tree on ``range(k)`` via a Prüfer sequence."""
    if k == 1:
        return []
    seq = [rng.randrange(k) for _ in range(k - 2)]
    degree = [1] * k
    for v in seq:
        degree[v] += 1
    edges = []
    for v in seq:
        leaf = min(u for u in range(k) if degree[u] == 1)
        edges.append((leaf, v))
        degree[leaf] -= 1
        degree[v] -= 1
    u, w = (x for x in range(k) if degree[x] == 1)
    edges.append((u, w))
    return edges


def random_system(rng: random.Random) -> WeightedSetSystem:
    ground = rng.randint(1, 32)
    k = rng.randint(2, 8)
    p = rng.choice([i / 10 for i in range(1, 10)])
    sets = [frozenset(x for x in range(ground) if rng.random() < p) for _ in range(k)]
    return WeightedSetSystem.uniform(ground, sets)


def trial_rng(seed: int, index: int) -> random.Random:
    return random.Random(seed * 1_000_003 + index)


@dataclass
class FuzzReport:
    trials: int
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def fuzz_bonferroni(trials: int, seed: int, star: bool = False, raise_on_violation: bool = True) -> FuzzReport:
    """Check the tree (or star) inequality on seeded random systems."""
    report = FuzzReport(trials)
    for i in range(trials):
        rng = trial_rng(seed, i)
        system = random_system(rng)
        if star:
            center = rng.randrange(len(system.sets))
            res = star_bonferroni_check(system, center)
            case = (system, center)
        else:
            edges = random_tree(len(system.sets), rng)
            res = bonferroni_check(system, edges)
            case = (system, edges)
        if not res.holds:
            if raise_on_violation:
                raise InequalityViolation(f"trial {i} (seed {seed})", case)
            report.violations.append(case)
    return report


# --- deletion sets and atom decomposition -------------------------------------

def deletion_memberships(c: Code) -> Iterable[tuple[Word, frozenset[int]]]:
    """For each word ``a`` of ``[n]^(r+1)`` in lex order, the positions ``i`` with ``a`` in ``C_i``."""
    words = c.words
    r = c.r
    for a in all_words(c.n, r + 1):
        yield a, frozenset(i for i in range(r + 1) if a[:i] + a[i + 1:] in words)


@dataclass
class AtomProfile:
    """Measures of the kernel / petal / residue parts of ``[n]^(r+1)``.

    ``kernel``: words in every ``C_i``; ``petals[i]``: words in ``C_i`` only;
    ``residue``: the rest; ``residue_complements[j]``: residue outside ``C_j``.
    """

    n: int
    r: int
    density: Fraction
    kernel: Fraction
    petals: list[Fraction]
    residue: Fraction
    residue_complements: list[Fraction]
    set_measures: list[Fraction]
    pair_measures: dict[tuple[int, int], Fraction]
    histogram: dict[int, int]

    @property
    def total(self) -> Fraction:
        return self.kernel + sum(self.petals) + self.residue


def _intersection_measures(c: Code, require_cover: bool):
    r = c.r
    total = c.n ** (r + 1)
    hist: Counter = Counter()
    sizes = [0] * (r + 1)
    pairs = {p: 0 for p in itertools.combinations(range(r + 1), 2)}
    petals = [0] * (r + 1)
    kernel = residue = 0
    res_comp = [0] * (r + 1)
    for a, members in deletion_memberships(c):
        t = len(members)
        if t == 0 and require_cover:
            raise NotCoveringError(a)
        hist[t] += 1
        for i in members:
            sizes[i] += 1
        for p in itertools.combinations(sorted(members), 2):
            pairs[p] += 1
        if t == r + 1:
            kernel += 1
        elif t == 1:
            petals[next(iter(members))] += 1
        elif t > 1:
            residue += 1
            for j in range(r + 1):
                if j not in members:
                    res_comp[j] += 1
    fr = lambda x: Fraction(x, total)  # noqa: E731
    return AtomProfile(
        n=c.n, r=r, density=c.density,
        kernel=fr(kernel), petals=[fr(x) for x in petals], residue=fr(residue),
        residue_complements=[fr(x) for x in res_comp],
        set_measures=[fr(x) for x in sizes],
        pair_measures={p: fr(x) for p, x in pairs.items()},
        histogram=dict(sorted(hist.items())),
    )


def atom_profile(c: Code) -> AtomProfile:
    """Atom decomposition of ``[n]^(r+1)`` for a single-insertion covering code."""
    return _intersection_measures(c, require_cover=True)


def check_residue_bound(p: AtomProfile, r: int | None = None) -> InequalityResult:
    """measure(residue) <= r(r+1)(1 - density)(density - 1/r)."""
    r = p.r if r is None else r
    lam = p.density
    rhs = r * (r + 1) * (1 - lam) * (lam - Fraction(1, r))
    return InequalityResult(p.residue <= rhs, p.residue, rhs)


def check_residue_complement_bounds(p: AtomProfile) -> list[InequalityResult]:
    """Per position j: measure(residue outside C_j) <= (1 - density)(r * density - 1).

    This per-position form does not hold for every covering code; see
    :func:`check_residue_bound` for the aggregate form.
    """
    lam = p.density
    rhs = (1 - lam) * (p.r * lam - 1)
    return [InequalityResult(x <= rhs, x, rhs) for x in p.residue_complements]


def check_volume_identity(p: AtomProfile) -> bool:
    """(1 - density)(r density - 1) >= 0, i.e. density >= 1/r for a covering code."""
    lam = p.density
    return (1 - lam) * (p.r * lam - 1) >= 0


@dataclass(frozen=True)
class PairwiseResult:
    holds: bool
    min_ratio: Fraction | None
    density_squared: Fraction
    failures: tuple[tuple[int, int], ...] = ()

    def __bool__(self) -> bool:
        return self.holds


def check_pairwise_intersections(c: Code, pairs: str = "all") -> PairwiseResult:
    """measure(C_i & C_j) >= density^2 for every pair, or only adjacent positions.

    For adjacent positions ``j = i + 1`` this is Cauchy-Schwarz and holds for
    every code. For other pairs it can fail, even for covering codes:
    ``{00, 10, 11}`` over two symbols has ``measure(C_0 & C_2) = 1/2 < 9/16``.
    """
    if pairs not in ("all", "adjacent"):
        raise ValueError("pairs must be 'all' or 'adjacent'")
    prof = _intersection_measures(c, require_cover=False)
    lam2 = c.density ** 2
    ratio = None
    failures = []
    for (i, j), m in prof.pair_measures.items():
        if pairs == "adjacent" and j != i + 1:
            continue
        if m < lam2:
            failures.append((i, j))
        if lam2:
            q = m / lam2
            ratio = q if ratio is None else min(ratio, q)
    return PairwiseResult(not failures, ratio, lam2, tuple(failures))


def random_code(rng: random.Random, n: int, r: int, p: float) -> Code:
    return Code(n, r, frozenset(w for w in all_words(n, r) if rng.random() < p))
