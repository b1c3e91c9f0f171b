"""Exact minimum covers, minimum Turán systems and maximum 1-packings.

Covers are found by depth-first branch and bound on the uncovered target
with the fewest remaining candidates. Minimisation is a descending series of
decision searches ("is there a cover of size <= s?") started from the greedy
cover, so the reported solution is the first one in a fixed search order and
does not depend on how many workers shared the work.
"""

from __future__ import annotations

import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import factorial
from typing import Sequence

from .cover import CoverInstance, TuranSystem, build_incidence, greedy_indices
from .words import Code, Word, all_words, canonical_key, deletion_ball

log = logging.getLogger(__name__)

DEFAULT_TIME_BUDGET = 300.0
DEFAULT_ISO_DEPTH = 2
MAX_ISO_GROUP = 10080

PROVED_OPTIMAL = "proved_optimal"
BEST_KNOWN = "best_known"


class BudgetExhausted(Exception):
    pass


class InfeasibleError(ValueError):
    """Enumeration requested at a scale this package refuses to attempt."""


@dataclass
class SolveResult:
    optimum: int
    solution: object
    status: str
    lower_bound: int
    upper_bound: int
    certificate: str = ""
    stats: dict = field(default_factory=dict)

    @property
    def proved_optimal(self) -> bool:
        return self.status == PROVED_OPTIMAL


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("INSCOVER_THREADS", "1")))
    except ValueError:
        return 1


# --- search primitives -----------------------------------------------------

def _iter_bits(m: int):
    while m:
        low = m & -m
        yield low.bit_length() - 1
        m ^= low


def _canon(indices, perms) -> tuple[int, ...]:
    return min(tuple(sorted(p[i] for i in indices)) for p in perms)


class _Searcher:
    """Depth-first decision search below one node of the shallow frontier."""

    def __init__(self, inst: CoverInstance, deadline: float | None):
        self.cm = inst.cand_masks
        self.tm = inst.target_masks
        self.full = inst.full_mask
        self.deadline = deadline
        self.nodes = 0

    def pick_target(self, unc: int, allowed: int):
        """Uncovered target with the fewest allowed candidates (-1 if one has none)."""
        tm = self.tm
        best_t, best_c = -1, None
        m = unc
        while m:
            low = m & -m
            t = low.bit_length() - 1
            m ^= low
            c = (tm[t] & allowed).bit_count()
            if c == 0:
                return -1, 0
            if best_c is None or c < best_c:
                best_t, best_c = t, c
                if c == 1:
                    break
        return best_t, best_c

    def bound_ok(self, unc: int, allowed: int, rem: int) -> bool:
        n_unc = unc.bit_count()
        cm = self.cm
        maxdeg = 0
        m = allowed
        while m:
            low = m & -m
            g = (cm[low.bit_length() - 1] & unc).bit_count()
            if g > maxdeg:
                maxdeg = g
                if maxdeg * rem >= n_unc:
                    return True
            m ^= low
        return maxdeg * rem >= n_unc

    def run(self, chosen: list[int], covered: int, allowed: int, bound: int,
            collect: list | None = None) -> list[int] | None:
        """First cover of size <= bound extending ``chosen``, or None.

        With ``collect`` given, every cover of size <= bound is appended and
        the search never stops early.
        """
        self.nodes += 1
        if self.deadline is not None and not self.nodes & 1023 and time.time() > self.deadline:
            raise BudgetExhausted
        unc = self.full & ~covered
        if not unc:
            if collect is not None:
                collect.append(sorted(chosen))
                return None
            return sorted(chosen)
        rem = bound - len(chosen)
        if rem <= 0:
            return None
        t, _ = self.pick_target(unc, allowed)
        if t < 0 or not self.bound_ok(unc, allowed, rem):
            return None
        cm = self.cm
        branch = sorted(_iter_bits(self.tm[t] & allowed),
                        key=lambda c: (-(cm[c] & unc).bit_count(), c))
        for c in branch:
            chosen.append(c)
            found = self.run(chosen, covered | cm[c], allowed, bound, collect)
            chosen.pop()
            if found is not None:
                return found
            allowed &= ~(1 << c)
        return None


def _frontier(inst: CoverInstance, bound: int, depth: int, perms) -> list[tuple[int, ...]]:
    """Shallow nodes expanded without sibling exclusions, one per isomorphism class.

    Every cover contains at least one frontier node (or is itself one), and
    each frontier node stands for "the best cover containing these candidates",
    which is what makes rejecting isomorphic copies sound.
    """
    s = _Searcher(inst, None)
    level = [()]
    out = []
    seen = set()
    for _ in range(depth):
        nxt = []
        for node in level:
            covered = 0
            for c in node:
                covered |= inst.cand_masks[c]
            unc = inst.full_mask & ~covered
            if not unc or len(node) >= bound:
                out.append(node)
                continue
            t, _ = s.pick_target(unc, ~0)
            for c in sorted(_iter_bits(inst.target_masks[t])):
                child = tuple(sorted(node + (c,)))
                key = _canon(child, perms) if perms else child
                if key in seen:
                    continue
                seen.add(key)
                nxt.append(child)
        level = nxt
    return out + level


def _node_search(inst, node, bound, deadline, collect):
    s = _Searcher(inst, deadline)
    covered = 0
    for c in node:
        covered |= inst.cand_masks[c]
    allowed = (1 << len(inst.candidates)) - 1
    out = [] if collect else None
    found = s.run(list(node), covered, allowed, bound, out)
    return (out if collect else found), s.nodes


_WORKER_INST: CoverInstance | None = None


def _init_worker(inst):
    global _WORKER_INST
    _WORKER_INST = inst


def _worker_task(node, bound, deadline, collect):
    try:
        return _node_search(_WORKER_INST, node, bound, deadline, collect)
    except BudgetExhausted:
        return BudgetExhausted, 0


class CoverSearch:
    """Decision and enumeration searches over a fixed instance."""

    def __init__(self, inst: CoverInstance, deadline: float | None = None, workers: int = 1,
                 iso_depth: int = DEFAULT_ISO_DEPTH, reversal: bool = True, isomorph_rejection: bool = True):
        self.inst = inst
        self.deadline = deadline
        self.workers = max(1, workers)
        self.iso_depth = iso_depth
        self.nodes = 0
        self.perms = None
        group_size = _group_size(inst, reversal)
        if isomorph_rejection and iso_depth > 0 and group_size <= MAX_ISO_GROUP:
            self.perms = inst.symmetry_permutations(reversal)

    def _nodes(self, bound):
        return _frontier(self.inst, bound, self.iso_depth, self.perms)

    def find(self, bound: int) -> list[int] | None:
        """First cover of size <= bound in search order (worker-count independent)."""
        frontier = self._nodes(bound)
        if self.workers == 1:
            for node in frontier:
                found, nodes = _node_search(self.inst, node, bound, self.deadline, False)
                self.nodes += nodes
                if found is not None:
                    return found
            return None
        with ProcessPoolExecutor(self.workers, initializer=_init_worker, initargs=(self.inst,)) as ex:
            futs = [ex.submit(_worker_task, node, bound, self.deadline, False) for node in frontier]
            try:
                for f in futs:
                    found, nodes = f.result()
                    if found is BudgetExhausted:
                        raise BudgetExhausted
                    self.nodes += nodes
                    if found is not None:
                        return found
            finally:
                for f in futs:
                    f.cancel()
        return None

    def find_all(self, bound: int) -> list[list[int]]:
        """All covers of size <= bound, up to the isomorph rejection at the frontier."""
        frontier = self._nodes(bound)
        sols = []
        if self.workers == 1:
            for node in frontier:
                found, nodes = _node_search(self.inst, node, bound, self.deadline, True)
                self.nodes += nodes
                sols.extend(found)
        else:
            with ProcessPoolExecutor(self.workers, initializer=_init_worker, initargs=(self.inst,)) as ex:
                futs = [ex.submit(_worker_task, node, bound, self.deadline, True) for node in frontier]
                for f in futs:
                    found, nodes = f.result()
                    if found is BudgetExhausted:
                        raise BudgetExhausted
                    self.nodes += nodes
                    sols.extend(found)
        return sols


def _group_size(inst: CoverInstance, reversal: bool) -> int:
    g = factorial(inst.n)
    return 2 * g if inst.mode == "sequence" and reversal else g


def root_lower_bound(inst: CoverInstance) -> int:
    """Ceiling of #targets / max candidate degree; the volume bound in sequence mode."""
    if not inst.targets:
        return 0
    return -(-len(inst.targets) // inst.max_degree)


def _minimize(inst: CoverInstance, time_budget: float | None, workers: int,
              iso_depth: int, isomorph_rejection: bool) -> SolveResult:
    t0 = time.time()
    deadline = None if time_budget is None else t0 + time_budget
    lb = root_lower_bound(inst)
    best = greedy_indices(inst)
    search = CoverSearch(inst, deadline, workers, iso_depth, True, isomorph_rejection)
    status = PROVED_OPTIMAL
    certificate = ""
    try:
        while len(best) > lb:
            found = search.find(len(best) - 1)
            if found is None:
                lb = len(best)
                certificate = f"exhaustive search found no cover of size {len(best) - 1}"
                break
            log.debug("improved to %d", len(found))
            best = found
        else:
            certificate = f"counting bound ceil(targets/max degree) = {lb}"
    except BudgetExhausted:
        status = BEST_KNOWN
        certificate = f"time budget exhausted; best lower bound {lb}"
    elapsed = time.time() - t0
    return SolveResult(
        optimum=len(best),
        solution=inst.to_solution(best),
        status=status,
        lower_bound=lb if status == BEST_KNOWN else len(best),
        upper_bound=len(best),
        certificate=certificate,
        stats={"nodes": search.nodes, "elapsed": elapsed, "workers": search.workers},
    )


def min_cover(n: int, k: int, r: int, time_budget: float | None = DEFAULT_TIME_BUDGET,
              workers: int | None = None, iso_depth: int = DEFAULT_ISO_DEPTH,
              isomorph_rejection: bool = True) -> SolveResult:
    """Exact S(n, k, r): the fewest words of [n]^r covering [n]^k."""
    inst = build_incidence(n, k, r, "sequence")
    return _minimize(inst, time_budget, workers or default_workers(), iso_depth, isomorph_rejection)


def min_turan(n: int, k: int, r: int, time_budget: float | None = DEFAULT_TIME_BUDGET,
              workers: int | None = None, iso_depth: int = DEFAULT_ISO_DEPTH,
              isomorph_rejection: bool = True) -> SolveResult:
    """Exact T(n, k, r): the fewest r-subsets of [n] meeting every k-subset."""
    if not 1 <= r < k:
        raise ValueError(f"need 1 <= r < k, got r={r}, k={k}")
    if n < k:
        return SolveResult(0, TuranSystem(n, r), PROVED_OPTIMAL, 0, 0,
                           "no k-subsets to cover", {"nodes": 0, "elapsed": 0.0, "workers": 1})
    inst = build_incidence(n, k, r, "turan")
    return _minimize(inst, time_budget, workers or default_workers(), iso_depth, isomorph_rejection)


MAX_ENUMERATION_CANDIDATES = 64


def enumerate_optimal(n: int, k: int, r: int, reversal: bool = False,
                      time_budget: float | None = DEFAULT_TIME_BUDGET,
                      workers: int | None = None) -> list[Code]:
    """One canonical representative per equivalence class of optimal covers.

    Classes are taken under symbol renaming, plus word reversal when
    ``reversal`` is set.
    """
    inst = build_incidence(n, k, r, "sequence")
    if len(inst.candidates) > MAX_ENUMERATION_CANDIDATES:
        raise InfeasibleError(f"enumeration over {len(inst.candidates)} candidates is out of reach")
    res = _minimize(inst, time_budget, workers or default_workers(), DEFAULT_ISO_DEPTH, True)
    if not res.proved_optimal:
        raise BudgetExhausted("optimum not proved within budget")
    deadline = None if time_budget is None else time.time() + time_budget
    search = CoverSearch(inst, deadline, workers or default_workers(), DEFAULT_ISO_DEPTH, reversal, True)
    classes = {}
    for sol in search.find_all(res.optimum):
        code = inst.to_solution(sol)
        key = canonical_key(code, reversal)
        classes.setdefault(key, code.with_words(key))
    return [classes[key] for key in sorted(classes)]


# --- packings --------------------------------------------------------------

def conflict_graph(n: int, r: int) -> tuple[list[Word], list[int]]:
    """Words of length r+1 and, per word, the bitset of words sharing a length-r subsequence."""
    words = list(all_words(n, r + 1))
    balls = [deletion_ball(w, r) for w in words]
    owners: dict[Word, int] = {}
    for i, b in enumerate(balls):
        for x in b:
            owners[x] = owners.get(x, 0) | (1 << i)
    adj = []
    for i, b in enumerate(balls):
        m = 0
        for x in b:
            m |= owners[x]
        adj.append(m & ~(1 << i))
    return words, adj


def _greedy_color_bound(cands: int, compat: list[int]):
    """Greedy colouring of the compatibility graph restricted to ``cands``.

    Returns vertices in colouring order with the colour count so far; a clique
    can use at most one vertex per colour class.
    """
    order, colors = [], []
    uncolored = cands
    color = 0
    while uncolored:
        color += 1
        q = uncolored
        while q:
            low = q & -q
            v = low.bit_length() - 1
            q ^= low
            q &= ~compat[v]
            uncolored ^= low
            order.append(v)
            colors.append(color)
    return order, colors


def max_independent_set(adj: Sequence[int], deadline: float | None = None,
                        initial: Sequence[int] = ()) -> tuple[list[int], bool, int]:
    """Maximum independent set of a graph given as adjacency bitsets.

    Branch and bound in the style of a colouring-bounded max-clique search on
    the complement graph. Returns ``(vertices, completed, nodes)``.
    """
    nv = len(adj)
    allv = (1 << nv) - 1
    compat = [allv & ~adj[v] & ~(1 << v) for v in range(nv)]
    best = list(initial)
    nodes = 0

    def expand(current: list[int], cands: int):
        nonlocal best, nodes
        nodes += 1
        if deadline is not None and not nodes & 1023 and time.time() > deadline:
            raise BudgetExhausted
        order, colors = _greedy_color_bound(cands, compat)
        for idx in range(len(order) - 1, -1, -1):
            if len(current) + colors[idx] <= len(best):
                return
            v = order[idx]
            current.append(v)
            new = cands & compat[v]
            if new:
                expand(current, new)
            elif len(current) > len(best):
                best = sorted(current)
            current.pop()
            cands &= ~(1 << v)

    try:
        expand([], allv)
        done = True
    except BudgetExhausted:
        done = False
    return sorted(best), done, nodes


def greedy_packing(adj: Sequence[int]) -> list[int]:
    chosen, blocked = [], 0
    for v in range(len(adj)):
        if not blocked >> v & 1:
            chosen.append(v)
            blocked |= adj[v] | (1 << v)
    return chosen


def max_packing(n: int, r: int, time_budget: float | None = DEFAULT_TIME_BUDGET) -> SolveResult:
    """Exact P(n, r+1, r): most words of [n]^(r+1) with pairwise disjoint deletion balls."""
    if n < 1 or r < 1:
        raise ValueError("need n >= 1 and r >= 1")
    t0 = time.time()
    deadline = None if time_budget is None else t0 + time_budget
    words, adj = conflict_graph(n, r)
    start = greedy_packing(adj)
    best, done, nodes = max_independent_set(adj, deadline, start)
    # every word's deletion ball lies in [n]^r, and balls are disjoint
    upper = len(best) if done else n**r
    return SolveResult(
        optimum=len(best),
        solution=[words[i] for i in best],
        status=PROVED_OPTIMAL if done else BEST_KNOWN,
        lower_bound=len(best),
        upper_bound=upper,
        certificate=("colouring-bounded exhaustive search" if done
                     else "time budget exhausted; upper bound from disjoint balls in [n]^r"),
        stats={"nodes": nodes, "elapsed": time.time() - t0, "workers": 1},
    )


def is_packing(words: Sequence[Word], r: int) -> bool:
    seen: set[Word] = set()
    for w in words:
        b = deletion_ball(w, r)
        if seen & b:
            return False
        seen |= b
    return True
