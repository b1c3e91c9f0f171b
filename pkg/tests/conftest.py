"""Shared fixtures: solved instances and the corpus of single-insertion covering codes."""

from __future__ import annotations

import random

import pytest

from inscover import constructions as cons
from inscover.cover import build_incidence, greedy_cover, verify_cover
from inscover.solvers import enumerate_optimal, min_cover, min_turan
from inscover.words import Code, all_words, symmetrize

GROZEA = [
    (0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0),
    (1, 1, 1), (1, 1, 2), (1, 2, 1), (2, 1, 1),
    (2, 2, 2), (2, 2, 0), (2, 0, 2), (0, 2, 2),
]

# (n, k, r) instances solved once per session; k = r + 1 except where noted
COVER_INSTANCES = [(1, 2, 1), (2, 3, 2), (3, 3, 2), (4, 3, 2), (5, 3, 2), (2, 4, 3), (3, 4, 3),
                   (4, 4, 3), (2, 5, 4), (2, 4, 2), (3, 5, 3)]
TURAN_INSTANCES = [(n, 3, 2) for n in range(3, 8)] + [(n, 4, 3) for n in range(4, 8)] + [(n, 5, 4) for n in range(5, 8)]


def grozea_code() -> Code:
    return Code(3, 3, frozenset(GROZEA))


@pytest.fixture(scope="session")
def grozea():
    return grozea_code()


@pytest.fixture(scope="session")
def solved_covers():
    return {p: min_cover(*p, workers=1) for p in COVER_INSTANCES}


@pytest.fixture(scope="session")
def solved_turans():
    return {p: min_turan(*p, workers=1) for p in TURAN_INSTANCES}


def random_minimal_cover(rng: random.Random, n: int, r: int) -> Code:
    """Drop words of the full code in random order while the rest still covers."""
    words = set(all_words(n, r))
    order = sorted(words)
    rng.shuffle(order)
    for w in order:
        trial = Code(n, r, frozenset(words - {w}))
        if verify_cover(trial, r + 1):
            words.discard(w)
    return Code(n, r, frozenset(words))


def random_covering_superset(rng: random.Random, c: Code, p: float) -> Code:
    extra = {w for w in all_words(c.n, c.r) if rng.random() < p}
    return c.with_words(c.words | extra)


def build_corpus(solved_covers, solved_turans, seed: int = 2024, random_count: int = 60) -> list[tuple[str, Code]]:
    """Every single-insertion covering code the suite produces, labelled by origin."""
    out: list[tuple[str, Code]] = []

    def add(label, code):
        out.append((label, code))
        sym = symmetrize(code)
        if sym != code:
            out.append((label + " symmetrized", sym))

    add("grozea", grozea_code())
    for (n, k, r), res in solved_covers.items():
        if k == r + 1:
            add(f"S{(n, k, r)} optimum", res.solution)
            add(f"S{(n, k, r)} greedy", greedy_cover(build_incidence(n, k, r)))
    for p in [(1, 2, 1), (2, 3, 2), (3, 4, 3)]:
        for c in enumerate_optimal(*p, reversal=False, workers=1):
            add(f"class of S{p}", c)
    for n in range(1, 7):
        add(f"half-cube n={n}", cons.half_cube_code(n))
        add(f"full n={n} r=2", Code.full(n, 2))
    for (n, k, r), res in solved_turans.items():
        if k == r + 1:
            add(f"turan-to-code T{(n, k, r)}", cons.turan_to_code(res.solution, k))
    for n in range(3, 7):
        add(f"mantel code n={n}", cons.turan_to_code(cons.mantel_system(n), 3))
    for n in range(4, 6):
        add(f"turan43 code n={n}", cons.turan_to_code(cons.turan43_system(n), 4))
    pair = Code(2, 2, frozenset({(0, 0), (1, 1)}))
    for m in range(2, 7):
        add(f"mod-lift pair m={m}", cons.mod_lift(pair, m))
    for m in (3, 4):
        add(f"mod-lift grozea m={m}", cons.mod_lift(grozea_code(), m))
    for s in range(5):
        add(f"random-lift pair seed={s}", cons.random_lift(pair, 6, s).code)
        add(f"random-lift grozea seed={s}", cons.random_lift(grozea_code(), 4, s).code)
    rng = random.Random(seed)
    for i in range(random_count):
        n, r = rng.choice([(2, 2), (3, 2), (4, 2), (2, 3), (3, 3)])
        c = random_minimal_cover(rng, n, r)
        add(f"random minimal cover #{i} n={n} r={r}", c)
        add(f"random superset #{i}", random_covering_superset(rng, c, 0.2))
    return out


@pytest.fixture(scope="session")
def covering_corpus(solved_covers, solved_turans):
    return build_corpus(solved_covers, solved_turans)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import REPORT
    except ImportError:
        return
    if REPORT:
        terminalreporter.section("acceptance criteria")
        for line in REPORT:
            terminalreporter.write_line(line)
