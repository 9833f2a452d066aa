"""Shared complexes for the test-suite."""
from __future__ import annotations

import functools

import pytest

from pseudofold.generators import (
    boundary_4simplex,
    chain_sum,
    edge_fold_block,
    handle_example,
    inflate,
    random_relabel,
    rp2_6,
    sharp_one_singularity,
    sharp_two_singularities,
    sum_at_vertex,
    suspension,
    torus_7,
    vertex_fold_block,
)


@functools.lru_cache(maxsize=None)
def corpus() -> dict:
    """Named complexes, all at most 40 vertices."""
    vblock = vertex_fold_block(True)[0]
    kblock = vertex_fold_block(False)[0]
    eblock = edge_fold_block()[0]
    items = {
        "boundary": boundary_4simplex(),
        "chain2": chain_sum(2),
        "chain5": chain_sum(5),
        "handle": handle_example()[0],
        "vblock": vblock,
        "kblock": kblock,
        "eblock": eblock,
        "vblock2": sum_at_vertex(vblock, 0, vblock, 0),
        "sharp1_1": sharp_one_singularity(1)[0],
        "sharp1_2": sharp_one_singularity(2)[0],
        "sharp1_3": sharp_one_singularity(3)[0],
        "sharp1k_1": sharp_one_singularity(1, orientable=False)[0],
        "sharp2_1": sharp_two_singularities(1)[0],
        "sharp2_2": sharp_two_singularities(2)[0],
        "susp_rp2": suspension(rp2_6()),
        "susp_torus": suspension(torus_7()),
    }
    for name, base, steps in (("chain3", chain_sum(3), 6), ("vblock", vblock, 5),
                              ("eblock", eblock, 5), ("kblock", kblock, 4)):
        for seed in (1, 2):
            items[f"{name}_inflated{seed}"] = random_relabel(inflate(base, steps, seed), seed + 10)
    return items


@pytest.fixture(scope="session")
def complexes() -> dict:
    return corpus()


ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
