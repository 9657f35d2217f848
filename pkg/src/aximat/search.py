"""Backtracking search for matrices solving an independence problem.

The driver compiles each (size, designated count) phase to flat arrays,
hands subtrees to a kernel (compiled extension or pure Python), and
re-verifies every raw solution with check_solution before emitting it.
An exhaustive oracle with no pruning at all cross-validates the search on
small spaces.
"""

from __future__ import annotations

import enum
import itertools
import multiprocessing
import time
from dataclasses import dataclass
from typing import Iterator, Optional

from . import kernel as kernel_mod
from ._compile import CompiledSearch, compile_search, decode_witness, matrix_from_cells
from .formula import variables_of
from .matrix import Countermodel, Matrix
from .problems import IndependenceProblem, check_solution

# re-exported: the observable counterpart of the kernel state
from .partial import (  # noqa: F401
    CellRef,
    Contradiction,
    Known,
    PartialMatrix,
    Unknown,
    eval_partial,
    propagate,
)


class SearchStatus(enum.Enum):
    EXHAUSTED = "exhausted"
    LIMIT_REACHED = "limit-reached"
    BUDGET_EXCEEDED = "budget-exceeded"


@dataclass
class SearchConfig:
    """Knobs for one search run.

    ``limit`` counts emitted solutions (0 = unlimited).  ``fixed_tables``
    pins whole connective tables by label before the search starts.
    ``kernel`` forces 'python' or 'compiled'; None picks the import-time
    default.
    """

    limit: int = 0
    canonical_only: bool = False
    deterministic: bool = False
    jobs: int = 1
    fixed_tables: Optional[dict[str, object]] = None
    budget: Optional[float] = None
    target_prune: bool = True
    kernel: Optional[str] = None

    def __post_init__(self):
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")
        if self.limit < 0:
            raise ValueError("limit must be non-negative")


@dataclass(frozen=True)
class Solution:
    matrix: Matrix
    witness: Countermodel


class SearchOutcome:
    """Iterator over solutions; ``status`` and ``stats`` are populated
    once iteration finishes."""

    def __init__(self, gen: Iterator[Solution]):
        self._gen = gen
        self.status: Optional[SearchStatus] = None
        self.stats: dict = {}

    def __iter__(self) -> Iterator[Solution]:
        return self._gen

    def solutions(self) -> list[Solution]:
        """Drain the stream and return everything."""
        return list(self._gen)


def _new_stats() -> dict:
    return {
        "nodes": 0,
        "leaves": 0,
        "prunes_axiom": 0,
        "prunes_target": 0,
        "raw_solutions": 0,
        "emitted": 0,
        "phases": 0,
    }


def _accumulate(total: dict, part: dict) -> None:
    for key in ("nodes", "leaves", "prunes_axiom", "prunes_target"):
        total[key] += part[key]
    total["raw_solutions"] += part["solutions"]


def _run_task(args) -> tuple[list[tuple], int, dict]:
    """Search one subtree and filter its raw solutions; runs in workers.

    Returns solutions as (cells, witness_rank, witness_value) triples that
    already passed re-verification and the canonical filter.
    """
    compiled, prefix, problem, canonical_only, limit, deadline, target_prune, kern = args
    run = kernel_mod.get_kernel(kern).run_kernel
    out: list[tuple] = []

    def emit(cells, rank, value) -> bool:
        m = matrix_from_cells(compiled, cells)
        verdict = check_solution(problem, m)
        if not verdict.passed:
            raise RuntimeError(
                "search kernel emitted a matrix that fails verification; "
                "this is a bug"
            )
        if canonical_only and m.canonical_form() != m:
            return True
        out.append((cells, rank, value))
        return limit == 0 or len(out) < limit

    status, stats = run(
        compiled,
        prefix=prefix,
        deadline=deadline,
        target_prune=target_prune,
        emit=emit,
    )
    return out, status, stats


def _split_prefixes(compiled: CompiledSearch, want: int) -> list[tuple[int, ...]]:
    """Prefixes over the first free cells, in lexicographic order, so that
    concatenating subtree outputs reproduces the sequential order."""
    prefixes: list[tuple[int, ...]] = [()]
    depth = 0
    while len(prefixes) < want and depth < len(compiled.free_cells):
        dom = compiled.domains[compiled.free_cells[depth]]
        prefixes = [p + (v,) for p in prefixes for v in dom]
        depth += 1
    return prefixes


def search(problem: IndependenceProblem, config: Optional[SearchConfig] = None) -> SearchOutcome:
    """Search every size and designated count the problem admits.

    Solutions stream in depth-first order (cells in the fixed layout
    order, values ascending); an empty exhausted outcome proves no matrix
    of the given shape solves the problem.
    """
    config = config or SearchConfig()
    outcome = SearchOutcome(iter(()))
    outcome._gen = _search_gen(problem, config, outcome)
    return outcome


def _search_gen(
    problem: IndependenceProblem, config: SearchConfig, outcome: SearchOutcome
) -> Iterator[Solution]:
    started = time.time()
    deadline = started + config.budget if config.budget is not None else None
    stats = _new_stats()
    target_vars = variables_of(problem.target)
    remaining = config.limit
    status = SearchStatus.EXHAUSTED

    def finish():
        stats["emitted"] = emitted
        stats["wall_time"] = time.time() - started
        outcome.status = status
        outcome.stats = stats

    emitted = 0
    lo, hi = problem.sizes
    stopped = False
    for size in range(lo, hi + 1):
        if stopped:
            break
        for d in problem.designated_counts(size):
            compiled = compile_search(problem, size, d, config.fixed_tables)
            stats["phases"] += 1
            if deadline is not None and time.time() > deadline:
                status = SearchStatus.BUDGET_EXCEEDED
                stopped = True
                break
            phase_limit = remaining if config.limit else 0
            phase_results = _run_phase(
                compiled, problem, config, phase_limit, deadline
            )
            for sols, kstatus, kstats in phase_results:
                _accumulate(stats, kstats)
                if kstatus == kernel_mod.STATUS_BUDGET:
                    status = SearchStatus.BUDGET_EXCEEDED
                    stopped = True
                for cells, rank, value in sols:
                    matrix = matrix_from_cells(compiled, cells)
                    witness = Countermodel(
                        decode_witness(compiled, target_vars, rank), value
                    )
                    emitted += 1
                    yield Solution(matrix, witness)
                    if config.limit and emitted >= config.limit:
                        status = SearchStatus.LIMIT_REACHED
                        stopped = True
                        break
                if stopped:
                    phase_results.close()
                    break
            if stopped:
                break
            if config.limit:
                remaining = config.limit - emitted
    finish()


def _run_phase(
    compiled: CompiledSearch,
    problem: IndependenceProblem,
    config: SearchConfig,
    limit: int,
    deadline: Optional[float],
):
    """Yield (solutions, status, stats) per subtree task."""
    if config.jobs == 1:
        def sequential():
            yield _run_task(
                (
                    compiled,
                    (),
                    problem,
                    config.canonical_only,
                    limit,
                    deadline,
                    config.target_prune,
                    config.kernel,
                )
            )

        return sequential()

    prefixes = _split_prefixes(compiled, config.jobs * 8)
    payloads = [
        (
            compiled,
            prefix,
            problem,
            config.canonical_only,
            limit,
            deadline,
            config.target_prune,
            config.kernel,
        )
        for prefix in prefixes
    ]

    def parallel():
        with multiprocessing.Pool(config.jobs) as pool:
            mapper = pool.imap if config.deterministic else pool.imap_unordered
            for result in mapper(_run_task, payloads):
                yield result

    return parallel()


class OracleSizeError(ValueError):
    """The requested space is too large for the no-pruning oracle."""


ORACLE_CELL_LIMIT = 10**8


def exhaustive_oracle(
    problem: IndependenceProblem, size: int, d: int
) -> list[Matrix]:
    """Enumerate every complete matrix of the given shape, with no pruning
    and no symmetry breaking, and keep those passing check_solution.

    The independent ground truth the search is tested against; refuses
    spaces over ORACLE_CELL_LIMIT candidates.  Results are sorted by their
    flattened tables.
    """
    adjusted = problem.with_sizes(size, size, d)
    compiled = compile_search(adjusted, size, d)
    space = size**compiled.n_cells
    if space > ORACLE_CELL_LIMIT:
        raise OracleSizeError(
            f"{size}^{compiled.n_cells} = {space} candidate matrices exceed "
            f"the oracle guard of {ORACLE_CELL_LIMIT}"
        )
    solutions = []
    for vals in itertools.product(range(size), repeat=compiled.n_cells):
        m = matrix_from_cells(compiled, vals)
        if check_solution(adjusted, m).passed:
            solutions.append(m)
    solutions.sort(key=Matrix.flatten)
    return solutions
