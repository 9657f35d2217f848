"""Pure-Python search kernel.

Depth-first assignment of free cells in the fixed layout order, values
ascending.  Axiom instances (one per kept axiom per assignment) sit in
watch lists keyed by the first unassigned cell their evaluation hits; an
instance is re-evaluated only when that cell is assigned.  Undo relies on
strict LIFO discipline: everything a level appended to other watch lists
is popped in reverse before the level's cell is unassigned, and the
assigned cell's own list is never mutated, so unassigning restores it
verbatim.

The compiled kernel (_kernel_cy) implements the same loop; both must
visit identical trees and produce identical statistics.
"""

from __future__ import annotations

import time

from ._compile import (
    OP_AND,
    OP_FALSE,
    OP_IMP,
    OP_NOT,
    OP_OR,
    OP_VAR,
    CompiledSearch,
    instance_values,
)

STATUS_EXHAUSTED = 0
STATUS_STOPPED = 1
STATUS_BUDGET = 2


def _new_stats() -> dict:
    return {
        "nodes": 0,
        "leaves": 0,
        "prunes_axiom": 0,
        "prunes_target": 0,
        "solutions": 0,
    }


def run_kernel(
    compiled: CompiledSearch,
    prefix: tuple[int, ...] = (),
    deadline: float | None = None,
    target_prune: bool = True,
    emit=None,
) -> tuple[int, dict]:
    """Run one search phase; ``emit(cells, witness_rank, witness_value)``
    is called per raw solution and returns False to stop early.

    ``prefix`` forces the first ``len(prefix)`` free cells, letting a
    driver split the tree into independent subtree tasks.
    """
    stats = _new_stats()
    if compiled.infeasible:
        return STATUS_EXHAUSTED, stats

    n = compiled.n
    d = compiled.d
    cells = list(compiled.init_vals)
    offs = dict(zip(compiled.conn_labels, compiled.offsets))
    imp_off = offs.get("imp", -1)
    and_off = offs.get("and", -1)
    or_off = offs.get("or", -1)
    not_off = offs.get("not", -1)
    false_off = offs.get("false", -1)

    progs = list(compiled.kept_progs) + [compiled.target_prog]
    inst_prog: list[int] = []
    inst_vals: list[tuple[int, ...]] = []
    for a, k in enumerate(compiled.kept_nvars):
        for values in instance_values(n, k):
            inst_prog.append(a)
            inst_vals.append(values)
    n_kept_inst = len(inst_prog)
    target_prog_id = len(compiled.kept_progs)
    for values in instance_values(n, compiled.target_nvars):
        inst_prog.append(target_prog_id)
        inst_vals.append(values)
    n_inst = len(inst_prog)
    n_targ_inst = n_inst - n_kept_inst

    def eval_inst(i: int) -> int:
        """Value >= 0 when every lookup hits an assigned cell, else
        ``-(cell + 2)`` for the first unassigned cell encountered."""
        code = progs[inst_prog[i]]
        vals = inst_vals[i]
        stack: list[int] = []
        pos = 0
        end = len(code)
        while pos < end:
            op = code[pos]
            arg = code[pos + 1]
            pos += 2
            if op == OP_VAR:
                stack.append(vals[arg])
                continue
            if op == OP_FALSE:
                v = cells[false_off]
                if v < 0:
                    return -false_off - 2
                stack.append(v)
                continue
            if op == OP_NOT:
                cell = not_off + stack[-1]
                v = cells[cell]
                if v < 0:
                    return -cell - 2
                stack[-1] = v
                continue
            if op == OP_IMP:
                off = imp_off
            elif op == OP_AND:
                off = and_off
            else:
                off = or_off
            y = stack.pop()
            cell = off + stack[-1] * n + y
            v = cells[cell]
            if v < 0:
                return -cell - 2
            stack[-1] = v
        return stack[0]

    # root pass: every instance evaluated once against the pinned cells
    watch: list[list[int]] = [[] for _ in range(compiled.n_cells)]
    targ_desig = 0
    for i in range(n_inst):
        r = eval_inst(i)
        if r >= 0:
            if i < n_kept_inst:
                if r >= d:
                    return STATUS_EXHAUSTED, stats  # kept axiom already falsified
            elif r < d:
                targ_desig += 1
        else:
            watch[-r - 2].append(i)
    if target_prune and targ_desig == n_targ_inst:
        stats["prunes_target"] += 1
        return STATUS_EXHAUSTED, stats

    def find_witness() -> tuple[int, int]:
        for i in range(n_kept_inst, n_inst):
            v = eval_inst(i)
            if v >= d:
                return i - n_kept_inst, v
        raise AssertionError("no witness despite non-designated target instance")

    free = compiled.free_cells
    n_free = len(free)
    if len(prefix) > n_free:
        raise ValueError("prefix longer than the number of free cells")

    nodes = 0
    leaves = 0
    prunes_axiom = 0
    prunes_target = 0
    solutions = 0
    status = STATUS_EXHAUSTED

    if n_free == 0:
        leaves += 1
        if targ_desig < n_targ_inst:
            rank, wval = find_witness()
            solutions += 1
            if emit is not None and not emit(tuple(cells), rank, wval):
                status = STATUS_STOPPED
        stats.update(
            nodes=nodes,
            leaves=leaves,
            prunes_axiom=prunes_axiom,
            prunes_target=prunes_target,
            solutions=solutions,
        )
        return status, stats

    level_dom = [
        (prefix[i],) if i < len(prefix) else compiled.domains[free[i]]
        for i in range(n_free)
    ]
    di = [0] * n_free
    ulog: list[list[int]] = [[] for _ in range(n_free)]

    def undo(level: int) -> None:
        nonlocal targ_desig
        log = ulog[level]
        for e in reversed(log):
            if e == -2:
                targ_desig -= 1
            else:
                watch[e].pop()
        log.clear()
        cells[free[level]] = -1

    level = 0
    stop = False
    while not stop:
        dom = level_dom[level]
        placed = False
        while di[level] < len(dom):
            v = dom[di[level]]
            nodes += 1
            if (
                deadline is not None
                and nodes & 8191 == 0
                and time.time() > deadline
            ):
                status = STATUS_BUDGET
                stop = True
                break
            cell = free[level]
            cells[cell] = v
            log = ulog[level]
            failed = False
            blocked = watch[cell]
            for idx in range(len(blocked)):
                inst = blocked[idx]
                r = eval_inst(inst)
                if r >= 0:
                    if inst < n_kept_inst:
                        if r >= d:
                            failed = True
                            prunes_axiom += 1
                            break
                        # kept instance known-designated: parked; the
                        # untouched watch[cell] list restores it on undo
                    elif r < d:
                        targ_desig += 1
                        log.append(-2)
                else:
                    c2 = -r - 2
                    watch[c2].append(inst)
                    log.append(c2)
            if not failed and target_prune and targ_desig == n_targ_inst:
                failed = True
                prunes_target += 1
            if not failed:
                placed = True
                break
            for e in reversed(log):
                if e == -2:
                    targ_desig -= 1
                else:
                    watch[e].pop()
            log.clear()
            cells[cell] = -1
            di[level] += 1
        if stop:
            break
        if placed:
            if level == n_free - 1:
                leaves += 1
                if targ_desig < n_targ_inst:
                    rank, wval = find_witness()
                    solutions += 1
                    if emit is not None and not emit(tuple(cells), rank, wval):
                        status = STATUS_STOPPED
                        stop = True
                undo(level)
                if stop:
                    break
                di[level] += 1
                continue
            level += 1
            di[level] = 0
            continue
        if level == 0:
            break
        level -= 1
        undo(level)
        di[level] += 1

    stats.update(
        nodes=nodes,
        leaves=leaves,
        prunes_axiom=prunes_axiom,
        prunes_target=prunes_target,
        solutions=solutions,
    )
    return status, stats
