# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled search kernel; mirrors _kernel_py exactly.

Same fixed cell order, same watch-list propagation, same LIFO undo; the
two kernels must visit identical trees and report identical statistics.
See _kernel_py for the algorithm notes.
"""

import time
from array import array

from ._compile import instance_values

STATUS_EXHAUSTED = 0
STATUS_STOPPED = 1
STATUS_BUDGET = 2

cdef int OP_VAR = 0
cdef int OP_IMP = 1
cdef int OP_AND = 2
cdef int OP_OR = 3
cdef int OP_NOT = 4
cdef int OP_FALSE = 5


cdef class _Kernel:
    cdef int n, d, n_cells, n_free, n_inst, n_kept_inst, n_targ_inst
    cdef int imp_off, and_off, or_off, not_off, false_off
    cdef int targ_desig
    cdef int[::1] cells
    cdef int[::1] dom_vals
    cdef int[::1] dom_off
    cdef int[::1] dom_len
    cdef int[::1] free_cells
    cdef int[::1] prog_code
    cdef int[::1] prog_off
    cdef int[::1] inst_prog
    cdef int[::1] inst_voff
    cdef int[::1] inst_vals
    cdef int[::1] stack
    cdef int[::1] watch_data
    cdef int[::1] watch_len
    cdef int[::1] ulog_data
    cdef int[::1] ulog_start
    cdef int ulog_top
    cdef long long nodes, leaves, prunes_axiom, prunes_target, solutions

    cdef int eval_inst(self, int i):
        """Value >= 0 when known, else -(cell + 2) for the blocking cell."""
        cdef int prog = self.inst_prog[i]
        cdef int pos = self.prog_off[prog]
        cdef int end = self.prog_off[prog + 1]
        cdef int voff = self.inst_voff[i]
        cdef int sp = 0
        cdef int op, arg, v, cell, y
        while pos < end:
            op = self.prog_code[pos]
            arg = self.prog_code[pos + 1]
            pos += 2
            if op == OP_VAR:
                self.stack[sp] = self.inst_vals[voff + arg]
                sp += 1
                continue
            if op == OP_FALSE:
                v = self.cells[self.false_off]
                if v < 0:
                    return -self.false_off - 2
                self.stack[sp] = v
                sp += 1
                continue
            if op == OP_NOT:
                cell = self.not_off + self.stack[sp - 1]
                v = self.cells[cell]
                if v < 0:
                    return -cell - 2
                self.stack[sp - 1] = v
                continue
            if op == OP_IMP:
                cell = self.imp_off
            elif op == OP_AND:
                cell = self.and_off
            else:
                cell = self.or_off
            sp -= 1
            y = self.stack[sp]
            cell = cell + self.stack[sp - 1] * self.n + y
            v = self.cells[cell]
            if v < 0:
                return -cell - 2
            self.stack[sp - 1] = v
        return self.stack[0]

    cdef int process_batch(self, int cell, int mark):
        """Re-evaluate the instances watching ``cell``; returns 0 on
        contradiction (after undoing the partial batch back to ``mark``)."""
        cdef int base = cell * self.n_inst
        cdef int count = self.watch_len[cell]
        cdef int idx, inst, r, c2
        for idx in range(count):
            inst = self.watch_data[base + idx]
            r = self.eval_inst(inst)
            if r >= 0:
                if inst < self.n_kept_inst:
                    if r >= self.d:
                        self.prunes_axiom += 1
                        self.undo_to(mark)
                        return 0
                elif r < self.d:
                    self.targ_desig += 1
                    self.ulog_data[self.ulog_top] = -2
                    self.ulog_top += 1
            else:
                c2 = -r - 2
                self.watch_data[c2 * self.n_inst + self.watch_len[c2]] = inst
                self.watch_len[c2] += 1
                self.ulog_data[self.ulog_top] = c2
                self.ulog_top += 1
        return 1

    cdef void undo_to(self, int mark):
        cdef int e
        while self.ulog_top > mark:
            self.ulog_top -= 1
            e = self.ulog_data[self.ulog_top]
            if e == -2:
                self.targ_desig -= 1
            else:
                self.watch_len[e] -= 1

    cdef tuple snapshot(self):
        cdef int i
        out = []
        for i in range(self.n_cells):
            out.append(self.cells[i])
        return tuple(out)

    cdef tuple find_witness(self):
        cdef int j, v
        for j in range(self.n_kept_inst, self.n_inst):
            v = self.eval_inst(j)
            if v >= self.d:
                return j - self.n_kept_inst, v
        raise AssertionError("no witness despite non-designated target instance")


def run_kernel(compiled, prefix=(), deadline=None, target_prune=True, emit=None):
    """Drop-in replacement for _kernel_py.run_kernel."""
    stats = {
        "nodes": 0,
        "leaves": 0,
        "prunes_axiom": 0,
        "prunes_target": 0,
        "solutions": 0,
    }
    if compiled.infeasible:
        return STATUS_EXHAUSTED, stats

    cdef _Kernel k = _Kernel()
    k.n = compiled.n
    k.d = compiled.d
    k.n_cells = compiled.n_cells
    offs = dict(zip(compiled.conn_labels, compiled.offsets))
    k.imp_off = offs.get("imp", -1)
    k.and_off = offs.get("and", -1)
    k.or_off = offs.get("or", -1)
    k.not_off = offs.get("not", -1)
    k.false_off = offs.get("false", -1)
    k.cells = array("i", compiled.init_vals)

    dom_vals = array("i")
    dom_off = array("i")
    dom_len = array("i")
    for dom in compiled.domains:
        dom_off.append(len(dom_vals))
        dom_len.append(len(dom))
        dom_vals.extend(dom)
    k.dom_vals = dom_vals
    k.dom_off = dom_off
    k.dom_len = dom_len

    k.free_cells = array("i", list(compiled.free_cells) or [0])
    k.n_free = len(compiled.free_cells)

    prog_code = array("i")
    prog_off = array("i")
    progs = list(compiled.kept_progs) + [compiled.target_prog]
    for code in progs:
        prog_off.append(len(prog_code))
        prog_code.extend(code)
    prog_off.append(len(prog_code))
    k.prog_code = prog_code
    k.prog_off = prog_off

    inst_prog = array("i")
    inst_voff = array("i")
    inst_vals = array("i")
    for a, nv in enumerate(compiled.kept_nvars):
        for values in instance_values(compiled.n, nv):
            inst_prog.append(a)
            inst_voff.append(len(inst_vals))
            inst_vals.extend(values)
    k.n_kept_inst = len(inst_prog)
    target_prog_id = len(compiled.kept_progs)
    for values in instance_values(compiled.n, compiled.target_nvars):
        inst_prog.append(target_prog_id)
        inst_voff.append(len(inst_vals))
        inst_vals.extend(values)
    if len(inst_vals) == 0:
        inst_vals.append(0)  # keep the buffer non-empty for the memoryview
    k.inst_prog = inst_prog
    k.inst_voff = inst_voff
    k.inst_vals = inst_vals
    k.n_inst = len(inst_prog)
    k.n_targ_inst = k.n_inst - k.n_kept_inst

    k.stack = array("i", [0] * max(compiled.max_stack, 1))
    k.watch_data = array("i", [0] * max(k.n_cells * k.n_inst, 1))
    k.watch_len = array("i", [0] * max(k.n_cells, 1))
    k.ulog_data = array("i", [0] * max((k.n_free + 1) * k.n_inst, 1))
    k.ulog_start = array("i", [0] * (k.n_free + 1))
    k.ulog_top = 0
    k.targ_desig = 0

    # root pass: every instance evaluated once against the pinned cells
    cdef int i, r, c2
    for i in range(k.n_inst):
        r = k.eval_inst(i)
        if r >= 0:
            if i < k.n_kept_inst:
                if r >= k.d:
                    return STATUS_EXHAUSTED, stats
            elif r < k.d:
                k.targ_desig += 1
        else:
            c2 = -r - 2
            k.watch_data[c2 * k.n_inst + k.watch_len[c2]] = i
            k.watch_len[c2] += 1
    cdef bint do_target_prune = bool(target_prune)
    if do_target_prune and k.targ_desig == k.n_targ_inst:
        stats["prunes_target"] = 1
        return STATUS_EXHAUSTED, stats

    cdef int plen = len(prefix)
    if plen > k.n_free:
        raise ValueError("prefix longer than the number of free cells")
    prefix_arr = array("i", list(prefix) or [0])
    cdef int[::1] prefix_mv = prefix_arr

    status = STATUS_EXHAUSTED

    if k.n_free == 0:
        k.leaves += 1
        if k.targ_desig < k.n_targ_inst:
            rank, wval = k.find_witness()
            k.solutions += 1
            if emit is not None and not emit(k.snapshot(), rank, wval):
                status = STATUS_STOPPED
        _fill_stats(stats, k)
        return status, stats

    di = array("i", [0] * k.n_free)
    cdef int[::1] di_mv = di
    cdef int level = 0
    cdef int cell, v, dcount, dbase
    cdef bint placed, stop = False
    cdef bint has_deadline = deadline is not None
    cdef double deadline_c = deadline if deadline is not None else 0.0

    while not stop:
        cell = k.free_cells[level]
        if level < plen:
            dbase = -1
            dcount = 1
        else:
            dbase = k.dom_off[cell]
            dcount = k.dom_len[cell]
        placed = False
        while di_mv[level] < dcount:
            if dbase < 0:
                v = prefix_mv[level]
            else:
                v = k.dom_vals[dbase + di_mv[level]]
            k.nodes += 1
            if has_deadline and (k.nodes & 8191) == 0 and time.time() > deadline_c:
                status = STATUS_BUDGET
                stop = True
                break
            k.cells[cell] = v
            k.ulog_start[level] = k.ulog_top
            if k.process_batch(cell, k.ulog_top):
                if do_target_prune and k.targ_desig == k.n_targ_inst:
                    k.prunes_target += 1
                    k.undo_to(k.ulog_start[level])
                    k.cells[cell] = -1
                    di_mv[level] += 1
                    continue
                placed = True
                break
            k.cells[cell] = -1
            di_mv[level] += 1
        if stop:
            break
        if placed:
            if level == k.n_free - 1:
                k.leaves += 1
                if k.targ_desig < k.n_targ_inst:
                    rank, wval = k.find_witness()
                    k.solutions += 1
                    if emit is not None and not emit(k.snapshot(), rank, wval):
                        status = STATUS_STOPPED
                        stop = True
                k.undo_to(k.ulog_start[level])
                k.cells[cell] = -1
                if stop:
                    break
                di_mv[level] += 1
                continue
            level += 1
            di_mv[level] = 0
            continue
        if level == 0:
            break
        level -= 1
        cell = k.free_cells[level]
        k.undo_to(k.ulog_start[level])
        k.cells[cell] = -1
        di_mv[level] += 1

    _fill_stats(stats, k)
    return status, stats


cdef _fill_stats(dict stats, _Kernel k):
    stats["nodes"] = k.nodes
    stats["leaves"] = k.leaves
    stats["prunes_axiom"] = k.prunes_axiom
    stats["prunes_target"] = k.prunes_target
    stats["solutions"] = k.solutions
