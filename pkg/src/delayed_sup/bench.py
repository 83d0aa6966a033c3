"""Benchmark sweep: every problem in a directory under every calculus mode.

Each run happens in its own process so a runaway run can be killed by the
watchdog (twice the time limit) without disturbing the others.
"""
from __future__ import annotations

import csv
import io
import multiprocessing as mp
import os
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from .calculus import Mode
from .saturation import ProverConfig, replay_proof, saturate
from .tptp import TptpError, parse_file

HEADER = ("problem", "mode", "status", "wall_ms", "generated", "iterations")
SOLVED = ("Unsatisfiable", "Satisfiable")
WATCHDOG_GRACE = 1.0
CORPUS_DIR = Path(__file__).parent / "corpus"


@dataclass
class RunRecord:
    problem: str
    mode: str
    status: str
    wall_ms: int
    generated: int = 0
    iterations: int = 0
    # set only when proofs are verified: did the refutation replay cleanly?
    proof_ok: Optional[bool] = None

    def row(self) -> tuple:
        return (self.problem, self.mode, self.status, self.wall_ms, self.generated, self.iterations)


def run_one(path, mode: str, time_limit: float, selection: str = "none",
            max_clauses: Optional[int] = None, include_dir=None, verify: bool = False) -> RunRecord:
    """One prover run in the current process. With ``verify`` a refutation is
    replayed step by step and the outcome stored in ``proof_ok``."""
    start = time.monotonic()
    name = Path(path).name
    try:
        problem = parse_file(path, include_dir=include_dir)
        cfg = ProverConfig(mode=mode, selection=selection, time_limit=time_limit, max_clauses=max_clauses)
        res = saturate(problem.clauses, cfg)
    except (TptpError, RecursionError, MemoryError):
        return RunRecord(name, mode, "Error", int((time.monotonic() - start) * 1000))
    wall = int((time.monotonic() - start) * 1000)
    rec = RunRecord(name, mode, res.szs_status, wall, res.stats["generated"], res.stats["iterations"])
    if verify and res.proof:
        rec.proof_ok = not replay_proof(res.proof, res.calculus)
    return rec


def _worker(conn, args):
    try:
        rec = run_one(*args)
    except Exception:  # never let one problem abort the sweep
        p, mode = args[0], args[1]
        rec = RunRecord(Path(p).name, mode, "Error", 0)
    conn.send(rec)
    conn.close()


def problem_files(directory) -> List[Path]:
    d = Path(directory)
    return sorted(p for p in d.iterdir() if p.is_file() and p.suffix == ".p")


def run_bench(problems: Sequence, modes: Sequence[str], time_limit: float, selection: str = "none",
              max_clauses: Optional[int] = None, jobs: Optional[int] = None, include_dir=None,
              verify: bool = False) -> List[RunRecord]:
    """Run every (problem, mode) pair; rows come back sorted by problem then mode."""
    modes = [Mode(m).value for m in modes]
    tasks = [(str(p), m, time_limit, selection, max_clauses, include_dir, verify)
             for p in problems for m in modes]
    jobs = max(1, jobs or os.cpu_count() or 1)
    ctx = mp.get_context("fork") if "fork" in mp.get_all_start_methods() else mp.get_context()
    deadline_span = 2 * time_limit + WATCHDOG_GRACE
    records: List[RunRecord] = []
    running: List[tuple] = []
    pending = list(tasks)
    while pending or running:
        while pending and len(running) < jobs:
            args = pending.pop(0)
            parent, child = ctx.Pipe(duplex=False)
            proc = ctx.Process(target=_worker, args=(child, args), daemon=True)
            proc.start()
            child.close()
            running.append((proc, parent, args, time.monotonic()))
        still = []
        for proc, parent, args, started in running:
            if parent.poll():
                try:
                    records.append(parent.recv())
                except EOFError:
                    records.append(RunRecord(Path(args[0]).name, args[1], "Error", 0))
                proc.join()
                parent.close()
            elif not proc.is_alive():
                proc.join()
                parent.close()
                records.append(RunRecord(Path(args[0]).name, args[1], "Error",
                                         int((time.monotonic() - started) * 1000)))
            elif time.monotonic() - started > deadline_span:
                proc.kill()
                proc.join()
                parent.close()
                records.append(RunRecord(Path(args[0]).name, args[1], "Timeout",
                                         int((time.monotonic() - started) * 1000)))
            else:
                still.append((proc, parent, args, started))
        running = still
        if running:
            mp.connection.wait([r[1] for r in running], timeout=0.05)
    records.sort(key=lambda r: (r.problem, r.mode))
    return records


def summarize(records: Sequence[RunRecord], modes: Sequence[str]) -> Dict[str, Dict[str, int]]:
    solved_by: Dict[str, set] = {}
    for r in records:
        if r.status in SOLVED:
            solved_by.setdefault(r.problem, set()).add(r.mode)
    out = {}
    for m in modes:
        m = Mode(m).value
        solved = sum(1 for ms in solved_by.values() if m in ms)
        uniques = sum(1 for ms in solved_by.values() if ms == {m})
        out[m] = {"solved": solved, "uniques": uniques}
    return out


def format_csv(records: Sequence[RunRecord], modes: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADER)
    for r in records:
        w.writerow(r.row())
    summary = summarize(records, modes)
    buf.write(f"# summary over {len({r.problem for r in records})} problems\n")
    for m, s in summary.items():
        buf.write(f"# {m}: solved={s['solved']} uniques={s['uniques']}\n")
    return buf.getvalue()


def read_csv(text: str) -> List[RunRecord]:
    rows = [line for line in text.splitlines() if line and not line.startswith("#")]
    reader = csv.reader(rows)
    header = tuple(next(reader))
    if header != HEADER:
        raise ValueError(f"unexpected header {header}")
    return [RunRecord(p, m, s, int(w), int(g), int(i)) for p, m, s, w, g, i in reader]
