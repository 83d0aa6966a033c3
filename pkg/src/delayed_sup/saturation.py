"""Given-clause saturation.

Otter-style loop: every new clause is simplified against active and
passive clauses before it is queued; the given clause is moved to the
active set and all inferences between it and the active set are
generated. Retrieval of inference partners depends on the mode:

* ``standard``: fingerprint index, then a full unification check;
* ``delayed``: a top-symbol hash table only;
* ``delayed-fp`` / ``delayed-eager``: fingerprint index used as a filter,
  without unification. ``delayed-eager`` also applies ``Bind`` and
  ``ReflDel`` destructively to every new clause.
"""
from __future__ import annotations

import enum
import heapq
import time
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence

from .calculus import Calculus, Inference, Mode
from .clauses import Clause, InferenceRecord, Selection, is_tautology, remove_duplicates, subsumes
from .indexing import FingerprintIndex, SubsumptionIndex, TopSymbolIndex
from .ordering import KboParams
from .terms import App, Term


class Status(str, enum.Enum):
    UNSATISFIABLE = "Unsatisfiable"
    SATURATED = "Saturated"
    RESOURCE_OUT = "ResourceOut"


@dataclass
class ProverConfig:
    mode: Mode = Mode.DELAYED
    selection: Selection = Selection.NONE
    precedence: str = "arity"
    params: Optional[KboParams] = None
    time_limit: Optional[float] = None
    max_clauses: Optional[int] = None
    max_iterations: Optional[int] = None
    rules: Optional[frozenset] = None
    age_weight_ratio: tuple = (1, 4)

    def __post_init__(self):
        self.mode = Mode(self.mode)
        self.selection = Selection(self.selection)


@dataclass
class SaturationResult:
    status: Status
    proof: List[Clause] = field(default_factory=list)
    stats: Dict[str, int] = field(default_factory=dict)
    reason: str = ""
    calculus: Optional[Calculus] = None

    @property
    def szs_status(self) -> str:
        if self.status is Status.UNSATISFIABLE:
            return "Unsatisfiable"
        if self.status is Status.SATURATED:
            return "Satisfiable"
        return "Timeout" if self.reason == "time" else "GaveUp"


class _Stop(Exception):
    def __init__(self, reason):
        self.reason = reason


class _Refuted(Exception):
    def __init__(self, clause):
        self.clause = clause


def symbols_in_order(clauses: Iterable[Clause]) -> list:
    seen = {}

    def visit(t: Term):
        if t.is_var:
            return
        seen.setdefault(t.sym, None)
        for a in t.args:
            visit(a)

    for c in clauses:
        for lit in c.literals:
            visit(lit.lhs)
            visit(lit.rhs)
    return list(seen)


class Prover:
    """Saturation state: passive queue, active set, indices and counters."""

    def __init__(self, config: ProverConfig, params: KboParams):
        self.config = config
        self.mode = config.mode
        self.calc = Calculus(params, config.selection)
        self.active: List[Clause] = []
        self._age_heap: list = []
        self._weight_heap: list = []
        self._taken: set = set()
        self.passive_count = 0
        self._next_id = 0
        self._pick_counter = 0
        self._sub_index = SubsumptionIndex()
        self.iteration = 0
        self.deadline = None
        self.stats = dict(
            iterations=0, generated=0, kept=0, tautologies=0, subsumed=0,
            simplifications=0, index_queries=0, index_candidates=0,
        )
        if self.mode is Mode.DELAYED:
            self._eq_index = TopSymbolIndex()
            self._target_index = TopSymbolIndex()
        else:
            self._eq_index = FingerprintIndex()
            self._target_index = FingerprintIndex()
            # variable right-hand targets never exist; variable equation sides
            # are found through the fingerprint index like any other side
            self._all_targets: Dict[object, List] = {}

    # -- bookkeeping --------------------------------------------------------

    def register(self, c: Clause) -> Clause:
        if c.id is None:
            c.id = self._next_id
            c.age = self.iteration
            self._next_id += 1
        return c

    def add_passive(self, c: Clause) -> None:
        heapq.heappush(self._age_heap, (c.age, c.id, c))
        heapq.heappush(self._weight_heap, (c.weight, c.id, c))
        self._sub_index.insert(c)
        self.passive_count += 1
        self.stats["kept"] += 1

    def pick_given(self) -> Clause:
        """Oldest clause once per cycle, lightest clause otherwise (ties by id)."""
        age_n, weight_n = self.config.age_weight_ratio
        use_age = self._pick_counter % (age_n + weight_n) < age_n
        self._pick_counter += 1
        heap = self._age_heap if use_age else self._weight_heap
        while heap:
            _, cid, c = heapq.heappop(heap)
            if cid not in self._taken:
                self._taken.add(cid)
                self.passive_count -= 1
                return c
        raise IndexError("passive queue is empty")

    def _check_limits(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise _Stop("time")
        mc = self.config.max_clauses
        if mc is not None and self.stats["kept"] > mc:
            raise _Stop("clauses")

    # -- simplification -----------------------------------------------------

    def _derive(self, inf: Inference) -> Clause:
        self.stats["simplifications"] += 1
        return self.register(inf.clause())

    def simplify(self, c: Clause) -> Optional[Clause]:
        """Trivial-literal deletion, duplicate removal, eager binding (eager mode
        only), then tautology and forward subsumption checks. ``None`` = deleted."""
        self.register(c)
        calc = self.calc
        eager = self.mode is Mode.DELAYED_EAGER
        changed = True
        while changed:
            changed = False
            for i, lit in enumerate(c.literals):
                if not lit.positive and lit.trivial:
                    c = self._derive(calc.refl_del(c, i, simp=True))
                    changed = True
                    break
            if changed:
                continue
            deduped = remove_duplicates(c.literals)
            if len(deduped) != len(c.literals):
                c = self._derive(Inference("Dedup", (c,), deduped, 0, {}, {"simp": True}))
                changed = True
                continue
            if eager:
                for i, lit in enumerate(c.literals):
                    if lit.positive or not (lit.lhs.is_var or lit.rhs.is_var):
                        continue
                    inf = calc.bind(c, i, simp=True)
                    if inf is not None:
                        c = self._derive(inf)
                        changed = True
                        break
        if not c.literals:
            return c
        if is_tautology(c):
            self.stats["tautologies"] += 1
            return None
        for other in self._sub_index.candidates(c):
            if other is not c and subsumes(other, c):
                self.stats["subsumed"] += 1
                return None
        return c

    # -- generation ---------------------------------------------------------

    def _allowed(self, rule: str) -> bool:
        rules = self.config.rules
        return rules is None or rule in rules

    def activate(self, g: Clause) -> None:
        self.active.append(g)
        calc = self.calc
        for i, k in calc.equation_sides(g):
            self._eq_index.insert(g.literals[i].side(k), (g, i, k))
        for j, k2, path, u in calc.target_positions(g):
            self._target_index.insert(u, (g, j, k2, path, u))

    def _targets_for(self, t: Term) -> List:
        self.stats["index_queries"] += 1
        idx = self._target_index
        if self.mode is Mode.DELAYED:
            found = idx.all_nonvar(t.sort) if t.is_var else idx.same_top(t)
        else:
            found = idx.retrieve(t)
        self.stats["index_candidates"] += len(found)
        return found

    def _equations_for(self, u: Term) -> List:
        self.stats["index_queries"] += 1
        idx = self._eq_index
        if self.mode is Mode.DELAYED:
            found = list(idx.same_top(u)) + list(idx.variables(u.sort))
        else:
            found = idx.retrieve(u)
        self.stats["index_candidates"] += len(found)
        return found

    def generate(self, g: Clause) -> Iterable[Inference]:
        """All inferences between ``g`` (already active) and the active set."""
        calc, mode = self.calc, self.mode
        binary_ok = any(self._allowed(r) for r in ("Sup", "VSup", "StdSup"))
        if binary_ok:
            for i, k in calc.equation_sides(g):
                t = g.literals[i].side(k)
                rule = "StdSup" if mode is Mode.STANDARD else ("VSup" if t.is_var else "Sup")
                if not self._allowed(rule):
                    continue
                for c, j, k2, path, u in self._targets_for(t):
                    if t.sort != u.sort:
                        continue
                    inf = calc.binary(g, (i, k), c, (j, k2, path), mode)
                    if inf is not None:
                        yield inf
            for j, k2, path, u in calc.target_positions(g):
                for d, i, k in self._equations_for(u):
                    if d is g:
                        continue
                    t = d.literals[i].side(k)
                    if t.sort != u.sort:
                        continue
                    rule = "StdSup" if mode is Mode.STANDARD else ("VSup" if t.is_var else "Sup")
                    if not self._allowed(rule):
                        continue
                    inf = calc.binary(d, (i, k), g, (j, k2, path), mode)
                    if inf is not None:
                        yield inf
        yield from calc.unary_inferences(g, mode, self.config.rules)

    # -- main loop ----------------------------------------------------------

    def _process(self, c: Clause) -> None:
        c = self.simplify(c)
        if c is None:
            return
        if not c.literals:
            raise _Refuted(c)
        self.add_passive(c)

    def run(self, clauses: Sequence[Clause]) -> SaturationResult:
        start = time.monotonic()
        if self.config.time_limit is not None:
            self.deadline = start + self.config.time_limit
        try:
            try:
                for c in clauses:
                    # fresh copies: ids and ages belong to this run
                    self._process(Clause(c.literals, c.derivation, normalize=False))
                while self.passive_count:
                    mi = self.config.max_iterations
                    if mi is not None and self.iteration >= mi:
                        raise _Stop("iterations")
                    self._check_limits()
                    g = self.pick_given()
                    self.iteration += 1
                    self.stats["iterations"] = self.iteration
                    self.activate(g)
                    for inf in self.generate(g):
                        self.stats["generated"] += 1
                        self._process(self.register(inf.clause()))
                        self._check_limits()
            except _Refuted as r:
                return SaturationResult(Status.UNSATISFIABLE, extract_proof(r.clause), self._final_stats(start),
                                        calculus=self.calc)
        except _Stop as s:
            return SaturationResult(Status.RESOURCE_OUT, [], self._final_stats(start), s.reason, self.calc)
        return SaturationResult(Status.SATURATED, [], self._final_stats(start), calculus=self.calc)

    def _final_stats(self, start) -> dict:
        out = dict(self.stats)
        out["active"] = len(self.active)
        out["passive"] = self.passive_count
        out["wall_ms"] = int((time.monotonic() - start) * 1000)
        return out


def make_params(clauses: Sequence[Clause], config: ProverConfig) -> KboParams:
    if config.params is not None:
        return config.params
    return KboParams.from_symbols(symbols_in_order(clauses), config.precedence)


def saturate(clauses: Sequence[Clause], config: ProverConfig = None) -> SaturationResult:
    config = config or ProverConfig()
    clauses = list(clauses)
    prover = Prover(config, make_params(clauses, config))
    return prover.run(clauses)


def extract_proof(empty: Clause) -> List[Clause]:
    """All clauses the empty clause depends on, in derivation order."""
    seen: Dict[int, Clause] = {}
    stack = [empty]
    while stack:
        c = stack.pop()
        if id(c) in seen:
            continue
        seen[id(c)] = c
        stack.extend(c.derivation.premises)
    return sorted(seen.values(), key=lambda c: (c.id if c.id is not None else -1))


def proof_rules(proof: Sequence[Clause]) -> List[str]:
    return [c.derivation.rule for c in proof if c.derivation.rule != "Input"]


def replay_proof(proof: Sequence[Clause], calc: Calculus) -> List[str]:
    """Re-run every recorded step; return a list of problems (empty = valid)."""
    problems = []
    for c in proof:
        rec = c.derivation
        if rec.rule == "Input":
            continue
        inf = calc.replay(rec)
        if inf is None:
            problems.append(f"{c.id}: {rec.rule} side conditions fail on replay")
            continue
        again = inf.clause()
        if str(again) != str(c):
            problems.append(f"{c.id}: replay of {rec.rule} gave {again}, recorded {c}")
    if proof and proof[-1].literals:
        problems.append("proof does not end in the empty clause")
    return problems
