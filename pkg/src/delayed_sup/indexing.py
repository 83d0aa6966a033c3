"""Candidate retrieval: top-symbol tables, fingerprint indexing and a
subsumption pre-filter.

Fingerprint features are sampled at positions e, 1, 2, 1.1, 1.2, 2.1, 2.2.
A feature is the symbol at that position, ``AT_VAR`` when a variable sits
exactly there, ``BELOW_VAR`` when the position lies under a variable, or
``NONE`` when the position does not exist.
"""
from __future__ import annotations

from collections import defaultdict
from typing import Dict, Iterable, List

from .terms import Term

FP_POSITIONS = ((), (1,), (2,), (1, 1), (1, 2), (2, 1), (2, 2))

BELOW_VAR = "A"
AT_VAR = "B"
NONE = "N"


def feature(t: Term, p) -> object:
    for i in p:
        if t.is_var:
            return BELOW_VAR
        if i > len(t.args):
            return NONE
        t = t.args[i - 1]
    return AT_VAR if t.is_var else t.sym


def fingerprint(t: Term) -> tuple:
    return tuple(feature(t, p) for p in FP_POSITIONS)


def compatible(f1, f2) -> bool:
    """Could two terms with these features at one position unify?"""
    if f1 is BELOW_VAR or f2 is BELOW_VAR:
        return True
    if f1 is AT_VAR:
        return f2 is not NONE
    if f2 is AT_VAR:
        return f1 is not NONE
    return f1 == f2


def fp_compatible(fp1: tuple, fp2: tuple) -> bool:
    return all(compatible(a, b) for a, b in zip(fp1, fp2))


def unif_candidates(s: Term, t: Term) -> bool:
    return fp_compatible(fingerprint(s), fingerprint(t))


class FingerprintIndex:
    """A trie over fingerprints; retrieval over-approximates unifiability."""

    def __init__(self):
        self._root: dict = {}
        self.size = 0

    def insert(self, term: Term, entry) -> None:
        node = self._root
        fp = fingerprint(term)
        for f in fp[:-1]:
            node = node.setdefault(f, {})
        node.setdefault(fp[-1], []).append(entry)
        self.size += 1

    def retrieve(self, term: Term) -> List:
        out: List = []
        self._walk(self._root, fingerprint(term), 0, out)
        return out

    def _walk(self, node, fp, depth, out):
        q = fp[depth]
        if q is BELOW_VAR:
            children = node.values()
        elif q is AT_VAR:
            children = [v for k, v in node.items() if k is not NONE]
        elif q is NONE:
            children = [node[k] for k in (NONE, BELOW_VAR) if k in node]
        else:
            children = [node[k] for k in (q, BELOW_VAR, AT_VAR) if k in node]
        if depth == len(fp) - 1:
            for leaf in children:
                out.extend(leaf)
            return
        for child in children:
            self._walk(child, fp, depth + 1, out)


class TopSymbolIndex:
    """Hash map from top symbol to entries; variables are kept per sort."""

    def __init__(self):
        self._by_sym: Dict[object, List] = defaultdict(list)
        self._vars: Dict[object, List] = defaultdict(list)
        self._by_sort: Dict[object, List] = defaultdict(list)
        self.size = 0

    def insert(self, term: Term, entry) -> None:
        if term.is_var:
            self._vars[term.sort].append(entry)
        else:
            self._by_sym[term.sym].append(entry)
            self._by_sort[term.sort].append(entry)
        self.size += 1

    def same_top(self, term: Term) -> List:
        if term.is_var:
            return []
        return self._by_sym.get(term.sym, [])

    def variables(self, sort) -> List:
        return self._vars.get(sort, [])

    def all_nonvar(self, sort) -> List:
        return self._by_sort.get(sort, [])


def _head_key(t):
    return "*" if t.is_var else t.sym


class SubsumptionIndex:
    """Maps each stored clause to one key literal; a clause can only
    subsume a query whose literals include a match for that key."""

    def __init__(self):
        self._table: Dict[tuple, List] = defaultdict(list)

    @staticmethod
    def _key(lit):
        return (lit.positive, frozenset((_head_key(lit.lhs), _head_key(lit.rhs))))

    def insert(self, clause) -> None:
        if not clause.literals:
            return
        best = max(clause.literals, key=lambda l: (not l.lhs.is_var) + (not l.rhs.is_var))
        self._table[self._key(best)].append(clause)

    def candidates(self, clause) -> Iterable:
        seen = set()
        for lit in clause.literals:
            h1, h2 = _head_key(lit.lhs), _head_key(lit.rhs)
            for a in {h1, "*"}:
                for b in {h2, "*"}:
                    key = (lit.positive, frozenset((a, b)))
                    if key in seen:
                        continue
                    seen.add(key)
                    yield from self._table.get(key, ())
