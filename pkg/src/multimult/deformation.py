"""Bounded search for deformations of finite multisemigroups.

A deformation of ``(S, *)`` is a finitary multi-multisemigroup whose nonzero
pattern is exactly ``*``.  Two kinds of answer exist:

* ``obstructed``: an element ``a`` with ``a*a = {a}`` and some ``b != a`` with
  ``{a, b}`` inside ``a*b`` or ``b*a``.  Then ``aab`` (or ``baa``) evaluates
  differently from the left and from the right at ``a`` for any choice of
  positive multiplicities, so no deformation exists at all.
* a depth-first search over multiplicities ``1..M``.  ``found`` is a witness;
  ``none_within_bound`` only says that no witness has entries ``<= M``.
"""
from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import BaseNotAssociative, CarrierMismatch
from .mms import (
    MultiMultisemigroup,
    Multisemigroup,
    Verdict,
    is_finitary,
    underlying_multisemigroup,
    verify_associativity,
)
from .semiring import OMEGA

DEFAULT_MAX_CARRIER = 6
DEFAULT_MAX_MULTIPLICITY = 8

FOUND = "found"
NONE_WITHIN_BOUND = "none_within_bound"
OBSTRUCTED = "obstructed"


def default_carrier_cap() -> int:
    return int(os.environ.get("MULTIMULT_MAX_CARRIER", DEFAULT_MAX_CARRIER))


@dataclass
class DeformationProblem:
    base: Multisemigroup
    max_multiplicity: int
    check_obstruction: bool = True
    carrier_cap: int | None = None
    multiplicity_cap: int = DEFAULT_MAX_MULTIPLICITY


@dataclass
class DeformationResult:
    outcome: str
    max_multiplicity: int
    nodes: int = 0
    deformation: MultiMultisemigroup | None = None
    witness: tuple[str, str] | None = None

    @property
    def is_proof(self) -> bool:
        """Whether the outcome settles deformability outright."""
        return self.outcome in (FOUND, OBSTRUCTED)


def idempotent_pair_obstruction(ms: Multisemigroup) -> tuple[str, str] | None:
    """First ordered pair ``(a, b)`` of distinct elements with ``a*a = {a}`` and
    ``{a, b}`` contained in ``a*b`` or in ``b*a``.

    A hit proves that ``ms`` has no deformation; None proves nothing.
    """
    for a, b in itertools.permutations(ms.carrier, 2):
        if ms(a, a) != {a}:
            continue
        pair = {a, b}
        if pair <= ms(a, b) or pair <= ms(b, a):
            return a, b
    return None


def is_deformation(candidate: MultiMultisemigroup, base: Multisemigroup) -> Verdict:
    if candidate.carrier != base.carrier:
        raise CarrierMismatch("candidate and base have different carriers")
    reasons = list(is_finitary(candidate).reasons)
    cex = verify_associativity(candidate)
    if cex is not None:
        reasons.append(str(cex))
    if underlying_multisemigroup(candidate) != base:
        reasons.append("support mismatch")
    return Verdict(not reasons, reasons)


class _Search:
    """Depth-first search with the associativity law checked as soon as a
    triple's entries are all assigned."""

    def __init__(self, base: Multisemigroup, max_multiplicity: int):
        self.base = base
        self.M = max_multiplicity
        n = self.n = len(base.carrier)
        idx = base.index_of
        self.support = [[sorted(idx(r) for r in base(s, t)) for t in base.carrier] for s in base.carrier]
        self.variables = [
            (s, t, r) for s in range(n) for t in range(n) for r in self.support[s][t]
        ]
        last = {}
        for k, (s, t, _) in enumerate(self.variables):
            last[s, t] = k
        self.by_step: list[list[tuple[int, int, int]]] = [[] for _ in self.variables]
        self.initial: list[tuple[int, int, int]] = []
        for r, s, t in itertools.product(range(n), repeat=3):
            pairs = {(s, t), (r, s)}
            pairs.update((r, i) for i in self.support[s][t])
            pairs.update((j, t) for j in self.support[r][s])
            ready = max((last.get(p, -1) for p in pairs), default=-1)
            (self.initial if ready < 0 else self.by_step[ready]).append((r, s, t))
        self.values = [[[0] * n for _ in range(n)] for _ in range(n)]
        self.nodes = 0

    def _holds(self, r: int, s: int, t: int) -> bool:
        v, sup = self.values, self.support
        st, rs = v[s][t], v[r][s]
        for x in range(self.n):
            lhs = sum(st[i] * v[r][i][x] for i in sup[s][t])
            rhs = sum(rs[j] * v[j][t][x] for j in sup[r][s])
            if lhs != rhs:
                return False
        return True

    def _consistent(self, triples) -> bool:
        return all(self._holds(*triple) for triple in triples)

    def run(self, first_values=None) -> bool:
        """Search; on success ``self.values`` holds the first solution found.

        ``first_values`` restricts the choices for the first variable.
        """
        if not self._consistent(self.initial):
            return False
        if not self.variables:
            return True
        return self._dfs(0, first_values)

    def _dfs(self, k: int, choices=None) -> bool:
        s, t, r = self.variables[k]
        row = self.values[s][t]
        last = k + 1 == len(self.variables)
        for value in choices if choices is not None else range(1, self.M + 1):
            row[r] = value
            self.nodes += 1
            if self._consistent(self.by_step[k]) and (last or self._dfs(k + 1)):
                return True
        row[r] = 0
        return False

    def solution(self) -> MultiMultisemigroup:
        return MultiMultisemigroup(self.base.carrier, OMEGA, np.array(self.values, dtype=np.int64), validated=True)


def _run_subtree(base: Multisemigroup, M: int, value: int):
    search = _Search(base, M)
    found = search.run(first_values=[value])
    return found, search.nodes, (search.solution() if found else None)


def search_deformation(problem: DeformationProblem, workers: int = 1) -> DeformationResult:
    """Look for the lexicographically first deformation with entries in ``1..M``.

    Variables are the entries ``mu[s, t](r)`` with ``r`` in ``s*t``, ordered by
    ``(s, t, r)`` in carrier order, and values are tried in increasing order.
    With ``workers > 1`` the choices for the first variable are explored in
    separate processes; the answer and node count match the serial search.
    """
    base, M = problem.base, problem.max_multiplicity
    if M < 1:
        raise ValueError("max_multiplicity must be at least 1")
    if M > problem.multiplicity_cap:
        raise ValueError(f"max_multiplicity {M} exceeds the cap {problem.multiplicity_cap}")
    cap = problem.carrier_cap if problem.carrier_cap is not None else default_carrier_cap()
    if len(base.carrier) > cap:
        raise ValueError(
            f"carrier has {len(base.carrier)} elements, above the cap {cap} (set MULTIMULT_MAX_CARRIER to raise it)"
        )
    failure = base.associativity_failure()
    if failure is not None:
        raise BaseNotAssociative(f"base multisemigroup is not associative at {failure}")

    if problem.check_obstruction:
        pair = idempotent_pair_obstruction(base)
        if pair is not None:
            return DeformationResult(OBSTRUCTED, M, witness=pair)

    search = _Search(base, M)
    if workers <= 1 or not search.variables:
        if search.run():
            return DeformationResult(FOUND, M, search.nodes, deformation=search.solution())
        return DeformationResult(NONE_WITHIN_BOUND, M, search.nodes)

    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(_run_subtree, *zip(*[(base, M, v) for v in range(1, M + 1)])))
    nodes = 0
    # serial order: subtrees before the first success are explored completely
    for found, count, solution in results:
        nodes += count
        if found:
            return DeformationResult(FOUND, M, nodes, deformation=solution)
    return DeformationResult(NONE_WITHIN_BOUND, M, nodes)
