"""Exact maximum avoiding-family computation by branch and bound.

Branching is depth-first over candidate sets ordered by distance of their
cardinality from n/2 (ascending bitmask inside a tie), include branch first:
extremal families concentrate near the middle levels, so good incumbents
appear early.  Pruning combines the cardinality bound |current| + |viable|
against the incumbent, incremental violation checks on every candidate, an
optional early stop once the incumbent meets a user-supplied exact theorem
bound, and root-level symmetry reduction: the orbits of a first included set
under relabeling of the ground set are exactly the size classes, so one
representative per cardinality suffices.

Results are deterministic for fixed options.  Subtrees are explored
sequentially; a worker count only parameterizes the documented seed/subtree
partitioning contract and never changes the result.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from math import floor

from .bounds import EXACT, BoundResult
from .configs import ConfigSet
from .detector import _hits_with_member, is_avoiding
from .lattice import Family, GroundSet, Mask

PROVEN_OPTIMAL = "proven-optimal"
LOWER_BOUND_ONLY = "lower-bound-only"
OPTIMAL_ASSUMING_THEOREM = "optimal-assuming-theorem"

EXACT_STATUS_GUARD = 6  # proven-optimal promised only up to this ground size
SEARCH_GROUND_GUARD = 20


@dataclass
class SearchProblem:
    n: int
    configs: ConfigSet
    mode: str = "standard"
    symmetry: bool = True
    theorem_bound: BoundResult | Fraction | int | None = None
    time_limit: float | None = None
    include_empty_and_full: bool = True
    workers: int = 1

    def __post_init__(self) -> None:
        GroundSet(self.n)
        if self.n > SEARCH_GROUND_GUARD:
            raise ValueError(f"search enumerates all 2^n subsets; limited to n <= {SEARCH_GROUND_GUARD}")
        if self.time_limit is not None and self.time_limit <= 0:
            raise ValueError("time_limit must be positive")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass(frozen=True)
class SearchResult:
    best_size: int
    witness: Family
    status: str
    nodes_explored: int
    prunes: int


class _FamilyView:
    """Mutable family with the attribute surface the detector reads."""

    __slots__ = ("n", "members", "by_size", "index")

    def __init__(self, n: int):
        self.n = n
        self.members: list[Mask] = []
        self.by_size: dict[int, list[Mask]] = {}
        self.index: dict[Mask, int] = {}

    def push(self, mask: Mask) -> None:
        self.index[mask] = len(self.members)
        self.members.append(mask)
        self.by_size.setdefault(mask.bit_count(), []).append(mask)

    def pop(self) -> None:
        mask = self.members.pop()
        del self.index[mask]
        self.by_size[mask.bit_count()].pop()


def candidate_order(n: int, include_empty_and_full: bool = True) -> list[Mask]:
    """All subsets of [n], middle cardinalities first, ascending mask on ties."""
    masks = sorted(range(1 << n), key=lambda m: (abs(2 * m.bit_count() - n), m))
    if not include_empty_and_full:
        masks = [m for m in masks if 0 < m.bit_count() < n]
    return masks


def _bound_target(theorem_bound) -> int | None:
    if theorem_bound is None:
        return None
    if isinstance(theorem_bound, BoundResult):
        if theorem_bound.exactness != EXACT:
            raise ValueError("only exact bounds can gate the search")
        return floor(theorem_bound.value)
    return floor(Fraction(theorem_bound))


class _Stop(Exception):
    def __init__(self, reason: str):
        self.reason = reason


class _Searcher:
    def __init__(self, problem: SearchProblem):
        self.problem = problem
        self.view = _FamilyView(problem.n)
        self.best_members: tuple[Mask, ...] = ()
        self.best_size = 0
        self.nodes = 0
        self.prunes = 0
        self.target = _bound_target(problem.theorem_bound)
        self.deadline = None
        if problem.time_limit is not None:
            self.deadline = time.monotonic() + problem.time_limit

    def addable(self, mask: Mask) -> bool:
        view = self.view
        view.push(mask)
        hit = _hits_with_member(view, self.problem.configs, self.problem.mode, len(view.members) - 1)
        view.pop()
        return not hit

    def record_if_better(self) -> None:
        cur = len(self.view.members)
        if cur > self.best_size:
            self.best_size = cur
            self.best_members = tuple(self.view.members)
            if self.target is not None and self.best_size >= self.target:
                raise _Stop("theorem")

    def dfs(self, viable: list[Mask]) -> None:
        self.nodes += 1
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise _Stop("timeout")
        self.record_if_better()
        if len(self.view.members) + len(viable) <= self.best_size:
            self.prunes += 1
            return
        c = viable[0]
        rest = viable[1:]
        self.view.push(c)
        self.dfs([d for d in rest if self.addable(d)])
        self.view.pop()
        self.dfs(rest)

    def run_root(self) -> str:
        problem = self.problem
        candidates = candidate_order(problem.n, problem.include_empty_and_full)
        try:
            if problem.symmetry:
                reps = [m for m in candidates if m == (1 << m.bit_count()) - 1]
                for rep in reps:
                    if not self.addable(rep):
                        continue
                    self.view.push(rep)
                    try:
                        self.dfs([d for d in candidates if d != rep and self.addable(d)])
                    finally:
                        self.view.pop()
            else:
                viable = [d for d in candidates if self.addable(d)]
                if viable:
                    self.dfs(viable)
        except _Stop as stop:
            return stop.reason
        return "exhausted"


def exact_max_family(problem: SearchProblem) -> SearchResult:
    """Maximum size of a family of subsets of [n] avoiding the configuration
    set, with an attained witness.

    Status is proven-optimal only when the tree was exhausted without the
    theorem-bound shortcut and n is within the exactness guard; a timeout
    yields lower-bound-only with the best family found, and stopping at a
    supplied exact bound yields optimal-assuming-theorem.
    """
    searcher = _Searcher(problem)
    outcome = searcher.run_root()
    if outcome == "timeout":
        status = LOWER_BOUND_ONLY
    elif outcome == "theorem":
        status = OPTIMAL_ASSUMING_THEOREM
    elif problem.n <= EXACT_STATUS_GUARD:
        status = PROVEN_OPTIMAL
    else:
        status = LOWER_BOUND_ONLY
    witness = Family(problem.n, searcher.best_members)
    assert is_avoiding(witness, problem.configs, problem.mode), "witness failed re-verification"
    assert len(witness) == searcher.best_size
    return SearchResult(searcher.best_size, witness, status, searcher.nodes, searcher.prunes)


def greedy_lower_bound(problem: SearchProblem) -> Family:
    """Maximal (not maximum) avoiding family: scan candidates in branch order
    and keep every set whose addition stays avoiding."""
    searcher = _Searcher(problem)
    for mask in candidate_order(problem.n, problem.include_empty_and_full):
        if searcher.addable(mask):
            searcher.view.push(mask)
    return Family(problem.n, searcher.view.members)


def verify_witness(result: SearchResult, problem: SearchProblem) -> bool:
    """Full detector pass over the witness plus the size bookkeeping."""
    return (
        result.witness.n == problem.n
        and len(result.witness) == result.best_size
        and is_avoiding(result.witness, problem.configs, problem.mode)
    )
