"""Deterministic play of strategies, outcome evaluation, and assignment sweeps.

Given an instance, a strategy, and an assignment there is exactly one way the
game can go: each asking's guess is forced by the hats the asked player sees
and the guesses it has heard. :func:`run_game` computes that unique play by
walking any linear extension of the hearing relation; which extension is used
does not matter (the test suite asserts this rather than assuming it).

A strategy is *winning* when the play it induces satisfies the instance's
rule for every assignment; :func:`is_winning` and :func:`sweep` decide this
by exhausting the assignment space, never from a partial scan.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .errors import (
    CoverageError,
    CyclicHearing,
    OverlapError,
    StrategyRangeError,
    SweepTooLarge,
)
from .model import (
    Assignment,
    EvaluationRule,
    Instance,
    RuleKind,
    as_assignment,
    find_hearing_cycle,
)

DEFAULT_SWEEP_BUDGET = 10**8
"""Largest assignment space a sweep will exhaust without an explicit budget."""


# --- strategies -------------------------------------------------------------

class Strategy:
    """A deterministic guessing policy.

    ``decide`` receives the asking ``t``, the visible hats ``seen`` (player ->
    color, exactly the hats the asked player may look at) and the heard
    guesses ``heard`` (asking -> color, exactly the guesses replayed to it),
    and returns a color. Implementations must be pure: the same triple always
    yields the same color, and nothing outside the triple may influence it.
    """

    label = "strategy"

    def decide(self, t: int, seen: Mapping[int, int], heard: Mapping[int, int]) -> int:
        raise NotImplementedError

    def __repr__(self):
        return f"<{type(self).__name__} {self.label}>"


class RuleStrategy(Strategy):
    """Strategy backed by a plain decision function."""

    def __init__(self, fn: Callable[[int, Mapping[int, int], Mapping[int, int]], int], label: str = "rule"):
        self.fn = fn
        self.label = label

    def decide(self, t, seen, heard):
        return self.fn(t, seen, heard)


def freeze_observation(mapping: Mapping[int, int]) -> tuple[tuple[int, int], ...]:
    """Canonical hashable form of a seen/heard map."""
    return tuple(sorted(mapping.items()))


class TableStrategy(Strategy):
    """Strategy given extensionally, one entry per (asking, seen, heard) triple.

    Entries are keyed by ``(t, freeze_observation(seen), freeze_observation(heard))``.
    The table must cover every triple the instance can present.
    """

    def __init__(self, entries: Mapping, label: str = "table"):
        self.entries = dict(entries)
        self.label = label

    def decide(self, t, seen, heard):
        key = (t, freeze_observation(seen), freeze_observation(heard))
        try:
            return self.entries[key]
        except KeyError:
            raise LookupError(
                f"table strategy has no entry for asking {t} with seen={dict(seen)} heard={dict(heard)}"
            ) from None

    def __eq__(self, other):
        return isinstance(other, TableStrategy) and self.entries == other.entries

    def __hash__(self):
        return hash(frozenset(self.entries.items()))

    def to_json(self) -> list:
        rows = []
        for (t, seen, heard), guess in sorted(self.entries.items()):
            rows.append({
                "t": t,
                "seen": [list(p) for p in seen],
                "heard": [list(p) for p in heard],
                "guess": guess,
            })
        return rows

    @staticmethod
    def from_json(rows: Iterable[Mapping]) -> "TableStrategy":
        entries = {}
        for row in rows:
            key = (
                int(row["t"]),
                tuple((int(a), int(b)) for a, b in row["seen"]),
                tuple((int(a), int(b)) for a, b in row["heard"]),
            )
            entries[key] = int(row["guess"])
        return TableStrategy(entries)


# --- play order -------------------------------------------------------------

def topological_extension(inst: Instance, seed: int | None = None) -> tuple[int, ...]:
    """A linear order on askings extending the hearing relation.

    With ``seed=None`` the choice among ready askings is always the least id,
    giving the canonical (lexicographically least) extension; an integer seed
    randomizes the tie-breaks, which is how the suite exercises that play does
    not depend on the extension.
    """
    ready: list[int] = []
    pending: dict[int, int] = {}
    succ: dict[int, list[int]] = {t: [] for t in inst.askings}
    for earlier, later in inst.hearing:
        succ[earlier].append(later)
        pending[later] = pending.get(later, 0) + 1
    for t in sorted(inst.askings):
        if not pending.get(t):
            ready.append(t)
    ready.sort()

    rng = random.Random(seed) if seed is not None else None
    order: list[int] = []
    while ready:
        idx = rng.randrange(len(ready)) if rng is not None else 0
        t = ready.pop(idx)
        order.append(t)
        for nxt in sorted(succ[t]):
            pending[nxt] -= 1
            if pending[nxt] == 0:
                _insort(ready, nxt)
    if len(order) != len(inst.askings):
        raise CyclicHearing(find_hearing_cycle(inst) or ())
    return tuple(order)


def _insort(lst: list[int], x: int) -> None:
    lo, hi = 0, len(lst)
    while lo < hi:
        mid = (lo + hi) // 2
        if lst[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    lst.insert(lo, x)


@dataclass(frozen=True)
class _Compiled:
    """Per-instance lookup tables reused across plays of the same instance."""

    order: tuple[int, ...]
    steps: tuple[tuple[int, int, tuple[int, ...], tuple[int, ...]], ...]  # (t, player, seen, heard)


@lru_cache(maxsize=256)
def _compiled(inst: Instance) -> _Compiled:
    order = topological_extension(inst)
    steps = tuple(
        (t, inst.label_of(t), inst.seen_by(inst.label_of(t)), inst.heard_at(t))
        for t in order
    )
    return _Compiled(order, steps)


# --- play and scoring -------------------------------------------------------

GuessRecord = dict
"""The unique play: a total map from asking to guessed color."""


@dataclass(frozen=True)
class GameResult:
    guesses: Mapping[int, int]
    correct_set: frozenset[int]
    incorrect_set: frozenset[int]
    verdict: bool

    @property
    def correct_count(self) -> int:
        return len(self.correct_set)

    @property
    def incorrect_count(self) -> int:
        return len(self.incorrect_set)


def evaluate(rule: EvaluationRule, correct_count: int, incorrect_count: int) -> bool:
    """Apply a win rule to the guess counts."""
    if rule.kind is RuleKind.AT_LEAST_CORRECT:
        return correct_count >= rule.threshold
    return incorrect_count < rule.threshold


def run_game(
    inst: Instance,
    strat: Strategy,
    assignment: Assignment | Sequence[int],
    order: Sequence[int] | None = None,
) -> GameResult:
    """Play out the unique game of ``strat`` against ``assignment``.

    The strategy at each asking is handed exactly the hats its player may see
    and the guesses replayed to it -- nothing else (players remember nothing
    across askings). ``order`` may supply an alternative linear extension of
    the hearing relation, e.g. from :func:`topological_extension` with a
    seed; the resulting play is the same for every valid order.
    """
    a = as_assignment(inst, assignment)
    if order is None:
        steps = _compiled(inst).steps
    else:
        order = tuple(order)
        if sorted(order) != sorted(inst.askings):
            raise ValueError("order must be a permutation of the instance's askings")
        steps = tuple(
            (t, inst.label_of(t), inst.seen_by(inst.label_of(t)), inst.heard_at(t))
            for t in order
        )
    try:
        guesses, asked, wrong = _play(steps, a, strat.decide, inst.colors.size)
    except KeyError as exc:
        cycle = find_hearing_cycle(inst)
        if cycle is not None:
            raise CyclicHearing(cycle) from exc
        raise ValueError("order does not extend the hearing relation") from exc
    correct = frozenset(asked - wrong)
    incorrect = frozenset(wrong)
    verdict = evaluate(inst.rule, len(correct), len(incorrect))
    return GameResult(guesses, correct, incorrect, verdict)


def _play(steps, a, decide, size):
    """The recursion at the heart of everything: each asking's guess is the
    strategy applied to exactly what that asking may observe."""
    guesses: dict[int, int] = {}
    wrong: set[int] = set()
    asked: set[int] = set()
    for t, m, vis, hrd in steps:
        g = decide(t, {x: a[x] for x in vis}, {x: guesses[x] for x in hrd})
        if not isinstance(g, int) or isinstance(g, bool) or not 0 <= g < size:
            raise StrategyRangeError(
                f"strategy returned {g!r} at asking {t}; colors are 0..{size - 1}"
            )
        guesses[t] = g
        asked.add(m)
        if g != a[m]:
            wrong.add(m)
    return guesses, asked, wrong


# --- whole-space sweeps -----------------------------------------------------

def iter_assignment_tuples(inst: Instance) -> Iterator[tuple[int, ...]]:
    """All assignments as color tuples in player order, lexicographically."""
    return product(range(inst.colors.size), repeat=len(inst.players))


@dataclass(frozen=True)
class SweepReport:
    assignments: int
    min_correct: int
    max_incorrect: int
    winning: bool
    counterexample: tuple[int, ...] | None

    def to_json(self) -> dict:
        return {
            "assignments": self.assignments,
            "min_correct": self.min_correct,
            "max_incorrect": self.max_incorrect,
            "winning": self.winning,
            "counterexample": None if self.counterexample is None else list(self.counterexample),
        }


def _play_counts(inst: Instance, strat: Strategy, values: tuple[int, ...]) -> tuple[int, int]:
    """Correct/incorrect player counts for one assignment tuple (fast path)."""
    steps = _compiled(inst).steps
    a = dict(zip(inst.players, values))
    _, asked, wrong = _play(steps, a, strat.decide, inst.colors.size)
    return len(asked) - len(wrong), len(wrong)


def _check_sweep_budget(inst: Instance, max_assignments: int | None) -> int:
    budget = DEFAULT_SWEEP_BUDGET if max_assignments is None else max_assignments
    total = inst.assignment_count()
    if total > budget:
        raise SweepTooLarge(total, budget)
    return total


def sweep(
    inst: Instance,
    strat: Strategy,
    max_assignments: int | None = None,
    jobs: int = 1,
) -> SweepReport:
    """Play every assignment and report the worst case.

    The counterexample, when the strategy is not winning, is the
    lexicographically least failing assignment; with ``jobs > 1`` the
    assignment space is partitioned across threads and chunk results are
    combined so the report is identical to the sequential one.
    """
    total = _check_sweep_budget(inst, max_assignments)
    if jobs <= 1 or total < 4 * jobs:
        return _sweep_chunk(inst, strat, iter_assignment_tuples(inst), total)

    from concurrent.futures import ThreadPoolExecutor

    size = inst.colors.size
    n = len(inst.players)
    firsts = list(range(size))
    chunks = [
        (first, product(range(size), repeat=n - 1))
        for first in firsts
    ]

    def work(chunk):
        first, rest = chunk
        return _sweep_chunk(inst, strat, ((first, *tail) for tail in rest), total // size)

    with ThreadPoolExecutor(max_workers=jobs) as pool:
        parts = list(pool.map(work, chunks))
    counterexamples = [p.counterexample for p in parts if p.counterexample is not None]
    return SweepReport(
        assignments=total,
        min_correct=min(p.min_correct for p in parts),
        max_incorrect=max(p.max_incorrect for p in parts),
        winning=all(p.winning for p in parts),
        counterexample=min(counterexamples) if counterexamples else None,
    )


def _sweep_chunk(inst, strat, tuples, count) -> SweepReport:
    rule = inst.rule
    min_correct = None
    max_incorrect = None
    counterexample = None
    for values in tuples:
        correct, incorrect = _play_counts(inst, strat, values)
        if min_correct is None or correct < min_correct:
            min_correct = correct
        if max_incorrect is None or incorrect > max_incorrect:
            max_incorrect = incorrect
        if counterexample is None and not evaluate(rule, correct, incorrect):
            counterexample = values
    return SweepReport(
        assignments=count,
        min_correct=min_correct if min_correct is not None else 0,
        max_incorrect=max_incorrect if max_incorrect is not None else 0,
        winning=counterexample is None,
        counterexample=counterexample,
    )


def iter_plays(
    inst: Instance,
    strat: Strategy,
    max_assignments: int | None = None,
) -> Iterator[tuple[tuple[int, ...], GameResult]]:
    """Play every assignment in lexicographic order, yielding full results."""
    _check_sweep_budget(inst, max_assignments)
    steps = _compiled(inst).steps
    players = inst.players
    size = inst.colors.size
    rule = inst.rule
    decide = strat.decide
    for values in iter_assignment_tuples(inst):
        guesses, asked, wrong = _play(steps, dict(zip(players, values)), decide, size)
        correct = frozenset(asked - wrong)
        incorrect = frozenset(wrong)
        yield values, GameResult(guesses, correct, incorrect, evaluate(rule, len(correct), len(incorrect)))


def is_winning(
    inst: Instance,
    strat: Strategy,
    max_assignments: int | None = None,
) -> tuple[bool, tuple[int, ...] | None]:
    """Decide winningness, stopping at the first (lex-least) counterexample."""
    _check_sweep_budget(inst, max_assignments)
    rule = inst.rule
    for values in iter_assignment_tuples(inst):
        correct, incorrect = _play_counts(inst, strat, values)
        if not evaluate(rule, correct, incorrect):
            return False, values
    return True, None


# --- combination ------------------------------------------------------------

class CombinedStrategy(Strategy):
    """Dispatches each asking to the sub-strategy owning it.

    The seen and heard maps handed to a part are first cut down to that
    part's own sight and hearing relations, so a part plays exactly as it
    would on its sub-instance.
    """

    label = "combined"

    def __init__(self, parts: Sequence[tuple[Instance, Strategy]]):
        self.parts = tuple(parts)
        self._owner: dict[int, tuple[Instance, Strategy]] = {}
        for sub, strat in self.parts:
            for t in sub.askings:
                self._owner[t] = (sub, strat)

    def decide(self, t, seen, heard):
        sub, strat = self._owner[t]
        m = sub.label_of(t)
        sub_seen = {x: seen[x] for x in sub.seen_by(m)}
        sub_heard = {x: heard[x] for x in sub.heard_at(t)}
        return strat.decide(t, sub_seen, sub_heard)


def combine(parts: Sequence[tuple[Instance, Strategy]], target: Instance) -> CombinedStrategy:
    """Merge strategies for disjoint sub-instances into one for ``target``.

    The parts' asking sets must partition the target's askings, and the
    target's sight and hearing must contain each part's relations (so every
    part finds the observations it expects inside the combined ones).
    """
    seen_askings: set[int] = set()
    for sub, _ in parts:
        overlap = seen_askings & set(sub.askings)
        if overlap:
            raise OverlapError(f"askings {sorted(overlap)} belong to more than one part")
        seen_askings.update(sub.askings)
    target_askings = set(target.askings)
    if seen_askings != target_askings:
        missing = sorted(target_askings - seen_askings)
        extra = sorted(seen_askings - target_askings)
        raise CoverageError(
            f"parts must cover the target askings exactly; missing={missing} extra={extra}"
        )
    for sub, _ in parts:
        if not sub.sight <= target.sight:
            raise ValueError("a part's sight relation is not contained in the target's")
        if not sub.hearing <= target.hearing:
            raise ValueError("a part's hearing relation is not contained in the target's")
        for t in sub.askings:
            if sub.label_of(t) != target.label_of(t):
                raise ValueError(f"part and target disagree on who is asked at {t}")
    return CombinedStrategy(parts)
