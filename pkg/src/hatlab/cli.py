"""Command-line surface: run games, sweep assignments, search strategy spaces,
demo the symbolic lines, and run the acceptance suite.

Reports are JSON by default (canonical form: sorted keys, no whitespace), so
identical invocations produce byte-identical output. Exit codes: 0 success /
property holds, 1 property fails, 2 configuration error, 3 budget exceeded.
"""

from __future__ import annotations

import functools
import json
import os
import sys
import time

import click

from .acceptance import run_criteria
from .engine import (
    iter_plays,
    run_game,
    sweep,
    topological_extension,
)
from .errors import BudgetExceeded, HatlabError, SweepTooLarge
from .line import (
    LazyAssignment,
    LineShape,
    OrdinalPosition,
    lazy_assignment_from_json,
    run_lazy,
)
from .model import (
    EvaluationRule,
    Instance,
    OMEGA,
    at_least,
    build_canonical_instance,
    fewer_incorrect_than,
    instance_from_json,
    instance_to_json,
    validate_instance,
)
from .oracle import (
    SearchBudget,
    best_guaranteed_correct,
    exists_winning_exhaustive,
)
from .strategies import block_mod_sum, strategy_from_descriptor, sum_broadcast


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _env_budget() -> int | None:
    raw = os.environ.get("HATLAB_BUDGET")
    return int(raw) if raw else None


def _guarded(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (SweepTooLarge, BudgetExceeded) as exc:
            click.echo(f"budget error: {exc}", err=True)
            sys.exit(3)
        except (HatlabError, ValueError, KeyError, TypeError, OSError, json.JSONDecodeError) as exc:
            click.echo(f"config error: {exc}", err=True)
            sys.exit(2)

    return wrapper


# --- shared option parsing ----------------------------------------------------

def _parse_rule(text: str) -> EvaluationRule:
    name, _, raw = text.partition(":")
    if not raw:
        raise ValueError(f"rule {text!r} needs a threshold, e.g. at_least:1")
    threshold = OMEGA if raw == "omega" else int(raw)
    if name == "at_least":
        return at_least(threshold)
    if name == "fewer_incorrect":
        return fewer_incorrect_than(threshold)
    raise ValueError(f"unknown rule {name!r}; use at_least or fewer_incorrect")


def _load_json_arg(text: str):
    if text.strip().startswith(("{", "[")):
        return json.loads(text)
    with open(text, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _build_instance(instance, kind, players, colors, rule) -> Instance:
    if instance:
        data = _load_json_arg(instance)
        inst = instance_from_json(data)
        if rule:
            data["rule"] = _parse_rule(rule).to_json()
            inst = instance_from_json(data)
    else:
        if not (kind and players and colors and rule):
            raise ValueError("give --instance, or all of --kind, -m, -c and --rule")
        inst = build_canonical_instance(kind, players, colors, _parse_rule(rule))
    report = validate_instance(inst)
    if not report.valid:
        raise ValueError("; ".join(report.errors))
    return inst


_PRINCIPAL_PARAM = {
    "constant": "value",
    "base_selector": "base",
    "block_mod_sum": "n",
    "mod_sum": "block",
    "random": "seed",
    "table": "entries",
}


def parse_strategy_spec(text: str) -> dict:
    """Compact ``name:k=v,...`` (or bare ``name:value``) or a JSON descriptor."""
    if text.strip().startswith("{"):
        return json.loads(text)
    name, _, rest = text.partition(":")
    params: dict = {}
    if rest:
        if "=" in rest:
            for pair in rest.split(","):
                key, _, val = pair.partition("=")
                params[key] = val
        else:
            key = _PRINCIPAL_PARAM.get(name)
            if key is None:
                raise ValueError(f"strategy {name!r} takes no bare parameter")
            params[key] = rest
    for key in ("value", "base", "n", "seed"):
        if key in params:
            params[key] = int(params[key])
    if "block" in params and isinstance(params["block"], str):
        params["block"] = [int(x) for x in params["block"].split("-")]
    if "entries" in params and isinstance(params["entries"], str):
        params["entries"] = _load_json_arg(params["entries"])
    return {"name": name, "params": params}


def _build_strategy(spec: str, inst: Instance):
    return strategy_from_descriptor(parse_strategy_spec(spec), inst)


def _emit(report: dict, fmt: str) -> None:
    if fmt == "json":
        click.echo(_dumps(report))
    else:
        for key in sorted(report):
            click.echo(f"{key}: {report[key]}")


_instance_options = [
    click.option("--instance", default=None, help="Instance descriptor (JSON text or file path)."),
    click.option("--kind", type=click.Choice(["hnsa", "hnsf", "hbsf"]), default=None),
    click.option("-m", "--players", type=int, default=None, help="Player count (hbsf: incl. front)."),
    click.option("-c", "--colors", type=int, default=None, help="Color count."),
    click.option("--rule", default=None, help="at_least:K or fewer_incorrect:K (K int or 'omega')."),
]


def instance_options(fn):
    for opt in reversed(_instance_options):
        fn = opt(fn)
    return fn


@click.group()
def main():
    """Hat-guessing games: deterministic plays, sweeps, and exhaustive searches."""


@main.command("run")
@instance_options
@click.option("--strategy", required=True, help="Strategy spec, e.g. block_mod_sum:n=2.")
@click.option("--assignment", required=True, help="Comma-separated colors in player order.")
@click.option("--seed", type=int, default=None, help="Seed for the play order (result-invariant).")
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="json")
@_guarded
def cmd_run(instance, kind, players, colors, rule, strategy, assignment, seed, fmt):
    """Play one game and print the result; exit 0 iff the rule is satisfied."""
    inst = _build_instance(instance, kind, players, colors, rule)
    strat = _build_strategy(strategy, inst)
    values = tuple(int(x) for x in assignment.split(","))
    order = topological_extension(inst, seed) if seed is not None else None
    result = run_game(inst, strat, values, order=order)
    report = {
        "instance": instance_to_json(inst),
        "assignment": list(values),
        "guesses": [result.guesses[t] for t in inst.askings],
        "correct": sorted(result.correct_set),
        "incorrect": sorted(result.incorrect_set),
        "verdict": int(result.verdict),
    }
    _emit(report, fmt)
    sys.exit(0 if result.verdict else 1)


@main.command("sweep")
@instance_options
@click.option("--strategy", required=True)
@click.option("--jobs", type=int, default=1, help="Partition the sweep across threads.")
@click.option("--max-assignments", type=int, default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "csv", "text"]), default="json")
@_guarded
def cmd_sweep(instance, kind, players, colors, rule, strategy, jobs, max_assignments, fmt):
    """Play every assignment; exit 0 iff the strategy wins all of them."""
    inst = _build_instance(instance, kind, players, colors, rule)
    strat = _build_strategy(strategy, inst)
    budget = max_assignments if max_assignments is not None else _env_budget()
    if fmt == "csv":
        click.echo("assignment,correct,incorrect,verdict")
        winning = True
        for values, result in iter_plays(inst, strat, max_assignments=budget):
            winning = winning and result.verdict
            click.echo(
                f"{'-'.join(map(str, values))},{result.correct_count},"
                f"{result.incorrect_count},{int(result.verdict)}"
            )
        sys.exit(0 if winning else 1)
    report = sweep(inst, strat, max_assignments=budget, jobs=jobs)
    _emit(report.to_json(), fmt)
    sys.exit(0 if report.winning else 1)


@main.command("search")
@instance_options
@click.option("--mode", type=click.Choice(["exists", "best"]), default="exists")
@click.option("--expect", type=click.Choice(["yes", "no"]), default=None,
              help="Exit 0 iff a winning strategy exists (yes) / doesn't (no).")
@click.option("--prune/--no-prune", default=True)
@click.option("--max-strategies", type=int, default=None)
@click.option("--max-assignments", type=int, default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="json")
@_guarded
def cmd_search(instance, kind, players, colors, rule, mode, expect, prune,
               max_strategies, max_assignments, fmt):
    """Exhaust the table-strategy space for the instance's rule."""
    inst = _build_instance(instance, kind, players, colors, rule)
    env = _env_budget()
    budget = SearchBudget(
        max_strategies=max_strategies or env or SearchBudget().max_strategies,
        max_assignments=max_assignments or env or SearchBudget().max_assignments,
    )
    if mode == "best":
        verdict = best_guaranteed_correct(inst, budget=budget, prune=prune)
    else:
        verdict = exists_winning_exhaustive(inst, budget=budget, prune=prune)
    _emit(verdict.to_json(inst), fmt)
    if expect is not None:
        sys.exit(0 if verdict.exists_winning == (expect == "yes") else 1)
    sys.exit(0)


@main.command("line")
@click.option("--strategy", "kind",
              type=click.Choice(["see_all_selector", "forward_selector", "sum_broadcast"]),
              required=True)
@click.option("-c", "--colors", type=int, required=True)
@click.option("--lazy", default=None,
              help='Lazy assignment descriptor (JSON text or file): {"base", "exceptions", "front", "blocks"}.')
@click.option("--blocks", type=int, default=1, help="Number of limit blocks in the line.")
@click.option("--assignment-base", type=int, default=0)
@click.option("--exception", "exceptions", multiple=True,
              help="k,n,color -- hat at position w*k+n (repeatable).")
@click.option("--front", type=int, default=None, help="Front player's hat color.")
@click.option("--base", type=int, default=None,
              help="Selector strategies: the base color announced (default: assignment base).")
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="json")
@_guarded
def cmd_line(kind, colors, lazy, blocks, assignment_base, exceptions, front, base, fmt):
    """Play a line strategy symbolically on an eventually-constant assignment."""
    if lazy:
        shape, a = lazy_assignment_from_json(_load_json_arg(lazy))
    else:
        parsed = {}
        for text in exceptions:
            k, n, color = (int(x) for x in text.split(","))
            parsed[OrdinalPosition(k, n)] = color
        shape = LineShape(blocks, front_present=front is not None)
        a = LazyAssignment.of(assignment_base, parsed, front)
    record = run_lazy(kind, shape, a.base if base is None else base, a, colors)
    report = record.to_json()
    report["assignment"] = a.to_json(shape.limit_blocks)
    _emit(report, fmt)


@main.command("verify")
@click.option("--only", default=None, help="Run only criteria whose id contains this text.")
@_guarded
def cmd_verify(only):
    """Run the acceptance suite; exit 0 iff every criterion passes."""
    results = run_criteria(only)
    if not results:
        click.echo(f"no criteria match {only!r}", err=True)
        sys.exit(2)
    width = max(len(r.cid) for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        click.echo(f"{status}  {r.cid:<{width}}  {r.seconds:6.2f}s  {r.detail}")
    failed = [r for r in results if not r.passed]
    click.echo(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    sys.exit(1 if failed else 0)


@main.command("bench")
@_guarded
def cmd_bench():
    """Time a few representative workloads."""
    rows = []

    def timed(name, fn):
        start = time.perf_counter()
        fn()
        rows.append({"name": name, "seconds": round(time.perf_counter() - start, 4)})

    timed("sweep hnsa m=6 c=3 block_mod_sum",
          lambda: sweep(build_canonical_instance("hnsa", 6, 3, at_least(2)), block_mod_sum(6, 3, 2)))
    timed("search best hnsa m=3 c=2",
          lambda: best_guaranteed_correct(build_canonical_instance("hnsa", 3, 2, at_least(1))))
    timed("sweep hbsf m=7 c=3 sum_broadcast",
          lambda: sweep(build_canonical_instance("hbsf", 7, 3, fewer_incorrect_than(2)), sum_broadcast(3)))
    click.echo(_dumps(rows))


if __name__ == "__main__":
    main()
