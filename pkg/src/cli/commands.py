"""
src/cli/commands.py
────────────────────
Implémentation des sous-commandes.

  schedule → exécute la planification, écrit schedule.json, metrics.json, gantt
  validate → vérifie les invariants d'une instance
  oracle   → compare l'heuristique aux oracles sur des instances nettes
  gen      → génère une instance aléatoire reproductible

Chaque commande retourne un code de sortie ; les exceptions sont
traduites en codes par src/cli/app.py.
"""

import argparse
import json
from pathlib import Path

from config.settings import settings
from src.baseline.oracles import (
    brute_force,
    cpm_backward,
    edd_single_machine,
    optimality_gap,
    schedule_max_lateness,
)
from src.cli.report import compute_metrics, gantt_svg, gantt_txt, schedule_document
from src.cli.schemas import OracleInstanceReport, OracleReport
from src.data.generator import generate_instance
from src.data.loader import InstanceLoader, RuleBaseLoader, dump_json, instance_to_json
from src.fuzzy.core import defuzz_centroid
from src.model.shop import Instance, validate
from src.scheduling.allocate import run
from src.scheduling.rating import RuleBase
from src.scheduling.retrograde import backward_pass
from src.utils.logger import logger

EXIT_OK = 0
EXIT_INVALID = 1


def _overrides(args: argparse.Namespace) -> dict:
    """Options CLI de configuration (None = non fournie)."""
    return {
        "horizon": getattr(args, "horizon", None),
        "step": getattr(args, "step", None),
        "significance_epsilon": getattr(args, "epsilon", None),
        "max_fixpoint_iters": getattr(args, "max_iters", None),
        "seed": getattr(args, "seed", None),
        "defuzzification": getattr(args, "defuzzification", None),
    }


def _load_valid(path: Path, args: argparse.Namespace) -> Instance | None:
    instance = InstanceLoader(path).load(**_overrides(args))
    violations = validate(instance)
    if violations:
        logger.error(f"{path} : {len(violations)} violation(s) d'invariant")
        for violation in violations:
            print(violation)
        return None
    return instance


def _write_document(model, path: Path) -> Path:
    return dump_json(model.model_dump(mode="json", exclude_none=True), path)


# ────────────────────────────────────────────────────────────────
# schedule
# ────────────────────────────────────────────────────────────────

def cmd_schedule(args: argparse.Namespace) -> int:
    instance = _load_valid(args.instance, args)
    if instance is None:
        return EXIT_INVALID
    rule_base = RuleBaseLoader(args.rules).load()

    schedule = run(instance, rule_base)
    ratio = _optimality_ratio(instance, schedule.makespan)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_document(schedule_document(instance, schedule, args.verbose), out / "schedule.json")
    _write_document(compute_metrics(instance, schedule, ratio), out / "metrics.json")
    if args.gantt == "svg":
        (out / "gantt.svg").write_text(gantt_svg(instance, schedule), encoding="utf-8")
    elif args.gantt == "txt":
        (out / "gantt.txt").write_text(gantt_txt(instance, schedule), encoding="utf-8")

    logger.success(f"Résultats écrits dans {out}/ (makespan {schedule.makespan:g})")
    return EXIT_OK


def _optimality_ratio(instance: Instance, makespan: float) -> float | None:
    """Ratio au makespan optimal, pour les petites instances nettes seulement."""
    if not instance.is_crisp() or len(instance.activities) > settings.brute_force_limit:
        return None
    optimal = brute_force(instance).makespan
    ratio = optimality_gap([makespan], [optimal])["ratios"][0]
    logger.info(f"Makespan optimal {optimal:g}, ratio {ratio:.3f}")
    return ratio


# ────────────────────────────────────────────────────────────────
# validate
# ────────────────────────────────────────────────────────────────

def cmd_validate(args: argparse.Namespace) -> int:
    instance = _load_valid(args.instance, args)
    if instance is None:
        return EXIT_INVALID
    logger.success(f"{args.instance} : instance valide.")
    return EXIT_OK


# ────────────────────────────────────────────────────────────────
# oracle
# ────────────────────────────────────────────────────────────────

def cmd_oracle(args: argparse.Namespace) -> int:
    rule_base = RuleBaseLoader(args.rules).load()
    reports: list[OracleInstanceReport] = []
    for path in args.instance:
        instance = _load_valid(path, args)
        if instance is None:
            return EXIT_INVALID
        reports.append(_oracle_report(Path(path), instance, rule_base, args.limit))

    measured = [r for r in reports if r.optimal_makespan is not None]
    gap = optimality_gap(
        [r.heuristic_makespan for r in measured],
        [r.optimal_makespan for r in measured],
    )
    report = OracleReport(instances=reports, median_ratio=gap["median_ratio"])

    out = Path(args.out)
    _write_document(report, out / "oracle.json")
    if gap["median_ratio"] is not None:
        logger.info(f"Ratio médian heuristique / optimum : {gap['median_ratio']:.3f}")
    logger.success(f"Rapport écrit dans {out / 'oracle.json'}")
    return EXIT_OK


def _oracle_report(
    path: Path,
    instance: Instance,
    rule_base: RuleBase,
    limit: int | None,
) -> OracleInstanceReport:
    cpm = cpm_backward(instance)
    arrangement = backward_pass(instance)
    cpm_matches = all(
        abs(defuzz_centroid(arrangement[aid].latest_start) - value) <= 1e-9
        for aid, value in cpm.items()
    )
    schedule = run(instance, rule_base)

    optimal = ratio = None
    limit = limit or settings.brute_force_limit
    if len(instance.activities) <= limit:
        optimal = brute_force(instance, limit=limit).makespan
        ratio = optimality_gap([schedule.makespan], [optimal])["ratios"][0]
    else:
        logger.warning(f"{path} : {len(instance.activities)} activités, oracle exhaustif ignoré.")

    edd = heuristic_lateness = None
    if len(instance.resources) == 1 and all(len(j.activity_ids) == 1 for j in instance.jobs):
        edd = edd_single_machine(instance).max_lateness
        heuristic_lateness = schedule_max_lateness(instance, schedule)

    return OracleInstanceReport(
        instance=str(path),
        cpm_matches=cpm_matches,
        heuristic_makespan=schedule.makespan,
        optimal_makespan=optimal,
        ratio=ratio,
        edd_max_lateness=edd,
        heuristic_max_lateness=heuristic_lateness,
    )


# ────────────────────────────────────────────────────────────────
# gen
# ────────────────────────────────────────────────────────────────

def cmd_gen(args: argparse.Namespace) -> int:
    instance = generate_instance(
        jobs=args.jobs,
        activities=args.activities,
        resources=args.resources,
        seed=args.seed,
        spread=args.spread,
        crisp=args.crisp,
    )
    document = instance_to_json(instance)
    if args.out:
        dump_json(document, args.out)
        logger.success(f"Instance générée : {args.out}")
    else:
        print(json.dumps(document, indent=2, sort_keys=True, ensure_ascii=False))
    return EXIT_OK
