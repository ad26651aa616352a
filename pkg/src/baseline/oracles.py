"""
src/baseline/oracles.py
────────────────────────
Oracles indépendants et méthodes classiques de référence.

Ils rendent vérifiable le comportement de l'heuristique dans ses cas
dégénérés :
  - cpm_backward       : passe arrière classique (valeurs nettes)
  - brute_force        : makespan optimal par énumération exhaustive
  - edd_single_machine : ordre par échéance croissante, retard maximal
  - mamdani_oracle     : inférence Mamdani discrétisée (numpy)
  - optimality_gap     : ratio heuristique / optimum
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from joblib import Parallel, delayed

from config.settings import settings
from src.fuzzy.core import TriFuzzy, defuzzify
from src.model.shop import Instance, Schedule
from src.scheduling.rating import RuleBase
from src.utils.errors import FuzzyDomainError, OracleLimitError
from src.utils.logger import logger


def _require_crisp(instance: Instance, oracle: str) -> None:
    if not instance.is_crisp():
        raise FuzzyDomainError(f"{oracle} exige une instance aux valeurs nettes.")


# ────────────────────────────────────────────────────────────────
# Passe arrière classique
# ────────────────────────────────────────────────────────────────

def cpm_backward(instance: Instance) -> dict[str, float]:
    """
    Début au plus tard de chaque activité, chaîne par chaîne depuis l'échéance.
    La durée retenue est la plus courte parmi les ressources capables.
    Les marges négatives sont conservées.
    """
    _require_crisp(instance, "cpm_backward")
    latest: dict[str, float] = {}
    for job in instance.jobs:
        finish = job.due_date.m
        for aid in reversed(job.activity_ids):
            if aid not in instance.activity_by_id:
                continue
            capable = instance.capable_resources(aid)
            durations = [instance.duration_on(aid, r).m for r in capable] \
                or [instance.activity(aid).duration.m]
            finish = finish - min(durations)
            latest[aid] = finish
    return latest


# ────────────────────────────────────────────────────────────────
# Énumération exhaustive
# ────────────────────────────────────────────────────────────────

@dataclass
class OracleSchedule:
    """
    Meilleur ordonnancement trouvé.

    Attributes:
        makespan  : date de fin de la dernière activité
        decisions : séquence (activité, ressource) dans l'ordre d'insertion
        times     : (début, fin) de chaque activité
    """
    makespan: float
    decisions: list[tuple[str, str]] = field(default_factory=list)
    times: dict[str, tuple[float, float]] = field(default_factory=dict)


class _Timetable:
    """Ordonnancement semi-actif : chaque activité démarre dès que possible."""

    def __init__(self, instance: Instance):
        self.instance = instance
        self.ready = {r.id: r.available_from.m for r in instance.resources}
        self.job_ready = {j.id: 0.0 for j in instance.jobs}
        self.makespan = 0.0

    def place(self, aid: str, rid: str) -> tuple[float, float, tuple]:
        job_id = self.instance.activity(aid).job_id
        start = max(self.ready[rid], self.job_ready[job_id])
        finish = start + self.instance.duration_on(aid, rid).m
        saved = (self.ready[rid], self.job_ready[job_id], self.makespan)
        self.ready[rid] = finish
        self.job_ready[job_id] = finish
        self.makespan = max(self.makespan, finish)
        return start, finish, saved

    def undo(self, aid: str, rid: str, saved: tuple) -> None:
        job_id = self.instance.activity(aid).job_id
        self.ready[rid], self.job_ready[job_id], self.makespan = saved


def brute_force(
    instance: Instance,
    limit: int | None = None,
    method: str = "dfs",
    n_jobs: int | None = None,
) -> OracleSchedule:
    """
    Makespan optimal sur toutes les séquences compatibles avec les chaînes
    × toutes les affectations aux ressources capables.

    À makespan égal, la séquence de décisions lexicographiquement la plus
    petite est retenue, quel que soit le parallélisme.

    Args:
        limit  : nombre maximal d'activités (défaut : settings.brute_force_limit)
        method : "dfs" (profondeur d'abord avec coupe) ou "permutations"
                 (énumération directe des ordres, contrôle croisé)
        n_jobs : processus joblib pour "dfs" (défaut : settings.n_jobs)

    Raises:
        OracleLimitError : instance au-delà de la limite
        FuzzyDomainError : instance non nette
    """
    limit = limit or settings.brute_force_limit
    n_jobs = n_jobs or settings.n_jobs
    if len(instance.activities) > limit:
        raise OracleLimitError(
            f"{len(instance.activities)} activités : l'oracle exhaustif est limité à {limit}."
        )
    _require_crisp(instance, "brute_force")
    if not instance.activities:
        return OracleSchedule(0.0)

    if method == "permutations":
        best = _enumerate_permutations(instance)
    elif method == "dfs":
        best = _dfs_search(instance, n_jobs)
    else:
        raise ValueError(f"Méthode inconnue : {method!r} (attendu 'dfs' ou 'permutations')")

    logger.debug(f"Oracle exhaustif ({method}) : makespan optimal {best.makespan:g}")
    return best


def _chains(instance: Instance) -> dict[str, list[str]]:
    return {
        job.id: [aid for aid in job.activity_ids if aid in instance.activity_by_id]
        for job in sorted(instance.jobs, key=lambda j: j.id)
    }


def _branches(instance: Instance, chains: dict[str, list[str]], heads: dict[str, int]):
    """Décisions possibles : tête de chaque tâche × ressource capable, en ordre lexical."""
    options = []
    for job_id, chain in chains.items():
        if heads[job_id] < len(chain):
            aid = chain[heads[job_id]]
            options.extend((aid, rid) for rid in instance.capable_resources(aid))
    return sorted(options)


def _dfs_search(instance: Instance, n_jobs: int) -> OracleSchedule:
    chains = _chains(instance)
    heads = {job_id: 0 for job_id in chains}
    roots = _branches(instance, chains, heads)
    if n_jobs > 1 and len(roots) > 1:
        results = Parallel(n_jobs=n_jobs)(
            delayed(_dfs_from)(instance, [root]) for root in roots
        )
    else:
        results = [_dfs_from(instance, [root]) for root in roots]

    best = None
    for result in results:
        if result is not None and (best is None or result.makespan < best.makespan):
            best = result
    if best is None:
        raise OracleLimitError("Aucun ordonnancement complet : activité sans ressource capable.")
    return best


def _dfs_from(instance: Instance, prefix: list[tuple[str, str]]) -> OracleSchedule | None:
    """Meilleure complétion d'un préfixe de décisions (coupe sur le makespan partiel)."""
    chains = _chains(instance)
    heads = {job_id: 0 for job_id in chains}
    table = _Timetable(instance)
    total = sum(len(chain) for chain in chains.values())
    min_duration = {
        aid: min((instance.duration_on(aid, r).m for r in instance.capable_resources(aid)),
                 default=math.inf)
        for chain in chains.values() for aid in chain
    }

    decisions: list[tuple[str, str]] = []
    times: dict[str, tuple[float, float]] = {}
    best: OracleSchedule | None = None

    def lower_bound() -> float:
        bound = table.makespan
        for job_id, chain in chains.items():
            rest = sum(min_duration[aid] for aid in chain[heads[job_id]:])
            bound = max(bound, table.job_ready[job_id] + rest)
        return bound

    def push(aid: str, rid: str):
        start, finish, saved = table.place(aid, rid)
        heads[instance.activity(aid).job_id] += 1
        decisions.append((aid, rid))
        times[aid] = (start, finish)
        return saved

    def pop(aid: str, rid: str, saved) -> None:
        table.undo(aid, rid, saved)
        heads[instance.activity(aid).job_id] -= 1
        decisions.pop()
        del times[aid]

    def explore() -> None:
        nonlocal best
        if best is not None and lower_bound() >= best.makespan:
            return
        if len(decisions) == total:
            best = OracleSchedule(table.makespan, list(decisions), dict(times))
            return
        for aid, rid in _branches(instance, chains, heads):
            saved = push(aid, rid)
            explore()
            pop(aid, rid, saved)

    for aid, rid in prefix:
        push(aid, rid)
    explore()
    return best


def _enumerate_permutations(instance: Instance) -> OracleSchedule:
    chains = _chains(instance)
    activities = sorted(aid for chain in chains.values() for aid in chain)
    position = {aid: i for chain in chains.values() for i, aid in enumerate(chain)}
    capable = [instance.capable_resources(aid) for aid in activities]

    best: OracleSchedule | None = None
    for order in itertools.permutations(range(len(activities))):
        # Ordre compatible avec les chaînes uniquement
        seen: dict[str, int] = {}
        valid = True
        for i in order:
            job_id = instance.activity(activities[i]).job_id
            if position[activities[i]] != seen.get(job_id, 0):
                valid = False
                break
            seen[job_id] = position[activities[i]] + 1
        if not valid:
            continue
        for assignment in itertools.product(*(capable[i] for i in order)):
            table = _Timetable(instance)
            times = {}
            for i, rid in zip(order, assignment):
                start, finish, _ = table.place(activities[i], rid)
                times[activities[i]] = (start, finish)
            decisions = [(activities[i], rid) for i, rid in zip(order, assignment)]
            if best is None or table.makespan < best.makespan or (
                table.makespan == best.makespan and decisions < best.decisions
            ):
                best = OracleSchedule(table.makespan, decisions, times)
    if best is None:
        raise OracleLimitError("Aucun ordonnancement complet : activité sans ressource capable.")
    return best


# ────────────────────────────────────────────────────────────────
# Machine unique : échéance la plus proche d'abord
# ────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class EddResult:
    sequence: list[str]
    max_lateness: float


def edd_single_machine(instance: Instance) -> EddResult:
    """
    Séquence par échéance croissante (tri stable : ordre d'entrée à égalité)
    et retard maximal correspondant.

    Raises:
        FuzzyDomainError : plus d'une ressource, tâche à plusieurs activités,
                           ou valeurs non nettes
    """
    _require_crisp(instance, "edd_single_machine")
    if len(instance.resources) != 1:
        raise FuzzyDomainError("edd_single_machine exige exactement une ressource.")
    if any(len(job.activity_ids) != 1 for job in instance.jobs):
        raise FuzzyDomainError("edd_single_machine exige une seule activité par tâche.")

    resource = instance.resources[0]
    jobs = sorted(instance.jobs, key=lambda j: j.due_date.m)
    clock = resource.available_from.m
    sequence, lateness = [], []
    for job in jobs:
        aid = job.activity_ids[0]
        clock += instance.duration_on(aid, resource.id).m
        sequence.append(aid)
        lateness.append(clock - job.due_date.m)
    return EddResult(sequence, max(lateness, default=0.0))


def schedule_max_lateness(instance: Instance, schedule: Schedule) -> float:
    """Plus grand (fin de la dernière activité − échéance défuzzifiée) parmi les tâches."""
    method = instance.config.defuzzification

    values = []
    for job in instance.jobs:
        finishes = [schedule.allocation_of(aid).crisp_finish for aid in job.activity_ids
                    if schedule.allocation_of(aid) is not None]
        if finishes:
            values.append(max(finishes) - defuzzify(job.due_date, method))
    return max(values, default=0.0)


# ────────────────────────────────────────────────────────────────
# Inférence Mamdani discrétisée
# ────────────────────────────────────────────────────────────────

def _tri_membership(x: np.ndarray | float, term: TriFuzzy) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    left = np.ones_like(x) if term.m == term.a else (x - term.a) / (term.m - term.a)
    right = np.ones_like(x) if term.b == term.m else (term.b - x) / (term.b - term.m)
    mu = np.where(x <= term.m, left, right)
    mu = np.where((x < term.a) | (x > term.b), 0.0, mu)
    return np.clip(mu, 0.0, 1.0)


def mamdani_oracle(
    rule_base: RuleBase,
    inputs: dict[str, float],
    step: float | None = None,
) -> float:
    """
    Centroïde de l'agrégat max-min calculé sur une grille régulière de
    [0, 1] (pas `step`). Les conclusions ponctuelles ne sont prises en
    compte que si aucun terme étalé n'est déclenché.

    Returns:
        float : centroïde, 0.0 si aucune règle ne se déclenche
    """
    step = step or settings.oracle_grid_step
    grid = np.linspace(0.0, 1.0, int(round(1.0 / step)) + 1)

    strengths: dict[str, float] = {}
    for rule in rule_base.rules:
        levels = []
        for var, term in rule.antecedents:
            variable = rule_base.variables[var]
            lo, hi = variable.domain
            value = float(np.clip(inputs[var], lo, hi))
            levels.append(float(_tri_membership(value, variable.terms[term])))
        s = min(levels) * rule.weight
        name = rule.consequent[1]
        if s > 0:
            strengths[name] = max(strengths.get(name, 0.0), s)
    if not strengths:
        return 0.0

    terms = rule_base.output_variable.terms
    spread = {name: s for name, s in strengths.items() if not terms[name].is_crisp}
    if not spread:
        total = sum(strengths.values())
        return sum(terms[name].m * s for name, s in strengths.items()) / total

    aggregate = np.zeros_like(grid)
    for name, s in spread.items():
        aggregate = np.maximum(aggregate, np.minimum(_tri_membership(grid, terms[name]), s))
    area = np.trapezoid(aggregate, grid)
    if area <= 0:
        return 0.0
    return float(np.trapezoid(aggregate * grid, grid) / area)


# ────────────────────────────────────────────────────────────────
# Écart à l'optimum
# ────────────────────────────────────────────────────────────────

def optimality_gap(heuristic_makespans: list[float], optimal_makespans: list[float]) -> dict:
    """Ratios heuristique / optimum par instance et leur médiane (ratio 1 si optimum nul)."""
    ratios = [
        h / o if o > 0 else 1.0
        for h, o in zip(heuristic_makespans, optimal_makespans)
    ]
    return {
        "ratios": ratios,
        "median_ratio": float(np.median(ratios)) if ratios else None,
    }
