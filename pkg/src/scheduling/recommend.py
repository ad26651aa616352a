"""
src/scheduling/recommend.py
────────────────────────────
Recommandations d'allocation.

  1. resource_specific : une liste ordonnée par ressource. Une activité
     figure dans la liste de chaque ressource capable, avec un score
     propre à cette ressource. Les activités récemment allouées sur la
     ressource (fenêtre de recouvrement) y figurent comme contexte non
     allouable.
  2. resource_comprehensive : suppression des doublons (chaque activité
     n'est retenue que sur une ressource) par un processus de notation
     itéré jusqu'à stabilité, avec une pénalité d'équilibrage de charge,
     puis troncature à la capacité de la fenêtre de chaque ressource.

Aucune allocation n'est engagée ici.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cmp_to_key

from src.fuzzy.core import ZERO, TriFuzzy, compare, defuzz_centroid, shift
from src.model.shop import Instance, SchedulerConfig, Schedule
from src.scheduling.rating import RuleBase, compute_criteria, infer, priority_tiers
from src.scheduling.retrograde import Arrangement
from src.utils.logger import logger


# ────────────────────────────────────────────────────────────────
# Types
# ────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class RecommendationEntry:
    """
    Attributes:
        activity_id : activité recommandée
        score       : score spécifique à la ressource
        job_score   : score de niveau tâche (ordre partiel d'origine)
        allocatable : False pour les activités de contexte déjà allouées
    """
    activity_id: str
    score: TriFuzzy
    job_score: TriFuzzy = ZERO
    allocatable: bool = True


@dataclass
class ResourceList:
    resource_id: str
    entries: list[RecommendationEntry] = field(default_factory=list)

    @property
    def allocatable(self) -> list[RecommendationEntry]:
        return [e for e in self.entries if e.allocatable]

    @property
    def activity_ids(self) -> list[str]:
        return [e.activity_id for e in self.entries if e.allocatable]


@dataclass
class RecommendationSet:
    lists: dict[str, ResourceList]
    iteration_count: int = 0
    converged: bool = True

    def to_json(self) -> dict:
        return {
            "iteration_count": self.iteration_count,
            "converged": self.converged,
            "lists": {rid: lst.activity_ids for rid, lst in sorted(self.lists.items())},
        }


# ────────────────────────────────────────────────────────────────
# Recommandations spécifiques aux ressources
# ────────────────────────────────────────────────────────────────

def resource_specific(
    prioritized: list[tuple[str, TriFuzzy]],
    schedule: Schedule,
    instance: Instance,
    rule_base: RuleBase,
    now: float,
    arrangement: Arrangement,
) -> dict[str, ResourceList]:
    """
    Une liste par ressource. Ordre : palier de l'ordre partiel des tâches,
    puis score spécifique décroissant ; le tri est stable.
    """
    cfg = instance.config
    eps = cfg.comparison_epsilon
    tiers = priority_tiers(prioritized, eps)
    resource_rules = rule_base.for_stage("resource")
    recent_from = now - cfg.effective_overlap

    lists: dict[str, ResourceList] = {}
    for resource in sorted(instance.resources, key=lambda r: r.id):
        rid = resource.id
        context = [
            RecommendationEntry(a.activity_id, ZERO, ZERO, allocatable=False)
            for a in schedule.allocations
            if a.resource_id == rid and a.crisp_start <= now and a.crisp_finish >= recent_from
        ]
        scored = []
        for aid, job_score in prioritized:
            if rid not in instance.capable_resources(aid):
                continue
            criteria = compute_criteria(aid, instance, arrangement, schedule, now, resource_id=rid)
            scored.append(RecommendationEntry(aid, infer(resource_rules, criteria.as_inputs()), job_score))

        def cmp(x: RecommendationEntry, y: RecommendationEntry) -> int:
            return (tiers[x.activity_id] - tiers[y.activity_id]) or compare(y.score, x.score, eps)

        lists[rid] = ResourceList(rid, context + sorted(scored, key=cmp_to_key(cmp)))
    return lists


# ────────────────────────────────────────────────────────────────
# Recommandations globales
# ────────────────────────────────────────────────────────────────

def resource_comprehensive(
    lists: dict[str, ResourceList],
    instance: Instance,
    config: SchedulerConfig | None = None,
) -> RecommendationSet:
    """
    Affecte chaque activité à une seule ressource puis tronque les listes.

    Chaque passe réévalue les activités une à une : score effectif =
    centroïde du score − λ·(charge projetée / charge moyenne − 1).
    Égalité (compare) → charge la plus faible → identifiant le plus petit.
    Arrêt : affectation inchangée, variation maximale des scores effectifs
    ≤ epsilon de signification, ou plafond d'itérations.
    """
    cfg = config or instance.config
    eps = cfg.comparison_epsilon
    resources = sorted(lists)
    if not resources:
        return RecommendationSet({}, 0, True)

    base: dict[str, dict[str, TriFuzzy]] = {}
    job_score: dict[str, TriFuzzy] = {}
    duration: dict[tuple[str, str], float] = {}
    context_load = {rid: 0.0 for rid in resources}
    for rid in resources:
        for entry in lists[rid].entries:
            d = defuzz_centroid(instance.duration_on(entry.activity_id, rid))
            if not entry.allocatable:
                context_load[rid] += d
                continue
            base.setdefault(entry.activity_id, {})[rid] = entry.score
            job_score.setdefault(entry.activity_id, entry.job_score)
            duration[(entry.activity_id, rid)] = d

    # Activités traitées par score de tâche décroissant (ordre d'apparition sinon)
    order = sorted(base, key=cmp_to_key(lambda x, y: compare(job_score[y], job_score[x], eps)))

    loads = dict(context_load)
    assignment: dict[str, str] = {}
    previous: dict[str, float] = {}
    iteration = 0
    converged = not order
    while order and iteration < cfg.max_fixpoint_iters:
        iteration += 1
        changed = False
        current: dict[str, float] = {}
        for aid in order:
            held = assignment.get(aid)
            if held is not None:
                loads[held] -= duration[(aid, held)]
            best, best_score = None, None
            for rid in sorted(base[aid]):
                projected = loads[rid] + duration[(aid, rid)]
                mean = (sum(loads.values()) + duration[(aid, rid)]) / len(resources)
                adjust = -cfg.load_lambda * (projected / mean - 1) if mean > 0 else 0.0
                score = shift(base[aid][rid], adjust)
                if best is None:
                    best, best_score = rid, score
                    continue
                verdict = compare(score, best_score, eps)
                if verdict > 0 or (verdict == 0 and loads[rid] < loads[best]):
                    best, best_score = rid, score
            assignment[aid] = best
            loads[best] += duration[(aid, best)]
            current[aid] = defuzz_centroid(best_score)
            changed |= best != held
        if iteration > 1:
            delta = max(abs(current[a] - previous[a]) for a in order)
            if not changed or delta <= cfg.significance_epsilon:
                converged = True
                break
        previous = current

    if not converged:
        logger.warning(
            f"Point fixe non atteint après {iteration} itérations "
            f"({len(order)} activités, {len(resources)} ressources)."
        )

    return RecommendationSet(
        lists=_truncate(lists, assignment, instance, cfg),
        iteration_count=iteration,
        converged=converged,
    )


def _truncate(
    lists: dict[str, ResourceList],
    assignment: dict[str, str],
    instance: Instance,
    cfg: SchedulerConfig,
) -> dict[str, ResourceList]:
    """
    Garde le préfixe dont la durée cumulée tient dans la fenêtre H
    (au moins une entrée). Si ce préfixe ne contient aucune activité
    prête (prédécesseur hors de l'affectation), il est prolongé jusqu'à
    la première activité prête.
    """
    assigned = set(assignment)

    def ready(aid: str) -> bool:
        return instance.predecessor(aid) not in assigned

    result: dict[str, ResourceList] = {}
    for rid, lst in sorted(lists.items()):
        context = [e for e in lst.entries if not e.allocatable]
        ordered = [e for e in lst.allocatable if assignment.get(e.activity_id) == rid]
        kept: list[RecommendationEntry] = []
        used = 0.0
        for entry in ordered:
            d = defuzz_centroid(instance.duration_on(entry.activity_id, rid))
            if kept and used + d > cfg.horizon:
                break
            kept.append(entry)
            used += d
        if not any(ready(e.activity_id) for e in kept):
            first = next((i for i, e in enumerate(ordered) if ready(e.activity_id)), None)
            if first is not None:
                kept = ordered[:first + 1]
        result[rid] = ResourceList(rid, context + kept)
    return result
