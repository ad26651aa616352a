"""
src/scheduling/allocate.py
───────────────────────────
Allocation et boucle de planification glissante.

Une itération externe :
    sélection par fenêtre → priorisation des tâches
    → recommandations spécifiques → recommandations globales
    → engagement des allocations → avance de la fenêtre

Les activités allouées ne sont plus considérées ; les autres repassent
dans l'itération suivante jusqu'à ce que le planning soit complet.
"""

from __future__ import annotations

import math

from src.fuzzy.core import ZERO, add, defuzzify, fuzzy_max
from src.model.shop import Allocation, Instance, Schedule, unscheduled_activities
from src.scheduling.horizon import HorizonWindow, select
from src.scheduling.rating import RuleBase, prioritize_jobs
from src.scheduling.recommend import RecommendationSet, resource_comprehensive, resource_specific
from src.scheduling.retrograde import Arrangement, backward_pass, negative_latest_starts
from src.utils.errors import StallError
from src.utils.logger import logger


# ────────────────────────────────────────────────────────────────
# Engagement des recommandations
# ────────────────────────────────────────────────────────────────

def commit(
    recs: RecommendationSet,
    schedule: Schedule,
    instance: Instance,
    arrangement: Arrangement | None = None,
) -> Schedule:
    """
    Transforme les recommandations en allocations.

    Chaque ressource est parcourue dans l'ordre de sa liste. Une activité
    dont le prédécesseur n'est pas encore alloué est sautée ; les passes
    sont répétées tant qu'au moins une allocation est faite, de sorte
    qu'un prédécesseur engagé sur une autre ressource débloque son
    successeur dans la même itération.
    """
    pending = {rid: lst.allocatable for rid, lst in sorted(recs.lists.items())}
    progress = True
    while progress:
        progress = False
        for rid, entries in pending.items():
            remaining = []
            for entry in entries:
                aid = entry.activity_id
                if schedule.allocation_of(aid) is not None:
                    continue
                predecessor = instance.predecessor(aid)
                if predecessor is not None and schedule.allocation_of(predecessor) is None:
                    remaining.append(entry)
                    continue
                _allocate(aid, rid, schedule, instance, arrangement)
                progress = True
            pending[rid] = remaining
    return schedule


def _allocate(
    activity_id: str,
    resource_id: str,
    schedule: Schedule,
    instance: Instance,
    arrangement: Arrangement | None,
) -> None:
    method = instance.config.defuzzification
    ready = schedule.resource_ready.get(
        resource_id, instance.resource_by_id[resource_id].available_from
    )
    predecessor = instance.predecessor(activity_id)
    previous_finish = schedule.allocation_of(predecessor).fuzzy_finish if predecessor else ZERO

    start = fuzzy_max(ready, previous_finish)
    finish = add(start, instance.duration_on(activity_id, resource_id))
    allocation = Allocation(
        activity_id=activity_id,
        resource_id=resource_id,
        fuzzy_start=start,
        fuzzy_finish=finish,
        crisp_start=defuzzify(start, method),
        crisp_finish=defuzzify(finish, method),
    )
    schedule.record(allocation)

    if arrangement is not None and activity_id in arrangement:
        latest = defuzzify(arrangement[activity_id].latest_start, method)
        if allocation.crisp_start > latest + instance.config.comparison_epsilon:
            logger.warning(
                f"{activity_id} commence à {allocation.crisp_start:g} sur {resource_id}, "
                f"après son début au plus tard ({latest:g})."
            )


# ────────────────────────────────────────────────────────────────
# Boucle glissante
# ────────────────────────────────────────────────────────────────

def run(instance: Instance, rule_base: RuleBase) -> Schedule:
    """
    Construit le planning complet.

    Raises:
        StallError : plus aucune allocation possible alors que la fenêtre
                     a dépassé le plus grand début au plus tard + H
    """
    cfg = instance.config
    schedule = Schedule()
    if not instance.activities:
        logger.info("Instance vide : planning vide.")
        return schedule

    logger.info(
        f"Planification : {len(instance.jobs)} tâches, {len(instance.activities)} activités, "
        f"{len(instance.resources)} ressources (H={cfg.horizon:g}, pas={cfg.effective_step:g})"
    )

    # L'arrangement ne dépend pas des allocations : les fenêtres au plus tard
    # des activités restantes sont inchangées quand un préfixe de chaîne est alloué.
    arrangement = backward_pass(instance)
    schedule.iteration_log.append({
        "kind": "arrangement",
        "arrangement": arrangement.to_json(),
        "negative_latest_starts": negative_latest_starts(arrangement),
    })

    method = cfg.defuzzification
    latest = max(defuzzify(arrangement[aid].latest_start, method) for aid in arrangement) \
        if len(arrangement) else 0.0
    stall_limit = max(latest, 0.0) + cfg.horizon
    max_iterations = math.ceil(stall_limit / cfg.effective_step) + len(instance.activities) + 2

    window = HorizonWindow(0.0, cfg.horizon)
    iteration = 0
    while unscheduled_activities(instance, schedule):
        if iteration >= max_iterations:
            raise StallError(
                f"Plafond de {max_iterations} itérations atteint avec "
                f"{len(unscheduled_activities(instance, schedule))} activités non planifiées."
            )
        iteration += 1
        now = window.start
        selected = select(arrangement, window, schedule, instance)
        for aid in selected:
            schedule.first_selected.setdefault(aid, now)

        record = {
            "kind": "iteration",
            "iteration": iteration,
            "window": {"start": window.start, "length": window.length},
            "selected": selected,
            "priorities": {},
            "recommendations": None,
            "committed": [],
        }
        if selected:
            prioritized = prioritize_jobs(selected, instance, arrangement, schedule, rule_base, now)
            lists = resource_specific(prioritized, schedule, instance, rule_base, now, arrangement)
            recs = resource_comprehensive(lists, instance, cfg)
            before = len(schedule.allocations)
            commit(recs, schedule, instance, arrangement)
            record["priorities"] = {aid: score.to_json() for aid, score in prioritized}
            record["recommendations"] = recs.to_json()
            record["committed"] = [a.activity_id for a in schedule.allocations[before:]]
        schedule.iteration_log.append(record)

        logger.debug(
            f"Itération {iteration} : fenêtre [{window.start:g}, {window.end:g}), "
            f"{len(selected)} sélectionnées, {len(record['committed'])} allouées"
        )
        if not record["committed"] and window.start > stall_limit:
            blocked = sorted(unscheduled_activities(instance, schedule))
            raise StallError(
                f"Aucune allocation possible au-delà de t={stall_limit:g} ; "
                f"activités bloquées : {', '.join(blocked)}"
            )
        window = window.advance(cfg.effective_step)

    logger.success(
        f"Planning complet : {len(schedule.allocations)} allocations en {iteration} itérations, "
        f"makespan {schedule.makespan:g}"
    )
    return schedule
