"""
src/scheduling/horizon.py
──────────────────────────
Sélection par fenêtre temporelle glissante.

Seules les activités non planifiées dont le début au plus tard (défuzzifié)
tombe avant la fin de la fenêtre sont observées par les étapes suivantes.
La liste est ensuite complétée par tâches : toutes les activités non
planifiées des tâches touchées, et celles des tâches partiellement allouées
lors d'un passage précédent.
"""

from __future__ import annotations

from dataclasses import dataclass

from src.fuzzy.core import defuzzify
from src.model.shop import Instance, Schedule, unscheduled_activities
from src.scheduling.retrograde import Arrangement, relative_order
from src.utils.errors import SchedulerError


@dataclass(frozen=True)
class HorizonWindow:
    start: float
    length: float

    def __post_init__(self):
        if self.start < 0 or self.length <= 0:
            raise SchedulerError(f"Fenêtre invalide : début {self.start}, longueur {self.length}")

    @property
    def end(self) -> float:
        return self.start + self.length

    def advance(self, step: float) -> "HorizonWindow":
        return HorizonWindow(self.start + step, self.length)


def select(
    arrangement: Arrangement,
    window: HorizonWindow,
    schedule: Schedule,
    instance: Instance,
) -> list[str]:
    """
    Activités observées pour cette itération, dans l'ordre relatif.
    Une liste vide est légale : la fenêtre doit avancer.
    """
    method = instance.config.defuzzification
    order = relative_order(arrangement, instance)
    pending = unscheduled_activities(instance, schedule)
    picked = [
        aid for aid in order
        if aid in pending and defuzzify(arrangement[aid].latest_start, method) < window.end
    ]
    return extend_by_jobs(picked, schedule, instance, order)


def extend_by_jobs(
    selected: list[str],
    schedule: Schedule,
    instance: Instance,
    order: list[str] | None = None,
) -> list[str]:
    """
    Fermeture par tâches de la sélection (sans doublon), dans l'ordre `order`
    (par défaut : identifiant de tâche puis rang).
    """
    allocated = schedule.allocated_ids
    jobs = {instance.activity(aid).job_id for aid in selected}
    for job in instance.jobs:
        done = [aid in allocated for aid in job.activity_ids]
        if any(done) and not all(done):
            jobs.add(job.id)

    if order is None:
        order = [
            a.id for a in sorted(instance.activities, key=lambda a: (a.job_id, a.index_in_job))
        ]
    chosen = set(selected)
    result = [
        aid for aid in order
        if aid not in allocated and (aid in chosen or instance.activity(aid).job_id in jobs)
    ]
    # Activités sélectionnées absentes de `order` : conservées en fin de liste
    listed = set(result)
    result += [aid for aid in selected if aid not in listed and aid not in allocated]
    return list(dict.fromkeys(result))
