"""
src/scheduling/retrograde.py
─────────────────────────────
Arrangement temporel relatif approximatif par planification rétrograde floue.

Partant de l'échéance de chaque tâche, on remonte la chaîne technologique :
    fin au plus tard (dernière activité) = échéance
    début au plus tard                   = fin au plus tard ⊖ durée
    fin au plus tard (prédécesseur)      = début au plus tard (successeur)

La capacité des ressources est ignorée ici : elle n'est respectée qu'à
l'allocation. Les débuts au plus tard négatifs (échéance intenable) sont
conservés tels quels et signalés.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cmp_to_key
from typing import Iterator

from src.fuzzy.core import TriFuzzy, compare, defuzz_centroid, sub
from src.model.shop import Instance
from src.utils.logger import logger


@dataclass(frozen=True)
class LatestTimes:
    latest_finish: TriFuzzy
    latest_start: TriFuzzy


class Arrangement:
    """Fenêtres floues au plus tard, une par activité."""

    def __init__(self, windows: dict[str, LatestTimes] | None = None):
        self._windows: dict[str, LatestTimes] = dict(windows or {})

    def __getitem__(self, activity_id: str) -> LatestTimes:
        return self._windows[activity_id]

    def __contains__(self, activity_id: object) -> bool:
        return activity_id in self._windows

    def __iter__(self) -> Iterator[str]:
        return iter(self._windows)

    def __len__(self) -> int:
        return len(self._windows)

    def items(self):
        return self._windows.items()

    def to_json(self) -> dict:
        return {
            aid: {
                "latest_finish": w.latest_finish.to_json(),
                "latest_start": w.latest_start.to_json(),
            }
            for aid, w in sorted(self._windows.items())
        }


def effective_duration(instance: Instance, activity_id: str) -> TriFuzzy:
    """
    Durée utilisée par la passe rétrograde : la plus courte (au sens de
    compare) parmi les ressources capables, ou la durée par défaut.
    """
    eps = instance.config.comparison_epsilon
    capable = instance.capable_resources(activity_id)
    if not capable:
        return instance.activity(activity_id).duration
    durations = [instance.duration_on(activity_id, rid) for rid in capable]
    return min(durations, key=cmp_to_key(lambda x, y: compare(x, y, eps)))


def backward_pass(instance: Instance) -> Arrangement:
    """Passe arrière floue sur chaque chaîne de tâche, depuis son échéance."""
    windows: dict[str, LatestTimes] = {}
    for job in instance.jobs:
        latest_finish = job.due_date
        for aid in reversed(job.activity_ids):
            if aid not in instance.activity_by_id:
                continue
            latest_start = sub(latest_finish, effective_duration(instance, aid))
            windows[aid] = LatestTimes(latest_finish, latest_start)
            latest_finish = latest_start

    arrangement = Arrangement(windows)
    late = negative_latest_starts(arrangement)
    if late:
        logger.warning(
            f"{len(late)} activité(s) avec un début au plus tard négatif "
            f"(échéance intenable) : {', '.join(late)}"
        )
    logger.debug(f"Arrangement rétrograde calculé pour {len(arrangement)} activités.")
    return arrangement


def relative_order(arrangement: Arrangement, instance: Instance) -> list[str]:
    """
    Activités triées par début au plus tard croissant (compare),
    puis par identifiant de tâche et rang dans la tâche.
    """
    eps = instance.config.comparison_epsilon

    def cmp(x: str, y: str) -> int:
        order = compare(arrangement[x].latest_start, arrangement[y].latest_start, eps)
        if order:
            return order
        ax, ay = instance.activity(x), instance.activity(y)
        kx, ky = (ax.job_id, ax.index_in_job), (ay.job_id, ay.index_in_job)
        return (kx > ky) - (kx < ky)

    return sorted(arrangement, key=cmp_to_key(cmp))


def negative_latest_starts(arrangement: Arrangement) -> list[str]:
    return sorted(aid for aid, w in arrangement.items() if defuzz_centroid(w.latest_start) < 0)
