"""
src/data/generator.py
──────────────────────
Génération d'instances aléatoires reproductibles (numpy default_rng).

Utilisé par la sous-commande `gen` et par les suites de tests :
même graine → même instance, octet pour octet une fois sérialisée.
"""

import numpy as np

from src.fuzzy.core import TriFuzzy
from src.model.shop import Activity, Instance, Job, Resource, SchedulerConfig


def _fuzzify(rng: np.random.Generator, center: float, spread: float) -> TriFuzzy:
    """Triangle autour de `center`, étalements tirés dans [0, spread·center]."""
    if spread <= 0:
        return TriFuzzy.crisp(round(center, 2))
    left, right = rng.uniform(0.0, spread * center, size=2)
    return TriFuzzy(round(max(center - left, 0.0), 2), round(center, 2), round(center + right, 2))


def generate_instance(
    jobs: int,
    activities: int,
    resources: int,
    seed: int,
    spread: float = 0.2,
    crisp: bool = False,
    variable_length: bool = False,
    equal_durations: bool = False,
    max_capable: int = 3,
    config: SchedulerConfig | None = None,
) -> Instance:
    """
    Instance aléatoire.

    Args:
        jobs            : nombre de tâches
        activities      : activités par tâche (maximum si variable_length)
        resources       : nombre de ressources
        seed            : graine du générateur
        spread          : facteur d'étalement flou (0 → valeurs nettes)
        crisp           : force des valeurs nettes
        variable_length : longueur de chaque tâche tirée dans [1, activities]
        equal_durations : toutes les durées égales (ordres au plus tard = ordres d'échéance)
        max_capable     : taille maximale des ensembles de ressources capables
    """
    rng = np.random.default_rng(seed)
    spread = 0.0 if crisp else spread
    config = (config or SchedulerConfig()).with_overrides(seed=seed)
    resource_ids = [f"R{k + 1}" for k in range(resources)]
    base_duration = float(rng.integers(1, 10))

    job_list, activity_list = [], []
    for j in range(jobs):
        job_id = f"J{j + 1:02d}"
        length = int(rng.integers(1, activities + 1)) if variable_length else activities
        ids, total = [], 0.0
        for k in range(length):
            activity_id = f"{job_id}-A{k + 1}"
            center = base_duration if equal_durations else float(rng.integers(1, 10))
            size = int(rng.integers(1, min(max_capable, resources) + 1))
            capable = sorted(rng.choice(resource_ids, size=size, replace=False).tolist())
            overrides = {}
            if not equal_durations:
                for rid in capable:
                    if rng.random() < 0.3:
                        overrides[rid] = _fuzzify(rng, float(rng.integers(1, 10)), spread)
            activity_list.append(Activity(
                id=activity_id,
                job_id=job_id,
                index_in_job=k,
                duration=_fuzzify(rng, center, spread),
                capable_resources=frozenset(capable),
                durations_by_resource=overrides,
            ))
            ids.append(activity_id)
            total += center
        due = total * float(rng.uniform(1.0, 2.5)) + float(rng.integers(0, 10))
        job_list.append(Job(
            id=job_id,
            activity_ids=tuple(ids),
            due_date=_fuzzify(rng, due, spread),
            importance=round(float(rng.uniform(0.0, 1.0)), 2),
        ))

    resource_list = [
        Resource(rid, TriFuzzy.crisp(0.0), round(float(rng.uniform(0.0, 1.0)), 2))
        for rid in resource_ids
    ]
    return Instance(
        jobs=tuple(job_list),
        activities=tuple(activity_list),
        resources=tuple(resource_list),
        config=config,
    )
