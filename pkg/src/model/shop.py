"""
src/model/shop.py
──────────────────
Modèle de l'atelier : tâches (jobs) formées de chaînes ordonnées
d'activités, ressources allouables, configuration de la planification
et planning construit pas à pas.

Responsabilités :
  - Définir les types immuables de l'instance (Activity, Job, Resource, Instance)
  - Porter la configuration résolue (SchedulerConfig)
  - Porter l'état mutable du planning (Schedule), modifié uniquement
    par la boucle d'allocation
  - Vérifier les invariants d'une instance (validate)
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property

from config.settings import settings
from src.fuzzy.core import DefuzzMethod, TriFuzzy, defuzz_centroid


# ────────────────────────────────────────────────────────────────
# Configuration résolue
# ────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class SchedulerConfig:
    """
    Paramètres de planification d'une instance.
    Les valeurs par défaut proviennent de config/settings.py.
    """
    horizon: float = settings.horizon_length
    step: float | None = settings.horizon_step
    significance_epsilon: float = settings.significance_epsilon
    max_fixpoint_iters: int = settings.max_fixpoint_iters
    comparison_epsilon: float = settings.comparison_epsilon
    seed: int = settings.random_state
    load_lambda: float = settings.load_lambda
    overlap: float | None = settings.overlap_window
    defuzzification: DefuzzMethod = settings.defuzzification

    @property
    def effective_step(self) -> float:
        return self.step if self.step is not None else self.horizon / 2

    @property
    def effective_overlap(self) -> float:
        return self.overlap if self.overlap is not None else self.horizon / 2

    def with_overrides(self, **overrides) -> "SchedulerConfig":
        """Copie avec les valeurs non nulles de `overrides`."""
        kept = {k: v for k, v in overrides.items() if v is not None}
        return replace(self, **kept)


# ────────────────────────────────────────────────────────────────
# Entités de l'instance
# ────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class Activity:
    """
    Unité de travail atomique, allouée à une seule ressource.

    Attributes:
        id                    : identifiant unique
        job_id                : tâche propriétaire
        index_in_job          : rang dans la séquence technologique (≥ 0)
        duration              : durée floue par défaut
        capable_resources     : ressources capables de l'exécuter
        durations_by_resource : durées spécifiques à certaines ressources
    """
    id: str
    job_id: str
    index_in_job: int
    duration: TriFuzzy
    capable_resources: frozenset[str]
    durations_by_resource: dict[str, TriFuzzy] = field(default_factory=dict, hash=False)


@dataclass(frozen=True)
class Job:
    """Séquence ordonnée d'activités avec ses conditions (échéance, importance)."""
    id: str
    activity_ids: tuple[str, ...]
    due_date: TriFuzzy
    importance: float = 0.5


@dataclass(frozen=True)
class Resource:
    """Objet allouable (machine, poste) traitant une activité à la fois."""
    id: str
    available_from: TriFuzzy = TriFuzzy(0.0, 0.0, 0.0)
    strategic_weight: float = 0.5


@dataclass(frozen=True)
class Instance:
    """Instance complète, immuable après chargement."""
    jobs: tuple[Job, ...] = ()
    activities: tuple[Activity, ...] = ()
    resources: tuple[Resource, ...] = ()
    config: SchedulerConfig = field(default_factory=SchedulerConfig)

    # ── Index (calculés une fois) ──────────────────────────────
    @cached_property
    def activity_by_id(self) -> dict[str, Activity]:
        return {a.id: a for a in self.activities}

    @cached_property
    def job_by_id(self) -> dict[str, Job]:
        return {j.id: j for j in self.jobs}

    @cached_property
    def resource_by_id(self) -> dict[str, Resource]:
        return {r.id: r for r in self.resources}

    def activity(self, activity_id: str) -> Activity:
        return self.activity_by_id[activity_id]

    def job_of(self, activity_id: str) -> Job:
        return self.job_by_id[self.activity_by_id[activity_id].job_id]

    def predecessor(self, activity_id: str) -> str | None:
        """Activité précédente dans la chaîne de la tâche, None pour la première."""
        job = self.job_of(activity_id)
        position = job.activity_ids.index(activity_id)
        return job.activity_ids[position - 1] if position > 0 else None

    def duration_on(self, activity_id: str, resource_id: str) -> TriFuzzy:
        activity = self.activity_by_id[activity_id]
        return activity.durations_by_resource.get(resource_id, activity.duration)

    def capable_resources(self, activity_id: str) -> list[str]:
        """Ressources capables, existantes, triées par identifiant."""
        activity = self.activity_by_id[activity_id]
        return sorted(r for r in activity.capable_resources if r in self.resource_by_id)

    def is_crisp(self) -> bool:
        values = [j.due_date for j in self.jobs] + [r.available_from for r in self.resources]
        for a in self.activities:
            values.append(a.duration)
            values.extend(a.durations_by_resource.values())
        return all(v.is_crisp for v in values)


# ────────────────────────────────────────────────────────────────
# Planning
# ────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class Allocation:
    """Allocation engagée : temps flous et leur projection nette."""
    activity_id: str
    resource_id: str
    fuzzy_start: TriFuzzy
    fuzzy_finish: TriFuzzy
    crisp_start: float
    crisp_finish: float


@dataclass
class Schedule:
    """
    Planning construit de manière incrémentale par la boucle glissante.

    Attributes:
        allocations    : allocations dans l'ordre d'engagement
        iteration_log  : un enregistrement par itération externe
        first_selected : date de première sélection de chaque activité
        resource_ready : disponibilité floue courante de chaque ressource
    """
    allocations: list[Allocation] = field(default_factory=list)
    iteration_log: list[dict] = field(default_factory=list)
    first_selected: dict[str, float] = field(default_factory=dict)
    resource_ready: dict[str, TriFuzzy] = field(default_factory=dict)
    _by_activity: dict[str, Allocation] = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        for allocation in self.allocations:
            self._by_activity.setdefault(allocation.activity_id, allocation)

    def record(self, allocation: Allocation) -> None:
        """Ajoute une allocation ; une activité n'est allouée qu'une fois."""
        if allocation.activity_id in self._by_activity:
            raise ValueError(f"Activité déjà allouée : {allocation.activity_id}")
        self.allocations.append(allocation)
        self._by_activity[allocation.activity_id] = allocation
        self.resource_ready[allocation.resource_id] = allocation.fuzzy_finish

    @property
    def allocated_ids(self) -> set[str]:
        return set(self._by_activity)

    def allocation_of(self, activity_id: str) -> Allocation | None:
        return self._by_activity.get(activity_id)

    @property
    def makespan(self) -> float:
        return max((a.crisp_finish for a in self.allocations), default=0.0)

    def to_records(self) -> list[dict]:
        """Une ligne par allocation (utilisé pour les métriques)."""
        return [
            {
                "activity_id": a.activity_id,
                "resource_id": a.resource_id,
                "crisp_start": a.crisp_start,
                "crisp_finish": a.crisp_finish,
            }
            for a in self.allocations
        ]


# ────────────────────────────────────────────────────────────────
# Validation
# ────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class Violation:
    """Invariant non respecté : entité fautive et règle concernée."""
    entity: str
    rule: str
    message: str

    def __str__(self) -> str:
        return f"[{self.rule}] {self.entity} : {self.message}"


def validate(instance: Instance) -> list[Violation]:
    """
    Vérifie tous les invariants de l'instance.
    Les violations sont des données : aucune exception n'est levée.
    """
    violations: list[Violation] = []

    def report(entity: str, rule: str, message: str) -> None:
        violations.append(Violation(entity, rule, message))

    # 1. Unicité des identifiants
    for kind, items in (("activity", instance.activities), ("job", instance.jobs),
                        ("resource", instance.resources)):
        seen: set[str] = set()
        for item in items:
            if item.id in seen:
                report(item.id, "duplicate-id", f"identifiant de {kind} dupliqué")
            seen.add(item.id)

    activities = instance.activity_by_id
    jobs = instance.job_by_id
    resources = instance.resource_by_id

    # 2. Activités
    positions: set[tuple[str, int]] = set()
    for act in instance.activities:
        if act.duration.a < 0:
            report(act.id, "negative-duration", f"durée {act.duration} avec a < 0")
        for rid, duration in act.durations_by_resource.items():
            if duration.a < 0:
                report(act.id, "negative-duration", f"durée sur {rid} avec a < 0")
            if rid not in act.capable_resources:
                report(act.id, "override-not-capable",
                       f"durée spécifique pour {rid}, ressource non capable")
        if not act.capable_resources:
            report(act.id, "no-capable-resource", "ensemble de ressources capables vide")
        for rid in sorted(act.capable_resources):
            if rid not in resources:
                report(act.id, "dangling-resource", f"ressource inconnue {rid!r}")
        if act.job_id not in jobs:
            report(act.id, "dangling-job", f"tâche inconnue {act.job_id!r}")
        if act.index_in_job < 0:
            report(act.id, "ordering", f"index_in_job négatif ({act.index_in_job})")
        key = (act.job_id, act.index_in_job)
        if key in positions:
            report(act.id, "ordering",
                   f"index_in_job {act.index_in_job} dupliqué dans {act.job_id}")
        positions.add(key)

    # 3. Tâches : chaîne totale cohérente avec les index
    listed: set[str] = set()
    for job in instance.jobs:
        if not job.activity_ids:
            report(job.id, "empty-job", "aucune activité")
        if job.due_date.a < 0:
            report(job.id, "negative-due-date", f"échéance {job.due_date} avec a < 0")
        if not 0.0 <= job.importance <= 1.0:
            report(job.id, "importance-range", f"importance {job.importance} hors [0, 1]")
        previous_index = None
        for aid in job.activity_ids:
            act = activities.get(aid)
            if act is None:
                report(job.id, "dangling-activity", f"activité inconnue {aid!r}")
                continue
            if aid in listed:
                report(job.id, "ordering", f"activité {aid} listée plusieurs fois")
            listed.add(aid)
            if act.job_id != job.id:
                report(job.id, "job-mismatch", f"{aid} appartient à {act.job_id!r}")
            if previous_index is not None and act.index_in_job <= previous_index:
                report(job.id, "ordering", f"{aid} hors de l'ordre des index")
            previous_index = act.index_in_job
    for act in instance.activities:
        if act.id not in listed and act.job_id in jobs:
            report(act.id, "orphan-activity", f"absente de la liste de {act.job_id}")

    # 4. Ressources
    for res in instance.resources:
        if res.available_from.a < 0:
            report(res.id, "negative-availability", f"disponibilité {res.available_from}")
        if not 0.0 <= res.strategic_weight <= 1.0:
            report(res.id, "weight-range", f"poids stratégique {res.strategic_weight} hors [0, 1]")

    # 5. Configuration
    cfg = instance.config
    if cfg.horizon <= 0:
        report("config", "config-range", "horizon doit être > 0")
    if cfg.step is not None and cfg.step <= 0:
        report("config", "config-range", "step doit être > 0")
    if cfg.significance_epsilon < 0 or cfg.comparison_epsilon < 0:
        report("config", "config-range", "les epsilons doivent être ≥ 0")
    if cfg.max_fixpoint_iters < 1:
        report("config", "config-range", "max_fixpoint_iters doit être ≥ 1")

    return violations


def unscheduled_activities(instance: Instance, schedule: Schedule) -> set[str]:
    """Activités sans enregistrement d'allocation."""
    return set(instance.activity_by_id) - schedule.allocated_ids


def crisp_duration(instance: Instance, activity_id: str, resource_id: str) -> float:
    return defuzz_centroid(instance.duration_on(activity_id, resource_id))
