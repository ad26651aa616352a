"""
tests/factories.py
───────────────────
Constructeurs compacts d'instances et de bases de règles pour les tests.
"""

from src.fuzzy.core import TriFuzzy
from src.model.shop import Activity, Instance, Job, Resource, SchedulerConfig
from src.scheduling.rating import LinguisticVariable, Rule, RuleBase


def tf(value) -> TriFuzzy:
    return TriFuzzy.from_json(value)


def job(job_id, due, *activities, importance=0.5):
    """
    Une tâche et ses activités ; chaque activité est
    (durée, [ressources]) ou (durée, [ressources], {ressource: durée}).
    """
    acts = []
    for k, spec in enumerate(activities):
        duration, capable, *rest = spec
        overrides = {r: tf(d) for r, d in (rest[0] if rest else {}).items()}
        acts.append(Activity(
            id=f"{job_id}-A{k + 1}",
            job_id=job_id,
            index_in_job=k,
            duration=tf(duration),
            capable_resources=frozenset(capable),
            durations_by_resource=overrides,
        ))
    return Job(job_id, tuple(a.id for a in acts), tf(due), importance), acts


def resource(rid, available=0.0, weight=0.5) -> Resource:
    return Resource(rid, tf(available), weight)


def build(jobs, resources, **config) -> Instance:
    return Instance(
        jobs=tuple(j for j, _ in jobs),
        activities=tuple(a for _, acts in jobs for a in acts),
        resources=tuple(resources),
        config=SchedulerConfig().with_overrides(**config),
    )


def urgency_rule_base() -> RuleBase:
    """Base réduite à l'urgence : plus la marge est faible, plus la priorité est haute."""
    variables = {
        "urgency": LinguisticVariable("urgency", (-20.0, 40.0), {
            "critical": TriFuzzy(-20, -20, 0),
            "tight": TriFuzzy(-20, -20, 10),
            "relaxed": TriFuzzy(0, 40, 40),
        }),
        "priority": LinguisticVariable("priority", (0.0, 1.0), {
            "low": TriFuzzy(0, 0, 1),
            "high": TriFuzzy(0, 1, 1),
        }),
    }
    rules = (
        Rule((("urgency", "critical"),), ("priority", "high"), 1.0),
        Rule((("urgency", "tight"),), ("priority", "high"), 0.6),
        Rule((("urgency", "relaxed"),), ("priority", "low"), 1.0),
    )
    return RuleBase(variables, "priority", rules)
