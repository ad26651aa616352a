"""
src/data/loader.py
───────────────────
Chargement et validation des fichiers JSON d'entrée.

Responsabilités :
  - Lire une instance ou une base de règles depuis le disque
  - Valider la forme avec les schémas Pydantic (clés inconnues rejetées)
  - Construire les objets métier (Instance, RuleBase)
  - Résoudre la configuration : settings < bloc "config" < options CLI
  - Écrire une instance sur le disque (générateur, tests)

Toute erreur est remontée en InstanceFormatError, qui nomme le fichier
et l'emplacement fautif (ligne/colonne ou pointeur JSON).
"""

import json
from pathlib import Path

from pydantic import ValidationError

from config.settings import settings
from src.fuzzy.core import TriFuzzy
from src.data.schemas import InstanceSchema, RuleBaseSchema
from src.model.shop import Activity, Instance, Job, Resource, SchedulerConfig
from src.scheduling.rating import LinguisticVariable, Rule, RuleBase
from src.utils.errors import InstanceFormatError, RuleBaseError, pointer
from src.utils.logger import logger


def _read_json(path: Path) -> object:
    """Lit un fichier JSON ; les erreurs de syntaxe indiquent ligne et colonne."""
    if not path.exists():
        raise InstanceFormatError(path, "", "fichier introuvable.")
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise InstanceFormatError(path, "", f"lecture impossible ({e}).") from e
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InstanceFormatError(
            path, "", f"JSON invalide ligne {e.lineno}, colonne {e.colno} : {e.msg}"
        ) from e


def json_pointer(loc: tuple) -> str:
    """
    Pointeur JSON (RFC 6901) depuis un `loc` Pydantic.
    Les étiquettes de branche d'union ("float", "tuple[...]") sont ignorées.
    """
    return pointer(*(
        part for part in loc
        if not (isinstance(part, str) and (part in {"float", "int", "str"} or "[" in part))
    ))


def _format_error(path: Path, error: ValidationError) -> InstanceFormatError:
    first = error.errors()[0]
    count = error.error_count()
    detail = first["msg"]
    if count > 1:
        detail += f" (+{count - 1} autre(s) erreur(s))"
    return InstanceFormatError(path, json_pointer(first["loc"]), detail)


def _fuzzy(value) -> TriFuzzy:
    return TriFuzzy.from_json(value)


class InstanceLoader:
    """
    Charge et valide une instance d'atelier.

    Exemple d'utilisation :
        loader = InstanceLoader("data/instances/example.json")
        instance = loader.load(horizon=12.0)
    """

    def __init__(self, path: Path | str):
        self.path = Path(path)

    # ──────────────────────────────────────────────────────────────
    # Méthode principale
    # ──────────────────────────────────────────────────────────────

    def load(self, **overrides) -> Instance:
        """
        Lit le fichier, valide le schéma et construit l'Instance.

        Args:
            **overrides : valeurs de configuration issues de la CLI
                          (les valeurs None sont ignorées)

        Raises:
            InstanceFormatError : fichier absent, JSON invalide ou schéma violé
        """
        logger.info(f"Chargement de l'instance : {self.path}")
        raw = _read_json(self.path)
        try:
            schema = InstanceSchema.model_validate(raw)
        except ValidationError as e:
            raise _format_error(self.path, e) from e

        instance = self._build(schema, overrides)
        self._log_stats(instance)
        return instance

    # ──────────────────────────────────────────────────────────────
    # Méthodes privées
    # ──────────────────────────────────────────────────────────────

    def _build(self, schema: InstanceSchema, overrides: dict) -> Instance:
        block = schema.config.model_dump(exclude_none=True)
        config = SchedulerConfig().with_overrides(**block).with_overrides(**overrides)

        activities = tuple(
            Activity(
                id=a.id,
                job_id=a.job_id,
                index_in_job=a.index_in_job,
                duration=_fuzzy(a.duration),
                capable_resources=frozenset(a.capable_resources),
                durations_by_resource={r: _fuzzy(d) for r, d in a.durations_by_resource.items()},
            )
            for a in schema.activities
        )
        jobs = tuple(
            Job(j.id, tuple(j.activity_ids), _fuzzy(j.due_date), j.importance)
            for j in schema.jobs
        )
        resources = tuple(
            Resource(r.id, _fuzzy(r.available_from), r.strategic_weight)
            for r in schema.resources
        )
        return Instance(jobs=jobs, activities=activities, resources=resources, config=config)

    def _log_stats(self, instance: Instance) -> None:
        kind = "nette" if instance.is_crisp() else "floue"
        logger.info(
            f"   {len(instance.jobs)} tâches, {len(instance.activities)} activités, "
            f"{len(instance.resources)} ressources (instance {kind})"
        )


class RuleBaseLoader:
    """
    Charge la base de règles de notation.

    Exemple d'utilisation :
        rule_base = RuleBaseLoader().load()   # data/rules/default_rules.json
    """

    def __init__(self, path: Path | str | None = None):
        self.path = Path(path) if path else settings.rules_path

    def load(self) -> RuleBase:
        """
        Raises:
            InstanceFormatError : fichier absent, JSON invalide ou schéma violé
            RuleBaseError       : base cohérente en forme mais pas en contenu
                                  (variable ou terme inconnu, couverture...)
        """
        logger.info(f"Chargement de la base de règles : {self.path}")
        raw = _read_json(self.path)
        try:
            schema = RuleBaseSchema.model_validate(raw)
        except ValidationError as e:
            raise _format_error(self.path, e) from e

        try:
            variables = {
                name: LinguisticVariable(
                    name=name,
                    domain=tuple(float(v) for v in var.domain),
                    terms={term: _fuzzy(value) for term, value in var.terms.items()},
                )
                for name, var in schema.variables.items()
            }
            rules = tuple(
                Rule(
                    antecedents=tuple((v, t) for v, t in r.antecedents),
                    consequent=tuple(r.consequent),
                    weight=r.weight,
                    stage=r.stage,
                )
                for r in schema.rules
            )
            rule_base = RuleBase(variables=variables, output=schema.output, rules=rules)
        except RuleBaseError as e:
            raise RuleBaseError(e.detail, e.pointer, self.path) from e
        logger.info(f"   {len(rules)} règles sur {len(variables)} variables")
        return rule_base


# ────────────────────────────────────────────────────────────────
# Écriture
# ────────────────────────────────────────────────────────────────

def instance_to_json(instance: Instance) -> dict:
    """Document JSON d'une instance (clés triées à l'écriture)."""
    return {
        "jobs": [
            {
                "id": j.id,
                "activity_ids": list(j.activity_ids),
                "due_date": j.due_date.to_json(),
                "importance": j.importance,
            }
            for j in instance.jobs
        ],
        "activities": [
            {
                "id": a.id,
                "job_id": a.job_id,
                "index_in_job": a.index_in_job,
                "duration": a.duration.to_json(),
                "capable_resources": sorted(a.capable_resources),
                "durations_by_resource": {
                    r: d.to_json() for r, d in sorted(a.durations_by_resource.items())
                },
            }
            for a in instance.activities
        ],
        "resources": [
            {
                "id": r.id,
                "available_from": r.available_from.to_json(),
                "strategic_weight": r.strategic_weight,
            }
            for r in instance.resources
        ],
        "config": {
            "horizon": instance.config.horizon,
            "seed": instance.config.seed,
        },
    }


def dump_json(document: dict, path: Path | str) -> Path:
    """Écrit un document JSON de façon déterministe (clés triées, indentation 2)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(document, indent=2, sort_keys=True, ensure_ascii=False) + "\n",
                    encoding="utf-8")
    return path
