"""
src/data/schemas.py
────────────────────
Modèles Pydantic des fichiers d'entrée.

Ces schémas définissent :
  - la forme d'un fichier d'instance (jobs, activities, resources, config)
  - la forme d'un fichier de base de règles (variables, output, rules)

Toute clé inconnue est rejetée (extra="forbid").
Une valeur floue s'écrit soit comme un nombre v (valeur nette),
soit comme un tableau [a, m, b] avec a ≤ m ≤ b.
"""

from typing import Annotated, Literal

from pydantic import AfterValidator, BaseModel, BeforeValidator, ConfigDict, Field

from src.fuzzy.core import TriFuzzy


def _require_numbers(value):
    # true, "3" ou [1, "2", 3] sont refusés
    items = value if isinstance(value, (list, tuple)) else [value]
    for item in items:
        if isinstance(item, bool) or not isinstance(item, (int, float)):
            raise ValueError(f"valeur floue attendue (nombre ou [a, m, b]), reçu {item!r}.")
    return value


def _check_fuzzy(value):
    # Lève FuzzyDomainError (ValueError) si a ≤ m ≤ b n'est pas respecté
    TriFuzzy.from_json(value)
    return value


FuzzyJSON = Annotated[
    float | tuple[float, float, float],
    BeforeValidator(_require_numbers),
    AfterValidator(_check_fuzzy),
]


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


# ────────────────────────────────────────────────────────────────
# Fichier d'instance
# ────────────────────────────────────────────────────────────────

class ActivitySchema(StrictModel):
    id: str = Field(..., min_length=1)
    job_id: str
    index_in_job: int
    duration: FuzzyJSON
    capable_resources: list[str]
    durations_by_resource: dict[str, FuzzyJSON] = Field(default_factory=dict)


class JobSchema(StrictModel):
    id: str = Field(..., min_length=1)
    activity_ids: list[str]
    due_date: FuzzyJSON
    importance: float = 0.5


class ResourceSchema(StrictModel):
    id: str = Field(..., min_length=1)
    available_from: FuzzyJSON = 0.0
    strategic_weight: float = 0.5


class ConfigSchema(StrictModel):
    """Bloc config : toute valeur absente reprend le défaut de config/settings.py."""
    horizon: float | None = Field(default=None, gt=0)
    step: float | None = Field(default=None, gt=0)
    significance_epsilon: float | None = Field(default=None, ge=0)
    max_fixpoint_iters: int | None = Field(default=None, ge=1)
    comparison_epsilon: float | None = Field(default=None, ge=0)
    seed: int | None = None
    load_lambda: float | None = Field(default=None, ge=0)
    overlap: float | None = Field(default=None, ge=0)
    defuzzification: Literal["centroid", "peak"] | None = None


class InstanceSchema(StrictModel):
    jobs: list[JobSchema] = Field(default_factory=list)
    activities: list[ActivitySchema] = Field(default_factory=list)
    resources: list[ResourceSchema] = Field(default_factory=list)
    config: ConfigSchema = Field(default_factory=ConfigSchema)


# ────────────────────────────────────────────────────────────────
# Fichier de base de règles
# ────────────────────────────────────────────────────────────────

class VariableSchema(StrictModel):
    domain: tuple[float, float]
    terms: dict[str, FuzzyJSON]


class RuleSchema(StrictModel):
    """{"if": [["urgency", "critical"], ...], "then": ["priority", "high"], "weight": 1.0}"""
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    antecedents: list[tuple[str, str]] = Field(..., alias="if", min_length=1)
    consequent: tuple[str, str] = Field(..., alias="then")
    weight: float = Field(default=1.0, gt=0, le=1)
    stage: Literal["job", "resource"] = "job"


class RuleBaseSchema(StrictModel):
    variables: dict[str, VariableSchema]
    output: str = "priority"
    rules: list[RuleSchema]
