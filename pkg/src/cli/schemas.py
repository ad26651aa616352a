"""
src/cli/schemas.py
───────────────────
Modèles Pydantic des fichiers produits par la CLI.

Ces schémas définissent :
  - schedule.json : allocations (temps nets et flous), journal optionnel
  - metrics.json  : indicateurs du planning
  - oracle.json   : comparaison heuristique / oracles sur instance nette

Toute clé inconnue est rejetée (extra="forbid") ; les fichiers sont écrits
avec des clés triées pour rester identiques d'une exécution à l'autre.
"""

from pydantic import BaseModel, ConfigDict, Field

FuzzyOut = float | list[float]


class OutputModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


# ────────────────────────────────────────────────────────────────
# schedule.json
# ────────────────────────────────────────────────────────────────

class AllocationOut(OutputModel):
    """Une allocation engagée."""

    activity_id: str
    job_id: str
    resource_id: str
    crisp_start: float = Field(..., description="Début net (défuzzifié)")
    crisp_finish: float = Field(..., description="Fin nette (défuzzifiée)")
    fuzzy_start: FuzzyOut = Field(..., description="Début flou : nombre ou [a, m, b]")
    fuzzy_finish: FuzzyOut = Field(..., description="Fin floue : nombre ou [a, m, b]")


class ScheduleOut(OutputModel):
    """Contenu de schedule.json."""

    makespan: float
    allocations: list[AllocationOut]
    iteration_log: list[dict] | None = Field(
        default=None, description="Présent uniquement avec --verbose"
    )


# ────────────────────────────────────────────────────────────────
# metrics.json
# ────────────────────────────────────────────────────────────────

class MetricsOut(OutputModel):
    """Contenu de metrics.json."""

    makespan: float = Field(..., description="Fin nette de la dernière activité")
    max_lateness: float
    job_lateness: dict[str, float] = Field(
        ..., description="Fin de la tâche − échéance défuzzifiée"
    )
    resource_utilization: dict[str, float] = Field(
        ..., description="Temps occupé / makespan, par ressource"
    )
    outer_iterations: int
    fixpoint_iterations: list[int] = Field(..., description="Une valeur par itération externe")
    converged: list[bool]
    optimality_ratio: float | None = Field(
        default=None, description="Makespan / optimum exhaustif (instances nettes, petites)"
    )


# ────────────────────────────────────────────────────────────────
# oracle.json
# ────────────────────────────────────────────────────────────────

class OracleInstanceReport(OutputModel):
    instance: str
    cpm_matches: bool = Field(..., description="Passe arrière floue = passe arrière classique")
    heuristic_makespan: float
    optimal_makespan: float | None = None
    ratio: float | None = None
    edd_max_lateness: float | None = None
    heuristic_max_lateness: float | None = None


class OracleReport(OutputModel):
    """Contenu de oracle.json."""

    instances: list[OracleInstanceReport]
    median_ratio: float | None = None
