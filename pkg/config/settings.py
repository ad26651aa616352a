"""
config/settings.py
──────────────────
Configuration centralisée du planificateur.
Lit les valeurs depuis le fichier .env via pydantic-settings.
Toute l'application importe `settings` depuis ce module.

Ordre de priorité des paramètres de planification :
    option CLI  >  bloc "config" du fichier d'instance  >  valeurs ci-dessous
"""

from pathlib import Path
from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

# Racine du projet (remonte depuis config/)
BASE_DIR = Path(__file__).resolve().parent.parent


class Settings(BaseSettings):
    """
    Paramètres globaux de l'application.
    Les valeurs sont lues en priorité depuis .env,
    puis depuis les variables d'environnement système (préfixe FUZZY_).
    """

    # ── Application ────────────────────────────────────────────
    app_name: str = Field(default="Fuzzy Shop Scheduler")
    app_version: str = Field(default="1.0.0")
    debug: bool = Field(default=False)

    # ── Chemins fichiers ────────────────────────────────────────
    rules_path: Path = Field(default=BASE_DIR / "data/rules/default_rules.json")
    output_dir: Path = Field(default=BASE_DIR / "output")
    log_path: Path = Field(default=BASE_DIR / "logs/scheduler.log")

    # ── Fenêtre glissante ───────────────────────────────────────
    horizon_length: float = Field(default=10.0, gt=0)
    horizon_step: float | None = Field(default=None, gt=0)      # None → H/2
    overlap_window: float | None = Field(default=None, ge=0)    # None → H/2

    # ── Recommandations / point fixe ────────────────────────────
    significance_epsilon: float = Field(default=1e-3, ge=0)
    max_fixpoint_iters: int = Field(default=20, ge=1)
    load_lambda: float = Field(default=0.1, ge=0)

    # ── Arithmétique floue ──────────────────────────────────────
    comparison_epsilon: float = Field(default=1e-9, ge=0)
    defuzzification: Literal["centroid", "peak"] = Field(default="centroid")

    # ── Reproductibilité / oracles ──────────────────────────────
    random_state: int = Field(default=42)
    n_jobs: int = Field(default=1)
    brute_force_limit: int = Field(default=8, ge=1)
    oracle_grid_step: float = Field(default=1e-3, gt=0)

    model_config = SettingsConfigDict(
        env_file=BASE_DIR / ".env",
        env_file_encoding="utf-8",
        env_prefix="FUZZY_",
        extra="ignore",
    )


# Instance unique partagée dans tout le projet
settings = Settings()
