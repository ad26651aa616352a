"""
src/cli/app.py
───────────────
Point d'entrée de la ligne de commande.

Codes de sortie :
    0  succès
    1  instance invalide (violations d'invariants listées sur stdout)
    2  blocage de la boucle glissante (StallError)
    3  erreur d'entrée/sortie ou de format (fichier et pointeur JSON cités)
"""

import argparse
from pathlib import Path
from typing import Sequence

from config.settings import settings
from src.cli.commands import cmd_gen, cmd_oracle, cmd_schedule, cmd_validate
from src.utils.errors import SchedulerError, StallError
from src.utils.logger import logger

EXIT_STALL = 2
EXIT_INPUT = 3


def _positive_int(value: str) -> int:
    number = int(value)
    if number < 1:
        raise argparse.ArgumentTypeError(f"entier ≥ 1 attendu, reçu {value}")
    return number


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("configuration (priorité sur le bloc config de l'instance)")
    group.add_argument("--horizon", type=float, help=f"longueur H de la fenêtre (défaut {settings.horizon_length})")
    group.add_argument("--step", type=float, help="pas d'avance de la fenêtre (défaut H/2)")
    group.add_argument("--epsilon", type=float,
                       help=f"epsilon de signification du point fixe (défaut {settings.significance_epsilon})")
    group.add_argument("--max-iters", type=_positive_int,
                       help=f"plafond d'itérations du point fixe (défaut {settings.max_fixpoint_iters})")
    group.add_argument("--seed", type=int, help=f"graine (défaut {settings.random_state})")
    group.add_argument("--defuzzification", choices=["centroid", "peak"],
                       help=f"défuzzification (défaut {settings.defuzzification})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fuzzy-scheduler",
        description=f"{settings.app_name} {settings.app_version} : planification floue d'atelier",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("schedule", help="exécuter la planification")
    p.add_argument("--instance", type=Path, required=True)
    p.add_argument("--rules", type=Path, default=None, help=f"base de règles (défaut {settings.rules_path.name})")
    p.add_argument("--out", type=Path, default=settings.output_dir)
    p.add_argument("--verbose", action="store_true", help="ajoute le journal des itérations à schedule.json")
    p.add_argument("--gantt", choices=["svg", "txt", "none"], default="svg")
    _add_config_flags(p)
    p.set_defaults(handler=cmd_schedule)

    p = sub.add_parser("validate", help="vérifier une instance")
    p.add_argument("--instance", type=Path, required=True)
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("oracle", help="comparer l'heuristique aux oracles (instances nettes)")
    p.add_argument("--instance", type=Path, nargs="+", required=True)
    p.add_argument("--rules", type=Path, default=None)
    p.add_argument("--out", type=Path, default=settings.output_dir)
    p.add_argument("--limit", type=_positive_int, default=None,
                   help=f"activités maximum pour l'oracle exhaustif (défaut {settings.brute_force_limit})")
    _add_config_flags(p)
    p.set_defaults(handler=cmd_oracle)

    p = sub.add_parser("gen", help="générer une instance aléatoire")
    p.add_argument("--jobs", type=_positive_int, required=True)
    p.add_argument("--activities", type=_positive_int, required=True, help="activités par tâche")
    p.add_argument("--resources", type=_positive_int, required=True)
    p.add_argument("--seed", type=int, default=settings.random_state)
    p.add_argument("--spread", type=float, default=0.2, help="facteur d'étalement flou")
    p.add_argument("--crisp", action="store_true", help="valeurs nettes uniquement")
    p.add_argument("--out", type=Path, default=None, help="fichier de sortie (stdout sinon)")
    p.set_defaults(handler=cmd_gen)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except StallError as e:
        logger.error(f"Planification bloquée : {e}")
        return EXIT_STALL
    except (SchedulerError, OSError) as e:
        logger.error(f"Erreur d'entrée : {e}")
        return EXIT_INPUT
