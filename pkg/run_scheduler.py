"""
run_scheduler.py
─────────────────
Lance la ligne de commande du planificateur.

Usage :
    python run_scheduler.py gen --jobs 3 --activities 2 --resources 2 --seed 7 --out i.json
    python run_scheduler.py validate --instance i.json
    python run_scheduler.py schedule --instance i.json --out output/
    python run_scheduler.py oracle --instance i.json

Le code de sortie est celui de la sous-commande (voir src/cli/app.py).
"""

import sys
from pathlib import Path

# S'assurer que la racine du projet est dans le PYTHONPATH
sys.path.insert(0, str(Path(__file__).parent))

from src.cli.app import main

if __name__ == "__main__":
    sys.exit(main())
