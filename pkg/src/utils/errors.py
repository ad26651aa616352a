"""
src/utils/errors.py
────────────────────
Exceptions métier du planificateur.

Chaque famille correspond à un code de sortie de la CLI :
  - StallError                                  → 2
  - InstanceFormatError, RuleBaseError, OSError → 3
"""


def pointer(*parts) -> str:
    """Pointeur JSON (RFC 6901) : pointer("rules", 3, "then") → "/rules/3/then"."""
    escaped = [str(p).replace("~", "~0").replace("/", "~1") for p in parts]
    return "/" + "/".join(escaped) if escaped else ""


class SchedulerError(Exception):
    """Racine de toutes les erreurs du planificateur."""


class FuzzyDomainError(SchedulerError, ValueError):
    """Valeur floue invalide ou opération hors de son domaine."""


class RuleBaseError(SchedulerError, ValueError):
    """
    Base de règles mal configurée (variable ou terme inconnu, base vide...).

    Attributes:
        detail  : description du problème
        pointer : pointeur JSON vers l'élément fautif du fichier de règles
        path    : fichier concerné, renseigné par le chargeur
    """

    def __init__(self, detail: str, pointer: str = "", path=None):
        self.detail = detail
        self.pointer = pointer
        self.path = path
        if path is not None:
            where = f"{path}#{pointer}" if pointer else f"{path}"
            super().__init__(f"{where} : {detail}")
        else:
            super().__init__(f"{detail} ({pointer})" if pointer else detail)


class InstanceFormatError(SchedulerError, ValueError):
    """
    Fichier JSON illisible ou non conforme à son schéma.

    Attributes:
        path    : fichier concerné
        pointer : pointeur JSON (RFC 6901) vers l'élément fautif, "" si global
    """

    def __init__(self, path, pointer: str, detail: str):
        self.path = path
        self.pointer = pointer
        self.detail = detail
        where = f"{path}#{pointer}" if pointer else f"{path}"
        super().__init__(f"{where} : {detail}")


class StallError(SchedulerError, RuntimeError):
    """La boucle glissante ne progresse plus (impasse de capacités)."""


class OracleLimitError(SchedulerError, ValueError):
    """Instance trop grande pour l'oracle exhaustif."""
