"""
src/fuzzy/core.py
──────────────────
Nombres flous triangulaires et leur arithmétique.

Toutes les grandeurs vagues du planificateur (dates, durées, échéances,
scores) sont représentées par un TriFuzzy (a, m, b). Une valeur nette v
s'écrit (v, v, v) et traverse toutes les opérations sans perte.

Choix de reconstruction (aucune arithmétique n'est imposée par le modèle
d'origine) :
  - forme triangulaire uniquement ;
  - soustraction standard du principe d'extension (les étalements s'ajoutent) ;
  - défuzzification par centroïde, alternative « pic » configurable ;
  - comparaison par centroïde, puis largeur de support, à epsilon près.

Toutes les valeurs sont immuables et toutes les fonctions sont pures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

from src.utils.errors import FuzzyDomainError

DefuzzMethod = Literal["centroid", "peak"]


# ────────────────────────────────────────────────────────────────
# Types
# ────────────────────────────────────────────────────────────────

@dataclass(frozen=True, slots=True)
class TriFuzzy:
    """
    Nombre flou triangulaire.

    Attributes:
        a : borne gauche du support (appartenance 0)
        m : pic (appartenance 1)
        b : borne droite du support (appartenance 0)
    """
    a: float
    m: float
    b: float

    def __post_init__(self):
        values = (self.a, self.m, self.b)
        if not all(math.isfinite(v) for v in values):
            raise FuzzyDomainError(f"TriFuzzy non fini : {values}")
        if not self.a <= self.m <= self.b:
            raise FuzzyDomainError(
                f"TriFuzzy invalide {values} : il faut a ≤ m ≤ b."
            )

    @classmethod
    def crisp(cls, value: float) -> "TriFuzzy":
        """Plongement d'une valeur nette : (v, v, v)."""
        v = float(value)
        return cls(v, v, v)

    @property
    def width(self) -> float:
        return self.b - self.a

    @property
    def is_crisp(self) -> bool:
        return self.a == self.m == self.b

    # ── JSON : nombre v ou tableau [a, m, b] ───────────────────
    def to_json(self) -> float | list[float]:
        if self.is_crisp:
            return self.m
        return [self.a, self.m, self.b]

    @classmethod
    def from_json(cls, value) -> "TriFuzzy":
        if isinstance(value, bool):
            raise FuzzyDomainError(f"Valeur floue invalide : {value!r}")
        if isinstance(value, (int, float)):
            return cls.crisp(value)
        if isinstance(value, (list, tuple)) and len(value) == 3:
            return cls(float(value[0]), float(value[1]), float(value[2]))
        raise FuzzyDomainError(
            f"Valeur floue invalide : {value!r} (attendu : nombre ou [a, m, b])."
        )

    def __repr__(self) -> str:
        return f"TriFuzzy({self.a:g}, {self.m:g}, {self.b:g})"


@dataclass(frozen=True, slots=True)
class AlphaInterval:
    """α-coupe : intervalle des valeurs d'appartenance ≥ alpha."""
    alpha: float
    lo: float
    hi: float


ZERO = TriFuzzy(0.0, 0.0, 0.0)


# ────────────────────────────────────────────────────────────────
# Arithmétique (principe d'extension)
# ────────────────────────────────────────────────────────────────

def add(x: TriFuzzy, y: TriFuzzy) -> TriFuzzy:
    return TriFuzzy(x.a + y.a, x.m + y.m, x.b + y.b)


def sub(x: TriFuzzy, y: TriFuzzy) -> TriFuzzy:
    """Soustraction standard : (x.a − y.b, x.m − y.m, x.b − y.a)."""
    return TriFuzzy(x.a - y.b, x.m - y.m, x.b - y.a)


def fuzzy_max(x: TriFuzzy, y: TriFuzzy) -> TriFuzzy:
    """Maximum composante par composante (exact aux α-coupes pour des triangles)."""
    return TriFuzzy(max(x.a, y.a), max(x.m, y.m), max(x.b, y.b))


def shift(x: TriFuzzy, delta: float) -> TriFuzzy:
    """Translation de toute la fonction d'appartenance."""
    return TriFuzzy(x.a + delta, x.m + delta, x.b + delta)


# ────────────────────────────────────────────────────────────────
# Projection nette et comparaison
# ────────────────────────────────────────────────────────────────

def defuzz_centroid(x: TriFuzzy) -> float:
    return (x.a + x.m + x.b) / 3.0


def defuzz_peak(x: TriFuzzy) -> float:
    return x.m


def defuzzify(x: TriFuzzy, method: DefuzzMethod = "centroid") -> float:
    if method == "centroid":
        return defuzz_centroid(x)
    if method == "peak":
        return defuzz_peak(x)
    raise FuzzyDomainError(f"Méthode de défuzzification inconnue : {method!r}")


def compare(x: TriFuzzy, y: TriFuzzy, eps: float = 1e-9) -> int:
    """
    Ordre total (préordre) entre deux nombres flous.

    Returns:
        -1 si x < y, 1 si x > y, 0 si équivalents.
        Centroïdes à eps près : le support le plus étroit est « plus grand »
        (moins vague), puis égalité.
    """
    if eps < 0:
        raise FuzzyDomainError(f"epsilon négatif : {eps}")
    cx, cy = defuzz_centroid(x), defuzz_centroid(y)
    if abs(cx - cy) > eps:
        return -1 if cx < cy else 1
    wx, wy = x.width, y.width
    if abs(wx - wy) > eps:
        return 1 if wx < wy else -1
    return 0


def alpha_cut(x: TriFuzzy, alpha: float) -> AlphaInterval:
    if not 0.0 <= alpha <= 1.0:
        raise FuzzyDomainError(f"alpha hors de [0, 1] : {alpha}")
    return AlphaInterval(
        alpha=alpha,
        lo=x.a + alpha * (x.m - x.a),
        hi=x.b - alpha * (x.b - x.m),
    )


def membership(value: float, x: TriFuzzy) -> float:
    """Degré d'appartenance de `value` au triangle x (épaules et singletons inclus)."""
    if value < x.a or value > x.b:
        return 0.0
    if value == x.m:
        return 1.0
    if value < x.m:
        return (value - x.a) / (x.m - x.a)
    return (x.b - value) / (x.b - x.m)
