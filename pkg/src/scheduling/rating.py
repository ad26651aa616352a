"""
src/scheduling/rating.py
─────────────────────────
Méthode de notation floue : variables linguistiques, règles SI/ALORS,
inférence et priorisation des activités orientée tâches.

Inférence (reconstruction de type Mamdani) :
  1. force de chaque règle = min des appartenances des antécédents × poids
  2. chaque terme conclu est écrêté à sa force (max si plusieurs règles)
  3. agrégation par max
  4. approximation triangulaire : support de l'agrégat, pic placé de sorte
     que le centroïde du triangle soit celui de l'agrégat

L'agrégat est linéaire par morceaux : son aire et son moment sont
calculés exactement, segment par segment.

Une règle porte une étape ("job" ou "resource") : la priorisation des
tâches n'utilise que les règles "job", la notation spécifique aux
ressources utilise toutes les règles.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from functools import cmp_to_key
from itertools import pairwise
from typing import Iterable, Literal, Mapping

from src.fuzzy.core import ZERO, TriFuzzy, compare, defuzz_centroid, defuzzify, membership
from src.model.shop import Instance, Schedule
from src.scheduling.retrograde import Arrangement
from src.utils.errors import RuleBaseError, pointer
from src.utils.logger import logger

Stage = Literal["job", "resource"]


# ────────────────────────────────────────────────────────────────
# Base de règles
# ────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class LinguisticVariable:
    """Variable linguistique : domaine et termes (triangles) sur ce domaine."""
    name: str
    domain: tuple[float, float]
    terms: dict[str, TriFuzzy]

    def __post_init__(self):
        lo, hi = self.domain
        if lo > hi:
            raise RuleBaseError(f"Variable {self.name!r} : domaine {self.domain} inversé.",
                                pointer("variables", self.name, "domain"))
        if not self.terms:
            raise RuleBaseError(f"Variable {self.name!r} : aucun terme défini.",
                                pointer("variables", self.name, "terms"))
        for term_name, term in self.terms.items():
            if term.a < lo or term.b > hi:
                raise RuleBaseError(
                    f"Variable {self.name!r} : le terme {term_name!r} {term} "
                    f"dépasse le domaine [{lo}, {hi}].",
                    pointer("variables", self.name, "terms", term_name),
                )

    def clamp(self, value: float) -> float:
        lo, hi = self.domain
        return min(max(value, lo), hi)


@dataclass(frozen=True)
class Rule:
    antecedents: tuple[tuple[str, str], ...]
    consequent: tuple[str, str]
    weight: float = 1.0
    stage: Stage = "job"

    def __str__(self) -> str:
        cond = " ET ".join(f"{v} est {t}" for v, t in self.antecedents)
        return f"SI {cond} ALORS {self.consequent[0]} est {self.consequent[1]} ({self.weight:g})"


@dataclass(frozen=True)
class RuleBase:
    """
    Variables d'entrée, variable de sortie "priority" sur [0, 1] et règles.

    Raises:
        RuleBaseError : base vide, nom non résolu, poids hors ]0, 1],
                        termes de sortie ne couvrant pas [0, 1]
    """
    variables: dict[str, LinguisticVariable]
    output: str
    rules: tuple[Rule, ...]

    def __post_init__(self):
        if not self.rules:
            raise RuleBaseError("La base de règles ne contient aucune règle.", pointer("rules"))
        out = self.variables.get(self.output)
        if out is None:
            raise RuleBaseError(f"Variable de sortie {self.output!r} non définie.", pointer("output"))
        if tuple(out.domain) != (0.0, 1.0):
            raise RuleBaseError(f"La sortie {self.output!r} doit avoir le domaine [0, 1].",
                                pointer("variables", self.output, "domain"))
        for index, rule in enumerate(self.rules):
            if not 0.0 < rule.weight <= 1.0:
                raise RuleBaseError(f"Règle {index} : poids {rule.weight} hors de ]0, 1].",
                                    pointer("rules", index, "weight"))
            if not rule.antecedents:
                raise RuleBaseError(f"Règle {index} : aucun antécédent.", pointer("rules", index, "if"))
            for k, (var, term) in enumerate(rule.antecedents):
                self._resolve(index, var, term, ("rules", index, "if", k))
                if var == self.output:
                    raise RuleBaseError(f"Règle {index} : la sortie {var!r} en antécédent.",
                                        pointer("rules", index, "if", k, 0))
            var, term = rule.consequent
            if var != self.output:
                raise RuleBaseError(f"Règle {index} : conséquent sur {var!r}, attendu {self.output!r}.",
                                    pointer("rules", index, "then", 0))
            self._resolve(index, var, term, ("rules", index, "then"))
        _check_coverage(out)

    def _resolve(self, index: int, var: str, term: str, where: tuple) -> None:
        variable = self.variables.get(var)
        if variable is None:
            raise RuleBaseError(f"Règle {index} : variable inconnue {var!r}.", pointer(*where, 0))
        if term not in variable.terms:
            raise RuleBaseError(f"Règle {index} : terme inconnu {term!r} pour {var!r}.", pointer(*where, 1))

    @property
    def output_variable(self) -> LinguisticVariable:
        return self.variables[self.output]

    @property
    def input_names(self) -> set[str]:
        return {var for rule in self.rules for var, _ in rule.antecedents}

    def for_stage(self, stage: Stage) -> "RuleBase":
        """Règles "job" seules pour l'étape job, toutes les règles pour l'étape resource."""
        if stage == "resource":
            return self
        rules = tuple(r for r in self.rules if r.stage == "job")
        if not rules:
            raise RuleBaseError("Aucune règle d'étape 'job' dans la base de règles.")
        if len(rules) == len(self.rules):
            return self
        return RuleBase(self.variables, self.output, rules)


def _check_coverage(output: LinguisticVariable) -> None:
    """Les supports des termes de sortie doivent recouvrir [0, 1] (sauf table de singletons)."""
    terms = sorted(output.terms.values(), key=lambda t: (t.a, t.b))
    if all(t.is_crisp for t in terms):
        return
    lo, hi = output.domain
    reach = lo
    for term in terms:
        if term.a > reach + 1e-12:
            break
        reach = max(reach, term.b)
    if reach < hi - 1e-12:
        raise RuleBaseError(
            f"Les termes de {output.name!r} ne recouvrent pas [{lo}, {hi}] (trou après {reach:g}).",
            pointer("variables", output.name, "terms"),
        )


# ────────────────────────────────────────────────────────────────
# Inférence
# ────────────────────────────────────────────────────────────────

def infer(rule_base: RuleBase, inputs: Mapping[str, float]) -> TriFuzzy:
    """
    Score flou sur [0, 1] pour des entrées nettes.

    Raises:
        RuleBaseError : entrée manquante pour une variable référencée
    """
    if not rule_base.rules:
        raise RuleBaseError("La base de règles ne contient aucune règle.")
    missing = rule_base.input_names - set(inputs)
    if missing:
        raise RuleBaseError(f"Entrées manquantes pour les variables : {sorted(missing)}")

    strengths = firing_strengths(rule_base, inputs)
    if not strengths:
        logger.warning(f"Aucune règle déclenchée pour {dict(inputs)} : score (0, 0, 0).")
        return ZERO

    out_terms = rule_base.output_variable.terms
    clipped = [(out_terms[name], s) for name, s in sorted(strengths.items())]
    return _triangle_from_aggregate(clipped)


def firing_strengths(rule_base: RuleBase, inputs: Mapping[str, float]) -> dict[str, float]:
    """Force maximale par terme de sortie déclenché (force > 0)."""
    strengths: dict[str, float] = {}
    for rule in rule_base.rules:
        strength = 1.0
        for var, term in rule.antecedents:
            variable = rule_base.variables[var]
            strength = min(strength, membership(variable.clamp(inputs[var]), variable.terms[term]))
        strength *= rule.weight
        if strength > 0.0:
            name = rule.consequent[1]
            strengths[name] = max(strengths.get(name, 0.0), strength)
    return strengths


def _clipped_line(term: TriFuzzy, strength: float, x0: float, x1: float) -> tuple[float, float]:
    """Valeurs aux bornes du morceau linéaire de min(μ_term, strength) sur ]x0, x1[."""
    xm = (x0 + x1) / 2
    if xm <= term.a or xm >= term.b:
        return 0.0, 0.0
    if xm < term.m:
        v0 = (x0 - term.a) / (term.m - term.a)
        v1 = (x1 - term.a) / (term.m - term.a)
        level = (xm - term.a) / (term.m - term.a)
    else:
        v0 = (term.b - x0) / (term.b - term.m)
        v1 = (term.b - x1) / (term.b - term.m)
        level = (term.b - xm) / (term.b - term.m)
    if level >= strength:
        return strength, strength
    return v0, v1


def aggregate_moments(clipped: list[tuple[TriFuzzy, float]]) -> tuple[float, float]:
    """Aire et moment d'ordre 1 exacts de max(min(μ_i, s_i))."""
    cuts = set()
    for term, s in clipped:
        cuts.update((term.a, term.m, term.b))
        if term.m > term.a:
            cuts.add(term.a + s * (term.m - term.a))
        if term.b > term.m:
            cuts.add(term.b - s * (term.b - term.m))

    area = moment = 0.0
    for x0, x1 in pairwise(sorted(cuts)):
        if x1 <= x0:
            continue
        lines = [_clipped_line(term, s, x0, x1) for term, s in clipped]
        # Croisements entre morceaux : l'enveloppe max y change de droite
        ts = {0.0, 1.0}
        for i, (p0, p1) in enumerate(lines):
            for q0, q1 in lines[i + 1:]:
                d0, d1 = p0 - q0, p1 - q1
                if d0 * d1 < 0:
                    ts.add(d0 / (d0 - d1))
        ts = sorted(ts)
        for t0, t1 in pairwise(ts):
            xa, xb = x0 + t0 * (x1 - x0), x0 + t1 * (x1 - x0)
            ya = max(v0 + t0 * (v1 - v0) for v0, v1 in lines)
            yb = max(v0 + t1 * (v1 - v0) for v0, v1 in lines)
            width = xb - xa
            area += width * (ya + yb) / 2
            moment += width / 6 * (xa * (2 * ya + yb) + xb * (ya + 2 * yb))
    return area, moment


def _triangle_from_aggregate(clipped: list[tuple[TriFuzzy, float]]) -> TriFuzzy:
    area, moment = aggregate_moments(clipped)
    if area > 0.0:
        spread = [t for t, _ in clipped if not t.is_crisp]
        lo, hi = min(t.a for t in spread), max(t.b for t in spread)
        centroid = moment / area
    else:
        # Singletons seuls : moyenne des positions pondérée par les forces
        total = sum(s for _, s in clipped)
        centroid = sum(t.m * s for t, s in clipped) / total
        lo, hi = min(t.m for t, _ in clipped), max(t.m for t, _ in clipped)
    return centroid_triangle(lo, centroid, hi)


def centroid_triangle(lo: float, centroid: float, hi: float) -> TriFuzzy:
    """
    Triangle de support [lo, hi] et de centroïde `centroid`.
    Si l'agrégat est trop asymétrique, la borne du côté court est rapprochée.
    """
    c = min(max(centroid, lo), hi)
    if hi <= lo:
        return TriFuzzy.crisp(c)
    m = 3 * c - lo - hi
    if m < lo:
        return TriFuzzy(lo, lo, min(max(3 * c - 2 * lo, lo), hi))
    if m > hi:
        return TriFuzzy(max(min(3 * c - 2 * hi, hi), lo), hi, hi)
    return TriFuzzy(lo, m, hi)


# ────────────────────────────────────────────────────────────────
# Critères et priorisation
# ────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class Criteria:
    """
    Entrées nettes de la notation d'une activité.

    Attributes:
        urgency          : marge jusqu'au début au plus tard (négative = en retard)
        job_importance   : poids stratégique de la tâche [0, 1]
        waiting_time     : temps écoulé depuis la première sélection
        resource_fit     : 1 pour la ressource la plus rapide
        strategic_weight : poids stratégique de la ressource [0, 1]
    """
    urgency: float
    job_importance: float
    waiting_time: float
    resource_fit: float
    strategic_weight: float

    def as_inputs(self) -> dict[str, float]:
        return asdict(self)


def compute_criteria(
    activity_id: str,
    instance: Instance,
    arrangement: Arrangement,
    schedule: Schedule,
    now: float,
    resource_id: str | None = None,
) -> Criteria:
    """
    Critères d'une activité non planifiée.
    Sans ressource (niveau tâche) : resource_fit = 1 et poids stratégique
    maximal parmi les ressources capables.
    """
    method = instance.config.defuzzification
    latest_start = arrangement[activity_id].latest_start
    job = instance.job_of(activity_id)
    waiting = max(0.0, now - schedule.first_selected.get(activity_id, now))
    capable = instance.capable_resources(activity_id)

    if resource_id is None:
        fit = 1.0
        weight = max((instance.resource_by_id[r].strategic_weight for r in capable), default=0.0)
    else:
        durations = [defuzz_centroid(instance.duration_on(activity_id, r)) for r in capable]
        own = defuzz_centroid(instance.duration_on(activity_id, resource_id))
        fastest = min(durations, default=own)
        fit = fastest / own if own > 0 else 1.0
        weight = instance.resource_by_id[resource_id].strategic_weight

    return Criteria(
        urgency=defuzzify(latest_start, method) - now,
        job_importance=job.importance,
        waiting_time=waiting,
        resource_fit=fit,
        strategic_weight=weight,
    )


def prioritize_jobs(
    activity_ids: Iterable[str],
    instance: Instance,
    arrangement: Arrangement,
    schedule: Schedule,
    rule_base: RuleBase,
    now: float,
) -> list[tuple[str, TriFuzzy]]:
    """
    Score de niveau tâche de chaque activité, trié par score décroissant.
    Tri stable : à score équivalent, l'ordre d'entrée est conservé.
    """
    eps = instance.config.comparison_epsilon
    job_rules = rule_base.for_stage("job")
    scored = [
        (aid, infer(job_rules, compute_criteria(aid, instance, arrangement, schedule, now).as_inputs()))
        for aid in activity_ids
    ]
    return sorted(scored, key=cmp_to_key(lambda x, y: compare(y[1], x[1], eps)))


def priority_tiers(prioritized: list[tuple[str, TriFuzzy]], eps: float) -> dict[str, int]:
    """Rang de palier : entrées consécutives équivalentes partagent le même palier."""
    tiers: dict[str, int] = {}
    tier = 0
    previous = None
    for aid, score in prioritized:
        if previous is not None and compare(previous, score, eps) != 0:
            tier += 1
        tiers[aid] = tier
        previous = score
    return tiers
