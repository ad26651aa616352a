"""
tests/test_rating.py
─────────────────────
Tests de la notation floue : inférence, critères, priorisation.
"""

import numpy as np
import pytest

from src.baseline.oracles import mamdani_oracle
from src.fuzzy.core import ZERO, TriFuzzy, defuzz_centroid
from src.model.shop import Schedule
from src.scheduling.rating import (
    LinguisticVariable,
    Rule,
    RuleBase,
    centroid_triangle,
    compute_criteria,
    infer,
    prioritize_jobs,
    priority_tiers,
)
from src.scheduling.retrograde import backward_pass
from src.utils.errors import RuleBaseError
from tests.factories import build, job, resource

PRIORITY = LinguisticVariable("priority", (0.0, 1.0), {
    "low": TriFuzzy(0, 0, 1),
    "high": TriFuzzy(0, 1, 1),
})
URGENCY = LinguisticVariable("urgency", (-20.0, 40.0), {
    "critical": TriFuzzy(-20, -20, 0),
    "relaxed": TriFuzzy(0, 40, 40),
})


def one_rule_base(*rules: Rule) -> RuleBase:
    return RuleBase({"urgency": URGENCY, "priority": PRIORITY}, "priority", rules)


def random_rule_base(rng: np.random.Generator) -> RuleBase:
    """Deux entrées sur [0, 10], sortie à trois termes recouvrant [0, 1]."""
    def inputs(name):
        cuts = np.sort(rng.uniform(0, 10, size=3))
        return LinguisticVariable(name, (0.0, 10.0), {
            "small": TriFuzzy(0, 0, float(cuts[1])),
            "mid": TriFuzzy(float(cuts[0]), float(cuts[1]), float(cuts[2])),
            "large": TriFuzzy(float(cuts[1]), 10, 10),
        })

    u = np.sort(rng.uniform(0.1, 0.9, size=4))
    output = LinguisticVariable("priority", (0.0, 1.0), {
        "low": TriFuzzy(0, 0, float(u[1])),
        "mid": TriFuzzy(float(u[0]), float((u[1] + u[2]) / 2), float(u[3])),
        "high": TriFuzzy(float(u[2]), 1, 1),
    })
    terms = ["small", "mid", "large"]
    rules = []
    for _ in range(int(rng.integers(1, 6))):
        antecedents = [("x", str(rng.choice(terms)))]
        if rng.random() < 0.5:
            antecedents.append(("y", str(rng.choice(terms))))
        rules.append(Rule(
            tuple(antecedents),
            ("priority", str(rng.choice(["low", "mid", "high"]))),
            float(rng.uniform(0.1, 1.0)),
        ))
    return RuleBase({"x": inputs("x"), "y": inputs("y"), "priority": output}, "priority", tuple(rules))


class TestRuleBase:
    """Tests de la cohérence de la base de règles"""

    def test_base_vide_refusee(self):
        with pytest.raises(RuleBaseError):
            one_rule_base()

    def test_terme_inconnu(self):
        with pytest.raises(RuleBaseError, match="terme inconnu"):
            one_rule_base(Rule((("urgency", "tight"),), ("priority", "high")))

    def test_poids_hors_domaine(self):
        with pytest.raises(RuleBaseError):
            one_rule_base(Rule((("urgency", "critical"),), ("priority", "high"), 0.0))

    def test_terme_hors_domaine(self):
        with pytest.raises(RuleBaseError):
            LinguisticVariable("x", (0.0, 1.0), {"big": TriFuzzy(0, 1, 2)})

    def test_etape_job_filtre_les_regles(self, rule_base):
        job_rules = rule_base.for_stage("job")
        assert all(r.stage == "job" for r in job_rules.rules)
        assert len(job_rules.rules) < len(rule_base.rules)
        assert rule_base.for_stage("resource") is rule_base


class TestInfer:
    """Tests de l'inférence floue"""

    def test_declenchement_complet_reproduit_le_terme(self):
        rb = one_rule_base(Rule((("urgency", "critical"),), ("priority", "high")))
        score = infer(rb, {"urgency": -20})
        assert (score.a, score.m, score.b) == pytest.approx((0, 1, 1))
        assert defuzz_centroid(score) == pytest.approx(2 / 3)

    def test_aucune_regle_declenchee(self):
        rb = one_rule_base(Rule((("urgency", "relaxed"),), ("priority", "low")))
        assert infer(rb, {"urgency": -10}) == ZERO

    def test_entree_hors_domaine_ecretee(self):
        rb = one_rule_base(Rule((("urgency", "critical"),), ("priority", "high")))
        assert infer(rb, {"urgency": -500}) == infer(rb, {"urgency": -20})

    def test_entree_manquante(self):
        rb = one_rule_base(Rule((("urgency", "critical"),), ("priority", "high")))
        with pytest.raises(RuleBaseError, match="manquantes"):
            infer(rb, {})

    def test_deux_regles_contre_l_oracle(self):
        rb = one_rule_base(
            Rule((("urgency", "critical"),), ("priority", "low"), 0.5),
            Rule((("urgency", "critical"),), ("priority", "high"), 1.0),
        )
        inputs = {"urgency": -20}
        assert defuzz_centroid(infer(rb, inputs)) == pytest.approx(mamdani_oracle(rb, inputs), abs=1e-3)

    def test_singletons_reduisent_a_une_table(self):
        table = LinguisticVariable("priority", (0.0, 1.0), {
            "low": TriFuzzy.crisp(0.2), "high": TriFuzzy.crisp(0.9),
        })
        code = LinguisticVariable("code", (0.0, 3.0), {
            "one": TriFuzzy.crisp(1), "two": TriFuzzy.crisp(2),
        })
        rb = RuleBase({"code": code, "priority": table}, "priority", (
            Rule((("code", "one"),), ("priority", "low")),
            Rule((("code", "two"),), ("priority", "high")),
        ))
        assert infer(rb, {"code": 1}) == TriFuzzy.crisp(0.2)
        assert infer(rb, {"code": 2}) == TriFuzzy.crisp(0.9)
        assert infer(rb, {"code": 1.5}) == ZERO

    @pytest.mark.parametrize("seed", range(200))
    def test_accord_avec_l_oracle_mamdani(self, seed):
        rng = np.random.default_rng(seed)
        rb = random_rule_base(rng)
        inputs = {"x": float(rng.uniform(0, 10)), "y": float(rng.uniform(0, 10))}
        score = infer(rb, inputs)
        assert 0.0 <= score.a <= score.m <= score.b <= 1.0
        assert defuzz_centroid(score) == pytest.approx(mamdani_oracle(rb, inputs), abs=1e-3)

    @pytest.mark.parametrize("lo, c, hi", [(0, 0.5, 1), (0, 0.1, 1), (0, 0.9, 1), (0.3, 0.3, 0.3)])
    def test_triangle_conserve_le_centroide(self, lo, c, hi):
        triangle = centroid_triangle(lo, c, hi)
        assert defuzz_centroid(triangle) == pytest.approx(c)
        assert lo <= triangle.a and triangle.b <= hi


class TestMonotonie:
    """Base livrée : une marge plus faible ne diminue jamais le score."""

    def test_grille_urgence_importance_attente(self, rule_base):
        job_rules = rule_base.for_stage("job")
        for importance in np.linspace(0, 1, 10):
            for waiting in np.linspace(0, 20, 10):
                scores = [
                    defuzz_centroid(infer(job_rules, {
                        "urgency": u, "job_importance": importance, "waiting_time": waiting,
                    }))
                    for u in np.linspace(-20, 40, 10)
                ]
                assert all(later <= earlier + 1e-12 for earlier, later in zip(scores, scores[1:]))


class TestCriteria:
    """Tests du calcul des critères"""

    def test_urgence_depuis_le_debut_au_plus_tard(self):
        inst = build([job("J1", 10, ([2, 3, 4], ["R1"]), importance=0.9)], [resource("R1")])
        criteria = compute_criteria("J1-A1", inst, backward_pass(inst), Schedule(), now=0.0)
        assert criteria.urgency == pytest.approx(7)
        assert criteria.job_importance == 0.9
        assert criteria.waiting_time == 0.0

    def test_urgence_negative_en_retard(self):
        inst = build([job("J1", 5, (2, ["R1"]))], [resource("R1")])
        criteria = compute_criteria("J1-A1", inst, backward_pass(inst), Schedule(), now=10.0)
        assert criteria.urgency == pytest.approx(-7)

    def test_temps_d_attente(self):
        inst = build([job("J1", 50, (2, ["R1"]))], [resource("R1")])
        schedule = Schedule(first_selected={"J1-A1": 2.0})
        criteria = compute_criteria("J1-A1", inst, backward_pass(inst), schedule, now=6.0)
        assert criteria.waiting_time == 4.0

    def test_adequation_et_poids_par_ressource(self):
        inst = build(
            [job("J1", 50, (4, ["R1", "R2"], {"R2": 2}))],
            [resource("R1", weight=0.2), resource("R2", weight=0.8)],
        )
        arrangement = backward_pass(inst)
        slow = compute_criteria("J1-A1", inst, arrangement, Schedule(), 0.0, resource_id="R1")
        fast = compute_criteria("J1-A1", inst, arrangement, Schedule(), 0.0, resource_id="R2")
        level = compute_criteria("J1-A1", inst, arrangement, Schedule(), 0.0)
        assert (slow.resource_fit, fast.resource_fit) == (0.5, 1.0)
        assert (slow.strategic_weight, fast.strategic_weight) == (0.2, 0.8)
        assert (level.resource_fit, level.strategic_weight) == (1.0, 0.8)


class TestPrioritizeJobs:
    """Tests de la priorisation des tâches"""

    def test_tache_importante_prioritaire(self, rule_base):
        inst = build(
            [job("J1", 3, (3, ["R1"]), importance=0.1), job("J2", 3, (3, ["R1"]), importance=0.9)],
            [resource("R1")],
        )
        ranked = prioritize_jobs(["J1-A1", "J2-A1"], inst, backward_pass(inst), Schedule(), rule_base, 0.0)
        assert [aid for aid, _ in ranked] == ["J2-A1", "J1-A1"]
        assert defuzz_centroid(ranked[0][1]) > defuzz_centroid(ranked[1][1])

    def test_entree_vide(self, rule_base, small_instance):
        assert prioritize_jobs([], small_instance, backward_pass(small_instance), Schedule(), rule_base, 0.0) == []

    def test_criteres_identiques_meme_palier(self, rule_base):
        inst = build([job("J1", 8, (3, ["R1"])), job("J2", 8, (3, ["R1"]))], [resource("R1")])
        ranked = prioritize_jobs(["J1-A1", "J2-A1"], inst, backward_pass(inst), Schedule(), rule_base, 0.0)
        assert ranked[0][1] == ranked[1][1]
        assert [aid for aid, _ in ranked] == ["J1-A1", "J2-A1"]
        assert priority_tiers(ranked, 1e-9) == {"J1-A1": 0, "J2-A1": 0}
