"""
tests/test_retrograde.py
─────────────────────────
Tests de la passe rétrograde floue et de l'ordre relatif.
"""

import numpy as np
import pytest

from src.baseline.oracles import cpm_backward
from src.data.generator import generate_instance
from src.fuzzy.core import TriFuzzy, defuzz_centroid
from src.scheduling.retrograde import backward_pass, effective_duration, negative_latest_starts, relative_order
from tests.factories import build, job, resource


class TestBackwardPass:
    """Tests de la passe rétrograde floue"""

    def test_chaine_nette(self):
        inst = build([job("J1", 10, (3, ["R1"]), (2, ["R1"]))], [resource("R1")])
        arrangement = backward_pass(inst)
        assert arrangement["J1-A2"].latest_start == TriFuzzy.crisp(8)
        assert arrangement["J1-A1"].latest_start == TriFuzzy.crisp(5)
        assert arrangement["J1-A1"].latest_finish == TriFuzzy.crisp(8)

    def test_chaine_floue_elargit_les_etalements(self):
        inst = build([job("J1", 10, ([2, 3, 4], ["R1"]))], [resource("R1")])
        assert backward_pass(inst)["J1-A1"].latest_start == TriFuzzy(6, 7, 8)

    def test_debut_negatif_conserve_et_signale(self):
        inst = build([job("J1", 5, (7, ["R1"]))], [resource("R1")])
        arrangement = backward_pass(inst)
        assert arrangement["J1-A1"].latest_start == TriFuzzy.crisp(-2)
        assert negative_latest_starts(arrangement) == ["J1-A1"]

    def test_duree_la_plus_courte_parmi_les_ressources(self):
        inst = build([job("J1", 10, (5, ["R1", "R2"], {"R2": [1, 2, 3]}))],
                     [resource("R1"), resource("R2")])
        assert effective_duration(inst, "J1-A1") == TriFuzzy(1, 2, 3)

    @pytest.mark.parametrize("seed", range(100))
    def test_egale_la_passe_classique_sur_instances_nettes(self, seed):
        rng = np.random.default_rng(seed)
        inst = generate_instance(
            jobs=int(rng.integers(1, 11)), activities=5, resources=3, seed=seed,
            crisp=True, variable_length=True,
        )
        arrangement = backward_pass(inst)
        cpm = cpm_backward(inst)
        assert set(cpm) == set(arrangement)
        for aid, latest in cpm.items():
            assert abs(defuzz_centroid(arrangement[aid].latest_start) - latest) <= 1e-9

    @pytest.mark.parametrize("seed", range(100))
    def test_etalement_croissant_en_remontant_la_chaine(self, seed):
        rng = np.random.default_rng(seed)
        inst = generate_instance(
            jobs=int(rng.integers(1, 8)), activities=5, resources=3, seed=seed,
            spread=float(rng.uniform(0.0, 0.5)), variable_length=True,
        )
        arrangement = backward_pass(inst)
        for j in inst.jobs:
            previous = j.due_date.width
            for aid in reversed(j.activity_ids):
                width = arrangement[aid].latest_start.width
                assert width >= previous - 1e-9
                previous = width


class TestRelativeOrder:
    """Tests de l'ordre relatif"""

    def test_ordre_par_debut_au_plus_tard(self):
        inst = build(
            [job("J1", 20, (3, ["R1"])), job("J2", 6, (3, ["R1"])), job("J3", 12, (3, ["R1"]))],
            [resource("R1")],
        )
        assert relative_order(backward_pass(inst), inst) == ["J2-A1", "J3-A1", "J1-A1"]

    def test_egalite_departagee_par_tache_puis_rang(self):
        inst = build(
            [job("J2", 10, (4, ["R1"])), job("J1", 10, (4, ["R1"]))],
            [resource("R1")],
        )
        assert relative_order(backward_pass(inst), inst) == ["J1-A1", "J2-A1"]

    def test_predecesseur_toujours_avant_successeur(self, small_instance):
        order = relative_order(backward_pass(small_instance), small_instance)
        assert order.index("J01-A1") < order.index("J01-A2")
        assert order.index("J02-A1") < order.index("J02-A2")
