import json
import math

import pytest

import subpress as sp

SHEAR = sp.MatrixSet([[[1, 1], [0, 1]], [[1, 0], [1, 1]]])
LOG_PHI = math.log((1 + math.sqrt(5)) / 2)
GOLDEN = sp.Sft.from_matrix([[1, 1], [1, 0]])


def test_symbolic():
    full = sp.Sft.full(2)
    assert full.k == 2 and full.is_full
    assert sp.enumerate_words(2, GOLDEN) == ["00", "01", "10"]
    assert sp.count_words(10, GOLDEN) == 144
    assert sp.topological_entropy(GOLDEN) == pytest.approx(LOG_PHI, abs=1e-12)
    word, start = sp.close_word("0110", GOLDEN)
    assert sp.is_cyclically_admissible(word, GOLDEN)
    assert 0 <= start < 4


def test_pressure_and_gibbs():
    additive = sp.Potential.additive([math.log(2), math.log(3)])
    (p,) = sp.pressure_upper(6, [1.0], sp.Sft.full(2), additive)
    assert p == pytest.approx(math.log(5), abs=1e-12)
    lower, witness = sp.pressure_lower_periodic(2, 1.0, sp.Sft.full(2), SHEAR)
    assert lower == pytest.approx(LOG_PHI, abs=1e-10) and witness == "01"
    g = sp.gibbs_weights(6, 1.0, sp.Sft.full(2), SHEAR)
    assert sum(g["probabilities"].values()) == pytest.approx(1.0, abs=1e-12)
    assert g["chi"] > 0


def test_bracket_and_verify():
    b = sp.bracket_search(sp.Sft.full(2), SHEAR)
    assert b["gap"] <= 1e-9
    assert b["witness"] == "01"
    assert sp.verify_witness(b["witness"], sp.Sft.full(2), SHEAR) == pytest.approx(b["lower"], abs=1e-12)


def test_montecarlo_deterministic():
    diag = sp.MatrixSet([[[2, 0], [0, 1]], [[1, 0], [0, 3]]])
    a = sp.furstenberg_estimate(diag, sp.Sft.full(2), [0.5, 0.5], n=200, samples=100, seed=3)
    b = sp.furstenberg_estimate(diag, sp.Sft.full(2), [0.5, 0.5], n=200, samples=100, seed=3, threads=2)
    assert a == b
    with pytest.raises(sp.UnsupportedSft):
        sp.furstenberg_estimate(diag, GOLDEN, [0.5, 0.5], n=10, samples=10)


def test_closing():
    r = sp.closing_experiment(SHEAR, GOLDEN, [0.5, 0.5], 2000, seed=7)
    assert abs(r["difference"]) < 0.1


def test_errors():
    with pytest.raises(ValueError):
        sp.MatrixSet([[[1, 0], [0, 0]]])
    with pytest.raises(sp.NoClosure):
        sp.close_word("11", GOLDEN)


def test_run_writes_output(tmp_path):
    cfg = {"system": {"full": 2}, "matrices": [[[1, 1], [0, 1]], [[1, 0], [1, 1]]], "levels": [1, 2], "threads": 1}
    assert sp.run("pressure", json.dumps(cfg), str(tmp_path)) == 0
    assert any(tmp_path.iterdir())
